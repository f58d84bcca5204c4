//! Monotone piecewise-cubic Hermite interpolation on a uniform grid
//! (Fritsch–Carlson slopes). Never overshoots the data, so nonnegative or
//! monotone inputs stay that way.

pub(crate) struct Pchip<'a> {
    origin: f64,
    step: f64,
    y: &'a [f64],
    slopes: Vec<f64>,
}

impl<'a> Pchip<'a> {
    pub(crate) fn new(origin: f64, step: f64, y: &'a [f64]) -> Self {
        let n = y.len();
        let mut slopes = vec![0.0; n];
        if n >= 2 {
            let delta: Vec<f64> = y.windows(2).map(|w| (w[1] - w[0]) / step).collect();
            for k in 1..n - 1 {
                let (a, b) = (delta[k - 1], delta[k]);
                if a * b > 0.0 {
                    slopes[k] = 2.0 / (1.0 / a + 1.0 / b);
                }
            }
            slopes[0] = end_slope(delta[0], delta.get(1).copied().unwrap_or(delta[0]));
            slopes[n - 1] = end_slope(
                delta[n - 2],
                if n >= 3 { delta[n - 3] } else { delta[n - 2] },
            );
        }
        Pchip {
            origin,
            step,
            y,
            slopes,
        }
    }

    /// Interpolated value; clamps to the end values outside the data range.
    pub(crate) fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let s = (x - self.origin) / self.step;
        if s <= 0.0 {
            return self.y[0];
        }
        if s >= (n - 1) as f64 {
            return self.y[n - 1];
        }
        let k = (s.floor() as usize).min(n - 2);
        let t = s - k as f64;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.y[k]
            + h10 * self.step * self.slopes[k]
            + h01 * self.y[k + 1]
            + h11 * self.step * self.slopes[k + 1]
    }
}

fn end_slope(d0: f64, d1: f64) -> f64 {
    let d = 0.5 * (3.0 * d0 - d1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_data_and_lines() {
        let y = [0.0, 1.0, 2.0, 3.0];
        let p = Pchip::new(0.0, 0.5, &y);
        assert_eq!(p.eval(0.5), 1.0);
        assert!((p.eval(0.75) - 1.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn nonnegative_data_gives_nonnegative_interpolant(
            y in proptest::collection::vec(0.0f64..10.0, 3..40),
            t in 0.0f64..1.0,
        ) {
            let p = Pchip::new(-1.0, 0.25, &y);
            let x = -1.0 + t * 0.25 * (y.len() - 1) as f64;
            prop_assert!(p.eval(x) >= -1e-12);
        }

        #[test]
        fn monotone_data_gives_monotone_interpolant(
            inc in proptest::collection::vec(0.0f64..3.0, 3..30),
        ) {
            let y: Vec<f64> = inc.iter().scan(0.0, |s, d| { *s += d; Some(*s) }).collect();
            let p = Pchip::new(0.0, 1.0, &y);
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=200 {
                let x = i as f64 / 200.0 * (y.len() - 1) as f64;
                let v = p.eval(x);
                prop_assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
}
