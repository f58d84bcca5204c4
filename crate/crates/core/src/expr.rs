//! Sum/difference expressions over independent models.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := model
//! model   := name '(' args ')'
//! args    := number (',' number)*         for named families
//!          | weighted (',' weighted)*     for mixture
//! weighted:= number '*' model
//! ```
//!
//! Families: `gaussian(mean,var)`, `uniform(lo,hi)`,
//! `exponential(rate[,shift[,sign]])`, `laplace(loc,scale)`,
//! `gamma(shape,scale[,shift[,sign]])`, `mixture(w*model, ...)`. A `sign` of
//! `-1` reflects the one-sided law about its shift. Every literal is a fresh
//! independent variable, so `X - X` cannot be written.

use std::fmt;

use crate::distributions::DensityModel;
use crate::error::{Error, Result};
use crate::grid::{self, Estimate, GridDensity, Numerics};

/// Longest accepted expression in bytes.
pub const MAX_EXPRESSION_LEN: usize = 4096;
const MAX_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub negated: bool,
    pub model: DensityModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    pub terms: Vec<Term>,
}

impl Expression {
    pub fn sum(models: &[DensityModel]) -> Self {
        Expression {
            terms: models
                .iter()
                .map(|m| Term {
                    negated: false,
                    model: m.clone(),
                })
                .collect(),
        }
    }

    /// Density of the signed sum on a grid.
    pub fn grid(&self, numerics: &Numerics) -> Result<GridDensity> {
        let mut acc: Option<GridDensity> = None;
        for t in &self.terms {
            let g = grid::discretize_with(&t.model, numerics)?;
            let g = if t.negated { grid::reflect(&g) } else { g };
            acc = Some(match acc {
                None => g,
                Some(a) => grid::convolve(&a, &g)?,
            });
        }
        acc.ok_or_else(|| Error::Parse {
            pos: 0,
            msg: "empty expression".into(),
        })
    }

    pub fn entropy(&self, numerics: &Numerics) -> Result<Estimate> {
        Ok(grid::entropy(&self.grid(numerics)?))
    }

    /// Draw `n` samples of the signed sum; term `i` uses the seed
    /// `derive_seed(seed, i)`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (i, t) in self.terms.iter().enumerate() {
            let s = t.model.sample(n, derive_seed(seed, i as u64));
            let sign = if t.negated { -1.0 } else { 1.0 };
            out.iter_mut().zip(s).for_each(|(o, x)| *o += sign * x);
        }
        out
    }
}

/// Independent stream seed for item `index` under a master seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.negated) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            write!(f, "{}", t.model)?;
        }
        Ok(())
    }
}

pub fn parse_expression(input: &str) -> Result<Expression> {
    if input.len() > MAX_EXPRESSION_LEN {
        return Err(Error::Parse {
            pos: MAX_EXPRESSION_LEN,
            msg: format!("expression longer than {MAX_EXPRESSION_LEN} bytes"),
        });
    }
    let mut p = Parser { src: input, pos: 0 };
    let mut terms = Vec::new();
    p.skip_ws();
    let mut negated = p.eat('-');
    loop {
        let model = p.model(0)?;
        terms.push(Term { negated, model });
        p.skip_ws();
        if p.eat('+') {
            negated = false;
        } else if p.eat('-') {
            negated = true;
        } else if p.at_end() {
            break;
        } else {
            return Err(p.error("expected '+', '-' or end of input"));
        }
    }
    Ok(Expression { terms })
}

/// Parse a single model literal.
pub fn parse_model(input: &str) -> Result<DensityModel> {
    let mut p = Parser { src: input, pos: 0 };
    let m = p.model(0)?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("trailing input after model"));
    }
    Ok(m)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphabetic() && c != '_')
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a distribution name"));
        }
        let start = self.pos;
        self.pos += len;
        Ok(&self.src[start..self.pos])
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() {
            let b = bytes[end];
            let sign_ok =
                (b == b'-' || b == b'+') && (end == start || matches!(bytes[end - 1], b'e' | b'E'));
            if b.is_ascii_digit() || b == b'.' || b == b'e' || b == b'E' || sign_ok {
                end += 1;
            } else {
                break;
            }
        }
        let text = &self.src[start..end];
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = end;
                Ok(v)
            }
            _ => Err(self.error(if text.is_empty() {
                "expected a number".to_string()
            } else {
                format!("invalid number `{text}`")
            })),
        }
    }

    fn numbers(&mut self) -> Result<Vec<(usize, f64)>> {
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let at = self.pos;
            out.push((at, self.number()?));
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn model(&mut self, depth: usize) -> Result<DensityModel> {
        if depth > MAX_DEPTH {
            return Err(self.error("mixtures nested too deeply"));
        }
        self.skip_ws();
        let start = self.pos;
        let name = self.ident()?.to_ascii_lowercase();
        self.expect('(')?;
        if name == "mixture" {
            return self.mixture(start, depth);
        }
        let args = self.numbers()?;
        let vals: Vec<f64> = args.iter().map(|a| a.1).collect();
        let arity_err = |want: &str| Error::Parse {
            pos: start,
            msg: format!("{name} takes {want} arguments, got {}", vals.len()),
        };
        let sign = |i: usize| -> Result<bool> {
            match vals.get(i) {
                None => Ok(false),
                Some(s) if *s == 1.0 => Ok(false),
                Some(s) if *s == -1.0 => Ok(true),
                Some(_) => Err(Error::Parse {
                    pos: args[i].0,
                    msg: "sign must be 1 or -1".into(),
                }),
            }
        };
        let at = |e: Error| match e {
            Error::InvalidParameter(msg) => Error::Parse { pos: start, msg },
            other => other,
        };
        match name.as_str() {
            "gaussian" | "normal" => match vals[..] {
                [m, v] => DensityModel::gaussian(m, v).map_err(at),
                _ => Err(arity_err("2")),
            },
            "uniform" => match vals[..] {
                [a, b] => DensityModel::uniform(a, b).map_err(at),
                _ => Err(arity_err("2")),
            },
            "laplace" => match vals[..] {
                [m, b] => DensityModel::laplace(m, b).map_err(at),
                _ => Err(arity_err("2")),
            },
            "exponential" => {
                if !(1..=3).contains(&vals.len()) {
                    return Err(arity_err("1 to 3"));
                }
                let m = DensityModel::Exponential {
                    rate: vals[0],
                    shift: vals.get(1).copied().unwrap_or(0.0),
                    reflected: sign(2)?,
                };
                m.validate().map_err(at)?;
                Ok(m)
            }
            "gamma" => {
                if !(2..=4).contains(&vals.len()) {
                    return Err(arity_err("2 to 4"));
                }
                let m = DensityModel::Gamma {
                    shape: vals[0],
                    scale: vals[1],
                    shift: vals.get(2).copied().unwrap_or(0.0),
                    reflected: sign(3)?,
                };
                m.validate().map_err(at)?;
                Ok(m)
            }
            _ => Err(Error::Parse {
                pos: start,
                msg: format!("unknown distribution `{name}`"),
            }),
        }
    }

    fn mixture(&mut self, start: usize, depth: usize) -> Result<DensityModel> {
        let mut weights = Vec::new();
        let mut components = Vec::new();
        loop {
            weights.push(self.number()?);
            self.expect('*')?;
            components.push(self.model(depth + 1)?);
            if self.eat(')') {
                break;
            }
            self.expect(',')?;
        }
        DensityModel::mixture(weights, components).map_err(|e| Error::Parse {
            pos: start,
            msg: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_sums_and_differences() {
        let e = parse_expression("gaussian(0,1) + uniform(0,1) - exponential(1)").unwrap();
        assert_eq!(e.terms.len(), 3);
        assert!(!e.terms[0].negated && !e.terms[1].negated && e.terms[2].negated);
        let e = parse_expression(" -laplace(1, 2e-1)").unwrap();
        assert!(e.terms[0].negated);
        assert_eq!(e.terms[0].model, DensityModel::laplace(1.0, 0.2).unwrap());
    }

    #[test]
    fn parses_optional_arguments_and_mixtures() {
        let m = parse_model("exponential(2, 1, -1)").unwrap();
        assert_eq!(
            m,
            DensityModel::Exponential {
                rate: 2.0,
                shift: 1.0,
                reflected: true
            }
        );
        let m = parse_model(
            "mixture(0.25*gaussian(-1,1), 0.75*mixture(0.5*uniform(0,1),0.5*gamma(2,1)))",
        )
        .unwrap();
        assert!(matches!(m, DensityModel::Mixture { .. }));
    }

    #[test]
    fn reports_positions() {
        let pos = |s: &str| match parse_expression(s) {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("{other:?}"),
        };
        assert_eq!(pos("gaussian(0,1) * uniform(0,1)"), 14);
        assert_eq!(pos("gaussian(0,)"), 11);
        assert_eq!(pos("cauchy(0,1)"), 0);
        assert_eq!(pos("uniform(1,0)"), 0);
        assert_eq!(pos("exponential(1,0,2)"), 16);
        assert_eq!(pos(""), 0);
        assert_eq!(pos("gaussian(0,1) +"), 15);
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "gaussian(0,1) + uniform(0,1) - exponential(1)",
            "-gamma(2,1,0.5,-1) + mixture(0.3*gaussian(-2,0.5),0.7*laplace(1,1))",
        ] {
            let e = parse_expression(s).unwrap();
            assert_eq!(parse_expression(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn grid_entropies() {
        let n = Numerics::default();
        let h = parse_expression("uniform(0,1) + uniform(0,1)")
            .unwrap()
            .entropy(&n)
            .unwrap();
        assert!((h.value - 0.5).abs() < 1e-5 && h.err < 1e-5, "{h:?}");
        let h = parse_expression("exponential(1) - exponential(1)")
            .unwrap()
            .entropy(&n)
            .unwrap();
        assert!(
            (h.value - 1.0 - std::f64::consts::LN_2).abs() < 1e-5 && h.err < 1e-5,
            "{h:?}"
        );
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: Vec<u64> = (0..100).map(|i| derive_seed(7, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
    }

    proptest! {
        #[test]
        fn parser_never_panics(s in "\\PC{0,64}") {
            let _ = parse_expression(&s);
        }

        #[test]
        fn gaussian_literals_round_trip(m in -1e3f64..1e3, v in 1e-3f64..1e3) {
            let e = parse_expression(&format!("gaussian({m},{v})")).unwrap();
            prop_assert_eq!(&e.terms[0].model, &DensityModel::gaussian(m, v).unwrap());
        }
    }
}
