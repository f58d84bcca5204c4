use std::f64::consts::PI;

use proptest::prelude::*;
use sumset_core::distributions::{DensityModel, LN_2PI_E};
use sumset_core::expr::{parse_expression, Expression};
use sumset_core::grid::{self, Numerics};

fn numerics() -> Numerics {
    Numerics::default()
}

fn grid_entropy(m: &DensityModel) -> f64 {
    grid::entropy(&grid::discretize_with(m, &numerics()).unwrap()).value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grid_matches_closed_forms(
        kind in 0..4usize,
        loc in -10.0..10.0f64,
        scale in 0.05..20.0f64,
    ) {
        let m = match kind {
            0 => DensityModel::gaussian(loc, scale).unwrap(),
            1 => DensityModel::uniform(loc, loc + scale).unwrap(),
            2 => DensityModel::exponential(1.0 / scale).unwrap(),
            _ => DensityModel::laplace(loc, scale).unwrap(),
        };
        let want = match kind {
            0 => 0.5 * (LN_2PI_E + scale.ln()),
            1 => scale.ln(),
            2 => 1.0 + scale.ln(),
            _ => 1.0 + (2.0 * scale).ln(),
        };
        let est = grid::entropy(&grid::discretize_with(&m, &numerics()).unwrap());
        prop_assert!((est.value - want).abs() < 1e-4, "{m}: {} vs {want}", est.value);
        prop_assert!(est.err >= 0.0 && est.err < 1e-3);
    }

    #[test]
    fn entropy_scales_with_log_factor(a in prop_oneof![-8.0..-0.125f64, 0.125..8.0f64], b in -5.0..5.0f64) {
        let base = DensityModel::mixture(
            vec![0.3, 0.7],
            vec![DensityModel::gaussian(-1.0, 0.5).unwrap(), DensityModel::gaussian(2.0, 1.5).unwrap()],
        ).unwrap();
        let h = grid_entropy(&base);
        let ha = grid_entropy(&base.affine(a, b).unwrap());
        prop_assert!((ha - h - a.abs().ln()).abs() < 1e-5, "{ha} vs {h} + ln|{a}|");
    }

    #[test]
    fn gaussian_sums_match_closed_form(v1 in 0.1..10.0f64, v2 in 0.1..10.0f64, m1 in -3.0..3.0f64, negate in any::<bool>()) {
        let x = DensityModel::gaussian(m1, v1).unwrap();
        let y = DensityModel::gaussian(0.0, v2).unwrap();
        let mut e = Expression::sum(&[x, y]);
        e.terms[1].negated = negate;
        let h = e.entropy(&numerics()).unwrap();
        let want = 0.5 * (LN_2PI_E + (v1 + v2).ln());
        prop_assert!((h.value - want).abs() < 1e-5, "{} vs {want}", h.value);
    }

    #[test]
    fn convolution_preserves_mass_and_adds_moments(
        l1 in -3.0..3.0f64, w1 in 0.2..4.0f64, r in 0.3..3.0f64, s in 0.2..2.0f64,
    ) {
        let n = numerics();
        let f = grid::discretize_with(&DensityModel::uniform(l1, l1 + w1).unwrap(), &n).unwrap();
        let g = grid::discretize_with(&DensityModel::exponential(r).unwrap(), &n).unwrap();
        let h = grid::discretize_with(&DensityModel::laplace(1.0, s).unwrap(), &n).unwrap();
        let fg = grid::convolve(&grid::convolve(&f, &g).unwrap(), &grid::reflect(&h)).unwrap();
        prop_assert!((fg.mass() - 1.0).abs() < 1e-9);
        let (mf, mg, mh, m) = (f.moments(), g.moments(), h.moments(), fg.moments());
        prop_assert!((m.mean - (mf.mean + mg.mean - mh.mean)).abs() < 1e-3 * (1.0 + m.variance.sqrt()));
        prop_assert!(((m.variance - (mf.variance + mg.variance + mh.variance)) / m.variance).abs() < 1e-3);
    }
}

#[test]
fn known_sums_and_differences() {
    let n = numerics();
    let cases = [
        ("uniform(0,1) + uniform(0,1)", 0.5),
        ("uniform(0,1) - uniform(0,1)", 0.5),
        ("exponential(1) - exponential(1)", 1.0 + 2f64.ln()),
        (
            "exponential(2) - exponential(2)",
            1.0 + 2f64.ln() - 2f64.ln(),
        ),
        (
            "exponential(1) + exponential(1)",
            1.0 + 0.577_215_664_901_532_9,
        ),
    ];
    for (expr, want) in cases {
        let h = parse_expression(expr).unwrap().entropy(&n).unwrap();
        assert!(
            (h.value - want).abs() < 1e-4,
            "{expr}: {} vs {want}",
            h.value
        );
    }
}

#[test]
fn relative_entropy_to_moment_matched_gaussian() {
    let n = numerics();
    let cases = [
        (
            DensityModel::uniform(0.0, 1.0).unwrap(),
            0.5 * (2.0 * PI * std::f64::consts::E / 12.0).ln(),
        ),
        (
            DensityModel::exponential(1.0).unwrap(),
            0.5 * LN_2PI_E - 1.0,
        ),
        (DensityModel::gaussian(3.0, 2.0).unwrap(), 0.0),
    ];
    for (m, want) in cases {
        let f = grid::discretize_with(&m, &n).unwrap();
        let fit = grid::gaussian_fit(&f);
        let d = grid::kl_divergence(&f, &fit).unwrap();
        assert!((d.value - want).abs() < 1e-4, "{m}: {} vs {want}", d.value);
        let h = grid::entropy(&f).value;
        let hfit = fit.closed_form_entropy().unwrap();
        assert!((d.value - (hfit - h)).abs() < 1e-6);
        let l1 = grid::l1_distance(&f, &fit);
        assert!(l1 * l1 / 2.0 <= d.value + 1e-9);
    }
    assert!((0.5 * (2.0 * PI * std::f64::consts::E / 12.0).ln() - 0.1765).abs() < 5e-5);
}

#[test]
fn relative_entropy_against_thinner_support_fails() {
    let f = grid::discretize_with(&DensityModel::uniform(0.0, 2.0).unwrap(), &numerics()).unwrap();
    assert!(grid::kl_divergence(&f, &DensityModel::uniform(0.0, 1.0).unwrap()).is_err());
}

#[test]
fn numerics_validation() {
    for (count, window) in [
        (1000, 12.0),
        (1 << 7, 12.0),
        (1 << 22, 12.0),
        (1 << 12, 0.5),
        (1 << 12, f64::NAN),
    ] {
        let n = Numerics {
            grid_count: count,
            window_sigmas: window,
        };
        assert!(n.validate().is_err(), "{count} {window}");
    }
    assert!(numerics().validate().is_ok());
}

#[test]
fn coarser_grids_stay_close() {
    let m = DensityModel::gamma(2.0, 1.0).unwrap();
    let want = m.closed_form_entropy().unwrap();
    for count in [1 << 10, 1 << 12, 1 << 16] {
        let n = Numerics {
            grid_count: count,
            ..numerics()
        };
        let h = grid::entropy(&grid::discretize_with(&m, &n).unwrap());
        assert!((h.value - want).abs() < 1e-3, "{count}: {}", h.value);
    }
}
