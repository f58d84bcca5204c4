use std::f64::consts::LN_2;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sumset_core::discrete::{
    check_covering_lemma, check_discrete_registry, check_functional_submodularity, covering_joint,
    diff_pmf, discrete_entropy, find_discrete_check, random_pmfs, run_covering,
    run_discrete_registry, run_submodularity, shannon_entropy, sum_pmf, DiscreteJoint, DiscretePmf,
    FunctionalInstance, DISCRETE_REGISTRY,
};
use sumset_core::report::Verdict;

fn pmf_strategy(order: usize) -> impl Strategy<Value = DiscretePmf> {
    proptest::collection::vec(0.0..1.0f64, order).prop_filter_map("positive mass", |raw| {
        let total: f64 = raw.iter().sum();
        (total > 1e-3).then(|| DiscretePmf::new(raw.iter().map(|x| x / total).collect()).unwrap())
    })
}

fn brute_sum(p: &DiscretePmf, q: &DiscretePmf, sign: i64) -> Vec<f64> {
    let n = p.order() as i64;
    let mut out = vec![0.0; n as usize];
    for (a, pa) in p.probs().iter().enumerate() {
        for (b, qb) in q.probs().iter().enumerate() {
            out[(a as i64 + sign * b as i64).rem_euclid(n) as usize] += pa * qb;
        }
    }
    out
}

#[test]
fn covering_identity_on_z5() {
    let corpus = random_pmfs(5, 100, 5).unwrap();
    let reports = run_covering(&corpus);
    assert_eq!(reports.len(), 100);
    for r in &reports {
        assert!(r.slack.unwrap().abs() <= 1e-12, "{r:?}");
        assert_eq!(r.verdict, Verdict::Holds);
    }
}

#[test]
fn functional_submodularity_on_z4() {
    let reports = run_submodularity(11, 1000, 4).unwrap();
    assert_eq!(reports.len(), 1000);
    for r in &reports {
        assert!(r.slack.unwrap() >= -1e-12, "{r:?}");
        assert_ne!(r.verdict, Verdict::Violated);
    }
}

#[test]
fn registry_on_z6_has_no_violations() {
    let corpus = random_pmfs(6, 500, 6).unwrap();
    let defs: Vec<_> = DISCRETE_REGISTRY.iter().collect();
    let reports = run_discrete_registry(&defs, &corpus);
    assert!(reports
        .iter()
        .all(|r| r.verdict != Verdict::Violated && r.verdict != Verdict::Skipped));
    let per_pmf: usize = DISCRETE_REGISTRY.iter().map(|d| d.params.len()).sum();
    assert_eq!(reports.len(), per_pmf * 500);
}

#[test]
fn uniform_and_point_mass_examples() {
    let u = DiscretePmf::uniform(5).unwrap();
    let sd = find_discrete_check("discrete.sum_difference").unwrap();
    let r = check_discrete_registry(sd, &[u.clone(), u.clone()], 0).unwrap();
    assert!((r.lhs.unwrap() - 5f64.ln()).abs() < 1e-12);
    assert!(r.slack.unwrap().abs() < 1e-12);

    let half = DiscretePmf::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap();
    let r = check_discrete_registry(sd, &[half.clone(), half], 0).unwrap();
    assert!((r.slack.unwrap() - LN_2).abs() < 1e-12);

    let delta = DiscretePmf::point_mass(5, 0).unwrap();
    let c = check_covering_lemma(&delta, &u).unwrap();
    assert!(c.lhs.unwrap().abs() < 1e-12 && c.rhs.unwrap().abs() < 1e-12);
}

#[test]
fn constructors_validate() {
    assert!(DiscretePmf::new(vec![1.0]).is_err());
    assert!(DiscretePmf::new(vec![0.5, 0.6]).is_err());
    assert!(DiscretePmf::new(vec![1.5, -0.5]).is_err());
    assert!(DiscretePmf::uniform(65).is_err());
    assert!(DiscretePmf::point_mass(3, 3).is_err());
    assert!(DiscreteJoint::new(vec![2, 2], vec![0.25; 3]).is_err());
    let p = DiscretePmf::uniform(3).unwrap();
    let q = DiscretePmf::uniform(4).unwrap();
    assert!(sum_pmf(&p, &q).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut inst = FunctionalInstance::random(4, 2, &mut rng).unwrap();
    assert!(check_functional_submodularity(&inst).is_ok());
    inst.g = inst.f.iter().map(|&v| 1 - v).collect();
    assert!(check_functional_submodularity(&inst).is_err());
}

#[test]
fn seeded_corpora_repeat() {
    assert_eq!(
        random_pmfs(3, 20, 6).unwrap(),
        random_pmfs(3, 20, 6).unwrap()
    );
    assert_ne!(
        random_pmfs(3, 20, 6).unwrap(),
        random_pmfs(4, 20, 6).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn convolution_matches_brute_force(p in pmf_strategy(7), q in pmf_strategy(7)) {
        let s = sum_pmf(&p, &q).unwrap();
        let d = diff_pmf(&p, &q).unwrap();
        for (a, b) in s.probs().iter().zip(brute_sum(&p, &q, 1)) {
            prop_assert!((a - b).abs() < 1e-14);
        }
        for (a, b) in d.probs().iter().zip(brute_sum(&p, &q, -1)) {
            prop_assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn sums_do_not_lose_entropy(p in pmf_strategy(6), q in pmf_strategy(6)) {
        let h = sum_pmf(&p, &q).unwrap().entropy();
        prop_assert!(h >= p.entropy().max(q.entropy()) - 1e-12);
        prop_assert!(h <= p.entropy() + q.entropy() + 1e-12);
        prop_assert!(h <= (6f64).ln() + 1e-12);
        prop_assert!((diff_pmf(&p, &q).unwrap().entropy() - sum_pmf(&p, &q.negate()).unwrap().entropy()).abs() < 1e-12);
    }

    #[test]
    fn product_entropy_is_additive(p in pmf_strategy(3), q in pmf_strategy(4), r in pmf_strategy(2)) {
        let j = DiscreteJoint::product(&[&p, &q, &r]).unwrap();
        let all = discrete_entropy(&j, &[0, 1, 2]).unwrap();
        prop_assert!((all - (p.entropy() + q.entropy() + r.entropy())).abs() < 1e-12);
        let m = j.marginal(&[1]).unwrap();
        prop_assert!((shannon_entropy(&m) - q.entropy()).abs() < 1e-12);
    }

    #[test]
    fn covering_joint_is_consistent(p in pmf_strategy(5), q in pmf_strategy(5)) {
        let j = covering_joint(&p, &q).unwrap();
        prop_assert_eq!(j.dims().len(), 4);
        prop_assert!((j.table().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let r = check_covering_lemma(&p, &q).unwrap();
        prop_assert!(r.slack.unwrap().abs() <= 1e-12);
    }

    #[test]
    fn registry_holds_for_random_triples(p in pmf_strategy(5), q in pmf_strategy(5), r in pmf_strategy(5)) {
        let pool = [p, q, r];
        for def in DISCRETE_REGISTRY {
            for &n in def.params {
                let pmfs: Vec<DiscretePmf> = (0..def.arity(n)).map(|i| pool[i % 3].clone()).collect();
                let rep = check_discrete_registry(def, &pmfs, n).unwrap();
                prop_assert!(rep.verdict != Verdict::Violated, "{rep:?}");
            }
        }
    }
}
