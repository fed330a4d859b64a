//! Randomised invariants of series, families, functionals and reports.

use std::f64::consts::PI;

use proptest::prelude::*;

use polybohr::families::{eval_schwarz, ProductFunctionSpec, SchwarzMapSpec, SeededRng};
use polybohr::functionals::{functional_a, functional_b, TailMode};
use polybohr::series::{
    enumerate_multiindices, multiindex_count, multinomial_f64, Complex, MultiIndex, Point, TruncatedSeries,
};
use polybohr::{EvalReport, Verdict};

fn point(dim: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec((0.0..0.95f64, 0.0..2.0 * PI), dim)
        .prop_map(|cs| Point::new(cs.into_iter().map(|(r, t)| Complex::from_polar(r, t)).collect()).unwrap())
}

fn sparse_series(dim: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((prop::collection::vec(0u32..4, dim), -1.0..1.0f64, -1.0..1.0f64), 0..8).prop_map(
        move |terms| {
            let mut f = TruncatedSeries::zero(dim, (dim as u32) * 3).unwrap();
            for (e, re, im) in terms {
                f.insert(MultiIndex::new(e).unwrap(), Complex::new(re, im)).unwrap();
            }
            f
        },
    )
}

fn series_and_point() -> impl Strategy<Value = (TruncatedSeries, TruncatedSeries, Point)> {
    (1usize..=3).prop_flat_map(|d| (sparse_series(d), sparse_series(d), point(d)))
}

fn magnitude(f: &TruncatedSeries, z: &Point) -> f64 {
    f.majorant_sum(z.inf_norm()).unwrap().value
}

#[test]
fn enumeration_complete_and_multinomial_identity() {
    for n in 1..=4usize {
        for k in 0..=8u32 {
            let all = enumerate_multiindices(n, k).unwrap();
            assert_eq!(all.len() as u64, multiindex_count(n, k).unwrap());
            let mut dedup = all.clone();
            dedup.sort_by(|a, b| a.exponents().cmp(b.exponents()));
            dedup.dedup();
            assert_eq!(dedup.len(), all.len(), "duplicates at n={n} k={k}");
            assert!(all.iter().all(|a| a.degree() == k && a.dim() == n));
            let total: f64 = all.iter().map(multinomial_f64).sum();
            assert_eq!(total, (n as f64).powi(k as i32), "n={n} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eval_is_linear((f, g, z) in series_and_point()) {
        let sum = f.add(&g).unwrap().eval(&z).unwrap();
        let parts = f.eval(&z).unwrap() + g.eval(&z).unwrap();
        let scale = magnitude(&f, &z) + magnitude(&g, &z) + 1e-300;
        prop_assert!((sum - parts).norm() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn euler_derivative_is_radial_derivative((f, _g, z) in series_and_point()) {
        let h = 1e-5;
        let at = |s: f64| {
            let scaled = Point::new(z.coords().iter().map(|c| c * s).collect()).unwrap();
            f.eval(&scaled).unwrap()
        };
        let fd = (at(1.0 + h) - at(1.0 - h)) / (2.0 * h);
        let d = f.euler_derivative().eval(&z).unwrap();
        prop_assert!((d - fd).norm() <= 1e-6, "{d} vs {fd}");
    }

    #[test]
    fn majorant_dominates_modulus((f, _g, z) in series_and_point()) {
        let rep = f.majorant_sum(z.inf_norm()).unwrap();
        prop_assert!(f.eval(&z).unwrap().norm() <= rep.value * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn majorant_monotone_in_r(seed in any::<u64>(), r1 in 0.0..0.9f64, r2 in 0.0..0.9f64) {
        let f = ProductFunctionSpec::sample(seed, 2, 2).unwrap().series(10).unwrap();
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let a = functional_a(&f, lo).unwrap();
        let b = functional_a(&f, hi).unwrap();
        prop_assert!(a.value <= b.value && a.upper() <= b.upper());
    }

    #[test]
    fn from_degree_dominates_multiples_of(seed in any::<u64>(), big_n in 1u32..5, m in 1u32..4, z in point(2)) {
        let f = ProductFunctionSpec::sample(seed, 2, 2).unwrap().series(12).unwrap();
        let mut rng = SeededRng::new(seed);
        let omega = SchwarzMapSpec::sample(&mut rng, 2, m, 1).unwrap();
        let from = functional_b(&f, &omega, &z, TailMode::FromDegree(big_n), 1).unwrap();
        let mult = functional_b(&f, &omega, &z, TailMode::MultiplesOf(big_n), 1).unwrap();
        prop_assert!(mult.value <= from.value + 1e-15);
        prop_assert!(mult.upper() <= from.upper() + 1e-15);
    }

    #[test]
    fn holds_is_stable_as_k_grows(seed in any::<u64>(), r in 0.05..0.3f64) {
        let spec = ProductFunctionSpec::sample(seed, 2, 2).unwrap();
        let small = functional_a(&spec.series(8).unwrap(), r).unwrap();
        let large = functional_a(&spec.series(24).unwrap(), r).unwrap();
        prop_assert!(large.upper() <= small.upper() + 1e-12);
        if small.verdict == Verdict::Holds {
            prop_assert_eq!(large.verdict, Verdict::Holds);
        }
    }

    #[test]
    fn modulus_bound_from_constant_term(seed in any::<u64>(), z in point(3)) {
        let spec = ProductFunctionSpec::sample(seed, 3, 2).unwrap();
        let a0 = spec.eval(&Point::origin(3).unwrap()).unwrap().norm();
        let r = z.inf_norm();
        let bound = (a0 + r) / (1.0 + a0 * r);
        prop_assert!(spec.eval(&z).unwrap().norm() <= bound + 1e-12);
    }

    #[test]
    fn schwarz_maps_contract(seed in any::<u64>(), m in 1u32..5, z in point(2)) {
        let mut rng = SeededRng::new(seed);
        let omega = SchwarzMapSpec::sample(&mut rng, 2, m, 2).unwrap();
        let w = eval_schwarz(&omega, &z).unwrap();
        for (wi, zi) in w.coords().iter().zip(z.coords()) {
            prop_assert!(wi.norm() <= zi.norm().powi(m as i32) + 1e-15);
        }
    }

    #[test]
    fn verdict_follows_rule(value in 0.0..2.0f64, tail in 0.0..0.5f64, frac in 0.0..1.0f64) {
        let err = tail * frac;
        let rep = EvalReport::new(value, tail, err, 1.0);
        let want = if value + tail <= 1.0 {
            Verdict::Holds
        } else if value - err > 1.0 {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        };
        prop_assert_eq!(rep.verdict, want);
    }
}
