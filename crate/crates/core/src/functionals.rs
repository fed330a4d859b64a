//! Bohr-type functionals evaluated on truncated series.
//!
//! With `r = ‖z‖_∞` and `M_k = Σ_{|α|=k} |a_α|`:
//!
//! | functional | value |
//! |---|---|
//! | `A` | `Σ_k M_k r^k` |
//! | `B` | `|f(ω(z))|^p + Σ_{k ∈ mode} M_k r^k` |
//! | `C` | `t |f(ω(z))| + (1-t) Σ_k M_k r^k` |
//! | `D` | `|f(z)| + |Df(z)| + λ Σ_{k≥2} M_k r^k` |
//! | `E` | `t Σ_k M_k r^k + (1-t) Σ_k k Σ_{|α|=k} |a_α|² r^{2k}` |
//!
//! Every report's `tail_bound` covers the truncated degrees and the
//! two-sided error of any modulus taken from the series.

use crate::error::{invalid, BohrError, Result};
use crate::families::{eval_schwarz, SchwarzMapSpec};
use crate::report::{EvalReport, ModulusPath};
use crate::series::{Point, TruncatedSeries};

/// Which degrees enter the majorant part of a Rogosinski-type sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailMode {
    /// Every degree `k ≥ N`.
    FromDegree(u32),
    /// Degrees `N, 2N, 3N, …`.
    MultiplesOf(u32),
}

impl TailMode {
    pub fn start(self) -> u32 {
        match self {
            TailMode::FromDegree(n) | TailMode::MultiplesOf(n) => n,
        }
    }

    pub fn includes(self, k: u32) -> bool {
        match self {
            TailMode::FromDegree(n) => k >= n,
            TailMode::MultiplesOf(n) => k >= n && k.is_multiple_of(n),
        }
    }

    fn validate(self) -> Result<()> {
        if self.start() == 0 {
            return Err(invalid("tail mode needs N >= 1"));
        }
        Ok(())
    }
}

/// Modulus `|f(w)|` with its two-sided error.
struct Modulus {
    value: f64,
    error: f64,
    path: ModulusPath,
}

fn modulus(f: &TruncatedSeries, w: &Point) -> Result<Modulus> {
    let (v, error, path) = f.eval_certified(w)?;
    Ok(Modulus {
        value: v.norm(),
        error,
        path,
    })
}

/// `|f|^p` and the error it inherits from `|f| ± e`.
fn powered(m: &Modulus, p: u32) -> (f64, f64) {
    match p {
        1 => (m.value, m.error),
        _ => (
            m.value * m.value,
            2.0 * m.value * m.error + m.error * m.error,
        ),
    }
}

fn check_point(f: &TruncatedSeries, z: &Point) -> Result<f64> {
    if z.dim() != f.dim() {
        return Err(BohrError::DimensionMismatch {
            expected: f.dim(),
            found: z.dim(),
        });
    }
    let r = z.inf_norm();
    if !(r < 1.0) {
        return Err(invalid(format!("point must lie in the unit polydisc, ‖z‖∞ = {r}")));
    }
    Ok(r)
}

fn check_weight(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid(format!("weight t must lie in [0, 1], got {t}")));
    }
    Ok(())
}

fn check_power(p: u32) -> Result<()> {
    if p != 1 && p != 2 {
        return Err(invalid(format!("modulus power must be 1 or 2, got {p}")));
    }
    Ok(())
}

/// `Σ_α |a_α| r^{|α|}`.
pub fn functional_a(f: &TruncatedSeries, r: f64) -> Result<EvalReport> {
    f.majorant_sum(r)
}

/// `|f(ω(z))|^p + Σ_{k ∈ mode} M_k r^k` with `r = ‖z‖_∞`.
pub fn functional_b(
    f: &TruncatedSeries,
    omega: &SchwarzMapSpec,
    z: &Point,
    mode: TailMode,
    p: u32,
) -> Result<EvalReport> {
    mode.validate()?;
    check_power(p)?;
    let r = check_point(f, z)?;
    let w = eval_schwarz(omega, z)?;
    let m = modulus(f, &w)?;
    let (head, head_err) = powered(&m, p);
    let (sum, tail) = f.filtered_majorant(r, |k| mode.includes(k))?;
    Ok(EvalReport::new(head + sum, tail + head_err, head_err, 1.0).with_path(m.path))
}

/// `t |f(ω(z))| + (1-t) Σ_k M_k r^k`.
pub fn functional_c(
    f: &TruncatedSeries,
    omega: &SchwarzMapSpec,
    z: &Point,
    t: f64,
) -> Result<EvalReport> {
    check_weight(t)?;
    let r = check_point(f, z)?;
    let w = eval_schwarz(omega, z)?;
    let m = modulus(f, &w)?;
    let (sum, tail) = f.filtered_majorant(r, |_| true)?;
    let head_err = t * m.error;
    Ok(EvalReport::new(
        t * m.value + (1.0 - t) * sum,
        head_err + (1.0 - t) * tail,
        head_err,
        1.0,
    )
    .with_path(m.path))
}

/// `|f(z)| + |Df(z)| + λ Σ_{k≥2} M_k r^k`.
pub fn functional_d(f: &TruncatedSeries, z: &Point, lambda: f64) -> Result<EvalReport> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid(format!("lambda must be positive, got {lambda}")));
    }
    let r = check_point(f, z)?;
    let m = modulus(f, z)?;
    let df = f.euler_derivative();
    let dm = modulus(&df, z)?;
    let (sum, tail) = f.filtered_majorant(r, |k| k >= 2)?;
    let head_err = m.error + dm.error;
    let path = if m.path == ModulusPath::ClosedForm && dm.path == ModulusPath::ClosedForm {
        ModulusPath::ClosedForm
    } else {
        ModulusPath::Series
    };
    Ok(EvalReport::new(
        m.value + dm.value + lambda * sum,
        head_err + lambda * tail,
        head_err,
        1.0,
    )
    .with_path(path))
}

/// `t Σ_k M_k r^k + (1-t) Σ_k k Σ_{|α|=k} |a_α|² r^{2k}`.
pub fn functional_e(f: &TruncatedSeries, r: f64, t: f64) -> Result<EvalReport> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(invalid(format!("weight t must lie in (0, 1], got {t}")));
    }
    let major = f.majorant_sum(r)?;
    let area = f.area_sum(r)?;
    Ok(EvalReport::new(
        t * major.value + (1.0 - t) * area.value,
        t * major.tail_bound + (1.0 - t) * area.tail_bound,
        0.0,
        1.0,
    ))
}

/// Univariate `|f(z)|^p + Σ_{k≥N} |a_k| r^k`.
pub fn functional_rogosinski_uni(
    f: &TruncatedSeries,
    z: &Point,
    n_start: u32,
    p: u32,
) -> Result<EvalReport> {
    if f.dim() != 1 {
        return Err(BohrError::DimensionMismatch {
            expected: 1,
            found: f.dim(),
        });
    }
    let identity = crate::families::schwarz_power_map(1, 1)?;
    functional_b(f, &identity, z, TailMode::FromDegree(n_start), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{extremal_series, schwarz_power_map, ExtremalSpec};
    use crate::report::Verdict;
    use crate::series::{Complex, MultiIndex};

    fn extremal(a: f64, n: usize, k: u32) -> TruncatedSeries {
        extremal_series(ExtremalSpec::new(a, n).unwrap(), k).unwrap()
    }

    fn one() -> TruncatedSeries {
        TruncatedSeries::constant(1, Complex::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn a_extremal_at_one_third() {
        let rep = functional_a(&extremal(0.5, 1, 60), 1.0 / 3.0).unwrap();
        assert!((rep.value + rep.tail_bound - 0.8).abs() < 1e-12);
        assert!((rep.value - 0.8).abs() < 1e-12);
        assert_eq!(rep.verdict, Verdict::Holds);
    }

    #[test]
    fn a_extremal_violated_above_radius() {
        let rep = functional_a(&extremal(0.99, 2, 40), 1.0 / 6.0 + 0.01).unwrap();
        assert_eq!(rep.verdict, Verdict::Violated);
    }

    #[test]
    fn a_constant_one_holds() {
        for r in [0.0, 0.3, 0.9] {
            let rep = functional_a(&one(), r).unwrap();
            assert_eq!(rep.value, 1.0);
            assert_eq!(rep.verdict, Verdict::Holds);
        }
    }

    #[test]
    fn b_identity_constant_one() {
        let z = Point::from_reals(&[0.4]).unwrap();
        let rep = functional_b(&one(), &schwarz_power_map(1, 1).unwrap(), &z, TailMode::MultiplesOf(1), 1)
            .unwrap();
        assert_eq!(rep.value, 1.0);
        assert_eq!(rep.verdict, Verdict::Holds);
        assert_eq!(rep.modulus_path, Some(ModulusPath::Series));
    }

    #[test]
    fn b_univariate_extremal_violated_past_one_third() {
        let f = extremal(0.999, 1, 60);
        let z = Point::from_reals(&[-0.34]).unwrap();
        let rep = functional_b(&f, &schwarz_power_map(1, 1).unwrap(), &z, TailMode::MultiplesOf(1), 1)
            .unwrap();
        assert_eq!(rep.modulus_path, Some(ModulusPath::ClosedForm));
        assert_eq!(rep.verdict, Verdict::Violated);
    }

    #[test]
    fn b_rejects_bad_power_and_mode() {
        let z = Point::from_reals(&[0.1]).unwrap();
        let id = schwarz_power_map(1, 1).unwrap();
        assert!(functional_b(&one(), &id, &z, TailMode::FromDegree(1), 3).is_err());
        assert!(functional_b(&one(), &id, &z, TailMode::FromDegree(0), 1).is_err());
        let z2 = Point::from_reals(&[0.1, 0.1]).unwrap();
        assert!(matches!(
            functional_b(&one(), &id, &z2, TailMode::FromDegree(1), 1),
            Err(BohrError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn c_at_t_zero_is_a() {
        let f = extremal(0.7, 2, 40);
        let z = Point::from_reals(&[0.12, -0.05]).unwrap();
        let c = functional_c(&f, &schwarz_power_map(2, 1).unwrap(), &z, 0.0).unwrap();
        let a = functional_a(&f, 0.12).unwrap();
        assert_eq!(c.value, a.value);
        assert_eq!(c.tail_bound, a.tail_bound);
    }

    #[test]
    fn c_at_t_one_holds_for_bounded_f() {
        let f = extremal(0.9, 1, 40);
        let z = Point::from_reals(&[-0.6]).unwrap();
        let rep = functional_c(&f, &schwarz_power_map(1, 1).unwrap(), &z, 1.0).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds);
    }

    #[test]
    fn d_constant_is_modulus() {
        let f = TruncatedSeries::constant(2, Complex::new(0.0, -0.6)).unwrap();
        let z = Point::from_reals(&[0.2, 0.1]).unwrap();
        let rep = functional_d(&f, &z, 3.0).unwrap();
        assert!((rep.value - 0.6).abs() < 1e-15);
        assert_eq!(rep.verdict, Verdict::Holds);
        assert!(functional_d(&f, &z, 0.0).is_err());
    }

    #[test]
    fn e_monomial() {
        let f = TruncatedSeries::from_terms(1, [(MultiIndex::unit(1, 0), Complex::new(1.0, 0.0))])
            .unwrap();
        let (r, t) = (0.4, 0.3);
        let rep = functional_e(&f, r, t).unwrap();
        assert!((rep.value - (t * r + (1.0 - t) * r * r)).abs() < 1e-15);
        assert!(functional_e(&f, r, 0.0).is_err());
    }

    #[test]
    fn e_at_t_one_is_a() {
        let f = extremal(0.5, 2, 30);
        let e = functional_e(&f, 0.1, 1.0).unwrap();
        let a = functional_a(&f, 0.1).unwrap();
        assert_eq!(e.value, a.value);
    }

    #[test]
    fn rogosinski_monomial_doubles() {
        let n = 3;
        let f = TruncatedSeries::from_terms(
            1,
            [(MultiIndex::new(vec![n]).unwrap(), Complex::new(1.0, 0.0))],
        )
        .unwrap();
        let r: f64 = 0.7;
        let z = Point::new(vec![Complex::from_polar(r, 1.3)]).unwrap();
        let rep = functional_rogosinski_uni(&f, &z, n, 1).unwrap();
        assert!((rep.value - 2.0 * r.powi(3)).abs() < 1e-15);
        assert_eq!(rep.verdict == Verdict::Holds, 2.0 * r.powi(3) <= 1.0);
    }

    #[test]
    fn rogosinski_requires_univariate() {
        let f = TruncatedSeries::constant(2, Complex::new(0.5, 0.0)).unwrap();
        let z = Point::from_reals(&[0.1, 0.1]).unwrap();
        assert!(functional_rogosinski_uni(&f, &z, 1, 1).is_err());
    }

    #[test]
    fn zero_function_holds() {
        let f = TruncatedSeries::zero(2, 4).unwrap();
        let z = Point::from_reals(&[0.9, -0.9]).unwrap();
        let id = schwarz_power_map(2, 1).unwrap();
        assert_eq!(functional_a(&f, 0.9).unwrap().verdict, Verdict::Holds);
        assert_eq!(
            functional_b(&f, &id, &z, TailMode::FromDegree(1), 1).unwrap().verdict,
            Verdict::Holds
        );
        assert_eq!(functional_d(&f, &z, 1.0).unwrap().verdict, Verdict::Holds);
    }
}
