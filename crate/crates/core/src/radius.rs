//! Radius equations: closed forms, bracketed bisection and limit sweeps.
//!
//! Each family's polynomial is written in its native variable: `r` for
//! [`RadiusFamily::Classical`], [`RadiusFamily::RogosinskiUni`],
//! [`RadiusFamily::RmN`] and [`RadiusFamily::RmnN`], and `x = n r` for the
//! others. Results carry both.

use std::fmt;

use rayon::prelude::*;

use crate::error::{invalid, BohrError, Result};

pub const BISECTION_TOL: f64 = 1e-14;
pub const MAX_BISECTION_ITERS: u32 = 60;
pub const RESIDUAL_GATE: f64 = 1e-12;
pub const SCAN_GRID_POINTS: usize = 10_000;

/// Half-width of the band around `t = 3/4` mapped to the value `1/2`.
pub const CONVEX_T_GUARD: f64 = 1e-10;
/// Above this weight the area radius is the constant `x = 1/3`.
pub const AREA_T_SPLIT: f64 = 9.0 / 17.0;

const MAX_ORDER: u32 = 10_000;
const MAX_DIM: usize = 1_000;

/// A radius equation and its parameters. `big_n` is the first degree of
/// the majorant tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadiusFamily {
    Classical { n: usize },
    RogosinskiUni { big_n: u32, p: u32 },
    RmN { m: u32, big_n: u32 },
    RmnN { m: u32, n: usize, big_n: u32 },
    AN { n: usize, big_n: u32 },
    ConvexT { t: f64 },
    ConvexMNT { m: u32, n: usize, t: f64 },
    EulerLambda { n: usize, lambda: f64 },
    AreaT { n: usize, t: f64 },
}

impl RadiusFamily {
    pub fn name(&self) -> &'static str {
        match self {
            RadiusFamily::Classical { .. } => "classical",
            RadiusFamily::RogosinskiUni { .. } => "rogosinski",
            RadiusFamily::RmN { .. } => "rmn",
            RadiusFamily::RmnN { .. } => "rmnn",
            RadiusFamily::AN { .. } => "an",
            RadiusFamily::ConvexT { .. } => "convexT",
            RadiusFamily::ConvexMNT { .. } => "convexMNT",
            RadiusFamily::EulerLambda { .. } => "euler",
            RadiusFamily::AreaT { .. } => "areaT",
        }
    }

    /// Parameters in declaration order, for echoing.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            RadiusFamily::Classical { n } => vec![("n", n as f64)],
            RadiusFamily::RogosinskiUni { big_n, p } => vec![("N", big_n as f64), ("p", p as f64)],
            RadiusFamily::RmN { m, big_n } => vec![("m", m as f64), ("N", big_n as f64)],
            RadiusFamily::RmnN { m, n, big_n } => {
                vec![("m", m as f64), ("n", n as f64), ("N", big_n as f64)]
            }
            RadiusFamily::AN { n, big_n } => vec![("n", n as f64), ("N", big_n as f64)],
            RadiusFamily::ConvexT { t } => vec![("t", t)],
            RadiusFamily::ConvexMNT { m, n, t } => vec![("m", m as f64), ("n", n as f64), ("t", t)],
            RadiusFamily::EulerLambda { n, lambda } => vec![("n", n as f64), ("lambda", lambda)],
            RadiusFamily::AreaT { n, t } => vec![("n", n as f64), ("t", t)],
        }
    }

    /// Number of variables; univariate families report 1.
    pub fn dim(&self) -> usize {
        match *self {
            RadiusFamily::Classical { n }
            | RadiusFamily::RmnN { n, .. }
            | RadiusFamily::AN { n, .. }
            | RadiusFamily::ConvexMNT { n, .. }
            | RadiusFamily::EulerLambda { n, .. }
            | RadiusFamily::AreaT { n, .. } => n,
            RadiusFamily::RogosinskiUni { .. } | RadiusFamily::RmN { .. } | RadiusFamily::ConvexT { .. } => 1,
        }
    }

    /// Whether the polynomial's variable is `x = n r` rather than `r`.
    pub fn in_x(&self) -> bool {
        !matches!(
            self,
            RadiusFamily::Classical { .. }
                | RadiusFamily::RogosinskiUni { .. }
                | RadiusFamily::RmN { .. }
                | RadiusFamily::RmnN { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if dim == 0 || dim > MAX_DIM {
            return Err(invalid(format!("n must lie in [1, {MAX_DIM}], got {dim}")));
        }
        let order = |name: &str, v: u32| {
            if v == 0 || v > MAX_ORDER {
                Err(invalid(format!("{name} must lie in [1, {MAX_ORDER}], got {v}")))
            } else {
                Ok(())
            }
        };
        let weight = |t: f64| {
            if (0.0..=1.0).contains(&t) {
                Ok(())
            } else {
                Err(invalid(format!("t must lie in [0, 1], got {t}")))
            }
        };
        match *self {
            RadiusFamily::Classical { .. } => Ok(()),
            RadiusFamily::RogosinskiUni { big_n, p } => {
                order("N", big_n)?;
                if p != 1 && p != 2 {
                    return Err(invalid(format!("p must be 1 or 2, got {p}")));
                }
                Ok(())
            }
            RadiusFamily::RmN { m, big_n } | RadiusFamily::RmnN { m, big_n, .. } => {
                order("m", m)?;
                order("N", big_n)
            }
            RadiusFamily::AN { big_n, .. } => order("N", big_n),
            RadiusFamily::ConvexT { t } => weight(t),
            RadiusFamily::ConvexMNT { m, t, .. } => {
                order("m", m)?;
                weight(t)
            }
            RadiusFamily::EulerLambda { lambda, .. } => {
                if lambda > 0.0 && lambda.is_finite() {
                    Ok(())
                } else {
                    Err(invalid(format!("lambda must be positive, got {lambda}")))
                }
            }
            RadiusFamily::AreaT { t, .. } => {
                weight(t)?;
                if t == 0.0 {
                    return Err(invalid("t must be positive for the area family"));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for RadiusFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.name())?;
        for (i, (k, v)) in self.params().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadiusResult {
    pub family: RadiusFamily,
    pub radius_r: f64,
    /// `n * radius_r`.
    pub radius_x: f64,
    /// `|poly_eval(family, root)|`.
    pub residual: f64,
    pub bracket: (f64, f64),
    pub note: Option<String>,
}

/// The family's radius polynomial at `x`, in its native variable.
pub fn poly_eval(family: &RadiusFamily, x: f64) -> f64 {
    let pow = |v: f64, k: u32| v.powi(k as i32);
    match *family {
        RadiusFamily::Classical { n } => 3.0 * n as f64 * x - 1.0,
        RadiusFamily::RogosinskiUni { big_n, p } => {
            let c = if p == 1 { 2.0 } else { 1.0 };
            c * (1.0 + x) * pow(x, big_n) - (1.0 - x * x)
        }
        RadiusFamily::RmN { m, big_n } => {
            let xm = pow(x, m);
            2.0 * pow(x, big_n) * (1.0 + xm) - (1.0 - x) * (1.0 - xm)
        }
        RadiusFamily::RmnN { m, n, big_n } => {
            let nx = n as f64 * x;
            let xm = pow(x, m);
            2.0 * pow(nx, big_n) * (1.0 + xm) - (1.0 - nx) * (1.0 - xm)
        }
        RadiusFamily::AN { big_n, .. } => 2.0 * pow(x, big_n) - (1.0 - x),
        RadiusFamily::ConvexT { t } => ((4.0 * t - 3.0) * x - 2.0) * x + 1.0,
        RadiusFamily::ConvexMNT { m, n, t } => {
            let c = (n as f64).powi(m as i32 - 1);
            let xm = pow(x, m);
            ((4.0 * t - 3.0) * x - (2.0 * t - 1.0)) * xm + ((2.0 * t - 3.0) * x + 1.0) * c
        }
        RadiusFamily::EulerLambda { lambda, .. } => {
            if lambda <= 0.5 {
                ((x + 1.0) * x * x + 3.0) * x - 1.0
            } else {
                let l = lambda;
                ((((2.0 * l) * x + (4.0 * l - 1.0)) * x + (2.0 * l - 1.0)) * x + 3.0) * x - 1.0
            }
        }
        RadiusFamily::AreaT { t, .. } => ((t * x + t) * x + (4.0 - 5.0 * t)) * x - t,
    }
}

/// Bisection on `[lo, hi]` down to an interval of width `tol`, capped at
/// [`MAX_BISECTION_ITERS`] halvings.
pub fn bracketed_bisection(g: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo < hi) || !(tol > 0.0) {
        return Err(invalid(format!("bad bracket [{lo}, {hi}] or tolerance {tol}")));
    }
    let (g_lo, g_hi) = (g(lo), g(hi));
    if !(g_lo * g_hi < 0.0) {
        return Err(BohrError::NoSignChange { lo, hi, g_lo, g_hi });
    }
    let (mut a, mut b) = (lo, hi);
    let lo_negative = g_lo < 0.0;
    for _ in 0..MAX_BISECTION_ITERS {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if (gm < 0.0) == lo_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Smallest root of `g` in `(0, hi]`: scans `grid_points` uniform points
/// for the first sign change, then bisects it. The note reports whether
/// the scan saw further sign changes.
pub fn min_positive_root(
    g: impl Fn(f64) -> f64,
    hi: f64,
    grid_points: usize,
) -> Result<(f64, Option<String>)> {
    if grid_points < SCAN_GRID_POINTS {
        return Err(invalid(format!(
            "grid needs at least {SCAN_GRID_POINTS} points, got {grid_points}"
        )));
    }
    if !(hi > 0.0) {
        return Err(invalid(format!("scan end must be positive, got {hi}")));
    }
    let h = hi / grid_points as f64;
    let grid: Vec<(f64, f64)> = (1..=grid_points)
        .map(|i| {
            let x = if i == grid_points { hi } else { i as f64 * h };
            (x, g(x))
        })
        .collect();

    let mut first = None;
    for (i, &(x, gx)) in grid.iter().enumerate() {
        if gx == 0.0 && i + 1 < grid.len() {
            first = Some((i, x, x));
            break;
        }
        if let Some(&(xn, gn)) = grid.get(i + 1) {
            if gn != 0.0 && gx * gn < 0.0 {
                first = Some((i + 1, x, xn));
                break;
            }
        }
    }
    let Some((next, lo, up)) = first else {
        if grid[grid.len() - 1].1 == 0.0 {
            return Err(BohrError::NoSignChangeOnGrid {
                hi,
                grid_points,
                note: format!("g vanishes only at the boundary x = {hi} without changing sign"),
            });
        }
        let (min_x, min_g) = grid
            .iter()
            .copied()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap_or((hi, g(hi)));
        return Err(BohrError::NoSignChangeOnGrid {
            hi,
            grid_points,
            note: format!("smallest |g| = {min_g:e} at x = {min_x}; possible tangential root there"),
        });
    };
    let root = if lo == up { lo } else { bracketed_bisection(&g, lo, up, BISECTION_TOL)? };

    let later = grid[next..]
        .windows(2)
        .filter(|w| w[0].1 * w[1].1 < 0.0 || (w[1].1 == 0.0 && w[0].1 != 0.0))
        .count();
    let note = if later == 0 {
        format!("no further sign changes in ({root}, {hi})")
    } else {
        format!("{later} further sign change(s) in ({root}, {hi}); smallest root returned")
    };
    Ok((root, Some(note)))
}

/// `(1 - 2√(1-t)) / (4t - 3)`, evaluated as `1 / (1 + 2√(1-t))` which is
/// the same quotient with the removable singularity at `t = 3/4` cancelled.
pub fn convex_t_closed_form(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid(format!("t must lie in [0, 1], got {t}")));
    }
    if (t - 0.75).abs() < CONVEX_T_GUARD {
        return Ok(0.5);
    }
    Ok(1.0 / (1.0 + 2.0 * (1.0 - t).sqrt()))
}

fn finish(family: RadiusFamily, native: f64, bracket: (f64, f64), residual: f64, note: Option<String>) -> RadiusResult {
    let n = family.dim() as f64;
    let (radius_r, radius_x) = if family.in_x() {
        (native / n, native)
    } else {
        (native, n * native)
    };
    RadiusResult {
        family,
        radius_r,
        radius_x,
        residual,
        bracket,
        note,
    }
}

/// Radius of `family`.
pub fn solve(family: RadiusFamily) -> Result<RadiusResult> {
    family.validate()?;
    let g = |x: f64| poly_eval(&family, x);
    match family {
        RadiusFamily::Classical { n } => {
            let r = 1.0 / (3.0 * n as f64);
            Ok(finish(family, r, (0.0, 1.0 / n as f64), g(r).abs(), None))
        }
        RadiusFamily::ConvexT { t } => {
            let x = convex_t_closed_form(t)?;
            Ok(finish(family, x, (0.0, 1.0), g(x).abs(), None))
        }
        RadiusFamily::AreaT { t, .. } if t >= AREA_T_SPLIT => Ok(finish(
            family,
            1.0 / 3.0,
            (0.0, 1.0 / 3.0),
            0.0,
            Some("t >= 9/17: constant radius x = 1/3, not a root of the cubic".to_string()),
        )),
        RadiusFamily::ConvexMNT { .. } => {
            let (x, note) = min_positive_root(g, 1.0, SCAN_GRID_POINTS)?;
            Ok(finish(family, x, (0.0, 1.0), g(x).abs(), note))
        }
        _ => {
            let bracket = match family {
                RadiusFamily::RmnN { n, .. } => (0.0, 1.0 / n as f64),
                RadiusFamily::EulerLambda { .. } => (0.0, std::f64::consts::SQRT_2 - 1.0),
                RadiusFamily::AreaT { .. } => (0.0, 1.0 / 3.0),
                _ => (0.0, 1.0),
            };
            let root = bracketed_bisection(g, bracket.0, bracket.1, BISECTION_TOL)?;
            Ok(finish(family, root, bracket, g(root).abs(), None))
        }
    }
}

/// `R_{m,n,N}` for each `N` in ascending `ns`.
pub fn limit_sweep_n(m: u32, n: usize, ns: &[u32]) -> Result<Vec<RadiusResult>> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("N list must be strictly ascending"));
    }
    ns.par_iter()
        .map(|&big_n| solve(RadiusFamily::RmnN { m, n, big_n }))
        .collect()
}

/// `R_{m,n,N}` for each `m` in ascending `ms`; compare with `A_N`.
pub fn limit_sweep_m(n: usize, big_n: u32, ms: &[u32]) -> Result<Vec<RadiusResult>> {
    if ms.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("m list must be strictly ascending"));
    }
    ms.par_iter()
        .map(|&m| solve(RadiusFamily::RmnN { m, n, big_n }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_of(f: RadiusFamily) -> f64 {
        solve(f).unwrap().radius_x
    }

    #[test]
    fn classical_exact() {
        assert_eq!(solve(RadiusFamily::Classical { n: 1 }).unwrap().radius_r, 1.0 / 3.0);
        for n in 1..=16 {
            let res = solve(RadiusFamily::Classical { n }).unwrap();
            assert!((res.radius_x - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rogosinski_quadratics() {
        let r1 = solve(RadiusFamily::RogosinskiUni { big_n: 1, p: 1 }).unwrap();
        let r2 = solve(RadiusFamily::RogosinskiUni { big_n: 1, p: 2 }).unwrap();
        assert!((r1.radius_r - 1.0 / 3.0).abs() < 1e-13);
        assert!((r2.radius_r - 0.5).abs() < 1e-13);
        assert!(r1.residual < RESIDUAL_GATE && r2.residual < RESIDUAL_GATE);
    }

    #[test]
    fn rmn_m1_n1_is_sqrt5_minus_2() {
        let r = solve(RadiusFamily::RmN { m: 1, big_n: 1 }).unwrap().radius_r;
        assert!((r - (5f64.sqrt() - 2.0)).abs() < 1e-13);
    }

    #[test]
    fn an_limits() {
        assert!((x_of(RadiusFamily::AN { n: 1, big_n: 1 }) - 1.0 / 3.0).abs() < 1e-13);
        assert!((x_of(RadiusFamily::AN { n: 1, big_n: 2 }) - 0.5).abs() < 1e-13);
    }

    #[test]
    fn euler_quartic() {
        let res = solve(RadiusFamily::EulerLambda { n: 1, lambda: 0.5 }).unwrap();
        assert!((res.radius_x - 0.3191).abs() < 1e-3);
        assert!(res.residual < RESIDUAL_GATE);
        assert_eq!(poly_eval(&RadiusFamily::EulerLambda { n: 1, lambda: 0.25 }, 0.0), -1.0);
        let tight = bracketed_bisection(
            |x| x.powi(4) + x.powi(3) + 3.0 * x - 1.0,
            0.0,
            std::f64::consts::SQRT_2 - 1.0,
            1e-15,
        )
        .unwrap();
        assert!((res.radius_x - tight).abs() < 1e-14);
        for lambda in [0.6, 1.0, 5.0] {
            let res = solve(RadiusFamily::EulerLambda { n: 2, lambda }).unwrap();
            assert!(res.radius_x > 0.0 && res.radius_x < std::f64::consts::SQRT_2 - 1.0);
            assert!((res.radius_r - res.radius_x / 2.0).abs() < 1e-17);
        }
    }

    #[test]
    fn convex_mnt_t0_factorization() {
        for m in 1..=3 {
            for n in 1..=3 {
                let res = solve(RadiusFamily::ConvexMNT { m, n, t: 0.0 }).unwrap();
                assert!((res.radius_x - 1.0 / 3.0).abs() < 1e-12, "{m} {n}");
                assert!(res.note.as_deref().unwrap().starts_with("no further sign changes"));
            }
        }
    }

    #[test]
    fn convex_mnt_t1_degenerate() {
        let err = solve(RadiusFamily::ConvexMNT { m: 1, n: 1, t: 1.0 }).unwrap_err();
        match err {
            BohrError::NoSignChangeOnGrid { note, .. } => assert!(note.contains("boundary")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn convex_mnt_m1_n1_agrees_with_convex_t() {
        for t in [0.1, 0.5, 0.74, 0.8, 0.95] {
            let a = x_of(RadiusFamily::ConvexMNT { m: 1, n: 1, t });
            let b = x_of(RadiusFamily::ConvexT { t });
            assert!((a - b).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn convex_t_values() {
        assert_eq!(convex_t_closed_form(0.0).unwrap(), 1.0 / 3.0);
        assert_eq!(convex_t_closed_form(0.75).unwrap(), 0.5);
        assert!((convex_t_closed_form(0.5).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        for t in [0.75 - 1e-6, 0.75 + 1e-6] {
            assert!((convex_t_closed_form(t).unwrap() - 0.5).abs() < 1e-4);
        }
        assert!(convex_t_closed_form(1.5).is_err());
        for t in [0.2, 0.6, 0.9] {
            let x = convex_t_closed_form(t).unwrap();
            assert!(poly_eval(&RadiusFamily::ConvexT { t }, x).abs() < 1e-14);
        }
    }

    #[test]
    fn area_t_piecewise() {
        let cubic = poly_eval(&RadiusFamily::AreaT { n: 1, t: 9.0 / 17.0 }, 1.0 / 3.0);
        assert!(cubic.abs() < 1e-15);
        for n in 1..=3 {
            let res = solve(RadiusFamily::AreaT { n, t: 9.0 / 17.0 }).unwrap();
            assert!((res.radius_x - 1.0 / 3.0).abs() < 1e-12);
        }
        // The cubic root moves with slope 1156/864 at the split.
        for dt in [1e-6, 1e-9] {
            let below = x_of(RadiusFamily::AreaT { n: 1, t: AREA_T_SPLIT - dt });
            let above = x_of(RadiusFamily::AreaT { n: 1, t: AREA_T_SPLIT + dt });
            assert!(below < above);
            assert!((above - below) < 1.4 * dt);
        }
        assert!(solve(RadiusFamily::AreaT { n: 1, t: 0.0 }).is_err());
    }

    #[test]
    fn rmnn_sign_at_one_third() {
        let v = poly_eval(&RadiusFamily::RmnN { m: 1, n: 1, big_n: 1 }, 1.0 / 3.0);
        assert!((v - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn bracket_signs() {
        let fams = [
            RadiusFamily::RmnN { m: 2, n: 3, big_n: 4 },
            RadiusFamily::AN { n: 2, big_n: 3 },
            RadiusFamily::EulerLambda { n: 1, lambda: 2.0 },
            RadiusFamily::AreaT { n: 2, t: 0.3 },
        ];
        for f in fams {
            let res = solve(f).unwrap();
            assert!(poly_eval(&f, res.bracket.0) < 0.0);
            assert!(poly_eval(&f, res.bracket.1) > 0.0);
            assert!(res.bracket.0 < res.radius_x && res.residual < RESIDUAL_GATE);
        }
    }

    #[test]
    fn bisection_basics() {
        assert!((bracketed_bisection(|x| x - 0.5, 0.0, 1.0, 1e-14).unwrap() - 0.5).abs() < 1e-14);
        assert!(matches!(
            bracketed_bisection(|x| x * x, 0.0, 1.0, 1e-14),
            Err(BohrError::NoSignChange { .. })
        ));
    }

    #[test]
    fn min_root_two_roots() {
        let (root, note) = min_positive_root(|x| (x - 0.2) * (x - 0.4), 1.0, SCAN_GRID_POINTS).unwrap();
        assert!((root - 0.2).abs() < 1e-13);
        assert!(note.unwrap().starts_with("1 further"));
    }

    #[test]
    fn sweeps_increase() {
        let ns: Vec<u32> = (1..=12).collect();
        let rs = limit_sweep_n(1, 1, &ns).unwrap();
        assert!(rs.windows(2).all(|w| w[0].radius_r < w[1].radius_r));
        assert!((rs[11].radius_r - 0.726_584_017_162_071_4).abs() < 1e-12);
        let ms = [1, 2, 5, 20, 100];
        let rs = limit_sweep_m(1, 1, &ms).unwrap();
        assert!((rs[4].radius_r - 1.0 / 3.0).abs() < 1e-3);
        assert!(limit_sweep_n(1, 1, &[3, 2]).is_err());
    }

    #[test]
    fn validation() {
        assert!(solve(RadiusFamily::Classical { n: 0 }).is_err());
        assert!(solve(RadiusFamily::RogosinskiUni { big_n: 1, p: 3 }).is_err());
        assert!(solve(RadiusFamily::EulerLambda { n: 1, lambda: 0.0 }).is_err());
        assert!(solve(RadiusFamily::ConvexT { t: 1.5 }).is_err());
        assert!(solve(RadiusFamily::RmnN { m: 0, n: 1, big_n: 1 }).is_err());
    }

    #[test]
    fn display_echoes_params() {
        let f = RadiusFamily::RmnN { m: 2, n: 1, big_n: 2 };
        assert_eq!(f.to_string(), "rmnn{m=2,n=1,N=2}");
    }
}
