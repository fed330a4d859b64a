//! Randomized suites: inequalities holding below each radius on sampled
//! bounded functions, extremal witnesses above it, lemma audits and the
//! Euler derivative closed-form check.
//!
//! Suites are parallel over cases and merge results by case index, so a
//! report depends only on its configuration.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::families::{
    derive_seed, eval_schwarz, extremal_series, schwarz_power_map, ExtremalSpec,
    ProductFunctionSpec, SchwarzMapSpec, SeededRng,
};
use crate::functionals::{
    functional_a, functional_b, functional_c, functional_d, functional_e,
    functional_rogosinski_uni, TailMode,
};
use crate::radius::{solve, RadiusFamily};
use crate::report::{EvalReport, Verdict};
use crate::series::{multiindex_count_up_to, Complex, Point, TruncatedSeries, MAX_TERMS};

pub const DEFAULT_MARGIN_BELOW: f64 = 0.99;
pub const DEFAULT_MARGIN_ABOVE: f64 = 0.02;
pub const DEFAULT_A_SCHEDULE: [f64; 3] = [0.9, 0.99, 0.999];

/// Vanishing order standing in for `m → ∞` in the `A_N` family.
pub const AN_LIMIT_ORDER: u32 = 64;

/// Absolute slack allowed on lemma bounds for rounding.
pub const LEMMA_SLACK: f64 = 1e-12;

/// Relative tolerance of the Euler closed-form check.
pub const EULER_REL_TOL: f64 = 1e-9;

/// Truncation degree schedule: start at `start`, double on INCONCLUSIVE
/// until `cap` or until the tail bound drops below `tail_target`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KPolicy {
    pub start: u32,
    pub cap: u32,
    pub tail_target: f64,
}

impl Default for KPolicy {
    fn default() -> Self {
        KPolicy {
            start: 16,
            cap: 512,
            tail_target: 1e-10,
        }
    }
}

impl KPolicy {
    fn next(&self, k: u32, dim: usize, report: &EvalReport) -> Option<u32> {
        if report.verdict != Verdict::Inconclusive || report.tail_bound < self.tail_target {
            return None;
        }
        let next = k.checked_mul(2)?;
        if next > self.cap {
            return None;
        }
        match multiindex_count_up_to(dim, next) {
            Some(count) if count <= MAX_TERMS => Some(next),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub family: RadiusFamily,
    pub samples: usize,
    /// Hold-below suites evaluate at `margin_below * radius`.
    pub margin_below: f64,
    /// Sharpness suites evaluate at `radius + margin_above`.
    pub margin_above: f64,
    pub a_schedule: Vec<f64>,
    pub seed: u64,
    pub k_policy: KPolicy,
    /// Random torus points per sample, on top of the fixed diagonal points.
    pub points_per_sample: usize,
}

impl SuiteConfig {
    pub fn new(family: RadiusFamily) -> Self {
        SuiteConfig {
            family,
            samples: 200,
            margin_below: DEFAULT_MARGIN_BELOW,
            margin_above: DEFAULT_MARGIN_ABOVE,
            a_schedule: DEFAULT_A_SCHEDULE.to_vec(),
            seed: 0,
            k_policy: KPolicy::default(),
            points_per_sample: 2,
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if !(self.margin_below > 0.0 && self.margin_below < 1.0) {
            return Err(invalid(format!("margin_below must lie in (0, 1), got {}", self.margin_below)));
        }
        if !(self.margin_above > 0.0 && self.margin_above.is_finite()) {
            return Err(invalid(format!("margin_above must be positive, got {}", self.margin_above)));
        }
        if self.a_schedule.is_empty() || self.a_schedule.iter().any(|a| !(0.0..1.0).contains(a)) {
            return Err(invalid("a_schedule must be a nonempty list of values in [0, 1)"));
        }
        let p = self.k_policy;
        if p.start == 0 || p.cap < p.start || !(p.tail_target > 0.0) {
            return Err(invalid("K policy needs 0 < start <= cap and a positive tail target"));
        }
        Ok(())
    }
}

/// The functional that each radius family bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FunctionalSpec {
    A,
    B { m: u32, mode: TailMode },
    C { m: u32, t: f64 },
    D { lambda: f64 },
    E { t: f64 },
    Rogosinski { big_n: u32, p: u32 },
}

impl FunctionalSpec {
    /// Majorant tails start at degree `N` and run over all later degrees,
    /// which is the index set the extremal computation sums.
    pub fn for_family(family: &RadiusFamily) -> Self {
        match *family {
            RadiusFamily::Classical { .. } => FunctionalSpec::A,
            RadiusFamily::RogosinskiUni { big_n, p } => FunctionalSpec::Rogosinski { big_n, p },
            RadiusFamily::RmN { m, big_n } | RadiusFamily::RmnN { m, big_n, .. } => FunctionalSpec::B {
                m,
                mode: TailMode::FromDegree(big_n),
            },
            RadiusFamily::AN { big_n, .. } => FunctionalSpec::B {
                m: AN_LIMIT_ORDER,
                mode: TailMode::FromDegree(big_n),
            },
            RadiusFamily::ConvexT { t } => FunctionalSpec::C { m: 1, t },
            RadiusFamily::ConvexMNT { m, t, .. } => FunctionalSpec::C { m, t },
            RadiusFamily::EulerLambda { lambda, .. } => FunctionalSpec::D { lambda },
            RadiusFamily::AreaT { t, .. } => FunctionalSpec::E { t },
        }
    }

    /// Vanishing order of the Schwarz map, for functionals composed with one.
    pub fn order(&self) -> Option<u32> {
        match *self {
            FunctionalSpec::B { m, .. } | FunctionalSpec::C { m, .. } => Some(m),
            _ => None,
        }
    }

    /// Whether the value depends on `z` beyond `‖z‖_∞`.
    pub fn is_pointwise(&self) -> bool {
        !matches!(self, FunctionalSpec::A | FunctionalSpec::E { .. })
    }

    pub fn evaluate(&self, f: &TruncatedSeries, omega: &SchwarzMapSpec, z: &Point) -> Result<EvalReport> {
        let r = z.inf_norm();
        match *self {
            FunctionalSpec::A => functional_a(f, r),
            FunctionalSpec::B { mode, .. } => functional_b(f, omega, z, mode, 1),
            FunctionalSpec::C { t, .. } => functional_c(f, omega, z, t),
            FunctionalSpec::D { lambda } => functional_d(f, z, lambda),
            FunctionalSpec::E { t } => functional_e(f, r, t),
            FunctionalSpec::Rogosinski { big_n, p } => functional_rogosinski_uni(f, z, big_n, p),
        }
    }
}

/// Evaluation point used by the sharpness computation for this functional.
pub fn sharpness_point(spec: &FunctionalSpec, n: usize, r: f64) -> Result<Point> {
    match *spec {
        FunctionalSpec::A | FunctionalSpec::E { .. } => Point::real_diagonal(n, r),
        FunctionalSpec::D { .. } | FunctionalSpec::Rogosinski { .. } => Point::real_diagonal(n, -r),
        FunctionalSpec::B { m, .. } | FunctionalSpec::C { m, .. } => Point::diagonal(n, branch_coordinate(m, r)),
    }
}

/// `r exp(iπ(2m-1)/m)`, whose `m`-th power is `-r^m`.
pub fn branch_coordinate(m: u32, r: f64) -> Complex {
    Complex::from_polar(r, PI * (2.0 * m as f64 - 1.0) / m as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    HoldsBelow,
    SharpnessAbove,
    LemmaAudit,
    EulerClosedForm,
}

impl SuiteKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteKind::HoldsBelow => "holds-below",
            SuiteKind::SharpnessAbove => "sharpness-above",
            SuiteKind::LemmaAudit => "lemma-audit",
            SuiteKind::EulerClosedForm => "euler-closed-form",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseReport {
    pub index: usize,
    pub seed: u64,
    pub label: String,
    /// Extremal parameter, for sharpness cases.
    pub a: Option<f64>,
    pub r: f64,
    pub max_degree: u32,
    pub verdict: Verdict,
    pub report: Option<EvalReport>,
    pub error: Option<String>,
}

impl CaseReport {
    fn from_result(seed: u64, label: String, a: Option<f64>, r: f64, k: u32, result: Result<EvalReport>) -> Self {
        let (verdict, report, error) = match result {
            Ok(rep) => (rep.verdict, Some(rep), None),
            Err(e) => (Verdict::Inconclusive, None, Some(e.to_string())),
        };
        CaseReport {
            index: 0,
            seed,
            label,
            a,
            r,
            max_degree: k,
            verdict,
            report,
            error,
        }
    }

    fn slack(&self) -> f64 {
        self.report.as_ref().map_or(f64::NEG_INFINITY, EvalReport::slack)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub kind: SuiteKind,
    pub family: Option<RadiusFamily>,
    pub radius_r: Option<f64>,
    /// Radius at which the functional was evaluated.
    pub r_eval: Option<f64>,
    pub seed: u64,
    pub cases: Vec<CaseReport>,
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
    /// Smallest `threshold - (value + tail)` over all cases.
    pub worst_slack: f64,
    pub witness_a: Option<f64>,
    pub failing_seeds: Vec<u64>,
    pub passed: bool,
}

impl SuiteReport {
    fn assemble(
        kind: SuiteKind,
        family: Option<RadiusFamily>,
        radius_r: Option<f64>,
        r_eval: Option<f64>,
        seed: u64,
        mut cases: Vec<CaseReport>,
    ) -> Self {
        for (i, c) in cases.iter_mut().enumerate() {
            c.index = i;
        }
        let count = |v: Verdict| cases.iter().filter(|c| c.verdict == v).count();
        let (holds, violated, inconclusive) =
            (count(Verdict::Holds), count(Verdict::Violated), count(Verdict::Inconclusive));
        let worst_slack = cases.iter().map(CaseReport::slack).fold(f64::INFINITY, f64::min);
        let witness_a = match kind {
            SuiteKind::SharpnessAbove => cases.iter().find(|c| c.verdict == Verdict::Violated).and_then(|c| c.a),
            _ => None,
        };
        let passed = match kind {
            SuiteKind::SharpnessAbove => witness_a.is_some(),
            _ => holds == cases.len(),
        };
        let mut failing_seeds: Vec<u64> = match kind {
            SuiteKind::SharpnessAbove if !passed => vec![seed],
            SuiteKind::SharpnessAbove => Vec::new(),
            _ => cases.iter().filter(|c| c.verdict != Verdict::Holds).map(|c| c.seed).collect(),
        };
        failing_seeds.dedup();
        SuiteReport {
            kind,
            family,
            radius_r,
            r_eval,
            seed,
            cases,
            holds,
            violated,
            inconclusive,
            worst_slack,
            witness_a,
            failing_seeds,
            passed,
        }
    }
}

/// A sampled test case: the function, the Schwarz map it is composed with
/// and the points it is evaluated at.
struct Sample {
    f: ProductFunctionSpec,
    omega: SchwarzMapSpec,
    points: Vec<(String, Point)>,
}

fn torus_point(rng: &mut SeededRng, n: usize, r: f64) -> Result<Point> {
    Point::new((0..n).map(|_| Complex::from_polar(r, rng.angle())).collect())
}

fn draw_sample(spec: &FunctionalSpec, index: usize, n: usize, r: f64, seed: u64, extra: usize) -> Result<Sample> {
    let mut rng = SeededRng::new(seed);
    let counts: Vec<usize> = (0..n).map(|_| 1 + rng.below(3) as usize).collect();
    let f = ProductFunctionSpec::sample_with(&mut rng, &counts, 0.15)?;
    let omega = match spec.order() {
        Some(m) if index % 2 == 1 && m < AN_LIMIT_ORDER => SchwarzMapSpec::sample(&mut rng, n, m, 1)?,
        Some(m) => schwarz_power_map(n, m)?,
        None => schwarz_power_map(n, 1)?,
    };
    let mut points = vec![("diag+".to_string(), Point::real_diagonal(n, r)?)];
    if spec.is_pointwise() {
        points.push(("diag-".to_string(), Point::real_diagonal(n, -r)?));
        if let Some(m) = spec.order() {
            points.push(("branch".to_string(), Point::diagonal(n, branch_coordinate(m, r))?));
        }
        for j in 0..extra {
            points.push((format!("torus{j}"), torus_point(&mut rng, n, r)?));
        }
    }
    Ok(Sample { f, omega, points })
}

fn evaluate_with_escalation(
    spec: &FunctionalSpec,
    series_at: &dyn Fn(u32) -> Result<TruncatedSeries>,
    cache: &mut Vec<(u32, TruncatedSeries)>,
    omega: &SchwarzMapSpec,
    z: &Point,
    policy: &KPolicy,
) -> (u32, Result<EvalReport>) {
    let mut k = policy.start;
    loop {
        let series = match cache.iter().find(|(kk, _)| *kk == k) {
            Some((_, s)) => s,
            None => match series_at(k) {
                Ok(s) => {
                    cache.push((k, s));
                    &cache.last().expect("just pushed").1
                }
                Err(e) => return (k, Err(e)),
            },
        };
        let report = match spec.evaluate(series, omega, z) {
            Ok(rep) => rep,
            Err(e) => return (k, Err(e)),
        };
        match policy.next(k, z.dim(), &report) {
            Some(next) => k = next,
            None => return (k, Ok(report)),
        }
    }
}

/// Evaluates the family's functional at `margin_below * radius` on seeded
/// bounded functions and, for univariate families, on the extremal family
/// at its sharpness point; passes when every case HOLDS.
pub fn check_holds_below(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let radius = solve(config.family)?;
    let r = config.margin_below * radius.radius_r;
    let spec = FunctionalSpec::for_family(&config.family);
    let n = config.family.dim();

    let per_sample: Vec<Vec<CaseReport>> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(config.seed, i as u64);
            let sample = match draw_sample(&spec, i, n, r, seed, config.points_per_sample) {
                Ok(s) => s,
                Err(e) => {
                    return vec![CaseReport::from_result(seed, "sample".into(), None, r, 0, Err(e))];
                }
            };
            let series_at = |k: u32| sample.f.series(k);
            let mut cache = Vec::new();
            sample
                .points
                .iter()
                .map(|(label, z)| {
                    let (k, result) =
                        evaluate_with_escalation(&spec, &series_at, &mut cache, &sample.omega, z, &config.k_policy);
                    CaseReport::from_result(seed, label.clone(), None, r, k, result)
                })
                .collect()
        })
        .collect();

    let mut cases: Vec<CaseReport> = per_sample.into_iter().flatten().collect();
    // The extremal family is bounded on the whole unit polydisc only for n = 1.
    if n == 1 {
        cases.extend(extremal_cases(config, &spec, r, "extremal-probe")?);
    }
    Ok(SuiteReport::assemble(
        SuiteKind::HoldsBelow,
        Some(config.family),
        Some(radius.radius_r),
        Some(r),
        config.seed,
        cases,
    ))
}

/// The extremal family along the `a` schedule at the sharpness point of radius `r`.
fn extremal_cases(config: &SuiteConfig, spec: &FunctionalSpec, r: f64, label: &str) -> Result<Vec<CaseReport>> {
    let n = config.family.dim();
    let omega = schwarz_power_map(n, spec.order().unwrap_or(1))?;
    let z = sharpness_point(spec, n, r)?;
    Ok(config
        .a_schedule
        .par_iter()
        .map(|&a| {
            let series_at = |k: u32| extremal_series(ExtremalSpec::new(a, n)?, k);
            let mut cache = Vec::new();
            let (k, result) = evaluate_with_escalation(spec, &series_at, &mut cache, &omega, &z, &config.k_policy);
            CaseReport::from_result(config.seed, label.to_string(), Some(a), r, k, result)
        })
        .collect())
}

/// Evaluates the extremal family along the `a` schedule at
/// `radius + margin_above`; passes when some `a` gives VIOLATED.
pub fn check_sharpness_above(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let radius = solve(config.family)?;
    let r = radius.radius_r + config.margin_above;
    let spec = FunctionalSpec::for_family(&config.family);
    let cases = extremal_cases(config, &spec, r, "extremal")?;

    Ok(SuiteReport::assemble(
        SuiteKind::SharpnessAbove,
        Some(config.family),
        Some(radius.radius_r),
        Some(r),
        config.seed,
        cases,
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaAuditConfig {
    pub functions: usize,
    pub points_per_function: usize,
    pub dims: Vec<usize>,
    pub seed: u64,
    /// Truncation degree for the coefficient bound.
    pub max_degree: u32,
}

impl Default for LemmaAuditConfig {
    fn default() -> Self {
        LemmaAuditConfig {
            functions: 2_500,
            points_per_function: 4,
            dims: vec![1, 2, 3],
            seed: 0,
            max_degree: 10,
        }
    }
}

/// Largest `lhs - bound` over the coefficient bound `|a_α| ≤ 1 - |a_0|²`.
fn coefficient_excess(series: &TruncatedSeries) -> f64 {
    let a0 = series.constant_term().norm();
    let bound = 1.0 - a0 * a0;
    series
        .terms()
        .filter(|(alpha, _)| alpha.degree() > 0)
        .map(|(_, c)| c.norm() - bound)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Checks, on seeded bounded functions and points with `n r ≤ √2 - 1`:
/// `|f(z)| ≤ (|f(0)| + r)/(1 + |f(0)| r)`, `|a_α| ≤ 1 - |a_0|²`,
/// `|f(z)| ≤ r^k` for a zero of order `k`, `|ω_i(ζ)| ≤ |ζ|^m`, and
/// `|Df(z)| ≤ n r (1 - |f|²)/(1 - (n r)²)`. One case per (function, point).
pub fn audit_lemmas(config: &LemmaAuditConfig) -> Result<SuiteReport> {
    if config.functions == 0 || config.points_per_function == 0 || config.dims.is_empty() {
        return Err(invalid("lemma audit needs at least one function, point and dimension"));
    }
    if config.dims.contains(&0) {
        return Err(invalid("dimensions must be at least 1"));
    }
    let per_function: Vec<Vec<CaseReport>> = (0..config.functions)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(config.seed, i as u64);
            let n = config.dims[i % config.dims.len()];
            match audit_one(config, n, seed) {
                Ok(cases) => cases,
                Err(e) => vec![CaseReport::from_result(seed, "sample".into(), None, 0.0, 0, Err(e))],
            }
        })
        .collect();
    Ok(SuiteReport::assemble(
        SuiteKind::LemmaAudit,
        None,
        None,
        None,
        config.seed,
        per_function.into_iter().flatten().collect(),
    ))
}

fn audit_one(config: &LemmaAuditConfig, n: usize, seed: u64) -> Result<Vec<CaseReport>> {
    let mut rng = SeededRng::new(seed);
    let counts: Vec<usize> = (0..n).map(|_| 1 + rng.below(3) as usize).collect();
    let f = ProductFunctionSpec::sample_with(&mut rng, &counts, 0.3)?;
    let m = 1 + rng.below(3) as u32;
    let omega = SchwarzMapSpec::sample(&mut rng, n, m, 1)?;
    let series = f.series(config.max_degree)?;
    let coeff = coefficient_excess(&series);
    let a0 = f.eval(&Point::origin(n)?)?.norm();
    let k = f.zero_multiplicity() as i32;
    let r_max = (SQRT_2 - 1.0) / n as f64;

    let mut cases = Vec::with_capacity(config.points_per_function);
    for _ in 0..config.points_per_function {
        let r = rng.uniform_in(0.0, r_max);
        let lead = rng.below(n as u64) as usize;
        let coords: Vec<Complex> = (0..n)
            .map(|i| {
                let rho = if i == lead { r } else { rng.uniform_in(0.0, r) };
                Complex::from_polar(rho, rng.angle())
            })
            .collect();
        let z = Point::new(coords)?;
        let fz = f.eval(&z)?.norm();
        let dfz = f.euler_eval(&z)?.norm();
        let w = eval_schwarz(&omega, &z)?;
        let nr = n as f64 * r;

        let checks = [
            ("modulus-vs-constant-term", fz - (a0 + r) / (1.0 + a0 * r)),
            ("coefficient-bound", coeff),
            ("vanishing-order", fz - r.powi(k)),
            (
                "schwarz",
                w.coords()
                    .iter()
                    .zip(z.coords())
                    .map(|(wi, zi)| wi.norm() - zi.norm().powi(m as i32))
                    .fold(f64::NEG_INFINITY, f64::max),
            ),
            ("euler", dfz - nr * (1.0 - fz * fz) / (1.0 - nr * nr)),
        ];
        let (label, excess) = checks
            .iter()
            .copied()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty checks");
        let report = EvalReport::new(excess, 0.0, 0.0, LEMMA_SLACK);
        cases.push(CaseReport::from_result(seed, label.to_string(), None, r, config.max_degree, Ok(report)));
    }
    Ok(cases)
}

/// `n r (1 - a²)/(1 + a n r)²`, the modulus of `Df_a` at `(-r, …, -r)`.
pub fn euler_extremal_closed_form(a: f64, n: usize, r: f64) -> f64 {
    let nr = n as f64 * r;
    nr * (1.0 - a * a) / ((1.0 + a * nr) * (1.0 + a * nr))
}

/// Compares the series value of `|Df_a(-r, …, -r)|` with its closed form for
/// every `(a, n, r)`. A case HOLDS when the two agree to [`EULER_REL_TOL`]
/// relative, VIOLATED when they differ by more than that plus the tail.
pub fn euler_closed_form_check(a_values: &[f64], n_values: &[usize], r_values: &[f64], policy: &KPolicy) -> Result<SuiteReport> {
    let mut grid = Vec::new();
    for &a in a_values {
        for &n in n_values {
            for &r in r_values {
                if !(0.0..1.0).contains(&a) || n == 0 || !(r >= 0.0 && a * n as f64 * r < 1.0) {
                    return Err(invalid(format!("need a in [0, 1), n >= 1, a n r < 1; got a={a}, n={n}, r={r}")));
                }
                grid.push((a, n, r));
            }
        }
    }
    let cases: Vec<CaseReport> = grid
        .par_iter()
        .map(|&(a, n, r)| {
            let (k, result) = euler_case(a, n, r, policy);
            CaseReport::from_result(0, format!("n={n}"), Some(a), r, k, result)
        })
        .collect();
    Ok(SuiteReport::assemble(SuiteKind::EulerClosedForm, None, None, None, 0, cases))
}

fn euler_case(a: f64, n: usize, r: f64, policy: &KPolicy) -> (u32, Result<EvalReport>) {
    let expected = euler_extremal_closed_form(a, n, r);
    let tol = EULER_REL_TOL * expected.abs();
    let z = match Point::real_diagonal(n, -r) {
        Ok(z) => z,
        Err(e) => return (policy.start, Err(e)),
    };
    let mut k = policy.start;
    loop {
        let attempt = (|| {
            let df = extremal_series(ExtremalSpec::new(a, n)?, k)?.series_only().euler_derivative();
            let (v, err, _) = df.eval_certified(&z)?;
            let diff = (v.norm() - expected).abs();
            Ok(EvalReport::new(diff, err, err, tol))
        })();
        let report = match attempt {
            Ok(rep) => rep,
            Err(e) => return (k, Err(e)),
        };
        match policy.next(k, n, &report) {
            Some(next) => k = next,
            None => return (k, Ok(report)),
        }
    }
}
