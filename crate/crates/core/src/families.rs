//! Test functions: the extremal Möbius family, finite Blaschke products on
//! the polydisc, and Schwarz maps `ω_i(ζ) = ζ^m B_i(ζ)`.
//!
//! Every sampled function is bounded by 1 on the unit polydisc by
//! construction, so the inequality suites never depend on a sup-norm
//! estimate.

use std::f64::consts::PI;

use rand_pcg::rand_core::{Rng, SeedableRng};
use rand_pcg::Pcg32;

use crate::error::{invalid, BohrError, Result};
use crate::series::{
    enumerate_multiindices, multiindex_count_up_to, multinomial_f64, ClosedForm, Complex,
    MultiIndex, Point, TailBound, TruncatedSeries, MAX_TERMS,
};

/// Largest `|w|` drawn for a sampled Blaschke factor.
pub const SAMPLE_MAX_POLE_PARAM: f64 = 0.75;

/// Seeded generator for all sampling.
///
/// `Pcg32` is a 64-bit linear congruential generator (multiplier
/// 6364136223846793005, fixed odd increment) with an XSH-RR output
/// permutation; its stream is identical on every platform. Uniform reals
/// use the top 53 bits of two concatenated outputs.
#[derive(Clone, Debug)]
pub struct SeededRng(Pcg32);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(Pcg32::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        if bound == 0 {
            return 0;
        }
        self.next_u64() % bound
    }

    pub fn angle(&mut self) -> f64 {
        self.uniform_in(0.0, 2.0 * PI)
    }
}

/// Derives the seed of case `index` from a suite seed (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Parameters of `f_a(z) = (a - Σz_i)/(1 - a Σz_i)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremalSpec {
    a: f64,
    n: usize,
}

impl ExtremalSpec {
    pub fn new(a: f64, n: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&a) {
            return Err(invalid(format!("extremal parameter a must lie in [0, 1), got {a}")));
        }
        if n == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        Ok(ExtremalSpec { a, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Taylor coefficients of `f_a` up to degree `max_degree`:
/// `a_0 = a` and `a_α = -(1-a²) a^{k-1} k!/α!` for `|α| = k ≥ 1`.
pub fn extremal_series(spec: ExtremalSpec, max_degree: u32) -> Result<TruncatedSeries> {
    let ExtremalSpec { a, n } = spec;
    check_capacity(n, max_degree)?;
    let mut series = TruncatedSeries::zero(n, max_degree)?;
    series.insert(MultiIndex::zero(n), Complex::new(a, 0.0))?;
    let scale = 1.0 - a * a;
    let mut a_pow = 1.0; // a^{k-1}
    for k in 1..=max_degree {
        if a_pow == 0.0 {
            break;
        }
        for alpha in enumerate_multiindices(n, k)? {
            let coeff = -scale * a_pow * multinomial_f64(&alpha);
            series.insert(alpha, Complex::new(coeff, 0.0))?;
        }
        a_pow *= a;
    }
    let series = if a > 0.0 {
        series.with_tail(TailBound::geometric(scale / a, a * n as f64, max_degree + 1)?)?
    } else {
        // f_0 = -(z_1 + … + z_n) is a polynomial
        series
    };
    Ok(series.with_closed_form(ClosedForm::MobiusSum { a }))
}

/// `(a - s)/(1 - a s)` with `s = Σ z_i`.
pub fn extremal_closed_eval(spec: ExtremalSpec, z: &Point) -> Result<Complex> {
    if z.dim() != spec.n {
        return Err(BohrError::DimensionMismatch {
            expected: spec.n,
            found: z.dim(),
        });
    }
    ClosedForm::MobiusSum { a: spec.a }.eval(z)
}

fn check_capacity(n: usize, max_degree: u32) -> Result<()> {
    match multiindex_count_up_to(n, max_degree) {
        Some(c) if c <= MAX_TERMS => Ok(()),
        _ => Err(BohrError::Capacity(format!(
            "series of dimension {n} truncated at degree {max_degree} has too many terms"
        ))),
    }
}

/// `e^{iθ} (ζ - w)/(1 - w̄ζ)`, a self-map of the unit disc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlaschkeFactor {
    w: Complex,
    phase: f64,
}

impl BlaschkeFactor {
    pub fn new(w: Complex, phase: f64) -> Result<Self> {
        if !(w.norm() < 1.0) {
            return Err(invalid(format!("Blaschke parameter must satisfy |w| < 1, got {w}")));
        }
        Ok(BlaschkeFactor { w, phase })
    }

    /// The identity factor `ζ`.
    pub fn identity() -> Self {
        BlaschkeFactor {
            w: Complex::new(0.0, 0.0),
            phase: 0.0,
        }
    }

    pub fn w(&self) -> Complex {
        self.w
    }

    fn rotation(&self) -> Complex {
        Complex::from_polar(1.0, self.phase)
    }

    pub fn eval(&self, zeta: Complex) -> Complex {
        self.rotation() * (zeta - self.w) / (1.0 - self.w.conj() * zeta)
    }

    pub fn derivative(&self, zeta: Complex) -> Complex {
        let den = 1.0 - self.w.conj() * zeta;
        self.rotation() * (1.0 - self.w.norm_sqr()) / (den * den)
    }

    /// Taylor coefficients up to degree `max_degree`:
    /// `-e^{iθ} w` and `e^{iθ}(1-|w|²) w̄^{k-1}` for `k ≥ 1`.
    pub fn coefficients(&self, max_degree: u32) -> Vec<Complex> {
        let rot = self.rotation();
        let mut out = Vec::with_capacity(max_degree as usize + 1);
        out.push(-rot * self.w);
        let mut w_bar_pow = Complex::new(1.0, 0.0);
        let scale = 1.0 - self.w.norm_sqr();
        for _ in 1..=max_degree {
            out.push(rot * scale * w_bar_pow);
            w_bar_pow *= self.w.conj();
        }
        out
    }

    /// Majorant `Σ_k |c_k| ρ^k = |w| + (1-|w|²)ρ/(1-|w|ρ)` for `ρ < 1/|w|`.
    pub fn majorant(&self, rho: f64) -> f64 {
        let m = self.w.norm();
        m + (1.0 - m * m) * rho / (1.0 - m * rho)
    }
}

/// `g(z) = e^{iθ} Π_i Π_j B_ij(z_i)`; `|g| ≤ 1` on the unit polydisc.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductFunctionSpec {
    factors: Vec<Vec<BlaschkeFactor>>,
    phase: f64,
}

impl ProductFunctionSpec {
    pub fn new(factors: Vec<Vec<BlaschkeFactor>>, phase: f64) -> Result<Self> {
        if factors.is_empty() {
            return Err(invalid("product function needs at least one coordinate"));
        }
        Ok(ProductFunctionSpec { factors, phase })
    }

    /// Seeded sample with `factors_per_coordinate` factors in every coordinate.
    pub fn sample(seed: u64, n: usize, factors_per_coordinate: usize) -> Result<Self> {
        let mut rng = SeededRng::new(seed);
        let counts = vec![factors_per_coordinate; n];
        Self::sample_with(&mut rng, &counts, 0.0)
    }

    /// Samples factors; each is the identity `ζ` (a zero at the origin)
    /// with probability `zero_prob`, otherwise `|w| ≤ 0.75` uniformly.
    pub fn sample_with(rng: &mut SeededRng, counts: &[usize], zero_prob: f64) -> Result<Self> {
        let phase = rng.angle();
        let mut factors = Vec::with_capacity(counts.len());
        for &count in counts {
            let mut coord = Vec::with_capacity(count);
            for _ in 0..count {
                let modulus = rng.uniform_in(0.0, SAMPLE_MAX_POLE_PARAM);
                let arg = rng.angle();
                let rot = rng.angle();
                let is_zero = rng.uniform() < zero_prob;
                let w = if is_zero {
                    Complex::new(0.0, 0.0)
                } else {
                    Complex::from_polar(modulus, arg)
                };
                coord.push(BlaschkeFactor::new(w, rot)?);
            }
            factors.push(coord);
        }
        Self::new(factors, phase)
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Vec<BlaschkeFactor>] {
        &self.factors
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Order of the zero at the origin (number of factors with `w = 0`).
    pub fn zero_multiplicity(&self) -> usize {
        self.factors
            .iter()
            .flatten()
            .filter(|f| f.w == Complex::new(0.0, 0.0))
            .count()
    }

    fn coordinate_value(&self, i: usize, zeta: Complex) -> Complex {
        self.factors[i]
            .iter()
            .fold(Complex::new(1.0, 0.0), |acc, f| acc * f.eval(zeta))
    }

    /// Exact value `g(z)`.
    pub fn eval(&self, z: &Point) -> Result<Complex> {
        self.check_dim(z)?;
        let mut value = Complex::from_polar(1.0, self.phase);
        for (i, &zi) in z.coords().iter().enumerate() {
            value *= self.coordinate_value(i, zi);
        }
        Ok(value)
    }

    /// Exact `Dg(z) = Σ_i z_i ∂g/∂z_i` by the product rule.
    pub fn euler_eval(&self, z: &Point) -> Result<Complex> {
        self.check_dim(z)?;
        let coords = z.coords();
        let values: Vec<Complex> = (0..self.dim())
            .map(|i| self.coordinate_value(i, coords[i]))
            .collect();
        let rot = Complex::from_polar(1.0, self.phase);
        let mut total = Complex::new(0.0, 0.0);
        for (i, &zi) in coords.iter().enumerate() {
            let others: Complex = values
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| *v)
                .product();
            let fs = &self.factors[i];
            let mut d_coord = Complex::new(0.0, 0.0);
            for (j, fj) in fs.iter().enumerate() {
                let rest: Complex = fs
                    .iter()
                    .enumerate()
                    .filter(|&(l, _)| l != j)
                    .map(|(_, fl)| fl.eval(zi))
                    .product();
                d_coord += fj.derivative(zi) * rest;
            }
            total += zi * d_coord * others;
        }
        Ok(rot * total)
    }

    fn check_dim(&self, z: &Point) -> Result<()> {
        if z.dim() != self.dim() {
            return Err(BohrError::DimensionMismatch {
                expected: self.dim(),
                found: z.dim(),
            });
        }
        Ok(())
    }

    /// Univariate coefficients of `Π_j B_ij` truncated at `max_degree`.
    fn coordinate_coefficients(&self, i: usize, max_degree: u32) -> Vec<Complex> {
        let len = max_degree as usize + 1;
        let mut acc = vec![Complex::new(0.0, 0.0); len];
        acc[0] = Complex::new(1.0, 0.0);
        for f in &self.factors[i] {
            let c = f.coefficients(max_degree);
            let mut next = vec![Complex::new(0.0, 0.0); len];
            for (p, &ap) in acc.iter().enumerate() {
                if ap == Complex::new(0.0, 0.0) {
                    continue;
                }
                for (q, &cq) in c.iter().enumerate().take(len - p) {
                    next[p + q] += ap * cq;
                }
            }
            acc = next;
        }
        acc
    }

    /// Tail certificate: the product of the factor majorants at
    /// `ρ₀ = 2/(1 + max|w|)` bounds every block by `C ρ₀^{-k}`.
    fn tail_bound(&self, valid_from: u32) -> Result<TailBound> {
        let w_max = self
            .factors
            .iter()
            .flatten()
            .map(|f| f.w.norm())
            .fold(0.0, f64::max);
        let rho0 = 2.0 / (1.0 + w_max);
        let c: f64 = self.factors.iter().flatten().map(|f| f.majorant(rho0)).product();
        TailBound::geometric(c, 1.0 / rho0, valid_from)
    }

    /// Taylor series of `g` to degree `max_degree` with its tail certificate.
    /// A polynomial (every `w = 0`) that fits in the truncation carries no tail.
    pub fn series(&self, max_degree: u32) -> Result<TruncatedSeries> {
        let n = self.dim();
        check_capacity(n, max_degree)?;
        let per_coord: Vec<Vec<Complex>> = (0..n)
            .map(|i| self.coordinate_coefficients(i, max_degree))
            .collect();
        let rot = Complex::from_polar(1.0, self.phase);
        let mut series = TruncatedSeries::zero(n, max_degree)?;
        for k in 0..=max_degree {
            for alpha in enumerate_multiindices(n, k)? {
                let mut c = rot;
                for (i, &e) in alpha.exponents().iter().enumerate() {
                    c *= per_coord[i][e as usize];
                    if c == Complex::new(0.0, 0.0) {
                        break;
                    }
                }
                series.insert(alpha, c)?;
            }
        }
        let total_factors: usize = self.factors.iter().map(Vec::len).sum();
        let polynomial = self.zero_multiplicity() == total_factors;
        if polynomial && total_factors as u32 <= max_degree {
            Ok(series)
        } else {
            series.with_tail(self.tail_bound(max_degree + 1)?)
        }
    }
}

/// Seeded truncated series of a function bounded by 1 on the unit polydisc.
pub fn sample_bounded_function(
    seed: u64,
    n: usize,
    factors_per_coordinate: usize,
    max_degree: u32,
) -> Result<TruncatedSeries> {
    ProductFunctionSpec::sample(seed, n, factors_per_coordinate)?.series(max_degree)
}

/// `ω(z) = (ω_1(z_1), …, ω_n(z_n))` with `ω_i(ζ) = ζ^m B_i(ζ)` and `|B_i| ≤ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchwarzMapSpec {
    order: u32,
    tails: Vec<Vec<BlaschkeFactor>>,
}

impl SchwarzMapSpec {
    pub fn new(order: u32, tails: Vec<Vec<BlaschkeFactor>>) -> Result<Self> {
        if order == 0 {
            return Err(invalid("Schwarz map vanishing order must be at least 1"));
        }
        if tails.is_empty() {
            return Err(invalid("Schwarz map needs at least one coordinate"));
        }
        Ok(SchwarzMapSpec { order, tails })
    }

    /// Seeded map with `factors` Blaschke factors in every coordinate tail.
    pub fn sample(rng: &mut SeededRng, n: usize, order: u32, factors: usize) -> Result<Self> {
        let counts = vec![factors; n];
        let product = ProductFunctionSpec::sample_with(rng, &counts, 0.0)?;
        Self::new(order, product.factors)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.tails.len()
    }

    pub fn is_power_map(&self) -> bool {
        self.tails.iter().all(Vec::is_empty)
    }

    pub fn eval_coord(&self, i: usize, zeta: Complex) -> Complex {
        let tail = self.tails[i]
            .iter()
            .fold(Complex::new(1.0, 0.0), |acc, f| acc * f.eval(zeta));
        zeta.powu(self.order) * tail
    }
}

/// `ω(z) = (z_1^m, …, z_n^m)`.
pub fn schwarz_power_map(n: usize, m: u32) -> Result<SchwarzMapSpec> {
    if n == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    SchwarzMapSpec::new(m, vec![Vec::new(); n])
}

pub fn eval_schwarz(omega: &SchwarzMapSpec, z: &Point) -> Result<Point> {
    if z.dim() != omega.dim() {
        return Err(BohrError::DimensionMismatch {
            expected: omega.dim(),
            found: z.dim(),
        });
    }
    if !(z.inf_norm() < 1.0) {
        return Err(invalid(format!(
            "Schwarz maps are evaluated inside the unit polydisc, got ‖z‖∞ = {}",
            z.inf_norm()
        )));
    }
    Point::new(
        z.coords()
            .iter()
            .enumerate()
            .map(|(i, &zi)| omega.eval_coord(i, zi))
            .collect(),
    )
}
