//! Multi-indices and truncated multivariate power series.
//!
//! A [`TruncatedSeries`] stores the coefficients `a_α` for `|α| ≤ K` sparsely,
//! keyed by [`MultiIndex`]. Everything beyond degree `K` is either known to be
//! zero (no tail) or controlled by a [`TailBound`] on the degree blocks
//! `Σ_{|α|=k} |a_α|`. All radii are equal polyradii: `r = ‖z‖_∞`.
//!
//! Summation order is fixed: ascending degree, and within a degree the
//! colexicographic order produced by [`enumerate_multiindices`]. The map
//! ordering of [`MultiIndex`] is exactly that order, so iterating the
//! coefficient map is the summation order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{invalid, BohrError, Result};
use crate::report::{EvalReport, ModulusPath};

pub type Complex = num_complex::Complex64;

/// Largest degree accepted by [`multinomial_coeff`].
pub const MULTINOMIAL_MAX_DEGREE: u32 = 60;

/// Upper limit on the number of multi-indices materialized at once.
pub const MAX_TERMS: u64 = 20_000_000;

/// Number of tail terms summed explicitly before the ratio bound takes over.
const EXPLICIT_TAIL_TERMS: u32 = 200;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exponents: Vec<u32>,
    degree: u32,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(invalid("multi-index dimension must be at least 1"));
        }
        let degree = exponents
            .iter()
            .try_fold(0u32, |acc, &e| acc.checked_add(e))
            .ok_or_else(|| BohrError::Capacity("multi-index degree overflows u32".into()))?;
        Ok(MultiIndex { exponents, degree })
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex {
            exponents: vec![0; dim.max(1)],
            degree: 0,
        }
    }

    /// The index of the coordinate monomial `z_i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut exponents = vec![0; dim.max(1)];
        exponents[i] = 1;
        MultiIndex {
            exponents,
            degree: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of nonzero exponents.
    pub fn support_size(&self) -> usize {
        self.exponents.iter().filter(|&&e| e > 0).count()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exponents.len().cmp(&other.exponents.len()))
            .then_with(|| self.exponents.iter().rev().cmp(other.exponents.iter().rev()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// `C(k+n-1, n-1)`, the number of multi-indices of dimension `n` and degree `k`.
pub fn multiindex_count(n: usize, k: u32) -> Option<u64> {
    if n == 0 {
        return None;
    }
    let top = k as u64 + n as u64 - 1;
    let choose = (n as u64 - 1).min(k as u64);
    let mut acc: u128 = 1;
    for i in 1..=choose as u128 {
        acc = acc.checked_mul(top as u128 - choose as u128 + i)? / i;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Number of multi-indices of dimension `n` with degree at most `k`.
pub fn multiindex_count_up_to(n: usize, k: u32) -> Option<u64> {
    multiindex_count(n + 1, k)
}

/// All multi-indices of dimension `n` and degree `k` in colexicographic order:
/// the last exponent varies slowest, e.g. `(2,0), (1,1), (0,2)`.
pub fn enumerate_multiindices(n: usize, k: u32) -> Result<Vec<MultiIndex>> {
    if n == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let count = multiindex_count(n, k)
        .filter(|&c| c <= MAX_TERMS)
        .ok_or_else(|| {
            BohrError::Capacity(format!(
                "C({k}+{n}-1, {n}-1) multi-indices exceed the limit of {MAX_TERMS}"
            ))
        })?;
    let mut out = Vec::with_capacity(count as usize);
    let mut current = vec![0u32; n];
    fill_colex(&mut current, n, k, &mut out);
    debug_assert_eq!(out.len() as u64, count);
    Ok(out)
}

fn fill_colex(current: &mut [u32], len: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if len == 1 {
        current[0] = remaining;
        out.push(MultiIndex {
            exponents: current.to_vec(),
            degree: current.iter().sum(),
        });
        return;
    }
    for last in 0..=remaining {
        current[len - 1] = last;
        fill_colex(current, len - 1, remaining - last, out);
    }
}

/// `|α|! / α!`, computed as a running product of binomials so that no
/// factorial is ever formed.
pub fn multinomial_coeff(alpha: &MultiIndex) -> Result<u128> {
    if alpha.degree() > MULTINOMIAL_MAX_DEGREE {
        return Err(BohrError::Capacity(format!(
            "multinomial degree {} exceeds {MULTINOMIAL_MAX_DEGREE}",
            alpha.degree()
        )));
    }
    let overflow = || BohrError::Capacity(format!("multinomial of {alpha} overflows u128"));
    let mut result: u128 = 1;
    let mut running: u128 = 0;
    for &e in alpha.exponents() {
        // result *= C(running + e, e), one factor at a time
        let mut binom: u128 = 1;
        for j in 1..=e as u128 {
            running += 1;
            binom = binom.checked_mul(running).ok_or_else(overflow)? / j;
        }
        result = result.checked_mul(binom).ok_or_else(overflow)?;
    }
    Ok(result)
}

/// Floating-point multinomial for degrees past the exact range.
pub fn multinomial_f64(alpha: &MultiIndex) -> f64 {
    let mut result = 1.0f64;
    let mut running = 0.0f64;
    for &e in alpha.exponents() {
        for j in 1..=e {
            running += 1.0;
            result = result * running / j as f64;
        }
    }
    result
}

/// A point of `ℂⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<Complex>,
    inf_norm: f64,
}

impl Point {
    pub fn new(coords: Vec<Complex>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("point dimension must be at least 1"));
        }
        let inf_norm = coords.iter().map(|c| c.norm()).fold(0.0, f64::max);
        Ok(Point { coords, inf_norm })
    }

    pub fn from_reals(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn diagonal(n: usize, value: Complex) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn real_diagonal(n: usize, x: f64) -> Result<Self> {
        Self::diagonal(n, Complex::new(x, 0.0))
    }

    pub fn origin(n: usize) -> Result<Self> {
        Self::real_diagonal(n, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex] {
        &self.coords
    }

    /// `max_i |z_i|`.
    pub fn inf_norm(&self) -> f64 {
        self.inf_norm
    }

    pub fn coord_sum(&self) -> Complex {
        self.coords.iter().sum()
    }
}

/// Certified geometric decay of the degree blocks beyond the truncation:
/// `Σ_{|α|=k} |a_α| ≤ c · k^weight · q^k` for every `k ≥ valid_from_degree`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    pub c: f64,
    pub q: f64,
    pub weight: u32,
    pub valid_from_degree: u32,
}

impl TailBound {
    pub fn geometric(c: f64, q: f64, valid_from_degree: u32) -> Result<Self> {
        if !(c >= 0.0 && q >= 0.0 && c.is_finite() && q.is_finite()) {
            return Err(invalid(format!("tail bound needs finite c, q >= 0 (c={c}, q={q})")));
        }
        Ok(TailBound {
            c,
            q,
            weight: 0,
            valid_from_degree,
        })
    }

    /// Bound on `Σ_{k ≥ from} block_k r^k`.
    pub fn majorant_tail(&self, r: f64) -> Result<f64> {
        weighted_geometric_tail(self.c, self.weight, self.q * r, self.valid_from_degree)
    }

    /// Bound on `Σ_{k ≥ from} k Σ_{|α|=k} |a_α|² r^{2k}`, using `ℓ² ≤ ℓ¹` per block.
    pub fn area_tail(&self, r: f64) -> Result<f64> {
        let rho = self.q * r;
        if rho >= 1.0 {
            return Err(BohrError::DivergentTail { ratio: rho });
        }
        weighted_geometric_tail(
            self.c * self.c,
            2 * self.weight + 1,
            rho * rho,
            self.valid_from_degree,
        )
    }
}

/// Rigorous upper bound on `Σ_{k ≥ from} c k^w ρ^k`.
///
/// The first 200 terms are summed explicitly; past them the term ratio is at
/// most `((k₁+1)/k₁)^w ρ < 1`, which bounds the rest by a geometric series.
pub fn weighted_geometric_tail(c: f64, weight: u32, rho: f64, from: u32) -> Result<f64> {
    if c == 0.0 || rho == 0.0 {
        return Ok(0.0);
    }
    if !(rho < 1.0) {
        return Err(BohrError::DivergentTail { ratio: rho });
    }
    let term = |k: u32| c * (k as f64).powi(weight as i32) * rho.powi(k as i32);
    let start = from;
    let mut sum = 0.0;
    let explicit_end = start + EXPLICIT_TAIL_TERMS;
    for k in start..explicit_end {
        sum += term(k);
    }
    let k1 = explicit_end;
    let ratio = ((k1 as f64 + 1.0) / k1 as f64).powi(weight as i32) * rho;
    if ratio >= 1.0 {
        return Err(BohrError::DivergentTail { ratio });
    }
    sum += term(k1) / (1.0 - ratio);
    Ok(sum)
}

/// Series whose sum is known in closed form; used for exact moduli.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedForm {
    /// `(a - s)/(1 - a s)` with `s = z₁ + … + z_n`.
    MobiusSum { a: f64 },
    /// Euler derivative of `MobiusSum`: `-(1 - a²) s / (1 - a s)²`.
    MobiusSumEuler { a: f64 },
}

/// Smallest admissible `|1 - a s|` before a closed-form evaluation is refused.
pub const POLE_GUARD: f64 = 1e-14;

impl ClosedForm {
    pub fn eval(&self, z: &Point) -> Result<Complex> {
        let s = z.coord_sum();
        match *self {
            ClosedForm::MobiusSum { a } => {
                let den = Complex::new(1.0, 0.0) - a * s;
                if den.norm() < POLE_GUARD {
                    return Err(BohrError::PoleProximity {
                        denominator: den.norm(),
                    });
                }
                Ok((a - s) / den)
            }
            ClosedForm::MobiusSumEuler { a } => {
                let den = Complex::new(1.0, 0.0) - a * s;
                if den.norm() < POLE_GUARD {
                    return Err(BohrError::PoleProximity {
                        denominator: den.norm(),
                    });
                }
                Ok(-(1.0 - a * a) * s / (den * den))
            }
        }
    }

    fn euler(&self) -> Option<ClosedForm> {
        match *self {
            ClosedForm::MobiusSum { a } => Some(ClosedForm::MobiusSumEuler { a }),
            ClosedForm::MobiusSumEuler { .. } => None,
        }
    }
}

/// Truncation of `Σ a_α z^α` to degrees `≤ max_degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    dim: usize,
    max_degree: u32,
    coeffs: BTreeMap<MultiIndex, Complex>,
    tail: Option<TailBound>,
    closed_form: Option<ClosedForm>,
}

impl TruncatedSeries {
    /// The zero series, exact in every degree.
    pub fn zero(dim: usize, max_degree: u32) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("series dimension must be at least 1"));
        }
        Ok(TruncatedSeries {
            dim,
            max_degree,
            coeffs: BTreeMap::new(),
            tail: None,
            closed_form: None,
        })
    }

    pub fn constant(dim: usize, value: Complex) -> Result<Self> {
        let mut s = Self::zero(dim, 0)?;
        s.insert(MultiIndex::zero(dim), value)?;
        Ok(s)
    }

    /// Builds a finitely supported series from `(α, a_α)` pairs; the
    /// truncation degree is the largest degree present.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let max_degree = terms.iter().map(|(a, _)| a.degree()).max().unwrap_or(0);
        let mut s = Self::zero(dim, max_degree)?;
        for (alpha, c) in terms {
            let prev = s.get(&alpha);
            s.insert(alpha, prev + c)?;
        }
        Ok(s)
    }

    /// Sets `a_α`; a zero value removes the entry.
    pub fn insert(&mut self, alpha: MultiIndex, value: Complex) -> Result<()> {
        if alpha.dim() != self.dim {
            return Err(BohrError::DimensionMismatch {
                expected: self.dim,
                found: alpha.dim(),
            });
        }
        if alpha.degree() > self.max_degree {
            return Err(invalid(format!(
                "coefficient degree {} exceeds truncation degree {}",
                alpha.degree(),
                self.max_degree
            )));
        }
        if value == Complex::new(0.0, 0.0) {
            self.coeffs.remove(&alpha);
        } else {
            self.coeffs.insert(alpha, value);
        }
        Ok(())
    }

    pub fn with_tail(mut self, tail: TailBound) -> Result<Self> {
        if tail.valid_from_degree > self.max_degree + 1 {
            return Err(invalid(format!(
                "tail starts at degree {} but the series is truncated at {}",
                tail.valid_from_degree, self.max_degree
            )));
        }
        self.tail = Some(tail);
        Ok(self)
    }

    pub fn with_closed_form(mut self, form: ClosedForm) -> Self {
        self.closed_form = Some(form);
        self
    }

    /// Forgets the closed form so every evaluation goes through the series.
    pub fn series_only(mut self) -> Self {
        self.closed_form = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn tail(&self) -> Option<&TailBound> {
        self.tail.as_ref()
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn get(&self, alpha: &MultiIndex) -> Complex {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }

    /// Stored coefficients in summation order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex)> {
        self.coeffs.iter()
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn constant_term(&self) -> Complex {
        self.get(&MultiIndex::zero(self.dim))
    }

    fn check_dim(&self, z: &Point) -> Result<()> {
        if z.dim() != self.dim {
            return Err(BohrError::DimensionMismatch {
                expected: self.dim,
                found: z.dim(),
            });
        }
        Ok(())
    }

    /// `Σ_{|α|≤K} a_α z^α` in the fixed summation order.
    pub fn eval(&self, z: &Point) -> Result<Complex> {
        self.check_dim(z)?;
        let max_power = self.coeffs.keys().next_back().map_or(0, |a| a.degree()) as usize;
        let powers: Vec<Vec<Complex>> = z
            .coords()
            .iter()
            .map(|&zi| {
                let mut p = Vec::with_capacity(max_power + 1);
                let mut acc = Complex::new(1.0, 0.0);
                for _ in 0..=max_power {
                    p.push(acc);
                    acc *= zi;
                }
                p
            })
            .collect();
        let mut sum = Complex::new(0.0, 0.0);
        for (alpha, &c) in &self.coeffs {
            let mut mono = c;
            for (i, &e) in alpha.exponents().iter().enumerate() {
                if e > 0 {
                    mono *= powers[i][e as usize];
                }
            }
            sum += mono;
        }
        Ok(sum)
    }

    /// Bound on `|f(z) - eval(z)|` from the tail at radius `‖z‖_∞`.
    pub fn eval_tail(&self, z: &Point) -> Result<f64> {
        self.check_dim(z)?;
        match &self.tail {
            Some(t) => t.majorant_tail(z.inf_norm()),
            None => Ok(0.0),
        }
    }

    /// `f(z)` and a bound on the truncation error; the closed form is used
    /// when the series carries one, with zero error.
    pub fn eval_certified(&self, z: &Point) -> Result<(Complex, f64, ModulusPath)> {
        self.check_dim(z)?;
        match &self.closed_form {
            Some(form) => Ok((form.eval(z)?, 0.0, ModulusPath::ClosedForm)),
            None => Ok((self.eval(z)?, self.eval_tail(z)?, ModulusPath::Series)),
        }
    }

    /// Entry `k` is `Σ_{|α|=k} |a_α|` for `0 ≤ k ≤ K`.
    pub fn majorant_block_sums(&self) -> Vec<f64> {
        let mut blocks = vec![0.0; self.max_degree as usize + 1];
        for (alpha, c) in &self.coeffs {
            blocks[alpha.degree() as usize] += c.norm();
        }
        blocks
    }

    /// Entry `k` is `Σ_{|α|=k} |a_α|²`.
    pub fn area_block_sums(&self) -> Vec<f64> {
        let mut blocks = vec![0.0; self.max_degree as usize + 1];
        for (alpha, c) in &self.coeffs {
            blocks[alpha.degree() as usize] += c.norm_sqr();
        }
        blocks
    }

    /// `Σ_{k ≤ K, keep(k)} block_k r^k` and a bound on the omitted degrees.
    ///
    /// The tail bound covers every degree past `K` regardless of `keep`, which
    /// over-estimates filtered sums but never under-estimates them.
    pub fn filtered_majorant(&self, r: f64, keep: impl Fn(u32) -> bool) -> Result<(f64, f64)> {
        if !(r >= 0.0) {
            return Err(invalid(format!("radius must be nonnegative, got {r}")));
        }
        let tail = match &self.tail {
            Some(t) => t.majorant_tail(r)?,
            None => 0.0,
        };
        let mut value = 0.0;
        let mut rk = 1.0;
        for (k, block) in self.majorant_block_sums().into_iter().enumerate() {
            if keep(k as u32) {
                value += block * rk;
            }
            rk *= r;
        }
        Ok((value, tail))
    }

    /// `Σ_{|α|} |a_α| r^{|α|}` with its certified tail, against threshold 1.
    pub fn majorant_sum(&self, r: f64) -> Result<EvalReport> {
        let (value, tail) = self.filtered_majorant(r, |_| true)?;
        Ok(EvalReport::new(value, tail, 0.0, 1.0))
    }

    /// `Df = Σ z_k ∂f/∂z_k`: multiplies each degree-`k` coefficient by `k`.
    pub fn euler_derivative(&self) -> TruncatedSeries {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(alpha, _)| alpha.degree() > 0)
            .map(|(alpha, &c)| (alpha.clone(), c * alpha.degree() as f64))
            .collect();
        TruncatedSeries {
            dim: self.dim,
            max_degree: self.max_degree,
            coeffs,
            tail: self.tail.map(|t| TailBound {
                weight: t.weight + 1,
                ..t
            }),
            closed_form: self.closed_form.and_then(|f| f.euler()),
        }
    }

    /// `Σ_{k ≥ 1} k Σ_{|α|=k} |a_α|² r^{2k}` with its certified tail.
    pub fn area_sum(&self, r: f64) -> Result<EvalReport> {
        if !(r >= 0.0) {
            return Err(invalid(format!("radius must be nonnegative, got {r}")));
        }
        let tail = match &self.tail {
            Some(t) => t.area_tail(r)?,
            None => 0.0,
        };
        let r2 = r * r;
        let mut value = 0.0;
        let mut r2k = 1.0;
        for (k, block) in self.area_block_sums().into_iter().enumerate() {
            value += k as f64 * block * r2k;
            r2k *= r2;
        }
        Ok(EvalReport::new(value, tail, 0.0, 1.0))
    }

    /// Coefficientwise sum. Series carrying tails must share the truncation
    /// degree, otherwise the gap between the two degrees is uncovered.
    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        if self.dim != other.dim {
            return Err(BohrError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let has_tail = self.tail.is_some() || other.tail.is_some();
        if has_tail && self.max_degree != other.max_degree {
            return Err(invalid(
                "cannot add truncated series with tails at different truncation degrees",
            ));
        }
        let mut out = TruncatedSeries::zero(self.dim, self.max_degree.max(other.max_degree))?;
        for (alpha, &c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            let prev = out.get(alpha);
            out.insert(alpha.clone(), prev + c)?;
        }
        out.tail = match (self.tail, other.tail) {
            (None, None) => None,
            (Some(t), None) | (None, Some(t)) => Some(t),
            (Some(a), Some(b)) => Some(TailBound {
                c: a.c + b.c,
                q: a.q.max(b.q),
                weight: a.weight.max(b.weight),
                valid_from_degree: a.valid_from_degree.min(b.valid_from_degree).max(1),
            }),
        };
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec()).unwrap()
    }

    #[test]
    fn enumerate_one_variable() {
        let v = enumerate_multiindices(1, 5).unwrap();
        assert_eq!(v, vec![mi(&[5])]);
    }

    #[test]
    fn enumerate_two_variables_colex() {
        let v = enumerate_multiindices(2, 2).unwrap();
        assert_eq!(v, vec![mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]);
    }

    #[test]
    fn enumerate_three_by_four_matches_brute_force() {
        let mut brute = Vec::new();
        for a in 0..=4u32 {
            for b in 0..=4u32 {
                for d in 0..=4u32 {
                    if a + b + d == 4 {
                        brute.push((a, b, d));
                    }
                }
            }
        }
        let v = enumerate_multiindices(3, 4).unwrap();
        assert_eq!(v.len(), 15);
        assert_eq!(brute.len(), 15);
        for (a, b, d) in brute {
            assert!(v.contains(&mi(&[a, b, d])));
        }
    }

    #[test]
    fn enumeration_order_agrees_with_ord() {
        let v = enumerate_multiindices(3, 5).unwrap();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumerate_capacity_error() {
        let err = enumerate_multiindices(40, 400).unwrap_err();
        assert!(matches!(err, BohrError::Capacity(_)));
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial_coeff(&mi(&[1, 1])).unwrap(), 2);
        assert_eq!(multinomial_coeff(&mi(&[2, 1, 1])).unwrap(), 12);
        assert_eq!(multinomial_coeff(&mi(&[0, 0, 0, 0])).unwrap(), 1);
        assert_eq!(multinomial_f64(&mi(&[2, 1, 1])), 12.0);
    }

    #[test]
    fn multinomial_rejects_large_degree() {
        assert!(matches!(
            multinomial_coeff(&mi(&[61])),
            Err(BohrError::Capacity(_))
        ));
        // 60!/(20!)^3 fits in u128
        let m = multinomial_coeff(&mi(&[20, 20, 20])).unwrap();
        assert!(m > 0);
    }

    #[test]
    fn multinomial_overflow_is_explicit() {
        let alpha = MultiIndex::new(vec![1; 60]).unwrap();
        assert!(matches!(multinomial_coeff(&alpha), Err(BohrError::Capacity(_))));
    }

    #[test]
    fn eval_constant_and_linear() {
        let f = TruncatedSeries::constant(2, c(0.3, -0.2)).unwrap();
        let z = Point::from_reals(&[0.5, 0.7]).unwrap();
        assert_eq!(f.eval(&z).unwrap(), c(0.3, -0.2));

        let g = TruncatedSeries::from_terms(
            2,
            [(mi(&[1, 0]), c(1.0, 0.0)), (mi(&[0, 1]), c(1.0, 0.0))],
        )
        .unwrap();
        let z = Point::from_reals(&[0.1, 0.2]).unwrap();
        assert!((g.eval(&z).unwrap() - c(0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_dimension_mismatch() {
        let f = TruncatedSeries::constant(2, c(1.0, 0.0)).unwrap();
        let z = Point::from_reals(&[0.1]).unwrap();
        assert_eq!(
            f.eval(&z).unwrap_err(),
            BohrError::DimensionMismatch {
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn block_sums_of_single_term() {
        let f = TruncatedSeries::from_terms(2, [(mi(&[1, 2]), c(0.0, 3.0))]).unwrap();
        assert_eq!(f.majorant_block_sums(), vec![0.0, 0.0, 0.0, 3.0]);
        let g = TruncatedSeries::constant(1, c(-0.4, 0.0)).unwrap();
        assert_eq!(g.majorant_block_sums(), vec![0.4]);
    }

    #[test]
    fn zero_series_majorant() {
        let f = TruncatedSeries::zero(3, 5).unwrap();
        let rep = f.majorant_sum(0.9).unwrap();
        assert_eq!(rep.value, 0.0);
        assert_eq!(rep.tail_bound, 0.0);
    }

    #[test]
    fn euler_derivative_basics() {
        let f = TruncatedSeries::constant(2, c(0.7, 0.0)).unwrap();
        assert_eq!(f.euler_derivative().nonzero_count(), 0);

        let g = TruncatedSeries::from_terms(2, [(mi(&[1, 1]), c(1.0, 0.0))]).unwrap();
        let dg = g.euler_derivative();
        assert_eq!(dg.get(&mi(&[1, 1])), c(2.0, 0.0));
    }

    #[test]
    fn area_sum_single_term() {
        let f = TruncatedSeries::from_terms(2, [(mi(&[1, 0]), c(0.6, 0.8))]).unwrap();
        let rep = f.area_sum(0.3).unwrap();
        assert!((rep.value - 0.09).abs() < 1e-15);
        let id = TruncatedSeries::from_terms(1, [(mi(&[1]), c(1.0, 0.0))]).unwrap();
        assert!((id.area_sum(0.4).unwrap().value - 0.16).abs() < 1e-15);
    }

    #[test]
    fn divergent_tail_is_reported() {
        let f = TruncatedSeries::zero(1, 3)
            .unwrap()
            .with_tail(TailBound::geometric(1.0, 2.0, 4).unwrap())
            .unwrap();
        assert!(matches!(
            f.majorant_sum(0.6),
            Err(BohrError::DivergentTail { .. })
        ));
        assert!(f.majorant_sum(0.4).is_ok());
    }

    #[test]
    fn weighted_tail_matches_closed_forms() {
        // Σ_{k≥5} 0.5^k = 0.5^5 / 0.5
        let t = weighted_geometric_tail(1.0, 0, 0.5, 5).unwrap();
        assert!((t - 0.0625).abs() < 1e-15);
        // Σ_{k≥1} k ρ^k = ρ/(1-ρ)²
        let rho = 0.3;
        let t = weighted_geometric_tail(2.0, 1, rho, 1).unwrap();
        let exact = 2.0 * rho / ((1.0 - rho) * (1.0 - rho));
        assert!(t >= exact && (t - exact) < 1e-14);
    }

    #[test]
    fn add_requires_matching_degree_with_tails() {
        let t = TailBound::geometric(1.0, 0.5, 4).unwrap();
        let f = TruncatedSeries::zero(1, 3).unwrap().with_tail(t).unwrap();
        let g = TruncatedSeries::zero(1, 5).unwrap();
        assert!(f.add(&g).is_err());
        let h = TruncatedSeries::zero(1, 3).unwrap();
        assert!(f.add(&h).is_ok());
    }

    #[test]
    fn point_inf_norm() {
        let p = Point::new(vec![c(0.3, 0.4), c(-0.2, 0.0)]).unwrap();
        assert_eq!(p.inf_norm(), 0.5);
        assert!(Point::new(vec![]).is_err());
    }
}
