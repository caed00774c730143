//! Letter frequencies, bounded integer-relation search, and relation
//! extraction from words of abelian complexity at most two.
//!
//! Finite data can never establish rational independence. The contract
//! here is "certificate or bounded evidence": an exact zero residual is a
//! certificate of dependence, while the absence of a relation only says no
//! relation exists with coefficients up to the search bound.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complexity::balance_profile;
use crate::exact::ExactReal;
use crate::rotation::{Angle, OrbitCoder};
use crate::words::{FiniteWord, GeneratorKind, ParikhVector, WordGeneratorSpec};

/// Target accuracy of Perron eigenvector enclosures.
pub const PERRON_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrequencyError {
    #[error("cannot take frequencies of the empty word")]
    EmptyWord,
    #[error("substitution incidence matrix is not primitive")]
    NonPrimitiveSubstitution,
    #[error("abelian complexity {0} at this length is not low (needs at most 2 classes)")]
    NotLowComplexity(usize),
    #[error("inconsistent Parikh set: {0}")]
    InconsistentSet(String),
    #[error("binary pair of classes: no letter has a fixed count")]
    NoFixedLetter,
    #[error("generator error: {0}")]
    Generator(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyValue {
    Exact(ExactReal),
    /// `|value − center| ≤ radius`.
    Enclosure { center: BigRational, radius: f64 },
}

impl FrequencyValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            FrequencyValue::Exact(v) => v.to_f64(),
            FrequencyValue::Enclosure { center, .. } => ratio_to_f64(center),
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            FrequencyValue::Exact(_) => 0.0,
            FrequencyValue::Enclosure { radius, .. } => *radius,
        }
    }

    pub fn as_exact(&self) -> Option<&ExactReal> {
        match self {
            FrequencyValue::Exact(v) => Some(v),
            FrequencyValue::Enclosure { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencySource {
    Empirical { prefix_length: usize },
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector {
    pub values: Vec<FrequencyValue>,
    pub source: FrequencySource,
}

impl FrequencyVector {
    pub fn exact(values: Vec<ExactReal>) -> Self {
        FrequencyVector {
            values: values.into_iter().map(FrequencyValue::Exact).collect(),
            source: FrequencySource::Exact,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.values.iter().map(FrequencyValue::to_f64).collect()
    }

    /// All entries exact.
    pub fn as_exact(&self) -> Option<Vec<ExactReal>> {
        self.values.iter().map(|v| v.as_exact().cloned()).collect()
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator and denominator beyond f64 range: shift both down
        let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Prefix averages `|w|_a / |w|`, exact rationals.
pub fn empirical_frequencies(w: &FiniteWord) -> Result<FrequencyVector, FrequencyError> {
    if w.is_empty() {
        return Err(FrequencyError::EmptyWord);
    }
    let n = BigInt::from(w.len());
    let values = w
        .parikh()
        .0
        .iter()
        .map(|&c| FrequencyValue::Exact(ExactReal::from_rational(BigRational::new(c.into(), n.clone()))))
        .collect();
    Ok(FrequencyVector {
        values,
        source: FrequencySource::Empirical {
            prefix_length: w.len(),
        },
    })
}

/// Closed-form frequencies of the infinite word described by `spec`.
///
/// Rotations with irrational angle give the interval lengths; rational
/// angles are counted exactly over one period. Substitutions give the
/// normalized Perron eigenvector as certified enclosures.
pub fn exact_frequencies(spec: &WordGeneratorSpec) -> Result<FrequencyVector, FrequencyError> {
    let gen_err = |e: crate::words::WordError| FrequencyError::Generator(e.to_string());
    match &spec.kind {
        GeneratorKind::Periodic { pattern } => {
            let w = FiniteWord::parse(pattern).map_err(gen_err)?;
            empirical_frequencies(&w).map(|mut f| {
                f.source = FrequencySource::Exact;
                f
            })
        }
        GeneratorKind::RotationBinary { alpha, x, .. } => {
            let cuts = [match alpha {
                Angle::Exact(a) => Angle::Exact(&ExactReal::one() - a),
                Angle::Inexact(a) => Angle::Inexact(1.0 - a),
            }];
            rotation_frequencies(alpha, x, &cuts, spec)
        }
        GeneratorKind::RotationTernary {
            alpha, x, cut1, cut2, ..
        } => rotation_frequencies(alpha, x, &[cut1.clone(), cut2.clone()], spec),
        GeneratorKind::Substitution { morphism, .. } => {
            let m = morphism.incidence_matrix();
            let (centers, radius) = perron_vector(&m, PERRON_TOLERANCE)?;
            Ok(FrequencyVector {
                values: centers
                    .into_iter()
                    .map(|center| FrequencyValue::Enclosure { center, radius })
                    .collect(),
                source: FrequencySource::Exact,
            })
        }
    }
}

fn rotation_frequencies(
    alpha: &Angle,
    x: &Angle,
    cuts: &[Angle],
    spec: &WordGeneratorSpec,
) -> Result<FrequencyVector, FrequencyError> {
    let exact_alpha = alpha.as_exact();
    let all_exact: Option<Vec<ExactReal>> = cuts.iter().map(|c| c.as_exact().cloned()).collect();
    match (exact_alpha, all_exact) {
        (Some(a), Some(cuts_exact)) if a.is_zero() || a.is_rational() => {
            // periodic orbit: count one period exactly
            let coder = OrbitCoder::new(alpha, x, if a.is_zero() { &[] } else { cuts }, Default::default())
                .map_err(|e| FrequencyError::Generator(e.to_string()))?;
            // x + nα mod 1 repeats after the denominator of α
            let period = a.as_rational().and_then(|r| r.denom().to_u64()).unwrap_or(1);
            let mut counts = vec![0u64; spec.alphabet().map(|al| al.len()).unwrap_or(cuts_exact.len() + 1)];
            for n in 0..period {
                let i = coder
                    .interval_at(n)
                    .map_err(|e| FrequencyError::Generator(e.to_string()))?;
                counts[i] += 1;
            }
            Ok(FrequencyVector::exact(
                counts
                    .iter()
                    .map(|&c| ExactReal::from_rational(BigRational::new(c.into(), period.into())))
                    .collect(),
            ))
        }
        (Some(_), Some(cuts_exact)) => {
            let mut bounds = vec![ExactReal::zero()];
            bounds.extend(cuts_exact);
            bounds.push(ExactReal::one());
            Ok(FrequencyVector::exact(
                bounds.windows(2).map(|w| &w[1] - &w[0]).collect(),
            ))
        }
        _ => {
            let mut bounds = vec![0.0];
            bounds.extend(cuts.iter().map(Angle::to_f64));
            bounds.push(1.0);
            Ok(FrequencyVector {
                values: bounds
                    .windows(2)
                    .map(|w| FrequencyValue::Enclosure {
                        center: BigRational::from_float(w[1] - w[0]).unwrap_or_default(),
                        radius: f64::EPSILON,
                    })
                    .collect(),
                source: FrequencySource::Exact,
            })
        }
    }
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Smallest power of `m` with all entries positive, up to Wielandt's bound.
fn primitive_power(m: &[Vec<u64>]) -> Option<Vec<Vec<BigInt>>> {
    let d = m.len();
    let base: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut p = base.clone();
    let limit = (d - 1) * (d - 1) + 1;
    for _ in 0..limit {
        if p.iter().flatten().all(|x| x.is_positive()) {
            return Some(p);
        }
        p = mat_mul(&p, &base);
    }
    None
}

/// Hilbert projective distance between positive vectors.
fn hilbert_distance(x: &[BigInt], y: &[BigInt]) -> f64 {
    let logs: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| ratio_to_f64(&BigRational::new(a.clone(), b.clone())).ln())
        .collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = logs.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

/// Normalized Perron eigenvector of a primitive nonnegative matrix, as exact
/// rational centers with a common certified radius.
///
/// Iterates `x ← Pᵏx` on integer vectors where `Pᵏ` is a positive power.
/// Birkhoff's contraction coefficient `c = tanh(Δ/4)` of `Pᵏ` bounds the
/// Hilbert distance to the fixed point by `c/(1−c)` times the last step,
/// which in turn bounds the componentwise error of sum-normalized vectors.
pub fn perron_vector(m: &[Vec<u64>], tolerance: f64) -> Result<(Vec<BigRational>, f64), FrequencyError> {
    let d = m.len();
    if d == 1 {
        return Ok((vec![BigRational::one()], 0.0));
    }
    let p = primitive_power(m).ok_or(FrequencyError::NonPrimitiveSubstitution)?;
    let mut diameter: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let num = &p[i][k] * &p[j][l];
                    let den = &p[j][k] * &p[i][l];
                    diameter = diameter.max(ratio_to_f64(&BigRational::new(num, den)).ln());
                }
            }
        }
    }
    let c = (diameter / 4.0).tanh();
    let apply = |x: &[BigInt]| -> Vec<BigInt> {
        (0..d)
            .map(|i| (0..d).fold(BigInt::zero(), |acc, k| acc + &p[i][k] * &x[k]))
            .collect()
    };
    let mut prev: Vec<BigInt> = vec![BigInt::one(); d];
    let mut cur = apply(&prev);
    let mut radius = f64::INFINITY;
    for _ in 0..10_000 {
        let next = apply(&cur);
        let step = hilbert_distance(&cur, &next);
        // slack covers f64 rounding in the logarithms
        let dist = c / (1.0 - c) * step + 1e-13;
        radius = dist.exp_m1() + 1e-15;
        prev = cur;
        cur = next;
        if radius <= tolerance {
            break;
        }
        // keep integers small: divide by the common gcd
        let g = cur.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g > BigInt::one() {
            cur.iter_mut().for_each(|x| *x /= &g);
            prev.iter_mut().for_each(|x| *x /= &g);
        }
    }
    // `prev` is the iterate the bound was stated for
    let total: BigInt = prev.iter().sum();
    let centers = prev
        .into_iter()
        .map(|x| BigRational::new(x, total.clone()))
        .collect();
    Ok((centers, radius))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegerRelation {
    pub coefficients: Vec<i64>,
    /// `|q·f|`; exactly `0.0` for certificates.
    pub residual: f64,
    /// The residual is exactly zero, proving rational dependence.
    pub certificate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub coefficients: Option<Vec<i64>>,
    pub residual: Option<f64>,
    pub bound: i64,
    pub tolerance: f64,
    pub certificate: bool,
}

impl RelationReport {
    pub fn new(found: Option<&IntegerRelation>, bound: i64, tolerance: f64) -> Self {
        RelationReport {
            coefficients: found.map(|r| r.coefficients.clone()),
            residual: found.map(|r| r.residual),
            bound,
            tolerance,
            certificate: found.is_some_and(|r| r.certificate),
        }
    }
}

/// Candidate ordering: residual, then max-norm, then 1-norm, then earliest support, then lexicographic.
fn relation_key(q: &[i64]) -> (i64, i64, Vec<bool>, Vec<i64>) {
    let norm = q.iter().map(|x| x.abs()).max().unwrap_or(0);
    let l1 = q.iter().map(|x| x.abs()).sum();
    (norm, l1, q.iter().map(|&x| x == 0).collect(), q.to_vec())
}

struct Candidate {
    residual: f64,
    exact_zero: bool,
    q: Vec<i64>,
}

impl Candidate {
    fn better_than(&self, other: &Candidate) -> bool {
        let by_residual = match (self.exact_zero, other.exact_zero) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (true, true) => Ordering::Equal,
            (false, false) => self.residual.total_cmp(&other.residual),
        };
        by_residual.then_with(|| relation_key(&self.q).cmp(&relation_key(&other.q))) == Ordering::Less
    }
}

/// Exhaustive search over nonzero `q ∈ [−B, B]^d` (first nonzero entry
/// positive, gcd 1) for the `q` minimizing `|q·f|`; returned when the
/// minimum is at most `tolerance`.
pub fn integer_relation_search(f: &FrequencyVector, bound: i64, tolerance: f64) -> Option<IntegerRelation> {
    let approx: Vec<f64> = f.to_f64s();
    let radii: Vec<f64> = f.values.iter().map(FrequencyValue::radius).collect();
    let exact = f.as_exact();
    search(&approx, &radii, exact.as_deref(), bound, tolerance)
}

/// As [`integer_relation_search`] on arbitrary exact reals (entries need not be frequencies).
pub fn integer_relation_search_reals(values: &[ExactReal], bound: i64, tolerance: f64) -> Option<IntegerRelation> {
    let approx: Vec<f64> = values.iter().map(ExactReal::to_f64).collect();
    let radii = vec![0.0; values.len()];
    search(&approx, &radii, Some(values), bound, tolerance)
}

/// Integer matrix `C` (d × 6) with `f_i = (Σ_k C_ik · basis_k) / D`.
fn integer_basis_matrix(values: &[ExactReal]) -> Option<Vec<[i128; 6]>> {
    let den = values
        .iter()
        .flat_map(|v| v.basis_coefficients())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    values
        .iter()
        .map(|v| {
            let coeffs = v.basis_coefficients();
            let mut row = [0i128; 6];
            for (slot, c) in row.iter_mut().zip(coeffs.iter()) {
                *slot = (c.numer() * (&den / c.denom())).to_i128()?;
            }
            Some(row)
        })
        .collect()
}

fn search(
    approx: &[f64],
    radii: &[f64],
    exact: Option<&[ExactReal]>,
    bound: i64,
    tolerance: f64,
) -> Option<IntegerRelation> {
    let d = approx.len();
    if d == 0 || bound < 1 {
        return None;
    }
    let matrix = exact.and_then(integer_basis_matrix);
    let exact_zero = |q: &[i64]| -> Option<bool> {
        if let Some(m) = &matrix {
            return Some((0..6).all(|k| q.iter().zip(m).map(|(&qi, row)| qi as i128 * row[k]).sum::<i128>() == 0));
        }
        // coefficients too large for i128: fall back to exact arithmetic
        exact.map(|vals| {
            let mut acc = ExactReal::zero();
            for (&qi, v) in q.iter().zip(vals) {
                acc += &v.scale_int(qi);
            }
            acc.is_zero()
        })
    };
    let first_range: Vec<i64> = (0..=bound).collect();
    let best = first_range
        .into_par_iter()
        .filter_map(|q0| {
            let mut best: Option<Candidate> = None;
            let mut q = vec![0i64; d];
            q[0] = q0;
            let rest = d - 1;
            let span = (2 * bound + 1) as u64;
            let total = span.pow(rest as u32);
            for code in 0..total {
                let mut c = code;
                for slot in q.iter_mut().skip(1) {
                    *slot = (c % span) as i64 - bound;
                    c /= span;
                }
                let Some(&lead) = q.iter().find(|&&x| x != 0) else {
                    continue;
                };
                if lead < 0 {
                    continue;
                }
                if q.iter().fold(0i64, |g, &x| g.gcd(&x)) != 1 {
                    continue;
                }
                let value: f64 = q.iter().zip(approx).map(|(&qi, &fi)| qi as f64 * fi).sum();
                let spread: f64 = q.iter().zip(radii).map(|(&qi, &r)| qi.abs() as f64 * r).sum();
                let is_zero = exact_zero(&q).unwrap_or(false);
                let residual = if is_zero { 0.0 } else { value.abs() };
                if !is_zero && (residual - spread).max(0.0) > tolerance && exact.is_some() {
                    continue;
                }
                if exact.is_none() && residual > tolerance {
                    continue;
                }
                let cand = Candidate {
                    residual,
                    exact_zero: is_zero,
                    q: q.clone(),
                };
                if best.as_ref().is_none_or(|b| cand.better_than(b)) {
                    best = Some(cand);
                }
            }
            best
        })
        .reduce_with(|a, b| if b.better_than(&a) { b } else { a })?;
    if best.residual > tolerance {
        return None;
    }
    Some(IntegerRelation {
        coefficients: best.q,
        residual: best.residual,
        certificate: best.exact_zero,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum LowAbelianOutcome {
    /// One class `v` at length ℓ: the frequencies are `v/ℓ`.
    RationalFrequencies(Vec<BigRational>),
    /// Integer coefficients annihilating the frequency vector, in alphabet order.
    Relation(Vec<i64>),
}

/// Extracts the rational-dependence witness available when a word has at
/// most two abelian classes of factors of length `ell`.
///
/// Two classes must differ by `e_a − e_b`; every other letter `c` then
/// occurs exactly `k_c` times in every window, so `f_c = k_c/ℓ`. With
/// `k_c = 0` the relation is `e_c`; otherwise `Σ_{i≠c} f_i + (1 − ℓ/k_c) f_c = 0`,
/// cleared of denominators.
pub fn relation_from_low_abelian(
    parikh_set: &[ParikhVector],
    ell: u64,
) -> Result<LowAbelianOutcome, FrequencyError> {
    let mut set = parikh_set.to_vec();
    set.sort();
    set.dedup();
    if set.is_empty() {
        return Err(FrequencyError::InconsistentSet("empty set".into()));
    }
    if let Some(v) = set.iter().find(|v| v.total() != ell) {
        return Err(FrequencyError::InconsistentSet(format!("{v} does not sum to {ell}")));
    }
    match set.as_slice() {
        [v] => Ok(LowAbelianOutcome::RationalFrequencies(
            v.0.iter()
                .map(|&c| BigRational::new(c.into(), BigInt::from(ell)))
                .collect(),
        )),
        [u, v] => {
            let diff = u.diff(v);
            let changed: Vec<usize> = (0..diff.len()).filter(|&i| diff[i] != 0).collect();
            let unit_move = changed.len() == 2 && diff[changed[0]].abs() == 1 && diff[changed[0]] == -diff[changed[1]];
            if !unit_move {
                return Err(FrequencyError::InconsistentSet(format!(
                    "{u} and {v} do not differ by e_a - e_b"
                )));
            }
            let fixed: Vec<usize> = (0..diff.len()).filter(|i| !changed.contains(i)).collect();
            if fixed.is_empty() {
                return Err(FrequencyError::NoFixedLetter);
            }
            if let Some(&c) = fixed.iter().find(|&&c| u[c] == 0) {
                let mut q = vec![0i64; diff.len()];
                q[c] = 1;
                return Ok(LowAbelianOutcome::Relation(q));
            }
            let c = fixed[0];
            let k = u[c] as i64;
            let mut q = vec![k; diff.len()];
            q[c] = k - ell as i64;
            let g = q.iter().fold(0i64, |g, &x| g.gcd(&x));
            Ok(LowAbelianOutcome::Relation(q.into_iter().map(|x| x / g).collect()))
        }
        more => Err(FrequencyError::NotLowComplexity(more.len())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HubertOutcome {
    /// Alphabet smaller than three letters.
    Skipped { alphabet_size: usize },
    /// Some letter deviates by more than one; the 1-balanced premise fails.
    NotApplicable { max_deviation: u32 },
    /// 1-balanced over the tested range and a relation was found.
    Consistent { relation: IntegerRelation },
    /// 1-balanced over the tested range, but no relation up to the bound.
    Inconclusive { bound: i64 },
}

/// Search bound used by [`hubert_consistency_check`].
pub const HUBERT_BOUND: i64 = 100;

/// A 1-balanced word on three or more letters has rationally dependent
/// frequencies; on a finite prefix this can only be checked for consistency.
pub fn hubert_consistency_check(w: &FiniteWord, f: &FrequencyVector, n_max: usize) -> HubertOutcome {
    let d = w.alphabet().len();
    if d < 3 {
        return HubertOutcome::Skipped { alphabet_size: d };
    }
    let n_max = n_max.min(w.len());
    let max_deviation = match balance_profile(w, n_max) {
        Ok(table) => table.max_deviation(),
        Err(_) => 0,
    };
    if max_deviation > 1 {
        return HubertOutcome::NotApplicable { max_deviation };
    }
    match integer_relation_search(f, HUBERT_BOUND, 0.0) {
        Some(relation) => HubertOutcome::Consistent { relation },
        None => HubertOutcome::Inconclusive { bound: HUBERT_BOUND },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{catalog_spec, generate};

    fn ex(s: &str) -> ExactReal {
        s.parse().unwrap()
    }

    fn pv(v: &[u32]) -> ParikhVector {
        ParikhVector(v.to_vec())
    }

    #[test]
    fn empirical_examples() {
        let w = generate(&catalog_spec("periodic-12", 1000).unwrap()).unwrap();
        let f = empirical_frequencies(&w).unwrap();
        assert_eq!(f.as_exact().unwrap(), vec![ex("1/2"), ex("1/2")]);
        let one = FiniteWord::parse("11111").unwrap();
        assert_eq!(empirical_frequencies(&one).unwrap().as_exact().unwrap(), vec![ex("1")]);
        let empty = FiniteWord::from_str_with(one.alphabet_arc().clone(), "").unwrap();
        assert_eq!(empirical_frequencies(&empty), Err(FrequencyError::EmptyWord));
    }

    #[test]
    fn fibonacci_empirical_near_golden() {
        let w = generate(&catalog_spec("fibonacci", 10_000).unwrap()).unwrap();
        let f = empirical_frequencies(&w).unwrap().to_f64s();
        assert!((f[1] - 0.381_966_011_250_105).abs() < 1e-3);
        let sum = empirical_frequencies(&w).unwrap().as_exact().unwrap().iter().fold(ExactReal::zero(), |a, b| &a + b);
        assert_eq!(sum, ExactReal::one());
    }

    #[test]
    fn exact_frequency_examples() {
        let spec = WordGeneratorSpec::from_kv("kind=rotation-binary; alpha=sqrt2-1; x=0; len=10").unwrap();
        assert_eq!(exact_frequencies(&spec).unwrap().as_exact().unwrap(), vec![ex("2-sqrt2"), ex("sqrt2-1")]);
        let spec = WordGeneratorSpec::from_kv("kind=periodic; pattern=112; len=10").unwrap();
        assert_eq!(exact_frequencies(&spec).unwrap().as_exact().unwrap(), vec![ex("2/3"), ex("1/3")]);
        let spec = WordGeneratorSpec::from_kv("kind=rotation-binary; alpha=1/4; x=0; len=10").unwrap();
        assert_eq!(exact_frequencies(&spec).unwrap().as_exact().unwrap(), vec![ex("3/4"), ex("1/4")]);
        let spec = WordGeneratorSpec::from_kv("kind=rotation-binary; alpha=2/5; x=1/3; len=10").unwrap();
        let w = generate(&spec.with_length(5)).unwrap();
        assert_eq!(exact_frequencies(&spec).unwrap().as_exact(), empirical_frequencies(&w).unwrap().as_exact());
        let spec = catalog_spec("rotation-ternary", 10).unwrap();
        assert_eq!(
            exact_frequencies(&spec).unwrap().as_exact().unwrap(),
            vec![ex("sqrt2-1"), ex("sqrt3-sqrt2"), ex("2-sqrt3")]
        );
    }

    #[test]
    fn tribonacci_perron_enclosure() {
        let f = exact_frequencies(&catalog_spec("tribonacci", 10).unwrap()).unwrap();
        // Independent check: 1/τ, 1/τ², 1/τ³ with τ from the cubic.
        let tau = ex("tau").to_f64();
        let expected = [1.0 / tau, 1.0 / (tau * tau), 1.0 / (tau * tau * tau)];
        for (v, e) in f.values.iter().zip(expected) {
            assert!(v.radius() <= PERRON_TOLERANCE);
            assert!((v.to_f64() - e).abs() <= v.radius() + 1e-15, "{} vs {e}", v.to_f64());
        }
        let approx = f.to_f64s();
        for (a, b) in approx.iter().zip([0.5437, 0.2956, 0.1607]) {
            assert!((a - b).abs() < 1e-4);
        }
    }

    #[test]
    fn non_primitive_substitution() {
        let spec = WordGeneratorSpec::from_kv("kind=substitution; morphism=0:01,1:1; seed=0; len=10").unwrap();
        assert_eq!(exact_frequencies(&spec), Err(FrequencyError::NonPrimitiveSubstitution));
    }

    #[test]
    fn relation_search_examples() {
        let f = FrequencyVector::exact(vec![ex("1/2"), ex("1/3"), ex("1/6")]);
        let r = integer_relation_search(&f, 3, 0.0).unwrap();
        assert_eq!(r.coefficients, vec![1, -1, -1]);
        assert!(r.certificate);
        assert_eq!(r.residual, 0.0);

        let reals = [ex("sqrt2-1"), ex("sqrt3-1"), ex("3-sqrt2-sqrt3")];
        assert_eq!(integer_relation_search_reals(&reals, 50, 0.0), None);

        let alpha = ex("2-phi");
        let f = FrequencyVector::exact(vec![&ExactReal::one() - &alpha, alpha]);
        assert_eq!(integer_relation_search(&f, 50, 0.0), None);

        let thirds = FrequencyVector::exact(vec![ex("1/3"); 3]);
        assert_eq!(integer_relation_search(&thirds, 100, 0.0).unwrap().coefficients, vec![1, -1, 0]);
    }

    #[test]
    fn relation_search_with_tolerance() {
        // 0.3819 ≈ 2 − φ: continued-fraction convergents give near-relations, never certificates.
        let f = FrequencyVector::exact(vec![ex("0.6181"), ex("0.3819")]);
        let r = integer_relation_search(&f, 13, 0.02).unwrap();
        assert_eq!(r.coefficients, vec![8, -13]);
        assert!(!r.certificate);
        assert!(r.residual <= 0.02);
        assert!(integer_relation_search(&f, 13, 0.0).is_none());
        assert!(integer_relation_search(&f, 5, 0.02).is_none());
    }

    #[test]
    fn low_abelian_examples() {
        let out = relation_from_low_abelian(&[pv(&[2, 1, 1])], 4).unwrap();
        assert_eq!(
            out,
            LowAbelianOutcome::RationalFrequencies(vec![
                BigRational::new(1.into(), 2.into()),
                BigRational::new(1.into(), 4.into()),
                BigRational::new(1.into(), 4.into()),
            ])
        );
        let out = relation_from_low_abelian(&[pv(&[2, 1, 1]), pv(&[3, 0, 1])], 4).unwrap();
        assert_eq!(out, LowAbelianOutcome::Relation(vec![1, 1, -3]));
        let out = relation_from_low_abelian(&[pv(&[2, 2, 0]), pv(&[3, 1, 0])], 4).unwrap();
        assert_eq!(out, LowAbelianOutcome::Relation(vec![0, 0, 1]));
    }

    #[test]
    fn low_abelian_errors() {
        let three = [pv(&[2, 1, 1]), pv(&[3, 0, 1]), pv(&[1, 2, 1])];
        assert_eq!(relation_from_low_abelian(&three, 4), Err(FrequencyError::NotLowComplexity(3)));
        let skew = [pv(&[2, 1, 1]), pv(&[4, 0, 0])];
        assert!(matches!(relation_from_low_abelian(&skew, 4), Err(FrequencyError::InconsistentSet(_))));
        let wrong_sum = [pv(&[2, 1, 1])];
        assert!(matches!(relation_from_low_abelian(&wrong_sum, 5), Err(FrequencyError::InconsistentSet(_))));
        let binary = [pv(&[1, 1]), pv(&[2, 0])];
        assert_eq!(relation_from_low_abelian(&binary, 2), Err(FrequencyError::NoFixedLetter));
    }

    #[test]
    fn low_abelian_relation_annihilates_periodic_frequencies() {
        // "1213": length-2 windows 12, 21, 13, 31 give classes (1,1,0), (1,0,1).
        for (pattern, ell) in [("1213", 2u64), ("112113", 3), ("1231323", 7)] {
            let spec = WordGeneratorSpec::from_kv(&format!("kind=periodic; pattern={pattern}; len=200")).unwrap();
            let w = generate(&spec).unwrap();
            let set = crate::complexity::parikh_set(&w, ell as usize).unwrap();
            let f = exact_frequencies(&spec).unwrap().as_exact().unwrap();
            match relation_from_low_abelian(&set, ell) {
                Ok(LowAbelianOutcome::Relation(q)) => {
                    let mut acc = ExactReal::zero();
                    for (qi, fi) in q.iter().zip(&f) {
                        acc += &fi.scale_int(*qi);
                    }
                    assert!(acc.is_zero(), "{pattern}: {q:?}");
                }
                Ok(LowAbelianOutcome::RationalFrequencies(r)) => {
                    assert_eq!(r.into_iter().map(ExactReal::from_rational).collect::<Vec<_>>(), f);
                }
                Err(FrequencyError::NotLowComplexity(_)) => {}
                Err(e) => panic!("{pattern}: {e}"),
            }
        }
    }

    #[test]
    fn hubert_examples() {
        let spec = catalog_spec("periodic-123", 3000).unwrap();
        let w = generate(&spec).unwrap();
        match hubert_consistency_check(&w, &exact_frequencies(&spec).unwrap(), 100) {
            HubertOutcome::Consistent { relation } => assert_eq!(relation.coefficients, vec![1, -1, 0]),
            other => panic!("{other:?}"),
        }
        let fib = catalog_spec("fibonacci", 3000).unwrap();
        let w = generate(&fib).unwrap();
        assert_eq!(
            hubert_consistency_check(&w, &exact_frequencies(&fib).unwrap(), 100),
            HubertOutcome::Skipped { alphabet_size: 2 }
        );
        let trib = catalog_spec("tribonacci", 10_000).unwrap();
        let w = generate(&trib).unwrap();
        assert_eq!(
            hubert_consistency_check(&w, &exact_frequencies(&trib).unwrap(), 300),
            HubertOutcome::NotApplicable { max_deviation: 2 }
        );
    }

    #[test]
    fn empirical_converges_to_exact() {
        for name in crate::words::CATALOG_NAMES {
            let spec = catalog_spec(name, 100_000).unwrap();
            let exact = exact_frequencies(&spec).unwrap().to_f64s();
            let w = generate(&spec).unwrap();
            let errs: Vec<f64> = [1_000, 10_000, 100_000]
                .iter()
                .map(|&n| {
                    let f = empirical_frequencies(&w.prefix(n)).unwrap().to_f64s();
                    f.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
                })
                .collect();
            assert!(errs[1] <= 2.0 * errs[0] + 1e-12 && errs[2] <= 2.0 * errs[1] + 1e-12, "{name}: {errs:?}");
            assert!(errs[2] <= 1e-3, "{name}: {errs:?}");
        }
    }

    #[test]
    fn no_false_certificates_on_rationals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let vals: Vec<ExactReal> = (0..3).map(|_| ExactReal::ratio(rng.gen_range(0..50), rng.gen_range(1..30))).collect();
            if let Some(r) = integer_relation_search_reals(&vals, 6, 0.0) {
                let mut acc = ExactReal::zero();
                for (q, v) in r.coefficients.iter().zip(&vals) {
                    acc += &v.scale_int(*q);
                }
                assert!(acc.is_zero() && r.certificate);
            }
        }
    }
}
