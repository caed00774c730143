//! Circle and torus rotations with exact parameters.
//!
//! Orbit points `{x + nα}` are located relative to partition cut points by
//! one of three engines:
//!
//! * all-rational parameters: integer arithmetic modulo a common denominator;
//! * exact irrational parameters: 128-bit fixed-point with a tracked error
//!   bound, falling back to exact [`ExactReal`] comparison whenever the
//!   enclosure of an orbit point touches a cut;
//! * inexact (`f64`) parameters: plain floating point with a guard band;
//!   points inside the guard raise [`CodingError::BoundaryAmbiguity`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{AngleValue, ExactReal, ParseRealError};
use crate::frequency::{FrequencyValue, FrequencyVector};
use crate::words::{Alphabet, FiniteWord};

/// Guard band for inexact parameters.
pub const DEFAULT_GUARD: f64 = 1e-9;

const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodingError {
    #[error("orbit point at step {step} is within the guard band of a cut")]
    BoundaryAmbiguity { step: u64 },
    #[error("invalid rotation parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RotationError {
    #[error("degenerate box: angle {0} is zero")]
    DegenerateBox(&'static str),
    #[error("frequency vector is not binary (has {0} entries)")]
    NotBinary(usize),
    #[error("frequency entry is not exact")]
    InexactFrequency,
    #[error("words have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("word over {0:?} is not a binary word containing the symbol '0'")]
    NotZeroFlagWord(String),
    #[error("both words flag the same symbol {0:?}")]
    SameFlag(char),
    #[error(transparent)]
    Coding(#[from] CodingError),
}

/// A rotation parameter: exact, or a float to be treated with a guard band.
#[derive(Debug, Clone, PartialEq)]
pub enum Angle {
    Exact(AngleValue),
    Inexact(f64),
}

impl Angle {
    pub fn to_f64(&self) -> f64 {
        match self {
            Angle::Exact(v) => v.to_f64(),
            Angle::Inexact(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&AngleValue> {
        match self {
            Angle::Exact(v) => Some(v),
            Angle::Inexact(_) => None,
        }
    }
}

impl From<AngleValue> for Angle {
    fn from(v: AngleValue) -> Self {
        Angle::Exact(v)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Exact(v) => write!(f, "{v}"),
            Angle::Inexact(v) => write!(f, "~{v}"),
        }
    }
}

/// `~0.3` is an inexact float; anything else parses as an exact expression.
impl FromStr for Angle {
    type Err = ParseRealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('~') {
            return rest
                .trim()
                .parse::<f64>()
                .map(Angle::Inexact)
                .map_err(|_| ParseRealError::BadNumber(rest.to_string()));
        }
        s.parse().map(Angle::Exact)
    }
}

/// Which side of each cut is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Partition {
    /// Intervals `[c_i, c_{i+1})`.
    #[default]
    A,
    /// Intervals `(c_i, c_{i+1}]`, with `0 ≡ 1` in the last interval.
    B,
}

impl FromStr for Partition {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" | "a" => Ok(Partition::A),
            "B" | "b" => Ok(Partition::B),
            _ => Err(format!("unknown partition {s:?} (expected A or B)")),
        }
    }
}

enum Engine {
    Rational {
        den: u128,
        x: u128,
        alpha: u128,
        cuts: Vec<u128>,
    },
    Fixed {
        x: ExactReal,
        alpha: ExactReal,
        cuts: Vec<ExactReal>,
        x_fp: u128,
        alpha_fp: u128,
        err_x: u128,
        err_alpha: u128,
        cuts_fp: Vec<u128>,
        err_cut: u128,
    },
    Float {
        x: f64,
        alpha: f64,
        cuts: Vec<f64>,
        guard: f64,
    },
}

/// Locates `{x + nα}` among the intervals cut out of `[0, 1)` by
/// `0 = c_0 < c_1 < … < c_m < 1`; `interval_at(n)` returns the index `i`.
pub struct OrbitCoder {
    engine: Engine,
    partition: Partition,
}

fn fixed_u128(v: &ExactReal) -> (u128, u128) {
    let (val, err) = v.fixed_point(128);
    let modulus = BigInt::one() << 128u32;
    let reduced = val.mod_floor(&modulus);
    (
        reduced.to_u128().expect("reduced mod 2^128"),
        err.to_u128().unwrap_or(u128::MAX / 4),
    )
}

fn in_unit_interval(v: &ExactReal) -> bool {
    v.signum() != Ordering::Less && *v < ExactReal::one()
}

impl OrbitCoder {
    /// `cuts` are the interior cut points, strictly increasing in `(0, 1)`.
    pub fn new(
        alpha: &Angle,
        x: &Angle,
        cuts: &[Angle],
        partition: Partition,
    ) -> Result<Self, CodingError> {
        Self::with_guard(alpha, x, cuts, partition, DEFAULT_GUARD)
    }

    pub fn with_guard(
        alpha: &Angle,
        x: &Angle,
        cuts: &[Angle],
        partition: Partition,
        guard: f64,
    ) -> Result<Self, CodingError> {
        let exact: Option<Vec<&ExactReal>> = std::iter::once(alpha)
            .chain(std::iter::once(x))
            .chain(cuts)
            .map(Angle::as_exact)
            .collect();
        let engine = match exact {
            Some(vals) => Self::exact_engine(vals[0], vals[1], &vals[2..])?,
            None => {
                let (a, xf) = (alpha.to_f64(), x.to_f64());
                let cf: Vec<f64> = cuts.iter().map(Angle::to_f64).collect();
                for (name, v) in [("alpha", a), ("x", xf)] {
                    if !(0.0..1.0).contains(&v) {
                        return Err(CodingError::InvalidParameter(format!("{name} = {v} not in [0,1)")));
                    }
                }
                let mut prev = 0.0;
                for &c in &cf {
                    if !(c > prev && c < 1.0) {
                        return Err(CodingError::InvalidParameter(format!(
                            "cut {c} must be increasing in (0,1)"
                        )));
                    }
                    prev = c;
                }
                let mut all = vec![0.0];
                all.extend(cf);
                Engine::Float {
                    x: xf,
                    alpha: a,
                    cuts: all,
                    guard,
                }
            }
        };
        Ok(OrbitCoder { engine, partition })
    }

    fn exact_engine(
        alpha: &ExactReal,
        x: &ExactReal,
        cuts: &[&ExactReal],
    ) -> Result<Engine, CodingError> {
        for (name, v) in [("alpha", alpha), ("x", x)] {
            if !in_unit_interval(v) {
                return Err(CodingError::InvalidParameter(format!("{name} = {v} not in [0,1)")));
            }
        }
        let mut prev = ExactReal::zero();
        for c in cuts {
            if !(**c > prev && in_unit_interval(c)) {
                return Err(CodingError::InvalidParameter(format!(
                    "cut {c} must be increasing in (0,1)"
                )));
            }
            prev = (*c).clone();
        }
        let mut all_cuts = vec![ExactReal::zero()];
        all_cuts.extend(cuts.iter().map(|c| (*c).clone()));

        let params: Vec<&ExactReal> = [alpha, x].into_iter().chain(cuts.iter().copied()).collect();
        if let Some(rats) = params.iter().map(|v| v.as_rational()).collect::<Option<Vec<_>>>() {
            let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            if den.bits() < 64 {
                let num = |r: &num_rational::BigRational| -> u128 {
                    (r.numer() * (&den / r.denom())).to_u128().expect("fits")
                };
                return Ok(Engine::Rational {
                    den: den.to_u128().expect("fits"),
                    alpha: num(rats[0]),
                    x: num(rats[1]),
                    cuts: std::iter::once(0).chain(rats[2..].iter().map(|r| num(r))).collect(),
                });
            }
        }
        let (x_fp, err_x) = fixed_u128(x);
        let (alpha_fp, err_alpha) = fixed_u128(alpha);
        let mut err_cut = 0;
        let cuts_fp = all_cuts
            .iter()
            .map(|c| {
                let (v, e) = fixed_u128(c);
                err_cut = err_cut.max(e);
                v
            })
            .collect();
        Ok(Engine::Fixed {
            x: x.clone(),
            alpha: alpha.clone(),
            cuts: all_cuts,
            x_fp,
            alpha_fp,
            err_x,
            err_alpha,
            cuts_fp,
            err_cut,
        })
    }

    /// Number of intervals.
    pub fn intervals(&self) -> usize {
        match &self.engine {
            Engine::Rational { cuts, .. } => cuts.len(),
            Engine::Fixed { cuts, .. } => cuts.len(),
            Engine::Float { cuts, .. } => cuts.len(),
        }
    }

    /// Period of the orbit when every parameter is rational.
    pub fn period(&self) -> Option<u64> {
        match &self.engine {
            Engine::Rational { den, alpha, .. } => {
                let g = alpha.gcd(den);
                Some((den / g) as u64)
            }
            _ => None,
        }
    }

    fn locate<T: PartialOrd>(&self, point: &T, zero: &T, cuts: &[T]) -> usize {
        match self.partition {
            Partition::A => cuts.iter().rposition(|c| c <= point).unwrap_or(0),
            Partition::B => {
                if point == zero {
                    cuts.len() - 1
                } else {
                    cuts.iter().rposition(|c| c < point).unwrap_or(0)
                }
            }
        }
    }

    pub fn interval_at(&self, n: u64) -> Result<usize, CodingError> {
        match &self.engine {
            Engine::Rational {
                den,
                x,
                alpha,
                cuts,
            } => {
                let p = (x + (n as u128 % den) * alpha % den) % den;
                Ok(self.locate(&p, &0, cuts))
            }
            Engine::Fixed {
                x,
                alpha,
                cuts,
                x_fp,
                alpha_fp,
                err_x,
                err_alpha,
                cuts_fp,
                err_cut,
            } => {
                let p = x_fp.wrapping_add(alpha_fp.wrapping_mul(n as u128));
                let margin = err_x
                    .saturating_add(err_alpha.saturating_mul(n as u128))
                    .saturating_add(*err_cut)
                    .saturating_add(2);
                let ambiguous = cuts_fp.iter().any(|&c| {
                    let d = p.wrapping_sub(c);
                    d.min(d.wrapping_neg()) <= margin
                });
                if !ambiguous {
                    return Ok(self.locate(&p, &0, cuts_fp));
                }
                let exact = (x + &alpha.scale_int(n as i64)).fract();
                Ok(self.locate(&exact, &ExactReal::zero(), cuts))
            }
            Engine::Float {
                x,
                alpha,
                cuts,
                guard,
            } => {
                let p = (x + n as f64 * alpha).rem_euclid(1.0);
                let ambiguous = cuts.iter().any(|&c| {
                    let d = (p - c).abs();
                    d.min(1.0 - d) < *guard
                });
                if ambiguous {
                    return Err(CodingError::BoundaryAmbiguity { step: n });
                }
                Ok(self.locate(&p, &0.0, cuts))
            }
        }
    }
}

/// `R_α` on the circle with a start point and a two-interval partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleRotation {
    pub alpha: AngleValue,
    pub start: AngleValue,
    pub partition: Partition,
}

impl CircleRotation {
    /// Reduces both parameters mod 1.
    pub fn new(alpha: AngleValue, start: AngleValue, partition: Partition) -> Self {
        CircleRotation {
            alpha: alpha.fract(),
            start: start.fract(),
            partition,
        }
    }

    pub fn orbit_point(&self, n: u64) -> AngleValue {
        orbit(&self.start, &self.alpha, n)
    }
}

/// `R_(α,β)` on the two-torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusRotation {
    pub alpha: AngleValue,
    pub beta: AngleValue,
    pub x: AngleValue,
    pub y: AngleValue,
}

impl TorusRotation {
    /// Reduces all components mod 1.
    pub fn new(alpha: AngleValue, beta: AngleValue, x: AngleValue, y: AngleValue) -> Self {
        TorusRotation {
            alpha: alpha.fract(),
            beta: beta.fract(),
            x: x.fract(),
            y: y.fract(),
        }
    }

    pub fn orbit_point(&self, n: u64) -> (AngleValue, AngleValue) {
        (orbit(&self.x, &self.alpha, n), orbit(&self.y, &self.beta, n))
    }

    fn box_coders(&self) -> Result<(OrbitCoder, OrbitCoder), RotationError> {
        if self.alpha.is_zero() {
            return Err(RotationError::DegenerateBox("alpha"));
        }
        if self.beta.is_zero() {
            return Err(RotationError::DegenerateBox("beta"));
        }
        let coder = |angle: &AngleValue, start: &AngleValue| {
            let cut = &ExactReal::one() - angle;
            OrbitCoder::new(
                &Angle::Exact(angle.clone()),
                &Angle::Exact(start.clone()),
                &[Angle::Exact(cut)],
                Partition::A,
            )
        };
        Ok((coder(&self.alpha, &self.x)?, coder(&self.beta, &self.y)?))
    }
}

fn orbit(start: &AngleValue, angle: &AngleValue, n: u64) -> AngleValue {
    let n = BigInt::from(n);
    (start + &angle.scale(&num_rational::BigRational::from_integer(n))).fract()
}

/// Reads the kept-letter frequency of a binary frequency vector as a rotation angle.
pub fn angle_from_frequencies(f: &FrequencyVector) -> Result<AngleValue, RotationError> {
    if f.values.len() != 2 {
        return Err(RotationError::NotBinary(f.values.len()));
    }
    match &f.values[1] {
        FrequencyValue::Exact(v) => Ok(v.clone()),
        FrequencyValue::Enclosure { .. } => Err(RotationError::InexactFrequency),
    }
}

/// Least `n ≤ n_max` whose orbit point lies in `[1−α, 1) × [1−β, 1)`.
///
/// With all-rational parameters the scan stops after one full period, so
/// `None` is then a proof that the box is never hit.
pub fn find_conflict(t: &TorusRotation, n_max: u64) -> Result<Option<u64>, RotationError> {
    let (cx, cy) = t.box_coders()?;
    let limit = match (cx.period(), cy.period()) {
        (Some(p), Some(q)) => n_max.min(p.lcm(&q).saturating_sub(1)),
        _ => n_max,
    };
    let hits = |n: u64| -> Result<bool, CodingError> {
        Ok(cx.interval_at(n)? == 1 && cy.interval_at(n)? == 1)
    };
    let chunks = limit / CHUNK + 1;
    let found = (0..chunks).into_par_iter().find_map_first(|c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK - 1).min(limit);
        for n in lo..=hi {
            match hits(n) {
                Ok(true) => return Some(Ok(n)),
                Ok(false) => {}
                Err(e) => return Some(Err(e)),
            }
        }
        None
    });
    found.transpose().map_err(Into::into)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HitStatistics {
    pub iterations: u64,
    pub hits: u64,
    pub hit_fraction: f64,
    pub box_area: f64,
    pub gap: f64,
}

/// Fraction of `n < iterations` landing in the box `[1−α,1) × [1−β,1)`.
pub fn equidistribution_check(
    t: &TorusRotation,
    iterations: u64,
) -> Result<HitStatistics, RotationError> {
    let (cx, cy) = t.box_coders()?;
    let chunks = iterations.div_ceil(CHUNK);
    let hits = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<u64, CodingError> {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(iterations);
            let mut count = 0;
            for n in lo..hi {
                if cx.interval_at(n)? == 1 && cy.interval_at(n)? == 1 {
                    count += 1;
                }
            }
            Ok(count)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let hit_fraction = if iterations == 0 {
        0.0
    } else {
        hits as f64 / iterations as f64
    };
    let box_area = t.alpha.to_f64() * t.beta.to_f64();
    Ok(HitStatistics {
        iterations,
        hits,
        hit_fraction,
        box_area,
        gap: (hit_fraction - box_area).abs(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeOutcome {
    /// Present only when there are no conflicts.
    pub merged: Option<FiniteWord>,
    pub conflicts: Vec<usize>,
}

fn flag_symbol(w: &FiniteWord) -> Result<(u8, char), RotationError> {
    let a = w.alphabet();
    match (a.len(), a.index_of('0')) {
        (2, Some(z)) => {
            let flag = 1 - z;
            Ok((flag, a.symbol(flag)))
        }
        _ => Err(RotationError::NotZeroFlagWord(a.to_string())),
    }
}

/// Recombines two decolored words: `1` where neither flags, the flag symbol
/// where exactly one does; positions where both flag are conflicts.
pub fn merge_and_detect(w2: &FiniteWord, w3: &FiniteWord) -> Result<MergeOutcome, RotationError> {
    if w2.len() != w3.len() {
        return Err(RotationError::LengthMismatch(w2.len(), w3.len()));
    }
    let (f2, s2) = flag_symbol(w2)?;
    let (f3, s3) = flag_symbol(w3)?;
    if s2 == s3 || s2 == '1' || s3 == '1' {
        return Err(RotationError::SameFlag(if s2 == s3 { s2 } else { '1' }));
    }
    let mut conflicts = Vec::new();
    let mut data = Vec::with_capacity(w2.len());
    for (i, (&a, &b)) in w2.indices().iter().zip(w3.indices()).enumerate() {
        match (a == f2, b == f3) {
            (true, true) => conflicts.push(i),
            (true, false) => data.push(1),
            (false, true) => data.push(2),
            (false, false) => data.push(0),
        }
    }
    let merged = if conflicts.is_empty() {
        let alphabet = Alphabet::new(['1', s2, s3]).expect("distinct symbols");
        Some(FiniteWord::from_indices(alphabet.into(), data).expect("valid indices"))
    } else {
        None
    };
    Ok(MergeOutcome { merged, conflicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{generate, GeneratorKind, WordGeneratorSpec};
    use proptest::prelude::*;

    fn ex(s: &str) -> AngleValue {
        s.parse().unwrap()
    }

    fn torus(a: &str, b: &str, x: &str, y: &str) -> TorusRotation {
        TorusRotation::new(ex(a), ex(b), ex(x), ex(y))
    }

    #[test]
    fn orbit_points() {
        let r = CircleRotation::new(ex("1/4"), ex("0"), Partition::A);
        assert_eq!(r.orbit_point(3), ex("3/4"));
        assert_eq!(r.orbit_point(4), ex("0"));
        let t = torus("1/2", "1/3", "0", "0");
        assert_eq!(t.orbit_point(6), (ex("0"), ex("0")));
        let s = CircleRotation::new(ex("sqrt2-1"), ex("0"), Partition::A);
        assert_eq!(s.orbit_point(2), ex("2*sqrt2-2"));
        assert!((s.orbit_point(2).to_f64() - 0.828_427_124_746).abs() < 1e-12);
    }

    #[test]
    fn coder_engines_agree_on_boundaries() {
        // α = 1/4 from x = 0 lands on the cut 3/4 exactly at n = 3.
        let exact = OrbitCoder::new(&Angle::Exact(ex("1/4")), &Angle::Exact(ex("0")), &[Angle::Exact(ex("3/4"))], Partition::A).unwrap();
        let got: Vec<usize> = (0..8).map(|n| exact.interval_at(n).unwrap()).collect();
        assert_eq!(got, [0, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(exact.period(), Some(4));
        let b = OrbitCoder::new(&Angle::Exact(ex("1/4")), &Angle::Exact(ex("0")), &[Angle::Exact(ex("3/4"))], Partition::B).unwrap();
        let got: Vec<usize> = (0..4).map(|n| b.interval_at(n).unwrap()).collect();
        assert_eq!(got, [1, 0, 0, 0]);
        let inexact = OrbitCoder::new(&Angle::Inexact(0.25), &Angle::Inexact(0.0), &[Angle::Inexact(0.75)], Partition::A).unwrap();
        assert_eq!(inexact.interval_at(1), Ok(0));
        assert_eq!(inexact.interval_at(0), Err(CodingError::BoundaryAmbiguity { step: 0 }));
        assert!(matches!(inexact.interval_at(3), Err(CodingError::BoundaryAmbiguity { step: 3 })));
    }

    #[test]
    fn surd_orbit_hits_cut_exactly() {
        // the cut sits exactly on the n = 1 orbit point
        let alpha = ex("sqrt2-1");
        let coder = OrbitCoder::new(&Angle::Exact(alpha.clone()), &Angle::Exact(ex("0")), &[Angle::Exact(alpha.clone())], Partition::A).unwrap();
        assert_eq!(coder.interval_at(0).unwrap(), 0);
        assert_eq!(coder.interval_at(1).unwrap(), 1);
        let coder_b = OrbitCoder::new(&Angle::Exact(alpha.clone()), &Angle::Exact(ex("0")), &[Angle::Exact(alpha)], Partition::B).unwrap();
        assert_eq!(coder_b.interval_at(0).unwrap(), 1);
        assert_eq!(coder_b.interval_at(1).unwrap(), 0);
    }

    #[test]
    fn invalid_parameters() {
        let bad = OrbitCoder::new(&Angle::Exact(ex("1")), &Angle::Exact(ex("0")), &[], Partition::A);
        assert!(matches!(bad, Err(CodingError::InvalidParameter(_))));
        let bad = OrbitCoder::new(&Angle::Exact(ex("1/3")), &Angle::Exact(ex("0")), &[Angle::Exact(ex("1/2")), Angle::Exact(ex("1/4"))], Partition::A);
        assert!(matches!(bad, Err(CodingError::InvalidParameter(_))));
        let t = torus("0", "1/3", "0", "0");
        assert_eq!(find_conflict(&t, 10), Err(RotationError::DegenerateBox("alpha")));
    }

    #[test]
    fn conflict_search_basic_cases() {
        assert_eq!(find_conflict(&torus("0.2", "0.1", "0.9", "0.95"), 10).unwrap(), Some(0));
        // Out of phase: even n puts x at 0, odd n puts y at 0.
        let t = torus("1/2", "1/2", "0", "1/2");
        assert_eq!(find_conflict(&t, 10).unwrap(), None);
        assert_eq!(find_conflict(&t, u64::MAX).unwrap(), None);
        let in_phase = torus("1/2", "1/2", "1/2", "1/2");
        assert_eq!(find_conflict(&in_phase, 5).unwrap(), Some(0));
    }

    #[test]
    fn equidistribution_rational_cases() {
        let t = torus("1/2", "1/2", "0", "1/2");
        let s = equidistribution_check(&t, 10_000).unwrap();
        assert_eq!(s.hits, 0);
        let t = torus("1/2", "1/2", "1/2", "1/2");
        let s = equidistribution_check(&t, 10_000).unwrap();
        assert_eq!(s.hit_fraction, 0.5);
        assert_eq!(s.box_area, 0.25);
    }

    #[test]
    fn merge_examples() {
        let w2 = FiniteWord::from_str_with(Alphabet::new("02".chars()).unwrap().into(), "020").unwrap();
        let w3 = FiniteWord::from_str_with(Alphabet::new("03".chars()).unwrap().into(), "300").unwrap();
        let out = merge_and_detect(&w2, &w3).unwrap();
        assert_eq!(out.merged.unwrap().to_string(), "321");
        assert!(out.conflicts.is_empty());
        let w2 = FiniteWord::from_str_with(Alphabet::new("02".chars()).unwrap().into(), "200").unwrap();
        let out = merge_and_detect(&w2, &w3).unwrap();
        assert_eq!(out.conflicts, vec![0]);
        assert!(out.merged.is_none());
        let short = FiniteWord::from_str_with(Alphabet::new("03".chars()).unwrap().into(), "30").unwrap();
        assert_eq!(merge_and_detect(&w2, &short), Err(RotationError::LengthMismatch(3, 2)));
    }

    #[test]
    fn angle_from_binary_frequencies() {
        let alpha = ex("2-phi");
        let f = FrequencyVector::exact(vec![&ExactReal::one() - &alpha, alpha.clone()]);
        assert_eq!(angle_from_frequencies(&f).unwrap(), alpha);
        let half = FrequencyVector::exact(vec![ex("1/2"), ex("1/2")]);
        assert_eq!(angle_from_frequencies(&half).unwrap(), ex("1/2"));
        let ternary = FrequencyVector::exact(vec![ex("1/3"), ex("1/3"), ex("1/3")]);
        assert_eq!(angle_from_frequencies(&ternary), Err(RotationError::NotBinary(3)));
    }

    #[test]
    fn conflict_minimality_rechecked_by_scan() {
        let t = torus("sqrt2-1", "sqrt3-1", "0", "0");
        let n = find_conflict(&t, 100_000).unwrap().expect("hit");
        let one = ExactReal::one();
        for m in 0..=n {
            let (p, q) = t.orbit_point(m);
            let inside = p >= &one - &t.alpha && q >= &one - &t.beta;
            assert_eq!(inside, m == n, "step {m}");
        }
    }

    #[test]
    fn rotation_words_flag_exactly_where_orbit_is_high() {
        let spec = WordGeneratorSpec::new(
            GeneratorKind::RotationBinary {
                alpha: Angle::Exact(ex("sqrt3-1")),
                x: Angle::Exact(ex("0")),
                partition: Partition::A,
                symbols: ['0', '3'],
            },
            2000,
        );
        let w = generate(&spec).unwrap();
        let r = CircleRotation::new(ex("sqrt3-1"), ex("0"), Partition::A);
        let cut = ex("2-sqrt3");
        for n in (0..2000).step_by(37) {
            assert_eq!(w.symbol_at(n) == '3', r.orbit_point(n as u64) >= cut);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn orbit_is_a_group_action(m in 0u64..5000, n in 0u64..5000, which in 0usize..4) {
            let alpha = ["sqrt2-1", "2-phi", "3/7", "tau-1"][which];
            let r = CircleRotation::new(ex(alpha), ex("1/5"), Partition::A);
            let shifted = CircleRotation::new(r.alpha.clone(), r.orbit_point(m), Partition::A);
            prop_assert_eq!(shifted.orbit_point(n), r.orbit_point(m + n));
        }

        #[test]
        fn rational_conflict_decided_within_period(
            (p, q) in (2i64..13).prop_flat_map(|q| (1..q, Just(q))),
            (p2, q2) in (2i64..13).prop_flat_map(|q| (1..q, Just(q))),
            xs in 0i64..12,
            ys in 0i64..12,
        ) {
            let t = TorusRotation::new(ExactReal::ratio(p, q), ExactReal::ratio(p2, q2), ExactReal::ratio(xs, 12), ExactReal::ratio(ys, 12));
            let period = (q as u64).lcm(&(q2 as u64));
            let bounded = find_conflict(&t, period * 3).unwrap();
            if let Some(n) = bounded {
                prop_assert!(n < period);
            }
            prop_assert_eq!(find_conflict(&t, u64::MAX).unwrap(), bounded);
        }
    }
}
