//! Abelian induction: recoding a word by the abelian classes of its aligned
//! length-ℓ blocks, together with the induction matrix whose columns are the
//! Parikh vectors of those classes.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::complexity::{abelian_complexity, balance_profile, classify_parikh_set, parikh_set, ComplexityError, ParikhSetShape, ShapeKind};
use crate::exact::ExactReal;
use crate::frequency::{FrequencyValue, FrequencyVector};
use crate::linalg::{self, IntMatrix};
use crate::words::{Alphabet, FiniteWord, ParikhVector, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InductionError {
    #[error("block length {ell} exceeds word length {len}")]
    BlockTooLong { ell: usize, len: usize },
    #[error("block length must be positive")]
    ZeroBlock,
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("induction matrix does not have full column rank")]
    SingularMatrix,
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("word is over {0} letters, not 3")]
    NotTernary(usize),
    #[error("no letter has deviation 2 for block lengths up to {ell_max}")]
    NoDeviationTwo { ell_max: usize },
    #[error("abelian complexity at length {ell} is {rho}, not 3")]
    NotThreeClasses { ell: usize, rho: u64 },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedAlphabet {
    pub block_length: usize,
    /// Distinct classes in lexicographic order; class `k` is induced letter `k`.
    pub classes: Vec<ParikhVector>,
}

/// `d × card(classes)` integer matrix, one column per induced letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductionMatrix {
    pub columns: Vec<ParikhVector>,
}

impl InductionMatrix {
    pub fn from_columns(columns: Vec<ParikhVector>) -> Self {
        InductionMatrix { columns }
    }

    pub fn nrows(&self) -> usize {
        self.columns.first().map_or(0, ParikhVector::dim)
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    /// Row-major entries.
    pub fn rows(&self) -> IntMatrix {
        (0..self.nrows())
            .map(|i| self.columns.iter().map(|c| c[i] as i64).collect())
            .collect()
    }

    /// `M · v` for a vector indexed by induced letters.
    pub fn apply(&self, v: &ParikhVector) -> Vec<u64> {
        (0..self.nrows())
            .map(|i| {
                self.columns
                    .iter()
                    .zip(v.counts())
                    .map(|(c, &k)| c[i] as u64 * k as u64)
                    .sum()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rows())
    }
}

#[derive(Debug, Clone)]
pub struct Induction {
    pub word: FiniteWord,
    pub alphabet: InducedAlphabet,
    pub matrix: InductionMatrix,
}

/// Names for induced letters: `a..z`, `A..Z`, then Latin-1 letters.
pub fn induced_symbol(k: usize) -> char {
    match k {
        0..26 => (b'a' + k as u8) as char,
        26..52 => (b'A' + (k - 26) as u8) as char,
        _ => char::from_u32(0xC0 + (k - 52) as u32).expect("valid code point"),
    }
}

pub fn induce(w: &FiniteWord, ell: usize) -> Result<Induction, InductionError> {
    if ell == 0 {
        return Err(InductionError::ZeroBlock);
    }
    if ell > w.len() {
        return Err(InductionError::BlockTooLong { ell, len: w.len() });
    }
    let d = w.alphabet().len();
    let blocks: Vec<ParikhVector> = w
        .indices()
        .chunks_exact(ell)
        .map(|b| ParikhVector::of(d, b))
        .collect();
    let classes: Vec<ParikhVector> = blocks.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if classes.len() > 255 {
        return Err(WordError::AlphabetTooLarge.into());
    }
    let alphabet = Arc::new(Alphabet::new((0..classes.len()).map(induced_symbol))?);
    let data = blocks
        .iter()
        .map(|b| classes.binary_search(b).expect("class present") as u8)
        .collect();
    Ok(Induction {
        word: FiniteWord::from_indices(alphabet, data)?,
        matrix: InductionMatrix::from_columns(classes.clone()),
        alphabet: InducedAlphabet {
            block_length: ell,
            classes,
        },
    })
}

/// Induced word only.
pub fn stride_reduce(w: &FiniteWord, k: usize) -> Result<FiniteWord, InductionError> {
    induce(w, k).map(|i| i.word)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockIdentityReport {
    pub block_length: usize,
    pub blocks: usize,
    /// `ab(pref_{nℓ}(w)) − M·ab(pref_n(I_ℓ w))`, per letter.
    pub differences: Vec<i64>,
}

impl BlockIdentityReport {
    pub fn holds(&self) -> bool {
        self.differences.iter().all(|&x| x == 0)
    }
}

pub fn verify_block_identity(w: &FiniteWord, ell: usize, n: usize) -> Result<BlockIdentityReport, InductionError> {
    if ell == 0 {
        return Err(InductionError::ZeroBlock);
    }
    if n * ell > w.len() {
        return Err(InductionError::BlockTooLong { ell: n * ell, len: w.len() });
    }
    let ind = induce(w, ell)?;
    let lhs = w.prefix(n * ell).parikh();
    let rhs = ind.matrix.apply(&ind.word.prefix(n).parikh());
    Ok(BlockIdentityReport {
        block_length: ell,
        blocks: n,
        differences: lhs.counts().iter().zip(&rhs).map(|(&a, &b)| a as i64 - b as i64).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Present for square matrices.
    #[serde(serialize_with = "big_opt")]
    pub determinant: Option<BigInt>,
    pub invertible: bool,
    /// Basis vector of `{q : M q = 0}`, if any.
    #[serde(serialize_with = "big_vec_opt")]
    pub kernel: Option<Vec<BigInt>>,
    /// Basis vector of `{q : ᵗM q = 0}`; such `q` satisfies `⟨q | M f'⟩ = 0` for every `f'`.
    #[serde(serialize_with = "big_vec_opt")]
    pub transpose_kernel: Option<Vec<BigInt>>,
}

fn big_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => v.into(),
        None => x.to_string().into(),
    }
}

fn big_opt<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    x.as_ref().map(big_json).serialize(s)
}

fn big_vec_opt<S: serde::Serializer>(x: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    x.as_ref().map(|v| v.iter().map(big_json).collect::<Vec<_>>()).serialize(s)
}

/// Rank, determinant and kernels of any induction matrix.
pub fn rank_report(m: &InductionMatrix) -> RankReport {
    let rows = m.rows();
    let (r, c) = (m.nrows(), m.ncols());
    let rank = linalg::rank(&rows);
    let determinant = (r == c).then(|| linalg::determinant(&rows).expect("square"));
    RankReport {
        rows: r,
        cols: c,
        rank,
        invertible: r == c && rank == r,
        determinant,
        kernel: linalg::kernel(&rows).into_iter().next(),
        transpose_kernel: linalg::kernel(&linalg::transpose(&rows)).into_iter().next(),
    }
}

pub fn matrix_rank_check(m: &InductionMatrix) -> Result<RankReport, InductionError> {
    if m.nrows() != m.ncols() {
        return Err(InductionError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(rank_report(m))
}

/// `(1/ℓ) · M · f'`.
pub fn induced_frequency_relation(
    f_induced: &FrequencyVector,
    m: &InductionMatrix,
    ell: usize,
) -> Result<FrequencyVector, InductionError> {
    if f_induced.len() != m.ncols() {
        return Err(InductionError::DimensionMismatch {
            expected: m.ncols(),
            found: f_induced.len(),
        });
    }
    let inv_ell = BigRational::new(1.into(), BigInt::from(ell));
    let rows = m.rows();
    let values = rows
        .iter()
        .map(|row| {
            if let Some(exact) = f_induced.as_exact() {
                let mut acc = ExactReal::zero();
                for (&k, f) in row.iter().zip(&exact) {
                    acc += &f.scale_int(k);
                }
                return FrequencyValue::Exact(acc.scale(&inv_ell));
            }
            let mut center = BigRational::from_integer(0.into());
            let mut radius = 0.0;
            for (&k, f) in row.iter().zip(&f_induced.values) {
                let c = match f {
                    FrequencyValue::Exact(v) => BigRational::from_float(v.to_f64()).unwrap_or_default(),
                    FrequencyValue::Enclosure { center, .. } => center.clone(),
                };
                center += c * BigRational::from_integer(k.into());
                radius += k as f64 * f.radius();
            }
            FrequencyValue::Enclosure {
                center: center * &inv_ell,
                radius: radius / ell as f64,
            }
        })
        .collect();
    Ok(FrequencyVector {
        values,
        source: f_induced.source,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationRow {
    pub n: usize,
    pub induced: u64,
    pub base: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub block_length: usize,
    pub rows: Vec<PreservationRow>,
}

impl PreservationReport {
    /// `ρ_{I_ℓ w}(n) ≤ ρ_w(nℓ)` at every tested `n`.
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.induced <= r.base)
    }
}

/// Compares `ρ_{I_ℓ w}(n)` with `ρ_w(nℓ)` for `n ≤ n_max` (clipped to the prefix).
///
/// Requires `M_ℓ` of full column rank, so distinct induced classes map to
/// distinct Parikh vectors of `w`.
pub fn verify_complexity_preservation(
    w: &FiniteWord,
    ell: usize,
    n_max: usize,
) -> Result<PreservationReport, InductionError> {
    let ind = induce(w, ell)?;
    if ind.matrix.rank() != ind.matrix.ncols() {
        return Err(InductionError::SingularMatrix);
    }
    let top = n_max.min(ind.word.len());
    let rows = (1..=top)
        .map(|n| {
            Ok(PreservationRow {
                n,
                induced: abelian_complexity(&ind.word, n)?,
                base: abelian_complexity(w, n * ell)?,
            })
        })
        .collect::<Result<_, ComplexityError>>()?;
    Ok(PreservationReport { block_length: ell, rows })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedInduction {
    pub block_length: usize,
    /// Letter of `w` with deviation 2 at the chosen length.
    pub deviating_letter: char,
    pub shape: ParikhSetShape,
    /// Induced letter whose class is the middle vector `base + e_i − e_j`, if realized by an aligned block.
    pub alpha: Option<char>,
    pub induced_length: usize,
    pub tested_range: usize,
    /// Max deviation of each induced letter over `n ≤ tested_range`.
    pub induced_deviation: Vec<(char, u32)>,
    /// Induced letters that are 1-balanced over the tested range.
    pub balanced_letters: Vec<char>,
}

/// Finds the least `ℓ ≤ ℓ_max` where some letter has window counts differing
/// by 2, then induces at `ℓ` and reports which induced letters are 1-balanced.
pub fn induce_to_balanced(w: &FiniteWord, ell_max: usize, n_max: usize) -> Result<BalancedInduction, InductionError> {
    let d = w.alphabet().len();
    if d != 3 {
        return Err(InductionError::NotTernary(d));
    }
    let ell_max = ell_max.min(w.len());
    let table = balance_profile(w, ell_max)?;
    let found = (1..=ell_max).find_map(|ell| (0..d).find(|&a| table.deviation(a, ell) >= 2).map(|a| (ell, a)));
    let Some((ell, letter)) = found else {
        return Err(InductionError::NoDeviationTwo { ell_max });
    };
    let classes = parikh_set(w, ell)?;
    if classes.len() != 3 {
        return Err(InductionError::NotThreeClasses {
            ell,
            rho: classes.len() as u64,
        });
    }
    let shape = classify_parikh_set(&classes)?;
    let ind = induce(w, ell)?;
    let alpha = match shape.kind {
        ShapeKind::Chain | ShapeKind::LShape => {
            let (i, j) = (shape.permutation[0], shape.permutation[1]);
            let mut middle = shape.base.clone();
            middle.0[i] += 1;
            middle.0[j] -= 1;
            ind.alphabet.classes.binary_search(&middle).ok().map(induced_symbol)
        }
        _ => None,
    };
    let tested_range = n_max.min(ind.word.len());
    let induced_table = balance_profile(&ind.word, tested_range)?;
    let induced_deviation: Vec<(char, u32)> = (0..ind.word.alphabet().len())
        .map(|k| (induced_symbol(k), induced_table.letter_max(k)))
        .collect();
    Ok(BalancedInduction {
        block_length: ell,
        deviating_letter: w.alphabet().symbol(letter as u8),
        shape,
        alpha,
        induced_length: ind.word.len(),
        tested_range,
        balanced_letters: induced_deviation.iter().filter(|(_, m)| *m <= 1).map(|(c, _)| *c).collect(),
        induced_deviation,
    })
}
