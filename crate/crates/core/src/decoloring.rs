//! Letter-to-letter decoloring maps keeping one letter and sending every
//! other letter to a neutral symbol, plus a bounded Sturmian diagnostic.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::complexity::{abelian_complexity, balance_profile, ComplexityError};
use crate::words::{Alphabet, FiniteWord, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecoloringError {
    #[error("letter {0:?} is not in the alphabet")]
    LetterNotInAlphabet(char),
    #[error("zero symbol must differ from the kept letter {0:?}")]
    ZeroEqualsKept(char),
    #[error("word is over {0} letters, not 2")]
    NotBinary(usize),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecoloringSpec {
    pub kept_letter: char,
    pub zero_symbol: char,
}

impl DecoloringSpec {
    pub fn keep(kept_letter: char) -> Self {
        DecoloringSpec {
            kept_letter,
            zero_symbol: '0',
        }
    }

    pub fn with_zero(self, zero_symbol: char) -> Self {
        DecoloringSpec { zero_symbol, ..self }
    }

    /// Output alphabet `[zero, kept]`.
    pub fn target_alphabet(&self) -> Result<Alphabet, DecoloringError> {
        if self.zero_symbol == self.kept_letter {
            return Err(DecoloringError::ZeroEqualsKept(self.kept_letter));
        }
        Ok(Alphabet::new([self.zero_symbol, self.kept_letter])?)
    }
}

pub fn decolor(w: &FiniteWord, spec: &DecoloringSpec) -> Result<FiniteWord, DecoloringError> {
    let kept = w
        .alphabet()
        .index_of(spec.kept_letter)
        .ok_or(DecoloringError::LetterNotInAlphabet(spec.kept_letter))?;
    let target = Arc::new(spec.target_alphabet()?);
    let data = w.indices().iter().map(|&x| u8::from(x == kept)).collect();
    Ok(FiniteWord::from_indices(target, data)?)
}

/// `|pref_n(decolor w)|_0 = Σ_{a ≠ kept} |pref_n(w)|_a`, checked by direct counting.
pub fn verify_decolored_counts(w: &FiniteWord, spec: &DecoloringSpec, n: usize) -> bool {
    let Ok(b) = decolor(w, spec) else {
        return false;
    };
    let n = n.min(w.len());
    let zeros = b.indices()[..n].iter().filter(|&&x| x == 0).count();
    let others = w.indices()[..n]
        .iter()
        .filter(|&&x| w.alphabet().symbol(x) != spec.kept_letter)
        .count();
    zeros == others
}

/// Least period of `data` (KMP failure function).
pub fn least_period(data: &[u8]) -> usize {
    let n = data.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && data[i] != data[k] {
            k = fail[k - 1];
        }
        if data[i] == data[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SturmianReport {
    pub tested_range: usize,
    pub max_deviation: u32,
    pub abelian_constant_two: bool,
    /// Least period of the prefix when it is at most half the prefix length.
    pub short_period: Option<usize>,
    pub sturmian_consistent: bool,
}

impl SturmianReport {
    pub fn verdict(&self) -> &'static str {
        if self.sturmian_consistent {
            "Sturmian-consistent over tested range"
        } else {
            "not Sturmian-consistent over tested range"
        }
    }
}

pub fn sturmian_diagnostic(b: &FiniteWord, n_max: usize) -> Result<SturmianReport, DecoloringError> {
    let d = b.alphabet().len();
    if d != 2 {
        return Err(DecoloringError::NotBinary(d));
    }
    let n_max = n_max.min(b.len());
    let max_deviation = balance_profile(b, n_max)?.max_deviation();
    let abelian_constant_two = (1..=n_max).all(|n| abelian_complexity(b, n).is_ok_and(|r| r == 2));
    let period = least_period(b.indices());
    let short_period = (2 * period <= b.len()).then_some(period);
    Ok(SturmianReport {
        tested_range: n_max,
        max_deviation,
        abelian_constant_two,
        short_period,
        sturmian_consistent: max_deviation <= 1 && abelian_constant_two && short_period.is_none(),
    })
}
