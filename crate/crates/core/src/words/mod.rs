//! Alphabets, finite words and Parikh vectors.
//!
//! Infinite words only ever exist here as materialized prefixes; every
//! quantity computed downstream is "as observed on this prefix".

mod catalog;
mod generate;
mod io;

pub use catalog::{catalog_spec, default_catalog, CATALOG_NAMES};
pub use generate::{generate, GeneratorKind, Morphism, Partition, WordGeneratorSpec};
pub use io::{parse_word_file, render_word_file, WordFileError};

use std::fmt;
use std::ops::{Add, Index};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::rotation::CodingError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("alphabet must be nonempty")]
    EmptyAlphabet,
    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(char),
    #[error("alphabets are limited to 255 symbols")]
    AlphabetTooLarge,
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("factor [{start}:{end}] out of range for a word of length {len}")]
    IndexOutOfRange { start: usize, end: usize, len: usize },
    #[error("morphism is not prolongable on {0:?}")]
    NonProlongableMorphism(char),
    #[error("orbit point {position} lies on a partition boundary within the guard of an inexact parameter")]
    BoundaryAmbiguity { position: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl From<CodingError> for WordError {
    fn from(e: CodingError) -> Self {
        match e {
            CodingError::BoundaryAmbiguity { step } => WordError::BoundaryAmbiguity { position: step },
            CodingError::InvalidParameter(m) => WordError::InvalidParameter(m),
        }
    }
}

/// Ordered set of distinct symbols; the order fixes Parikh-vector indexing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, WordError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        if symbols.len() > 255 {
            return Err(WordError::AlphabetTooLarge);
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(WordError::DuplicateSymbol(*c));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Distinct symbols of `text`, sorted by code point.
    pub fn inferred(text: &str) -> Result<Self, WordError> {
        let mut symbols: Vec<char> = text.chars().collect();
        symbols.sort_unstable();
        symbols.dedup();
        Self::new(symbols)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, index: u8) -> char {
        self.symbols[index as usize]
    }

    pub fn index_of(&self, c: char) -> Option<u8> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as u8)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

/// A finite word: symbol indices into a shared alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteWord {
    alphabet: Arc<Alphabet>,
    data: Vec<u8>,
}

impl FiniteWord {
    /// Builds a word from raw indices, validating them against the alphabet.
    pub fn from_indices(alphabet: Arc<Alphabet>, data: Vec<u8>) -> Result<Self, WordError> {
        if let Some(&bad) = data.iter().find(|&&i| i as usize >= alphabet.len()) {
            return Err(WordError::InvalidParameter(format!(
                "index {bad} out of range for alphabet of size {}",
                alphabet.len()
            )));
        }
        Ok(FiniteWord { alphabet, data })
    }

    pub fn from_str_with(alphabet: Arc<Alphabet>, text: &str) -> Result<Self, WordError> {
        let data = text
            .chars()
            .map(|c| alphabet.index_of(c).ok_or(WordError::UnknownSymbol(c)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteWord { alphabet, data })
    }

    /// Word over the sorted set of its own symbols.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        let alphabet = Arc::new(Alphabet::inferred(text)?);
        Self::from_str_with(alphabet, text)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn alphabet_arc(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn indices(&self) -> &[u8] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn symbol_at(&self, i: usize) -> char {
        self.alphabet.symbol(self.data[i])
    }

    pub fn parikh(&self) -> ParikhVector {
        ParikhVector::of(self.alphabet.len(), &self.data)
    }

    /// Inclusive slice `w[start:end]`.
    pub fn factor(&self, start: usize, end: usize) -> Result<FiniteWord, WordError> {
        if start > end || end >= self.data.len() {
            return Err(WordError::IndexOutOfRange {
                start,
                end,
                len: self.data.len(),
            });
        }
        Ok(FiniteWord {
            alphabet: self.alphabet.clone(),
            data: self.data[start..=end].to_vec(),
        })
    }

    /// First `n` symbols (the whole word if shorter).
    pub fn prefix(&self, n: usize) -> FiniteWord {
        FiniteWord {
            alphabet: self.alphabet.clone(),
            data: self.data[..n.min(self.data.len())].to_vec(),
        }
    }

    /// Per-letter prefix sums: `sums[a][i]` counts letter `a` in `w[0..i)`.
    pub fn prefix_counts(&self) -> Vec<Vec<u32>> {
        let d = self.alphabet.len();
        let mut sums = vec![Vec::with_capacity(self.data.len() + 1); d];
        let mut running = vec![0u32; d];
        for s in sums.iter_mut() {
            s.push(0);
        }
        for &x in &self.data {
            running[x as usize] += 1;
            for (s, &r) in sums.iter_mut().zip(&running) {
                s.push(r);
            }
        }
        sums
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.data
            .iter()
            .try_for_each(|&i| write!(f, "{}", self.alphabet.symbol(i)))
    }
}

/// Occurrence counts per alphabet symbol, in alphabet order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ParikhVector(pub Vec<u32>);

impl ParikhVector {
    pub fn zero(d: usize) -> Self {
        ParikhVector(vec![0; d])
    }

    pub fn of(d: usize, data: &[u8]) -> Self {
        let mut counts = vec![0u32; d];
        for &x in data {
            counts[x as usize] += 1;
        }
        ParikhVector(counts)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Length of any word with this vector.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// `self − other` as signed integers.
    pub fn diff(&self, other: &ParikhVector) -> Vec<i64> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect()
    }
}

impl Index<usize> for ParikhVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl Add for &ParikhVector {
    type Output = ParikhVector;
    fn add(self, rhs: &ParikhVector) -> ParikhVector {
        ParikhVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<u32>> for ParikhVector {
    fn from(v: Vec<u32>) -> Self {
        ParikhVector(v)
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
