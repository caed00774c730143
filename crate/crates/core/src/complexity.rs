//! Subword and abelian complexity, balance deviations, and the shape of
//! three-element Parikh sets.
//!
//! Only windows lying entirely inside the given prefix are counted, so every
//! value is a lower bound for the corresponding quantity of the infinite word.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::words::{FiniteWord, ParikhVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error("length {n} out of range for a word of length {len}")]
    LengthOutOfRange { n: usize, len: usize },
    #[error("Parikh vectors have unequal lengths")]
    MixedLengths,
}

fn check_length(w: &FiniteWord, n: usize) -> Result<(), ComplexityError> {
    if n == 0 || n > w.len() {
        return Err(ComplexityError::LengthOutOfRange { n, len: w.len() });
    }
    Ok(())
}

/// Suffix automaton; counts distinct factors exactly, without hashing.
struct SuffixAutomaton {
    len: Vec<u32>,
    link: Vec<i32>,
    next: Vec<u32>,
    d: usize,
}

const NONE: u32 = u32::MAX;

impl SuffixAutomaton {
    fn build(data: &[u8], d: usize) -> Self {
        let cap = 2 * data.len() + 2;
        let mut sa = SuffixAutomaton {
            len: Vec::with_capacity(cap),
            link: Vec::with_capacity(cap),
            next: Vec::with_capacity(cap * d),
            d,
        };
        sa.push_state(0, -1);
        let mut last = 0usize;
        for &c in data {
            let c = c as usize;
            let cur = sa.push_state(sa.len[last] + 1, 0);
            let mut p = last as i32;
            while p >= 0 && sa.next[p as usize * d + c] == NONE {
                sa.next[p as usize * d + c] = cur as u32;
                p = sa.link[p as usize];
            }
            if p >= 0 {
                let p = p as usize;
                let q = sa.next[p * d + c] as usize;
                if sa.len[p] + 1 == sa.len[q] {
                    sa.link[cur] = q as i32;
                } else {
                    let clone = sa.push_state(sa.len[p] + 1, sa.link[q]);
                    let (src, dst) = (q * d, clone * d);
                    for k in 0..d {
                        sa.next[dst + k] = sa.next[src + k];
                    }
                    let mut p = p as i32;
                    while p >= 0 && sa.next[p as usize * d + c] == q as u32 {
                        sa.next[p as usize * d + c] = clone as u32;
                        p = sa.link[p as usize];
                    }
                    sa.link[q] = clone as i32;
                    sa.link[cur] = clone as i32;
                }
            }
            last = cur;
        }
        sa
    }

    fn push_state(&mut self, len: u32, link: i32) -> usize {
        self.len.push(len);
        self.link.push(link);
        self.next.extend(std::iter::repeat_n(NONE, self.d));
        self.len.len() - 1
    }

    /// `counts[n]` = number of distinct factors of length `n`, for `n ≤ n_max`.
    fn factor_counts(&self, n_max: usize) -> Vec<u64> {
        let mut delta = vec![0i64; n_max + 2];
        for v in 1..self.len.len() {
            let lo = self.len[self.link[v] as usize] as usize + 1;
            let hi = (self.len[v] as usize).min(n_max);
            if lo <= hi {
                delta[lo] += 1;
                delta[hi + 1] -= 1;
            }
        }
        let mut acc = 0i64;
        delta
            .into_iter()
            .take(n_max + 1)
            .map(|x| {
                acc += x;
                acc as u64
            })
            .collect()
    }
}

/// Distinct factor counts for every length `1..=n_max`; index 0 is unused.
pub fn subword_counts(w: &FiniteWord, n_max: usize) -> Vec<u64> {
    SuffixAutomaton::build(w.indices(), w.alphabet().len().max(1)).factor_counts(n_max)
}

pub fn subword_complexity(w: &FiniteWord, n: usize) -> Result<u64, ComplexityError> {
    check_length(w, n)?;
    Ok(subword_counts(w, n)[n])
}

/// Abelian class count and per-letter deviation for windows of length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowStats {
    pub abelian_count: u64,
    pub deviation: Vec<u32>,
}

fn window_stats_with(sums: &[Vec<u32>], len: usize, n: usize) -> WindowStats {
    let d = sums.len();
    let windows = len - n + 1;
    let count = |a: usize, i: usize| sums[a][i + n] - sums[a][i];
    let mut min = vec![u32::MAX; d];
    let mut max = vec![0u32; d];
    for (a, s) in sums.iter().enumerate() {
        for i in 0..windows {
            let c = s[i + n] - s[i];
            min[a] = min[a].min(c);
            max[a] = max[a].max(c);
        }
    }
    let deviation: Vec<u32> = min.iter().zip(&max).map(|(lo, hi)| hi - lo).collect();
    // the last coordinate is determined by the others
    let free = d.saturating_sub(1);
    let mut strides = Vec::with_capacity(free);
    let mut box_size: Option<u64> = Some(1);
    for &dev in &deviation[..free] {
        strides.push(box_size.unwrap_or(0));
        box_size = box_size.and_then(|b| b.checked_mul(dev as u64 + 1));
    }
    let key = |i: usize| -> u64 {
        (0..free)
            .map(|a| (count(a, i) - min[a]) as u64 * strides[a])
            .sum()
    };
    let abelian_count = match box_size {
        Some(size) if size <= 1 << 26 => {
            let mut seen = vec![0u64; (size as usize).div_ceil(64)];
            let mut distinct = 0u64;
            for i in 0..windows {
                let k = key(i) as usize;
                let (word, bit) = (k / 64, 1u64 << (k % 64));
                if seen[word] & bit == 0 {
                    seen[word] |= bit;
                    distinct += 1;
                }
            }
            distinct
        }
        Some(_) => {
            let mut keys: Vec<u64> = (0..windows).map(key).collect();
            keys.sort_unstable();
            keys.dedup();
            keys.len() as u64
        }
        None => {
            let set: HashSet<Vec<u32>> = (0..windows)
                .map(|i| (0..d).map(|a| count(a, i)).collect())
                .collect();
            set.len() as u64
        }
    };
    WindowStats {
        abelian_count,
        deviation,
    }
}

pub fn window_stats(w: &FiniteWord, n: usize) -> Result<WindowStats, ComplexityError> {
    check_length(w, n)?;
    Ok(window_stats_with(&w.prefix_counts(), w.len(), n))
}

pub fn abelian_complexity(w: &FiniteWord, n: usize) -> Result<u64, ComplexityError> {
    window_stats(w, n).map(|s| s.abelian_count)
}

/// Distinct Parikh vectors of length-`n` factors, sorted.
pub fn parikh_set(w: &FiniteWord, n: usize) -> Result<Vec<ParikhVector>, ComplexityError> {
    check_length(w, n)?;
    let d = w.alphabet().len();
    let data = w.indices();
    let mut counts = ParikhVector::of(d, &data[..n]).0;
    let mut set = BTreeSet::new();
    set.insert(counts.clone());
    for i in n..data.len() {
        counts[data[i] as usize] += 1;
        counts[data[i - n] as usize] -= 1;
        set.insert(counts.clone());
    }
    Ok(set.into_iter().map(ParikhVector).collect())
}

/// `deviations[n - 1][a]`: max minus min count of letter `a` over length-`n` windows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceTable {
    pub n_max: usize,
    pub deviations: Vec<Vec<u32>>,
}

impl BalanceTable {
    pub fn deviation(&self, letter: usize, n: usize) -> u32 {
        self.deviations[n - 1][letter]
    }

    /// Largest deviation of `letter` over all tested lengths.
    pub fn letter_max(&self, letter: usize) -> u32 {
        self.deviations.iter().map(|row| row[letter]).max().unwrap_or(0)
    }

    pub fn max_deviation(&self) -> u32 {
        self.deviations.iter().flatten().copied().max().unwrap_or(0)
    }

    /// C-balanced on every letter over the tested range.
    pub fn is_balanced(&self, c: u32) -> bool {
        self.max_deviation() <= c
    }
}

pub fn balance_profile(w: &FiniteWord, n_max: usize) -> Result<BalanceTable, ComplexityError> {
    if n_max > w.len() {
        return Err(ComplexityError::LengthOutOfRange { n: n_max, len: w.len() });
    }
    let sums = w.prefix_counts();
    let d = sums.len();
    let deviations = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let windows = w.len() - n + 1;
            (0..d)
                .map(|a| {
                    let s = &sums[a];
                    let (lo, hi) = (0..windows).fold((u32::MAX, 0), |(lo, hi), i| {
                        let c = s[i + n] - s[i];
                        (lo.min(c), hi.max(c))
                    });
                    hi - lo
                })
                .collect()
        })
        .collect();
    Ok(BalanceTable { n_max, deviations })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub n: usize,
    pub subword: u64,
    pub abelian: u64,
    pub balance_dev: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityProfile {
    pub word_id: String,
    pub alphabet: Vec<char>,
    pub n_max: usize,
    pub rows: Vec<ProfileRow>,
}

impl ComplexityProfile {
    pub fn compute(w: &FiniteWord, word_id: impl Into<String>, n_max: usize) -> Result<Self, ComplexityError> {
        if n_max > w.len() {
            return Err(ComplexityError::LengthOutOfRange { n: n_max, len: w.len() });
        }
        let subword = subword_counts(w, n_max);
        let sums = w.prefix_counts();
        let rows = (1..=n_max)
            .into_par_iter()
            .map(|n| {
                let stats = window_stats_with(&sums, w.len(), n);
                ProfileRow {
                    n,
                    subword: subword[n],
                    abelian: stats.abelian_count,
                    balance_dev: stats.deviation,
                }
            })
            .collect();
        Ok(ComplexityProfile {
            word_id: word_id.into(),
            alphabet: w.alphabet().symbols().to_vec(),
            n_max,
            rows,
        })
    }

    pub fn row(&self, n: usize) -> &ProfileRow {
        &self.rows[n - 1]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,subword,abelian");
        for s in &self.alphabet {
            write!(out, ",dev_{s}").unwrap();
        }
        out.push('\n');
        for row in &self.rows {
            write!(out, "{},{},{}", row.n, row.subword, row.abelian).unwrap();
            for d in &row.balance_dev {
                write!(out, ",{d}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `deviation(n) + 1 > ρ(n)`; impossible for a correct profile.
    LowerBound,
    /// `ρ(n) > (C + 1)^(d−1)` with `C` the overall tested deviation.
    UpperBoundAdvisory,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityViolation {
    pub n: usize,
    pub kind: ViolationKind,
    pub deviation: u32,
    pub abelian: u64,
    pub bound: u64,
}

/// Checks `dev(n) + 1 ≤ ρ(n) ≤ (C + 1)^(d−1)` row by row.
pub fn check_balance_abelian_inequality(profile: &ComplexityProfile) -> Vec<InequalityViolation> {
    let d = profile.alphabet.len() as u32;
    let overall = profile
        .rows
        .iter()
        .flat_map(|r| r.balance_dev.iter().copied())
        .max()
        .unwrap_or(0);
    let upper = (overall as u64 + 1).saturating_pow(d.saturating_sub(1));
    let mut out = Vec::new();
    for row in &profile.rows {
        let dev = row.balance_dev.iter().copied().max().unwrap_or(0);
        if dev as u64 + 1 > row.abelian {
            out.push(InequalityViolation {
                n: row.n,
                kind: ViolationKind::LowerBound,
                deviation: dev,
                abelian: row.abelian,
                bound: dev as u64 + 1,
            });
        }
        if row.abelian > upper {
            out.push(InequalityViolation {
                n: row.n,
                kind: ViolationKind::UpperBoundAdvisory,
                deviation: overall,
                abelian: row.abelian,
                bound: upper,
            });
        }
    }
    out
}

/// Least `n` in the profile with `p(n) ≤ (d − 1)·n`.
pub fn tijdeman_flag(profile: &ComplexityProfile, d: usize) -> Option<usize> {
    let slope = d.saturating_sub(1) as u64;
    profile
        .rows
        .iter()
        .find(|r| r.subword <= slope * r.n as u64)
        .map(|r| r.n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ShapeKind {
    Singleton,
    Pair,
    Chain,
    LShape,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParikhSetShape {
    pub kind: ShapeKind,
    pub base: ParikhVector,
    /// Letters in role order: `i, j` (and `k` for LShape), then the rest ascending.
    pub permutation: Vec<usize>,
}

fn roles(d: usize, lead: &[usize]) -> Vec<usize> {
    let mut p = lead.to_vec();
    p.extend((0..d).filter(|x| !lead.contains(x)));
    p
}

fn shifted(v: &ParikhVector, delta: &[(usize, i64)]) -> Option<ParikhVector> {
    let mut out = v.0.clone();
    for &(i, by) in delta {
        out[i] = u32::try_from(out[i] as i64 + by).ok()?;
    }
    Some(ParikhVector(out))
}

/// Matches a Parikh set against the templates Singleton, Pair,
/// Chain `{v, v+e_i−e_j, v+2e_i−2e_j}` and LShape `{v, v+e_i−e_j, v+2e_i−e_j−e_k}`,
/// trying bases in sorted order and letter roles in lexicographic order.
pub fn classify_parikh_set(s: &[ParikhVector]) -> Result<ParikhSetShape, ComplexityError> {
    let set: BTreeSet<ParikhVector> = s.iter().cloned().collect();
    let Some(first) = set.first().cloned() else {
        return Err(ComplexityError::MixedLengths);
    };
    if set.iter().any(|v| v.total() != first.total() || v.dim() != first.dim()) {
        return Err(ComplexityError::MixedLengths);
    }
    let d = first.dim();
    let shape = |kind, base: &ParikhVector, lead: &[usize]| ParikhSetShape {
        kind,
        base: base.clone(),
        permutation: roles(d, lead),
    };
    match set.len() {
        1 => return Ok(shape(ShapeKind::Singleton, &first, &[])),
        2 => {
            let second = set.last().expect("two elements");
            let diff = second.diff(&first);
            let up = diff.iter().position(|&x| x > 0);
            let down = diff.iter().position(|&x| x < 0);
            let lead: Vec<usize> = match (up, down) {
                (Some(i), Some(j)) => vec![i, j],
                _ => vec![],
            };
            return Ok(shape(ShapeKind::Pair, &first, &lead));
        }
        3 => {}
        _ => return Ok(shape(ShapeKind::Other, &first, &[])),
    }
    let matches = |base: &ParikhVector, deltas: [&[(usize, i64)]; 2]| -> bool {
        deltas.iter().all(|delta| {
            shifted(base, delta).is_some_and(|v| set.contains(&v))
        })
    };
    for base in &set {
        for i in 0..d {
            for j in (0..d).filter(|&j| j != i) {
                if matches(base, [&[(i, 1), (j, -1)], &[(i, 2), (j, -2)]]) {
                    return Ok(shape(ShapeKind::Chain, base, &[i, j]));
                }
            }
        }
    }
    for base in &set {
        for i in 0..d {
            for j in (0..d).filter(|&j| j != i) {
                for k in (0..d).filter(|&k| k != i && k != j) {
                    if matches(base, [&[(i, 1), (j, -1)], &[(i, 2), (j, -1), (k, -1)]]) {
                        return Ok(shape(ShapeKind::LShape, base, &[i, j, k]));
                    }
                }
            }
        }
    }
    Ok(shape(ShapeKind::Other, &first, &[]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{catalog_spec, generate, WordGeneratorSpec};
    use proptest::prelude::*;

    fn word(name: &str, len: usize) -> FiniteWord {
        generate(&catalog_spec(name, len).unwrap()).unwrap()
    }

    fn pv(v: &[u32]) -> ParikhVector {
        ParikhVector(v.to_vec())
    }

    fn naive_subword(w: &FiniteWord, n: usize) -> u64 {
        w.indices().windows(n).collect::<HashSet<_>>().len() as u64
    }

    fn naive_abelian(w: &FiniteWord, n: usize) -> u64 {
        let d = w.alphabet().len();
        w.indices()
            .windows(n)
            .map(|f| ParikhVector::of(d, f))
            .collect::<HashSet<_>>()
            .len() as u64
    }

    #[test]
    fn abelian_examples() {
        let p = word("periodic-12", 100);
        assert_eq!(abelian_complexity(&p, 4).unwrap(), 1);
        assert_eq!(abelian_complexity(&p, 3).unwrap(), 2);
        assert_eq!(abelian_complexity(&word("fibonacci", 5000), 10).unwrap(), 2);
        assert_eq!(abelian_complexity(&word("tribonacci", 100), 1).unwrap(), 3);
        assert_eq!(
            abelian_complexity(&p, 101),
            Err(ComplexityError::LengthOutOfRange { n: 101, len: 100 })
        );
        assert!(abelian_complexity(&p, 0).is_err());
    }

    #[test]
    fn subword_examples() {
        assert_eq!(subword_complexity(&word("fibonacci", 10_000), 7).unwrap(), 8);
        assert_eq!(subword_complexity(&word("periodic-12", 100), 5).unwrap(), 2);
        assert_eq!(subword_complexity(&FiniteWord::parse("1111").unwrap(), 3).unwrap(), 1);
    }

    #[test]
    fn automaton_matches_naive_on_catalog() {
        for name in crate::words::CATALOG_NAMES {
            let w = word(name, 2000);
            let counts = subword_counts(&w, 60);
            for n in 1..=60 {
                assert_eq!(counts[n], naive_subword(&w, n), "{name} n={n}");
            }
        }
    }

    #[test]
    fn balance_examples() {
        assert!(balance_profile(&word("fibonacci", 5000), 200).unwrap().is_balanced(1));
        assert!(balance_profile(&word("periodic-12", 100), 50).unwrap().is_balanced(1));
        let w = word("tribonacci", 10_000);
        let table = balance_profile(&w, 300).unwrap();
        // brute-force oracle over explicit windows
        let d = 3;
        let mut oracle = 0;
        for n in (1..=300).step_by(7) {
            let vecs: Vec<ParikhVector> = w.indices().windows(n).map(|f| ParikhVector::of(d, f)).collect();
            for a in 0..d {
                let hi = vecs.iter().map(|v| v[a]).max().unwrap();
                let lo = vecs.iter().map(|v| v[a]).min().unwrap();
                assert_eq!(table.deviation(a, n), hi - lo);
                oracle = oracle.max(hi - lo);
            }
        }
        assert_eq!(table.max_deviation(), 2);
        assert_eq!(oracle, 2);
    }

    #[test]
    fn inequality_examples() {
        let fib = ComplexityProfile::compute(&word("fibonacci", 5000), "fibonacci", 200).unwrap();
        assert!(check_balance_abelian_inequality(&fib).is_empty());
        let constant = FiniteWord::parse("1111111").unwrap();
        let p = ComplexityProfile::compute(&constant, "constant", 7).unwrap();
        assert!(check_balance_abelian_inequality(&p).is_empty());
        let trib = ComplexityProfile::compute(&word("tribonacci", 20_000), "tribonacci", 300).unwrap();
        assert!(check_balance_abelian_inequality(&trib).is_empty());
    }

    #[test]
    fn inequality_reports_forged_rows() {
        let mut p = ComplexityProfile::compute(&word("fibonacci", 500), "fibonacci", 10).unwrap();
        p.rows[3].balance_dev = vec![4, 4];
        let v = check_balance_abelian_inequality(&p);
        assert!(v.iter().any(|x| x.n == 4 && x.kind == ViolationKind::LowerBound));
        let mut p = ComplexityProfile::compute(&word("fibonacci", 500), "fibonacci", 10).unwrap();
        p.rows[2].abelian = 9;
        let v = check_balance_abelian_inequality(&p);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::UpperBoundAdvisory);
    }

    #[test]
    fn tijdeman_examples() {
        let p = ComplexityProfile::compute(&word("periodic-12", 100), "p", 10).unwrap();
        assert_eq!(tijdeman_flag(&p, 2), Some(2));
        let f = ComplexityProfile::compute(&word("fibonacci", 5000), "f", 100).unwrap();
        assert_eq!(tijdeman_flag(&f, 2), None);
        let c = ComplexityProfile::compute(&FiniteWord::parse("1").unwrap(), "c", 1).unwrap();
        assert_eq!(tijdeman_flag(&c, 1), None);
    }

    #[test]
    fn csv_and_json() {
        let p = ComplexityProfile::compute(&word("periodic-12", 20), "periodic-12", 3).unwrap();
        assert_eq!(p.to_csv(), "n,subword,abelian,dev_1,dev_2\n1,2,2,1,1\n2,2,1,0,0\n3,2,2,1,1\n");
        let json: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(json["rows"][1]["abelian"], 1);
        assert_eq!(json["word_id"], "periodic-12");
    }

    #[test]
    fn classify_examples() {
        let s = classify_parikh_set(&[pv(&[2, 3, 1]), pv(&[3, 2, 1]), pv(&[4, 2, 0])]).unwrap();
        assert_eq!(s.kind, ShapeKind::LShape);
        assert_eq!(s.base, pv(&[2, 3, 1]));
        assert_eq!(s.permutation, vec![0, 1, 2]);
        let s = classify_parikh_set(&[pv(&[2, 3, 1]), pv(&[3, 2, 1]), pv(&[4, 1, 1])]).unwrap();
        assert_eq!(s.kind, ShapeKind::Chain);
        assert_eq!(s.base, pv(&[2, 3, 1]));
        assert_eq!(classify_parikh_set(&[pv(&[1, 1, 1])]).unwrap().kind, ShapeKind::Singleton);
        let pair = classify_parikh_set(&[pv(&[1, 2, 1]), pv(&[2, 1, 1])]).unwrap();
        assert_eq!((pair.kind, pair.permutation), (ShapeKind::Pair, vec![0, 1, 2]));
        let tri = classify_parikh_set(&[pv(&[1, 0, 0]), pv(&[0, 1, 0]), pv(&[0, 0, 1])]).unwrap();
        assert_eq!(tri.kind, ShapeKind::Other);
        assert_eq!(
            classify_parikh_set(&[pv(&[1, 0, 0]), pv(&[1, 1, 0])]),
            Err(ComplexityError::MixedLengths)
        );
    }

    fn ternary_word() -> impl Strategy<Value = FiniteWord> {
        prop::collection::vec(0u8..3, 1..40).prop_map(|v| {
            let text: String = v.iter().map(|&x| (b'1' + x) as char).collect();
            let alphabet = std::sync::Arc::new(crate::words::Alphabet::new(['1', '2', '3']).unwrap());
            FiniteWord::from_str_with(alphabet, &text).unwrap()
        })
    }

    #[test]
    fn abelian_oracle_exhaustive_small() {
        let alphabet = std::sync::Arc::new(crate::words::Alphabet::new(['1', '2', '3']).unwrap());
        for len in 1..=8u32 {
            for code in 0..3u32.pow(len) {
                let mut c = code;
                let data: Vec<u8> = (0..len)
                    .map(|_| {
                        let x = (c % 3) as u8;
                        c /= 3;
                        x
                    })
                    .collect();
                let w = FiniteWord::from_indices(alphabet.clone(), data).unwrap();
                for n in 1..=len as usize {
                    assert_eq!(abelian_complexity(&w, n).unwrap(), naive_abelian(&w, n));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn abelian_at_most_subword(w in ternary_word()) {
            let p = ComplexityProfile::compute(&w, "w", w.len()).unwrap();
            for row in &p.rows {
                prop_assert!(1 <= row.abelian && row.abelian <= row.subword);
                prop_assert_eq!(row.subword, naive_subword(&w, row.n));
                prop_assert_eq!(row.abelian, parikh_set(&w, row.n).unwrap().len() as u64);
            }
        }

        #[test]
        fn lower_bound_holds_on_prefixes(w in ternary_word()) {
            let p = ComplexityProfile::compute(&w, "w", w.len()).unwrap();
            prop_assert!(check_balance_abelian_inequality(&p).is_empty());
        }

        #[test]
        fn classification_is_permutation_invariant(
            base in prop::collection::vec(2u32..6, 3),
            picks in prop::collection::vec((0usize..3, 0usize..3), 2),
            perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
        ) {
            let mut set = vec![pv(&base)];
            let mut cur = base.clone();
            for (i, j) in picks {
                if i != j {
                    cur[i] += 1;
                    cur[j] -= 1;
                }
                set.push(pv(&cur));
            }
            let relabel = |v: &ParikhVector| ParikhVector(perm.iter().map(|&p| v[p]).collect());
            let moved: Vec<ParikhVector> = set.iter().map(relabel).collect();
            prop_assert_eq!(
                classify_parikh_set(&set).unwrap().kind,
                classify_parikh_set(&moved).unwrap().kind
            );
        }
    }

    #[test]
    fn parallel_profile_is_deterministic() {
        let spec = WordGeneratorSpec::from_kv("kind=periodic; pattern=1123; len=500").unwrap();
        let w = generate(&spec).unwrap();
        let a = ComplexityProfile::compute(&w, "x", 100).unwrap();
        let b = ComplexityProfile::compute(&w, "x", 100).unwrap();
        assert_eq!(a, b);
    }
}
