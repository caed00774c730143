//! Backtracking enumeration of ternary prefixes with bounded abelian
//! complexity, and batch lemma checks over a corpus of generated words.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complexity::{
    balance_profile, check_balance_abelian_inequality, classify_parikh_set, parikh_set,
    ComplexityProfile, ShapeKind, ViolationKind,
};
use crate::decoloring::{decolor, least_period, sturmian_diagnostic, verify_decolored_counts, DecoloringSpec};
use crate::exact::ExactReal;
use crate::frequency::{
    empirical_frequencies, exact_frequencies, integer_relation_search, FrequencyError, FrequencyVector,
    IntegerRelation, LowAbelianOutcome,
};
use crate::induction::{induce, verify_block_identity, verify_complexity_preservation, InductionError};
use crate::words::{Alphabet, FiniteWord, GeneratorKind, ParikhVector, WordGeneratorSpec};

pub const DISCLAIMER: &str = "Finite prefixes only: survivors show which finite words satisfy the bound; \
they neither confirm nor refute any statement about infinite words. Finite prefixes always have rational \
frequencies, so integer relations found here are trivially expected at finite length.";

/// Relation search bound and tolerance for survivor reports.
pub const SURVIVOR_RELATION_BOUND: i64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub max_length: usize,
    pub rho_bound: usize,
    pub report_top: usize,
    /// Node budget; `None` is unbounded.
    pub node_budget: Option<u64>,
    /// Count and report only words containing all three letters.
    pub require_all_letters: bool,
    /// Fix the first letter to 1; counts are then a third of the full counts.
    pub symmetry_reduction: bool,
}

impl SearchConfig {
    pub fn new(max_length: usize) -> Self {
        SearchConfig {
            max_length,
            rho_bound: 3,
            report_top: 10,
            node_budget: None,
            require_all_letters: false,
            symmetry_reduction: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Survivor {
    pub word: String,
    pub frequencies: Vec<String>,
    pub relation: Option<IntegerRelation>,
    pub relation_note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    /// `counts_by_length[m - 1]` survivors of length `m`.
    pub counts_by_length: Vec<u64>,
    pub survivors: Vec<Survivor>,
    pub nodes_visited: u64,
    pub complete: bool,
    pub disclaimer: &'static str,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("node budget of {budget} exceeded; partial results attached")]
    ResourceBound { budget: u64, partial: Box<SearchReport> },
}

/// Window Parikh sets for every length, maintained incrementally with an undo log.
#[derive(Debug, Clone)]
pub struct WindowSets {
    prefix: Vec<[u16; 3]>,
    word: Vec<u8>,
    sets: Vec<Vec<[u16; 3]>>,
    undo: Vec<Vec<usize>>,
}

impl Default for WindowSets {
    fn default() -> Self {
        Self::new()
    }
}

impl WindowSets {
    pub fn new() -> Self {
        WindowSets {
            prefix: vec![[0; 3]],
            word: Vec::new(),
            sets: vec![Vec::new()],
            undo: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// Appends a letter; returns the largest window-set size over all lengths touched.
    pub fn push(&mut self, letter: u8) -> usize {
        let mut next = *self.prefix.last().expect("nonempty");
        next[letter as usize] += 1;
        self.prefix.push(next);
        self.word.push(letter);
        self.sets.push(Vec::new());
        let m = self.word.len();
        let mut added = Vec::new();
        let mut worst = 0;
        for n in 1..=m {
            let start = self.prefix[m - n];
            let v = [next[0] - start[0], next[1] - start[1], next[2] - start[2]];
            let set = &mut self.sets[n];
            if !set.contains(&v) {
                set.push(v);
                added.push(n);
            }
            worst = worst.max(set.len());
        }
        self.undo.push(added);
        worst
    }

    pub fn pop(&mut self) {
        let added = self.undo.pop().expect("push before pop");
        for n in added {
            self.sets[n].pop();
        }
        self.sets.pop();
        self.word.pop();
        self.prefix.pop();
    }

    /// Sorted window set for length `n`.
    pub fn set(&self, n: usize) -> Vec<[u16; 3]> {
        let mut s = self.sets[n].clone();
        s.sort();
        s
    }

    /// Largest window-set size over all lengths.
    pub fn max_rho(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }
}

struct Budget {
    limit: Option<u64>,
    used: AtomicU64,
    exhausted: AtomicBool,
}

impl Budget {
    fn take(&self) -> bool {
        let used = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        if self.limit.is_some_and(|l| used > l) {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

struct Partial {
    keep: usize,
    counts: Vec<u64>,
    survivors: Vec<Vec<u8>>,
}

fn dfs(ws: &mut WindowSets, cfg: &SearchConfig, budget: &Budget, out: &mut Partial) {
    let m = ws.len();
    let letters_ok = !cfg.require_all_letters || {
        let last = ws.prefix[m];
        last.iter().all(|&c| c > 0)
    };
    if letters_ok {
        out.counts[m - 1] += 1;
        if m == cfg.max_length && out.survivors.len() < out.keep {
            out.survivors.push(ws.word().to_vec());
        }
    }
    if m == cfg.max_length {
        return;
    }
    for letter in 0..3u8 {
        if !budget.take() {
            return;
        }
        if ws.push(letter) <= cfg.rho_bound {
            dfs(ws, cfg, budget, out);
        }
        ws.pop();
    }
}

/// Depth of the prefixes handed to parallel workers.
const SPLIT_DEPTH: usize = 4;

struct Enumeration {
    counts: Vec<u64>,
    /// Lexicographically first `keep` survivors of full length.
    survivors: Vec<Vec<u8>>,
    nodes_visited: u64,
    complete: bool,
}

/// Depth-first enumeration of words over {1,2,3} whose window Parikh sets
/// have at most `rho_bound` elements at every length.
pub fn search_rho_bounded(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    let e = enumerate(cfg, cfg.report_top)?;
    let report = SearchReport {
        config: cfg.clone(),
        counts_by_length: e.counts,
        survivors: e.survivors.iter().map(|w| survivor_entry(w)).collect(),
        nodes_visited: e.nodes_visited,
        complete: e.complete,
        disclaimer: DISCLAIMER,
    };
    if !report.complete {
        return Err(SearchError::ResourceBound {
            budget: cfg.node_budget.unwrap_or(u64::MAX),
            partial: Box::new(report),
        });
    }
    Ok(report)
}

/// Every survivor of length `max_length` (over `1`, `2`, `3`), in
/// lexicographic order; the node budget is ignored.
pub fn survivor_words(cfg: &SearchConfig) -> Result<Vec<String>, SearchError> {
    let unbounded = SearchConfig {
        node_budget: None,
        ..cfg.clone()
    };
    let e = enumerate(&unbounded, usize::MAX)?;
    Ok(e.survivors
        .iter()
        .map(|w| w.iter().map(|&a| char::from(b'1' + a)).collect())
        .collect())
}

fn enumerate(cfg: &SearchConfig, keep: usize) -> Result<Enumeration, SearchError> {
    if cfg.max_length == 0 {
        return Err(SearchError::InvalidConfig("max_length must be at least 1".into()));
    }
    if cfg.rho_bound == 0 {
        return Err(SearchError::InvalidConfig("rho_bound must be at least 1".into()));
    }
    let budget = Budget {
        limit: cfg.node_budget,
        used: AtomicU64::new(0),
        exhausted: AtomicBool::new(false),
    };
    let split = SPLIT_DEPTH.min(cfg.max_length);
    let first_letters: &[u8] = if cfg.symmetry_reduction { &[0] } else { &[0, 1, 2] };
    // all starting prefixes of length `split`, in lexicographic order
    let mut starts: Vec<Vec<u8>> = first_letters.iter().map(|&a| vec![a]).collect();
    for _ in 1..split {
        starts = starts
            .into_iter()
            .flat_map(|p| (0..3u8).map(move |a| [p.clone(), vec![a]].concat()))
            .collect();
    }
    // shorter lengths are counted separately from the shared prefixes
    let mut shallow = vec![0u64; cfg.max_length];
    let mut viable = Vec::new();
    for p in starts {
        let mut ws = WindowSets::new();
        let mut ok = true;
        for (depth, &a) in p.iter().enumerate() {
            budget.take();
            if ws.push(a) > cfg.rho_bound {
                ok = false;
                break;
            }
            let is_proper = depth + 1 < split;
            // a proper prefix is shared by three (or one) starting prefixes; count it once
            if is_proper && p[depth + 1..].iter().all(|&x| x == 0) {
                let letters_ok = !cfg.require_all_letters || ws.prefix[depth + 1].iter().all(|&c| c > 0);
                if letters_ok {
                    shallow[depth] += 1;
                }
            }
        }
        if ok {
            viable.push(ws);
        }
    }
    let partials: Vec<Partial> = viable
        .into_par_iter()
        .map(|mut ws| {
            let mut out = Partial {
                keep,
                counts: vec![0; cfg.max_length],
                survivors: Vec::new(),
            };
            dfs(&mut ws, cfg, &budget, &mut out);
            out
        })
        .collect();
    let mut counts = shallow;
    let mut survivors = Vec::new();
    for p in partials {
        for (c, x) in counts.iter_mut().zip(p.counts) {
            *c += x;
        }
        survivors.extend(p.survivors);
    }
    survivors.sort();
    survivors.truncate(keep);
    Ok(Enumeration {
        counts,
        survivors,
        nodes_visited: budget.used.load(Ordering::Relaxed),
        complete: !budget.exhausted.load(Ordering::Relaxed),
    })
}

fn survivor_entry(word: &[u8]) -> Survivor {
    let alphabet = Arc::new(Alphabet::new(['1', '2', '3']).expect("valid alphabet"));
    let w = FiniteWord::from_indices(alphabet, word.to_vec()).expect("valid word");
    let f = empirical_frequencies(&w).expect("nonempty");
    let len = w.len() as i64;
    Survivor {
        word: w.to_string(),
        frequencies: w
            .parikh()
            .counts()
            .iter()
            .map(|&c| BigRational::new((c as i64).into(), len.into()).to_string())
            .collect(),
        relation: integer_relation_search(&f, SURVIVOR_RELATION_BOUND, 0.0),
        relation_note: "trivially expected at finite length",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub word: String,
    pub check: &'static str,
    pub status: CheckStatus,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub bounds: SuiteBounds,
    pub results: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.status == CheckStatus::Fail)
    }

    pub fn status(&self, word: &str, check: &str) -> Option<CheckStatus> {
        self.results
            .iter()
            .find(|r| r.word == word && r.check == check)
            .map(|r| r.status)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteBounds {
    pub prefix_length: usize,
    pub n_max: usize,
    pub ell_min: usize,
    pub ell_max: usize,
}

impl SuiteBounds {
    fn lengths(&self, w: &FiniteWord) -> std::ops::RangeInclusive<usize> {
        self.ell_min.max(1)..=self.ell_max.min(w.len())
    }
}

impl Default for SuiteBounds {
    fn default() -> Self {
        SuiteBounds {
            prefix_length: 20_000,
            n_max: 100,
            ell_min: 1,
            ell_max: 20,
        }
    }
}

/// A corpus word: its generator and the materialized prefix to analyze.
#[derive(Debug, Clone)]
pub struct CorpusWord {
    pub name: String,
    pub spec: WordGeneratorSpec,
    pub word: FiniteWord,
}

impl CorpusWord {
    pub fn generate(name: impl Into<String>, spec: WordGeneratorSpec) -> Result<Self, crate::words::WordError> {
        let word = crate::words::generate(&spec)?;
        Ok(CorpusWord {
            name: name.into(),
            spec,
            word,
        })
    }
}

pub const SUITE_CHECKS: [&str; 9] = [
    "abelian_at_most_subword",
    "balance_inequality",
    "low_abelian_relation",
    "block_identity",
    "complexity_preservation",
    "parikh_set_shape",
    "decoloring",
    "rational_dependence",
    "periodicity",
];

type Outcome = (CheckStatus, serde_json::Value);

fn pass() -> Outcome {
    (CheckStatus::Pass, serde_json::Value::Null)
}

fn skip(reason: &str) -> Outcome {
    (CheckStatus::Skipped, serde_json::json!({ "reason": reason }))
}

fn fail(payload: serde_json::Value) -> Outcome {
    (CheckStatus::Fail, payload)
}

/// Check names run by a named suite.
pub fn suite_checks(suite: &str) -> Option<Vec<&'static str>> {
    let pick = |names: &[&'static str]| Some(names.to_vec());
    match suite {
        "lemma10" => pick(&["low_abelian_relation", "rational_dependence"]),
        "lemma16" => pick(&["block_identity", "complexity_preservation"]),
        "lemma19" => pick(&["parikh_set_shape"]),
        "lemma22" => pick(&["decoloring"]),
        "eq4" => pick(&["abelian_at_most_subword", "balance_inequality"]),
        "all" => Some(SUITE_CHECKS.to_vec()),
        _ => None,
    }
}

pub const SUITE_NAMES: [&str; 6] = ["lemma10", "lemma16", "lemma19", "lemma22", "eq4", "all"];

/// Runs every check on every corpus word; failures carry counterexample payloads.
pub fn run_lemma_suite(corpus: &[CorpusWord], bounds: SuiteBounds) -> SuiteReport {
    run_checks(corpus, bounds, &SUITE_CHECKS)
}

/// Runs the named checks (in the given order) on every corpus word.
pub fn run_checks(corpus: &[CorpusWord], bounds: SuiteBounds, checks: &[&'static str]) -> SuiteReport {
    let results = corpus
        .iter()
        .flat_map(|entry| {
            let w = &entry.word;
            let n_max = bounds.n_max.min(w.len());
            let profile = ComplexityProfile::compute(w, &entry.name, n_max).expect("n_max clipped");
            checks
                .iter()
                .map(|&check| {
                    let (status, detail) = match check {
                        "abelian_at_most_subword" => check_abelian_subword(&profile),
                        "balance_inequality" => check_inequality(&profile),
                        "low_abelian_relation" => check_low_abelian(entry, bounds),
                        "block_identity" => check_block_identity(w, bounds),
                        "complexity_preservation" => check_preservation(w, bounds),
                        "parikh_set_shape" => check_shapes(w, bounds),
                        "decoloring" => check_decoloring(w, n_max),
                        "rational_dependence" => check_rational_dependence(entry, &profile),
                        "periodicity" => check_periodicity(entry),
                        _ => skip("unknown check"),
                    };
                    CheckResult {
                        word: entry.name.clone(),
                        check,
                        status,
                        detail,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    SuiteReport { bounds, results }
}

fn check_abelian_subword(p: &ComplexityProfile) -> Outcome {
    match p.rows.iter().find(|r| r.abelian < 1 || r.abelian > r.subword) {
        Some(r) => fail(serde_json::json!({ "n": r.n, "abelian": r.abelian, "subword": r.subword })),
        None => pass(),
    }
}

fn check_inequality(p: &ComplexityProfile) -> Outcome {
    let violations = check_balance_abelian_inequality(p);
    let hard: Vec<_> = violations.iter().filter(|v| v.kind == ViolationKind::LowerBound).collect();
    if !hard.is_empty() {
        return fail(serde_json::json!({ "violations": hard }));
    }
    let advisory = violations.len();
    (
        CheckStatus::Pass,
        if advisory > 0 {
            serde_json::json!({ "advisory_upper_bound": advisory })
        } else {
            serde_json::Value::Null
        },
    )
}

/// Exact frequencies where the generator has them, else the prefix averages.
fn reference_frequencies(entry: &CorpusWord) -> Option<FrequencyVector> {
    exact_frequencies(&entry.spec)
        .ok()
        .filter(|f| f.len() == entry.word.alphabet().len())
        .or_else(|| empirical_frequencies(&entry.word).ok())
}

/// Residual of `q·f`: exact zero test where possible, else an f64 bound.
pub fn relation_residual(q: &[i64], f: &FrequencyVector) -> (bool, f64) {
    if let Some(exact) = f.as_exact() {
        let mut acc = ExactReal::zero();
        for (&qi, fi) in q.iter().zip(&exact) {
            acc += &fi.scale_int(qi);
        }
        return (acc.is_zero(), acc.to_f64().abs());
    }
    let value: f64 = q.iter().zip(f.to_f64s()).map(|(&qi, fi)| qi as f64 * fi).sum();
    let spread: f64 = q.iter().zip(&f.values).map(|(&qi, v)| qi.abs() as f64 * v.radius()).sum();
    (false, value.abs() + spread)
}

/// Tolerance for low-abelian relations checked against empirical or enclosed frequencies.
pub const EMPIRICAL_RELATION_TOLERANCE: f64 = 1e-3;

fn check_low_abelian(entry: &CorpusWord, bounds: SuiteBounds) -> Outcome {
    let w = &entry.word;
    let Some(f) = reference_frequencies(entry) else {
        return skip("no frequencies");
    };
    let mut tested = 0;
    for ell in bounds.lengths(w) {
        let set = parikh_set(w, ell).expect("ell clipped");
        if set.len() > 2 {
            continue;
        }
        let q: Vec<i64> = match crate::frequency::relation_from_low_abelian(&set, ell as u64) {
            Ok(LowAbelianOutcome::Relation(q)) => q,
            Ok(LowAbelianOutcome::RationalFrequencies(r)) => {
                let expected = FrequencyVector::exact(r.into_iter().map(ExactReal::from_rational).collect());
                tested += 1;
                let close = expected
                    .to_f64s()
                    .iter()
                    .zip(f.to_f64s())
                    .all(|(a, b)| (a - b).abs() <= EMPIRICAL_RELATION_TOLERANCE);
                let exact_match = f.as_exact().is_none_or(|e| Some(e) == expected.as_exact());
                if !(close && exact_match) {
                    return fail(serde_json::json!({ "ell": ell, "set": set }));
                }
                continue;
            }
            Err(FrequencyError::NoFixedLetter) => continue,
            Err(e) => return fail(serde_json::json!({ "ell": ell, "error": e.to_string() })),
        };
        tested += 1;
        let (zero, residual) = relation_residual(&q, &f);
        let ok = if f.as_exact().is_some() { zero } else { residual <= EMPIRICAL_RELATION_TOLERANCE };
        if !ok {
            return fail(serde_json::json!({ "ell": ell, "relation": q, "residual": residual }));
        }
    }
    if tested == 0 {
        return skip("no length with at most two classes and a fixed letter");
    }
    (CheckStatus::Pass, serde_json::json!({ "lengths_tested": tested }))
}

fn check_block_identity(w: &FiniteWord, bounds: SuiteBounds) -> Outcome {
    for ell in bounds.lengths(w) {
        let n = w.len() / ell;
        let report = verify_block_identity(w, ell, n).expect("in range");
        if !report.holds() {
            return fail(serde_json::to_value(&report).expect("serializes"));
        }
        let m = induce(w, ell).expect("in range").matrix;
        if let Some(col) = m.columns.iter().find(|c| c.total() != ell as u64) {
            return fail(serde_json::json!({ "ell": ell, "column": col }));
        }
    }
    pass()
}

fn check_preservation(w: &FiniteWord, bounds: SuiteBounds) -> Outcome {
    let mut tested = 0;
    for ell in bounds.lengths(w) {
        let n_max = (w.len() / ell).min(bounds.n_max / ell).max(1);
        match verify_complexity_preservation(w, ell, n_max) {
            Ok(r) if r.holds() => tested += 1,
            Ok(r) => {
                let bad: Vec<_> = r.rows.iter().filter(|x| x.induced > x.base).collect();
                return fail(serde_json::json!({ "ell": ell, "rows": bad }));
            }
            Err(InductionError::SingularMatrix) => {}
            Err(e) => return fail(serde_json::json!({ "ell": ell, "error": e.to_string() })),
        }
    }
    (CheckStatus::Pass, serde_json::json!({ "full_rank_lengths": tested }))
}

/// `{v+e_1, …, v+e_d}`: three classes that differ pairwise by one unit move.
pub fn is_unit_triangle(set: &[ParikhVector]) -> bool {
    set.len() == 3
        && set.iter().enumerate().all(|(i, u)| {
            set[i + 1..].iter().all(|v| {
                let diff = u.diff(v);
                diff.iter().filter(|&&x| x == 1).count() == 1 && diff.iter().filter(|&&x| x == -1).count() == 1
            })
        })
        && (0..set[0].dim()).all(|a| {
            let vals: Vec<u32> = set.iter().map(|v| v[a]).collect();
            vals.iter().max().unwrap() - vals.iter().min().unwrap() <= 1
        })
}

/// Three-class sets at lengths where a letter deviates by 2 must be Chain or
/// LShape; at other three-class lengths the set must be the unit triangle.
fn check_shapes(w: &FiniteWord, bounds: SuiteBounds) -> Outcome {
    if w.alphabet().len() != 3 {
        return skip("not ternary");
    }
    let table = balance_profile(w, bounds.ell_max.min(w.len())).expect("clipped");
    let mut shapes: BTreeMap<&'static str, usize> = BTreeMap::new();
    for ell in bounds.lengths(w) {
        let set = parikh_set(w, ell).expect("clipped");
        if set.len() != 3 {
            continue;
        }
        let kind = classify_parikh_set(&set).expect("equal sums").kind;
        let deviating = (0..3).any(|a| table.deviation(a, ell) >= 2);
        let ok = match kind {
            ShapeKind::Chain | ShapeKind::LShape => deviating,
            ShapeKind::Other => !deviating && is_unit_triangle(&set),
            _ => false,
        };
        if !ok {
            return fail(serde_json::json!({ "ell": ell, "set": set, "kind": kind }));
        }
        *shapes
            .entry(match kind {
                ShapeKind::Chain => "chain",
                ShapeKind::LShape => "lshape",
                _ => "triangle",
            })
            .or_default() += 1;
    }
    if shapes.is_empty() {
        return skip("no length with three classes");
    }
    (CheckStatus::Pass, serde_json::to_value(shapes).expect("serializes"))
}

/// For each letter that is 1-balanced over the tested range, the decolored
/// word must be 1-balanced on both letters and keep exact counts.
fn check_decoloring(w: &FiniteWord, n_max: usize) -> Outcome {
    if w.alphabet().len() != 3 {
        return skip("not ternary");
    }
    let table = balance_profile(w, n_max).expect("clipped");
    let mut tested = Vec::new();
    for (k, &c) in w.alphabet().symbols().iter().enumerate() {
        if table.letter_max(k) > 1 {
            continue;
        }
        let zero = if c == '0' { 'z' } else { '0' };
        let spec = DecoloringSpec::keep(c).with_zero(zero);
        let b = decolor(w, &spec).expect("letter present");
        if !verify_decolored_counts(w, &spec, w.len()) {
            return fail(serde_json::json!({ "letter": c, "counts": "mismatch" }));
        }
        let report = sturmian_diagnostic(&b, n_max).expect("binary");
        if report.max_deviation > 1 {
            return fail(serde_json::json!({ "letter": c, "report": report }));
        }
        tested.push(c);
    }
    if tested.is_empty() {
        return skip("no 1-balanced letter");
    }
    (CheckStatus::Pass, serde_json::json!({ "letters": tested }))
}

/// Subword complexity at most `(d−1)n` or abelian complexity at most 2 at
/// some length signals dependent frequencies; a found relation must then
/// annihilate the exact frequencies.
fn check_rational_dependence(entry: &CorpusWord, p: &ComplexityProfile) -> Outcome {
    let d = entry.word.alphabet().len();
    let Some(flag) = crate::complexity::tijdeman_flag(p, d) else {
        return skip("no length with low subword complexity");
    };
    let Some(f) = exact_frequencies(&entry.spec).ok().filter(|f| f.as_exact().is_some() && f.len() == d) else {
        return skip("no exact frequencies");
    };
    match integer_relation_search(&f, 20, 0.0) {
        Some(r) if r.certificate => (CheckStatus::Pass, serde_json::json!({ "flag_n": flag, "relation": r })),
        other => fail(serde_json::json!({ "flag_n": flag, "relation": other })),
    }
}

/// Periodic generators must produce prefixes whose least period divides the pattern length.
fn check_periodicity(entry: &CorpusWord) -> Outcome {
    let GeneratorKind::Periodic { pattern } = &entry.spec.kind else {
        return skip("not a periodic generator");
    };
    let period = pattern.chars().count();
    let w = entry.word.indices();
    if w.len() < 2 * period {
        return skip("prefix shorter than two periods");
    }
    let least = least_period(w);
    if period % least != 0 {
        let first_bad = (period..w.len()).find(|&i| w[i] != w[i - period]);
        return fail(serde_json::json!({ "least_period": least, "pattern_length": period, "position": first_bad }));
    }
    (CheckStatus::Pass, serde_json::json!({ "least_period": least }))
}

/// Flips one symbol to the next alphabet letter, for fault injection.
pub fn corrupt(w: &FiniteWord, position: usize) -> FiniteWord {
    let mut data = w.indices().to_vec();
    let d = w.alphabet().len() as u8;
    data[position] = (data[position] + 1) % d;
    FiniteWord::from_indices(w.alphabet_arc().clone(), data).expect("same alphabet")
}

/// The standard corpus: every catalog word at the given prefix length.
pub fn catalog_corpus(prefix_length: usize) -> Vec<CorpusWord> {
    crate::words::CATALOG_NAMES
        .iter()
        .map(|name| {
            let spec = crate::words::catalog_spec(name, prefix_length).expect("catalog name");
            CorpusWord::generate(*name, spec).expect("catalog generates")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Exhaustive oracle: all words of length `m` over three letters with ρ(n) ≤ bound for every n.
    fn brute_survivors(m: usize, bound: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for code in 0..3u64.pow(m as u32) {
            let mut c = code;
            let mut w = vec![0u8; m];
            for slot in w.iter_mut().rev() {
                *slot = (c % 3) as u8;
                c /= 3;
            }
            let ok = (1..=m).all(|n| {
                w.windows(n)
                    .map(|f| ParikhVector::of(3, f))
                    .collect::<HashSet<_>>()
                    .len()
                    <= bound
            });
            if ok {
                out.push(w);
            }
        }
        out
    }

    #[test]
    fn small_examples() {
        let r = search_rho_bounded(&SearchConfig::new(1)).unwrap();
        assert_eq!(r.counts_by_length, vec![3]);
        let cfg = SearchConfig {
            require_all_letters: true,
            ..SearchConfig::new(3)
        };
        let r = search_rho_bounded(&cfg).unwrap();
        assert_eq!(r.counts_by_length[2], 6);
        let words: Vec<&str> = r.survivors.iter().map(|s| s.word.as_str()).collect();
        assert_eq!(words, vec!["123", "132", "213", "231", "312", "321"]);
        assert!(search_rho_bounded(&SearchConfig::new(0)).is_err());
    }

    #[test]
    fn matches_brute_force_up_to_eight() {
        for bound in [2, 3] {
            let cfg = SearchConfig {
                rho_bound: bound,
                report_top: usize::MAX,
                ..SearchConfig::new(8)
            };
            let r = search_rho_bounded(&cfg).unwrap();
            for m in 1..=8 {
                let brute = brute_survivors(m, bound);
                assert_eq!(r.counts_by_length[m - 1], brute.len() as u64, "m={m} bound={bound}");
                if m == 8 {
                    let found: Vec<String> = r.survivors.iter().map(|s| s.word.clone()).collect();
                    let expect: Vec<String> = brute
                        .iter()
                        .map(|w| w.iter().map(|&x| (b'1' + x) as char).collect())
                        .collect();
                    assert_eq!(found, expect);
                }
            }
        }
    }

    #[test]
    fn symmetry_reduction_divides_by_three() {
        let full = search_rho_bounded(&SearchConfig::new(9)).unwrap();
        let reduced = search_rho_bounded(&SearchConfig {
            symmetry_reduction: true,
            ..SearchConfig::new(9)
        })
        .unwrap();
        for (a, b) in full.counts_by_length.iter().zip(&reduced.counts_by_length) {
            assert_eq!(*a, 3 * b);
        }
        assert!(reduced.survivors.iter().all(|s| s.word.starts_with('1')));
    }

    #[test]
    fn budget_yields_partial_report() {
        let cfg = SearchConfig {
            node_budget: Some(50),
            ..SearchConfig::new(10)
        };
        match search_rho_bounded(&cfg) {
            Err(SearchError::ResourceBound { budget, partial }) => {
                assert_eq!(budget, 50);
                assert!(!partial.complete);
                assert!(partial.nodes_visited > 50);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn survivors_carry_relations() {
        let r = search_rho_bounded(&SearchConfig::new(6)).unwrap();
        let s = &r.survivors[0];
        assert_eq!(s.word, "111111");
        assert_eq!(s.frequencies, vec!["1", "0", "0"]);
        assert_eq!(s.relation.as_ref().unwrap().coefficients, vec![0, 1, 0]);
        assert_eq!(s.relation_note, "trivially expected at finite length");
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["config", "counts_by_length", "survivors", "disclaimer"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn incremental_sets_match_recomputation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut ws = WindowSets::new();
        for _ in 0..1000 {
            if ws.is_empty() || (ws.len() < 30 && rng.gen_bool(0.6)) {
                ws.push(rng.gen_range(0..3));
            } else {
                ws.pop();
            }
            let w = ws.word().to_vec();
            for n in 1..=w.len() {
                let mut fresh: Vec<[u16; 3]> = w
                    .windows(n)
                    .map(|f| {
                        let v = ParikhVector::of(3, f);
                        [v[0] as u16, v[1] as u16, v[2] as u16]
                    })
                    .collect::<HashSet<_>>()
                    .into_iter()
                    .collect();
                fresh.sort();
                assert_eq!(ws.set(n), fresh);
            }
        }
    }

    #[test]
    fn suite_skips_ternary_checks_on_binary_words() {
        let corpus = catalog_corpus(3000);
        let report = run_lemma_suite(&corpus, SuiteBounds { prefix_length: 3000, n_max: 60, ell_min: 1, ell_max: 12 });
        assert_eq!(report.failures().count(), 0, "{}", report.to_json());
        assert_eq!(report.status("fibonacci", "parikh_set_shape"), Some(CheckStatus::Skipped));
        assert_eq!(report.status("fibonacci", "decoloring"), Some(CheckStatus::Skipped));
        assert_eq!(report.status("periodic-123", "periodicity"), Some(CheckStatus::Pass));
    }

    #[test]
    fn suite_flags_corruption() {
        let spec = crate::words::catalog_spec("periodic-12", 2000).unwrap();
        let mut entry = CorpusWord::generate("periodic-12-corrupt", spec).unwrap();
        entry.word = corrupt(&entry.word, 777);
        let report = run_lemma_suite(&[entry], SuiteBounds::default());
        assert_eq!(report.status("periodic-12-corrupt", "periodicity"), Some(CheckStatus::Fail));
        let failure = report.failures().next().unwrap();
        assert_eq!(failure.detail["position"], 777);
    }

    #[test]
    fn unit_triangle_detection() {
        let pv = |v: &[u32]| ParikhVector(v.to_vec());
        assert!(is_unit_triangle(&[pv(&[1, 0, 0]), pv(&[0, 1, 0]), pv(&[0, 0, 1])]));
        assert!(is_unit_triangle(&[pv(&[2, 1, 1]), pv(&[2, 2, 0]), pv(&[3, 1, 0])]));
        assert!(!is_unit_triangle(&[pv(&[2, 3, 1]), pv(&[3, 2, 1]), pv(&[4, 1, 1])]));
    }
}
