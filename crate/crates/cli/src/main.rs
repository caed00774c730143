//! `wordlab`: generators, complexity profiles, relation search, induction,
//! decoloring, torus rotations and the verification suites from the shell.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use wordlab::complexity::{parikh_set, ComplexityProfile};
use wordlab::decoloring::{decolor, sturmian_diagnostic, DecoloringSpec};
use wordlab::exact::{AngleValue, ExactReal};
use wordlab::frequency::{
    empirical_frequencies, exact_frequencies, integer_relation_search, integer_relation_search_reals,
    relation_from_low_abelian, FrequencyValue, FrequencyVector, LowAbelianOutcome, RelationReport,
};
use wordlab::harness::{
    run_checks, search_rho_bounded, suite_checks, CorpusWord, SearchConfig, SearchError, SuiteBounds, SUITE_NAMES,
};
use wordlab::induction::{induce, rank_report};
use wordlab::rotation::{equidistribution_check, find_conflict, Angle, Partition, TorusRotation};
use wordlab::words::{
    catalog_spec, generate, parse_word_file, render_word_file, FiniteWord, GeneratorKind, Morphism,
    WordGeneratorSpec,
};

const DEFAULT_PRECISION: u32 = 64;
const MIN_PRECISION: u32 = 16;
const PRECISION_ENV: &str = "WORDLAB_PRECISION";

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("{0}")]
    Verify(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Compute(_) => 2,
            Failure::Verify(_) => 3,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute(e: impl std::fmt::Display) -> Failure {
    Failure::Compute(e.to_string())
}

type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "wordlab", version, about = "Combinatorics on words: complexity, frequencies, induction and rotations")]
struct Cli {
    /// Decimal digits for printed reals (overrides WORDLAB_PRECISION; at least 16).
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a word prefix and write it as a word file.
    Gen(GenArgs),
    /// Subword, abelian and balance profile of a word file.
    Profile(ProfileArgs),
    /// Bounded integer-relation search on letter frequencies or given reals.
    Relation(RelationArgs),
    /// Aligned block induction of a word file.
    Induce(InduceArgs),
    /// Keep one letter and send the others to a neutral symbol.
    Decolor(DecolorArgs),
    /// First orbit point of a torus rotation inside the conflict box.
    Conflict(ConflictArgs),
    /// Exhaustive search for ternary words of bounded abelian complexity.
    Search(SearchArgs),
    /// Run a verification suite on catalog words.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true)))]
struct GenArgs {
    /// Periodic word with this pattern.
    #[arg(long, group = "source")]
    periodic: Option<String>,
    /// Substitution fixed point, rules like "0:01,1:0".
    #[arg(long, group = "source")]
    subst: Option<String>,
    /// Seed letter of the substitution (default: first rule).
    #[arg(long, requires = "subst")]
    seed: Option<char>,
    /// Binary rotation coding (needs --alpha).
    #[arg(long, group = "source", requires = "alpha")]
    rot_binary: bool,
    /// Ternary rotation coding (needs --alpha, --cut1, --cut2).
    #[arg(long, group = "source", requires_all = ["alpha", "cut1", "cut2"])]
    rot_ternary: bool,
    /// Named catalog word.
    #[arg(long, group = "source")]
    catalog: Option<String>,
    /// key=value generator file.
    #[arg(long, group = "source")]
    spec: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, default_value = "0")]
    x: String,
    /// Partition A ([c, c')) or B ((c, c']).
    #[arg(long, default_value = "A")]
    partition: String,
    #[arg(long)]
    cut1: Option<String>,
    #[arg(long)]
    cut2: Option<String>,
    /// Output symbols of the rotation coding.
    #[arg(long)]
    symbols: Option<String>,
    /// Prefix length (default 10000; overrides a --spec file's len).
    #[arg(long)]
    len: Option<usize>,
    /// Output word file (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ProfileArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 200)]
    n_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true)))]
struct RelationArgs {
    /// Comma-separated exact reals, e.g. "sqrt2-1,sqrt3-1,3-sqrt2-sqrt3".
    #[arg(long, group = "input")]
    values: Option<String>,
    /// Empirical frequencies of a word file.
    #[arg(long, group = "input")]
    word: Option<PathBuf>,
    /// Exact frequencies of a catalog word.
    #[arg(long, group = "input")]
    catalog: Option<String>,
    /// Max-norm bound on the coefficients.
    #[arg(long, default_value_t = 50)]
    bound: i64,
    /// Residual tolerance (default 0 for exact inputs, 1e-6 otherwise).
    #[arg(long)]
    tol: Option<f64>,
    /// Extract the relation from the abelian classes of this length instead (needs --word).
    #[arg(long, requires = "word")]
    low_abelian: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InduceArgs {
    file: PathBuf,
    #[arg(long)]
    ell: usize,
    /// Induced word file.
    #[arg(short, long)]
    output: PathBuf,
    /// JSON sidecar with classes and matrix (default: <output>.json).
    #[arg(long)]
    sidecar: Option<PathBuf>,
}

#[derive(Args)]
struct DecolorArgs {
    file: PathBuf,
    #[arg(long)]
    keep: char,
    #[arg(long, default_value_t = '0')]
    zero: char,
    /// Also run the Sturmian diagnostic up to this length (needs -o).
    #[arg(long, requires = "output")]
    diagnostic: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConflictArgs {
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    #[arg(long, default_value = "0")]
    x: String,
    #[arg(long, default_value = "0")]
    y: String,
    #[arg(long, default_value_t = 1_000_000)]
    n_max: u64,
    /// Also count box hits over this many iterations.
    #[arg(long)]
    equidistribution: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    len: usize,
    #[arg(long, default_value_t = 3)]
    rho_bound: usize,
    /// Number of survivors reported with frequencies and relations.
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Node budget; exceeding it writes the partial report and exits 2.
    #[arg(long)]
    budget: Option<u64>,
    /// Count only words using all three letters.
    #[arg(long)]
    all_letters: bool,
    /// Count one representative per letter permutation.
    #[arg(long)]
    symmetry: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of lemma10, lemma16, lemma19, lemma22, eq4, all.
    suite: String,
    /// Catalog word to check (repeatable; default: the whole catalog).
    #[arg(long = "word")]
    words: Vec<String>,
    /// Check a single block length.
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    prefix: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    ell_max: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("wordlab: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let precision = resolve_precision(cli.precision, std::env::var(PRECISION_ENV).ok())?;
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Relation(a) => cmd_relation(a, precision),
        Command::Induce(a) => cmd_induce(a),
        Command::Decolor(a) => cmd_decolor(a),
        Command::Conflict(a) => cmd_conflict(a, precision),
        Command::Search(a) => cmd_search(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn resolve_precision(flag: Option<u32>, env: Option<String>) -> Result<u32, Failure> {
    let digits = match (flag, env) {
        (Some(p), _) => p,
        (None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("{PRECISION_ENV} must be an integer, got {s:?}")))?,
        (None, None) => DEFAULT_PRECISION,
    };
    if digits < MIN_PRECISION {
        return Err(usage(format!("precision must be at least {MIN_PRECISION} digits, got {digits}")));
    }
    Ok(digits)
}

/// Writes `content` to `path` through a sibling temp file and a rename, or to stdout.
fn emit(path: Option<&Path>, content: &str) -> CmdResult {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out.write_all(content.as_bytes()).map_err(compute);
    };
    let name = path
        .file_name()
        .ok_or_else(|| usage(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(content.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        compute(format!("writing {}: {e}", path.display()))
    })
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn read_word(path: &Path) -> Result<FiniteWord, Failure> {
    let text = fs::read_to_string(path).map_err(|e| compute(format!("reading {}: {e}", path.display())))?;
    parse_word_file(&text).map_err(|e| compute(format!("{}: {e}", path.display())))
}

/// Progress lines go to stdout when the data went to a file, stderr otherwise.
fn note(to_file: bool, msg: &str) {
    if to_file {
        println!("{msg}");
    } else {
        eprintln!("{msg}");
    }
}

fn parse_angle(name: &str, s: &str) -> Result<Angle, Failure> {
    s.parse().map_err(|e| usage(format!("--{name}: {e}")))
}

fn parse_symbols<const N: usize>(given: Option<&str>, default: [char; N]) -> Result<[char; N], Failure> {
    match given {
        None => Ok(default),
        Some(s) => {
            let v: Vec<char> = s.chars().collect();
            v.try_into()
                .map_err(|_| usage(format!("--symbols needs exactly {N} letters")))
        }
    }
}

fn gen_spec(a: &GenArgs) -> Result<WordGeneratorSpec, Failure> {
    let len = a.len.unwrap_or(10_000);
    if let Some(path) = &a.spec {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
        let spec = WordGeneratorSpec::from_kv(&text).map_err(usage)?;
        return Ok(match a.len {
            Some(n) => spec.with_length(n),
            None => spec,
        });
    }
    if let Some(name) = &a.catalog {
        return catalog_spec(name, len).ok_or_else(|| usage(format!("unknown catalog word {name:?}")));
    }
    let kind = if let Some(pattern) = &a.periodic {
        GeneratorKind::Periodic {
            pattern: pattern.clone(),
        }
    } else if let Some(rules) = &a.subst {
        let morphism: Morphism = rules.parse().map_err(|e| usage(format!("--subst: {e}")))?;
        let seed = match a.seed {
            Some(c) => c,
            None => rules
                .trim()
                .chars()
                .next()
                .ok_or_else(|| usage("--subst is empty"))?,
        };
        GeneratorKind::Substitution { morphism, seed }
    } else {
        let alpha = parse_angle("alpha", a.alpha.as_deref().unwrap_or_default())?;
        let x = parse_angle("x", &a.x)?;
        if a.rot_binary {
            GeneratorKind::RotationBinary {
                alpha,
                x,
                partition: a.partition.parse::<Partition>().map_err(usage)?,
                symbols: parse_symbols(a.symbols.as_deref(), ['0', '1'])?,
            }
        } else {
            GeneratorKind::RotationTernary {
                alpha,
                x,
                cut1: parse_angle("cut1", a.cut1.as_deref().unwrap_or_default())?,
                cut2: parse_angle("cut2", a.cut2.as_deref().unwrap_or_default())?,
                symbols: parse_symbols(a.symbols.as_deref(), ['1', '2', '3'])?,
            }
        }
    };
    Ok(WordGeneratorSpec::new(kind, len))
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let spec = gen_spec(&a)?;
    spec.alphabet().map_err(usage)?;
    let w = generate(&spec).map_err(compute)?;
    emit(a.output.as_deref(), &render_word_file(&w))?;
    note(
        a.output.is_some(),
        &format!("length={} alphabet={}", w.len(), w.alphabet()),
    );
    Ok(())
}

fn cmd_profile(a: ProfileArgs) -> CmdResult {
    let w = read_word(&a.file)?;
    let id = a
        .file
        .file_stem()
        .map_or_else(|| "word".to_string(), |s| s.to_string_lossy().into_owned());
    let profile = ComplexityProfile::compute(&w, id, a.n_max).map_err(compute)?;
    let body = match a.format {
        Format::Csv => profile.to_csv(),
        Format::Json => {
            let mut s = profile.to_json();
            s.push('\n');
            s
        }
    };
    emit(a.output.as_deref(), &body)
}

fn decimals(f: &FrequencyVector, digits: u32) -> Vec<String> {
    f.values
        .iter()
        .map(|v| match v {
            FrequencyValue::Exact(x) => x.to_decimal(digits as usize),
            FrequencyValue::Enclosure { center, radius } => {
                // only the digits the enclosure certifies
                let certified = (-radius.log10()).floor().max(0.0) as usize;
                ExactReal::from_rational(center.clone()).to_decimal(certified.min(digits as usize))
            }
        })
        .collect()
}

fn cmd_relation(a: RelationArgs, precision: u32) -> CmdResult {
    if a.bound < 1 {
        return Err(usage("--bound must be at least 1"));
    }
    if a.tol.is_some_and(|t| t.is_nan() || t < 0.0) {
        return Err(usage("--tol must be nonnegative"));
    }
    if let (Some(ell), Some(path)) = (a.low_abelian, &a.word) {
        return low_abelian(path, ell, a.output.as_deref());
    }
    let (source, values, radii, found, tol) = if let Some(list) = &a.values {
        let reals = list
            .split(',')
            .map(|s| s.trim().parse::<ExactReal>().map_err(|e| usage(format!("--values: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let tol = a.tol.unwrap_or(0.0);
        let found = integer_relation_search_reals(&reals, a.bound, tol);
        let values = reals.iter().map(|x| x.to_decimal(precision as usize)).collect();
        ("values", values, vec![0.0; reals.len()], found, tol)
    } else {
        let (source, f) = if let Some(path) = &a.word {
            let w = read_word(path)?;
            ("empirical", empirical_frequencies(&w).map_err(compute)?)
        } else {
            let name = a.catalog.as_deref().expect("input group is required");
            let spec = catalog_spec(name, 10_000).ok_or_else(|| usage(format!("unknown catalog word {name:?}")))?;
            ("exact", exact_frequencies(&spec).map_err(compute)?)
        };
        let all_exact = source == "exact" && f.as_exact().is_some();
        let tol = a.tol.unwrap_or(if all_exact { 0.0 } else { 1e-6 });
        let found = integer_relation_search(&f, a.bound, tol);
        let radii = f.values.iter().map(FrequencyValue::radius).collect();
        (source, decimals(&f, precision), radii, found, tol)
    };
    let report = RelationReport::new(found.as_ref(), a.bound, tol);
    let mut out = serde_json::to_value(&report).expect("report serializes");
    out["source"] = source.into();
    out["values"] = json!(values);
    out["radii"] = json!(radii);
    emit(a.output.as_deref(), &to_json(&out))
}

fn low_abelian(path: &Path, ell: usize, output: Option<&Path>) -> CmdResult {
    let w = read_word(path)?;
    let set = parikh_set(&w, ell).map_err(compute)?;
    let outcome = relation_from_low_abelian(&set, ell as u64).map_err(compute)?;
    let mut out = json!({
        "alphabet": w.alphabet().to_string(),
        "block_length": ell,
        "parikh_set": set.iter().map(|v| v.0.clone()).collect::<Vec<_>>(),
    });
    match outcome {
        LowAbelianOutcome::RationalFrequencies(f) => {
            out["outcome"] = "rational_frequencies".into();
            out["frequencies"] = json!(f.iter().map(ToString::to_string).collect::<Vec<_>>());
        }
        LowAbelianOutcome::Relation(q) => {
            out["outcome"] = "relation".into();
            out["coefficients"] = json!(q);
        }
    }
    emit(output, &to_json(&out))
}

fn cmd_induce(a: InduceArgs) -> CmdResult {
    let w = read_word(&a.file)?;
    let ind = induce(&w, a.ell).map_err(compute)?;
    let classes: Vec<Value> = ind
        .alphabet
        .classes
        .iter()
        .zip(ind.word.alphabet().symbols())
        .map(|(v, c)| json!({ "letter": c.to_string(), "parikh": v.0 }))
        .collect();
    let sidecar = json!({
        "block_length": a.ell,
        "classes": classes,
        "matrix": ind.matrix.rows(),
        "det_or_rank": rank_report(&ind.matrix),
    });
    let sidecar_path = a.sidecar.clone().unwrap_or_else(|| {
        let mut p = a.output.clone().into_os_string();
        p.push(".json");
        p.into()
    });
    emit(Some(&a.output), &render_word_file(&ind.word))?;
    emit(Some(&sidecar_path), &to_json(&sidecar))?;
    println!(
        "length={} classes={} sidecar={}",
        ind.word.len(),
        ind.alphabet.classes.len(),
        sidecar_path.display()
    );
    Ok(())
}

fn cmd_decolor(a: DecolorArgs) -> CmdResult {
    let w = read_word(&a.file)?;
    let spec = DecoloringSpec::keep(a.keep).with_zero(a.zero);
    let b = decolor(&w, &spec).map_err(compute)?;
    emit(a.output.as_deref(), &render_word_file(&b))?;
    if let Some(n_max) = a.diagnostic {
        let r = sturmian_diagnostic(&b, n_max).map_err(compute)?;
        let mut out = serde_json::to_value(&r).expect("report serializes");
        out["verdict"] = r.verdict().into();
        print!("{}", to_json(&out));
    }
    Ok(())
}

fn parse_exact(name: &str, s: &str) -> Result<AngleValue, Failure> {
    s.parse()
        .map_err(|e| usage(format!("--{name} must be an exact real: {e}")))
}

fn cmd_conflict(a: ConflictArgs, precision: u32) -> CmdResult {
    let t = TorusRotation::new(
        parse_exact("alpha", &a.alpha)?,
        parse_exact("beta", &a.beta)?,
        parse_exact("x", &a.x)?,
        parse_exact("y", &a.y)?,
    );
    let conflict = find_conflict(&t, a.n_max).map_err(compute)?;
    let stats = a
        .equidistribution
        .map(|n| equidistribution_check(&t, n))
        .transpose()
        .map_err(compute)?;
    let digits = precision as usize;
    let out = json!({
        "alpha": t.alpha.to_string(),
        "beta": t.beta.to_string(),
        "x": t.x.to_string(),
        "y": t.y.to_string(),
        "alpha_decimal": t.alpha.to_decimal(digits),
        "beta_decimal": t.beta.to_decimal(digits),
        "n_max": a.n_max,
        "conflict": conflict,
        "equidistribution": stats,
    });
    emit(a.output.as_deref(), &to_json(&out))
}

fn cmd_search(a: SearchArgs) -> CmdResult {
    let cfg = SearchConfig {
        rho_bound: a.rho_bound,
        report_top: a.top,
        node_budget: a.budget,
        require_all_letters: a.all_letters,
        symmetry_reduction: a.symmetry,
        ..SearchConfig::new(a.len)
    };
    match search_rho_bounded(&cfg) {
        Ok(report) => emit(a.output.as_deref(), &format!("{}\n", report.to_json())),
        Err(SearchError::InvalidConfig(msg)) => Err(usage(msg)),
        Err(e @ SearchError::ResourceBound { .. }) => {
            let SearchError::ResourceBound { partial, .. } = &e else {
                unreachable!()
            };
            emit(a.output.as_deref(), &format!("{}\n", partial.to_json()))?;
            Err(compute(e))
        }
    }
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let checks = suite_checks(&a.suite).ok_or_else(|| {
        usage(format!(
            "unknown suite {:?}; expected one of {}",
            a.suite,
            SUITE_NAMES.join(", ")
        ))
    })?;
    let mut bounds = SuiteBounds::default();
    if let Some(p) = a.prefix {
        bounds.prefix_length = p;
    }
    if let Some(n) = a.n_max {
        bounds.n_max = n;
    }
    if let Some(l) = a.ell_max {
        bounds.ell_max = l;
    }
    if let Some(l) = a.ell {
        bounds.ell_min = l;
        bounds.ell_max = l;
    }
    if bounds.prefix_length < bounds.n_max {
        return Err(usage("--prefix must be at least --n-max"));
    }
    let names: Vec<String> = if a.words.is_empty() {
        wordlab::words::CATALOG_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        a.words.clone()
    };
    let corpus = names
        .iter()
        .map(|name| {
            let spec = catalog_spec(name, bounds.prefix_length)
                .ok_or_else(|| usage(format!("unknown catalog word {name:?}")))?;
            CorpusWord::generate(name.as_str(), spec).map_err(compute)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let report = run_checks(&corpus, bounds, &checks);
    emit(a.output.as_deref(), &format!("{}\n", report.to_json()))?;
    let failures: Vec<_> = report.failures().collect();
    for r in &failures {
        eprintln!("FAIL {} {}: {}", r.word, r.check, r.detail);
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(format!("{} check(s) failed", failures.len())))
    }
}
