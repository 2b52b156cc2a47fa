//! Batch command-line surface for the nilprog toolkit.
//!
//! Every command reads its parameters from flags and/or a `--config` file
//! (flags win), runs one verification or search, and writes a single report
//! to stdout — JSON when `--format json`, a human-readable rendering
//! otherwise. Reports embed the effective configuration so results are
//! self-describing. Diagnostics and progress go to stderr only. Exit code 0
//! means the run completed (whatever the verdict); nonzero means the run
//! itself failed.

mod config;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nilprog::{
    ap_patterns, build, certify, certify_restricted, coloring_avoids, count_words, enumerate_words,
    find_in, nilpotency_report, nilprogression_patterns, search_restricted_witness,
    standard_gen_pool, Certificate, Equivalence, FoundWitness, GroundSet, GroupConfig,
    GroupElement, Nilprogression, Outcome, Polynomial, ProgressionSpec, SearchScope,
    WitnessBaseline, WitnessSearchParams, Word, WordConvention,
};

use config::FileConfig;

#[derive(Parser)]
#[command(
    name = "nilprog",
    about = "Verification and search toolkit for nilpotent polynomial shift groups, \
             nilprogressions, and partition-regularity certificates",
    version
)]
struct Cli {
    /// Key-value config file; flags override file values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Report format on stdout
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Worker threads for search operations (output is identical at any count)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed recorded in the report for reproducibility
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate or count the bounded-multiplicity word set
    Words(WordsArgs),
    /// Evaluate a word at the standard generators
    Eval(EvalArgs),
    /// Compute the nilpotency class with witness
    Class(ClassArgs),
    /// Build a nilprogression and check non-degeneracy
    NilprogCheck(NilprogCheckArgs),
    /// Search a ground set for contained non-degenerate nilprogressions
    NilprogFind(NilprogFindArgs),
    /// Certify partition regularity of a pattern family
    Certify(CertifyArgs),
    /// Check both halves of the restricted property for a ground set
    CertifyRestricted(CertifyRestrictedArgs),
    /// Search bounded candidate spaces for a restricted-witness ground set
    SearchWitness(SearchWitnessArgs),
}

#[derive(clap::Args, Default)]
struct WordsArgs {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Include the empty word
    #[arg(long)]
    include_empty: Option<bool>,
    #[arg(long, value_enum)]
    equivalence: Option<EquivalenceArg>,
    /// Report the closed-form count without materializing the list
    #[arg(long)]
    count_only: Option<bool>,
}

#[derive(clap::Args, Default)]
struct EvalArgs {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Word in `*i` syntax, e.g. `*1*2*1`; `e` is the empty word
    #[arg(long)]
    word: Option<String>,
}

#[derive(clap::Args, Default)]
struct ClassArgs {
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    /// Largest class bound scanned before giving up
    #[arg(long)]
    max_weight: Option<u32>,
}

#[derive(clap::Args, Default)]
struct NilprogCheckArgs {
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    /// JSON file with d generator elements (default: standard generators)
    #[arg(long, value_name = "FILE")]
    gens: Option<PathBuf>,
    /// JSON file with the base element (default: identity)
    #[arg(long, value_name = "FILE")]
    base: Option<PathBuf>,
    #[arg(long)]
    include_empty: Option<bool>,
    #[arg(long, value_enum)]
    equivalence: Option<EquivalenceArg>,
}

#[derive(clap::Args, Default)]
struct NilprogFindArgs {
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    /// JSON file with the ground-set elements
    #[arg(long, value_name = "FILE")]
    set: Option<PathBuf>,
    /// JSON file with the generator pool (default: standard generators, inverses, identity)
    #[arg(long, value_name = "FILE")]
    gen_pool: Option<PathBuf>,
    /// JSON file with the base pool (default: the ground set itself)
    #[arg(long, value_name = "FILE")]
    base_pool: Option<PathBuf>,
    /// Stop after this many progressions
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    include_empty: Option<bool>,
    #[arg(long, value_enum)]
    equivalence: Option<EquivalenceArg>,
}

#[derive(clap::Args, Default)]
struct CertifyArgs {
    #[arg(long, value_enum)]
    baseline: Option<BaselineArg>,
    /// AP baseline: certify the interval 1..=range
    #[arg(long)]
    range: Option<i64>,
    /// Ground-set file: JSON integers (ap) or elements (nilprog)
    #[arg(long, value_name = "FILE")]
    set: Option<PathBuf>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_name = "FILE")]
    gen_pool: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    base_pool: Option<PathBuf>,
    #[arg(long)]
    include_empty: Option<bool>,
    #[arg(long, value_enum)]
    equivalence: Option<EquivalenceArg>,
}

#[derive(clap::Args, Default)]
struct CertifyRestrictedArgs {
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_name = "FILE")]
    set: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    gen_pool: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    base_pool: Option<PathBuf>,
    #[arg(long)]
    include_empty: Option<bool>,
    #[arg(long, value_enum)]
    equivalence: Option<EquivalenceArg>,
}

#[derive(clap::Args, Default)]
struct SearchWitnessArgs {
    #[arg(long, value_enum)]
    baseline: Option<BaselineArg>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    r: Option<usize>,
    /// Largest candidate ground-set size
    #[arg(long)]
    size_limit: Option<usize>,
    /// AP baseline: candidates are subsets of 1..=range
    #[arg(long)]
    range: Option<i64>,
    /// nilprog baseline: unions of up to this many pool progressions
    #[arg(long)]
    union_limit: Option<usize>,
    /// Require the length-(k+1) absence half (false = sanity mode)
    #[arg(long)]
    check_absence: Option<bool>,
    #[arg(long, value_name = "FILE")]
    gen_pool: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    base_pool: Option<PathBuf>,
    #[arg(long)]
    include_empty: Option<bool>,
    #[arg(long, value_enum)]
    equivalence: Option<EquivalenceArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EquivalenceArg {
    Raw,
    #[value(name = "coordinate-canonical")]
    CoordinateCanonical,
}

impl From<EquivalenceArg> for Equivalence {
    fn from(value: EquivalenceArg) -> Self {
        match value {
            EquivalenceArg::Raw => Equivalence::Raw,
            EquivalenceArg::CoordinateCanonical => Equivalence::CoordinateCanonical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BaselineArg {
    Ap,
    Nilprog,
}

/// The resolved configuration embedded in every report. Worker count is
/// deliberately not part of it: scheduling never changes results, and
/// reports must be byte-identical at any worker count.
#[derive(Serialize, Clone, Default)]
struct EffectiveConfig {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    range: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    set: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gens: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gen_pool: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base_pool: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    size_limit: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    union_limit: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    include_empty: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    equivalence: Option<Equivalence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    baseline: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    check_absence: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    count_only: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_weight: Option<u32>,
    format: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

/// One finished run: the JSON document and its text rendering.
struct Output {
    json: String,
    text: String,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => print!("{output}"),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<String> {
    let file = FileConfig::load(cli.config.as_deref())?;

    let format = match cli.format {
        Some(f) => f,
        None => match file.string("format")?.as_deref() {
            Some("json") => FormatArg::Json,
            Some("text") => FormatArg::Text,
            Some(other) => bail!("config key `format` must be `text` or `json`, got `{other}`"),
            None => FormatArg::Text,
        },
    };
    let workers = match cli.workers {
        Some(w) => w,
        None => file.integer::<usize>("workers")?.unwrap_or(1),
    };
    if workers == 0 {
        bail!("config key `workers` must be positive");
    }
    let seed = match cli.seed {
        Some(s) => Some(s),
        None => file.integer::<u64>("seed")?,
    };

    let command = match cli.command {
        Some(c) => c,
        None => match file.string("command")?.as_deref() {
            Some("words") => Command::Words(WordsArgs::default()),
            Some("eval") => Command::Eval(EvalArgs::default()),
            Some("class") => Command::Class(ClassArgs::default()),
            Some("nilprog-check") => Command::NilprogCheck(NilprogCheckArgs::default()),
            Some("nilprog-find") => Command::NilprogFind(NilprogFindArgs::default()),
            Some("certify") => Command::Certify(CertifyArgs::default()),
            Some("certify-restricted") => {
                Command::CertifyRestricted(CertifyRestrictedArgs::default())
            }
            Some("search-witness") => Command::SearchWitness(SearchWitnessArgs::default()),
            Some(other) => bail!("config key `command` names unknown command `{other}`"),
            None => bail!("no command given on the command line or in the config file"),
        },
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("cannot build worker pool")?;

    let format_name = match format {
        FormatArg::Text => "text",
        FormatArg::Json => "json",
    };
    let output = pool.install(|| -> Result<Output> {
        match command {
            Command::Words(args) => run_words(args, &file, format_name, seed),
            Command::Eval(args) => run_eval(args, &file, format_name, seed),
            Command::Class(args) => run_class(args, &file, format_name, seed),
            Command::NilprogCheck(args) => run_check(args, &file, format_name, seed),
            Command::NilprogFind(args) => run_find(args, &file, format_name, seed),
            Command::Certify(args) => run_certify(args, &file, format_name, seed),
            Command::CertifyRestricted(args) => run_restricted(args, &file, format_name, seed),
            Command::SearchWitness(args) => run_search(args, &file, format_name, seed),
        }
    })?;

    Ok(match format {
        FormatArg::Json => {
            let mut json = output.json;
            json.push('\n');
            json
        }
        FormatArg::Text => output.text,
    })
}

// ---------------------------------------------------------------------------
// parameter resolution helpers

fn require<T>(value: Option<T>, key: &str, command: &str) -> Result<T> {
    value.ok_or_else(|| anyhow::anyhow!("missing required key `{key}` for command `{command}`"))
}

fn resolve_u32(flag: Option<u32>, file: &FileConfig, key: &str) -> Result<Option<u32>> {
    Ok(match flag {
        Some(v) => Some(v),
        None => file.integer::<u32>(key)?,
    })
}

fn resolve_convention(
    include_empty: Option<bool>,
    equivalence: Option<EquivalenceArg>,
    file: &FileConfig,
) -> Result<WordConvention> {
    let include_empty = match include_empty {
        Some(v) => v,
        None => file.boolean("include_empty")?.unwrap_or(true),
    };
    let equivalence = match equivalence {
        Some(e) => e.into(),
        None => match file.string("equivalence")?.as_deref() {
            Some("raw") => Equivalence::Raw,
            Some("coordinate-canonical") => Equivalence::CoordinateCanonical,
            Some(other) => bail!(
                "config key `equivalence` must be `raw` or `coordinate-canonical`, got `{other}`"
            ),
            None => Equivalence::CoordinateCanonical,
        },
    };
    Ok(WordConvention {
        include_empty,
        equivalence,
    })
}

fn resolve_path(flag: Option<PathBuf>, file: &FileConfig, key: &str) -> Result<Option<PathBuf>> {
    Ok(match flag {
        Some(p) => Some(p),
        None => file.path(key)?,
    })
}

fn read_elements(path: &Path) -> Result<Vec<GroupElement>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read element file {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("cannot parse element file {}", path.display()))
}

fn read_element(path: &Path) -> Result<GroupElement> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read element file {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("cannot parse element file {}", path.display()))
}

fn read_integers(path: &Path) -> Result<Vec<i64>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read integer file {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("cannot parse integer file {}", path.display()))
}

fn path_string(path: &Path) -> String {
    path.display().to_string()
}

fn json_number(decimal: &str) -> Result<serde_json::Number> {
    serde_json::Number::from_str(decimal)
        .map_err(|e| anyhow::anyhow!("cannot encode {decimal} as a JSON number: {e}"))
}

// ---------------------------------------------------------------------------
// report fragments shared by several commands

#[derive(Serialize)]
struct ProgressionReport {
    spec: ProgressionSpec,
    generators: Vec<GroupElement>,
    base: GroupElement,
    elements: BTreeSet<GroupElement>,
    word_count: usize,
    word_count_raw: serde_json::Number,
    word_count_canonical: serde_json::Number,
    convention: WordConvention,
    nondegenerate: bool,
}

impl ProgressionReport {
    fn from_progression(p: &Nilprogression) -> Result<Self> {
        let (raw, canonical) = p.word_counts_both();
        Ok(ProgressionReport {
            spec: p.spec,
            generators: p.generators.clone(),
            base: p.base.clone(),
            elements: p.elements.clone(),
            word_count: p.word_count,
            word_count_raw: json_number(&raw.to_string())?,
            word_count_canonical: json_number(&canonical.to_string())?,
            convention: p.convention,
            nondegenerate: p.is_nondegenerate(),
        })
    }

    fn render(&self, out: &mut String, indent: &str) {
        let _ = writeln!(
            out,
            "{indent}spec: step {} length {} rank {}",
            self.spec.step, self.spec.length, self.spec.rank
        );
        for (i, g) in self.generators.iter().enumerate() {
            let _ = writeln!(out, "{indent}generator {}: {g}", i + 1);
        }
        let _ = writeln!(out, "{indent}base: {}", self.base);
        let _ = writeln!(
            out,
            "{indent}word count: {} (raw {}, canonical {})",
            self.word_count, self.word_count_raw, self.word_count_canonical
        );
        let _ = writeln!(out, "{indent}distinct elements: {}", self.elements.len());
        let _ = writeln!(out, "{indent}nondegenerate: {}", self.nondegenerate);
    }
}

#[derive(Serialize)]
struct ScopeJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pools: Option<PoolsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bounds: Option<BoundsJson>,
    note: String,
}

#[derive(Serialize)]
struct PoolsJson {
    gen_pool_size: usize,
    base_pool_size: usize,
}

#[derive(Serialize)]
struct BoundsJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    range: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    size_limit: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    union_limit: Option<usize>,
}

impl ScopeJson {
    fn pools(gen_pool_size: usize, base_pool_size: usize) -> Self {
        ScopeJson {
            pools: Some(PoolsJson {
                gen_pool_size,
                base_pool_size,
            }),
            bounds: None,
            note: "progression existence and absence are relative to the supplied finite \
                   generator and base pools"
                .into(),
        }
    }

    fn from_scope(scope: &SearchScope) -> Self {
        ScopeJson {
            pools: Some(PoolsJson {
                gen_pool_size: scope.gen_pool_size,
                base_pool_size: scope.base_pool_size,
            }),
            bounds: None,
            note: scope.note.clone(),
        }
    }
}

#[derive(Serialize)]
struct CertificateJson {
    outcome: Outcome,
    r: usize,
    edges: usize,
    nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    coloring: Option<Vec<usize>>,
}

impl CertificateJson {
    fn from_certificate(c: &Certificate) -> Self {
        CertificateJson {
            outcome: c.outcome,
            r: c.r,
            edges: c.edges,
            nodes_explored: c.nodes_explored,
            coloring: c.coloring.clone(),
        }
    }

    fn render(&self, out: &mut String) {
        let outcome = match self.outcome {
            Outcome::PartitionRegular => "partition_regular",
            Outcome::Counterexample => "counterexample",
        };
        let _ = writeln!(out, "outcome: {outcome}");
        let _ = writeln!(out, "colors: {}", self.r);
        let _ = writeln!(out, "edges: {}", self.edges);
        let _ = writeln!(out, "nodes explored: {}", self.nodes_explored);
        if let Some(coloring) = &self.coloring {
            let rendered: Vec<String> = coloring.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "avoiding coloring: {}", rendered.join(" "));
        }
    }
}

// ---------------------------------------------------------------------------
// command handlers

fn run_words(
    args: WordsArgs,
    file: &FileConfig,
    format: &'static str,
    seed: Option<u64>,
) -> Result<Output> {
    let d = require(resolve_u32(args.d, file, "d")?, "d", "words")?;
    let k = require(resolve_u32(args.k, file, "k")?, "k", "words")?;
    if d < 1 {
        bail!("key `d` must be positive");
    }
    let conv = resolve_convention(args.include_empty, args.equivalence, file)?;
    let count_only = match args.count_only {
        Some(v) => v,
        None => file.boolean("count_only")?.unwrap_or(false),
    };

    let config = EffectiveConfig {
        command: "words",
        k: Some(k),
        d: Some(d),
        include_empty: Some(conv.include_empty),
        equivalence: Some(conv.equivalence),
        count_only: Some(count_only),
        format,
        seed,
        ..Default::default()
    };

    #[derive(Serialize)]
    struct WordsReport {
        config: EffectiveConfig,
        count: serde_json::Number,
        #[serde(skip_serializing_if = "Option::is_none")]
        words: Option<Vec<String>>,
    }

    let (count, words) = if count_only {
        (count_words(d, k, conv).to_string(), None)
    } else {
        let listed = enumerate_words(d, k, conv);
        (
            listed.len().to_string(),
            Some(listed.iter().map(Word::to_string).collect()),
        )
    };

    let report = WordsReport {
        config,
        count: json_number(&count)?,
        words,
    };

    let mut text = format!("count: {}\n", report.count);
    if let Some(words) = &report.words {
        for w in words {
            let _ = writeln!(text, "{w}");
        }
    }
    Ok(Output {
        json: serde_json::to_string(&report)?,
        text,
    })
}

fn run_eval(
    args: EvalArgs,
    file: &FileConfig,
    format: &'static str,
    seed: Option<u64>,
) -> Result<Output> {
    let d = require(resolve_u32(args.d, file, "d")?, "d", "eval")?;
    let k = require(resolve_u32(args.k, file, "k")?, "k", "eval")?;
    let word_text = require(
        match args.word {
            Some(w) => Some(w),
            None => file.string("word")?,
        },
        "word",
        "eval",
    )?;
    let cfg = GroupConfig::new(k, d)?;
    let word: Word = word_text.parse()?;
    let element = word.evaluate(&cfg)?;
    let point = cfg.evaluation_point();
    let point_image = element.apply(&point)?;

    let config = EffectiveConfig {
        command: "eval",
        k: Some(k),
        d: Some(d),
        word: Some(word_text.clone()),
        format,
        seed,
        ..Default::default()
    };

    #[derive(Serialize)]
    struct EvalReport {
        config: EffectiveConfig,
        word: String,
        element: GroupElement,
        point_image: Vec<Polynomial>,
    }

    let report = EvalReport {
        config,
        word: word.to_string(),
        element,
        point_image,
    };
    let mut text = format!("word: {}\nelement: {}\n", report.word, report.element);
    let images: Vec<String> = report.point_image.iter().map(|p| p.to_string()).collect();
    let _ = writeln!(text, "image of (x^{k}, ...): ({})", images.join(", "));
    Ok(Output {
        json: serde_json::to_string(&report)?,
        text,
    })
}

fn run_class(
    args: ClassArgs,
    file: &FileConfig,
    format: &'static str,
    seed: Option<u64>,
) -> Result<Output> {
    let k = require(resolve_u32(args.k, file, "k")?, "k", "class")?;
    let d = require(resolve_u32(args.d, file, "d")?, "d", "class")?;
    let max_weight = match args.max_weight {
        Some(v) => v,
        None => file.integer::<u32>("max_weight")?.unwrap_or(k + 3),
    };
    let cfg = GroupConfig::new(k, d)?;
    let report_data = nilpotency_report(&cfg, max_weight)?;

    let config = EffectiveConfig {
        command: "class",
        k: Some(k),
        d: Some(d),
        max_weight: Some(max_weight),
        format,
        seed,
        ..Default::default()
    };

    #[derive(Serialize)]
    struct WitnessJson {
        letters: Vec<u32>,
        element: GroupElement,
    }

    #[derive(Serialize)]
    struct ClassReport {
        config: EffectiveConfig,
        class: u32,
        label_mismatch: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        note: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<WitnessJson>,
    }

    let report = ClassReport {
        config,
        class: report_data.class,
        label_mismatch: report_data.label_mismatch,
        note: report_data.note.clone(),
        witness: report_data.witness.as_ref().map(|w| WitnessJson {
            letters: w.letters.clone(),
            element: w.element.clone(),
        }),
    };

    let mut text = format!("class <= {} verified\n", report.class);
    if let Some(w) = &report.witness {
        let letters: Vec<String> = w.letters.iter().map(|l| format!("*{l}")).collect();
        let _ = writeln!(
            text,
            "witness at weight {}: [{}] = {}",
            w.letters.len(),
            letters.join(","),
            w.element
        );
    }
    if let Some(note) = &report.note {
        let _ = writeln!(text, "note: {note}");
    }
    Ok(Output {
        json: serde_json::to_string(&report)?,
        text,
    })
}

fn run_check(
    args: NilprogCheckArgs,
    file: &FileConfig,
    format: &'static str,
    seed: Option<u64>,
) -> Result<Output> {
    let k = require(resolve_u32(args.k, file, "k")?, "k", "nilprog-check")?;
    let d = require(resolve_u32(args.d, file, "d")?, "d", "nilprog-check")?;
    let conv = resolve_convention(args.include_empty, args.equivalence, file)?;
    let cfg = GroupConfig::new(k, d)?;

    let gens_path = resolve_path(args.gens, file, "gens")?;
    let gens = match &gens_path {
        Some(p) => {
            let loaded = read_elements(p)?;
            if loaded.len() != d as usize {
                bail!(
                    "key `gens`: file {} holds {} elements, need d={d}",
                    p.display(),
                    loaded.len()
                );
            }
            loaded
        }
        None => cfg.generators(),
    };
    let base_path = resolve_path(args.base, file, "base")?;
    let base = match &base_path {
        Some(p) => read_element(p)?,
        None => GroupElement::identity(gens[0].arity()),
    };

    let spec = ProgressionSpec::new(k, k, d)?;
    let progression = build(spec, &gens, &base, conv)?;
    let progression_report = ProgressionReport::from_progression(&progression)?;

    let config = EffectiveConfig {
        command: "nilprog-check",
        k: Some(k),
        d: Some(d),
        gens: gens_path.as_deref().map(path_string),
        base: base_path.as_deref().map(path_string),
        include_empty: Some(conv.include_empty),
        equivalence: Some(conv.equivalence),
        format,
        seed,
        ..Default::default()
    };

    #[derive(Serialize)]
    struct CheckReport {
        config: EffectiveConfig,
        progression: ProgressionReport,
    }

    let mut text = String::new();
    progression_report.render(&mut text, "");
    let report = CheckReport {
        config,
        progression: progression_report,
    };
    Ok(Output {
        json: serde_json::to_string(&report)?,
        text,
    })
}

fn run_find(
    args: NilprogFindArgs,
    file: &FileConfig,
    format: &'static str,
    seed: Option<u64>,
) -> Result<Output> {
    let k = require(resolve_u32(args.k, file, "k")?, "k", "nilprog-find")?;
    let d = require(resolve_u32(args.d, file, "d")?, "d", "nilprog-find")?;
    let conv = resolve_convention(args.include_empty, args.equivalence, file)?;
    let set_path = require(resolve_path(args.set, file, "set")?, "set", "nilprog-find")?;
    let v = read_elements(&set_path)?;
    let cfg = GroupConfig::new(k, d)?;

    let gen_pool_path = resolve_path(args.gen_pool, file, "gen_pool")?;
    let gen_pool = match &gen_pool_path {
        Some(p) => read_elements(p)?,
        None => standard_gen_pool(&cfg),
    };
    let base_pool_path = resolve_path(args.base_pool, file, "base_pool")?;
    let base_pool = match &base_pool_path {
        Some(p) => read_elements(p)?,
        None => v.clone(),
    };
    let limit = match args.limit {
        Some(l) => Some(l),
        None => file.integer::<usize>("limit")?,
    };

    let spec = ProgressionSpec::new(k, k, d)?;
    let found = find_in(&v, spec, &gen_pool, &base_pool, conv, limit)?;
    let found_reports: Vec<ProgressionReport> = found
        .iter()
        .map(ProgressionReport::from_progression)
        .collect::<Result<_>>()?;

    let config = EffectiveConfig {
        command: "nilprog-find",
        k: Some(k),
        d: Some(d),
        set: Some(path_string(&set_path)),
        gen_pool: gen_pool_path.as_deref().map(path_string),
        base_pool: base_pool_path.as_deref().map(path_string),
        limit,
        include_empty: Some(conv.include_empty),
        equivalence: Some(conv.equivalence),
        format,
        seed,
        ..Default::default()
    };

    #[derive(Serialize)]
    struct FindReport {
        config: EffectiveConfig,
        scope: ScopeJson,
        count: usize,
        found: Vec<ProgressionReport>,
    }

    let report = FindReport {
        config,
        scope: ScopeJson::pools(gen_pool.len(), base_pool.len()),
        count: found_reports.len(),
        found: found_reports,
    };

    let mut text = format!(
        "ground set: {} elements\nprogressions found: {}\n",
        v.len(),
        report.count
    );
    for (i, p) in report.found.iter().enumerate() {
        let _ = writeln!(text, "progression {}:", i + 1);
        p.render(&mut text, "  ");
    }
    let _ = writeln!(text, "scope: {}", report.scope.note);
    Ok(Output {
        json: serde_json::to_string(&report)?,
        text,
    })
}

fn run_certify(
    args: CertifyArgs,
    file: &FileConfig,
    format: &'static str,
    seed: Option<u64>,
) -> Result<Output> {
    let baseline = match args.baseline {
        Some(b) => b,
        None => match file.string("baseline")?.as_deref() {
            Some("ap") => BaselineArg::Ap,
            Some("nilprog") => BaselineArg::Nilprog,
            Some(other) => bail!("config key `baseline` must be `ap` or `nilprog`, got `{other}`"),
            None => bail!("missing required key `baseline` for command `certify`"),
        },
    };
    let k = require(resolve_u32(args.k, file, "k")?, "k", "certify")?;
    let r = require(
        match args.r {
            Some(r) => Some(r),
            None => file.integer::<usize>("r")?,
        },
        "r",
        "certify",
    )?;
    if r < 1 {
        bail!("key `r` must be positive");
    }

    #[derive(Serialize)]
    struct CertifyReport {
        config: EffectiveConfig,
        outcome: Outcome,
        r: usize,
        edges: usize,
        nodes_explored: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        coloring: Option<Vec<usize>>,
        scope: ScopeJson,
    }

    match baseline {
        BaselineArg::Ap => {
            if k < 3 {
                bail!("key `k` must be >= 3 for the ap baseline");
            }
            let range = match args.range {
                Some(v) => Some(v),
                None => file.integer::<i64>("range")?,
            };
            let set_path = resolve_path(args.set, file, "set")?;
            let values = match (&set_path, range) {
                (Some(p), _) => read_integers(p)?,
                (None, Some(n)) => {
                    if n < 1 {
                        bail!("key `range` must be positive");
                    }
                    (1..=n).collect()
                }
                (None, None) => bail!("command `certify --baseline ap` needs `range` or `set`"),
            };
            let v = GroundSet::new(values);
            let fam = ap_patterns(&v, k as usize);
            let certificate = certify(&v, &fam, r)?;
            if let Some(coloring) = &certificate.coloring {
                if !coloring_avoids(coloring, &fam) {
                    bail!("internal check failed: reported coloring does not avoid the family");
                }
            }
            let config = EffectiveConfig {
                command: "certify",
                baseline: Some("ap"),
                k: Some(k),
                r: Some(r),
                range,
                set: set_path.as_deref().map(path_string),
                format,
                seed,
                ..Default::default()
            };
            let report = CertifyReport {
                config,
                outcome: certificate.outcome,
                r: certificate.r,
                edges: certificate.edges,
                nodes_explored: certificate.nodes_explored,
                coloring: certificate.coloring.clone(),
                scope: ScopeJson {
                    pools: None,
                    bounds: Some(BoundsJson {
                        range,
                        size_limit: None,
                        union_limit: None,
                    }),
                    note: format!("ground set: {} integers", v.len()),
                },
            };
            let mut text = String::new();
            CertificateJson::from_certificate(&certificate).render(&mut text);
            Ok(Output {
                json: serde_json::to_string(&report)?,
                text,
            })
        }
        BaselineArg::Nilprog => {
            let d = require(resolve_u32(args.d, file, "d")?, "d", "certify")?;
            let conv = resolve_convention(args.include_empty, args.equivalence, file)?;
            let set_path = require(resolve_path(args.set, file, "set")?, "set", "certify")?;
            let elements = read_elements(&set_path)?;
            let cfg = GroupConfig::new(k, d)?;
            let gen_pool_path = resolve_path(args.gen_pool, file, "gen_pool")?;
            let gen_pool = match &gen_pool_path {
                Some(p) => read_elements(p)?,
                None => standard_gen_pool(&cfg),
            };
            let base_pool_path = resolve_path(args.base_pool, file, "base_pool")?;
            let base_pool = match &base_pool_path {
                Some(p) => read_elements(p)?,
                None => elements.clone(),
            };
            let v = GroundSet::new(elements);
            let spec = ProgressionSpec::new(k, k, d)?;
            let fam = nilprogression_patterns(&v, spec, &gen_pool, &base_pool, conv)?;
            let certificate = certify(&v, &fam, r)?;
            if let Some(coloring) = &certificate.coloring {
                if !coloring_avoids(coloring, &fam) {
                    bail!("internal check failed: reported coloring does not avoid the family");
                }
            }
            let config = EffectiveConfig {
                command: "certify",
                baseline: Some("nilprog"),
                k: Some(k),
                d: Some(d),
                r: Some(r),
                set: Some(path_string(&set_path)),
                gen_pool: gen_pool_path.as_deref().map(path_string),
                base_pool: base_pool_path.as_deref().map(path_string),
                include_empty: Some(conv.include_empty),
                equivalence: Some(conv.equivalence),
                format,
                seed,
                ..Default::default()
            };
            let report = CertifyReport {
                config,
                outcome: certificate.outcome,
                r: certificate.r,
                edges: certificate.edges,
                nodes_explored: certificate.nodes_explored,
                coloring: certificate.coloring.clone(),
                scope: ScopeJson::pools(gen_pool.len(), base_pool.len()),
            };
            let mut text = String::new();
            CertificateJson::from_certificate(&certificate).render(&mut text);
            let _ = writeln!(text, "scope: {}", report.scope.note);
            Ok(Output {
                json: serde_json::to_string(&report)?,
                text,
            })
        }
    }
}

fn run_restricted(
    args: CertifyRestrictedArgs,
    file: &FileConfig,
    format: &'static str,
    seed: Option<u64>,
) -> Result<Output> {
    let k = require(resolve_u32(args.k, file, "k")?, "k", "certify-restricted")?;
    let d = require(resolve_u32(args.d, file, "d")?, "d", "certify-restricted")?;
    let r = require(
        match args.r {
            Some(r) => Some(r),
            None => file.integer::<usize>("r")?,
        },
        "r",
        "certify-restricted",
    )?;
    if r < 1 {
        bail!("key `r` must be positive");
    }
    let conv = resolve_convention(args.include_empty, args.equivalence, file)?;
    let set_path = require(
        resolve_path(args.set, file, "set")?,
        "set",
        "certify-restricted",
    )?;
    let elements = read_elements(&set_path)?;
    let cfg = GroupConfig::new(k, d)?;
    let gen_pool_path = resolve_path(args.gen_pool, file, "gen_pool")?;
    let gen_pool = match &gen_pool_path {
        Some(p) => read_elements(p)?,
        None => standard_gen_pool(&cfg),
    };
    let base_pool_path = resolve_path(args.base_pool, file, "base_pool")?;
    let base_pool = match &base_pool_path {
        Some(p) => read_elements(p)?,
        None => elements.clone(),
    };
    let v = GroundSet::new(elements);
    let report_data = certify_restricted(&v, k, d, r, &gen_pool, &base_pool, conv)?;
    if let Some(coloring) = &report_data.certificate.coloring {
        let spec = ProgressionSpec::new(k, k, d)?;
        let fam = nilprogression_patterns(&v, spec, &gen_pool, &base_pool, conv)?;
        if !coloring_avoids(coloring, &fam) {
            bail!("internal check failed: reported coloring does not avoid the family");
        }
    }

    let config = EffectiveConfig {
        command: "certify-restricted",
        k: Some(k),
        d: Some(d),
        r: Some(r),
        set: Some(path_string(&set_path)),
        gen_pool: gen_pool_path.as_deref().map(path_string),
        base_pool: base_pool_path.as_deref().map(path_string),
        include_empty: Some(conv.include_empty),
        equivalence: Some(conv.equivalence),
        format,
        seed,
        ..Default::default()
    };

    #[derive(Serialize)]
    struct AbsenceJson {
        holds: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<ProgressionReport>,
    }

    #[derive(Serialize)]
    struct RestrictedCliReport {
        config: EffectiveConfig,
        absence: AbsenceJson,
        regularity: CertificateJson,
        holds: bool,
        scope: ScopeJson,
    }

    let report = RestrictedCliReport {
        config,
        absence: AbsenceJson {
            holds: report_data.absence_holds,
            witness: report_data
                .absence_witness
                .as_ref()
                .map(ProgressionReport::from_progression)
                .transpose()?,
        },
        regularity: CertificateJson::from_certificate(&report_data.certificate),
        holds: report_data.holds,
        scope: ScopeJson::from_scope(&report_data.scope),
    };

    let mut text = String::new();
    let _ = writeln!(
        text,
        "absence of length-{} progressions: {}",
        k + 1,
        if report.absence.holds {
            "holds"
        } else {
            "fails"
        }
    );
    if let Some(w) = &report.absence.witness {
        let _ = writeln!(text, "absence witness:");
        w.render(&mut text, "  ");
    }
    let _ = writeln!(text, "regularity half (length {k}):");
    report.regularity.render(&mut text);
    let _ = writeln!(text, "restricted property holds: {}", report.holds);
    let _ = writeln!(text, "scope: {}", report.scope.note);
    Ok(Output {
        json: serde_json::to_string(&report)?,
        text,
    })
}

fn run_search(
    args: SearchWitnessArgs,
    file: &FileConfig,
    format: &'static str,
    seed: Option<u64>,
) -> Result<Output> {
    let baseline = match args.baseline {
        Some(b) => b,
        None => match file.string("baseline")?.as_deref() {
            Some("ap") => BaselineArg::Ap,
            Some("nilprog") => BaselineArg::Nilprog,
            Some(other) => bail!("config key `baseline` must be `ap` or `nilprog`, got `{other}`"),
            None => bail!("missing required key `baseline` for command `search-witness`"),
        },
    };
    let k = require(resolve_u32(args.k, file, "k")?, "k", "search-witness")?;
    let r = require(
        match args.r {
            Some(r) => Some(r),
            None => file.integer::<usize>("r")?,
        },
        "r",
        "search-witness",
    )?;
    if r < 1 {
        bail!("key `r` must be positive");
    }
    let size_limit = require(
        match args.size_limit {
            Some(v) => Some(v),
            None => file.integer::<usize>("size_limit")?,
        },
        "size_limit",
        "search-witness",
    )?;
    let check_absence = match args.check_absence {
        Some(v) => v,
        None => file.boolean("check_absence")?.unwrap_or(true),
    };

    let mut config = EffectiveConfig {
        command: "search-witness",
        k: Some(k),
        r: Some(r),
        size_limit: Some(size_limit),
        check_absence: Some(check_absence),
        format,
        seed,
        ..Default::default()
    };

    let (params, bounds) = match baseline {
        BaselineArg::Ap => {
            if k < 3 {
                bail!("key `k` must be >= 3 for the ap baseline");
            }
            let range = require(
                match args.range {
                    Some(v) => Some(v),
                    None => file.integer::<i64>("range")?,
                },
                "range",
                "search-witness",
            )?;
            if range < 1 {
                bail!("key `range` must be positive");
            }
            config.baseline = Some("ap");
            config.range = Some(range);
            (
                WitnessSearchParams {
                    baseline: WitnessBaseline::ArithmeticProgression {
                        k: k as usize,
                        range,
                    },
                    r,
                    size_limit,
                    check_absence,
                    progress_every: 100_000,
                },
                BoundsJson {
                    range: Some(range),
                    size_limit: Some(size_limit),
                    union_limit: None,
                },
            )
        }
        BaselineArg::Nilprog => {
            let d = require(resolve_u32(args.d, file, "d")?, "d", "search-witness")?;
            let union_limit = require(
                match args.union_limit {
                    Some(v) => Some(v),
                    None => file.integer::<usize>("union_limit")?,
                },
                "union_limit",
                "search-witness",
            )?;
            let conv = resolve_convention(args.include_empty, args.equivalence, file)?;
            let cfg = GroupConfig::new(k, d)?;
            let gen_pool_path = resolve_path(args.gen_pool, file, "gen_pool")?;
            let gen_pool = match &gen_pool_path {
                Some(p) => read_elements(p)?,
                None => standard_gen_pool(&cfg),
            };
            let base_pool_path = resolve_path(args.base_pool, file, "base_pool")?;
            let base_pool = match &base_pool_path {
                Some(p) => read_elements(p)?,
                None => vec![GroupElement::identity(cfg.arity())],
            };
            config.baseline = Some("nilprog");
            config.d = Some(d);
            config.union_limit = Some(union_limit);
            config.include_empty = Some(conv.include_empty);
            config.equivalence = Some(conv.equivalence);
            config.gen_pool = gen_pool_path.as_deref().map(path_string);
            config.base_pool = base_pool_path.as_deref().map(path_string);
            (
                WitnessSearchParams {
                    baseline: WitnessBaseline::Nilprogression {
                        k,
                        d,
                        union_limit,
                        gen_pool,
                        base_pool,
                        conv,
                    },
                    r,
                    size_limit,
                    check_absence,
                    progress_every: 100_000,
                },
                BoundsJson {
                    range: None,
                    size_limit: Some(size_limit),
                    union_limit: Some(union_limit),
                },
            )
        }
    };

    let search = search_restricted_witness(&params)?;

    #[derive(Serialize)]
    #[serde(rename_all = "snake_case")]
    enum FoundJson {
        Integers {
            items: Vec<i64>,
            certificate: CertificateJson,
        },
        Elements {
            items: Vec<GroupElement>,
            absence_holds: bool,
            certificate: CertificateJson,
        },
    }

    #[derive(Serialize)]
    struct SearchReport {
        config: EffectiveConfig,
        #[serde(skip_serializing_if = "Option::is_none")]
        found: Option<FoundJson>,
        candidates_checked: u64,
        exhausted: bool,
        scope: ScopeJson,
    }

    let found = search.found.as_ref().map(|f| match f {
        FoundWitness::Integers { items, certificate } => FoundJson::Integers {
            items: items.clone(),
            certificate: CertificateJson::from_certificate(certificate),
        },
        FoundWitness::Elements { items, report } => FoundJson::Elements {
            items: items.clone(),
            absence_holds: report.absence_holds,
            certificate: CertificateJson::from_certificate(&report.certificate),
        },
    });

    let report = SearchReport {
        config,
        found,
        candidates_checked: search.candidates_checked,
        exhausted: search.exhausted,
        scope: ScopeJson {
            pools: None,
            bounds: Some(bounds),
            note: "search exhausts the stated candidate space only; a negative result is \
                   relative to these bounds"
                .into(),
        },
    };

    let mut text = String::new();
    match &report.found {
        Some(FoundJson::Integers { items, certificate }) => {
            let rendered: Vec<String> = items.iter().map(i64::to_string).collect();
            let _ = writeln!(text, "witness found: {{{}}}", rendered.join(", "));
            certificate.render(&mut text);
        }
        Some(FoundJson::Elements {
            items,
            absence_holds,
            certificate,
        }) => {
            let _ = writeln!(text, "witness found: {} elements", items.len());
            let _ = writeln!(text, "absence half holds: {absence_holds}");
            certificate.render(&mut text);
        }
        None => {
            let _ = writeln!(text, "no witness within bounds (exhausted)");
        }
    }
    let _ = writeln!(text, "candidates checked: {}", report.candidates_checked);
    let _ = writeln!(text, "scope: {}", report.scope.note);
    Ok(Output {
        json: serde_json::to_string(&report)?,
        text,
    })
}
