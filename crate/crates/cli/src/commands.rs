//! Subcommand tree and the handlers behind it.

use std::fs;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fiberforge::construction::{
    fiber_product_spec, rips_construct, run_pipeline, universal_central_extension, B2Mode, ConstructionError,
    QuotientOracle, DEFAULT_SEARCH_CAP,
};
use fiberforge::intlin::{first_homology, second_betti_aspherical, smith_normal_form, HomologyError, MatrixJson};
use fiberforge::oracle::{FreeGroupOracle, OracleError, WordOracle};
use fiberforge::presentations::{direct_product, parse_word, recursify, FinitePresentation, PresentationError};
use fiberforge::smallcanc::{check_metric_condition, DehnSolver, Lambda, SmallCancError};
use fiberforge::subgroups::{
    fold, graph_membership, intersect_with_finite_index, reidemeister_schreier, todd_coxeter, SubgroupError,
    DEFAULT_MAX_COSETS,
};
use fiberforge::wordproblem::{hnn_is_trivial, slinf_evaluate, HnnError, SlinfOracle};
use fiberforge::words::{nu_encode, Generator, Word, C_FAMILY};
use fiberforge::{BigInt, IntegerMatrix};
use serde_json::{json, Value};

use crate::config::{parse_b2_mode, parse_lambda, OutputFormat, RunConfig};
use crate::corpus;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "fiberforge", version, about = "Finitely presented groups, fibre products and word problems")]
pub struct Cli {
    /// Row budget for coset enumeration.
    #[arg(long, global = true, env = "FIBERFORGE_MAX_COSETS", default_value_t = DEFAULT_MAX_COSETS)]
    pub max_cosets: usize,
    /// Length cap for word searches.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_CAP)]
    pub search_cap: usize,
    /// Small-cancellation ratio `P/Q`.
    #[arg(long, global = true, default_value = "1/6", value_parser = parse_lambda)]
    pub lambda: Lambda,
    /// `finite-group`, `aspherical` or an explicit value.
    #[arg(long, global = true, default_value = "finite-group", value_parser = parse_b2_mode)]
    pub b2_mode: B2Mode,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Include intermediate steps in the report.
    #[arg(long, global = true)]
    pub trace: bool,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            max_cosets: self.max_cosets,
            search_cap: self.search_cap,
            lambda: self.lambda,
            b2_mode: self.b2_mode,
            format: if self.json { OutputFormat::Json } else { OutputFormat::Text },
            seed: self.seed,
            trace: self.trace,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of a finitely presented group.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Subgroups: coset enumeration, Reidemeister–Schreier, Stallings graphs.
    #[command(subcommand)]
    Subgroup(SubgroupCommand),
    /// Small-cancellation checks and Dehn's algorithm.
    #[command(subcommand)]
    Smallcanc(SmallcancCommand),
    /// Extension, Rips and fibre-product constructions.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Word problems of SL_inf(Z) and its HNN embedding.
    #[command(subcommand)]
    Wp(WpCommand),
    /// Acceptance corpus.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Debug, Subcommand)]
pub enum GroupCommand {
    /// First homology: Betti number and torsion.
    Betti { file: String },
    /// Second Betti number of an aspherical presentation.
    B2 {
        file: String,
        #[arg(long)]
        assert_aspherical: bool,
    },
    /// Order by coset enumeration over the trivial subgroup.
    Order { file: String },
    /// Direct product presentation.
    Product { left: String, right: String },
    /// Adds a generator `z` with relators `z^n` and `z`.
    Recursify {
        file: String,
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// Smith normal form of an integer matrix (rows of integers, a JSON array
    /// of rows, or the matrix JSON form).
    Snf { matrix: String },
}

#[derive(Debug, Args)]
pub struct SubgroupWords {
    /// Subgroup generator; repeat for several.
    #[arg(short = 'g', long = "gen")]
    pub gens: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum SubgroupCommand {
    /// Index by coset enumeration.
    Index {
        file: String,
        #[command(flatten)]
        words: SubgroupWords,
    },
    /// Simplified Reidemeister–Schreier presentation.
    Presentation {
        file: String,
        #[command(flatten)]
        words: SubgroupWords,
    },
    /// Stallings graph of a subgroup of a free group.
    Fold {
        #[command(flatten)]
        words: SubgroupWords,
        /// Free generators, comma separated; defaults to the letters used.
        #[arg(long)]
        alphabet: Option<String>,
        /// Word to test for membership.
        #[arg(long)]
        member: Option<String>,
    },
    /// Intersection of a finitely generated subgroup with a finite-index one.
    Intersect {
        #[command(flatten)]
        words: SubgroupWords,
        /// Generator of the finite-index subgroup; repeat for several.
        #[arg(long = "with", required = true)]
        with: Vec<String>,
        #[arg(long)]
        alphabet: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SmallcancCommand {
    /// Longest pieces and the C'(lambda) verdict.
    Check { file: String },
    /// Word problem by Dehn's algorithm.
    Wp { file: String, word: String },
}

#[derive(Debug, Subcommand)]
pub enum ConstructCommand {
    /// Presentation of the universal central extension of a perfect group.
    Uce { file: String },
    /// Rips construction.
    Rips { file: String },
    /// Generating set of the fibre product of the Rips output.
    Fiber { file: String },
    /// Every stage, reported as JSON.
    Pipeline { file: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FactorOracle {
    Slinf,
    Free,
}

#[derive(Debug, Subcommand)]
pub enum WpCommand {
    /// Triviality in SL_inf(Z) of a word in the c_k.
    Slinf { word: String },
    /// Triviality in the HNN embedding of a word over a, b, x, s, t. Letters
    /// c_k are encoded first.
    Hnn {
        word: String,
        #[arg(long, value_enum, default_value_t = FactorOracle::Slinf)]
        oracle: FactorOracle,
    },
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Runs the acceptance criteria and prints one line per criterion.
    Run {
        /// Run only this criterion (1-10).
        #[arg(long)]
        only: Option<usize>,
    },
}

/// Output of a handler in both formats, and whether the computation reached
/// its goal (the corpus reports failures through this).
pub struct Report {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

impl Report {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Self { text: text.into(), json, ok: true }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.text.clone(),
            OutputFormat::Json => serde_json::to_string_pretty(&self.json).expect("JSON values serialize"),
        }
    }
}

impl From<PresentationError> for CliError {
    fn from(e: PresentationError) -> Self {
        match e {
            PresentationError::SearchBudgetExceeded { .. } | PresentationError::Oracle(_) => {
                CliError::Computation(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SubgroupError> for CliError {
    fn from(e: SubgroupError) -> Self {
        match e {
            SubgroupError::Presentation(p) => p.into(),
            SubgroupError::InvalidBudget => CliError::Usage(e.to_string()),
            SubgroupError::IncompatibleAlphabets(_) => CliError::Input(e.to_string()),
            _ => CliError::Computation(e.to_string()),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Presentation(p) => p.into(),
            ConstructionError::Subgroup(s) => s.into(),
            ConstructionError::Homology(h) => h.into(),
            _ => CliError::Computation(e.to_string()),
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        CliError::Usage(format!("{e}; pass --assert-aspherical"))
    }
}

impl From<SmallCancError> for CliError {
    fn from(e: SmallCancError) -> Self {
        match e {
            SmallCancError::Presentation(p) => p.into(),
            SmallCancError::InvalidLambda(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::UnknownGenerator(_) => CliError::Input(e.to_string()),
            OracleError::Undecided(_) => CliError::Computation(e.to_string()),
        }
    }
}

impl From<HnnError> for CliError {
    fn from(e: HnnError) -> Self {
        match e {
            HnnError::Oracle(o) => o.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Reads a presentation from a file, or takes the argument itself when it
/// is an inline `<…|…>` or JSON presentation.
pub fn load_presentation(arg: &str) -> Result<FinitePresentation, CliError> {
    let text = read_source(arg)?;
    Ok(FinitePresentation::from_text(&text)?)
}

fn read_source(arg: &str) -> Result<String, CliError> {
    let trimmed = arg.trim_start();
    if Path::new(arg).exists() {
        fs::read_to_string(arg).map_err(|e| CliError::Input(format!("cannot read {arg}: {e}")))
    } else if trimmed.starts_with('<') || trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else {
        Err(CliError::Input(format!("no such file: {arg}")))
    }
}

fn words_over(p: &FinitePresentation, texts: &[String]) -> Result<Vec<Word>, CliError> {
    texts.iter().map(|t| Ok(parse_word(t, Some(p.generators()))?)).collect()
}

fn strings(words: &[Word]) -> Vec<String> {
    words.iter().map(ToString::to_string).collect()
}

fn presentation_report(p: &FinitePresentation) -> Report {
    Report::new(p.to_string(), json!(p.to_json()))
}

fn parse_matrix(text: &str) -> Result<IntegerMatrix, CliError> {
    let bad = |e: String| CliError::Input(format!("bad matrix: {e}"));
    let t = text.trim_start();
    if t.starts_with('{') {
        let json: MatrixJson = serde_json::from_str(t).map_err(|e| bad(e.to_string()))?;
        return IntegerMatrix::from_json(&json).map_err(|e| bad(e.to_string()));
    }
    let rows: Vec<Vec<BigInt>> = if t.starts_with('[') {
        let v: Vec<Vec<Value>> = serde_json::from_str(t).map_err(|e| bad(e.to_string()))?;
        v.iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let s = x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string());
                        s.parse::<BigInt>().map_err(|e| bad(format!("{s}: {e}")))
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?
    } else {
        t.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split_whitespace().map(|s| s.parse::<BigInt>().map_err(|e| bad(format!("{s}: {e}")))).collect())
            .collect::<Result<_, _>>()?
    };
    IntegerMatrix::from_rows(rows).map_err(|e| bad(e.to_string()))
}

fn alphabet_for(listed: Option<&str>, words: &[Word]) -> Vec<Generator> {
    match listed {
        Some(s) => s.split(',').map(str::trim).filter(|s| !s.is_empty()).map(Generator::new).collect(),
        None => {
            let mut set = std::collections::BTreeSet::new();
            for w in words {
                set.extend(w.generators());
            }
            set.into_iter().collect()
        }
    }
}

fn free_words(texts: &[String]) -> Result<Vec<Word>, CliError> {
    texts.iter().map(|t| Ok(parse_word(t, None)?)).collect()
}

pub fn execute(cli: &Cli, cfg: &RunConfig) -> Result<Report, CliError> {
    match &cli.command {
        Command::Group(c) => group(c, cfg),
        Command::Subgroup(c) => subgroup(c, cfg),
        Command::Smallcanc(c) => smallcanc(c, cfg),
        Command::Construct(c) => construct(c, cfg),
        Command::Wp(c) => wp(c, cfg),
        Command::Corpus(CorpusCommand::Run { only }) => {
            if only.is_some_and(|n| !(1..=corpus::CRITERIA).contains(&n)) {
                return Err(CliError::Usage(format!("--only takes 1..={}", corpus::CRITERIA)));
            }
            let outcomes = corpus::run(cfg, *only);
            let text = outcomes.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
            let ok = outcomes.iter().all(|o| o.passed);
            Ok(Report { text, json: json!(outcomes), ok })
        }
    }
}

fn group(c: &GroupCommand, cfg: &RunConfig) -> Result<Report, CliError> {
    match c {
        GroupCommand::Betti { file } => {
            let h = first_homology(&load_presentation(file)?);
            Ok(Report::new(h.to_string(), json!(h)))
        }
        GroupCommand::B2 { file, assert_aspherical } => {
            let b2 = second_betti_aspherical(&load_presentation(file)?, *assert_aspherical)?;
            Ok(Report::new(format!("b2={b2}"), json!({ "b2": b2 })))
        }
        GroupCommand::Order { file } => {
            let table = todd_coxeter(&load_presentation(file)?, &[], cfg.max_cosets)?;
            Ok(Report::new(format!("order={}", table.index()), json!({ "order": table.index() })))
        }
        GroupCommand::Product { left, right } => {
            Ok(presentation_report(&direct_product(&load_presentation(left)?, &load_presentation(right)?)))
        }
        GroupCommand::Recursify { file, n } => Ok(presentation_report(&recursify(&load_presentation(file)?, *n)?)),
        GroupCommand::Snf { matrix } => {
            let m = parse_matrix(&read_source(matrix)?)?;
            let s = smith_normal_form(&m);
            let factors: Vec<String> = s.invariant_factors().iter().map(ToString::to_string).collect();
            let text = format!("invariant factors: [{}]\nrank: {}\n{}", factors.join(", "), s.rank(), s.d);
            Ok(Report::new(
                text,
                json!({ "invariant_factors": factors, "rank": s.rank(), "u": s.u.to_json(), "d": s.d.to_json(), "v": s.v.to_json() }),
            ))
        }
    }
}

fn subgroup(c: &SubgroupCommand, cfg: &RunConfig) -> Result<Report, CliError> {
    match c {
        SubgroupCommand::Index { file, words } => {
            let p = load_presentation(file)?;
            let table = todd_coxeter(&p, &words_over(&p, &words.gens)?, cfg.max_cosets)?;
            let mut report = Report::new(format!("index={}", table.index()), json!(table.to_json()));
            if cfg.trace {
                report.text.push_str(&format!("\n{}", serde_json::to_string(&table.to_json()).expect("serializable")));
            }
            Ok(report)
        }
        SubgroupCommand::Presentation { file, words } => {
            let p = load_presentation(file)?;
            let table = todd_coxeter(&p, &words_over(&p, &words.gens)?, cfg.max_cosets)?;
            let sub = reidemeister_schreier(&table, &p)?;
            let h = first_homology(&sub);
            Ok(Report::new(
                format!("index={}\n{sub}\n{h}", table.index()),
                json!({ "index": table.index(), "presentation": sub.to_json(), "homology": h }),
            ))
        }
        SubgroupCommand::Fold { words, alphabet, member } => {
            let subgens = free_words(&words.gens)?;
            let alphabet = alphabet_for(alphabet.as_deref(), &subgens);
            let g = fold(&alphabet, &subgens)?;
            let basis = strings(&g.free_basis());
            let index = g.index();
            let mut text = format!(
                "vertices={} edges={} rank={} index={}\nbasis: {}",
                g.vertex_count(),
                g.edge_count(),
                g.rank(),
                index.map_or("infinite".to_string(), |i| i.to_string()),
                basis.join(", ")
            );
            let mut j = json!({
                "vertices": g.vertex_count(), "edges": g.edge_count(), "rank": g.rank(),
                "index": index, "basis": basis,
            });
            if let Some(m) = member {
                let w = parse_word(m, Some(&alphabet))?;
                let is_member = graph_membership(&g, &w);
                text.push_str(&format!("\nmember: {is_member}"));
                j["member"] = json!(is_member);
            }
            Ok(Report::new(text, j))
        }
        SubgroupCommand::Intersect { words, with, alphabet } => {
            let h = free_words(&words.gens)?;
            let k = free_words(with)?;
            let all: Vec<Word> = h.iter().chain(&k).cloned().collect();
            let alphabet = alphabet_for(alphabet.as_deref(), &all);
            let free = FinitePresentation::free(alphabet.clone())?;
            let table = todd_coxeter(&free, &k, cfg.max_cosets)?;
            let g = fold(&alphabet, &h)?;
            let i = intersect_with_finite_index(&g, &table)?;
            let meet = fold(&alphabet, &i.ambient)?;
            let ambient = strings(&i.ambient);
            Ok(Report::new(
                format!("orbit={} rank={}\ngenerators: {}", i.orbit, meet.rank(), ambient.join(", ")),
                json!({ "orbit": i.orbit, "rank": meet.rank(), "generators": ambient, "h_words": strings(&i.words) }),
            ))
        }
    }
}

fn smallcanc(c: &SmallcancCommand, cfg: &RunConfig) -> Result<Report, CliError> {
    match c {
        SmallcancCommand::Check { file } => {
            let r = check_metric_condition(&load_presentation(file)?, cfg.lambda)?;
            let mut report = Report::new(r.to_string(), r.to_json());
            if cfg.trace {
                for rel in &r.relators {
                    report
                        .text
                        .push_str(&format!("\n{}: length {}, max piece {}", rel.relator, rel.length, rel.max_piece));
                }
            }
            Ok(report)
        }
        SmallcancCommand::Wp { file, word } => {
            let p = load_presentation(file)?;
            let w = parse_word(word, Some(p.generators()))?;
            let solver = DehnSolver::new(&p);
            let run = solver.reduce(&w)?;
            let verdict = if run.word.is_identity() {
                "trivial"
            } else if solver.is_certified() {
                "nontrivial"
            } else {
                return Err(CliError::Computation(format!(
                    "Dehn's algorithm stopped at {} and the presentation is not C'(1/6)",
                    run.word
                )));
            };
            let mut text = verdict.to_string();
            if cfg.trace {
                text.push_str(&format!("\nreduced: {}\nlengths: {:?}", run.word, run.lengths));
            }
            Ok(Report::new(
                text,
                json!({ "verdict": verdict, "reduced": run.word.to_string(), "lengths": run.lengths }),
            ))
        }
    }
}

fn construct(c: &ConstructCommand, cfg: &RunConfig) -> Result<Report, CliError> {
    match c {
        ConstructCommand::Uce { file } => {
            let p = load_presentation(file)?;
            let oracle = QuotientOracle::choose(&p, cfg.max_cosets)?;
            let uce = universal_central_extension(&p, oracle.oracle(), cfg.search_cap)?;
            let text = format!("{}\nkernel generators: {}", uce.presentation, strings(&uce.h2_generators).join(", "));
            Ok(Report::new(text, uce.to_json()))
        }
        ConstructCommand::Rips { file } => {
            let r = rips_construct(&load_presentation(file)?)?;
            let text = format!(
                "generators={} relators={} {}\n{}",
                r.presentation.rank(),
                r.presentation.relators().len(),
                r.certificate,
                r.presentation
            );
            Ok(Report::new(text, r.to_json()))
        }
        ConstructCommand::Fiber { file } => {
            let p = load_presentation(file)?;
            let r = rips_construct(&p)?;
            let spec = fiber_product_spec(&r, p.relators())?;
            let mut text = format!("|S|={} b1(Gamma)={}", spec.fiber_generators.len(), spec.b1_gamma);
            for (u, v) in &spec.pairs {
                text.push_str(&format!("\n({u}, {v})"));
            }
            Ok(Report::new(text, spec.to_json()))
        }
        ConstructCommand::Pipeline { file } => {
            let report = run_pipeline(&load_presentation(file)?, cfg.b2_mode, cfg.pipeline())?;
            let j = report.to_json();
            let text = serde_json::to_string_pretty(&j).expect("JSON values serialize");
            Ok(Report::new(text, j))
        }
    }
}

fn wp(c: &WpCommand, cfg: &RunConfig) -> Result<Report, CliError> {
    match c {
        WpCommand::Slinf { word } => {
            let w = parse_word(word, None)?;
            let run = slinf_evaluate(&w)?;
            let verdict = if run.is_trivial() { "trivial" } else { "nontrivial" };
            let mut text = verdict.to_string();
            if cfg.trace {
                text.push_str(&format!("\nproduct: {}\ncost: {}", run.product, json!(run.cost)));
            }
            Ok(Report::new(
                text,
                json!({ "verdict": verdict, "product": run.product.to_string(), "cost": run.cost, "steps": run.cost.steps() }),
            ))
        }
        WpCommand::Hnn { word, oracle } => {
            let mut w = parse_word(word, None)?;
            if w.letters().iter().any(|l| l.gen.family() == C_FAMILY) {
                w = nu_encode(&w).map_err(|e| CliError::Input(e.to_string()))?;
            }
            let verdict = match oracle {
                FactorOracle::Slinf => hnn_is_trivial(&w, &SlinfOracle)?,
                FactorOracle::Free => hnn_is_trivial(&w, &FreeGroupOracle)?,
            };
            let shown = if verdict.trivial { "trivial" } else { "nontrivial" };
            let mut text = shown.to_string();
            if cfg.trace {
                for (n, s) in verdict.trace.steps.iter().enumerate() {
                    text.push_str(&format!(
                        "\n{n}: {} (length {}, s-components {}) {}",
                        s.action, s.encoded_length, s.s_components, s.word
                    ));
                }
            }
            let oracle_name = match oracle {
                FactorOracle::Slinf => SlinfOracle.describe(),
                FactorOracle::Free => FreeGroupOracle.describe(),
            };
            Ok(Report::new(
                text,
                json!({ "verdict": shown, "oracle": oracle_name, "trace": verdict.trace, "violations": verdict.trace.violations() }),
            ))
        }
    }
}
