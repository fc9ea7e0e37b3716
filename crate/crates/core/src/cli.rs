//! Command-line front end.
//!
//! stdout carries data only. Diagnostics, including the tree score of
//! `cluster`, go to stderr. Exit codes: 0 success, 1 I/O failure on output
//! or cache, 2 usage, 3 data error, 4 external tool failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::compressor::{check_normality, CompressorError, CompressorHandle};
use crate::matrix::{DistanceMatrix, MatrixError};
use crate::multilist::{canonical_order, check_sandwich, default_slack, MultilistError};
use crate::ncd::{ncd_matrix, DataObject, NcdError};
use crate::nwd::{
    build_frequency_index, nwd_matrix, CountTable, FrequencyProvider, LiveConfig, LiveHitCounter,
    NwdError, ScaledNormalizer,
};
use crate::quartet::{hill_climb, QuartetError, SearchConfig};

pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_EXTERNAL: i32 = 4;

const DEFAULT_BUDGET: usize = 2000;
const DEFAULT_RESTARTS: usize = 8;
const DEFAULT_TIMEOUT_SECS: f64 = 30.0;
const DEFAULT_CACHE_DIR: &str = ".infodist-cache";

#[derive(Debug)]
pub enum Failure {
    Io(String),
    Usage(String),
    Data(String),
    External(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Io(_) => EXIT_IO,
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
            Failure::External(_) => EXIT_EXTERNAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Usage(m) | Failure::Data(m) | Failure::External(m) => m,
        }
    }
}

impl From<CompressorError> for Failure {
    fn from(e: CompressorError) -> Self {
        match e {
            CompressorError::ExternalFailure { .. } => Failure::External(e.to_string()),
            CompressorError::InvalidTemplate { .. } | CompressorError::NoSamples => {
                Failure::Usage(e.to_string())
            }
        }
    }
}

impl From<MatrixError> for Failure {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::TooSmall(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<NcdError> for Failure {
    fn from(e: NcdError) -> Self {
        match e {
            NcdError::Compressor(c) => c.into(),
            NcdError::Matrix(m) => m.into(),
            NcdError::TooFewObjects(_) => Failure::Usage(e.to_string()),
            NcdError::DuplicateLabel(_) => Failure::Data(e.to_string()),
        }
    }
}

impl From<NwdError> for Failure {
    fn from(e: NwdError) -> Self {
        match e {
            NwdError::Matrix(m) => m.into(),
            NwdError::Transport { .. } => Failure::External(e.to_string()),
            NwdError::Cache(_) => Failure::Io(e.to_string()),
            NwdError::EmptyCorpus | NwdError::TooFewTerms(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<MultilistError> for Failure {
    fn from(e: MultilistError) -> Self {
        match e {
            MultilistError::Compressor(c) => c.into(),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<QuartetError> for Failure {
    fn from(e: QuartetError) -> Self {
        match e {
            QuartetError::TooFewLeaves(n) => Failure::Usage(format!(
                "quartet clustering needs at least 4 objects, got {n}"
            )),
            QuartetError::InvalidSearch(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompressorChoice {
    Builtin,
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestCompressor {
    Rle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Newick,
    Dot,
    Text,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Tsv => "tsv",
            Format::Newick => "newick",
            Format::Dot => "dot",
            Format::Text => "text",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "infodist", version, about = "Compression and web-count distances, quartet tree clustering")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML file with defaults for the shared flags; flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub compressor: Option<CompressorChoice>,
    /// Command line run per input, e.g. "xz -9 -c"; reads stdin, writes stdout.
    #[arg(long, global = true, value_name = "TEMPLATE")]
    pub external_cmd: Option<String>,
    #[arg(long, global = true, value_enum, hide = true)]
    pub test_compressor: Option<TestCompressor>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Consecutive rejected mutations before a restart ends.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Multiplies the NWD normalizer N.
    #[arg(long, global = true)]
    pub n_factor: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Hit-count cache for the live NWD client.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Additive slack in bytes for the multiset sandwich check.
    #[arg(long, global = true)]
    pub slack: Option<f64>,
    /// Write data here instead of stdout; replaced atomically.
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// NCD matrix over files (directories contribute their files).
    Ncd(Inputs),
    /// Build a document-frequency index from a directory of text files.
    Index {
        docs: PathBuf,
    },
    /// NWD matrix over terms.
    Nwd(NwdArgs),
    /// Quartet tree of a distance matrix TSV ("-" for stdin).
    Cluster {
        matrix: PathBuf,
        /// Write the score here instead of stderr.
        #[arg(long, value_name = "PATH")]
        score_out: Option<PathBuf>,
    },
    /// Multi-object distance estimates and the sandwich check.
    Multiset(Inputs),
    /// Normality report for the selected compressor over a sample directory.
    CheckCompressor {
        samples: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct Inputs {
    pub paths: Vec<PathBuf>,
    /// File with one input path per line.
    #[arg(long, value_name = "PATH")]
    pub list: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NwdArgs {
    pub terms: Vec<String>,
    /// File with one term per line.
    #[arg(long, value_name = "PATH")]
    pub terms_file: Option<PathBuf>,
    /// Index file written by `infodist index`.
    #[arg(long, value_name = "PATH")]
    pub index: Option<PathBuf>,
    /// Directory of text documents, indexed in memory (phrase terms allowed).
    #[arg(long, value_name = "DIR")]
    pub docs: Option<PathBuf>,
    /// Search endpoint URL with a {query} placeholder.
    #[arg(long, value_name = "TEMPLATE")]
    pub live_url: Option<String>,
    /// Dotted path of the count in the JSON response.
    #[arg(long, value_name = "PATH")]
    pub live_path: Option<String>,
    /// Request timeout in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// N for the live client; must exceed every hit count.
    #[arg(long)]
    pub normalizer: Option<f64>,
}

/// Optional TOML defaults. Keys mirror the long flags with underscores.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub compressor: Option<CompressorChoice>,
    pub external_cmd: Option<String>,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub restarts: Option<usize>,
    pub n_factor: Option<f64>,
    pub format: Option<Format>,
    pub cache_dir: Option<PathBuf>,
    pub slack: Option<f64>,
    pub live_url: Option<String>,
    pub live_path: Option<String>,
    pub timeout: Option<f64>,
    pub normalizer: Option<f64>,
}

/// Flags merged over the config file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub compressor: Option<CompressorChoice>,
    pub external_cmd: Option<String>,
    pub test_compressor: Option<TestCompressor>,
    pub seed: u64,
    pub budget: usize,
    pub restarts: usize,
    pub n_factor: Option<f64>,
    pub format: Option<Format>,
    pub cache_dir: PathBuf,
    pub slack: Option<f64>,
    pub output: Option<PathBuf>,
    pub live_url: Option<String>,
    pub live_path: Option<String>,
    pub timeout: f64,
    pub normalizer: Option<f64>,
}

impl RunConfig {
    fn resolve(common: &Common, nwd: Option<&NwdArgs>, file: FileConfig) -> Self {
        Self {
            compressor: common.compressor.or(file.compressor),
            external_cmd: common.external_cmd.clone().or(file.external_cmd),
            test_compressor: common.test_compressor,
            seed: common.seed.or(file.seed).unwrap_or(0),
            budget: common.budget.or(file.budget).unwrap_or(DEFAULT_BUDGET),
            restarts: common.restarts.or(file.restarts).unwrap_or(DEFAULT_RESTARTS),
            n_factor: common.n_factor.or(file.n_factor),
            format: common.format.or(file.format),
            cache_dir: common
                .cache_dir
                .clone()
                .or(file.cache_dir)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)),
            slack: common.slack.or(file.slack),
            output: common.output.clone(),
            live_url: nwd.and_then(|a| a.live_url.clone()).or(file.live_url),
            live_path: nwd.and_then(|a| a.live_path.clone()).or(file.live_path),
            timeout: nwd
                .and_then(|a| a.timeout)
                .or(file.timeout)
                .unwrap_or(DEFAULT_TIMEOUT_SECS),
            normalizer: nwd.and_then(|a| a.normalizer).or(file.normalizer),
        }
    }

    fn compressor(&self) -> Result<CompressorHandle, Failure> {
        if self.test_compressor == Some(TestCompressor::Rle) {
            return Ok(CompressorHandle::run_length());
        }
        let choice = self.compressor.unwrap_or(if self.external_cmd.is_some() {
            CompressorChoice::External
        } else {
            CompressorChoice::Builtin
        });
        match (choice, &self.external_cmd) {
            (CompressorChoice::Builtin, _) => Ok(CompressorHandle::builtin()),
            (CompressorChoice::External, Some(t)) => Ok(CompressorHandle::external(t)?),
            (CompressorChoice::External, None) => Err(Failure::Usage(
                "--compressor external needs --external-cmd".into(),
            )),
        }
    }

    fn format(&self, allowed: &[Format]) -> Result<Format, Failure> {
        match self.format {
            None => Ok(allowed[0]),
            Some(f) if allowed.contains(&f) => Ok(f),
            Some(f) => Err(Failure::Usage(format!(
                "--format {} is not available here; use one of {}",
                f.name(),
                allowed.iter().map(|f| f.name()).collect::<Vec<_>>().join(", ")
            ))),
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<FileConfig, Failure> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("infodist: error: {}", f.message());
            f.code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), Failure> {
    let file = load_config(cli.common.config.as_deref())?;
    let nwd_args = match &cli.command {
        Command::Nwd(a) => Some(a),
        _ => None,
    };
    let config = RunConfig::resolve(&cli.common, nwd_args, file);
    match &cli.command {
        Command::Ncd(inputs) => cmd_ncd(inputs, &config),
        Command::Index { docs } => cmd_index(docs, &config),
        Command::Nwd(args) => cmd_nwd(args, &config),
        Command::Cluster { matrix, score_out } => cmd_cluster(matrix, score_out.as_deref(), &config),
        Command::Multiset(inputs) => cmd_multiset(inputs, &config),
        Command::CheckCompressor { samples } => cmd_check_compressor(samples, &config),
    }
}

fn usage_io(path: &Path, e: io::Error) -> Failure {
    Failure::Usage(format!("cannot read {}: {e}", path.display()))
}

/// Regular files directly inside `dir`, sorted by name.
fn dir_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| usage_io(dir, e))? {
        let entry = entry.map_err(|e| usage_io(dir, e))?;
        let path = entry.path();
        if path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn expand_inputs(inputs: &Inputs) -> Result<Vec<PathBuf>, Failure> {
    let mut given = inputs.paths.clone();
    if let Some(list) = &inputs.list {
        let text = fs::read_to_string(list).map_err(|e| usage_io(list, e))?;
        given.extend(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(PathBuf::from));
    }
    let mut files = Vec::new();
    for path in given {
        if path.is_dir() {
            files.extend(dir_files(&path)?);
        } else if path.is_file() {
            files.push(path);
        } else {
            return Err(Failure::Usage(format!("no such file: {}", path.display())));
        }
    }
    Ok(files)
}

fn base_name(path: &Path) -> Result<String, Failure> {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .ok_or_else(|| Failure::Usage(format!("{} has no file name", path.display())))
}

/// Reads every file after checking that there are at least `min` of them
/// and that their base names are distinct.
fn read_labeled(files: &[PathBuf], min: usize, what: &str) -> Result<Vec<(String, Vec<u8>)>, Failure> {
    if files.len() < min {
        return Err(Failure::Usage(format!(
            "{what} needs at least {min} input files, got {}",
            files.len()
        )));
    }
    let mut labels = Vec::with_capacity(files.len());
    for f in files {
        let label = base_name(f)?;
        if labels.contains(&label) {
            return Err(Failure::Data(format!("duplicate file name {label:?}")));
        }
        labels.push(label);
    }
    labels
        .into_iter()
        .zip(files)
        .map(|(label, f)| Ok((label, fs::read(f).map_err(|e| usage_io(f, e))?)))
        .collect()
}

/// Writes `text` to `--output` (via a temporary file renamed into place) or
/// to stdout.
fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    let io_err = |e: io::Error| Failure::Io(format!("writing output: {e}"));
    match output {
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(io_err)?;
            out.flush().map_err(io_err)
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
            tmp.write_all(text.as_bytes()).map_err(io_err)?;
            tmp.persist(path).map_err(|e| io_err(e.error))?;
            Ok(())
        }
    }
}

fn cmd_ncd(inputs: &Inputs, config: &RunConfig) -> Result<(), Failure> {
    config.format(&[Format::Tsv])?;
    let compressor = config.compressor()?;
    let files = expand_inputs(inputs)?;
    let corpus = read_labeled(&files, 2, "ncd")?
        .into_iter()
        .map(|(label, bytes)| DataObject::new(label, bytes))
        .collect::<Result<Vec<_>, _>>()?;
    let matrix = ncd_matrix(&corpus, &compressor)?;
    emit(config.output.as_deref(), &matrix.to_tsv())
}

fn read_documents(dir: &Path) -> Result<Vec<(String, String)>, Failure> {
    if !dir.is_dir() {
        return Err(Failure::Usage(format!("{} is not a directory", dir.display())));
    }
    let files = dir_files(dir)?;
    read_labeled(&files, 1, "indexing")
        .map(|docs| {
            docs.into_iter()
                .map(|(id, bytes)| (id, String::from_utf8_lossy(&bytes).into_owned()))
                .collect()
        })
}

fn cmd_index(docs: &Path, config: &RunConfig) -> Result<(), Failure> {
    config.format(&[Format::Tsv])?;
    let index = build_frequency_index(&read_documents(docs)?)?;
    emit(config.output.as_deref(), &index.to_table().to_tsv())
}

fn read_terms(args: &NwdArgs) -> Result<Vec<String>, Failure> {
    let mut terms = args.terms.clone();
    if let Some(path) = &args.terms_file {
        let text = fs::read_to_string(path).map_err(|e| usage_io(path, e))?;
        terms.extend(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from));
    }
    if terms.len() < 2 {
        return Err(Failure::Usage(format!("nwd needs at least 2 terms, got {}", terms.len())));
    }
    Ok(terms)
}

fn nwd_with<P: FrequencyProvider>(terms: &[String], p: P, config: &RunConfig) -> Result<DistanceMatrix, Failure> {
    match config.n_factor {
        None => Ok(nwd_matrix(terms, &p)?),
        Some(f) if f.is_finite() && f > 0.0 => Ok(nwd_matrix(terms, &ScaledNormalizer::new(p, f))?),
        Some(f) => Err(Failure::Usage(format!("--n-factor must be positive, got {f}"))),
    }
}

fn cmd_nwd(args: &NwdArgs, config: &RunConfig) -> Result<(), Failure> {
    config.format(&[Format::Tsv])?;
    let terms = read_terms(args)?;
    let sources = [args.index.is_some(), args.docs.is_some(), config.live_url.is_some()];
    if sources.iter().filter(|s| **s).count() != 1 {
        return Err(Failure::Usage(
            "nwd needs exactly one of --index, --docs or --live-url".into(),
        ));
    }
    let matrix = if let Some(path) = &args.index {
        let text = fs::read_to_string(path).map_err(|e| usage_io(path, e))?;
        nwd_with(&terms, CountTable::parse_tsv(&text)?, config)?
    } else if let Some(dir) = &args.docs {
        nwd_with(&terms, build_frequency_index(&read_documents(dir)?)?, config)?
    } else {
        let url_template = config.live_url.clone().unwrap_or_default();
        let normalizer = config
            .normalizer
            .ok_or_else(|| Failure::Usage("--live-url needs --normalizer".into()))?;
        if !(config.timeout > 0.0) || !config.timeout.is_finite() {
            return Err(Failure::Usage(format!("--timeout must be positive, got {}", config.timeout)));
        }
        let client = LiveHitCounter::new(LiveConfig {
            url_template,
            count_path: config.live_path.clone().unwrap_or_else(|| "count".into()),
            cache_dir: config.cache_dir.clone(),
            timeout: Duration::from_secs_f64(config.timeout),
            normalizer,
        })?;
        nwd_with(&terms, client, config)?
    };
    emit(config.output.as_deref(), &matrix.to_tsv())
}

fn read_input_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| usage_io(path, e))
    }
}

fn cmd_cluster(matrix: &Path, score_out: Option<&Path>, config: &RunConfig) -> Result<(), Failure> {
    let format = config.format(&[Format::Newick, Format::Dot])?;
    let d = DistanceMatrix::parse_tsv(&read_input_text(matrix)?)?;
    if d.len() < 4 {
        return Err(QuartetError::TooFewLeaves(d.len()).into());
    }
    let search = SearchConfig {
        seed: config.seed,
        budget: config.budget,
        restarts: config.restarts,
    };
    let outcome = hill_climb(&d, &search)?;
    let text = match format {
        Format::Dot => outcome.tree.to_dot(),
        _ => format!("{}\n", outcome.tree.to_newick()),
    };
    emit(config.output.as_deref(), &text)?;
    match score_out {
        Some(path) => emit(Some(path), &format!("{:.6}\n", outcome.score)),
        None => {
            eprintln!("score\t{:.6}", outcome.score);
            Ok(())
        }
    }
}

fn cmd_multiset(inputs: &Inputs, config: &RunConfig) -> Result<(), Failure> {
    let format = config.format(&[Format::Text, Format::Tsv])?;
    let compressor = config.compressor()?;
    let files = expand_inputs(inputs)?;
    let items: Vec<Vec<u8>> = read_labeled(&files, 2, "multiset")?
        .into_iter()
        .map(|(_, bytes)| bytes)
        .collect();
    let list = canonical_order(items)?;
    let slack = config.slack.unwrap_or_else(|| default_slack(&list));
    let r = check_sandwich(&list, &compressor, slack)?;
    let mut out = String::new();
    match format {
        Format::Tsv => {
            out.push_str("items\te_min_est\te_max_est\tpairwise_bound\tslack\tsandwich_ok\n");
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                list.len(),
                r.e_min_est,
                r.e_max_est,
                r.pairwise_bound,
                r.slack_used,
                r.sandwich_ok
            );
        }
        _ => {
            let _ = writeln!(out, "compressor      {compressor}");
            let _ = writeln!(out, "items           {}", list.len());
            let _ = writeln!(out, "e_min_est       {}", r.e_min_est);
            let _ = writeln!(out, "e_max_est       {}", r.e_max_est);
            let _ = writeln!(out, "pairwise_bound  {}", r.pairwise_bound);
            let _ = writeln!(out, "slack           {}", r.slack_used);
            let _ = writeln!(out, "sandwich_ok     {}", r.sandwich_ok);
        }
    }
    emit(config.output.as_deref(), &out)
}

fn cmd_check_compressor(samples: &Path, config: &RunConfig) -> Result<(), Failure> {
    let format = config.format(&[Format::Text, Format::Tsv])?;
    let compressor = config.compressor()?;
    if !samples.is_dir() {
        return Err(Failure::Usage(format!("{} is not a directory", samples.display())));
    }
    let files: Vec<Vec<u8>> = read_labeled(&dir_files(samples)?, 1, "check-compressor")?
        .into_iter()
        .map(|(_, bytes)| bytes)
        .collect();
    // Every unordered pair of distinct files; a lone file is paired with itself.
    let mut pairs = Vec::new();
    for i in 0..files.len() {
        for j in i + 1..files.len() {
            pairs.push((files[i].clone(), files[j].clone()));
        }
    }
    if pairs.is_empty() {
        pairs.push((files[0].clone(), files[0].clone()));
    }
    let r = check_normality(&compressor, &pairs)?;
    let mut out = String::new();
    match format {
        Format::Tsv => {
            out.push_str("samples\tidempotency_gap\tmonotonicity_violations\tsymmetry_gap\n");
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                r.sample_count, r.idempotency_gap, r.monotonicity_violations, r.symmetry_gap
            );
        }
        _ => {
            let _ = writeln!(out, "compressor               {compressor}");
            let _ = writeln!(out, "samples                  {}", r.sample_count);
            let _ = writeln!(out, "idempotency_gap          {}", r.idempotency_gap);
            let _ = writeln!(out, "monotonicity_violations  {}", r.monotonicity_violations);
            let _ = writeln!(out, "symmetry_gap             {}", r.symmetry_gap);
        }
    }
    emit(config.output.as_deref(), &out)
}
