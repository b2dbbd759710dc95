//! Batch front end: regenerates and diffs the exceptional tables, runs the
//! classical verification sweeps and reports single classes.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use atlas_core::assoc_positive::TieOrder;
use atlas_core::root_system::{Family, RootDatum, TypeLabel};
use atlas_core::slice_invariants::{block_d_oracle, report_for_pair, report_for_pair_with, telescoped_length, SliceReport};
use atlas_core::strata_classical::{dim_centralizer, special_classes, weyl_classes};
use atlas_core::weyl::{classical_representative, parse_carter_file, CarterEntry, CarterPair, ClassSpec};
use atlas_core::{AtlasError, DEFAULT_DATA_DIR};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

pub const DATA_DIR_ENV: &str = "ATLAS_DATA_DIR";

#[derive(Parser, Debug)]
#[command(name = "atlas", version, about = "Transversal-slice invariants of Weyl group classes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Compute the exceptional table for one type, optionally diffing it against a golden file.
    Tables(TablesArgs),
    /// Check every class of a classical Weyl group against the closed-form oracles.
    Verify(VerifyArgs),
    /// Report a single class.
    Class(ClassArgs),
}

#[derive(Args, Debug)]
pub struct TablesArgs {
    /// G2, F4, E6, E7 or E8.
    #[arg(long = "type")]
    pub type_name: String,
    /// Only compute the row with this class name.
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Golden CSV to compare against; looked up in the working directory, then in the data directory.
    #[arg(long)]
    pub check: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads (0 picks the number of cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// A, B, C or D, optionally with the rank attached (`C3`).
    #[arg(long = "type")]
    pub type_name: String,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct ClassArgs {
    #[arg(long = "type")]
    pub type_name: String,
    #[arg(long)]
    pub rank: Option<usize>,
    /// A Carter name for exceptional types; `λ|μ` (or a partition for type A) for classical ones.
    #[arg(long)]
    pub class: String,
    /// Text unless `json` is given.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Tables,
    Verify,
    Class,
}

/// Validated settings for one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub type_label: TypeLabel,
    pub class: Option<String>,
    pub out: Option<PathBuf>,
    pub check: Option<PathBuf>,
    pub jobs: usize,
    pub format: Option<Format>,
    pub data_dir: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn data_err(e: impl fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Mismatch,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Mismatch => 1,
        }
    }
}

/// Largest rank accepted by `verify` and classical `class`.
pub fn max_classical_rank(family: Family) -> usize {
    match family {
        Family::A => 9,
        _ => 8,
    }
}

pub fn default_data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV).map_or_else(|| PathBuf::from(DEFAULT_DATA_DIR), PathBuf::from)
}

fn parse_label(name: &str, rank: Option<usize>) -> Result<TypeLabel, CliError> {
    TypeLabel::parse(name, rank).map_err(|e| CliError::Usage(e.to_string()))
}

fn classical_label(name: &str, rank: Option<usize>) -> Result<TypeLabel, CliError> {
    let label = parse_label(name, rank)?;
    if !label.family.is_classical() {
        return Err(CliError::Usage(format!("{label} is not a classical type")));
    }
    let max = max_classical_rank(label.family);
    if label.rank > max {
        return Err(CliError::Usage(format!("rank {} exceeds the bound {max} for type {}", label.rank, label.family.letter())));
    }
    Ok(label)
}

fn resolve_check(path: &Path, data_dir: &Path) -> Result<PathBuf, CliError> {
    if path.exists() {
        return Ok(path.to_path_buf());
    }
    let alt = data_dir.join(path);
    if alt.exists() {
        return Ok(alt);
    }
    Err(CliError::Usage(format!("golden file {} not found", path.display())))
}

impl RunConfig {
    pub fn from_cli(cli: Cli, data_dir: PathBuf) -> Result<Self, CliError> {
        match cli.command {
            CliCommand::Tables(a) => {
                let type_label = parse_label(&a.type_name, None)?;
                if type_label.family.is_classical() {
                    return Err(CliError::Usage(format!("tables are available for G2, F4, E6, E7, E8, not {type_label}")));
                }
                let check = a.check.map(|p| resolve_check(&p, &data_dir)).transpose()?;
                Ok(RunConfig {
                    command: CommandKind::Tables,
                    type_label,
                    class: a.class,
                    out: a.out,
                    check,
                    jobs: a.jobs,
                    format: Some(a.format),
                    data_dir,
                })
            }
            CliCommand::Verify(a) => Ok(RunConfig {
                command: CommandKind::Verify,
                type_label: classical_label(&a.type_name, a.rank)?,
                class: None,
                out: None,
                check: None,
                jobs: a.jobs,
                format: None,
                data_dir,
            }),
            CliCommand::Class(a) => {
                let type_label = match parse_label(&a.type_name, a.rank)? {
                    l if l.family.is_classical() => classical_label(&a.type_name, a.rank)?,
                    l => l,
                };
                Ok(RunConfig {
                    command: CommandKind::Class,
                    type_label,
                    class: Some(a.class),
                    out: None,
                    check: None,
                    jobs: 1,
                    format: a.format,
                    data_dir,
                })
            }
        }
    }
}

fn type_file(label: TypeLabel) -> String {
    label.to_string().to_lowercase()
}

pub fn load_carter(data_dir: &Path, label: TypeLabel) -> Result<Vec<CarterEntry>, CliError> {
    let path = data_dir.join("carter").join(format!("{}.txt", type_file(label)));
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    parse_carter_file(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Class name to `Ψ` class, read from the bundled golden table when present.
fn load_psi_names(data_dir: &Path, label: TypeLabel) -> Result<HashMap<String, String>, CliError> {
    let path = data_dir.join("golden").join(format!("{}.csv", type_file(label)));
    if !path.exists() {
        return Ok(HashMap::new());
    }
    let (_, rows) = read_csv(&path)?;
    Ok(rows
        .into_iter()
        .filter(|r| r.len() >= 2)
        .map(|r| (r[0].clone(), r[1].clone()))
        .collect())
}

fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let header = rdr.headers().map_err(data_err)?.iter().map(str::to_string).collect();
    let mut rows = vec![];
    for rec in rdr.records() {
        rows.push(rec.map_err(data_err)?.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

/// One row of an exceptional table, in the golden CSV column order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub class_name: String,
    pub psi_class: String,
    pub dim_h0: usize,
    pub n_fixed: usize,
    pub fixed_type: String,
    pub length: usize,
    pub dim_sigma: usize,
    pub d_lower: u64,
    pub d_upper: u64,
    pub q: Option<u64>,
}

pub const TABLE_HEADER: [&str; 10] = [
    "class_name",
    "psi_class",
    "dim_h0",
    "n_fixed",
    "fixed_type",
    "length",
    "dim_sigma",
    "d_lower",
    "d_upper",
    "q",
];

impl TableRow {
    pub fn from_report(r: &SliceReport, psi_class: String) -> Self {
        TableRow {
            class_name: r.class_name.clone(),
            psi_class,
            dim_h0: r.dim_h0,
            n_fixed: r.n_fixed_roots,
            fixed_type: r.fixed_type.clone(),
            length: r.length,
            dim_sigma: r.dim_sigma,
            d_lower: r.d_lower,
            d_upper: r.d_upper,
            q: r.q,
        }
    }

    pub fn cells(&self) -> Vec<String> {
        vec![
            self.class_name.clone(),
            self.psi_class.clone(),
            self.dim_h0.to_string(),
            self.n_fixed.to_string(),
            self.fixed_type.clone(),
            self.length.to_string(),
            self.dim_sigma.to_string(),
            self.d_lower.to_string(),
            self.d_upper.to_string(),
            self.q.map_or_else(String::new, |q| q.to_string()),
        ]
    }
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(data_err)?;
    Ok(pool.install(f))
}

/// Runs the pipeline on every Carter representative of an exceptional type.
pub fn compute_table(label: TypeLabel, data_dir: &Path, jobs: usize, filter: Option<&str>) -> Result<Vec<TableRow>, CliError> {
    let datum = RootDatum::new(label).map_err(data_err)?;
    let entries: Vec<CarterEntry> = load_carter(data_dir, label)?
        .into_iter()
        .filter(|e| filter.map_or(true, |f| e.name == f))
        .collect();
    if let Some(f) = filter {
        if entries.is_empty() {
            return Err(unknown_class(f, &load_carter(data_dir, label)?));
        }
    }
    let psi = load_psi_names(data_dir, label)?;
    let rows = with_pool(jobs, || {
        entries
            .par_iter()
            .map(|e| {
                let pair = CarterPair::from_indices(&datum, &e.s1, &e.s2).map_err(|err| class_err(&e.name, err))?;
                let r = report_for_pair(&datum, &e.name, &pair).map_err(|err| class_err(&e.name, err))?;
                Ok(TableRow::from_report(&r, psi.get(&e.name).cloned().unwrap_or_default()))
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    rows
}

fn class_err(name: &str, e: AtlasError) -> CliError {
    CliError::Data(format!("class {name}: {e}"))
}

fn unknown_class(name: &str, entries: &[CarterEntry]) -> CliError {
    let names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
    CliError::Usage(format!("unknown class `{name}`; available: {}", names.join(", ")))
}

pub fn render_table(rows: &[TableRow], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            w.write_record(TABLE_HEADER).map_err(data_err)?;
            for r in rows {
                w.write_record(r.cells()).map_err(data_err)?;
            }
            String::from_utf8(w.into_inner().map_err(data_err)?).map_err(data_err)
        }
        Format::Json => Ok(serde_json::to_string_pretty(rows).map_err(data_err)? + "\n"),
    }
}

/// First disagreement between computed rows and a golden CSV, if any.
pub fn diff_against_golden(rows: &[TableRow], header: &[String], golden: &[Vec<String>]) -> Option<String> {
    if header != TABLE_HEADER {
        return Some(format!("golden header {header:?} differs from {TABLE_HEADER:?}"));
    }
    for (i, (row, want)) in rows.iter().zip(golden).enumerate() {
        let got = row.cells();
        for (c, col) in TABLE_HEADER.iter().enumerate() {
            let w = want.get(c).map_or("", String::as_str);
            if got[c] != w {
                return Some(format!(
                    "row {} ({}), column {col}: computed `{}`, golden `{w}`",
                    i + 1,
                    row.class_name,
                    got[c]
                ));
            }
        }
    }
    if rows.len() != golden.len() {
        return Some(format!("row count: computed {}, golden {}", rows.len(), golden.len()));
    }
    None
}

fn cmd_tables(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let rows = compute_table(cfg.type_label, &cfg.data_dir, cfg.jobs, cfg.class.as_deref())?;
    let text = render_table(&rows, cfg.format.unwrap_or(Format::Csv))?;
    match &cfg.out {
        Some(p) => std::fs::write(p, &text).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?,
        None if cfg.check.is_none() => out.write_all(text.as_bytes()).map_err(data_err)?,
        None => {}
    }
    let Some(golden) = &cfg.check else {
        return Ok(Status::Success);
    };
    let (header, mut want) = read_csv(golden)?;
    if let Some(f) = &cfg.class {
        want.retain(|r| r.first() == Some(f));
    }
    match diff_against_golden(&rows, &header, &want) {
        None => {
            writeln!(out, "{}: {} rows match {}", cfg.type_label, rows.len(), golden.display()).map_err(data_err)?;
            Ok(Status::Success)
        }
        Some(msg) => {
            writeln!(out, "{}: mismatch against {}: {msg}", cfg.type_label, golden.display()).map_err(data_err)?;
            Ok(Status::Mismatch)
        }
    }
}

/// Pipeline values for one classical class next to their closed-form
/// counterparts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyLine {
    pub spec: String,
    pub length: usize,
    pub telescoped_length: usize,
    pub dim_sigma: usize,
    pub dim_centralizer: Option<usize>,
    pub d: (u64, u64),
    pub d_oracle: Option<(u64, u64)>,
}

impl VerifyLine {
    pub fn mismatches(&self) -> Vec<String> {
        let mut out = vec![];
        if self.length != self.telescoped_length {
            out.push(format!("length: pipeline {}, oracle {}", self.length, self.telescoped_length));
        }
        if let Some(z) = self.dim_centralizer {
            if z != self.dim_sigma {
                out.push(format!("dim_sigma: pipeline {}, centralizer {z}", self.dim_sigma));
            }
        }
        if let Some(o) = self.d_oracle {
            if o != self.d {
                out.push(format!("d: pipeline {:?}, oracle {o:?}", self.d));
            }
        }
        out
    }
}

/// Runs every class of a classical Weyl group through the pipeline.
pub fn verify_classical(label: TypeLabel, jobs: usize) -> Result<Vec<VerifyLine>, CliError> {
    let datum = RootDatum::new(label).map_err(data_err)?;
    let special = special_classes(label);
    let specs = weyl_classes(label);
    with_pool(jobs, || {
        specs
            .par_iter()
            .map(|spec| {
                let name = spec.to_string();
                let err = |e| class_err(&name, e);
                let pair = classical_representative(label, spec).map_err(err)?;
                let r = report_for_pair(&datum, &name, &pair).map_err(err)?;
                let dim_centralizer = special
                    .iter()
                    .find(|s| &s.spec == spec)
                    .map(|s| dim_centralizer(label.family, label.rank, &s.datum))
                    .transpose()
                    .map_err(err)?;
                Ok(VerifyLine {
                    spec: name.clone(),
                    length: r.length,
                    telescoped_length: telescoped_length(label, spec).map_err(err)?,
                    dim_sigma: r.dim_sigma,
                    dim_centralizer,
                    d: (r.d_lower, r.d_upper),
                    d_oracle: block_d_oracle(label, spec).map_err(err)?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?
}

fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let lines = verify_classical(cfg.type_label, cfg.jobs)?;
    let mut bad = 0;
    for l in &lines {
        let m = l.mismatches();
        let dimz = l.dim_centralizer.map_or_else(|| "-".to_string(), |z| z.to_string());
        let d_oracle = l.d_oracle.map_or_else(|| "-".to_string(), |(a, b)| format!("{a},{b}"));
        write!(
            out,
            "{} {}: length {}/{} dim_sigma {}/{} d {},{}/{}",
            if m.is_empty() { "ok  " } else { "FAIL" },
            l.spec,
            l.length,
            l.telescoped_length,
            l.dim_sigma,
            dimz,
            l.d.0,
            l.d.1,
            d_oracle
        )
        .map_err(data_err)?;
        if !m.is_empty() {
            bad += 1;
            write!(out, " [{}]", m.join("; ")).map_err(data_err)?;
        }
        writeln!(out).map_err(data_err)?;
    }
    writeln!(out, "{}: {} classes checked, {} mismatches", cfg.type_label, lines.len(), bad).map_err(data_err)?;
    Ok(if bad == 0 { Status::Success } else { Status::Mismatch })
}

/// Everything `atlas class` prints.
#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub type_label: String,
    #[serde(flatten)]
    pub report: SliceReport,
    /// Root counts per stratum in processing order, fixed stratum last.
    pub strata_sizes: Vec<usize>,
    pub gamma_indices_first: Vec<usize>,
    pub gamma_indices_second: Vec<usize>,
    /// Set for type D pairs whose fibre is a union of two classes.
    pub degenerate: Option<bool>,
}

pub fn class_report(label: TypeLabel, class: &str, data_dir: &Path) -> Result<ClassReport, CliError> {
    let datum = RootDatum::new(label).map_err(data_err)?;
    let (pair, degenerate) = if label.family.is_classical() {
        let spec = if label.family == Family::A && !class.contains('|') {
            let parts: Result<Vec<usize>, _> = class.split(',').map(|s| s.trim().parse()).collect();
            ClassSpec::Partition(parts.map_err(|_| CliError::Usage(format!("bad partition `{class}`")))?)
        } else {
            ClassSpec::parse(class).map_err(|e| CliError::Usage(e.to_string()))?
        };
        spec.validate(label).map_err(|e| CliError::Usage(e.to_string()))?;
        let pair = classical_representative(label, &spec).map_err(|e| class_err(class, e))?;
        let degenerate = (label.family == Family::D).then(|| spec.is_degenerate_d());
        (pair, degenerate)
    } else {
        let entries = load_carter(data_dir, label)?;
        let e = entries.iter().find(|e| e.name == class).ok_or_else(|| unknown_class(class, &entries))?;
        (CarterPair::from_indices(&datum, &e.s1, &e.s2).map_err(|err| class_err(class, err))?, None)
    };
    let (report, assoc) = report_for_pair_with(&datum, class, &pair, TieOrder::Lex).map_err(|e| class_err(class, e))?;
    let (first, second) = assoc.renumbered_gamma_indices(&datum);
    Ok(ClassReport {
        type_label: label.to_string(),
        report,
        strata_sizes: assoc.strata.iter().map(|s| s.roots.len()).collect(),
        gamma_indices_first: first,
        gamma_indices_second: second,
        degenerate,
    })
}

fn list(v: &[usize]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    s.join(",")
}

pub fn render_class_text(c: &ClassReport) -> String {
    let r = &c.report;
    let mut s = String::new();
    let mut line = |k: &str, v: String| s.push_str(&format!("{k:<22}{v}\n"));
    line("type", c.type_label.clone());
    line("class_name", r.class_name.clone());
    line("dim_h0", r.dim_h0.to_string());
    line("n_fixed_roots", r.n_fixed_roots.to_string());
    line("fixed_type", if r.fixed_type.is_empty() { "-".into() } else { r.fixed_type.clone() });
    line("fixed_simple_indices", list(&r.fixed_simple_indices));
    line("length", r.length.to_string());
    line("dim_sigma", r.dim_sigma.to_string());
    line("d_lower", r.d_lower.to_string());
    line("d_upper", r.d_upper.to_string());
    line("q", r.q.map_or_else(|| "-".into(), |q| q.to_string()));
    line("strata_sizes", list(&c.strata_sizes));
    line("gamma_indices_first", list(&c.gamma_indices_first));
    line("gamma_indices_second", list(&c.gamma_indices_second));
    if let Some(d) = c.degenerate {
        line("degenerate", d.to_string());
    }
    s
}

fn cmd_class(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let class = cfg.class.as_deref().ok_or_else(|| CliError::Usage("--class is required".into()))?;
    let c = class_report(cfg.type_label, class, &cfg.data_dir)?;
    let text = match cfg.format {
        Some(Format::Json) => serde_json::to_string_pretty(&c).map_err(data_err)? + "\n",
        _ => render_class_text(&c),
    };
    out.write_all(text.as_bytes()).map_err(data_err)?;
    Ok(Status::Success)
}

pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    match cfg.command {
        CommandKind::Tables => cmd_tables(cfg, out),
        CommandKind::Verify => cmd_verify(cfg, out),
        CommandKind::Class => cmd_class(cfg, out),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = RunConfig::from_cli(cli, default_data_dir()).and_then(|cfg| {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        run(&cfg, &mut lock)
    });
    match result {
        Ok(s) => s.exit_code(),
        Err(e) => {
            eprintln!("atlas: {e}");
            2
        }
    }
}
