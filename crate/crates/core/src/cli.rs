//! Command-line front end: single evaluations, parameter sweeps, figure
//! datasets, cross-check reports, Monte Carlo runs and distribution dumps.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 constraint violation,
//! 3 numerical failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::{self, d_closed, d_oracle};
use crate::criteria::{self, classify, default_zero_tol, Classification, CriterionResult};
use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::montecarlo::{self, McEstimate, DEFAULT_RESAMPLES};
use crate::states::{hs_min_size, StateSpec, DEFAULT_TAIL_TOL};

#[derive(Debug, Parser)]
#[command(
    name = "hoa",
    version,
    about = "Higher-order antibunching of intermediate quantum states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate d(l), A_l and optionally R(l, m) for one state.
    Eval(EvalArgs),
    /// Run a parameter sweep described by a JSON config file.
    Sweep(SweepArgs),
    /// Write the dataset behind one of the preset figures.
    Figure(FigureArgs),
    /// Compare closed-form d(l) with direct summation over default grids.
    Crosscheck(CrosscheckArgs),
    /// Monte Carlo photon-counting estimate of d(l).
    Mc(McArgs),
    /// Dump a photon-number distribution.
    Pnd(PndArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Binomial,
    Gbs,
    Rbs,
    Nbs,
    Geometric,
    Pacs,
    Hs,
}

/// State selection flags. Parameter flags use the conventional symbols.
#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub state: Family,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long = "M")]
    pub big_m: Option<u32>,
    #[arg(long = "N")]
    pub big_n: Option<u32>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long = "m")]
    pub small_m: Option<u32>,
    /// Hypergeometric size parameter; defaults to its smallest allowed value.
    #[arg(long = "L")]
    pub big_l: Option<f64>,
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("--{flag} is required for --state {family}")))
}

impl StateArgs {
    pub fn to_spec(&self) -> Result<StateSpec> {
        let spec = match self.state {
            Family::Binomial => StateSpec::Binomial {
                p: need(self.p, "p", "binomial")?,
                max_photons: need(self.big_m, "M", "binomial")?,
            },
            Family::Gbs => StateSpec::GeneralizedBinomial {
                max_photons: need(self.big_n, "N", "gbs")?,
                alpha: need(self.alpha, "alpha", "gbs")?,
                beta: need(self.beta, "beta", "gbs")?,
            },
            Family::Rbs => StateSpec::ReciprocalBinomial {
                max_photons: need(self.big_n, "N", "rbs")?,
                theta: self.theta.unwrap_or(0.0),
            },
            Family::Nbs => StateSpec::NegativeBinomial {
                eta: need(self.eta, "eta", "nbs")?,
                min_photons: need(self.big_m, "M", "nbs")?,
            },
            Family::Geometric => StateSpec::Geometric {
                eta: need(self.eta, "eta", "geometric")?,
            },
            Family::Pacs => StateSpec::PhotonAddedCoherent {
                alpha: need(self.alpha, "alpha", "pacs")?,
                added_photons: need(self.small_m, "m", "pacs")?,
            },
            Family::Hs => {
                let max_photons = need(self.big_m, "M", "hs")?;
                let eta = need(self.eta, "eta", "hs")?;
                StateSpec::Hypergeometric {
                    size: self.big_l.unwrap_or_else(|| hs_min_size(max_photons, eta)),
                    max_photons,
                    eta,
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    pub l: u32,
    /// Also evaluate R(l, m) at this m.
    #[arg(long = "r-m")]
    pub r_m: Option<u32>,
    /// Absolute coherence band; defaults to 1e-10 · max(1, ⟨N⟩^(l+1)).
    #[arg(long = "zero-tol")]
    pub zero_tol: Option<f64>,
    #[arg(long = "tail-tol", default_value_t = DEFAULT_TAIL_TOL)]
    pub tail_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// JSON file holding a sweep configuration.
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

impl FigureId {
    pub const ALL: [FigureId; 10] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
        FigureId::Fig10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
            FigureId::Fig10 => "fig10",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub figure: FigureId,
    /// Sum over the distribution instead of using the closed form.
    #[arg(long)]
    pub oracle: bool,
    /// Override an axis: `name=start:stop:count[:log]`. Repeatable.
    #[arg(long = "range")]
    pub ranges: Vec<String>,
    #[arg(long = "tail-tol", default_value_t = DEFAULT_TAIL_TOL)]
    pub tail_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CrosscheckArgs {
    #[arg(
        long,
        value_enum,
        conflicts_with = "all",
        required_unless_present = "all"
    )]
    pub state: Option<Family>,
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = 5)]
    pub lmax: u32,
    /// Relative tolerance for agreement.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    pub l: u32,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
    pub resamples: u32,
    #[arg(long = "tail-tol", default_value_t = DEFAULT_TAIL_TOL)]
    pub tail_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PndArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long = "tail-tol", default_value_t = DEFAULT_TAIL_TOL)]
    pub tail_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Binomial => "binomial",
        Family::Gbs => "gbs",
        Family::Rbs => "rbs",
        Family::Nbs => "nbs",
        Family::Geometric => "geometric",
        Family::Pacs => "pacs",
        Family::Hs => "hs",
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Runs one parsed command.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval(a) => cmd_eval(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Figure(a) => cmd_figure(&a),
        Command::Crosscheck(a) => cmd_crosscheck(&a),
        Command::Mc(a) => cmd_mc(&a),
        Command::Pnd(a) => cmd_pnd(&a),
    }
}

/// Parses `args`, runs the command, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

// ---------------------------------------------------------------- eval

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalOutput {
    #[serde(flatten)]
    pub state: StateSpec,
    #[serde(flatten)]
    pub result: CriterionResult,
    /// Closed-form d(l) for the same state and order.
    pub d_closed: f64,
}

/// Evaluates the criteria for one state. Fails with a constraint error when
/// the state's closed form is undefined at this order.
pub fn eval(
    spec: &StateSpec,
    l: u32,
    r_m: Option<u32>,
    zero_tol: Option<f64>,
    tail_tol: f64,
) -> Result<EvalOutput> {
    spec.validate()?;
    let d_closed = d_closed(spec, l)?;
    let pnd = spec.build_for_moments(tail_tol, l + 1)?;
    let result = criteria::evaluate(&pnd, l, r_m, zero_tol)?;
    Ok(EvalOutput {
        state: *spec,
        result,
        d_closed,
    })
}

fn cmd_eval(a: &EvalArgs) -> Result<()> {
    let spec = a.state.to_spec()?;
    let out = eval(&spec, a.l, a.r_m, a.zero_tol, a.tail_tol)?;
    let mut w = open_out(a.out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &out)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------- tables

/// One table cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => fmt_f64(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }
}

/// Column-labelled table, written as CSV or as JSON `{columns, rows}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column; non-numeric cells become `None`.
    pub fn values(&self, name: &str) -> Vec<Option<f64>> {
        match self.column(name) {
            Some(i) => self.rows.iter().map(|r| r[i].as_f64()).collect(),
            None => Vec::new(),
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::csv))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer(&mut w, self)?;
        writeln!(w)?;
        Ok(())
    }

    pub fn write<W: Write>(&self, w: W, format: Format) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }
}

// ---------------------------------------------------------------- sweeps

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    pub fn linear(name: &str, start: f64, stop: f64, count: usize) -> Axis {
        Axis {
            name: name.to_string(),
            start,
            stop,
            count,
            scale: Scale::Linear,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.stop;
                }
                let steps = (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.start + i as f64 * ((self.stop - self.start) / steps),
                    Scale::Log => (self.start.ln()
                        + i as f64 * ((self.stop.ln() - self.start.ln()) / steps))
                        .exp(),
                }
            })
            .collect()
    }

    /// Parses `name=start:stop:count[:log]`.
    pub fn parse(s: &str) -> Result<Axis> {
        let bad = || {
            Error::Config(format!(
                "bad range {s:?}, expected name=start:stop:count[:log]"
            ))
        };
        let (name, rest) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = rest.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let start: f64 = parts[0].parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].parse().map_err(|_| bad())?;
        let count: usize = parts[2].parse().map_err(|_| bad())?;
        let scale = match parts.get(3) {
            None | Some(&"linear") => Scale::Linear,
            Some(&"log") => Scale::Log,
            Some(_) => return Err(bad()),
        };
        Ok(Axis {
            name: name.to_string(),
            start,
            stop,
            count,
            scale,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    #[default]
    Closed,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutputs {
    /// Include A_l (computed from the distribution).
    #[serde(default, rename = "A")]
    pub a: bool,
    /// R(l, m) columns, one per listed m (pairs with m > l are left empty).
    #[serde(default, rename = "R")]
    pub r_m: Vec<u32>,
    #[serde(default = "yes")]
    pub classification: bool,
}

fn yes() -> bool {
    true
}

impl Default for SweepOutputs {
    fn default() -> Self {
        SweepOutputs {
            a: false,
            r_m: Vec::new(),
            classification: true,
        }
    }
}

/// A parameter sweep over up to two axes of a state template.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub state: StateSpec,
    pub axes: Vec<Axis>,
    pub l_values: Vec<u32>,
    #[serde(default)]
    pub outputs: SweepOutputs,
    #[serde(default)]
    pub method: Method,
    #[serde(default = "default_format")]
    pub output_format: Format,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    /// Fixed coherence band; the relative default is used when absent.
    #[serde(default)]
    pub zero_tol: Option<f64>,
    /// For hypergeometric states, set `L` to its smallest allowed value at
    /// every grid point.
    #[serde(default)]
    pub minimal_l: bool,
    /// Relative tolerance for the agreement column when `method = both`.
    #[serde(default = "default_agree_tol")]
    pub tol: f64,
}

fn default_format() -> Format {
    Format::Csv
}
fn default_tail_tol() -> f64 {
    DEFAULT_TAIL_TOL
}
fn default_agree_tol() -> f64 {
    1e-9
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Config(format!(
                "a sweep needs 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        for ax in &self.axes {
            if ax.count < 2 {
                return Err(Error::Config(format!("axis {} needs count >= 2", ax.name)));
            }
            if self.state.param(&ax.name).is_none() {
                return Err(Error::Config(format!(
                    "state {} has no parameter {:?}",
                    self.state.family(),
                    ax.name
                )));
            }
            if ax.scale == Scale::Log && !(ax.start > 0.0 && ax.stop > 0.0) {
                return Err(Error::Config(format!(
                    "log axis {} needs positive bounds",
                    ax.name
                )));
            }
        }
        if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
            return Err(Error::Config(
                "the two axes must sweep different parameters".into(),
            ));
        }
        if self.l_values.is_empty() || self.l_values.contains(&0) {
            return Err(Error::Config(
                "l_values must be non-empty positive integers".into(),
            ));
        }
        Ok(())
    }

    /// Grid points in outer-axis-major order.
    pub fn grid(&self) -> Vec<Vec<f64>> {
        let mut points: Vec<Vec<f64>> = vec![Vec::new()];
        for ax in &self.axes {
            let vals = ax.values();
            points = points
                .into_iter()
                .flat_map(|p| {
                    vals.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        points
    }

    fn spec_at(&self, point: &[f64]) -> Result<StateSpec> {
        let mut spec = self.state;
        for (ax, &v) in self.axes.iter().zip(point) {
            spec = spec.with_param(&ax.name, v)?;
        }
        if self.minimal_l {
            if let StateSpec::Hypergeometric {
                max_photons, eta, ..
            } = spec
            {
                spec = StateSpec::Hypergeometric {
                    size: hs_min_size(max_photons, eta),
                    max_photons,
                    eta,
                };
            }
        }
        Ok(spec)
    }
}

fn status_of(e: &Error) -> String {
    let text = match e {
        Error::Constraint(m) | Error::Domain(m) | Error::UndefinedCriterion(m) => {
            format!("constraint: {m}")
        }
        Error::Numerical(m) | Error::DegenerateSeries(m) => format!("numerical: {m}"),
        other => format!("error: {other}"),
    };
    text.replace(',', ";")
}

fn num_or_empty(x: Option<f64>) -> Cell {
    x.map(Cell::Num).unwrap_or(Cell::Empty)
}

/// One row per grid point per `l`, in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Table> {
    cfg.validate()?;
    let oracle = matches!(cfg.method, Method::Oracle | Method::Both);
    let closed = matches!(cfg.method, Method::Closed | Method::Both);
    let both = cfg.method == Method::Both;

    let mut columns: Vec<String> = cfg.axes.iter().map(|a| a.name.clone()).collect();
    if cfg.minimal_l {
        columns.push("L".into());
    }
    columns.extend(["l".into(), "status".into()]);
    if oracle {
        columns.push("d_oracle".into());
    }
    if closed {
        columns.push("d_closed".into());
    }
    if both {
        columns.extend(["abs_dev".into(), "rel_dev".into(), "agree".into()]);
    }
    if cfg.outputs.a {
        columns.push("A".into());
    }
    for m in &cfg.outputs.r_m {
        columns.push(format!("R_m{m}"));
    }
    if cfg.outputs.classification {
        columns.push("classification".into());
    }

    let points = cfg.grid();
    let max_l = *cfg.l_values.iter().max().unwrap();
    let blocks: Vec<Vec<Vec<Cell>>> = points
        .par_iter()
        .map(|point| {
            let mut rows = Vec::with_capacity(cfg.l_values.len());
            let spec = cfg.spec_at(point);
            let pnd = spec
                .as_ref()
                .ok()
                .map(|s| s.build_for_moments(cfg.tail_tol, max_l + 1));
            for &l in &cfg.l_values {
                let mut row: Vec<Cell> = point.iter().map(|&v| Cell::Num(v)).collect();
                if cfg.minimal_l {
                    row.push(num_or_empty(spec.as_ref().ok().and_then(|s| s.param("L"))));
                }
                row.push(Cell::Int(i64::from(l)));
                let eval = || -> Result<Vec<Cell>> {
                    let spec = spec.as_ref().map_err(clone_err)?;
                    let pnd = pnd
                        .as_ref()
                        .expect("built with spec")
                        .as_ref()
                        .map_err(clone_err)?;
                    let mut cells = vec![Cell::Text("ok".into())];
                    let d_o = criteria::d_criterion(pnd, l);
                    let d_c = if closed {
                        Some(d_closed(spec, l)?)
                    } else {
                        None
                    };
                    if oracle {
                        cells.push(Cell::Num(d_o));
                    }
                    if let Some(c) = d_c {
                        cells.push(Cell::Num(c));
                    }
                    let mean = pnd.mean();
                    let zero_tol = cfg.zero_tol.unwrap_or_else(|| default_zero_tol(mean, l));
                    if both {
                        let c = d_c.unwrap();
                        let abs_dev = (d_o - c).abs();
                        let scale = d_o.abs().max(c.abs());
                        let rel = if scale == 0.0 { 0.0 } else { abs_dev / scale };
                        cells.push(Cell::Num(abs_dev));
                        cells.push(Cell::Num(rel));
                        cells.push(Cell::Bool(
                            rel <= cfg.tol || abs_dev <= default_zero_tol(mean, l),
                        ));
                    }
                    if cfg.outputs.a {
                        cells.push(num_or_empty(criteria::ba_an_a(pnd, l).ok()));
                    }
                    for &m in &cfg.outputs.r_m {
                        cells.push(num_or_empty(criteria::lee_r(pnd, l, m).ok()));
                    }
                    if cfg.outputs.classification {
                        let d = if oracle { d_o } else { d_c.unwrap() };
                        cells.push(Cell::Text(classify(d, zero_tol).to_string()));
                    }
                    Ok(cells)
                };
                match eval() {
                    Ok(cells) => row.extend(cells),
                    Err(e) => {
                        row.push(Cell::Text(status_of(&e)));
                        while row.len() < columns.len() {
                            row.push(Cell::Empty);
                        }
                    }
                }
                rows.push(row);
            }
            rows
        })
        .collect();
    Ok(Table {
        columns,
        rows: blocks.into_iter().flatten().collect(),
    })
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::Domain(m) => Error::Domain(m.clone()),
        Error::Constraint(m) => Error::Constraint(m.clone()),
        Error::UndefinedCriterion(m) => Error::UndefinedCriterion(m.clone()),
        Error::DegenerateSeries(m) => Error::DegenerateSeries(m.clone()),
        Error::Numerical(m) => Error::Numerical(m.clone()),
        other => Error::Config(other.to_string()),
    }
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.config)?;
    let cfg: SweepConfig = serde_json::from_str(&text)?;
    let table = run_sweep(&cfg)?;
    let format = a.output.format.unwrap_or(cfg.output_format);
    let mut w = open_out(a.output.out.as_deref())?;
    table.write(&mut w, format)?;
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------- figures

/// One plotted curve: `scale · d(l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub column: String,
    pub l: u32,
    pub scale: f64,
}

/// Preset dataset for one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: FigureId,
    pub title: &'static str,
    pub state: StateSpec,
    pub axes: Vec<Axis>,
    pub curves: Vec<Curve>,
    pub minimal_l: bool,
}

fn curve(column: &str, l: u32) -> Curve {
    Curve {
        column: column.into(),
        l,
        scale: 1.0,
    }
}

/// Default grid and curves for each figure. Axis ranges are reconstructions
/// chosen to show each figure's qualitative features.
pub fn figure_preset(id: FigureId) -> FigurePreset {
    let gbs = |alpha, beta| StateSpec::GeneralizedBinomial {
        max_photons: 10,
        alpha,
        beta,
    };
    let (title, state, axes, curves, minimal_l) = match id {
        FigureId::Fig1 => (
            "d_GBS(8) and d_GBS(9) vs N at alpha = 2, beta = 1",
            gbs(2.0, 1.0),
            vec![Axis::linear("N", 11.0, 100.0, 90)],
            vec![curve("d8", 8), curve("d9", 9)],
            false,
        ),
        FigureId::Fig2 => (
            "d_GBS(2) vs alpha and N at beta = 1",
            gbs(0.0, 1.0),
            vec![
                Axis::linear("alpha", 0.0, 20.0, 41),
                Axis::linear("N", 3.0, 60.0, 58),
            ],
            vec![curve("d2", 2)],
            false,
        ),
        FigureId::Fig3 => (
            "d_GBS(2) vs beta and N at alpha = 10",
            gbs(10.0, 0.0),
            vec![
                Axis::linear("beta", 0.0, 20.0, 41),
                Axis::linear("N", 3.0, 60.0, 58),
            ],
            vec![curve("d2", 2)],
            false,
        ),
        FigureId::Fig4 => (
            "d_RBS(8) and d_RBS(9) vs N",
            StateSpec::ReciprocalBinomial {
                max_photons: 10,
                theta: 0.0,
            },
            vec![Axis::linear("N", 11.0, 100.0, 90)],
            vec![curve("d8", 8), curve("d9", 9)],
            false,
        ),
        FigureId::Fig5 => (
            "d_NBS(8) vs eta and M",
            StateSpec::NegativeBinomial {
                eta: 0.5,
                min_photons: 10,
            },
            vec![
                Axis::linear("eta", 0.05, 1.0, 96),
                Axis::linear("M", 9.0, 30.0, 22),
            ],
            vec![curve("d8", 8)],
            false,
        ),
        FigureId::Fig6 => (
            "d_NBS(8) vs eta at M = 10",
            StateSpec::NegativeBinomial {
                eta: 0.5,
                min_photons: 10,
            },
            vec![Axis::linear("eta", 0.05, 1.0, 96)],
            vec![curve("d8", 8)],
            false,
        ),
        FigureId::Fig7 => (
            "d_GS(8), d_GS(9) and d_GS(10) vs eta",
            StateSpec::Geometric { eta: 0.5 },
            vec![Axis::linear("eta", 0.05, 0.999, 950)],
            vec![curve("d8", 8), curve("d9", 9), curve("d10", 10)],
            false,
        ),
        FigureId::Fig8 => (
            "d_PACS(4) vs alpha and m",
            StateSpec::PhotonAddedCoherent {
                alpha: 1.0,
                added_photons: 1,
            },
            vec![
                Axis::linear("alpha", 0.1, 3.0, 30),
                Axis::linear("m", 1.0, 20.0, 20),
            ],
            vec![curve("d4", 4)],
            false,
        ),
        FigureId::Fig9 => (
            "10 d_PACS(3) and d_PACS(4) vs alpha at m = 15",
            StateSpec::PhotonAddedCoherent {
                alpha: 1.0,
                added_photons: 15,
            },
            vec![Axis::linear("alpha", 0.1, 3.0, 30)],
            vec![
                Curve {
                    column: "d3_x10".into(),
                    l: 3,
                    scale: 10.0,
                },
                curve("d4", 4),
            ],
            false,
        ),
        FigureId::Fig10 => (
            "d_HS(8) vs eta and M at the smallest allowed L",
            StateSpec::Hypergeometric {
                size: 100.0,
                max_photons: 10,
                eta: 0.5,
            },
            vec![
                Axis::linear("eta", 0.1, 0.9, 81),
                Axis::linear("M", 9.0, 20.0, 12),
            ],
            vec![curve("d8", 8)],
            true,
        ),
    };
    FigurePreset {
        id,
        title,
        state,
        axes,
        curves,
        minimal_l,
    }
}

impl FigurePreset {
    /// Replaces the axis with the same name as `axis`.
    pub fn override_axis(&mut self, axis: Axis) -> Result<()> {
        match self.axes.iter_mut().find(|a| a.name == axis.name) {
            Some(slot) => {
                *slot = axis;
                Ok(())
            }
            None => Err(Error::Config(format!(
                "{} has no axis named {:?}",
                self.id.name(),
                axis.name
            ))),
        }
    }

    fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            state: self.state,
            axes: self.axes.clone(),
            l_values: self.curves.iter().map(|c| c.l).collect(),
            outputs: SweepOutputs::default(),
            method: Method::Closed,
            output_format: Format::Csv,
            tail_tol: DEFAULT_TAIL_TOL,
            zero_tol: None,
            minimal_l: self.minimal_l,
            tol: default_agree_tol(),
        }
    }

    /// Wide table: axis columns, `L` for minimal-L figures, one column per
    /// curve, and a status column.
    pub fn dataset(&self, use_oracle: bool, tail_tol: f64) -> Result<Table> {
        let cfg = self.sweep_config();
        cfg.validate()?;
        let mut columns: Vec<String> = self.axes.iter().map(|a| a.name.clone()).collect();
        if self.minimal_l {
            columns.push("L".into());
        }
        columns.extend(self.curves.iter().map(|c| c.column.clone()));
        columns.push("status".into());

        let rows: Vec<Vec<Cell>> = cfg
            .grid()
            .par_iter()
            .map(|point| {
                let mut row: Vec<Cell> = point.iter().map(|&v| Cell::Num(v)).collect();
                let spec = cfg.spec_at(point).and_then(|s| s.validate().map(|_| s));
                if self.minimal_l {
                    row.push(num_or_empty(spec.as_ref().ok().and_then(|s| s.param("L"))));
                }
                let mut status = String::from("ok");
                match &spec {
                    Ok(spec) => {
                        for c in &self.curves {
                            let d = if use_oracle {
                                d_oracle(spec, c.l, tail_tol)
                            } else {
                                d_closed(spec, c.l)
                            };
                            match d {
                                Ok(v) => row.push(Cell::Num(c.scale * v)),
                                Err(e) => {
                                    row.push(Cell::Empty);
                                    status = status_of(&e);
                                }
                            }
                        }
                    }
                    Err(e) => {
                        row.extend(self.curves.iter().map(|_| Cell::Empty));
                        status = status_of(e);
                    }
                }
                row.push(Cell::Text(status));
                row
            })
            .collect();
        Ok(Table { columns, rows })
    }
}

/// Default dataset for a figure.
pub fn figure_dataset(id: FigureId, use_oracle: bool) -> Result<Table> {
    figure_preset(id).dataset(use_oracle, DEFAULT_TAIL_TOL)
}

fn cmd_figure(a: &FigureArgs) -> Result<()> {
    let mut preset = figure_preset(a.figure);
    for r in &a.ranges {
        preset.override_axis(Axis::parse(r)?)?;
    }
    let table = preset.dataset(a.oracle, a.tail_tol)?;
    let mut w = open_out(a.output.out.as_deref())?;
    table.write(&mut w, a.output.format.unwrap_or(Format::Csv))?;
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------- crosscheck

fn cmd_crosscheck(a: &CrosscheckArgs) -> Result<()> {
    let report = match a.state {
        Some(f) if !a.all => closedform::crosscheck_family(family_name(f), a.lmax, a.tol)?,
        _ => closedform::crosscheck_all(a.lmax, a.tol)?,
    };
    let mut w = open_out(a.output.out.as_deref())?;
    match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => report.write_csv(&mut w)?,
        Format::Json => {
            w.write_all(report.to_json()?.as_bytes())?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    eprintln!("{}", report.summary());
    Ok(())
}

// ---------------------------------------------------------------- mc

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McOutput {
    #[serde(flatten)]
    pub state: StateSpec,
    pub estimate: McEstimate,
    /// d(l) summed over the exact distribution.
    pub exact_d: f64,
    pub histogram: montecarlo::Histogram,
}

pub fn mc(
    spec: &StateSpec,
    l: u32,
    n_samples: u64,
    seed: u64,
    resamples: u32,
    tail_tol: f64,
) -> Result<McOutput> {
    if n_samples == 0 {
        return Err(Error::Config("--samples must be >= 1".into()));
    }
    let pnd = spec.build_for_moments(tail_tol, l + 1)?;
    let histogram = montecarlo::sample_pnd(&pnd, n_samples, seed);
    let estimate = montecarlo::estimate_d(&histogram, l, resamples, seed)?;
    Ok(McOutput {
        state: *spec,
        estimate,
        exact_d: criteria::d_criterion(&pnd, l),
        histogram,
    })
}

fn cmd_mc(a: &McArgs) -> Result<()> {
    let spec = a.state.to_spec()?;
    let out = mc(&spec, a.l, a.samples, a.seed, a.resamples, a.tail_tol)?;
    let mut w = open_out(a.out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &out)?;
    writeln!(w)?;
    w.flush()?;
    let e = &out.estimate;
    eprintln!(
        "d({}) estimate {} +/- {} (exact {}){}",
        e.l,
        e.d_hat,
        e.stderr,
        out.exact_d,
        if e.degenerate {
            " [degenerate: all samples equal]"
        } else {
            ""
        }
    );
    Ok(())
}

// ---------------------------------------------------------------- pnd

fn cmd_pnd(a: &PndArgs) -> Result<()> {
    let spec = a.state.to_spec()?;
    let pnd = spec.build(a.tail_tol)?;
    let mut w = open_out(a.output.out.as_deref())?;
    match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => pnd.write_csv(&mut w)?,
        Format::Json => {
            w.write_all(pnd.to_json()?.as_bytes())?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Classification of the closed-form value at a figure point, using the
/// default relative coherence band.
pub fn classify_closed(spec: &StateSpec, l: u32) -> Result<Classification> {
    let d = d_closed(spec, l)?;
    let mean = spec.build(DEFAULT_TAIL_TOL)?.mean();
    Ok(classify(d, default_zero_tol(mean, l)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("hoa").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn state_flags_map_to_spec() {
        let cli = parse(&[
            "eval", "--state", "binomial", "--p", "0.5", "--M", "10", "--l", "1",
        ]);
        let Command::Eval(a) = cli.command else {
            panic!()
        };
        assert_eq!(
            a.state.to_spec().unwrap(),
            StateSpec::Binomial {
                p: 0.5,
                max_photons: 10
            }
        );

        let cli = parse(&["pnd", "--state", "hs", "--M", "4", "--eta", "0.25"]);
        let Command::Pnd(a) = cli.command else {
            panic!()
        };
        assert_eq!(
            a.state.to_spec().unwrap(),
            StateSpec::Hypergeometric {
                size: 16.0,
                max_photons: 4,
                eta: 0.25
            }
        );
    }

    #[test]
    fn missing_parameter_is_a_usage_error() {
        let cli = parse(&["eval", "--state", "pacs", "--alpha", "1", "--l", "1"]);
        let Command::Eval(a) = cli.command else {
            panic!()
        };
        let err = a.state.to_spec().unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn eval_examples() {
        let out = eval(
            &StateSpec::Binomial {
                p: 0.5,
                max_photons: 10,
            },
            1,
            None,
            None,
            DEFAULT_TAIL_TOL,
        )
        .unwrap();
        assert!((out.result.d + 2.5).abs() < 1e-12);
        assert_eq!(out.result.classification, Classification::Antibunched);

        let out = eval(
            &StateSpec::PhotonAddedCoherent {
                alpha: 1.0,
                added_photons: 0,
            },
            3,
            None,
            None,
            DEFAULT_TAIL_TOL,
        )
        .unwrap();
        assert_eq!(out.result.classification, Classification::Coherent);

        let err = eval(
            &StateSpec::Binomial {
                p: 0.5,
                max_photons: 2,
            },
            5,
            None,
            None,
            DEFAULT_TAIL_TOL,
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn axis_values_and_parse() {
        let a = Axis::linear("N", 11.0, 100.0, 90);
        let v = a.values();
        assert_eq!(v.len(), 90);
        assert_eq!(v[0], 11.0);
        assert_eq!(v[89], 100.0);
        assert!(v.iter().all(|x| x.fract() == 0.0));
        let a = Axis::parse("alpha=0.5:2:4:log").unwrap();
        assert_eq!(a.scale, Scale::Log);
        assert!((a.values()[1] - 0.5 * 4f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!(Axis::parse("alpha=1:2").is_err());
    }

    #[test]
    fn sweep_config_validation() {
        let mut cfg = SweepConfig {
            state: StateSpec::Binomial {
                p: 0.5,
                max_photons: 10,
            },
            axes: vec![Axis::linear("p", 0.25, 0.5, 2)],
            l_values: vec![1],
            outputs: SweepOutputs::default(),
            method: Method::Both,
            output_format: Format::Csv,
            tail_tol: DEFAULT_TAIL_TOL,
            zero_tol: None,
            minimal_l: false,
            tol: 1e-9,
        };
        assert!(cfg.validate().is_ok());
        cfg.axes[0].name = "eta".into();
        assert!(cfg.validate().is_err());
        cfg.axes[0] = Axis::linear("p", 0.25, 0.5, 1);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn sweep_config_json_defaults() {
        let cfg: SweepConfig = serde_json::from_str(
            r#"{"state": {"state": "geometric", "params": {"eta": 0.5}},
                "axes": [{"name": "eta", "start": 0.1, "stop": 0.9, "count": 5}],
                "l_values": [2]}"#,
        )
        .unwrap();
        assert_eq!(cfg.method, Method::Closed);
        assert_eq!(cfg.output_format, Format::Csv);
        assert_eq!(cfg.tail_tol, DEFAULT_TAIL_TOL);
        assert!(cfg.outputs.classification);
    }

    #[test]
    fn sweep_rows_are_grid_ordered_with_statuses() {
        let cfg = SweepConfig {
            state: StateSpec::Binomial {
                p: 0.5,
                max_photons: 10,
            },
            axes: vec![
                Axis::linear("p", 0.25, 0.5, 2),
                Axis::linear("M", 2.0, 10.0, 2),
            ],
            l_values: vec![1, 3],
            outputs: SweepOutputs {
                a: true,
                r_m: vec![1, 2],
                classification: true,
            },
            method: Method::Both,
            output_format: Format::Csv,
            tail_tol: DEFAULT_TAIL_TOL,
            zero_tol: None,
            minimal_l: false,
            tol: 1e-9,
        };
        let t = run_sweep(&cfg).unwrap();
        assert_eq!(t.rows.len(), 8);
        let p = t.values("p");
        let m = t.values("M");
        assert_eq!(
            p,
            vec![Some(0.25); 4]
                .into_iter()
                .chain(vec![Some(0.5); 4])
                .collect::<Vec<_>>()
        );
        assert_eq!(m[0], Some(2.0));
        assert_eq!(m[2], Some(10.0));
        let status = t.column("status").unwrap();
        // M = 2 with l = 3 violates M > l.
        assert!(matches!(&t.rows[1][status], Cell::Text(s) if s.starts_with("constraint")));
        let agree = t.column("agree").unwrap();
        for row in &t.rows {
            if matches!(&row[status], Cell::Text(s) if s == "ok") {
                assert_eq!(row[agree], Cell::Bool(true));
            }
        }
    }

    #[test]
    fn figure_presets_cover_all_ids() {
        for id in FigureId::ALL {
            let p = figure_preset(id);
            assert!(!p.axes.is_empty() && !p.curves.is_empty(), "{}", id.name());
            assert!(p.sweep_config().validate().is_ok(), "{}", id.name());
        }
    }

    #[test]
    fn figure_override_axis() {
        let mut p = figure_preset(FigureId::Fig6);
        p.override_axis(Axis::parse("eta=0.2:0.4:3").unwrap())
            .unwrap();
        let t = p.dataset(false, DEFAULT_TAIL_TOL).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert!(p
            .override_axis(Axis::parse("alpha=0:1:2").unwrap())
            .is_err());
    }

    #[test]
    fn table_csv_layout() {
        let t = Table {
            columns: vec!["x".into(), "y".into(), "status".into()],
            rows: vec![vec![Cell::Num(0.5), Cell::Empty, Cell::Text("ok".into())]],
        };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "x,y,status\n5.0000000000000000e-1,,ok\n"
        );
    }
}
