//! Command-line front end.
//!
//! Times are in units of 1/ω_c. Exit codes: 0 success, 2 argument, domain
//! or I/O error, 3 numerical failure (non-convergence, zero denominator,
//! unphysical factor).

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::coherence::{stationary_coherence, CoherenceValue};
use crate::dephasing::{DephasingModel, ModelParams, QubitSpec};
use crate::error::Error;
use crate::experiments::{
    figure_dataset, optimize_qsl, optimize_stationary_mu, sweep, AxisSpec, FigureId,
    FigureResolution, QslSearch, SweepOutput, SweepResult, SweepSettings,
};
use crate::mathcore::Bracket;
use crate::output::{format_g9, write_csv, write_json, write_manifest};
use crate::qsl::{qsl_ratio, trapping_time, QslMode, TrappingSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cohtrap",
    version,
    about = "Coherence trapping and QSL times for a qubit with an initially correlated bath (times in units of 1/wc)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dephasing factor and coherence at one time.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Coherence of the stationary state.
    Stationary {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Coherence-trapping time.
    Tc {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Quantum-speed-limit ratio tau_QSL / t_c.
    Qsl {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Grid evaluation over one or two parameters, written as CSV or JSON.
    Sweep {
        /// name=lo:hi:n with name in alpha, mu, lambda, upsilon, omega0.
        #[arg(long = "axis")]
        axes: Vec<AxisSpec>,
        #[arg(long)]
        out: PathBuf,
        /// Also compute t_c and the QSL ratio.
        #[arg(long)]
        qsl: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Maximize stationary coherence or minimize the QSL ratio.
    Optimize {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long, value_enum, default_value = "mu")]
        vars: Vars,
        #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
        mu_lo: f64,
        #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
        mu_hi: f64,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        upsilon_lo: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        upsilon_hi: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Dataset behind one figure panel (fig1a..fig3c) plus its manifest.
    Figure {
        id: String,
        #[arg(long)]
        out: PathBuf,
        /// Points per heatmap axis / per line (defaults 200 / 200, QSL lines 100).
        #[arg(long)]
        resolution: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Stationary,
    Qsl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Vars {
    Mu,
    Upsilon,
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
struct CommonArgs {
    /// JSON run configuration or a manifest written by an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    wc: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    upsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    w0: Option<f64>,
    /// Real amplitudes c_e,c_g (normalized to unit norm within 1e-12).
    #[arg(long = "ce-cg", value_parser = parse_pair, allow_hyphen_values = true)]
    ce_cg: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_mode)]
    mode: Option<QslMode>,
    #[arg(long, allow_negative_numbers = true)]
    rel_tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    abs_tol: Option<f64>,
    /// Trapping search horizon in units of 1/wc.
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    grid_n: Option<usize>,
    /// Worker threads for sweeps and scans; 0 picks the core count.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or("expected two comma-separated numbers")?;
    let a = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((a, b))
}

fn parse_mode(s: &str) -> Result<QslMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Everything a run depends on. Mirrors the command-line flags; flags win
/// over values loaded with `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub params: ModelParams,
    pub trapping: TrappingSpec,
    pub qsl_mode: QslMode,
    pub threads: usize,
    pub format: Format,
    pub axes: Vec<AxisSpec>,
    pub outputs: Vec<SweepOutput>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            trapping: TrappingSpec::default(),
            qsl_mode: QslMode::default(),
            threads: 0,
            format: Format::Csv,
            axes: Vec::new(),
            outputs: vec![SweepOutput::Stationary],
        }
    }
}

impl RunConfig {
    /// Reads a bare config object or the `config` member of a manifest.
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Argument(format!("cannot read config {}: {e}", path.display())))?;
        let mut v: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::Argument(format!("config {} is not JSON: {e}", path.display())))?;
        if let Some(inner) = v.get_mut("config") {
            v = inner.take();
        }
        serde_json::from_value(v)
            .map_err(|e| Error::Argument(format!("bad config {}: {e}", path.display())))
    }

    fn resolve(common: &CommonArgs) -> Result<Self, Error> {
        let mut cfg = match &common.config {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        let p = &mut cfg.params;
        if let Some(v) = common.alpha {
            p.bath.alpha = v;
        }
        if let Some(v) = common.mu {
            p.bath.mu = v;
        }
        if let Some(v) = common.wc {
            p.bath.omega_c = v;
        }
        if let Some(v) = common.lambda {
            p.corr.lambda = v;
        }
        if let Some(v) = common.upsilon {
            p.corr.upsilon = v;
        }
        if let Some(v) = common.w0 {
            p.qubit.omega0 = v;
        }
        if let Some((ce, cg)) = common.ce_cg {
            p.qubit = QubitSpec::new(
                p.qubit.omega0,
                Complex64::new(ce, 0.0),
                Complex64::new(cg, 0.0),
            )?;
        }
        let t = &mut cfg.trapping;
        if let Some(v) = common.rel_tol {
            t.rel_tol = v;
        }
        if let Some(v) = common.abs_tol {
            t.abs_tol = v;
        }
        if let Some(v) = common.t_max {
            t.t_max = v;
        }
        if let Some(v) = common.grid_n {
            t.grid_n = v;
        }
        if let Some(m) = common.mode {
            cfg.qsl_mode = m;
        }
        if let Some(n) = common.threads {
            cfg.threads = n;
        }
        if let Some(f) = common.format {
            cfg.format = f;
        }
        cfg.params.validate()?;
        cfg.trapping.validate()?;
        Ok(cfg)
    }
}

/// Failure of a CLI invocation, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Model(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Model(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Model(e) => write!(f, "{} error: {e}", e.code()),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

/// Parses `argv` (program name first), runs the command, and returns the
/// process exit code. Results go to stdout, diagnostics to stderr.
pub fn run(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.command, &mut out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = out.flush();
            eprintln!("cohtrap: {f}");
            f.exit_code()
        }
    }
}

fn common_of(cmd: &Command) -> &CommonArgs {
    match cmd {
        Command::Eval { common, .. }
        | Command::Stationary { common }
        | Command::Tc { common }
        | Command::Qsl { common }
        | Command::Sweep { common, .. }
        | Command::Optimize { common, .. }
        | Command::Figure { common, .. } => common,
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(common_of(&cmd))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Argument(format!("cannot start thread pool: {e}")))?;
    let mut buf = Vec::new();
    let result = pool.install(|| execute(cmd, cfg, &mut buf));
    out.write_all(&buf)?;
    result
}

/// Ordered key/value report printed as `key = value` lines or one JSON object.
struct Report(Vec<(&'static str, serde_json::Value)>);

impl Report {
    fn num(mut self, k: &'static str, v: f64) -> Self {
        self.0.push((k, v.into()));
        self
    }

    fn text(mut self, k: &'static str, v: &str) -> Self {
        self.0.push((k, v.into()));
        self
    }

    fn emit(self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => {
                let map: serde_json::Map<String, serde_json::Value> = self
                    .0
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v))
                    .collect();
                writeln!(out, "{}", serde_json::Value::Object(map))
            }
            Format::Csv => {
                for (k, v) in self.0 {
                    match v.as_f64() {
                        Some(x) => writeln!(out, "{k} = {}", format_g9(x))?,
                        None => writeln!(out, "{k} = {}", v.as_str().unwrap_or_default())?,
                    }
                }
                Ok(())
            }
        }
    }
}

fn execute(cmd: Command, cfg: RunConfig, out: &mut Vec<u8>) -> Result<(), Failure> {
    let p = cfg.params;
    match cmd {
        Command::Eval { t, .. } => {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Domain(format!("t must be non-negative, got {t}")).into());
            }
            let model = DephasingModel::new(&p)?;
            let s = model.sample(t)?;
            let c = CoherenceValue::of(&model.state(t)?)?;
            Report(Vec::new())
                .num("t", t)
                .num("ups_re", s.ups.re)
                .num("ups_im", s.ups.im)
                .num("ups_abs", s.ups.norm())
                .num("dups_re", s.dups.re)
                .num("dups_im", s.dups.im)
                .num("c_rel_entropy", c.rel_entropy)
                .num("c_l1", c.l1)
                .emit(cfg.format, out)?;
        }
        Command::Stationary { .. } => {
            let c = stationary_coherence(&p)?;
            Report(Vec::new())
                .num("ups_inf_abs", crate::dephasing::stationary_magnitude(&p)?)
                .num("c_stationary", c.rel_entropy)
                .num("l1_stationary", c.l1)
                .emit(cfg.format, out)?;
        }
        Command::Tc { .. } => {
            let t_c = trapping_time(&p, &cfg.trapping)?;
            Report(Vec::new()).num("t_c", t_c).emit(cfg.format, out)?;
        }
        Command::Qsl { .. } => {
            let q = qsl_ratio(&p, &cfg.trapping, cfg.qsl_mode)?;
            Report(Vec::new())
                .text("mode", q.mode.as_str())
                .num("t_c", q.t_c)
                .num("numerator", q.numerator)
                .num("denominator", q.denominator)
                .num("tau_qsl", q.ratio * q.t_c)
                .num("qsl_ratio", q.ratio)
                .emit(cfg.format, out)?;
        }
        Command::Sweep {
            axes,
            out: path,
            qsl,
            ..
        } => {
            let mut cfg = cfg;
            if !axes.is_empty() {
                cfg.axes = axes;
            }
            if qsl && !cfg.outputs.contains(&SweepOutput::Qsl) {
                cfg.outputs.push(SweepOutput::Qsl);
            }
            if cfg.axes.is_empty() {
                return Err(Error::Argument("sweep needs at least one --axis".into()).into());
            }
            let settings = SweepSettings {
                trapping: cfg.trapping,
                qsl_mode: cfg.qsl_mode,
                reference: None,
            };
            let result = sweep(&p, &cfg.axes, &cfg.outputs, &settings)?;
            write_table(&result, &path, &cfg)?;
            let failed = result
                .rows
                .iter()
                .filter(|r| r.error_code.is_some())
                .count();
            writeln!(out, "rows = {}", result.rows.len())?;
            writeln!(out, "failed_rows = {failed}")?;
            writeln!(out, "out = {}", path.display())?;
        }
        Command::Optimize {
            target,
            vars,
            mu_lo,
            mu_hi,
            upsilon_lo,
            upsilon_hi,
            ..
        } => {
            let mu_b = Bracket::new(mu_lo, mu_hi)?;
            let ups_b = Bracket::new(upsilon_lo, upsilon_hi)?;
            match target {
                Target::Stationary => {
                    if vars != Vars::Mu {
                        return Err(Error::Argument(
                            "stationary optimization supports --vars mu only".into(),
                        )
                        .into());
                    }
                    let (mu, c) = optimize_stationary_mu(&p, mu_b)?;
                    Report(Vec::new())
                        .num("mu_star", mu)
                        .num("c_stationary", c)
                        .emit(cfg.format, out)?;
                }
                Target::Qsl => {
                    let search = match vars {
                        Vars::Mu => QslSearch::Mu(mu_b),
                        Vars::Upsilon => QslSearch::Upsilon(ups_b),
                        Vars::Joint => QslSearch::Joint {
                            upsilon: ups_b,
                            mu: mu_b,
                        },
                    };
                    let o = optimize_qsl(&p, search, &cfg.trapping, cfg.qsl_mode)?;
                    Report(Vec::new())
                        .text("mode", o.mode.as_str())
                        .num("mu", o.mu)
                        .num("upsilon", o.upsilon)
                        .num("omega0", o.omega0)
                        .num("t_c", o.t_c)
                        .num("qsl_ratio", o.ratio)
                        .num("coarse_min", o.coarse_min)
                        .emit(cfg.format, out)?;
                }
            }
        }
        Command::Figure {
            id,
            out: dir,
            resolution,
            ..
        } => {
            let id: FigureId = id.parse()?;
            let res = match resolution {
                Some(n) if n >= 2 => FigureResolution {
                    heatmap: n,
                    line: n,
                    qsl_heatmap: n,
                    qsl_line: n,
                },
                Some(n) => {
                    return Err(
                        Error::Argument(format!("resolution must be at least 2, got {n}")).into(),
                    )
                }
                None => FigureResolution::default(),
            };
            let result = figure_dataset(id, &res)?;
            fs::create_dir_all(&dir)?;
            let ext = match cfg.format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let path = dir.join(format!("{id}.{ext}"));
            let mut cfg = cfg;
            cfg.params = result.manifest.base;
            cfg.trapping = result.manifest.settings.trapping;
            cfg.axes = result.axes.clone();
            cfg.outputs = result.manifest.outputs.clone();
            write_table(&result, &path, &cfg)?;
            writeln!(out, "figure = {id}")?;
            writeln!(out, "rows = {}", result.rows.len())?;
            writeln!(out, "out = {}", path.display())?;
        }
    }
    Ok(())
}

fn write_table(result: &SweepResult, path: &Path, cfg: &RunConfig) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path)?);
    match cfg.format {
        Format::Csv => write_csv(result, &mut w)?,
        Format::Json => write_json(result, &mut w)?,
    }
    w.flush()?;
    write_manifest(path, cfg, result)?;
    Ok(())
}
