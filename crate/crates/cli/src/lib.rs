//! Front end for the `jfds` solvers: configuration merging, case dispatch
//! and the plain-text output formats.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use jfds::bench1d::{self, CaseRun, CaseSpec, RunOptions, Variable};
use jfds::euler2d::cases::{max_pressure_dip, post_incident_pressure, stagnation_line};
use jfds::euler2d::{case_registry_2d, find_case_2d, run_case_2d, Case2D, Case2DKind, Log2D, Run2DOptions, StructuredGrid2D};
use jfds::solver1d::{Order, ReconstructionConfig};
use jfds::state::{internal_energy, GasModel};
use jfds::verify::{run_suite, Suite, DEFAULT_SAMPLES, DEFAULT_SEED};
use jfds::{Error, SchemeKind};

/// Exit status for a successful run.
pub const EXIT_OK: u8 = 0;
/// Any failure not covered below, including a failed verification suite.
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_BLOWUP: u8 = 3;

/// Default Venkatakrishnan constant for one-dimensional second-order runs.
pub const DEFAULT_LIMITER_K_1D: f64 = 0.1;

#[derive(Debug, Parser)]
#[command(name = "jfds", version, about = "Split flux-difference Euler solvers and benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a benchmark case and write its solution.
    Run(RunArgs),
    /// Print every 1D and 2D case with its parameters.
    ListCases {
        /// One tab-separated line per case.
        #[arg(long)]
        machine: bool,
    },
    /// Run a property suite with a fixed seed.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Eoc,
    Report,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> std::result::Result<Self, Error> {
        <Format as ValueEnum>::from_str(s, true).map_err(|_| Error::Config(format!("unknown format '{s}' (expected csv, eoc or report)")))
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub case: Option<String>,
    /// zbs or tvs
    #[arg(long)]
    pub scheme: Option<String>,
    /// 1 or 2
    #[arg(long)]
    pub order: Option<u32>,
    /// Cell count of a 1D case.
    #[arg(long, conflicts_with = "grid")]
    pub cells: Option<usize>,
    /// 2D grid as NIxNJ.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long)]
    pub t_final: Option<f64>,
    /// Limiter constant K for second-order runs.
    #[arg(long)]
    pub limiter_k: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Accepted for symmetry with `verify`; runs are deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
    /// key=value file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: String,
    pub scheme: SchemeKind,
    pub order: Option<Order>,
    pub cells: Option<usize>,
    pub grid: Option<(usize, usize)>,
    pub cfl: Option<f64>,
    pub t_final: Option<f64>,
    pub limiter_k: Option<f64>,
    pub max_steps: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn config_err(msg: impl Into<String>) -> anyhow::Error {
    Error::Config(msg.into()).into()
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| config_err(format!("invalid value '{value}' for {key}")))
}

/// Parses "NIxNJ".
pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| config_err(format!("grid '{s}' is not of the form NIxNJ")))?;
    let (ni, nj) = (parse::<usize>("grid", a)?, parse::<usize>("grid", b)?);
    if ni == 0 || nj == 0 {
        return Err(config_err(format!("grid '{s}' has an empty direction")));
    }
    Ok((ni, nj))
}

/// Reads a key=value file. Blank lines and lines starting with '#' are
/// skipped; keys may use '-' or '_'.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| config_err(format!("line {}: expected key=value", n + 1)))?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

impl RunArgs {
    /// Fills unset flags from a key=value map.
    pub fn merge_file(mut self, file: &BTreeMap<String, String>) -> Result<Self> {
        for (key, value) in file {
            match key.as_str() {
                "case" => self.case = self.case.or(Some(value.clone())),
                "scheme" => self.scheme = self.scheme.or(Some(value.clone())),
                "order" => self.order = self.order.or(Some(parse(key, value)?)),
                "cells" => self.cells = self.cells.or(Some(parse(key, value)?)),
                "grid" => self.grid = self.grid.or(Some(value.clone())),
                "cfl" => self.cfl = self.cfl.or(Some(parse(key, value)?)),
                "t_final" => self.t_final = self.t_final.or(Some(parse(key, value)?)),
                "limiter_k" => self.limiter_k = self.limiter_k.or(Some(parse(key, value)?)),
                "max_steps" => self.max_steps = self.max_steps.or(Some(parse(key, value)?)),
                "out" => self.out = self.out.or(Some(PathBuf::from(value))),
                "format" => self.format = self.format.or(Some(parse(key, value)?)),
                "seed" => self.seed = self.seed.or(Some(parse(key, value)?)),
                other => return Err(config_err(format!("unknown config key '{other}'"))),
            }
        }
        Ok(self)
    }

    pub fn resolve(self) -> Result<RunConfig> {
        let args = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
                self.clone().merge_file(&parse_config_file(&text)?)?
            }
            None => self,
        };
        let case = args.case.ok_or_else(|| config_err("no case given (use --case or case= in a config file)"))?;
        let scheme = match args.scheme {
            Some(s) => s.parse::<SchemeKind>().map_err(config_err)?,
            None => SchemeKind::ZbsFds,
        };
        let order = args.order.map(Order::from_number).transpose()?;
        let grid = args.grid.as_deref().map(parse_grid).transpose()?;
        if args.cells.is_some() && grid.is_some() {
            return Err(config_err("--cells and --grid are mutually exclusive"));
        }
        if let Some(c) = args.cfl {
            if !(c > 0.0 && c <= 1.0) {
                return Err(config_err(format!("cfl {c} outside (0, 1]")));
            }
        }
        if let Some(t) = args.t_final {
            if !(t > 0.0 && t.is_finite()) {
                return Err(config_err(format!("final time {t} must be positive")));
            }
        }
        if let Some(k) = args.limiter_k {
            if !(k > 0.0 && k.is_finite()) {
                return Err(config_err(format!("limiter constant {k} must be positive")));
            }
        }
        if args.cells == Some(0) {
            return Err(config_err("cell count must be positive"));
        }
        Ok(RunConfig {
            case,
            scheme,
            order,
            cells: args.cells,
            grid,
            cfl: args.cfl,
            t_final: args.t_final,
            limiter_k: args.limiter_k,
            max_steps: args.max_steps,
            out: args.out,
            format: args.format.unwrap_or(Format::Csv),
        })
    }
}

/// Maps a failure to the process exit status.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::BlowUp { .. } | Error::BlowUp2D { .. }) => EXIT_BLOWUP,
        Some(Error::Config(_) | Error::InvalidGamma { .. }) => EXIT_CONFIG,
        _ => EXIT_FAILURE,
    }
}

/// Formats a float with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per cell: x, rho, u, p, e.
pub fn csv_1d(grid: &jfds::solver1d::Grid1D<f64>, gas: &GasModel<f64>) -> String {
    let mut s = String::from("x,rho,u,p,e\n");
    for (i, w) in jfds::solver1d::primitives_unchecked(grid, gas).iter().enumerate() {
        let _ = writeln!(s, "{},{},{},{},{}", num(grid.center(i)), num(w.rho), num(w.u), num(w.p), num(internal_energy(w, gas)));
    }
    s
}

/// Header lines with the grid size and contour levels, then one row per
/// cell: x, y, rho, u, v, p.
pub fn csv_2d(case: &Case2D<f64>, grid: &StructuredGrid2D<f64>, gas: &GasModel<f64>) -> String {
    let mesh = &grid.mesh;
    let mut s = format!("# ni={} nj={}\n", mesh.ni, mesh.nj);
    let _ = writeln!(s, "# contour {} {}", case.contour.name(), case.contour_levels.unwrap_or("auto"));
    s.push_str("x,y,rho,u,v,p\n");
    for j in 0..mesh.nj {
        for i in 0..mesh.ni {
            let (x, y) = mesh.center(i, j);
            let w = grid.primitive(i, j, gas);
            let _ = writeln!(s, "{},{},{},{},{},{}", num(x), num(y), num(w.rho), num(w.u), num(w.v), num(w.p));
        }
    }
    s
}

/// Grids used by the eoc format: five doublings from `start`.
pub fn eoc_grids(start: usize) -> Vec<usize> {
    (0..5).map(|k| start << k).collect()
}

pub fn eoc_table(case: &CaseSpec<f64>, cfg: &RunConfig, gas: &GasModel<f64>) -> Result<String> {
    let grids = eoc_grids(cfg.cells.unwrap_or(40));
    let rows = bench1d::convergence_study(case, cfg.scheme, recon_1d(cfg), &grids, Variable::Density, cfg.cfl, gas)?;
    let mut s = String::from("cells,L1,L2,Linf,EOC_L1,EOC_L2,EOC_Linf\n");
    for r in rows {
        let (a, b, c) = match r.eoc {
            Some(e) => (num(e.l1), num(e.l2), num(e.linf)),
            None => ("-".into(), "-".into(), "-".into()),
        };
        let _ = writeln!(s, "{},{},{},{},{a},{b},{c}", r.cells, num(r.errors.l1), num(r.errors.l2), num(r.errors.linf));
    }
    Ok(s)
}

fn recon_1d(cfg: &RunConfig) -> ReconstructionConfig<f64> {
    match cfg.order.unwrap_or(Order::First) {
        Order::First => ReconstructionConfig::first_order(),
        Order::Second => ReconstructionConfig::second_order(cfg.limiter_k.unwrap_or(DEFAULT_LIMITER_K_1D)),
    }
}

fn report_1d(case: &CaseSpec<f64>, cfg: &RunConfig, run: &CaseRun<f64>, gas: &GasModel<f64>) -> String {
    let w = jfds::solver1d::primitives_unchecked(&run.grid, gas);
    let min_rho = w.iter().map(|w| w.rho).fold(f64::INFINITY, f64::min);
    let min_p = w.iter().map(|w| w.p).fold(f64::INFINITY, f64::min);
    let [m, mom, e] = run.grid.totals();
    let mut s = String::new();
    let _ = writeln!(s, "case: {} ({})", case.name, case.title);
    let _ = writeln!(s, "scheme: {} order {}", cfg.scheme, recon_1d(cfg).order.number());
    let _ = writeln!(s, "cells: {}", run.grid.n_cells());
    let _ = writeln!(s, "steps: {} time: {} reached_final: {}", run.log.steps, num(run.log.time), run.log.reached_final);
    let _ = writeln!(s, "dt: min {} max {}", num(run.log.min_dt), num(run.log.max_dt));
    let _ = writeln!(s, "min rho: {} min p: {}", num(min_rho), num(min_p));
    let _ = writeln!(s, "totals: mass {} momentum {} energy {}", num(m), num(mom), num(e));
    if let Ok(reference) = bench1d::reference_sampler(case, run.log.time, gas) {
        for v in [Variable::Density, Variable::Velocity, Variable::Pressure, Variable::InternalEnergy] {
            let r = bench1d::error_norms(&run.grid, reference.as_ref(), v, gas);
            let _ = writeln!(s, "error {v}: L1 {} L2 {} Linf {}", num(r.l1), num(r.l2), num(r.linf));
        }
    }
    s
}

fn report_2d(case: &Case2D<f64>, grid: &StructuredGrid2D<f64>, log: &Log2D<f64>, gas: &GasModel<f64>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "case: {} ({})", case.name, case.title);
    let _ = writeln!(s, "grid: {}x{}", grid.mesh.ni, grid.mesh.nj);
    let _ = writeln!(s, "steps: {} time: {} reached_final: {} converged: {}", log.steps, num(log.time), log.reached_final, log.converged);
    if let (Some(first), Some(last)) = (log.residuals.first(), log.residuals.last()) {
        let _ = writeln!(s, "residual: first {} last {}", num(*first), num(*last));
    }
    let _ = writeln!(s, "min rho: {} min p: {}", num(log.min_rho), num(log.min_p));
    match case.kind {
        Case2DKind::ShockReflection => {
            if let Ok(p) = post_incident_pressure(grid, 0.1, gas) {
                let _ = writeln!(s, "post-incident pressure: {}", num(p));
            }
        }
        Case2DKind::HalfCylinder { .. } => {
            let profile = stagnation_line(grid, gas);
            let _ = writeln!(s, "stagnation-line pressure dip: {}", num(max_pressure_dip(&profile)));
            if let Some((_, w)) = profile.last() {
                let _ = writeln!(s, "wall pressure: {}", num(w.p));
            }
        }
        _ => {}
    }
    s
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Fails early, before any solver work, if the output path cannot be
/// created.
fn check_writable(out: Option<&Path>) -> Result<()> {
    if let Some(path) = out {
        fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| config_err(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

/// Path for a snapshot at time `t`, next to `out`.
pub fn snapshot_path(out: &Path, t: f64) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    out.with_file_name(format!("{stem}_t{t}{ext}"))
}

fn run_1d(case: &CaseSpec<f64>, cfg: &RunConfig, gas: &GasModel<f64>) -> Result<()> {
    if cfg.grid.is_some() {
        return Err(config_err(format!("case '{}' is one-dimensional; use --cells", case.name)));
    }
    if cfg.format == Format::Eoc {
        return write_output(cfg.out.as_deref(), &eoc_table(case, cfg, gas)?);
    }
    let options = RunOptions { n_cells: cfg.cells, cfl: cfg.cfl, t_final: cfg.t_final, max_steps: cfg.max_steps };
    let run = bench1d::run_case(case, cfg.scheme, recon_1d(cfg), options, gas)?;
    match cfg.format {
        Format::Csv => {
            if let Some(out) = &cfg.out {
                for (snap, t) in run.snapshots.iter().zip(&case.snapshots) {
                    fs::write(snapshot_path(out, *t), csv_1d(snap, gas))?;
                }
            }
            write_output(cfg.out.as_deref(), &csv_1d(&run.grid, gas))
        }
        _ => write_output(cfg.out.as_deref(), &report_1d(case, cfg, &run, gas)),
    }
}

fn run_2d(case: &Case2D<f64>, cfg: &RunConfig, gas: &GasModel<f64>) -> Result<()> {
    if cfg.cells.is_some() {
        return Err(config_err(format!("case '{}' is two-dimensional; use --grid NIxNJ", case.name)));
    }
    if cfg.scheme != SchemeKind::ZbsFds {
        return Err(config_err(format!("the 2D solver implements ZBS-FDS only, not {}", cfg.scheme)));
    }
    if cfg.format == Format::Eoc {
        return Err(config_err("the eoc format applies to 1D cases with a reference solution"));
    }
    let options = Run2DOptions {
        grid: cfg.grid,
        order: cfg.order,
        cfl: cfg.cfl,
        t_final: cfg.t_final,
        max_steps: cfg.max_steps,
        limiter_k: cfg.limiter_k,
    };
    let (grid, log) = run_case_2d(case, &options, gas)?;
    let text = match cfg.format {
        Format::Csv => csv_2d(case, &grid, gas),
        _ => report_2d(case, &grid, &log, gas),
    };
    write_output(cfg.out.as_deref(), &text)
}

pub fn run(cfg: &RunConfig) -> Result<()> {
    let gas = GasModel::air();
    check_writable(cfg.out.as_deref())?;
    if let Ok(case) = bench1d::find_case::<f64>(&cfg.case) {
        return run_1d(&case, cfg, &gas);
    }
    match find_case_2d::<f64>(&cfg.case) {
        Ok(case) => run_2d(&case, cfg, &gas),
        Err(_) => Err(config_err(format!("unknown case '{}' (see list-cases)", cfg.case))),
    }
}

/// Registry listing; `machine` gives `dim\tname\ttitle\tparameters` lines.
pub fn list_cases(machine: bool) -> String {
    let mut s = String::new();
    let one: Vec<CaseSpec<f64>> = bench1d::case_registry();
    let two: Vec<Case2D<f64>> = case_registry_2d();
    if machine {
        for c in &one {
            let _ = writeln!(s, "1d\t{}\t{}\t{}", c.name, c.title, c.describe());
        }
        for c in &two {
            let _ = writeln!(s, "2d\t{}\t{}\t{}", c.name, c.title, c.describe());
        }
        return s;
    }
    s.push_str("1D cases:\n");
    for c in &one {
        let _ = writeln!(s, "  {:<16} {}\n  {:<16} {}", c.name, c.title, "", c.describe());
    }
    s.push_str("2D cases:\n");
    for c in &two {
        let _ = writeln!(s, "  {:<18} {}\n  {:<18} {}", c.name, c.title, "", c.describe());
    }
    s
}

/// Runs a suite and returns the printed report with its pass flag.
pub fn verify(suite: &str, seed: u64, samples: usize) -> Result<(String, bool)> {
    let suite: Suite = suite.parse()?;
    if samples == 0 {
        return Err(config_err("samples must be positive"));
    }
    let report = run_suite(suite, seed, samples)?;
    Ok((report.to_string(), report.passed()))
}

/// Entry point shared by the binary and the tests.
pub fn main_with(cli: Cli) -> u8 {
    let mut scheme = SchemeKind::ZbsFds;
    let result = match cli.command {
        Command::Run(args) => args.resolve().and_then(|cfg| {
            scheme = cfg.scheme;
            run(&cfg).map(|()| EXIT_OK)
        }),
        Command::ListCases { machine } => write_output(None, &list_cases(machine)).map(|()| EXIT_OK),
        Command::Verify { suite, seed, samples } => verify(&suite, seed, samples).and_then(|(text, ok)| {
            write_output(None, &text)?;
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            let code = exit_code(&err);
            if code == EXIT_BLOWUP {
                eprintln!("error: {scheme} scheme blew up: {err:#}");
            } else {
                eprintln!("error: {err:#}");
            }
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("240x80").unwrap(), (240, 80));
        assert_eq!(parse_grid("20X320").unwrap(), (20, 320));
        for bad in ["240", "0x5", "ax4", "3x"] {
            assert_eq!(exit_code(&parse_grid(bad).unwrap_err()), EXIT_CONFIG);
        }
    }

    #[test]
    fn config_file_fills_gaps_and_flags_win() {
        let file = parse_config_file("# comment\ncase = lax\ncells=80\n\nt-final=0.1\nscheme=tvs\n").unwrap();
        let args = RunArgs { cells: Some(200), ..Default::default() };
        let cfg = args.merge_file(&file).unwrap().resolve().unwrap();
        assert_eq!(cfg.case, "lax");
        assert_eq!(cfg.cells, Some(200));
        assert_eq!(cfg.t_final, Some(0.1));
        assert_eq!(cfg.scheme, SchemeKind::TvsFds);
        assert_eq!(cfg.format, Format::Csv);
    }

    #[test]
    fn bad_config_entries_are_config_errors() {
        assert!(parse_config_file("cells 40").is_err());
        let file = parse_config_file("colour=blue").unwrap();
        assert_eq!(exit_code(&RunArgs::default().merge_file(&file).unwrap_err()), EXIT_CONFIG);
        let bad = [
            RunArgs { case: Some("sod".into()), order: Some(3), ..Default::default() },
            RunArgs { case: Some("sod".into()), cfl: Some(0.0), ..Default::default() },
            RunArgs { case: Some("sod".into()), scheme: Some("roe".into()), ..Default::default() },
            RunArgs { case: Some("sod".into()), t_final: Some(-1.0), ..Default::default() },
            RunArgs::default(),
        ];
        for args in bad {
            assert_eq!(exit_code(&args.resolve().unwrap_err()), EXIT_CONFIG);
        }
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e7, std::f64::consts::PI] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }

    #[test]
    fn exit_codes() {
        let blow = anyhow::Error::from(Error::BlowUp { step: 3, cell: 7, rho: 1.0, p: -1.0 });
        assert_eq!(exit_code(&blow), EXIT_BLOWUP);
        let blow2 = anyhow::Error::from(Error::BlowUp2D { step: 3, i: 1, j: 2, rho: 1.0, p: -1.0 });
        assert_eq!(exit_code(&blow2), EXIT_BLOWUP);
        assert_eq!(exit_code(&anyhow::anyhow!("io")), EXIT_FAILURE);
    }

    #[test]
    fn snapshot_names() {
        assert_eq!(snapshot_path(Path::new("/tmp/blast.csv"), 0.026), PathBuf::from("/tmp/blast_t0.026.csv"));
        assert_eq!(eoc_grids(40), [40, 80, 160, 320, 640]);
    }
}
