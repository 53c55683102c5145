//! Command-line interface.

use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use wforge_core::geom::path::integration_singularities;
use wforge_core::geom::{period_around, MIN_PERIOD_STEPS};

use crate::config::{parse_param, parse_point, GridSpec, RunConfig};
use crate::context::Context;
use crate::error::{CliError, CliResult};
use crate::export::{self, MeshFormat};
use crate::{listing, report, suite};

#[derive(Debug, Parser)]
#[command(name = "wforge", version, about = "Minimal surfaces from Weierstrass data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the catalog families with their parameter domains.
    Catalog {
        /// text or json
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Immerse a grid and write a mesh plus a CSV of per-vertex fields.
    Export(Common),
    /// Run checks on a family, or a named suite.
    Verify(Common),
    /// Periods of the forms around each finite puncture.
    Periods(Common),
    /// Sweep the associate angle over [0, pi/2], one mesh per step.
    Deform(Common),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter, repeatable.
    #[arg(long = "param", value_name = "K=V", allow_hyphen_values = true)]
    pub params: Vec<String>,
    /// Associate angle.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Polar grid as r_min,r_max,n_r,n_phi.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub exclude_radius: Option<f64>,
    /// Integration basepoint as re,im.
    #[arg(long, allow_hyphen_values = true)]
    pub basepoint: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// obj, ply or csv for meshes; text or json for reports.
    #[arg(long)]
    pub format: Option<String>,
    /// Check to run, repeatable.
    #[arg(long = "check")]
    pub checks: Vec<String>,
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Family whose Chern-Ricci spec replaces the family's own.
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Print the merged configuration as JSON and exit.
    #[arg(long)]
    pub print_config: bool,
}

impl Common {
    /// Config file merged with flag overrides.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let mut flags = RunConfig {
            family: self.family.clone(),
            theta: self.theta,
            grid: self.grid.as_deref().map(GridSpec::parse).transpose()?,
            exclude_radius: self.exclude_radius,
            basepoint: self.basepoint.as_deref().map(parse_point).transpose()?,
            checks: self.checks.clone(),
            suite: self.suite.clone(),
            spec: self.spec.clone(),
            out: self.out.clone(),
            format: self.format.clone(),
            tolerance: self.tolerance,
            steps: self.steps,
            seed: self.seed,
            ..Default::default()
        };
        for p in &self.params {
            let (k, v) = parse_param(p)?;
            flags.params.insert(k, v);
        }
        Ok(base.merged(flags))
    }
}

fn create(path: &str) -> CliResult<BufWriter<fs::File>> {
    let file = fs::File::create(path).map_err(|e| CliError::config(format!("cannot write {}: {}", path, e)))?;
    Ok(BufWriter::new(file))
}

fn write_file(path: &str, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::config(format!("cannot write {}: {}", path, e)))
}

fn with_extension(path: &str, ext: &str) -> String {
    Path::new(path).with_extension(ext).to_string_lossy().into_owned()
}

fn write_mesh(e: &export::Export, path: &str, format: MeshFormat) -> CliResult<()> {
    let mut w = create(path)?;
    export::write(&mut w, e, format)?;
    w.flush()?;
    Ok(())
}

fn cmd_export(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<i32> {
    let ctx = Context::from_config(cfg)?;
    let path = cfg.out.clone().unwrap_or_else(|| format!("{}.obj", ctx.instance.family.name()));
    let format = MeshFormat::resolve(cfg.format.as_deref(), &path)?;
    let e = export::build(&ctx)?;
    write_mesh(&e, &path, format)?;
    let triangles = 2 * e.patch.faces.len();
    writeln!(out, "wrote {} ({} vertices, {} faces)", path, e.patch.len(), triangles)?;
    if format != MeshFormat::Csv {
        let csv = with_extension(&path, "csv");
        write_mesh(&e, &csv, MeshFormat::Csv)?;
        writeln!(out, "wrote {}", csv)?;
    }
    Ok(0)
}

fn cmd_deform(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<i32> {
    let steps = cfg.steps.unwrap_or(8);
    if steps == 0 {
        return Err(CliError::config("--steps must be positive"));
    }
    let base = cfg.out.clone().unwrap_or_else(|| format!("{}.obj", cfg.family.as_deref().unwrap_or("surface")));
    let format = MeshFormat::resolve(cfg.format.as_deref(), &base)?;
    let ext = match format {
        MeshFormat::Obj => "obj",
        MeshFormat::Ply => "ply",
        MeshFormat::Csv => "csv",
    };
    let stem = Path::new(&base).with_extension("");
    for k in 0..=steps {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / steps as f64;
        let step = RunConfig { theta: Some(theta), ..cfg.clone() };
        let e = export::build(&Context::from_config(&step)?)?;
        let path = format!("{}_{:03}.{}", stem.to_string_lossy(), k, ext);
        write_mesh(&e, &path, format)?;
        writeln!(out, "wrote {} (theta = {:.16e})", path, theta)?;
    }
    Ok(0)
}

fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<i32> {
    let reports = match &cfg.suite {
        Some(name) => suite::run_suite(name, cfg)?,
        None => suite::run_checks(cfg)?,
    };
    let json = report::to_json(&reports);
    if let Some(path) = &cfg.out {
        write_file(path, &json)?;
    }
    match cfg.format.as_deref() {
        Some("json") => out.write_all(json.as_bytes())?,
        None | Some("text") => out.write_all(report::to_table(&reports).as_bytes())?,
        Some(other) => return Err(CliError::config(format!("unknown report format `{}` (text, json)", other))),
    }
    Ok(if reports.iter().all(|r| r.succeeded()) { 0 } else { 1 })
}

#[derive(Debug, Serialize)]
struct PeriodEntry {
    center: [f64; 2],
    radius: f64,
    period: [f64; 3],
}

fn cmd_periods(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<i32> {
    let ctx = Context::from_config(cfg)?;
    let data = &ctx.instance.data;
    let sing = integration_singularities(data);
    let mut entries = Vec::new();
    for p in data.finite_punctures() {
        let gap = sing.iter().filter(|s| (*s - p).norm() > 1e-12).map(|s| (s - p).norm()).fold(f64::INFINITY, f64::min);
        let radius = 0.25f64.min(0.45 * gap);
        let v = period_around(data, ctx.theta, *p, radius, MIN_PERIOD_STEPS)?;
        entries.push(PeriodEntry { center: [p.re, p.im], radius, period: v.v });
    }
    if let Some(path) = &cfg.out {
        let mut s = serde_json::to_string_pretty(&entries)?;
        s.push('\n');
        write_file(path, &s)?;
    }
    let header = ["center", "radius", "x1", "x2", "x3"].map(String::from);
    let rows: Vec<[String; 5]> = entries
        .iter()
        .map(|e| {
            [
                format!("{:.6}{:+.6}i", e.center[0], e.center[1]),
                format!("{:.4}", e.radius),
                format!("{:.16e}", e.period[0]),
                format!("{:.16e}", e.period[1]),
                format!("{:.16e}", e.period[2]),
            ]
        })
        .collect();
    out.write_all(listing::table(&header, &rows).as_bytes())?;
    Ok(0)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    let (common, run): (Common, fn(&RunConfig, &mut dyn Write) -> CliResult<i32>) = match cli.command {
        Command::Catalog { format } => {
            let text = match format.as_str() {
                "text" => listing::to_text(),
                "json" => listing::to_json(),
                other => return Err(CliError::config(format!("unknown catalog format `{}` (text, json)", other))),
            };
            out.write_all(text.as_bytes())?;
            return Ok(0);
        }
        Command::Export(c) => (c, cmd_export),
        Command::Verify(c) => (c, cmd_verify),
        Command::Periods(c) => (c, cmd_periods),
        Command::Deform(c) => (c, cmd_deform),
    };
    let cfg = common.resolve()?;
    if common.print_config {
        out.write_all(cfg.to_json().as_bytes())?;
        return Ok(0);
    }
    run(&cfg, out)
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code: 0 success, 1 checks failed, 2 config error, 3 numeric failure.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            e.exit_code()
        }
    }
}
