use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use psiflow::analysis::classify_curve;
use psiflow::circle_ode::phase_portrait;
use psiflow::io::{self, curves_svg, parse_config, parse_density, phase_portrait_svg, read_snapshots};
use psiflow::verify::{run_suite, seed_from_env};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Curve shortening flow with radial densities.
#[derive(Parser)]
#[command(name = "psiflow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write the outputs named in its config.
    Simulate { config: PathBuf },
    /// Plot the drift of origin-centred circles over an interval of radii.
    PhasePortrait {
        /// Density spec, inline JSON or a path to a JSON file.
        #[arg(long)]
        density: String,
        /// Radius interval as `a,b`.
        #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
        interval: [f64; 2],
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the predicted outcome for a config's density and curve.
    Classify { config: PathBuf },
    /// Run a verification suite: collapse-times, invariants or acceptance.
    Verify { suite: String },
    /// Render snapshot lines as an SVG.
    Plot {
        snapshots: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Draw a dashed origin-centred circle of this radius.
        #[arg(long)]
        circle: Option<f64>,
    },
}

fn parse_interval(s: &str) -> std::result::Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or("expected `a,b`")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if !(0.0 < a && a < b && b.is_finite()) {
        return Err(format!("need 0 < a < b, got {a},{b}"));
    }
    Ok([a, b])
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn base_dir(config: &Path) -> &Path {
    config.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."))
}

fn simulate(config: &Path) -> Result<ExitCode> {
    let cfg = parse_config(&read(config)?)?;
    let res = io::run_experiment(&cfg, base_dir(config))?;
    let s = &res.summary;
    println!("{}", serde_json::to_string_pretty(s)?);
    if let Some(e) = res.aborted() {
        bail!("run aborted at t = {}: {e}", s.outcome.t_final);
    }
    Ok(ExitCode::SUCCESS)
}

fn portrait(density: &str, interval: [f64; 2], samples: usize, out: &Path) -> Result<ExitCode> {
    let text = if density.trim_start().starts_with('{') { density.to_string() } else { read(Path::new(density))? };
    let spec = parse_density(&text)?;
    let p = phase_portrait(&spec.build()?, spec.dim(), interval, samples)?;
    std::fs::write(out, phase_portrait_svg(&p)).with_context(|| format!("writing {}", out.display()))?;
    if p.crossings.degenerate {
        println!("degenerate: every circle in range is psi-minimal");
    }
    for z in &p.crossings.zeros {
        let kind = if z.is_attractor() { "attractor" } else { "repulsor" };
        println!("{kind} r = {} transversal = {}", z.r, z.transversal);
    }
    Ok(ExitCode::SUCCESS)
}

fn classify(config: &Path) -> Result<ExitCode> {
    let cfg = parse_config(&read(config)?)?;
    let d = cfg.density.build()?;
    let c = cfg.curve.build(base_dir(config))?;
    let p = classify_curve(&d, &c)?;
    println!("{}", serde_json::to_string_pretty(&p.summary())?);
    Ok(ExitCode::SUCCESS)
}

fn verify(suite: &str) -> Result<ExitCode> {
    let rows = run_suite(suite, seed_from_env()?)?;
    for r in &rows {
        println!("{}", r.row());
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    println!("{suite}: {} passed, {failed} failed", rows.len() - failed);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn plot(snapshots: &Path, out: &Path, circle: Option<f64>) -> Result<ExitCode> {
    let snaps = read_snapshots(&read(snapshots)?).with_context(|| format!("reading {}", snapshots.display()))?;
    std::fs::write(out, curves_svg(&snaps, circle)).with_context(|| format!("writing {}", out.display()))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Simulate { config } => simulate(config),
        Command::PhasePortrait { density, interval, samples, out } => portrait(density, *interval, *samples, out),
        Command::Classify { config } => classify(config),
        Command::Verify { suite } => verify(suite),
        Command::Plot { snapshots, out, circle } => plot(snapshots, out, *circle),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
