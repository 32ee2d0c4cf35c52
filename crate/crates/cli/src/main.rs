use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use autodirector::pipeline::{effective_config, RunSummary};
use autodirector::render::{render, RenderOptions};
use autodirector::trace_io::{parse_trace_with, ParseOptions};
use autodirector::{
    generate_scenario, parse_trajectory, run_director, write_trace, write_trajectory,
    ConfigOverrides, MapInfo, Scenario, TraceDocument,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "autodirector",
    version,
    about = "Automatic spectator camera for RTS game traces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Direct a camera over a trace and write its trajectory.
    Run(RunArgs),
    /// Generate a synthetic trace.
    Simulate(SimulateArgs),
    /// Draw a trace and trajectory as text grids.
    Render(RenderArgs),
}

#[derive(Args)]
struct TraceInput {
    /// Trace file (line-delimited JSON).
    #[arg(long)]
    trace: PathBuf,
    /// Accept unknown fields in the trace, with a warning.
    #[arg(long)]
    lenient: bool,
    /// TOML config file layered over the trace header.
    #[arg(long, env = "AUTODIRECTOR_CONFIG")]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: ConfigFlags,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: TraceInput,
    /// Trajectory output file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of frames; defaults to the scenario's natural length.
    #[arg(long)]
    length: Option<u64>,
    /// Map size in pixels.
    #[arg(long, value_parser = parse_dims, default_value = "2048x2048")]
    map: (u32, u32),
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    input: TraceInput,
    #[arg(long)]
    trajectory: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Render every Nth frame; the last frame is always drawn.
    #[arg(long, default_value_t = RenderOptions::default().stride)]
    stride: usize,
    /// Grid width in characters.
    #[arg(long, default_value_t = RenderOptions::default().columns)]
    columns: usize,
}

/// One flag per config field.
#[derive(Args)]
struct ConfigFlags {
    #[arg(long)]
    t_min: Option<u64>,
    #[arg(long)]
    t_max: Option<u64>,
    #[arg(long)]
    move_factor: Option<f64>,
    #[arg(long)]
    scout_frame_cutoff: Option<u64>,
    #[arg(long)]
    near_base_radius_px: Option<f64>,
    #[arg(long)]
    own_base_radius_px: Option<f64>,
    #[arg(long)]
    cluster_min_units: Option<u32>,
    #[arg(long)]
    cluster_radius_px: Option<f64>,
    #[arg(long)]
    viewport_width_px: Option<u32>,
    #[arg(long)]
    viewport_height_px: Option<u32>,
    /// Viewport as WIDTHxHEIGHT; individual width/height flags take precedence.
    #[arg(long, value_parser = parse_dims)]
    viewport: Option<(u32, u32)>,
}

impl ConfigFlags {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            t_min: self.t_min,
            t_max: self.t_max,
            move_factor: self.move_factor,
            scout_frame_cutoff: self.scout_frame_cutoff,
            near_base_radius_px: self.near_base_radius_px,
            own_base_radius_px: self.own_base_radius_px,
            cluster_min_units: self.cluster_min_units,
            cluster_radius_px: self.cluster_radius_px,
            viewport_width_px: self.viewport_width_px.or(self.viewport.map(|v| v.0)),
            viewport_height_px: self.viewport_height_px.or(self.viewport.map(|v| v.1)),
        }
    }
}

fn parse_dims(s: &str) -> Result<(u32, u32), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<u32>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(w)?, parse(h)?))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

impl TraceInput {
    fn load(&self) -> Result<(TraceDocument, autodirector::DirectorConfig)> {
        let file = File::open(&self.trace)
            .with_context(|| format!("cannot open {}", self.trace.display()))?;
        let (doc, warnings) = parse_trace_with(
            BufReader::new(file),
            ParseOptions {
                strict: !self.lenient,
            },
        )
        .with_context(|| format!("invalid trace {}", self.trace.display()))?;
        for w in &warnings {
            log::warn!(
                "{}: line {}: ignored unknown field {:?}",
                self.trace.display(),
                w.line,
                w.field
            );
        }
        let file_overrides = match &self.config {
            None => ConfigOverrides::default(),
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("cannot read {}", path.display()))?;
                ConfigOverrides::from_toml_str(&text)
                    .with_context(|| format!("invalid config {}", path.display()))?
            }
        };
        let config = effective_config(&doc.config, &file_overrides, &self.flags.overrides());
        Ok((doc, config))
    }
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let (doc, config) = args.input.load()?;
    let run = run_director(&doc.frames, &doc.map, &config)?;
    let mut out = create(&args.out)?;
    write_trajectory(&run.samples, &mut out)?;
    out.flush()?;
    eprint!("{}", RunSummary::of(&run));
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let kind: Scenario = args.scenario.parse()?;
    let map = MapInfo::two_player(args.map.0, args.map.1);
    autodirector::model::validate_map(&map)
        .map_err(|v| anyhow!("map {}x{}: {v}", args.map.0, args.map.1))?;
    let length = args.length.unwrap_or(kind.default_length());
    let doc = generate_scenario(kind, args.seed, &map, length);
    let mut out = create(&args.out)?;
    write_trace(&doc, &mut out)?;
    out.flush()?;
    eprintln!(
        "wrote {} frames of {kind} to {}",
        doc.frames.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_render(args: &RenderArgs) -> Result<()> {
    let (doc, config) = args.input.load()?;
    let file = File::open(&args.trajectory)
        .with_context(|| format!("cannot open {}", args.trajectory.display()))?;
    let samples = parse_trajectory(BufReader::new(file))
        .with_context(|| format!("invalid trajectory {}", args.trajectory.display()))?;
    let opts = RenderOptions {
        stride: args.stride,
        columns: args.columns,
    };
    let mut text = Vec::new();
    render(&doc.map, &config, &doc.frames, &samples, opts, &mut text)?;
    fs::write(&args.out, text).with_context(|| format!("cannot write {}", args.out.display()))?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Render(a) => cmd_render(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
