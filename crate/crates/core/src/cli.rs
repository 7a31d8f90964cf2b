//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on runtime errors (with a
//! stage-labelled message on stderr). `QUADINTERP_THREADS` sets the worker
//! thread count.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result, StageExt};
use crate::filtering::{self, filter_flow};
use crate::flowest::{estimate_flow, FlowProvider, HornSchunckParams};
use crate::imgio::{
    read_flo, read_holes, read_image, write_flo, write_holes, write_image, HoleMask, Image,
};
use crate::metrics::{asfp_for_frames, compute_quality, AsfpParams};
use crate::quadmodel::MotionModel;
use crate::reversal::{self, reverse_flow};
use crate::synthesis::{InterpConfig, Interpolator};
use crate::synthgen::{render_quartet_with_targets, RenderedQuartet, SceneSpec};

pub const THREADS_ENV: &str = "QUADINTERP_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "quadinterp",
    version,
    about = "Acceleration-aware video frame interpolation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize intermediate frames from four consecutive frames.
    Interpolate(InterpolateArgs),
    /// Render a synthetic scene with ground-truth frames and flows.
    Synth(SynthArgs),
    /// Compare a prediction against a reference frame.
    Metrics(MetricsArgs),
    /// Run a single flow stage.
    #[command(subcommand)]
    Flow(FlowCommand),
    /// Interpolate a synthetic scene with several models and score them.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct EstimatorArgs {
    /// Horn-Schunck pyramid levels.
    #[arg(long, default_value_t = 3)]
    hs_levels: usize,
    /// Horn-Schunck smoothness weight (0..255 intensity units).
    #[arg(long, default_value_t = 10.0)]
    hs_alpha: f64,
    /// Jacobi iterations per level.
    #[arg(long, default_value_t = 100)]
    hs_iterations: usize,
    /// Warps per level.
    #[arg(long, default_value_t = 1)]
    hs_warps: usize,
}

impl EstimatorArgs {
    fn params(&self) -> HornSchunckParams {
        HornSchunckParams {
            levels: self.hs_levels,
            alpha: self.hs_alpha,
            iterations: self.hs_iterations,
            warps: self.hs_warps,
        }
    }
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// Motion model.
    #[arg(long, default_value = "quadratic", value_parser = parse_model)]
    model: MotionModel,
    /// Gaussian sigma of the reversal splat.
    #[arg(long, default_value_t = reversal::DEFAULT_SIGMA)]
    sigma: f64,
    /// Chebyshev radius of the reversal splat.
    #[arg(long, default_value_t = reversal::DEFAULT_RADIUS)]
    radius: f64,
    /// Medoid filter radius (1..=10).
    #[arg(long, default_value_t = filtering::DEFAULT_RADIUS)]
    filter_radius: usize,
    /// Medoid filter outlier threshold in pixels.
    #[arg(long, default_value_t = filtering::DEFAULT_THRESHOLD)]
    filter_threshold: f64,
    #[command(flatten)]
    estimator: EstimatorArgs,
}

impl PipelineArgs {
    fn config(&self, model: MotionModel, provider: FlowProvider) -> InterpConfig {
        InterpConfig {
            model,
            sigma: self.sigma,
            radius: self.radius,
            filter_radius: self.filter_radius,
            filter_threshold: self.filter_threshold,
            provider,
        }
    }
}

#[derive(Debug, Args)]
struct InterpolateArgs {
    /// Frames at times -1, 0, 1, 2.
    #[arg(long = "in", num_args = 4, value_names = ["F-1", "F0", "F1", "F2"], required = true)]
    inputs: Vec<PathBuf>,
    /// Comma-separated times in (0, 1).
    #[arg(long = "t", value_delimiter = ',', required = true, value_parser = parse_time)]
    times: Vec<f64>,
    /// `estimate`, or a .flo path template with {src} and {dst} placeholders.
    #[arg(long, default_value = "estimate")]
    flows: String,
    /// Output directory; frames are written as out_t{t}.pnm.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    scene: PathBuf,
    /// Number of evenly spaced target frames between frames 0 and 1.
    #[arg(long, default_value_t = 7)]
    targets: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    /// Also report the feature-shift metric; needs --base.
    #[arg(long, requires = "base")]
    asfp: bool,
    /// True frame 0, where ASFP feature points are detected.
    #[arg(long)]
    base: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum FlowCommand {
    /// Estimate flow between two frames.
    Estimate {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        estimator: EstimatorArgs,
    },
    /// Reverse a forward flow by Gaussian splatting.
    Reverse {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = reversal::DEFAULT_SIGMA)]
        sigma: f64,
        #[arg(long, default_value_t = reversal::DEFAULT_RADIUS)]
        radius: f64,
        #[arg(long)]
        out: PathBuf,
        /// Hole mask output (P5, 255 = hole).
        #[arg(long)]
        holes: Option<PathBuf>,
    },
    /// Medoid-filter a backward flow.
    Filter {
        #[arg(long = "in")]
        input: PathBuf,
        /// Hole mask input; without it no pixel is a hole.
        #[arg(long)]
        holes: Option<PathBuf>,
        #[arg(long, default_value_t = filtering::DEFAULT_RADIUS)]
        radius: usize,
        #[arg(long, default_value_t = filtering::DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    scene: PathBuf,
    /// Comma-separated motion models to compare.
    #[arg(long, value_delimiter = ',', default_value = "quadratic,linear", value_parser = parse_model)]
    models: Vec<MotionModel>,
    /// `estimate` or `analytic` (ground-truth flows from the scene).
    #[arg(long, default_value = "estimate", value_parser = ["estimate", "analytic"])]
    flows: String,
    #[arg(long, default_value_t = 7)]
    targets: usize,
    /// Print JSON lines instead of a table.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

fn parse_model(s: &str) -> std::result::Result<MotionModel, String> {
    s.parse::<MotionModel>().map_err(|e| e.to_string())
}

fn parse_time(s: &str) -> std::result::Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(t) if t > 0.0 && t < 1.0 => Ok(t),
        Ok(t) => Err(format!("{t} is not in (0, 1)")),
        Err(e) => Err(e.to_string()),
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return 2;
    }
    let stdout = std::io::stdout();
    match execute(cli.command, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {value:?}"))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Interpolate(args) => cmd_interpolate(args, out),
        Command::Synth(args) => cmd_synth(args, out),
        Command::Metrics(args) => cmd_metrics(args, out),
        Command::Flow(cmd) => cmd_flow(cmd),
        Command::Eval(args) => cmd_eval(args, out),
    }
}

fn load_image(path: &Path) -> Result<Image> {
    read_image(path).stage(&format!("reading {}", path.display()))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

/// File-name form of a time value, e.g. `0.125`.
fn time_label(t: f64) -> String {
    format!("{t}")
}

fn cmd_interpolate(args: InterpolateArgs, out: &mut dyn Write) -> Result<()> {
    let frames = args
        .inputs
        .iter()
        .map(|p| load_image(p))
        .collect::<Result<Vec<_>>>()?;
    let provider = if args.flows == "estimate" {
        FlowProvider::Estimator(args.pipeline.estimator.params())
    } else {
        FlowProvider::Files {
            template: args.flows.clone(),
        }
    };
    let cfg = args.pipeline.config(args.pipeline.model, provider);
    let refs = [&frames[0], &frames[1], &frames[2], &frames[3]];
    let interp = Interpolator::new(refs, &cfg)?;
    ensure_dir(&args.out)?;
    use rayon::prelude::*;
    let written = args
        .times
        .par_iter()
        .map(|&t| {
            let frame = interp
                .frame_at(t)
                .map_err(|e| e.in_stage(format!("t={t}")))?;
            let path = args.out.join(format!("out_t{}.pnm", time_label(t)));
            write_image(&frame, &path).stage("writing output")?;
            Ok(path)
        })
        .collect::<Result<Vec<_>>>()?;
    for path in written {
        writeln!(out, "{}", path.display()).ok();
    }
    Ok(())
}

fn evenly_spaced(count: usize) -> Vec<f64> {
    (1..=count).map(|k| k as f64 / (count + 1) as f64).collect()
}

fn render_scene(path: &Path, targets: usize) -> Result<(SceneSpec, RenderedQuartet)> {
    let scene = SceneSpec::load(path).stage("loading scene")?;
    let rendered =
        render_quartet_with_targets(&scene, &evenly_spaced(targets)).stage("rendering")?;
    Ok((scene, rendered))
}

fn cmd_synth(args: SynthArgs, out: &mut dyn Write) -> Result<()> {
    let (_, rendered) = render_scene(&args.scene, args.targets)?;
    ensure_dir(&args.out)?;
    let mut written = Vec::new();
    for (index, frame) in (-1..=2).zip(&rendered.frames) {
        let path = args.out.join(format!("frame_{index}.pnm"));
        write_image(frame, &path).stage("writing frames")?;
        written.push(path);
    }
    for (t, frame) in &rendered.targets {
        let path = args.out.join(format!("target_t{}.pnm", time_label(*t)));
        write_image(frame, &path).stage("writing targets")?;
        written.push(path);
    }
    for (src, dst, flow) in rendered.flows.pairs() {
        let path = args.out.join(format!("flow_{src}to{dst}.flo"));
        write_flo(flow, &path).stage("writing flows")?;
        written.push(path);
    }
    for path in written {
        writeln!(out, "{}", path.display()).ok();
    }
    Ok(())
}

#[derive(Serialize)]
struct MetricsRecord {
    psnr: f64,
    ssim: f64,
    ie: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    asfp: Option<f64>,
}

fn cmd_metrics(args: MetricsArgs, out: &mut dyn Write) -> Result<()> {
    let reference = load_image(&args.reference)?;
    let pred = load_image(&args.pred)?;
    let q = compute_quality(&reference, &pred).stage("quality")?;
    let asfp = match (&args.base, args.asfp) {
        (Some(base), true) => {
            let base = load_image(base)?;
            Some(asfp_for_frames(&base, &reference, &pred, &AsfpParams::default()).stage("asfp")?)
        }
        _ => None,
    };
    let record = MetricsRecord {
        psnr: q.psnr,
        ssim: q.ssim,
        ie: q.ie,
        asfp,
    };
    writeln!(
        out,
        "{}",
        serde_json::to_string(&record).expect("serializable")
    )
    .ok();
    Ok(())
}

fn cmd_flow(cmd: FlowCommand) -> Result<()> {
    match cmd {
        FlowCommand::Estimate {
            from,
            to,
            out,
            estimator,
        } => {
            let a = load_image(&from)?;
            let b = load_image(&to)?;
            let flow = estimate_flow(&a, &b, &estimator.params()).stage("flow estimation")?;
            write_flo(&flow, &out).stage("writing flow")
        }
        FlowCommand::Reverse {
            input,
            sigma,
            radius,
            out,
            holes,
        } => {
            let flow = read_flo(&input).stage("reading flow")?;
            let r = reverse_flow(&flow, sigma, radius).stage("flow reversal")?;
            write_flo(&r.flow, &out).stage("writing flow")?;
            if let Some(path) = holes {
                write_holes(&r.holes, &path).stage("writing holes")?;
            }
            Ok(())
        }
        FlowCommand::Filter {
            input,
            holes,
            radius,
            threshold,
            out,
        } => {
            let flow = read_flo(&input).stage("reading flow")?;
            let mask = match holes {
                Some(p) => read_holes(&p).stage("reading holes")?,
                None => HoleMask::empty(flow.width(), flow.height()),
            };
            let filtered = filter_flow(&flow, &mask, radius, threshold).stage("flow filtering")?;
            write_flo(&filtered, &out).stage("writing flow")
        }
    }
}

/// One row of the `eval` report.
#[derive(Clone, Debug, Serialize)]
pub struct EvalRow {
    pub model: String,
    pub flows: String,
    /// Means over all target frames.
    pub psnr: f64,
    pub ssim: f64,
    pub ie: f64,
    /// Center frame (the target closest to t = 0.5).
    pub psnr_center: f64,
    pub ie_center: f64,
    pub asfp_center: f64,
    /// Mean ASFP over all target frames.
    pub asfp_mean: f64,
}

fn cmd_eval(args: EvalArgs, out: &mut dyn Write) -> Result<()> {
    if args.targets == 0 {
        return Err(Error::invalid("--targets must be at least 1"));
    }
    let (_, rendered) = render_scene(&args.scene, args.targets)?;
    let provider = match args.flows.as_str() {
        "analytic" => FlowProvider::Precomputed(Box::new(rendered.flows.clone())),
        _ => FlowProvider::Estimator(args.pipeline.estimator.params()),
    };
    let center = rendered
        .targets
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 .0 - 0.5).abs().total_cmp(&(b.1 .0 - 0.5).abs()))
        .map(|(i, _)| i)
        .unwrap();

    let mut rows = Vec::new();
    for &model in &args.models {
        let cfg = args.pipeline.config(model, provider.clone());
        let stage = format!("eval {model}");
        let interp = Interpolator::new(rendered.frame_refs(), &cfg).stage(&stage)?;
        let mut scores = Vec::new();
        for (t, truth) in &rendered.targets {
            let pred = interp.frame_at(*t).stage(&stage)?;
            let q = compute_quality(truth, &pred).stage(&stage)?;
            let shift = asfp_for_frames(&rendered.frames[1], truth, &pred, &AsfpParams::default())
                .stage(&format!("{stage} asfp t={t}"))?;
            scores.push((q, shift));
        }
        let n = scores.len() as f64;
        let mean = |f: &dyn Fn(&(crate::metrics::Quality, f64)) -> f64| {
            scores.iter().map(f).sum::<f64>() / n
        };
        rows.push(EvalRow {
            model: model.to_string(),
            flows: args.flows.clone(),
            psnr: mean(&|s| s.0.psnr),
            ssim: mean(&|s| s.0.ssim),
            ie: mean(&|s| s.0.ie),
            psnr_center: scores[center].0.psnr,
            ie_center: scores[center].0.ie,
            asfp_center: scores[center].1,
            asfp_mean: mean(&|s| s.1),
        });
    }

    if args.json {
        for row in &rows {
            writeln!(out, "{}", serde_json::to_string(row).expect("serializable")).ok();
        }
    } else {
        writeln!(
            out,
            "{:<10} {:<9} {:>8} {:>7} {:>7} {:>10} {:>9} {:>11} {:>9}",
            "model", "flows", "psnr", "ssim", "ie", "psnr@0.5", "ie@0.5", "asfp@0.5", "asfp"
        )
        .ok();
        for r in &rows {
            writeln!(
                out,
                "{:<10} {:<9} {:>8.3} {:>7.4} {:>7.3} {:>10.3} {:>9.3} {:>11.4} {:>9.4}",
                r.model,
                r.flows,
                r.psnr,
                r.ssim,
                r.ie,
                r.psnr_center,
                r.ie_center,
                r.asfp_center,
                r.asfp_mean
            )
            .ok();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_and_spacing() {
        assert_eq!(time_label(0.125), "0.125");
        assert_eq!(time_label(0.5), "0.5");
        assert_eq!(evenly_spaced(7)[0], 0.125);
        assert_eq!(evenly_spaced(1), vec![0.5]);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["quadinterp", "--bogus"]), 2);
        assert_eq!(run(["quadinterp", "interpolate", "--t", "1.5"]), 2);
        assert_eq!(
            run([
                "quadinterp",
                "eval",
                "--scene",
                "s.txt",
                "--models",
                "cubic"
            ]),
            2
        );
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(["quadinterp", "--help"]), 0);
    }

    #[test]
    fn missing_file_exits_one() {
        assert_eq!(
            run([
                "quadinterp",
                "flow",
                "reverse",
                "--in",
                "/nonexistent/x.flo",
                "--out",
                "/tmp/y.flo"
            ]),
            1
        );
    }
}
