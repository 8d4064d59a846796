use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tripflow::eval::{
    aee, fwl, midpoint, scale_flow_to_displacement, velocity_histogram, GroundTruthFlow,
    DEFAULT_OUTLIER_PX,
};
use tripflow::io::{read_events, read_flo, write_events, write_flo, write_flow_records, write_png};
use tripflow::postprocess::dense_flow_span;
use tripflow::synthetic::{generate, throughput_stream, Pattern, SceneSpec};
use tripflow::throughput::bench_throughput;
use tripflow::{
    process_batch, process_batch_traced, EventBatch, MatcherParams, Normalized, Resolution,
};

use crate::config::{matcher_params, ConfigFile, MatcherArgs, SecondsList, TRef};

/// Sensor size for inputs without a `# resolution` header.
#[derive(Args, Debug, Clone, Default)]
pub struct SensorArgs {
    #[arg(long, requires = "height")]
    width: Option<u32>,
    #[arg(long, requires = "width")]
    height: Option<u32>,
}

impl SensorArgs {
    fn resolution(&self) -> Option<Resolution> {
        Some(Resolution::new(self.width?, self.height?))
    }
}

/// Listing of everything a run wrote, plus the resolved configuration.
#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    command: &'a str,
    version: &'a str,
    config: C,
    artifacts: Vec<String>,
}

struct OutDir {
    root: PathBuf,
    artifacts: Vec<String>,
}

impl OutDir {
    fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
        Ok(Self {
            root: root.to_path_buf(),
            artifacts: Vec::new(),
        })
    }

    /// Path for a new artifact, recorded for the manifest.
    fn file(&mut self, name: &str) -> PathBuf {
        self.artifacts.push(name.to_owned());
        self.root.join(name)
    }

    fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let path = self.file(name);
        fs::write(&path, serde_json::to_string_pretty(value)? + "\n")
            .with_context(|| format!("writing {}", path.display()))
    }

    fn finish(self, command: &str, config: impl Serialize) -> Result<()> {
        let manifest = Manifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            config,
            artifacts: self.artifacts,
        };
        let path = self.root.join("manifest.json");
        fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
            .with_context(|| format!("writing {}", path.display()))
    }
}

fn require_exists(paths: &[&Path]) -> Result<()> {
    for p in paths {
        if !p.exists() {
            bail!("input {} does not exist", p.display());
        }
    }
    Ok(())
}

fn load_events(path: &Path, sensor: &SensorArgs) -> Result<Normalized> {
    read_events(path, sensor.resolution()).with_context(|| format!("reading {}", path.display()))
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Event text file (`t x y p`, t in seconds, p in {0, 1}).
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
    #[command(flatten)]
    matcher: MatcherArgs,
    #[command(flatten)]
    sensor: SensorArgs,
    /// Number of time bins of the voxelized output [default: 1].
    #[arg(long)]
    bins: Option<usize>,
    /// Start of the voxelized span in microseconds [default: first event].
    #[arg(long = "t0-us")]
    t0_us: Option<u64>,
    /// End of the voxelized span in microseconds [default: last event].
    #[arg(long = "t1-us")]
    t1_us: Option<u64>,
    /// Comma-separated intervals in seconds; each bin is also written as
    /// displacement over every interval.
    #[arg(long = "eval-dt")]
    eval_dt: Option<SecondsList>,
    /// Reference time of the flow warp loss: midpoint, start, or microseconds
    /// [default: midpoint].
    #[arg(long = "t-ref")]
    t_ref: Option<TRef>,
    /// Also write a color-wheel PNG per bin.
    #[arg(long)]
    render: bool,
}

#[derive(Serialize)]
struct EstimateConfig {
    input: PathBuf,
    out_dir: PathBuf,
    params: MatcherParams,
    bins: usize,
    span_us: [u64; 2],
    eval_dt: Vec<f64>,
    t_ref: TRef,
    render: bool,
}

pub fn estimate(file: &ConfigFile, a: &EstimateArgs) -> Result<()> {
    require_exists(&[&a.input])?;
    let params = matcher_params(file, &a.matcher)?;
    let bins = file.pick("bins", a.bins, 1)?;
    let eval_dt = file.pick("eval_dt", a.eval_dt.clone(), SecondsList::default())?;
    let t_ref = file.pick("t_ref", a.t_ref, TRef::Midpoint)?;
    let render = file.pick("render", a.render.then_some(true), false)?;

    let Normalized { batch, dropped } = load_events(&a.input, &a.sensor)?;
    let (first, last) = batch.time_span().unwrap_or((0, 0));
    let span = [a.t0_us.unwrap_or(first), a.t1_us.unwrap_or(last)];
    if span[0] > span[1] {
        bail!("empty span: t0 {} > t1 {}", span[0], span[1]);
    }
    let mut out = OutDir::create(&a.out_dir)?;

    let flows = process_batch(&batch, &params)?;
    write_flow_records(&out.file("flow.txt"), &batch, &flows)?;

    let dense = dense_flow_span(&batch, &flows, bins, span[0], span[1])?;
    for (b, field) in dense.iter().enumerate() {
        write_flo(&out.file(&format!("flow_bin{b:03}.flo")), field)?;
        if render {
            write_png(&out.file(&format!("flow_bin{b:03}.png")), field)?;
        }
        for (i, &dt) in eval_dt.0.iter().enumerate() {
            let disp = scale_flow_to_displacement(field, dt)?;
            write_flo(&out.file(&format!("disp_dt{i}_bin{b:03}.flo")), &disp)?;
        }
    }

    let t_ref_us = match t_ref {
        TRef::Midpoint => midpoint(&batch),
        TRef::Start => first,
        TRef::Micros(t) => t,
    };
    let defined = flows.iter().filter(|f| f.flow.is_defined()).count();
    let triplets: usize = flows.iter().map(|f| f.triplets).sum();
    let fwl = fwl(&batch, &flows, t_ref_us).ok();
    let summary = json!({
        "events": batch.len(),
        "dropped": dropped,
        "defined": defined,
        "triplets": triplets,
        "t_ref_us": t_ref_us,
        "fwl": fwl,
    });
    out.write_json("summary.json", &summary)?;
    println!(
        "events={}\ndropped={dropped}\ndefined={defined}\ntriplets={triplets}",
        batch.len()
    );
    if let Some(f) = fwl {
        println!("fwl={f}");
    }

    out.finish(
        "estimate",
        EstimateConfig {
            input: a.input.clone(),
            out_dir: a.out_dir.clone(),
            params,
            bins,
            span_us: span,
            eval_dt: eval_dt.0,
            t_ref,
            render,
        },
    )
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Predicted flow (`.flo`).
    #[arg(long)]
    pred: PathBuf,
    /// Ground-truth displacement (`.flo`).
    #[arg(long)]
    gt: PathBuf,
    /// Treat `--pred` as velocity in px/s and scale it by this many seconds.
    /// Without it `--pred` is taken as displacement already.
    #[arg(long)]
    dt: Option<f64>,
    /// Outlier threshold in pixels [default: 3].
    #[arg(long)]
    threshold: Option<f64>,
    /// Also write metrics.json and a manifest here.
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
}

pub fn evaluate(file: &ConfigFile, a: &EvaluateArgs) -> Result<()> {
    require_exists(&[&a.pred, &a.gt])?;
    let threshold = file.pick("threshold", a.threshold, DEFAULT_OUTLIER_PX)?;
    let pred = read_flo(&a.pred).with_context(|| format!("reading {}", a.pred.display()))?;
    let gt = read_flo(&a.gt).with_context(|| format!("reading {}", a.gt.display()))?;
    let pred = match a.dt {
        Some(dt) => scale_flow_to_displacement(&pred, dt)?,
        None => pred,
    };
    let report = aee(&pred, &GroundTruthFlow::new(gt, 0, 0), threshold)?;
    print!("{}", report.to_key_values());
    if let Some(dir) = &a.out_dir {
        let mut out = OutDir::create(dir)?;
        out.write_json("metrics.json", &report)?;
        out.finish(
            "evaluate",
            json!({ "pred": a.pred, "gt": a.gt, "dt": a.dt, "threshold": threshold }),
        )?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PatternArg {
    Bar,
    VerticalBar,
    HorizontalBar,
    DiagonalEdge,
    Dots,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "bar")]
    pattern: PatternArg,
    /// Horizontal velocity in px/s.
    #[arg(long, allow_negative_numbers = true, default_value_t = 200.0)]
    vx: f64,
    /// Vertical velocity in px/s.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    vy: f64,
    #[arg(long = "duration-ms", default_value_t = 100.0)]
    duration_ms: f64,
    #[arg(long, default_value_t = 64)]
    width: u32,
    #[arg(long, default_value_t = 48)]
    height: u32,
    /// Width of vertical/horizontal bars, side of dots, in pixels.
    #[arg(long, default_value_t = 4.0)]
    size: f64,
    /// Number of dots.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Timestamp jitter standard deviation in microseconds.
    #[arg(long = "jitter-us", default_value_t = 0.0)]
    jitter_us: f64,
    /// Background noise in events per second.
    #[arg(long = "noise-rate", default_value_t = 0.0)]
    noise_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    let pattern = match a.pattern {
        PatternArg::Bar => Pattern::bar(),
        PatternArg::VerticalBar => Pattern::VerticalBar { width: a.size },
        PatternArg::HorizontalBar => Pattern::HorizontalBar { height: a.size },
        PatternArg::DiagonalEdge => Pattern::DiagonalEdge,
        PatternArg::Dots => Pattern::RandomDots {
            count: a.count,
            size: a.size,
        },
    };
    if !(a.duration_ms.is_finite() && a.duration_ms > 0.0) {
        bail!("duration must be positive");
    }
    let spec = SceneSpec {
        jitter_us: a.jitter_us,
        noise_rate: a.noise_rate,
        ..SceneSpec::new(
            pattern,
            [a.vx, a.vy],
            (a.duration_ms * 1e3).round() as u64,
            Resolution::new(a.width, a.height),
        )
    };
    let (batch, gt) = generate(&spec, a.seed)?;

    let mut out = OutDir::create(&a.out_dir)?;
    write_events(&out.file("events.txt"), &batch)?;
    write_flo(&out.file("gt.flo"), &gt.field)?;
    let sidecar = json!({
        "scene": spec,
        "seed": a.seed,
        "events": batch.len(),
        "gt_interval_us": [gt.t0_us, gt.t1_us],
        "gt_interval_s": gt.interval_secs(),
        "gt_valid": gt.field.valid_count(),
    });
    out.write_json("scene.json", &sidecar)?;
    println!(
        "events={}\ngt_valid={}",
        batch.len(),
        gt.field.valid_count()
    );
    out.finish(
        "simulate",
        json!({ "scene": spec, "seed": a.seed, "out_dir": a.out_dir }),
    )
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Event file to time; a synthetic stream is generated when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Length of the synthetic stream.
    #[arg(long, default_value_t = 300_000)]
    events: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[command(flatten)]
    matcher: MatcherArgs,
    #[command(flatten)]
    sensor: SensorArgs,
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
}

pub fn bench(file: &ConfigFile, a: &BenchArgs) -> Result<()> {
    let params = matcher_params(file, &a.matcher)?;
    let batch: EventBatch = match &a.input {
        Some(p) => {
            require_exists(&[p])?;
            load_events(p, &a.sensor)?.batch
        }
        None => throughput_stream(
            a.events,
            a.sensor.resolution().unwrap_or(Resolution::new(346, 260)),
            a.seed,
        )?,
    };
    let report = bench_throughput(&batch, &params)?;
    print!("{}", report.to_key_values());
    if let Some(dir) = &a.out_dir {
        let mut out = OutDir::create(dir)?;
        out.write_json("bench.json", &report)?;
        out.finish(
            "bench",
            json!({
                "input": a.input,
                "synthetic_events": a.input.is_none().then_some(a.events),
                "seed": a.seed,
                "params": params,
            }),
        )?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct VizArgs {
    /// Flow field (`.flo`).
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
    /// Output file name [default: input stem with `.png`].
    #[arg(long)]
    name: Option<String>,
}

pub fn viz(a: &VizArgs) -> Result<()> {
    require_exists(&[&a.input])?;
    let field = read_flo(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let name = match &a.name {
        Some(n) => n.clone(),
        None => format!(
            "{}.png",
            a.input
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("flow")
        ),
    };
    let mut out = OutDir::create(&a.out_dir)?;
    write_png(&out.file(&name), &field)?;
    out.finish("viz", json!({ "input": a.input, "out_dir": a.out_dir }))
}

#[derive(Args, Debug)]
pub struct HistogramArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
    /// Speed bin width in px/s.
    #[arg(long = "bin-width", default_value_t = 10.0)]
    bin_width: f64,
    #[command(flatten)]
    matcher: MatcherArgs,
    #[command(flatten)]
    sensor: SensorArgs,
}

pub fn histogram(file: &ConfigFile, a: &HistogramArgs) -> Result<()> {
    require_exists(&[&a.input])?;
    if !(a.bin_width.is_finite() && a.bin_width > 0.0) {
        bail!("bin width must be positive");
    }
    let params = matcher_params(file, &a.matcher)?;
    let batch = load_events(&a.input, &a.sensor)?.batch;
    let out_t = process_batch_traced(&batch, &params)?;
    let h = velocity_histogram(&out_t.triplets, a.bin_width);
    let mut out = OutDir::create(&a.out_dir)?;
    let path = out.file("histogram.csv");
    fs::write(&path, h.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    println!("triplets={}", h.total());
    for (dir, n) in &h.directions {
        println!("direction_{}={n}", dir.label());
    }
    out.finish(
        "histogram",
        json!({ "input": a.input, "bin_width": a.bin_width, "params": params }),
    )
}
