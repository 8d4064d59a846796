//! Acceptance suite. Every test prints one `PASS`/`FAIL` line for its
//! criterion (plus indented detail lines) and then asserts the outcome.
//!
//! Run with `cargo test -p tripflow --test acceptance -- --nocapture
//! --test-threads=1` to see the report in order.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tripflow::eval::{
    evaluate_velocity, fwl, midpoint, velocity_histogram, DirectionBin, DEFAULT_OUTLIER_PX,
};
use tripflow::postprocess::dense_flow_span;
use tripflow::synthetic::{generate, perturb, throughput_stream, Pattern, SceneSpec};
use tripflow::throughput::bench_throughput;
use tripflow::{
    brute_force_flow, process_batch, process_batch_sequential, process_batch_traced, Event,
    EventBatch, Flow, FlowRecord, MatcherParams, Polarity, Resolution, TimeUnit, Weighting,
};

fn verdict(criterion: &str, pass: bool, summary: &str) {
    println!(
        "criterion {criterion}: {} — {summary}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn flows_close(a: &[FlowRecord], b: &[FlowRecord], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.k == y.k
                && x.triplets == y.triplets
                && match (x.flow, y.flow) {
                    (Flow::Undefined, Flow::Undefined) => true,
                    (Flow::Defined { vx, vy }, Flow::Defined { vx: ux, vy: uy }) => {
                        rel_close(vx, ux, tol) && rel_close(vy, uy, tol)
                    }
                    _ => false,
                }
        })
}

/// Moving points with per-track step times and integer pixel steps, plus noise.
fn random_batch(rng: &mut ChaCha8Rng, n: usize, res: Resolution, tau_us: u64) -> EventBatch {
    let mut events = Vec::with_capacity(n);
    let tracks = rng.random_range(1..8);
    let per_track = n / (2 * tracks);
    for _ in 0..tracks {
        let mut x = rng.random_range(0..res.width) as i64;
        let mut y = rng.random_range(0..res.height) as i64;
        let step = (rng.random_range(-1..=1i64), rng.random_range(-1..=1i64));
        let spacing = rng.random_range(tau_us / 2..=tau_us * 3 + 1);
        let p = if rng.random_bool(0.5) {
            Polarity::Positive
        } else {
            Polarity::Negative
        };
        let mut t = rng.random_range(0..50_000u64);
        for _ in 0..per_track {
            if !res.contains(x, y) {
                x = x.rem_euclid(res.width as i64);
                y = y.rem_euclid(res.height as i64);
            }
            events.push(Event::new(t, x as u16, y as u16, p));
            x += step.0;
            y += step.1;
            t += spacing + rng.random_range(0..=spacing / 4);
        }
    }
    let t_max = events.iter().map(|e| e.t).max().unwrap_or(100_000).max(1);
    while events.len() < n {
        let p = if rng.random_bool(0.5) {
            Polarity::Positive
        } else {
            Polarity::Negative
        };
        events.push(Event::new(
            rng.random_range(0..=t_max),
            rng.random_range(0..res.width) as u16,
            rng.random_range(0..res.height) as u16,
            p,
        ));
    }
    events.sort_by_key(|e| e.t);
    EventBatch::new(events, res).unwrap()
}

fn random_params(rng: &mut ChaCha8Rng) -> MatcherParams {
    MatcherParams {
        dx: [1.0, std::f64::consts::SQRT_2, 2.0, 2.5][rng.random_range(0..4)],
        dt_us: rng.random_range(5_000..=100_000),
        tau_us: rng.random_range(500..=5_000),
        retention: [1, 10, 20_000][rng.random_range(0..3)],
        exclude_center: rng.random_bool(0.3),
        ..Default::default()
    }
}

#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0e1);
    let mut failures = Vec::new();
    let mut triplets = 0usize;
    const CASES: usize = 120;
    for case in 0..CASES {
        let res = Resolution::new(rng.random_range(4..=64), rng.random_range(4..=64));
        let n = rng.random_range(50..=2000);
        let params = random_params(&mut rng);
        let batch = random_batch(&mut rng, n, res, params.tau_us);
        let ours = process_batch_traced(&batch, &params).unwrap();
        let oracle = brute_force_flow(&batch, &params).unwrap();
        triplets += ours.triplets.len();
        let same_triplets = ours.triplets.len() == oracle.triplets.len()
            && ours.triplets.iter().zip(&oracle.triplets).all(|(a, b)| {
                (a.k, a.i, a.j, a.displacement) == (b.k, b.i, b.j, b.displacement)
                    && rel_close(a.v[0], b.v[0], 1e-9)
                    && rel_close(a.v[1], b.v[1], 1e-9)
                    && rel_close(a.w, b.w, 1e-9)
            });
        let plain = process_batch(&batch, &params).unwrap();
        if !(same_triplets && flows_close(&ours.flows, &oracle.flows, 1e-9) && plain == ours.flows)
        {
            failures.push(format!("case {case}: n={n} {res:?} {params:?}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && triplets > 0 && secs < 120.0;
    verdict(
        "1 (oracle equivalence)",
        pass,
        &format!(
            "{CASES} batches, {triplets} triplets, {} mismatches, {secs:.1} s",
            failures.len()
        ),
    );
    for f in failures.iter().take(5) {
        println!("    {f}");
    }
    assert!(pass);
}

struct ExactnessCase {
    label: String,
    velocity: [f64; 2],
    in_range: bool,
    max_flow_err: f64,
    defined: usize,
    aee: Result<f64, String>,
}

fn exactness_case(label: String, velocity: [f64; 2]) -> ExactnessCase {
    let params = MatcherParams::default();
    let res = Resolution::new(48, 48);
    // long enough to cross ~16 pixels along the dominant axis
    let per_axis = velocity[0].abs().max(velocity[1].abs());
    let duration_us = (16.0 / per_axis * 1e6).round() as u64;
    let spec = SceneSpec::new(Pattern::bar(), velocity, duration_us, res);
    let (batch, gt) = generate(&spec, 1).unwrap();
    let flows = process_batch(&batch, &params).unwrap();
    let mut max_flow_err = 0.0f64;
    let mut defined = 0;
    for f in &flows {
        if let Some([vx, vy]) = f.flow.vector() {
            defined += 1;
            max_flow_err = max_flow_err
                .max((vx - velocity[0]).abs())
                .max((vy - velocity[1]).abs());
        }
    }
    let dense = dense_flow_span(&batch, &flows, 1, 0, duration_us).unwrap();
    let aee = evaluate_velocity(&dense[0], &gt, DEFAULT_OUTLIER_PX)
        .map(|r| r.aee)
        .map_err(|e| e.to_string());
    ExactnessCase {
        label,
        velocity,
        in_range: spec.within_range(&params),
        max_flow_err,
        defined,
        aee,
    }
}

fn exactness_ok(c: &ExactnessCase) -> bool {
    c.max_flow_err <= 1e-6 && matches!(c.aee, Ok(a) if a <= 1e-6)
}

fn print_case(c: &ExactnessCase) {
    let aee = match &c.aee {
        Ok(a) => format!("{a:.3e} px"),
        Err(e) => format!("error: {e}"),
    };
    println!(
        "    {} {:<28} v=({:8.3},{:8.3}) in_range={:<5} defined={:<4} max|f-v|={:.3e} aee={aee}",
        if exactness_ok(c) { "ok  " } else { "MISS" },
        c.label,
        c.velocity[0],
        c.velocity[1],
        c.in_range,
        c.defined,
        c.max_flow_err,
    );
}

const DIRECTIONS: [(&str, [f64; 2]); 8] = [
    ("E", [1.0, 0.0]),
    ("NE", [1.0, -1.0]),
    ("N", [0.0, -1.0]),
    ("NW", [-1.0, -1.0]),
    ("W", [-1.0, 0.0]),
    ("SW", [-1.0, 1.0]),
    ("S", [0.0, 1.0]),
    ("SE", [1.0, 1.0]),
];

#[test]
fn criterion_2_constant_velocity_exactness() {
    let start = Instant::now();
    let mut cases = Vec::new();
    for speed in [50.0, 200.0, 400.0] {
        for (name, d) in DIRECTIONS {
            let norm = d[0].hypot(d[1]);
            cases.push(exactness_case(
                format!("{name} |v|={speed}"),
                [speed * d[0] / norm, speed * d[1] / norm],
            ));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = cases.iter().filter(|c| exactness_ok(c)).count();
    let pass = ok == cases.len() && secs < 30.0;
    verdict(
        "2 (constant-velocity exactness)",
        pass,
        &format!(
            "{ok}/{} scenes exact (flow and AEE within 1e-6), {secs:.1} s",
            cases.len()
        ),
    );
    for c in &cases {
        print_case(c);
    }

    // Informational: diagonals with integer per-axis speed, whose crossing
    // times are exact in microseconds.
    println!("    supplementary (not scored): integer per-axis diagonals");
    for s in [50.0, 200.0] {
        for (name, d) in DIRECTIONS
            .iter()
            .filter(|(_, d)| d[0] != 0.0 && d[1] != 0.0)
        {
            print_case(&exactness_case(
                format!("{name} per-axis {s}"),
                [s * d[0], s * d[1]],
            ));
        }
    }
    assert!(pass);
}

fn motion_scenes() -> Vec<(String, SceneSpec)> {
    let res = Resolution::new(48, 48);
    let mut out = Vec::new();
    for speed in [50.0, 200.0, 400.0] {
        for (name, d) in DIRECTIONS {
            let norm = d[0].hypot(d[1]);
            let v = [speed * d[0] / norm, speed * d[1] / norm];
            let dur = (16.0 / v[0].abs().max(v[1].abs()) * 1e6).round() as u64;
            out.push((
                format!("bar {name} |v|={speed}"),
                SceneSpec::new(Pattern::bar(), v, dur, res),
            ));
        }
    }
    out.push((
        "vertical bar (150,0)".into(),
        SceneSpec::new(
            Pattern::VerticalBar { width: 4.0 },
            [150.0, 0.0],
            100_000,
            res,
        ),
    ));
    out.push((
        "horizontal bar (0,-120)".into(),
        SceneSpec::new(
            Pattern::HorizontalBar { height: 4.0 },
            [0.0, -120.0],
            100_000,
            res,
        ),
    ));
    out.push((
        "diagonal edge (100,100)".into(),
        SceneSpec::new(Pattern::DiagonalEdge, [100.0, 100.0], 100_000, res),
    ));
    out.push((
        "dots (200,0)".into(),
        SceneSpec::new(
            Pattern::RandomDots {
                count: 12,
                size: 2.0,
            },
            [200.0, 0.0],
            100_000,
            res,
        ),
    ));
    out
}

#[test]
fn criterion_3_fwl_sanity() {
    let params = MatcherParams::default();
    let mut zero_ok = true;
    let mut misses = Vec::new();
    let scenes = motion_scenes();
    for (label, spec) in &scenes {
        let (batch, _) = generate(spec, 5).unwrap();
        let t_ref = midpoint(&batch);
        let none = vec![
            FlowRecord {
                k: 0,
                flow: Flow::Undefined,
                triplets: 0
            };
            batch.len()
        ];
        let none: Vec<_> = none
            .into_iter()
            .enumerate()
            .map(|(k, r)| FlowRecord { k, ..r })
            .collect();
        zero_ok &= fwl(&batch, &none, t_ref).unwrap() == 1.0;
        let flows = process_batch(&batch, &params).unwrap();
        let zero: Vec<_> = flows
            .iter()
            .map(|r| FlowRecord {
                flow: Flow::Defined { vx: 0.0, vy: 0.0 },
                ..*r
            })
            .collect();
        zero_ok &= fwl(&batch, &zero, t_ref).unwrap() == 1.0;
        let f = fwl(&batch, &flows, t_ref).unwrap();
        if f.partial_cmp(&1.0) != Some(std::cmp::Ordering::Greater) {
            misses.push(format!("{label}: fwl={f}"));
        }
    }
    // also on unstructured batches
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..10 {
        let batch = random_batch(&mut rng, 500, Resolution::new(32, 24), 3_000);
        let zero: Vec<_> = (0..batch.len())
            .map(|k| FlowRecord {
                k,
                flow: Flow::Defined { vx: 0.0, vy: 0.0 },
                triplets: 0,
            })
            .collect();
        zero_ok &= fwl(&batch, &zero, midpoint(&batch)).unwrap() == 1.0;
    }
    let pass = zero_ok && misses.is_empty();
    verdict(
        "3 (FWL sanity)",
        pass,
        &format!(
            "fwl(zero)=1 exactly: {zero_ok}; fwl(estimate)>1 on {}/{} motion scenes",
            scenes.len() - misses.len(),
            scenes.len()
        ),
    );
    for m in &misses {
        println!("    {m}");
    }
    println!(
        "    full-scale dataset values: see criterion 3/4 dataset test (needs TRIPFLOW_MVSEC_DIR)"
    );
    assert!(pass);
}

#[test]
fn criterion_5_throughput() {
    let start = Instant::now();
    let batch = throughput_stream(300_000, Resolution::new(346, 260), 11).unwrap();
    let report = bench_throughput(&batch, &MatcherParams::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let pass = report.events_per_sec >= 10_000.0 && secs < 60.0;
    verdict(
        "5 (throughput)",
        pass,
        &format!(
            "{} events, {:.0} events/s, mean {:.2} µs/event, p99 {:.2} µs/event, {secs:.1} s total",
            report.events, report.events_per_sec, report.mean_us, report.p99_us
        ),
    );
    assert!(pass);
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

#[test]
fn criterion_6_weighting_benefit() {
    let start = Instant::now();
    let res = Resolution::new(64, 48);
    let duration_us = 150_000;
    let spec = SceneSpec::new(
        Pattern::RandomDots {
            count: 16,
            size: 2.0,
        },
        [200.0, 0.0],
        duration_us,
        res,
    );
    let gaussian = MatcherParams::default();
    let uniform = MatcherParams {
        weighting: Weighting::Uniform,
        ..gaussian
    };
    let (mut ag, mut au) = (Vec::new(), Vec::new());
    for seed in 0..20u64 {
        let (clean, gt) = generate(&spec, seed).unwrap();
        let batch = perturb(&clean, 500.0, 0.0, 1_000 + seed);
        for (params, out) in [(&gaussian, &mut ag), (&uniform, &mut au)] {
            let flows = process_batch(&batch, params).unwrap();
            let dense = dense_flow_span(&batch, &flows, 1, 0, duration_us).unwrap();
            out.push(
                evaluate_velocity(&dense[0], &gt, DEFAULT_OUTLIER_PX)
                    .unwrap()
                    .aee,
            );
        }
    }
    let (mg, mu) = (median(ag.clone()), median(au.clone()));
    let secs = start.elapsed().as_secs_f64();
    let pass = mg <= mu && secs < 120.0;
    verdict(
        "6 (weighting benefit)",
        pass,
        &format!("median AEE gaussian {mg:.4} px <= uniform {mu:.4} px over 20 seeds, {secs:.1} s"),
    );
    let wins = ag.iter().zip(&au).filter(|(g, u)| g <= u).count();
    println!("    gaussian <= uniform on {wins}/20 seeds");
    assert!(pass);
}

#[test]
fn criterion_7_quantization_structure() {
    let params = MatcherParams::default();
    let res = Resolution::new(64, 64);
    let mut off_axis = 0u64;
    let mut total = 0u64;
    let mut check = |batch: &EventBatch| {
        let out = process_batch_traced(batch, &params).unwrap();
        let h = velocity_histogram(&out.triplets, 25.0);
        off_axis += h.count(DirectionBin::OffAxis);
        total += h.total();
        h
    };
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..20 {
        let n = rng.random_range(200..3000);
        check(&random_batch(&mut rng, n, res, params.tau_us));
    }
    let mut mixed = EventBatch::empty(res);
    for (i, v) in [
        [50.0, 0.0],
        [0.0, 100.0],
        [-200.0, 0.0],
        [150.0, 150.0],
        [0.0, -300.0],
    ]
    .into_iter()
    .enumerate()
    {
        let dur = 60_000;
        let spec = SceneSpec {
            noise_rate: 1_000.0,
            ..SceneSpec::new(
                Pattern::RandomDots {
                    count: 6,
                    size: 2.0,
                },
                v,
                dur,
                res,
            )
        };
        let (b, _) = generate(&spec, i as u64).unwrap();
        mixed = mixed.merge(&b).unwrap();
    }
    let h = check(&mixed);
    let directions: Vec<_> = h.directions.keys().map(|d| d.label()).collect();
    let occupied = h.occupied_magnitude_bins();
    let pass = off_axis == 0 && total > 0 && occupied >= 3;
    verdict(
        "7 (quantization structure)",
        pass,
        &format!(
            "{total} triplets, {off_axis} off the 8 directions + zero; {occupied} magnitude bins on mixed input"
        ),
    );
    println!("    mixed-input direction bins: {}", directions.join(" "));
    assert!(pass);
}

fn shift(batch: &EventBatch, dt: u64, dx: u16, dy: u16, res: Resolution) -> EventBatch {
    let ev = batch
        .events()
        .iter()
        .map(|e| Event::new(e.t + dt, e.x + dx, e.y + dy, e.p))
        .collect();
    EventBatch::new(ev, res).unwrap()
}

#[test]
fn criterion_8_invariances() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let res = Resolution::new(40, 30);
    let mut checks: Vec<(&str, bool)> = Vec::new();
    let mut units_ok = true;
    let mut time_ok = true;
    let mut pixel_ok = true;
    let mut runs_ok = true;
    let mut threads_ok = true;
    for _ in 0..12 {
        let params = MatcherParams {
            retention: [1, 10, 20_000][rng.random_range(0..3)],
            ..Default::default()
        };
        let batch = random_batch(&mut rng, 1500, res, params.tau_us);
        let base = process_batch(&batch, &params).unwrap();

        for unit in [TimeUnit::Millis, TimeUnit::Seconds] {
            let other = process_batch(
                &batch,
                &MatcherParams {
                    weight_unit: unit,
                    ..params
                },
            )
            .unwrap();
            units_ok &= flows_close(&base, &other, 1e-9);
        }
        let ms = MatcherParams::from_millis(params.dx, 100.0, 3.0, params.retention).unwrap();
        units_ok &= process_batch(&batch, &ms).unwrap() == base;

        time_ok &= process_batch(&shift(&batch, 987_654_321, 0, 0, res), &params).unwrap() == base;
        let big = Resolution::new(res.width + 9, res.height + 5);
        pixel_ok &= process_batch(&shift(&batch, 0, 9, 5, big), &params).unwrap() == base;

        runs_ok &= process_batch(&batch, &params).unwrap() == base;
        runs_ok &= process_batch_sequential(&batch, &params).unwrap() == base;
        for threads in [1, 2, 4, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            threads_ok &= pool.install(|| process_batch(&batch, &params).unwrap()) == base;
            threads_ok &= pool.install(|| brute_force_flow(&batch, &params).unwrap().flows.len())
                == base.len();
        }
    }
    checks.push(("time-unit", units_ok));
    checks.push(("timestamp translation", time_ok));
    checks.push(("pixel translation", pixel_ok));
    checks.push(("run-to-run determinism", runs_ok));
    checks.push(("parallelism degree", threads_ok));
    let pass = checks.iter().all(|c| c.1);
    let summary: Vec<_> = checks
        .iter()
        .map(|(n, ok)| format!("{n}={}", if *ok { "ok" } else { "BROKEN" }))
        .collect();
    verdict("8 (invariance suite)", pass, &summary.join(", "));
    assert!(pass);
}

// Dataset-dependent checks. Expected layout under $TRIPFLOW_MVSEC_DIR:
//   <sequence>/events.txt               t[s] x y p, with `# resolution W H`
//   <sequence>/gt_dt1/<t0_us>_<t1_us>.flo
//   <sequence>/gt_dt4/<t0_us>_<t1_us>.flo
const MVSEC: [(&str, f64, f64, f64); 3] = [
    ("outdoor_day1", 0.94, 3.60, 1.154),
    ("indoor_flying1", 1.05, 4.06, 1.157),
    ("indoor_flying2", 1.68, 6.39, 1.248),
];

fn gt_frames(dir: &Path) -> Vec<(u64, u64, PathBuf)> {
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .into_iter()
        .flatten()
        .flatten()
        .filter_map(|e| {
            let p = e.path();
            let stem = p.file_stem()?.to_str()?.to_owned();
            let (a, b) = stem.split_once('_')?;
            Some((a.parse().ok()?, b.parse().ok()?, p))
        })
        .collect();
    out.sort();
    out
}

/// Mean AEE and mean FWL over the ground-truth frames in `dir`.
fn score_sequence(events: &EventBatch, dir: &Path, params: &MatcherParams) -> (f64, f64) {
    let ev = events.events();
    let (mut aee, mut fwls, mut n) = (0.0, 0.0, 0usize);
    for (t0, t1, path) in gt_frames(dir) {
        // warm the matcher with the preceding dt so early events have history
        let from = ev.partition_point(|e| e.t < t0.saturating_sub(params.dt_us + params.tau_us));
        let to = ev.partition_point(|e| e.t <= t1);
        let window = EventBatch::new(ev[from..to].to_vec(), events.resolution()).unwrap();
        let flows = process_batch(&window, params).unwrap();
        let gt =
            tripflow::eval::GroundTruthFlow::new(tripflow::io::read_flo(&path).unwrap(), t0, t1);
        let dense = dense_flow_span(&window, &flows, 1, t0, t1).unwrap();
        let Ok(r) = evaluate_velocity(&dense[0], &gt, DEFAULT_OUTLIER_PX) else {
            continue;
        };
        let first = window.events().partition_point(|e| e.t < t0);
        let slice =
            EventBatch::new(window.events()[first..].to_vec(), events.resolution()).unwrap();
        if let Ok(f) = fwl(&slice, &flows[first..], (t0 + t1) / 2) {
            fwls += f;
        }
        aee += r.aee;
        n += 1;
    }
    (aee / n.max(1) as f64, fwls / n.max(1) as f64)
}

#[test]
fn criterion_3_4_dataset() {
    let Some(root) = std::env::var_os("TRIPFLOW_MVSEC_DIR") else {
        println!("criterion 3-full/4 (dataset accuracy): SKIP — TRIPFLOW_MVSEC_DIR not set");
        return;
    };
    let root = PathBuf::from(root);
    let params = MatcherParams::default();
    let mut pass = true;
    for (seq, want1, want4, want_fwl) in MVSEC {
        let dir = root.join(seq);
        let Ok(events) = tripflow::io::read_events(&dir.join("events.txt"), None) else {
            println!("    {seq}: missing, skipped");
            continue;
        };
        let (a1, f1) = score_sequence(&events.batch, &dir.join("gt_dt1"), &params);
        let (a4, _) = score_sequence(&events.batch, &dir.join("gt_dt4"), &params);
        let ok1 = (a1 - want1).abs() <= 0.15 * want1;
        let ok4 = (a4 - want4).abs() <= 0.15 * want4;
        let okf = (f1 - want_fwl).abs() <= 0.05;
        pass &= ok1 && ok4 && okf;
        println!(
            "    {seq}: dt1 aee {a1:.3} (target {want1}, {ok1}), dt4 aee {a4:.3} (target {want4}, {ok4}), fwl {f1:.3} (target {want_fwl}, {okf})"
        );
    }
    verdict(
        "3-full/4 (dataset accuracy)",
        pass,
        "see per-sequence lines",
    );
    assert!(pass);
}
