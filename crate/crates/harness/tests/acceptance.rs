//! One test per acceptance criterion. Each prints a single
//! `criterion N PASS|FAIL: ...` line straight to stdout (bypassing libtest's
//! capture) and then asserts.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use ndarray::{Array3, Axis};
use rand::Rng;
use serde_json::{json, Value};
use skelxai::attribution::{cam, gradcam, GradCamOptions, JointRanking, Method};
use skelxai::metrics::{aggregate, auc_over_k, pgi, pgu, relative_change, stability, Metric, MetricConfig};
use skelxai::model::{InputNorm, MiniGcnConfig, ModelInstance, Nonlinearity, Params, N_CLASSES};
use skelxai::perturb::{perturb, PerturbationSpec, Target};
use skelxai::seed;
use skelxai::skeleton::{derive_streams, extract_windows, JointRegistry, Preprocess, StreamKind, StreamTensor, Streams, Window, WindowPolicy};
use skelxai::stats::unpaired_ttest;
use skelxai::synth::{generate, SynthConfig};
use skelxai_harness::config::Overrides;
use skelxai_harness::evaluate::{auc_path, cmd_evaluate, AucRecord};
use skelxai_harness::generate::cmd_generate;
use skelxai_harness::output::read_csv;
use skelxai_harness::train::cmd_train;
use skelxai_harness::ttest::samples;
use skelxai_harness::resolve_config;
use tempfile::TempDir;

#[allow(dead_code)]
mod reference {
    include!("../../core/tests/data/welch_reference.rs");
    pub const WELCH: &[(f64, f64, f64)] = &WELCH_REFERENCE;
}
use reference::WELCH as WELCH_REFERENCE;

fn report(n: usize, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {n} {verdict}: {detail}").unwrap();
    out.flush().unwrap();
    assert!(pass, "criterion {n} failed: {detail}");
}

fn synth_windows(n: usize, rng_seed: u64) -> (JointRegistry, Vec<(Window<f64>, usize)>) {
    let registry = JointRegistry::default_infant();
    let cfg = SynthConfig {
        n_sequences: n,
        rng_seed,
        ..SynthConfig::default()
    };
    let windows = generate::<f64>(&cfg, &registry)
        .unwrap()
        .iter()
        .flat_map(|s| {
            extract_windows(s, &WindowPolicy::default(), rng_seed)
                .unwrap()
                .into_iter()
                .map(move |w| (w, s.label))
        })
        .collect();
    (registry, windows)
}

fn rel_close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + abs
}

// ---------------------------------------------------------------------------

const STEP: f64 = 1e-4;

fn nll(model: &ModelInstance<f64>, streams: &Streams<f64>, label: usize) -> f64 {
    -model.forward(streams).unwrap().probs[label].ln()
}

fn fd_param(model: &ModelInstance<f64>, streams: &Streams<f64>, label: usize, i: usize) -> f64 {
    let mut p = model.params.flatten();
    p[i] += STEP;
    let mut plus = model.clone();
    plus.params.assign_flat(&p);
    p[i] -= 2.0 * STEP;
    let mut minus = model.clone();
    minus.params.assign_flat(&p);
    (nll(&plus, streams, label) - nll(&minus, streams, label)) / (2.0 * STEP)
}

#[test]
fn criterion_1_gradients_match_central_differences() {
    let start = Instant::now();
    let (reg, windows) = synth_windows(8, 101);
    let mut rng = seed::rng(102);
    let (mut probes, mut failures, mut worst) = (0, 0, 0.0f64);
    let mut check = |fd: f64, analytic: f64| {
        probes += 1;
        let err = (fd - analytic).abs() / fd.abs().max(analytic.abs()).max(1e-4);
        worst = worst.max(err);
        if !rel_close(fd, analytic, 1e-3, 1e-7) {
            failures += 1;
        }
    };

    // smooth members on real, standardized streams: parameters and inputs
    let data: Vec<(Streams<f64>, usize)> = windows
        .iter()
        .map(|(w, l)| (derive_streams(w, &reg, Preprocess::CenterScale).0, *l))
        .collect();
    let smooth = MiniGcnConfig::roster(103).into_iter().filter(|c| c.nonlinearity == Nonlinearity::Swish);
    for (m, config) in smooth.enumerate() {
        let mut model = ModelInstance::<f64>::init(config, &reg).unwrap();
        model.input_norm = InputNorm::fit(reg.count(), data.iter().map(|(s, _)| s));
        model.params.input_gain.mapv_inplace(|_| rng.gen_range(-0.2..0.2));
        let (streams, label) = &data[m % data.len()];
        let mut grads = Params::zeros(&model.config, model.joints());
        let trace = model.forward(streams).unwrap();
        let mut d_logits = trace.probs.clone();
        d_logits[*label] -= 1.0;
        let input_grads = model.backward(&trace, &d_logits, &mut grads);
        let g = grads.flatten();
        for _ in 0..4 {
            let i = rng.gen_range(0..g.len());
            check(fd_param(&model, streams, *label, i), g[i]);
        }
        for kind in StreamKind::ALL {
            let analytic = match kind {
                StreamKind::Position => &input_grads.position,
                StreamKind::Velocity => &input_grads.velocity,
                StreamKind::Bone => &input_grads.bone,
            };
            let (c, t, v) = analytic.dim();
            let idx = (rng.gen_range(0..c), rng.gen_range(0..t), rng.gen_range(0..v));
            let mut sp = streams.clone();
            sp.get_mut(kind).data[idx] += STEP;
            let mut sm = streams.clone();
            sm.get_mut(kind).data[idx] -= STEP;
            check((nll(&model, &sp, *label) - nll(&model, &sm, *label)) / (2.0 * STEP), analytic[idx]);
        }
    }

    // ReLU members on unit-scale random inputs
    for config in MiniGcnConfig::roster(104).into_iter().filter(|c| c.nonlinearity == Nonlinearity::Relu) {
        let model = ModelInstance::<f64>::init(config, &reg).unwrap();
        let mut tensor = |kind: StreamKind| StreamTensor {
            kind,
            data: Array3::from_shape_fn((kind.channels(), 8, reg.count()), |_| rng.gen_range(-1.0..1.0)),
        };
        let streams = Streams {
            position: tensor(StreamKind::Position),
            velocity: tensor(StreamKind::Velocity),
            bone: tensor(StreamKind::Bone),
        };
        let mut grads = Params::zeros(&model.config, model.joints());
        model.loss_and_grad(&streams, 1, &mut grads).unwrap();
        let g = grads.flatten();
        for _ in 0..3 {
            let i = rng.gen_range(0..g.len());
            check(fd_param(&model, &streams, 1, i), g[i]);
        }
    }

    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        failures == 0 && probes >= 20 && secs < 60.0,
        format!("{probes} probes, {failures} outside rel 1e-3, worst rel err {worst:.2e}, {secs:.1}s"),
    );
}

#[test]
fn criterion_2_cam_equals_gradcam_at_the_final_tap() {
    let start = Instant::now();
    let (reg, windows) = synth_windows(100, 201);
    let roster = MiniGcnConfig::roster(202);
    let mut worst = 0.0f64;
    for (i, (w, _)) in windows.iter().enumerate() {
        let model = ModelInstance::<f64>::init(roster[i % roster.len()].clone(), &reg).unwrap();
        let (streams, _) = derive_streams(w, &reg, Preprocess::CenterScale);
        let trace = model.forward(&streams).unwrap();
        for class_idx in 0..N_CLASSES {
            let a = cam(&trace, &model, class_idx, &w.id());
            let b = gradcam(&trace, &model, class_idx, GradCamOptions::default(), &w.id()).unwrap();
            for (x, y) in a.scores.iter().zip(b.scores.iter()) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        2,
        windows.len() == 100 && worst <= 1e-9 && secs < 60.0,
        format!("{} windows, max |CAM - Grad-CAM| {worst:.2e}, {secs:.1}s", windows.len()),
    );
}

fn shuffled_ranking(rng: &mut impl Rng, joints: usize, k: usize) -> JointRanking {
    let mut order: Vec<usize> = (0..joints).collect();
    for i in (1..joints).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    JointRanking { order, k }
}

#[test]
fn criterion_3_offsets_have_norm_r_in_every_frame() {
    let start = Instant::now();
    let (_, windows) = synth_windows(20, 301);
    let mut rng = seed::rng(302);
    let (mut worst_norm, mut worst_drift, mut untouched_moved) = (0.0f64, 0.0f64, 0usize);
    for draw in 0..1000 {
        let (w, _) = &windows[draw % windows.len()];
        let joints = w.joints();
        let target = match draw % 3 {
            0 => Target::All,
            1 => {
                let k = rng.gen_range(1..=joints);
                Target::TopK(shuffled_ranking(&mut rng, joints, k))
            }
            _ => {
                let k = rng.gen_range(1..joints);
                Target::NonTopK(shuffled_ranking(&mut rng, joints, k))
            }
        };
        let spec = PerturbationSpec {
            r_fraction: rng.gen_range(0.001..0.2),
            rng_seed: rng.gen(),
            target: target.clone(),
            ..PerturbationSpec::default()
        };
        let height = rng.gen_range(50.0..800.0);
        let r = spec.r_fraction * height;
        let pw = perturb(w, &spec, height, draw).unwrap();
        let mask = target.mask(joints).unwrap();
        let first = pw.coords().index_axis(Axis(0), 0).to_owned() - w.coords.index_axis(Axis(0), 0);
        for t in 0..w.frames() {
            for v in 0..joints {
                let dx = pw.coords()[[t, v, 0]] - w.coords[[t, v, 0]];
                let dy = pw.coords()[[t, v, 1]] - w.coords[[t, v, 1]];
                if mask[v] {
                    worst_norm = worst_norm.max(((dx * dx + dy * dy).sqrt() - r).abs());
                    worst_drift = worst_drift.max((dx - first[[v, 0]]).abs().max((dy - first[[v, 1]]).abs()));
                } else if dx != 0.0 || dy != 0.0 {
                    untouched_moved += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        3,
        worst_norm < 1e-9 && worst_drift < 1e-9 && untouched_moved == 0,
        format!("1000 draws, max ||offset| - r| {worst_norm:.2e}, max frame drift {worst_drift:.2e}, untargeted moved {untouched_moved}, {secs:.1}s"),
    );
}

// ---------------------------------------------------------------------------

struct FullRun {
    _dir: TempDir,
    aucs: Vec<AucRecord>,
    windows_in: usize,
    windows_evaluated: usize,
    n_positive: usize,
    members: usize,
    minutes: f64,
}

/// Default configuration end to end: 160 sequences, the 10-member ensemble,
/// CAM, Grad-CAM and random attribution.
fn full_run() -> &'static FullRun {
    static RUN: OnceLock<FullRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let dir = TempDir::new().unwrap();
        let config = dir.path().join("config.json");
        fs::write(&config, "{}").unwrap();
        let r = resolve_config(Some(&config), &Overrides::default()).unwrap();
        let manifest = cmd_generate(&r).unwrap();
        let ensemble = cmd_train(&r).unwrap();
        let summary = cmd_evaluate(&r).unwrap();
        let unit = &summary.scopes[0];
        FullRun {
            aucs: read_csv(&auc_path(&r.cfg.paths.output_dir, &unit.scope)).unwrap(),
            windows_in: unit.windows_in,
            windows_evaluated: unit.windows_evaluated,
            n_positive: manifest.n_positive,
            members: ensemble.members.len(),
            minutes: start.elapsed().as_secs_f64() / 60.0,
            _dir: dir,
        }
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

#[test]
fn criterion_4_faithfulness_direction() {
    let run = full_run();
    let mut pass = run.windows_in == 160 && run.n_positive == 24 && run.members == 10;
    let mut parts = vec![format!(
        "{} windows ({} label 1), {} members, {} evaluated, {:.1} min",
        run.windows_in, run.n_positive, run.members, run.windows_evaluated, run.minutes
    )];
    let random_pgi = samples(&run.aucs, Metric::Pgi, Method::Random);
    for method in [Method::Cam, Method::Gradcam] {
        let g = samples(&run.aucs, Metric::Pgi, method);
        let u = samples(&run.aucs, Metric::Pgu, method);
        let t = unpaired_ttest(&g, &random_pgi).unwrap();
        let beats = mean(&g) > mean(&random_pgi) && t.p_value < 0.05;
        pass &= mean(&g) > mean(&u) && beats;
        parts.push(format!(
            "{method}: PGI {:.4e} vs PGU {:.4e}, PGI vs random {:.4e} p={:.3}",
            mean(&g),
            mean(&u),
            mean(&random_pgi),
            t.p_value
        ));
    }
    report(4, pass, parts.join("; "));
}

#[test]
fn criterion_5_stability_direction() {
    let run = full_run();
    let mut pass = run.windows_evaluated >= 2;
    let mut parts = Vec::new();
    for metric in [Metric::Risp, Metric::Risv, Metric::Risb, Metric::Ros, Metric::Rrs] {
        let random = samples(&run.aucs, metric, Method::Random);
        for method in [Method::Cam, Method::Gradcam] {
            let x = samples(&run.aucs, metric, method);
            let t = unpaired_ttest(&x, &random).unwrap();
            let ok = mean(&x) < mean(&random) && t.p_value < 0.05;
            pass &= ok;
            if method == Method::Cam || !ok {
                parts.push(format!("{} {method} {:.3e} vs {:.3e} p={:.2e}", metric.display_name(), mean(&x), mean(&random), t.p_value));
            }
        }
    }
    report(5, pass, parts.join("; "));
}

// ---------------------------------------------------------------------------

fn gap_oracle(f0: f64, fs: &[f64]) -> f64 {
    fs.iter().map(|f| if f0 > *f { f0 - f } else { f - f0 }).sum::<f64>() / fs.len() as f64
}

fn rel_oracle(a: &[f64], b: &[f64], guard: f64, p: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..a.len() {
        let denom = if a[i].abs() >= guard { a[i] } else if a[i] < 0.0 { -guard } else { guard };
        total += ((a[i] - b[i]) / denom).abs().powf(p);
    }
    total.powf(1.0 / p)
}

fn noisy_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| match rng.gen_range(0..10) {
            0 => 0.0,
            1 => rng.gen_range(-1e-10..1e-10),
            _ => rng.gen_range(-3.0..3.0),
        })
        .collect()
}

#[test]
fn criterion_6_metrics_match_brute_force() {
    let start = Instant::now();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
    let mut rng = seed::rng(601);
    let cfg = MetricConfig::default();
    let mut misses: HashMap<&str, usize> = HashMap::new();
    let mut miss = |name: &'static str, ok: bool| *misses.entry(name).or_default() += !ok as usize;
    for _ in 0..100 {
        let n = rng.gen_range(1..60);
        let f0 = rng.gen_range(0.0..1.0);
        let fs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        miss("pgi", close(pgi(f0, &fs).unwrap(), gap_oracle(f0, &fs)));
        miss("pgu", close(pgu(f0, &fs).unwrap(), gap_oracle(f0, &fs)));

        let a = noisy_vector(&mut rng, n);
        let b: Vec<f64> = a.iter().map(|x| x + rng.gen_range(-0.5..0.5)).collect();
        let p = [1.0, 2.0, 3.0, 1.5][rng.gen_range(0..4)];
        miss("relative_change", close(relative_change(&a, &b, 1e-8, p).unwrap(), rel_oracle(&a, &b, 1e-8, p)));

        let joints = rng.gen_range(2..20);
        let draws = rng.gen_range(1..30);
        let e0 = noisy_vector(&mut rng, joints);
        let family: Vec<Vec<f64>> = (0..draws).map(|_| e0.iter().map(|x| x + rng.gen_range(-0.3..0.3)).collect()).collect();
        let dim = rng.gen_range(1..12);
        let x0 = noisy_vector(&mut rng, dim);
        let denom: Vec<(Vec<f64>, Vec<f64>)> = (0..draws)
            .map(|_| {
                let x1 = if rng.gen_bool(0.1) { x0.clone() } else { x0.iter().map(|x| x + rng.gen_range(-0.1..0.1)).collect() };
                (x0.clone(), x1)
            })
            .collect();
        let consistent: Vec<bool> = (0..draws).map(|_| rng.gen_bool(0.8)).collect();
        let mut want: Option<f64> = None;
        for i in (0..draws).filter(|&i| consistent[i]) {
            let num = rel_oracle(&e0, &family[i], cfg.denom_guard, cfg.p_norm);
            let den = rel_oracle(&denom[i].0, &denom[i].1, cfg.denom_guard, cfg.p_norm);
            let ratio = num / if den > cfg.epsilon_min { den } else { cfg.epsilon_min };
            want = Some(want.map_or(ratio, |w: f64| w.max(ratio)));
        }
        let got = stability(&e0, &family, &denom, &cfg, &consistent);
        miss(
            "stability",
            match (got, want) {
                (Ok((v, _)), Some(w)) => close(v, w),
                (Err(_), None) => true,
                _ => false,
            },
        );

        let k_min = rng.gen_range(1..4);
        let k_max = rng.gen_range(k_min..25);
        let points: Vec<(usize, f64)> = (k_min..=k_max).rev().map(|k| (k, rng.gen_range(-1.0..5.0))).collect();
        let mut v: Vec<(usize, f64)> = points.clone();
        v.sort_by_key(|p| p.0);
        let want = if v.len() == 1 {
            v[0].1
        } else {
            (1..v.len()).map(|i| (v[i - 1].1 + v[i].1) / 2.0).sum::<f64>() / (v.len() - 1) as f64
        };
        miss("auc_over_k", close(auc_over_k(&points, k_min, k_max).unwrap(), want));

        let aucs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
        let rec = aggregate(Metric::Ros, Method::Cam, &aucs).unwrap();
        let m = mean(&aucs);
        let sd = if n < 2 { 0.0 } else { (aucs.iter().map(|a| (a - m) * (a - m)).sum::<f64>() / (n - 1) as f64).sqrt() };
        miss("aggregate", close(rec.auc_mean, m) && close(rec.auc_std, sd) && rec.n_windows == n);
    }
    let total: usize = misses.values().sum();
    let secs = start.elapsed().as_secs_f64();
    let mut names: Vec<_> = misses.iter().map(|(k, v)| format!("{k} {v}")).collect();
    names.sort();
    report(6, total == 0, format!("100 instances each, mismatches: {}, {secs:.2}s", names.join(", ")));
}

/// The grid the reference values were computed on.
fn welch_case(i: usize) -> (Vec<f64>, Vec<f64>) {
    let na = 3 + i % 7;
    let nb = 2 + (i * 3) % 9;
    let a = (0..na)
        .map(|j| ((i * i * 7 + i * 17 + j * 31) % 101) as f64 / 8.0 - 6.0 + (i % 4) as f64)
        .collect();
    let b = (0..nb).map(|j| ((i * i * 3 + i * 29 + j * 13 + 7) % 89) as f64 / 8.0 - 5.0).collect();
    (a, b)
}

#[test]
fn criterion_7_welch_matches_reference() {
    let start = Instant::now();
    let close = |got: f64, want: f64| (got - want).abs() <= 1e-8 * want.abs().max(1.0);
    let (mut off, mut identity, mut swap) = (0, 0, 0);
    for (i, &(t, p, dof)) in WELCH_REFERENCE.iter().enumerate() {
        let (a, b) = welch_case(i);
        let r = unpaired_ttest(&a, &b).unwrap();
        off += !(close(r.t_statistic, t) && close(r.p_value, p) && close(r.dof, dof)) as usize;
        let same = unpaired_ttest(&a, &a).unwrap();
        identity += !(same.t_statistic == 0.0 && same.p_value == 1.0) as usize;
        let ba = unpaired_ttest(&b, &a).unwrap();
        swap += !(ba.t_statistic == -r.t_statistic && ba.p_value == r.p_value && ba.dof == r.dof) as usize;
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        7,
        WELCH_REFERENCE.len() == 50 && off + identity + swap == 0,
        format!(
            "{} cases, {off} outside 1e-8, {identity} identity and {swap} swap violations, {secs:.2}s",
            WELCH_REFERENCE.len()
        ),
    );
}

// ---------------------------------------------------------------------------

fn reduced_config() -> Value {
    json!({
        "synth": {"n_sequences": 24},
        "models": [{}, {"nonlinearity": "swish", "rng_seed": 1}],
        "train": {"epochs": 15},
        "perturbation": {"n": 8},
        "scope": "both",
    })
}

fn skelxai(dir: &Path, args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_skelxai"))
        .args(args)
        .args(["--config", dir.join("config.json").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "skelxai {args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

/// generate, train, evaluate with the given worker count.
fn pipeline(dir: &Path, workers: &str) {
    fs::write(dir.join("config.json"), reduced_config().to_string()).unwrap();
    for verb in ["generate", "train", "evaluate"] {
        skelxai(dir, &[verb, "--workers", workers]);
    }
}

fn files(dir: &Path) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .collect();
    out.sort();
    out
}

#[test]
fn criterion_8_outputs_do_not_depend_on_workers() {
    let start = Instant::now();
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    pipeline(a.path(), "1");
    pipeline(b.path(), "8");
    let mut compared = 0;
    let mut differing = Vec::new();
    for sub in ["data", "models", "results"] {
        for fa in files(&a.path().join(sub)) {
            let fb = b.path().join(sub).join(fa.file_name().unwrap());
            compared += 1;
            if fs::read(&fa).unwrap() != fs::read(&fb).unwrap_or_default() {
                differing.push(fa.file_name().unwrap().to_string_lossy().into_owned());
            }
        }
    }
    let csvs = files(&a.path().join("results")).iter().filter(|p| p.extension().is_some_and(|e| e == "csv")).count();
    let secs = start.elapsed().as_secs_f64();
    report(
        8,
        differing.is_empty() && csvs >= 5,
        format!("{compared} files compared ({csvs} result CSVs) at 1 vs 8 workers, differing: {differing:?}, {secs:.0}s"),
    );
}

fn color_oracle(score: f64) -> &'static str {
    let t = 0.3;
    if score < 0.3 * t {
        "green"
    } else if score < 0.6 * t {
        "yellow"
    } else if score < t {
        "orange"
    } else {
        "red"
    }
}

fn attr<'a>(tag: &'a str, name: &str) -> Option<&'a str> {
    let key = format!(" {name}=\"");
    let at = tag.find(&key)? + key.len();
    Some(&tag[at..at + tag[at..].find('"')?])
}

fn tags<'a>(svg: &'a str, open: &str) -> Vec<&'a str> {
    svg.match_indices(open).map(|(i, _)| &svg[i..i + svg[i..].find('>').unwrap()]).collect()
}

#[test]
fn criterion_9_report_figures() {
    let dir = TempDir::new().unwrap();
    pipeline(dir.path(), "1");
    skelxai(dir.path(), &["report"]);
    let report_dir = dir.path().join("results/report");
    let svg = fs::read_to_string(report_dir.join("metrics_ensemble.svg")).unwrap();
    let panels = tags(&svg, "<g class=\"panel\"");
    let scale_ok = panels.iter().all(|p| {
        let log = matches!(attr(p, "data-metric"), Some("ros") | Some("rrs"));
        attr(p, "data-scale") == Some(if log { "log" } else { "linear" })
    });
    let metrics: Vec<&str> = panels.iter().filter_map(|p| attr(p, "data-metric")).collect();
    let pvalues = svg.matches("<text class=\"pvalue\"").count();
    let annotated = svg.matches("CAM vs Grad-CAM: p = ").count();

    // joint colors against the attribution scores the evaluation stored
    let mut stored: HashMap<String, Vec<f64>> = HashMap::new();
    for path in files(&dir.path().join("results")) {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let Some(scope) = name.strip_prefix("attributions_").and_then(|n| n.strip_suffix(".json")) else { continue };
        let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        for a in doc["attributions"].as_array().unwrap() {
            let id = a["window_id"].as_str().unwrap().replace('@', "_");
            let scores = a["scores"].as_array().unwrap().iter().map(|s| s.as_f64().unwrap()).collect();
            stored.insert(format!("{scope}_{}_{id}", a["method"].as_str().unwrap()), scores);
        }
    }
    let registry = JointRegistry::default_infant();
    let names = registry.names();
    let (mut joints_checked, mut wrong) = (0, 0);
    let mut skeletons = 0;
    for path in files(&report_dir.join("skeletons")) {
        skeletons += 1;
        let text = fs::read_to_string(&path).unwrap();
        let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
        let scores = stored.get(&stem).unwrap_or_else(|| panic!("no attribution for {stem}"));
        for circle in tags(&text, "<circle class=\"joint\"") {
            let joint = names.iter().position(|n| Some(n.as_str()) == attr(circle, "data-joint")).unwrap();
            joints_checked += 1;
            wrong += (attr(circle, "fill") != Some(color_oracle(scores[joint]))) as usize;
        }
    }
    let n_panels = panels.len();
    let pass = n_panels == 7
        && metrics == ["pgi", "pgu", "risp", "risv", "risb", "ros", "rrs"]
        && scale_ok
        && pvalues == 7
        && annotated == 7
        && skeletons > 0
        && joints_checked == skeletons * names.len()
        && wrong == 0;
    report(
        9,
        pass,
        format!(
            "{n_panels} panels, ROS/RRS log and others linear: {scale_ok}, {pvalues} p-value annotations, {skeletons} skeletons, {joints_checked} joints, {wrong} miscolored"
        ),
    );
}
