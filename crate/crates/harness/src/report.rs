use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use skelxai::attribution::Method;
use skelxai::metrics::{AggregateRecord, Metric, MetricRecord};
use skelxai::stats::unpaired_ttest;

use crate::config::Resolved;
use crate::data::load_windows;
use crate::error::Result;
use crate::evaluate::{aggregates_path, attributions_path, auc_path, load_summary, metrics_path, AttributionRecord, AucRecord};
use crate::output::{read_csv, read_json, stamp, write_text};
use crate::svg::{method_style, metric_figure, skeleton_figure, Panel, Series, SkeletonView};
use crate::ttest::{compare, samples};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportOutputs {
    pub figures: Vec<PathBuf>,
    pub skeletons: Vec<PathBuf>,
    pub tables: PathBuf,
}

#[derive(Deserialize)]
struct AttributionFile {
    attributions: Vec<AttributionRecord>,
}

/// Two-sided Welch p-value of CAM against Grad-CAM, or `None` when either is
/// missing. Identical samples take the degenerate path and give 1.
pub fn cam_vs_gradcam(aucs: &[AucRecord], metric: Metric) -> Option<f64> {
    let a = samples(aucs, metric, Method::Cam);
    let b = samples(aucs, metric, Method::Gradcam);
    unpaired_ttest(&a, &b).ok().map(|t| t.p_value)
}

fn fmt_p(p: f64) -> String {
    if p >= 1e-3 {
        format!("{p:.4}")
    } else {
        format!("{p:.2e}")
    }
}

/// Mean over windows of each `(metric, method, k)`.
fn curves(records: &[MetricRecord]) -> BTreeMap<(usize, Method), Vec<(f64, f64)>> {
    let mut sums: BTreeMap<(usize, Method, usize), (f64, usize)> = BTreeMap::new();
    for r in records {
        let m = Metric::ALL.iter().position(|x| *x == r.metric).expect("known metric");
        let e = sums.entry((m, r.method, r.k)).or_insert((0.0, 0));
        e.0 += r.value;
        e.1 += 1;
    }
    let mut out: BTreeMap<(usize, Method), Vec<(f64, f64)>> = BTreeMap::new();
    for ((m, method, k), (sum, n)) in sums {
        out.entry((m, method)).or_default().push((k as f64, sum / n as f64));
    }
    out
}

fn file_safe(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn aggregate_table(md: &mut String, scope: &str, methods: &[Method], aggregates: &[AggregateRecord]) {
    md.push_str(&format!("\n## Metric AUCs, {scope}\n\nMean ± standard deviation over windows.\n\n| Method |"));
    for m in Metric::ALL {
        let arrow = if m.higher_is_better() { "↑" } else { "↓" };
        md.push_str(&format!(" {} ({arrow}) |", m.display_name()));
    }
    md.push_str("\n|---|");
    md.push_str(&"---|".repeat(Metric::ALL.len()));
    md.push('\n');
    for &method in methods {
        md.push_str(&format!("| {} |", method_style(method).0));
        for metric in Metric::ALL {
            match aggregates.iter().find(|a| a.metric == metric && a.method == method) {
                Some(a) => md.push_str(&format!(" {:.4e} ± {:.2e} (n={}) |", a.auc_mean, a.auc_std, a.n_windows)),
                None => md.push_str(" n/a |"),
            }
        }
        md.push('\n');
    }
}

/// Figures, skeletons and tables for every evaluated scope.
pub fn cmd_report(r: &Resolved) -> Result<ReportOutputs> {
    let summary = load_summary(r)?;
    let dir = &r.cfg.paths.output_dir;
    let out_dir = dir.join("report");
    let tag = stamp(&r.hash);
    let mut outputs = ReportOutputs {
        tables: out_dir.join("report.md"),
        ..ReportOutputs::default()
    };
    let windows: HashMap<String, skelxai::Window> = load_windows(r)?.into_iter().map(|(w, _)| (w.id(), w)).collect();
    let methods: Vec<Method> = r.cfg.methods.iter().copied().filter(|m| summary.methods.contains(m)).collect();

    let mut md = format!("<!-- {tag} -->\n# Attribution benchmark report\n");
    for scope in &summary.scopes {
        let name = &scope.scope;
        let records: Vec<MetricRecord> = read_csv(&metrics_path(dir, name))?;
        let aucs: Vec<AucRecord> = read_csv(&auc_path(dir, name))?;
        let aggregates: Vec<AggregateRecord> = read_csv(&aggregates_path(dir, name))?;
        let attributions = read_json::<AttributionFile>(&attributions_path(dir, name))?.body.attributions;

        let curves = curves(&records);
        let panels: Vec<Panel> = Metric::ALL
            .iter()
            .enumerate()
            .filter(|(_, m)| records.iter().any(|r| r.metric == **m))
            .map(|(mi, &metric)| Panel {
                metric,
                series: methods
                    .iter()
                    .filter_map(|&method| {
                        curves.get(&(mi, method)).map(|points| Series {
                            method,
                            points: points.clone(),
                        })
                    })
                    .collect(),
                annotation: match cam_vs_gradcam(&aucs, metric) {
                    Some(p) => format!("CAM vs Grad-CAM: p = {}", fmt_p(p)),
                    None => "CAM vs Grad-CAM: p = n/a".into(),
                },
            })
            .collect();
        let title = format!("Metrics over k, {name} ({} windows)", scope.windows_evaluated);
        let fig = out_dir.join(format!("metrics_{name}.svg"));
        write_text(&fig, &metric_figure(&title, &panels, &tag))?;
        outputs.figures.push(fig);

        let mut shown: Vec<&String> = attributions.iter().map(|a| &a.window_id).collect();
        shown.dedup();
        for window_id in shown.into_iter().take(r.cfg.report.max_skeletons) {
            let Some(window) = windows.get(window_id) else { continue };
            let frames = window.frames() as f64;
            let pose: Vec<[f64; 2]> = (0..window.joints())
                .map(|v| {
                    let mut p = [0.0; 2];
                    for t in 0..window.frames() {
                        p[0] += window.coords[[t, v, 0]] / frames;
                        p[1] += window.coords[[t, v, 1]] / frames;
                    }
                    p
                })
                .collect();
            for a in attributions.iter().filter(|a| &a.window_id == window_id) {
                let view = SkeletonView {
                    title: format!("{} {} ({name}, class {})", method_style(a.method).0, window_id, a.class_idx),
                    names: r.registry.names(),
                    bones: r.registry.bones(),
                    pose: pose.clone(),
                    scores: &a.scores,
                };
                let path = out_dir.join("skeletons").join(format!("{name}_{}_{}.svg", a.method, file_safe(window_id)));
                write_text(&path, &skeleton_figure(&view, &r.cfg.report.color, &tag))?;
                outputs.skeletons.push(path);
            }
        }

        aggregate_table(&mut md, name, &methods, &aggregates);
        md.push_str(&format!(
            "\nWindows: {} in, {} evaluated, {} skipped by the correct-prediction filter; {} stability values skipped for lack of label-preserving perturbations.\n",
            scope.windows_in, scope.windows_evaluated, scope.windows_skipped, scope.metric_skips
        ));
        if methods.len() >= 2 && aucs.len() >= 2 {
            if let Ok(rows) = compare(name, &methods, &aucs) {
                let mut comparisons: Vec<&str> = rows.iter().map(|r| r.comparison.as_str()).collect();
                comparisons.dedup();
                for c in comparisons {
                    md.push_str(&format!("\n### Welch t-test {}, {name}\n\n| Metric | t | p | dof |\n|---|---|---|---|\n", c.replace("_vs_", " vs ")));
                    for row in rows.iter().filter(|r| r.comparison == c) {
                        md.push_str(&format!(
                            "| {} | {:.4} | {} | {:.2} |\n",
                            row.metric.display_name(),
                            row.t_statistic,
                            fmt_p(row.p_value),
                            row.dof
                        ));
                    }
                }
            }
        }
    }
    write_text(&outputs.tables, &md)?;
    Ok(outputs)
}
