use serde::{Deserialize, Serialize};
use skelxai::attribution::Method;
use skelxai::metrics::Metric;
use skelxai::stats::unpaired_ttest;

use crate::config::Resolved;
use crate::error::Result;
use crate::evaluate::{auc_path, load_summary, AucRecord};
use crate::output::{read_csv, write_csv};

pub const TTEST_CSV: &str = "ttest.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TTestRow {
    /// `<method>_vs_<method>`.
    pub comparison: String,
    pub metric: Metric,
    pub scope: String,
    pub t_statistic: f64,
    pub p_value: f64,
    pub dof: f64,
}

pub fn samples(aucs: &[AucRecord], metric: Metric, method: Method) -> Vec<f64> {
    aucs.iter()
        .filter(|a| a.metric == metric && a.method == method)
        .map(|a| a.auc)
        .collect()
}

/// Every method pair (in configured order) for every metric of one scope.
pub fn compare(scope: &str, methods: &[Method], aucs: &[AucRecord]) -> Result<Vec<TTestRow>> {
    let mut rows = Vec::new();
    for (i, &a) in methods.iter().enumerate() {
        for &b in &methods[i + 1..] {
            for metric in Metric::ALL {
                let t = unpaired_ttest(&samples(aucs, metric, a), &samples(aucs, metric, b))?;
                rows.push(TTestRow {
                    comparison: format!("{a}_vs_{b}"),
                    metric,
                    scope: scope.to_string(),
                    t_statistic: t.t_statistic,
                    p_value: t.p_value,
                    dof: t.dof,
                });
            }
        }
    }
    Ok(rows)
}

/// Pairwise Welch tests on the per-window AUCs of every evaluated scope.
pub fn cmd_ttest(r: &Resolved) -> Result<Vec<TTestRow>> {
    let summary = load_summary(r)?;
    let methods: Vec<Method> = r.cfg.methods.iter().copied().filter(|m| summary.methods.contains(m)).collect();
    let dir = &r.cfg.paths.output_dir;
    let mut rows = Vec::new();
    for scope in &summary.scopes {
        let aucs: Vec<AucRecord> = read_csv(&auc_path(dir, &scope.scope))?;
        rows.extend(compare(&scope.scope, &methods, &aucs)?);
    }
    write_csv(&dir.join(TTEST_CSV), &r.hash, &["test=welch two_sided"], &rows)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aucs(methods: &[Method]) -> Vec<AucRecord> {
        let mut out = Vec::new();
        for (mi, &method) in methods.iter().enumerate() {
            for metric in Metric::ALL {
                for w in 0..5 {
                    out.push(AucRecord {
                        metric,
                        method,
                        window_id: format!("w{w}"),
                        auc: (w * w + mi) as f64 * 0.1,
                    });
                }
            }
        }
        out
    }

    #[test]
    fn row_counts_follow_pairs_and_metrics() {
        let two = [Method::Cam, Method::Random];
        assert_eq!(compare("ensemble", &two, &aucs(&two)).unwrap().len(), 7);
        let three = [Method::Cam, Method::Gradcam, Method::Random];
        let rows = compare("model_3", &three, &aucs(&three)).unwrap();
        assert_eq!(rows.len(), 21);
        assert_eq!(rows[0].comparison, "cam_vs_gradcam");
        assert_eq!(rows[20].comparison, "gradcam_vs_random");
    }

    #[test]
    fn values_match_the_stats_module() {
        let two = [Method::Cam, Method::Random];
        let data = aucs(&two);
        let rows = compare("ensemble", &two, &data).unwrap();
        let direct = unpaired_ttest(&samples(&data, Metric::Ros, Method::Cam), &samples(&data, Metric::Ros, Method::Random)).unwrap();
        let row = rows.iter().find(|r| r.metric == Metric::Ros).unwrap();
        assert_eq!((row.t_statistic, row.p_value, row.dof), (direct.t_statistic, direct.p_value, direct.dof));
    }

    #[test]
    fn too_few_windows_is_an_error() {
        let two = [Method::Cam, Method::Random];
        let data: Vec<_> = aucs(&two).into_iter().filter(|a| a.window_id == "w0").collect();
        assert!(compare("ensemble", &two, &data).is_err());
    }
}
