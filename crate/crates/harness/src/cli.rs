use std::path::PathBuf;

use clap::{Parser, Subcommand};
use crate::config::{parse_methods, Overrides, Scope};
use crate::{evaluate, generate, report, resolve_config, train, ttest, Result};

#[derive(Parser)]
#[command(name = "skelxai", version, about = "Attribution faithfulness and stability benchmarks on skeleton GCNs")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Global seed; every component seed is derived from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Evaluation threads.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_parser = |s: &str| s.parse::<Scope>())]
    pub scope: Option<Scope>,
    /// Comma-separated subset of cam, gradcam, random.
    #[arg(long, global = true, value_parser = parse_methods)]
    pub methods: Option<Vec<skelxai::attribution::Method>>,
    /// Output directory for metrics, tests and reports.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
pub enum Verb {
    /// Write synthetic sequences and their manifest.
    Generate,
    /// Train the ensemble on the generated data.
    Train,
    /// Compute metric sweeps for every method and scope.
    Evaluate,
    /// Draw figures and write tables from evaluation outputs.
    Report,
    /// Pairwise Welch t-tests between methods.
    Ttest,
}

pub fn run(cli: &Cli) -> Result<String> {
    let overrides = Overrides {
        seed: cli.seed,
        workers: cli.workers,
        scope: cli.scope,
        methods: cli.methods.clone(),
        out: cli.out.clone(),
    };
    let r = resolve_config(cli.config.as_deref(), &overrides)?;
    Ok(match cli.verb {
        Verb::Generate => {
            let m = generate::cmd_generate(&r)?;
            format!("generated {} sequences ({} label 1) in {}", m.n_sequences, m.n_positive, r.cfg.paths.data_dir.display())
        }
        Verb::Train => {
            let m = train::cmd_train(&r)?;
            format!("trained {} members on {} windows, min train accuracy {:.3}", m.members.len(), m.n_windows, m.min_accuracy())
        }
        Verb::Evaluate => {
            let s = evaluate::cmd_evaluate(&r)?;
            s.scopes
                .iter()
                .map(|u| {
                    format!(
                        "{}: {} windows in, {} evaluated, {} skipped{}",
                        u.scope,
                        u.windows_in,
                        u.windows_evaluated,
                        u.windows_skipped,
                        if u.reconciled() { "" } else { " (unreconciled)" }
                    )
                })
                .collect::<Vec<_>>()
                .join("\n")
        }
        Verb::Report => {
            let o = report::cmd_report(&r)?;
            format!("wrote {} figures, {} skeletons and {}", o.figures.len(), o.skeletons.len(), o.tables.display())
        }
        Verb::Ttest => {
            let rows = ttest::cmd_ttest(&r)?;
            format!("wrote {} comparisons to {}", rows.len(), r.cfg.paths.output_dir.join(ttest::TTEST_CSV).display())
        }
    })
}

/// Parses `args`, runs the verb and reports on stdout/stderr. Returns the
/// process exit code.
pub fn main_with<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(msg) => {
            println!("{msg}");
            0
        }
        Err(e) => {
            eprintln!("skelxai: {e}");
            e.exit_code()
        }
    }
}
