//! Command-line front end.
//!
//! Exit codes: 0 when every requested certificate passes, 1 when any
//! certificate is violated (the report is still produced), 2 on
//! configuration errors. Without `--out` the rendered report goes to
//! stdout and the human-readable summary to stderr; with `--out` the
//! report goes to the file and the summary to stdout.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pinchlab::harness::CertKind;
use pinchlab::report::{format_float, ReportFormat, RunReport};
use pinchlab::runner::{
    list_examples, parse_param_list, run_check, run_oracle, run_spectrum, OracleReport, RunConfig,
};
use pinchlab::{PinchError, Result};

#[derive(Parser)]
#[command(
    name = "pinchlab",
    version,
    about = "Pointwise certification of curvature-pinching conditions for isometric \
             immersions into space forms"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the built-in examples with their parameters
    ListExamples {
        /// Emit the registry as a JSON array
        #[arg(long)]
        json: bool,
    },
    /// Run certificates over sampled points of an example
    Check(RunArgs),
    /// Report SD/ASD spectra of the 2-form curvature operator (dimension 4)
    Spectrum(RunArgs),
    /// Cross-check every frame search against its sampling oracle
    Oracle(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Example name (see list-examples)
    #[arg(long)]
    example: String,

    /// Example parameter as key=value; repeatable
    #[arg(long = "param", value_name = "KEY=VALUE")]
    param: Vec<String>,

    /// Number of sampled points
    #[arg(long, default_value_t = 25)]
    samples: usize,

    /// Seed for all frame searches (per-point seeds are derived from it)
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Certificate margin pass threshold (default 1e-6 for chart data)
    #[arg(long)]
    tol: Option<f64>,

    /// Comma-separated certificates to run: star, lawson-simons, isotropic,
    /// bochner, equality-case, prop-ell (default: all that apply)
    #[arg(long)]
    cert: Option<String>,

    /// Descent restarts per frame search
    #[arg(long)]
    restarts: Option<usize>,

    /// Sample count for each search's shadowing oracle
    #[arg(long)]
    oracle_samples: Option<usize>,

    /// Write the report to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format: json or csv
    #[arg(long, default_value = "json")]
    format: String,
}

impl RunArgs {
    fn to_config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::new(&self.example);
        cfg.params = parse_param_list(&self.param)?;
        cfg.samples = self.samples;
        cfg.seed = self.seed;
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(PinchError::BadParameter(format!(
                    "--tol must be a positive number, got {t}"
                )));
            }
            cfg.tolerances.cert = t;
        }
        if let Some(spec) = &self.cert {
            cfg.certs = spec
                .split(',')
                .map(|s| s.trim().parse::<CertKind>())
                .collect::<Result<Vec<_>>>()?;
        }
        if let Some(r) = self.restarts {
            cfg.search.restarts = r;
        }
        if let Some(o) = self.oracle_samples {
            cfg.search.oracle_samples = o;
        }
        Ok(cfg)
    }

    fn format(&self) -> Result<ReportFormat> {
        self.format.parse()
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    init_thread_pool()?;
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::ListExamples { json } => {
            let infos = list_examples();
            if json {
                let rendered = serde_json::to_string_pretty(&infos)
                    .map_err(|e| PinchError::ReportIo(e.to_string()))?;
                println!("{rendered}");
            } else {
                for info in infos {
                    println!("{}", info.name);
                    println!("  parameters: {}", info.params);
                    println!("  exercises:  {}", info.exercises);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check(args) => {
            let report = run_check(&args.to_config()?)?;
            deliver(&report.render(args.format()?)?, args.out.as_deref())?;
            let say = summary_sink(args.out.is_some());
            summarize_check(&report, &say);
            Ok(exit_for(report.overall_pass))
        }
        Cmd::Spectrum(args) => {
            let report = run_spectrum(&args.to_config()?)?;
            deliver(&report.render(args.format()?)?, args.out.as_deref())?;
            let say = summary_sink(args.out.is_some());
            summarize_spectrum(&report, &say);
            Ok(exit_for(report.overall_pass))
        }
        Cmd::Oracle(args) => {
            let report = run_oracle(&args.to_config()?)?;
            deliver(&report.render(args.format()?)?, args.out.as_deref())?;
            let say = summary_sink(args.out.is_some());
            summarize_oracle(&report, &say);
            Ok(exit_for(report.all_dominant))
        }
    }
}

/// Honor PINCHLAB_THREADS as a cap on point-level parallelism.
fn init_thread_pool() -> Result<()> {
    match std::env::var("PINCHLAB_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let threads: usize = raw.parse().map_err(|_| {
                PinchError::BadConfig(format!(
                    "PINCHLAB_THREADS={raw:?} is not a positive integer"
                ))
            })?;
            if threads == 0 {
                return Err(PinchError::BadConfig(
                    "PINCHLAB_THREADS must be at least 1".into(),
                ));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| PinchError::BadConfig(format!("thread pool: {e}")))
        }
    }
}

fn exit_for(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Report to the file when a path was given, to stdout otherwise.
fn deliver(rendered: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| PinchError::ReportIo(format!("{}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

/// Summary goes to stdout when the report went to a file, to stderr when
/// the report occupies stdout.
fn summary_sink(report_in_file: bool) -> impl Fn(&str) {
    move |line: &str| {
        if report_in_file {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn summarize_check(report: &RunReport, say: &impl Fn(&str)) {
    say(&format!(
        "example {} ({} points, seed {}): {}",
        report.example, report.points.len(), report.seed, report.note
    ));
    for cert in &report.certificates {
        say(&format!(
            "  {:<14} worst margin {:+.3e} at point {}: {}",
            cert.name, cert.worst_margin, cert.worst_point, verdict(cert.pass)
        ));
    }
    if let Some(pe) = &report.prop_ell {
        say(&format!(
            "  {:<14} lambda margin {:+.3e}, worst pinching margin {:+.3e} at point {}: {} ({})",
            "prop-ell",
            pe.lambda_margin,
            pe.worst_star_margin,
            pe.worst_point,
            verdict(pe.pass),
            pe.note
        ));
    }
    say(&format!("OVERALL: {}", verdict(report.overall_pass)));
}

fn summarize_spectrum(report: &RunReport, say: &impl Fn(&str)) {
    say(&format!(
        "example {} ({} points, seed {}): 2-form curvature operator spectra",
        report.example, report.points.len(), report.seed
    ));
    for pt in &report.points {
        if let (Some(sd), Some(asd)) = (pt.mu_sd, pt.mu_asd) {
            say(&format!(
                "  point {:>3}: SD [{}, {}, {}]  ASD [{}, {}, {}]  min {}",
                pt.id,
                format_float(sd[0]),
                format_float(sd[1]),
                format_float(sd[2]),
                format_float(asd[0]),
                format_float(asd[1]),
                format_float(asd[2]),
                format_float(sd[0].min(asd[0])),
            ));
        }
    }
    say(&format!("OVERALL: {}", verdict(report.overall_pass)));
}

fn summarize_oracle(report: &OracleReport, say: &impl Fn(&str)) {
    say(&format!(
        "example {} ({} points, seed {}): optimizer-vs-oracle dominance gaps",
        report.example, report.rows.len(), report.seed
    ));
    for row in &report.rows {
        let gaps: Vec<String> =
            row.gaps.iter().map(|g| format!("{} {:+.3e}", g.label, g.gap)).collect();
        say(&format!(
            "  point {:>3}: {} [{}]",
            row.id,
            if row.dominance_ok { "ok" } else { "VIOLATION" },
            gaps.join(", ")
        ));
    }
    say(&format!(
        "dominance holds within {:.1e} at every point: {}",
        report.dominance_tol,
        if report.all_dominant { "yes" } else { "NO" }
    ));
}
