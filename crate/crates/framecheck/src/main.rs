use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use framecheck::config::{CheckKind, Overrides};
use framecheck::groups::CATALOG_NAMES;
use framecheck::model::Family;
use framecheck::{emit_report, parse_config_with, run_suite, ReportFormat, SuiteReport};

/// All requested checks passed.
const EXIT_PASS: u8 = 0;
/// At least one check failed.
const EXIT_CHECK_FAILED: u8 = 1;
/// The config could not be read, parsed or validated.
const EXIT_CONFIG_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "framecheck",
    version,
    about = "Check symmetry, frame indifference and isotropy of heat-conduction models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Machine,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Human => ReportFormat::Human,
            Format::Machine => ReportFormat::Machine,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks described by a config file.
    Run {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        /// Overrides `run.seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `run.tol`.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// List built-in symmetry groups, model families and checks.
    Catalog,
    /// Contrast an anisotropic and an isotropic conductor.
    Demo {
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
}

const DEMO_TEMPLATE: &str = r#"
[model]
family = "linear_constant"
kappa0 = KAPPA

[group]
name = "trivial"

[checks]
enabled = ["frame_indifference", "isotropy", "observer_independence"]

[run]
observers = 100
"#;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            format,
            seed,
            tol,
        } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", config.display());
                    return ExitCode::from(EXIT_CONFIG_ERROR);
                }
            };
            let sc = match parse_config_with(&text, Overrides { seed, tol }) {
                Ok(sc) => sc,
                Err(e) => {
                    eprintln!("error: {}: {e}", config.display());
                    return ExitCode::from(EXIT_CONFIG_ERROR);
                }
            };
            let report = run_suite(&sc);
            emit(&emit_report(&report, format.into()));
            ExitCode::from(if report.passed {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::Catalog => {
            let mut out = String::from("groups:\n");
            for (name, about) in CATALOG_NAMES {
                let _ = writeln!(out, "  {name:<20} {about}");
            }
            out.push_str("model families:\n");
            for f in Family::ALL {
                let _ = writeln!(out, "  {:<22} {}", f.as_str(), f.describe());
            }
            out.push_str("checks:\n");
            for k in CheckKind::ALL {
                let _ = writeln!(out, "  {:<22} {}", k.as_str(), k.describe());
            }
            emit(&out);
            ExitCode::from(EXIT_PASS)
        }
        Command::Demo { format } => demo(format.into()),
    }
}

// A closed pipe (e.g. `| head`) is not an error worth reporting.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn demo_report(kappa: &str) -> SuiteReport {
    let sc = framecheck::parse_config(&DEMO_TEMPLATE.replace("KAPPA", kappa))
        .expect("demo config is valid");
    run_suite(&sc)
}

fn demo(format: ReportFormat) -> ExitCode {
    let aniso = demo_report("[1, 0, 0, 0, 2, 0, 0, 0, 3]");
    let iso = demo_report("[2.5, 0, 0, 0, 2.5, 0, 0, 0, 2.5]");
    let verdict = |r: &SuiteReport, name: &str| {
        r.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.passed)
            .unwrap_or(false)
    };
    let mut out = String::new();
    match format {
        ReportFormat::Machine => {
            out.push_str(&emit_report(&aniso, format));
            out.push_str(&emit_report(&iso, format));
        }
        ReportFormat::Human => {
            out.push_str("== κ = diag(1, 2, 3) ==\n");
            out.push_str(&emit_report(&aniso, format));
            out.push_str("\n== κ = 2.5·1 ==\n");
            out.push_str(&emit_report(&iso, format));
            let _ = writeln!(out, "\n{:<24} {:>16} {:>10}", "", "diag(1,2,3)", "2.5·1");
            for name in ["frame_indifference", "isotropy", "observer_independence"] {
                let show = |b: bool| if b { "pass" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{:<24} {:>16} {:>10}",
                    name,
                    show(verdict(&aniso, name)),
                    show(verdict(&iso, name))
                );
            }
            out.push_str("frame indifference holds for both conductors; only the isotropic one is isotropic.\n");
        }
    }
    emit(&out);
    let expected = verdict(&aniso, "frame_indifference")
        && !verdict(&aniso, "isotropy")
        && !verdict(&aniso, "observer_independence")
        && iso.passed;
    ExitCode::from(if expected {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    })
}
