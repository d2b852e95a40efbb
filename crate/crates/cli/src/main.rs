mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tilecoh::cellcx::json::parse_file;
use tilecoh::datasets::{self, evaluate_checkpoints, run, run_complex_with, RunOutput};
use tilecoh::onedim::{h1_tiling_space, Substitution1D};
use tilecoh::rotfib::{compare_variants, pinwheel_variant_factors, run_rotation, D2Spec, RotationInput};
use tilecoh::Error;

use report::{Report, Style};

#[derive(Parser, Debug)]
#[command(name = "tilecoh", version, about = "Exact Čech cohomology computations for substitution tilings")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a built-in dataset and its checkpoints.
    Builtin {
        /// Dataset name; `tilecoh list` prints them.
        name: String,
        /// Also run the rotation-hull computation for this tiling.
        #[arg(long)]
        rot: bool,
        /// Exit with status 1 when a checkpoint or cross-check fails.
        #[arg(long)]
        strict_checkpoints: bool,
    },
    /// One-dimensional substitution given as rules, e.g. `a->ab,b->ba`.
    Onedim { rules: String },
    /// A filtered complex in the JSON complex format.
    Complex { path: PathBuf },
    /// Rotation hull from a JSON rotation input, and/or pinwheel variant factors.
    Rot {
        path: Option<PathBuf>,
        /// `m,n` of a pinwheel variant; repeat to compare.
        #[arg(long, value_parser = parse_variant)]
        variant: Vec<(i64, i64)>,
        /// Override the d2 specification, as `target_order=N`.
        #[arg(long, value_parser = parse_d2)]
        d2: Option<D2Spec>,
    },
    /// Print a dataset in its public JSON form.
    Export { name: String },
    /// List dataset names.
    List,
}

fn parse_variant(s: &str) -> Result<(i64, i64), String> {
    let (m, n) = s.split_once(',').ok_or("expected m,n")?;
    let m = m.trim().parse().map_err(|_| format!("bad m in `{s}`"))?;
    let n = n.trim().parse().map_err(|_| format!("bad n in `{s}`"))?;
    Ok((m, n))
}

fn parse_d2(s: &str) -> Result<D2Spec, String> {
    let v = s.strip_prefix("target_order=").ok_or("expected target_order=N")?;
    let target_order = v.trim().parse().map_err(|_| format!("bad order `{v}`"))?;
    Ok(D2Spec { target_order, justification: Some("supplied on the command line".into()) })
}

/// Input problems exit with 2, failed checks with 1.
enum Failure {
    Input(String),
    Check(Box<Report>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn rotation_dataset_for(name: &str) -> Option<&'static str> {
    match name {
        "chair" | "chair-rot" => Some("chair-rot"),
        "pinwheel" | "pinwheel-rot" => Some("pinwheel-rot"),
        "penrose-rot" => Some("penrose-rot"),
        _ => None,
    }
}

fn execute(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Builtin { name, rot, strict_checkpoints } => {
            let ds = datasets::load(name)?;
            let out = run(&ds)?;
            let checks = evaluate_checkpoints(&ds, &out);
            let mut report = Report::new("builtin", name);
            report.result = Some(out);
            report.checkpoints.push(checks);
            if *rot {
                let rname = rotation_dataset_for(name)
                    .ok_or_else(|| Failure::Input(format!("no rotation data for `{name}`")))?;
                if rname != name {
                    let rds = datasets::load(rname)?;
                    let rout = run(&rds)?;
                    report.checkpoints.push(evaluate_checkpoints(&rds, &rout));
                    report.rotation = Some(rout);
                }
            }
            if *strict_checkpoints && !report.all_checks_pass() {
                return Err(Failure::Check(Box::new(report)));
            }
            Ok(report)
        }
        Command::Onedim { rules } => {
            let s = Substitution1D::parse(rules)?;
            let r = h1_tiling_space(&s)?;
            let mut report = Report::new("onedim", rules);
            report.warnings = r.warnings.clone();
            report.result = Some(RunOutput::OneDim(Box::new(r)));
            Ok(report)
        }
        Command::Complex { path } => {
            let f = parse_file(&read(path)?)?;
            let cx = f.to_complex()?;
            let v = cx.validate();
            if let Some(bad) = v.violation {
                let cell = bad.cell.map(|c| format!(", cell `{c}`")).unwrap_or_default();
                return Err(Failure::Input(format!(
                    "invalid complex ({:?}) at degree {}{cell}: {}",
                    bad.kind, bad.degree, bad.detail
                )));
            }
            let run = run_complex_with(&cx, &f.extensions)?;
            let mut report = Report::new("complex", &path.display().to_string());
            report.result = Some(RunOutput::Complex(Box::new(run)));
            Ok(report)
        }
        Command::Rot { path, variant, d2 } => {
            if path.is_none() && variant.is_empty() {
                return Err(Failure::Input("rot needs an input file or --variant".into()));
            }
            let label = path.as_ref().map_or_else(|| "variants".to_string(), |p| p.display().to_string());
            let mut report = Report::new("rot", &label);
            if let Some(p) = path {
                let mut input: RotationInput =
                    serde_json::from_str(&read(p)?).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
                if d2.is_some() {
                    input.d2 = d2.clone();
                }
                let r = run_rotation(&input)?;
                report.warnings = r.e_inf.warnings.clone();
                report.rotation = Some(RunOutput::Rotation(Box::new(r)));
            } else if d2.is_some() {
                return Err(Failure::Input("--d2 needs a rotation input file".into()));
            }
            if !variant.is_empty() {
                let fs = variant
                    .iter()
                    .map(|&(m, n)| pinwheel_variant_factors(m, n))
                    .collect::<tilecoh::Result<Vec<_>>>()?;
                report.variants = Some(compare_variants(&fs));
            }
            Ok(report)
        }
        Command::Export { name } => {
            let ds = datasets::load(name)?;
            let mut report = Report::new("export", name);
            report.export = Some(datasets::export(&ds)?);
            Ok(report)
        }
        Command::List => {
            let mut report = Report::new("list", "");
            report.listing = datasets::NAMES.iter().map(|s| s.to_string()).collect();
            Ok(report)
        }
    }
}

fn emit(report: &Report, format: Format) {
    match (format, &report.export) {
        (_, Some(text)) => println!("{text}"),
        (Format::Json, None) => println!("{}", serde_json::to_string_pretty(report).expect("report serializes")),
        (Format::Text, None) => print!("{}", report.render(Style::from_env())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(report) => {
            emit(&report, cli.format);
            ExitCode::SUCCESS
        }
        Err(Failure::Check(report)) => {
            emit(&report, cli.format);
            eprintln!("tilecoh: checkpoint failure");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            if cli.format == Format::Json {
                println!("{}", serde_json::json!({ "error": msg }));
            }
            eprintln!("tilecoh: {msg}");
            ExitCode::from(2)
        }
    }
}
