//! The `kt` command line.
//!
//! Exit codes: 0 when no check failed, 1 when some check failed, 2 for usage
//! errors, unreadable files and model diagnostics.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::ansatz::Bounds;
use crate::bf::{self, VerifyOptions};
use crate::dsl::{self, Model};
use crate::koszul_tate::{self, KTComplex};
use crate::report::{Check, Report};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "kt", version, about = "Koszul-Tate complexes of Lagrangian field models")]
pub struct Args {
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Euler-Lagrange expressions of a model.
    El { file: PathBuf },
    /// Check nilpotency of the Koszul-Tate differential on every generator.
    Check { file: PathBuf },
    /// Search for Noether identities within a bounded ansatz.
    Search {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        jet_order: usize,
        #[arg(long, default_value_t = 0)]
        degree: u32,
    },
    /// Build and verify the BF model in the given dimension.
    Bf {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        jet_order: usize,
        #[arg(long, default_value_t = 0)]
        degree: u32,
        /// Cap on antifield factors in regularity probes [default: 3, or 2 when dim is 5].
        #[arg(long)]
        probe_factors: Option<u32>,
    },
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load(file: &PathBuf) -> Result<Model, Failure> {
    let src = std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    dsl::load_model(&src).map_err(|e| Failure::Usage(format!("{}:{e}", file.display())))
}

/// Euler-Lagrange expressions as report outputs named `E[<component>]`.
pub fn el_report(model: &Model, command: impl Into<String>) -> crate::Result<Report> {
    let mut report = Report::new(command).with_model_text(&model.canonical_text());
    let kt = KTComplex::extend_with_antifields(model.signature.clone(), model.lagrangian.clone())?;
    let sig = kt.signature();
    for ((f, c), e) in kt.euler_lagrange() {
        report.output(format!("E[{}]", sig.format_component(*f, c)), e.to_text(sig));
    }
    Ok(report)
}

/// One nilpotency check per generator; structural problems with the stage
/// declarations become a single failed `structure` check.
pub fn check_report(model: &Model, command: impl Into<String>) -> Report {
    let mut report = Report::new(command).with_model_text(&model.canonical_text());
    match model.complex_unchecked() {
        Ok(kt) => {
            let sig = kt.signature();
            for e in kt.check_nilpotency().entries {
                report.push(Check::zero(format!("nilpotency[{}]", e.generator), e.residual.to_text(sig)));
            }
        }
        Err(e) => report.push(Check::fail("structure", e.to_string())),
    }
    report
}

/// Noether identities of the model's fields within `bounds`, as outputs
/// `noether[i]`.
pub fn search_report(model: &Model, bounds: &Bounds, command: impl Into<String>) -> crate::Result<Report> {
    let mut report = Report::new(command).with_model_text(&model.canonical_text());
    let kt = KTComplex::extend_with_antifields(model.signature.clone(), model.lagrangian.clone())?;
    let t = std::time::Instant::now();
    let basis = koszul_tate::noether_search(&kt, bounds);
    for (i, b) in basis.basis.iter().enumerate() {
        report.output(format!("noether[{i}]"), b.to_text(kt.signature()));
    }
    report.push_timed(
        Check::pass("noether-search").with_value(basis.basis.len()).with_detail(format!(
            "cycles {}, trivial {}, jet order <= {}, degree <= {}",
            basis.cycles, basis.trivial, bounds.jet_order, bounds.degree
        )),
        t.elapsed(),
    );
    Ok(report)
}

fn el(file: &PathBuf) -> Result<Report, Failure> {
    let model = load(file)?;
    Ok(el_report(&model, format!("el {}", file.display()))?)
}

fn check(file: &PathBuf) -> Result<Report, Failure> {
    let model = load(file)?;
    Ok(check_report(&model, format!("check {}", file.display())))
}

fn search(file: &PathBuf, jet_order: usize, degree: u32) -> Result<Report, Failure> {
    let model = load(file)?;
    let command = format!("search {} --jet-order {jet_order} --degree {degree}", file.display());
    Ok(search_report(&model, &Bounds::new(jet_order, degree), command)?)
}

fn bf_command(dim: usize, jet_order: usize, degree: u32, probe_factors: Option<u32>) -> Result<Report, Failure> {
    if !(2..=bf::MAX_DIM).contains(&dim) {
        return Err(Failure::Usage(format!("--dim must be between 2 and {}", bf::MAX_DIM)));
    }
    let mut opts = VerifyOptions::for_dim(dim, jet_order, degree);
    if let Some(f) = probe_factors {
        if f == 0 {
            return Err(Failure::Usage("--probe-factors must be positive".into()));
        }
        opts.probe_factors = f;
    }
    Ok(bf::verify_bf(dim, &opts)?)
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &args.command {
        Command::El { file } => el(file),
        Command::Check { file } => check(file),
        Command::Search { file, jet_order, degree } => search(file, *jet_order, *degree),
        Command::Bf { dim, jet_order, degree, probe_factors } => bf_command(*dim, *jet_order, *degree, *probe_factors),
    };
    let report = match result {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    emit(&report, args.json.as_deref(), out, err)
}

/// Prints the report, writes the JSON copy and maps the outcome to an exit
/// code.
fn emit(report: &Report, json: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let _ = out.write_all(report.to_text().as_bytes());
    if let Some(path) = json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return 2;
        }
    }
    let inconclusive = report.summary().inconclusive;
    if inconclusive > 0 {
        let _ = writeln!(err, "warning: {inconclusive} check(s) inconclusive within bounds");
    }
    i32::from(report.has_failures())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codes(checks: Vec<Check>) -> (i32, String) {
        let mut r = Report::new("test");
        for c in checks {
            r.push(c);
        }
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = emit(&r, None, &mut out, &mut err);
        (code, String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes_follow_the_worst_status() {
        assert_eq!(codes(vec![Check::pass("a")]), (0, String::new()));
        let (code, warn) = codes(vec![Check::pass("a"), Check::inconclusive("b"), Check::inconclusive("c")]);
        assert_eq!(code, 0);
        assert_eq!(warn, "warning: 2 check(s) inconclusive within bounds\n");
        assert_eq!(codes(vec![Check::inconclusive("b"), Check::fail("c", "1*x1")]).0, 1);
    }

    #[test]
    fn unwritable_json_path_is_a_usage_error() {
        let r = Report::new("test");
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = emit(&r, Some(Path::new("/nonexistent/dir/report.json")), &mut out, &mut err);
        assert_eq!(code, 2);
    }

    #[test]
    fn in_process_run() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["kt", "bf", "--dim", "2"], &mut out, &mut err), 0);
        assert!(String::from_utf8(out).unwrap().ends_with("summary: 11 pass, 0 fail, 0 inconclusive-within-bounds\n"));
        assert_eq!(run(["kt", "bf", "--dim", "7"], &mut Vec::new(), &mut err), 2);
    }
}
