//! Batch front door: builds the truncated models, runs the verification
//! suites, and emits check, spectrum, and curvature reports as JSON lines
//! or CSV. Timing goes to stderr so report files stay byte-deterministic.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncspin::bundle::Calculus;
use ncspin::cuntz::CuntzModel;
use ncspin::group::CurvatureTable;
use ncspin::linalg::{cluster_eigenvalues, gram_hermitian_eigenvalues};
use ncspin::model::TotalSpaceModel;
use ncspin::pw::PeterWeylModel;
use ncspin::report::{self, CheckRow, CsvRow, CurvatureRow, SpectrumRow, SCHEMA};
use ncspin::spinor::{SpinorBundle, SPECTRUM_CLUSTER_GAP};
use ncspin::verify::{
    all_passed, base_checks, classical_dirac_check, cuntz_algebra_checks, frame_witness_check,
    kernel_checks, spinor_checks, CheckOutcome,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ncspin", version, about = "Verification workbench for truncated quantum spin bundle models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites and emit one row per check.
    Verify(RunArgs),
    /// Emit sorted eigenvalue/multiplicity rows for the model operators.
    Spectrum(RunArgs),
    /// Emit the frame curvature table with its scalar value and symmetry statuses.
    Curvature(RunArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    PeterWeyl,
    Cuntz,
}

impl Backend {
    fn label(self) -> &'static str {
        match self {
            Backend::PeterWeyl => "peter-weyl",
            Backend::Cuntz => "cuntz",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteFilter {
    All,
    Kernel,
    Algebra,
    Base,
    Spinor,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// Total-space model family.
    #[arg(long, value_enum, default_value_t = Backend::PeterWeyl)]
    backend: Backend,

    /// Frame dimension; must be even.
    #[arg(long, default_value_t = 2)]
    n: usize,

    /// Representation cutoff (2j bound) or Cuntz truncation level.
    #[arg(long, default_value_t = 2)]
    cutoff: u32,

    /// Number of Cuntz generators.
    #[arg(long, default_value_t = 2)]
    d: usize,

    /// Which check suites to run.
    #[arg(long, value_enum, default_value_t = SuiteFilter::All)]
    suite: SuiteFilter,

    /// Report encoding.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed for the sampled symbolic checks.
    #[arg(long, default_value_t = 11)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => cmd_verify(&args),
        Command::Spectrum(args) => cmd_spectrum(&args),
        Command::Curvature(args) => cmd_curvature(&args),
    }
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("usage error: {msg}");
    ExitCode::from(2)
}

fn validate(args: &RunArgs, needs_model: bool, needs_symbolic: bool) -> Option<ExitCode> {
    if args.n % 2 != 0 || args.n == 0 {
        return Some(usage("the frame dimension --n must be even and positive"));
    }
    if args.d < 2 {
        return Some(usage("--d must be at least 2"));
    }
    if needs_symbolic && args.d != 2 {
        return Some(usage("the symbolic relation suite is pinned at d = 2"));
    }
    if needs_model {
        if args.n != 2 {
            return Some(usage("the truncated backends are registered for n = 2 only"));
        }
        if args.backend == Backend::Cuntz && args.d != 2 {
            return Some(usage("the Cuntz backend is registered for d = 2 only"));
        }
    }
    None
}

fn emit<T: Serialize + CsvRow>(args: &RunArgs, rows: &[T]) -> Result<(), String> {
    let text = match args.format {
        Format::Json => report::json_lines(rows),
        Format::Csv => report::csv(rows),
    };
    match &args.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(args: &RunArgs) -> ExitCode {
    let run_kernel = matches!(args.suite, SuiteFilter::All | SuiteFilter::Kernel);
    let run_algebra = matches!(args.suite, SuiteFilter::All | SuiteFilter::Algebra);
    let run_base = matches!(args.suite, SuiteFilter::All | SuiteFilter::Base);
    let run_spinor = matches!(args.suite, SuiteFilter::All | SuiteFilter::Spinor);
    if let Some(code) = validate(args, run_base || run_spinor, run_algebra) {
        return code;
    }

    let start = Instant::now();
    let mut outcomes = Vec::new();
    if run_kernel {
        outcomes.extend(kernel_checks());
    }
    if run_algebra {
        outcomes.extend(cuntz_algebra_checks(args.seed));
    }
    match args.backend {
        Backend::PeterWeyl => {
            if run_base || run_spinor {
                let model = PeterWeylModel::new(args.cutoff);
                if run_base {
                    outcomes.extend(base_checks(&model, args.backend.label()));
                    outcomes.push(frame_witness_check(2));
                }
                if run_spinor {
                    outcomes.extend(spinor_checks(&model, args.backend.label(), args.cutoff <= 3));
                    outcomes.push(classical_dirac_check(args.cutoff));
                }
            }
        }
        Backend::Cuntz => {
            if run_base || run_spinor {
                let model = CuntzModel::new(args.cutoff);
                if run_base {
                    outcomes.extend(base_checks(&model, args.backend.label()));
                }
                if run_spinor {
                    outcomes.extend(spinor_checks(&model, args.backend.label(), args.cutoff <= 2));
                }
            }
        }
    }

    let rows: Vec<CheckRow> = outcomes.iter().map(CheckOutcome::to_row).collect();
    if let Err(msg) = emit(args, &rows) {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    eprintln!(
        "verify: {} checks, {} failed, {:.2?}",
        outcomes.len(),
        failed,
        start.elapsed()
    );
    if all_passed(&outcomes) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn spectrum_rows<M: TotalSpaceModel>(
    model: &M,
    backend: &str,
    cutoff: u32,
    rows: &mut Vec<SpectrumRow>,
) {
    let bundle = SpinorBundle::new(model).expect("even frame dimension");
    let n = bundle.n();
    if bundle.field_dim() == 0 {
        rows.push(SpectrumRow::warning("dirac", backend, n, cutoff, "empty field space at this cutoff"));
        rows.push(SpectrumRow::warning(
            "spinor-laplacian",
            backend,
            n,
            cutoff,
            "empty field space at this cutoff",
        ));
    } else {
        for (value, mult) in bundle.dirac_spectrum().expect("dirac preserves fields") {
            rows.push(SpectrumRow::cluster("dirac", backend, n, cutoff, value, mult));
        }
        for (value, mult) in bundle.laplace_spectrum().expect("laplacian preserves fields") {
            rows.push(SpectrumRow::cluster("spinor-laplacian", backend, n, cutoff, value, mult));
        }
    }

    let calc = Calculus::new(model);
    let complex = calc.base_complex().expect("base complex assembles");
    for k in 0..=n {
        let operator = format!("base-laplacian-{k}");
        if complex.bases[k].is_empty() {
            rows.push(SpectrumRow::warning(
                &operator,
                backend,
                n,
                cutoff,
                "empty form space at this degree",
            ));
            continue;
        }
        let eigs = gram_hermitian_eigenvalues(&complex.lap[k], &complex.gram[k]);
        for (value, mult) in cluster_eigenvalues(&eigs, SPECTRUM_CLUSTER_GAP) {
            rows.push(SpectrumRow::cluster(&operator, backend, n, cutoff, value, mult));
        }
    }
}

fn cmd_spectrum(args: &RunArgs) -> ExitCode {
    if let Some(code) = validate(args, true, false) {
        return code;
    }
    let start = Instant::now();
    let mut rows = Vec::new();
    match args.backend {
        Backend::PeterWeyl => {
            let model = PeterWeylModel::new(args.cutoff);
            spectrum_rows(&model, args.backend.label(), args.cutoff, &mut rows);
        }
        Backend::Cuntz => {
            let model = CuntzModel::new(args.cutoff);
            spectrum_rows(&model, args.backend.label(), args.cutoff, &mut rows);
        }
    }
    if let Err(msg) = emit(args, &rows) {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    eprintln!("spectrum: {} rows, {:.2?}", rows.len(), start.elapsed());
    ExitCode::SUCCESS
}

fn cmd_curvature(args: &RunArgs) -> ExitCode {
    if args.n % 2 != 0 || args.n == 0 {
        return usage("the frame dimension --n must be even and positive");
    }
    let start = Instant::now();
    let table = match CurvatureTable::new(args.n) {
        Ok(table) => table,
        Err(e) => return usage(&e.to_string()),
    };
    let n = args.n;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    rows.push(CurvatureRow {
                        schema: SCHEMA,
                        kind: "component".to_string(),
                        n,
                        indices: Some([i + 1, j + 1, k + 1, l + 1]),
                        value: Some(table.component(i, j, k, l).to_string()),
                        relation: None,
                        status: None,
                    });
                }
            }
        }
    }
    rows.push(CurvatureRow {
        schema: SCHEMA,
        kind: "scalar".to_string(),
        n,
        indices: None,
        value: Some(table.scalar_curvature().to_string()),
        relation: None,
        status: None,
    });

    let violations = table.symmetry_violations();
    let mut all_ok = true;
    let mut symmetry_row = |relation: &str, ok: bool, rows: &mut Vec<CurvatureRow>| {
        all_ok &= ok;
        rows.push(CurvatureRow {
            schema: SCHEMA,
            kind: "symmetry".to_string(),
            n,
            indices: None,
            value: None,
            relation: Some(relation.to_string()),
            status: Some(if ok { "ok" } else { "violated" }.to_string()),
        });
    };
    for (relation, key) in [
        ("index-antisymmetry-left", "index antisymmetry (left)"),
        ("index-antisymmetry-right", "index antisymmetry (right)"),
        ("pair-symmetry", "pair symmetry"),
        ("first-bianchi", "first Bianchi"),
    ] {
        let ok = !violations.iter().any(|v| v.contains(key));
        symmetry_row(relation, ok, &mut rows);
    }
    symmetry_row("reality", table.reality_violations().is_empty(), &mut rows);

    if let Err(msg) = emit(args, &rows) {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    eprintln!("curvature: {} rows, {:.2?}", rows.len(), start.elapsed());
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
