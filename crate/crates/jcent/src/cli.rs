//! Command-line interface. Reads state JSON from a file or stdin, writes
//! JSON or CSV to stdout. Exit codes: 0 success, 1 invalid input, 2
//! certificate failure (an assertion found a counterexample).

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::dynamics::{certify_generation, evolve_resonant, evolve_unitary, EvolutionSpec};
use crate::error::Error;
use crate::hull::hull_construct;
use crate::io::{
    read_state, verdict_str, CertificateJson, GenerationJson, HullJson, NormalFormJson,
    ReportJson, StudyJson, ValidityJson,
};
use crate::normal_form::{decompose, normal_form, tau_dense};
use crate::range::{certify_n4, range_search, RangeVerdict};
use crate::sample::{grid_scan_family, monte_carlo_study, sample_states, SampleConfig};
use crate::state::{partial_transpose, validate, SymmetricState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CERT_FAILURE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "jcent",
    about = "Entanglement criteria and certificates for excitation-number-conserving qubit-qudit states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a state JSON against the structural and positivity rules.
    Validate(StateInput),
    /// Evaluate every entanglement criterion on a state.
    Report(StateInput),
    /// Closed-form JC evolution; CSV time series of the criteria.
    Evolve(EvolveArgs),
    /// Scan the two-parameter bound-entangled family; CSV per grid point.
    ScanFamily(ScanArgs),
    /// Draw seeded random states (JSON lines) or run the study summary.
    Sample(SampleArgs),
    /// Explicit separable decomposition of the width-2/3 coherence carrier.
    Hull(HullArgs),
    /// Edge-state certificates: analytic family point, numeric search, or
    /// small-time generation.
    Certify(CertifyArgs),
}

#[derive(Args)]
struct StateInput {
    /// State JSON file; stdin when omitted.
    file: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[arg(long, default_value_t = 0.0)]
    omega0: f64,
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    #[arg(long)]
    t_max: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, default_value_t = 8)]
    ncut: usize,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 10.0)]
    y2_max: f64,
    #[arg(long, default_value_t = 10.0)]
    y3_max: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// RNG seed; omit only interactively (a warning is printed).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    ppt_only: bool,
    /// Draw unnormalized states (trace uniform in (0, 2)).
    #[arg(long)]
    unnormalized: bool,
    /// Run the criteria cross-check study and print its summary instead
    /// of the raw stream.
    #[arg(long)]
    study: bool,
}

#[derive(Args)]
struct HullArgs {
    /// Qudit dimension, 2 or 3.
    #[arg(long)]
    n: usize,
    /// Filter parameters y_1..y_{N-1}, comma-separated.
    #[arg(long, value_delimiter = ',')]
    y: Vec<f64>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Analytic certificate for the saturated width-4 family.
    #[arg(long)]
    y2: Option<f64>,
    #[arg(long)]
    y3: Option<f64>,
    /// Also run the generic numeric product-vector search and require
    /// agreement.
    #[arg(long)]
    search: bool,
    /// Small-time generation certificate (needs lambda, m, t; ncut = 4).
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[arg(long)]
    t: Option<f64>,
    /// Normal-form + search pipeline on a state JSON file.
    #[arg(long)]
    state: Option<PathBuf>,
}

fn read_input(input: &StateInput) -> Result<SymmetricState<f64>, Error> {
    let text = match &input.file {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    read_state(&text)
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::KernelMismatch(_) => EXIT_CERT_FAILURE,
        _ => EXIT_INVALID,
    }
}

fn cmd_validate(input: &StateInput) -> Result<i32, Error> {
    let state = read_input(input)?;
    let report = validate(&state)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&ValidityJson::from(&report))?
    );
    Ok(if report.ok { EXIT_OK } else { EXIT_INVALID })
}

fn cmd_report(input: &StateInput) -> Result<i32, Error> {
    let state = read_input(input)?;
    let report = validate(&state)?;
    if !report.ok {
        eprintln!("state violates positivity; refusing to report");
        return Ok(EXIT_INVALID);
    }
    let r = crate::criteria::report(&state)?;
    println!("{}", serde_json::to_string_pretty(&ReportJson::from(&r))?);
    Ok(EXIT_OK)
}

fn cmd_evolve(args: &EvolveArgs) -> Result<i32, Error> {
    let mut spec = EvolutionSpec::resonant(args.lambda, args.m, args.g, 0.0, args.ncut);
    spec.omega0 = args.omega0;
    spec.delta = args.delta;
    let initial = {
        let mut s0 = spec.clone();
        s0.delta = 0.0;
        evolve_resonant(&s0)?
    };
    println!("t,negativity,ccnr_norm,cm_gap,verdict");
    for k in 1..=args.steps {
        let t = args.t_max * k as f64 / args.steps as f64;
        spec.t = t;
        let state = if args.delta == 0.0 {
            evolve_resonant(&spec)?
        } else {
            evolve_unitary(&initial, &spec)?
        };
        let r = crate::criteria::report(&state)?;
        println!(
            "{t},{},{},{},{:?}",
            r.negativity,
            r.ccnr_norm,
            r.cm_rhs - r.cm_lhs,
            r.verdict
        );
    }
    Ok(EXIT_OK)
}

fn cmd_scan(args: &ScanArgs) -> Result<i32, Error> {
    let scan = grid_scan_family(args.y2_max, args.y3_max, args.step)?;
    println!("y2,y3,negativity,ccnr_norm,cm_gap,verdict");
    for row in &scan.rows {
        println!(
            "{},{},{},{},{},{}",
            row.y2,
            row.y3,
            row.negativity,
            row.ccnr_norm,
            row.cm_gap,
            verdict_str(row.verdict)
        );
    }
    if scan.ppt_failures + scan.cm_violations + scan.uncertified > 0 {
        eprintln!(
            "assertion counterexamples: {} PPT failures, {} CM violations, {} uncertified",
            scan.ppt_failures, scan.cm_violations, scan.uncertified
        );
        return Ok(EXIT_CERT_FAILURE);
    }
    Ok(EXIT_OK)
}

fn cmd_sample(args: &SampleArgs) -> Result<i32, Error> {
    let seed = match args.seed {
        Some(s) => s,
        None => {
            eprintln!("warning: no --seed given, defaulting to 0; pass --seed in scripts");
            0
        }
    };
    let cfg = SampleConfig {
        n: args.n,
        count: args.count,
        seed,
        normalized: !args.unnormalized,
        ppt_only: args.ppt_only,
    };
    if args.study {
        let report = monte_carlo_study::<f64>(&cfg)?;
        let failed = !report.counterexamples.is_empty();
        println!("{}", serde_json::to_string_pretty(&StudyJson::from(&report))?);
        return Ok(if failed { EXIT_CERT_FAILURE } else { EXIT_OK });
    }
    for state in sample_states::<f64>(&cfg)? {
        println!(
            "{}",
            serde_json::to_string(&crate::io::StateJson::from(&state))?
        );
    }
    Ok(EXIT_OK)
}

fn cmd_hull(args: &HullArgs) -> Result<i32, Error> {
    let hull = hull_construct(args.n, &args.y)?;
    println!("{}", serde_json::to_string_pretty(&HullJson::from(&hull))?);
    Ok(EXIT_OK)
}

fn cmd_certify(args: &CertifyArgs) -> Result<i32, Error> {
    if let Some(path) = &args.state {
        let state = read_state(&std::fs::read_to_string(path)?)?;
        let nf = normal_form(&state)?;
        let mut certs = Vec::new();
        for seg in &nf.segments {
            let (_, tau) = decompose(seg)?;
            let dense = tau_dense(&tau);
            let pt = partial_transpose(&dense)?;
            certs.push(CertificateJson::from(&range_search(&dense, &pt)?));
        }
        let out = serde_json::json!({
            "normal_form": NormalFormJson::from(&nf),
            "certificates": certs,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(EXIT_OK);
    }
    if let (Some(y2), Some(y3)) = (args.y2, args.y3) {
        let cert = certify_n4(y2, y3)?;
        if args.search {
            let tau = tau_dense(&crate::normal_form::tau_n4(y2, y2, y3));
            let pt = partial_transpose(&tau)?;
            let numeric = range_search(&tau, &pt)?;
            if numeric.verdict != cert.verdict {
                eprintln!(
                    "analytic and numeric verdicts disagree: {} vs {}",
                    verdict_str(cert.verdict),
                    verdict_str(numeric.verdict)
                );
                return Ok(EXIT_CERT_FAILURE);
            }
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&CertificateJson::from(&cert))?
        );
        let failed = cert.verdict == RangeVerdict::Npt;
        return Ok(if failed { EXIT_CERT_FAILURE } else { EXIT_OK });
    }
    if let (Some(lambda), Some(m), Some(t)) = (args.lambda, args.m, args.t) {
        let spec = EvolutionSpec::resonant(lambda, m, args.g, t, 4);
        let cert = certify_generation(&spec)?;
        println!(
            "{}",
            serde_json::to_string_pretty(&GenerationJson::from(&cert))?
        );
        return Ok(EXIT_OK);
    }
    Err(Error::InvalidParam(
        "certify needs --y2/--y3, or --lambda/--m/--t, or --state".into(),
    ))
}

/// Entry point; returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/usage itself
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Validate(input) => cmd_validate(input),
        Command::Report(input) => cmd_report(input),
        Command::Evolve(args) => cmd_evolve(args),
        Command::ScanFamily(args) => cmd_scan(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Hull(args) => cmd_hull(args),
        Command::Certify(args) => cmd_certify(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
