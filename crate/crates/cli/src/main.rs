//! Command-line front end for lattice classification and deformation
//! planning. Inputs and outputs are JSON: stdout carries exactly one
//! machine-readable JSON document per run, stderr carries human diagnostics.
//!
//! Exit codes: 0 success; 2 invalid input; 3 a search cap was exceeded;
//! 4 the algorithm itself failed (planning, or verification of a trace).

use std::fs;
use std::path::Path;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use latplan_core::moves::{apply_move, retarget_gamma_forced};
use latplan_core::{
    builtins, classify, enumerate_involutions, plan_path, verify_trace, ClassificationReport,
    Error, Involution, Lattice, MoveParams, PlanParams, RealTriple, Signature, Trace,
    VerifyParams,
};

#[derive(Parser)]
#[command(
    name = "latplan",
    version,
    about = "Classify involutions on integral lattices and plan certified deformations of real period triples"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Numerical tolerance for validation, membership, and orthogonality tests
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// How close the final γ must come to the target class
    #[arg(long, global = true, default_value_t = 1e-6)]
    terminal_tol: f64,

    /// Size of the perturbation move used to reach genericity
    #[arg(long, global = true, default_value_t = 1e-3)]
    delta: f64,

    /// Integer box radius scanned by the genericity test
    #[arg(long, global = true, default_value_t = 5)]
    coeff_bound: i64,

    /// Integer box radius for involution enumeration
    #[arg(long, global = true, default_value_t = 1)]
    entry_bound: i64,

    /// Base seed for all randomized moves
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// How many fresh perturbations to try before giving up on genericity
    #[arg(long, global = true, default_value_t = 32)]
    max_retries: u32,

    /// Apply a retarget without the genericity check (the result is uncertified)
    #[arg(long, global = true)]
    force: bool,

    /// Run this many independent planner instances with consecutive seeds
    #[arg(long, global = true)]
    batch: Option<u32>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Signature and primitivity of a lattice
    Signature {
        /// Built-in name ("U", "E8(-1)", "K3", "diag(...)") or JSON file
        lattice: String,
    },
    /// Eigenlattice signatures, index, and the real-type predicate for one involution
    Classify {
        lattice: String,
        /// JSON file {"matrix": [[...], ...]}
        involution: String,
    },
    /// All involutive isometries with entries in the box, classified
    Enumerate { lattice: String },
    /// Apply a single move to a triple
    Move {
        lattice: String,
        involution: String,
        /// JSON file {"omega_plus": [...], "omega_minus": [...], "gamma": [...]}
        triple: String,
        /// Inline JSON or file, e.g. {"kind":"Rotate","theta":0.5}
        params: String,
    },
    /// Deform a triple until γ equals the target class, emitting a certified trace
    Plan {
        lattice: String,
        involution: String,
        triple: String,
        /// Target class as an inline JSON integer vector, e.g. "[0,2,1,0]"
        #[arg(long)]
        target: String,
    },
    /// Re-check a trace from scratch
    Verify {
        lattice: String,
        involution: String,
        /// JSON trace file as produced by `plan`
        trace: String,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn input<S: Into<String>>(message: S) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn from_core(e: Error) -> Failure {
    let code = match e {
        Error::BoxTooLarge { .. } | Error::SearchSpaceTooLarge { .. } => 3,
        Error::GenericityUnreachable { .. } | Error::LemmaFailed(_) | Error::PositivityLost => 4,
        _ => 2,
    };
    Failure { code, message: e.to_string() }
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable output"));
}

fn read_json<T: DeserializeOwned>(path: &str, what: &str) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {what} file {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{what} file {path}: {e}")))
}

fn load_lattice(arg: &str) -> Result<Lattice, Failure> {
    if let Some(named) = builtins::named_lattice(arg) {
        return named.map_err(from_core);
    }
    if !Path::new(arg).exists() {
        return Err(input(format!(
            "unknown lattice '{arg}': not a built-in name (\"U\", \"E8(-1)\", \"K3\", \
             \"diag(...)\") and no such file"
        )));
    }
    read_json(arg, "lattice")
}

#[derive(Deserialize)]
struct InvolutionFile {
    matrix: Vec<Vec<i64>>,
}

fn load_involution(lat: &Lattice, path: &str) -> Result<Involution, Failure> {
    let file: InvolutionFile = read_json(path, "involution")?;
    Involution::new(lat, file.matrix).map_err(from_core)
}

fn load_move_params(arg: &str) -> Result<MoveParams, Failure> {
    match serde_json::from_str(arg) {
        Ok(params) => Ok(params),
        Err(inline_err) => {
            if Path::new(arg).exists() {
                read_json(arg, "move parameters")
            } else {
                Err(input(format!(
                    "move parameters '{arg}' are neither inline JSON ({inline_err}) nor a file"
                )))
            }
        }
    }
}

#[derive(Serialize)]
struct SignatureOutput {
    sig: Signature,
    primitive: bool,
}

#[derive(Serialize)]
struct EnumeratedInvolution<'a> {
    matrix: &'a [Vec<i64>],
    classification: ClassificationReport,
}

#[derive(Serialize)]
struct EnumerationOutput<'a> {
    total: usize,
    rht: usize,
    involutions: Vec<EnumeratedInvolution<'a>>,
}

#[derive(Serialize)]
struct MoveOutput {
    triple: RealTriple,
    certified: bool,
}

fn check_config(cli: &Cli) -> Result<(), Failure> {
    for (name, v) in [("tol", cli.tol), ("terminal-tol", cli.terminal_tol)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(input(format!("--{name} must be positive and finite")));
        }
    }
    if !cli.delta.is_finite() || cli.delta < 0.0 {
        return Err(input("--delta must be nonnegative and finite"));
    }
    if cli.coeff_bound < 0 {
        return Err(input("--coeff-bound must be nonnegative"));
    }
    if cli.entry_bound < 0 {
        return Err(input("--entry-bound must be nonnegative"));
    }
    if cli.batch == Some(0) {
        return Err(input("--batch must be at least 1"));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, Failure> {
    check_config(&cli)?;
    if cli.force && !matches!(cli.cmd, Cmd::Move { .. }) {
        eprintln!("note: --force only affects `move`");
    }
    if cli.batch.is_some() && !matches!(cli.cmd, Cmd::Plan { .. }) {
        eprintln!("note: --batch only affects `plan`");
    }

    match &cli.cmd {
        Cmd::Signature { lattice } => {
            let lat = load_lattice(lattice)?;
            emit(&SignatureOutput { sig: lat.signature(), primitive: lat.is_primitive_form() });
            Ok(0)
        }
        Cmd::Classify { lattice, involution } => {
            let lat = load_lattice(lattice)?;
            let c = load_involution(&lat, involution)?;
            emit(&classify(&lat, &c));
            Ok(0)
        }
        Cmd::Enumerate { lattice } => {
            let lat = load_lattice(lattice)?;
            let found = enumerate_involutions(&lat, cli.entry_bound).map_err(from_core)?;
            let involutions: Vec<EnumeratedInvolution> = found
                .iter()
                .map(|c| EnumeratedInvolution {
                    matrix: c.matrix(),
                    classification: classify(&lat, c),
                })
                .collect();
            let rht = involutions.iter().filter(|e| e.classification.is_rht).count();
            eprintln!(
                "note: searched integer matrices with entries in [-{0}, {0}]; \
                 isometries outside this box are not reported",
                cli.entry_bound
            );
            emit(&EnumerationOutput { total: involutions.len(), rht, involutions });
            Ok(0)
        }
        Cmd::Move { lattice, involution, triple, params } => {
            let lat = load_lattice(lattice)?;
            let c = load_involution(&lat, involution)?;
            let split = c.eigenlattices(&lat);
            let t: RealTriple = read_json(triple, "triple")?;
            let params = load_move_params(params)?;
            let (result, certified) = match (&params, cli.force) {
                (MoveParams::Retarget { new_gamma }, true) => (
                    retarget_gamma_forced(&lat, &split, &t, new_gamma, cli.tol)
                        .map_err(from_core)?,
                    false,
                ),
                _ => (
                    apply_move(&lat, &split, &t, &params, cli.coeff_bound, cli.tol)
                        .map_err(from_core)?,
                    true,
                ),
            };
            emit(&MoveOutput { triple: result, certified });
            Ok(0)
        }
        Cmd::Plan { lattice, involution, triple, target } => {
            let lat = load_lattice(lattice)?;
            let c = load_involution(&lat, involution)?;
            let split = c.eigenlattices(&lat);
            let t0: RealTriple = read_json(triple, "triple")?;
            let target: Vec<i64> = serde_json::from_str(target)
                .map_err(|e| input(format!("--target must be a JSON integer vector: {e}")))?;
            let instances = cli.batch.unwrap_or(1);
            let mut traces: Vec<Trace> = Vec::with_capacity(instances as usize);
            for i in 0..u64::from(instances) {
                let params = PlanParams {
                    tol: cli.tol,
                    terminal_tol: cli.terminal_tol,
                    delta: cli.delta,
                    coeff_bound: cli.coeff_bound,
                    seed: cli.seed.wrapping_add(i),
                    max_retries: cli.max_retries,
                };
                let trace = plan_path(&lat, &c, &split, &t0, &target, &params).map_err(|e| {
                    let mut f = from_core(e);
                    if instances > 1 {
                        f.message = format!("instance with seed {}: {}", params.seed, f.message);
                    }
                    f
                })?;
                traces.push(trace);
            }
            let all_succeeded = traces.iter().all(|t| t.success);
            if cli.batch.is_some() {
                emit(&traces);
            } else {
                emit(&traces[0]);
            }
            if all_succeeded {
                Ok(0)
            } else {
                eprintln!("planning did not reach the target");
                Ok(4)
            }
        }
        Cmd::Verify { lattice, involution, trace } => {
            let lat = load_lattice(lattice)?;
            let c = load_involution(&lat, involution)?;
            let split = c.eigenlattices(&lat);
            let trace: Trace = read_json(trace, "trace")?;
            let params = VerifyParams {
                tol: cli.tol,
                terminal_tol: cli.terminal_tol,
                coeff_bound: cli.coeff_bound,
            };
            let report = verify_trace(&lat, &c, &split, &trace, &params);
            emit(&report);
            if report.pass {
                Ok(0)
            } else {
                let why = report
                    .notes
                    .first()
                    .cloned()
                    .or_else(|| {
                        report.steps.iter().find(|s| !s.pass).map(|s| {
                            format!(
                                "step {} failed{}",
                                s.index,
                                s.detail.as_deref().map(|d| format!(": {d}")).unwrap_or_default()
                            )
                        })
                    })
                    .unwrap_or_else(|| "trace did not verify".into());
                eprintln!("verification failed: {why}");
                Ok(4)
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    std::process::exit(code);
}
