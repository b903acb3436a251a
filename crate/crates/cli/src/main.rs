use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jbtriple::chains::{cert_hct, cert_ht, cert_nt, cert_simht_unitary, verify_certificate, Claim};
use jbtriple::fixtures::run_fixture_suite;
use jbtriple::fuzz::{fuzz, parse_families, FuzzConfig};
use jbtriple::io::{certificate_to_string, read_certificate, read_element};
use jbtriple::relations::{relate, RelationKind, Witness};
use jbtriple::tripotents::Tripotent;
use jbtriple::Error;

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "jbtriple", version, about = "Relations and certified chains between tripotents")]
struct Cli {
    /// Numerical tolerance; defaults to the tolerance declared in the input files, else 1e-9.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Start of the default fuzz seed range.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a tripotent and print its Peirce dimensions.
    Classify { file: PathBuf },
    /// Decide `u R e`; KIND is a relation name such as LE_H, or `all`.
    Relate { kind: String, u: PathBuf, e: PathBuf },
    /// Build a chain certificate for LE_NT, SIM_HT, LE_HT or LE_HCT.
    Chain {
        claim: String,
        u: PathBuf,
        e: PathBuf,
        /// Write the certificate as JSON.
        #[arg(long)]
        emit_cert: Option<PathBuf>,
    },
    /// Re-check a certificate link by link.
    VerifyCert { path: PathBuf },
    /// Run the built-in example fixtures.
    PaperVerify,
    /// Random pairs checked against the implication lattice and the chain builders.
    Fuzz {
        /// Family tokens, e.g. `matrix:2..4`, `spin`, `M3s,M4a`.
        #[arg(long, num_args = 1.., value_delimiter = ' ')]
        families: Vec<String>,
        /// Seed range `a..b` (half-open).
        #[arg(long)]
        seeds: Option<String>,
        /// Upper dimension for open family ranges.
        #[arg(long, default_value_t = 5)]
        max_dim: usize,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn exit_for(err: &Error) -> u8 {
    match err {
        e if e.is_non_convergence() => EXIT_NUMERICAL,
        Error::CompletionFailed { .. } | Error::RootOutsideSystem { .. } | Error::LinkVerificationFailed { .. } => {
            EXIT_NUMERICAL
        }
        Error::NotLe2 { .. } | Error::InvariantObstruction(_) | Error::NoUnitaryExists(_) | Error::NotUnitary => {
            EXIT_MISMATCH
        }
        _ => EXIT_INPUT,
    }
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_for(&err))
}

fn tripotent(path: &Path, tol: Option<f64>) -> Result<Tripotent, Error> {
    let x = read_element(path, tol)?;
    Tripotent::new(x).map_err(|e| match e {
        Error::NotTripotent { residual } => {
            Error::Parse(format!("{} is not a tripotent (residual {residual:.3e})", path.display()))
        }
        other => other,
    })
}

fn classify(file: &Path, tol: Option<f64>) -> Result<u8, Error> {
    let u = tripotent(file, tol)?;
    let d = u.peirce_dims();
    println!("system          {}", u.system());
    println!("classification  {:?}", u.classification());
    println!("rank            {}", u.rank());
    println!("peirce dims     E2={} E1={} E0={}", d.d2, d.d1, d.d0);
    println!("residual        {:.3e}", u.residual());
    Ok(0)
}

fn describe_witness(w: &Witness) -> String {
    match w {
        Witness::Phase(a) => format!("phase {:.6}{:+.6}i", a.re, a.im),
        Witness::Projections { .. } => "u = p - q".to_string(),
        Witness::Tripotent(_) => "{u,u,e} is a tripotent".to_string(),
    }
}

fn relate_cmd(kind: &str, u: &Path, e: &Path, tol: Option<f64>) -> Result<u8, Error> {
    let kinds: Vec<RelationKind> = if kind.eq_ignore_ascii_case("all") {
        RelationKind::ALL.to_vec()
    } else {
        vec![kind.parse()?]
    };
    let u = tripotent(u, tol)?;
    let e = tripotent(e, tol)?;
    println!("{:<8} {:<6} {:>11}  witness", "relation", "holds", "residual");
    for k in kinds {
        let v = relate(k, &u, &e)?;
        let witness = v.witness.as_ref().filter(|_| v.holds).map(describe_witness).unwrap_or_default();
        println!("{:<8} {:<6} {:>11.3e}  {}", k.name(), v.holds, v.residual, witness);
    }
    Ok(0)
}

fn chain_cmd(claim: &str, u: &Path, e: &Path, emit: Option<&Path>, tol: Option<f64>) -> Result<u8, Error> {
    let claim: Claim = claim.parse()?;
    let u = tripotent(u, tol)?;
    let e = tripotent(e, tol)?;
    let cert = match claim {
        Claim::LeNt => cert_nt(&u, &e),
        Claim::SimHt => cert_simht_unitary(&u, &e),
        Claim::LeHt => cert_ht(&u, &e),
        Claim::LeHct => cert_hct(&u, &e),
    }?;
    println!("claim     {}", cert.claim);
    println!("system    {}", cert.system);
    println!("length    {}", cert.length());
    for (i, (rel, res)) in cert.link_relations.iter().zip(&cert.residuals).enumerate() {
        println!("  link {i}: {:<6} residual {res:.3e}", rel.name());
    }
    println!("verified  {}", cert.verified);
    if let Some(path) = emit {
        std::fs::write(path, certificate_to_string(&cert))
            .map_err(|err| Error::Parse(format!("{}: {err}", path.display())))?;
        println!("wrote     {}", path.display());
    }
    Ok(if cert.verified { 0 } else { EXIT_MISMATCH })
}

fn verify_cmd(path: &Path, tol: Option<f64>) -> Result<u8, Error> {
    let cert = read_certificate(path, tol)?;
    let check = verify_certificate(&cert);
    println!("claim     {}", cert.claim);
    println!("system    {}", cert.system);
    println!("length    {}", cert.length());
    for (i, res) in check.link_residuals.iter().enumerate() {
        println!("  link {i}: residual {res:.3e}");
    }
    for p in &check.problems {
        println!("  problem: {p}");
    }
    println!("accepted  {}", check.accepted);
    Ok(if check.accepted { 0 } else { EXIT_MISMATCH })
}

fn paper_verify() -> Result<u8, Error> {
    let report = run_fixture_suite();
    println!("{:<26} {:<8} {:>6} {:>6}", "case", "system", "checks", "status");
    for case in &report.cases {
        let status = if case.passed() { "PASS" } else { "FAIL" };
        println!("{:<26} {:<8} {:>6} {:>6}", case.id, case.system, case.checks.len(), status);
        for check in case.checks.iter().filter(|c| !c.pass) {
            println!("    mismatch: {} (residual {:.3e})", check.detail, check.residual);
        }
    }
    println!(
        "{} cases, {} checks, max residual {:.3e}: {}",
        report.cases.len(),
        report.check_count(),
        report.max_positive_residual(),
        if report.passed() { "PASS" } else { "FAIL" }
    );
    Ok(if report.passed() { 0 } else { EXIT_MISMATCH })
}

fn parse_seeds(text: &str) -> Result<std::ops::Range<u64>, Error> {
    let bad = || Error::Config(format!("seed range must look like a..b, got {text:?}"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..b)
}

fn fuzz_cmd(
    families: &[String],
    seeds: Option<&str>,
    seed: Option<u64>,
    max_dim: usize,
    json: Option<&Path>,
    tol: Option<f64>,
) -> Result<u8, Error> {
    let defaults = ["matrix".to_string(), "symmetric".to_string(), "antisymmetric".to_string(), "spin".to_string()];
    let tokens = if families.is_empty() { &defaults[..] } else { families };
    let systems = parse_families(tokens, max_dim, tol.unwrap_or(1e-9))?;
    let seeds = match seeds {
        Some(text) => parse_seeds(text)?,
        None => {
            let start = seed.unwrap_or(0);
            start..start.saturating_add(100)
        }
    };
    let report = fuzz(&FuzzConfig { systems, seeds });
    print!("{}", report.table());
    for f in report.lattice_violations.iter().chain(&report.certificate_failures).chain(&report.numerical_errors) {
        println!("  seed {} {} [{}] {}: {}", f.seed, f.system, f.mode, f.check, f.detail);
    }
    if let Some(path) = json {
        std::fs::write(path, report.to_json()).map_err(|err| Error::Parse(format!("{}: {err}", path.display())))?;
    }
    Ok(if report.passed() {
        0
    } else if report.lattice_violations.is_empty() && report.certificate_failures.is_empty() {
        EXIT_NUMERICAL
    } else {
        EXIT_MISMATCH
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return fail(Error::Config(format!("tolerance must be positive, got {t}")));
        }
    }
    let result = match &cli.command {
        Command::Classify { file } => classify(file, cli.tol),
        Command::Relate { kind, u, e } => relate_cmd(kind, u, e, cli.tol),
        Command::Chain { claim, u, e, emit_cert } => chain_cmd(claim, u, e, emit_cert.as_deref(), cli.tol),
        Command::VerifyCert { path } => verify_cmd(path, cli.tol),
        Command::PaperVerify => paper_verify(),
        Command::Fuzz { families, seeds, max_dim, json } => {
            fuzz_cmd(families, seeds.as_deref(), cli.seed, *max_dim, json.as_deref(), cli.tol)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => fail(err),
    }
}
