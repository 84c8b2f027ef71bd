//! `qzero`: reproducible zero-error capacity experiments with JSON output.
//!
//! Exit codes: 0 success or pass, 1 verification failed, 2 invalid input,
//! 3 search found no code (evidence only).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use qzero_core::certbounds::{
    amplification, capacity_lower_bound, certify, delta_p, delta_p_tracenorm, graph_factors,
};
use qzero_core::channelforge::{
    channel_basis, default_env_vectors, diagonal_basis_vectors, is_classical_quantum, noncommutative_graph,
    stinespring,
};
use qzero_core::codecheck::{build_code_family, verify_code, verify_family, CodeCandidate};
use qzero_core::codesearch::{find_code_pair, SearchConfig, SearchStatus};
use qzero_core::graphspace::{check_graph_conditions, subspace_l};
use qzero_core::matcore::{subspace_distance, SubspaceBasis};
use qzero_core::scenario::{corollary1, superactivation};
use qzero_core::span::tensor_subspace;
use qzero_core::{tol, Error};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_EVIDENCE: u8 = 3;

#[derive(Parser)]
#[command(name = "qzero", version, about = "Zero-error capacity experiments on deformed noncommutative graphs")]
struct Cli {
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance: Knill-Laflamme checks, or the success threshold of `search`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Cap on ambient dimensions of tensor constructions.
    #[arg(long, global = true, default_value_t = tol::DIM_CAP)]
    cap: usize,
    /// Write JSON to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Basis and structural report of L^p_θ or a tensor product of such.
    Graph(GraphArgs),
    /// Stinespring isometry, graph or report of the channel Φ_θ.
    Channel(ChannelArgs),
    /// Build or verify codes.
    #[command(subcommand)]
    Code(CodeCommand),
    /// Multi-start search for a two-dimensional code.
    Search(SearchArgs),
    /// δ_p, θ_n, copy counts and amplification factors.
    Bounds(BoundsArgs),
    /// Zero-capacity certificate for a list of angles.
    Certify(AngleArgs),
    /// Composite experiments.
    #[command(subcommand)]
    Scenario(ScenarioCommand),
}

#[derive(Args)]
struct AngleArgs {
    /// Comma-separated angles; accepts numbers and forms like `pi/3`, `2pi/3`.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle, allow_hyphen_values = true)]
    theta_list: Option<Vec<f64>>,
    /// Single angle, repeated `n` times.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, conflicts_with = "theta_list")]
    theta: Option<f64>,
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Number of copies when `--theta` is given.
    #[arg(long)]
    n: Option<usize>,
}

impl AngleArgs {
    fn angles(&self) -> Result<Vec<f64>, Error> {
        match (&self.theta_list, self.theta) {
            (Some(list), _) => {
                if self.n.is_some_and(|n| n != list.len()) {
                    return Err(Error::Validation("--n disagrees with the length of --theta-list".into()));
                }
                Ok(list.clone())
            }
            (None, Some(t)) => Ok(vec![t; self.n.unwrap_or(1)]),
            (None, None) => Err(Error::Validation("give --theta or --theta-list".into())),
        }
    }
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    angles: AngleArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Isometry,
    Graph,
    Report,
}

#[derive(Args)]
struct ChannelArgs {
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    theta: f64,
    /// Environment dimension, 2 or 4.
    #[arg(long, default_value_t = 2)]
    env: usize,
    #[arg(long, value_enum, default_value_t = Emit::Report)]
    emit: Emit,
}

#[derive(Subcommand)]
enum CodeCommand {
    /// Base code and its family for n copies.
    Build {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Knill-Laflamme check of a code family (built-in) or a code file against a graph file.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    angles: AngleArgs,
    /// Graph JSON (a subspace basis, or the output of `graph`).
    #[arg(long, requires = "code")]
    graph: Option<PathBuf>,
    /// Code JSON with `dim_ambient` and `vectors`.
    #[arg(long, requires = "graph")]
    code: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    angles: AngleArgs,
    /// Graph JSON instead of built-in angles.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    n: usize,
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// No code for n copies of Φ_{π/m}, codes for m copies.
    Corollary1 {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Searches on L_θ and L_{π-θ}, code family for their product.
    Superactivation {
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
    },
}

/// Parses `1.5`, `pi`, `-pi/2`, `2pi/3`, `2*pi/3`.
fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() { Ok(v) } else { Err(format!("angle `{s}` is not finite")) };
    }
    let bad = || format!("cannot parse angle `{s}`");
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.to_string(), b.parse::<f64>().map_err(|_| bad())?),
        None => (t.clone(), 1.0),
    };
    let coef = num.strip_suffix("pi").ok_or_else(bad)?.trim_end_matches('*');
    let k = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(k * std::f64::consts::PI / den)
}

struct Outcome {
    json: serde_json::Value,
    code: u8,
}

fn ok(v: impl Serialize) -> Result<Outcome, Error> {
    with_code(v, 0)
}

fn with_code(v: impl Serialize, code: u8) -> Result<Outcome, Error> {
    let json = serde_json::to_value(v).map_err(|e| Error::Internal(e.to_string()))?;
    Ok(Outcome { json, code })
}

fn read_json(path: &Path) -> Result<serde_json::Value, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<SubspaceBasis, Error> {
    let mut v = read_json(path)?;
    if v.get("dim").is_none() {
        if let Some(inner) = v.get_mut("basis").map(serde_json::Value::take) {
            v = inner;
        }
    }
    serde_json::from_value(v).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}

fn graph_of(angles: &AngleArgs, cap: usize) -> Result<SubspaceBasis, Error> {
    let factors = graph_factors(&angles.angles()?, angles.p)?;
    if factors.len() == 1 {
        return Ok(factors.into_iter().next().expect("one factor"));
    }
    tensor_subspace(&factors, cap)?.materialize()
}

fn kl_tol(cli: &Cli) -> f64 {
    cli.tol.unwrap_or(tol::KL_TOL)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    if cli.tol.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::Validation("--tol must be positive".into()));
    }
    match &cli.command {
        Command::Graph(args) => {
            let basis = graph_of(&args.angles, cli.cap)?;
            let report = check_graph_conditions(&basis);
            ok(json!({ "basis": basis, "report": report }))
        }
        Command::Channel(args) => {
            let env = default_env_vectors(args.env)?;
            let v = stinespring(args.theta, &env)?;
            match args.emit {
                Emit::Isometry => ok(&v),
                Emit::Graph => ok(noncommutative_graph(&v)?),
                Emit::Report => {
                    let basis = channel_basis(args.theta)?;
                    let graph = noncommutative_graph(&v)?;
                    let cq = is_classical_quantum(&v, &diagonal_basis_vectors())?;
                    ok(json!({
                        "theta": args.theta,
                        "env": args.env,
                        "alpha": basis.alpha,
                        "beta": basis.beta,
                        "isometry_defect": v.isometry_defect(),
                        "graph_dim": graph.len(),
                        "graph_angle_to_l_theta": subspace_distance(&graph, &subspace_l(args.theta))?,
                        "classical_quantum_in_diagonal_basis": cq.is_classical_quantum,
                        "classical_quantum_deviation": cq.max_deviation,
                    }))
                }
            }
        }
        Command::Code(CodeCommand::Build { p, n }) => ok(build_code_family(*n, *p, cli.cap)?),
        Command::Code(CodeCommand::Verify(args)) => {
            let t = kl_tol(cli);
            if let (Some(g), Some(c)) = (&args.graph, &args.code) {
                let graph = read_graph(g)?;
                let raw: CodeCandidate =
                    serde_json::from_value(read_json(c)?).map_err(|e| Error::Validation(e.to_string()))?;
                let code = CodeCandidate::new(raw.dim_ambient, raw.vectors)?;
                let report = verify_code(&graph, &code, t)?;
                let code = if report.pass { 0 } else { EXIT_FAIL };
                return with_code(report, code);
            }
            let angles = args.angles.angles()?;
            let factors = graph_factors(&angles, args.angles.p)?;
            let span = tensor_subspace(&factors, cli.cap)?;
            let family = build_code_family(angles.len(), args.angles.p, cli.cap)?;
            let report = verify_family(&span, &family, t)?;
            let code = if report.pass { 0 } else { EXIT_FAIL };
            with_code(report, code)
        }
        Command::Search(args) => {
            let graph = match &args.graph {
                Some(path) => read_graph(path)?,
                None => graph_of(&args.angles, cli.cap)?,
            };
            let mut cfg = SearchConfig {
                restarts: args.restarts,
                max_iters: args.max_iters,
                seed: cli.seed,
                ..SearchConfig::default()
            };
            if let Some(t) = cli.tol {
                cfg.success_tol = t;
            }
            let out = find_code_pair(&graph, &cfg)?;
            let code = if out.status == SearchStatus::CodeFound { 0 } else { EXIT_EVIDENCE };
            with_code(out, code)
        }
        Command::Bounds(BoundsArgs { p, n }) => {
            let tracenorm = if *p <= 10 { Some(delta_p_tracenorm(*p)?) } else { None };
            ok(json!({
                "bounds": capacity_lower_bound(*n, *p)?,
                "delta_p": delta_p(*p)?,
                "delta_p_tracenorm": tracenorm,
                "amplification": amplification(*p)?,
            }))
        }
        Command::Certify(args) => {
            let cert = certify(&args.angles()?, args.p)?;
            let code = if cert.verdict { 0 } else { EXIT_FAIL };
            with_code(cert, code)
        }
        Command::Scenario(ScenarioCommand::Corollary1 { n }) => {
            let report = corollary1(*n, kl_tol(cli), cli.cap)?;
            let pass = report.zero_certificate.verdict && report.code_certificate.verdict;
            with_code(report, if pass { 0 } else { EXIT_FAIL })
        }
        Command::Scenario(ScenarioCommand::Superactivation { theta, restarts }) => {
            let cfg = SearchConfig { restarts: *restarts, seed: cli.seed, ..SearchConfig::default() };
            let report = superactivation(*theta, &cfg, kl_tol(cli), cli.cap)?;
            let pass = report.joint.verdict
                && report.single_copy.iter().all(|s| s.status == SearchStatus::NoCodeEvidence);
            with_code(report, if pass { 0 } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let mut text = serde_json::to_string_pretty(&outcome.json).expect("JSON values serialize");
    text.push('\n');
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.code)
}

#[cfg(test)]
mod tests {
    use super::parse_angle;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.2"), Ok(0.2));
        assert_eq!(parse_angle("pi"), Ok(PI));
        assert_eq!(parse_angle("-pi/2"), Ok(-PI / 2.0));
        assert_eq!(parse_angle("2pi/3"), Ok(2.0 * PI / 3.0));
        assert_eq!(parse_angle("2*pi/3"), Ok(2.0 * PI / 3.0));
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("inf").is_err());
    }
}
