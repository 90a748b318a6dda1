//! Command-line front end for `xxz-gatesmith`.
//!
//! [`run`] takes the argument vector and explicit I/O handles and returns the
//! process exit code: 0 on success, 1 on domain errors (reported as JSON on
//! stderr) and 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use xxz_gatesmith::gate_catalog::{families_for, make_gate, verify_family, ConditionFamily, NamedGate};
use xxz_gatesmith::lattice::{
    effective_couplings, gate_feasibility, solve_depths_for_couplings, EffectiveCouplings, FeasibilityReport,
    LatticeConfig,
};
use xxz_gatesmith::protocol::{circuit_unitary, gate_fidelity, phase_optimized_fidelity, ProtocolParams};
use xxz_gatesmith::synthesizer::{fidelity_landscape, synthesize, AxisSpec, ParamId, SearchConfig};

mod input;

pub use input::{parse_axis, parse_bound, parse_int_range, parse_real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "xxz-gatesmith", version, about = "Two-qubit gates from XXZ interaction periods and addressed pulses")]
struct Cli {
    /// Output format; `sweep` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a catalog gate as a 4x4 matrix of [re, im] pairs.
    Gate {
        #[arg(long)]
        name: String,
        /// ω₁ + ω₂ for the entanglers.
        #[arg(long, default_value = "0", value_parser = parse_real, allow_hyphen_values = true)]
        omega_sum: f64,
    },
    /// Gate fidelity of protocol parameters against a target.
    Fidelity {
        #[command(flatten)]
        target: TargetArgs,
        /// ProtocolParams JSON, `@path` or `-` for stdin.
        #[arg(long)]
        params: String,
    },
    /// Parameters of an analytic condition family member.
    #[command(allow_negative_numbers = true)]
    Conditions {
        #[arg(long)]
        gate: String,
        #[arg(long, default_value_t = 0)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        p: i64,
        /// Reference coupling; `t = |Jt| / |J|`.
        #[arg(long, default_value = "1", value_parser = parse_real)]
        j_ref: f64,
        #[arg(long, default_value = "0", value_parser = parse_real)]
        omega_sum: f64,
        /// Family name; defaults to the gate's first family.
        #[arg(long)]
        family: Option<String>,
    },
    /// Check every family of a gate over a grid of (n, p).
    Verify {
        #[arg(long)]
        gate: String,
        #[arg(long, default_value = "-3:3", value_parser = parse_int_range, allow_hyphen_values = true)]
        n: (i64, i64),
        #[arg(long, default_value = "-3:3", value_parser = parse_int_range, allow_hyphen_values = true)]
        p: (i64, i64),
        #[arg(long, default_value = "1", value_parser = parse_real)]
        j_ref: f64,
        #[arg(long, default_value = "0", value_parser = parse_real)]
        omega_sum: f64,
    },
    /// Search protocol parameters for a target gate.
    Synth(SynthArgs),
    /// Fidelity over a two-parameter grid.
    Sweep(SweepArgs),
    /// Effective couplings, feasibility and depth search for a lattice.
    Lattice(LatticeArgs),
}

#[derive(Debug, Args)]
struct TargetArgs {
    /// Catalog gate name, or a matrix as JSON, `@path` or `-` for stdin.
    #[arg(long)]
    target: String,
    /// ω₁ + ω₂ when the target is an entangler.
    #[arg(long, default_value = "0", value_parser = parse_real, allow_hyphen_values = true)]
    omega_sum: f64,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long, env = "XXZ_GATESMITH_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long, value_parser = parse_real)]
    reference_j: Option<f64>,
    /// Search interval, e.g. `gamma=-2:2` or `omega1=-pi:pi`; repeatable.
    #[arg(long = "bounds", value_parser = parse_bound, allow_hyphen_values = true)]
    bounds: Vec<(ParamId, f64, f64)>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// First axis as `param:lo:hi:steps`, e.g. `jt:0:2pi:101`.
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    x: AxisSpec,
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    y: AxisSpec,
    /// Parameters held fixed (JSON, `@path` or `-`); defaults to J = 1,
    /// γ = 0, t = 0, pulses off.
    #[arg(long)]
    fixed: Option<String>,
    /// Write the grid here and print a JSON summary instead.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LatticeArgs {
    /// TOML or JSON lattice description, or `-` for stdin.
    #[arg(long)]
    config: String,
    /// Restrict the feasibility report to one gate.
    #[arg(long)]
    gate: Option<String>,
    /// Coherence time in seconds; overrides the config.
    #[arg(long, value_parser = parse_real)]
    coherence_time: Option<f64>,
    /// Find depths giving this J (rad/s).
    #[arg(long, requires = "solve_gamma", allow_hyphen_values = true, value_parser = parse_real)]
    solve_j: Option<f64>,
    #[arg(long, requires = "solve_j", allow_hyphen_values = true, value_parser = parse_real)]
    solve_gamma: Option<f64>,
}

/// Errors that end a command with a nonzero status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(xxz_gatesmith::Error),
    Parse { what: &'static str, message: String, line: Option<usize>, column: Option<usize> },
    Io { path: String, message: String },
}

impl From<xxz_gatesmith::Error> for CliError {
    fn from(e: xxz_gatesmith::Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let body = match self {
            CliError::Usage(m) => json!({ "kind": "usage", "message": m }),
            CliError::Domain(e) => json!({ "kind": "domain", "message": e.to_string() }),
            CliError::Parse { what, message, line, column } => {
                json!({ "kind": "parse", "input": what, "message": message, "line": line, "column": column })
            }
            CliError::Io { path, message } => json!({ "kind": "io", "path": path, "message": message }),
        };
        json!({ "error": body })
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn csv_unsupported(command: &str) -> CliError {
    CliError::Usage(format!("--format csv is not available for `{command}`"))
}

fn gate_by_name(name: &str, omega_sum: f64) -> Result<NamedGate<f64>, CliError> {
    Ok(NamedGate::from_name(name, omega_sum)?)
}

fn matrix_csv(u: &xxz_gatesmith::Unitary) -> String {
    let mut out = String::from("row,col,re,im\n");
    for (i, row) in u.matrix().rows.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let _ = writeln!(out, "{i},{j},{},{}", z.re, z.im);
        }
    }
    out
}

fn parse_family(name: &str) -> Result<ConditionFamily, CliError> {
    serde_json::from_value(serde_json::Value::String(name.to_string()))
        .map_err(|_| CliError::Usage(format!("unknown condition family `{name}`")))
}

fn conditions(
    gate: &str,
    n: i64,
    p: i64,
    j_ref: f64,
    omega_sum: f64,
    family: Option<&str>,
) -> Result<ProtocolParams<f64>, CliError> {
    let gate = gate_by_name(gate, omega_sum)?;
    let available = families_for(&gate);
    let family = match family {
        Some(name) => {
            let f = parse_family(name)?;
            if !available.contains(&f) {
                return Err(CliError::Usage(format!("family `{name}` does not produce {gate}")));
            }
            f
        }
        None => *available.first().ok_or(xxz_gatesmith::Error::Unrealizable { gate: gate.name().into(), n, p })?,
    };
    Ok(family.params(n, p, j_ref, omega_sum)?)
}

fn verify_csv(report: &xxz_gatesmith::gate_catalog::VerificationReport) -> String {
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    let mut out = String::from("family,n,p,gamma,fidelity_deviation,chi_star,chi_formula,chi_mismatch,realizable\n");
    for r in &report.records {
        let family = serde_json::to_value(r.family).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let _ = writeln!(
            out,
            "{family},{},{},{},{},{},{},{},{}",
            r.n,
            r.p,
            r.gamma,
            opt(r.fidelity_deviation),
            opt(r.chi_star),
            opt(r.chi_formula),
            opt(r.chi_mismatch),
            r.realizable
        );
    }
    out
}

fn synth(args: &SynthArgs, stdin: &mut dyn Read) -> Result<String, CliError> {
    let target = input::target(&args.target.target, args.target.omega_sum, stdin)?;
    let mut config = SearchConfig::default();
    if let Some(r) = args.restarts {
        config.restarts = r;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(t) = args.tol {
        config.tol = t;
    }
    if let Some(m) = args.max_iterations {
        config.max_iterations = m;
    }
    if let Some(j) = args.reference_j {
        config.reference_j = j;
    }
    for &(id, lo, hi) in &args.bounds {
        config.set_bound(id, lo, hi)?;
    }
    Ok(to_json(&synthesize(&target, &config)?))
}

fn sweep(args: &SweepArgs, format: Format, stdin: &mut dyn Read) -> Result<String, CliError> {
    if args.target.target == "-" && args.fixed.as_deref() == Some("-") {
        return Err(CliError::Usage("only one of --target and --fixed can read stdin".into()));
    }
    let target = input::target(&args.target.target, args.target.omega_sum, stdin)?;
    let fixed: ProtocolParams<f64> = match &args.fixed {
        Some(arg) => input::parse_json("fixed parameters", &input::payload(arg, stdin)?)?,
        None => serde_json::from_value(json!({
            "J": 1.0, "gamma": 0.0, "t": 0.0, "pulse1": {"omega": 0.0}, "pulse2": {"omega": 0.0}
        }))
        .expect("default parameters"),
    };
    let landscape = fidelity_landscape(&target, args.x, args.y, &fixed)?;
    let body = match format {
        Format::Csv => landscape.to_csv(),
        Format::Json => to_json(&landscape),
    };
    let Some(path) = &args.out else {
        return Ok(body);
    };
    std::fs::write(path, body)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let (a, b, f) = landscape.max();
    Ok(to_json(&json!({
        "out": path.display().to_string(),
        "points": landscape.points.len(),
        "max": { "axis1": a, "axis2": b, "fidelity": f },
    })))
}

#[derive(Serialize)]
struct LatticeReport {
    couplings: EffectiveCouplings<f64>,
    feasibility: Vec<FeasibilityReport<f64>>,
}

fn load_lattice(arg: &str, stdin: &mut dyn Read) -> Result<LatticeConfig<f64>, CliError> {
    let text = if arg == "-" { input::payload(arg, stdin)? } else { input::read_file(std::path::Path::new(arg))? };
    let json_like = arg.ends_with(".json") || (arg == "-" && text.trim_start().starts_with('{'));
    let config: LatticeConfig<f64> = if json_like {
        input::parse_json("lattice config", &text)?
    } else {
        toml::from_str(&text).map_err(|e| {
            let (line, column) = e
                .span()
                .map(|s| {
                    let before = &text[..s.start.min(text.len())];
                    let line = before.matches('\n').count() + 1;
                    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
                    (Some(line), Some(column))
                })
                .unwrap_or((None, None));
            CliError::Parse { what: "lattice config", message: e.message().to_string(), line, column }
        })?
    };
    config.validate()?;
    Ok(config)
}

fn lattice(args: &LatticeArgs, stdin: &mut dyn Read) -> Result<String, CliError> {
    let config = load_lattice(&args.config, stdin)?;
    if let (Some(j), Some(gamma)) = (args.solve_j, args.solve_gamma) {
        return Ok(to_json(&solve_depths_for_couplings(j, gamma, &config)?));
    }
    let couplings = effective_couplings(&config)?;
    let mut feasibility = Vec::new();
    if let Some(t_c) = args.coherence_time.or(config.coherence_time) {
        let gates = match &args.gate {
            Some(name) => vec![gate_by_name(name, 0.0)?],
            None => {
                vec![NamedGate::Swap, NamedGate::ISwap, NamedGate::SqrtSwap, NamedGate::Entangler { omega_sum: 0.0 }]
            }
        };
        for g in &gates {
            feasibility.push(gate_feasibility(&couplings, g, t_c)?);
        }
    } else if args.gate.is_some() {
        return Err(CliError::Usage(
            "a feasibility check needs --coherence-time or coherence_time in the config".into(),
        ));
    }
    Ok(to_json(&LatticeReport { couplings, feasibility }))
}

fn dispatch(cli: Cli, stdin: &mut dyn Read) -> Result<String, CliError> {
    let default = match cli.command {
        Command::Sweep(_) => Format::Csv,
        _ => Format::Json,
    };
    let format = cli.format.unwrap_or(default);
    match cli.command {
        Command::Gate { name, omega_sum } => {
            let u = make_gate(&gate_by_name(&name, omega_sum)?);
            Ok(match format {
                Format::Json => to_json(&u),
                Format::Csv => matrix_csv(&u),
            })
        }
        Command::Fidelity { target, params } => {
            if format == Format::Csv {
                return Err(csv_unsupported("fidelity"));
            }
            if target.target == "-" && params == "-" {
                return Err(CliError::Usage("only one of --target and --params can read stdin".into()));
            }
            let w = input::target(&target.target, target.omega_sum, stdin)?;
            let params: ProtocolParams<f64> =
                input::parse_json("protocol parameters", &input::payload(&params, stdin)?)?;
            let best = phase_optimized_fidelity(&w, &circuit_unitary(&params));
            Ok(to_json(&json!({
                "fidelity": gate_fidelity(&w, &params),
                "phase_optimized_fidelity": best.fidelity,
                "chi_star": best.chi_star,
            })))
        }
        Command::Conditions { gate, n, p, j_ref, omega_sum, family } => {
            if format == Format::Csv {
                return Err(csv_unsupported("conditions"));
            }
            Ok(to_json(&conditions(&gate, n, p, j_ref, omega_sum, family.as_deref())?))
        }
        Command::Verify { gate, n, p, j_ref, omega_sum } => {
            let report = verify_family(&gate_by_name(&gate, omega_sum)?, n.0..=n.1, p.0..=p.1, j_ref);
            Ok(match format {
                Format::Json => to_json(&report),
                Format::Csv => verify_csv(&report),
            })
        }
        Command::Synth(args) => {
            if format == Format::Csv {
                return Err(csv_unsupported("synth"));
            }
            synth(&args, stdin)
        }
        Command::Sweep(args) => sweep(&args, format, stdin),
        Command::Lattice(args) => {
            if format == Format::Csv {
                return Err(csv_unsupported("lattice"));
            }
            lattice(&args, stdin)
        }
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli, stdin) {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            e.exit_code()
        }
    }
}
