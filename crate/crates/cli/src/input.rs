//! Argument value parsers and payload loading.

use std::fs;
use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use xxz_gatesmith::gate_catalog::{make_gate, NamedGate};
use xxz_gatesmith::quantum_core::{Matrix4, Unitary4};
use xxz_gatesmith::synthesizer::{AxisSpec, ParamId};

use crate::CliError;

/// Reals with optional `pi` factors: `1.5`, `pi`, `-2pi`, `3*pi/4`, `pi/2`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let Some(at) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| format!("`{s}` is not a number"));
    };
    let (coef, rest) = t.split_at(at);
    let coef = coef.trim_end_matches('*');
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| format!("bad coefficient in `{s}`"))?,
    };
    let rest = &rest[2..];
    let d = match rest.strip_prefix('/') {
        Some(den) => den.parse::<f64>().map_err(|_| format!("bad denominator in `{s}`"))?,
        None if rest.is_empty() => 1.0,
        None => return Err(format!("`{s}` is not a number")),
    };
    Ok(c * std::f64::consts::PI / d)
}

/// `lo:hi` with inclusive integer ends.
pub fn parse_int_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad range start in `{s}`"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad range end in `{s}`"))?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}

/// `param:lo:hi:steps`, e.g. `jt:0:2pi:101`.
pub fn parse_axis(s: &str) -> Result<AxisSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [param, lo, hi, steps] = parts[..] else {
        return Err(format!("expected PARAM:LO:HI:STEPS, got `{s}`"));
    };
    let param: ParamId = param.parse().map_err(|e: xxz_gatesmith::Error| e.to_string())?;
    let steps: usize = steps.parse().map_err(|_| format!("bad step count in `{s}`"))?;
    if steps == 0 {
        return Err("an axis needs at least one step".into());
    }
    Ok(AxisSpec { param, lo: parse_real(lo)?, hi: parse_real(hi)?, steps })
}

/// `param=lo:hi`.
pub fn parse_bound(s: &str) -> Result<(ParamId, f64, f64), String> {
    let (key, range) = s.split_once('=').ok_or_else(|| format!("expected PARAM=LO:HI, got `{s}`"))?;
    let param: ParamId = key.parse().map_err(|e: xxz_gatesmith::Error| e.to_string())?;
    let (lo, hi) = range.split_once(':').ok_or_else(|| format!("expected PARAM=LO:HI, got `{s}`"))?;
    Ok((param, parse_real(lo)?, parse_real(hi)?))
}

/// Payload text from `-` (stdin), `@path` or the literal argument.
pub fn payload(arg: &str, stdin: &mut dyn Read) -> Result<String, CliError> {
    if arg == "-" {
        let mut buf = String::new();
        stdin.read_to_string(&mut buf).map_err(|e| CliError::Io { path: "<stdin>".into(), message: e.to_string() })?;
        Ok(buf)
    } else if let Some(path) = arg.strip_prefix('@') {
        read_file(Path::new(path))
    } else {
        Ok(arg.to_string())
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn parse_json<T: DeserializeOwned>(what: &'static str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        what,
        message: e.to_string(),
        line: Some(e.line()),
        column: Some(e.column()),
    })
}

/// Target gate: a catalog name, or a 4×4 matrix of `[re, im]` pairs given
/// inline, via `@path` or on stdin.
pub fn target(arg: &str, omega_sum: f64, stdin: &mut dyn Read) -> Result<Unitary4<f64>, CliError> {
    let looks_like_json = arg.trim_start().starts_with('[') || arg.trim_start().starts_with('{');
    if arg != "-" && !arg.starts_with('@') && !looks_like_json {
        let gate = NamedGate::from_name(arg, omega_sum)?;
        return Ok(make_gate(&gate));
    }
    let text = payload(arg, stdin)?;
    let m: Matrix4<f64> = parse_json("target matrix", &text)?;
    Ok(Unitary4::new(m)?)
}
