//! Numerical search for protocol parameters that best realize an arbitrary
//! two-qubit target.
//!
//! The searched vector is `(Jt, γ, ω₁, θ₁, φ₁, ω₂, θ₂, φ₂)`. The propagator
//! depends on `J` and `t` only through `Jt` and `γJt`, and the global phase is
//! maximized in closed form, so neither `J`, `t` nor `χ` is searched.
//!
//! One interaction period plus one pulse pair has 8 parameters against the
//! 15 of SU(4), so many targets are out of reach. Those come back with
//! `reached = false` and the best fidelity found.

mod landscape;
pub mod nelder_mead;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{
    interaction_from_angles, phase_optimized_fidelity, pulse_unitary, CouplingParams, ProtocolParams, PulseSpec,
};
use crate::quantum_core::Unitary4;

pub use landscape::{fidelity_landscape, format_sig, AxisSpec, Landscape};

/// Number of searched parameters.
pub const DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamId {
    Jt,
    Gamma,
    Omega1,
    Theta1,
    Phi1,
    Omega2,
    Theta2,
    Phi2,
}

impl ParamId {
    pub const ALL: [ParamId; DIM] = [
        ParamId::Jt,
        ParamId::Gamma,
        ParamId::Omega1,
        ParamId::Theta1,
        ParamId::Phi1,
        ParamId::Omega2,
        ParamId::Theta2,
        ParamId::Phi2,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ParamId::Jt => "jt",
            ParamId::Gamma => "gamma",
            ParamId::Omega1 => "omega1",
            ParamId::Theta1 => "theta1",
            ParamId::Phi1 => "phi1",
            ParamId::Omega2 => "omega2",
            ParamId::Theta2 => "theta2",
            ParamId::Phi2 => "phi2",
        }
    }
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParamId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamId::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| Error::UnknownParameter(s.to_string()))
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub lo: f64,
    pub hi: f64,
}

impl Bound {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidParameter(format!("empty or non-finite bound [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    fn at(&self, u: f64) -> f64 {
        self.lo + u * (self.hi - self.lo)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
    /// Indexed by [`ParamId::index`].
    pub bounds: [Bound; DIM],
    /// `reached` means `best_fidelity ≥ 1 - tol`.
    pub tol: f64,
    /// Coupling used to turn the searched `Jt` back into `(J, t)`.
    pub reference_j: f64,
}

pub const DEFAULT_SEED: u64 = 0x5eed_a11c_e0f5_9a7e;

impl Default for SearchConfig {
    fn default() -> Self {
        use std::f64::consts::{PI, TAU};
        let b = |lo, hi| Bound { lo, hi };
        Self {
            restarts: 24,
            max_iterations: 3000,
            seed: DEFAULT_SEED,
            bounds: [
                b(0.0, 8.0 * PI),
                b(-6.0, 6.0),
                b(-TAU, TAU),
                b(0.0, PI),
                b(0.0, TAU),
                b(-TAU, TAU),
                b(0.0, PI),
                b(0.0, TAU),
            ],
            tol: 1e-10,
            reference_j: 1.0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be >= 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be >= 1".into()));
        }
        for (id, b) in ParamId::ALL.iter().zip(&self.bounds) {
            Bound::new(b.lo, b.hi).map_err(|e| Error::InvalidParameter(format!("{id}: {e}")))?;
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be in (0, 1), got {}", self.tol)));
        }
        if !self.reference_j.is_finite() || self.reference_j == 0.0 {
            return Err(Error::InvalidParameter("reference J must be finite and nonzero".into()));
        }
        Ok(())
    }

    pub fn set_bound(&mut self, id: ParamId, lo: f64, hi: f64) -> Result<()> {
        self.bounds[id.index()] = Bound::new(lo, hi)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartTrace {
    pub index: usize,
    pub fidelity: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthesisResult {
    pub best_params: ProtocolParams<f64>,
    pub best_fidelity: f64,
    pub reached: bool,
    pub best_restart: usize,
    pub restarts: Vec<RestartTrace>,
}

/// Circuit for a raw search vector, without global phase.
pub fn circuit_from_vector(x: &[f64; DIM]) -> Unitary4<f64> {
    let p1 = PulseSpec { omega: x[2], theta: x[3], phi: x[4] };
    let p2 = PulseSpec { omega: x[5], theta: x[6], phi: x[7] };
    pulse_unitary(&p1, &p2) * interaction_from_angles(x[0], x[1] * x[0])
}

/// `1 - |Tr[W† U(x)]| / 4`.
pub fn infidelity(target: &Unitary4<f64>, x: &[f64; DIM]) -> f64 {
    1.0 - phase_optimized_fidelity(target, &circuit_from_vector(x)).fidelity
}

/// Converts a search vector into protocol parameters with `J = ±|J_ref|`
/// carrying the sign of `Jt` and `t ≥ 0`.
pub fn params_from_vector(x: &[f64; DIM], reference_j: f64, chi: f64) -> Result<ProtocolParams<f64>> {
    let jt = x[0];
    let j = if jt < 0.0 { -reference_j.abs() } else { reference_j.abs() };
    let coupling = CouplingParams::new(j, x[1])?;
    ProtocolParams::new(
        coupling,
        jt.abs() / reference_j.abs(),
        PulseSpec::new(x[2], x[3], x[4])?,
        PulseSpec::new(x[5], x[6], x[7])?,
        chi,
    )
}

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    out
}

const HALTON_BASES: [u64; DIM] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Starting point of restart `index`.
///
/// Restart 0 is the quiet point (no interaction, pulses off) projected into
/// the bounds; later restarts walk a Halton sequence under a seeded random
/// shift.
pub fn starting_point(config: &SearchConfig, index: usize) -> [f64; DIM] {
    let b = &config.bounds;
    if index == 0 {
        return std::array::from_fn(|d| 0.0f64.clamp(b[d].lo, b[d].hi));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let shift: [f64; DIM] = std::array::from_fn(|_| rng.gen::<f64>());
    std::array::from_fn(|d| {
        let u = (radical_inverse(index as u64, HALTON_BASES[d]) + shift[d]).fract();
        b[d].at(u)
    })
}

struct RestartOutcome {
    x: [f64; DIM],
    fidelity: f64,
    trace: RestartTrace,
}

fn run_restart(target: &Unitary4<f64>, config: &SearchConfig, index: usize) -> RestartOutcome {
    let lower: Vec<f64> = config.bounds.iter().map(|b| b.lo).collect();
    let upper: Vec<f64> = config.bounds.iter().map(|b| b.hi).collect();
    let opts = nelder_mead::Options { max_iterations: config.max_iterations, ..Default::default() };
    let start = starting_point(config, index);
    let min = nelder_mead::minimize(
        |v| {
            let x: [f64; DIM] = v.try_into().expect("search vector length");
            infidelity(target, &x)
        },
        &start,
        &lower,
        &upper,
        &opts,
    );
    let x: [f64; DIM] = min.x.as_slice().try_into().expect("search vector length");
    let fidelity = 1.0 - min.f;
    RestartOutcome {
        x,
        fidelity,
        trace: RestartTrace { index, fidelity, iterations: min.iterations, evaluations: min.evaluations },
    }
}

/// Restarts are evaluated in fixed-size batches; the search stops after the
/// first batch that reaches the tolerance. Batch boundaries do not depend on
/// the thread count, so results are reproducible.
const BATCH: usize = 8;

fn rounded(f: f64) -> i64 {
    (f * 1e14).round() as i64
}

/// Multi-start simplex search maximizing the phase-optimized fidelity.
pub fn synthesize(target: &Unitary4<f64>, config: &SearchConfig) -> Result<SynthesisResult> {
    config.validate()?;
    let mut outcomes: Vec<RestartOutcome> = Vec::with_capacity(config.restarts);
    let mut start = 0;
    while start < config.restarts {
        let end = (start + BATCH).min(config.restarts);
        let batch: Vec<RestartOutcome> = (start..end).into_par_iter().map(|i| run_restart(target, config, i)).collect();
        outcomes.extend(batch);
        start = end;
        if outcomes.iter().any(|o| o.fidelity >= 1.0 - config.tol) {
            break;
        }
    }
    let best = outcomes
        .iter()
        .max_by(|a, b| rounded(a.fidelity).cmp(&rounded(b.fidelity)).then(b.trace.index.cmp(&a.trace.index)))
        .expect("at least one restart");

    let unphased = params_from_vector(&best.x, config.reference_j, 0.0)?;
    let evaluated = phase_optimized_fidelity(target, &crate::protocol::circuit_unitary(&unphased));
    let best_params = ProtocolParams { chi: evaluated.chi_star, ..unphased };
    let best_fidelity = evaluated.fidelity.clamp(0.0, 1.0);
    Ok(SynthesisResult {
        best_params,
        best_fidelity,
        reached: best_fidelity >= 1.0 - config.tol,
        best_restart: best.trace.index,
        restarts: outcomes.iter().map(|o| o.trace.clone()).collect(),
    })
}
