//! Target gates and the analytic parameter families that realize them
//! exactly with one interaction period and one pair of pulses.

use std::fmt;
use std::ops::RangeInclusive;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{
    circuit_unitary, gate_fidelity, phase_optimized_fidelity, CouplingParams, ProtocolParams, PulseSpec,
};
use crate::quantum_core::{inner, ket_norm, kron, pauli, Axis, Ket4, Matrix4, Spin, Unitary4};
use crate::scalar::{wrap_pi, Real};

/// Gate names accepted on the command line.
pub const GATE_NAMES: [&str; 6] = ["swap", "iswap", "sqrt-swap", "entangler", "conj-entangler", "custom"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedGate<T: Real> {
    Swap,
    ISwap,
    SqrtSwap,
    /// Bell-state preparing gate; `omega_sum = ω₁ + ω₂` sets the free phase
    /// on `|↑↑⟩` and `|↓↓⟩`.
    Entangler {
        omega_sum: T,
    },
    /// The entangler conjugated by σx on spin 1.
    ConjugatedEntangler {
        omega_sum: T,
    },
    Custom(Unitary4<T>),
}

impl<T: Real> NamedGate<T> {
    /// Looks up a catalog gate by CLI name. `custom` needs a matrix and is
    /// rejected here.
    pub fn from_name(name: &str, omega_sum: T) -> Result<Self> {
        match name {
            "swap" => Ok(Self::Swap),
            "iswap" => Ok(Self::ISwap),
            "sqrt-swap" => Ok(Self::SqrtSwap),
            "entangler" => Ok(Self::Entangler { omega_sum }),
            "conj-entangler" => Ok(Self::ConjugatedEntangler { omega_sum }),
            "custom" => Err(Error::InvalidParameter("custom gate requires an inline matrix".into())),
            other => {
                Err(Error::InvalidParameter(format!("unknown gate `{other}`; valid names: {}", GATE_NAMES.join(", "))))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Swap => "swap",
            Self::ISwap => "iswap",
            Self::SqrtSwap => "sqrt-swap",
            Self::Entangler { .. } => "entangler",
            Self::ConjugatedEntangler { .. } => "conj-entangler",
            Self::Custom(_) => "custom",
        }
    }
}

impl<T: Real> fmt::Display for NamedGate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `SWAP_β`: exchanges `|↑↓⟩` and `|↓↑⟩` with phase `e^{iβ}`.
pub fn swap_beta<T: Real>(beta: T) -> Unitary4<T> {
    let e = Complex::from_polar(T::one(), beta);
    let mut m = Matrix4::<T>::zero();
    m.rows[0][0] = T::one().into();
    m.rows[1][2] = e;
    m.rows[2][1] = e;
    m.rows[3][3] = T::one().into();
    Unitary4::from_exact(m)
}

pub fn make_gate<T: Real>(gate: &NamedGate<T>) -> Unitary4<T> {
    let r = T::FRAC_1_SQRT_2();
    let q = T::FRAC_PI_4();
    let e = |phase: T, modulus: T| Complex::from_polar(modulus, phase);
    let o = Complex::default();
    match *gate {
        NamedGate::Swap => swap_beta(T::zero()),
        NamedGate::ISwap => swap_beta(T::FRAC_PI_2()),
        NamedGate::SqrtSwap => {
            let h = T::lit(0.5);
            let a = Complex::new(h, h);
            let b = Complex::new(h, -h);
            let l = T::one().into();
            Unitary4::from_exact(Matrix4::new([[l, o, o, o], [o, a, b, o], [o, b, a, o], [o, o, o, l]]))
        }
        NamedGate::Entangler { omega_sum } => {
            let half = omega_sum / T::lit(2.0);
            Unitary4::from_exact(Matrix4::new([
                [e(-half, T::one()), o, o, o],
                [o, e(-q, r), e(-T::lit(3.0) * q, r), o],
                [o, e(-q, r), e(q, r), o],
                [o, o, o, e(half, T::one())],
            ]))
        }
        NamedGate::ConjugatedEntangler { omega_sum } => {
            let half = omega_sum / T::lit(2.0);
            Unitary4::from_exact(Matrix4::new([
                [e(q, r), o, o, e(-q, r)],
                [o, e(half, T::one()), o, o],
                [o, o, e(-half, T::one()), o],
                [e(-T::lit(3.0) * q, r), o, o, e(-q, r)],
            ]))
        }
        NamedGate::Custom(u) => u,
    }
}

/// One analytic family of exact realizations, indexed by integers `(n, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionFamily {
    /// SWAP, `Jt = π + 2πn`, `γ = 4p + 1`, pulses off.
    SwapGammaOneMod4,
    /// SWAP, `Jt = π + 2πn`, `γ = 4p + 3`, opposite z pulses.
    SwapGammaThreeMod4,
    /// iSWAP, `Jt = π + 2πn`, `γ = 4p`; z pulses for even `n`.
    ISwapGammaZeroMod4,
    /// iSWAP, `Jt = π + 2πn`, `γ = 4p + 2`; z pulses for odd `n`.
    ISwapGammaTwoMod4,
    /// √SWAP, `Jt = π/2 + 2πn`, `γ = 4p + 1`; z pulses for odd `p`.
    SqrtSwap,
    /// Entangler at `Jt = π/2`, `γ = 0`, `ω₁ - ω₂ = π/2`; only `(0, 0)`.
    Entangler,
}

impl ConditionFamily {
    pub fn describe(&self) -> &'static str {
        match self {
            Self::SwapGammaOneMod4 => "Jt = pi + 2 pi n, gamma = 4p + 1, pulses off, chi = gamma (pi/4 + pi n/2)",
            Self::SwapGammaThreeMod4 => {
                "Jt = pi + 2 pi n, gamma = 4p + 3, omega1 = -omega2 = pi along z, chi = gamma (pi/4 + pi n/2)"
            }
            Self::ISwapGammaZeroMod4 => {
                "Jt = pi + 2 pi n, gamma = 4p, z pulses omega1 = -omega2 = pi for even n, off for odd n"
            }
            Self::ISwapGammaTwoMod4 => {
                "Jt = pi + 2 pi n, gamma = 4p + 2, pulses off for even n, omega1 = -omega2 = pi for odd n"
            }
            Self::SqrtSwap => {
                "Jt = pi/2 + 2 pi n, gamma = 4p + 1, pulses off for even p, omega1 = -omega2 = pi for odd p, chi = gamma (pi/8 + pi n/2)"
            }
            Self::Entangler => "Jt = pi/2, gamma = 0, theta = 0, omega1 - omega2 = pi/2, omega1 + omega2 = omega_sum",
        }
    }

    fn gamma<T: Real>(&self, p: i64) -> T {
        let p = T::lit(p as f64);
        let four = T::lit(4.0);
        match self {
            Self::SwapGammaOneMod4 | Self::SqrtSwap => four * p + T::one(),
            Self::SwapGammaThreeMod4 => four * p + T::lit(3.0),
            Self::ISwapGammaZeroMod4 => four * p,
            Self::ISwapGammaTwoMod4 => four * p + T::lit(2.0),
            Self::Entangler => T::zero(),
        }
    }

    fn jt<T: Real>(&self, n: i64) -> T {
        let n = T::lit(n as f64);
        match self {
            Self::SqrtSwap => T::FRAC_PI_2() + T::TAU() * n,
            Self::Entangler => T::FRAC_PI_2(),
            _ => T::PI() + T::TAU() * n,
        }
    }

    fn pulsed(&self, n: i64, p: i64) -> bool {
        let even = |k: i64| k.rem_euclid(2) == 0;
        match self {
            Self::SwapGammaOneMod4 => false,
            Self::SwapGammaThreeMod4 => true,
            Self::ISwapGammaZeroMod4 => even(n),
            Self::ISwapGammaTwoMod4 => !even(n),
            Self::SqrtSwap => !even(p),
            Self::Entangler => true,
        }
    }

    /// Global phase predicted by the closed-form condition.
    pub fn chi_formula<T: Real>(&self, n: i64, p: i64) -> T {
        let gamma: T = self.gamma(p);
        let n = T::lit(n as f64);
        match self {
            Self::SqrtSwap => gamma * (T::PI() / T::lit(8.0) + T::FRAC_PI_2() * n),
            Self::Entangler => T::zero(),
            _ => gamma * (T::FRAC_PI_4() + T::FRAC_PI_2() * n),
        }
    }

    /// Full protocol parameters for member `(n, p)`.
    ///
    /// `t = |Jt|/|J_ref|` and the returned `J` takes the sign of the family's
    /// `Jt`, so `J·t` equals the family value exactly with `t ≥ 0`.
    pub fn params<T: Real>(&self, n: i64, p: i64, j_ref: T, omega_sum: T) -> Result<ProtocolParams<T>> {
        if !j_ref.is_finite() || j_ref == T::zero() {
            return Err(Error::InvalidParameter(format!("reference coupling must be finite and nonzero, got {j_ref}")));
        }
        if *self == Self::Entangler && (n, p) != (0, 0) {
            return Err(Error::Unrealizable { gate: "entangler".into(), n, p });
        }
        let jt: T = self.jt(n);
        let j = j_ref.abs() * jt.signum();
        let t = jt.abs() / j_ref.abs();
        let coupling = CouplingParams::new(j, self.gamma(p))?;
        let (pulse1, pulse2) = match self {
            Self::Entangler => {
                let half = omega_sum / T::lit(2.0);
                (PulseSpec::z(half + T::FRAC_PI_4()), PulseSpec::z(half - T::FRAC_PI_4()))
            }
            _ if self.pulsed(n, p) => (PulseSpec::z(T::PI()), PulseSpec::z(-T::PI())),
            _ => (PulseSpec::off(), PulseSpec::off()),
        };
        ProtocolParams::new(coupling, t, pulse1, pulse2, self.chi_formula(n, p))
    }
}

/// Analytic families available for a gate, in a fixed order.
pub fn families_for<T: Real>(gate: &NamedGate<T>) -> &'static [ConditionFamily] {
    use ConditionFamily::*;
    match gate {
        NamedGate::Swap => &[SwapGammaOneMod4, SwapGammaThreeMod4],
        NamedGate::ISwap => &[ISwapGammaZeroMod4, ISwapGammaTwoMod4],
        NamedGate::SqrtSwap => &[SqrtSwap],
        NamedGate::Entangler { .. } => &[Entangler],
        NamedGate::ConjugatedEntangler { .. } | NamedGate::Custom(_) => &[],
    }
}

/// Parameters for `(n, p)` in the gate's first family.
pub fn condition_params<T: Real>(gate: &NamedGate<T>, n: i64, p: i64, j_ref: T) -> Result<ProtocolParams<T>> {
    let family = families_for(gate).first().ok_or_else(|| Error::Unrealizable { gate: gate.name().into(), n, p })?;
    let omega_sum = match gate {
        NamedGate::Entangler { omega_sum } => *omega_sum,
        _ => T::zero(),
    };
    family.params(n, p, j_ref, omega_sum)
}

/// One `(family, n, p)` evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyRecord {
    pub family: ConditionFamily,
    pub n: i64,
    pub p: i64,
    pub gamma: f64,
    /// `|F - 1|` with the family's own χ; `None` when unrealizable.
    pub fidelity_deviation: Option<f64>,
    /// Optimal phase recovered from the circuit, in `(-π, π]`.
    pub chi_star: Option<f64>,
    pub chi_formula: Option<f64>,
    /// `|χ* - χ_formula|` reduced modulo 2π.
    pub chi_mismatch: Option<f64>,
    pub realizable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub gate: String,
    pub records: Vec<FamilyRecord>,
    pub max_fidelity_deviation: f64,
    pub max_chi_mismatch: f64,
    pub unrealizable: usize,
}

fn evaluate<T: Real>(gate: &NamedGate<T>, family: ConditionFamily, n: i64, p: i64, j_ref: T) -> FamilyRecord {
    let omega_sum = match gate {
        NamedGate::Entangler { omega_sum } => *omega_sum,
        _ => T::zero(),
    };
    let gamma = family.gamma::<T>(p).to_f64().unwrap_or(f64::NAN);
    match family.params(n, p, j_ref, omega_sum) {
        Ok(params) => {
            let target = make_gate(gate);
            let dev = (gate_fidelity(&target, &params) - T::one()).abs();
            let best = phase_optimized_fidelity(&target, &circuit_unitary(&params));
            let mismatch = wrap_pi(best.chi_star - params.chi).abs();
            let f = |x: T| x.to_f64();
            FamilyRecord {
                family,
                n,
                p,
                gamma,
                fidelity_deviation: f(dev),
                chi_star: f(best.chi_star),
                chi_formula: f(params.chi),
                chi_mismatch: f(mismatch),
                realizable: true,
            }
        }
        Err(_) => FamilyRecord {
            family,
            n,
            p,
            gamma,
            fidelity_deviation: None,
            chi_star: None,
            chi_formula: None,
            chi_mismatch: None,
            realizable: false,
        },
    }
}

/// Evaluates every family of `gate` over the `(n, p)` grid. Records are in
/// `(family, n, p)` lexicographic order regardless of evaluation order.
pub fn verify_family<T: Real>(
    gate: &NamedGate<T>,
    n_range: RangeInclusive<i64>,
    p_range: RangeInclusive<i64>,
    j_ref: T,
) -> VerificationReport {
    let mut grid: Vec<(ConditionFamily, i64, i64)> = Vec::new();
    for &fam in families_for(gate) {
        for n in n_range.clone() {
            grid.extend(p_range.clone().map(|p| (fam, n, p)));
        }
    }
    let records: Vec<FamilyRecord> = grid.par_iter().map(|&(fam, n, p)| evaluate(gate, fam, n, p, j_ref)).collect();
    let max_of = |f: fn(&FamilyRecord) -> Option<f64>| records.iter().filter_map(f).fold(0.0, f64::max);
    VerificationReport {
        gate: gate.name().into(),
        max_fidelity_deviation: max_of(|r| r.fidelity_deviation),
        max_chi_mismatch: max_of(|r| r.chi_mismatch),
        unrealizable: records.iter().filter(|r| !r.realizable).count(),
        records,
    }
}

/// `|⟨ψ|σy⊗σy|ψ*⟩|` for a normalized pure state.
pub fn concurrence<T: Real>(state: &Ket4<T>) -> Result<T> {
    let deviation = (ket_norm(state) - T::one()).abs();
    if deviation > T::lit(1e-10).max(T::unitarity_tolerance()) {
        return Err(Error::NotNormalized { deviation: deviation.to_f64().unwrap_or(f64::NAN) });
    }
    let y = pauli::<T>(Axis::Y);
    let flipped = kron(&y, &y).apply(&state.map(|z| z.conj()));
    Ok(inner(state, &flipped).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

pub fn bell_ket<T: Real>(which: BellState) -> Ket4<T> {
    let h = T::FRAC_1_SQRT_2();
    let o = T::zero();
    let v = match which {
        BellState::PhiPlus => [h, o, o, h],
        BellState::PhiMinus => [h, o, o, -h],
        BellState::PsiPlus => [o, h, h, o],
        BellState::PsiMinus => [o, h, -h, o],
    };
    v.map(Complex::from)
}

/// `σx` applied to spin 1 on both sides: `σx¹ · U · σx¹`.
pub fn conjugate_by_x1<T: Real>(u: &Unitary4<T>) -> Result<Unitary4<T>> {
    u.conjugate_on(Spin::First, &pauli(Axis::X))
}
