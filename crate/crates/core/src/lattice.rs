//! Effective XXZ couplings of two atoms in a deep optical lattice.
//!
//! Lattice energies are handled in units of the recoil energy `E_r` and
//! converted to angular frequency (rad/s) only when forming
//! [`EffectiveCouplings`]. Superexchange enters with `+` for fermions and
//! `-` for bosons.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate_catalog::NamedGate;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    #[serde(alias = "Bose", alias = "boson", alias = "bosonic")]
    Bose,
    #[serde(alias = "Fermi", alias = "fermion", alias = "fermionic")]
    Fermi,
}

impl Statistics {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Bose => "bose",
            Self::Fermi => "fermi",
        }
    }
}

fn default_ratio<T: Real>() -> T {
    T::lit(0.1)
}

fn default_depth_bounds<T: Real>() -> [T; 2] {
    [T::one(), T::lit(50.0)]
}

/// Two-species lattice. Depths are `V_σ / E_r`, scattering strengths are the
/// dimensionless products `k·a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct LatticeConfig<T: Real> {
    pub v_up: T,
    pub v_down: T,
    pub k_a_updown: T,
    #[serde(default)]
    pub k_a_upup: T,
    #[serde(default)]
    pub k_a_downdown: T,
    pub statistics: Statistics,
    /// `E_r` in rad/s.
    pub recoil_energy: T,
    /// Seconds.
    #[serde(default)]
    pub coherence_time: Option<T>,
    /// Single-spin Rabi frequency Ω in rad/s, only used for the `Ω ≫ J` check.
    #[serde(default)]
    pub rabi_frequency: Option<T>,
    /// Perturbative regime means `max t_σ ≤ ratio · min U`.
    #[serde(default = "default_ratio")]
    pub perturbative_ratio: T,
    /// Depth interval searched by [`solve_depths_for_couplings`].
    #[serde(default = "default_depth_bounds")]
    pub depth_bounds: [T; 2],
}

impl<T: Real> LatticeConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.v_up, self.v_down, self.k_a_updown, self.k_a_upup, self.k_a_downdown, self.recoil_energy]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::NonFinite("lattice config"));
        }
        if self.v_up <= T::zero() || self.v_down <= T::zero() {
            return Err(Error::InvalidParameter("lattice depths must be > 0".into()));
        }
        if self.recoil_energy <= T::zero() {
            return Err(Error::InvalidParameter("recoil energy must be > 0".into()));
        }
        if let Some(tc) = self.coherence_time {
            if !(tc > T::zero()) {
                return Err(Error::InvalidParameter("coherence time must be > 0".into()));
            }
        }
        let [lo, hi] = self.depth_bounds;
        if !(lo > T::zero() && hi >= lo) {
            return Err(Error::InvalidParameter("depth bounds must satisfy 0 < lo <= hi".into()));
        }
        Ok(())
    }
}

/// Nearest-neighbour tunnelling `(4/√π) (V/E_r)^{3/4} exp(-2 √(V/E_r))`, in `E_r`.
pub fn tunneling_energy<T: Real>(depth: T) -> Result<T> {
    if !(depth > T::zero()) || !depth.is_finite() {
        return Err(Error::InvalidParameter(format!("lattice depth must be > 0, got {depth}")));
    }
    let prefactor = T::lit(4.0) / T::PI().sqrt();
    Ok(prefactor * depth.powf(T::lit(0.75)) * (-T::lit(2.0) * depth.sqrt()).exp())
}

/// `4 V↑ V↓ / (√V↑ + √V↓)²`.
pub fn spin_average_depth<T: Real>(v_up: T, v_down: T) -> T {
    let s = v_up.sqrt() + v_down.sqrt();
    T::lit(4.0) * v_up * v_down / (s * s)
}

/// On-site interaction energies in `E_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct OnsiteEnergies<T: Real> {
    pub updown: T,
    pub upup: T,
    pub downdown: T,
}

pub fn onsite_energies<T: Real>(config: &LatticeConfig<T>) -> Result<OnsiteEnergies<T>> {
    config.validate()?;
    let c = (T::lit(8.0) / T::PI()).sqrt();
    let p = T::lit(0.75);
    let updown = c * config.k_a_updown * spin_average_depth(config.v_up, config.v_down).powf(p);
    let (upup, downdown) = match config.statistics {
        Statistics::Bose => {
            (c * config.k_a_upup * config.v_up.powf(p), c * config.k_a_downdown * config.v_down.powf(p))
        }
        Statistics::Fermi => (T::lit(2.0) * config.v_up.sqrt(), T::lit(2.0) * config.v_down.sqrt()),
    };
    Ok(OnsiteEnergies { updown, upup, downdown })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct EffectiveCouplings<T: Real> {
    pub statistics: Statistics,
    pub t_up: T,
    pub t_down: T,
    pub u_updown: T,
    pub u_upup: T,
    pub u_downdown: T,
    /// Coupling in units of `E_r`.
    pub j_recoil: T,
    /// Coupling in rad/s.
    #[serde(rename = "J")]
    pub j: T,
    pub gamma: T,
    pub perturbative_ok: bool,
    #[serde(default)]
    pub rabi_frequency: Option<T>,
}

/// Superexchange couplings from tunnelling and on-site energies (all in `E_r`).
///
/// Returns `(J, γJ)` in `E_r`. Fermions drop the same-species terms of `γJ`.
pub fn superexchange<T: Real>(statistics: Statistics, t_up: T, t_down: T, u: &OnsiteEnergies<T>) -> Result<(T, T)> {
    if u.updown == T::zero() {
        return Err(Error::InvalidParameter("U_updown vanishes (k*a_updown = 0)".into()));
    }
    let two = T::lit(2.0);
    let mixed = (t_up * t_up + t_down * t_down) / (two * u.updown);
    let exchange = t_up * t_down / u.updown;
    match statistics {
        Statistics::Fermi => Ok((exchange, mixed)),
        Statistics::Bose => {
            if u.upup == T::zero() || u.downdown == T::zero() {
                return Err(Error::InvalidParameter("same-species U vanishes (k*a_sigma sigma = 0)".into()));
            }
            Ok((-exchange, mixed - t_up * t_up / u.upup - t_down * t_down / u.downdown))
        }
    }
}

pub fn effective_couplings<T: Real>(config: &LatticeConfig<T>) -> Result<EffectiveCouplings<T>> {
    let u = onsite_energies(config)?;
    let t_up = tunneling_energy(config.v_up)?;
    let t_down = tunneling_energy(config.v_down)?;
    let (j_recoil, gamma_j) = superexchange(config.statistics, t_up, t_down, &u)?;
    let min_u = u.updown.abs().min(u.upup.abs()).min(u.downdown.abs());
    Ok(EffectiveCouplings {
        statistics: config.statistics,
        t_up,
        t_down,
        u_updown: u.updown,
        u_upup: u.upup,
        u_downdown: u.downdown,
        j_recoil,
        j: j_recoil * config.recoil_energy,
        gamma: gamma_j / j_recoil,
        perturbative_ok: t_up.max(t_down) <= config.perturbative_ratio * min_u,
        rabi_frequency: config.rabi_frequency,
    })
}

/// Coherence-time feasibility of the fastest (`n = 0`) realization of a gate.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct FeasibilityReport<T: Real> {
    pub gate: String,
    /// Shortest interaction angle `|J|·t` of the gate's family (π or π/2).
    pub gate_angle: Option<T>,
    /// Minimal `|J|` in rad/s.
    pub j_min: Option<T>,
    pub j_min_khz: Option<T>,
    pub feasible: Option<bool>,
    /// Gate time `angle / |J|` in seconds.
    pub t_gate: Option<T>,
    pub pulses_required: Option<bool>,
    pub warnings: Vec<String>,
}

fn residue_class<T: Real>(gamma: T, modulus: f64) -> Option<i64> {
    let m = T::lit(modulus);
    let r = gamma - (gamma / m).floor() * m;
    let nearest = r.round();
    ((r - nearest).abs() <= T::lit(1e-6)).then(|| nearest.to_i64().unwrap_or(0).rem_euclid(modulus as i64))
}

/// Ω must exceed |J| by at least this factor before the pulse is treated as instantaneous.
pub const RABI_MARGIN: f64 = 10.0;

pub fn gate_feasibility<T: Real>(
    couplings: &EffectiveCouplings<T>,
    gate: &NamedGate<T>,
    t_c: T,
) -> Result<FeasibilityReport<T>> {
    if !(t_c > T::zero()) {
        return Err(Error::InvalidParameter(format!("coherence time must be > 0, got {t_c}")));
    }
    let mut warnings = Vec::new();
    let gamma = couplings.gamma;
    let (angle, pulses) = match gate {
        NamedGate::Swap => {
            let p = match residue_class(gamma, 4.0) {
                Some(1) => Some(false),
                Some(3) => Some(true),
                _ => None,
            };
            (Some(T::PI()), p)
        }
        NamedGate::ISwap => {
            let p = match residue_class(gamma, 4.0) {
                Some(0) => Some(true),
                Some(2) => Some(false),
                _ => None,
            };
            (Some(T::PI()), p)
        }
        NamedGate::SqrtSwap => {
            let p = match residue_class(gamma, 8.0) {
                Some(1) => Some(false),
                Some(5) => Some(true),
                _ => None,
            };
            (Some(T::FRAC_PI_2()), p)
        }
        NamedGate::Entangler { .. } | NamedGate::ConjugatedEntangler { .. } => {
            if residue_class(gamma, 4.0) != Some(0) || gamma.abs() > T::lit(1e-6) {
                warnings.push(format!("entangler family needs gamma = 0, lattice gives {gamma}"));
            }
            (Some(T::FRAC_PI_2()), Some(true))
        }
        NamedGate::Custom(_) => {
            warnings.push("no analytic family for a custom gate; no coherence bound".into());
            (None, None)
        }
    };
    if angle.is_some() && pulses.is_none() {
        warnings.push(format!("gamma = {gamma} is outside the analytic residue classes of {gate}"));
    }
    if pulses == Some(true) {
        let j = couplings.j.abs();
        match couplings.rabi_frequency {
            Some(omega) if omega < T::lit(RABI_MARGIN) * j => warnings
                .push(format!("pulsed branch needs Rabi frequency >> |J|; Omega = {omega} rad/s, |J| = {j} rad/s")),
            Some(_) => {}
            None => warnings.push("pulsed branch needs Rabi frequency >> |J| (not supplied)".into()),
        }
    }
    if !couplings.perturbative_ok {
        warnings.push("tunnelling is not small against on-site energies; effective spin model may not hold".into());
    }
    let j_min = angle.map(|a| a / t_c);
    Ok(FeasibilityReport {
        gate: gate.name().into(),
        gate_angle: angle,
        j_min,
        j_min_khz: j_min.map(|j| j / T::lit(1000.0)),
        feasible: j_min.map(|m| couplings.j.abs() >= m),
        t_gate: angle.map(|a| a / couplings.j.abs()),
        pulses_required: pulses,
        warnings,
    })
}

/// Outcome of the inverse depth search.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase", bound(serialize = "T: Real"))]
pub enum DepthSolution<T: Real> {
    Found {
        config: LatticeConfig<T>,
        couplings: EffectiveCouplings<T>,
    },
    Infeasible {
        closest: LatticeConfig<T>,
        couplings: EffectiveCouplings<T>,
        relative_j_error: T,
        gamma_error: T,
        diagnostic: String,
    },
}

/// Relative tolerance on `J` and on `γ` (scaled by `max(1, |γ|)`).
pub const SOLVE_TOLERANCE: f64 = 1e-6;

struct Inverse<T: Real> {
    template: LatticeConfig<T>,
    target_j: T,
    target_gamma: T,
}

impl<T: Real> Inverse<T> {
    fn config(&self, x: [T; 2]) -> LatticeConfig<T> {
        LatticeConfig { v_up: x[0], v_down: x[1], ..self.template }
    }

    fn residual(&self, x: [T; 2]) -> Option<[T; 2]> {
        let c = effective_couplings(&self.config(x)).ok()?;
        let scale = T::one().max(self.target_gamma.abs());
        let r = [(c.j / self.target_j).ln(), (c.gamma - self.target_gamma) / scale];
        (r[0].is_finite() && r[1].is_finite()).then_some(r)
    }

    fn cost(&self, x: [T; 2]) -> T {
        self.residual(x).map(|r| r[0] * r[0] + r[1] * r[1]).unwrap_or_else(T::infinity)
    }

    fn errors(&self, x: [T; 2]) -> (T, T) {
        match effective_couplings(&self.config(x)) {
            Ok(c) => (
                ((c.j - self.target_j) / self.target_j).abs(),
                (c.gamma - self.target_gamma).abs() / T::one().max(self.target_gamma.abs()),
            ),
            Err(_) => (T::infinity(), T::infinity()),
        }
    }

    fn converged(&self, x: [T; 2]) -> bool {
        let (ej, eg) = self.errors(x);
        ej <= T::lit(SOLVE_TOLERANCE) && eg <= T::lit(SOLVE_TOLERANCE)
    }

    fn clamp(&self, x: [T; 2]) -> [T; 2] {
        let [lo, hi] = self.template.depth_bounds;
        x.map(|v| v.max(lo).min(hi))
    }

    /// Damped Gauss-Newton on the 2×2 system, projected onto the bounds.
    fn refine(&self, start: [T; 2]) -> [T; 2] {
        let mut x = start;
        let mut cost = self.cost(x);
        let mut lambda = T::lit(1e-3);
        for _ in 0..300 {
            let Some(r) = self.residual(x) else { break };
            let mut jac = [[T::zero(); 2]; 2];
            for k in 0..2 {
                let h = T::lit(1e-6) * T::one().max(x[k]);
                let mut xp = x;
                let mut xm = x;
                xp[k] = x[k] + h;
                xm[k] = x[k] - h;
                let (Some(rp), Some(rm)) = (self.residual(xp), self.residual(xm)) else { return x };
                for i in 0..2 {
                    jac[i][k] = (rp[i] - rm[i]) / (h + h);
                }
            }
            // Normal equations (JᵀJ + λ diag JᵀJ) δ = -Jᵀr.
            let mut a = [[T::zero(); 2]; 2];
            let mut g = [T::zero(); 2];
            for i in 0..2 {
                for k in 0..2 {
                    a[i][k] = jac[0][i] * jac[0][k] + jac[1][i] * jac[1][k];
                }
                g[i] = jac[0][i] * r[0] + jac[1][i] * r[1];
            }
            let mut improved = false;
            for _ in 0..20 {
                let m = [[a[0][0] * (T::one() + lambda), a[0][1]], [a[1][0], a[1][1] * (T::one() + lambda)]];
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                if det == T::zero() || !det.is_finite() {
                    lambda = lambda * T::lit(10.0);
                    continue;
                }
                let d0 = -(m[1][1] * g[0] - m[0][1] * g[1]) / det;
                let d1 = -(m[0][0] * g[1] - m[1][0] * g[0]) / det;
                let trial = self.clamp([x[0] + d0, x[1] + d1]);
                let c = self.cost(trial);
                if c < cost {
                    x = trial;
                    cost = c;
                    lambda = (lambda / T::lit(10.0)).max(T::lit(1e-12));
                    improved = true;
                    break;
                }
                lambda = lambda * T::lit(10.0);
            }
            if !improved || self.converged(x) {
                break;
            }
        }
        x
    }
}

/// Finds depths `(V↑, V↓)` inside the template's depth bounds whose couplings
/// match `(J, γ)`; `J` in rad/s with the sign fixed by the statistics.
pub fn solve_depths_for_couplings<T: Real>(
    target_j: T,
    target_gamma: T,
    template: &LatticeConfig<T>,
) -> Result<DepthSolution<T>> {
    if !(target_j.is_finite() && target_gamma.is_finite()) {
        return Err(Error::NonFinite("target couplings"));
    }
    if target_j == T::zero() {
        return Err(Error::InvalidParameter("target J must be nonzero".into()));
    }
    match (template.statistics, target_j > T::zero()) {
        (Statistics::Bose, true) => return Err(Error::SignMismatch { sign: "positive", statistics: "bose" }),
        (Statistics::Fermi, false) => return Err(Error::SignMismatch { sign: "negative", statistics: "fermi" }),
        _ => {}
    }
    template.validate()?;
    let problem = Inverse { template: *template, target_j, target_gamma };
    let [lo, hi] = template.depth_bounds;

    // Equal depths first: |J| is monotone along the diagonal, so bisect on it.
    if let Some(v) = bisect_diagonal(&problem, lo, hi) {
        if problem.converged([v, v]) {
            return Ok(found(&problem, [v, v]));
        }
    }

    const GRID: usize = 48;
    let step = (hi - lo) / T::lit((GRID - 1) as f64);
    let mut seeds: Vec<(T, [T; 2])> = Vec::with_capacity(GRID * GRID);
    for i in 0..GRID {
        for k in 0..GRID {
            let x = [lo + step * T::lit(i as f64), lo + step * T::lit(k as f64)];
            seeds.push((problem.cost(x), x));
        }
    }
    seeds.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = seeds[0].1;
    let mut best_cost = seeds[0].0;
    for (_, seed) in seeds.iter().take(12) {
        let x = problem.refine(*seed);
        if problem.converged(x) {
            return Ok(found(&problem, x));
        }
        let c = problem.cost(x);
        if c < best_cost {
            best_cost = c;
            best = x;
        }
    }
    let closest = problem.config(best);
    let couplings = effective_couplings(&closest)?;
    let (relative_j_error, gamma_error) = problem.errors(best);
    Ok(DepthSolution::Infeasible {
        closest,
        couplings,
        relative_j_error,
        gamma_error,
        diagnostic: format!(
            "no depths in [{lo}, {hi}] E_r reproduce J = {target_j} rad/s and gamma = {target_gamma} within {SOLVE_TOLERANCE:e}; closest gives J = {} rad/s, gamma = {}",
            couplings.j, couplings.gamma
        ),
    })
}

fn found<T: Real>(problem: &Inverse<T>, x: [T; 2]) -> DepthSolution<T> {
    let config = problem.config(x);
    let couplings = effective_couplings(&config).expect("converged point evaluates");
    DepthSolution::Found { config, couplings }
}

fn bisect_diagonal<T: Real>(problem: &Inverse<T>, lo: T, hi: T) -> Option<T> {
    let f = |v: T| problem.residual([v, v]).map(|r| r[0]);
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a)?, f(b)?);
    if fa * fb > T::zero() {
        return None;
    }
    for _ in 0..200 {
        let m = (a + b) / T::lit(2.0);
        let fm = f(m)?;
        if fm == T::zero() || (b - a) <= T::epsilon() * m {
            return Some(m);
        }
        if (fm > T::zero()) == (fa > T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some((a + b) / T::lit(2.0))
}
