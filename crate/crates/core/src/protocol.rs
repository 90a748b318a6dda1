//! The two-step circuit: a free XXZ interaction period followed by an
//! instantaneous, individually addressed rotation of each spin.
//!
//! All propagators are evaluated in closed form. Energies are angular
//! frequencies with ħ = 1, so `J·t` is dimensionless.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum_core::{kron, on_spin, pauli, Axis, Ket4, Matrix2, Matrix4, Spin, Unitary4};
use crate::scalar::{wrap_pi, wrap_two_pi, Real};

/// XXZ coupling `H = (J/4)(σxσx + σyσy + γ σzσz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct CouplingParams<T: Real> {
    #[serde(rename = "J")]
    pub j: T,
    pub gamma: T,
}

impl<T: Real> CouplingParams<T> {
    pub fn new(j: T, gamma: T) -> Result<Self> {
        if !(j.is_finite() && gamma.is_finite()) {
            return Err(Error::NonFinite("coupling"));
        }
        Ok(Self { j, gamma })
    }
}

/// Pulse area `omega` about the axis `n = (sinθ cosφ, sinθ sinφ, cosθ)`.
///
/// `theta` is kept in `[0, π]` and `phi` in `[0, 2π)`; `omega` is not wrapped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct PulseSpec<T: Real> {
    pub omega: T,
    pub theta: T,
    pub phi: T,
}

impl<T: Real> PulseSpec<T> {
    /// Normalizes the axis angles without changing the axis.
    pub fn new(omega: T, theta: T, phi: T) -> Result<Self> {
        if !(omega.is_finite() && theta.is_finite() && phi.is_finite()) {
            return Err(Error::NonFinite("pulse"));
        }
        let mut theta = wrap_pi(theta);
        let mut phi = phi;
        if theta < T::zero() {
            theta = -theta;
            phi = phi + T::PI();
        }
        Ok(Self { omega, theta, phi: wrap_two_pi(phi) })
    }

    pub fn off() -> Self {
        Self { omega: T::zero(), theta: T::zero(), phi: T::zero() }
    }

    /// Rotation by `omega` about z.
    pub fn z(omega: T) -> Self {
        Self { omega, theta: T::zero(), phi: T::zero() }
    }

    pub fn axis(&self) -> [T; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

impl<'de, T: Real> Deserialize<'de> for PulseSpec<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw<T> {
            omega: T,
            #[serde(default)]
            theta: Option<T>,
            #[serde(default)]
            phi: Option<T>,
        }
        let raw = Raw::<T>::deserialize(d)?;
        PulseSpec::new(raw.omega, raw.theta.unwrap_or_else(T::zero), raw.phi.unwrap_or_else(T::zero))
            .map_err(serde::de::Error::custom)
    }
}

/// One circuit instance: interaction for time `t`, then both pulses at `t`,
/// then the global phase `e^{iχ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct ProtocolParams<T: Real> {
    #[serde(flatten)]
    pub coupling: CouplingParams<T>,
    pub t: T,
    pub pulse1: PulseSpec<T>,
    pub pulse2: PulseSpec<T>,
    pub chi: T,
}

impl<T: Real> ProtocolParams<T> {
    pub fn new(coupling: CouplingParams<T>, t: T, pulse1: PulseSpec<T>, pulse2: PulseSpec<T>, chi: T) -> Result<Self> {
        if !(t.is_finite() && chi.is_finite()) {
            return Err(Error::NonFinite("protocol time or phase"));
        }
        if t < T::zero() {
            return Err(Error::InvalidParameter(format!("evolution time must be >= 0, got {t}")));
        }
        Ok(Self { coupling, t, pulse1, pulse2, chi })
    }

    /// Dimensionless interaction angle `J·t`.
    pub fn jt(&self) -> T {
        self.coupling.j * self.t
    }
}

impl<'de, T: Real> Deserialize<'de> for ProtocolParams<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields, bound(deserialize = "T: Real"))]
        struct Raw<T: Real> {
            #[serde(rename = "J")]
            j: T,
            gamma: T,
            t: T,
            pulse1: PulseSpec<T>,
            pulse2: PulseSpec<T>,
            #[serde(default)]
            chi: Option<T>,
        }
        let raw = Raw::<T>::deserialize(d)?;
        let coupling = CouplingParams::new(raw.j, raw.gamma).map_err(serde::de::Error::custom)?;
        ProtocolParams::new(coupling, raw.t, raw.pulse1, raw.pulse2, raw.chi.unwrap_or_else(T::zero))
            .map_err(serde::de::Error::custom)
    }
}

/// Eigen-decomposition of the XXZ Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum<T: Real> {
    /// `(energy, eigenvector)`: `|↑↑⟩`, `|↓↓⟩`, symmetric and antisymmetric
    /// combinations of `|↑↓⟩, |↓↑⟩`, in that order.
    pub levels: [(T, Ket4<T>); 4],
}

pub fn hamiltonian<T: Real>(coupling: &CouplingParams<T>) -> Matrix4<T> {
    let (x, y, z) = (pauli::<T>(Axis::X), pauli::<T>(Axis::Y), pauli::<T>(Axis::Z));
    let gamma = Complex::from(coupling.gamma);
    let sum = kron(&x, &x) + kron(&y, &y) + kron(&z, &z).scale(gamma);
    sum.scale(Complex::from(coupling.j / T::lit(4.0)))
}

/// Analytic spectrum; no numerical eigensolver involved.
pub fn spectrum<T: Real>(coupling: &CouplingParams<T>) -> Spectrum<T> {
    let (j, g) = (coupling.j, coupling.gamma);
    let four = T::lit(4.0);
    let two = T::lit(2.0);
    let h = T::FRAC_1_SQRT_2();
    let zero = Complex::default();
    let up = |x: T| Complex::from(x);
    Spectrum {
        levels: [
            (g * j / four, [up(T::one()), zero, zero, zero]),
            (g * j / four, [zero, zero, zero, up(T::one())]),
            ((-g * j + two * j) / four, [zero, up(h), up(h), zero]),
            ((-g * j - two * j) / four, [zero, up(h), up(-h), zero]),
        ],
    }
}

/// `exp(-i H t)` evaluated entry by entry.
pub fn evolve_interaction<T: Real>(coupling: &CouplingParams<T>, t: T) -> Unitary4<T> {
    let jt = coupling.j * t;
    interaction_from_angles(jt, coupling.gamma * jt)
}

/// The interaction propagator as a function of `J·t` and `γ·J·t` only.
pub fn interaction_from_angles<T: Real>(jt: T, gamma_jt: T) -> Unitary4<T> {
    let quarter = gamma_jt / T::lit(4.0);
    let corner = Complex::from_polar(T::one(), -quarter);
    let centre = Complex::from_polar(T::one(), quarter);
    let (s, c) = (jt / T::lit(2.0)).sin_cos();
    let diag = centre * c;
    let off = centre * Complex::new(T::zero(), -s);
    let o = Complex::default();
    Unitary4::from_exact(Matrix4::new([[corner, o, o, o], [o, diag, off, o], [o, off, diag, o], [o, o, o, corner]]))
}

/// `cos(ω/2) I - i sin(ω/2) (n·σ)` as a 2×2 rotation.
pub fn rotation<T: Real>(pulse: &PulseSpec<T>) -> Matrix2<T> {
    let (s, c) = (pulse.omega / T::lit(2.0)).sin_cos();
    let [nx, ny, nz] = pulse.axis();
    let n_sigma = pauli::<T>(Axis::X).scale(nx.into())
        + pauli::<T>(Axis::Y).scale(ny.into())
        + pauli::<T>(Axis::Z).scale(nz.into());
    Matrix2::identity().scale(c.into()) + n_sigma.scale(Complex::new(T::zero(), -s))
}

pub fn single_pulse_unitary<T: Real>(spin: Spin, pulse: &PulseSpec<T>) -> Unitary4<T> {
    Unitary4::from_exact(on_spin(spin, &rotation(pulse)))
}

/// Both pulses fired together; the single-spin factors commute.
pub fn pulse_unitary<T: Real>(pulse1: &PulseSpec<T>, pulse2: &PulseSpec<T>) -> Unitary4<T> {
    Unitary4::from_exact(kron(&rotation(pulse1), &rotation(pulse2)))
}

/// `U_mf · U_int`, without the global phase.
pub fn circuit_unitary<T: Real>(params: &ProtocolParams<T>) -> Unitary4<T> {
    pulse_unitary(&params.pulse1, &params.pulse2) * evolve_interaction(&params.coupling, params.t)
}

/// `(1/4) Re(e^{iχ} Tr[W† U_mf U_int])`; signed, in `[-1, 1]`.
pub fn gate_fidelity<T: Real>(target: &Unitary4<T>, params: &ProtocolParams<T>) -> T {
    let tr = target.matrix().overlap(circuit_unitary(params).matrix());
    (Complex::from_polar(T::one(), params.chi) * tr).re / T::lit(4.0)
}

/// Fidelity maximized over the global phase in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct PhaseOptimized<T: Real> {
    pub fidelity: T,
    /// Phase `χ*` in `(-π, π]` such that `e^{iχ*}·circuit` best matches the target.
    pub chi_star: T,
}

pub fn phase_optimized_fidelity<T: Real>(target: &Unitary4<T>, circuit: &Unitary4<T>) -> PhaseOptimized<T> {
    let tr = target.matrix().overlap(circuit.matrix());
    let norm = tr.norm();
    let chi_star = if norm == T::zero() { T::zero() } else { wrap_pi(-tr.arg()) };
    PhaseOptimized { fidelity: norm / T::lit(4.0), chi_star }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_core::{approx_equal_up_to_phase, basis_ket};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    const I: Complex64 = Complex64::new(0.0, 1.0);

    fn swap() -> Unitary4<f64> {
        let mut m = Matrix4::<f64>::zero();
        m.rows[0][0] = 1.0.into();
        m.rows[1][2] = 1.0.into();
        m.rows[2][1] = 1.0.into();
        m.rows[3][3] = 1.0.into();
        Unitary4::new(m).unwrap()
    }

    fn iswap() -> Unitary4<f64> {
        let mut m = *swap().matrix();
        m.rows[1][2] = I;
        m.rows[2][1] = I;
        Unitary4::new(m).unwrap()
    }

    fn cp(j: f64, gamma: f64) -> CouplingParams<f64> {
        CouplingParams::new(j, gamma).unwrap()
    }

    fn z_pulses(t: f64, gamma: f64, w1: f64, w2: f64, chi: f64) -> ProtocolParams<f64> {
        ProtocolParams::new(cp(1.0, gamma), t, PulseSpec::z(w1), PulseSpec::z(w2), chi).unwrap()
    }

    fn diag(d: [f64; 4]) -> Matrix4<f64> {
        Matrix4::diagonal(d.map(Complex64::from))
    }

    #[test]
    fn hamiltonian_entries() {
        assert_eq!(hamiltonian(&cp(0.0, 3.7)).max_abs(), 0.0);
        let h = hamiltonian(&cp(1.0, 1.0));
        let mut expected = diag([0.25, -0.25, -0.25, 0.25]);
        expected.rows[1][2] = 0.5.into();
        expected.rows[2][1] = 0.5.into();
        assert!(h.max_diff(&expected) < 1e-15);
        assert!(hamiltonian(&cp(-1.3, 0.4)).is_hermitian(1e-14));
    }

    #[test]
    fn spectrum_values() {
        let e: Vec<f64> = spectrum(&cp(1.0, 0.0)).levels.iter().map(|l| l.0).collect();
        assert_eq!(e, vec![0.0, 0.0, 0.5, -0.5]);
        let e: Vec<f64> = spectrum(&cp(1.0, 1.0)).levels.iter().map(|l| l.0).collect();
        assert_eq!(e, vec![0.25, 0.25, 0.25, -0.75]);
    }

    #[test]
    fn interaction_examples() {
        assert!(evolve_interaction(&cp(0.7, 2.0), 0.0).matrix().max_diff(&Matrix4::identity()) < 1e-15);
        let u = evolve_interaction(&cp(1.0, 1.0), PI);
        assert!(u.matrix().max_diff(swap().with_phase(-FRAC_PI_4).matrix()) < 1e-15);
        let u = evolve_interaction(&cp(1.0, 0.0), FRAC_PI_2);
        let mut expected = Matrix4::<f64>::identity();
        let h = FRAC_1_SQRT_2;
        expected.rows[1][1] = h.into();
        expected.rows[2][2] = h.into();
        expected.rows[1][2] = Complex64::new(0.0, -h);
        expected.rows[2][1] = Complex64::new(0.0, -h);
        assert!(u.matrix().max_diff(&expected) < 1e-15);
    }

    #[test]
    fn pulse_examples() {
        let p = PulseSpec::new(PI, 0.0, 0.0).unwrap();
        let u = single_pulse_unitary(Spin::First, &p);
        let expected = Matrix4::diagonal([-I, -I, I, I]);
        assert!(u.matrix().max_diff(&expected) < 1e-15);

        let p = PulseSpec::new(PI, FRAC_PI_2, 0.0).unwrap();
        let u = single_pulse_unitary(Spin::Second, &p);
        let expected = kron(&Matrix2::identity(), &pauli(Axis::X)).scale(-I);
        assert!(u.matrix().max_diff(&expected) < 1e-15);

        let off = PulseSpec::<f64>::off();
        assert_eq!(*single_pulse_unitary(Spin::Second, &off).matrix(), Matrix4::identity());
        assert_eq!(*pulse_unitary(&off, &off).matrix(), Matrix4::identity());

        let u = pulse_unitary(&PulseSpec::z(PI), &PulseSpec::z(-PI));
        assert!(u.matrix().max_diff(&diag([1.0, -1.0, -1.0, 1.0])) < 1e-15);
    }

    #[test]
    fn circuit_examples() {
        let u = circuit_unitary(&z_pulses(0.0, 0.3, 0.0, 0.0, 0.0));
        assert_eq!(*u.matrix(), Matrix4::identity());
        let u = circuit_unitary(&z_pulses(PI, 3.0, PI, -PI, 0.0));
        assert!(u.matrix().max_diff(swap().with_phase(-3.0 * FRAC_PI_4).matrix()) < 1e-14);
        let u = circuit_unitary(&z_pulses(PI, 0.0, PI, -PI, 0.0));
        assert!(u.matrix().max_diff(iswap().matrix()) < 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let p = z_pulses(0.9, 2.3, 0.4, -1.2, 0.0);
        assert!((gate_fidelity(&circuit_unitary(&p), &p) - 1.0).abs() < 1e-15);
        let p = z_pulses(PI, 1.0, 0.0, 0.0, FRAC_PI_4);
        assert!((gate_fidelity(&swap(), &p) - 1.0).abs() < 1e-15);
        let p = z_pulses(PI, 1.0, 0.0, 0.0, 0.0);
        assert!((gate_fidelity(&swap(), &p) - FRAC_PI_4.cos()).abs() < 1e-15);
    }

    #[test]
    fn phase_optimized_examples() {
        let u = iswap();
        let r = phase_optimized_fidelity(&u, &u);
        assert_eq!((r.fidelity, r.chi_star), (1.0, 0.0));
        let r = phase_optimized_fidelity(&swap(), &swap().with_phase(-FRAC_PI_4));
        assert!((r.fidelity - 1.0).abs() < 1e-15 && (r.chi_star - FRAC_PI_4).abs() < 1e-15);
        // Brute-force trace: SWAP†·iSWAP = diag(1, i, i, 1), trace 2 + 2i.
        let brute: Complex64 =
            (0..4).map(|i| (0..4).map(|k| swap().entry(k, i).conj() * iswap().entry(k, i)).sum::<Complex64>()).sum();
        assert!((brute - Complex64::new(2.0, 2.0)).norm() < 1e-15);
        let r = phase_optimized_fidelity(&swap(), &iswap());
        assert!((r.fidelity - brute.norm() / 4.0).abs() < 1e-15);
        assert!((r.chi_star + FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn pulse_angle_normalization() {
        let p = PulseSpec::new(1.0f64, -0.5, 0.25).unwrap();
        assert!((p.theta - 0.5).abs() < 1e-15);
        assert!((p.phi - (0.25 + PI)).abs() < 1e-15);
        let q = PulseSpec { omega: 1.0, theta: -0.5, phi: 0.25 };
        assert!(rotation(&p).max_diff(&rotation(&q)) < 1e-15);
        let p = PulseSpec::new(-7.0, 0.0, 7.0).unwrap();
        assert_eq!(p.omega, -7.0);
        assert!(p.phi >= 0.0 && p.phi < 2.0 * PI);
        assert!(PulseSpec::new(f64::INFINITY, 0.0, 0.0).is_err());
    }

    #[test]
    fn params_validation_and_json() {
        assert!(ProtocolParams::new(cp(1.0, 1.0), -0.1, PulseSpec::off(), PulseSpec::off(), 0.0).is_err());
        let p = z_pulses(PI, 3.0, PI, -PI, 0.5);
        let s = serde_json::to_string(&p).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        for key in ["J", "gamma", "t", "pulse1", "pulse2", "chi"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let back: ProtocolParams<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"J":1,"gamma":0,"t":-1,"pulse1":{"omega":0},"pulse2":{"omega":0}}"#;
        assert!(serde_json::from_str::<ProtocolParams<f64>>(bad).is_err());
        let unknown = r#"{"J":1,"gamma":0,"t":1,"pulse1":{"omega":0},"pulse2":{"omega":0},"tau":2}"#;
        assert!(serde_json::from_str::<ProtocolParams<f64>>(unknown).is_err());
    }

    #[test]
    fn pulse_involution() {
        for (theta, phi) in [(0.0, 0.0), (1.1, 4.0), (PI, 2.0), (0.4, 0.3)] {
            let full = PulseSpec::new(2.0 * PI, theta, phi).unwrap();
            let double = PulseSpec::new(4.0 * PI, theta, phi).unwrap();
            for spin in [Spin::First, Spin::Second] {
                let u = single_pulse_unitary(spin, &full);
                assert!(u.matrix().max_diff(&-Matrix4::identity()) < 1e-14);
                let u = single_pulse_unitary(spin, &double);
                assert!(u.matrix().max_diff(&Matrix4::identity()) < 1e-14);
            }
        }
    }

    #[test]
    fn f32_circuit() {
        let c = CouplingParams::new(1.0f32, 1.0).unwrap();
        let u = evolve_interaction(&c, std::f32::consts::PI);
        let mut m = Matrix4::<f32>::zero();
        m.rows[0][0] = 1.0.into();
        m.rows[1][2] = 1.0.into();
        m.rows[2][1] = 1.0.into();
        m.rows[3][3] = 1.0.into();
        let swap32 = Unitary4::new(m).unwrap();
        let r = phase_optimized_fidelity(&swap32, &u);
        assert!((r.fidelity - 1.0).abs() < 1e-6);
    }

    /// Factorized route: product of the XX-block factor and the ZZ factor, built
    /// from Pauli Kronecker products rather than matrix entries.
    fn bracket_factors(c: &CouplingParams<f64>, t: f64) -> (Matrix4<f64>, Matrix4<f64>) {
        let (x, y, z) = (pauli::<f64>(Axis::X), pauli::<f64>(Axis::Y), pauli::<f64>(Axis::Z));
        let id = Matrix4::<f64>::identity();
        let zz = kron(&z, &z);
        let xy = kron(&x, &x) + kron(&y, &y);
        let half = (c.j * t / 2.0).cos() - 1.0;
        let xx_factor =
            id + (id - zz).scale((0.5 * half).into()) + xy.scale(Complex64::new(0.0, -0.5 * (c.j * t / 2.0).sin()));
        let q = c.gamma * c.j * t / 4.0;
        let zz_factor = id.scale(q.cos().into()) + zz.scale(Complex64::new(0.0, -q.sin()));
        (xx_factor, zz_factor)
    }

    proptest! {
        #[test]
        fn semigroup(j in -3.0..3.0f64, g in -5.0..5.0f64, t1 in -4.0..4.0f64, t2 in -4.0..4.0f64) {
            let c = cp(j, g);
            let lhs = evolve_interaction(&c, t1) * evolve_interaction(&c, t2);
            prop_assert!(lhs.matrix().max_diff(evolve_interaction(&c, t1 + t2).matrix()) < 1e-12);
        }

        #[test]
        fn factorization(j in -3.0..3.0f64, g in -5.0..5.0f64, t in 0.0..10.0f64) {
            let c = cp(j, g);
            let (a, b) = bracket_factors(&c, t);
            prop_assert!((a * b).max_diff(&(b * a)) < 1e-12);
            prop_assert!((a * b).max_diff(evolve_interaction(&c, t).matrix()) < 1e-12);
        }

        #[test]
        fn spectral_consistency(j in -3.0..3.0f64, g in -5.0..5.0f64, t in 0.0..10.0f64) {
            let c = cp(j, g);
            let u = evolve_interaction(&c, t);
            let h = hamiltonian(&c);
            for (e, v) in spectrum(&c).levels {
                let hv = h.apply(&v);
                let uv = u.apply(&v);
                let phase = Complex64::from_polar(1.0, -e * t);
                for k in 0..4 {
                    prop_assert!((hv[k] - v[k] * e).norm() < 1e-12);
                    prop_assert!((uv[k] - v[k] * phase).norm() < 1e-12);
                }
            }
        }

        #[test]
        fn pulses_commute(a in prop::array::uniform6(-7.0..7.0f64)) {
            let p1 = PulseSpec::new(a[0], a[1], a[2]).unwrap();
            let p2 = PulseSpec::new(a[3], a[4], a[5]).unwrap();
            let u1 = single_pulse_unitary(Spin::First, &p1);
            let u2 = single_pulse_unitary(Spin::Second, &p2);
            prop_assert!((u1 * u2).matrix().max_diff((u2 * u1).matrix()) < 1e-14);
            prop_assert!((u1 * u2).matrix().max_diff(pulse_unitary(&p1, &p2).matrix()) < 1e-14);
        }

        #[test]
        fn phase_optimum_dominates(a in prop::array::uniform8(-4.0..4.0f64), chi in -4.0..4.0f64) {
            let p = ProtocolParams::new(
                cp(1.0, a[0]), a[1].abs(),
                PulseSpec::new(a[2], a[3], a[4]).unwrap(),
                PulseSpec::new(a[5], a[6], a[7]).unwrap(),
                chi,
            ).unwrap();
            let target = iswap();
            let best = phase_optimized_fidelity(&target, &circuit_unitary(&p));
            prop_assert!(gate_fidelity(&target, &p) <= best.fidelity + 1e-15);
            let at_star = ProtocolParams { chi: best.chi_star, ..p };
            prop_assert!((gate_fidelity(&target, &at_star) - best.fidelity).abs() < 1e-12);
            let same = circuit_unitary(&p);
            let r = phase_optimized_fidelity(&same.with_phase(chi), &same);
            prop_assert!((r.fidelity - 1.0).abs() < 1e-12);
            prop_assert!(approx_equal_up_to_phase(&same.with_phase(chi), &same, 1e-10));
            let equiv = (best.fidelity - 1.0).abs() < 1e-12;
            prop_assert_eq!(equiv, approx_equal_up_to_phase(&target, &circuit_unitary(&p), 1e-10));
        }
    }

    #[test]
    fn ket_helpers_consistent() {
        let v = evolve_interaction(&cp(1.0, 0.0), FRAC_PI_2).apply(&basis_ket(1));
        assert!((v[1].norm() - FRAC_1_SQRT_2).abs() < 1e-15);
    }
}
