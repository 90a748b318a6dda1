//! Fixed-size complex linear algebra for one- and two-spin operators.
//!
//! Two-spin operators act on the basis `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` (indices
//! 0..4) with spin 1 as the left Kronecker factor, so `|↑⟩` is the first
//! single-spin basis vector.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Two-spin state vector in the `↑↑, ↑↓, ↓↑, ↓↓` basis.
pub type Ket4<T> = [Complex<T>; 4];

/// Axis of a Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Which spin a single-spin operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    First,
    Second,
}

/// 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matrix2<T> {
    pub rows: [[Complex<T>; 2]; 2],
}

/// 4×4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matrix4<T> {
    pub rows: [[Complex<T>; 4]; 4],
}

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

impl<T: Real> Matrix2<T> {
    pub fn new(rows: [[Complex<T>; 2]; 2]) -> Self {
        Self { rows }
    }

    pub fn zero() -> Self {
        Self::new([[Complex::default(); 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.rows[0][0] = Complex::from(T::one());
        m.rows[1][1] = Complex::from(T::one());
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.rows[i][j] = self.rows[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        self.rows[0][0] + self.rows[1][1]
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let mut out = *self;
        out.rows.iter_mut().flatten().for_each(|z| *z = *z * factor);
        out
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_diff(&self, other: &Self) -> T {
        self.rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}

impl<T: Real> Mul for Matrix2<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.rows[i][j] = self.rows[i][0] * rhs.rows[0][j] + self.rows[i][1] * rhs.rows[1][j];
            }
        }
        out
    }
}

impl<T: Real> Add for Matrix2<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (a, b) in out.rows.iter_mut().flatten().zip(rhs.rows.iter().flatten()) {
            *a = *a + *b;
        }
        out
    }
}

/// Pauli matrix in the `(↑, ↓)` basis.
pub fn pauli<T: Real>(axis: Axis) -> Matrix2<T> {
    let (o, l) = (T::zero(), T::one());
    match axis {
        Axis::X => Matrix2::new([[c(o, o), c(l, o)], [c(l, o), c(o, o)]]),
        Axis::Y => Matrix2::new([[c(o, o), c(o, -l)], [c(o, l), c(o, o)]]),
        Axis::Z => Matrix2::new([[c(l, o), c(o, o)], [c(o, o), c(-l, o)]]),
    }
}

/// Kronecker product with `a` acting on spin 1 (the left factor).
pub fn kron<T: Real>(a: &Matrix2<T>, b: &Matrix2<T>) -> Matrix4<T> {
    let mut out = Matrix4::zero();
    for i in 0..4 {
        for j in 0..4 {
            out.rows[i][j] = a.rows[i / 2][j / 2] * b.rows[i % 2][j % 2];
        }
    }
    out
}

/// Embeds a single-spin operator into the two-spin space.
pub fn on_spin<T: Real>(spin: Spin, op: &Matrix2<T>) -> Matrix4<T> {
    match spin {
        Spin::First => kron(op, &Matrix2::identity()),
        Spin::Second => kron(&Matrix2::identity(), op),
    }
}

impl<T: Real> Matrix4<T> {
    pub fn new(rows: [[Complex<T>; 4]; 4]) -> Self {
        Self { rows }
    }

    /// Builds a matrix from `(re, im)` pairs.
    pub fn from_parts(parts: [[(T, T); 4]; 4]) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.rows[i][j] = c(parts[i][j].0, parts[i][j].1);
            }
        }
        out
    }

    pub fn zero() -> Self {
        Self::new([[Complex::default(); 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diagonal([Complex::from(T::one()); 4])
    }

    pub fn diagonal(d: [Complex<T>; 4]) -> Self {
        let mut out = Self::zero();
        for (i, z) in d.into_iter().enumerate() {
            out.rows[i][i] = z;
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.rows[i][j] = self.rows[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..4).map(|i| self.rows[i][i]).fold(Complex::default(), |a, b| a + b)
    }

    /// `Tr[self† · other]` without forming the product.
    pub fn overlap(&self, other: &Self) -> Complex<T> {
        self.rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .map(|(a, b)| a.conj() * *b)
            .fold(Complex::default(), |a, b| a + b)
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let mut out = *self;
        out.rows.iter_mut().flatten().for_each(|z| *z = *z * factor);
        out
    }

    pub fn apply(&self, ket: &Ket4<T>) -> Ket4<T> {
        let mut out = [Complex::default(); 4];
        for (i, row) in self.rows.iter().enumerate() {
            out[i] = row.iter().zip(ket).map(|(a, b)| *a * *b).fold(Complex::default(), |a, b| a + b);
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.rows.iter().flatten().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.rows.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Max-norm deviation of `self† self` from the identity.
    pub fn unitarity_defect(&self) -> T {
        (self.adjoint() * *self).max_diff(&Self::identity())
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.max_diff(&self.adjoint()) <= tol
    }
}

impl<T: Real> Mul for Matrix4<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Complex::default();
                for k in 0..4 {
                    acc = acc + self.rows[i][k] * rhs.rows[k][j];
                }
                out.rows[i][j] = acc;
            }
        }
        out
    }
}

impl<T: Real> Add for Matrix4<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (a, b) in out.rows.iter_mut().flatten().zip(rhs.rows.iter().flatten()) {
            *a = *a + *b;
        }
        out
    }
}

impl<T: Real> Sub for Matrix4<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for (a, b) in out.rows.iter_mut().flatten().zip(rhs.rows.iter().flatten()) {
            *a = *a - *b;
        }
        out
    }
}

impl<T: Real> Neg for Matrix4<T> {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(Complex::from(-T::one()))
    }
}

/// A 4×4 matrix known to be unitary within [`Real::unitarity_tolerance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Matrix4<T>", into = "Matrix4<T>")]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct Unitary4<T: Real> {
    m: Matrix4<T>,
}

impl<T: Real> Unitary4<T> {
    /// Validates finiteness and unitarity; never projects.
    pub fn new(m: Matrix4<T>) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite("matrix entries"));
        }
        let deviation = m.unitarity_defect();
        if deviation > T::unitarity_tolerance() {
            return Err(Error::NotUnitary { deviation: deviation.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(Self { m })
    }

    /// Skips validation; callers build `m` from closed-form unitary expressions.
    pub(crate) fn from_exact(m: Matrix4<T>) -> Self {
        debug_assert!(m.unitarity_defect() <= T::unitarity_tolerance() * T::lit(16.0));
        Self { m }
    }

    pub fn identity() -> Self {
        Self { m: Matrix4::identity() }
    }

    pub fn matrix(&self) -> &Matrix4<T> {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.m.rows[row][col]
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn trace(&self) -> Complex<T> {
        self.m.trace()
    }

    pub fn apply(&self, ket: &Ket4<T>) -> Ket4<T> {
        self.m.apply(ket)
    }

    /// `e^{iχ} · self`.
    pub fn with_phase(&self, chi: T) -> Self {
        Self { m: self.m.scale(Complex::from_polar(T::one(), chi)) }
    }

    /// Conjugates by a single-spin operator, `op · self · op†`.
    pub fn conjugate_on(&self, spin: Spin, op: &Matrix2<T>) -> Result<Self> {
        let full = on_spin(spin, op);
        Self::new(full * self.m * full.adjoint())
    }
}

impl<T: Real> Mul for Unitary4<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self { m: self.m * rhs.m }
    }
}

impl<T: Real> TryFrom<Matrix4<T>> for Unitary4<T> {
    type Error = Error;

    fn try_from(m: Matrix4<T>) -> Result<Self> {
        Self::new(m)
    }
}

impl<T: Real> From<Unitary4<T>> for Matrix4<T> {
    fn from(u: Unitary4<T>) -> Self {
        u.m
    }
}

/// Optimal global phase aligning `b` onto `a`: `arg Tr[b†a]`, zero when the
/// overlap vanishes.
pub fn best_phase<T: Real>(a: &Unitary4<T>, b: &Unitary4<T>) -> T {
    let tr = b.matrix().overlap(a.matrix());
    if tr.norm() == T::zero() {
        T::zero()
    } else {
        tr.arg()
    }
}

/// True when some `e^{iχ}` gives `‖a - e^{iχ} b‖_max ≤ tol`.
pub fn approx_equal_up_to_phase<T: Real>(a: &Unitary4<T>, b: &Unitary4<T>, tol: T) -> bool {
    let chi = best_phase(a, b);
    a.matrix().max_diff(b.with_phase(chi).matrix()) <= tol
}

/// Euclidean norm of a two-spin state.
pub fn ket_norm<T: Real>(ket: &Ket4<T>) -> T {
    ket.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
}

/// `⟨a|b⟩`.
pub fn inner<T: Real>(a: &Ket4<T>, b: &Ket4<T>) -> Complex<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * *y).fold(Complex::default(), |p, q| p + q)
}

/// Computational basis state `index` (0 = ↑↑ … 3 = ↓↓).
pub fn basis_ket<T: Real>(index: usize) -> Ket4<T> {
    let mut k = [Complex::default(); 4];
    k[index] = Complex::from(T::one());
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

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
        let mut m = Matrix4::<f64>::zero();
        m.rows[0][0] = 1.0.into();
        m.rows[1][2] = I;
        m.rows[2][1] = I;
        m.rows[3][3] = 1.0.into();
        Unitary4::new(m).unwrap()
    }

    #[test]
    fn pauli_algebra() {
        let z = pauli::<f64>(Axis::Z);
        assert_eq!(z.rows[0][0], 1.0.into());
        assert_eq!(z.rows[1][1], (-1.0).into());
        assert_eq!(z.rows[0][1], 0.0.into());
        let x = pauli::<f64>(Axis::X);
        assert_eq!(x * x, Matrix2::identity());
        let y = pauli::<f64>(Axis::Y);
        assert!((x * y).max_diff(&z.scale(I)) < 1e-15);
    }

    #[test]
    fn kron_basics() {
        let id = Matrix2::<f64>::identity();
        assert_eq!(kron(&id, &id), Matrix4::identity());
        let z = pauli::<f64>(Axis::Z);
        let zz = kron(&z, &z);
        let expected = Matrix4::diagonal([1.0.into(), (-1.0).into(), (-1.0).into(), 1.0.into()]);
        assert_eq!(zz, expected);
        assert_eq!(zz.trace(), 0.0.into());
        // σx on spin 1 maps ↑↑ to ↓↑.
        let x1 = kron(&pauli::<f64>(Axis::X), &id);
        assert_eq!(x1.apply(&basis_ket(0)), basis_ket(2));
    }

    #[test]
    fn adjoint_trace_identity() {
        let u = iswap();
        assert_eq!(u.adjoint().adjoint(), u);
        assert_eq!(Matrix4::<f64>::identity().trace(), 4.0.into());
        assert!((*u.matrix() * *u.adjoint().matrix()).max_diff(&Matrix4::identity()) < 1e-15);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = Matrix4::<f64>::identity().scale(1.001.into());
        assert!(matches!(Unitary4::new(m), Err(Error::NotUnitary { .. })));
        let mut m = Matrix4::<f64>::identity();
        m.rows[2][2] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(Unitary4::new(m), Err(Error::NonFinite("matrix entries")));
    }

    #[test]
    fn phase_equality() {
        let u = iswap();
        assert!(approx_equal_up_to_phase(&u, &u, 1e-12));
        assert!(approx_equal_up_to_phase(&u, &u.with_phase(PI / 3.0), 1e-12));
        assert!(!approx_equal_up_to_phase(&swap(), &iswap(), 1e-12));
        // SWAP†·iSWAP = diag(1, i, i, 1).
        let tr = swap().matrix().overlap(iswap().matrix());
        assert!((tr - Complex64::new(2.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn f32_instantiation() {
        let z = pauli::<f32>(Axis::Z);
        let u = Unitary4::new(kron(&z, &z)).unwrap();
        assert!(approx_equal_up_to_phase(&u, &u.with_phase(1.0), 1e-5));
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&swap()).unwrap();
        assert!(s.starts_with("[[[1.0,0.0],[0.0,0.0]"));
        let back: Unitary4<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, swap());
        let bad = s.replacen("1.0", "2.0", 1);
        assert!(serde_json::from_str::<Unitary4<f64>>(&bad).is_err());
    }

    fn arb_m2() -> impl Strategy<Value = Matrix2<f64>> {
        prop::array::uniform4((-2.0..2.0f64, -2.0..2.0f64)).prop_map(|v| {
            Matrix2::new([
                [Complex64::new(v[0].0, v[0].1), Complex64::new(v[1].0, v[1].1)],
                [Complex64::new(v[2].0, v[2].1), Complex64::new(v[3].0, v[3].1)],
            ])
        })
    }

    fn su2(a: f64, b: f64, g: f64) -> Matrix2<f64> {
        let (ca, sa) = (a.cos(), a.sin());
        Matrix2::new([
            [Complex64::from_polar(ca, b), Complex64::from_polar(sa, g)],
            [-Complex64::from_polar(sa, -g), Complex64::from_polar(ca, -b)],
        ])
    }

    proptest! {
        #[test]
        fn kron_mixed_product(a in arb_m2(), b in arb_m2(), c2 in arb_m2(), d in arb_m2()) {
            let lhs = kron(&a, &b) * kron(&c2, &d);
            let rhs = kron(&(a * c2), &(b * d));
            prop_assert!(lhs.max_diff(&rhs) < 1e-12);
        }

        #[test]
        fn kron_bilinear(a in arb_m2(), b in arb_m2(), c2 in arb_m2()) {
            let lhs = kron(&(a + b), &c2);
            let rhs = kron(&a, &c2) + kron(&b, &c2);
            prop_assert!(lhs.max_diff(&rhs) < 1e-12);
        }

        #[test]
        fn unitary_closure_and_trace_bound(
            p in prop::array::uniform6(-3.0..3.0f64),
            chi in -3.0..3.0f64,
        ) {
            let u = Unitary4::new(kron(&su2(p[0], p[1], p[2]), &su2(p[3], p[4], p[5]))).unwrap();
            let v = Unitary4::new(*iswap().matrix()).unwrap() * u;
            prop_assert!(Unitary4::new(*(u * v).matrix()).is_ok());
            prop_assert!(Unitary4::new(*v.adjoint().matrix()).is_ok());
            let tr = v.matrix().overlap(u.matrix()).norm();
            prop_assert!(tr <= 4.0 + 1e-12);
            let w = u.with_phase(chi);
            prop_assert!((u.matrix().overlap(w.matrix()).norm() - 4.0).abs() < 1e-12);
            prop_assert!(approx_equal_up_to_phase(&u, &w, 1e-10));
            let equal = approx_equal_up_to_phase(&v, &u, 1e-10);
            prop_assert_eq!(equal, (tr - 4.0).abs() < 1e-12);
        }
    }
}
