//! Small fixed-size complex matrices: spin-1 operators, their spectral
//! projectors, and the basis-change matrix `V`.
//!
//! Spin labels index rows and columns in the order `(+1, 0, -1)` everywhere in
//! the crate; [`Outcome::index`] is the single source of that mapping.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use nalgebra::{Complex, Matrix3, Matrix4, Matrix4x3, Vector3};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type Complex3x3 = Matrix3<C64>;
pub type Complex4x3 = Matrix4x3<C64>;
pub type Complex4x4 = Matrix4<C64>;
pub type Real4x4 = Matrix4<f64>;

const UNIT_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// Spin projection outcome of a single measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Zero,
    Minus,
}

impl Outcome {
    /// Outcomes in table order.
    pub const ALL: [Outcome; 3] = [Outcome::Plus, Outcome::Zero, Outcome::Minus];

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Zero => 1,
            Outcome::Minus => 2,
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Zero => 0,
            Outcome::Minus => -1,
        }
    }

    pub fn from_index(i: usize) -> Outcome {
        Outcome::ALL[i]
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Plus => "+1",
            Outcome::Zero => "0",
            Outcome::Minus => "-1",
        }
    }
}

/// A unit vector on the sphere, stored as polar angles with its Cartesian form
/// cached: `(cos(phi) sin(theta), sin(phi) sin(theta), cos(theta))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
    unit: [f64; 3],
}

impl Direction {
    /// `theta` must lie in `[0, pi]`; `phi` is reduced modulo `2 pi`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidDirection(format!(
                "non-finite angles ({theta}, {phi})"
            )));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidDirection(format!(
                "theta = {theta} outside [0, pi]"
            )));
        }
        Ok(Self::from_angles_unchecked(theta, phi.rem_euclid(TAU)))
    }

    /// Maps arbitrary real angles onto the sphere: `theta` is reflected into
    /// `[0, pi]` (shifting `phi` by `pi` when reflected) and `phi` is wrapped.
    pub fn from_unbounded(theta: f64, phi: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        let mut p = phi;
        if t > PI {
            t = TAU - t;
            p += PI;
        }
        Self::from_angles_unchecked(t, p.rem_euclid(TAU))
    }

    /// Builds a direction from a nonzero Cartesian vector (normalized here).
    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidDirection(format!("cannot normalize {v:?}")));
        }
        let u = [v[0] / norm, v[1] / norm, v[2] / norm];
        let theta = u[2].clamp(-1.0, 1.0).acos();
        let phi = u[1].atan2(u[0]).rem_euclid(TAU);
        Ok(Self {
            theta,
            phi,
            unit: u,
        })
    }

    fn from_angles_unchecked(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            theta,
            phi,
            unit: [cp * st, sp * st, ct],
        }
    }

    pub fn z() -> Self {
        Self::from_angles_unchecked(0.0, 0.0)
    }

    pub fn x() -> Self {
        Self::from_angles_unchecked(PI / 2.0, 0.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit(&self) -> [f64; 3] {
        self.unit
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::from(self.unit)
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.unit
            .iter()
            .zip(other.unit.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn negated(&self) -> Direction {
        let u = self.unit;
        // from_vector keeps the exact negated components
        Direction::from_vector([-u[0], -u[1], -u[2]]).expect("unit vector")
    }

    pub(crate) fn check_unit(&self) -> Result<()> {
        let n: f64 = self.unit.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidDirection(format!("|w| = {n}")));
        }
        Ok(())
    }
}

/// The spin-1 matrices `(S1, S2, S3)` in the `(+1, 0, -1)` basis.
pub fn spin_matrices() -> [Complex3x3; 3] {
    let h = FRAC_1_SQRT_2;
    let z = re(0.0);
    let s1 = Complex3x3::new(z, re(h), z, re(h), z, re(h), z, re(h), z);
    let s2 = Complex3x3::new(z, c(0.0, -h), z, c(0.0, h), z, c(0.0, -h), z, c(0.0, h), z);
    let s3 = Complex3x3::from_diagonal(&Vector3::new(re(1.0), z, re(-1.0)));
    [s1, s2, s3]
}

/// `w . S` for a unit direction `w`.
pub fn omega_dot_s(omega: &Direction) -> Complex3x3 {
    let [s1, s2, s3] = spin_matrices();
    let [w1, w2, w3] = omega.unit();
    s1 * re(w1) + s2 * re(w2) + s3 * re(w3)
}

/// Spectral projectors of `w . S` onto the eigenvalues `+1`, `0` and `-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinProjectors {
    pub plus: Complex3x3,
    pub zero: Complex3x3,
    pub minus: Complex3x3,
}

impl SpinProjectors {
    pub fn get(&self, outcome: Outcome) -> &Complex3x3 {
        match outcome {
            Outcome::Plus => &self.plus,
            Outcome::Zero => &self.zero,
            Outcome::Minus => &self.minus,
        }
    }
}

/// `P(+-) = ((w.S)^2 +- w.S) / 2`, `P(0) = I - (w.S)^2`.
pub fn spin_projectors(omega: &Direction) -> SpinProjectors {
    let s = omega_dot_s(omega);
    let s2 = s * s;
    let half = re(0.5);
    SpinProjectors {
        plus: (s2 + s) * half,
        zero: Complex3x3::identity() - s2,
        minus: (s2 - s) * half,
    }
}

/// The unitary `V` relating the spin basis to Cartesian components.
pub fn v_matrix() -> Complex3x3 {
    let h = FRAC_1_SQRT_2;
    let z = re(0.0);
    Complex3x3::new(re(-h), c(0.0, h), z, z, z, re(1.0), re(h), c(0.0, h), z)
}

/// `V V^T` (plain transpose), equal to the real symmetric permutation-like
/// matrix that maps `e(k)` to its complex conjugate.
pub fn v_vt() -> Complex3x3 {
    let v = v_matrix();
    v * v.transpose()
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect<const N: usize>(m: &nalgebra::SMatrix<C64, N, N>) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff<const R: usize, const C: usize>(
    a: &nalgebra::SMatrix<C64, R, C>,
    b: &nalgebra::SMatrix<C64, R, C>,
) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The Minkowski metric `diag(1, -1, -1, -1)`.
pub fn minkowski_metric() -> Real4x4 {
    Real4x4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn dir(theta: f64, phi: f64) -> Direction {
        Direction::new(theta, phi).unwrap()
    }

    fn sample_directions() -> Vec<Direction> {
        let mut out = Vec::new();
        for i in 0..7 {
            for j in 0..9 {
                out.push(dir(PI * i as f64 / 6.0, TAU * j as f64 / 9.0 + 0.1));
            }
        }
        out
    }

    #[test]
    fn spin_matrices_explicit_entries() {
        let [s1, s2, s3] = spin_matrices();
        let diag = Complex3x3::from_diagonal(&Vector3::new(re(1.0), re(0.0), re(-1.0)));
        assert_eq!(s3, diag);
        assert_eq!(s1[(0, 1)], re(FRAC_1_SQRT_2));
        assert_eq!(s1[(1, 2)], re(FRAC_1_SQRT_2));
        assert_eq!(s2[(1, 0)], c(0.0, FRAC_1_SQRT_2));
        assert_eq!(s2[(0, 1)], c(0.0, -FRAC_1_SQRT_2));
        for s in [s1, s2, s3] {
            assert_eq!(hermiticity_defect(&s), 0.0);
        }
    }

    #[test]
    fn su2_commutators() {
        let [s1, s2, s3] = spin_matrices();
        let i = c(0.0, 1.0);
        assert!(max_abs_diff(&(s1 * s2 - s2 * s1), &(s3 * i)) < 1e-15);
        assert!(max_abs_diff(&(s2 * s3 - s3 * s2), &(s1 * i)) < 1e-15);
        assert!(max_abs_diff(&(s3 * s1 - s1 * s3), &(s2 * i)) < 1e-15);
    }

    #[test]
    fn omega_dot_s_reduces_on_axes() {
        let [s1, _, s3] = spin_matrices();
        assert!(max_abs_diff(&omega_dot_s(&Direction::z()), &s3) < 1e-15);
        assert!(max_abs_diff(&omega_dot_s(&Direction::x()), &s1) < 1e-15);
    }

    #[test]
    fn omega_dot_s_eigenvalues_by_eigensolver() {
        let w = dir(PI / 2.0, PI / 4.0);
        let eig = SymmetricEigen::new(omega_dot_s(&w));
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in vals.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12, "{vals:?}");
        }
    }

    #[test]
    fn projectors_along_z_are_diagonal() {
        let p = spin_projectors(&Direction::z());
        let e = |a, b, c| Complex3x3::from_diagonal(&Vector3::new(re(a), re(b), re(c)));
        assert!(max_abs_diff(&p.plus, &e(1.0, 0.0, 0.0)) < 1e-15);
        assert!(max_abs_diff(&p.zero, &e(0.0, 1.0, 0.0)) < 1e-15);
        assert!(max_abs_diff(&p.minus, &e(0.0, 0.0, 1.0)) < 1e-15);
    }

    #[test]
    fn plus_projector_along_x_matches_eigenvector() {
        let [s1, _, _] = spin_matrices();
        let eig = SymmetricEigen::new(s1);
        let k = eig
            .eigenvalues
            .iter()
            .position(|v| (v - 1.0).abs() < 1e-9)
            .unwrap();
        let v = eig.eigenvectors.column(k).into_owned();
        let outer = v * v.adjoint();
        let p = spin_projectors(&Direction::x());
        assert!(max_abs_diff(&p.plus, &outer) < 1e-12);
    }

    #[test]
    fn projector_algebra_on_sphere_grid() {
        let id = Complex3x3::identity();
        for w in sample_directions() {
            let s = omega_dot_s(&w);
            assert!(max_abs_diff(&(s * s * s), &s) < 1e-13);
            assert!(hermiticity_defect(&s) < 1e-15);

            let p = spin_projectors(&w);
            assert!(max_abs_diff(&(p.plus + p.zero + p.minus), &id) < 1e-14);
            for a in Outcome::ALL {
                assert!((p.get(a).trace() - re(1.0)).norm() < 1e-13);
                for b in Outcome::ALL {
                    let prod = p.get(a) * p.get(b);
                    let want = if a == b {
                        *p.get(a)
                    } else {
                        Complex3x3::zeros()
                    };
                    assert!(max_abs_diff(&prod, &want) < 1e-13);
                }
            }
        }
    }

    #[test]
    fn v_is_unitary() {
        let v = v_matrix();
        assert_eq!(v[(0, 0)], re(-FRAC_1_SQRT_2));
        assert!(max_abs_diff(&(v.adjoint() * v), &Complex3x3::identity()) < 1e-15);
    }

    #[test]
    fn v_vt_is_a_symmetric_involution() {
        let w = v_vt();
        assert!(max_abs_diff(&w, &w.transpose()) < 1e-15);
        assert!(max_abs_diff(&(w * w), &Complex3x3::identity()) < 1e-14);
        // explicit form: swaps the +1 and -1 labels with a sign
        let z = re(0.0);
        let expect = Complex3x3::new(z, z, re(-1.0), z, re(1.0), z, re(-1.0), z, z);
        assert!(max_abs_diff(&w, &expect) < 1e-15);
    }

    #[test]
    fn direction_validation() {
        assert!(Direction::new(-0.1, 0.0).is_err());
        assert!(Direction::new(3.2, 0.0).is_err());
        assert!(Direction::new(f64::NAN, 0.0).is_err());
        let d = Direction::new(1.0, 7.0).unwrap();
        assert!((d.phi() - (7.0 - TAU)).abs() < 1e-15);
        assert!(Direction::from_vector([0.0; 3]).is_err());
    }

    #[test]
    fn unbounded_angles_reflect_onto_sphere() {
        for (t, p) in [(4.0, 1.0), (-0.5, 2.0), (10.0, -3.0), (PI, 0.0)] {
            let d = Direction::from_unbounded(t, p);
            let raw = [p.cos() * t.sin(), p.sin() * t.sin(), t.cos()];
            assert!((0.0..=PI).contains(&d.theta()));
            assert!((0.0..TAU).contains(&d.phi()));
            for (u, r) in d.unit().iter().zip(raw) {
                assert!((u - r).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn check_unit_flags_stretched_vector() {
        let bad = Direction {
            unit: [0.0, 0.0, 1.1],
            ..Direction::z()
        };
        assert!(bad.check_unit().is_err());
    }

    #[test]
    fn unit_norm_holds() {
        for w in sample_directions() {
            w.check_unit().unwrap();
            let back = Direction::from_vector(w.unit()).unwrap();
            assert!((back.dot(&w) - 1.0).abs() < 1e-12);
        }
    }
}
