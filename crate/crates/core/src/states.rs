//! Scalar boson-antiboson states
//! `|alpha> = g_{mu nu}(k, p) e^mu_l(k) e^nu_s(p) |(k, l); (p, s)>`
//! with `g = eta + c / (kp) (k p + p k)`.
//!
//! `c = 0` is the state `psi`, `c = -1` the state `xi`.

use crate::error::{Error, Result};
use crate::kinematics::{momentum_from_x, parity_partner, FourVector, KinematicConfig};
use crate::linalg::{minkowski_metric, re, v_matrix, Complex4x3, Real4x4};

/// Relative tolerance on the mass shell, in units of `m^2`.
pub const ON_SHELL_TOL: f64 = 1e-8;

pub const C_PSI: f64 = 0.0;
pub const C_XI: f64 = -1.0;

fn check_on_shell(what: &'static str, k: &FourVector, m: f64) -> Result<()> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::Domain(format!("mass must be positive, got {m}")));
    }
    if k.t.is_nan() || k.t <= 0.0 {
        return Err(Error::Domain(format!(
            "{what} must have positive energy, got {}",
            k.t
        )));
    }
    let norm = k.norm_sq();
    // k0^2 - |k|^2 loses ~eps k0^2 to cancellation at large boosts
    let tol = ON_SHELL_TOL * m * m + 8.0 * f64::EPSILON * k.t * k.t;
    if (norm - m * m).abs() > tol {
        return Err(Error::OffShell {
            what,
            norm,
            mass_sq: m * m,
        });
    }
    Ok(())
}

/// A member of the scalar family: parameter `c` plus on-shell momenta of the
/// particle (`k`) and antiparticle (`p`) sharing mass `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarStateSpec {
    c: f64,
    k: FourVector,
    p: FourVector,
    m: f64,
}

impl ScalarStateSpec {
    pub fn new(c: f64, k: FourVector, p: FourVector, m: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::Domain(format!("c must be finite, got {c}")));
        }
        check_on_shell("k", &k, m)?;
        check_on_shell("p", &p, m)?;
        let kp = k.dot(&p);
        if kp == 0.0 {
            return Err(Error::DegenerateProduct(kp));
        }
        Ok(Self { c, k, p, m })
    }

    pub fn psi(k: FourVector, p: FourVector, m: f64) -> Result<Self> {
        Self::new(C_PSI, k, p, m)
    }

    pub fn xi(k: FourVector, p: FourVector, m: f64) -> Result<Self> {
        Self::new(C_XI, k, p, m)
    }

    /// The state with `p = k^pi` for the given centre-of-mass kinematics.
    pub fn center_of_mass(c: f64, cfg: &KinematicConfig) -> Result<Self> {
        let k = momentum_from_x(cfg);
        Self::new(c, k, parity_partner(&k), cfg.m())
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn k(&self) -> FourVector {
        self.k
    }

    pub fn p(&self) -> FourVector {
        self.p
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// The Minkowski product `(kp)`.
    pub fn kp(&self) -> f64 {
        self.k.dot(&self.p)
    }
}

/// The 4x3 amplitude matrix `e^mu_sigma(k)`; rows are Lorentz indices (upper),
/// columns spin labels in `(+1, 0, -1)` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeMatrix(pub Complex4x3);

impl AmplitudeMatrix {
    pub fn matrix(&self) -> &Complex4x3 {
        &self.0
    }
}

/// `e(k) = [k^T / m ; I + k k^T / (m (m + k0))] V^T`.
pub fn amplitude(k: &FourVector, m: f64) -> Result<AmplitudeMatrix> {
    check_on_shell("k", k, m)?;
    let kv = k.spatial();
    let denom = m * (m + k.t);
    let mut boost = nalgebra::Matrix4x3::<f64>::zeros();
    for j in 0..3 {
        boost[(0, j)] = kv[j] / m;
        for i in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            boost[(i + 1, j)] = delta + kv[i] * kv[j] / denom;
        }
    }
    let e = boost.map(re) * v_matrix().transpose();
    Ok(AmplitudeMatrix(e))
}

/// `g_{mu nu}(k, p) = eta_{mu nu} + c / (kp) (k_mu p_nu + p_mu k_nu)`, both
/// indices lower.
pub fn g_tensor(spec: &ScalarStateSpec) -> Result<Real4x4> {
    let kp = spec.kp();
    if kp == 0.0 {
        return Err(Error::DegenerateProduct(kp));
    }
    let kl = spec.k.lowered();
    let pl = spec.p.lowered();
    let s = spec.c / kp;
    let mut g = minkowski_metric();
    for mu in 0..4 {
        for nu in 0..4 {
            g[(mu, nu)] += s * (kl[mu] * pl[nu] + pl[mu] * kl[nu]);
        }
    }
    Ok(g)
}

/// `A(k, p) = 2 + [c m^2 / (kp) - (kp)(1 + c) / m^2]^2`.
pub fn normalization(spec: &ScalarStateSpec) -> Result<f64> {
    let kp = spec.kp();
    if kp == 0.0 {
        return Err(Error::DegenerateProduct(kp));
    }
    let m2 = spec.m * spec.m;
    let bracket = spec.c * m2 / kp - kp * (1.0 + spec.c) / m2;
    Ok(2.0 + bracket * bracket)
}

/// `A(k, k^pi) = 2 + [4x(x+1)(c+1) + 1]^2 / (2x+1)^2`.
pub fn com_normalization(c: f64, x: f64) -> f64 {
    let num = 4.0 * x * (x + 1.0) * (c + 1.0) + 1.0;
    let y = 2.0 * x + 1.0;
    2.0 + (num * num) / (y * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, v_vt, Complex3x3, Direction, C64};
    use nalgebra::Matrix4;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn boosted(x: f64, theta: f64, phi: f64, m: f64) -> FourVector {
        let n = Direction::new(theta, phi).unwrap();
        momentum_from_x(&KinematicConfig::new(x, n, m).unwrap())
    }

    fn eta_c() -> Matrix4<C64> {
        minkowski_metric().map(re)
    }

    #[test]
    fn amplitude_at_rest_is_v_transpose() {
        let e = amplitude(&FourVector::new(2.0, 0.0, 0.0, 0.0), 2.0).unwrap();
        let vt = v_matrix().transpose();
        for s in 0..3 {
            assert_eq!(e.0[(0, s)], re(0.0));
            for i in 0..3 {
                assert!((e.0[(i + 1, s)] - vt[(i, s)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn amplitude_rejects_bad_momenta() {
        assert!(amplitude(&FourVector::new(1.0, 0.0, 0.0, 0.5), 1.0).is_err());
        assert!(amplitude(&FourVector::new(-1.0, 0.0, 0.0, 0.0), 1.0).is_err());
        assert!(amplitude(&FourVector::new(1.0, 0.0, 0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn spec_rejects_mass_mismatch() {
        let k = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let p = FourVector::new(2.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            ScalarStateSpec::psi(k, p, 1.0),
            Err(Error::OffShell { what: "p", .. })
        ));
    }

    #[test]
    fn g_is_eta_for_psi() {
        let k = boosted(0.7, 1.0, 2.0, 1.0);
        let spec = ScalarStateSpec::psi(k, parity_partner(&k), 1.0).unwrap();
        assert_eq!(g_tensor(&spec).unwrap(), minkowski_metric());
    }

    #[test]
    fn g_for_xi_at_rest() {
        // (kp) = m^2 and k_mu p_nu = m^2 only in the 00 slot
        let k = FourVector::new(1.3, 0.0, 0.0, 0.0);
        let spec = ScalarStateSpec::xi(k, k, 1.3).unwrap();
        let g = g_tensor(&spec).unwrap();
        let want = Real4x4::from_diagonal_element(-1.0);
        assert!((g - want).abs().max() < 1e-15);
    }

    #[test]
    fn normalization_special_forms() {
        for x in [0.0, 0.3, 1.0, 4.5, 100.0] {
            let y = 2.0 * x + 1.0;
            let k = boosted(x, 0.4, 5.0, 1.0);
            let p = parity_partner(&k);
            let psi = normalization(&ScalarStateSpec::psi(k, p, 1.0).unwrap()).unwrap();
            let xi = normalization(&ScalarStateSpec::xi(k, p, 1.0).unwrap()).unwrap();
            let tol = 1e-12 * y * y;
            assert!((psi - (2.0 + y * y)).abs() < tol, "x={x}: {psi}");
            assert!((xi - (2.0 + 1.0 / (y * y))).abs() < 1e-12, "x={x}: {xi}");
            assert!((com_normalization(0.0, x) - (2.0 + y * y)).abs() < tol);
            assert!((com_normalization(-1.0, x) - (2.0 + 1.0 / (y * y))).abs() < 1e-12);
        }
        assert_eq!(com_normalization(0.0, 0.0), 3.0);
        assert_eq!(com_normalization(-1.0, 0.0), 3.0);
    }

    #[test]
    fn general_normalization_matches_com_form() {
        for c in [-2.0, -1.0, -0.5, 0.0, 0.3, 1.0] {
            for x in [0.0, 0.25, 2.0, 9.0] {
                let k = boosted(x, 2.0, 1.0, 1.7);
                let spec = ScalarStateSpec::new(c, k, parity_partner(&k), 1.7).unwrap();
                let a = normalization(&spec).unwrap();
                let b = com_normalization(c, x);
                assert!((a - b).abs() < 1e-11 * b, "c={c} x={x}: {a} vs {b}");
            }
        }
    }

    proptest! {
        #[test]
        fn amplitude_identities(
            x in 0.0f64..20.0,
            theta in 0.0f64..PI,
            phi in 0.0f64..std::f64::consts::TAU,
            m in 0.2f64..5.0,
        ) {
            let k = boosted(x, theta, phi, m);
            let e = amplitude(&k, m).unwrap().0;
            let scale = 1.0 + x;

            // transversality k_mu e^mu_s = 0
            let kl = k.lowered();
            for s in 0..3 {
                let t: C64 = (0..4).map(|mu| e[(mu, s)] * kl[mu]).sum();
                prop_assert!(t.norm() < 1e-12 * scale);
            }

            // e* = e V V^T
            prop_assert!(max_abs_diff(&e.conjugate(), &(e * v_vt())) < 1e-13 * scale);

            // sum_s e*^mu_s e^nu_s = -eta^{mu nu} + k^mu k^nu / m^2
            let ku = k.components();
            let mut want = -eta_c();
            for mu in 0..4 {
                for nu in 0..4 {
                    want[(mu, nu)] += re(ku[mu] * ku[nu] / (m * m));
                }
            }
            let got = e.conjugate() * e.transpose();
            prop_assert!(max_abs_diff(&got, &want) < 1e-11 * scale);

            // e*^mu_s e_{mu l} = -delta, e^mu_s e_{mu l} = -(V V^T)
            let lowered = eta_c() * e;
            prop_assert!(max_abs_diff(&(e.adjoint() * lowered), &(-Complex3x3::identity())) < 1e-12 * scale);
            prop_assert!(max_abs_diff(&(e.transpose() * lowered), &(-v_vt())) < 1e-12 * scale);
        }

        #[test]
        fn g_symmetric_and_normalization_bounded(
            c in -3.0f64..3.0,
            x1 in 0.0f64..10.0,
            x2 in 0.0f64..10.0,
            t1 in 0.0f64..PI, p1 in 0.0f64..std::f64::consts::TAU,
            t2 in 0.0f64..PI, p2 in 0.0f64..std::f64::consts::TAU,
        ) {
            let k = boosted(x1, t1, p1, 1.0);
            let p = boosted(x2, t2, p2, 1.0);
            let spec = ScalarStateSpec::new(c, k, p, 1.0).unwrap();
            let g = g_tensor(&spec).unwrap();
            prop_assert!((g - g.transpose()).abs().max() < 1e-14 * (1.0 + c.abs()));
            prop_assert!(normalization(&spec).unwrap() >= 2.0);
            prop_assert!(com_normalization(c, x1) >= 2.0);
        }
    }
}
