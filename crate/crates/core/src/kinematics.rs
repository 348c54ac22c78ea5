//! Four-momenta in natural units with signature `(+, -, -, -)`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    /// On-shell momentum with energy `sqrt(|p|^2 + m^2)`.
    pub fn on_shell(m: f64, p: [f64; 3]) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::Domain(format!("mass must be positive, got {m}")));
        }
        let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        Ok(Self::new((p2 + m * m).sqrt(), p[0], p[1], p[2]))
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn components(&self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    /// Components with the index lowered by the metric.
    pub fn lowered(&self) -> [f64; 4] {
        [self.t, -self.x, -self.y, -self.z]
    }

    pub fn dot(&self, other: &FourVector) -> f64 {
        minkowski_dot(self, other)
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn spatial_norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.t, -self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }
}

/// `u0 v0 - u.v`.
pub fn minkowski_dot(u: &FourVector, v: &FourVector) -> f64 {
    u.t * v.t - u.x * v.x - u.y * v.y - u.z * v.z
}

/// Spatial reflection `(k0, -k)`: the antiparticle momentum in the centre of
/// mass frame.
pub fn parity_partner(k: &FourVector) -> FourVector {
    FourVector::new(k.t, -k.x, -k.y, -k.z)
}

/// Centre-of-mass kinematics: boost parameter `x = |k|^2 / m^2`, flight
/// direction `n` of the particle, and the common mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicConfig {
    x: f64,
    n: Direction,
    m: f64,
}

impl KinematicConfig {
    pub fn new(x: f64, n: Direction, m: f64) -> Result<Self> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::Domain(format!("x must be finite and >= 0, got {x}")));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::Domain(format!("mass must be positive, got {m}")));
        }
        Ok(Self { x, n, m })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn n(&self) -> Direction {
        self.n
    }

    pub fn m(&self) -> f64 {
        self.m
    }
}

/// `k = (m sqrt(1 + x), m sqrt(x) n)`.
pub fn momentum_from_x(cfg: &KinematicConfig) -> FourVector {
    let m = cfg.m;
    let r = m * cfg.x.sqrt();
    let [n1, n2, n3] = cfg.n.unit();
    FourVector::new(m * (1.0 + cfg.x).sqrt(), r * n1, r * n2, r * n3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn rest_frame_momentum() {
        let cfg = KinematicConfig::new(0.0, Direction::z(), 1.0).unwrap();
        assert_eq!(momentum_from_x(&cfg), FourVector::new(1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn unit_boost_momentum() {
        let cfg = KinematicConfig::new(1.0, Direction::z(), 1.0).unwrap();
        let k = momentum_from_x(&cfg);
        assert!((k.t - SQRT_2).abs() < 1e-15);
        assert!(k.x.abs() < 1e-15 && k.y.abs() < 1e-15);
        assert!((k.z - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mass_shell_along_x_axis() {
        let cfg = KinematicConfig::new(3.0, Direction::x(), 2.0).unwrap();
        let k = momentum_from_x(&cfg);
        assert!((k.norm_sq() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(KinematicConfig::new(-1e-3, Direction::z(), 1.0).is_err());
        assert!(KinematicConfig::new(1.0, Direction::z(), 0.0).is_err());
        assert!(KinematicConfig::new(f64::NAN, Direction::z(), 1.0).is_err());
        assert!(FourVector::on_shell(-1.0, [0.0; 3]).is_err());
    }

    #[test]
    fn parity_partner_examples() {
        let rest = FourVector::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(parity_partner(&rest), rest);
        let k = FourVector::new(SQRT_2, 0.0, 0.0, 1.0);
        assert_eq!(parity_partner(&k), FourVector::new(SQRT_2, 0.0, 0.0, -1.0));
        assert_eq!(parity_partner(&parity_partner(&k)), k);
    }

    #[test]
    fn metric_signature() {
        let e0 = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let e1 = FourVector::new(0.0, 1.0, 0.0, 0.0);
        assert_eq!(minkowski_dot(&e0, &e1), 0.0);
        assert_eq!(minkowski_dot(&e1, &e1), -1.0);
        assert_eq!(e0.lowered(), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(e1.lowered(), [0.0, -1.0, 0.0, 0.0]);
    }

    #[test]
    fn x_independent_of_n_at_rest() {
        let a = KinematicConfig::new(0.0, Direction::z(), 1.5).unwrap();
        let b = KinematicConfig::new(0.0, Direction::new(1.0, 2.0).unwrap(), 1.5).unwrap();
        assert_eq!(momentum_from_x(&a), momentum_from_x(&b));
    }

    proptest! {
        #[test]
        fn com_product_is_2x_plus_1(
            x in 0.0f64..50.0,
            m in 0.1f64..10.0,
            theta in 0.0f64..PI,
            phi in 0.0f64..std::f64::consts::TAU,
        ) {
            let n = Direction::new(theta, phi).unwrap();
            let k = momentum_from_x(&KinematicConfig::new(x, n, m).unwrap());
            let p = parity_partner(&k);
            // direct arithmetic: (k0^2 + |k|^2) = m^2 (1 + x) + m^2 x
            let oracle = m * m * (1.0 + x) + m * m * x;
            prop_assert!((minkowski_dot(&k, &p) - oracle).abs() <= 1e-10 * m * m * (1.0 + x));
            prop_assert!((k.norm_sq() - m * m).abs() <= 1e-10 * m * m * (1.0 + x));
            prop_assert!((k.spatial_norm_sq() / (m * m) - x).abs() <= 1e-10 * (1.0 + x));
        }
    }
}
