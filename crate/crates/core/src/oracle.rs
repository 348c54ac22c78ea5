//! Brute-force two-qutrit simulation of the spin-1 singlet.
//!
//! This path is kept separate from the relativistic engines: spin operators
//! come from ladder operators, projectors from a numerical eigendecomposition,
//! and probabilities from expectation values of Kronecker products on the
//! 9-dimensional pair space. It shares only [`Direction`] and
//! [`ProbabilityTable`] with the rest of the crate.

use nalgebra::{Complex, SMatrix, SVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{Direction, Outcome};
use crate::probabilities::ProbabilityTable;

type C = Complex<f64>;
type Op3 = SMatrix<C, 3, 3>;
type Op9 = SMatrix<C, 9, 9>;
type Ket9 = SVector<C, 9>;

const NORM_TOL: f64 = 1e-14;

/// Amplitudes over `|l> (x) |s>` with basis index `3 * i(l) + i(s)`, spin
/// labels ordered `(+1, 0, -1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QutritPairState {
    amps: Ket9,
}

impl QutritPairState {
    pub fn from_amplitudes(amps: [C; 9]) -> Result<Self> {
        let amps = Ket9::from(amps);
        let n = amps.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!("pair state has norm {n}")));
        }
        Ok(Self { amps })
    }

    pub fn amplitude(&self, particle: Outcome, antiparticle: Outcome) -> C {
        self.amps[3 * particle.index() + antiparticle.index()]
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `<state| op |state>` for an operator on the pair space.
    pub fn expectation(&self, op: &SMatrix<C, 9, 9>) -> C {
        (self.amps.adjoint() * op * self.amps)[(0, 0)]
    }
}

/// `(|1,-1> - |0,0> + |-1,1>) / sqrt(3)`.
pub fn singlet() -> QutritPairState {
    let s = 1.0 / 3f64.sqrt();
    let mut amps = [C::new(0.0, 0.0); 9];
    amps[3 * Outcome::Plus.index() + Outcome::Minus.index()] = C::new(s, 0.0);
    amps[3 * Outcome::Zero.index() + Outcome::Zero.index()] = C::new(-s, 0.0);
    amps[3 * Outcome::Minus.index() + Outcome::Plus.index()] = C::new(s, 0.0);
    QutritPairState {
        amps: Ket9::from(amps),
    }
}

/// Spin-1 `(Jx, Jy, Jz)` from the raising operator
/// `J+ |m> = sqrt(2 - m(m+1)) |m+1>`.
pub fn ladder_spin_operators() -> [Op3; 3] {
    let mut raise = Op3::zeros();
    for m in [-1i32, 0] {
        let from = (1 - m) as usize;
        let to = (1 - (m + 1)) as usize;
        raise[(to, from)] = C::new(f64::from(2 - m * (m + 1)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let jx = (raise + lower) * C::new(0.5, 0.0);
    let jy = (raise - lower) * C::new(0.0, -0.5);
    let mut jz = Op3::zeros();
    for i in 0..3 {
        jz[(i, i)] = C::new(1.0 - i as f64, 0.0);
    }
    [jx, jy, jz]
}

/// Eigenprojectors of `w . J` keyed by outcome.
fn eigen_projectors(w: &Direction) -> [Op3; 3] {
    let [jx, jy, jz] = ladder_spin_operators();
    let u = w.unit();
    let op = jx * C::new(u[0], 0.0) + jy * C::new(u[1], 0.0) + jz * C::new(u[2], 0.0);
    let eig = SymmetricEigen::new(op);
    let mut out = [Op3::zeros(); 3];
    for (k, &val) in eig.eigenvalues.iter().enumerate() {
        let outcome = if val > 0.5 {
            Outcome::Plus
        } else if val < -0.5 {
            Outcome::Minus
        } else {
            Outcome::Zero
        };
        let v = eig.eigenvectors.column(k);
        out[outcome.index()] += v * v.adjoint();
    }
    out
}

fn kron(a: &Op3, b: &Op3) -> Op9 {
    let mut out = Op9::zeros();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    out[(3 * i + k, 3 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `p(l, s) = <state| P_a^l (x) P_b^s |state>`.
pub fn joint_probs(
    state: &QutritPairState,
    a: &Direction,
    b: &Direction,
) -> Result<ProbabilityTable> {
    let pa = eigen_projectors(a);
    let pb = eigen_projectors(b);
    let mut entries = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            entries[i][j] = state.expectation(&kron(&pa[i], &pb[j])).re;
        }
    }
    ProbabilityTable::from_entries(entries, *a, *b)
}

/// Total spin projection operator `J.w (x) I + I (x) J.w` along `w`.
pub fn total_spin_along(w: &Direction) -> SMatrix<C, 9, 9> {
    let [jx, jy, jz] = ladder_spin_operators();
    let u = w.unit();
    let op = jx * C::new(u[0], 0.0) + jy * C::new(u[1], 0.0) + jz * C::new(u[2], 0.0);
    let id = Op3::identity();
    kron(&op, &id) + kron(&id, &op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spin_matrices;
    use std::f64::consts::PI;

    fn dir(t: f64, p: f64) -> Direction {
        Direction::new(t, p).unwrap()
    }

    #[test]
    fn singlet_amplitudes() {
        let s = singlet();
        let v = s.amplitude(Outcome::Zero, Outcome::Zero);
        assert!((v.re + 1.0 / 3f64.sqrt()).abs() < 1e-15 && v.im == 0.0);
        assert!((s.amplitude(Outcome::Plus, Outcome::Minus).re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(s.amplitude(Outcome::Plus, Outcome::Plus).norm(), 0.0);
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singlet_has_no_net_spin() {
        let s = singlet();
        for w in [Direction::z(), Direction::x(), dir(1.0, 2.0)] {
            assert!(s.expectation(&total_spin_along(&w)).norm() < 1e-15);
        }
    }

    #[test]
    fn ladder_operators_agree_with_spin_matrices() {
        let ladder = ladder_spin_operators();
        let explicit = spin_matrices();
        for (l, p) in ladder.iter().zip(explicit.iter()) {
            assert!((l - p).iter().all(|z| z.norm() < 1e-15));
        }
    }

    #[test]
    fn parallel_settings_along_z() {
        let z = Direction::z();
        let t = joint_probs(&singlet(), &z, &z).unwrap();
        let third = 1.0 / 3.0;
        assert!((t.get(Outcome::Plus, Outcome::Minus) - third).abs() < 1e-14);
        assert!((t.get(Outcome::Minus, Outcome::Plus) - third).abs() < 1e-14);
        assert!((t.get(Outcome::Zero, Outcome::Zero) - third).abs() < 1e-14);
        assert!(t.get(Outcome::Plus, Outcome::Plus).abs() < 1e-14);
        assert!((t.sum() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_settings() {
        let t = joint_probs(&singlet(), &Direction::z(), &Direction::x()).unwrap();
        assert!((t.get(Outcome::Plus, Outcome::Plus) - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_invariance() {
        // same relative angle, different absolute orientation
        let pairs = [
            (dir(0.0, 0.0), dir(0.7, 0.0)),
            (dir(PI / 2.0, 0.0), dir(PI / 2.0, 0.7)),
            (dir(1.0, 1.0), Direction::from_unbounded(1.7, 1.0)),
        ];
        let s = singlet();
        let base = joint_probs(&s, &pairs[0].0, &pairs[0].1).unwrap();
        for (a, b) in &pairs[1..] {
            assert!((a.dot(b) - 0.7f64.cos()).abs() < 1e-12);
            let t = joint_probs(&s, a, b).unwrap();
            assert!(t.max_abs_diff(&base) < 1e-12);
        }
    }

    #[test]
    fn rejects_unnormalized_state() {
        let amps = [C::new(0.5, 0.0); 9];
        assert!(QutritPairState::from_amplitudes(amps).is_err());
    }
}
