//! Joint spin-measurement probabilities.
//!
//! Alice measures the particle (momentum `k`) along `a`, Bob the antiparticle
//! (momentum `p`) along `b`. Tables are indexed `[alice][bob]` in outcome order
//! `(+1, 0, -1)`.
//!
//! For a scalar state every table has only five distinct entries:
//! `P(+,+) = P(-,-)`, `P(+,-) = P(-,+)`, `P(0,+) = P(0,-)`, `P(+,0) = P(-,0)`
//! and `P(0,0)`. Two independent engines produce them: [`prob_table_trace`]
//! contracts the `M`, `N`, `T` tensors with `g(k, p)` for arbitrary on-shell
//! momenta, and [`prob_table_closed`] evaluates the centre-of-mass closed forms
//! for general `c`. [`prob_table_psi`] and [`prob_table_xi`] are separate
//! transcriptions of the two distinguished states.

use crate::error::{Error, Result};
use crate::kinematics::{FourVector, KinematicConfig};
use crate::linalg::{omega_dot_s, re, Complex3x3, Complex4x4, Direction, Outcome, C64};
use crate::states::{amplitude, com_normalization, g_tensor, normalization, ScalarStateSpec};

/// Negative entries down to this value are rounding noise and clamp to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;
/// Largest imaginary part tolerated in a normalized trace.
pub const IMAGINARY_TOL: f64 = 1e-10;
/// Tolerance on the table sum.
pub const SUM_TOL: f64 = 1e-10;

/// The five distinct probabilities of a scalar-state table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveValues {
    /// `P(+,+) = P(-,-)`
    pub same: f64,
    /// `P(+,-) = P(-,+)`
    pub opposite: f64,
    /// `P(0,+) = P(0,-)`: Alice zero, Bob nonzero.
    pub alice_zero: f64,
    /// `P(+,0) = P(-,0)`: Alice nonzero, Bob zero.
    pub bob_zero: f64,
    /// `P(0,0)`
    pub both_zero: f64,
}

impl FiveValues {
    pub fn sum(&self) -> f64 {
        2.0 * (self.same + self.opposite + self.alice_zero + self.bob_zero) + self.both_zero
    }

    pub fn correlation(&self) -> f64 {
        2.0 * (self.same - self.opposite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityTable {
    entries: [[f64; 3]; 3],
    alice: Direction,
    bob: Direction,
}

fn clamp_entry(v: f64, alice: usize, bob: usize) -> Result<f64> {
    if v.is_nan() {
        return Err(Error::Domain("probability evaluated to NaN".into()));
    }
    if v < 0.0 {
        if v < -NEGATIVE_CLAMP {
            return Err(Error::NegativeProbability {
                value: v,
                alice: Outcome::from_index(alice).value(),
                bob: Outcome::from_index(bob).value(),
            });
        }
        return Ok(0.0);
    }
    Ok(v)
}

impl ProbabilityTable {
    /// Entries are indexed `[alice][bob]`; small negative rounding residues
    /// are clamped.
    pub fn from_entries(entries: [[f64; 3]; 3], alice: Direction, bob: Direction) -> Result<Self> {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out[i][j] = clamp_entry(v, i, j)?;
            }
        }
        Ok(Self {
            entries: out,
            alice,
            bob,
        })
    }

    pub fn from_five(v: &FiveValues, alice: Direction, bob: Direction) -> Result<Self> {
        let e = [
            [v.same, v.bob_zero, v.opposite],
            [v.alice_zero, v.both_zero, v.alice_zero],
            [v.opposite, v.bob_zero, v.same],
        ];
        Self::from_entries(e, alice, bob)
    }

    pub fn get(&self, alice: Outcome, bob: Outcome) -> f64 {
        self.entries[alice.index()][bob.index()]
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.entries
    }

    pub fn alice(&self) -> Direction {
        self.alice
    }

    pub fn bob(&self) -> Direction {
        self.bob
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().flatten().sum()
    }

    /// `sum over outcomes of (alice value)(bob value) P`.
    pub fn correlation(&self) -> f64 {
        let mut acc = 0.0;
        for a in Outcome::ALL {
            for b in Outcome::ALL {
                acc += f64::from(a.value() * b.value()) * self.get(a, b);
            }
        }
        acc
    }

    /// `2 (P(+,+) - P(+,-))`, valid for the symmetric scalar-state tables.
    pub fn correlation_from_symmetry(&self) -> f64 {
        2.0 * (self.get(Outcome::Plus, Outcome::Plus) - self.get(Outcome::Plus, Outcome::Minus))
    }

    pub fn alice_marginal(&self) -> [f64; 3] {
        let mut m = [0.0; 3];
        for (i, row) in self.entries.iter().enumerate() {
            m[i] = row.iter().sum();
        }
        m
    }

    pub fn bob_marginal(&self) -> [f64; 3] {
        let mut m = [0.0; 3];
        for row in &self.entries {
            for (j, v) in row.iter().enumerate() {
                m[j] += v;
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &ProbabilityTable) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest violation of the five-value symmetry pattern.
    pub fn symmetry_defect(&self) -> f64 {
        use Outcome::*;
        let pairs = [
            ((Plus, Plus), (Minus, Minus)),
            ((Plus, Minus), (Minus, Plus)),
            ((Zero, Plus), (Zero, Minus)),
            ((Plus, Zero), (Minus, Zero)),
        ];
        pairs
            .iter()
            .map(|&((a1, b1), (a2, b2))| (self.get(a1, b1) - self.get(a2, b2)).abs())
            .fold(0.0, f64::max)
    }

    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let s = self.sum();
        if (s - 1.0).abs() > tol {
            return Err(Error::NotNormalized(s));
        }
        Ok(())
    }
}

/// `M`, `N` and `T` tensors (both indices upper) for one particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MntMatrices {
    pub m: Complex4x4,
    pub n: Complex4x4,
    pub t: Complex4x4,
}

/// `M = e* (w.S)^2 e^T`, `N = e* (w.S) e^T`, `T = e* (I - (w.S)^2) e^T`.
pub fn mnt(q: &FourVector, omega: &Direction, m: f64) -> Result<MntMatrices> {
    omega.check_unit()?;
    let e = amplitude(q, m)?.0;
    let s = omega_dot_s(omega);
    let s2 = s * s;
    let ec = e.conjugate();
    let et = e.transpose();
    Ok(MntMatrices {
        m: ec * s2 * et,
        n: ec * s * et,
        t: ec * (Complex3x3::identity() - s2) * et,
    })
}

fn normalized_trace(x: &Complex4x4, g: &Complex4x4, y: &Complex4x4, scale: f64) -> Result<f64> {
    let tr: C64 = (x * g * y * g.transpose()).trace() * re(scale);
    if tr.im.abs() > IMAGINARY_TOL {
        return Err(Error::ImaginaryResidue(tr.im));
    }
    Ok(tr.re)
}

/// Five-value probabilities from the trace expressions, for any on-shell
/// `k`, `p`.
pub fn five_values_trace(
    spec: &ScalarStateSpec,
    a: &Direction,
    b: &Direction,
) -> Result<FiveValues> {
    let norm = normalization(spec)?;
    let g = g_tensor(spec)?.map(re);
    let alice = mnt(&spec.k(), a, spec.m())?;
    let bob = mnt(&spec.p(), b, spec.m())?;
    let q = 1.0 / (4.0 * norm);
    let h = 1.0 / (2.0 * norm);
    let mm = normalized_trace(&alice.m, &g, &bob.m, q)?;
    let nn = normalized_trace(&alice.n, &g, &bob.n, q)?;
    Ok(FiveValues {
        same: mm - nn,
        opposite: mm + nn,
        alice_zero: normalized_trace(&alice.t, &g, &bob.m, h)?,
        bob_zero: normalized_trace(&alice.m, &g, &bob.t, h)?,
        both_zero: normalized_trace(&alice.t, &g, &bob.t, 1.0 / norm)?,
    })
}

pub fn prob_table_trace(
    spec: &ScalarStateSpec,
    a: &Direction,
    b: &Direction,
) -> Result<ProbabilityTable> {
    let v = five_values_trace(spec, a, b)?;
    ProbabilityTable::from_five(&v, *a, *b)
}

fn check_x(x: f64) -> Result<()> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::Domain(format!("x must be finite and >= 0, got {x}")));
    }
    Ok(())
}

/// Projections entering every centre-of-mass formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projections {
    pub ab: f64,
    pub an: f64,
    pub bn: f64,
}

impl Projections {
    pub fn new(n: &Direction, a: &Direction, b: &Direction) -> Self {
        Self {
            ab: a.dot(b),
            an: a.dot(n),
            bn: b.dot(n),
        }
    }
}

/// Closed-form centre-of-mass probabilities for general `c`.
pub fn five_values_closed(c: f64, x: f64, pr: Projections) -> FiveValues {
    let Projections { ab, an, bn } = pr;
    let y = 2.0 * x + 1.0;
    // 1 + 2c x/(2x+1) and 1 + 2c (x+1)/(2x+1), arranged so c = -1 is exact
    let beta_k = (2.0 * x * (1.0 + c) + 1.0) / y;
    let beta_p = (2.0 * x * (1.0 + c) + 1.0 + 2.0 * c) / y;
    let f = 4.0 * x * (x + 1.0) * beta_k * beta_p;
    let d = ab + 2.0 * x * beta_p * an * bn;
    let e = ab + 2.0 * x * beta_p * (ab - an * bn);
    let norm = com_normalization(c, x);
    let common = 1.0 + f * (1.0 - an * an - bn * bn) + d * d;
    FiveValues {
        same: (common - 2.0 * e) / (4.0 * norm),
        opposite: (common + 2.0 * e) / (4.0 * norm),
        alice_zero: (1.0 + f * an * an - d * d) / (2.0 * norm),
        bob_zero: (1.0 + f * bn * bn - d * d) / (2.0 * norm),
        both_zero: d * d / norm,
    }
}

/// Closed-form correlation `C(a, b) = -2/A [ab + 2x(1 + 2c(x+1)/(2x+1))(ab - an bn)]`.
pub fn correlation_closed(c: f64, x: f64, pr: Projections) -> f64 {
    let y = 2.0 * x + 1.0;
    let beta_p = (2.0 * x * (1.0 + c) + 1.0 + 2.0 * c) / y;
    let e = pr.ab + 2.0 * x * beta_p * (pr.ab - pr.an * pr.bn);
    -2.0 * e / com_normalization(c, x)
}

pub fn prob_table_closed(
    c: f64,
    x: f64,
    n: &Direction,
    a: &Direction,
    b: &Direction,
) -> Result<ProbabilityTable> {
    check_x(x)?;
    if !c.is_finite() {
        return Err(Error::Domain(format!("c must be finite, got {c}")));
    }
    let v = five_values_closed(c, x, Projections::new(n, a, b));
    ProbabilityTable::from_five(&v, *a, *b)
}

/// The `psi` (c = 0) table, written out separately from the general-c code.
pub fn prob_table_psi(
    x: f64,
    n: &Direction,
    a: &Direction,
    b: &Direction,
) -> Result<ProbabilityTable> {
    check_x(x)?;
    let Projections { ab, an, bn } = Projections::new(n, a, b);
    let y = 2.0 * x + 1.0;
    let den = y * y + 2.0;
    let d = ab + 2.0 * x * an * bn;
    let u = 4.0 * x * (x + 1.0);
    let base = y * y - u * (an * an + bn * bn) + d * d;
    let cross = -2.0 * y * ab + 4.0 * x * an * bn;
    let v = FiveValues {
        same: (base + cross) / (4.0 * den),
        opposite: (base - cross) / (4.0 * den),
        alice_zero: (1.0 + u * an * an - d * d) / (2.0 * den),
        bob_zero: (1.0 + u * bn * bn - d * d) / (2.0 * den),
        both_zero: d * d / den,
    };
    ProbabilityTable::from_five(&v, *a, *b)
}

/// The `xi` (c = -1) table, written out separately from the general-c code.
pub fn prob_table_xi(
    x: f64,
    n: &Direction,
    a: &Direction,
    b: &Direction,
) -> Result<ProbabilityTable> {
    check_x(x)?;
    let Projections { ab, an, bn } = Projections::new(n, a, b);
    let y = 2.0 * x + 1.0;
    let den = 2.0 * y * y + 1.0;
    let u = 4.0 * x * (x + 1.0);
    let w = y * ab - 2.0 * x * an * bn;
    let base = w * w + y * y - u * (1.0 - an * an - bn * bn);
    let cross = 2.0 * y * (ab + 2.0 * x * an * bn);
    let v = FiveValues {
        same: (base - cross) / (4.0 * den),
        opposite: (base + cross) / (4.0 * den),
        alice_zero: (1.0 + u * (1.0 - an * an) - w * w) / (2.0 * den),
        bob_zero: (1.0 + u * (1.0 - bn * bn) - w * w) / (2.0 * den),
        both_zero: w * w / den,
    };
    ProbabilityTable::from_five(&v, *a, *b)
}

/// Correlation function in the centre-of-mass frame.
pub fn correlation(c: f64, x: f64, n: &Direction, a: &Direction, b: &Direction) -> Result<f64> {
    check_x(x)?;
    Ok(correlation_closed(c, x, Projections::new(n, a, b)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitKind {
    /// `x -> 0`, any `c`.
    Nonrelativistic,
    /// `x -> infinity` for `c != -1`.
    UltrarelativisticGeneric,
    /// `x -> infinity` for `c = -1`.
    UltrarelativisticXi,
}

impl LimitKind {
    /// The ultrarelativistic branch that applies to a given `c`.
    pub fn ultrarelativistic_for(c: f64) -> Self {
        if c == -1.0 {
            LimitKind::UltrarelativisticXi
        } else {
            LimitKind::UltrarelativisticGeneric
        }
    }
}

pub fn limit_five_values(kind: LimitKind, pr: Projections) -> FiveValues {
    let Projections { ab, an, bn } = pr;
    match kind {
        LimitKind::Nonrelativistic => FiveValues {
            same: (1.0 - ab).powi(2) / 12.0,
            opposite: (1.0 + ab).powi(2) / 12.0,
            alice_zero: (1.0 - ab * ab) / 6.0,
            bob_zero: (1.0 - ab * ab) / 6.0,
            both_zero: ab * ab / 3.0,
        },
        LimitKind::UltrarelativisticGeneric => {
            let t = 0.25 * (1.0 - an * an) * (1.0 - bn * bn);
            FiveValues {
                same: t,
                opposite: t,
                alice_zero: 0.5 * an * an * (1.0 - bn * bn),
                bob_zero: 0.5 * bn * bn * (1.0 - an * an),
                both_zero: an * an * bn * bn,
            }
        }
        LimitKind::UltrarelativisticXi => {
            let w = ab - an * bn;
            FiveValues {
                same: (w * w + (an - bn).powi(2)) / 8.0,
                opposite: (w * w + (an + bn).powi(2)) / 8.0,
                alice_zero: (1.0 - an * an - w * w) / 4.0,
                bob_zero: (1.0 - bn * bn - w * w) / 4.0,
                both_zero: w * w / 2.0,
            }
        }
    }
}

pub fn limit_tables(
    kind: LimitKind,
    a: &Direction,
    b: &Direction,
    n: &Direction,
) -> Result<ProbabilityTable> {
    let v = limit_five_values(kind, Projections::new(n, a, b));
    ProbabilityTable::from_five(&v, *a, *b)
}

/// A centre-of-mass state: family parameter `c`, boost `x` and flight
/// direction `n` of the particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComState {
    pub c: f64,
    pub x: f64,
    pub n: Direction,
}

impl ComState {
    pub fn new(c: f64, x: f64, n: Direction) -> Result<Self> {
        check_x(x)?;
        if !c.is_finite() {
            return Err(Error::Domain(format!("c must be finite, got {c}")));
        }
        Ok(Self { c, x, n })
    }

    pub fn psi(x: f64, n: Direction) -> Result<Self> {
        Self::new(crate::states::C_PSI, x, n)
    }

    pub fn xi(x: f64, n: Direction) -> Result<Self> {
        Self::new(crate::states::C_XI, x, n)
    }

    pub fn table(&self, a: &Direction, b: &Direction) -> Result<ProbabilityTable> {
        prob_table_closed(self.c, self.x, &self.n, a, b)
    }

    pub fn five_values(&self, a: &Direction, b: &Direction) -> FiveValues {
        five_values_closed(self.c, self.x, Projections::new(&self.n, a, b))
    }

    pub fn correlation(&self, a: &Direction, b: &Direction) -> f64 {
        correlation_closed(self.c, self.x, Projections::new(&self.n, a, b))
    }

    /// The full-kinematics state with `p = k^pi` at mass `m`.
    pub fn spec(&self, m: f64) -> Result<ScalarStateSpec> {
        let cfg = KinematicConfig::new(self.x, self.n, m)?;
        ScalarStateSpec::center_of_mass(self.c, &cfg)
    }
}
