//! CHSH, Mermin and CGLMP expressions for centre-of-mass states.
//!
//! Correlations `C(u, v)` always take Alice's (particle) direction first.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Direction, Outcome};
use crate::probabilities::{ComState, ProbabilityTable, SUM_TOL};

/// Margin above the classical bound before a value counts as a violation.
pub const VIOLATION_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InequalityKind {
    Chsh,
    Mermin,
    Cglmp,
}

impl InequalityKind {
    pub fn classical_bound(self) -> f64 {
        match self {
            InequalityKind::Chsh => 2.0,
            InequalityKind::Mermin => 1.0,
            InequalityKind::Cglmp => 2.0,
        }
    }

    pub fn direction_count(self) -> usize {
        match self {
            InequalityKind::Mermin => 3,
            InequalityKind::Chsh | InequalityKind::Cglmp => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            InequalityKind::Chsh => "chsh",
            InequalityKind::Mermin => "mermin",
            InequalityKind::Cglmp => "cglmp",
        }
    }
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for InequalityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chsh" => Ok(InequalityKind::Chsh),
            "mermin" => Ok(InequalityKind::Mermin),
            "cglmp" => Ok(InequalityKind::Cglmp),
            other => Err(Error::Domain(format!("unknown inequality `{other}`"))),
        }
    }
}

/// Measurement directions. CHSH and CGLMP use all four (`a`, `c` for Alice,
/// `b`, `d` for Bob); Mermin uses `a`, `b`, `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSettings {
    pub a: Direction,
    pub b: Direction,
    pub c: Option<Direction>,
    pub d: Option<Direction>,
}

impl MeasurementSettings {
    pub fn three(a: Direction, b: Direction, c: Direction) -> Self {
        Self {
            a,
            b,
            c: Some(c),
            d: None,
        }
    }

    pub fn four(a: Direction, b: Direction, c: Direction, d: Direction) -> Self {
        Self {
            a,
            b,
            c: Some(c),
            d: Some(d),
        }
    }

    /// Builds settings from an ordered list `[a, b, c, d]` (2 to 4 entries).
    pub fn from_slice(dirs: &[Direction]) -> Result<Self> {
        match dirs {
            [a, b] => Ok(Self {
                a: *a,
                b: *b,
                c: None,
                d: None,
            }),
            [a, b, c] => Ok(Self::three(*a, *b, *c)),
            [a, b, c, d] => Ok(Self::four(*a, *b, *c, *d)),
            _ => Err(Error::Domain(format!(
                "expected 2 to 4 directions, got {}",
                dirs.len()
            ))),
        }
    }

    pub fn directions(&self) -> Vec<Direction> {
        let mut v = vec![self.a, self.b];
        v.extend(self.c);
        v.extend(self.d);
        v
    }

    fn c_for(&self, kind: InequalityKind) -> Result<Direction> {
        self.c.ok_or(Error::MissingDirection {
            kind: kind.name(),
            name: "c",
        })
    }

    fn d_for(&self, kind: InequalityKind) -> Result<Direction> {
        self.d.ok_or(Error::MissingDirection {
            kind: kind.name(),
            name: "d",
        })
    }

    fn validate(&self) -> Result<()> {
        for d in self.directions() {
            d.check_unit()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityResult {
    pub kind: InequalityKind,
    pub value: f64,
    pub classical_bound: f64,
    pub settings: MeasurementSettings,
    pub state: ComState,
    pub violated: bool,
}

impl InequalityResult {
    pub fn new(
        kind: InequalityKind,
        value: f64,
        settings: MeasurementSettings,
        state: ComState,
    ) -> Self {
        let bound = kind.classical_bound();
        Self {
            kind,
            value,
            classical_bound: bound,
            settings,
            state,
            violated: value > bound + VIOLATION_EPS,
        }
    }
}

/// `|C(a,b) - C(a,d)| + |C(c,b) + C(c,d)|`.
pub fn chsh(state: &ComState, settings: &MeasurementSettings) -> Result<InequalityResult> {
    let kind = InequalityKind::Chsh;
    let (c, d) = (settings.c_for(kind)?, settings.d_for(kind)?);
    settings.validate()?;
    let a = &settings.a;
    let b = &settings.b;
    let corr = |u: &Direction, v: &Direction| state.correlation(u, v);
    let value = (corr(a, b) - corr(a, &d)).abs() + (corr(&c, b) + corr(&c, &d)).abs();
    Ok(InequalityResult::new(kind, value, *settings, *state))
}

/// `C(a,b) + C(b,c) + C(c,a)`.
pub fn mermin(state: &ComState, settings: &MeasurementSettings) -> Result<InequalityResult> {
    let kind = InequalityKind::Mermin;
    let c = settings.c_for(kind)?;
    settings.validate()?;
    let (a, b) = (&settings.a, &settings.b);
    let value = state.correlation(a, b) + state.correlation(b, &c) + state.correlation(&c, a);
    Ok(InequalityResult::new(kind, value, *settings, *state))
}

/// Outcome carrying CGLMP label `l`: spin `-1, 0, +1` map to `0, 1, 2`.
fn outcome_for_label(l: usize) -> Outcome {
    [Outcome::Minus, Outcome::Zero, Outcome::Plus][l]
}

/// Joint distribution of one setting pair in CGLMP labels,
/// `q[alice][bob]`.
fn relabel(t: &ProbabilityTable) -> [[f64; 3]; 3] {
    let mut q = [[0.0; 3]; 3];
    for (i, row) in q.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = t.get(outcome_for_label(i), outcome_for_label(j));
        }
    }
    q
}

/// `P(A = B + k) = sum_l P(A = l, B = l + k mod 3)`.
fn alice_shifted(q: &[[f64; 3]; 3], k: i32) -> f64 {
    (0..3)
        .map(|l| q[l][(l as i32 + k).rem_euclid(3) as usize])
        .sum()
}

/// `P(B = A + k) = sum_l P(B = l, A = l + k mod 3)`.
fn bob_shifted(q: &[[f64; 3]; 3], k: i32) -> f64 {
    (0..3)
        .map(|l| q[(l as i32 + k).rem_euclid(3) as usize][l])
        .sum()
}

/// CGLMP `I3` built from the modular outcome differences of four tables
/// supplied by `tables(alice_dir, bob_dir)`. Measurements `A1, B1, A2, B2`
/// are `a, b, c, d`.
pub fn cglmp_generic<F>(
    state: &ComState,
    settings: &MeasurementSettings,
    tables: F,
) -> Result<InequalityResult>
where
    F: Fn(&Direction, &Direction) -> Result<ProbabilityTable>,
{
    let kind = InequalityKind::Cglmp;
    let (c, d) = (settings.c_for(kind)?, settings.d_for(kind)?);
    settings.validate()?;
    let get = |u: &Direction, v: &Direction| -> Result<[[f64; 3]; 3]> {
        let t = tables(u, v)?;
        t.check_normalized(SUM_TOL)?;
        Ok(relabel(&t))
    };
    let a1b1 = get(&settings.a, &settings.b)?;
    let a2b1 = get(&c, &settings.b)?;
    let a2b2 = get(&c, &d)?;
    let a1b2 = get(&settings.a, &d)?;

    let plus = alice_shifted(&a1b1, 0)
        + bob_shifted(&a2b1, 1)
        + alice_shifted(&a2b2, 0)
        + bob_shifted(&a1b2, 0);
    let minus = alice_shifted(&a1b1, -1)
        + bob_shifted(&a2b1, 0)
        + alice_shifted(&a2b2, -1)
        + bob_shifted(&a1b2, -1);
    Ok(InequalityResult::new(kind, plus - minus, *settings, *state))
}

/// CGLMP `I3` from the centre-of-mass closed-form tables.
pub fn cglmp(state: &ComState, settings: &MeasurementSettings) -> Result<InequalityResult> {
    cglmp_generic(state, settings, |u, v| state.table(u, v))
}

/// CGLMP `I3` written out in correlations and single probabilities.
pub fn cglmp_expanded(
    state: &ComState,
    settings: &MeasurementSettings,
) -> Result<InequalityResult> {
    use Outcome::{Minus as M, Plus as P, Zero as Z};
    let kind = InequalityKind::Cglmp;
    let (c, d) = (settings.c_for(kind)?, settings.d_for(kind)?);
    settings.validate()?;
    let a = settings.a;
    let b = settings.b;
    let ab = state.table(&a, &b)?;
    let cd = state.table(&c, &d)?;
    let ad = state.table(&a, &d)?;
    let cb = state.table(&c, &b)?;
    let corr = |u: &Direction, v: &Direction| state.correlation(u, v);

    let value = corr(&a, &b) + corr(&c, &d) + corr(&a, &d) - corr(&c, &b)
        + ab.get(P, M)
        + cd.get(P, M)
        + ad.get(M, P)
        - cb.get(P, M)
        + ab.get(Z, Z)
        + cd.get(Z, Z)
        + ad.get(Z, Z)
        - cb.get(Z, Z)
        - (ab.get(Z, M) + cd.get(Z, M) + ad.get(M, Z) - cb.get(Z, M)
            + ab.get(P, Z)
            + cd.get(P, Z)
            + ad.get(Z, P)
            - cb.get(P, Z));
    Ok(InequalityResult::new(kind, value, *settings, *state))
}

/// Dispatches on `kind`; CGLMP uses the modular construction.
pub fn evaluate(
    kind: InequalityKind,
    state: &ComState,
    settings: &MeasurementSettings,
) -> Result<InequalityResult> {
    match kind {
        InequalityKind::Chsh => chsh(state, settings),
        InequalityKind::Mermin => mermin(state, settings),
        InequalityKind::Cglmp => cglmp(state, settings),
    }
}
