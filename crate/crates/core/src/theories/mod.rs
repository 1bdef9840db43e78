//! Concrete theories: classical simplex, finite-dimensional quantum, and the
//! box-world squit.
//!
//! The free functions here dispatch on the theory of a [`SystemLabel`] and
//! are what the theory-agnostic layer in [`crate::opt`] calls into. Violation
//! functions return `0.0` inside the cone and a positive residual outside.

pub mod classical;
pub mod decompositions;
pub mod quantum;
pub mod random;
pub mod squit;
pub mod steering;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opt::{EffectVec, StateVec, TAU_SUM};
use crate::system::{SystemLabel, TheoryId};

pub use decompositions::pure_decompositions;
pub use random::{random_channel, random_effect, random_state};
pub use steering::{steer, SteeringCertificate};

/// Coordinates of the deterministic (unit) effect.
pub fn unit_coords(sys: &SystemLabel) -> DVector<f64> {
    match sys.theory() {
        TheoryId::Classical => classical::unit(sys.dim()),
        TheoryId::Quantum => {
            let mut u = DVector::zeros(sys.dim());
            u[0] = (sys.hilbert_dim().unwrap_or(1) as f64).sqrt();
            u
        }
        TheoryId::Boxworld if sys.squit_count() == 0 => classical::unit(sys.dim()),
        TheoryId::Boxworld => squit::unit(sys),
    }
}

/// How far `coords` lies outside the (subnormalized) state cone.
pub fn state_violation(sys: &SystemLabel, coords: &DVector<f64>) -> Result<f64> {
    check_dim(sys, coords)?;
    Ok(match sys.theory() {
        TheoryId::Quantum => {
            let op = quantum::to_operator(sys, coords)?;
            let ev = quantum::hermitian_eigenvalues(&op);
            let trace: f64 = ev.iter().sum();
            (-ev[0]).max(trace - 1.0).max(0.0)
        }
        TheoryId::Boxworld if sys.squit_count() > 0 => {
            let mut worst = 0.0f64;
            let mut total = 0.0;
            for [x, y, n] in squit::blocks(sys) {
                let (x, y, n) = (coords[x], coords[y], coords[n]);
                worst = worst.max(-n).max(x.abs() - n).max(y.abs() - n);
                total += n;
            }
            worst.max(total - 1.0).max(0.0)
        }
        _ => {
            let neg = coords.iter().fold(0.0f64, |a, &x| a.max(-x));
            neg.max(coords.sum() - 1.0).max(0.0)
        }
    })
}

/// How far `coords` lies outside the effect set `0 ≤ a ≤ unit`.
pub fn effect_violation(sys: &SystemLabel, coords: &DVector<f64>) -> Result<f64> {
    check_dim(sys, coords)?;
    Ok(match sys.theory() {
        TheoryId::Quantum => {
            let op = quantum::to_operator(sys, coords)?;
            let ev = quantum::hermitian_eigenvalues(&op);
            (-ev[0]).max(ev[ev.len() - 1] - 1.0).max(0.0)
        }
        TheoryId::Boxworld if sys.squit_count() > 0 => squit::blocks(sys)
            .into_iter()
            .map(|[x, y, n]| {
                let (a, b, g) = (coords[x], coords[y], coords[n]);
                (a.abs() + b.abs() - g).max(g + a.abs() + b.abs() - 1.0)
            })
            .fold(0.0f64, f64::max),
        _ => coords
            .iter()
            .fold(0.0f64, |acc, &x| acc.max(-x).max(x - 1.0)),
    })
}

pub fn state_in_cone(sys: &SystemLabel, coords: &DVector<f64>, tol: f64) -> Result<bool> {
    Ok(state_violation(sys, coords)? <= tol)
}

pub fn effect_in_range(sys: &SystemLabel, coords: &DVector<f64>, tol: f64) -> Result<bool> {
    Ok(effect_violation(sys, coords)? <= tol)
}

/// Extremality test for a normalized state.
pub fn is_pure(sys: &SystemLabel, coords: &DVector<f64>, tol: f64) -> Result<bool> {
    check_dim(sys, coords)?;
    Ok(match sys.theory() {
        TheoryId::Quantum => {
            let op = quantum::to_operator(sys, coords)?;
            let ev = quantum::hermitian_eigenvalues(&op);
            let top = ev[ev.len() - 1];
            let rest: f64 = ev[..ev.len() - 1].iter().map(|v| v.abs()).sum();
            (top - 1.0).abs() <= tol && rest <= tol && ev[0] >= -tol
        }
        TheoryId::Boxworld if sys.squit_count() > 0 => squit::is_pure(sys, coords, tol),
        _ => classical::is_pure(coords, tol),
    })
}

/// Extremal normalized states of a polytopic system (classical, box-world).
pub fn extremal_states(sys: &SystemLabel) -> Option<Vec<DVector<f64>>> {
    match sys.theory() {
        TheoryId::Quantum => None,
        TheoryId::Boxworld if sys.squit_count() > 0 => {
            let mut out = Vec::new();
            for [x, y, n] in squit::blocks(sys) {
                for (cx, cy) in squit::CORNERS {
                    let mut v = DVector::zeros(sys.dim());
                    v[x] = cx;
                    v[y] = cy;
                    v[n] = 1.0;
                    out.push(v);
                }
            }
            Some(out)
        }
        _ => Some(
            (0..sys.dim())
                .map(|i| {
                    let mut v = DVector::zeros(sys.dim());
                    v[i] = 1.0;
                    v
                })
                .collect(),
        ),
    }
}

/// Validity residual of a transformation: complete positivity (Choi matrix)
/// for quantum maps, images of extremal states for polytopic ones, plus the
/// trace-non-increasing condition.
pub fn channel_violation(
    input: &SystemLabel,
    output: &SystemLabel,
    matrix: &DMatrix<f64>,
) -> Result<f64> {
    if matrix.ncols() != input.dim() || matrix.nrows() != output.dim() {
        return Err(Error::DimensionMismatch {
            expected: output.dim() * input.dim(),
            got: matrix.nrows() * matrix.ncols(),
        });
    }
    if input.theory() == TheoryId::Quantum || output.theory() == TheoryId::Quantum {
        if input.theory() != output.theory() {
            return Err(Error::UnsupportedComposition(format!(
                "channel {input} → {output} mixes quantum and non-quantum systems"
            )));
        }
        let choi = quantum::choi_matrix(input, output, matrix)?;
        let ev = quantum::hermitian_eigenvalues(&choi);
        let cp = (-ev[0]).max(0.0);
        // The effect unit_out ∘ C must not exceed unit_in.
        let pulled = matrix.transpose() * unit_coords(output);
        let op = quantum::to_operator(input, &pulled)?;
        let ev = quantum::hermitian_eigenvalues(&op);
        let tni = (ev[ev.len() - 1] - 1.0).max(0.0);
        return Ok(cp.max(tni));
    }
    let ext = extremal_states(input).expect("polytopic input");
    let mut worst = 0.0f64;
    for v in ext {
        worst = worst.max(state_violation(output, &(matrix * v))?);
    }
    Ok(worst)
}

fn check_dim(sys: &SystemLabel, coords: &DVector<f64>) -> Result<()> {
    if coords.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: coords.len(),
        });
    }
    Ok(())
}

/// Facet `normal · a ≤ offset` of an effect polytope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Facet {
    pub fn slack(&self, effect: &DVector<f64>) -> f64 {
        self.offset
            - self
                .normal
                .iter()
                .zip(effect.iter())
                .map(|(n, a)| n * a)
                .sum::<f64>()
    }
}

/// One operational theory together with its elementary system.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryModel {
    system: SystemLabel,
    facets: Vec<Facet>,
}

impl TheoryModel {
    pub fn classical(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("classical dimension {d} < 2")));
        }
        Ok(Self {
            system: SystemLabel::classical(d),
            facets: to_facets(classical::effect_facets(d)),
        })
    }

    pub fn quantum(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("quantum dimension {d} < 2")));
        }
        Ok(Self {
            system: SystemLabel::quantum(d),
            facets: Vec::new(),
        })
    }

    pub fn squit() -> Self {
        Self {
            system: SystemLabel::squit(),
            facets: to_facets(squit::effect_facets()),
        }
    }

    /// Parse `classical:d`, `quantum:d` or `squit`.
    pub fn parse(spec: &str) -> Result<Self> {
        Self::for_system(&SystemLabel::parse(spec)?)
    }

    pub fn for_system(sys: &SystemLabel) -> Result<Self> {
        match sys.factors() {
            [crate::system::Atom::Classical(d)] => Self::classical(*d),
            [crate::system::Atom::Quantum(d)] => Self::quantum(*d),
            [crate::system::Atom::Squit] => Ok(Self::squit()),
            _ => Err(Error::InvalidArgument(format!("{sys} is not an elementary system"))),
        }
    }

    pub fn id(&self) -> TheoryId {
        self.system.theory()
    }

    /// The elementary system this model describes.
    pub fn system(&self) -> &SystemLabel {
        &self.system
    }

    /// The declared elementary information carrier: bit, qubit or squit.
    pub fn obit(&self) -> SystemLabel {
        match self.id() {
            TheoryId::Classical => SystemLabel::classical(2),
            TheoryId::Quantum => SystemLabel::quantum(2),
            TheoryId::Boxworld => SystemLabel::squit(),
        }
    }

    /// Effect-polytope facets; empty for quantum systems.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn unit_effect(&self) -> EffectVec {
        EffectVec::unit(&self.system)
    }

    pub fn contains_state(&self, s: &StateVec) -> bool {
        s.system() == &self.system
            && state_in_cone(&self.system, s.coords(), TAU_SUM).unwrap_or(false)
    }

    /// Finite list of pure states (classical, squit); `None` for quantum.
    pub fn pure_states(&self) -> Option<Vec<StateVec>> {
        extremal_states(&self.system).map(|v| {
            v.into_iter()
                .map(|c| StateVec::new_unchecked(self.system.clone(), c))
                .collect()
        })
    }

    /// Composition rule of the theory.
    pub fn compose(&self, a: &SystemLabel, b: &SystemLabel) -> Result<SystemLabel> {
        a.compose(b)
    }

    /// `D(N)`, the linear dimension of `N` elementary systems.
    ///
    /// Box-world composites are locally tomographic, so `3^N` is the
    /// dimension whichever composite cone one picks.
    pub fn composite_dim(&self, n: u32) -> u128 {
        (self.system.dim() as u128).pow(n)
    }
}

fn to_facets(raw: Vec<(DVector<f64>, f64)>) -> Vec<Facet> {
    raw.into_iter()
        .map(|(n, o)| Facet {
            normal: n.iter().copied().collect(),
            offset: o,
        })
        .collect()
}
