//! Entropies, mutual information and the information-loss criterion.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opt::{pair, ChannelMat, Ensemble, ObservationTest, StateVec};
use crate::optim::nelder_mead::nelder_mead;
use crate::optim::{maximize_over_ensembles_and_tests, SearchConfig};
use crate::system::{SystemLabel, TheoryId};
use crate::theories::{pure_decompositions, quantum, squit, TheoryModel};
use crate::BoundDirection;

/// Shannon entropy in bits without validating the input.
pub fn shannon_unchecked(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

/// Shannon entropy of a probability vector, in bits.
pub fn shannon(p: &[f64]) -> Result<f64> {
    if let Some(x) = p.iter().find(|&&x| x < -1e-12 || !x.is_finite()) {
        return Err(Error::InvalidArgument(format!("negative probability {x}")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("probabilities sum to {s}")));
    }
    Ok(shannon_unchecked(p))
}

/// `H₂(γ)`; `NaN` outside `[0, 1]`.
pub fn binary_entropy(g: f64) -> f64 {
    if !(0.0..=1.0).contains(&g) {
        return f64::NAN;
    }
    shannon_unchecked(&[g, 1.0 - g])
}

pub fn von_neumann(rho: &StateVec) -> Result<f64> {
    let sys = rho.system();
    if sys.theory() != TheoryId::Quantum {
        return Err(Error::SystemMismatch(format!("von Neumann entropy of {sys}")));
    }
    let ev = quantum::hermitian_eigenvalues(&quantum::to_operator(sys, rho.coords())?);
    Ok(shannon_unchecked(&ev))
}

/// Joint distribution of a preparation label (rows) and an outcome (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    p: DMatrix<f64>,
}

impl JointDistribution {
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidArgument("empty joint distribution".into()));
        }
        if p.iter().any(|&x| x < -1e-12 || !x.is_finite()) {
            return Err(Error::InvalidArgument("negative joint probability".into()));
        }
        let s = p.sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("joint sums to {s}")));
        }
        Ok(Self { p: p.map(|x| x.max(0.0)) })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidArgument("ragged joint distribution".into()));
        }
        Self::new(DMatrix::from_fn(rows.len(), m, |i, j| rows[i][j]))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn rows(&self) -> usize {
        self.p.nrows()
    }

    pub fn cols(&self) -> usize {
        self.p.ncols()
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        self.p.row_iter().map(|r| r.sum()).collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        self.p.column_iter().map(|c| c.sum()).collect()
    }

    /// `‖p − q‖₁` over all entries.
    pub fn l1_distance(&self, other: &JointDistribution) -> Result<f64> {
        if self.p.shape() != other.p.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.p.len(),
                got: other.p.len(),
            });
        }
        Ok((&self.p - &other.p).abs().sum())
    }
}

pub fn mutual_information(j: &JointDistribution) -> f64 {
    let (r, c) = (j.row_marginal(), j.col_marginal());
    let mut total = 0.0;
    for (i, ri) in r.iter().enumerate() {
        for (k, ck) in c.iter().enumerate() {
            let x = j.p[(i, k)];
            if x > 0.0 {
                total += x * (x / (ri * ck)).log2();
            }
        }
    }
    total.max(0.0)
}

/// Joint distribution `p_ij = (a_j | σ_i)` of an ensemble and a test.
pub fn joint_of(ens: &Ensemble, test: &ObservationTest) -> Result<JointDistribution> {
    if ens.system() != test.system() {
        return Err(Error::SystemMismatch(format!(
            "ensemble on {}, test on {}",
            ens.system(),
            test.system()
        )));
    }
    let mut m = DMatrix::zeros(ens.len(), test.len());
    for (i, s) in ens.members().iter().enumerate() {
        for (k, a) in test.effects().iter().enumerate() {
            m[(i, k)] = pair(a, s)?.max(0.0);
        }
    }
    let s = m.sum();
    if s > 0.0 {
        m /= s;
    }
    JointDistribution::new(m)
}

/// The joints without and with `C` acting on the leading factor of each member.
pub fn scheme_joint_dists(
    ens: &Ensemble,
    test: &ObservationTest,
    c: &ChannelMat,
) -> Result<(JointDistribution, JointDistribution)> {
    let jp = joint_of(ens, test)?;
    let through = ens
        .members()
        .iter()
        .map(|m| c.apply_on_prefix(m))
        .collect::<Result<Vec<_>>>()?;
    let jq = joint_of(&Ensemble::new(through)?, test)?;
    Ok((jp, jq))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionValue {
    pub value: f64,
    /// `log₂(mn − 1)`.
    pub l: f64,
    pub m: usize,
    pub n: usize,
}

/// `|I(J_p) − I(J_q)| / log₂(mn − 1)` with `m` outcomes and `n` members.
pub fn classical_criterion(ens: &Ensemble, test: &ObservationTest, c: &ChannelMat) -> Result<CriterionValue> {
    let (m, n) = (test.len(), ens.len());
    let l = ((m * n) as f64 - 1.0).log2();
    if m == 1 || n == 1 {
        return Ok(CriterionValue { value: 0.0, l, m, n });
    }
    let (jp, jq) = scheme_joint_dists(ens, test, c)?;
    let value = (mutual_information(&jp) - mutual_information(&jq)).abs() / l;
    Ok(CriterionValue { value, l, m, n })
}

/// `3γ + 3 H₂(γ) / L`.
pub fn continuity_bound(gamma: f64, l: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidArgument(format!("γ = {gamma} outside [0, 1)")));
    }
    if !(l > 0.0) {
        return Err(Error::InvalidArgument(format!("L = {l} must be positive")));
    }
    Ok(3.0 * gamma + 3.0 * binary_entropy(gamma) / l)
}

/// The same bound with the range `γ < 1 − 1/(mn)` enforced.
pub fn continuity_bound_for(gamma: f64, m: usize, n: usize) -> Result<f64> {
    let mn = (m * n) as f64;
    if gamma >= 1.0 - 1.0 / mn {
        return Err(Error::InvalidArgument(format!(
            "γ = {gamma} outside the valid range for m = {m}, n = {n}"
        )));
    }
    continuity_bound(gamma, (mn - 1.0).log2())
}

/// A value together with the direction in which it bounds the true quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounded {
    pub value: f64,
    pub bound: BoundDirection,
}

impl Bounded {
    fn exact(value: f64) -> Self {
        Self {
            value,
            bound: BoundDirection::Exact,
        }
    }
}

fn normalized_state(rho: &StateVec) -> Result<()> {
    if !rho.is_normalized() {
        return Err(Error::InvalidState("expected a normalized state".into()));
    }
    Ok(())
}

/// Smallest outcome entropy over tests made of atomic effects.
///
/// Classical: `H(p)`. Quantum: `S(ρ)`, attained by the eigenbasis and a lower
/// bound for every rank-one measurement. Squit: every atomic test is a
/// refinement of `s·{g₊ₓ, g₋ₓ} ∪ (1 − s)·{g₊ᵧ, g₋ᵧ}`, searched over `s`.
pub fn measurement_entropy(rho: &StateVec, cfg: &SearchConfig) -> Result<Bounded> {
    normalized_state(rho)?;
    let sys = rho.system();
    match sys.theory() {
        TheoryId::Classical => Ok(Bounded::exact(shannon_unchecked(rho.coords().as_slice()))),
        TheoryId::Quantum => Ok(Bounded::exact(von_neumann(rho)?)),
        TheoryId::Boxworld if sys == &SystemLabel::squit() => {
            let probs = atomic_squit_probabilities(rho);
            let f = |s: f64| {
                let s = s.clamp(0.0, 1.0);
                let t = 1.0 - s;
                shannon_unchecked(&[s * probs[0], s * probs[1], t * probs[2], t * probs[3]])
            };
            let mut best = f(0.0).min(f(1.0));
            for i in 0..cfg.restarts {
                let x0 = (i as f64 + 0.5) / cfg.restarts as f64;
                let mut g = |p: &[f64]| {
                    if (0.0..=1.0).contains(&p[0]) {
                        f(p[0])
                    } else {
                        f64::INFINITY
                    }
                };
                best = best.min(nelder_mead(&mut g, &[x0], 0.1, cfg.max_evals, cfg.tol).value);
            }
            Ok(Bounded {
                value: best,
                bound: BoundDirection::Upper,
            })
        }
        TheoryId::Boxworld => Err(Error::Unsupported(format!("measurement entropy on {sys}"))),
    }
}

/// Outcome probabilities of the four extremal effects `(1 ± x)/2, (1 ± y)/2`.
fn atomic_squit_probabilities(rho: &StateVec) -> [f64; 4] {
    let g = squit::extremal_effects();
    let p = |i: usize| g[i].dot(rho.coords()).max(0.0);
    [p(0), p(1), p(2), p(3)]
}

/// Smallest weight entropy over the pure decompositions of `ρ`.
pub fn decomposition_entropy(rho: &StateVec, budget: usize, seed: u64) -> Result<Bounded> {
    normalized_state(rho)?;
    let decs = pure_decompositions(rho, budget, seed)?;
    let value = decs
        .iter()
        .map(|e| shannon_unchecked(&e.weights()))
        .fold(f64::INFINITY, f64::min);
    // Eigenvalues majorize the weights of every pure decomposition, so the
    // first quantum candidate is optimal.
    let bound = match rho.system().theory() {
        TheoryId::Boxworld => BoundDirection::Upper,
        _ => BoundDirection::Exact,
    };
    Ok(Bounded { value, bound })
}

/// Largest mutual information between an ensemble label and a test outcome,
/// over ensembles of at most `members` states and tests of `outcomes`
/// outcomes.
pub fn accessible_information(
    sys: &SystemLabel,
    members: usize,
    outcomes: usize,
    cfg: &SearchConfig,
) -> Result<Bounded> {
    let obj = |e: &Ensemble, t: &ObservationTest| joint_of(e, t).map_or(f64::NEG_INFINITY, |j| mutual_information(&j));
    let r = maximize_over_ensembles_and_tests(&obj, sys, members, outcomes, cfg, &[])?;
    Ok(Bounded {
        value: r.value,
        bound: BoundDirection::Lower,
    })
}

/// `I(X₀:Y₀)` of the ensemble given by the finest decomposition of `ρ`
/// observed with the reading test of its own eigenbasis or support.
pub fn own_decomposition_information(rho: &StateVec) -> Result<f64> {
    normalized_state(rho)?;
    let weights: Vec<f64> = match rho.system().theory() {
        TheoryId::Quantum => quantum::hermitian_eigenvalues(&quantum::to_operator(rho.system(), rho.coords())?),
        TheoryId::Classical => rho.coords().iter().copied().collect(),
        TheoryId::Boxworld => {
            return Err(Error::Unsupported("box-world states have no reading basis".into()))
        }
    };
    // Perfectly correlated label and outcome. Weights within rounding of zero
    // are dropped so that pure states give exactly zero.
    let kept: Vec<f64> = weights.into_iter().filter(|&w| w > 1e-12).collect();
    let total: f64 = kept.iter().sum();
    if kept.len() <= 1 {
        return Ok(0.0);
    }
    Ok(shannon_unchecked(&kept.iter().map(|w| w / total).collect::<Vec<_>>()).max(0.0))
}

/// `I₀ / log₂ D₁`.
pub fn ic_lower_bound(i0: f64, obit_dim_log: f64) -> Result<f64> {
    if !(i0 >= 0.0) {
        return Err(Error::InvalidArgument(format!("I₀ = {i0} must be nonnegative")));
    }
    if !(obit_dim_log > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "log₂ D₁ = {obit_dim_log} must be positive"
        )));
    }
    Ok(i0 / obit_dim_log)
}

/// `log₂ D₁` for the obit of a theory, with `D₁` its linear dimension.
pub fn obit_dim_log(model: &TheoryModel) -> f64 {
    (model.obit().dim() as f64).log2()
}

/// Constants of the regular-scaling bound `D(N) ≤ k D₀^N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingConstants {
    pub k: f64,
    pub k_prime: f64,
    pub d0: f64,
    pub d1: f64,
}

impl ScalingConstants {
    pub fn for_model(model: &TheoryModel) -> Self {
        let d = model.obit().dim() as f64;
        Self {
            k: 1.0,
            k_prime: 1.0,
            d0: d,
            d1: d,
        }
    }
}

/// Check `D(N) ≤ k · D(1)^N` for `N = 1..=n_max`.
pub fn regular_scaling_holds(model: &TheoryModel, k: u128, n_max: u32) -> bool {
    let d1 = model.composite_dim(1);
    (1..=n_max).all(|n| model.composite_dim(n) <= k * d1.pow(n))
}
