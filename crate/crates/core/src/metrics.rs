//! Operational norm, measurement fidelity and their bounds.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opt::{pair, ChannelMat, DilationState, ObservationTest, StateVec};
use crate::optim::{lp_solve, minimize_over_tests, LinearProgram, LpOutcome, SearchConfig};
use crate::system::{SystemLabel, TheoryId};
use crate::theories::random::{rng, simplex_point};
use crate::theories::{pure_decompositions, quantum, squit};

/// `sup_a (2a − unit | δ)` over effects `a`.
///
/// Classical systems use the ℓ1 norm, quantum systems the trace norm and
/// box-world systems one linear program per squit block.
pub fn op_norm(delta: &DVector<f64>, sys: &SystemLabel) -> Result<f64> {
    check_len(delta, sys)?;
    match sys.theory() {
        TheoryId::Classical => Ok(delta.iter().map(|v| v.abs()).sum()),
        TheoryId::Quantum => {
            let op = quantum::to_operator(sys, delta)?;
            Ok(quantum::hermitian_eigenvalues(&op).iter().map(|v| v.abs()).sum())
        }
        TheoryId::Boxworld => op_norm_lp(delta, sys),
    }
}

/// The operational norm computed as a linear program over the effect polytope.
///
/// Available for the polytopic theories only; for classical systems this is
/// the box program `max Σ (2aᵢ − 1) δᵢ` with `aᵢ ∈ [0, 1]`.
pub fn op_norm_lp(delta: &DVector<f64>, sys: &SystemLabel) -> Result<f64> {
    check_len(delta, sys)?;
    match sys.theory() {
        TheoryId::Classical => {
            let d = sys.dim();
            let obj: Vec<f64> = delta.iter().map(|v| 2.0 * v).collect();
            let lp = LinearProgram::boxed(obj, vec![0.0; d], vec![1.0; d]);
            Ok(solved(lp)? - delta.sum())
        }
        TheoryId::Boxworld => {
            let mut total = 0.0;
            for b in squit::blocks(sys) {
                let local = [delta[b[0]], delta[b[1]], delta[b[2]]];
                let mut lp = LinearProgram::boxed(
                    local.iter().map(|v| 2.0 * v).collect(),
                    vec![f64::NEG_INFINITY; 3],
                    vec![f64::INFINITY; 3],
                );
                for (normal, offset) in squit::effect_facets() {
                    lp = lp.with_row(normal.iter().copied().collect(), offset);
                }
                total += solved(lp)? - local[squit::N];
            }
            Ok(total)
        }
        TheoryId::Quantum => Err(Error::Unsupported(
            "the effect set of a quantum system is not a polytope".into(),
        )),
    }
}

fn solved(lp: LinearProgram) -> Result<f64> {
    match lp_solve(&lp)? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => Err(Error::InvalidArgument(format!("norm program not solved: {other:?}"))),
    }
}

fn check_len(v: &DVector<f64>, sys: &SystemLabel) -> Result<()> {
    if v.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: v.len(),
        });
    }
    Ok(())
}

/// `‖ρ − σ‖_op`.
pub fn op_distance(rho: &StateVec, sigma: &StateVec) -> Result<f64> {
    same_system(rho, sigma)?;
    op_norm(&(rho.coords() - sigma.coords()), rho.system())
}

fn same_system(a: &StateVec, b: &StateVec) -> Result<()> {
    if a.system() != b.system() {
        return Err(Error::SystemMismatch(format!("{} vs {}", a.system(), b.system())));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub before: f64,
    pub after: f64,
    pub holds: bool,
}

/// Check `‖Cδ‖ ≤ ‖δ‖` for a deterministic channel.
pub fn check_norm_monotonicity(delta: &DVector<f64>, c: &ChannelMat) -> Result<NormReport> {
    let before = op_norm(delta, c.input())?;
    let after = op_norm(&(c.matrix() * delta), c.output())?;
    Ok(NormReport {
        before,
        after,
        holds: after <= before + 1e-9,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityMethod {
    ClosedForm,
    SearchUpperBound,
}

impl FidelityMethod {
    pub fn is_exact(self) -> bool {
        self == FidelityMethod::ClosedForm
    }
}

#[derive(Debug, Clone)]
pub struct FidelityResult {
    pub value: f64,
    pub method: FidelityMethod,
    pub test: Option<ObservationTest>,
}

/// Outcome count of the tests searched for box-world fidelities.
pub const SEARCH_OUTCOMES: usize = 4;

/// Classical fidelity `Σ √(pᵢ qᵢ)` of two outcome distributions.
pub fn bhattacharyya(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a.max(0.0) * b.max(0.0)).sqrt())
        .sum()
}

/// Uhlmann fidelity `Tr|√ρ √σ|` of two quantum operators.
pub fn uhlmann(rho: &DMatrix<C64>, sigma: &DMatrix<C64>) -> f64 {
    let sr = quantum::hermitian_fn(rho, |x| x.max(0.0).sqrt());
    let inner = &sr * sigma * &sr;
    quantum::hermitian_eigenvalues(&inner)
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .sum()
}

/// The smallest Bhattacharyya fidelity of the outcome statistics over all
/// observation tests.
pub fn fidelity(rho: &StateVec, sigma: &StateVec, cfg: &SearchConfig) -> Result<FidelityResult> {
    same_system(rho, sigma)?;
    for s in [rho, sigma] {
        if !s.is_normalized() {
            return Err(Error::InvalidState("fidelity needs normalized states".into()));
        }
    }
    let sys = rho.system();
    let exact = |value: f64| FidelityResult {
        value: value.clamp(0.0, 1.0),
        method: FidelityMethod::ClosedForm,
        test: None,
    };
    match sys.theory() {
        TheoryId::Classical => Ok(exact(bhattacharyya(
            rho.coords().as_slice(),
            sigma.coords().as_slice(),
        ))),
        TheoryId::Quantum => Ok(exact(uhlmann(
            &quantum::to_operator(sys, rho.coords())?,
            &quantum::to_operator(sys, sigma.coords())?,
        ))),
        TheoryId::Boxworld if sys == &SystemLabel::squit() => {
            let r = minimize_over_tests(&|t| test_fidelity(t, rho, sigma), sys, SEARCH_OUTCOMES, cfg, &[])?;
            Ok(FidelityResult {
                value: r.value.clamp(0.0, 1.0),
                method: FidelityMethod::SearchUpperBound,
                test: Some(r.test),
            })
        }
        TheoryId::Boxworld => {
            // Labelling outcomes by the classical block only refines a test,
            // so the best test acts blockwise and the fidelity is a sum of
            // block fidelities weighted by √(wᵢ vᵢ).
            let sq = SystemLabel::squit();
            let mut total = 0.0;
            for b in squit::blocks(sys) {
                let (w, v) = (rho.coords()[b[2]], sigma.coords()[b[2]]);
                if w <= 0.0 || v <= 0.0 {
                    continue;
                }
                let local = |s: &StateVec, n: f64| {
                    StateVec::new_unchecked(
                        sq.clone(),
                        DVector::from_vec(vec![s.coords()[b[0]] / n, s.coords()[b[1]] / n, 1.0]),
                    )
                };
                let f = fidelity(&local(rho, w), &local(sigma, v), cfg)?;
                total += (w * v).sqrt() * f.value;
            }
            Ok(FidelityResult {
                value: total.clamp(0.0, 1.0),
                method: FidelityMethod::SearchUpperBound,
                test: None,
            })
        }
    }
}

/// Bhattacharyya fidelity of the statistics `t` induces on `ρ` and `σ`.
pub fn test_fidelity(t: &ObservationTest, rho: &StateVec, sigma: &StateVec) -> f64 {
    t.effects()
        .iter()
        .map(|e| {
            let p = pair(e, rho).unwrap_or(0.0).max(0.0);
            let q = pair(e, sigma).unwrap_or(0.0).max(0.0);
            (p * q).sqrt()
        })
        .sum()
}

/// `(1 − F, ½‖ρ − σ‖, √(1 − F²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuchsBounds {
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
    pub fidelity_exact: bool,
}

impl FuchsBounds {
    /// Worst violation of the inequalities that are valid for the fidelity
    /// method used: both sides when exact, the lower side otherwise.
    pub fn violation(&self) -> f64 {
        let low = self.lower - self.middle;
        if self.fidelity_exact {
            low.max(self.middle - self.upper)
        } else {
            low
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.violation() <= tol
    }
}

pub fn fuchs_bounds(rho: &StateVec, sigma: &StateVec, cfg: &SearchConfig) -> Result<FuchsBounds> {
    let f = fidelity(rho, sigma, cfg)?;
    let middle = 0.5 * op_distance(rho, sigma)?;
    Ok(FuchsBounds {
        lower: 1.0 - f.value,
        middle,
        upper: (1.0 - f.value * f.value).max(0.0).sqrt(),
        fidelity_exact: f.method.is_exact(),
    })
}

/// `F(Φ, (C ⊗ I)Φ)²` for a pure bipartite `Φ` with `C` acting on its first factor.
pub fn fidelity_pure_input(phi: &StateVec, c: &ChannelMat, cfg: &SearchConfig) -> Result<f64> {
    if !phi.is_normalized() || !phi.is_pure() {
        return Err(Error::InvalidState("expected a normalized pure state".into()));
    }
    let out = c.apply_on_prefix(phi)?;
    match phi.system().theory() {
        // ⟨Φ|ω|Φ⟩ = Tr(Φ ω), which is the coordinate dot product.
        TheoryId::Quantum if out.system() == phi.system() => Ok(phi.coords().dot(out.coords()).clamp(0.0, 1.0)),
        _ => {
            let f = fidelity(phi, &out, cfg)?;
            Ok(f.value * f.value)
        }
    }
}

/// Sampling family of dilations used wherever a supremum or infimum over
/// dilations is approximated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DilationConfig {
    /// Random dilations drawn in addition to the canonical ones.
    pub samples: usize,
    /// Largest ancilla dimension; `None` means the dimension of the system.
    pub max_ancilla: Option<usize>,
    pub seed: u64,
}

impl Default for DilationConfig {
    fn default() -> Self {
        Self {
            samples: 8,
            max_ancilla: None,
            seed: 0,
        }
    }
}

/// `Σ_k σ_k ⊗ e_k` for a refinement `{σ_k}`, with a classical flag (or a
/// diagonal quantum flag) as ancilla.
pub fn flagged_dilation(members: &[StateVec]) -> Result<DilationState> {
    let first = members
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty refinement".into()))?;
    let sys = first.system().clone();
    let k = members.len();
    let (anc, flags): (SystemLabel, Vec<DVector<f64>>) = match sys.theory() {
        TheoryId::Quantum => {
            let anc = SystemLabel::quantum(k);
            let flags = (0..k)
                .map(|i| {
                    let mut e = DVector::<C64>::zeros(k);
                    e[i] = C64::new(1.0, 0.0);
                    quantum::from_operator(&anc, &quantum::projector(&e))
                })
                .collect::<Result<_>>()?;
            (anc, flags)
        }
        _ => {
            let anc = SystemLabel::classical(k);
            let flags = (0..k)
                .map(|i| {
                    let mut e = DVector::zeros(k);
                    e[i] = 1.0;
                    e
                })
                .collect();
            (anc, flags)
        }
    };
    if k == 1 {
        return DilationState::new(first.clone(), sys);
    }
    let joint_sys = sys.compose(&anc)?;
    let mut joint = DVector::zeros(joint_sys.dim());
    for (m, f) in members.iter().zip(&flags) {
        joint += m.coords().kronecker(f);
    }
    DilationState::new(StateVec::new_unchecked(joint_sys, joint), sys)
}

/// Canonical purification `Σ √λ_k v_k ⊗ |k⟩` of a quantum state.
pub fn purification(rho: &StateVec) -> Result<DilationState> {
    let sys = rho.system();
    if sys.theory() != TheoryId::Quantum {
        return Err(Error::Unsupported(format!("purification of {sys}")));
    }
    let op = quantum::to_operator(sys, rho.coords())?;
    let (vals, vecs) = quantum::hermitian_eigen(&op);
    let scale = vals.first().copied().unwrap_or(0.0).max(1.0);
    let support: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > 1e-12 * scale).collect();
    let r = support.len().max(1);
    let n = sys.hilbert_dim().unwrap_or(1);
    let mut psi = DVector::<C64>::zeros(n * r);
    for (c, &k) in support.iter().enumerate() {
        let mut e = DVector::<C64>::zeros(r);
        e[c] = C64::new(1.0, 0.0);
        psi += quantum::kron_vec(&vecs.column(k).into_owned(), &e) * C64::new(vals[k].sqrt(), 0.0);
    }
    let anc = SystemLabel::quantum(r);
    let joint_sys = sys.compose(&anc)?;
    let joint = StateVec::new_unchecked(joint_sys.clone(), quantum::from_operator(&joint_sys, &quantum::projector(&psi))?);
    DilationState::new(joint, sys.clone())
}

/// Dilations of `ρ`: the trivial one, the canonical ones (copy dilation for
/// polytopic theories, purification for quantum) and `cfg.samples` random
/// flagged refinements with ancilla dimension at most the configured cap.
pub fn sample_dilations(rho: &StateVec, cfg: &DilationConfig) -> Result<Vec<DilationState>> {
    let sys = rho.system();
    let cap = cfg.max_ancilla.unwrap_or(match sys.theory() {
        TheoryId::Quantum => sys.hilbert_dim().unwrap_or(1),
        _ => sys.dim(),
    });
    let cap = cap.max(2);
    let mut out = vec![DilationState::new(rho.clone(), sys.clone())?];
    // The finest extremal decomposition serves as the copy dilation.
    let pure = pure_decompositions(rho, 0, cfg.seed)?;
    let extremal = pure[0].members().to_vec();
    if sys.theory() == TheoryId::Quantum {
        out.push(purification(rho)?);
    }
    out.push(flagged_dilation(&extremal)?);
    let mut g = rng(cfg.seed ^ 0xD11A_7105);
    let pool = pure_decompositions(rho, cfg.samples, cfg.seed)?;
    for i in 0..cfg.samples {
        let base = pool[(i + 1) % pool.len()].members();
        let k = g.random_range(2..=cap);
        // Split each extremal member across the k flags with a random
        // stochastic matrix.
        let split: Vec<Vec<f64>> = base.iter().map(|_| simplex_point(k, &mut g)).collect();
        let members: Vec<StateVec> = (0..k)
            .map(|f| {
                let mut v = DVector::zeros(sys.dim());
                for (m, w) in base.iter().zip(&split) {
                    v += m.coords() * w[f];
                }
                StateVec::new_unchecked(sys.clone(), v)
            })
            .collect();
        out.push(flagged_dilation(&members)?);
    }
    Ok(out)
}

/// `F[Ψ, (C ⊗ I)Ψ]²` for one dilation.
pub fn dilation_fidelity(d: &DilationState, c: &ChannelMat, cfg: &SearchConfig) -> Result<f64> {
    let out = c.apply_on_prefix(d.joint())?;
    if d.joint().system().theory() == TheoryId::Quantum && d.joint().is_pure() {
        return Ok(d.joint().coords().dot(out.coords()).clamp(0.0, 1.0));
    }
    let f = fidelity(d.joint(), &out, cfg)?;
    Ok(f.value * f.value)
}

/// Smallest `F[Ψ, (C ⊗ I)Ψ]²` over dilations of `ρ`.
///
/// Quantum systems use the canonical purification, which attains the
/// infimum. Other theories return the minimum over the sampled family, an
/// upper bound on the infimum.
pub fn correlation_fidelity(
    rho: &StateVec,
    c: &ChannelMat,
    dil: &DilationConfig,
    cfg: &SearchConfig,
) -> Result<f64> {
    if !c.is_deterministic() {
        return Err(Error::InvalidChannel("correlation fidelity needs a deterministic channel".into()));
    }
    if c.input() != rho.system() || c.output() != rho.system() {
        return Err(Error::SystemMismatch(format!(
            "channel {} → {} on state of {}",
            c.input(),
            c.output(),
            rho.system()
        )));
    }
    if rho.system().theory() == TheoryId::Quantum {
        return dilation_fidelity(&purification(rho)?, c, cfg);
    }
    let mut best = f64::INFINITY;
    for d in sample_dilations(rho, dil)? {
        best = best.min(dilation_fidelity(&d, c, cfg)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opt::marginalize;
    use crate::theories::random::{random_state, sample_channel, sample_state};
    use approx::assert_abs_diff_eq;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c2(p: &[f64]) -> StateVec {
        StateVec::from_slice(SystemLabel::classical(2), p).unwrap()
    }

    fn depolarizer() -> ChannelMat {
        let q = SystemLabel::quantum(2);
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = 1.0;
        ChannelMat::new(q.clone(), q, m).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(op_norm(&DVector::zeros(2), &SystemLabel::classical(2)).unwrap(), 0.0);
        let d = DVector::from_vec(vec![0.4, -0.4]);
        assert_abs_diff_eq!(op_norm(&d, &SystemLabel::classical(2)).unwrap(), 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(op_norm_lp(&d, &SystemLabel::classical(2)).unwrap(), 0.8, epsilon = 1e-9);
        let q = SystemLabel::quantum(2);
        let z = DVector::from_vec(vec![0.0, 0.0, 0.0, 2.0 * H]);
        assert_abs_diff_eq!(op_norm(&z, &q).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn squit_norm_is_max_coordinate_gap() {
        // Closed form per block: max(|δx|, |δy|, |δn|).
        let sys = SystemLabel::squit();
        let mut g = rng(4);
        for _ in 0..200 {
            let d = DVector::from_fn(3, |_, _| g.random_range(-1.0..=1.0));
            let expect = d.amax();
            assert_abs_diff_eq!(op_norm(&d, &sys).unwrap(), expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn monotone_under_full_contraction() {
        let sys = SystemLabel::classical(3);
        let mut m = DMatrix::zeros(3, 3);
        m.row_mut(0).fill(1.0);
        let c = ChannelMat::new(sys.clone(), sys, m).unwrap();
        let d = DVector::from_vec(vec![0.2, -0.5, 0.1]);
        let r = check_norm_monotonicity(&d, &c).unwrap();
        assert_abs_diff_eq!(r.after, 0.2, epsilon = 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn fidelity_examples() {
        let cfg = SearchConfig::default();
        let f = fidelity(&c2(&[0.5, 0.5]), &c2(&[0.9, 0.1]), &cfg).unwrap();
        assert_abs_diff_eq!(f.value, 0.45f64.sqrt() + 0.05f64.sqrt(), epsilon = 1e-12);
        assert_eq!(fidelity(&c2(&[1.0, 0.0]), &c2(&[0.0, 1.0]), &cfg).unwrap().value, 0.0);
        let q = SystemLabel::quantum(2);
        let zero = StateVec::from_slice(q.clone(), &[H, 0.0, 0.0, H]).unwrap();
        let plus = StateVec::from_slice(q, &[H, H, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(fidelity(&zero, &plus, &cfg).unwrap().value, H, epsilon = 1e-9);
        assert_abs_diff_eq!(fidelity(&zero, &zero, &cfg).unwrap().value, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn fuchs_example() {
        let b = fuchs_bounds(&c2(&[0.5, 0.5]), &c2(&[0.9, 0.1]), &SearchConfig::default()).unwrap();
        assert_abs_diff_eq!(b.lower, 0.1056, epsilon = 1e-4);
        assert_abs_diff_eq!(b.middle, 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(b.upper, 0.4472, epsilon = 1e-4);
        assert!(b.holds(1e-9));
    }

    #[test]
    fn squit_fidelity_matches_axis_tests() {
        // Oracle: the worse of the x and y readings.
        let sys = SystemLabel::squit();
        let cfg = SearchConfig::default();
        let mut g = rng(8);
        for _ in 0..10 {
            let a = sample_state(&sys, &mut g).unwrap();
            let b = sample_state(&sys, &mut g).unwrap();
            let axis = |i: usize| {
                let p = (1.0 + a.coords()[i]) / 2.0;
                let q = (1.0 + b.coords()[i]) / 2.0;
                bhattacharyya(&[p, 1.0 - p], &[q, 1.0 - q])
            };
            let oracle = axis(0).min(axis(1));
            let f = fidelity(&a, &b, &cfg).unwrap();
            assert_eq!(f.method, FidelityMethod::SearchUpperBound);
            assert!(f.value <= oracle + 1e-12);
            assert!(f.value >= oracle - 1e-9, "{} vs {oracle}", f.value);
        }
    }

    #[test]
    fn depolarized_bell() {
        let q = SystemLabel::quantum(2);
        let rho = StateVec::from_slice(q, &[H, 0.0, 0.0, 0.0]).unwrap();
        let cfg = SearchConfig::default();
        let cf = correlation_fidelity(&rho, &depolarizer(), &DilationConfig::default(), &cfg).unwrap();
        assert_abs_diff_eq!(cf, 0.25, epsilon = 1e-12);
        let bell = purification(&rho).unwrap();
        let f = fidelity_pure_input(bell.joint(), &depolarizer(), &cfg).unwrap();
        assert_abs_diff_eq!(f, 0.25, epsilon = 1e-12);
        let id = ChannelMat::identity(&SystemLabel::quantum(2));
        assert_abs_diff_eq!(fidelity_pure_input(bell.joint(), &id, &cfg).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sampled_dilations_have_the_right_marginal() {
        for sys in [SystemLabel::classical(3), SystemLabel::quantum(2), SystemLabel::squit()] {
            let rho = random_state(&sys, 17).unwrap();
            for d in sample_dilations(&rho, &DilationConfig::default()).unwrap() {
                let m = marginalize(&d).unwrap();
                assert!((m.coords() - rho.coords()).amax() < 1e-12);
                assert!(crate::theories::state_in_cone(d.joint().system(), d.joint().coords(), 1e-9).unwrap());
            }
        }
    }

    #[test]
    fn classical_correlation_fidelity_copy_dilation() {
        // The copy dilation gives (Σ pᵢ √C_ii)², which no other dilation beats.
        let sys = SystemLabel::classical(3);
        let mut g = rng(2);
        for _ in 0..20 {
            let rho = sample_state(&sys, &mut g).unwrap();
            let c = sample_channel(&sys, &sys, &mut g).unwrap();
            let p = rho.coords();
            let oracle: f64 = (0..3).map(|i| p[i] * c.matrix()[(i, i)].sqrt()).sum::<f64>().powi(2);
            let cf = correlation_fidelity(&rho, &c, &DilationConfig::default(), &SearchConfig::default()).unwrap();
            assert_abs_diff_eq!(cf, oracle, epsilon = 1e-12);
        }
    }
}
