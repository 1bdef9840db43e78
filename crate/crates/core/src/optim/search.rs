//! Seeded multi-start searches over observation tests and ensembles.
//!
//! Tests are parameterized so that every parameter vector yields a valid
//! test: classical effects by a column-wise softmax, quantum POVMs by
//! `S^{-1/2} A_j A_j† S^{-1/2}`, squit tests by distributing the two
//! decompositions `unit = g₊ₓ + g₋ₓ = g₊ᵧ + g₋ᵧ` of the unit effect over the
//! outcomes. Candidate seeds are always evaluated before any local search,
//! so a known-optimal construction in the seed set is never lost.
//!
//! Minimizations return an upper bound on the true infimum and
//! maximizations a lower bound on the true supremum.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::nelder_mead::nelder_mead;
use crate::error::{Error, Result};
use crate::opt::{EffectVec, Ensemble, ObservationTest, StateVec};
use crate::system::{SystemLabel, TheoryId};
use crate::theories::quantum::{self, OperatorBasis};
use crate::theories::random::rng;
use crate::theories::squit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_evals: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_evals: 2000,
            seed: 0,
            tol: 1e-12,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_evals == 0 || !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(
                "restarts, max_evals and tol must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Seed of restart `i`; restart streams do not depend on the total count.
    pub fn restart_seed(&self, i: usize) -> u64 {
        let mut z = self
            .seed
            .wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

fn softmax_into(logits: &[f64], out: &mut [f64]) {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = 0.0;
    for (o, l) in out.iter_mut().zip(logits) {
        *o = (l - m).exp();
        s += *o;
    }
    for o in out.iter_mut() {
        *o /= s;
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// A parameterized family of `n`-outcome observation tests.
pub struct TestFamily {
    system: SystemLabel,
    outcomes: usize,
    kind: TestKind,
}

enum TestKind {
    Classical,
    Quantum { basis: OperatorBasis, rank: usize },
    Squit,
}

impl TestFamily {
    pub fn new(system: &SystemLabel, outcomes: usize) -> Result<Self> {
        if outcomes < 1 {
            return Err(Error::InvalidArgument("a test needs at least one outcome".into()));
        }
        let kind = match system.theory() {
            TheoryId::Classical => TestKind::Classical,
            TheoryId::Quantum => {
                let n = system.hilbert_dim().unwrap_or(1);
                TestKind::Quantum {
                    basis: OperatorBasis::new(system)?,
                    rank: if outcomes >= n { 1 } else { n },
                }
            }
            TheoryId::Boxworld if system == &SystemLabel::squit() => TestKind::Squit,
            TheoryId::Boxworld => {
                return Err(Error::Unsupported(format!(
                    "test search on composite box-world system {system}"
                )))
            }
        };
        Ok(Self {
            system: system.clone(),
            outcomes,
            kind,
        })
    }

    pub fn system(&self) -> &SystemLabel {
        &self.system
    }

    pub fn n_params(&self) -> usize {
        match &self.kind {
            TestKind::Classical => self.outcomes * self.system.dim(),
            TestKind::Quantum { basis, rank } => self.outcomes * basis.n() * rank * 2,
            TestKind::Squit => 1 + 4 * self.outcomes,
        }
    }

    pub fn random_params<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.n_params())
            .map(|_| rng.random_range(-2.0..=2.0))
            .collect()
    }

    /// Build the test for a parameter vector; `None` on a degenerate point.
    pub fn build(&self, params: &[f64]) -> Option<ObservationTest> {
        let m = self.outcomes;
        let effects: Vec<DVector<f64>> = match &self.kind {
            TestKind::Classical => {
                let d = self.system.dim();
                let mut eff = vec![DVector::zeros(d); m];
                let mut col = vec![0.0; m];
                let mut logits = vec![0.0; m];
                for i in 0..d {
                    for j in 0..m {
                        logits[j] = params[j * d + i];
                    }
                    softmax_into(&logits, &mut col);
                    for j in 0..m {
                        eff[j][i] = col[j];
                    }
                }
                eff
            }
            TestKind::Quantum { basis, rank } => {
                let n = basis.n();
                let per = n * rank * 2;
                let mats: Vec<DMatrix<C64>> = (0..m)
                    .map(|j| {
                        let p = &params[j * per..(j + 1) * per];
                        let a = DMatrix::from_fn(n, *rank, |r, c| {
                            let k = 2 * (r * rank + c);
                            C64::new(p[k], p[k + 1])
                        });
                        &a * a.adjoint()
                    })
                    .collect();
                let mut s = DMatrix::<C64>::zeros(n, n);
                for a in &mats {
                    s += a;
                }
                let ev = quantum::hermitian_eigenvalues(&s);
                if ev[0] <= 1e-10 * ev[n - 1].max(1e-300) {
                    return None;
                }
                let s_is = quantum::hermitian_fn(&s, |x| 1.0 / x.sqrt());
                mats.iter()
                    .map(|a| basis.to_coords(&(&s_is * a * &s_is)))
                    .collect()
            }
            TestKind::Squit => {
                let s = sigmoid(params[0]);
                let gens = squit::extremal_effects();
                let weights = [s, s, 1.0 - s, 1.0 - s];
                let mut eff = vec![DVector::zeros(3); m];
                let mut share = vec![0.0; m];
                for (r, g) in gens.iter().enumerate() {
                    let logits: Vec<f64> = (0..m).map(|j| params[1 + r * m + j]).collect();
                    softmax_into(&logits, &mut share);
                    for j in 0..m {
                        eff[j] += g * (weights[r] * share[j]);
                    }
                }
                eff
            }
        };
        ObservationTest::new(
            effects
                .into_iter()
                .map(|c| EffectVec::new_unchecked(self.system.clone(), c))
                .collect(),
        )
        .ok()
    }

    /// Canonical fine-grained tests padded with zero effects to `n` outcomes.
    pub fn canonical_tests(&self) -> Vec<ObservationTest> {
        let mut out = Vec::new();
        let pad = |effects: Vec<DVector<f64>>| -> Option<ObservationTest> {
            if effects.len() > self.outcomes {
                return None;
            }
            let mut effects = effects;
            while effects.len() < self.outcomes {
                effects.push(DVector::zeros(self.system.dim()));
            }
            ObservationTest::new(
                effects
                    .into_iter()
                    .map(|c| EffectVec::new_unchecked(self.system.clone(), c))
                    .collect(),
            )
            .ok()
        };
        match &self.kind {
            TestKind::Classical | TestKind::Quantum { .. } => {
                if let Ok(t) = ObservationTest::reading(&self.system) {
                    if let Some(t) = pad(t.effects().iter().map(|e| e.coords().clone()).collect()) {
                        out.push(t);
                    }
                }
            }
            TestKind::Squit => {
                let g = squit::extremal_effects();
                out.extend(pad(vec![g[0].clone(), g[1].clone()]));
                out.extend(pad(vec![g[2].clone(), g[3].clone()]));
            }
        }
        out.extend(pad(vec![crate::theories::unit_coords(&self.system)]));
        out
    }

    /// Tests measuring in the eigenbasis of the given quantum states.
    pub fn eigenbasis_tests(&self, states: &[&StateVec]) -> Vec<ObservationTest> {
        let TestKind::Quantum { basis, .. } = &self.kind else {
            return Vec::new();
        };
        let n = basis.n();
        if n > self.outcomes {
            return Vec::new();
        }
        states
            .iter()
            .filter(|s| s.system() == &self.system)
            .filter_map(|s| {
                let op = basis.to_operator(s.coords());
                let (_, vecs) = quantum::hermitian_eigen(&op);
                let mut effects: Vec<EffectVec> = (0..n)
                    .map(|k| {
                        let v = vecs.column(k).into_owned();
                        EffectVec::new_unchecked(
                            self.system.clone(),
                            basis.to_coords(&quantum::projector(&v)),
                        )
                    })
                    .collect();
                while effects.len() < self.outcomes {
                    effects.push(EffectVec::new_unchecked(
                        self.system.clone(),
                        DVector::zeros(self.system.dim()),
                    ));
                }
                ObservationTest::new(effects).ok()
            })
            .collect()
    }
}

/// Best value found, with the test attaining it.
#[derive(Debug, Clone)]
pub struct TestSearchResult {
    pub value: f64,
    pub test: ObservationTest,
}

/// Minimize `objective` over `n`-outcome tests. The returned value is an
/// upper bound on the infimum.
pub fn minimize_over_tests(
    objective: &dyn Fn(&ObservationTest) -> f64,
    system: &SystemLabel,
    n_outcomes: usize,
    cfg: &SearchConfig,
    extra_seeds: &[ObservationTest],
) -> Result<TestSearchResult> {
    cfg.validate()?;
    let family = TestFamily::new(system, n_outcomes)?;
    let mut best: Option<TestSearchResult> = None;
    let consider = |value: f64, test: ObservationTest, best: &mut Option<TestSearchResult>| {
        if value.is_finite() && best.as_ref().is_none_or(|b| value < b.value) {
            *best = Some(TestSearchResult { value, test });
        }
    };
    for t in family.canonical_tests().into_iter().chain(extra_seeds.iter().cloned()) {
        if t.system() == system {
            consider(objective(&t), t, &mut best);
        }
    }
    for i in 0..cfg.restarts {
        let mut r = rng(cfg.restart_seed(i));
        let x0 = family.random_params(&mut r);
        let mut f = |p: &[f64]| family.build(p).map_or(f64::INFINITY, |t| objective(&t));
        let local = nelder_mead(&mut f, &x0, 1.0, cfg.max_evals, cfg.tol);
        if let Some(t) = family.build(&local.x) {
            consider(objective(&t), t, &mut best);
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("objective was never finite".into()))
}

/// A parameterized family of `n`-member ensembles of normalized-member states.
pub struct EnsembleFamily {
    system: SystemLabel,
    members: usize,
    basis: Option<OperatorBasis>,
}

impl EnsembleFamily {
    pub fn new(system: &SystemLabel, members: usize) -> Result<Self> {
        if members < 1 {
            return Err(Error::InvalidArgument("an ensemble needs at least one member".into()));
        }
        if system.theory() == TheoryId::Boxworld && system != &SystemLabel::squit() {
            return Err(Error::Unsupported(format!(
                "ensemble search on composite box-world system {system}"
            )));
        }
        let basis = match system.theory() {
            TheoryId::Quantum => Some(OperatorBasis::new(system)?),
            _ => None,
        };
        Ok(Self {
            system: system.clone(),
            members,
            basis,
        })
    }

    fn per_member(&self) -> usize {
        match &self.basis {
            Some(b) => 2 * b.n(),
            None if self.system.theory() == TheoryId::Boxworld => 2,
            None => self.system.dim(),
        }
    }

    pub fn n_params(&self) -> usize {
        self.members * (1 + self.per_member())
    }

    pub fn build(&self, params: &[f64]) -> Option<Ensemble> {
        let k = self.members;
        let mut w = vec![0.0; k];
        softmax_into(&params[..k], &mut w);
        let per = self.per_member();
        let members: Vec<StateVec> = (0..k)
            .map(|i| {
                let p = &params[k + i * per..k + (i + 1) * per];
                let coords = match &self.basis {
                    Some(b) => {
                        let v = DVector::from_fn(b.n(), |r, _| C64::new(p[2 * r], p[2 * r + 1]));
                        let norm = v.norm_squared();
                        if norm < 1e-300 {
                            return None;
                        }
                        b.to_coords(&quantum::projector(&v)) * (w[i] / norm)
                    }
                    None if self.system.theory() == TheoryId::Boxworld => {
                        squit::state(p[0].tanh(), p[1].tanh()) * w[i]
                    }
                    None => {
                        let mut dist = vec![0.0; per];
                        softmax_into(p, &mut dist);
                        DVector::from_vec(dist) * w[i]
                    }
                };
                Some(StateVec::new_unchecked(self.system.clone(), coords))
            })
            .collect::<Option<_>>()?;
        Ensemble::new(members).ok()
    }
}

/// Orthogonal (classical, quantum) or opposite-corner (squit) two-member
/// ensemble with the test that reads it perfectly.
pub fn orthogonal_seed(system: &SystemLabel) -> Result<(Ensemble, ObservationTest)> {
    match system.theory() {
        TheoryId::Boxworld => {
            let sys = SystemLabel::squit();
            if system != &sys {
                return Err(Error::Unsupported(format!("seed on {system}")));
            }
            let members = vec![
                StateVec::new_unchecked(sys.clone(), squit::state(1.0, 1.0) * 0.5),
                StateVec::new_unchecked(sys.clone(), squit::state(-1.0, -1.0) * 0.5),
            ];
            let g = squit::extremal_effects();
            let test = ObservationTest::new(vec![
                EffectVec::new_unchecked(sys.clone(), g[0].clone()),
                EffectVec::new_unchecked(sys, g[1].clone()),
            ])?;
            Ok((Ensemble::new(members)?, test))
        }
        _ => {
            let reading = ObservationTest::reading(system)?;
            let members = (0..2)
                .map(|i| {
                    let e = &reading.effects()[i];
                    // Reading effects of the canonical basis are also pure-state
                    // coordinates.
                    let coords = e.coords().clone() * 0.5;
                    StateVec::new_unchecked(system.clone(), coords)
                })
                .collect();
            Ok((Ensemble::new(members)?, reading))
        }
    }
}

/// Best (ensemble, test) pair found.
#[derive(Debug, Clone)]
pub struct PairSearchResult {
    pub value: f64,
    pub ensemble: Ensemble,
    pub test: ObservationTest,
}

/// Maximize `objective` jointly over ensembles of at most `members` states
/// and tests of `outcomes` outcomes. The returned value is a lower bound on
/// the supremum.
pub fn maximize_over_ensembles_and_tests(
    objective: &dyn Fn(&Ensemble, &ObservationTest) -> f64,
    system: &SystemLabel,
    members: usize,
    outcomes: usize,
    cfg: &SearchConfig,
    extra_seeds: &[(Ensemble, ObservationTest)],
) -> Result<PairSearchResult> {
    cfg.validate()?;
    let ens_family = EnsembleFamily::new(system, members)?;
    let test_family = TestFamily::new(system, outcomes)?;
    let mut best: Option<PairSearchResult> = None;
    let consider = |value: f64, e: Ensemble, t: ObservationTest, best: &mut Option<PairSearchResult>| {
        if value.is_finite() && best.as_ref().is_none_or(|b| value > b.value) {
            *best = Some(PairSearchResult {
                value,
                ensemble: e,
                test: t,
            });
        }
    };
    let mut seeds: Vec<(Ensemble, ObservationTest)> = Vec::new();
    if let Ok(s) = orthogonal_seed(system) {
        seeds.push(s);
    }
    seeds.extend(extra_seeds.iter().cloned());
    for (e, t) in seeds {
        let fits = e.len() <= members && t.len() <= outcomes;
        if fits && e.system() == system && t.system() == system {
            consider(objective(&e, &t), e, t, &mut best);
        }
    }
    let ne = ens_family.n_params();
    for i in 0..cfg.restarts {
        let mut r = rng(cfg.restart_seed(i));
        let mut x0: Vec<f64> = (0..ne).map(|_| r.random_range(-2.0..=2.0)).collect();
        x0.extend(test_family.random_params(&mut r));
        let build = |p: &[f64]| -> Option<(Ensemble, ObservationTest)> {
            Some((ens_family.build(&p[..ne])?, test_family.build(&p[ne..])?))
        };
        let mut f = |p: &[f64]| build(p).map_or(f64::INFINITY, |(e, t)| -objective(&e, &t));
        let local = nelder_mead(&mut f, &x0, 1.0, cfg.max_evals, cfg.tol);
        if let Some((e, t)) = build(&local.x) {
            consider(objective(&e, &t), e, t, &mut best);
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("objective was never finite".into()))
}
