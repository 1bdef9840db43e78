//! Randomized property sweeps.
//!
//! Each suite draws its inputs from a seeded stream, evaluates one family of
//! inequalities or identities and reports the number of trials, the number
//! of violations and the worst residual (how far the worst trial went past
//! its bound; negative when every trial held with room to spare).

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::compression::fom::{deviation, dilation_fom_over, fidelity_fom_over, pure_fom_over};
use crate::compression::{
    classical_error_prob, conjugate_scheme, ensemble_fom, product_scheme, rate_search,
    CompressionScheme, SchemeFamily,
};
use crate::entropy::{
    continuity_bound_for, ic_lower_bound, mutual_information, obit_dim_log,
    own_decomposition_information, regular_scaling_holds, shannon_unchecked, JointDistribution,
};
use crate::error::{Error, Result};
use crate::metrics::{
    check_norm_monotonicity, fidelity, fuchs_bounds, op_norm, op_norm_lp, sample_dilations,
    DilationConfig,
};
use crate::opt::{
    compose_par, compose_seq, marginalize, pair, validate_test, ChannelMat, DilationState, Ensemble, StateVec,
    TAU_SUM,
};
use crate::optim::search::TestFamily;
use crate::optim::SearchConfig;
use crate::system::{SystemLabel, TheoryId};
use crate::theories::random::{
    random_effect, random_unitary, rng, sample_channel, sample_pure_state, sample_state, simplex_point,
    SeededRng,
};
use crate::theories::{channel_violation, pure_decompositions, quantum, state_violation, steer, TheoryModel};

/// Names of all suites, in the order they run.
pub const SUITES: &[&str] = &[
    "validity",
    "algebra",
    "fuchs",
    "monotonicity",
    "fidelity",
    "continuity",
    "error_identity",
    "steering",
    "bridges",
    "subadditivity",
    "reversible",
    "refinement",
    "purity",
    "scaling",
    "rates",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Per-suite trial count; `None` uses each suite's default.
    pub trials: Option<usize>,
    /// Add a channel that is not stochastic to the validity suite.
    pub inject_fault: bool,
    pub search: SearchConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: None,
            inject_fault: false,
            search: SearchConfig {
                restarts: 2,
                max_evals: 600,
                ..SearchConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub violations: usize,
    pub worst_residual: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

struct Tally {
    trials: usize,
    violations: usize,
    worst: f64,
}

impl Tally {
    fn new() -> Self {
        Self {
            trials: 0,
            violations: 0,
            worst: f64::NEG_INFINITY,
        }
    }

    /// Record `residual`, a violation when it exceeds `tol`.
    fn check(&mut self, residual: f64, tol: f64) {
        self.trials += 1;
        if !(residual <= tol) {
            self.violations += 1;
        }
        if residual.is_nan() {
            self.worst = f64::NAN;
        } else if !self.worst.is_nan() {
            self.worst = self.worst.max(residual);
        }
    }

    fn holds(&mut self, ok: bool) {
        self.check(if ok { 0.0 } else { 1.0 }, 0.5);
    }

    fn report(self, suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            trials: self.trials,
            violations: self.violations,
            worst_residual: if self.trials == 0 { 0.0 } else { self.worst },
        }
    }
}

fn default_trials(suite: &str) -> usize {
    match suite {
        "fuchs" | "continuity" | "error_identity" | "algebra" | "monotonicity" | "fidelity" => 1000,
        "scaling" => 1,
        _ => 100,
    }
}

/// Run one suite by name.
pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let n = cfg.trials.unwrap_or_else(|| default_trials(name));
    let seed = cfg.seed ^ fxhash(name);
    let mut g = rng(seed);
    let t = match name {
        "validity" => validity(n, cfg.inject_fault, &mut g)?,
        "algebra" => algebra(n, &mut g)?,
        "fuchs" => fuchs(n, &cfg.search, &mut g)?,
        "monotonicity" => monotonicity(n, &mut g)?,
        "fidelity" => fidelity_props(n, &cfg.search, &mut g)?,
        "continuity" => continuity(n, &mut g)?,
        "error_identity" => error_identity(n, &mut g)?,
        "steering" => steering(n, &mut g)?,
        "bridges" => bridges(n, &cfg.search, &mut g)?,
        "subadditivity" => subadditivity(n, &mut g)?,
        "reversible" => reversible(n, &cfg.search, &mut g)?,
        "refinement" => refinement(n, &mut g)?,
        "purity" => purity(n, &mut g)?,
        "scaling" => scaling()?,
        "rates" => rates(n, &mut g)?,
        other => return Err(Error::InvalidArgument(format!("unknown suite `{other}`"))),
    };
    Ok(t.report(name))
}

/// Run the named suites, or all of them when `only` is empty.
pub fn run_all(only: &[String], cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    for s in only {
        if !SUITES.contains(&s.as_str()) {
            return Err(Error::InvalidArgument(format!("unknown suite `{s}`")));
        }
    }
    SUITES
        .iter()
        .filter(|s| only.is_empty() || only.iter().any(|o| o == *s))
        .map(|s| run_suite(s, cfg))
        .collect()
}

fn fxhash(s: &str) -> u64 {
    // FNV-1a; keeps suite streams independent but stable across builds.
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

fn systems() -> [SystemLabel; 3] {
    [SystemLabel::classical(3), SystemLabel::quantum(2), SystemLabel::squit()]
}

fn pick(i: usize) -> SystemLabel {
    systems()[i % 3].clone()
}

/// Convex mixture `(1 − t)·id + t·C`.
fn near_identity(c: &ChannelMat, t: f64) -> Result<ChannelMat> {
    let id = ChannelMat::identity(c.input());
    ChannelMat::new(c.input().clone(), c.output().clone(), id.matrix() * (1.0 - t) + c.matrix() * t)
}

/// A random scheme with `N = 1` whose code system is the source system
/// itself (used as its own obit).
fn random_scheme(sys: &SystemLabel, g: &mut SeededRng) -> Result<CompressionScheme> {
    let t = g.random_range(0.0..=1.0f64).powi(3);
    let enc = near_identity(&sample_channel(sys, sys, g)?, t)?;
    let dec = near_identity(&sample_channel(sys, sys, g)?, t)?;
    CompressionScheme::new(enc, dec, 1, 1, sys.clone(), "random")
}

/// A random refinement of `rho`, built by spreading its finest extremal
/// decomposition over `k` members.
fn random_refinement(rho: &StateVec, k: usize, g: &mut SeededRng) -> Result<Ensemble> {
    let seed = g.random();
    let pool = pure_decompositions(rho, 2, seed)?;
    let base = pool[g.random_range(0..pool.len())].members().to_vec();
    let split: Vec<Vec<f64>> = base.iter().map(|_| simplex_point(k, g)).collect();
    let members = (0..k)
        .map(|f| {
            let mut v = DVector::zeros(rho.system().dim());
            for (m, w) in base.iter().zip(&split) {
                v += m.coords() * w[f];
            }
            StateVec::new_unchecked(rho.system().clone(), v)
        })
        .collect();
    Ensemble::new(members)
}

fn validity(n: usize, inject_fault: bool, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    for i in 0..n {
        let sys = pick(i);
        let c = sample_channel(&sys, &sys, g)?;
        t.check(channel_violation(&sys, &sys, c.matrix())?, TAU_SUM);
        let s = sample_state(&sys, g)?;
        t.check(state_violation(&sys, s.coords())?, TAU_SUM);
        let e = random_effect(&sys, g)?;
        t.check(e.violation(), TAU_SUM);
        let family = TestFamily::new(&sys, 3)?;
        let params = family.random_params(g);
        let test = family
            .build(&params)
            .ok_or_else(|| Error::InvalidArgument("degenerate test parameters".into()))?;
        let report = validate_test(&test);
        t.check(report.worst_effect_residual.max(report.sum_residual), TAU_SUM);
    }
    if inject_fault {
        // Columns summing to 1.5: not a channel of any theory.
        let c3 = SystemLabel::classical(3);
        let bad = DMatrix::from_element(3, 3, 0.5);
        t.check(channel_violation(&c3, &c3, &bad)?, TAU_SUM);
    }
    Ok(t)
}

fn algebra(n: usize, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    let c2 = SystemLabel::classical(2);
    for i in 0..n {
        let sys = pick(i);
        let a = random_effect(&sys, g)?;
        let (s1, s2) = (sample_state(&sys, g)?, sample_state(&sys, g)?);
        let (x, y): (f64, f64) = (g.random_range(-2.0..2.0), g.random_range(-2.0..2.0));
        let mix = StateVec::new_unchecked(sys.clone(), s1.coords() * x + s2.coords() * y);
        let lhs = pair(&a, &mix)?;
        let rhs = x * pair(&a, &s1)? + y * pair(&a, &s2)?;
        t.check((lhs - rhs).abs(), 1e-12);

        // (C₁ ⊗ C₂)∘(D₁ ⊗ D₂) = (C₁∘D₁) ⊗ (C₂∘D₂); box-world pairs with a
        // classical factor.
        let other = if sys.theory() == TheoryId::Quantum { SystemLabel::quantum(2) } else { c2.clone() };
        let (c1, d1) = (sample_channel(&sys, &sys, g)?, sample_channel(&sys, &sys, g)?);
        let (c2_, d2) = (sample_channel(&other, &other, g)?, sample_channel(&other, &other, g)?);
        let left = compose_seq(&compose_par(&d1, &d2)?, &compose_par(&c1, &c2_)?)?;
        let right = compose_par(&compose_seq(&d1, &c1)?, &compose_seq(&d2, &c2_)?)?;
        t.check((left.matrix() - right.matrix()).amax(), 1e-12);
    }
    Ok(t)
}

fn fuchs(n: usize, search: &SearchConfig, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    for sys in systems() {
        for _ in 0..n {
            let (r, s) = (sample_state(&sys, g)?, sample_state(&sys, g)?);
            let cfg = SearchConfig {
                seed: g.random(),
                ..*search
            };
            t.check(fuchs_bounds(&r, &s, &cfg)?.violation(), 1e-9);
        }
    }
    Ok(t)
}

fn monotonicity(n: usize, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    for i in 0..n {
        let sys = pick(i);
        let (r, s) = (sample_state(&sys, g)?, sample_state(&sys, g)?);
        let c = sample_channel(&sys, &sys, g)?;
        let rep = check_norm_monotonicity(&(r.coords() - s.coords()), &c)?;
        t.check(rep.after - rep.before, 1e-9);
        // The closed-form norms agree with the linear program.
        if sys.theory() == TheoryId::Classical {
            let d = r.coords() - s.coords();
            t.check((op_norm(&d, &sys)? - op_norm_lp(&d, &sys)?).abs(), 1e-9);
        }
    }
    Ok(t)
}

fn fidelity_props(n: usize, search: &SearchConfig, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    for i in 0..n {
        let sys = pick(i);
        let (r, s) = (sample_state(&sys, g)?, sample_state(&sys, g)?);
        let f = fidelity(&r, &s, search)?;
        t.check((f.value - fidelity(&s, &r, search)?.value).abs(), 1e-12);
        t.check((1.0 - fidelity(&r, &r, search)?.value).abs(), 1e-9);
        if f.method.is_exact() {
            let c = sample_channel(&sys, &sys, g)?;
            let fc = fidelity(&c.apply(&r)?, &c.apply(&s)?, search)?;
            t.check(f.value - fc.value, 1e-9);
        }
    }
    Ok(t)
}

fn random_joint(m: usize, k: usize, g: &mut SeededRng) -> Result<JointDistribution> {
    JointDistribution::new(DMatrix::from_vec(m, k, simplex_point(m * k, g)))
}

fn continuity(n: usize, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    let mut done = 0;
    while done < n {
        let (m, k) = (g.random_range(2..=4usize), g.random_range(2..=4usize));
        let p = random_joint(m, k, g)?;
        let r = random_joint(m, k, g)?;
        let s: f64 = g.random_range(0.0..=1.0f64).powi(2);
        let q = JointDistribution::new(p.matrix() * (1.0 - s) + r.matrix() * s)?;
        let gamma = p.l1_distance(&q)?;
        let Ok(bound) = continuity_bound_for(gamma, m, k) else {
            continue;
        };
        let l = ((m * k) as f64 - 1.0).log2();
        let lhs = (mutual_information(&p) - mutual_information(&q)).abs() / l;
        t.check(lhs - bound, 1e-9);
        // I(A:B) ≤ min{H(A), H(B)}.
        let h = shannon_unchecked(&p.row_marginal()).min(shannon_unchecked(&p.col_marginal()));
        t.check(mutual_information(&p) - h, 1e-9);
        done += 1;
    }
    Ok(t)
}

fn error_identity(n: usize, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    for _ in 0..n {
        let sys = SystemLabel::classical(g.random_range(2..=6));
        let c = sample_channel(&sys, &sys, g)?;
        let p = sample_state(&sys, g)?;
        t.check(classical_error_prob(&c, &p)?.deviation(), 1e-12);
    }
    Ok(t)
}

fn steering(n: usize, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    for i in 0..n {
        let sys = if i % 2 == 0 {
            SystemLabel::classical(g.random_range(2..=4))
        } else {
            SystemLabel::quantum(2)
        };
        let rho = sample_state(&sys, g)?;
        let k = g.random_range(1..=4);
        let ens = random_refinement(&rho, k, g)?;
        let cert = steer(&rho, &ens)?;
        t.check(cert.max_residual(), 1e-9);
        let marg = marginalize(&cert.dilation)?;
        t.check((marg.coords() - rho.coords()).amax(), 1e-9);
        let s = random_scheme(&sys, g)?;
        let lhs = ensemble_fom(&s, &ens)?;
        let rhs = deviation(s.channel(), cert.dilation.joint())?;
        t.check(lhs - rhs, 1e-9);
    }
    Ok(t)
}

fn exact_theory(i: usize) -> SystemLabel {
    if i % 2 == 0 {
        SystemLabel::classical(2)
    } else {
        SystemLabel::quantum(2)
    }
}

fn bridges(n: usize, search: &SearchConfig, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    let grid: Vec<f64> = (1..=40).map(|j| 10f64.powf(-4.0 + 4.0 * j as f64 / 40.0)).collect();
    for i in 0..n {
        let sys = exact_theory(i);
        let s = random_scheme(&sys, g)?;
        let rho = sample_state(&sys, g)?;
        let dil = sample_dilations(
            &rho,
            &DilationConfig {
                samples: 3,
                max_ancilla: None,
                seed: g.random(),
            },
        )?;
        let f = fidelity_fom_over(&s, &dil, search)?;
        let d = dilation_fom_over(&s, &dil)?;
        for &eps in &grid {
            if f > 1.0 - eps {
                t.check(d - 2.0 * eps.sqrt(), 0.0);
            }
            if d < eps {
                t.check((1.0 - eps) - f, 1e-12);
            }
        }
    }
    Ok(t)
}

fn product_ensemble(a: &Ensemble, b: &Ensemble) -> Result<Ensemble> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.members() {
        for y in b.members() {
            out.push(compose_par(x, y)?);
        }
    }
    Ensemble::new(out)
}

fn subadditivity(n: usize, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    for i in 0..n {
        let sys = exact_theory(i);
        let (s1, s2) = (random_scheme(&sys, g)?, random_scheme(&sys, g)?);
        let prod = product_scheme(&s1, &s2)?;
        let (a, b) = (sample_state(&sys, g)?, sample_state(&sys, g)?);
        let k1 = g.random_range(1..=3);
        let k2 = g.random_range(1..=3);
        let (ea, eb) = (random_refinement(&a, k1, g)?, random_refinement(&b, k2, g)?);
        let lhs = ensemble_fom(&prod, &product_ensemble(&ea, &eb)?)?;
        let rhs = ensemble_fom(&s1, &ea)? + ensemble_fom(&s2, &eb)?;
        t.check(lhs - rhs, 1e-9);
    }
    Ok(t)
}

/// A random reversible channel with its inverse: a permutation for
/// classical systems, a unitary conjugation for quantum ones.
fn reversible_pair(sys: &SystemLabel, g: &mut SeededRng) -> Result<(ChannelMat, ChannelMat)> {
    match sys.theory() {
        TheoryId::Quantum => {
            let u = random_unitary(sys.hilbert_dim().unwrap_or(1), g);
            let m = quantum::channel_from_kraus(sys, sys, &[u.clone()])?;
            let mi = quantum::channel_from_kraus(sys, sys, &[u.adjoint()])?;
            Ok((ChannelMat::new(sys.clone(), sys.clone(), m)?, ChannelMat::new(sys.clone(), sys.clone(), mi)?))
        }
        _ => {
            let d = sys.dim();
            let mut perm: Vec<usize> = (0..d).collect();
            for i in (1..d).rev() {
                perm.swap(i, g.random_range(0..=i));
            }
            let p = DMatrix::from_fn(d, d, |r, c| if perm[c] == r { 1.0 } else { 0.0 });
            let pt = p.transpose();
            Ok((ChannelMat::new(sys.clone(), sys.clone(), p)?, ChannelMat::new(sys.clone(), sys.clone(), pt)?))
        }
    }
}

fn map_dilation(u: &ChannelMat, d: &DilationState) -> Result<DilationState> {
    DilationState::new(u.apply_on_prefix(d.joint())?, d.system().clone())
}

fn reversible(n: usize, search: &SearchConfig, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    for i in 0..n {
        let sys = if i % 2 == 0 { SystemLabel::classical(3) } else { SystemLabel::quantum(2) };
        let s = random_scheme(&sys, g)?;
        let (u, ui) = reversible_pair(&sys, g)?;
        let conj = conjugate_scheme(&s, &u, &ui)?;
        let rho = sample_state(&sys, g)?;
        let dil = sample_dilations(
            &rho,
            &DilationConfig {
                samples: 2,
                max_ancilla: None,
                seed: g.random(),
            },
        )?;
        let moved: Vec<DilationState> = dil.iter().map(|d| map_dilation(&u, d)).collect::<Result<_>>()?;

        let ens = random_refinement(&rho, 3, g)?;
        let ens_u = Ensemble::new(ens.members().iter().map(|m| u.apply(m)).collect::<Result<_>>()?)?;
        t.check((ensemble_fom(&conj, &ens)? - ensemble_fom(&s, &ens_u)?).abs(), 1e-9);
        t.check((dilation_fom_over(&conj, &dil)? - dilation_fom_over(&s, &moved)?).abs(), 1e-9);
        t.check(
            (fidelity_fom_over(&conj, &dil, search)? - fidelity_fom_over(&s, &moved, search)?).abs(),
            1e-9,
        );
        // Pure decompositions of corresponding dilations correspond.
        let mut worst: f64 = 0.0;
        for d in &dil {
            for dec in pure_decompositions(d.joint(), 1, g.random())? {
                let moved = Ensemble::new(dec.members().iter().map(|m| u.apply_on_prefix(m)).collect::<Result<_>>()?)?;
                worst = worst.max((ensemble_fom(&conj, &dec)? - ensemble_fom(&s, &moved)?).abs());
            }
        }
        t.check(worst, 1e-9);
        if sys.theory() == TheoryId::Classical {
            let a = classical_error_prob(conj.channel(), &rho)?.value;
            let b = classical_error_prob(s.channel(), &u.apply(&rho)?)?.value;
            t.check((a - b).abs(), 1e-9);
        }
    }
    Ok(t)
}

fn refinement(n: usize, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    for i in 0..n {
        let sys = exact_theory(i);
        let s = random_scheme(&sys, g)?;
        let rho = sample_state(&sys, g)?;
        let fine = &pure_decompositions(&rho, 1, g.random())?[0];
        let k = fine.len();
        // Random partition of the pure members into groups.
        let groups = g.random_range(1..=k);
        let mut parts = vec![Vec::new(); groups];
        for j in 0..k {
            let slot = if j < groups { j } else { g.random_range(0..groups) };
            parts[slot].push(j);
        }
        let coarse = fine.coarse_grain(&parts)?;
        t.check(ensemble_fom(&s, &coarse)? - ensemble_fom(&s, fine)?, 1e-9);
        let dil = vec![DilationState::new(rho.clone(), sys.clone())?];
        let (best, _) = pure_fom_over(&s, &dil, 2, g.random())?;
        t.check(ensemble_fom(&s, &coarse)? - best, 1e-9);
    }
    Ok(t)
}

fn purity(n: usize, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    for i in 0..n {
        let sys = exact_theory(i);
        let model = TheoryModel::for_system(&sys)?;
        let rho = sample_state(&sys, g)?;
        let b = ic_lower_bound(own_decomposition_information(&rho)?, obit_dim_log(&model))?;
        t.holds(b > 0.0);
        let pure = sample_pure_state(&sys, g)?;
        let b = ic_lower_bound(own_decomposition_information(&pure)?, obit_dim_log(&model))?;
        t.check(b.abs(), 1e-9);
    }
    Ok(t)
}

fn scaling() -> Result<Tally> {
    let mut t = Tally::new();
    for model in [TheoryModel::classical(2)?, TheoryModel::quantum(2)?, TheoryModel::squit()] {
        t.holds(regular_scaling_holds(&model, 1, 6));
    }
    Ok(t)
}

fn rates(n: usize, g: &mut SeededRng) -> Result<Tally> {
    let mut t = Tally::new();
    for i in 0..n {
        let sys = exact_theory(i);
        let rho = sample_state(&sys, g)?;
        let blocks = g.random_range(1..=8);
        let mut eps: Vec<f64> = (0..3).map(|_| g.random_range(0.001..0.5)).collect();
        eps.sort_by(f64::total_cmp);
        let ms: Vec<usize> = eps
            .iter()
            .map(|&e| rate_search(&rho, blocks, e, SchemeFamily::Typical).map(|r| r.m.unwrap_or(usize::MAX)))
            .collect::<Result<_>>()?;
        t.holds(ms.windows(2).all(|w| w[1] <= w[0]));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(trials: usize) -> VerifyConfig {
        VerifyConfig {
            trials: Some(trials),
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn all_suites_pass_quickly() {
        for r in run_all(&[], &quick(6)).unwrap() {
            assert!(r.passed(), "{r:?}");
            assert!(r.trials > 0, "{r:?}");
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let cfg = VerifyConfig {
            inject_fault: true,
            ..quick(3)
        };
        let r = run_suite("validity", &cfg).unwrap();
        assert_eq!(r.violations, 1);
        assert!(r.worst_residual > 0.1);
    }

    #[test]
    fn filtering_and_reproducibility() {
        let only = vec!["fuchs".to_string()];
        let a = run_all(&only, &quick(5)).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].suite, "fuchs");
        assert_eq!(a, run_all(&only, &quick(5)).unwrap());
        assert!(run_all(&["nope".to_string()], &quick(1)).is_err());
    }
}
