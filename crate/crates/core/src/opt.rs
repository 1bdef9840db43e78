//! Theory-agnostic algebra of states, effects, transformations and tests.
//!
//! Every object is a real vector or matrix tagged with its [`SystemLabel`].
//! Pairing is the Euclidean dot product in all three theories; sequential
//! composition is matrix multiplication and parallel composition the
//! Kronecker product in the lexicographic composite basis.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{SystemLabel, TheoryId};
use crate::theories;

/// Tolerance for sum-to-unit and cone-membership residuals.
pub const TAU_SUM: f64 = 1e-9;

/// A (possibly subnormalized) state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVec {
    system: SystemLabel,
    coords: DVector<f64>,
}

impl StateVec {
    /// Build a state, checking cone membership.
    pub fn new(system: SystemLabel, coords: DVector<f64>) -> Result<Self> {
        let v = theories::state_violation(&system, &coords)?;
        if v > TAU_SUM {
            return Err(Error::InvalidState(format!(
                "coordinates lie outside the state cone of {system} (residual {v:.3e})"
            )));
        }
        Ok(Self { system, coords })
    }

    pub fn from_slice(system: SystemLabel, coords: &[f64]) -> Result<Self> {
        Self::new(system, DVector::from_column_slice(coords))
    }

    /// Skip the membership check. Dimensions must still agree.
    pub fn new_unchecked(system: SystemLabel, coords: DVector<f64>) -> Self {
        debug_assert_eq!(system.dim(), coords.len());
        Self { system, coords }
    }

    pub fn system(&self) -> &SystemLabel {
        &self.system
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn into_coords(self) -> DVector<f64> {
        self.coords
    }

    /// Pairing with the unit effect.
    pub fn normalization(&self) -> f64 {
        theories::unit_coords(&self.system).dot(&self.coords)
    }

    pub fn is_normalized(&self) -> bool {
        (self.normalization() - 1.0).abs() <= TAU_SUM
    }

    pub fn is_pure(&self) -> bool {
        theories::is_pure(&self.system, &self.coords, 1e-9).unwrap_or(false)
    }

    pub fn scaled(&self, w: f64) -> StateVec {
        Self::new_unchecked(self.system.clone(), &self.coords * w)
    }

    /// `self ⊗ self ⊗ …` (`n` copies); `n == 0` gives the trivial state.
    pub fn power(&self, n: usize) -> Result<StateVec> {
        let mut out = StateVec::new_unchecked(
            SystemLabel::trivial(self.system.theory()),
            DVector::from_element(1, 1.0),
        );
        for _ in 0..n {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    /// Normalize to unit weight.
    pub fn normalized(&self) -> Result<StateVec> {
        let w = self.normalization();
        if w <= 0.0 {
            return Err(Error::InvalidState("zero state cannot be normalized".into()));
        }
        Ok(self.scaled(1.0 / w))
    }
}

/// An effect `0 ≤ a ≤ unit`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectVec {
    system: SystemLabel,
    coords: DVector<f64>,
}

impl EffectVec {
    pub fn new(system: SystemLabel, coords: DVector<f64>) -> Result<Self> {
        let v = theories::effect_violation(&system, &coords)?;
        if v > TAU_SUM {
            return Err(Error::InvalidEffect(format!(
                "coordinates violate the effect constraints of {system} (residual {v:.3e})"
            )));
        }
        Ok(Self { system, coords })
    }

    pub fn from_slice(system: SystemLabel, coords: &[f64]) -> Result<Self> {
        Self::new(system, DVector::from_column_slice(coords))
    }

    pub fn new_unchecked(system: SystemLabel, coords: DVector<f64>) -> Self {
        debug_assert_eq!(system.dim(), coords.len());
        Self { system, coords }
    }

    /// The deterministic effect of a system.
    pub fn unit(system: &SystemLabel) -> Self {
        Self {
            coords: theories::unit_coords(system),
            system: system.clone(),
        }
    }

    pub fn system(&self) -> &SystemLabel {
        &self.system
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn violation(&self) -> f64 {
        theories::effect_violation(&self.system, &self.coords).unwrap_or(f64::INFINITY)
    }
}

/// Bilinear pairing `(a|s)`.
pub fn pair(a: &EffectVec, s: &StateVec) -> Result<f64> {
    if a.system != s.system {
        return Err(Error::SystemMismatch(format!(
            "effect on {} paired with state on {}",
            a.system, s.system
        )));
    }
    Ok(a.coords.dot(&s.coords))
}

/// A transformation, stored as a real `D_out × D_in` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMat {
    input: SystemLabel,
    output: SystemLabel,
    matrix: DMatrix<f64>,
    deterministic: bool,
}

impl ChannelMat {
    /// Build a transformation, checking that it maps states to states
    /// (with Choi positivity for quantum maps).
    pub fn new(input: SystemLabel, output: SystemLabel, matrix: DMatrix<f64>) -> Result<Self> {
        let v = theories::channel_violation(&input, &output, &matrix)?;
        if v > TAU_SUM {
            return Err(Error::InvalidChannel(format!(
                "map {input} → {output} is not a valid transformation (residual {v:.3e})"
            )));
        }
        Ok(Self::new_unchecked(input, output, matrix))
    }

    /// Skip the validity check; the `deterministic` flag is still computed.
    pub fn new_unchecked(input: SystemLabel, output: SystemLabel, matrix: DMatrix<f64>) -> Self {
        let deterministic = normalization_residual(&input, &output, &matrix) <= TAU_SUM;
        Self {
            input,
            output,
            matrix,
            deterministic,
        }
    }

    pub fn identity(sys: &SystemLabel) -> Self {
        Self {
            input: sys.clone(),
            output: sys.clone(),
            matrix: DMatrix::identity(sys.dim(), sys.dim()),
            deterministic: true,
        }
    }

    /// Measure-and-discard: `s ↦ (unit|s)` onto the trivial system.
    pub fn discard(sys: &SystemLabel) -> Self {
        let u = theories::unit_coords(sys);
        Self {
            input: sys.clone(),
            output: SystemLabel::trivial(sys.theory()),
            matrix: DMatrix::from_row_slice(1, sys.dim(), u.as_slice()),
            deterministic: true,
        }
    }

    /// Preparation of a state from the trivial system.
    pub fn prepare(state: &StateVec) -> Self {
        Self::new_unchecked(
            SystemLabel::trivial(state.system().theory()),
            state.system().clone(),
            DMatrix::from_column_slice(state.system().dim(), 1, state.coords().as_slice()),
        )
    }

    pub fn input(&self) -> &SystemLabel {
        &self.input
    }

    pub fn output(&self) -> &SystemLabel {
        &self.output
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    /// Validity residual (0 when the map is a transformation).
    pub fn violation(&self) -> Result<f64> {
        theories::channel_violation(&self.input, &self.output, &self.matrix)
    }

    pub fn apply(&self, s: &StateVec) -> Result<StateVec> {
        if s.system() != &self.input {
            return Err(Error::SystemMismatch(format!(
                "channel on {} applied to state on {}",
                self.input,
                s.system()
            )));
        }
        Ok(StateVec::new_unchecked(self.output.clone(), &self.matrix * s.coords()))
    }

    /// Apply to the leading factors of a composite state, `(C ⊗ I)s`.
    pub fn apply_on_prefix(&self, s: &StateVec) -> Result<StateVec> {
        let rest = s.system().strip_prefix(&self.input).ok_or_else(|| {
            Error::SystemMismatch(format!(
                "state on {} does not start with {}",
                s.system(),
                self.input
            ))
        })?;
        let coords = apply_block(&self.matrix, s.coords(), 1, rest.dim());
        Ok(StateVec::new_unchecked(self.output.compose(&rest)?, coords))
    }

    /// Apply to the trailing factors of a composite state, `(I ⊗ C)s`.
    pub fn apply_on_suffix(&self, s: &StateVec) -> Result<StateVec> {
        let factors = s.system().factors();
        let k = self.input.factors().len();
        if self.input.is_trivial() {
            return ChannelMat::apply_on_suffix_trivial(self, s);
        }
        if factors.len() < k || factors[factors.len() - k..] != *self.input.factors() {
            return Err(Error::SystemMismatch(format!(
                "state on {} does not end with {}",
                s.system(),
                self.input
            )));
        }
        let head = if factors.len() == k {
            SystemLabel::trivial(s.system().theory())
        } else {
            SystemLabel::from_factors(&factors[..factors.len() - k])?
        };
        let coords = apply_block(&self.matrix, s.coords(), head.dim(), 1);
        Ok(StateVec::new_unchecked(head.compose(&self.output)?, coords))
    }

    fn apply_on_suffix_trivial(&self, s: &StateVec) -> Result<StateVec> {
        let coords = apply_block(&self.matrix, s.coords(), s.system().dim(), 1);
        Ok(StateVec::new_unchecked(s.system().compose(&self.output)?, coords))
    }

    /// Pull an effect back through the channel: `a ∘ C`.
    pub fn pull_effect(&self, a: &EffectVec) -> Result<EffectVec> {
        if a.system() != &self.output {
            return Err(Error::SystemMismatch(format!(
                "effect on {} composed after channel into {}",
                a.system(),
                self.output
            )));
        }
        Ok(EffectVec::new_unchecked(
            self.input.clone(),
            self.matrix.transpose() * a.coords(),
        ))
    }
}

fn normalization_residual(input: &SystemLabel, output: &SystemLabel, m: &DMatrix<f64>) -> f64 {
    if m.nrows() != output.dim() || m.ncols() != input.dim() {
        return f64::INFINITY;
    }
    let pulled = m.transpose() * theories::unit_coords(output);
    (pulled - theories::unit_coords(input)).amax()
}

/// `(I_pre ⊗ M ⊗ I_post) v` without materializing the Kronecker product.
pub fn apply_block(m: &DMatrix<f64>, v: &DVector<f64>, pre: usize, post: usize) -> DVector<f64> {
    let (dout, din) = m.shape();
    debug_assert_eq!(v.len(), pre * din * post);
    let mut out = DVector::zeros(pre * dout * post);
    for i in 0..pre {
        for k in 0..post {
            for j in 0..dout {
                let mut acc = 0.0;
                for l in 0..din {
                    let mjl = m[(j, l)];
                    if mjl != 0.0 {
                        acc += mjl * v[(i * din + l) * post + k];
                    }
                }
                out[(i * dout + j) * post + k] = acc;
            }
        }
    }
    out
}

/// Sequential composition `second ∘ first`.
pub fn compose_seq(first: &ChannelMat, second: &ChannelMat) -> Result<ChannelMat> {
    if first.output != second.input {
        return Err(Error::SystemMismatch(format!(
            "cannot compose {} → {} with {} → {}",
            first.input, first.output, second.input, second.output
        )));
    }
    Ok(ChannelMat {
        input: first.input.clone(),
        output: second.output.clone(),
        matrix: &second.matrix * &first.matrix,
        deterministic: first.deterministic && second.deterministic,
    })
}

/// Parallel composition on the composite system.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self>;
}

impl Tensor for StateVec {
    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(StateVec::new_unchecked(
            self.system.compose(&other.system)?,
            self.coords.kronecker(&other.coords),
        ))
    }
}

impl Tensor for EffectVec {
    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(EffectVec::new_unchecked(
            self.system.compose(&other.system)?,
            self.coords.kronecker(&other.coords),
        ))
    }
}

impl Tensor for ChannelMat {
    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(ChannelMat {
            input: self.input.compose(&other.input)?,
            output: self.output.compose(&other.output)?,
            matrix: self.matrix.kronecker(&other.matrix),
            deterministic: self.deterministic && other.deterministic,
        })
    }
}

pub fn compose_par<T: Tensor>(x: &T, y: &T) -> Result<T> {
    x.tensor(y)
}

/// An observation test: effects summing to the unit effect.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationTest {
    system: SystemLabel,
    effects: Vec<EffectVec>,
}

impl ObservationTest {
    /// Collect effects into a test. Validity is checked by [`validate_test`].
    pub fn new(effects: Vec<EffectVec>) -> Result<Self> {
        let Some(first) = effects.first() else {
            return Err(Error::InvalidArgument("a test needs at least one effect".into()));
        };
        let system = first.system.clone();
        if let Some(e) = effects.iter().find(|e| e.system != system) {
            return Err(Error::SystemMismatch(format!(
                "test mixes effects on {system} and {}",
                e.system
            )));
        }
        Ok(Self { system, effects })
    }

    /// Like [`ObservationTest::new`] but rejects invalid tests.
    pub fn checked(effects: Vec<EffectVec>) -> Result<Self> {
        let t = Self::new(effects)?;
        let r = validate_test(&t);
        if !r.valid {
            return Err(Error::InvalidEffect(format!(
                "not an observation test (sum residual {:.3e}, worst effect residual {:.3e})",
                r.sum_residual, r.worst_effect_residual
            )));
        }
        Ok(t)
    }

    /// The fine-grained reading test `{e_i}` of a classical system, or the
    /// computational-basis measurement of a quantum one.
    pub fn reading(sys: &SystemLabel) -> Result<Self> {
        match sys.theory() {
            TheoryId::Classical => Self::new(
                (0..sys.dim())
                    .map(|i| {
                        let mut v = DVector::zeros(sys.dim());
                        v[i] = 1.0;
                        EffectVec::new_unchecked(sys.clone(), v)
                    })
                    .collect(),
            ),
            TheoryId::Quantum => {
                let n = sys.hilbert_dim().unwrap_or(1);
                let basis = theories::quantum::OperatorBasis::new(sys)?;
                Self::new(
                    (0..n)
                        .map(|i| {
                            let mut p = DMatrix::zeros(n, n);
                            p[(i, i)] = num_complex::Complex64::new(1.0, 0.0);
                            EffectVec::new_unchecked(sys.clone(), basis.to_coords(&p))
                        })
                        .collect(),
                )
            }
            TheoryId::Boxworld => Err(Error::Unsupported(
                "box-world systems have no canonical reading test; use the x or y test".into(),
            )),
        }
    }

    pub fn system(&self) -> &SystemLabel {
        &self.system
    }

    pub fn effects(&self) -> &[EffectVec] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Outcome probabilities on a state.
    pub fn probabilities(&self, s: &StateVec) -> Result<Vec<f64>> {
        self.effects.iter().map(|e| pair(e, s)).collect()
    }
}

/// Validity report for an observation test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub effect_residuals: Vec<f64>,
    pub worst_effect_residual: f64,
    pub sum_residual: f64,
    pub valid: bool,
}

/// Per-effect validity and the sum-to-unit residual.
pub fn validate_test(t: &ObservationTest) -> TestReport {
    let effect_residuals: Vec<f64> = t.effects.iter().map(|e| e.violation()).collect();
    let worst = effect_residuals.iter().copied().fold(0.0, f64::max);
    let mut sum = DVector::zeros(t.system.dim());
    for e in &t.effects {
        sum += &e.coords;
    }
    let sum_residual = (sum - theories::unit_coords(&t.system)).amax();
    TestReport {
        valid: worst <= TAU_SUM && sum_residual <= TAU_SUM,
        effect_residuals,
        worst_effect_residual: worst,
        sum_residual,
    }
}

/// Check that `Σ_i A_i ⊗ c_i` is an effect, given effects `{A_i}` on one
/// system and a test `{c_i}` on another.
pub fn validate_combined(effects: &[EffectVec], test: &ObservationTest) -> Result<TestReport> {
    if effects.len() != test.len() {
        return Err(Error::InvalidArgument(format!(
            "{} effects paired with a {}-outcome test",
            effects.len(),
            test.len()
        )));
    }
    let mut acc: Option<EffectVec> = None;
    for (a, c) in effects.iter().zip(test.effects()) {
        let term = a.tensor(c)?;
        acc = Some(match acc {
            None => term,
            Some(prev) => EffectVec::new_unchecked(prev.system.clone(), &prev.coords + &term.coords),
        });
    }
    let combined = acc.expect("non-empty test");
    let r = combined.violation();
    Ok(TestReport {
        effect_residuals: vec![r],
        worst_effect_residual: r,
        sum_residual: 0.0,
        valid: r <= TAU_SUM,
    })
}

/// Merge outcomes of a test according to a partition of its indices.
pub fn coarse_grain(t: &ObservationTest, partition: &[Vec<usize>]) -> Result<ObservationTest> {
    let mut seen = vec![false; t.len()];
    for &i in partition.iter().flatten() {
        if i >= t.len() {
            return Err(Error::InvalidArgument(format!("index {i} out of range")));
        }
        if seen[i] {
            return Err(Error::InvalidArgument(format!("index {i} appears twice")));
        }
        seen[i] = true;
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidArgument(format!("index {i} is not covered")));
    }
    let effects = partition
        .iter()
        .filter(|block| !block.is_empty())
        .map(|block| {
            let mut v = DVector::zeros(t.system.dim());
            for &i in block {
                v += &t.effects[i].coords;
            }
            EffectVec::new_unchecked(t.system.clone(), v)
        })
        .collect();
    ObservationTest::new(effects)
}

/// A refinement: subnormalized states summing to a target.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    system: SystemLabel,
    members: Vec<StateVec>,
}

impl Ensemble {
    pub fn new(members: Vec<StateVec>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidArgument("empty ensemble".into()));
        };
        let system = first.system().clone();
        if let Some(m) = members.iter().find(|m| m.system() != &system) {
            return Err(Error::SystemMismatch(format!(
                "ensemble mixes {system} and {}",
                m.system()
            )));
        }
        Ok(Self { system, members })
    }

    /// Build an ensemble and check that it refines `target`.
    pub fn refining(target: &StateVec, members: Vec<StateVec>) -> Result<Self> {
        let e = Self::new(members)?;
        let r = e.residual_to(target)?;
        if r > TAU_SUM {
            return Err(Error::InvalidArgument(format!(
                "ensemble does not sum to the target state (residual {r:.3e})"
            )));
        }
        Ok(e)
    }

    pub fn system(&self) -> &SystemLabel {
        &self.system
    }

    pub fn members(&self) -> &[StateVec] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `Σ_i σ_i`.
    pub fn total(&self) -> StateVec {
        let mut v = DVector::zeros(self.system.dim());
        for m in &self.members {
            v += m.coords();
        }
        StateVec::new_unchecked(self.system.clone(), v)
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.normalization()).collect()
    }

    pub fn residual_to(&self, target: &StateVec) -> Result<f64> {
        if target.system() != &self.system {
            return Err(Error::SystemMismatch(format!(
                "ensemble on {} vs target on {}",
                self.system,
                target.system()
            )));
        }
        Ok((self.total().coords() - target.coords()).amax())
    }

    /// Merge members according to a partition of indices.
    pub fn coarse_grain(&self, partition: &[Vec<usize>]) -> Result<Ensemble> {
        let members = partition
            .iter()
            .filter(|b| !b.is_empty())
            .map(|block| {
                let mut v = DVector::zeros(self.system.dim());
                for &i in block {
                    let m = self.members.get(i).ok_or_else(|| {
                        Error::InvalidArgument(format!("index {i} out of range"))
                    })?;
                    v += m.coords();
                }
                Ok(StateVec::new_unchecked(self.system.clone(), v))
            })
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(members)
    }
}

/// A state on `A ⊗ B` whose marginal on `A` is the state of interest.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationState {
    joint: StateVec,
    system: SystemLabel,
    ancilla: SystemLabel,
}

impl DilationState {
    pub fn new(joint: StateVec, system: SystemLabel) -> Result<Self> {
        let ancilla = joint.system().strip_prefix(&system).ok_or_else(|| {
            Error::SystemMismatch(format!("{} does not start with {system}", joint.system()))
        })?;
        Ok(Self {
            joint,
            system,
            ancilla,
        })
    }

    pub fn joint(&self) -> &StateVec {
        &self.joint
    }

    pub fn system(&self) -> &SystemLabel {
        &self.system
    }

    pub fn ancilla(&self) -> &SystemLabel {
        &self.ancilla
    }
}

/// `(I_A ⊗ unit_B)` applied to the joint state.
pub fn marginalize(d: &DilationState) -> Result<StateVec> {
    let discard = ChannelMat::discard(&d.ancilla);
    if d.ancilla.is_trivial() {
        return Ok(StateVec::new_unchecked(d.system.clone(), d.joint.coords().clone()));
    }
    let out = discard.apply_on_suffix(&d.joint)?;
    Ok(StateVec::new_unchecked(d.system.clone(), out.into_coords()))
}
