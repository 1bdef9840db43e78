//! Steering: one dilation from which every member of a refinement can be
//! prepared by measuring the ancilla.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::quantum;
use crate::error::{Error, Result};
use crate::opt::{
    compose_par, marginalize, DilationState, EffectVec, Ensemble, ObservationTest, StateVec, TAU_SUM,
};
use crate::system::{SystemLabel, TheoryId};

#[derive(Debug, Clone)]
pub struct SteeringCertificate {
    pub dilation: DilationState,
    pub test: ObservationTest,
    /// Max-abs deviation between the steered state and each member.
    pub residuals: Vec<f64>,
}

impl SteeringCertificate {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// `Tr_B[(I ⊗ b) Ψ]` in coordinates.
pub fn steered_member(dilation: &DilationState, b: &EffectVec) -> Result<StateVec> {
    let a = dilation.system();
    let anc = dilation.ancilla();
    if b.system() != anc {
        return Err(Error::SystemMismatch(format!(
            "ancilla effect on {} but ancilla is {anc}",
            b.system()
        )));
    }
    let (da, db) = (a.dim(), anc.dim());
    let joint = dilation.joint().coords();
    let v = DVector::from_fn(da, |i, _| (0..db).map(|j| joint[i * db + j] * b.coords()[j]).sum());
    Ok(StateVec::new_unchecked(a.clone(), v))
}

/// Build a steering certificate for `ens`, a refinement of `rho`.
pub fn steer(rho: &StateVec, ens: &Ensemble) -> Result<SteeringCertificate> {
    let r = ens.residual_to(rho)?;
    if r > TAU_SUM {
        return Err(Error::InvalidArgument(format!(
            "ensemble does not sum to the state (residual {r:.3e})"
        )));
    }
    let sys = rho.system();
    let (dilation, test) = match sys.theory() {
        TheoryId::Classical => classical(rho, ens)?,
        TheoryId::Quantum => quantum_steer(rho, ens)?,
        TheoryId::Boxworld => {
            return Err(Error::Unsupported(
                "steering is not available for box-world systems".into(),
            ))
        }
    };
    let residuals = ens
        .members()
        .iter()
        .zip(test.effects())
        .map(|(m, b)| Ok((steered_member(&dilation, b)?.coords() - m.coords()).amax()))
        .collect::<Result<Vec<_>>>()?;
    let marginal_residual = (marginalize(&dilation)?.coords() - rho.coords()).amax();
    if marginal_residual > TAU_SUM {
        return Err(Error::InvalidState(format!(
            "dilation marginal off by {marginal_residual:.3e}"
        )));
    }
    Ok(SteeringCertificate {
        dilation,
        test,
        residuals,
    })
}

fn classical(rho: &StateVec, ens: &Ensemble) -> Result<(DilationState, ObservationTest)> {
    let k = ens.len();
    let anc = SystemLabel::classical(k);
    let joint_sys = rho.system().compose(&anc)?;
    let mut joint = DVector::zeros(joint_sys.dim());
    let mut effects = Vec::with_capacity(k);
    for (i, m) in ens.members().iter().enumerate() {
        let mut e = DVector::zeros(anc.dim());
        e[i.min(anc.dim() - 1)] = 1.0;
        let basis = StateVec::new_unchecked(anc.clone(), e.clone());
        joint += compose_par(m, &basis)?.coords();
        effects.push(EffectVec::new_unchecked(anc.clone(), e));
    }
    if k == 1 {
        // Trivial ancilla: the test is the unit effect.
        effects = vec![EffectVec::unit(&anc)];
    }
    let joint = StateVec::new(joint_sys, joint)?;
    Ok((DilationState::new(joint, rho.system().clone())?, ObservationTest::new(effects)?))
}

fn quantum_steer(rho: &StateVec, ens: &Ensemble) -> Result<(DilationState, ObservationTest)> {
    let sys = rho.system();
    let op = quantum::to_operator(sys, rho.coords())?;
    let (vals, vecs) = quantum::hermitian_eigen(&op);
    let scale = vals.first().copied().unwrap_or(0.0).max(1.0);
    let support: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > 1e-12 * scale).collect();
    let r = support.len();
    let n = sys.hilbert_dim().unwrap_or(1);

    // Canonical purification Σ_k √λ_k v_k ⊗ |k⟩.
    let mut psi = DVector::<C64>::zeros(n * r);
    for (c, &k) in support.iter().enumerate() {
        let mut e = DVector::<C64>::zeros(r);
        e[c] = C64::new(1.0, 0.0);
        psi += quantum::kron_vec(&vecs.column(k).into_owned(), &e) * C64::new(vals[k].sqrt(), 0.0);
    }
    let anc = SystemLabel::quantum(r);
    let joint_sys = sys.compose(&anc)?;
    let joint = StateVec::new(joint_sys.clone(), quantum::from_operator(&joint_sys, &quantum::projector(&psi))?)?;

    // b_i = (Λ^{-1/2} V† σ_i V Λ^{-1/2})ᵀ on the support.
    let v = DMatrix::from_fn(n, r, |i, c| vecs[(i, support[c])]);
    let inv_sqrt: Vec<f64> = support.iter().map(|&k| 1.0 / vals[k].sqrt()).collect();
    let effects = ens
        .members()
        .iter()
        .map(|m| {
            let sigma = quantum::to_operator(sys, m.coords())?;
            let mut b = v.adjoint() * sigma * &v;
            for i in 0..r {
                for j in 0..r {
                    b[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
                }
            }
            let b = b.transpose();
            Ok(EffectVec::new_unchecked(anc.clone(), quantum::from_operator(&anc, &b)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((DilationState::new(joint, sys.clone())?, ObservationTest::new(effects)?))
}
