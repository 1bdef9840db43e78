//! Figures of merit of compression schemes.
//!
//! Suprema and infima over refinements and dilations are approximated over
//! explicit families, and every report records the family and the direction
//! in which its value bounds the true one.

use serde::{Deserialize, Serialize};

use super::scheme::CompressionScheme;
use crate::error::{Error, Result};
use crate::metrics::{dilation_fidelity, op_norm, sample_dilations, DilationConfig};
use crate::opt::{ChannelMat, DilationState, Ensemble, StateVec};
use crate::optim::SearchConfig;
use crate::system::TheoryId;
use crate::theories::pure_decompositions;
use crate::BoundDirection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FomCriterion {
    Ensemble,
    Pure,
    Dilation,
    Fidelity,
    ClassicalError,
}

impl FomCriterion {
    pub fn as_str(self) -> &'static str {
        match self {
            FomCriterion::Ensemble => "ensemble",
            FomCriterion::Pure => "pure",
            FomCriterion::Dilation => "dilation",
            FomCriterion::Fidelity => "fidelity",
            FomCriterion::ClassicalError => "classical_error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FomReport {
    pub criterion: FomCriterion,
    pub value: f64,
    pub bound: BoundDirection,
    /// Number of dilations evaluated.
    pub dilations: usize,
    /// Number of pure decompositions evaluated (pure criterion only).
    pub decompositions: usize,
    pub seed: u64,
}

/// Sampling family shared by the dilation-based figures of merit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FomSampling {
    pub dilations: DilationConfig,
    /// Random pure decompositions per dilation.
    pub decompositions: usize,
    pub search: SearchConfig,
}

impl Default for FomSampling {
    fn default() -> Self {
        Self {
            dilations: DilationConfig::default(),
            decompositions: 4,
            search: SearchConfig::default(),
        }
    }
}

/// `‖(C ⊗ I)ψ − ψ‖` for `C` acting on the leading factors of `ψ`.
pub fn deviation(c: &ChannelMat, psi: &StateVec) -> Result<f64> {
    let out = c.apply_on_prefix(psi)?;
    if out.system() != psi.system() {
        return Err(Error::SystemMismatch(format!(
            "channel maps {} to {}",
            psi.system(),
            out.system()
        )));
    }
    op_norm(&(out.coords() - psi.coords()), psi.system())
}

/// `Σᵢ ‖(D∘E ⊗ I)Ψᵢ − Ψᵢ‖` over the members of a refinement.
pub fn ensemble_fom(s: &CompressionScheme, ens: &Ensemble) -> Result<f64> {
    ens.members().iter().map(|m| deviation(s.channel(), m)).sum()
}

/// Best pure-decomposition value over the given dilations.
pub fn pure_fom_over(s: &CompressionScheme, dilations: &[DilationState], budget: usize, seed: u64) -> Result<(f64, usize)> {
    let mut best: f64 = 0.0;
    let mut count = 0;
    for (k, d) in dilations.iter().enumerate() {
        for dec in pure_decompositions(d.joint(), budget, seed.wrapping_add(k as u64))? {
            best = best.max(ensemble_fom(s, &dec)?);
            count += 1;
        }
    }
    Ok((best, count))
}

/// Largest `‖(C ⊗ I)Ψ − Ψ‖` over the given dilations.
pub fn dilation_fom_over(s: &CompressionScheme, dilations: &[DilationState]) -> Result<f64> {
    let mut best: f64 = 0.0;
    for d in dilations {
        best = best.max(deviation(s.channel(), d.joint())?);
    }
    Ok(best)
}

/// Smallest `F[Ψ, (C ⊗ I)Ψ]²` over the given dilations.
pub fn fidelity_fom_over(s: &CompressionScheme, dilations: &[DilationState], cfg: &SearchConfig) -> Result<f64> {
    let mut best: f64 = 1.0;
    for d in dilations {
        best = best.min(dilation_fidelity(d, s.channel(), cfg)?);
    }
    Ok(best)
}

fn block_source(s: &CompressionScheme, rho: &StateVec) -> Result<StateVec> {
    let source = if rho.system() == s.input() {
        rho.clone()
    } else {
        rho.power(s.n())?
    };
    if source.system() != s.input() {
        return Err(Error::SystemMismatch(format!(
            "scheme on {} cannot compress copies of a state on {}",
            s.input(),
            rho.system()
        )));
    }
    Ok(source)
}

/// Dilations of the block source `ρ^⊗N`, or of `ρ` itself when it already
/// lives on the scheme's input.
pub fn block_dilations(s: &CompressionScheme, rho: &StateVec, cfg: &DilationConfig) -> Result<Vec<DilationState>> {
    sample_dilations(&block_source(s, rho)?, cfg)
}

pub fn pure_fom(s: &CompressionScheme, rho: &StateVec, cfg: &FomSampling) -> Result<FomReport> {
    let dil = block_dilations(s, rho, &cfg.dilations)?;
    let (value, count) = pure_fom_over(s, &dil, cfg.decompositions, cfg.dilations.seed)?;
    Ok(FomReport {
        criterion: FomCriterion::Pure,
        value,
        bound: BoundDirection::Lower,
        dilations: dil.len(),
        decompositions: count,
        seed: cfg.dilations.seed,
    })
}

pub fn dilation_fom(s: &CompressionScheme, rho: &StateVec, cfg: &FomSampling) -> Result<FomReport> {
    let dil = block_dilations(s, rho, &cfg.dilations)?;
    Ok(FomReport {
        criterion: FomCriterion::Dilation,
        value: dilation_fom_over(s, &dil)?,
        bound: BoundDirection::Lower,
        dilations: dil.len(),
        decompositions: 0,
        seed: cfg.dilations.seed,
    })
}

/// The family always contains a dilation attaining the infimum for
/// classical (copy dilation) and quantum (purification) sources, so the
/// value is exact there.
pub fn fidelity_fom(s: &CompressionScheme, rho: &StateVec, cfg: &FomSampling) -> Result<FomReport> {
    let dil = block_dilations(s, rho, &cfg.dilations)?;
    let bound = match rho.system().theory() {
        TheoryId::Boxworld => BoundDirection::Upper,
        _ => BoundDirection::Exact,
    };
    Ok(FomReport {
        criterion: FomCriterion::Fidelity,
        value: fidelity_fom_over(s, &dil, &cfg.search)?,
        bound,
        dilations: dil.len(),
        decompositions: 0,
        seed: cfg.dilations.seed,
    })
}

/// The two expressions of the classical error probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorProbability {
    /// `1 − Σᵢ C_ii pᵢ`.
    pub value: f64,
    /// `½ Σᵢ pᵢ ‖C eᵢ − eᵢ‖₁`.
    pub norm_form: f64,
}

impl ErrorProbability {
    pub fn deviation(&self) -> f64 {
        (self.value - self.norm_form).abs()
    }
}

/// Error probability of a classical channel on a source distribution.
///
/// Both expressions are evaluated; they agree exactly for channels that
/// preserve normalization, and a disagreement beyond `1e-12` is an error.
pub fn classical_error_prob(c: &ChannelMat, p: &StateVec) -> Result<ErrorProbability> {
    if c.input().theory() != TheoryId::Classical || c.input() != c.output() {
        return Err(Error::SystemMismatch(format!(
            "classical error probability needs a classical channel on one system, got {} → {}",
            c.input(),
            c.output()
        )));
    }
    if p.system() != c.input() {
        return Err(Error::DimensionMismatch {
            expected: c.input().dim(),
            got: p.coords().len(),
        });
    }
    let m = c.matrix();
    let d = m.ncols();
    let value = 1.0 - (0..d).map(|i| m[(i, i)] * p.coords()[i]).sum::<f64>();
    let norm_form = 0.5
        * (0..d)
            .map(|i| {
                let col: f64 = (0..d)
                    .map(|j| (m[(j, i)] - if i == j { 1.0 } else { 0.0 }).abs())
                    .sum();
                p.coords()[i] * col
            })
            .sum::<f64>();
    let r = ErrorProbability { value, norm_form };
    if r.deviation() > 1e-12 {
        return Err(Error::InvalidChannel(format!(
            "error-probability forms disagree by {:.3e}; the channel does not preserve normalization",
            r.deviation()
        )));
    }
    Ok(r)
}
