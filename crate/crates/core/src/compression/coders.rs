//! Concrete block coders: typical set, typical subspace, measure-and-prepare.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::scheme::CompressionScheme;
use super::types::{top_mass, type_classes, DEFAULT_CLASS_CAP};
use crate::error::{Error, Result};
use crate::opt::{ChannelMat, StateVec};
use crate::system::{SystemLabel, TheoryId};
use crate::theories::quantum;

/// Largest real dimension of `A^⊗N` for which schemes are built explicitly.
pub const EXPLICIT_DIM_CAP: usize = 4096;

/// Largest block length for quantum sources.
pub const QUANTUM_BLOCK_CAP: usize = 14;

/// The source spectrum: a classical distribution or the eigenvalues of a
/// quantum state, in the order of the reading basis or eigenbasis.
pub fn source_spectrum(rho: &StateVec) -> Result<Vec<f64>> {
    if !rho.is_normalized() {
        return Err(Error::InvalidState("source state must be normalized".into()));
    }
    match rho.system().theory() {
        TheoryId::Classical => Ok(rho.coords().iter().map(|p| p.max(0.0)).collect()),
        TheoryId::Quantum => {
            let op = quantum::to_operator(rho.system(), rho.coords())?;
            let (vals, _) = quantum::hermitian_eigen(&op);
            Ok(vals.into_iter().map(|v| v.max(0.0)).collect())
        }
        TheoryId::Boxworld => Err(Error::Unsupported(
            "block coders are defined for classical and quantum sources".into(),
        )),
    }
}

/// Largest useful code length: `⌈N log₂ d⌉` obits store everything.
pub fn full_code_length(d: usize, n: usize) -> usize {
    let bits = n as f64 * (d as f64).log2();
    let m = bits.round();
    if (bits - m).abs() < 1e-9 {
        m as usize
    } else {
        bits.ceil() as usize
    }
}

fn check_m(d: usize, n: usize, m: usize) -> Result<()> {
    if m > full_code_length(d, n) {
        return Err(Error::InvalidArgument(format!(
            "code length {m} exceeds N·log₂d = {}",
            full_code_length(d, n)
        )));
    }
    Ok(())
}

/// Probability mass of the `2^m` most probable length-`n` sequences.
pub fn typical_mass(probs: &[f64], n: usize, m: usize) -> Result<f64> {
    if m >= full_code_length(probs.len(), n) {
        return Ok(probs.iter().sum::<f64>().powi(n as i32).min(1.0));
    }
    let classes = type_classes(probs, n, DEFAULT_CLASS_CAP)?;
    Ok(top_mass(&classes, m).kept.min(1.0))
}

/// Error probability of the typical-set coder, computed from type classes.
pub fn typical_set_error(probs: &[f64], n: usize, m: usize) -> Result<f64> {
    check_m(probs.len(), n, m)?;
    if m >= full_code_length(probs.len(), n) {
        return Ok(0.0);
    }
    let classes = type_classes(probs, n, DEFAULT_CLASS_CAP)?;
    Ok(top_mass(&classes, m).discarded.clamp(0.0, 1.0))
}

/// Indices of length-`n` sequences over `probs`, most probable first, with
/// equal-probability sequences in lexicographic order.
pub fn ranked_sequences(probs: &[f64], n: usize) -> Vec<usize> {
    let d = probs.len();
    let total = d.pow(n as u32);
    let ln_p: Vec<f64> = probs.iter().map(|p| p.ln()).collect();
    let key = |mut x: usize| -> f64 {
        // Sum in letter order so equal types give bit-identical keys.
        let mut counts = vec![0usize; d];
        for _ in 0..n {
            counts[x % d] += 1;
            x /= d;
        }
        counts
            .iter()
            .zip(&ln_p)
            .map(|(&k, &l)| if k == 0 { 0.0 } else { k as f64 * l })
            .sum()
    };
    let keys: Vec<f64> = (0..total).map(key).collect();
    let mut idx: Vec<usize> = (0..total).collect();
    idx.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(a.cmp(&b)));
    idx
}

fn explicit_cap(sys: &SystemLabel) -> Result<()> {
    if sys.dim() > EXPLICIT_DIM_CAP {
        return Err(Error::CapExceeded {
            what: "explicit scheme dimension",
            value: sys.dim(),
            cap: EXPLICIT_DIM_CAP,
        });
    }
    Ok(())
}

/// Keep the `2^m` most probable sequences; every other sequence is encoded
/// as the most probable one.
pub fn typical_set_scheme(p: &StateVec, n: usize, m: usize) -> Result<CompressionScheme> {
    let sys = p.system();
    if sys.theory() != TheoryId::Classical || sys.factors().len() != 1 {
        return Err(Error::InvalidArgument("typical-set coding needs a single classical source".into()));
    }
    let d = sys.dim();
    check_m(d, n, m)?;
    let input = sys.power(n)?;
    explicit_cap(&input)?;
    let obit = SystemLabel::classical(2);
    let code = obit.power(m)?;
    let order = ranked_sequences(p.coords().as_slice(), n);
    let k = code.dim().min(order.len());
    let mut slot = vec![0usize; order.len()];
    for (j, &x) in order.iter().take(k).enumerate() {
        slot[x] = j;
    }
    let enc = DMatrix::from_fn(code.dim(), input.dim(), |r, c| if slot[c] == r { 1.0 } else { 0.0 });
    let dec = DMatrix::from_fn(input.dim(), code.dim(), |r, c| {
        let target = if c < k { order[c] } else { order[0] };
        if r == target {
            1.0
        } else {
            0.0
        }
    });
    CompressionScheme::new(
        ChannelMat::new(input.clone(), code.clone(), enc)?,
        ChannelMat::new(code, input, dec)?,
        n,
        m,
        obit,
        "typical",
    )
}

/// Project onto the span of the `2^m` eigenvectors of `ρ^⊗N` with largest
/// eigenvalue, otherwise prepare the leading eigenvector.
pub fn typical_subspace_scheme(rho: &StateVec, n: usize, m: usize) -> Result<CompressionScheme> {
    let sys = rho.system();
    let Some(dim) = sys.hilbert_dim() else {
        return Err(Error::InvalidArgument("typical-subspace coding needs a quantum source".into()));
    };
    if m > n {
        return Err(Error::InvalidArgument(format!("M = {m} exceeds N = {n}")));
    }
    if sys.factors().len() != 1 || dim != 2 {
        return Err(Error::Unsupported("typical-subspace coding is implemented for qubit sources".into()));
    }
    let input = sys.power(n)?;
    explicit_cap(&input)?;
    let obit = SystemLabel::quantum(2);
    let code = obit.power(m)?;
    let op = quantum::to_operator(sys, rho.coords())?;
    let (vals, vecs) = quantum::hermitian_eigen(&op);
    let order = ranked_sequences(&vals, n);
    let big = 1usize << n;
    let eigvec = |mut x: usize| -> DVector<C64> {
        // Sequence index with the first copy most significant.
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            digits[i] = x % 2;
            x /= 2;
        }
        let mut v = vecs.column(digits[0]).into_owned();
        for &dg in &digits[1..] {
            v = quantum::kron_vec(&v, &vecs.column(dg).into_owned());
        }
        v
    };
    let k = 1usize << m;
    let mut iso = DMatrix::<C64>::zeros(k, big);
    for (j, &x) in order.iter().take(k).enumerate() {
        let w = eigvec(x);
        for c in 0..big {
            iso[(j, c)] = w[c].conj();
        }
    }
    let mut kraus = vec![iso.clone()];
    for &x in order.iter().skip(k) {
        let w = eigvec(x);
        let mut kx = DMatrix::<C64>::zeros(k, big);
        for c in 0..big {
            kx[(0, c)] = w[c].conj();
        }
        kraus.push(kx);
    }
    let enc = quantum::channel_from_kraus(&input, &code, &kraus)?;
    let dec = quantum::channel_from_kraus(&code, &input, &[iso.adjoint()])?;
    CompressionScheme::new(
        ChannelMat::new(input.clone(), code.clone(), enc)?,
        ChannelMat::new(code, input, dec)?,
        n,
        m,
        obit,
        "typical",
    )
}

/// Entanglement fidelity of the typical-subspace coder, equal to the square
/// of the kept mass (the fallback state is orthogonal to every discarded
/// eigenvector). For classical sources the same expression is the correlation
/// fidelity `(1 − p_err)²` of the typical-set coder.
pub fn typical_fidelity(probs: &[f64], n: usize, m: usize) -> Result<f64> {
    Ok(typical_mass(probs, n, m)?.powi(2))
}

/// `E` = discard, `D` = prepare `φ^⊗N`, with `M = 0`.
pub fn measure_prepare_scheme(phi: &StateVec, n: usize) -> Result<CompressionScheme> {
    if !phi.is_normalized() || !phi.is_pure() {
        return Err(Error::InvalidState("measure-and-prepare needs a pure state".into()));
    }
    let obit = crate::theories::TheoryModel::for_system(phi.system())?.obit();
    let block = phi.power(n)?;
    let enc = ChannelMat::discard(block.system());
    let dec = ChannelMat::prepare(&block);
    CompressionScheme::new(enc, dec, n, 0, obit, "measure_prepare")
}
