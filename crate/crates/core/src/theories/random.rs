//! Seeded samplers for states, effects and channels.
//!
//! All samplers draw from a ChaCha stream, so a seed fixes the output bit for
//! bit on every platform.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::{quantum, squit};
use crate::error::{Error, Result};
use crate::opt::{ChannelMat, EffectVec, StateVec};
use crate::system::{SystemLabel, TheoryId};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample from the probability simplex.
pub fn simplex_point<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random unitary via QR with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<C64> {
    let g = complex_gaussian(n, n, rng);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Random normalized pure vector.
pub fn random_ket<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<C64> {
    let g = complex_gaussian(n, 1, rng).column(0).into_owned();
    let norm = g.norm();
    g / C64::new(norm, 0.0)
}

/// Random normalized state (full support in the quantum case).
pub fn sample_state<R: Rng + ?Sized>(sys: &SystemLabel, rng: &mut R) -> Result<StateVec> {
    let coords = match sys.theory() {
        TheoryId::Quantum => {
            let n = sys.hilbert_dim().unwrap_or(1);
            let g = complex_gaussian(n, n, rng);
            let rho = &g * g.adjoint();
            let tr = rho.trace().re;
            quantum::from_operator(sys, &rho.map(|z| z / tr))?
        }
        TheoryId::Boxworld if sys.squit_count() > 0 => {
            let blocks = squit::blocks(sys);
            let w = simplex_point(blocks.len(), rng);
            let mut v = DVector::zeros(sys.dim());
            for (b, wi) in blocks.iter().zip(w) {
                v[b[squit::X]] = wi * rng.random_range(-1.0..=1.0);
                v[b[squit::Y]] = wi * rng.random_range(-1.0..=1.0);
                v[b[squit::N]] = wi;
            }
            v
        }
        _ => DVector::from_vec(simplex_point(sys.dim(), rng)),
    };
    StateVec::new(sys.clone(), coords)
}

/// Random pure normalized state.
pub fn sample_pure_state<R: Rng + ?Sized>(sys: &SystemLabel, rng: &mut R) -> Result<StateVec> {
    match sys.theory() {
        TheoryId::Quantum => {
            let n = sys.hilbert_dim().unwrap_or(1);
            let psi = random_ket(n, rng);
            StateVec::new(sys.clone(), quantum::from_operator(sys, &quantum::projector(&psi))?)
        }
        _ => {
            let ext = super::extremal_states(sys).expect("polytopic system");
            let i = rng.random_range(0..ext.len());
            StateVec::new(sys.clone(), ext[i].clone())
        }
    }
}

pub fn random_state(sys: &SystemLabel, seed: u64) -> Result<StateVec> {
    sample_state(sys, &mut rng(seed))
}

/// Random effect inside the effect set.
pub fn random_effect<R: Rng + ?Sized>(sys: &SystemLabel, rng: &mut R) -> Result<EffectVec> {
    let coords = match sys.theory() {
        TheoryId::Quantum => {
            let n = sys.hilbert_dim().unwrap_or(1);
            let u = random_unitary(n, rng);
            let d = DMatrix::from_diagonal(&DVector::from_fn(n, |_, _| {
                C64::new(rng.random_range(0.0..=1.0), 0.0)
            }));
            quantum::from_operator(sys, &(&u * d * u.adjoint()))?
        }
        TheoryId::Boxworld if sys.squit_count() > 0 => {
            let mut v = DVector::zeros(sys.dim());
            for b in squit::blocks(sys) {
                let g: f64 = rng.random_range(0.0..=1.0);
                let r = g.min(1.0 - g) * rng.random_range(0.0..=1.0);
                let t: f64 = rng.random_range(0.0..=1.0);
                let sa = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                let sb = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                v[b[squit::X]] = sa * r * t;
                v[b[squit::Y]] = sb * r * (1.0 - t);
                v[b[squit::N]] = g;
            }
            v
        }
        _ => DVector::from_fn(sys.dim(), |_, _| rng.random_range(0.0..=1.0)),
    };
    EffectVec::new(sys.clone(), coords)
}

/// Random deterministic channel `input → output`.
pub fn sample_channel<R: Rng + ?Sized>(
    input: &SystemLabel,
    output: &SystemLabel,
    rng: &mut R,
) -> Result<ChannelMat> {
    match (input.theory(), output.theory()) {
        (TheoryId::Quantum, TheoryId::Quantum) => {
            let (nin, nout) = (input.hilbert_dim().unwrap(), output.hilbert_dim().unwrap());
            let k = rng.random_range(1..=3usize);
            let a: Vec<DMatrix<C64>> = (0..k).map(|_| complex_gaussian(nout, nin, rng)).collect();
            let mut s = DMatrix::<C64>::zeros(nin, nin);
            for ai in &a {
                s += ai.adjoint() * ai;
            }
            let s_inv_sqrt = quantum::hermitian_fn(&s, |x| 1.0 / x.max(1e-300).sqrt());
            let kraus: Vec<DMatrix<C64>> = a.iter().map(|ai| ai * &s_inv_sqrt).collect();
            let m = quantum::channel_from_kraus(input, output, &kraus)?;
            ChannelMat::new(input.clone(), output.clone(), m)
        }
        (TheoryId::Classical, t) if t != TheoryId::Quantum => {
            let cols: Vec<DVector<f64>> = (0..input.dim())
                .map(|_| sample_state(output, rng).map(StateVec::into_coords))
                .collect::<Result<_>>()?;
            ChannelMat::new(input.clone(), output.clone(), DMatrix::from_columns(&cols))
        }
        (TheoryId::Boxworld, TheoryId::Boxworld)
            if input == &SystemLabel::squit() && output == &SystemLabel::squit() =>
        {
            // Convex mixture of square symmetries and preparations.
            let w = simplex_point(3, rng);
            let sym = dihedral(rng.random_range(0..8));
            let sym2 = dihedral(rng.random_range(0..8));
            let target = sample_state(output, rng)?;
            let mut prep = DMatrix::zeros(3, 3);
            prep.set_column(squit::N, target.coords());
            let m = sym * w[0] + sym2 * w[1] + prep * w[2];
            ChannelMat::new(input.clone(), output.clone(), m)
        }
        _ => Err(Error::Unsupported(format!(
            "random channel {input} → {output}"
        ))),
    }
}

pub fn random_channel(input: &SystemLabel, output: &SystemLabel, seed: u64) -> Result<ChannelMat> {
    sample_channel(input, output, &mut rng(seed))
}

/// The eight symmetries of the square acting on `(x, y, n)`.
pub fn dihedral(k: usize) -> DMatrix<f64> {
    let (sx, sy) = match k % 4 {
        0 => (1.0, 1.0),
        1 => (-1.0, 1.0),
        2 => (1.0, -1.0),
        _ => (-1.0, -1.0),
    };
    if k < 4 {
        DMatrix::from_row_slice(3, 3, &[sx, 0.0, 0.0, 0.0, sy, 0.0, 0.0, 0.0, 1.0])
    } else {
        DMatrix::from_row_slice(3, 3, &[0.0, sx, 0.0, sy, 0.0, 0.0, 0.0, 0.0, 1.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theories::state_in_cone;

    #[test]
    fn same_seed_same_state() {
        for sys in [SystemLabel::classical(3), SystemLabel::quantum(2), SystemLabel::squit()] {
            let a = random_state(&sys, 42).unwrap();
            let b = random_state(&sys, 42).unwrap();
            assert_eq!(a.coords().as_slice(), b.coords().as_slice());
        }
    }

    #[test]
    fn classical_samples_are_states() {
        let sys = SystemLabel::classical(4);
        let mut r = rng(7);
        for _ in 0..10_000 {
            let s = sample_state(&sys, &mut r).unwrap();
            assert!(state_in_cone(&sys, s.coords(), 1e-12).unwrap());
            assert!(s.is_normalized());
        }
    }

    #[test]
    fn quantum_channel_samples_pass_choi_check() {
        let q = SystemLabel::quantum(2);
        let mut r = rng(11);
        for _ in 0..1000 {
            let c = sample_channel(&q, &q, &mut r).unwrap();
            assert!(c.violation().unwrap() < 1e-9);
            assert!(c.is_deterministic());
        }
    }

    #[test]
    fn squit_effects_and_channels_are_valid() {
        let s = SystemLabel::squit();
        let mut r = rng(3);
        for _ in 0..500 {
            let e = random_effect(&s, &mut r).unwrap();
            assert!(e.violation() <= 1e-12);
            let c = sample_channel(&s, &s, &mut r).unwrap();
            assert!(c.is_deterministic());
        }
    }
}
