//! Pure-state decompositions of a normalized state.

use nalgebra::{DVector, Matrix3, Vector3};
use num_complex::Complex64 as C64;

use super::random::{random_unitary, rng};
use super::{quantum, squit};
use crate::error::{Error, Result};
use crate::opt::{Ensemble, StateVec};
use crate::optim::nelder_mead::nelder_mead;
use crate::system::{SystemLabel, TheoryId};

const WEIGHT_EPS: f64 = 1e-14;

/// Pure decompositions of `rho`.
///
/// Classical states have exactly one. Quantum states return the
/// eigendecomposition followed by `budget` decompositions obtained by mixing
/// the weighted eigenvectors with random isometries. A single squit returns
/// every corner decomposition supported on at most three corners, followed by
/// up to `budget` interior points of the one-parameter corner family and the
/// entropy-minimizing point found by a local search along it.
pub fn pure_decompositions(rho: &StateVec, budget: usize, seed: u64) -> Result<Vec<Ensemble>> {
    if !rho.is_normalized() || !super::state_in_cone(rho.system(), rho.coords(), 1e-9)? {
        return Err(Error::InvalidState(
            "pure decompositions need a normalized state".into(),
        ));
    }
    let sys = rho.system();
    match sys.theory() {
        TheoryId::Classical => {
            let members = rho
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > WEIGHT_EPS)
                .map(|(i, &p)| {
                    let mut v = DVector::zeros(sys.dim());
                    v[i] = p;
                    StateVec::new_unchecked(sys.clone(), v)
                })
                .collect();
            Ok(vec![Ensemble::new(members)?])
        }
        TheoryId::Quantum => quantum_decompositions(rho, budget, seed),
        TheoryId::Boxworld if sys == &SystemLabel::squit() => squit_decompositions(rho, budget),
        TheoryId::Boxworld => Err(Error::Unsupported(format!(
            "pure decompositions on composite {sys}"
        ))),
    }
}

fn quantum_decompositions(rho: &StateVec, budget: usize, seed: u64) -> Result<Vec<Ensemble>> {
    let sys = rho.system();
    let op = quantum::to_operator(sys, rho.coords())?;
    let (vals, vecs) = quantum::hermitian_eigen(&op);
    // Columns √λ_k v_k of the support.
    let support: Vec<DVector<C64>> = vals
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > WEIGHT_EPS)
        .map(|(k, &l)| vecs.column(k) * C64::new(l.sqrt(), 0.0))
        .collect();
    let r = support.len();
    let from_kets = |kets: Vec<DVector<C64>>| -> Result<Ensemble> {
        let members = kets
            .into_iter()
            .filter(|k| k.norm_squared() > WEIGHT_EPS)
            .map(|k| Ok(StateVec::new_unchecked(sys.clone(), quantum::from_operator(sys, &quantum::projector(&k))?)))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(members)
    };
    let mut out = vec![from_kets(support.clone())?];
    let mut g = rng(seed);
    for i in 0..budget {
        // Members Σ_k U_{jk} √λ_k v_k for the first rows of a unitary of size m ≥ r.
        let m = r + i % 3;
        let u = random_unitary(m, &mut g);
        let kets = (0..m)
            .map(|j| {
                let mut k = DVector::<C64>::zeros(support[0].len());
                for (c, s) in support.iter().enumerate() {
                    k += s * u[(j, c)];
                }
                k
            })
            .collect();
        out.push(from_kets(kets)?);
    }
    Ok(out)
}

/// Corner weights `w(t) = base + t·(1, −1, 1, −1)` reproducing `(x, y)`.
pub(crate) fn squit_corner_line(x: f64, y: f64) -> (Vec<f64>, f64, f64) {
    // Particular solution with w₂ = 0, then the feasible t-interval.
    let a = Matrix3::new(1.0, -1.0, 1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 1.0);
    let (c0, c1, c3) = (squit::CORNERS[0], squit::CORNERS[1], squit::CORNERS[3]);
    debug_assert_eq!((c0.0, c1.0, c3.0), (1.0, -1.0, 1.0));
    let sol = a.lu().solve(&Vector3::new(x, y, 1.0)).expect("corner matrix is invertible");
    let base = vec![sol[0], sol[1], 0.0, sol[2]];
    let dir = [1.0, -1.0, 1.0, -1.0];
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (b, d) in base.iter().zip(dir) {
        // b + t d ≥ 0
        if d > 0.0 {
            lo = lo.max(-b / d);
        } else {
            hi = hi.min(-b / d);
        }
    }
    (base, lo, hi)
}

fn squit_decompositions(rho: &StateVec, budget: usize) -> Result<Vec<Ensemble>> {
    let sys = rho.system();
    let (x, y) = (rho.coords()[squit::X], rho.coords()[squit::Y]);
    let (base, lo, hi) = squit_corner_line(x, y);
    let at = |t: f64| -> Vec<f64> {
        base.iter()
            .zip([1.0, -1.0, 1.0, -1.0])
            .map(|(b, d)| (b + t * d).max(0.0))
            .collect()
    };
    let build = |w: &[f64]| -> Result<Ensemble> {
        let members = w
            .iter()
            .zip(squit::CORNERS)
            .filter(|(wi, _)| **wi > WEIGHT_EPS)
            .map(|(wi, (cx, cy))| StateVec::new_unchecked(sys.clone(), squit::state(cx, cy) * *wi))
            .collect();
        Ensemble::new(members)
    };
    let mut ts = vec![lo, hi];
    if hi - lo > 1e-12 {
        for i in 0..budget {
            ts.push(lo + (hi - lo) * (i as f64 + 0.5) / budget as f64);
        }
        let mut f = |p: &[f64]| {
            let t = p[0];
            if t < lo || t > hi {
                return f64::INFINITY;
            }
            crate::entropy::shannon_unchecked(&at(t))
        };
        let local = nelder_mead(&mut f, &[0.5 * (lo + hi)], 0.25 * (hi - lo), 200, 1e-14);
        ts.push(local.x[0].clamp(lo, hi));
    } else {
        ts.truncate(1);
    }
    ts.iter().map(|&t| build(&at(t))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theories::is_pure;

    #[test]
    fn classical_unique() {
        let s = StateVec::from_slice(SystemLabel::classical(2), &[0.9, 0.1]).unwrap();
        let d = pure_decompositions(&s, 5, 0).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].weights(), vec![0.9, 0.1]);
    }

    #[test]
    fn qubit_eigendecomposition_first() {
        let sys = SystemLabel::quantum(2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = StateVec::from_slice(sys, &[h, 0.0, 0.0, 0.8 * h]).unwrap();
        let d = pure_decompositions(&s, 20, 1).unwrap();
        assert_eq!(d.len(), 21);
        let w = d[0].weights();
        assert!((w[0] - 0.9).abs() < 1e-12 && (w[1] - 0.1).abs() < 1e-12);
        for e in &d {
            assert!(e.residual_to(&s).unwrap() < 1e-12);
            for m in e.members() {
                let n = m.normalized().unwrap();
                assert!(is_pure(n.system(), n.coords(), 1e-9).unwrap());
            }
        }
    }

    #[test]
    fn squit_center_has_opposite_corners() {
        let s = StateVec::new(SystemLabel::squit(), squit::state(0.0, 0.0)).unwrap();
        let d = pure_decompositions(&s, 4, 0).unwrap();
        let found = d.iter().any(|e| {
            e.len() == 2
                && e.weights().iter().all(|w| (w - 0.5).abs() < 1e-12)
                && e.members().iter().any(|m| (m.coords()[0] - 0.5).abs() < 1e-12 && (m.coords()[1] - 0.5).abs() < 1e-12)
        });
        assert!(found);
        for e in &d {
            assert!(e.residual_to(&s).unwrap() < 1e-12);
        }
    }

    #[test]
    fn squit_corner_line_reproduces_state() {
        for (x, y) in [(0.3, -0.7), (1.0, 1.0), (-0.2, 0.9)] {
            let (base, lo, hi) = squit_corner_line(x, y);
            assert!(lo <= hi + 1e-12);
            for t in [lo, hi] {
                let (mut sx, mut sy, mut sn) = (0.0, 0.0, 0.0);
                for (b, (c, d)) in base.iter().zip(squit::CORNERS.iter().zip([1.0, -1.0, 1.0, -1.0])) {
                    let w = b + t * d;
                    assert!(w >= -1e-12);
                    sx += w * c.0;
                    sy += w * c.1;
                    sn += w;
                }
                assert!((sx - x).abs() < 1e-12 && (sy - y).abs() < 1e-12 && (sn - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mixed_input_required_normalized() {
        let s = StateVec::from_slice(SystemLabel::classical(2), &[0.3, 0.3]).unwrap();
        assert!(pure_decompositions(&s, 1, 0).is_err());
    }
}
