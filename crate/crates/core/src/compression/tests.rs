use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, DVector};

use super::coders::{ranked_sequences, typical_mass};
use super::fom::block_dilations;
use super::types::{class_mass, top_mass, type_classes, DEFAULT_CLASS_CAP};
use super::*;
use crate::metrics::DilationConfig;
use crate::opt::{ChannelMat, Ensemble, StateVec};
use crate::system::SystemLabel;
use crate::theories::decompositions::pure_decompositions;
use crate::theories::quantum;
use crate::theories::random::{random_channel, random_state, rng, simplex_point};
use crate::BoundDirection;

fn c2(p: &[f64]) -> StateVec {
    StateVec::from_slice(SystemLabel::classical(2), p).unwrap()
}

fn qubit_diag(a: f64) -> StateVec {
    let q = SystemLabel::quantum(2);
    let op = DMatrix::from_diagonal(&DVector::from_vec(vec![a.into(), (1.0 - a).into()]));
    StateVec::new(q.clone(), quantum::from_operator(&q, &op).unwrap()).unwrap()
}

fn sampling(samples: usize, seed: u64) -> FomSampling {
    FomSampling {
        dilations: DilationConfig {
            samples,
            max_ancilla: None,
            seed,
        },
        ..FomSampling::default()
    }
}

/// ln C(n, k) by direct summation.
fn ln_choose(n: usize, k: usize) -> f64 {
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// Mass of the `2^m` most probable binary sequences, from binomial
/// coefficients in floating point. Assumes `q < 1/2` is the rare letter.
fn binomial_top(q: f64, n: usize, m: usize) -> f64 {
    let mut remaining = 2f64.powi(m as i32);
    let mut kept = 0.0;
    for k in 0..=n {
        if remaining <= 0.0 {
            break;
        }
        let size = ln_choose(n, k).exp();
        let take = size.min(remaining);
        remaining -= take;
        kept += (take.ln() + k as f64 * q.ln() + (n - k) as f64 * (1.0 - q).ln()).exp();
    }
    kept
}

fn binomial_cdf(q: f64, n: usize, kmax: usize) -> f64 {
    (0..=kmax)
        .map(|k| (ln_choose(n, k) + k as f64 * q.ln() + (n - k) as f64 * (1.0 - q).ln()).exp())
        .sum()
}

fn erase_to_e0() -> ChannelMat {
    let c = SystemLabel::classical(2);
    ChannelMat::new(c.clone(), c, DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 0.0])).unwrap()
}

#[test]
fn identity_scheme_is_perfect() {
    let c = SystemLabel::classical(2);
    let s = CompressionScheme::identity(&c, 1, &c, 1).unwrap();
    let rho = c2(&[0.3, 0.7]);
    let cfg = sampling(4, 1);
    assert_eq!(pure_fom(&s, &rho, &cfg).unwrap().value, 0.0);
    assert_eq!(dilation_fom(&s, &rho, &cfg).unwrap().value, 0.0);
    assert_abs_diff_eq!(fidelity_fom(&s, &rho, &cfg).unwrap().value, 1.0, epsilon = 1e-12);
    let ens = pure_decompositions(&rho, 0, 0).unwrap().remove(0);
    assert_eq!(ensemble_fom(&s, &ens).unwrap(), 0.0);

    let q = SystemLabel::quantum(2);
    let s = CompressionScheme::identity(&q, 1, &q, 1).unwrap();
    let rho = qubit_diag(0.8);
    assert!(dilation_fom(&s, &rho, &cfg).unwrap().value < 1e-12);
    assert_abs_diff_eq!(fidelity_fom(&s, &rho, &cfg).unwrap().value, 1.0, epsilon = 1e-9);
}

#[test]
fn erase_scheme_ensemble_value() {
    let c = SystemLabel::classical(2);
    let s = CompressionScheme::new(erase_to_e0(), ChannelMat::identity(&c), 1, 1, c.clone(), "erase").unwrap();
    let ens = Ensemble::new(vec![c2(&[0.5, 0.0]), c2(&[0.0, 0.5])]).unwrap();
    // Member deviations in ℓ1: 0 and ‖(0.5,0) − (0,0.5)‖ = 1.
    let oracle = 0.0 + (0.5f64 + 0.5);
    assert_abs_diff_eq!(ensemble_fom(&s, &ens).unwrap(), oracle, epsilon = 1e-12);
}

#[test]
fn pure_fom_classical_is_unique_decomposition() {
    let c = SystemLabel::classical(2);
    let s = CompressionScheme::new(erase_to_e0(), ChannelMat::identity(&c), 1, 1, c.clone(), "erase").unwrap();
    let rho = c2(&[0.6, 0.4]);
    let dec = pure_decompositions(&rho, 0, 0).unwrap().remove(0);
    let r = pure_fom(&s, &rho, &sampling(0, 0)).unwrap();
    assert_eq!(r.bound, BoundDirection::Lower);
    assert_abs_diff_eq!(r.value, ensemble_fom(&s, &dec).unwrap(), epsilon = 1e-12);
}

#[test]
fn pure_fom_dominates_coarse_refinements() {
    for trial in 0..20u64 {
        let c = SystemLabel::classical(2);
        let enc = random_channel(&c, &c, trial).unwrap();
        let dec = random_channel(&c, &c, trial + 100).unwrap();
        let s = CompressionScheme::new(enc, dec, 1, 1, c.clone(), "random").unwrap();
        let rho = random_state(&c, trial + 200).unwrap();
        let fine = pure_decompositions(&rho, 0, 0).unwrap().remove(0);
        let coarse = fine.coarse_grain(&[vec![0, 1]]).unwrap();
        assert!(ensemble_fom(&s, &coarse).unwrap() <= ensemble_fom(&s, &fine).unwrap() + 1e-9);
    }
}

#[test]
fn depolarizing_scheme_fidelity() {
    let q = SystemLabel::quantum(2);
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = 1.0;
    let dep = ChannelMat::new(q.clone(), q.clone(), m).unwrap();
    let s = CompressionScheme::new(dep, ChannelMat::identity(&q), 1, 1, q.clone(), "depolarize").unwrap();
    // Bell state against (I/2 ⊗ I/2): ⟨Φ|I/4|Φ⟩ = 1/4.
    let oracle = 0.25;
    let r = fidelity_fom(&s, &qubit_diag(0.5), &sampling(2, 0)).unwrap();
    assert_abs_diff_eq!(r.value, oracle, epsilon = 1e-9);
    assert_eq!(r.bound, BoundDirection::Exact);
}

#[test]
fn error_probability_forms() {
    let c = SystemLabel::classical(2);
    let p = c2(&[0.5, 0.5]);
    assert_eq!(classical_error_prob(&ChannelMat::identity(&c), &p).unwrap().value, 0.0);
    // C₀₀ = 1, C₁₁ = 0.
    let oracle = 1.0 - (1.0 * 0.5 + 0.0 * 0.5);
    assert_abs_diff_eq!(classical_error_prob(&erase_to_e0(), &p).unwrap().value, oracle, epsilon = 1e-15);

    let mut worst: f64 = 0.0;
    for trial in 0..1000u64 {
        let d = 2 + (trial % 4) as usize;
        let sys = SystemLabel::classical(d);
        let ch = random_channel(&sys, &sys, trial).unwrap();
        let p = random_state(&sys, trial + 5000).unwrap();
        worst = worst.max(classical_error_prob(&ch, &p).unwrap().deviation());
    }
    assert!(worst < 1e-12, "{worst}");
    assert!(classical_error_prob(&erase_to_e0(), &StateVec::from_slice(SystemLabel::classical(3), &[1.0, 0.0, 0.0]).unwrap()).is_err());
}

#[test]
fn typical_set_error_edges() {
    assert_eq!(typical_set_error(&[1.0, 0.0], 20, 0).unwrap(), 0.0);
    assert_eq!(typical_set_error(&[0.89, 0.11], 20, 20).unwrap(), 0.0);
    assert_eq!(typical_set_error(&[0.2, 0.3, 0.5], 4, 7).unwrap(), 0.0);
    assert!(typical_set_error(&[0.5, 0.5], 4, 5).is_err());
}

#[test]
fn typical_set_error_thresholds() {
    let probs = [0.89, 0.11];
    let at_550 = 1.0 - binomial_top(0.11, 1000, 550);
    let at_450 = 1.0 - binomial_top(0.11, 1000, 450);
    let e550 = typical_set_error(&probs, 1000, 550).unwrap();
    let e450 = typical_set_error(&probs, 1000, 450).unwrap();
    assert_abs_diff_eq!(e550, at_550, epsilon = 1e-9);
    assert_abs_diff_eq!(e450, at_450, epsilon = 1e-9);
    assert!(at_550 < 0.05 && e550 < 0.05, "{e550}");
    assert!(at_450 > 0.5 && e450 > 0.5, "{e450}");
}

#[test]
fn typical_mass_examples() {
    assert_eq!(typical_mass(&[0.9, 0.1], 10, 10).unwrap(), 1.0);
    assert_abs_diff_eq!(typical_mass(&[1.0, 0.0], 10, 0).unwrap(), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(typical_mass(&[1.0, 0.0], 10, 3).unwrap(), 1.0, epsilon = 1e-15);

    // All 56 sequences with at most two rare slots.
    let classes = type_classes(&[0.9, 0.1], 10, DEFAULT_CLASS_CAP).unwrap();
    let whole = class_mass(&classes, |c| c[1] <= 2);
    let oracle = binomial_cdf(0.1, 10, 2);
    assert_abs_diff_eq!(whole, oracle, epsilon = 1e-12);
    assert_abs_diff_eq!(oracle, 0.9298, epsilon = 5e-5);
    // The 2⁶ = 64 kept slots also take 8 of the 3-rare sequences.
    let top = top_mass(&classes, 6).kept;
    assert_abs_diff_eq!(top, binomial_top(0.1, 10, 6), epsilon = 1e-12);
    assert_abs_diff_eq!(top, oracle + 8.0 * 0.9f64.powi(7) * 0.1f64.powi(3), epsilon = 1e-12);
}

#[test]
fn ranked_sequences_tie_break() {
    let order = ranked_sequences(&[0.5, 0.5], 3);
    assert_eq!(order, (0..8).collect::<Vec<_>>());
    let order = ranked_sequences(&[0.3, 0.7], 2);
    assert_eq!(order, vec![3, 1, 2, 0]);
}

#[test]
fn explicit_typical_set_matches_exact_error() {
    let p = c2(&[0.8, 0.2]);
    for m in 0..=6 {
        let s = typical_set_scheme(&p, 6, m).unwrap();
        let block = p.power(6).unwrap();
        let e = classical_error_prob(s.channel(), &block).unwrap().value;
        assert_abs_diff_eq!(e, typical_set_error(&[0.8, 0.2], 6, m).unwrap(), epsilon = 1e-12);
        let f = fidelity_fom(&s, &p, &sampling(2, m as u64)).unwrap().value;
        assert_abs_diff_eq!(f, typical_fidelity(&[0.8, 0.2], 6, m).unwrap(), epsilon = 1e-9);
    }
}

#[test]
fn explicit_typical_subspace_fidelity() {
    let rho = qubit_diag(0.85);
    for (n, m) in [(2, 1), (3, 1), (3, 2), (3, 3)] {
        let s = typical_subspace_scheme(&rho, n, m).unwrap();
        let mass = typical_mass(&[0.85, 0.15], n, m).unwrap();
        let r = fidelity_fom(&s, &rho, &sampling(2, 3)).unwrap();
        assert_abs_diff_eq!(r.value, mass * mass, epsilon = 1e-9);
    }
    assert!(typical_subspace_scheme(&rho, 2, 3).is_err());
}

#[test]
fn measure_prepare_is_exact_on_pure_sources() {
    let e0 = c2(&[1.0, 0.0]);
    let s = measure_prepare_scheme(&e0, 3).unwrap();
    assert_eq!(s.m(), 0);
    let cfg = sampling(6, 11);
    for d in block_dilations(&s, &e0, &cfg.dilations).unwrap() {
        for dec in pure_decompositions(d.joint(), 2, 5).unwrap() {
            assert!(ensemble_fom(&s, &dec).unwrap() < 1e-12);
        }
    }

    let ket0 = qubit_diag(1.0);
    let s = measure_prepare_scheme(&ket0, 2).unwrap();
    let r = pure_fom(&s, &ket0, &sampling(4, 2)).unwrap();
    assert!(r.value < 1e-12, "{}", r.value);
    assert!(r.decompositions > 0);

    assert!(measure_prepare_scheme(&c2(&[0.5, 0.5]), 2).is_err());
    assert!(measure_prepare_scheme(&qubit_diag(0.7), 1).is_err());
}

#[test]
fn product_of_identities() {
    let c = SystemLabel::classical(2);
    let id = CompressionScheme::identity(&c, 1, &c, 1).unwrap();
    let p = product_scheme(&id, &id).unwrap();
    let joint = c.compose(&c).unwrap();
    assert_eq!(p.input(), &joint);
    assert_eq!(p.m(), 2);
    assert_eq!(p.channel().matrix(), ChannelMat::identity(&joint).matrix());
}

#[test]
fn product_subadditivity() {
    let c = SystemLabel::classical(2);
    let mut g = rng(7);
    for trial in 0..100u64 {
        let mk = |seed: u64| {
            CompressionScheme::new(
                random_channel(&c, &c, seed).unwrap(),
                random_channel(&c, &c, seed + 1).unwrap(),
                1,
                1,
                c.clone(),
                "random",
            )
            .unwrap()
        };
        let (s1, s2) = (mk(3 * trial), mk(3 * trial + 1000));
        let prod = product_scheme(&s1, &s2).unwrap();
        let a = c2(&simplex_point(2, &mut g));
        let b = c2(&simplex_point(2, &mut g));
        let (ea, eb) = (
            pure_decompositions(&a, 0, 0).unwrap().remove(0),
            pure_decompositions(&b, 0, 0).unwrap().remove(0),
        );
        let joint: Vec<StateVec> = ea
            .members()
            .iter()
            .flat_map(|x| eb.members().iter().map(move |y| (x.clone(), y.clone())))
            .map(|(x, y)| crate::opt::compose_par(&x, &y).unwrap())
            .collect();
        let ej = Ensemble::new(joint).unwrap();
        let lhs = ensemble_fom(&prod, &ej).unwrap();
        let rhs = ensemble_fom(&s1, &ea).unwrap() + ensemble_fom(&s2, &eb).unwrap();
        assert!(lhs <= rhs + 1e-9, "trial {trial}: {lhs} > {rhs}");
    }
}

#[test]
fn bit_flip_conjugation() {
    let c = SystemLabel::classical(2);
    let flip = ChannelMat::new(c.clone(), c.clone(), DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
    let s = typical_set_scheme(&c2(&[0.7, 0.3]), 3, 2).unwrap();
    let t = conjugate_scheme(&s, &flip, &flip).unwrap();
    let rho = c2(&[0.3, 0.7]);
    let flipped = flip.apply(&rho).unwrap();
    let cfg = sampling(3, 9);
    // The flipped ensembles of ρ^⊗3 are those of the flipped source.
    let src = rho.power(3).unwrap();
    let ens = pure_decompositions(&src, 0, 0).unwrap().remove(0);
    let flip3 = crate::opt::compose_par(&crate::opt::compose_par(&flip, &flip).unwrap(), &flip).unwrap();
    let ens_f = Ensemble::new(ens.members().iter().map(|m| flip3.apply(m).unwrap()).collect()).unwrap();
    assert_abs_diff_eq!(ensemble_fom(&t, &ens).unwrap(), ensemble_fom(&s, &ens_f).unwrap(), epsilon = 1e-9);
    assert_abs_diff_eq!(
        dilation_fom(&t, &rho, &cfg).unwrap().value,
        dilation_fom(&s, &flipped, &cfg).unwrap().value,
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(
        fidelity_fom(&t, &rho, &cfg).unwrap().value,
        fidelity_fom(&s, &flipped, &cfg).unwrap().value,
        epsilon = 1e-9
    );
    assert!(conjugate_scheme(&s, &erase_to_e0(), &flip).is_err());
}

#[test]
fn rate_search_examples() {
    let r = rate_search(&qubit_diag(1.0), 5, 0.01, SchemeFamily::MeasurePrepare).unwrap();
    assert_eq!(r.m, Some(0));
    let r = rate_search(&c2(&[1.0, 0.0]), 50, 0.01, SchemeFamily::Typical).unwrap();
    assert_eq!(r.m, Some(0));
    assert_eq!(rate_search(&qubit_diag(0.7), 5, 0.01, SchemeFamily::MeasurePrepare).unwrap().m, None);

    let src = c2(&[0.89, 0.11]);
    let r = rate_search(&src, 1000, 0.05, SchemeFamily::Typical).unwrap();
    let rate = r.rate().unwrap();
    assert!((0.47..=0.56).contains(&rate), "{rate}");
    // The returned M is the first one the oracle accepts.
    let m = r.m.unwrap();
    assert!(binomial_top(0.11, 1000, m).powi(2) > 0.95);
    assert!(binomial_top(0.11, 1000, m - 1).powi(2) <= 0.95);

    assert!(rate_search(&src, 100, 0.0, SchemeFamily::Typical).is_err());
    assert!(rate_search(&qubit_diag(0.9), 15, 0.1, SchemeFamily::Typical).is_err());
}

#[test]
fn rate_monotone_in_epsilon() {
    let src = c2(&[0.8, 0.2]);
    let mut last = usize::MAX;
    for eps in [0.001, 0.01, 0.05, 0.1, 0.3, 0.6] {
        let m = rate_search(&src, 200, eps, SchemeFamily::Typical).unwrap().m.unwrap();
        assert!(m <= last);
        last = m;
    }
}

#[test]
fn projective_family_agrees_with_typical() {
    let rho = qubit_diag(0.9);
    for n in [4, 8, 12] {
        for eps in [0.05, 0.1, 0.2] {
            let a = rate_search(&rho, n, eps, SchemeFamily::Typical).unwrap();
            let b = rate_search(&rho, n, eps, SchemeFamily::AllProjective).unwrap();
            assert_eq!(a.m, b.m, "n={n} eps={eps}");
        }
    }
    assert_eq!("all-projective".parse::<SchemeFamily>().unwrap(), SchemeFamily::AllProjective);
    assert!("huffman".parse::<SchemeFamily>().is_err());
}

#[test]
fn info_content_tables() {
    let t = estimate_info_content(&qubit_diag(1.0), &[2, 4, 8], &[0.05, 0.1], SchemeFamily::Typical).unwrap();
    assert!(t.rows.iter().all(|r| r.m == Some(0)));
    assert_eq!(t.estimate, Some(0.0));

    let t = estimate_info_content(&c2(&[0.89, 0.11]), &[100, 200, 500, 1000], &[0.05], SchemeFamily::Typical).unwrap();
    let h = -(0.11f64 * 0.11f64.log2() + 0.89 * 0.89f64.log2());
    assert!((t.estimate.unwrap() - h).abs() <= 0.06, "{:?}", t.estimate);
    let rates: Vec<f64> = t.rows.iter().map(|r| r.rate().unwrap()).collect();
    assert!(rates.windows(2).all(|w| w[1] <= w[0]), "{rates:?}");
    assert!(estimate_info_content(&c2(&[0.5, 0.5]), &[], &[0.1], SchemeFamily::Typical).is_err());
}
