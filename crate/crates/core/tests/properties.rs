use opinfo_core::compression::{classical_error_prob, rate_search, typical_mass, SchemeFamily};
use opinfo_core::entropy::shannon;
use opinfo_core::metrics::{check_norm_monotonicity, fidelity, op_norm, op_norm_lp};
use opinfo_core::theories::random::{random_effect, rng, sample_channel, sample_state, simplex_point};
use opinfo_core::{compose_par, compose_seq, pair, SearchConfig, StateVec, SystemLabel};
use proptest::prelude::*;

fn system(quantum: bool, d: usize) -> SystemLabel {
    if quantum {
        SystemLabel::quantum(d)
    } else {
        SystemLabel::classical(d)
    }
}

fn small_system() -> impl Strategy<Value = SystemLabel> {
    (any::<bool>(), 2usize..4).prop_map(|(q, d)| system(q, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_affine_in_the_state(sys in small_system(), seed in any::<u64>(), w in 0.0f64..1.0) {
        let mut g = rng(seed);
        let (a, b) = (sample_state(&sys, &mut g).unwrap(), sample_state(&sys, &mut g).unwrap());
        let e = random_effect(&sys, &mut g).unwrap();
        let mix = StateVec::new(sys.clone(), a.coords() * w + b.coords() * (1.0 - w)).unwrap();
        let lhs = pair(&e, &mix).unwrap();
        let rhs = w * pair(&e, &a).unwrap() + (1.0 - w) * pair(&e, &b).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&lhs));
    }

    #[test]
    fn parallel_and_sequential_composition_interchange(q in any::<bool>(), seed in any::<u64>()) {
        let (x, y) = (system(q, 2), system(q, 2));
        let mut g = rng(seed);
        let a = sample_channel(&x, &x, &mut g).unwrap();
        let b = sample_channel(&y, &y, &mut g).unwrap();
        let c = sample_channel(&x, &x, &mut g).unwrap();
        let d = sample_channel(&y, &y, &mut g).unwrap();
        let lhs = compose_seq(&compose_par(&a, &b).unwrap(), &compose_par(&c, &d).unwrap()).unwrap();
        let rhs = compose_par(&compose_seq(&a, &c).unwrap(), &compose_seq(&b, &d).unwrap()).unwrap();
        prop_assert!((lhs.matrix() - rhs.matrix()).amax() < 1e-12);
    }

    #[test]
    fn channels_do_not_increase_the_norm(sys in small_system(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let delta = sample_state(&sys, &mut g).unwrap().coords() - sample_state(&sys, &mut g).unwrap().coords();
        let c = sample_channel(&sys, &sys, &mut g).unwrap();
        let r = check_norm_monotonicity(&delta, &c).unwrap();
        prop_assert!(r.holds, "{} > {}", r.after, r.before);
        prop_assert!(r.before <= 2.0 + 1e-9);
    }

    #[test]
    fn closed_form_and_lp_norms_agree(d in 2usize..5, seed in any::<u64>()) {
        let sys = SystemLabel::classical(d);
        let mut g = rng(seed);
        let delta = sample_state(&sys, &mut g).unwrap().coords() - sample_state(&sys, &mut g).unwrap().coords();
        let l1: f64 = delta.iter().map(|x| x.abs()).sum();
        prop_assert!((op_norm(&delta, &sys).unwrap() - l1).abs() < 1e-12);
        prop_assert!((op_norm_lp(&delta, &sys).unwrap() - l1).abs() < 1e-7);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(sys in small_system(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let (a, b) = (sample_state(&sys, &mut g).unwrap(), sample_state(&sys, &mut g).unwrap());
        let cfg = SearchConfig::default();
        let ab = fidelity(&a, &b, &cfg).unwrap().value;
        let ba = fidelity(&b, &a, &cfg).unwrap().value;
        prop_assert!((ab - ba).abs() < 1e-9);
        prop_assert!((-1e-12..=1.0 + 1e-9).contains(&ab));
        prop_assert!((fidelity(&a, &a, &cfg).unwrap().value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn classical_error_probability_matches_the_diagonal(d in 2usize..6, seed in any::<u64>()) {
        let sys = SystemLabel::classical(d);
        let mut g = rng(seed);
        let p = StateVec::from_slice(sys.clone(), &simplex_point(d, &mut g)).unwrap();
        let c = sample_channel(&sys, &sys, &mut g).unwrap();
        let e = classical_error_prob(&c, &p).unwrap();
        let oracle = 1.0 - (0..d).map(|i| p.coords()[i] * c.matrix()[(i, i)]).sum::<f64>();
        prop_assert!((e.value - oracle).abs() < 1e-12);
        prop_assert!(e.deviation() < 1e-12);
    }

    #[test]
    fn shannon_entropy_is_bounded_by_the_alphabet(d in 1usize..8, seed in any::<u64>()) {
        let p = simplex_point(d, &mut rng(seed));
        let h = shannon(&p).unwrap();
        prop_assert!(h >= 0.0 && h <= (d as f64).log2() + 1e-12);
    }

    #[test]
    fn typical_mass_grows_with_the_code_length(q in 0.01f64..0.5, n in 1usize..40) {
        let p = [1.0 - q, q];
        let mut last = 0.0;
        for m in 0..=n {
            let mass = typical_mass(&p, n, m).unwrap();
            prop_assert!(mass + 1e-12 >= last);
            last = mass;
        }
        prop_assert!((last - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rates_do_not_grow_with_the_error_budget(q in 0.02f64..0.5, n in 4usize..80, e1 in 0.01f64..0.5, e2 in 0.01f64..0.5) {
        let src = StateVec::from_slice(SystemLabel::classical(2), &[1.0 - q, q]).unwrap();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let tight = rate_search(&src, n, lo, SchemeFamily::Typical).unwrap();
        let loose = rate_search(&src, n, hi, SchemeFamily::Typical).unwrap();
        prop_assert!(loose.m.unwrap() <= tight.m.unwrap());
        prop_assert!(tight.fidelity.unwrap() > 1.0 - lo);
    }
}
