//! Acceptance checks, one line per criterion. Exits nonzero when any fails.

use std::time::{Duration, Instant};

use opinfo_core::compression::fom::block_dilations;
use opinfo_core::compression::{
    ensemble_fom, estimate_info_content, measure_prepare_scheme, rate_search, typical_set_error,
    SchemeFamily,
};
use opinfo_core::entropy::{ic_lower_bound, obit_dim_log, own_decomposition_information};
use opinfo_core::metrics::DilationConfig;
use opinfo_core::nalgebra::{DMatrix, DVector};
use opinfo_core::num_complex::Complex64 as C64;
use opinfo_core::theories::random::{rng, sample_state};
use opinfo_core::theories::{pure_decompositions, quantum};
use opinfo_core::verify::{run_suite, SuiteReport, VerifyConfig};
use opinfo_core::{StateVec, SystemLabel, TheoryModel};

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn h2(p: f64) -> f64 {
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

fn ln_choose(n: usize, k: usize) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// Mass outside the `2^m` most probable binary sequences when `q` is the
/// probability of the rare letter, accumulated from binomial coefficients.
fn binomial_discarded(q: f64, n: usize, m: usize) -> f64 {
    let mut room = 2f64.powi(m as i32);
    let mut discarded = 0.0;
    for k in 0..=n {
        let size = ln_choose(n, k).exp();
        let kept = size.min(room);
        room -= kept;
        let rest = size - kept;
        if rest > 0.0 {
            discarded += (rest.ln() + k as f64 * q.ln() + (n - k) as f64 * (1.0 - q).ln()).exp();
        }
    }
    discarded
}

fn c2(p: &[f64]) -> StateVec {
    StateVec::from_slice(SystemLabel::classical(p.len()), p).unwrap()
}

fn qubit_diag(a: f64) -> StateVec {
    let q = SystemLabel::quantum(2);
    let op = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(a, 0.0), C64::new(1.0 - a, 0.0)]));
    StateVec::new(q.clone(), quantum::from_operator(&q, &op).unwrap()).unwrap()
}

fn suite(name: &str, trials: usize) -> SuiteReport {
    let cfg = VerifyConfig {
        seed: 2024,
        trials: Some(trials),
        ..VerifyConfig::default()
    };
    run_suite(name, &cfg).expect("suite runs")
}

fn suite_outcome(r: &SuiteReport) -> Outcome {
    ok(
        r.passed(),
        format!("{} checks, {} violations, worst residual {:.3e}", r.trials, r.violations, r.worst_residual),
    )
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let mut o = f();
    let el = t.elapsed();
    o.detail = format!("{} ({:.2} s)", o.detail, el.as_secs_f64());
    if let Some(l) = limit {
        if el > l {
            o.pass = false;
            o.detail += &format!(", over the {:.0} s budget", l.as_secs_f64());
        }
    }
    o
}

fn shannon_rate() -> Outcome {
    let h = h2(0.11);
    if (h - 0.4999).abs() > 5e-5 {
        return ok(false, format!("H2(0.11) = {h:.4}"));
    }
    let r = rate_search(&c2(&[0.89, 0.11]), 1000, 0.05, SchemeFamily::Typical).unwrap();
    let rate = r.rate().unwrap_or(f64::NAN);
    ok((0.47..=0.56).contains(&rate), format!("H2 = {h:.4}, rate {rate:.3} in [0.47, 0.56]"))
}

fn shannon_converse() -> Outcome {
    let oracle = binomial_discarded(0.11, 1000, 450);
    let e = typical_set_error(&[0.89, 0.11], 1000, 450).unwrap();
    ok(
        oracle > 0.5 && e > 0.5 && (e - oracle).abs() < 1e-9,
        format!("error {e:.4} (binomial oracle {oracle:.4}) > 0.5"),
    )
}

fn schumacher_trend() -> Outcome {
    let s = h2(0.1);
    let rho = qubit_diag(0.9);
    let ns = [8, 10, 12, 14];
    let table = estimate_info_content(&rho, &ns, &[0.1], SchemeFamily::Typical).unwrap();
    let rates: Vec<f64> = table.rows.iter().map(|r| r.rate().unwrap_or(f64::NAN)).collect();
    let monotone = rates.windows(2).all(|w| w[1] <= w[0]);
    let last = rates[rates.len() - 1];
    let within = (last - 0.47).abs() <= 0.15;
    ok(
        monotone && within && (s - 0.4690).abs() < 5e-5,
        format!(
            "S = {s:.4}, rates {:?}, nonincreasing {monotone}, N=14 rate {last:.4} within 0.47 +/- 0.15: {within}",
            rates.iter().map(|r| (r * 1e4).round() / 1e4).collect::<Vec<_>>()
        ),
    )
}

fn zero_rate_pure() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut counts = Vec::new();
    let mut rates_zero = true;
    for (src, n, samples, budget) in [(c2(&[1.0, 0.0]), 3, 110, 0), (qubit_diag(1.0), 2, 30, 4)] {
        let s = measure_prepare_scheme(&src, n).unwrap();
        let dil = block_dilations(
            &s,
            &src,
            &DilationConfig {
                samples,
                max_ancilla: None,
                seed: 5,
            },
        )
        .unwrap();
        let mut count = 0;
        for (i, d) in dil.iter().enumerate() {
            for dec in pure_decompositions(d.joint(), budget, i as u64).unwrap() {
                worst = worst.max(ensemble_fom(&s, &dec).unwrap());
                count += 1;
            }
        }
        counts.push(count);
        for fam in [SchemeFamily::MeasurePrepare, SchemeFamily::Typical] {
            rates_zero &= rate_search(&src, n, 0.01, fam).unwrap().m == Some(0);
        }
    }
    ok(
        worst < 1e-12 && counts.iter().all(|&c| c >= 100) && rates_zero,
        format!("worst FoM {worst:.1e} over {counts:?} decompositions, M = 0: {rates_zero}"),
    )
}

fn purity_chain() -> Outcome {
    let mut g = rng(99);
    let mut min_bound = f64::INFINITY;
    for i in 0..100 {
        let sys = if i % 2 == 0 { SystemLabel::classical(2 + i % 3) } else { SystemLabel::quantum(2) };
        let rho = sample_state(&sys, &mut g).unwrap();
        let model = TheoryModel::for_system(&sys).unwrap();
        min_bound = min_bound.min(ic_lower_bound(own_decomposition_information(&rho).unwrap(), obit_dim_log(&model)).unwrap());
    }
    let mut pure_ok = true;
    for rho in [c2(&[1.0, 0.0]), c2(&[0.0, 0.0, 1.0]), qubit_diag(1.0), qubit_diag(0.0)] {
        let model = TheoryModel::for_system(rho.system()).unwrap();
        let b = ic_lower_bound(own_decomposition_information(&rho).unwrap(), obit_dim_log(&model)).unwrap();
        let m = rate_search(&rho, 8, 0.05, SchemeFamily::Typical).unwrap().m;
        pure_ok &= b == 0.0 && m == Some(0);
    }
    let tight = c2(&[0.75, 0.25]);
    let model = TheoryModel::classical(2).unwrap();
    let bound = ic_lower_bound(own_decomposition_information(&tight).unwrap(), obit_dim_log(&model)).unwrap();
    let oracle = h2(0.25);
    let rate = rate_search(&tight, 1000, 0.05, SchemeFamily::Typical).unwrap().rate().unwrap();
    let pass = min_bound > 0.0 && pure_ok && (bound - oracle).abs() < 1e-12 && (oracle - 0.8113).abs() < 5e-5 && (rate - bound).abs() <= 0.06;
    ok(
        pass,
        format!("min mixed bound {min_bound:.3e} > 0, pure presets zero: {pure_ok}, tight bound {bound:.4}, rate {rate:.3}"),
    )
}

fn main() {
    let one_second = Duration::from_secs(1);
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Outcome>)> = vec![
        ("Shannon rate recovery", Box::new(|| timed(Some(Duration::from_secs(10)), shannon_rate))),
        ("Shannon converse", Box::new(move || timed(Some(one_second), shannon_converse))),
        ("Schumacher trend", Box::new(|| timed(Some(Duration::from_secs(60)), schumacher_trend))),
        ("zero-rate pure states", Box::new(|| timed(None, zero_rate_pure))),
        ("generalized Fuchs-van de Graaf chain", Box::new(|| timed(None, || suite_outcome(&suite("fuchs", 1000))))),
        ("fidelity and dilation bridges", Box::new(|| timed(None, || suite_outcome(&suite("bridges", 100))))),
        ("subadditivity construction", Box::new(|| timed(None, || suite_outcome(&suite("subadditivity", 100))))),
        ("reversible invariance", Box::new(|| timed(None, || suite_outcome(&suite("reversible", 100))))),
        ("purity detection chain", Box::new(|| timed(None, purity_chain))),
        ("classical error-probability identity", Box::new(move || timed(Some(one_second), || suite_outcome(&suite("error_identity", 1000))))),
        ("continuity bound", Box::new(|| timed(None, || suite_outcome(&suite("continuity", 1000))))),
        ("steering certificates", Box::new(|| timed(None, || suite_outcome(&suite("steering", 100))))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} of 12 passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
