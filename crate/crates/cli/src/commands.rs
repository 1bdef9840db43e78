//! The subcommands. Each returns its report and whether a checked property
//! was violated.

use anyhow::{bail, Result};
use opinfo_core::compression::fom::deviation;
use opinfo_core::compression::{ensemble_fom, estimate_info_content, CompressionScheme, SchemeFamily};
use opinfo_core::entropy::{
    accessible_information, decomposition_entropy, measurement_entropy, shannon, von_neumann,
};
use opinfo_core::metrics::fuchs_bounds;
use opinfo_core::theories::random::{rng, sample_channel, sample_state};
use opinfo_core::theories::{pure_decompositions, steer};
use opinfo_core::verify::{run_all, VerifyConfig};
use opinfo_core::{marginalize, BoundDirection, Error, TheoryId};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::output::{Report, Row};
use crate::states::{parse_state, NamedState, TheorySpec};

pub struct Outcome {
    pub report: Report,
    pub violated: bool,
}

fn theory(cfg: &ExperimentConfig) -> Result<TheorySpec> {
    match &cfg.theory {
        Some(t) => TheorySpec::parse(t),
        None => bail!("missing --theory (classical, quantum or squit)"),
    }
}

fn state_or(cfg: &ExperimentConfig, t: &TheorySpec, preset: &str) -> Result<NamedState> {
    parse_state(t, cfg.state.as_deref().unwrap_or(preset))
}

fn report(experiment: &'static str, cfg: &ExperimentConfig, rows: Vec<Row>, details: serde_json::Value) -> Report {
    Report {
        experiment,
        config: cfg.clone(),
        rows,
        details,
    }
}

pub fn rates(cfg: &ExperimentConfig) -> Result<Outcome> {
    let t = theory(cfg)?;
    let preset = match t.theory {
        TheoryId::Classical => "shannon",
        _ => "schumacher",
    };
    if t.theory == TheoryId::Boxworld {
        return Err(Error::Unsupported("rate searches need a classical or quantum source".into()).into());
    }
    let src = state_or(cfg, &t, preset)?;
    let ns = cfg.n.clone().unwrap_or_else(|| match t.theory {
        TheoryId::Quantum => vec![8, 10, 12, 14],
        _ => vec![100, 200, 500, 1000],
    });
    let eps = cfg.eps.clone().unwrap_or_else(|| vec![0.05, 0.1]);
    let family: SchemeFamily = cfg.family.as_deref().unwrap_or("typical").parse()?;
    let table = estimate_info_content(&src.state, &ns, &eps, family)?;
    let seed = cfg.seed();
    let name = t.name();
    let mut rows = Vec::new();
    for r in &table.rows {
        rows.push(Row::new("rates", name, &src.id, "rate", r.rate(), BoundDirection::Upper, seed).block(r.n, r.m, r.epsilon));
        rows.push(
            Row::new("rates", name, &src.id, "correlation_fidelity", r.fidelity, BoundDirection::Exact, seed)
                .block(r.n, r.m, r.epsilon),
        );
    }
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let eps_min = eps.iter().copied().fold(f64::INFINITY, f64::min);
    let best = table.rows.iter().find(|r| r.n == n_max && r.epsilon == eps_min).and_then(|r| r.m);
    rows.push(
        Row::new("rates", name, &src.id, "info_content_estimate", table.estimate, BoundDirection::Upper, seed)
            .block(n_max, best, eps_min),
    );
    let details = json!({ "family": family.as_str(), "table": table });
    Ok(Outcome {
        report: report("rates", cfg, rows, details),
        violated: false,
    })
}

pub fn verify(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut v = VerifyConfig {
        seed: cfg.seed(),
        trials: cfg.trials,
        inject_fault: cfg.inject_fault.unwrap_or(false),
        ..VerifyConfig::default()
    };
    if let Some(r) = cfg.restarts {
        v.search.restarts = r;
    }
    if let Some(m) = cfg.max_evals {
        v.search.max_evals = m;
    }
    v.search.seed = v.seed;
    v.search.validate()?;
    let suites = cfg.suite.clone().unwrap_or_default();
    let reports = run_all(&suites, &v)?;
    let seed = cfg.seed();
    let mut rows = Vec::new();
    for r in &reports {
        for (crit, value) in [
            ("trials", r.trials as f64),
            ("violations", r.violations as f64),
            ("worst_residual", r.worst_residual),
        ] {
            rows.push(Row::new("verify", "all", &r.suite, crit, Some(value), BoundDirection::Exact, seed));
        }
    }
    let violated = reports.iter().any(|r| !r.passed());
    Ok(Outcome {
        report: report("verify", cfg, rows, json!({ "suites": reports, "passed": !violated })),
        violated,
    })
}

fn entropy_rows(cfg: &ExperimentConfig, t: &TheorySpec, s: &NamedState, rows: &mut Vec<Row>) -> Result<()> {
    let seed = cfg.seed();
    let search = cfg.search();
    let name = t.name();
    let sys = s.state.system();
    match sys.theory() {
        TheoryId::Classical => {
            let h = shannon(s.state.coords().as_slice())?;
            rows.push(Row::new("entropy-compare", name, &s.id, "shannon_entropy", Some(h), BoundDirection::Exact, seed));
        }
        TheoryId::Quantum => {
            let h = von_neumann(&s.state)?;
            rows.push(Row::new("entropy-compare", name, &s.id, "von_neumann_entropy", Some(h), BoundDirection::Exact, seed));
        }
        TheoryId::Boxworld => {}
    }
    let m = measurement_entropy(&s.state, &search)?;
    rows.push(Row::new("entropy-compare", name, &s.id, "measurement_entropy", Some(m.value), m.bound, seed));
    let d = decomposition_entropy(&s.state, 16, seed)?;
    rows.push(Row::new("entropy-compare", name, &s.id, "decomposition_entropy", Some(d.value), d.bound, seed));
    let k = sys.hilbert_dim().unwrap_or(if sys.theory() == TheoryId::Boxworld { 2 } else { sys.dim() });
    let a = accessible_information(sys, k, k, &search)?;
    rows.push(Row::new("entropy-compare", name, &s.id, "accessible_information", Some(a.value), a.bound, seed));
    Ok(())
}

pub fn entropy_compare(cfg: &ExperimentConfig) -> Result<Outcome> {
    let targets: Vec<(TheorySpec, NamedState)> = match (&cfg.theory, &cfg.state) {
        (Some(_), Some(_)) => {
            let t = theory(cfg)?;
            let s = state_or(cfg, &t, "")?;
            vec![(t, s)]
        }
        (Some(_), None) => {
            let t = theory(cfg)?;
            let presets: &[&str] = match t.theory {
                TheoryId::Classical => &["uniform", "shannon"],
                TheoryId::Quantum => &["schumacher", "mixed"],
                TheoryId::Boxworld => &["center", "edge", "corner"],
            };
            presets.iter().map(|p| Ok((t, parse_state(&t, p)?))).collect::<Result<_>>()?
        }
        (None, Some(_)) => bail!("--state needs --theory"),
        (None, None) => [("quantum", "schumacher"), ("squit", "center"), ("classical", "uniform")]
            .iter()
            .map(|(th, p)| {
                let t = TheorySpec::parse(th)?;
                Ok((t, parse_state(&t, p)?))
            })
            .collect::<Result<_>>()?,
    };
    let mut rows = Vec::new();
    for (t, s) in &targets {
        entropy_rows(cfg, t, s, &mut rows)?;
    }
    Ok(Outcome {
        report: report("entropy-compare", cfg, rows, json!({})),
        violated: false,
    })
}

pub fn fidelity_bounds(cfg: &ExperimentConfig) -> Result<Outcome> {
    let t = theory(cfg)?;
    let fixed = cfg.state.as_ref().map(|_| state_or(cfg, &t, "")).transpose()?;
    let sys = fixed.as_ref().map_or_else(|| t.default_system(), |s| s.state.system().clone());
    let seed = cfg.seed();
    let search = cfg.search();
    let mut g = rng(seed);
    let mut rows = Vec::new();
    let mut violated = false;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..cfg.trials.unwrap_or(20) {
        let a = match &fixed {
            Some(s) => s.state.clone(),
            None => sample_state(&sys, &mut g)?,
        };
        let b = sample_state(&sys, &mut g)?;
        let fb = fuchs_bounds(&a, &b, &search)?;
        // A search-based F bounds the fidelity from above, which turns both
        // derived quantities into lower bounds.
        let (f_dir, derived) = if fb.fidelity_exact {
            (BoundDirection::Exact, BoundDirection::Exact)
        } else {
            (BoundDirection::Upper, BoundDirection::Lower)
        };
        let id = format!("pair{i}");
        let name = t.name();
        rows.push(Row::new("fidelity-bounds", name, &id, "fidelity", Some(1.0 - fb.lower), f_dir, seed));
        rows.push(Row::new("fidelity-bounds", name, &id, "one_minus_fidelity", Some(fb.lower), derived, seed));
        rows.push(Row::new("fidelity-bounds", name, &id, "half_norm", Some(fb.middle), BoundDirection::Exact, seed));
        rows.push(Row::new("fidelity-bounds", name, &id, "sqrt_one_minus_fidelity_sq", Some(fb.upper), derived, seed));
        rows.push(Row::new("fidelity-bounds", name, &id, "violation", Some(fb.violation()), derived, seed));
        worst = worst.max(fb.violation());
        violated |= !fb.holds(1e-9);
    }
    Ok(Outcome {
        report: report("fidelity-bounds", cfg, rows, json!({ "worst_violation": worst })),
        violated,
    })
}

pub fn steering_demo(cfg: &ExperimentConfig) -> Result<Outcome> {
    let t = theory(cfg)?;
    if t.theory == TheoryId::Boxworld {
        return Err(Error::Unsupported(
            "steering is not available for squit systems: no dilation steers every refinement there".into(),
        )
        .into());
    }
    let preset = if t.theory == TheoryId::Classical { "trit" } else { "mixed" };
    let src = state_or(cfg, &t, preset)?;
    let seed = cfg.seed();
    let ens = pure_decompositions(&src.state, 0, seed)?.remove(0);
    let cert = steer(&src.state, &ens)?;
    let marginal = marginalize(&cert.dilation)?;
    let marginal_residual = (marginal.coords() - src.state.coords()).amax();

    // A random scheme on one copy, for the comparison of figures of merit.
    let sys = src.state.system();
    let mut g = rng(seed);
    let scheme = CompressionScheme::new(
        sample_channel(sys, sys, &mut g)?,
        sample_channel(sys, sys, &mut g)?,
        1,
        1,
        sys.clone(),
        "random",
    )?;
    let ens_value = ensemble_fom(&scheme, &ens)?;
    let dil_value = deviation(scheme.channel(), cert.dilation.joint())?;

    let name = t.name();
    let mut rows: Vec<Row> = cert
        .residuals
        .iter()
        .enumerate()
        .map(|(i, r)| Row::new("steering-demo", name, &src.id, &format!("member_residual_{i}"), Some(*r), BoundDirection::Exact, seed))
        .collect();
    rows.push(Row::new("steering-demo", name, &src.id, "marginal_residual", Some(marginal_residual), BoundDirection::Exact, seed));
    rows.push(Row::new("steering-demo", name, &src.id, "ensemble_fom", Some(ens_value), BoundDirection::Exact, seed));
    rows.push(Row::new("steering-demo", name, &src.id, "dilation_deviation", Some(dil_value), BoundDirection::Exact, seed));
    let violated = cert.max_residual() > 1e-9 || marginal_residual > 1e-9 || ens_value > dil_value + 1e-9;
    let weights: Vec<f64> = ens.weights();
    let details = json!({
        "members": ens.len(),
        "weights": weights,
        "ancilla": cert.dilation.ancilla().to_string(),
        "max_residual": cert.max_residual(),
    });
    Ok(Outcome {
        report: report("steering-demo", cfg, rows, details),
        violated,
    })
}
