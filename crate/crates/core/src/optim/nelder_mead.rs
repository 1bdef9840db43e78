//! Nelder–Mead downhill simplex for small unconstrained problems.

/// Result of a local minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMin {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Minimize `f` from `x0` with an axis-aligned initial simplex of size `step`.
///
/// Non-finite objective values are treated as `+∞`, so parameterizations can
/// reject degenerate points by returning `f64::INFINITY`.
pub fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_evals: usize,
    tol: f64,
) -> LocalMin {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if n == 0 {
        let v = eval(x0, &mut evals);
        return LocalMin {
            x: Vec::new(),
            value: v,
            evals,
        };
    }

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        simplex.push(x);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    while evals < max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let (best, worst) = (values[0], values[n]);
        if best.is_finite() && (worst - best).abs() <= tol * (1.0 + best.abs()) {
            break;
        }

        let mut centroid = vec![0.0; n];
        for x in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let xr = along(-alpha);
        let fr = eval(&xr, &mut evals);
        if fr < values[0] {
            let xe = along(-gamma);
            let fe = eval(&xe, &mut evals);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
        } else {
            let (xc, fc) = if fr < values[n] {
                let xc = along(-rho);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = along(rho);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < values[n].min(fr) {
                simplex[n] = xc;
                values[n] = fc;
            } else {
                // Shrink towards the best vertex.
                let best = simplex[0].clone();
                for i in 1..=n {
                    for (xi, bi) in simplex[i].iter_mut().zip(&best) {
                        *xi = bi + sigma * (*xi - bi);
                    }
                    values[i] = eval(&simplex[i], &mut evals);
                }
            }
        }
    }
    let (i, &value) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty simplex");
    LocalMin {
        x: simplex[i].clone(),
        value,
        evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let mut f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(&mut f, &[-1.2, 1.0], 0.5, 5000, 1e-14);
        assert!(r.value < 1e-8, "{r:?}");
        assert!((r.x[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn respects_budget() {
        let mut f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let r = nelder_mead(&mut f, &[3.0; 6], 1.0, 50, 0.0);
        assert!(r.evals <= 50 + 7);
    }

    #[test]
    fn infinite_region_is_avoided() {
        let mut f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 2.0).powi(2) };
        let r = nelder_mead(&mut f, &[0.5], 1.0, 500, 1e-12);
        assert!((r.x[0] - 2.0).abs() < 1e-4);
    }
}
