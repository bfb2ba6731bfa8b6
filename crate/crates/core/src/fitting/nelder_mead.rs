//! Nelder–Mead simplex minimization with standard coefficients
//! (reflection 1, expansion 2, contraction 1/2, shrink 1/2).

/// Stopping rules for one simplex run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmOptions {
    /// Relative spread of objective values across the simplex.
    pub ftol: f64,
    /// Absolute floor added to the `ftol` test.
    pub fatol: f64,
    /// Simplex size relative to `max(|x|, 1)` per coordinate.
    pub xtol: f64,
    pub max_evals: usize,
    /// Initial simplex edge as a fraction of each start coordinate.
    pub initial_step: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        NmOptions {
            ftol: 1e-12,
            fatol: 0.0,
            xtol: 1e-8,
            max_evals: 20_000,
            initial_step: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NmResult<const N: usize> {
    pub x: [f64; N],
    pub f: f64,
    pub evals: usize,
    /// Both the value spread and the simplex size met their tolerances.
    pub converged: bool,
    /// Relative simplex size at exit.
    pub size: f64,
}

fn size<const N: usize>(simplex: &[[f64; N]]) -> f64 {
    let best = &simplex[0];
    let mut s = 0.0_f64;
    for v in &simplex[1..] {
        for k in 0..N {
            s = s.max((v[k] - best[k]).abs() / best[k].abs().max(1.0));
        }
    }
    s
}

fn lerp<const N: usize>(from: &[f64; N], to: &[f64; N], t: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = from[k] + t * (to[k] - from[k]);
    }
    out
}

/// Minimizes `f` from `x0`. Non-finite objective values are treated as
/// `+∞`, so the simplex always moves away from them.
pub fn minimize<const N: usize, F>(mut f: F, x0: [f64; N], opts: &NmOptions) -> NmResult<N>
where
    F: FnMut(&[f64; N]) -> f64,
{
    let evals = std::cell::Cell::new(0);
    let mut eval = |x: &[f64; N]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex = vec![x0; N + 1];
    for k in 0..N {
        let step = if x0[k] != 0.0 {
            opts.initial_step * x0[k]
        } else {
            2.5e-4
        };
        simplex[k + 1][k] += step;
    }
    let mut values: Vec<f64> = simplex.iter().map(&mut eval).collect();

    let mut converged = false;
    loop {
        let mut order: Vec<usize> = (0..=N).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i]).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let (best, worst) = (values[0], values[N]);
        let spread_ok = worst - best <= opts.ftol * best.abs() + opts.fatol;
        if spread_ok && size(&simplex) <= opts.xtol {
            converged = true;
            break;
        }
        if evals.get() >= opts.max_evals {
            break;
        }

        let mut centroid = [0.0; N];
        for v in &simplex[..N] {
            for k in 0..N {
                centroid[k] += v[k] / N as f64;
            }
        }
        let reflected = lerp(&centroid, &simplex[N], -1.0);
        let fr = eval(&reflected);
        if fr < values[0] {
            let expanded = lerp(&centroid, &simplex[N], -2.0);
            let fe = eval(&expanded);
            if fe < fr {
                simplex[N] = expanded;
                values[N] = fe;
            } else {
                simplex[N] = reflected;
                values[N] = fr;
            }
            continue;
        }
        if fr < values[N - 1] {
            simplex[N] = reflected;
            values[N] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[N] {
            let c = lerp(&centroid, &simplex[N], -0.5);
            let fc = eval(&c);
            (c, fc)
        } else {
            let c = lerp(&centroid, &simplex[N], 0.5);
            let fc = eval(&c);
            (c, fc)
        };
        if fc < values[N].min(fr) {
            simplex[N] = contracted;
            values[N] = fc;
            continue;
        }
        let best_x = simplex[0];
        for i in 1..=N {
            simplex[i] = lerp(&best_x, &simplex[i], 0.5);
            values[i] = eval(&simplex[i]);
        }
    }

    NmResult {
        x: simplex[0],
        f: values[0],
        evals: evals.get(),
        converged,
        size: size(&simplex),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = minimize(
            |x: &[f64; 2]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2),
            [0.0, 0.0],
            &NmOptions {
                fatol: 1e-30,
                ..NmOptions::default()
            },
        );
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-7 && (r.x[1] + 2.0).abs() < 1e-7,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn rosenbrock() {
        let r = minimize(
            |x: &[f64; 2]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            [-1.2, 1.0],
            &NmOptions {
                fatol: 1e-30,
                ..NmOptions::default()
            },
        );
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn eval_budget_respected() {
        let opts = NmOptions {
            max_evals: 50,
            ..NmOptions::default()
        };
        let r = minimize(
            |x: &[f64; 3]| x.iter().map(|v| v * v).sum(),
            [1.0, 2.0, 3.0],
            &opts,
        );
        assert!(!r.converged);
        // One iteration may overshoot by at most a shrink.
        assert!(r.evals <= 50 + 3);
    }

    #[test]
    fn nan_is_avoided() {
        let r = minimize(
            |x: &[f64; 1]| {
                if x[0] < 0.5 {
                    f64::NAN
                } else {
                    (x[0] - 1.0).powi(2)
                }
            },
            [2.0],
            &NmOptions {
                fatol: 1e-30,
                ..NmOptions::default()
            },
        );
        assert!((r.x[0] - 1.0).abs() < 1e-7);
    }
}
