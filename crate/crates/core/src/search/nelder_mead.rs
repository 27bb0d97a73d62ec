//! Derivative-free minimization with the adaptive Nelder–Mead simplex
//! (dimension-dependent coefficients of Gao and Han), restarted around the
//! incumbent with a shrinking simplex until a restart stops improving.

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub initial_step: f64,
    pub max_iters: usize,
    /// Stop when the spread of simplex values drops below this.
    pub ftol: f64,
    /// Each restart shrinks the initial simplex by this factor.
    pub restart_shrink: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            initial_step: 0.25,
            max_iters: 500,
            ftol: 1e-10,
            restart_shrink: 0.2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iters: usize,
    pub evals: usize,
}

/// Minimizes `f` from `x0`. `f` may return `+∞` for rejected points.
pub fn minimize<F>(f: F, x0: &[f64], opts: &Options) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = Minimum {
        x: x0.to_vec(),
        value: f(x0),
        iters: 0,
        evals: 1,
    };
    let mut step = opts.initial_step;
    while best.iters < opts.max_iters {
        let budget = opts.max_iters - best.iters;
        let run = single_run(&f, &best.x, step, budget, opts.ftol);
        let improved = best.value - run.value;
        best.iters += run.iters.max(1);
        best.evals += run.evals;
        if run.value < best.value {
            best.x = run.x;
            best.value = run.value;
        }
        // A restart that cannot move the incumbent at a tiny scale is done.
        if (improved.is_nan() || improved <= opts.ftol) && step < 1e-8 {
            break;
        }
        step *= opts.restart_shrink;
    }
    best
}

fn single_run<F>(f: &F, x0: &[f64], step: f64, max_iters: usize, ftol: f64) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let m = x0.len();
    let mf = m as f64;
    let (alpha, beta, gamma, delta) = if m >= 2 {
        (1.0, 1.0 + 2.0 / mf, 0.75 - 1.0 / (2.0 * mf), 1.0 - 1.0 / mf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    simplex.push(x0.to_vec());
    for i in 0..m {
        let mut v = x0.to_vec();
        let h = if v[i].abs() > 1e-3 { step * v[i].abs().max(step) } else { step };
        v[i] += h;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = m + 1;
    let mut iters = 0;

    let mut order: Vec<usize> = (0..=m).collect();
    while iters < max_iters {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        let (lo, hi, second) = (order[0], order[m], order[m - 1]);
        let spread = values[hi] - values[lo];
        if spread.is_finite() && (spread <= ftol || diameter(&simplex, lo) < 1e-13) {
            break;
        }
        iters += 1;

        let centroid: Vec<f64> = (0..m)
            .map(|j| order[..m].iter().map(|&i| simplex[i][j]).sum::<f64>() / mf)
            .collect();
        let along = |c: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[hi])
                .map(|(cj, hj)| cj + c * (cj - hj))
                .collect()
        };

        let xr = along(alpha);
        let fr = f(&xr);
        evals += 1;
        if fr < values[lo] {
            let xe = along(alpha * beta);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                simplex[hi] = xe;
                values[hi] = fe;
            } else {
                simplex[hi] = xr;
                values[hi] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[hi] = xr;
            values[hi] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[hi] {
            let xc = along(alpha * gamma);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(-gamma);
            let fc = f(&xc);
            (xc, fc)
        };
        evals += 1;
        if fc < values[hi].min(fr) {
            simplex[hi] = xc;
            values[hi] = fc;
            continue;
        }
        let anchor = simplex[lo].clone();
        for &i in order.iter().skip(1) {
            simplex[i] = anchor
                .iter()
                .zip(&simplex[i])
                .map(|(a, x)| a + delta * (x - a))
                .collect();
            values[i] = f(&simplex[i]);
            evals += 1;
        }
    }

    let lo = (0..=m)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)))
        .expect("nonempty simplex");
    Minimum {
        x: simplex[lo].clone(),
        value: values[lo],
        iters,
        evals,
    }
}

fn diameter(simplex: &[Vec<f64>], anchor: usize) -> f64 {
    simplex
        .iter()
        .map(|v| {
            v.iter()
                .zip(&simplex[anchor])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}
