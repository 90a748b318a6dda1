//! Bounded Nelder-Mead simplex descent.
//!
//! Points are projected onto the box after every move. When the simplex
//! collapses before the objective reaches `f_floor`, it is rebuilt around the
//! best vertex and the search continues until the iteration budget is spent.

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub max_iterations: usize,
    /// Stop once the best value is at or below this.
    pub f_floor: f64,
    /// Simplex is considered collapsed when both the value spread and the
    /// largest vertex offset (relative to the box width) fall below these.
    pub f_spread: f64,
    pub x_spread: f64,
    /// Initial edge length as a fraction of each box width.
    pub initial_step: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self { max_iterations: 4000, f_floor: 1e-15, f_spread: 1e-16, x_spread: 1e-11, initial_step: 0.08 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub rebuilds: usize,
}

fn project(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((v, lo), hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.clamp(*lo, *hi);
    }
}

/// Minimizes `f` inside `[lower, upper]` starting from `x0`.
pub fn minimize<F>(mut f: F, x0: &[f64], lower: &[f64], upper: &[f64], opts: &Options) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert!(n > 0 && lower.len() == n && upper.len() == n);
    let nf = n as f64;
    // Dimension-adaptive coefficients (Gao & Han).
    let alpha = 1.0;
    let chi = 1.0 + 2.0 / nf;
    let psi = 0.75 - 1.0 / (2.0 * nf);
    let sigma = 1.0 - 1.0 / nf;
    let width: Vec<f64> = lower.iter().zip(upper).map(|(lo, hi)| hi - lo).collect();

    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut best_x = x0.to_vec();
    project(&mut best_x, lower, upper);
    let mut best_f = eval(&best_x, &mut evaluations);
    let mut iterations = 0usize;
    let mut rebuilds = 0usize;
    let mut step_scale = opts.initial_step;

    while iterations < opts.max_iterations && best_f > opts.f_floor {
        // Build a simplex around the incumbent, stepping inward at the walls.
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((best_x.clone(), best_f));
        for i in 0..n {
            let mut v = best_x.clone();
            let step = step_scale * width[i].max(f64::EPSILON);
            v[i] = if v[i] + step <= upper[i] { v[i] + step } else { v[i] - step };
            project(&mut v, lower, upper);
            let fv = eval(&v, &mut evaluations);
            simplex.push((v, fv));
        }

        while iterations < opts.max_iterations {
            iterations += 1;
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[0].1 <= opts.f_floor {
                break;
            }
            let f_range = simplex[n].1 - simplex[0].1;
            let x_range = simplex[1..]
                .iter()
                .flat_map(|(v, _)| {
                    v.iter().zip(&simplex[0].0).zip(&width).map(|((a, b), w)| (a - b).abs() / w.max(f64::EPSILON))
                })
                .fold(0.0, f64::max);
            if f_range <= opts.f_spread && x_range <= opts.x_spread {
                break;
            }

            let mut centroid = vec![0.0; n];
            for (v, _) in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / nf;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                let mut p: Vec<f64> = centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (c - w)).collect();
                project(&mut p, lower, upper);
                p
            };

            let xr = along(alpha);
            let fr = eval(&xr, &mut evaluations);
            if fr < simplex[0].1 {
                let xe = along(alpha * chi);
                let fe = eval(&xe, &mut evaluations);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = along(alpha * psi);
                let fc = eval(&xc, &mut evaluations);
                (xc, fc)
            } else {
                let xc = along(-psi);
                let fc = eval(&xc, &mut evaluations);
                (xc, fc)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
                continue;
            }
            // Shrink towards the best vertex.
            let anchor = simplex[0].0.clone();
            for (v, fv) in simplex[1..].iter_mut() {
                for (x, a) in v.iter_mut().zip(&anchor) {
                    *x = a + sigma * (*x - a);
                }
                *fv = eval(v, &mut evaluations);
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 < best_f {
            best_f = simplex[0].1;
            best_x = simplex[0].0.clone();
            step_scale = opts.initial_step;
        } else {
            // No progress from this simplex: rebuild smaller.
            step_scale *= 0.25;
            if step_scale < 1e-9 {
                step_scale = opts.initial_step;
            }
        }
        rebuilds += 1;
    }
    Minimum { x: best_x, f: best_f, iterations, evaluations, rebuilds }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
    }

    #[test]
    fn quadratic_bowl() {
        let opts = Options { initial_step: 0.1, ..Options::default() };
        let m = minimize(|x| x.iter().map(|v| (v - 0.3).powi(2)).sum(), &[2.0; 4], &[-5.0; 4], &[5.0; 4], &opts);
        assert!(m.f < 1e-15, "{m:?}");
        assert!(m.x.iter().all(|v| (v - 0.3).abs() < 1e-7));
    }

    #[test]
    fn rosenbrock_four_dims() {
        let opts = Options { max_iterations: 20_000, ..Options::default() };
        let m = minimize(rosenbrock, &[-1.2, 1.0, -1.2, 1.0], &[-3.0; 4], &[3.0; 4], &opts);
        assert!(m.f < 1e-12, "{m:?}");
    }

    #[test]
    fn respects_bounds() {
        let opts = Options::default();
        let m =
            minimize(|x| (x[0] + 4.0).powi(2) + (x[1] - 9.0).powi(2), &[0.0, 0.0], &[-1.0, -1.0], &[1.0, 1.0], &opts);
        assert_eq!(m.x, vec![-1.0, 1.0]);
    }

    #[test]
    fn deterministic() {
        let opts = Options { max_iterations: 500, ..Options::default() };
        let run = || minimize(rosenbrock, &[0.5, -0.5, 0.1], &[-2.0; 3], &[2.0; 3], &opts);
        assert_eq!(run(), run());
    }
}
