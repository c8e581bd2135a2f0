//! Derivative-free simplex minimizer.

#[derive(Debug, Clone)]
pub struct NelderMead {
    /// Hard cap on objective evaluations, including the initial simplex.
    pub max_evals: usize,
    /// Stop once best and worst simplex values differ by at most this.
    pub ftol: f64,
    /// Per-coordinate offsets used to build the initial simplex.
    pub steps: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

struct Tracker<F> {
    f: F,
    evals: usize,
    max_evals: usize,
    best: Minimum,
}

impl<F: FnMut(&[f64]) -> f64> Tracker<F> {
    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.evals >= self.max_evals {
            return None;
        }
        let v = (self.f)(x);
        self.evals += 1;
        // Strict improvement only, so the earliest point wins ties.
        if v < self.best.value {
            self.best.x = x.to_vec();
            self.best.value = v;
        }
        Some(v)
    }
}

impl NelderMead {
    pub fn new(max_evals: usize, ftol: f64, steps: Vec<f64>) -> Self {
        NelderMead {
            max_evals,
            ftol,
            steps,
        }
    }

    /// Minimizes `f` from `x0`. The returned point is the best one ever
    /// evaluated, so it is never worse than `x0`.
    pub fn minimize<F>(&self, f: F, x0: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = x0.len();
        let mut t = Tracker {
            f,
            evals: 0,
            max_evals: self.max_evals.max(1),
            best: Minimum {
                x: x0.to_vec(),
                value: f64::INFINITY,
                evaluations: 0,
            },
        };
        let finish = |t: Tracker<F>| Minimum {
            evaluations: t.evals,
            ..t.best
        };

        let f0 = t.eval(x0).expect("budget of at least one");
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f0)];
        for i in 0..dim {
            let mut x = x0.to_vec();
            x[i] += self.steps.get(i).copied().unwrap_or(0.1);
            let Some(v) = t.eval(&x) else {
                return finish(t);
            };
            simplex.push((x, v));
        }
        if dim == 0 {
            return finish(t);
        }

        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let (best, worst) = (simplex[0].1, simplex[dim].1);
            if (worst - best).abs() <= self.ftol {
                break;
            }
            let mut centroid = vec![0.0; dim];
            for (x, _) in &simplex[..dim] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / dim as f64;
                }
            }
            let along = |from: &[f64], coef: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(from)
                    .map(|(c, x)| c + coef * (x - c))
                    .collect()
            };

            let xr = along(&simplex[dim].0, -REFLECT);
            let Some(fr) = t.eval(&xr) else { break };
            if fr < best {
                let xe = along(&simplex[dim].0, -REFLECT * EXPAND);
                let Some(fe) = t.eval(&xe) else { break };
                simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[dim - 1].1 {
                simplex[dim] = (xr, fr);
                continue;
            }
            let (xc, fc, accept) = if fr < worst {
                let xc = along(&xr, CONTRACT);
                let Some(fc) = t.eval(&xc) else { break };
                (xc, fc, fc <= fr)
            } else {
                let xc = along(&simplex[dim].0, CONTRACT);
                let Some(fc) = t.eval(&xc) else { break };
                (xc, fc, fc < worst)
            };
            if accept {
                simplex[dim] = (xc, fc);
                continue;
            }
            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = anchor
                    .iter()
                    .zip(&vertex.0)
                    .map(|(a, x)| a + SHRINK * (x - a))
                    .collect();
                let Some(v) = t.eval(&x) else {
                    return finish(t);
                };
                *vertex = (x, v);
            }
        }
        finish(t)
    }
}
