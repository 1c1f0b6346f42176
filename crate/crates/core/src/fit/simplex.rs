//! Box-constrained downhill simplex (Nelder-Mead).
//!
//! Trial points that leave the box are folded back by mirror reflection at
//! the violated bound, so every evaluated point lies inside `[lo, hi]`.

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    /// Evaluation budget for one run, including the initial simplex.
    pub max_evaluations: usize,
    /// Stop once every vertex is within this Euclidean distance of the best.
    pub tolerance: f64,
    /// Offset of the initial vertices along each axis.
    pub initial_step: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Folds `x` into `[lo, hi]` by repeated mirror reflection.
pub fn reflect_into(x: f64, lo: f64, hi: f64) -> f64 {
    if !x.is_finite() {
        return lo;
    }
    if (lo..=hi).contains(&x) {
        return x;
    }
    let width = hi - lo;
    if width <= 0.0 {
        return lo;
    }
    let t = (x - lo).rem_euclid(2.0 * width);
    let folded = if t > width { 2.0 * width - t } else { t };
    (lo + folded).clamp(lo, hi)
}

struct Vertex {
    x: Vec<f64>,
    f: f64,
}

struct Runner<'a, F> {
    f: F,
    lo: &'a [f64],
    hi: &'a [f64],
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64> Runner<'_, F> {
    fn eval(&mut self, mut x: Vec<f64>) -> Vertex {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = reflect_into(*xi, self.lo[i], self.hi[i]);
        }
        self.evaluations += 1;
        let v = (self.f)(&x);
        Vertex {
            x,
            f: if v.is_nan() { f64::INFINITY } else { v },
        }
    }
}

fn diameter(simplex: &[Vertex]) -> f64 {
    let best = &simplex[0].x;
    simplex[1..]
        .iter()
        .map(|v| {
            v.x.iter()
                .zip(best)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t * (b - a)
    a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
}

/// Minimizes `f` over the box starting from `x0`.
pub fn minimize<F>(
    f: F,
    x0: &[f64],
    lo: &[f64],
    hi: &[f64],
    opts: &SimplexOptions,
) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert_eq!(lo.len(), n);
    assert_eq!(hi.len(), n);
    assert_eq!(opts.initial_step.len(), n);
    let mut run = Runner {
        f,
        lo,
        hi,
        evaluations: 0,
    };

    if n == 0 {
        let v = run.eval(Vec::new());
        return SimplexOutcome {
            x: v.x,
            value: v.f,
            evaluations: 1,
            converged: true,
        };
    }

    let mut simplex = Vec::with_capacity(n + 1);
    simplex.push(run.eval(x0.to_vec()));
    for i in 0..n {
        let mut x = simplex[0].x.clone();
        x[i] += opts.initial_step[i];
        simplex.push(run.eval(x));
    }

    let mut converged = false;
    loop {
        // Stable sort keeps earlier vertices first on ties.
        simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
        if diameter(&simplex) < opts.tolerance {
            converged = true;
            break;
        }
        if run.evaluations >= opts.max_evaluations {
            break;
        }

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(&v.x) {
                *c += xi / n as f64;
            }
        }
        let worst_f = simplex[n].f;
        let second_f = simplex[n - 1].f;
        let best_f = simplex[0].f;

        let reflected = run.eval(affine(&centroid, &simplex[n].x, -REFLECT));
        if reflected.f < best_f {
            let expanded = run.eval(affine(&centroid, &simplex[n].x, -EXPAND));
            simplex[n] = if expanded.f < reflected.f {
                expanded
            } else {
                reflected
            };
            continue;
        }
        if reflected.f < second_f {
            simplex[n] = reflected;
            continue;
        }
        let contracted = if reflected.f < worst_f {
            // outside contraction
            run.eval(affine(&centroid, &reflected.x, CONTRACT))
        } else {
            run.eval(affine(&centroid, &simplex[n].x, CONTRACT))
        };
        if contracted.f < reflected.f.min(worst_f) {
            simplex[n] = contracted;
            continue;
        }
        let best = simplex[0].x.clone();
        for vertex in simplex.iter_mut().skip(1) {
            *vertex = run.eval(affine(&best, &vertex.x, SHRINK));
        }
    }

    let best = simplex.swap_remove(0);
    SimplexOutcome {
        x: best.x,
        value: best.f,
        evaluations: run.evaluations,
        converged,
    }
}
