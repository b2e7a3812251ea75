//! Box-constrained Nelder–Mead minimiser.
//!
//! Trial points are projected onto the box before evaluation, so every
//! vertex of the simplex is always feasible.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lo, self.hi)
    }

    fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub max_iter: usize,
    /// Relative size of the initial simplex edges, as a fraction of each box width.
    pub initial_step: f64,
    /// Stop once the spread of values and the simplex diameter fall below these.
    pub f_tol: f64,
    pub x_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            initial_step: 0.05,
            f_tol: 1e-15,
            x_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    pub iterations: usize,
}

fn project(x: &mut [f64], bounds: &[Bounds]) {
    for (v, b) in x.iter_mut().zip(bounds) {
        *v = b.clamp(*v);
    }
}

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b - a)
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Minimises `f` over the box starting from `x0`.
///
/// Non-finite objective values are treated as `+inf`. The returned point is
/// the best vertex seen, never worse than `x0`.
pub fn minimize<F>(mut f: F, x0: &[f64], bounds: &[Bounds], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert_eq!(n, bounds.len());
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut start = x0.to_vec();
    project(&mut start, bounds);
    let mut simplex = vec![start.clone()];
    for i in 0..n {
        let mut v = start.clone();
        let step = opts.initial_step * bounds[i].width();
        v[i] = if v[i] + step <= bounds[i].hi {
            v[i] + step
        } else {
            v[i] - step
        };
        project(&mut v, bounds);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x)).collect();

    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = (values[n] - values[0]).abs();
        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .zip(bounds)
                    .map(|((a, b), bd)| (a - b).abs() / bd.width().max(1.0))
            })
            .fold(0.0f64, f64::max);
        if spread <= opts.f_tol * values[0].abs().max(1e-300) && diameter <= opts.x_tol {
            break;
        }
        if diameter <= opts.x_tol * 1e-3 {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();

        let mut reflected = affine(&centroid, &worst, -1.0);
        project(&mut reflected, bounds);
        let f_r = eval(&reflected);

        if f_r < values[0] {
            let mut expanded = affine(&centroid, &worst, -2.0);
            project(&mut expanded, bounds);
            let f_e = eval(&expanded);
            if f_e < f_r {
                simplex[n] = expanded;
                values[n] = f_e;
            } else {
                simplex[n] = reflected;
                values[n] = f_r;
            }
            continue;
        }
        if f_r < values[n - 1] {
            simplex[n] = reflected;
            values[n] = f_r;
            continue;
        }
        let (candidate, f_c) = if f_r < values[n] {
            let mut outside = affine(&centroid, &worst, -0.5);
            project(&mut outside, bounds);
            let f_o = eval(&outside);
            (outside, f_o)
        } else {
            let inside = affine(&centroid, &worst, 0.5);
            let f_i = eval(&inside);
            (inside, f_i)
        };
        if f_c < values[n].min(f_r) {
            simplex[n] = candidate;
            values[n] = f_c;
            continue;
        }
        // shrink towards the best vertex
        for i in 1..=n {
            simplex[i] = affine(&simplex[0], &simplex[i], 0.5);
            values[i] = eval(&simplex[i]);
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    SimplexResult {
        x: simplex[best].clone(),
        f: values[best],
        evaluations,
        iterations,
    }
}
