//! Nelder–Mead direct search with dimension-adaptive coefficients
//! (Gao & Han, 2012), which holds up far better than the textbook constants
//! once the parameter count reaches the dozens.

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub max_evals: usize,
    /// Stop once the simplex values span less than this.
    pub ftol: f64,
    /// ... and every vertex is this close (max-norm) to the best one.
    pub xtol: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { max_evals: 10_000, ftol: 1e-8, xtol: 1e-8, initial_step: 0.5 }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Best value after each iteration.
    pub trace: Vec<f64>,
}

struct Coefficients {
    reflect: f64,
    expand: f64,
    contract: f64,
    shrink: f64,
}

impl Coefficients {
    fn adaptive(n: usize) -> Self {
        let n = n.max(2) as f64;
        Self { reflect: 1.0, expand: 1.0 + 2.0 / n, contract: 0.75 - 0.5 / n, shrink: 1.0 - 1.0 / n }
    }
}

fn affine(base: &[f64], toward: &[f64], t: f64, out: &mut [f64]) {
    for ((o, b), w) in out.iter_mut().zip(base).zip(toward) {
        *o = b + t * (w - b);
    }
}

/// Minimizes `f` starting from `x0`. The returned point is never worse than `x0`.
pub fn minimize(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], opts: &SimplexOptions) -> SimplexOutcome {
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
        return SimplexOutcome { x: vec![], value: v, evaluations: evals, converged: true, trace: vec![v] };
    }
    let c = Coefficients::adaptive(n);

    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    points.push(x0.to_vec());
    values.push(eval(x0, &mut evals));
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        values.push(eval(&p, &mut evals));
        points.push(p);
    }

    let mut order: Vec<usize> = (0..=n).collect();
    // running vertex sum; the centroid of all but the worst is (sum − worst)/n
    let mut sum = vec![0.0; n];
    let resum = |points: &[Vec<f64>], sum: &mut [f64]| {
        sum.iter_mut().for_each(|x| *x = 0.0);
        for p in points {
            for (s, x) in sum.iter_mut().zip(p) {
                *s += x;
            }
        }
    };
    resum(&points, &mut sum);
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut second = vec![0.0; n];
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0usize;

    let replace = |points: &mut [Vec<f64>], sum: &mut [f64], i: usize, new: &[f64]| {
        for ((s, old), x) in sum.iter_mut().zip(points[i].iter()).zip(new) {
            *s += x - old;
        }
        points[i].copy_from_slice(new);
    };

    loop {
        iterations += 1;
        if iterations.is_multiple_of(n + 1) {
            resum(&points, &mut sum);
        }
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, next_worst) = (order[0], order[n], order[n - 1]);
        trace.push(values[best]);

        let spread = values[worst] - values[best];
        if spread <= opts.ftol {
            let size = points
                .iter()
                .map(|p| p.iter().zip(&points[best]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            if size <= opts.xtol {
                converged = true;
                break;
            }
        }
        if evals >= opts.max_evals {
            break;
        }

        for ((c, s), w) in centroid.iter_mut().zip(&sum).zip(&points[worst]) {
            *c = (s - w) / n as f64;
        }

        // reflection: centroid + α(centroid − worst)
        affine(&centroid, &points[worst], -c.reflect, &mut trial);
        let fr = eval(&trial, &mut evals);
        if fr < values[best] {
            affine(&centroid, &points[worst], -c.reflect * c.expand, &mut second);
            let fe = eval(&second, &mut evals);
            if fe < fr {
                replace(&mut points, &mut sum, worst, &second);
                values[worst] = fe;
            } else {
                replace(&mut points, &mut sum, worst, &trial);
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[next_worst] {
            replace(&mut points, &mut sum, worst, &trial);
            values[worst] = fr;
            continue;
        }
        let outside = fr < values[worst];
        if outside {
            affine(&centroid, &points[worst], -c.reflect * c.contract, &mut second);
        } else {
            affine(&centroid, &points[worst], c.contract, &mut second);
        }
        let fc = eval(&second, &mut evals);
        if (outside && fc <= fr) || (!outside && fc < values[worst]) {
            replace(&mut points, &mut sum, worst, &second);
            values[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        let anchor = points[best].clone();
        for &i in &order[1..] {
            let p = &mut points[i];
            for (x, a) in p.iter_mut().zip(&anchor) {
                *x = a + c.shrink * (*x - a);
            }
            values[i] = eval(p, &mut evals);
        }
        resum(&points, &mut sum);
    }

    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    SimplexOutcome { x: points[best].clone(), value: values[best], evaluations: evals, converged, trace }
}
