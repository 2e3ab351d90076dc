//! Small numerical kernels shared by the oracle modules.
//!
//! Reductions use a fixed pairwise tree so results do not depend on how
//! many threads participate.

use rayon::prelude::*;

const PAIRWISE_LEAF: usize = 256;
const PARALLEL_CUTOFF: usize = 1 << 14;

/// Pairwise (cascade) sum of `f(i)` for `i` in `lo..hi`.
///
/// The split points depend only on the range, never on the thread pool,
/// so the result is bitwise reproducible.
pub fn pairwise_sum_by<F>(lo: usize, hi: usize, f: &F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let len = hi - lo;
    if len <= PAIRWISE_LEAF {
        let mut acc = 0.0;
        for i in lo..hi {
            acc += f(i);
        }
        return acc;
    }
    let mid = lo + len / 2;
    if len >= PARALLEL_CUTOFF {
        let (a, b) = rayon::join(|| pairwise_sum_by(lo, mid, f), || pairwise_sum_by(mid, hi, f));
        a + b
    } else {
        pairwise_sum_by(lo, mid, f) + pairwise_sum_by(mid, hi, f)
    }
}

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    pairwise_sum_by(0, xs.len(), &|i| xs[i])
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    pairwise_sum_by(0, a.len(), &|i| a[i] * b[i])
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y <- y + alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    if y.len() >= PARALLEL_CUTOFF {
        y.par_iter_mut().zip(x.par_iter()).for_each(|(yi, xi)| *yi += alpha * xi);
    } else {
        y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
    }
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    x.iter_mut().for_each(|v| *v *= alpha);
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre three-term recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, w * half))
    }
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `P_0(x) ..= P_lmax(x)` into `out`.
pub fn legendre_table(lmax: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if lmax == 0 {
        return;
    }
    out.push(x);
    for l in 2..=lmax {
        let lf = l as f64;
        let p = ((2.0 * lf - 1.0) * x * out[l - 1] - (lf - 1.0) * out[l - 2]) / lf;
        out.push(p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let g = GaussLegendre::new(8);
        let sum_w: f64 = g.weights.iter().sum();
        assert!((sum_w - 2.0).abs() < 1e-14);
        // degree 15 is the maximum exact degree for 8 nodes
        let v = g.integrate(0.0, 2.0, |x| x.powi(15));
        assert!((v - 2f64.powi(16) / 16.0).abs() < 1e-9);
        let v = g.integrate(-1.0, 1.0, |x| x.powi(16));
        assert!((v - 2.0 / 17.0).abs() > 1e-8);
    }

    #[test]
    fn gauss_legendre_odd_order_has_center_node() {
        let g = GaussLegendre::new(5);
        assert!(g.nodes[2].abs() < 1e-15);
        assert!((g.weights[2] - 128.0 / 225.0).abs() < 1e-14);
    }

    #[test]
    fn pairwise_sum_matches_naive_for_exact_values() {
        let xs: Vec<f64> = (0..100_000).map(|i| (i % 7) as f64).collect();
        let naive: f64 = xs.iter().sum();
        assert_eq!(pairwise_sum(&xs), naive);
    }

    #[test]
    fn legendre_table_matches_closed_forms() {
        let mut t = Vec::new();
        legendre_table(3, 0.3, &mut t);
        assert!((t[2] - 0.5 * (3.0 * 0.09 - 1.0)).abs() < 1e-15);
        assert!((t[3] - 0.5 * (5.0 * 0.027 - 3.0 * 0.3)).abs() < 1e-15);
    }
}
