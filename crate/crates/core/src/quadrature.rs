//! Composite Gauss-Legendre quadrature on the real line.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
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
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Index range and barycentric weights of one Gauss-Legendre panel.
#[derive(Debug, Clone)]
struct Panel {
    start: usize,
    len: usize,
    /// Barycentric interpolation weights of the panel nodes.
    bary: Vec<f64>,
}

/// Quadrature grid made of equal-order Gauss-Legendre panels.
#[derive(Debug, Clone)]
pub struct Grid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: Vec<Panel>,
    lower: f64,
    upper: f64,
}

/// Nodes per panel of the default grids.
pub const DEFAULT_ORDER: usize = 16;
/// Largest panel width of the default grid.
pub const DEFAULT_PANEL_WIDTH: f64 = 0.5;
/// Half-width of the default full-line interval.
pub const DEFAULT_HALF_WIDTH: f64 = 10.0;

impl Grid {
    /// Panels of at most `max_width` between consecutive `breakpoints`
    /// (which must be strictly increasing); no panel straddles a breakpoint.
    pub fn composite(breakpoints: &[f64], max_width: f64, order: usize) -> Result<Self> {
        if breakpoints.len() < 2 || !breakpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "breakpoints must be at least two strictly increasing values".into(),
            ));
        }
        if !(max_width > 0.0) || order < 2 {
            return Err(Error::InvalidParameter(format!(
                "invalid panel width {max_width} or order {order}"
            )));
        }
        let (ref_nodes, ref_weights) = gauss_legendre(order);
        let ref_bary = barycentric_weights(&ref_nodes);
        let mut grid = Grid {
            nodes: Vec::new(),
            weights: Vec::new(),
            panels: Vec::new(),
            lower: breakpoints[0],
            upper: *breakpoints.last().expect("non-empty"),
        };
        for w in breakpoints.windows(2) {
            let (a, b) = (w[0], w[1]);
            let count = ((b - a) / max_width).ceil().max(1.0) as usize;
            for k in 0..count {
                let lo = a + (b - a) * k as f64 / count as f64;
                let hi = if k + 1 == count { b } else { a + (b - a) * (k + 1) as f64 / count as f64 };
                let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
                let start = grid.nodes.len();
                grid.nodes.extend(ref_nodes.iter().map(|t| mid + half * t));
                grid.weights.extend(ref_weights.iter().map(|w| half * w));
                grid.panels.push(Panel {
                    start,
                    len: order,
                    // barycentric weights scale uniformly with the panel; the
                    // common factor cancels in the differentiation formula
                    bary: ref_bary.clone(),
                });
            }
        }
        Ok(grid)
    }

    /// `[-10, 10]` with breakpoints at `-pi, 0, pi`, panel width `0.5 / density`.
    pub fn standard_with_density(density: usize) -> Self {
        let h = DEFAULT_HALF_WIDTH;
        Self::composite(&[-h, -PI, 0.0, PI, h], DEFAULT_PANEL_WIDTH / density.max(1) as f64, DEFAULT_ORDER)
            .expect("default breakpoints are valid")
    }

    pub fn standard() -> Self {
        Self::standard_with_density(1)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    pub fn integrate_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, w)| w * f(x)).sum()
    }

    pub fn integrate_complex(&self, values: &[Complex64]) -> Complex64 {
        debug_assert_eq!(values.len(), self.len());
        self.weights.iter().zip(values).map(|(w, v)| v * w).sum()
    }

    /// Node-wise index of the mirror node `-x`, if the grid is symmetric.
    pub fn mirror_map(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let symmetric = (0..n).all(|i| {
            let j = n - 1 - i;
            (self.nodes[i] + self.nodes[j]).abs() <= 1e-12 && (self.weights[i] - self.weights[j]).abs() <= 1e-12
        });
        symmetric.then(|| (0..n).rev().collect())
    }

    /// Derivative of sampled values, exact for polynomials of degree below
    /// the panel order on each panel.
    pub fn differentiate(&self, values: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(values.len(), self.len());
        let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
        for p in &self.panels {
            let xs = &self.nodes[p.start..p.start + p.len];
            let fs = &values[p.start..p.start + p.len];
            for i in 0..p.len {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in (0..p.len).filter(|&j| j != i) {
                    // D_ij = (w_j / w_i) / (x_i - x_j); D_ii = -sum_j D_ij
                    let d = (p.bary[j] / p.bary[i]) / (xs[i] - xs[j]);
                    acc += (fs[j] - fs[i]) * d;
                }
                out[p.start + i] = acc;
            }
        }
        out
    }
}

fn barycentric_weights(xs: &[f64]) -> Vec<f64> {
    (0..xs.len())
        .map(|j| {
            1.0 / (0..xs.len())
                .filter(|&k| k != j)
                .map(|k| xs[j] - xs[k])
                .product::<f64>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn small_rules_match_closed_forms() {
        let (x, w) = gauss_legendre(2);
        assert_abs_diff_eq!(x[1], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-15);
        let (x, w) = gauss_legendre(3);
        assert_abs_diff_eq!(x[2], (0.6f64).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(w[1], 8.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn rule_is_exact_to_degree_2n_minus_1() {
        let n = 16;
        let (x, w) = gauss_legendre(n);
        for deg in 0..(2 * n) {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert_abs_diff_eq!(got, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn standard_grid_reproduces_interval_length() {
        let g = Grid::standard();
        assert_abs_diff_eq!(g.integrate_fn(|_| 1.0), 20.0, epsilon = 1e-10);
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(g.weights().iter().all(|&w| w > 0.0));
        assert!(g.mirror_map().is_some());
        // no node sits on a breakpoint
        assert!(g.nodes().iter().all(|&x| x != 0.0 && (x.abs() - PI).abs() > 1e-6));
    }

    #[test]
    fn gaussian_integral() {
        let g = Grid::standard();
        assert_abs_diff_eq!(g.integrate_fn(|x| (-x * x).exp()), PI.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn differentiation_of_smooth_function() {
        let g = Grid::standard();
        let f: Vec<Complex64> = g.nodes().iter().map(|&x| Complex64::new(x.sin(), (2.0 * x).cos())).collect();
        let d = g.differentiate(&f);
        for (&x, z) in g.nodes().iter().zip(&d) {
            assert_abs_diff_eq!(z.re, x.cos(), epsilon = 1e-11);
            assert_abs_diff_eq!(z.im, -2.0 * (2.0 * x).sin(), epsilon = 1e-11);
        }
    }

    #[test]
    fn composite_rejects_bad_breakpoints() {
        assert!(Grid::composite(&[1.0, 0.0], 0.5, 8).is_err());
        assert!(Grid::composite(&[0.0], 0.5, 8).is_err());
        assert!(Grid::composite(&[0.0, 1.0], 0.0, 8).is_err());
    }
}
