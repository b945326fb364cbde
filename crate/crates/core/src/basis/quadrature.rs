use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use crate::{Error, Result};

/// Gauss-Legendre rule on `[-1, 1]`.
///
/// Nodes are strictly increasing and exactly antisymmetric; the rule
/// integrates polynomials of degree `2 * order - 1` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Builds a grid from explicit nodes and weights, e.g. when reading a
    /// measurement file.
    pub fn from_parts(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::domain("quadrature needs equally many nodes and weights"));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("quadrature nodes must be strictly increasing"));
        }
        if nodes.iter().any(|x| !(-1.0..=1.0).contains(x)) || weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::domain("quadrature nodes must lie in [-1, 1] with positive weights"));
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.order() - 1
    }
}

/// Gauss-Legendre nodes and weights of the given order, found by Newton
/// iteration on the Legendre three-term recurrence.
pub fn gauss_legendre_grid(order: usize) -> Result<QuadratureGrid> {
    if order == 0 {
        return Err(Error::domain("quadrature order must be at least 1"));
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                dp = legendre_with_derivative(n, x).1;
                break;
            }
        }
        if 2 * i + 1 == n {
            x = 0.0;
            dp = legendre_with_derivative(n, x).1;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Newton ran from the right end, so `x` is the (i+1)-th largest node.
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    Ok(QuadratureGrid { nodes, weights })
}

/// `(P_n(x), P_n'(x))`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Process-wide memo of Gauss-Legendre grids.
pub fn cached_grid(order: usize) -> Result<Arc<QuadratureGrid>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<QuadratureGrid>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.read().unwrap().get(&order) {
        return Ok(Arc::clone(g));
    }
    let grid = Arc::new(gauss_legendre_grid(order)?);
    Ok(Arc::clone(cache.write().unwrap().entry(order).or_insert(grid)))
}
