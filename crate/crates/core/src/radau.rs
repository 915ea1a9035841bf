//! Radau IIA tableaux, Lagrange bases on arbitrary nodes, and Gauss rules
//! on the unit interval.

use alloc::vec;
use alloc::vec::Vec;

// Needed without std; redundant when std is linked elsewhere in the graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{symmetric_tridiagonal_eigenvalues, BandMatrix};
use crate::sum::CompensatedSum;
use crate::{Error, Result};

/// Largest supported stage count.
pub const MAX_STAGES: usize = 12;
/// Largest supported Gauss rule.
pub const MAX_GAUSS_POINTS: usize = 32;

/// Quadrature rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Highest polynomial degree integrated exactly.
    pub exactness: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let len = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(a + x * len))
            .sum::<f64>()
            * len
    }
}

/// Monic orthogonal polynomial of the Jacobi matrix `(diag, off)` and its
/// derivative at `x`.
fn monic_recurrence(diag: &[f64], off: &[f64], x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for j in 0..diag.len() {
        let b2 = if j == 0 { 0.0 } else { off[j - 1] * off[j - 1] };
        let p_next = (x - diag[j]) * p - b2 * p_prev;
        let d_next = p + (x - diag[j]) * d - b2 * d_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

/// Roots of the monic orthogonal polynomial: Jacobi-matrix eigenvalues
/// followed by one Newton polish each.
fn jacobi_roots(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let mut roots = symmetric_tridiagonal_eigenvalues(diag, off);
    for x in roots.iter_mut() {
        let (p, d) = monic_recurrence(diag, off, *x);
        if d != 0.0 {
            let step = p / d;
            if step.abs() < 1e-8 {
                *x -= step;
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// Right-Radau nodes on `(0, 1]`; the last node is exactly 1.
///
/// The interior nodes are the roots of the Jacobi polynomial
/// `P_{q-1}^{(1,0)}` mapped from `[-1, 1]`.
pub fn radau_nodes(q: usize) -> Result<Vec<f64>> {
    if q == 0 || q > MAX_STAGES {
        return Err(Error::UnsupportedOrder(q));
    }
    let n = q - 1;
    let diag: Vec<f64> = (0..n)
        .map(|j| {
            if j == 0 {
                -1.0 / 3.0
            } else {
                let j = j as f64;
                -1.0 / ((2.0 * j + 1.0) * (2.0 * j + 3.0))
            }
        })
        .collect();
    let off: Vec<f64> = (1..n)
        .map(|j| {
            let j = j as f64;
            (j * (j + 1.0)).sqrt() / (2.0 * j + 1.0)
        })
        .collect();
    let mut nodes: Vec<f64> = jacobi_roots(&diag, &off).into_iter().map(|x| 0.5 * (1.0 + x)).collect();
    nodes.push(1.0);
    Ok(nodes)
}

/// Legendre polynomial `P_m` and its derivative at `x` (standard normalization).
fn legendre(m: usize, x: f64) -> (f64, f64) {
    if m == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    for j in 1..m {
        let j = j as f64;
        let next = ((2.0 * j + 1.0) * x * p - j * p_prev) / (j + 1.0);
        p_prev = p;
        p = next;
    }
    let d = m as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

/// Shifted Legendre polynomial `P_j(2x - 1)` on `[0, 1]`.
pub(crate) fn legendre_shifted(j: usize, x: f64) -> f64 {
    legendre(j, 2.0 * x - 1.0).0
}

/// Gauss-Legendre rule with `m` points on `[0, 1]`, exact up to degree `2m - 1`.
pub fn gauss_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 || m > MAX_GAUSS_POINTS {
        return Err(Error::UnsupportedPointCount(m));
    }
    let diag = vec![0.0; m];
    let off: Vec<f64> = (1..m)
        .map(|j| {
            let j = j as f64;
            j / (4.0 * j * j - 1.0).sqrt()
        })
        .collect();
    let roots = jacobi_roots(&diag, &off);
    // Symmetrize about the origin before mapping to [0, 1].
    let mut xs = roots.clone();
    for i in 0..m / 2 {
        let v = 0.5 * (roots[i] - roots[m - 1 - i]);
        xs[i] = v;
        xs[m - 1 - i] = -v;
    }
    if m % 2 == 1 {
        xs[m / 2] = 0.0;
    }
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for &x in &xs {
        let (_, d) = legendre(m, x);
        nodes.push(0.5 * (1.0 + x));
        weights.push(1.0 / ((1.0 - x * x) * d * d));
    }
    let total: f64 = weights.iter().copied().collect::<CompensatedSum>().value();
    weights.iter_mut().for_each(|w| *w /= total);
    Ok(QuadratureRule { nodes, weights, exactness: 2 * m - 1 })
}

/// Lagrange basis on a set of pairwise distinct nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeBasis {
    nodes: Vec<f64>,
    /// `1 / prod_{j != i} (x_i - x_j)`
    inv_denominators: Vec<f64>,
}

impl LagrangeBasis {
    pub fn new(nodes: &[f64]) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(Error::DegenerateBasis);
        }
        let mut inv_denominators = Vec::with_capacity(n);
        for i in 0..n {
            let mut d = 1.0;
            for j in 0..n {
                if j != i {
                    let diff = nodes[i] - nodes[j];
                    if diff == 0.0 || !diff.is_finite() {
                        return Err(Error::DegenerateBasis);
                    }
                    d *= diff;
                }
            }
            inv_denominators.push(1.0 / d);
        }
        Ok(Self { nodes: nodes.to_vec(), inv_denominators })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `l_i(t)`; exact (1 or 0) at the nodes themselves.
    pub fn value(&self, i: usize, t: f64) -> f64 {
        let mut v = 1.0;
        for (j, &x) in self.nodes.iter().enumerate() {
            if j != i {
                v *= (t - x) / (self.nodes[i] - x);
            }
        }
        v
    }

    /// `l_i'(t)`.
    pub fn derivative(&self, i: usize, t: f64) -> f64 {
        let n = self.nodes.len();
        let mut total = 0.0;
        for k in 0..n {
            if k == i {
                continue;
            }
            let mut prod = 1.0;
            for j in 0..n {
                if j != i && j != k {
                    prod *= t - self.nodes[j];
                }
            }
            total += prod;
        }
        total * self.inv_denominators[i]
    }

    pub fn values(&self, t: f64) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i, t)).collect()
    }

    pub fn derivatives(&self, t: f64) -> Vec<f64> {
        (0..self.len()).map(|i| self.derivative(i, t)).collect()
    }
}

/// Value of the `i`-th Lagrange polynomial (0-based) for `nodes` at `t`.
pub fn lagrange_eval(nodes: &[f64], i: usize, t: f64) -> Result<f64> {
    let basis = LagrangeBasis::new(nodes)?;
    if i >= nodes.len() {
        return Err(Error::IndexOutOfRange { index: i, len: nodes.len() });
    }
    Ok(basis.value(i, t))
}

/// Butcher tableau of the q-stage Radau IIA method.
#[derive(Debug, Clone, PartialEq)]
pub struct RadauTableau {
    q: usize,
    c: Vec<f64>,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl RadauTableau {
    pub fn stages(&self) -> usize {
        self.q
    }

    pub fn nodes(&self) -> &[f64] {
        &self.c
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.b
    }

    /// Lagrange basis on the Radau nodes `c_1, ..., c_q`.
    pub fn stage_basis(&self) -> LagrangeBasis {
        LagrangeBasis::new(&self.c).expect("Radau nodes are distinct")
    }

    /// Lagrange basis on `0, c_1, ..., c_q`.
    pub fn extended_basis(&self) -> LagrangeBasis {
        let mut nodes = Vec::with_capacity(self.q + 1);
        nodes.push(0.0);
        nodes.extend_from_slice(&self.c);
        LagrangeBasis::new(&nodes).expect("Radau nodes are distinct and positive")
    }

    /// Checks that the coefficient matrix factors.
    pub fn is_invertible(&self) -> bool {
        BandMatrix::from_rows(&self.a).factor().is_ok()
    }
}

/// Radau IIA tableau with `a_ij = int_0^{c_i} l_j` and `b_i = int_0^1 l_i`.
pub fn radau_tableau(q: usize) -> Result<RadauTableau> {
    let c = radau_nodes(q)?;
    let basis = LagrangeBasis::new(&c)?;
    // l_j has degree q-1; ceil(q/2)+1 Gauss points integrate it exactly.
    let rule = gauss_rule(q.div_ceil(2) + 1)?;
    let integral = |upper: f64, j: usize| rule.integrate(0.0, upper, |t| basis.value(j, t));
    let a: Vec<Vec<f64>> = c.iter().map(|&ci| (0..q).map(|j| integral(ci, j)).collect()).collect();
    let b: Vec<f64> = (0..q).map(|i| integral(1.0, i)).collect();
    Ok(RadauTableau { q, c, a, b })
}
