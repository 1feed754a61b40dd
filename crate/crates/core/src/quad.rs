//! Quadrature rules for the chart boxes.
//!
//! Gauss–Legendre is the workhorse for the sine-weighted angles. Full-period
//! angles with uniform density are integrated with equally spaced midpoint
//! nodes instead, which is the trapezoid rule in disguise and is exact for
//! trigonometric polynomials below the node count.

use crate::chart::{AxisSpec, ChartSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Midpoint,
    GaussLegendre,
}

/// Node budget for tensor-product quadrature over a chart box.
///
/// `periodic_nodes`, when set, overrides the node count on full-period
/// uniform angles only; those angles need far fewer nodes than the
/// sine-weighted ones, which matters for the 10-angle SO(5) box.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub nodes_per_angle: usize,
    pub rule: Rule,
    pub periodic_nodes: Option<usize>,
}

impl QuadratureSpec {
    pub fn new(nodes_per_angle: usize, rule: Rule) -> Result<Self> {
        if nodes_per_angle < 2 {
            return Err(Error::InvalidArgument(
                "nodes_per_angle must be at least 2".into(),
            ));
        }
        Ok(Self {
            nodes_per_angle,
            rule,
            periodic_nodes: None,
        })
    }

    pub fn with_periodic_nodes(mut self, nodes: usize) -> Self {
        self.periodic_nodes = Some(nodes);
        self
    }

    pub fn gauss(nodes: usize) -> Self {
        Self {
            nodes_per_angle: nodes,
            rule: Rule::GaussLegendre,
            periodic_nodes: None,
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes_per_angle: 32,
            rule: Rule::GaussLegendre,
            periodic_nodes: None,
        }
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
///
/// Newton iteration on the Legendre recurrence; the usual
/// cos-based initial guesses converge in a handful of steps.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // i-th largest root; its mirror fills the other end
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss–Legendre nodes and weights on [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|wi| half * wi).collect(),
    )
}

/// Midpoint nodes and weights on [a, b].
pub fn midpoint_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let h = (b - a) / n as f64;
    (
        (0..n).map(|i| a + h * (i as f64 + 0.5)).collect(),
        vec![h; n],
    )
}

/// Quadrature nodes for one chart angle, with the density weight absorbed.
#[derive(Debug, Clone)]
pub struct AxisNodes {
    pub angles: Vec<f64>,
    /// rule weight × density weight at each node
    pub weights: Vec<f64>,
    /// ∑ weights (the 1-D box integral of the weight under this rule)
    pub total: f64,
}

impl AxisNodes {
    pub fn build(axis: &AxisSpec, q: &QuadratureSpec) -> Self {
        let use_midpoint =
            q.rule == Rule::Midpoint || axis.is_periodic_uniform();
        let n = if axis.is_periodic_uniform() {
            q.periodic_nodes.unwrap_or(q.nodes_per_angle)
        } else {
            q.nodes_per_angle
        };
        let (angles, rule_w) = if use_midpoint {
            midpoint_on(n, axis.lo, axis.hi)
        } else if matches!(axis.weight, crate::chart::AxisWeight::AbsSinPow(_)) {
            // |sin| has a kink at π; integrate each smooth panel separately
            let (mut x1, mut w1) = gauss_legendre_on(n, axis.lo, std::f64::consts::PI);
            let (x2, w2) = gauss_legendre_on(n, std::f64::consts::PI, axis.hi);
            x1.extend(x2);
            w1.extend(w2);
            (x1, w1)
        } else {
            gauss_legendre_on(n, axis.lo, axis.hi)
        };
        let weights: Vec<f64> = angles
            .iter()
            .zip(&rule_w)
            .map(|(&x, &w)| w * axis.weight.eval(x))
            .collect();
        let total = weights.iter().sum();
        Self {
            angles,
            weights,
            total,
        }
    }

    /// Normalize so the weights sum to one (probability weights).
    pub fn normalized(mut self) -> Self {
        for w in &mut self.weights {
            *w /= self.total;
        }
        self.total = 1.0;
        self
    }
}

/// Nodes for every axis of a chart.
pub fn chart_axes_nodes(chart: &ChartSpec, q: &QuadratureSpec, normalized: bool) -> Vec<AxisNodes> {
    chart
        .axes()
        .iter()
        .map(|a| {
            let nodes = AxisNodes::build(a, q);
            if normalized {
                nodes.normalized()
            } else {
                nodes
            }
        })
        .collect()
}

/// Tensor-product quadrature of the chart's own density over its box,
/// the per-axis 1-D integrals multiplied out.
pub fn box_volume_quadrature(chart: &ChartSpec, q: &QuadratureSpec) -> f64 {
    chart.density_constant()
        * chart_axes_nodes(chart, q, false)
            .iter()
            .map(|a| a.total)
            .product::<f64>()
}
