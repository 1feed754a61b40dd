//! Normalized Haar integration over the charts: deterministic tensor-product
//! quadrature, Monte Carlo sampling, conjugation averaging, and Neumann's
//! mean axioms as a checkable report.
//!
//! The quadrature walks the chart's factor sequence depth-first, sharing
//! prefix products of the rotation blocks between neighboring nodes, so a
//! K-angle box costs one block application per visited node rather than K.
//! Normalization is built in: per-axis weights are normalized before the
//! walk, so `integrate(1) = 1` holds exactly.

use crate::chart::{ChartSpec, Step};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::quad::{chart_axes_nodes, AxisNodes, QuadratureSpec};
use crate::{CMat, Complex64};
use rayon::prelude::*;

/// Hard cap on materialized node grids (`NodeGrid`), not on streaming
/// integration.
const NODE_GRID_CAP: usize = 1 << 21;

/// Precomputed cosines and sines of one axis' node angles, so the hot loop
/// does no trigonometry.
struct AxisTrig {
    c: Vec<f64>,
    s: Vec<f64>,
}

fn build_trig(axes: &[AxisNodes]) -> Vec<AxisTrig> {
    axes.iter()
        .map(|a| AxisTrig {
            c: a.angles.iter().map(|x| x.cos()).collect(),
            s: a.angles.iter().map(|x| x.sin()).collect(),
        })
        .collect()
}

/// Integrate a batch of functions of the group element in one sweep.
///
/// `f` receives the matrix of the current group element and writes `width`
/// values; the normalized Haar integral of each slot is returned. Partial
/// sums are reduced in deterministic order regardless of thread count.
pub fn integrate_matrix_fn<F>(
    chart: &ChartSpec,
    q: &QuadratureSpec,
    width: usize,
    f: F,
) -> Result<Vec<Complex64>>
where
    F: Fn(&CMat, &mut [Complex64]) + Sync,
{
    let axes = chart_axes_nodes(chart, q, true);
    let trig = build_trig(&axes);
    let steps = chart.steps();
    let n = chart.n();

    // Parallelize over the node combinations of a leading group of steps:
    // enough tasks to keep workers busy, small enough to stay cheap.
    let mut lead = 0usize;
    let mut tasks = 1usize;
    while lead < steps.len() && tasks < 256 {
        tasks *= step_node_count(&steps[lead], &axes);
        lead += 1;
    }

    let partials: Vec<Result<Vec<Complex64>>> = (0..tasks)
        .into_par_iter()
        .map(|task| {
            let mut acc = vec![Complex64::new(0.0, 0.0); width];
            let mut vals = vec![Complex64::new(0.0, 0.0); width];
            let mut stack: Vec<CMat> = (0..=steps.len()).map(|_| CMat::identity(n, n)).collect();
            // decode the task index into node choices for the leading steps
            let mut weight = 1.0;
            let mut t = task;
            for (d, step) in steps[..lead].iter().enumerate() {
                let count = step_node_count(step, &axes);
                let choice = t % count;
                t /= count;
                let (m_prev, m_next) = split_stack(&mut stack, d);
                weight *= apply_step_choice(m_prev, m_next, step, &axes, &trig, choice);
            }
            descend(
                &steps[lead..],
                lead,
                &axes,
                &trig,
                &mut stack,
                weight,
                &f,
                &mut vals,
                &mut acc,
            );
            if acc.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Quadrature(
                    "non-finite integrand value at a quadrature node".into(),
                ));
            }
            Ok(acc)
        })
        .collect();

    let mut total = vec![Complex64::new(0.0, 0.0); width];
    for p in partials {
        let p = p?;
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    Ok(total)
}

/// Normalized Haar integrals of 1, tr g, (tr g)², …, (tr g)^{count−1} in one
/// sweep: the same nested quadrature as [`integrate_matrix_fn`], with the
/// innermost planar rotation folded into the trace algebraically (the trace
/// is affine in the cosine and sine of each single angle), which removes the
/// per-node matrix work on the deepest level.
pub fn integrate_trace_powers(
    chart: &ChartSpec,
    q: &QuadratureSpec,
    count: usize,
) -> Result<Vec<Complex64>> {
    let steps = chart.steps();
    let innermost_planar = matches!(steps.last(), Some(Step::Planar { .. }));
    if !innermost_planar {
        return integrate_matrix_fn(chart, q, count, |m, out| {
            let t = m.trace();
            let mut p = Complex64::new(1.0, 0.0);
            for slot in out.iter_mut() {
                *slot = p;
                p *= t;
            }
        });
    }
    let axes = chart_axes_nodes(chart, q, true);
    let trig = build_trig(&axes);
    let n = chart.n();
    // the trace is invariant under cyclic rotation of the factor product, so
    // rotate the widest planar axis to the innermost position, where the
    // algebraic fold makes its node loop nearly free
    let mut rotated: Vec<Step> = steps.to_vec();
    let best = steps
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s, Step::Planar { .. }))
        .max_by_key(|(_, s)| step_node_count(s, &axes))
        .map(|(i, _)| i)
        .expect("planar step exists");
    rotated.rotate_left((best + 1) % steps.len());
    let steps = rotated;
    let outer = &steps[..steps.len() - 1];
    let Some(&Step::Planar {
        col_a,
        col_b,
        sign,
        axis,
    }) = steps.last()
    else {
        unreachable!()
    };

    let mut lead = 0usize;
    let mut tasks = 1usize;
    while lead < outer.len() && tasks < 256 {
        tasks *= step_node_count(&outer[lead], &axes);
        lead += 1;
    }

    let partials: Vec<Result<Vec<Complex64>>> = (0..tasks)
        .into_par_iter()
        .map(|task| {
            let mut acc = vec![Complex64::new(0.0, 0.0); count];
            let mut stack: Vec<CMat> = (0..=outer.len()).map(|_| CMat::identity(n, n)).collect();
            let mut weight = 1.0;
            let mut t = task;
            for (d, step) in outer[..lead].iter().enumerate() {
                let cnt = step_node_count(step, &axes);
                let choice = t % cnt;
                t /= cnt;
                let (m_prev, m_next) = split_stack(&mut stack, d);
                weight *= apply_step_choice(m_prev, m_next, step, &axes, &trig, choice);
            }
            descend_trace(
                &outer[lead..],
                lead,
                &axes,
                &trig,
                &mut stack,
                weight,
                (col_a, col_b, sign, axis),
                &mut acc,
            );
            if acc.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Quadrature(
                    "non-finite integrand value at a quadrature node".into(),
                ));
            }
            Ok(acc)
        })
        .collect();

    let mut total = vec![Complex64::new(0.0, 0.0); count];
    for p in partials {
        let p = p?;
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn descend_trace(
    steps: &[Step],
    depth: usize,
    axes: &[AxisNodes],
    trig: &[AxisTrig],
    stack: &mut Vec<CMat>,
    weight: f64,
    last: (usize, usize, f64, usize),
    acc: &mut [Complex64],
) {
    if steps.is_empty() {
        let m = &stack[depth];
        let (col_a, col_b, sign, axis) = last;
        // tr(M·E(φ)) = C + A cos φ + B sin φ
        let a_coef = m[(col_a, col_a)] + m[(col_b, col_b)];
        let b_coef = (m[(col_b, col_a)] - m[(col_a, col_b)]) * sign;
        let c_coef = m.trace() - a_coef;
        let nodes = &axes[axis];
        for i in 0..nodes.weights.len() {
            let t = c_coef + a_coef * trig[axis].c[i] + b_coef * trig[axis].s[i];
            let mut p = Complex64::new(weight * nodes.weights[i], 0.0);
            for slot in acc.iter_mut() {
                *slot += p;
                p *= t;
            }
        }
        return;
    }
    let step = &steps[0];
    for choice in 0..step_node_count(step, axes) {
        let (m_prev, m_next) = split_stack(stack, depth);
        let w = apply_step_choice(m_prev, m_next, step, axes, trig, choice);
        descend_trace(
            &steps[1..],
            depth + 1,
            axes,
            trig,
            stack,
            weight * w,
            last,
            acc,
        );
    }
}

fn step_node_count(step: &Step, axes: &[AxisNodes]) -> usize {
    match *step {
        Step::Planar { axis, .. } => axes[axis].angles.len(),
        Step::SuBlock {
            phi_axis,
            psi_axis,
            chi_axis,
            ..
        } => {
            axes[phi_axis].angles.len()
                * axes[psi_axis].angles.len()
                * chi_axis.map_or(1, |c| axes[c].angles.len())
        }
    }
}

fn split_stack(stack: &mut [CMat], d: usize) -> (&CMat, &mut CMat) {
    let (a, b) = stack.split_at_mut(d + 1);
    (&a[d], &mut b[0])
}

/// Apply the `choice`-th node combination of `step` to `m_prev`, writing into
/// `m_next`; returns the combined node weight. Trigonometry comes from the
/// precomputed tables.
fn apply_step_choice(
    m_prev: &CMat,
    m_next: &mut CMat,
    step: &Step,
    axes: &[AxisNodes],
    trig: &[AxisTrig],
    choice: usize,
) -> f64 {
    m_next.copy_from(m_prev);
    let rows = m_next.nrows();
    match *step {
        Step::Planar {
            col_a,
            col_b,
            sign,
            axis,
        } => {
            let c = trig[axis].c[choice];
            let s = sign * trig[axis].s[choice];
            for row in 0..rows {
                let xa = m_prev[(row, col_a)];
                let xb = m_prev[(row, col_b)];
                m_next[(row, col_a)] = xa * c - xb * s;
                m_next[(row, col_b)] = xa * s + xb * c;
            }
            axes[axis].weights[choice]
        }
        Step::SuBlock {
            col_a,
            col_b,
            phi_axis,
            psi_axis,
            chi_axis,
        } => {
            let np = axes[phi_axis].angles.len();
            let ns = axes[psi_axis].angles.len();
            let (ip, rest) = (choice % np, choice / np);
            let (is, ic) = (rest % ns, rest / ns);
            let (cphi, sphi) = (trig[phi_axis].c[ip], trig[phi_axis].s[ip]);
            let a = Complex64::new(cphi * trig[psi_axis].c[is], cphi * trig[psi_axis].s[is]);
            let mut w = axes[phi_axis].weights[ip] * axes[psi_axis].weights[is];
            let b = match chi_axis {
                Some(cx) => {
                    w *= axes[cx].weights[ic];
                    Complex64::new(sphi * trig[cx].c[ic], sphi * trig[cx].s[ic])
                }
                None => Complex64::new(sphi, 0.0),
            };
            for row in 0..rows {
                let xa = m_prev[(row, col_a)];
                let xb = m_prev[(row, col_b)];
                m_next[(row, col_a)] = xa * a - xb * b.conj();
                m_next[(row, col_b)] = xa * b + xb * a.conj();
            }
            w
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn descend<F>(
    steps: &[Step],
    depth: usize,
    axes: &[AxisNodes],
    trig: &[AxisTrig],
    stack: &mut Vec<CMat>,
    weight: f64,
    f: &F,
    vals: &mut [Complex64],
    acc: &mut [Complex64],
) where
    F: Fn(&CMat, &mut [Complex64]) + Sync,
{
    if steps.is_empty() {
        f(&stack[depth], vals);
        for (a, v) in acc.iter_mut().zip(vals.iter()) {
            *a += weight * v;
        }
        return;
    }
    let step = &steps[0];
    let count = step_node_count(step, axes);
    for choice in 0..count {
        let (m_prev, m_next) = split_stack(stack, depth);
        let w = apply_step_choice(m_prev, m_next, step, axes, trig, choice);
        descend(
            &steps[1..],
            depth + 1,
            axes,
            trig,
            stack,
            weight * w,
            f,
            vals,
            acc,
        );
    }
}

/// Normalized Haar integral ∫ f(g) dg over the chart box.
///
/// ∫ 1 dg = 1 holds exactly by construction (normalized per-axis weights).
pub fn integrate<F>(chart: &ChartSpec, q: &QuadratureSpec, f: F) -> Result<Complex64>
where
    F: Fn(&GroupElement) -> Complex64 + Sync,
{
    let tag = chart.group();
    let vals = integrate_matrix_fn(chart, q, 1, |m, out| {
        let g = GroupElement::new(m.clone(), tag).expect("square");
        out[0] = f(&g);
    })?;
    Ok(vals[0])
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(chart: &ChartSpec, q: &QuadratureSpec, f: F) -> Result<f64>
where
    F: Fn(&GroupElement) -> f64 + Sync,
{
    Ok(integrate(chart, q, |g| Complex64::new(f(g), 0.0))?.re)
}

/// f°(g) = ∫ f(v g v⁻¹) dv with the normalized measure.
pub fn conjugation_average<F>(
    f: F,
    g: &GroupElement,
    chart: &ChartSpec,
    q: &QuadratureSpec,
) -> Result<Complex64>
where
    F: Fn(&GroupElement) -> Complex64 + Sync,
{
    integrate(chart, q, |v| {
        let vg = crate::group::multiply(v, g).expect("compatible");
        let vgv = crate::group::multiply(&vg, &crate::group::inverse(v).expect("unitary"))
            .expect("compatible");
        f(&vgv)
    })
}

// ---------------------------------------------------------------------------
// Materialized grids (for the operator calculus on small charts)

/// A materialized quadrature grid: group elements and normalized weights.
#[derive(Debug, Clone)]
pub struct NodeGrid {
    pub elements: Vec<GroupElement>,
    pub weights: Vec<f64>,
}

impl NodeGrid {
    pub fn build(chart: &ChartSpec, q: &QuadratureSpec) -> Result<Self> {
        let axes = chart_axes_nodes(chart, q, true);
        let total: usize = chart
            .steps()
            .iter()
            .map(|s| step_node_count(s, &axes))
            .product();
        if total > NODE_GRID_CAP {
            return Err(Error::CostCap(format!(
                "node grid of {total} elements exceeds cap {NODE_GRID_CAP}; use streaming integration"
            )));
        }
        let mut elements = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let tag = chart.group();
        let trig = build_trig(&axes);
        let mut stack: Vec<CMat> = (0..=chart.steps().len())
            .map(|_| CMat::identity(chart.n(), chart.n()))
            .collect();
        collect_grid(
            chart.steps(),
            0,
            &axes,
            &trig,
            &mut stack,
            1.0,
            tag,
            &mut elements,
            &mut weights,
        );
        Ok(Self { elements, weights })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Integrate a function given by its values on the grid.
    pub fn integrate_values(&self, values: &[Complex64]) -> Complex64 {
        values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v * *w)
            .sum()
    }

    /// Evaluate a function on every grid element.
    pub fn tabulate<F>(&self, f: F) -> Vec<Complex64>
    where
        F: Fn(&GroupElement) -> Complex64,
    {
        self.elements.iter().map(f).collect()
    }
}

#[allow(clippy::too_many_arguments)]
fn collect_grid(
    steps: &[Step],
    depth: usize,
    axes: &[AxisNodes],
    trig: &[AxisTrig],
    stack: &mut Vec<CMat>,
    weight: f64,
    tag: crate::group::GroupTag,
    elements: &mut Vec<GroupElement>,
    weights: &mut Vec<f64>,
) {
    if steps.is_empty() {
        elements.push(GroupElement::new(stack[depth].clone(), tag).expect("square"));
        weights.push(weight);
        return;
    }
    let step = &steps[0];
    for choice in 0..step_node_count(step, axes) {
        let (m_prev, m_next) = split_stack(stack, depth);
        let w = apply_step_choice(m_prev, m_next, step, axes, trig, choice);
        collect_grid(
            &steps[1..],
            depth + 1,
            axes,
            trig,
            stack,
            weight * w,
            tag,
            elements,
            weights,
        );
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo sampling

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic Haar sampler over a chart.
///
/// Each angle is drawn independently from its marginal density by inverse-CDF
/// bisection to 1e-12; identical seeds give identical sample streams. For
/// parallel use, derive independent stream seeds with [`split_seed`].
pub struct HaarSampler {
    chart: ChartSpec,
    rng: ChaCha8Rng,
    seed: u64,
}

impl HaarSampler {
    pub fn new(chart: ChartSpec, seed: u64) -> Self {
        Self {
            chart,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn chart(&self) -> &ChartSpec {
        &self.chart
    }

    /// Draw the chart angles of one Haar-distributed element.
    pub fn sample_angles(&mut self) -> Vec<f64> {
        let axes = self.chart.axes();
        let mut out = Vec::with_capacity(axes.len());
        for a in axes {
            let u: f64 = self.rng.gen();
            out.push(invert_cdf(a, u));
        }
        out
    }

    pub fn sample(&mut self) -> GroupElement {
        let angles = self.sample_angles();
        self.chart.element_unchecked(&angles)
    }
}

/// Solve weight_cdf(φ) = u · ∫weight by bisection to 1e-12.
fn invert_cdf(axis: &crate::chart::AxisSpec, u: f64) -> f64 {
    let target = u * axis.weight_integral();
    let (mut lo, mut hi) = (axis.lo, axis.hi);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if axis.weight_cdf(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Stream-seed derivation rule: stream k uses
/// splitmix64(root ⊕ (k+1)·0x9E3779B97F4A7C15). Documented so parallel
/// samplers can be reproduced.
pub fn split_seed(root: u64, stream: u64) -> u64 {
    let mut z = root ^ (stream.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// ---------------------------------------------------------------------------
// Neumann mean axioms

/// Residuals of the seven mean axioms for the chart quadrature:
/// homogeneity, additivity, positivity, normalization, right invariance,
/// left invariance, inversion invariance.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MeanAxiomsReport {
    pub residuals: [f64; 7],
}

impl MeanAxiomsReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Check the mean axioms of the quadrature functional against a battery of
/// real test functions. Randomized translations use the given seed.
pub fn mean_axioms_report(
    chart: &ChartSpec,
    q: &QuadratureSpec,
    battery: &[(String, Box<dyn Fn(&GroupElement) -> f64 + Sync>)],
    seed: u64,
) -> Result<MeanAxiomsReport> {
    let mut res = [0.0f64; 7];
    let mut sampler = HaarSampler::new(chart.clone(), split_seed(seed, 0));
    let a = sampler.sample();
    let a_inv = crate::group::inverse(&a)?;

    let means: Vec<f64> = battery
        .iter()
        .map(|(_, f)| integrate_real(chart, q, |g| f(g)))
        .collect::<Result<_>>()?;

    for (i, (_, f)) in battery.iter().enumerate() {
        let m = means[i];
        // 1) homogeneity
        let scaled = integrate_real(chart, q, |g| 2.5 * f(g))?;
        res[0] = res[0].max((scaled - 2.5 * m).abs());
        // 2) additivity, pairing with the next function cyclically
        let (_, f2) = &battery[(i + 1) % battery.len()];
        let m2 = means[(i + 1) % battery.len()];
        let sum = integrate_real(chart, q, |g| f(g) + f2(g))?;
        res[1] = res[1].max((sum - m - m2).abs());
        // 3) positivity
        let abs_mean = integrate_real(chart, q, |g| f(g).abs())?;
        res[2] = res[2].max((-abs_mean).max(0.0));
        // 5) right invariance
        let right = integrate_real(chart, q, |g| {
            f(&crate::group::multiply(g, &a).expect("compatible"))
        })?;
        res[4] = res[4].max((right - m).abs());
        // 6) left invariance
        let left = integrate_real(chart, q, |g| {
            f(&crate::group::multiply(&a_inv, g).expect("compatible"))
        })?;
        res[5] = res[5].max((left - m).abs());
        // 7) inversion invariance
        let inv = integrate_real(chart, q, |g| f(&crate::group::inverse(g).expect("unitary")))?;
        res[6] = res[6].max((inv - m).abs());
    }
    // 4) normalization
    res[3] = (integrate_real(chart, q, |_| 1.0)? - 1.0).abs();
    Ok(MeanAxiomsReport { residuals: res })
}

/// The polynomial test battery used by invariance checks: entry polynomials
/// of the matrix coefficients up to degree four.
pub fn standard_battery() -> Vec<(String, Box<dyn Fn(&GroupElement) -> f64 + Sync>)> {
    let mut out: Vec<(String, Box<dyn Fn(&GroupElement) -> f64 + Sync>)> = Vec::new();
    out.push((
        "re g11".into(),
        Box::new(|g: &GroupElement| g.entry(0, 0).re),
    ));
    out.push((
        "re g12*g21".into(),
        Box::new(|g: &GroupElement| (g.entry(0, 1) * g.entry(1, 0)).re),
    ));
    out.push((
        "|g11|^2".into(),
        Box::new(|g: &GroupElement| g.entry(0, 0).norm_sqr()),
    ));
    out.push((
        "re tr^2".into(),
        Box::new(|g: &GroupElement| (g.trace() * g.trace()).re),
    ));
    out.push((
        "|tr|^2".into(),
        Box::new(|g: &GroupElement| g.trace().norm_sqr()),
    ));
    out.push((
        "re g11^2 g22".into(),
        Box::new(|g: &GroupElement| (g.entry(0, 0) * g.entry(0, 0) * g.entry(1, 1)).re),
    ));
    out.push((
        "im g11".into(),
        Box::new(|g: &GroupElement| g.entry(0, 0).im),
    ));
    out.push((
        "re g11 g12 g21 g22".into(),
        Box::new(|g: &GroupElement| {
            (g.entry(0, 0) * g.entry(0, 1) * g.entry(1, 0) * g.entry(1, 1)).re
        }),
    ));
    out.push((
        "re tr^4".into(),
        Box::new(|g: &GroupElement| {
            let t = g.trace();
            (t * t * t * t).re
        }),
    ));
    out.push((
        "re g12^2".into(),
        Box::new(|g: &GroupElement| (g.entry(0, 1) * g.entry(0, 1)).re),
    ));
    out
}
