//! Global angle charts on SO(n) and SU(n), closed-form Haar densities, total
//! volumes, and a finite-difference metric oracle.
//!
//! Chart conventions. The SO(n) chart multiplies blocks E_α(φ) acting as
//! x = E x′ on column vectors, i.e. the 2×2 block [[cos φ, sin φ],
//! [−sin φ, cos φ]] on coordinates (α, α+1); the full element is
//! R = E₁E₂⋯E_{n−1} where E_s runs through block indices n−s, …, n−1 with
//! angles φ_{s−1,s}, …, φ_{0,s}. The alternate chart composes planar
//! rotations r_{i,i+1} (the `planar_rotation` convention) as
//! u = r_{n−1} ⋯ r₂ r₁ with r_j = r_{12}(φ_{1,j}) ⋯ r_{j,j+1}(φ_{j,j}),
//! peeling one sphere per stage. The SU(n) chart uses 2×2 unitary blocks
//! [[a, b], [−b̄, ā]] with a = cos φ e^{iψ}, b = sin φ e^{iχ}.
//!
//! All densities are taken with respect to the embedding line element
//! ds² = ∑ dr² (SO) or ds² = ∑ dc dc̄ (SU); `metric_density` recomputes them
//! from that definition by central finite differences and serves as the
//! independent oracle for the closed forms.

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupTag};
use crate::{CMat, Complex64};
use std::f64::consts::{PI, TAU};

/// Weight profile of one chart angle, as a factor of the invariant density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisWeight {
    /// Constant weight 1.
    Uniform,
    /// (sin φ)^r on a range where sin ≥ 0.
    SinPow(u32),
    /// |sin φ|^r (full-period angles of the alternate chart).
    AbsSinPow(u32),
    /// cos φ · (sin φ)^(2r+1) on [0, π/2).
    CosSinPow(u32),
}

impl AxisWeight {
    pub fn eval(&self, phi: f64) -> f64 {
        match *self {
            AxisWeight::Uniform => 1.0,
            AxisWeight::SinPow(r) => phi.sin().powi(r as i32),
            AxisWeight::AbsSinPow(r) => phi.sin().abs().powi(r as i32),
            AxisWeight::CosSinPow(r) => phi.cos() * phi.sin().powi(2 * r as i32 + 1),
        }
    }
}

/// One chart angle: its half-open range, density weight, and a label.
#[derive(Debug, Clone)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    /// Whether the upper endpoint is included (the alternate chart's polar
    /// angles close at π).
    pub closed_hi: bool,
    pub weight: AxisWeight,
    pub label: String,
}

impl AxisSpec {
    pub fn contains(&self, phi: f64) -> bool {
        phi >= self.lo && (phi < self.hi || (self.closed_hi && phi <= self.hi))
    }

    /// The angle is uniform over a full period, so equally spaced nodes
    /// integrate it spectrally.
    pub fn is_periodic_uniform(&self) -> bool {
        self.weight == AxisWeight::Uniform && (self.hi - self.lo - TAU).abs() < 1e-12
    }

    /// ∫ weight over the range, in closed form.
    pub fn weight_integral(&self) -> f64 {
        match self.weight {
            AxisWeight::Uniform => self.hi - self.lo,
            AxisWeight::SinPow(r) => sin_pow_integral(r, PI),
            AxisWeight::AbsSinPow(r) => 2.0 * sin_pow_integral(r, PI),
            AxisWeight::CosSinPow(r) => 1.0 / (2.0 * r as f64 + 2.0),
        }
    }

    /// Cumulative ∫_lo^φ weight, exact up to rounding (used by the sampler).
    pub fn weight_cdf(&self, phi: f64) -> f64 {
        let x = phi.clamp(self.lo, self.hi);
        match self.weight {
            AxisWeight::Uniform => x - self.lo,
            AxisWeight::SinPow(r) => sin_pow_integral(r, x),
            AxisWeight::AbsSinPow(r) => {
                if x <= PI {
                    sin_pow_integral(r, x)
                } else {
                    sin_pow_integral(r, PI) + sin_pow_integral(r, x - PI)
                }
            }
            AxisWeight::CosSinPow(r) => x.sin().powi(2 * r as i32 + 2) / (2.0 * r as f64 + 2.0),
        }
    }
}

/// ∫₀^φ sin^r t dt by the standard reduction I_r = (−sin^{r−1}φ cos φ + (r−1) I_{r−2}) / r.
fn sin_pow_integral(r: u32, phi: f64) -> f64 {
    match r {
        0 => phi,
        1 => 1.0 - phi.cos(),
        _ => {
            let r = r as f64;
            (-phi.sin().powf(r - 1.0) * phi.cos() + (r - 1.0) * sin_pow_integral(r as u32 - 2, phi))
                / r
        }
    }
}

/// One factor of the chart's ordered matrix product.
#[derive(Debug, Clone, Copy)]
pub enum Step {
    /// Right-multiply by the planar block [[c, sign·s], [−sign·s, c]] on
    /// columns (col_a, col_b).
    Planar {
        col_a: usize,
        col_b: usize,
        sign: f64,
        axis: usize,
    },
    /// Right-multiply by the SU(2) block [[a, b], [−b̄, ā]] on columns
    /// (col_a, col_b), with a = cos φ e^{iψ}, b = sin φ e^{iχ}.
    SuBlock {
        col_a: usize,
        col_b: usize,
        phi_axis: usize,
        psi_axis: usize,
        chi_axis: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    Hurwitz,
    Alternate,
}

impl std::fmt::Display for ChartKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChartKind::Hurwitz => write!(f, "hurwitz"),
            ChartKind::Alternate => write!(f, "alt"),
        }
    }
}

/// A named coordinate chart on SO(n) or SU(n).
#[derive(Debug, Clone)]
pub struct ChartSpec {
    group: GroupTag,
    kind: ChartKind,
    n: usize,
    axes: Vec<AxisSpec>,
    steps: Vec<Step>,
}

impl ChartSpec {
    pub fn new(group: GroupTag, kind: ChartKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "chart dimension must be at least 2, got {n}"
            )));
        }
        let (axes, steps) = match (group, kind) {
            (GroupTag::So, ChartKind::Hurwitz) => so_hurwitz_axes(n),
            (GroupTag::So, ChartKind::Alternate) => so_alternate_axes(n),
            (GroupTag::Su, ChartKind::Hurwitz) => su_hurwitz_axes(n),
            (GroupTag::Su, ChartKind::Alternate) => {
                return Err(Error::InvalidArgument(
                    "the alternate chart is defined only for SO(n)".into(),
                ))
            }
            (GroupTag::Finite(_), _) => {
                return Err(Error::InvalidArgument(
                    "charts exist only for SO(n) and SU(n)".into(),
                ))
            }
        };
        Ok(Self {
            group,
            kind,
            n,
            axes,
            steps,
        })
    }

    pub fn so(n: usize) -> Result<Self> {
        Self::new(GroupTag::So, ChartKind::Hurwitz, n)
    }

    pub fn so_alt(n: usize) -> Result<Self> {
        Self::new(GroupTag::So, ChartKind::Alternate, n)
    }

    pub fn su(n: usize) -> Result<Self> {
        Self::new(GroupTag::Su, ChartKind::Hurwitz, n)
    }

    pub fn group(&self) -> GroupTag {
        self.group
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    /// Matrix dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of chart parameters: n(n−1)/2 for SO(n), n²−1 for SU(n).
    pub fn param_count(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[AxisSpec] {
        &self.axes
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Constant prefactor of the invariant density in this chart.
    ///
    /// SU charts use √n · 2^{n(n−1)/2}: the constant is pinned to the line
    /// element ds² = ∑ dc dc̄ and confirmed against `metric_density`.
    pub fn density_constant(&self) -> f64 {
        let n = self.n as f64;
        match self.group {
            GroupTag::So => 2f64.powf(n * (n - 1.0) / 4.0),
            GroupTag::Su => n.sqrt() * 2f64.powf(n * (n - 1.0) / 2.0),
            GroupTag::Finite(_) => unreachable!(),
        }
    }

    pub fn check_ranges(&self, angles: &[f64]) -> Result<()> {
        if angles.len() != self.axes.len() {
            return Err(Error::DimensionMismatch(format!(
                "chart has {} parameters, got {}",
                self.axes.len(),
                angles.len()
            )));
        }
        for (a, &phi) in self.axes.iter().zip(angles) {
            if !a.contains(phi) {
                return Err(Error::AngleRange(format!(
                    "{} = {phi} outside [{}, {}{}",
                    a.label,
                    a.lo,
                    a.hi,
                    if a.closed_hi { "]" } else { ")" }
                )));
            }
        }
        Ok(())
    }

    /// The chart map. Angles must lie in the chart box.
    pub fn element(&self, angles: &[f64]) -> Result<GroupElement> {
        self.check_ranges(angles)?;
        Ok(self.element_unchecked(angles))
    }

    /// The chart map without the box check (the product of rotation blocks is
    /// defined for any angles; the box only controls coverage).
    pub fn element_unchecked(&self, angles: &[f64]) -> GroupElement {
        let mut m = CMat::identity(self.n, self.n);
        for step in &self.steps {
            apply_step(&mut m, step, angles);
        }
        GroupElement::new(m, self.group).expect("square by construction")
    }

    /// Closed-form unnormalized Haar density at a chart point.
    pub fn density(&self, angles: &[f64]) -> Result<f64> {
        self.check_ranges(angles)?;
        let mut v = self.density_constant();
        for (a, &phi) in self.axes.iter().zip(angles) {
            v *= a.weight.eval(phi);
        }
        Ok(v)
    }

    /// Total volume of the chart box under the closed-form density.
    pub fn box_volume(&self) -> f64 {
        self.density_constant() * self.axes.iter().map(|a| a.weight_integral()).product::<f64>()
    }
}

/// Apply one chart step to the running product, in place.
pub(crate) fn apply_step(m: &mut CMat, step: &Step, angles: &[f64]) {
    match *step {
        Step::Planar {
            col_a,
            col_b,
            sign,
            axis,
        } => {
            let phi = angles[axis];
            let (c, s) = (phi.cos(), sign * phi.sin());
            let n = m.nrows();
            for row in 0..n {
                let xa = m[(row, col_a)];
                let xb = m[(row, col_b)];
                m[(row, col_a)] = xa * c - xb * s;
                m[(row, col_b)] = xa * s + xb * c;
            }
        }
        Step::SuBlock {
            col_a,
            col_b,
            phi_axis,
            psi_axis,
            chi_axis,
        } => {
            let phi = angles[phi_axis];
            let psi = angles[psi_axis];
            let chi = chi_axis.map_or(0.0, |i| angles[i]);
            let a = Complex64::from_polar(phi.cos(), psi);
            let b = Complex64::from_polar(phi.sin(), chi);
            let n = m.nrows();
            for row in 0..n {
                let xa = m[(row, col_a)];
                let xb = m[(row, col_b)];
                m[(row, col_a)] = xa * a - xb * b.conj();
                m[(row, col_b)] = xa * b + xb * a.conj();
            }
        }
    }
}

fn so_hurwitz_axes(n: usize) -> (Vec<AxisSpec>, Vec<Step>) {
    let mut axes = Vec::new();
    let mut steps = Vec::new();
    for s in 1..n {
        for r in (0..s).rev() {
            let axis = axes.len();
            axes.push(AxisSpec {
                lo: 0.0,
                hi: if r == 0 { TAU } else { PI },
                closed_hi: false,
                weight: if r == 0 {
                    AxisWeight::Uniform
                } else {
                    AxisWeight::SinPow(r as u32)
                },
                label: format!("phi[{r},{s}]"),
            });
            // E_{n-1-r} acts on 1-based coordinates (n-1-r, n-r).
            let alpha = n - 1 - r;
            steps.push(Step::Planar {
                col_a: alpha - 1,
                col_b: alpha,
                sign: 1.0,
                axis,
            });
        }
    }
    (axes, steps)
}

fn so_alternate_axes(n: usize) -> (Vec<AxisSpec>, Vec<Step>) {
    let mut axes = Vec::new();
    let mut steps = Vec::new();
    for j in (1..n).rev() {
        for i in 1..=j {
            let axis = axes.len();
            let azimuthal = i == j;
            axes.push(AxisSpec {
                lo: 0.0,
                hi: if azimuthal { TAU } else { PI },
                closed_hi: !azimuthal,
                weight: if i == 1 {
                    AxisWeight::Uniform
                } else if azimuthal {
                    AxisWeight::AbsSinPow(i as u32 - 1)
                } else {
                    AxisWeight::SinPow(i as u32 - 1)
                },
                label: format!("phi[{i},{j}]"),
            });
            steps.push(Step::Planar {
                col_a: i - 1,
                col_b: i,
                sign: -1.0,
                axis,
            });
        }
    }
    (axes, steps)
}

fn su_hurwitz_axes(n: usize) -> (Vec<AxisSpec>, Vec<Step>) {
    let mut axes = Vec::new();
    let mut steps = Vec::new();
    for s in 1..n {
        for r in (0..s).rev() {
            let phi_axis = axes.len();
            axes.push(AxisSpec {
                lo: 0.0,
                hi: PI / 2.0,
                closed_hi: false,
                weight: AxisWeight::CosSinPow(r as u32),
                label: format!("phi[{r},{s}]"),
            });
            let psi_axis = axes.len();
            axes.push(AxisSpec {
                lo: 0.0,
                hi: TAU,
                closed_hi: false,
                weight: AxisWeight::Uniform,
                label: format!("psi[{r},{s}]"),
            });
            let chi_axis = if r == 0 {
                let idx = axes.len();
                axes.push(AxisSpec {
                    lo: 0.0,
                    hi: TAU,
                    closed_hi: false,
                    weight: AxisWeight::Uniform,
                    label: format!("chi[{s}]"),
                });
                Some(idx)
            } else {
                None
            };
            let alpha = n - 1 - r;
            steps.push(Step::SuBlock {
                col_a: alpha - 1,
                col_b: alpha,
                phi_axis,
                psi_axis,
                chi_axis,
            });
        }
    }
    (axes, steps)
}

// ---------------------------------------------------------------------------
// Named angle-vector types

/// Angles φ_{rs} (0 ≤ r < s < n) of the SO(n) chart, stored in chart order.
#[derive(Debug, Clone)]
pub struct AngleVectorSo {
    chart: ChartSpec,
    angles: Vec<f64>,
}

impl AngleVectorSo {
    pub fn zero(n: usize) -> Result<Self> {
        let chart = ChartSpec::so(n)?;
        let angles = vec![0.0; chart.param_count()];
        Ok(Self { chart, angles })
    }

    pub fn from_flat(n: usize, angles: Vec<f64>) -> Result<Self> {
        let chart = ChartSpec::so(n)?;
        chart.check_ranges(&angles)?;
        Ok(Self { chart, angles })
    }

    pub fn set(&mut self, r: usize, s: usize, value: f64) -> Result<()> {
        let idx = self.index_of(r, s)?;
        self.angles[idx] = value;
        Ok(())
    }

    pub fn get(&self, r: usize, s: usize) -> Result<f64> {
        Ok(self.angles[self.index_of(r, s)?])
    }

    fn index_of(&self, r: usize, s: usize) -> Result<usize> {
        let n = self.chart.n();
        if !(r < s && s < n) {
            return Err(Error::IndexRange(format!("no angle phi[{r},{s}] for n={n}")));
        }
        // axes for stage s start at s(s-1)/2 and run r = s-1 .. 0
        Ok(s * (s - 1) / 2 + (s - 1 - r))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.angles
    }

    pub fn chart(&self) -> &ChartSpec {
        &self.chart
    }
}

/// Parameters (φ_{rs}, ψ_{rs}, χ_s) of the SU(n) chart, stored in chart order.
#[derive(Debug, Clone)]
pub struct AngleVectorSu {
    chart: ChartSpec,
    angles: Vec<f64>,
}

impl AngleVectorSu {
    pub fn zero(n: usize) -> Result<Self> {
        let chart = ChartSpec::su(n)?;
        let angles = vec![0.0; chart.param_count()];
        Ok(Self { chart, angles })
    }

    pub fn from_flat(n: usize, angles: Vec<f64>) -> Result<Self> {
        let chart = ChartSpec::su(n)?;
        chart.check_ranges(&angles)?;
        Ok(Self { chart, angles })
    }

    fn base_index(&self, r: usize, s: usize) -> Result<usize> {
        let n = self.chart.n();
        if !(r < s && s < n) {
            return Err(Error::IndexRange(format!("no block ({r},{s}) for n={n}")));
        }
        // stage s contributes 2s + 1 parameters, blocks listed r = s-1 .. 0
        let stage_start: usize = (1..s).map(|t| 2 * t + 1).sum();
        Ok(stage_start + 2 * (s - 1 - r))
    }

    pub fn set_phi(&mut self, r: usize, s: usize, v: f64) -> Result<()> {
        let i = self.base_index(r, s)?;
        self.angles[i] = v;
        Ok(())
    }

    pub fn set_psi(&mut self, r: usize, s: usize, v: f64) -> Result<()> {
        let i = self.base_index(r, s)?;
        self.angles[i + 1] = v;
        Ok(())
    }

    pub fn set_chi(&mut self, s: usize, v: f64) -> Result<()> {
        let i = self.base_index(0, s)?;
        self.angles[i + 2] = v;
        Ok(())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.angles
    }

    pub fn chart(&self) -> &ChartSpec {
        &self.chart
    }
}

/// Angles φ_{i,j} (1 ≤ i ≤ j < n) of the alternate SO(n) chart.
#[derive(Debug, Clone)]
pub struct AngleVectorAlt {
    chart: ChartSpec,
    angles: Vec<f64>,
}

impl AngleVectorAlt {
    pub fn zero(n: usize) -> Result<Self> {
        let chart = ChartSpec::so_alt(n)?;
        let angles = vec![0.0; chart.param_count()];
        Ok(Self { chart, angles })
    }

    pub fn from_flat(n: usize, angles: Vec<f64>) -> Result<Self> {
        let chart = ChartSpec::so_alt(n)?;
        chart.check_ranges(&angles)?;
        Ok(Self { chart, angles })
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        let idx = self.index_of(i, j)?;
        self.angles[idx] = v;
        Ok(())
    }

    fn index_of(&self, i: usize, j: usize) -> Result<usize> {
        let n = self.chart.n();
        if !(1 <= i && i <= j && j < n) {
            return Err(Error::IndexRange(format!("no angle phi[{i},{j}] for n={n}")));
        }
        // stages are j = n-1 down to 1; stage j holds j angles i = 1..=j
        let before: usize = ((j + 1)..n).sum();
        Ok(before + (i - 1))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.angles
    }

    pub fn chart(&self) -> &ChartSpec {
        &self.chart
    }
}

// ---------------------------------------------------------------------------
// Chart maps and densities (operation layer)

/// R = E₁E₂⋯E_{n−1} from Hurwitz angles; validates as SO(n).
pub fn so_from_angles(a: &AngleVectorSo) -> Result<GroupElement> {
    a.chart.element(a.as_slice())
}

/// u = r_{n−1}⋯r₂r₁ from alternate-chart angles; validates as SO(n).
pub fn so_from_angles_alt(a: &AngleVectorAlt) -> Result<GroupElement> {
    a.chart.element(a.as_slice())
}

/// T = E₁E₂⋯E_{n−1} from SU-chart parameters; validates as SU(n).
pub fn su_from_angles(a: &AngleVectorSu) -> Result<GroupElement> {
    a.chart.element(a.as_slice())
}

/// 2^{n(n−1)/4} ∏_{0≤r<s<n} (sin φ_{rs})^r, the unnormalized Haar density in
/// the Hurwitz chart.
pub fn so_density(a: &AngleVectorSo) -> Result<f64> {
    a.chart.density(a.as_slice())
}

/// √n · 2^{n(n−1)/2} · ∏_{r,s} cos φ_{rs} (sin φ_{rs})^{2r+1}.
pub fn su_density(a: &AngleVectorSu) -> Result<f64> {
    a.chart.density(a.as_slice())
}

/// 2^{n(n−1)/4} ∏ |sin φ_{i,j}|^{i−1}, the density of the alternate chart.
pub fn alt_density(a: &AngleVectorAlt) -> Result<f64> {
    a.chart.density(a.as_slice())
}

/// Γ(k/2) for positive integer k, by the recursion Γ(z+1) = zΓ(z).
fn gamma_half(k: u32) -> f64 {
    match k {
        1 => PI.sqrt(),
        2 => 1.0,
        _ => (k as f64 / 2.0 - 1.0) * gamma_half(k - 2),
    }
}

/// Closed-form total volume of SO(n):
/// 2^{(n−1)(n+4)/4} π^{n(n+1)/4} / (Γ(1/2)Γ(2/2)⋯Γ(n/2)).
pub fn so_total_volume(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "so_total_volume requires n >= 2, got {n}"
        )));
    }
    let nf = n as f64;
    let num = 2f64.powf((nf - 1.0) * (nf + 4.0) / 4.0) * PI.powf(nf * (nf + 1.0) / 4.0);
    let den: f64 = (1..=n as u32).map(gamma_half).product();
    Ok(num / den)
}

/// Closed-form integral of the SU(n) chart density over its box.
pub fn su_total_volume(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "su_total_volume requires n >= 2, got {n}"
        )));
    }
    Ok(ChartSpec::su(n)?.box_volume())
}

/// Finite-difference density oracle: embeds the chart into flat coordinates
/// (entry real and imaginary parts), forms the Gram matrix B of the pullback
/// line element by central differences with step h = 1e-5, and returns √det B.
pub fn metric_density(chart: &ChartSpec, angles: &[f64]) -> Result<f64> {
    chart.check_ranges(angles)?;
    let h = 1e-5;
    let p = chart.param_count();
    let n = chart.n();
    let mut jac = nalgebra::DMatrix::<f64>::zeros(2 * n * n, p);
    let mut work = angles.to_vec();
    for k in 0..p {
        work[k] = angles[k] + h;
        let up = chart.element_unchecked(&work);
        work[k] = angles[k] - h;
        let dn = chart.element_unchecked(&work);
        work[k] = angles[k];
        let (eu, ed) = (up.entries(), dn.entries());
        for i in 0..n {
            for j in 0..n {
                let d = (eu[(i, j)] - ed[(i, j)]) / (2.0 * h);
                jac[(2 * (i * n + j), k)] = d.re;
                jac[(2 * (i * n + j) + 1, k)] = d.im;
            }
        }
    }
    let gram = jac.transpose() * &jac;
    match nalgebra::Cholesky::new(gram) {
        Some(ch) => Ok((0..p).map(|i| ch.l()[(i, i)]).product()),
        None => Err(Error::SingularChartPoint(format!(
            "Gram matrix not positive definite at {angles:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{invariant_metric, planar_rotation, validate, Tolerance};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_point(chart: &ChartSpec, margin: f64, rng: &mut impl Rng) -> Vec<f64> {
        chart
            .axes()
            .iter()
            .map(|a| rng.gen_range(a.lo + margin..a.hi - margin))
            .collect()
    }

    #[test]
    fn zero_angles_give_identity() {
        for n in 2..=5 {
            let e = so_from_angles(&AngleVectorSo::zero(n).unwrap()).unwrap();
            assert!(invariant_metric(&e, &GroupElement::identity(GroupTag::So, n)).unwrap() < 1e-15);
            let e = so_from_angles_alt(&AngleVectorAlt::zero(n).unwrap()).unwrap();
            assert!(invariant_metric(&e, &GroupElement::identity(GroupTag::So, n)).unwrap() < 1e-15);
            let e = su_from_angles(&AngleVectorSu::zero(n).unwrap()).unwrap();
            assert!(invariant_metric(&e, &GroupElement::identity(GroupTag::Su, n)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn so2_chart_is_planar_rotation_with_flipped_sign() {
        let theta = 1.234;
        let mut a = AngleVectorSo::zero(2).unwrap();
        a.set(0, 1, theta).unwrap();
        let g = so_from_angles(&a).unwrap();
        let r = planar_rotation(1, 2, -theta, 2).unwrap();
        assert!(invariant_metric(&g, &r).unwrap() < 1e-15);
    }

    #[test]
    fn random_angles_validate_tightly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tol = Tolerance::new(1e-12, 1e-8).unwrap();
        for _ in 0..200 {
            let c = ChartSpec::so(4).unwrap();
            let angles = random_point(&c, 0.0, &mut rng);
            assert!(validate(&c.element(&angles).unwrap(), &tol));

            let c = ChartSpec::so_alt(5).unwrap();
            let angles = random_point(&c, 0.0, &mut rng);
            assert!(validate(&c.element(&angles).unwrap(), &tol));

            let c = ChartSpec::su(3).unwrap();
            let angles = random_point(&c, 0.0, &mut rng);
            assert!(validate(&c.element(&angles).unwrap(), &tol));
        }
    }

    #[test]
    fn chart_consistency_bulk() {
        // at least 10^4 random angle vectors per group for n <= 5
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let tol = Tolerance::new(1e-12, 1e-8).unwrap();
        for n in 2..=5 {
            let cso = ChartSpec::so(n).unwrap();
            let csu = ChartSpec::su(n).unwrap();
            for _ in 0..10_000 {
                let a = random_point(&cso, 0.0, &mut rng);
                assert!(validate(&cso.element(&a).unwrap(), &tol));
                let a = random_point(&csu, 0.0, &mut rng);
                assert!(validate(&csu.element(&a).unwrap(), &tol));
            }
        }
    }

    #[test]
    fn su2_block_matches_closed_form() {
        let (phi, psi, chi) = (0.6, 2.1, 4.3);
        let mut a = AngleVectorSu::zero(2).unwrap();
        a.set_phi(0, 1, phi).unwrap();
        a.set_psi(0, 1, psi).unwrap();
        a.set_chi(1, chi).unwrap();
        let t = su_from_angles(&a).unwrap();
        let av = Complex64::from_polar(phi.cos(), psi);
        let bv = Complex64::from_polar(phi.sin(), chi);
        assert!((t.entry(0, 0) - av).norm() < 1e-15);
        assert!((t.entry(0, 1) - bv).norm() < 1e-15);
        assert!((t.entry(1, 0) + bv.conj()).norm() < 1e-15);
        assert!((t.entry(1, 1) - av.conj()).norm() < 1e-15);
    }

    #[test]
    fn so_density_closed_forms() {
        // n=2: constant sqrt(2)
        let a = AngleVectorSo::from_flat(2, vec![1.0]).unwrap();
        assert_abs_diff_eq!(so_density(&a).unwrap(), 2f64.sqrt(), epsilon = 1e-15);
        // n=3 at phi_12 = pi/2: 2^{3/2}
        let mut a = AngleVectorSo::zero(3).unwrap();
        a.set(1, 2, PI / 2.0).unwrap();
        a.set(0, 2, 1.0).unwrap();
        a.set(0, 1, 2.0).unwrap();
        assert_abs_diff_eq!(so_density(&a).unwrap(), 2f64.powf(1.5), epsilon = 1e-14);
        // degenerate locus
        a.set(1, 2, 0.0).unwrap();
        assert_eq!(so_density(&a).unwrap(), 0.0);
    }

    #[test]
    fn su_density_closed_forms() {
        let mut a = AngleVectorSu::zero(2).unwrap();
        a.set_phi(0, 1, PI / 4.0).unwrap();
        assert_abs_diff_eq!(su_density(&a).unwrap(), 2f64.sqrt(), epsilon = 1e-14);
        a.set_phi(0, 1, 0.0).unwrap();
        assert_eq!(su_density(&a).unwrap(), 0.0);
    }

    #[test]
    fn volumes_closed_form() {
        assert_abs_diff_eq!(
            so_total_volume(2).unwrap(),
            2.0 * 2f64.sqrt() * PI,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            so_total_volume(3).unwrap(),
            2f64.powf(4.5) * PI * PI,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(so_total_volume(4).unwrap(), 128.0 * PI.powi(4), epsilon = 1e-8);
        // SU(2) is the 3-sphere of radius sqrt(2)
        assert_abs_diff_eq!(
            su_total_volume(2).unwrap(),
            4.0 * 2f64.sqrt() * PI * PI,
            epsilon = 1e-12
        );
    }

    #[test]
    fn box_volume_matches_closed_form() {
        for n in 2..=4 {
            let rel = (ChartSpec::so(n).unwrap().box_volume() - so_total_volume(n).unwrap()).abs()
                / so_total_volume(n).unwrap();
            assert!(rel < 1e-13, "n={n} rel={rel}");
        }
    }

    #[test]
    fn metric_density_so2_is_sqrt2() {
        let c = ChartSpec::so(2).unwrap();
        let d = metric_density(&c, &[1.3]).unwrap();
        assert_abs_diff_eq!(d, 2f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn metric_density_agrees_with_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let charts = [
            ChartSpec::so(3).unwrap(),
            ChartSpec::so(4).unwrap(),
            ChartSpec::su(2).unwrap(),
            ChartSpec::su(3).unwrap(),
            ChartSpec::so_alt(3).unwrap(),
            ChartSpec::so_alt(4).unwrap(),
        ];
        for c in &charts {
            for _ in 0..5 {
                let angles = random_point(c, 0.2, &mut rng);
                let cf = c.density(&angles).unwrap();
                let md = metric_density(c, &angles).unwrap();
                let rel = (md - cf).abs() / cf;
                assert!(rel < 1e-6, "{:?} rel={rel}", c.kind());
            }
        }
    }

    #[test]
    fn metric_density_singular_at_degenerate_locus() {
        let c = ChartSpec::so(3).unwrap();
        // phi_{1,2} = 0 kills the sine factor; det B collapses
        let r = metric_density(&c, &[1.0, 0.0, 1.0]);
        match r {
            Err(Error::SingularChartPoint(_)) => {}
            Ok(v) => assert!(v < 1e-8, "expected near-zero density, got {v}"),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn alt_chart_stage_maps_last_basis_vector_to_sphere_point() {
        // n=3, r_2 alone: e_3 goes to (sin a sin b, -cos a sin b, cos b)
        let (a, b) = (0.7, 2.3);
        let mut v = AngleVectorAlt::zero(3).unwrap();
        v.set(1, 2, a).unwrap();
        v.set(2, 2, b).unwrap();
        let u = so_from_angles_alt(&v).unwrap();
        let expect = [a.sin() * b.sin(), -a.cos() * b.sin(), b.cos()];
        for i in 0..3 {
            assert_abs_diff_eq!(u.entry(i, 2).re, expect[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn range_checks_reject_out_of_box() {
        let c = ChartSpec::so(3).unwrap();
        assert!(c.element(&[0.0, 4.0, 0.0]).is_err()); // phi_{1,2} beyond pi
        assert!(c.element(&[7.0, 0.0, 1.0]).is_err()); // phi_{0,1} beyond 2pi
        assert!(c.element(&[0.0, 0.0]).is_err()); // wrong arity
    }

    #[test]
    fn alternate_chart_only_for_so() {
        assert!(ChartSpec::new(GroupTag::Su, ChartKind::Alternate, 3).is_err());
    }

    #[test]
    fn param_counts() {
        assert_eq!(ChartSpec::so(5).unwrap().param_count(), 10);
        assert_eq!(ChartSpec::so_alt(5).unwrap().param_count(), 10);
        assert_eq!(ChartSpec::su(3).unwrap().param_count(), 8);
    }
}
