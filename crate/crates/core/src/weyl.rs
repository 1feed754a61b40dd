//! Cartan-subgroup parametrization of SO(n), the B/D root systems, the Weyl
//! denominator, and torus quadrature for class functions.

use crate::error::{Error, Result};
use crate::group::{multiply, planar_rotation, GroupElement};
use crate::Complex64;
use std::f64::consts::TAU;

/// Angles of the Cartan subgroup h(φ) = r₁₂(φ₁) r₃₄(φ₂) ⋯, rank ν = ⌊n/2⌋.
#[derive(Debug, Clone)]
pub struct CartanAngles {
    pub phi: Vec<f64>,
}

impl CartanAngles {
    pub fn new(phi: Vec<f64>) -> Self {
        Self { phi }
    }

    pub fn rank(&self) -> usize {
        self.phi.len()
    }
}

/// Rank of the Cartan subgroup of SO(n).
pub fn cartan_rank(n: usize) -> usize {
    n / 2
}

/// The block-diagonal element r₁₂(φ₁) r₃₄(φ₂) ⋯ of SO(n).
pub fn cartan_element(a: &CartanAngles, n: usize) -> Result<GroupElement> {
    if a.rank() != cartan_rank(n) {
        return Err(Error::DimensionMismatch(format!(
            "SO({n}) Cartan angles have rank {}, got {}",
            cartan_rank(n),
            a.rank()
        )));
    }
    let mut g = GroupElement::identity(crate::group::GroupTag::So, n);
    for (j, &phi) in a.phi.iter().enumerate() {
        g = multiply(&g, &planar_rotation(2 * j + 1, 2 * j + 2, phi, n)?)?;
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootType {
    /// n = 2ν + 1
    B,
    /// n = 2ν
    D,
}

/// Positive roots and half-sum ρ for the Cartan of SO(n).
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub root_type: RootType,
    pub rank: usize,
    /// coordinates over the basis e_j; entries in {−1, 0, 1}
    pub positive_roots: Vec<Vec<i32>>,
    pub rho: Vec<f64>,
}

/// Positive roots of SO(n): {e_j ± e_k (j<k), e_j} for odd n (type B),
/// {e_j ± e_k} for even n (type D).
pub fn positive_roots(n: usize) -> Result<RootSystem> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "root data defined for n >= 3, got {n}"
        )));
    }
    let nu = cartan_rank(n);
    let root_type = if n % 2 == 1 { RootType::B } else { RootType::D };
    let mut roots = Vec::new();
    for j in 0..nu {
        for k in j + 1..nu {
            for sign in [1i32, -1] {
                let mut r = vec![0i32; nu];
                r[j] = 1;
                r[k] = sign;
                roots.push(r);
            }
        }
    }
    if root_type == RootType::B {
        for j in 0..nu {
            let mut r = vec![0i32; nu];
            r[j] = 1;
            roots.push(r);
        }
    }
    let rho: Vec<f64> = (0..nu)
        .map(|j| {
            roots
                .iter()
                .map(|r| r[j] as f64)
                .sum::<f64>()
                / 2.0
        })
        .collect();
    Ok(RootSystem {
        root_type,
        rank: nu,
        positive_roots: roots,
        rho,
    })
}

/// ξ_α(h(φ)) = exp(i ∑_j α_j φ_j). The imaginary unit follows the pairing
/// ⟨e_j, X(φ)⟩ = iφ_j.
pub fn xi(alpha: &[f64], a: &CartanAngles) -> Complex64 {
    let arg: f64 = alpha.iter().zip(&a.phi).map(|(x, p)| x * p).sum();
    Complex64::from_polar(1.0, arg)
}

/// Weyl denominator D(h) = ∏_{α∈Σ⁺} (ξ_{α/2} − ξ_{−α/2}) = ∏ 2i sin(⟨α,φ⟩/2).
///
/// Only |D|² is consumed downstream; for odd n the half-weight phase is
/// double-valued but drops out of the modulus.
pub fn weyl_denominator(a: &CartanAngles, n: usize) -> Result<Complex64> {
    let rs = positive_roots(n)?;
    let mut d = Complex64::new(1.0, 0.0);
    for r in &rs.positive_roots {
        let arg: f64 = r.iter().zip(&a.phi).map(|(&x, p)| x as f64 * p).sum::<f64>() / 2.0;
        d *= Complex64::new(0.0, 2.0 * arg.sin());
    }
    Ok(d)
}

/// |D(h)|² = ∏_{α∈Σ⁺} 4 sin²(⟨α,φ⟩/2), the Jacobian weight of the torus.
pub fn weyl_denominator_sq(a: &CartanAngles, n: usize) -> Result<f64> {
    let rs = positive_roots(n)?;
    let mut d = 1.0;
    for r in &rs.positive_roots {
        let arg: f64 = r.iter().zip(&a.phi).map(|(&x, p)| x as f64 * p).sum::<f64>() / 2.0;
        d *= 4.0 * arg.sin() * arg.sin();
    }
    Ok(d)
}

/// Default torus node count; the trapezoid rule at this density is exact for
/// every trigonometric polynomial met in practice.
pub const DEFAULT_TORUS_NODES: usize = 128;

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct WeylData {
    pub order: u64,
    /// the raw calibration integral ∫|D|² dh before rounding
    pub calibration: f64,
}

/// |W| from the calibration identity 1 = (1/|W|) ∫_H |D(h)|² dh with the
/// normalized torus measure; errors if the integral is not within 1e-6 of an
/// integer.
pub fn weyl_group_order(n: usize, nodes: usize) -> Result<WeylData> {
    let raw = torus_average(n, nodes, |_, d2| d2)?;
    let order = raw.round();
    if (raw - order).abs() > 1e-6 || order < 1.0 {
        return Err(Error::NumericalResolution(format!(
            "Weyl calibration integral {raw} is not an integer"
        )));
    }
    Ok(WeylData {
        order: order as u64,
        calibration: raw,
    })
}

/// (1/|W|) ∫_H f(h) |D(h)|² dh over the ν-torus with normalized dh.
///
/// `f` must be a class function; it is spot-checked for conjugation
/// invariance at 10 random pairs and a warning is logged on failure.
pub fn weyl_integrate<F>(f: F, n: usize, nodes: usize) -> Result<Complex64>
where
    F: Fn(&GroupElement) -> Complex64 + Sync,
{
    spot_check_class_function(&f, n)?;
    let w = weyl_group_order(n, nodes)?;
    let val = torus_average_c(n, nodes, |h, d2| f(h) * d2)?;
    Ok(val / w.order as f64)
}

fn spot_check_class_function<F>(f: &F, n: usize) -> Result<()>
where
    F: Fn(&GroupElement) -> Complex64 + Sync,
{
    use crate::chart::ChartSpec;
    use crate::haar::HaarSampler;
    let mut sampler = HaarSampler::new(ChartSpec::so(n)?, 0x5ca1ab1e);
    let nu = cartan_rank(n);
    let mut worst = 0.0f64;
    for trial in 0..10 {
        let v = sampler.sample();
        let phi: Vec<f64> = (0..nu)
            .map(|j| ((trial * nu + j) as f64 * 0.7391 + 0.31).rem_euclid(TAU))
            .collect();
        let h = cartan_element(&CartanAngles::new(phi), n)?;
        let conj = crate::group::conjugate(&v, &h)?;
        worst = worst.max((f(&conj) - f(&h)).norm());
    }
    if worst > 1e-8 {
        log::warn!("weyl_integrate: integrand is not a class function (residual {worst:.2e})");
    }
    Ok(())
}

fn torus_average(n: usize, nodes: usize, f: impl Fn(&GroupElement, f64) -> f64) -> Result<f64> {
    Ok(torus_average_c(n, nodes, |h, d2| Complex64::new(f(h, d2), 0.0))?.re)
}

/// Average of f(h)·|D(h)|²-style integrands over the torus, midpoint nodes.
fn torus_average_c(
    n: usize,
    nodes: usize,
    f: impl Fn(&GroupElement, f64) -> Complex64,
) -> Result<Complex64> {
    let nu = cartan_rank(n);
    let rs = positive_roots(n)?;
    let step = TAU / nodes as f64;
    let mut idx = vec![0usize; nu];
    let mut acc = Complex64::new(0.0, 0.0);
    let total = nodes.pow(nu as u32);
    let mut phi = vec![0.0f64; nu];
    for flat in 0..total {
        let mut t = flat;
        for j in 0..nu {
            idx[j] = t % nodes;
            t /= nodes;
            phi[j] = (idx[j] as f64 + 0.5) * step;
        }
        let a = CartanAngles::new(phi.clone());
        let mut d2 = 1.0;
        for r in &rs.positive_roots {
            let arg: f64 = r.iter().zip(&phi).map(|(&x, p)| x as f64 * p).sum::<f64>() / 2.0;
            d2 *= 4.0 * arg.sin() * arg.sin();
        }
        let h = cartan_element(&a, n)?;
        acc += f(&h, d2);
    }
    Ok(acc / total as f64)
}
