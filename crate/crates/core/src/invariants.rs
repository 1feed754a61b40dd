//! Invariant generation by averaging: the symmetric-power action on
//! monomials, projection of coefficient polynomials onto the invariant ring,
//! and dimension counting for spaces of invariants.

use crate::chart::ChartSpec;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::haar::integrate_matrix_fn;
use crate::poly::{monomial_action_matrix, monomial_count, MonomialBasis, Poly};
use crate::quad::QuadratureSpec;
use crate::{CMat, Complex64};

/// A form Φ(a; x) = ∑ a_j p_j(x) of homogeneous degree p in n variables,
/// with the p_j in graded-lex order.
#[derive(Debug, Clone)]
pub struct PolyForm {
    pub n_vars: usize,
    pub degree: u32,
    pub coefficients: Vec<Complex64>,
}

impl PolyForm {
    pub fn new(n_vars: usize, degree: u32, coefficients: Vec<Complex64>) -> Result<Self> {
        let m = monomial_count(n_vars, degree);
        if coefficients.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "a form of degree {degree} in {n_vars} variables has {m} coefficients, got {}",
                coefficients.len()
            )));
        }
        Ok(Self {
            n_vars,
            degree,
            coefficients,
        })
    }

    /// Number of coefficients m = (n+p−1)!/(p!(n−1)!).
    pub fn coefficient_count(&self) -> usize {
        self.coefficients.len()
    }

    /// Evaluate Φ(a; x).
    pub fn evaluate(&self, x: &[Complex64]) -> Complex64 {
        let basis = MonomialBasis::new(self.n_vars, self.degree);
        self.coefficients
            .iter()
            .zip(&basis.exponents)
            .map(|(a, exps)| {
                let mut t = *a;
                for (xi, &e) in x.iter().zip(exps) {
                    t *= xi.powu(e);
                }
                t
            })
            .sum()
    }
}

/// The m×m matrix P_g of the substitution action on degree-p monomials,
/// p_j(gx) = ∑_k P_g^{jk} p_k(x). Satisfies P_g P_h = P_{gh}.
pub fn symmetric_power_action(g: &GroupElement, p: u32) -> CMat {
    let basis = MonomialBasis::new(g.dim(), p);
    monomial_action_matrix(g.entries(), &basis).expect("dimensions agree by construction")
}

/// The action on coefficient space: a ↦ ᵗP_g⁻¹ a, computed as the transpose
/// of the action of g⁻¹ so no numerical inversion is involved.
pub fn coefficient_action(g: &GroupElement, p: u32) -> Result<CMat> {
    let ginv = crate::group::inverse(g)?;
    Ok(symmetric_power_action(&ginv, p).transpose())
}

/// J(a) = ∫ F(a′) dg with a′ = ᵗP_g⁻¹ a: the orthogonal-invariant projection
/// of a polynomial F in the coefficients of a degree-p form on n variables.
///
/// The output satisfies J(a′) = J(a) for every group element, and applying
/// the projection twice equals applying it once (both up to quadrature
/// accuracy).
pub fn invariant_project(
    f: &Poly,
    form_vars: usize,
    form_degree: u32,
    chart: &ChartSpec,
    q: &QuadratureSpec,
) -> Result<Poly> {
    let m = monomial_count(chart.n(), form_degree);
    if f.n_vars != m {
        return Err(Error::DimensionMismatch(format!(
            "F must live on the {m} coefficients of a degree-{form_degree} form, has {} variables",
            f.n_vars
        )));
    }
    if form_vars != chart.n() {
        return Err(Error::DimensionMismatch(format!(
            "form has {form_vars} variables but the chart group acts on {}",
            chart.n()
        )));
    }
    let mut out = Poly::zero(m);
    for (&d, coeffs) in &f.parts {
        if d == 0 {
            // constants are already invariant
            out.parts.insert(0, coeffs.clone());
            continue;
        }
        let a_basis = MonomialBasis::new(m, d);
        let width = a_basis.len();
        let cvec = nalgebra::DVector::from_vec(coeffs.clone());
        let x_basis = MonomialBasis::new(chart.n(), form_degree);
        let averaged = integrate_matrix_fn(chart, q, width, |mat, vals| {
            // a' = t(P_{g^{-1}}) a; for the orthogonal/unitary charts the
            // inverse is the conjugate transpose of the matrix itself
            let ginv = mat.adjoint();
            let p_inv = monomial_action_matrix(&ginv, &x_basis).expect("sizes agree");
            let a_sub = p_inv.transpose();
            // the transform of the coefficient polynomial: c ↦ ᵗΠ_{A} c
            let pi = monomial_action_matrix(&a_sub, &a_basis).expect("sizes agree");
            let transformed = pi.transpose() * &cvec;
            vals.copy_from_slice(transformed.as_slice());
        })?;
        out.parts.insert(d, averaged);
    }
    Ok(out)
}

/// Result of counting linearly independent invariants.
#[derive(Debug, Clone, serde::Serialize)]
pub struct InvariantCount {
    /// the Haar average of the character of the degree-r action on
    /// coefficient space
    pub raw: f64,
    pub rounded: i64,
    pub distance_to_integer: f64,
}

/// Number of invariants of degree `r` in the coefficients of a degree-`p`
/// form: ∫ χ_{S^r(coefficient action)}(g) dg, a near-integer.
pub fn invariant_dimension(
    p: u32,
    r: u32,
    chart: &ChartSpec,
    q: &QuadratureSpec,
) -> Result<InvariantCount> {
    let m = monomial_count(chart.n(), p);
    let a_basis = MonomialBasis::new(m, r);
    let x_basis = MonomialBasis::new(chart.n(), p);
    let val = integrate_matrix_fn(chart, q, 1, |mat, vals| {
        let ginv = mat.adjoint();
        let p_inv = monomial_action_matrix(&ginv, &x_basis).expect("sizes agree");
        let a_sub = p_inv.transpose();
        vals[0] = crate::poly::monomial_action_trace(&a_sub, &a_basis).expect("sizes agree");
    })?[0];
    let raw = val.re;
    let rounded = raw.round() as i64;
    let distance = (raw - rounded as f64).abs().max(val.im.abs());
    if distance > 1e-3 {
        return Err(Error::NumericalResolution(format!(
            "invariant count {raw} is {distance:.2e} from an integer; raise the node count"
        )));
    }
    Ok(InvariantCount {
        raw,
        rounded,
        distance_to_integer: distance,
    })
}
