//! Monomial bases in graded-lexicographic order and the induced action of a
//! linear substitution on them.

use crate::error::{Error, Result};
use crate::{CMat, Complex64};
use std::collections::HashMap;

/// The monomials of fixed total degree in `n_vars` variables, in
/// lexicographic order with x₁ > x₂ > ⋯ (graded-lex within one degree).
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub n_vars: usize,
    pub degree: u32,
    pub exponents: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(n_vars: usize, degree: u32) -> Self {
        let mut exponents = Vec::new();
        let mut current = vec![0u32; n_vars];
        enumerate(&mut exponents, &mut current, 0, degree);
        let index = exponents
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        Self {
            n_vars,
            degree,
            exponents,
            index,
        }
    }

    /// Number of monomials, (n+p−1)! / (p!(n−1)!).
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }
}

fn enumerate(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, var: usize, remaining: u32) {
    if var == current.len() - 1 {
        current[var] = remaining;
        out.push(current.clone());
        current[var] = 0;
        return;
    }
    // descending exponent on the leading variable gives lex order
    for e in (0..=remaining).rev() {
        current[var] = e;
        enumerate(out, current, var + 1, remaining - e);
        current[var] = 0;
    }
}

/// Number of monomials of degree p in n variables.
pub fn monomial_count(n_vars: usize, degree: u32) -> usize {
    // binom(n + p - 1, p)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..degree as u128 {
        num *= n_vars as u128 + i;
        den *= i + 1;
    }
    (num / den) as usize
}

/// The matrix of the substitution x ↦ Mx on the degree-`degree` monomials:
/// row j holds the expansion p_j(Mx) = ∑_k A_{jk} p_k(x).
pub fn monomial_action_matrix(m: &CMat, basis: &MonomialBasis) -> Result<CMat> {
    let n = basis.n_vars;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "substitution matrix is {}x{}, basis has {} variables",
            m.nrows(),
            m.ncols(),
            n
        )));
    }
    let size = basis.len();
    let mut out = CMat::zeros(size, size);
    // cache per-variable linear forms (Mx)_i
    for (j, exps) in basis.exponents.iter().enumerate() {
        // expand ∏_i (Mx)_i^{e_i} degree by degree
        let mut poly: HashMap<Vec<u32>, Complex64> = HashMap::new();
        poly.insert(vec![0; n], Complex64::new(1.0, 0.0));
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                let mut next: HashMap<Vec<u32>, Complex64> = HashMap::new();
                for (mono, coeff) in &poly {
                    for k in 0..n {
                        let c = m[(i, k)];
                        if c.norm_sqr() == 0.0 {
                            continue;
                        }
                        let mut mono2 = mono.clone();
                        mono2[k] += 1;
                        *next.entry(mono2).or_insert(Complex64::new(0.0, 0.0)) += coeff * c;
                    }
                }
                poly = next;
            }
        }
        for (mono, coeff) in poly {
            let k = basis
                .index_of(&mono)
                .ok_or_else(|| Error::Internal("monomial outside basis".into()))?;
            out[(j, k)] = coeff;
        }
    }
    Ok(out)
}

/// Trace of the degree-`degree` monomial action of `m`, i.e. the complete
/// homogeneous symmetric function h_degree of its eigenvalues.
pub fn monomial_action_trace(m: &CMat, basis: &MonomialBasis) -> Result<Complex64> {
    Ok(monomial_action_matrix(m, basis)?.trace())
}

/// A polynomial in `n_vars` variables with complex coefficients, stored as
/// dense coefficient vectors per homogeneous degree (graded-lex order).
#[derive(Debug, Clone)]
pub struct Poly {
    pub n_vars: usize,
    /// degree → coefficient vector over `MonomialBasis::new(n_vars, degree)`
    pub parts: std::collections::BTreeMap<u32, Vec<Complex64>>,
}

impl Poly {
    pub fn zero(n_vars: usize) -> Self {
        Self {
            n_vars,
            parts: Default::default(),
        }
    }

    pub fn constant(n_vars: usize, c: Complex64) -> Self {
        let mut p = Self::zero(n_vars);
        p.parts.insert(0, vec![c]);
        p
    }

    /// The coordinate monomial x_i (0-based).
    pub fn variable(n_vars: usize, i: usize) -> Self {
        let mut p = Self::zero(n_vars);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n_vars];
        coeffs[i] = Complex64::new(1.0, 0.0);
        p.parts.insert(1, coeffs);
        p
    }

    pub fn max_degree(&self) -> u32 {
        self.parts.keys().max().copied().unwrap_or(0)
    }

    pub fn coeff(&self, exps: &[u32]) -> Complex64 {
        let d: u32 = exps.iter().sum();
        match self.parts.get(&d) {
            None => Complex64::new(0.0, 0.0),
            Some(v) => {
                let basis = MonomialBasis::new(self.n_vars, d);
                basis.index_of(exps).map_or(Complex64::new(0.0, 0.0), |i| v[i])
            }
        }
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&d, coeffs) in &self.parts {
            let basis = MonomialBasis::new(self.n_vars, d);
            for (c, exps) in coeffs.iter().zip(&basis.exponents) {
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                let mut term = *c;
                for (xi, &e) in x.iter().zip(exps) {
                    term *= xi.powu(e);
                }
                acc += term;
            }
        }
        acc
    }

    /// Coefficientwise max-norm distance between two polynomials.
    pub fn distance(&self, other: &Poly) -> f64 {
        let mut d: f64 = 0.0;
        let degrees: std::collections::BTreeSet<u32> = self
            .parts
            .keys()
            .chain(other.parts.keys())
            .copied()
            .collect();
        for deg in degrees {
            let len = monomial_count(self.n_vars, deg);
            for i in 0..len {
                let a = self.parts.get(&deg).map_or(Complex64::new(0.0, 0.0), |v| v[i]);
                let b = other.parts.get(&deg).map_or(Complex64::new(0.0, 0.0), |v| v[i]);
                d = d.max((a - b).norm());
            }
        }
        d
    }
}
