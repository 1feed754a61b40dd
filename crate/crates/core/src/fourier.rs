//! Convolution, Fourier coefficients, and character projections on finite
//! groups, under the normalized-measure convention ∫ f = (1/h) ∑ f.
//!
//! Everything is generic over the scalar so the same formulas run in exact
//! cyclotomic arithmetic and in floating point. Under this convention the
//! Fourier transform is multiplicative with constant one, A(x∗y) = A(x)A(y),
//! and irreducible characters satisfy χᵢ ∗ χⱼ = δᵢⱼ χᵢ / fᵢ.

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::finite::FiniteGroup;
use crate::regrep::Irrep;
use crate::{CMat, Complex64};
use num_rational::BigRational;

/// Scalars the group-algebra formulas run over.
pub trait GroupScalar: Clone {
    fn zero() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn conj(&self) -> Self;
    fn div_nat(&self, n: u64) -> Self;
    fn is_zero_val(&self) -> bool;
}

impl GroupScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn conj(&self) -> Self {
        num_complex::Complex::conj(self)
    }
    fn div_nat(&self, n: u64) -> Self {
        self / n as f64
    }
    fn is_zero_val(&self) -> bool {
        self.norm() == 0.0
    }
}

impl GroupScalar for Cyclo {
    fn zero() -> Self {
        Cyclo::zero()
    }
    fn add(&self, o: &Self) -> Self {
        Cyclo::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Cyclo::mul(self, o)
    }
    fn conj(&self) -> Self {
        Cyclo::conj(self)
    }
    fn div_nat(&self, n: u64) -> Self {
        self.scale(&BigRational::new(1.into(), (n as i64).into()))
    }
    fn is_zero_val(&self) -> bool {
        self.is_zero()
    }
}

fn check_len<S>(g: &FiniteGroup, x: &[S]) -> Result<()> {
    if x.len() != g.order() {
        return Err(Error::DimensionMismatch(format!(
            "function has {} values, group has order {}",
            x.len(),
            g.order()
        )));
    }
    Ok(())
}

/// (x∗y)(s) = (1/h) ∑_r x(sr⁻¹) y(r).
pub fn convolve<S: GroupScalar>(g: &FiniteGroup, x: &[S], y: &[S]) -> Result<Vec<S>> {
    check_len(g, x)?;
    check_len(g, y)?;
    let h = g.order();
    let mut out = Vec::with_capacity(h);
    for s in 0..h {
        let mut acc = S::zero();
        for r in 0..h {
            let t = x[g.mul(s, g.inv(r))].mul(&y[r]);
            acc = acc.add(&t);
        }
        out.push(acc.div_nat(h as u64));
    }
    Ok(out)
}

/// The unit of the convolution algebra: h·δ at the identity.
pub fn convolution_unit<S: GroupScalar>(g: &FiniteGroup, one: S) -> Vec<S> {
    let mut out = vec![S::zero(); g.order()];
    let h = g.order() as u64;
    // h · δ_E, expressed as one added h times so only Clone/add are needed
    let mut v = S::zero();
    for _ in 0..h {
        v = v.add(&one);
    }
    out[g.identity()] = v;
    out
}

/// x̃(s) = conj(x(s⁻¹)).
pub fn involution<S: GroupScalar>(g: &FiniteGroup, x: &[S]) -> Result<Vec<S>> {
    check_len(g, x)?;
    Ok((0..g.order()).map(|s| x[g.inv(s)].conj()).collect())
}

/// Fourier matrix A(x) = (1/h) ∑_s x(s) conj(E(s)) for a matrix
/// representation; entries are the coefficients α_{ik}(x).
pub fn fourier_matrix(g: &FiniteGroup, x: &[Complex64], rep: &Irrep) -> Result<CMat> {
    check_len(g, x)?;
    let mut acc = CMat::zeros(rep.dim, rep.dim);
    for (s, mat) in rep.mats.iter().enumerate() {
        acc += mat.map(|z| z.conj()) * x[s];
    }
    Ok(acc / Complex64::new(g.order() as f64, 0.0))
}

/// Exact Fourier coefficient against a one-dimensional character:
/// α(x) = (1/h) ∑_s x(s) conj(χ(s)).
pub fn fourier_coefficient_exact(
    g: &FiniteGroup,
    x: &[Cyclo],
    chi: &[Cyclo],
) -> Result<Cyclo> {
    check_len(g, x)?;
    check_len(g, chi)?;
    let mut acc = Cyclo::zero();
    for s in 0..g.order() {
        acc = acc.add(&x[s].mul(&chi[s].conj()));
    }
    Ok(acc.div_nat(g.order() as u64))
}

/// Bessel data on a finite group: (∑_E dim E ∑_{ik} |α_{ik}(x)|², (1/h)∑|x|²).
/// The first never exceeds the second; they agree when x lies in the span of
/// the listed matrix elements.
pub fn bessel_check_finite(
    g: &FiniteGroup,
    x: &[Complex64],
    reps: &[Irrep],
) -> Result<(f64, f64)> {
    check_len(g, x)?;
    let mut lhs = 0.0;
    for rep in reps {
        let a = fourier_matrix(g, x, rep)?;
        lhs += rep.dim as f64 * a.iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    let rhs = x.iter().map(|z| z.norm_sqr()).sum::<f64>() / g.order() as f64;
    Ok((lhs, rhs))
}

/// (P_χ f)(u) = f_deg · (1/h) ∑_s χ(us⁻¹) f(s): the orthogonal projection
/// onto the isotypic block of the (irreducible, unit-norm) character.
pub fn character_projection<S: GroupScalar>(
    g: &FiniteGroup,
    chi: &[S],
    degree: u64,
    f: &[S],
) -> Result<Vec<S>> {
    check_len(g, chi)?;
    check_len(g, f)?;
    let h = g.order();
    let mut out = Vec::with_capacity(h);
    for u in 0..h {
        let mut acc = S::zero();
        for s in 0..h {
            let t = chi[g.mul(u, g.inv(s))].mul(&f[s]);
            acc = acc.add(&t);
        }
        // multiply by the degree, then divide by h
        let mut scaled = S::zero();
        for _ in 0..degree {
            scaled = scaled.add(&acc);
        }
        out.push(scaled.div_nat(h as u64));
    }
    Ok(out)
}

/// Trace of the integral operator f ↦ x∗f, which equals x at the identity.
/// Returned as (trace, x(E)) so callers can assert exact equality.
pub fn convolution_operator_trace<S: GroupScalar>(
    g: &FiniteGroup,
    x: &[S],
) -> Result<(S, S)> {
    check_len(g, x)?;
    // T[u, v] = (1/h) x(uv⁻¹); trace = (1/h) Σ_u x(E) = x(E)
    let h = g.order();
    let mut acc = S::zero();
    for u in 0..h {
        acc = acc.add(&x[g.mul(u, g.inv(u))]);
    }
    Ok((acc.div_nat(h as u64), x[g.identity()].clone()))
}

/// Smallest eigenvalue of the (Hermitian) operator of convolution by x∗x̃;
/// nonnegative up to rounding.
pub fn gram_operator_min_eigenvalue(g: &FiniteGroup, x: &[Complex64]) -> Result<f64> {
    check_len(g, x)?;
    let xt = involution(g, x)?;
    let z = convolve(g, x, &xt)?;
    let h = g.order();
    let m = CMat::from_fn(h, h, |u, v| z[g.mul(u, g.inv(v))] / h as f64);
    let eig = nalgebra::SymmetricEigen::new(m);
    Ok(eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::solve_character_equation;
    use crate::finite::{cyclic_group, symmetric_group};
    use crate::regrep::{extract_irreps, regular_rep_oracle};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rational(n: i64, d: i64) -> Cyclo {
        Cyclo::from_rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn unit_law_exact() {
        let g = symmetric_group(3).unwrap();
        let unit = convolution_unit(&g, Cyclo::from_integer(1));
        let y: Vec<Cyclo> = (0..6).map(|i| rational(2 * i as i64 - 3, 7)).collect();
        let conv = convolve(&g, &unit, &y).unwrap();
        for (a, b) in conv.iter().zip(&y) {
            assert!(a.equals(b));
        }
    }

    #[test]
    fn associativity_exact_and_float() {
        let g = symmetric_group(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // exact rational functions
        let rand_fn = |rng: &mut ChaCha8Rng| -> Vec<Cyclo> {
            (0..6)
                .map(|_| rational(rng.gen_range(-10..10), rng.gen_range(1..5)))
                .collect()
        };
        for _ in 0..5 {
            let (x, y, z) = (rand_fn(&mut rng), rand_fn(&mut rng), rand_fn(&mut rng));
            let a = convolve(&g, &convolve(&g, &x, &y).unwrap(), &z).unwrap();
            let b = convolve(&g, &x, &convolve(&g, &y, &z).unwrap()).unwrap();
            for (u, v) in a.iter().zip(&b) {
                assert!(u.equals(v), "associativity must hold exactly");
            }
        }
        // floating point
        let rand_c = |rng: &mut ChaCha8Rng| -> Vec<Complex64> {
            (0..6)
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect()
        };
        for _ in 0..5 {
            let (x, y, z) = (rand_c(&mut rng), rand_c(&mut rng), rand_c(&mut rng));
            let a = convolve(&g, &convolve(&g, &x, &y).unwrap(), &z).unwrap();
            let b = convolve(&g, &x, &convolve(&g, &y, &z).unwrap()).unwrap();
            let err: f64 = a.iter().zip(&b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn characters_convolve_orthogonally_on_z3() {
        // χᵢ ∗ χⱼ = δᵢⱼ χᵢ (degree one), exactly in Q(ζ₃)
        let g = cyclic_group(3);
        let table = solve_character_equation(&g).unwrap();
        let chis: Vec<Vec<Cyclo>> = (0..3)
            .map(|k| (0..3).map(|e| table.value_at(k, e).clone()).collect())
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                let conv = convolve(&g, &chis[i], &chis[j]).unwrap();
                for (s, v) in conv.iter().enumerate() {
                    if i == j {
                        assert!(v.equals(&chis[i][s]));
                    } else {
                        assert!(v.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn degree_two_character_convolution_scaling() {
        // for the 2-dimensional irreducible of S3: χ ∗ χ = χ / 2
        let g = symmetric_group(3).unwrap();
        let table = solve_character_equation(&g).unwrap();
        let chi: Vec<Cyclo> = (0..6).map(|e| table.value_at(2, e).clone()).collect();
        let conv = convolve(&g, &chi, &chi).unwrap();
        for (s, v) in conv.iter().enumerate() {
            assert!(v.equals(&chi[s].div_nat(2)));
        }
    }

    #[test]
    fn fourier_is_multiplicative_with_constant_one() {
        let g = symmetric_group(3).unwrap();
        let oracle = regular_rep_oracle(&g).unwrap();
        let irreps = extract_irreps(&g, &oracle, 7).unwrap();
        let rep = irreps.iter().find(|r| r.dim == 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let x: Vec<Complex64> = (0..6)
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            let y: Vec<Complex64> = (0..6)
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            let axy = fourier_matrix(&g, &convolve(&g, &x, &y).unwrap(), rep).unwrap();
            let prod = fourier_matrix(&g, &x, rep).unwrap() * fourier_matrix(&g, &y, rep).unwrap();
            assert!((axy - prod).norm() < 1e-12);
        }
    }

    #[test]
    fn fourier_of_matrix_element_is_unit_block() {
        let g = symmetric_group(3).unwrap();
        let oracle = regular_rep_oracle(&g).unwrap();
        let irreps = extract_irreps(&g, &oracle, 7).unwrap();
        let rep = irreps.iter().find(|r| r.dim == 2).unwrap();
        // x = e_{11} of the same irreducible
        let x: Vec<Complex64> = (0..6).map(|s| rep.mats[s][(0, 0)]).collect();
        let a = fourier_matrix(&g, &x, rep).unwrap();
        let mut expect = CMat::zeros(2, 2);
        expect[(0, 0)] = Complex64::new(0.5, 0.0); // E₁₁ / dim
        assert!((a - expect).norm() < 1e-12);
        // x ≡ 1 is orthogonal to a nontrivial irreducible block
        let ones = vec![Complex64::new(1.0, 0.0); 6];
        let a = fourier_matrix(&g, &ones, rep).unwrap();
        assert!(a.norm() < 1e-12);
    }

    #[test]
    fn bessel_on_finite_groups() {
        let g = symmetric_group(3).unwrap();
        let oracle = regular_rep_oracle(&g).unwrap();
        let irreps = extract_irreps(&g, &oracle, 7).unwrap();
        let rep2 = irreps.iter().find(|r| r.dim == 2).unwrap().clone();
        let x: Vec<Complex64> = (0..6).map(|s| rep2.mats[s][(0, 1)]).collect();
        let (lhs, rhs) = bessel_check_finite(&g, &x, std::slice::from_ref(&rep2)).unwrap();
        assert!((lhs - rhs).abs() < 1e-12, "single-block Parseval");
        // dropping the block leaves a strict gap
        let trivial = irreps.iter().find(|r| r.dim == 1).unwrap().clone();
        let (lhs, rhs) = bessel_check_finite(&g, &x, &[trivial]).unwrap();
        assert!(lhs < rhs - 1e-3);
    }

    #[test]
    fn character_projection_exact_idempotent() {
        let g = symmetric_group(3).unwrap();
        let table = solve_character_equation(&g).unwrap();
        let chi: Vec<Cyclo> = (0..6).map(|e| table.value_at(2, e).clone()).collect();
        let f: Vec<Cyclo> = (0..6).map(|i| rational(i as i64 - 2, 3)).collect();
        let p1 = character_projection(&g, &chi, 2, &f).unwrap();
        let p2 = character_projection(&g, &chi, 2, &p1).unwrap();
        for (a, b) in p1.iter().zip(&p2) {
            assert!(a.equals(b), "projection must be exactly idempotent");
        }
    }

    #[test]
    fn projection_reproduces_own_block_and_kills_others() {
        let g = symmetric_group(3).unwrap();
        let table = solve_character_equation(&g).unwrap();
        let oracle = regular_rep_oracle(&g).unwrap();
        let irreps = extract_irreps(&g, &oracle, 7).unwrap();
        let rep2 = irreps.iter().find(|r| r.dim == 2).unwrap();
        let chi2: Vec<Complex64> = (0..6)
            .map(|e| table.value_at(2, e).to_complex())
            .collect();
        let elem: Vec<Complex64> = (0..6).map(|s| rep2.mats[s][(1, 0)]).collect();
        let proj = character_projection(&g, &chi2, 2, &elem).unwrap();
        for (a, b) in proj.iter().zip(&elem) {
            assert!((a - b).norm() < 1e-12);
        }
        // a matrix element of an inequivalent irreducible projects to zero
        let sign_row = table
            .rows
            .iter()
            .position(|r| r[2].equals(&Cyclo::from_integer(-1)))
            .unwrap();
        let sign: Vec<Complex64> = (0..6)
            .map(|e| table.value_at(sign_row, e).to_complex())
            .collect();
        let killed = character_projection(&g, &chi2, 2, &sign).unwrap();
        for v in &killed {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn operator_trace_equals_identity_value() {
        let g = symmetric_group(3).unwrap();
        let x: Vec<Cyclo> = (0..6).map(|i| rational(3 - i as i64, 2)).collect();
        let (tr, xe) = convolution_operator_trace(&g, &x).unwrap();
        assert!(tr.equals(&xe));
    }

    #[test]
    fn gram_operator_is_positive() {
        let g = symmetric_group(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let x: Vec<Complex64> = (0..6)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let min = gram_operator_min_eigenvalue(&g, &x).unwrap();
        assert!(min > -1e-12, "min eigenvalue {min}");
    }
}
