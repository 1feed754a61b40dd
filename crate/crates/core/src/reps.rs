//! Representations of the compact groups: evaluators, characters,
//! unitarization by Haar averaging, Schur averages, orthogonality of matrix
//! elements and characters, and the projection calculus, all through chart
//! quadrature.

use crate::chart::ChartSpec;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::haar::NodeGrid;
use crate::poly::{monomial_action_matrix, MonomialBasis};
use crate::quad::QuadratureSpec;
use crate::{CMat, Complex64};
use std::sync::Arc;

/// A finite-dimensional representation: a dimension and an evaluator.
#[derive(Clone)]
pub struct Representation {
    pub dim: usize,
    pub label: String,
    eval: Arc<dyn Fn(&GroupElement) -> CMat + Send + Sync>,
}

impl std::fmt::Debug for Representation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Representation({}, dim {})", self.label, self.dim)
    }
}

impl Representation {
    pub fn evaluate(&self, g: &GroupElement) -> CMat {
        (self.eval)(g)
    }

    /// The defining representation π(g) = g.
    pub fn defining(n: usize) -> Self {
        Self {
            dim: n,
            label: format!("defining({n})"),
            eval: Arc::new(|g: &GroupElement| g.entries().clone()),
        }
    }

    /// The trivial one-dimensional representation.
    pub fn trivial() -> Self {
        Self {
            dim: 1,
            label: "trivial".into(),
            eval: Arc::new(|_| CMat::identity(1, 1)),
        }
    }

    /// The action on degree-p monomials (symmetric power of the defining
    /// representation, in the plain monomial basis).
    pub fn sym_power(n: usize, p: u32) -> Self {
        let basis = MonomialBasis::new(n, p);
        let dim = basis.len();
        Self {
            dim,
            label: format!("sym^{p}"),
            eval: Arc::new(move |g: &GroupElement| {
                monomial_action_matrix(g.entries(), &basis).expect("dimensions agree")
            }),
        }
    }

    /// Block direct sum.
    pub fn direct_sum(a: &Representation, b: &Representation) -> Self {
        let (da, db) = (a.dim, b.dim);
        let (ea, eb) = (a.eval.clone(), b.eval.clone());
        Self {
            dim: da + db,
            label: format!("{} (+) {}", a.label, b.label),
            eval: Arc::new(move |g| {
                let mut m = CMat::zeros(da + db, da + db);
                m.view_mut((0, 0), (da, da)).copy_from(&ea(g));
                m.view_mut((da, da), (db, db)).copy_from(&eb(g));
                m
            }),
        }
    }

    /// The equivalent representation S π(g) S⁻¹.
    pub fn conjugated(rep: &Representation, s: CMat) -> Result<Self> {
        let s_inv = s
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("singular change of basis".into()))?;
        let eval = rep.eval.clone();
        Ok(Self {
            dim: rep.dim,
            label: format!("{}~", rep.label),
            eval: Arc::new(move |g| &s * eval(g) * &s_inv),
        })
    }

    pub fn character(&self) -> Character {
        Character { parent: self.clone() }
    }
}

/// The trace character of a representation; a class function.
#[derive(Clone, Debug)]
pub struct Character {
    pub parent: Representation,
}

impl Character {
    pub fn evaluate(&self, g: &GroupElement) -> Complex64 {
        self.parent.evaluate(g).trace()
    }
}

/// Worst multiplicativity residual ‖π(g)π(h) − π(gh)‖ over random pairs.
pub fn multiplicativity_residual(
    rep: &Representation,
    chart: &ChartSpec,
    seed: u64,
    trials: usize,
) -> Result<f64> {
    let mut s = crate::haar::HaarSampler::new(chart.clone(), seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let g = s.sample();
        let h = s.sample();
        let gh = crate::group::multiply(&g, &h)?;
        worst = worst.max((rep.evaluate(&g) * rep.evaluate(&h) - rep.evaluate(&gh)).norm());
    }
    Ok(worst)
}

/// Average the Gram matrix G = ∫ π(g)† π(g) dg, factor G = S†S, and return
/// S π S⁻¹, which is unitary (within quadrature accuracy).
pub fn unitarize(
    rep: &Representation,
    chart: &ChartSpec,
    q: &QuadratureSpec,
) -> Result<Representation> {
    let grid = NodeGrid::build(chart, q)?;
    let mut gram = CMat::zeros(rep.dim, rep.dim);
    for (g, w) in grid.elements.iter().zip(&grid.weights) {
        let m = rep.evaluate(g);
        gram += m.adjoint() * m * Complex64::new(*w, 0.0);
    }
    let chol = nalgebra::Cholesky::new(gram)
        .ok_or_else(|| Error::Quadrature("averaged Gram matrix is numerically singular".into()))?;
    let s = chol.l().adjoint();
    Representation::conjugated(rep, s)
}

/// Worst deviation of π(g)†π(g) from the identity over the sample grid.
pub fn unitarity_residual(
    rep: &Representation,
    chart: &ChartSpec,
    seed: u64,
    trials: usize,
) -> f64 {
    let mut s = crate::haar::HaarSampler::new(chart.clone(), seed);
    let mut worst: f64 = 0.0;
    let id = CMat::identity(rep.dim, rep.dim);
    for _ in 0..trials {
        let g = s.sample();
        let m = rep.evaluate(&g);
        worst = worst.max((m.adjoint() * m - &id).norm());
    }
    worst
}

/// The averaged operator V = ∫ π(g⁻¹) U π(g) dg with its deviation from the
/// scalar tr(U)/dim · I expected for irreducible π.
#[derive(Debug, Clone)]
pub struct SchurAverage {
    pub matrix: CMat,
    pub expected_scalar: Complex64,
    /// ‖V − (tr V / dim) I‖: non-scalar output flags a reducible input
    pub deviation_from_scalar: f64,
}

pub fn schur_average(
    rep: &Representation,
    u: &CMat,
    chart: &ChartSpec,
    q: &QuadratureSpec,
) -> Result<SchurAverage> {
    if u.nrows() != rep.dim || u.ncols() != rep.dim {
        return Err(Error::DimensionMismatch(format!(
            "U is {}x{}, rep has dim {}",
            u.nrows(),
            u.ncols(),
            rep.dim
        )));
    }
    let grid = NodeGrid::build(chart, q)?;
    let mut acc = CMat::zeros(rep.dim, rep.dim);
    for (g, w) in grid.elements.iter().zip(&grid.weights) {
        let m = rep.evaluate(g);
        let m_inv = rep.evaluate(&crate::group::inverse(g)?);
        acc += m_inv * u * m * Complex64::new(*w, 0.0);
    }
    let scalar = acc.trace() / rep.dim as f64;
    let dev = (&acc - CMat::identity(rep.dim, rep.dim) * scalar).norm();
    Ok(SchurAverage {
        matrix: acc,
        expected_scalar: u.trace() / rep.dim as f64,
        deviation_from_scalar: dev,
    })
}

/// ⟨t¹_{ab}, t²_{cd}⟩ = ∫ t¹_{ab}(g) conj(t²_{cd}(g)) dg.
pub fn matrix_element_inner(
    rep1: &Representation,
    ab: (usize, usize),
    rep2: &Representation,
    cd: (usize, usize),
    chart: &ChartSpec,
    q: &QuadratureSpec,
) -> Result<Complex64> {
    let grid = NodeGrid::build(chart, q)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (g, w) in grid.elements.iter().zip(&grid.weights) {
        let x = rep1.evaluate(g)[ab];
        let y = rep2.evaluate(g)[cd];
        acc += x * y.conj() * *w;
    }
    Ok(acc)
}

/// ⟨χ₁, χ₂⟩ = ∫ χ₁ conj(χ₂) dg: 1 on an irreducible with itself, 0 across
/// inequivalent irreducibles, and the multiplicity pairing in general.
pub fn character_inner(
    chi1: &Character,
    chi2: &Character,
    chart: &ChartSpec,
    q: &QuadratureSpec,
) -> Result<Complex64> {
    let grid = NodeGrid::build(chart, q)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (g, w) in grid.elements.iter().zip(&grid.weights) {
        acc += chi1.evaluate(g) * chi2.evaluate(g).conj() * *w;
    }
    Ok(acc)
}

/// Gram matrix of all matrix elements of the given (unitary) representations
/// in one sweep: rows/columns run over (rep, i, j) in order.
pub fn matrix_element_gram(
    reps: &[Representation],
    chart: &ChartSpec,
    q: &QuadratureSpec,
) -> Result<CMat> {
    let grid = NodeGrid::build(chart, q)?;
    let total: usize = reps.iter().map(|r| r.dim * r.dim).sum();
    let mut gram = CMat::zeros(total, total);
    let mut values = vec![Complex64::new(0.0, 0.0); total];
    for (g, w) in grid.elements.iter().zip(&grid.weights) {
        let mut at = 0;
        for rep in reps {
            let m = rep.evaluate(g);
            for i in 0..rep.dim {
                for j in 0..rep.dim {
                    values[at] = m[(i, j)];
                    at += 1;
                }
            }
        }
        for r in 0..total {
            for c in 0..total {
                gram[(r, c)] += values[r] * values[c].conj() * *w;
            }
        }
    }
    Ok(gram)
}

/// The expected Gram pattern δ_{rep,rep'} δ_{ii'} δ_{jj'} / dim.
pub fn expected_gram(reps: &[Representation]) -> CMat {
    let total: usize = reps.iter().map(|r| r.dim * r.dim).sum();
    let mut m = CMat::zeros(total, total);
    let mut at = 0;
    for rep in reps {
        for _ in 0..rep.dim * rep.dim {
            m[(at, at)] = Complex64::new(1.0 / rep.dim as f64, 0.0);
            at += 1;
        }
    }
    m
}

/// Fourier matrix A(x) = ∫ x(s) conj(E(s)) ds against a unitary
/// representation; entries are the coefficients α_{ik}(x).
pub fn fourier_matrix_compact<F>(
    f: F,
    rep: &Representation,
    chart: &ChartSpec,
    q: &QuadratureSpec,
) -> Result<CMat>
where
    F: Fn(&GroupElement) -> Complex64,
{
    let grid = NodeGrid::build(chart, q)?;
    let mut acc = CMat::zeros(rep.dim, rep.dim);
    for (g, w) in grid.elements.iter().zip(&grid.weights) {
        acc += rep.evaluate(g).map(|z| z.conj()) * (f(g) * *w);
    }
    Ok(acc)
}

/// Bessel data (∑_E dim E ∑|α_{ik}(x)|², ∫|x|² ds): the first never exceeds
/// the second, with equality when x lies in the span of the listed matrix
/// elements.
pub fn bessel_check<F>(
    f: F,
    reps: &[Representation],
    chart: &ChartSpec,
    q: &QuadratureSpec,
) -> Result<(f64, f64)>
where
    F: Fn(&GroupElement) -> Complex64,
{
    let grid = NodeGrid::build(chart, q)?;
    let values: Vec<Complex64> = grid.elements.iter().map(&f).collect();
    let mut lhs = 0.0;
    for rep in reps {
        let mut a = CMat::zeros(rep.dim, rep.dim);
        for ((g, w), v) in grid.elements.iter().zip(&grid.weights).zip(&values) {
            a += rep.evaluate(g).map(|z| z.conj()) * (v * *w);
        }
        lhs += rep.dim as f64 * a.iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    let rhs: f64 = values
        .iter()
        .zip(&grid.weights)
        .map(|(v, w)| v.norm_sqr() * w)
        .sum();
    Ok((lhs, rhs))
}

/// (P_χ f)(u) = dim · ∫ χ(us⁻¹) f(s) ds, materialized over a quadrature
/// grid so it can be evaluated anywhere and re-projected.
pub struct ProjectedFn {
    grid: Arc<NodeGrid>,
    f_values: Vec<Complex64>,
    chi: Character,
}

impl ProjectedFn {
    pub fn evaluate(&self, u: &GroupElement) -> Result<Complex64> {
        let dim = self.chi.parent.dim as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for ((s, w), fv) in self
            .grid
            .elements
            .iter()
            .zip(&self.grid.weights)
            .zip(&self.f_values)
        {
            let us_inv = crate::group::multiply(u, &crate::group::inverse(s)?)?;
            acc += self.chi.evaluate(&us_inv) * fv * *w;
        }
        Ok(acc * dim)
    }

    /// Values of the projection on its own grid (used for re-projection).
    pub fn tabulate_on_grid(&self) -> Result<Vec<Complex64>> {
        self.grid
            .elements
            .iter()
            .map(|u| self.evaluate(u))
            .collect()
    }

    pub fn grid(&self) -> &Arc<NodeGrid> {
        &self.grid
    }

    /// Project again with the same character (for idempotence checks).
    pub fn reproject(&self) -> Result<ProjectedFn> {
        Ok(ProjectedFn {
            grid: self.grid.clone(),
            f_values: self.tabulate_on_grid()?,
            chi: self.chi.clone(),
        })
    }
}

/// The orthogonal projection P_χ applied to a function on the group.
pub fn character_projection<F>(
    chi: &Character,
    f: F,
    chart: &ChartSpec,
    q: &QuadratureSpec,
) -> Result<ProjectedFn>
where
    F: Fn(&GroupElement) -> Complex64,
{
    let grid = Arc::new(NodeGrid::build(chart, q)?);
    let f_values: Vec<Complex64> = grid.elements.iter().map(&f).collect();
    Ok(ProjectedFn {
        grid,
        f_values,
        chi: chi.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::planar_rotation;
    use crate::haar::HaarSampler;
    use approx::assert_abs_diff_eq;

    fn su2() -> ChartSpec {
        ChartSpec::su(2).unwrap()
    }

    fn so3() -> ChartSpec {
        ChartSpec::so(3).unwrap()
    }

    fn q16() -> QuadratureSpec {
        QuadratureSpec::gauss(16)
    }

    #[test]
    fn sym_power_dims_and_trivial() {
        assert_eq!(Representation::sym_power(2, 0).dim, 1);
        for p in 0..5u32 {
            assert_eq!(Representation::sym_power(2, p).dim, (p + 1) as usize);
        }
        // sym^0 is the trivial representation
        let rep = Representation::sym_power(3, 0);
        let mut s = HaarSampler::new(so3(), 1);
        let g = s.sample();
        assert!((rep.evaluate(&g) - CMat::identity(1, 1)).norm() < 1e-15);
    }

    #[test]
    fn defining_character_of_rotation() {
        let theta = 0.83;
        let g = planar_rotation(1, 2, theta, 3).unwrap();
        let chi = Representation::defining(3).character();
        assert_abs_diff_eq!(chi.evaluate(&g).re, 1.0 + 2.0 * theta.cos(), epsilon = 1e-14);
    }

    #[test]
    fn characters_are_class_functions() {
        let chi = Representation::sym_power(2, 2).character();
        let mut s = HaarSampler::new(su2(), 5);
        for _ in 0..20 {
            let g = s.sample();
            let v = s.sample();
            let c = crate::group::conjugate(&v, &g).unwrap();
            assert!((chi.evaluate(&g) - chi.evaluate(&c)).norm() < 1e-9);
        }
    }

    #[test]
    fn representations_are_multiplicative() {
        for (rep, chart) in [
            (Representation::defining(3), so3()),
            (Representation::sym_power(2, 2), su2()),
            (Representation::sym_power(3, 2), so3()),
        ] {
            let r = multiplicativity_residual(&rep, &chart, 2, 100).unwrap();
            assert!(r < 1e-9, "{}: {r}", rep.label);
        }
    }

    #[test]
    fn unitarize_repairs_a_skewed_representation() {
        // deliberately non-unitary equivalent of the SU(2) defining rep
        let mut s = CMat::identity(2, 2);
        s[(0, 0)] = Complex64::new(2.0, 0.0);
        let skew = Representation::conjugated(&Representation::defining(2), s).unwrap();
        assert!(unitarity_residual(&skew, &su2(), 3, 50) > 0.5);
        let fixed = unitarize(&skew, &su2(), &q16()).unwrap();
        assert!(unitarity_residual(&fixed, &su2(), 3, 50) < 1e-7);
        // character is unchanged by the repair
        let mut sampler = HaarSampler::new(su2(), 9);
        for _ in 0..10 {
            let g = sampler.sample();
            let a = skew.character().evaluate(&g);
            let b = fixed.character().evaluate(&g);
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn unitarize_fixes_already_unitary() {
        let rep = Representation::defining(2);
        let fixed = unitarize(&rep, &su2(), &q16()).unwrap();
        assert!(unitarity_residual(&fixed, &su2(), 4, 50) < 1e-9);
        let trivial = unitarize(&Representation::trivial(), &su2(), &q16()).unwrap();
        let g = HaarSampler::new(su2(), 1).sample();
        assert!((trivial.evaluate(&g) - CMat::identity(1, 1)).norm() < 1e-12);
    }

    #[test]
    fn schur_average_scalar_for_irreducible() {
        let rep = Representation::defining(3);
        // U = I averages to I
        let id = CMat::identity(3, 3);
        let out = schur_average(&rep, &id, &so3(), &q16()).unwrap();
        assert!((out.matrix - &id).norm() < 1e-10);
        // U = E11 averages to I/3
        let mut e11 = CMat::zeros(3, 3);
        e11[(0, 0)] = Complex64::new(1.0, 0.0);
        let out = schur_average(&rep, &e11, &so3(), &q16()).unwrap();
        assert!((out.matrix - id * Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-7);
        assert!(out.deviation_from_scalar < 1e-7);
        assert!((out.expected_scalar - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn schur_average_flags_reducible() {
        let red = Representation::direct_sum(&Representation::defining(3), &Representation::trivial());
        let mut e11 = CMat::zeros(4, 4);
        e11[(0, 0)] = Complex64::new(1.0, 0.0);
        let out = schur_average(&red, &e11, &so3(), &q16()).unwrap();
        assert!(
            out.deviation_from_scalar > 1e-2,
            "block structure must show up: {}",
            out.deviation_from_scalar
        );
    }

    #[test]
    fn matrix_element_orthogonality() {
        let def = Representation::defining(2);
        let v = matrix_element_inner(&def, (0, 0), &def, (0, 0), &su2(), &q16()).unwrap();
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-7);
        // inequivalent irreducibles are orthogonal
        let sym2 = unitarize(&Representation::sym_power(2, 2), &su2(), &q16()).unwrap();
        let v = matrix_element_inner(&def, (0, 1), &sym2, (1, 2), &su2(), &q16()).unwrap();
        assert!(v.norm() < 1e-7);
        // off-index case on SO(3)
        let def3 = Representation::defining(3);
        let v = matrix_element_inner(&def3, (0, 1), &def3, (1, 0), &so3(), &q16()).unwrap();
        assert!(v.norm() < 1e-7);
    }

    #[test]
    fn character_norms_and_multiplicities() {
        let def3 = Representation::defining(3).character();
        let v = character_inner(&def3, &def3, &so3(), &q16()).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-8);

        let sym2 = Representation::sym_power(2, 2).character();
        let triv = Representation::trivial().character();
        let v = character_inner(&sym2, &triv, &su2(), &q16()).unwrap();
        assert!(v.norm() < 1e-8);

        // S²(R³) contains the trivial representation exactly once
        let s2 = Representation::sym_power(3, 2).character();
        let v = character_inner(&s2, &triv, &so3(), &q16()).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn character_inner_conjugate_symmetric_and_positive() {
        let a = Representation::defining(3).character();
        let b = Representation::sym_power(3, 2).character();
        let ab = character_inner(&a, &b, &so3(), &q16()).unwrap();
        let ba = character_inner(&b, &a, &so3(), &q16()).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-10);
        let aa = character_inner(&a, &a, &so3(), &q16()).unwrap();
        assert!(aa.re > 0.0 && aa.im.abs() < 1e-10);
    }

    #[test]
    fn small_gram_is_block_diagonal() {
        let reps = [
            unitarize(&Representation::sym_power(2, 0), &su2(), &q16()).unwrap(),
            Representation::defining(2),
        ];
        let gram = matrix_element_gram(&reps, &su2(), &q16()).unwrap();
        let expect = expected_gram(&reps);
        assert!((gram - expect).norm() < 1e-7);
    }

    #[test]
    fn bessel_single_block_parseval() {
        let def = Representation::defining(2);
        let (lhs, rhs) = bessel_check(
            |g| g.entry(0, 0),
            std::slice::from_ref(&def),
            &su2(),
            &q16(),
        )
        .unwrap();
        assert!((lhs - 0.5).abs() < 1e-7, "lhs {lhs}");
        assert!((lhs - rhs).abs() < 1e-7);

        let triv = Representation::trivial();
        let (lhs, rhs) = bessel_check(
            |_| Complex64::new(1.0, 0.0),
            std::slice::from_ref(&triv),
            &su2(),
            &q16(),
        )
        .unwrap();
        assert!((lhs - 1.0).abs() < 1e-10 && (rhs - 1.0).abs() < 1e-10);

        // strict gap: the defining character of SO(3) against the trivial rep
        let triv = Representation::trivial();
        let (lhs, rhs) = bessel_check(
            |g| g.trace(),
            std::slice::from_ref(&triv),
            &so3(),
            &q16(),
        )
        .unwrap();
        assert!(lhs.abs() < 1e-8);
        assert!((rhs - 1.0).abs() < 1e-8);
    }

    #[test]
    fn projection_calculus() {
        let q = QuadratureSpec::gauss(12);
        let def = Representation::defining(2);
        let chi = def.character();
        // a matrix element of the same irreducible is reproduced
        let p = character_projection(&chi, |g| g.entry(0, 1), &su2(), &q).unwrap();
        let mut s = HaarSampler::new(su2(), 31);
        for _ in 0..5 {
            let u = s.sample();
            let got = p.evaluate(&u).unwrap();
            assert!((got - u.entry(0, 1)).norm() < 1e-7, "{got}");
        }
        // a matrix element of an inequivalent irreducible dies
        let sym2 = unitarize(&Representation::sym_power(2, 2), &su2(), &q).unwrap();
        let p0 = character_projection(&chi, move |g| sym2.evaluate(g)[(0, 0)], &su2(), &q).unwrap();
        for _ in 0..5 {
            let u = s.sample();
            assert!(p0.evaluate(&u).unwrap().norm() < 1e-7);
        }
        // idempotence
        let p2 = p.reproject().unwrap();
        for _ in 0..5 {
            let u = s.sample();
            let a = p.evaluate(&u).unwrap();
            let b = p2.evaluate(&u).unwrap();
            assert!((a - b).norm() < 1e-7);
        }
    }
}
