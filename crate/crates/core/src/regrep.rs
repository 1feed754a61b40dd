//! Independent oracle for finite-group character theory: numerical
//! decomposition of the regular representation into isotypic blocks, unitary
//! irreducible matrices extracted from them, and group-determinant
//! factorization checks.

use crate::chartab::CharacterTable;
use crate::error::{Error, Result};
use crate::finite::{conjugacy_classes, ConjClasses, FiniteGroup};
use crate::{CMat, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Cost cap for the h×h eigen decompositions.
const ORACLE_ORDER_CAP: usize = 64;

/// A character table obtained numerically from the regular representation.
#[derive(Debug, Clone)]
pub struct NumericalTable {
    pub degrees: Vec<u64>,
    /// `rows[κ][α]` as complex numbers, same class order as `classes`
    pub rows: Vec<Vec<Complex64>>,
    pub classes: ConjClasses,
    /// orthonormal bases (h × f²) of the isotypic components, aligned with
    /// `degrees`
    pub isotypic: Vec<CMat>,
}

fn left_regular(g: &FiniteGroup, x: usize) -> CMat {
    let h = g.order();
    let mut m = CMat::zeros(h, h);
    for p in 0..h {
        m[(g.mul(x, p), p)] = Complex64::new(1.0, 0.0);
    }
    m
}

fn right_regular(g: &FiniteGroup, x: usize) -> CMat {
    let h = g.order();
    let mut m = CMat::zeros(h, h);
    for p in 0..h {
        m[(g.mul(p, g.inv(x)), p)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Decompose the regular representation: a random self-adjoint central
/// element splits ℓ²(G) into the isotypic components (refined by the class
/// sums), and each block of dimension f² yields the irreducible character of
/// degree f as the normalized trace of the class sums on it.
pub fn regular_rep_oracle(g: &FiniteGroup) -> Result<NumericalTable> {
    let h = g.order();
    if h > ORACLE_ORDER_CAP {
        return Err(Error::CostCap(format!(
            "regular-representation oracle capped at order {ORACLE_ORDER_CAP}, group has {h}"
        )));
    }
    let classes = conjugacy_classes(g);
    let k = classes.count();
    let class_sums: Vec<CMat> = classes
        .classes
        .iter()
        .map(|c| {
            let mut m = CMat::zeros(h, h);
            for &a in c {
                m += left_regular(g, a);
            }
            m
        })
        .collect();

    // Hermitian generators of the center acting on ℓ²(G)
    let mut gens: Vec<CMat> = Vec::new();
    for alpha in 0..k {
        let ap = classes.inverse_class[alpha];
        if ap == alpha {
            gens.push(class_sums[alpha].clone());
        } else if alpha < ap {
            gens.push(&class_sums[alpha] + &class_sums[ap]);
            gens.push((&class_sums[alpha] - &class_sums[ap]).map(|z| z * Complex64::new(0.0, 1.0)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b9);
    let combo = gens.iter().fold(CMat::zeros(h, h), |acc, m| {
        acc + m * Complex64::new(rng.gen::<f64>() - 0.5, 0.0)
    });
    let mut blocks = crate::chartab::split_blocks(&CMat::identity(h, h), &combo);
    for gen in &gens {
        let mut next = Vec::new();
        for b in blocks {
            // isotypic blocks have dimension f² on which the center is scalar;
            // refine any block on which some generator is not scalar
            if is_scalar_on(gen, &b) {
                next.push(b);
            } else {
                next.extend(crate::chartab::split_blocks(&b, gen));
            }
        }
        blocks = next;
    }

    let mut entries: Vec<(u64, Vec<Complex64>, CMat)> = Vec::new();
    for b in blocks {
        let dim = b.ncols();
        let f = (dim as f64).sqrt();
        if (f - f.round()).abs() > 1e-9 || f.round() < 1.0 {
            return Err(Error::Internal(format!(
                "isotypic block dimension {dim} is not a perfect square"
            )));
        }
        let f = f.round();
        let chis: Vec<Complex64> = (0..k)
            .map(|alpha| {
                let restricted = b.adjoint() * &class_sums[alpha] * &b;
                let lambda = restricted.trace() / dim as f64;
                lambda * f / classes.sizes[alpha] as f64
            })
            .collect();
        entries.push((f as u64, chis, b));
    }
    entries.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            for (x, y) in a.1.iter().zip(&b.1) {
                let ord = y.re.total_cmp(&x.re).then_with(|| y.im.total_cmp(&x.im));
                if ord != std::cmp::Ordering::Equal && (x - y).norm() > 1e-9 {
                    return ord;
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    let degrees: Vec<u64> = entries.iter().map(|e| e.0).collect();
    let sum_sq: u64 = degrees.iter().map(|f| f * f).sum();
    if sum_sq != h as u64 {
        return Err(Error::Internal(format!(
            "isotypic dimensions sum to {sum_sq}, expected {h}"
        )));
    }
    Ok(NumericalTable {
        degrees,
        rows: entries.iter().map(|e| e.1.clone()).collect(),
        classes,
        isotypic: entries.into_iter().map(|e| e.2).collect(),
    })
}

fn is_scalar_on(m: &CMat, basis: &CMat) -> bool {
    if basis.ncols() == 1 {
        return true;
    }
    let b = basis.adjoint() * m * basis;
    let dim = b.ncols();
    let lambda = b.trace() / dim as f64;
    let dev = (&b - CMat::identity(dim, dim) * lambda).norm();
    dev < 1e-9 * (1.0 + b.norm())
}

/// Match an exact table against the oracle up to row permutation; returns
/// the worst entrywise deviation of the matched rows.
pub fn match_tables(exact: &CharacterTable, oracle: &NumericalTable) -> Result<f64> {
    let k = exact.k();
    if oracle.rows.len() != k {
        return Err(Error::Internal(format!(
            "oracle found {} irreducibles, table has {k}",
            oracle.rows.len()
        )));
    }
    let mut used = vec![false; k];
    let mut worst: f64 = 0.0;
    for (kappa, row) in exact.rows.iter().enumerate() {
        let target: Vec<Complex64> = row.iter().map(|v| v.to_complex()).collect();
        let mut best: Option<(usize, f64)> = None;
        for (j, orow) in oracle.rows.iter().enumerate() {
            if used[j] || oracle.degrees[j] != exact.degrees[kappa] {
                continue;
            }
            let d = target
                .iter()
                .zip(orow)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        let (j, d) = best.ok_or_else(|| {
            Error::Internal(format!("no oracle row of degree {}", exact.degrees[kappa]))
        })?;
        used[j] = true;
        worst = worst.max(d);
    }
    Ok(worst)
}

/// A unitary irreducible matrix representation extracted from the regular
/// representation.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub dim: usize,
    /// `mats[g]` for every group element g
    pub mats: Vec<CMat>,
}

/// Extract one unitary irreducible block per isotypic component: a random
/// self-adjoint element of the commutant of the right action (complex
/// coefficients with c(g⁻¹) = conj c(g), so quaternionic blocks split too)
/// has f-dimensional eigenspaces inside the f²-dimensional component, each
/// carrying the irreducible once.
pub fn extract_irreps(g: &FiniteGroup, oracle: &NumericalTable, seed: u64) -> Result<Vec<Irrep>> {
    let h = g.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rights: Vec<CMat> = (0..h).map(|x| right_regular(g, x)).collect();
    let mut out = Vec::new();
    for (idx, block) in oracle.isotypic.iter().enumerate() {
        let f = oracle.degrees[idx] as usize;
        let sub = if f == 1 {
            block.clone()
        } else {
            let mut y = CMat::zeros(h, h);
            for x in 0..h {
                let c = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                y += left_regular(g, x) * c + left_regular(g, g.inv(x)) * c.conj();
            }
            let restricted = block.adjoint() * &y * block;
            let eig = nalgebra::SymmetricEigen::new(restricted);
            let dim = f * f;
            let mut order: Vec<usize> = (0..dim).collect();
            order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
            let scale = 1.0 + eig.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let mut found = None;
            let mut start = 0;
            while start < dim {
                let mut end = start + 1;
                while end < dim
                    && (eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]]).abs()
                        < 1e-8 * scale
                {
                    end += 1;
                }
                if end - start == f {
                    let mut cols = CMat::zeros(dim, f);
                    for (c, &i) in order[start..end].iter().enumerate() {
                        cols.set_column(c, &eig.eigenvectors.column(i));
                    }
                    found = Some(block * cols);
                    break;
                }
                start = end;
            }
            found.ok_or_else(|| {
                Error::Internal(format!(
                    "no {f}-dimensional eigenspace inside the isotypic block"
                ))
            })?
        };
        // orthonormalize and restrict the right action
        let q = sub.qr().q();
        let mats: Vec<CMat> = rights.iter().map(|r| q.adjoint() * r * &q).collect();
        // multiplicativity sanity
        for _ in 0..20 {
            let (a, b) = (rng.gen_range(0..h), rng.gen_range(0..h));
            let err = (&mats[a] * &mats[b] - &mats[g.mul(a, b)]).norm();
            if err > 1e-9 {
                return Err(Error::Internal(format!(
                    "extracted block is not multiplicative (residual {err:.2e})"
                )));
            }
        }
        out.push(Irrep { dim: f, mats });
    }
    Ok(out)
}

/// The group determinant Θ(x) = det(x_{PQ⁻¹}).
pub fn group_determinant(g: &FiniteGroup, x: &[Complex64]) -> Result<Complex64> {
    let h = g.order();
    if x.len() != h {
        return Err(Error::DimensionMismatch(format!(
            "need {h} variables, got {}",
            x.len()
        )));
    }
    let m = CMat::from_fn(h, h, |p, q| x[g.mul(p, g.inv(q))]);
    Ok(m.lu().determinant())
}

/// Residuals of the group-determinant factorization checks.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FactorizationReport {
    pub trials: usize,
    /// Θ(x) vs ∏ det(∑ π_λ(R) x_R)^{f_λ} at random complex x
    pub max_rel_residual: f64,
    /// class-constant specialization Θ = ∏ (ξ^{(λ)})^{f_λ²}
    pub max_class_constant_residual: f64,
}

/// At `trials` random complex points, compare Θ(x) with the product of the
/// irreducible factor determinants (each to the power of its degree), and
/// the class-constant specialization with ∏ ξ^{f²}.
pub fn verify_factorization(g: &FiniteGroup, trials: usize, seed: u64) -> Result<FactorizationReport> {
    let oracle = regular_rep_oracle(g)?;
    let irreps = extract_irreps(g, &oracle, seed ^ 0x5ee_d)?;
    let h = g.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_rel: f64 = 0.0;
    let mut max_cc: f64 = 0.0;
    for _ in 0..trials {
        let x: Vec<Complex64> = (0..h)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let theta = group_determinant(g, &x)?;
        let mut prod = Complex64::new(1.0, 0.0);
        for irr in &irreps {
            let mut a = CMat::zeros(irr.dim, irr.dim);
            for (r, mat) in irr.mats.iter().enumerate() {
                a += mat * x[r];
            }
            let d = a.lu().determinant();
            prod *= d.powu(irr.dim as u32);
        }
        let denom = theta.norm().max(prod.norm()).max(1e-300);
        max_rel = max_rel.max((theta - prod).norm() / denom);

        // class-constant x: one random value per conjugacy class
        let per_class: Vec<Complex64> = (0..oracle.classes.count())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let xc: Vec<Complex64> = (0..h)
            .map(|e| per_class[oracle.classes.class_of[e]])
            .collect();
        let theta_c = group_determinant(g, &xc)?;
        let mut prod_c = Complex64::new(1.0, 0.0);
        for (kappa, row) in oracle.rows.iter().enumerate() {
            let f = oracle.degrees[kappa] as f64;
            let xi: Complex64 = (0..oracle.classes.count())
                .map(|alpha| {
                    row[alpha] * per_class[alpha] * oracle.classes.sizes[alpha] as f64
                })
                .sum::<Complex64>()
                / f;
            prod_c *= xi.powu((oracle.degrees[kappa] * oracle.degrees[kappa]) as u32);
        }
        let denom = theta_c.norm().max(prod_c.norm()).max(1e-300);
        max_cc = max_cc.max((theta_c - prod_c).norm() / denom);
    }
    Ok(FactorizationReport {
        trials,
        max_rel_residual: max_rel,
        max_class_constant_residual: max_cc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::solve_character_equation;
    use crate::finite::{
        alternating_group_4, cyclic_group, dihedral_group_4, direct_product, quaternion_group,
        symmetric_group,
    };

    #[test]
    fn oracle_degrees() {
        let o = regular_rep_oracle(&symmetric_group(3).unwrap()).unwrap();
        assert_eq!(o.degrees, vec![1, 1, 2]);
        let o = regular_rep_oracle(&quaternion_group()).unwrap();
        assert_eq!(o.degrees, vec![1, 1, 1, 1, 2]);
        let o = regular_rep_oracle(&direct_product(&cyclic_group(2), &cyclic_group(2))).unwrap();
        assert_eq!(o.degrees, vec![1, 1, 1, 1]);
        // all four sign characters are ±1-valued
        for row in &o.rows {
            for v in row {
                assert!((v.im).abs() < 1e-10 && (v.re.abs() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn oracle_matches_exact_solver_on_corpus() {
        let corpus: Vec<(&str, FiniteGroup)> = vec![
            ("Z2", cyclic_group(2)),
            ("Z3", cyclic_group(3)),
            ("Z4", cyclic_group(4)),
            ("Z2xZ2", direct_product(&cyclic_group(2), &cyclic_group(2))),
            ("S3", symmetric_group(3).unwrap()),
            ("Q8", quaternion_group()),
            ("D4", dihedral_group_4()),
            ("A4", alternating_group_4()),
            ("S4", symmetric_group(4).unwrap()),
        ];
        for (name, g) in corpus {
            let exact = solve_character_equation(&g).unwrap();
            let oracle = regular_rep_oracle(&g).unwrap();
            let dev = match_tables(&exact, &oracle).unwrap();
            assert!(dev < 1e-8, "{name}: deviation {dev:.2e}");
        }
    }

    #[test]
    fn cost_cap_enforced() {
        let g = symmetric_group(5).unwrap();
        assert!(matches!(regular_rep_oracle(&g), Err(Error::CostCap(_))));
    }

    #[test]
    fn group_determinant_basics() {
        let g = cyclic_group(2);
        // delta at identity: identity matrix
        let x = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!((group_determinant(&g, &x).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        // Z2: x_E² − x_A²
        let (xe, xa) = (Complex64::new(1.3, 0.2), Complex64::new(-0.4, 0.9));
        let theta = group_determinant(&g, &[xe, xa]).unwrap();
        assert!((theta - (xe * xe - xa * xa)).norm() < 1e-12);
        // constant vector has rank-1 circulant: Θ = 0 for h ≥ 2
        let g = cyclic_group(3);
        let c = Complex64::new(0.7, -0.1);
        let theta = group_determinant(&g, &[c, c, c]).unwrap();
        assert!(theta.norm() < 1e-12);
    }

    #[test]
    fn factorization_s3_q8() {
        for g in [symmetric_group(3).unwrap(), quaternion_group()] {
            let r = verify_factorization(&g, 20, 99).unwrap();
            assert!(r.max_rel_residual < 1e-8, "{:?}", r);
            assert!(r.max_class_constant_residual < 1e-8, "{:?}", r);
        }
    }

    #[test]
    fn abelian_factorization_is_linear() {
        // Θ of an abelian group splits into the characters' linear forms
        let g = cyclic_group(4);
        let o = regular_rep_oracle(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<Complex64> = (0..4)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let theta = group_determinant(&g, &x).unwrap();
        let mut prod = Complex64::new(1.0, 0.0);
        for row in &o.rows {
            let lin: Complex64 = (0..4)
                .map(|e| row[o.classes.class_of[e]] * x[e])
                .sum();
            prod *= lin;
        }
        assert!((theta - prod).norm() / theta.norm().max(1e-12) < 1e-10);
    }

    #[test]
    fn empty_trial_report() {
        let g = symmetric_group(3).unwrap();
        let r = verify_factorization(&g, 0, 1).unwrap();
        assert_eq!(r.trials, 0);
        assert_eq!(r.max_rel_residual, 0.0);
    }
}
