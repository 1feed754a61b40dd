//! Character tables of finite groups from the class-algebra structure
//! constants: simultaneous diagonalization of the commuting class
//! multiplication matrices finds the normalized characters numerically, the
//! values are reconstructed exactly as sums of roots of unity, and every
//! defining identity is then verified in exact cyclotomic arithmetic.

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::finite::{conjugacy_classes, structure_constants, ConjClasses, FiniteGroup, StructureConstants};
use crate::{CMat, Complex64};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A complete character table with exact entries.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    /// all entries live in Q(ζ_m) for this m (the group exponent)
    pub cyclotomic_order: usize,
    /// irreducible degrees f^(κ), row order
    pub degrees: Vec<u64>,
    /// `rows[κ][α]` = χ^(κ) on class α
    pub rows: Vec<Vec<Cyclo>>,
    pub classes: ConjClasses,
}

impl CharacterTable {
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// χ^(κ) at a group element.
    pub fn value_at(&self, kappa: usize, element: usize) -> &Cyclo {
        &self.rows[kappa][self.classes.class_of[element]]
    }

    /// Numerical embedding of the table.
    pub fn to_complex(&self) -> CMat {
        let k = self.k();
        CMat::from_fn(k, k, |i, j| self.rows[i][j].to_complex())
    }
}

/// Finds the k simultaneous eigenvectors of the class multiplication
/// matrices, reads off the normalized characters, recovers the degrees from
/// ∑_R χ(R)χ(R⁻¹) = h, reconstructs each value exactly as a sum of roots of
/// unity, and verifies the character equation, both orthogonality relations,
/// ∑ f² = h, and f | h exactly before returning.
pub fn solve_character_equation(g: &FiniteGroup) -> Result<CharacterTable> {
    let classes = conjugacy_classes(g);
    let sc = structure_constants(g, &classes);
    let k = classes.count();
    let h = g.order() as f64;

    // Balanced class-sum matrices S_α[γ,β] = c_{αβγ} √(h_γ/h_β) with
    // c_{αβγ} = h_{αβγ'}/h_γ; in this basis the adjoint of S_α is S_{α'}.
    let mut s_mats = Vec::with_capacity(k);
    for alpha in 0..k {
        let mut m = CMat::zeros(k, k);
        for beta in 0..k {
            for gamma in 0..k {
                let c = sc.get(alpha, beta, classes.inverse_class[gamma]) as f64
                    / classes.sizes[gamma] as f64;
                m[(gamma, beta)] = Complex64::new(
                    c * (classes.sizes[gamma] as f64 / classes.sizes[beta] as f64).sqrt(),
                    0.0,
                );
            }
        }
        s_mats.push(m);
    }

    // Hermitian generating set of the commuting family.
    let mut gens: Vec<CMat> = Vec::new();
    for alpha in 0..k {
        let ap = classes.inverse_class[alpha];
        if ap == alpha {
            gens.push(s_mats[alpha].clone());
        } else if alpha < ap {
            gens.push(&s_mats[alpha] + &s_mats[ap]);
            gens.push((&s_mats[alpha] - &s_mats[ap]).map(|z| z * Complex64::new(0.0, 1.0)));
        }
    }

    // Random Hermitian combination, then refinement by each generator.
    let mut rng = ChaCha8Rng::seed_from_u64(0x0f0b_57ac);
    let combo = gens.iter().fold(CMat::zeros(k, k), |acc, m| {
        acc + m * Complex64::new(rng.gen::<f64>() - 0.5, 0.0)
    });
    let mut blocks = split_blocks(&CMat::identity(k, k), &combo);
    for gen in &gens {
        let mut next = Vec::new();
        for b in blocks {
            if b.ncols() == 1 {
                next.push(b);
            } else {
                next.extend(split_blocks(&b, gen));
            }
        }
        blocks = next;
    }
    if blocks.iter().any(|b| b.ncols() != 1) {
        return Err(Error::Internal(
            "class-matrix eigenvector multiplicity unresolved".into(),
        ));
    }

    // Normalized characters from the eigenvalues; degrees from the norm
    // identity.
    let mut raw_rows: Vec<(u64, Vec<Complex64>)> = Vec::with_capacity(k);
    for b in &blocks {
        let v = b.column(0);
        let f_values: Vec<Complex64> = (0..k)
            .map(|alpha| {
                let sv = &s_mats[alpha] * v;
                let rayleigh = v.dotc(&sv); // v† S v  (unit vector)
                rayleigh / classes.sizes[alpha] as f64
            })
            .collect();
        let denom: Complex64 = (0..k)
            .map(|a| f_values[a] * f_values[classes.inverse_class[a]] * classes.sizes[a] as f64)
            .sum();
        let f_sq = h / denom.re;
        let f = f_sq.sqrt();
        let f_round = f.round();
        if (f - f_round).abs() > 1e-6 || denom.im.abs() > 1e-8 || f_round < 1.0 {
            return Err(Error::Internal(format!(
                "irreducible degree {f} did not resolve to an integer"
            )));
        }
        let chi: Vec<Complex64> = f_values.iter().map(|x| x * f_round).collect();
        raw_rows.push((f_round as u64, chi));
    }

    // Exact reconstruction: on each class, χ is a sum of d-th roots of unity
    // with integer multiplicities, d the representative's order.
    let m_exp = g.exponent();
    let mut rows: Vec<Vec<Cyclo>> = Vec::with_capacity(k);
    let mut degrees = Vec::with_capacity(k);
    for (f, chi_num) in &raw_rows {
        let mut row = Vec::with_capacity(k);
        for alpha in 0..k {
            let rep = classes.representative(alpha);
            let d = g.element_order(rep);
            // χ on the powers of the representative
            let mut powers = Vec::with_capacity(d);
            let mut y = g.identity();
            for _ in 0..d {
                powers.push(chi_num[classes.class_of[y]]);
                y = g.mul(y, rep);
            }
            let mut value = Cyclo::zero();
            let mut total_mult = 0i64;
            for t in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for (u, z) in powers.iter().enumerate() {
                    acc += z * Complex64::from_polar(
                        1.0,
                        -std::f64::consts::TAU * (t * u) as f64 / d as f64,
                    );
                }
                acc /= d as f64;
                let mult = acc.re.round();
                if (acc.re - mult).abs() > 1e-6 || acc.im.abs() > 1e-6 || mult < 0.0 {
                    return Err(Error::Internal(format!(
                        "eigenvalue multiplicity {acc} did not resolve to a nonnegative integer"
                    )));
                }
                if mult > 0.0 {
                    let zeta = Cyclo::root_of_unity(m_exp, (m_exp / d) * t);
                    value = value.add(&zeta.scale(&BigRational::from_integer((mult as i64).into())));
                    total_mult += mult as i64;
                }
            }
            if total_mult != *f as i64 {
                return Err(Error::Internal(format!(
                    "multiplicities sum to {total_mult}, expected the degree {f}"
                )));
            }
            row.push(value);
        }
        rows.push(row);
        degrees.push(*f);
    }

    let mut table = CharacterTable {
        cyclotomic_order: m_exp,
        degrees,
        rows,
        classes,
    };
    canonical_row_order(&mut table);

    // Exact post-verification: the eigen-solver was only a search device.
    if !verify_character_equation(&table, &sc) {
        return Err(Error::Internal("character equation fails exactly".into()));
    }
    if !verify_row_orthogonality(&table, g.order()) || !verify_column_orthogonality(&table, g.order())
    {
        return Err(Error::Internal("orthogonality fails exactly".into()));
    }
    let sum_sq: u64 = table.degrees.iter().map(|f| f * f).sum();
    if sum_sq != g.order() as u64 {
        return Err(Error::Internal(format!(
            "sum of squared degrees {sum_sq} != {}",
            g.order()
        )));
    }
    if table.degrees.iter().any(|f| g.order() as u64 % f != 0) {
        return Err(Error::Internal("a degree does not divide the order".into()));
    }
    Ok(table)
}

/// Split the subspace spanned by (orthonormal) `basis` into eigenblocks of
/// the Hermitian operator `m` restricted to it.
pub(crate) fn split_blocks(basis: &CMat, m: &CMat) -> Vec<CMat> {
    let b = basis.adjoint() * m * basis;
    let dim = b.ncols();
    let eig = nalgebra::SymmetricEigen::new(b.clone());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let scale = 1.0 + eig.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut out = Vec::new();
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim
            && (eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]]).abs()
                < 1e-8 * scale
        {
            end += 1;
        }
        let mut cols = CMat::zeros(b.nrows(), end - start);
        for (c, &i) in order[start..end].iter().enumerate() {
            cols.set_column(c, &eig.eigenvectors.column(i));
        }
        out.push(basis * cols);
        start = end;
    }
    out
}

/// Deterministic row order: by degree, then by the class-wise value order
/// (exact equality first, then numerical real/imaginary comparison).
fn canonical_row_order(table: &mut CharacterTable) {
    let k = table.k();
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&i, &j| {
        table.degrees[i].cmp(&table.degrees[j]).then_with(|| {
            for a in 0..k {
                let (x, y) = (&table.rows[i][a], &table.rows[j][a]);
                if x.equals(y) {
                    continue;
                }
                let (cx, cy) = (x.to_complex(), y.to_complex());
                let ord = cy
                    .re
                    .total_cmp(&cx.re)
                    .then_with(|| cy.im.total_cmp(&cx.im));
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    table.degrees = idx.iter().map(|&i| table.degrees[i]).collect();
    table.rows = idx.iter().map(|&i| table.rows[i].clone()).collect();
}

/// Exact check of h_β h_γ χ_β χ_γ = f ∑_α h_{α′βγ} χ_α for every row and
/// every pair of classes.
pub fn verify_character_equation(table: &CharacterTable, sc: &StructureConstants) -> bool {
    let k = table.k();
    let sizes = &table.classes.sizes;
    for (kappa, row) in table.rows.iter().enumerate() {
        let f = BigRational::from_integer((table.degrees[kappa] as i64).into());
        for beta in 0..k {
            for gamma in 0..k {
                let lhs = row[beta].mul(&row[gamma]).scale(&BigRational::from_integer(
                    ((sizes[beta] * sizes[gamma]) as i64).into(),
                ));
                let mut rhs = Cyclo::zero();
                for alpha in 0..k {
                    let coeff = sc.get(table.classes.inverse_class[alpha], beta, gamma);
                    if coeff != 0 {
                        rhs = rhs.add(&row[alpha].scale(&BigRational::from_integer(coeff.into())));
                    }
                }
                if !lhs.equals(&rhs.scale(&f)) {
                    return false;
                }
            }
        }
    }
    true
}

/// ∑_α h_α χ^(κ)_α conj(χ^(λ)_α) = h δ_{κλ}, exactly.
pub fn verify_row_orthogonality(table: &CharacterTable, h: usize) -> bool {
    let k = table.k();
    for i in 0..k {
        for j in 0..k {
            let mut acc = Cyclo::zero();
            for a in 0..k {
                let term = table.rows[i][a]
                    .mul(&table.rows[j][a].conj())
                    .scale(&BigRational::from_integer((table.classes.sizes[a] as i64).into()));
                acc = acc.add(&term);
            }
            let expect = if i == j { h as i64 } else { 0 };
            if !acc.equals(&Cyclo::from_integer(expect)) {
                return false;
            }
        }
    }
    true
}

/// ∑_κ χ^(κ)_α conj(χ^(κ)_β) = δ_{αβ} h/h_α, exactly.
pub fn verify_column_orthogonality(table: &CharacterTable, h: usize) -> bool {
    let k = table.k();
    for a in 0..k {
        for b in 0..k {
            let mut acc = Cyclo::zero();
            for row in &table.rows {
                acc = acc.add(&row[a].mul(&row[b].conj()));
            }
            let expect = if a == b {
                Cyclo::from_rational(BigRational::new(
                    (h as i64).into(),
                    (table.classes.sizes[a] as i64).into(),
                ))
            } else {
                Cyclo::zero()
            };
            if !acc.equals(&expect) {
                return false;
            }
        }
    }
    true
}

/// Exact determinant of the table (Gaussian elimination over Q(ζ)); the
/// table of a genuine group is always invertible.
pub fn table_determinant(table: &CharacterTable) -> Cyclo {
    let k = table.k();
    let mut m: Vec<Vec<Cyclo>> = table.rows.clone();
    let mut det = Cyclo::one();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else {
            return Cyclo::zero();
        };
        if p != col {
            m.swap(p, col);
            det = det.neg();
        }
        let pv = m[col][col].clone();
        det = det.mul(&pv);
        let inv = pv.inverse().expect("nonzero pivot");
        for r in col + 1..k {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].mul(&inv);
            for c in col..k {
                let t = factor.mul(&m[col][c]);
                m[r][c] = m[r][c].sub(&t);
            }
        }
    }
    det
}

/// Residuals of the four defining identities of a character function:
/// χ(E) = f; χ(AB) = χ(BA); h χ(A)χ(B) = f ∑_R χ(A R⁻¹ B R);
/// h = ∑_R χ(R)χ(R⁻¹). `exact[i]` records whether identity i holds exactly;
/// `residuals[i]` is the numerical magnitude of the worst violation.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AxiomReport {
    pub exact: [bool; 4],
    pub residuals: [f64; 4],
}

impl AxiomReport {
    pub fn all_exact(&self) -> bool {
        self.exact.iter().all(|&b| b)
    }
}

/// Verify the character axioms for every row of a table, exactly.
pub fn frobenius_axiom_check(g: &FiniteGroup, table: &CharacterTable) -> AxiomReport {
    let mut exact = [true; 4];
    let mut residuals = [0.0f64; 4];
    let h = g.order();
    let classes = &table.classes;
    let mut note = |idx: usize, diff: &Cyclo| {
        if !diff.is_zero() {
            exact[idx] = false;
            residuals[idx] = residuals[idx].max(diff.to_complex().norm());
        }
    };
    for (kappa, row) in table.rows.iter().enumerate() {
        let f = table.degrees[kappa] as i64;
        // 1) χ(E) = f
        let diff = row[classes.class_of[g.identity()]].sub(&Cyclo::from_integer(f));
        note(0, &diff);
        // 2) χ(AB) = χ(BA) for all pairs
        for a in 0..h {
            for b in 0..h {
                let d = row[classes.class_of[g.mul(a, b)]]
                    .sub(&row[classes.class_of[g.mul(b, a)]]);
                note(1, &d);
            }
        }
        // 3) h χ(A)χ(B) = f ∑_R χ(A R⁻¹ B R); sum collapsed to class counts
        for a in 0..h {
            for b in 0..h {
                let mut counts = vec![0i64; classes.count()];
                for r in 0..h {
                    let x = g.mul(g.mul(a, g.inv(r)), g.mul(b, r));
                    counts[classes.class_of[x]] += 1;
                }
                let mut rhs = Cyclo::zero();
                for (gamma, &c) in counts.iter().enumerate() {
                    if c != 0 {
                        rhs = rhs.add(&row[gamma].scale(&BigRational::from_integer(c.into())));
                    }
                }
                let lhs = row[classes.class_of[a]]
                    .mul(&row[classes.class_of[b]])
                    .scale(&BigRational::from_integer((h as i64).into()));
                let d = lhs.sub(&rhs.scale(&BigRational::from_integer(f.into())));
                note(2, &d);
            }
        }
        // 4) h = ∑_R χ(R)χ(R⁻¹)
        let mut acc = Cyclo::zero();
        for (alpha, &sz) in classes.sizes.iter().enumerate() {
            let term = row[alpha]
                .mul(&row[classes.inverse_class[alpha]])
                .scale(&BigRational::from_integer((sz as i64).into()));
            acc = acc.add(&term);
        }
        let d = acc.sub(&Cyclo::from_integer(h as i64));
        note(3, &d);
    }
    AxiomReport { exact, residuals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{
        alternating_group_4, cyclic_group, dihedral_group_4, direct_product, quaternion_group,
        symmetric_group,
    };

    fn corpus() -> Vec<(&'static str, FiniteGroup)> {
        vec![
            ("Z2", cyclic_group(2)),
            ("Z3", cyclic_group(3)),
            ("Z4", cyclic_group(4)),
            ("Z2xZ2", direct_product(&cyclic_group(2), &cyclic_group(2))),
            ("S3", symmetric_group(3).unwrap()),
            ("Q8", quaternion_group()),
            ("D4", dihedral_group_4()),
            ("A4", alternating_group_4()),
            ("S4", symmetric_group(4).unwrap()),
        ]
    }

    #[test]
    fn z4_characters_are_fourth_roots() {
        let g = cyclic_group(4);
        let t = solve_character_equation(&g).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 1]);
        // every entry is a power of i
        for row in &t.rows {
            for v in row {
                let c = v.to_complex();
                assert!((c.norm() - 1.0).abs() < 1e-12);
                let fourth = c * c * c * c;
                assert!((fourth - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
        // at least one row contains i itself
        assert!(t
            .rows
            .iter()
            .any(|r| r.iter().any(|v| v.equals(&Cyclo::root_of_unity(4, 1)))));
    }

    #[test]
    fn s3_table_matches_known_values() {
        let g = symmetric_group(3).unwrap();
        let t = solve_character_equation(&g).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 2]);
        assert_eq!(t.classes.sizes, vec![1, 2, 3]);
        // class order: identity, 3-cycles, transpositions
        let expect: [[i64; 3]; 3] = [[1, 1, 1], [1, 1, -1], [2, -1, 0]];
        for (row, erow) in t.rows.iter().zip(expect) {
            for (v, e) in row.iter().zip(erow) {
                assert!(v.equals(&Cyclo::from_integer(e)), "expected {e}");
            }
        }
    }

    #[test]
    fn a4_has_cube_roots_of_unity() {
        let g = alternating_group_4();
        let t = solve_character_equation(&g).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 3]);
        let omega = Cyclo::root_of_unity(3, 1);
        let found = t
            .rows
            .iter()
            .any(|r| r.iter().any(|v| v.equals(&omega)));
        assert!(found, "ω must appear in the A4 table");
    }

    #[test]
    fn corpus_tables_verify_exactly() {
        for (name, g) in corpus() {
            let t = solve_character_equation(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
            let sc = structure_constants(&g, &t.classes);
            assert!(verify_character_equation(&t, &sc), "{name}: character equation");
            assert!(verify_row_orthogonality(&t, g.order()), "{name}: rows");
            assert!(verify_column_orthogonality(&t, g.order()), "{name}: columns");
            assert!(!table_determinant(&t).is_zero(), "{name}: determinant");
            let report = frobenius_axiom_check(&g, &t);
            assert!(report.all_exact(), "{name}: axioms {report:?}");
            let sum_sq: u64 = t.degrees.iter().map(|f| f * f).sum();
            assert_eq!(sum_sq, g.order() as u64, "{name}: sum of squares");
            for f in &t.degrees {
                assert_eq!(g.order() as u64 % f, 0, "{name}: degree divides order");
            }
        }
    }

    #[test]
    fn corrupted_table_detected() {
        let g = symmetric_group(3).unwrap();
        let mut t = solve_character_equation(&g).unwrap();
        t.rows[2][1] = Cyclo::from_integer(5);
        let sc = structure_constants(&g, &t.classes);
        assert!(!verify_character_equation(&t, &sc));
        let report = frobenius_axiom_check(&g, &t);
        assert!(!report.all_exact());
        assert!(report.residuals.iter().any(|&r| r > 0.1));
    }

    #[test]
    fn q8_degrees() {
        let t = solve_character_equation(&quaternion_group()).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn s4_degrees() {
        let t = solve_character_equation(&symmetric_group(4).unwrap()).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 2, 3, 3]);
    }

    #[test]
    fn deterministic_output() {
        let g = symmetric_group(4).unwrap();
        let a = solve_character_equation(&g).unwrap();
        let b = solve_character_equation(&g).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            for (x, y) in ra.iter().zip(rb) {
                assert!(x.equals(y));
            }
        }
    }

    #[test]
    fn s5_table_solves_exactly() {
        // beyond the default corpus; the order-120 group skips the
        // regular-representation oracle (cost cap) but verifies exactly
        let g = symmetric_group(5).unwrap();
        let t = solve_character_equation(&g).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 4, 4, 5, 5, 6]);
        let sc = structure_constants(&g, &t.classes);
        assert!(verify_character_equation(&t, &sc));
        assert!(verify_row_orthogonality(&t, 120));
    }

    #[test]
    fn psl_2_5_table_solves_exactly() {
        // PSL(2,5) is A5; its table carries golden-ratio entries from Q(ζ5)
        let g = crate::finite::group_from_permutations(&[
            vec![1, 2, 3, 4, 0],
            vec![1, 2, 0, 3, 4],
        ])
        .unwrap();
        assert_eq!(g.order(), 60);
        let t = solve_character_equation(&g).unwrap();
        assert_eq!(t.degrees, vec![1, 3, 3, 4, 5]);
        let sc = structure_constants(&g, &t.classes);
        assert!(verify_character_equation(&t, &sc));
        assert!(verify_row_orthogonality(&t, 60));
        // the two degree-3 rows are irrational on the 5-cycles
        let irrational = t
            .rows
            .iter()
            .flat_map(|r| r.iter())
            .filter(|v| !v.is_rational())
            .count();
        assert_eq!(irrational, 4);
        // and the oracle agrees
        let oracle = crate::regrep::regular_rep_oracle(&g).unwrap();
        assert!(crate::regrep::match_tables(&t, &oracle).unwrap() < 1e-8);
    }
}
