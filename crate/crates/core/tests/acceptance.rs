//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see every line.

use haarlab::chart::{
    metric_density, so_total_volume, su_total_volume, ChartKind, ChartSpec,
};
use haarlab::chartab::{
    frobenius_axiom_check, solve_character_equation, verify_character_equation,
    verify_column_orthogonality, verify_row_orthogonality,
};
use haarlab::finite::{
    alternating_group_4, cyclic_group, dihedral_group_4, direct_product, quaternion_group,
    structure_constants, symmetric_group, FiniteGroup,
};
use haarlab::group::GroupElement;
use haarlab::haar::{integrate_real, integrate_trace_powers, mean_axioms_report, standard_battery, HaarSampler};
use haarlab::invariants::{invariant_dimension, invariant_project};
use haarlab::poly::Poly;
use haarlab::quad::{box_volume_quadrature, QuadratureSpec};
use haarlab::regrep::{match_tables, regular_rep_oracle, verify_factorization};
use haarlab::reps::{character_inner, expected_gram, matrix_element_gram, unitarize, Representation};
use haarlab::weyl::{weyl_group_order, weyl_integrate, DEFAULT_TORUS_NODES};
use haarlab::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn criterion(number: u32, name: &str, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {number} [{status}] {name}: {detail}");
    assert!(pass, "criterion {number} failed: {name}: {detail}");
}

#[test]
fn criterion_1_volume_formulas() {
    let q = QuadratureSpec::gauss(32);
    let mut worst = 0.0f64;
    for n in 2..=4 {
        let chart = ChartSpec::so(n).unwrap();
        let quad = box_volume_quadrature(&chart, &q);
        let closed = so_total_volume(n).unwrap();
        worst = worst.max((quad - closed).abs() / closed);
    }
    // independently derived values: circle of radius sqrt(2), and the n=3 box
    let geo2 = 2.0 * 2f64.sqrt() * PI;
    let geo3 = 2f64.powf(4.5) * PI * PI;
    let d2 = (so_total_volume(2).unwrap() - geo2).abs() / geo2;
    let d3 = (so_total_volume(3).unwrap() - geo3).abs() / geo3;
    // SU(2): the 3-sphere of radius sqrt(2)
    let su2 = box_volume_quadrature(&ChartSpec::su(2).unwrap(), &q);
    let sphere = 4.0 * 2f64.sqrt() * PI * PI;
    let dsu = (su2 - sphere).abs() / sphere;
    let pass = worst < 1e-6 && d2 < 1e-12 && d3 < 1e-12 && dsu < 1e-8;
    criterion(
        1,
        "volume formulas",
        pass,
        format!("worst SO rel err {worst:.2e}; geometric anchors {d2:.1e}/{d3:.1e}; SU(2) vs sphere {dsu:.2e}"),
    );
    let _ = su_total_volume(2).unwrap();
}

#[test]
fn criterion_2_density_metric_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let charts = [
        ChartSpec::so(3).unwrap(),
        ChartSpec::so(4).unwrap(),
        ChartSpec::su(2).unwrap(),
        ChartSpec::su(3).unwrap(),
    ];
    let mut worst = 0.0f64;
    for chart in &charts {
        for _ in 0..100 {
            let angles: Vec<f64> = chart
                .axes()
                .iter()
                .map(|a| rng.gen_range(a.lo + 0.15..a.hi - 0.15))
                .collect();
            let cf = chart.density(&angles).unwrap();
            let md = metric_density(chart, &angles).unwrap();
            worst = worst.max((md - cf).abs() / cf);
        }
    }
    criterion(
        2,
        "density-metric oracle (100 interior points each on SO(3), SO(4), SU(2), SU(3))",
        worst < 1e-6,
        format!("worst relative deviation {worst:.2e}"),
    );
}

#[test]
fn criterion_3_schur_orthogonality() {
    let chart = ChartSpec::su(2).unwrap();
    let q = QuadratureSpec::gauss(24);
    let reps = vec![
        Representation::sym_power(2, 0),
        Representation::sym_power(2, 1),
        unitarize(&Representation::sym_power(2, 2), &chart, &q).unwrap(),
    ];
    let gram = matrix_element_gram(&reps, &chart, &q).unwrap();
    let expect = expected_gram(&reps);
    assert_eq!(gram.nrows(), 14);
    let dev = (&gram - &expect)
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max);
    let chars: Vec<_> = reps.iter().map(Representation::character).collect();
    let mut norm_dev = 0.0f64;
    let mut cross_dev = 0.0f64;
    for (i, ci) in chars.iter().enumerate() {
        let n = character_inner(ci, ci, &chart, &q).unwrap();
        norm_dev = norm_dev.max((n - Complex64::new(1.0, 0.0)).norm());
        for cj in chars.iter().skip(i + 1) {
            cross_dev = cross_dev.max(character_inner(ci, cj, &chart, &q).unwrap().norm());
        }
    }
    criterion(
        3,
        "Schur orthogonality (14x14 Gram, character norms)",
        dev < 1e-6 && norm_dev < 1e-8 && cross_dev < 1e-8,
        format!("Gram dev {dev:.2e}; norm dev {norm_dev:.2e}; cross dev {cross_dev:.2e}"),
    );
}

#[test]
fn criterion_4_weyl_integration_formula() {
    // |W| calibration
    let orders: Vec<u64> = [3, 4, 5]
        .iter()
        .map(|&n| weyl_group_order(n, DEFAULT_TORUS_NODES).unwrap().order)
        .collect();
    let orders_ok = orders == vec![2, 4, 8];

    // the SO(3) case in closed form: (1/2)(1/2π)∫(1+2cosθ)²·4sin²(θ/2)dθ = 1
    let so3_hand = weyl_integrate(
        |h| {
            let t = h.trace();
            t * t
        },
        3,
        512,
    )
    .unwrap();
    let hand_ok = (so3_hand - Complex64::new(1.0, 0.0)).norm() < 1e-10;

    // full-group quadrature vs torus quadrature for tr^0..tr^4
    let mut worst = 0.0f64;
    for n in [3usize, 4, 5] {
        let chart = ChartSpec::so(n).unwrap();
        // trace powers have trigonometric degree <= 4 per angle: 5 midpoint
        // nodes are exact on the periodic angles; 12 Gauss nodes handle the
        // sine-weighted ones
        let q = QuadratureSpec::gauss(12).with_periodic_nodes(5);
        let full = integrate_trace_powers(&chart, &q, 5).unwrap();
        for (k, fv) in full.iter().enumerate() {
            let torus = weyl_integrate(
                |h| {
                    let t = h.trace();
                    let mut p = Complex64::new(1.0, 0.0);
                    for _ in 0..k {
                        p *= t;
                    }
                    p
                },
                n,
                DEFAULT_TORUS_NODES,
            )
            .unwrap();
            worst = worst.max((fv - torus).norm());
        }
    }
    criterion(
        4,
        "Weyl integration formula (SO(3), SO(4), SO(5); tr^0..tr^4)",
        orders_ok && hand_ok && worst < 1e-6,
        format!("|W| = {orders:?}; SO(3) hand integral dev {:.1e}; worst full-vs-torus {worst:.2e}",
            (so3_hand - Complex64::new(1.0, 0.0)).norm()),
    );
}

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
fn criterion_5_frobenius_character_theory() {
    let mut all = true;
    let mut detail = String::new();
    for (name, g) in corpus() {
        let table = solve_character_equation(&g).unwrap();
        let sc = structure_constants(&g, &table.classes);
        let eq = verify_character_equation(&table, &sc);
        let ax = frobenius_axiom_check(&g, &table).all_exact();
        let sum_ok = table.degrees.iter().map(|f| f * f).sum::<u64>() == g.order() as u64;
        let orth = verify_row_orthogonality(&table, g.order())
            && verify_column_orthogonality(&table, g.order());
        let oracle = regular_rep_oracle(&g).unwrap();
        let dev = match_tables(&table, &oracle).unwrap();
        let div = table.degrees.iter().all(|f| g.order() as u64 % f == 0);
        let ok = eq && ax && sum_ok && orth && dev < 1e-8 && div;
        all &= ok;
        detail.push_str(&format!("{name}:{} ", if ok { "ok" } else { "FAIL" }));
    }
    criterion(5, "Frobenius character theory on the corpus", all, detail);
}

#[test]
fn criterion_6_group_determinant() {
    let mut all = true;
    let mut detail = String::new();
    for (name, g) in [("S3", symmetric_group(3).unwrap()), ("Q8", quaternion_group())] {
        let r = verify_factorization(&g, 20, 2026).unwrap();
        let ok = r.max_rel_residual < 1e-8 && r.max_class_constant_residual < 1e-8;
        all &= ok;
        detail.push_str(&format!(
            "{name}: factor {:.1e}, class-constant {:.1e}; ",
            r.max_rel_residual, r.max_class_constant_residual
        ));
    }
    criterion(6, "group determinant factorization (20 random points)", all, detail);
}

#[test]
fn criterion_7_mean_axioms_and_uniqueness() {
    // axioms 1)–7) on SO(3) and SU(2)
    let battery = standard_battery();
    let mut worst_axiom = 0.0f64;
    for chart in [ChartSpec::so(3).unwrap(), ChartSpec::su(2).unwrap()] {
        let q = QuadratureSpec::gauss(24);
        let report = mean_axioms_report(&chart, &q, &battery, 7).unwrap();
        worst_axiom = worst_axiom.max(report.max_residual());
    }

    // desk-scale uniqueness: hurwitz, alternate, and Monte Carlo agree
    let hur = ChartSpec::new(haarlab::group::GroupTag::So, ChartKind::Hurwitz, 3).unwrap();
    let alt = ChartSpec::new(haarlab::group::GroupTag::So, ChartKind::Alternate, 3).unwrap();
    let q = QuadratureSpec::gauss(24);
    let fns = standard_battery();
    assert!(fns.len() >= 10);
    let fns = &fns[..10];
    let mut chart_dev = 0.0f64;
    let mut mc_ok = true;
    let mut sampler = HaarSampler::new(hur.clone(), 123);
    const N: usize = 1_000_000;
    let mut sums = vec![0.0f64; fns.len()];
    let mut sums2 = vec![0.0f64; fns.len()];
    for _ in 0..N {
        let g = sampler.sample();
        for (i, (_, f)) in fns.iter().enumerate() {
            let v = f(&g);
            sums[i] += v;
            sums2[i] += v * v;
        }
    }
    for (i, (name, f)) in fns.iter().enumerate() {
        let a = integrate_real(&hur, &q, |g| f(g)).unwrap();
        let b = integrate_real(&alt, &q, |g| f(g)).unwrap();
        chart_dev = chart_dev.max((a - b).abs());
        let mean = sums[i] / N as f64;
        let sd = ((sums2[i] / N as f64 - mean * mean).max(0.0) / N as f64).sqrt();
        if (mean - a).abs() > 3.0 * sd + 1e-12 {
            eprintln!("MC mismatch on {name}: {mean} vs {a} (3σ = {})", 3.0 * sd);
            mc_ok = false;
        }
    }
    criterion(
        7,
        "Neumann mean axioms and desk-scale uniqueness",
        worst_axiom < 1e-8 && chart_dev < 1e-7 && mc_ok,
        format!("axiom residual {worst_axiom:.2e}; hurwitz-vs-alt {chart_dev:.2e}; MC within 3σ: {mc_ok}"),
    );
}

#[test]
fn criterion_8_invariant_generation_and_counting() {
    let chart = ChartSpec::so(3).unwrap();
    let q = QuadratureSpec::gauss(24);
    // projection of a11 over quadratic forms on R³
    let f = Poly::variable(6, 0);
    let j = invariant_project(&f, 3, 2, &chart, &q).unwrap();
    let lin = &j.parts[&1];
    let expect = [1.0 / 3.0, 0.0, 0.0, 1.0 / 3.0, 0.0, 1.0 / 3.0];
    let proj_dev = lin
        .iter()
        .zip(expect)
        .map(|(c, e)| (c - Complex64::new(e, 0.0)).norm())
        .fold(0.0f64, f64::max);

    let c21 = invariant_dimension(2, 1, &chart, &q).unwrap();
    let c11 = invariant_dimension(1, 1, &chart, &q).unwrap();
    let c12 = invariant_dimension(1, 2, &chart, &q).unwrap();
    let counts_ok = (c21.rounded, c11.rounded, c12.rounded) == (1, 0, 1)
        && c21.distance_to_integer < 1e-3
        && c11.distance_to_integer < 1e-3
        && c12.distance_to_integer < 1e-3;
    criterion(
        8,
        "invariant generation and counting",
        proj_dev < 1e-8 && counts_ok,
        format!(
            "projection dev {proj_dev:.2e}; counts ({}, {}, {})",
            c21.rounded, c11.rounded, c12.rounded
        ),
    );
}

#[test]
fn chart_validation_supplement() {
    // the outputs of every chart map validate as group elements at 1e-12
    let tol = haarlab::group::Tolerance::new(1e-12, 1e-8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for chart in [
        ChartSpec::so(4).unwrap(),
        ChartSpec::so_alt(4).unwrap(),
        ChartSpec::su(3).unwrap(),
    ] {
        for _ in 0..200 {
            let angles: Vec<f64> = chart
                .axes()
                .iter()
                .map(|a| rng.gen_range(a.lo..a.hi))
                .collect();
            let g: GroupElement = chart.element(&angles).unwrap();
            assert!(haarlab::group::validate(&g, &tol));
        }
    }
}
