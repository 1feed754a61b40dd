use clap::{Args, Parser, Subcommand, ValueEnum};
use haarlab::chart::{ChartKind, ChartSpec};
use haarlab::chartab::{
    frobenius_axiom_check, solve_character_equation, table_determinant, verify_character_equation,
    verify_column_orthogonality, verify_row_orthogonality,
};
use haarlab::cyclo::{min_poly_string, rational_string, Cyclo};
use haarlab::finite::{parse_generators, parse_mult_table, structure_constants, FiniteGroup};
use haarlab::group::{validate, GroupTag, Tolerance};
use haarlab::haar::HaarSampler;
use haarlab::invariants::invariant_dimension;
use haarlab::poly::{monomial_count, MonomialBasis, Poly};
use haarlab::quad::{box_volume_quadrature, QuadratureSpec};
use haarlab::regrep::{match_tables, regular_rep_oracle, verify_factorization};
use haarlab::report::{matrix_to_json, Check, Report};
use haarlab::reps::{
    character_inner, expected_gram, matrix_element_gram, unitarize, Representation,
};
use haarlab::weyl::{weyl_group_order, weyl_integrate, DEFAULT_TORUS_NODES};
use haarlab::{Complex64, Error};

#[derive(Parser)]
#[command(
    name = "haarlab",
    version,
    about = "Invariant integration on SO(n)/SU(n) and exact character tables of finite groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ChartArg {
    Hurwitz,
    Alt,
}

impl ChartArg {
    fn kind(self) -> ChartKind {
        match self {
            ChartArg::Hurwitz => ChartKind::Hurwitz,
            ChartArg::Alt => ChartKind::Alternate,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form group volume against quadrature of the chart density
    Volume(VolumeArgs),
    /// Haar-distributed random elements
    Sample(SampleArgs),
    /// Gram matrix of matrix elements and character norms
    Orthogonality(OrthoArgs),
    /// Full-group quadrature against the Cartan-torus formula
    WeylCheck(WeylArgs),
    /// Exact character table of a finite group from a file
    Chartable(ChartableArgs),
    /// Group-determinant factorization residuals
    Groupdet(GroupdetArgs),
    /// Count (and list, for small cases) polynomial invariants
    Invariants(InvariantsArgs),
}

#[derive(Args)]
struct VolumeArgs {
    /// Group, e.g. so:3 or su:2
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value_t = ChartArg::Hurwitz)]
    chart: ChartArg,
    /// Quadrature nodes per angle
    #[arg(long, default_value_t = 32)]
    nodes: usize,
    /// Relative tolerance for the quadrature check
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value_t = ChartArg::Hurwitz)]
    chart: ChartArg,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OrthoArgs {
    #[arg(long)]
    group: String,
    /// Symmetric powers of the defining representation, comma separated
    #[arg(long, default_value = "0,1,2")]
    reps: String,
    #[arg(long, default_value_t = 24)]
    nodes: usize,
    /// Tolerance for the Gram-matrix pattern
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct WeylArgs {
    /// so:N only (the torus formula is implemented for the rotation groups)
    #[arg(long)]
    group: String,
    /// Gauss nodes per sine-weighted angle of the full-group quadrature
    #[arg(long, default_value_t = 12)]
    nodes: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct ChartableArgs {
    /// Multiplication-table file or permutation-generator file
    #[arg(long)]
    group_file: std::path::PathBuf,
}

#[derive(Args)]
struct GroupdetArgs {
    #[arg(long)]
    group_file: std::path::PathBuf,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct InvariantsArgs {
    #[arg(long)]
    group: String,
    /// Degree p of the form whose coefficients carry the action
    #[arg(long)]
    form_degree: u32,
    /// Degree r in the coefficients
    #[arg(long)]
    degree: u32,
    #[arg(long, default_value_t = 24)]
    nodes: usize,
}

fn parse_group(spec: &str) -> Result<(GroupTag, usize), Error> {
    let (tag, n) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidArgument(format!("group spec `{spec}`; expected so:N or su:N")))?;
    let n: usize = n
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad dimension in `{spec}`")))?;
    match tag {
        "so" => Ok((GroupTag::So, n)),
        "su" => Ok((GroupTag::Su, n)),
        _ => Err(Error::InvalidArgument(format!(
            "unknown group `{tag}`; expected so or su"
        ))),
    }
}

fn load_group_file(path: &std::path::Path) -> Result<FiniteGroup, Error> {
    let text = std::fs::read_to_string(path)?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.starts_with('(') {
        parse_generators(&text)
    } else {
        parse_mult_table(&text)
    }
}

fn cmd_volume(a: &VolumeArgs) -> Result<Report, Error> {
    let (tag, n) = parse_group(&a.group)?;
    let chart = ChartSpec::new(tag, a.chart.kind(), n)?;
    let closed = match tag {
        GroupTag::So => haarlab::chart::so_total_volume(n)?,
        GroupTag::Su => haarlab::chart::su_total_volume(n)?,
        GroupTag::Finite(_) => unreachable!(),
    };
    let q = QuadratureSpec::gauss(a.nodes);
    let quad = box_volume_quadrature(&chart, &q);
    let rel = (quad - closed).abs() / closed;
    Ok(Report::new(
        "volume",
        serde_json::json!({
            "group": a.group, "chart": a.chart.kind().to_string(),
            "nodes": a.nodes, "tol": a.tol,
        }),
        serde_json::json!({
            "closed_form": closed,
            "quadrature": quad,
            "relative_error": rel,
            "text": format!(
                "closed form  = {closed:.10}\nquadrature   = {quad:.10}\nrelative err = {rel:.3e}"
            ),
        }),
        vec![Check::residual("volume quadrature relative error", rel, a.tol)],
    ))
}

fn cmd_sample(a: &SampleArgs) -> Result<Report, Error> {
    let (tag, n) = parse_group(&a.group)?;
    let chart = ChartSpec::new(tag, a.chart.kind(), n)?;
    let mut sampler = HaarSampler::new(chart, a.seed);
    let tol = Tolerance::default();
    let mut all_valid = true;
    let mut mats = Vec::with_capacity(a.samples);
    let mut text = String::new();
    for i in 0..a.samples {
        let g = sampler.sample();
        all_valid &= validate(&g, &tol);
        text.push_str(&format!("# sample {i}\n"));
        for r in 0..n {
            let row: Vec<String> = (0..n)
                .map(|c| {
                    let z = g.entry(r, c);
                    if tag == GroupTag::So {
                        format!("{:+.15e}", z.re)
                    } else {
                        format!("{:+.15e}{:+.15e}i", z.re, z.im)
                    }
                })
                .collect();
            text.push_str(&row.join(" "));
            text.push('\n');
        }
        mats.push(matrix_to_json(g.entries()));
    }
    Ok(Report::new(
        "sample",
        serde_json::json!({
            "group": a.group, "chart": a.chart.kind().to_string(),
            "samples": a.samples, "seed": a.seed,
        }),
        serde_json::json!({ "matrices": mats, "text": text }),
        vec![Check::flag("all samples satisfy the defining equations", all_valid)],
    ))
}

fn cmd_orthogonality(a: &OrthoArgs) -> Result<Report, Error> {
    let (tag, n) = parse_group(&a.group)?;
    let chart = ChartSpec::new(tag, ChartKind::Hurwitz, n)?;
    let q = QuadratureSpec::gauss(a.nodes);
    let powers: Vec<u32> = a
        .reps
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::InvalidArgument(format!("bad rep list `{}`", a.reps)))?;
    let mut reps = Vec::new();
    for &p in &powers {
        let rep = Representation::sym_power(n, p);
        // monomial bases are not orthonormal beyond p = 1; repair first
        let rep = if p >= 2 { unitarize(&rep, &chart, &q)? } else { rep };
        reps.push(rep);
    }
    let gram = matrix_element_gram(&reps, &chart, &q)?;
    let expect = expected_gram(&reps);
    let gram_dev = (0..gram.nrows())
        .flat_map(|i| (0..gram.ncols()).map(move |j| (i, j)))
        .map(|(i, j)| (gram[(i, j)] - expect[(i, j)]).norm())
        .fold(0.0f64, f64::max);
    let mut checks = vec![Check::residual(
        format!("Gram deviation from the 1/dim pattern ({0}x{0})", gram.nrows()),
        gram_dev,
        a.tol,
    )];
    let chars: Vec<_> = reps.iter().map(Representation::character).collect();
    for (i, ci) in chars.iter().enumerate() {
        let norm = character_inner(ci, ci, &chart, &q)?;
        checks.push(Check::against(
            format!("character norm (sym^{})", powers[i]),
            norm.re,
            1.0,
            1e-8,
        ));
        for (j, cj) in chars.iter().enumerate().skip(i + 1) {
            let cross = character_inner(ci, cj, &chart, &q)?;
            checks.push(Check::residual(
                format!("character cross inner (sym^{}, sym^{})", powers[i], powers[j]),
                cross.norm(),
                1e-8,
            ));
        }
    }
    Ok(Report::new(
        "orthogonality",
        serde_json::json!({
            "group": a.group, "reps": powers, "nodes": a.nodes, "tol": a.tol,
        }),
        serde_json::json!({
            "gram": matrix_to_json(&gram),
            "text": format!(
                "matrix-element Gram matrix is {0}x{0}; worst deviation from the block 1/dim pattern: {1:.3e}",
                gram.nrows(), gram_dev
            ),
        }),
        checks,
    ))
}

fn cmd_weyl_check(a: &WeylArgs) -> Result<Report, Error> {
    let (tag, n) = parse_group(&a.group)?;
    if tag != GroupTag::So {
        return Err(Error::InvalidArgument(
            "weyl-check runs on the rotation groups (so:N)".into(),
        ));
    }
    if n < 3 {
        return Err(Error::InvalidArgument("weyl-check requires n >= 3".into()));
    }
    let chart = ChartSpec::so(n)?;
    // trace powers are trigonometric of degree <= 4 per angle, so a handful
    // of midpoint nodes integrates the periodic angles exactly
    let q = QuadratureSpec::gauss(a.nodes).with_periodic_nodes(6);
    let full = haarlab::haar::integrate_trace_powers(&chart, &q, 5)?;
    let w = weyl_group_order(n, DEFAULT_TORUS_NODES)?;
    let mut checks = vec![Check::against(
        format!("|W| calibration for SO({n})"),
        w.calibration,
        w.order as f64,
        1e-6,
    )];
    let mut rows = Vec::new();
    let mut text = format!("|W| = {}\n{:<8} {:>20} {:>20} {:>12}\n", w.order, "f", "full group", "torus", "diff");
    for (k, full_val) in full.iter().enumerate() {
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
        )?;
        let diff = (full_val - torus).norm();
        rows.push(serde_json::json!({
            "function": format!("tr^{k}"),
            "full_group": full_val.re,
            "torus": torus.re,
            "difference": diff,
        }));
        text.push_str(&format!(
            "tr^{k:<5} {:>20.12} {:>20.12} {:>12.3e}\n",
            full_val.re, torus.re, diff
        ));
        checks.push(Check::residual(
            format!("full-group vs torus, tr^{k}"),
            diff,
            a.tol,
        ));
    }
    Ok(Report::new(
        "weyl-check",
        serde_json::json!({
            "group": a.group, "nodes": a.nodes,
            "torus_nodes": DEFAULT_TORUS_NODES, "tol": a.tol,
        }),
        serde_json::json!({ "weyl_order": w.order, "comparisons": rows, "text": text }),
        checks,
    ))
}

fn chartable_entry(v: &Cyclo) -> serde_json::Value {
    if let Some(q) = v.as_rational() {
        serde_json::json!({ "text": rational_string(&q) })
    } else {
        let c = v.to_complex();
        serde_json::json!({
            "text": format!("{:.12}{:+.12}i", c.re, c.im),
            "min_poly": min_poly_string(&v.minimal_polynomial()),
        })
    }
}

fn cmd_chartable(a: &ChartableArgs) -> Result<Report, Error> {
    let g = load_group_file(&a.group_file)?;
    let table = solve_character_equation(&g)?;
    let sc = structure_constants(&g, &table.classes);
    let axioms = frobenius_axiom_check(&g, &table);
    let mut checks = vec![
        Check::flag("character equation holds exactly", verify_character_equation(&table, &sc)),
        Check::flag("row orthogonality exact", verify_row_orthogonality(&table, g.order())),
        Check::flag(
            "column orthogonality exact",
            verify_column_orthogonality(&table, g.order()),
        ),
        Check::against(
            "sum of squared degrees",
            table.degrees.iter().map(|f| (f * f) as f64).sum(),
            g.order() as f64,
            0.0,
        ),
        Check::flag(
            "every degree divides the order",
            table.degrees.iter().all(|f| g.order() as u64 % f == 0),
        ),
        Check::flag("table determinant nonzero", !table_determinant(&table).is_zero()),
        Check::flag("character axioms exact", axioms.all_exact()),
    ];
    if g.order() <= 64 {
        let oracle = regular_rep_oracle(&g)?;
        let dev = match_tables(&table, &oracle)?;
        checks.push(Check::residual(
            "regular-representation oracle deviation",
            dev,
            1e-8,
        ));
    }
    // plain-text table
    let mut text = String::new();
    text.push_str(&format!(
        "order {}   classes {}   cyclotomic order {}\n",
        g.order(),
        table.k(),
        table.cyclotomic_order
    ));
    text.push_str("class sizes:");
    for s in &table.classes.sizes {
        text.push_str(&format!(" {s}"));
    }
    text.push('\n');
    for (kappa, row) in table.rows.iter().enumerate() {
        text.push_str(&format!("chi_{kappa} (deg {}):", table.degrees[kappa]));
        for v in row {
            let cell = if let Some(q) = v.as_rational() {
                rational_string(&q)
            } else {
                let c = v.to_complex();
                format!("{:.4}{:+.4}i", c.re, c.im)
            };
            text.push_str(&format!(" {cell:>14}"));
        }
        text.push('\n');
    }
    let rows_json: Vec<Vec<serde_json::Value>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(chartable_entry).collect())
        .collect();
    Ok(Report::new(
        "chartable",
        serde_json::json!({ "group_file": a.group_file.display().to_string() }),
        serde_json::json!({
            "order": g.order(),
            "classes": {
                "sizes": table.classes.sizes,
                "representatives": table.classes.classes.iter().map(|c| c[0]).collect::<Vec<_>>(),
            },
            "degrees": table.degrees,
            "rows": rows_json,
            "text": text,
        }),
        checks,
    ))
}

fn cmd_groupdet(a: &GroupdetArgs) -> Result<Report, Error> {
    let g = load_group_file(&a.group_file)?;
    let r = verify_factorization(&g, a.trials, a.seed)?;
    let checks = if a.trials == 0 {
        Vec::new()
    } else {
        vec![
            Check::residual(
                "determinant vs irreducible factorization (relative)",
                r.max_rel_residual,
                a.tol,
            ),
            Check::residual(
                "class-constant specialization vs product of xi^(f^2) (relative)",
                r.max_class_constant_residual,
                a.tol,
            ),
        ]
    };
    Ok(Report::new(
        "groupdet",
        serde_json::json!({
            "group_file": a.group_file.display().to_string(),
            "trials": a.trials, "seed": a.seed, "tol": a.tol,
        }),
        serde_json::to_value(&r).expect("report serializes"),
        checks,
    ))
}

fn cmd_invariants(a: &InvariantsArgs) -> Result<Report, Error> {
    let (tag, n) = parse_group(&a.group)?;
    let chart = ChartSpec::new(tag, ChartKind::Hurwitz, n)?;
    let q = QuadratureSpec::gauss(a.nodes);
    let count = invariant_dimension(a.form_degree, a.degree, &chart, &q)?;
    let mut checks = vec![Check::residual(
        format!(
            "distance to integer of the invariant count (p={}, r={})",
            a.form_degree, a.degree
        ),
        count.distance_to_integer,
        1e-3,
    )];
    // basis report: project every degree-r coefficient monomial and collect
    // the span of the results
    let m = monomial_count(n, a.form_degree);
    let width = monomial_count(m, a.degree);
    let mut basis_rows: Vec<Vec<Complex64>> = Vec::new();
    if count.rounded > 0 && width <= 64 {
        let a_basis = MonomialBasis::new(m, a.degree);
        for i in 0..a_basis.len() {
            let mut f = Poly::zero(m);
            let mut coeffs = vec![Complex64::new(0.0, 0.0); a_basis.len()];
            coeffs[i] = Complex64::new(1.0, 0.0);
            f.parts.insert(a.degree, coeffs);
            let j = haarlab::invariants::invariant_project(&f, n, a.form_degree, &chart, &q)?;
            if let Some(v) = j.parts.get(&a.degree) {
                reduce_into_span(&mut basis_rows, v.clone());
            }
        }
        checks.push(Check::against(
            "projected span dimension matches the count",
            basis_rows.len() as f64,
            count.rounded as f64,
            0.0,
        ));
    }
    let basis_json: Vec<Vec<[f64; 2]>> = basis_rows
        .iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    Ok(Report::new(
        "invariants",
        serde_json::json!({
            "group": a.group, "form_degree": a.form_degree,
            "degree": a.degree, "nodes": a.nodes,
        }),
        serde_json::json!({
            "count": count.rounded,
            "raw": count.raw,
            "basis": basis_json,
            "text": format!(
                "invariants of degree {} in the coefficients of a degree-{} form on {}: {}",
                a.degree, a.form_degree, a.group, count.rounded
            ),
        }),
        checks,
    ))
}

/// Numerically row-reduce `v` against the collected span; keep it if an
/// independent component above tolerance remains.
fn reduce_into_span(rows: &mut Vec<Vec<Complex64>>, mut v: Vec<Complex64>) {
    for row in rows.iter() {
        let pivot = row
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, _)| i)
            .unwrap();
        let factor = v[pivot] / row[pivot];
        for (x, y) in v.iter_mut().zip(row) {
            *x -= factor * y;
        }
    }
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 1e-6 {
        for z in v.iter_mut() {
            *z /= norm;
        }
        rows.push(v);
    }
}

fn main() {
    env_logger::init();
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Volume(a) => cmd_volume(a),
        Cmd::Sample(a) => cmd_sample(a),
        Cmd::Orthogonality(a) => cmd_orthogonality(a),
        Cmd::WeylCheck(a) => cmd_weyl_check(a),
        Cmd::Chartable(a) => cmd_chartable(a),
        Cmd::Groupdet(a) => cmd_groupdet(a),
        Cmd::Invariants(a) => cmd_invariants(a),
    };
    match result {
        Ok(report) => {
            let rendered = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        std::process::exit(2);
                    }
                }
                None => print!("{rendered}"),
            }
            std::process::exit(if report.pass { 0 } else { 1 });
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
