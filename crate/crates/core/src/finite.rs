//! Finite groups as multiplication tables: loading from table or
//! permutation-generator files, conjugacy classes, class-algebra structure
//! constants, and the class multiplication matrices.

use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::Zero;

/// Cap on closure enumeration from generators.
const CLOSURE_CAP: usize = 10_000;
/// Orders up to this bound get the full associativity check; larger tables
/// are spot-checked on random triples.
const FULL_ASSOC_BOUND: usize = 64;

/// A finite group given by its multiplication table. Element 0 is the
/// identity.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    mult: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Build from a multiplication table; verifies the group axioms
    /// (identity at index 0, inverses, associativity — fully for h ≤ 64,
    /// sampled above).
    pub fn from_mult_table(mult: Vec<Vec<usize>>) -> Result<Self> {
        let h = mult.len();
        if h == 0 {
            return Err(Error::GroupStructure("empty table".into()));
        }
        for (i, row) in mult.iter().enumerate() {
            if row.len() != h {
                return Err(Error::GroupStructure(format!(
                    "row {i} has {} entries, expected {h}",
                    row.len()
                )));
            }
            let mut seen = vec![false; h];
            for &v in row {
                if v >= h {
                    return Err(Error::GroupStructure(format!(
                        "row {i} contains out-of-range index {v}"
                    )));
                }
                if seen[v] {
                    return Err(Error::GroupStructure(format!(
                        "row {i} is not a permutation"
                    )));
                }
                seen[v] = true;
            }
        }
        // identity at 0
        for x in 0..h {
            if mult[0][x] != x || mult[x][0] != x {
                return Err(Error::GroupStructure(
                    "element 0 is not a two-sided identity".into(),
                ));
            }
        }
        let mut inverse = vec![usize::MAX; h];
        for x in 0..h {
            match (0..h).find(|&y| mult[x][y] == 0) {
                Some(y) => {
                    if mult[y][x] != 0 {
                        return Err(Error::GroupStructure(format!(
                            "element {x} has only a one-sided inverse"
                        )));
                    }
                    inverse[x] = y;
                }
                None => {
                    return Err(Error::GroupStructure(format!("element {x} has no inverse")))
                }
            }
        }
        // associativity
        if h <= FULL_ASSOC_BOUND {
            for a in 0..h {
                for b in 0..h {
                    for c in 0..h {
                        if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                            return Err(Error::GroupStructure(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut state = 0x243f_6a88_85a3_08d3u64;
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state as usize
            };
            for _ in 0..20_000 {
                let (a, b, c) = (next() % h, next() % h, next() % h);
                if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                    return Err(Error::GroupStructure(format!(
                        "associativity fails at ({a},{b},{c})"
                    )));
                }
            }
        }
        Ok(Self { mult, inverse })
    }

    /// Order h.
    pub fn order(&self) -> usize {
        self.mult.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Order of a single element.
    pub fn element_order(&self, x: usize) -> usize {
        let mut o = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            o += 1;
        }
        o
    }

    /// lcm of all element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1usize, |acc, x| num_integer::lcm(acc, self.element_order(x)))
    }

    pub fn conjugate(&self, v: usize, g: usize) -> usize {
        self.mul(self.mul(v, g), self.inv(v))
    }
}

// ---------------------------------------------------------------------------
// parsing

/// Parse the multiplication-table format: line 1 = h, lines 2..h+1 = rows of
/// h whitespace-separated 0-based indices; element 0 must be the identity.
pub fn parse_mult_table(text: &str) -> Result<FiniteGroup> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (ln, first) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "empty file".into() })?;
    let h: usize = first.trim().parse().map_err(|_| Error::Parse {
        line: ln + 1,
        msg: format!("expected the group order, got `{}`", first.trim()),
    })?;
    if h == 0 {
        return Err(Error::Parse { line: ln + 1, msg: "order must be positive".into() });
    }
    let mut mult = Vec::with_capacity(h);
    for _ in 0..h {
        let (ln, row) = lines.next().ok_or_else(|| Error::Parse {
            line: ln + 1,
            msg: format!("expected {h} table rows"),
        })?;
        let parsed: std::result::Result<Vec<usize>, _> =
            row.split_whitespace().map(str::parse).collect();
        let parsed = parsed.map_err(|e| Error::Parse {
            line: ln + 1,
            msg: format!("bad index: {e}"),
        })?;
        if parsed.len() != h {
            return Err(Error::Parse {
                line: ln + 1,
                msg: format!("row has {} entries, expected {h}", parsed.len()),
            });
        }
        mult.push(parsed);
    }
    FiniteGroup::from_mult_table(mult).map_err(|e| match e {
        Error::GroupStructure(msg) => Error::GroupStructure(msg),
        other => other,
    })
}

/// A permutation on {0, …, degree−1}, stored as the image vector.
type Perm = Vec<usize>;

fn perm_mul(p: &Perm, q: &Perm) -> Perm {
    // (p∘q)(x) = p(q(x))
    q.iter().map(|&x| p[x]).collect()
}

/// Parse one line of disjoint-cycle notation, e.g. `(1 2)(3 4)`.
/// Points are 1-based in the file.
fn parse_cycles(line: &str, lineno: usize) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = line.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected `(`, found `{rest}`"),
            });
        }
        let close = rest.find(')').ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "unclosed cycle".into(),
        })?;
        let inside = &rest[1..close];
        let pts: std::result::Result<Vec<usize>, _> = inside
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect();
        let pts = pts.map_err(|e| Error::Parse {
            line: lineno,
            msg: format!("bad point: {e}"),
        })?;
        if pts.iter().any(|&p| p == 0) {
            return Err(Error::Parse {
                line: lineno,
                msg: "points are 1-based".into(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for &p in &pts {
            if !seen.insert(p) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("point {p} repeated within a cycle"),
                });
            }
        }
        cycles.push(pts);
        rest = rest[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// Parse a permutation-generator file (one generator per line in
/// disjoint-cycle notation) and return the generated group; the degree is
/// inferred from the largest moved point. Element order is breadth-first
/// from the identity, so it is deterministic.
pub fn parse_generators(text: &str) -> Result<FiniteGroup> {
    let mut gens_cycles = Vec::new();
    let mut degree = 1usize;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cycles = parse_cycles(line, i + 1)?;
        for c in &cycles {
            for &p in c {
                degree = degree.max(p);
            }
        }
        gens_cycles.push(cycles);
    }
    if gens_cycles.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no generators found".into(),
        });
    }
    let gens: Vec<Perm> = gens_cycles
        .into_iter()
        .map(|cycles| {
            let mut p: Perm = (0..degree).collect();
            for c in cycles {
                for w in 0..c.len() {
                    p[c[w] - 1] = c[(w + 1) % c.len()] - 1;
                }
            }
            p
        })
        .collect();
    group_from_permutations(&gens)
}

/// Closure of a set of permutations under multiplication, as a
/// multiplication table with the identity first.
pub fn group_from_permutations(gens: &[Perm]) -> Result<FiniteGroup> {
    let degree = gens.first().map_or(0, Vec::len);
    if gens.iter().any(|g| g.len() != degree) {
        return Err(Error::GroupStructure(
            "generators act on different degrees".into(),
        ));
    }
    let identity: Perm = (0..degree).collect();
    let mut elems: Vec<Perm> = vec![identity.clone()];
    let mut index = std::collections::HashMap::new();
    index.insert(identity, 0usize);
    let mut frontier = vec![0usize];
    while let Some(next_front) = {
        let mut nf = Vec::new();
        for &ei in &frontier {
            for g in gens {
                let prod = perm_mul(&elems[ei], g);
                if !index.contains_key(&prod) {
                    if elems.len() >= CLOSURE_CAP {
                        return Err(Error::CostCap(format!(
                            "closure exceeded {CLOSURE_CAP} elements"
                        )));
                    }
                    index.insert(prod.clone(), elems.len());
                    nf.push(elems.len());
                    elems.push(prod);
                }
            }
        }
        if nf.is_empty() {
            None
        } else {
            Some(nf)
        }
    } {
        frontier = next_front;
    }
    let h = elems.len();
    let mut mult = vec![vec![0usize; h]; h];
    for a in 0..h {
        for b in 0..h {
            mult[a][b] = index[&perm_mul(&elems[a], &elems[b])];
        }
    }
    FiniteGroup::from_mult_table(mult)
}

// ---------------------------------------------------------------------------
// conjugacy classes and structure constants

/// The partition of a finite group into conjugacy classes, in deterministic
/// order (by size, then by minimal element index).
#[derive(Debug, Clone)]
pub struct ConjClasses {
    pub classes: Vec<Vec<usize>>,
    pub sizes: Vec<usize>,
    /// class index of each element
    pub class_of: Vec<usize>,
    /// α ↦ α′ = class of inverses
    pub inverse_class: Vec<usize>,
}

impl ConjClasses {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn representative(&self, alpha: usize) -> usize {
        self.classes[alpha][0]
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> ConjClasses {
    let h = g.order();
    let mut seen = vec![false; h];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..h {
        if seen[x] {
            continue;
        }
        let mut orbit: std::collections::BTreeSet<usize> = Default::default();
        for v in 0..h {
            orbit.insert(g.conjugate(v, x));
        }
        let orbit: Vec<usize> = orbit.into_iter().collect();
        for &y in &orbit {
            seen[y] = true;
        }
        classes.push(orbit);
    }
    classes.sort_by_key(|c| (c.len(), c[0]));
    let mut class_of = vec![0usize; h];
    for (ci, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = ci;
        }
    }
    let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    let inverse_class: Vec<usize> = classes
        .iter()
        .map(|c| class_of[g.inv(c[0])])
        .collect();
    ConjClasses {
        classes,
        sizes,
        class_of,
        inverse_class,
    }
}

/// The integers h_{αβγ} = #{(A,B,C) : A∈α, B∈β, C∈γ, ABC = E}.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    pub k: usize,
    data: Vec<i64>,
}

impl StructureConstants {
    pub fn get(&self, a: usize, b: usize, c: usize) -> i64 {
        self.data[(a * self.k + b) * self.k + c]
    }
}

/// Exact triple counts, by enumerating pairs (A, B): C = (AB)⁻¹ is forced.
pub fn structure_constants(g: &FiniteGroup, classes: &ConjClasses) -> StructureConstants {
    let k = classes.count();
    let mut data = vec![0i64; k * k * k];
    for a in 0..g.order() {
        let ca = classes.class_of[a];
        for b in 0..g.order() {
            let cb = classes.class_of[b];
            let cc = classes.class_of[g.inv(g.mul(a, b))];
            data[(ca * k + cb) * k + cc] += 1;
        }
    }
    StructureConstants { k, data }
}

/// The rational matrices M_α of multiplication by e_α = X_α/h_α on the basis
/// {e_β} of the class algebra: (M_α)_{γβ} = h_{γ′αβ} / (h_α h_β).
/// All M_α commute pairwise, exactly.
pub fn class_matrices(
    classes: &ConjClasses,
    sc: &StructureConstants,
) -> Vec<Vec<Vec<BigRational>>> {
    let k = classes.count();
    let mut out = Vec::with_capacity(k);
    for alpha in 0..k {
        let mut m = vec![vec![BigRational::zero(); k]; k];
        for beta in 0..k {
            for gamma in 0..k {
                let num = sc.get(classes.inverse_class[gamma], alpha, beta);
                m[gamma][beta] = BigRational::new(
                    num.into(),
                    ((classes.sizes[alpha] * classes.sizes[beta]) as i64).into(),
                );
            }
        }
        out.push(m);
    }
    out
}

/// Exact product of two rational matrices.
pub fn rat_mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut c = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                let t = &a[i][l] * &b[l][j];
                c[i][j] += t;
            }
        }
    }
    c
}

// ---------------------------------------------------------------------------
// built-in construction helpers (used by tests and the CLI examples)

/// Multiplication table of the cyclic group Z_m.
pub fn cyclic_group(m: usize) -> FiniteGroup {
    let mult = (0..m)
        .map(|a| (0..m).map(|b| (a + b) % m).collect())
        .collect();
    FiniteGroup::from_mult_table(mult).expect("cyclic tables are groups")
}

/// The quaternion group Q₈ = {±1, ±i, ±j, ±k}.
pub fn quaternion_group() -> FiniteGroup {
    // encode q = (sign, axis) as index 2*axis + (sign<0), axes 1,i,j,k
    let code = |sign: i32, axis: usize| 2 * axis + usize::from(sign < 0);
    let base = |a: usize, b: usize| -> (i32, usize) {
        match (a, b) {
            (0, x) => (1, x),
            (x, 0) => (1, x),
            (1, 1) => (-1, 0),
            (2, 2) => (-1, 0),
            (3, 3) => (-1, 0),
            (1, 2) => (1, 3),
            (2, 1) => (-1, 3),
            (2, 3) => (1, 1),
            (3, 2) => (-1, 1),
            (3, 1) => (1, 2),
            (1, 3) => (-1, 2),
            _ => unreachable!(),
        }
    };
    let mult = (0..8usize)
        .map(|x| {
            (0..8usize)
                .map(|y| {
                    let (sx, ax) = ((if x % 2 == 0 { 1 } else { -1 }), x / 2);
                    let (sy, ay) = ((if y % 2 == 0 { 1 } else { -1 }), y / 2);
                    let (s, az) = base(ax, ay);
                    code(s * sx * sy, az)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_mult_table(mult).expect("Q8 is a group")
}

/// Direct product of two groups.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (ha, hb) = (a.order(), b.order());
    let idx = |x: usize, y: usize| x * hb + y;
    let mult = (0..ha * hb)
        .map(|p| {
            let (x1, y1) = (p / hb, p % hb);
            (0..ha * hb)
                .map(|q| {
                    let (x2, y2) = (q / hb, q % hb);
                    idx(a.mul(x1, x2), b.mul(y1, y2))
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_mult_table(mult).expect("product of groups is a group")
}

/// The symmetric group S_n from its standard generators.
pub fn symmetric_group(n: usize) -> Result<FiniteGroup> {
    let mut t: Perm = (0..n).collect();
    t.swap(0, 1);
    let c: Perm = (0..n).map(|i| (i + 1) % n).collect();
    group_from_permutations(&[t, c])
}

/// The alternating group A₄.
pub fn alternating_group_4() -> FiniteGroup {
    // (1 2 3) and (1 2)(3 4)
    let g1 = vec![1, 2, 0, 3];
    let g2 = vec![1, 0, 3, 2];
    group_from_permutations(&[g1, g2]).expect("A4 generators close")
}

/// The dihedral group D₄ (order 8) as symmetries of the square.
pub fn dihedral_group_4() -> FiniteGroup {
    let r = vec![1, 2, 3, 0];
    let s = vec![2, 1, 0, 3]; // reflection (1 3)
    group_from_permutations(&[r, s]).expect("D4 generators close")
}
