//! Matrix-group elements, defining-equation validators, basic group
//! operations, and the left-invariant metric.

use crate::error::{Error, Result};
use crate::{CMat, Complex64};

/// Which group a matrix claims to belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupTag {
    /// Real special orthogonal group SO(n): R Rᵀ = I, det R = 1.
    So,
    /// Special unitary group SU(n): U†U = I, det U = 1.
    Su,
    /// An element of a finite matrix group, tagged by an opaque id.
    Finite(u32),
}

impl std::fmt::Display for GroupTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupTag::So => write!(f, "SO"),
            GroupTag::Su => write!(f, "SU"),
            GroupTag::Finite(id) => write!(f, "finite({id})"),
        }
    }
}

/// Validation and comparison tolerances.
///
/// `eps_validate` bounds the residual of the defining relations;
/// `eps_compare` is the looser tolerance used when comparing derived values.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub eps_validate: f64,
    pub eps_compare: f64,
}

impl Tolerance {
    pub fn new(eps_validate: f64, eps_compare: f64) -> Result<Self> {
        if !(eps_validate > 0.0) || !(eps_compare > 0.0) {
            return Err(Error::InvalidArgument(
                "tolerances must be strictly positive".into(),
            ));
        }
        if eps_validate > eps_compare {
            return Err(Error::InvalidArgument(format!(
                "eps_validate ({eps_validate}) must not exceed eps_compare ({eps_compare})"
            )));
        }
        Ok(Self {
            eps_validate,
            eps_compare,
        })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps_validate: 1e-10,
            eps_compare: 1e-8,
        }
    }
}

/// A square complex matrix carrying its group tag.
///
/// SO(n) elements are stored with zero imaginary parts in the same complex
/// representation as SU(n) elements, so both share one code path.
/// Values are immutable after construction and every operation is pure.
#[derive(Debug, Clone)]
pub struct GroupElement {
    entries: CMat,
    tag: GroupTag,
    n: usize,
}

impl GroupElement {
    pub fn new(entries: CMat, tag: GroupTag) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "expected a square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let n = entries.nrows();
        if n == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        Ok(Self { entries, tag, n })
    }

    pub fn from_real(entries: nalgebra::DMatrix<f64>, tag: GroupTag) -> Result<Self> {
        Self::new(entries.map(|x| Complex64::new(x, 0.0)), tag)
    }

    pub fn identity(tag: GroupTag, n: usize) -> Self {
        Self {
            entries: CMat::identity(n, n),
            tag,
            n,
        }
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.tag != other.tag {
            return Err(Error::TagMismatch(format!(
                "{} vs {}",
                self.tag, other.tag
            )));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        Ok(())
    }
}

/// True iff the defining relations for the element's tag hold within
/// `tol.eps_validate`.
///
/// Validation failure is a reported boolean, not an abort, so callers can
/// diagnose bad inputs.
pub fn validate(g: &GroupElement, tol: &Tolerance) -> bool {
    let eps = tol.eps_validate;
    let m = &g.entries;
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return false;
    }
    match g.tag {
        GroupTag::So => {
            if m.iter().any(|z| z.im.abs() > eps) {
                return false;
            }
            orthonormal_rows_real(m, eps) && (det(m) - Complex64::new(1.0, 0.0)).norm() <= eps
        }
        GroupTag::Su => unitary_columns(m, eps) && (det(m) - Complex64::new(1.0, 0.0)).norm() <= eps,
        // A finite matrix group imposes no defining equation beyond invertibility.
        GroupTag::Finite(_) => det(m).norm() > eps,
    }
}

/// ∑_γ r_{αγ} r_{βγ} = δ_{αβ} entrywise (rows orthonormal, real part only).
fn orthonormal_rows_real(m: &CMat, eps: f64) -> bool {
    let n = m.nrows();
    for a in 0..n {
        for b in a..n {
            let mut s = 0.0;
            for c in 0..n {
                s += m[(a, c)].re * m[(b, c)].re;
            }
            let expect = if a == b { 1.0 } else { 0.0 };
            if (s - expect).abs() > eps {
                return false;
            }
        }
    }
    true
}

/// ∑_γ c_{γα} conj(c_{γβ}) = δ_{αβ} (columns orthonormal).
fn unitary_columns(m: &CMat, eps: f64) -> bool {
    let n = m.nrows();
    for a in 0..n {
        for b in a..n {
            let mut s = Complex64::new(0.0, 0.0);
            for c in 0..n {
                s += m[(c, a)] * m[(c, b)].conj();
            }
            let expect = if a == b { 1.0 } else { 0.0 };
            if (s - expect).norm() > eps {
                return false;
            }
        }
    }
    true
}

fn det(m: &CMat) -> Complex64 {
    m.clone().lu().determinant()
}

/// The rotation r_{ij}(φ): identity except the 2×2 block on rows/columns
/// (i, j) equal to [[cos φ, −sin φ], [sin φ, cos φ]]. Indices are 1-based,
/// i < j ≤ n. Tagged SO(n).
pub fn planar_rotation(i: usize, j: usize, phi: f64, n: usize) -> Result<GroupElement> {
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::IndexRange(format!(
            "planar rotation indices ({i},{j}) out of 1..={n}"
        )));
    }
    if i >= j {
        return Err(Error::IndexRange(format!(
            "planar rotation requires i < j, got ({i},{j})"
        )));
    }
    let mut m = CMat::identity(n, n);
    let (c, s) = (phi.cos(), phi.sin());
    let (a, b) = (i - 1, j - 1);
    m[(a, a)] = Complex64::new(c, 0.0);
    m[(a, b)] = Complex64::new(-s, 0.0);
    m[(b, a)] = Complex64::new(s, 0.0);
    m[(b, b)] = Complex64::new(c, 0.0);
    Ok(GroupElement {
        entries: m,
        tag: GroupTag::So,
        n,
    })
}

pub fn multiply(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    a.check_compatible(b)?;
    Ok(GroupElement {
        entries: &a.entries * &b.entries,
        tag: a.tag,
        n: a.n,
    })
}

/// Inverse. For SO/SU tags this is the conjugate transpose, which preserves
/// the group structure numerically; finite-tagged matrices fall back to LU.
pub fn inverse(a: &GroupElement) -> Result<GroupElement> {
    let entries = match a.tag {
        GroupTag::So | GroupTag::Su => a.entries.adjoint(),
        GroupTag::Finite(_) => a
            .entries
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("singular finite-group matrix".into()))?,
    };
    Ok(GroupElement {
        entries,
        tag: a.tag,
        n: a.n,
    })
}

/// v g v⁻¹.
pub fn conjugate(v: &GroupElement, g: &GroupElement) -> Result<GroupElement> {
    multiply(&multiply(v, g)?, &inverse(v)?)
}

/// Entrywise root-sum-square distance between inverse(x)·y and the identity.
///
/// Satisfies ρ(zx, zy) = ρ(x, y): left translation by z cancels inside
/// x⁻¹y, so the identity holds exactly in exact arithmetic.
pub fn invariant_metric(x: &GroupElement, y: &GroupElement) -> Result<f64> {
    x.check_compatible(y)?;
    let d = &inverse(x)?.entries * &y.entries;
    let mut s = 0.0;
    for i in 0..x.n {
        for j in 0..x.n {
            let e = d[(i, j)] - if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            s += e.norm_sqr();
        }
    }
    Ok(s.sqrt())
}
