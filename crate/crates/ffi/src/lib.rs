//! C ABI over the haarlab core: opaque handles, integer status codes, and a
//! thread-local last-error message. The generated header lives in
//! `include/haarlab.h`.

use haarlab::chart::{ChartKind, ChartSpec};
use haarlab::chartab::{solve_character_equation, CharacterTable};
use haarlab::group::GroupTag;
use haarlab::haar::HaarSampler;
use haarlab::quad::QuadratureSpec;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    Numerical = 4,
    ParseError = 5,
    NotAGroup = 6,
    CostCap = 7,
    Internal = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn status_of(e: &haarlab::Error) -> HlStatus {
    use haarlab::Error::*;
    match e {
        DimensionMismatch(_) | TagMismatch(_) | InvalidArgument(_) => HlStatus::InvalidArgument,
        IndexRange(_) | AngleRange(_) => HlStatus::OutOfRange,
        Quadrature(_) | SingularChartPoint(_) | NumericalResolution(_) => HlStatus::Numerical,
        Parse { .. } => HlStatus::ParseError,
        GroupStructure(_) => HlStatus::NotAGroup,
        CostCap(_) => HlStatus::CostCap,
        Internal(_) | Io(_) => HlStatus::Internal,
    }
}

fn fail(e: haarlab::Error) -> HlStatus {
    set_error(&e.to_string());
    status_of(&e)
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn parse_group_spec(spec: *const c_char) -> Result<(GroupTag, usize), HlStatus> {
    if spec.is_null() {
        set_error("group spec is NULL");
        return Err(HlStatus::NullPointer);
    }
    let s = CStr::from_ptr(spec).to_string_lossy();
    let Some((tag, n)) = s.split_once(':') else {
        set_error("group spec must look like so:3 or su:2");
        return Err(HlStatus::InvalidArgument);
    };
    let n: usize = n.parse().map_err(|_| {
        set_error("bad dimension in group spec");
        HlStatus::InvalidArgument
    })?;
    match tag {
        "so" => Ok((GroupTag::So, n)),
        "su" => Ok((GroupTag::Su, n)),
        _ => {
            set_error("group must be so or su");
            Err(HlStatus::InvalidArgument)
        }
    }
}

unsafe fn parse_chart_kind(chart: *const c_char) -> Result<ChartKind, HlStatus> {
    if chart.is_null() {
        return Ok(ChartKind::Hurwitz);
    }
    match CStr::from_ptr(chart).to_string_lossy().as_ref() {
        "hurwitz" => Ok(ChartKind::Hurwitz),
        "alt" => Ok(ChartKind::Alternate),
        other => {
            set_error(&format!("unknown chart `{other}`; expected hurwitz or alt"));
            Err(HlStatus::InvalidArgument)
        }
    }
}

// ---------------------------------------------------------------------------
// volumes and integrals

/// Closed-form total volume of SO(n) under ds² = ∑ dr².
#[no_mangle]
pub extern "C" fn hl_so_total_volume(n: u32, out: *mut f64) -> HlStatus {
    if out.is_null() {
        set_error("out is NULL");
        return HlStatus::NullPointer;
    }
    match haarlab::chart::so_total_volume(n as usize) {
        Ok(v) => {
            unsafe { *out = v };
            HlStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Closed-form chart-box volume of SU(n) under ds² = ∑ dc dc̄.
#[no_mangle]
pub extern "C" fn hl_su_total_volume(n: u32, out: *mut f64) -> HlStatus {
    if out.is_null() {
        set_error("out is NULL");
        return HlStatus::NullPointer;
    }
    match haarlab::chart::su_total_volume(n as usize) {
        Ok(v) => {
            unsafe { *out = v };
            HlStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Tensor-product quadrature of the invariant density over the chart box.
///
/// `group` is `so:N` or `su:N`; `chart` is `hurwitz`, `alt`, or NULL for the
/// default.
#[no_mangle]
pub unsafe extern "C" fn hl_volume_quadrature(
    group: *const c_char,
    chart: *const c_char,
    nodes: u32,
    out: *mut f64,
) -> HlStatus {
    if out.is_null() {
        set_error("out is NULL");
        return HlStatus::NullPointer;
    }
    let (tag, n) = match parse_group_spec(group) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let kind = match parse_chart_kind(chart) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let spec = match ChartSpec::new(tag, kind, n) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let q = QuadratureSpec::gauss((nodes as usize).max(2));
    *out = haarlab::quad::box_volume_quadrature(&spec, &q);
    HlStatus::Ok
}

/// Normalized Haar integral of (tr g)^power by full-chart quadrature.
#[no_mangle]
pub unsafe extern "C" fn hl_integrate_trace_power(
    group: *const c_char,
    power: u32,
    nodes: u32,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HlStatus {
    if out_re.is_null() {
        set_error("out_re is NULL");
        return HlStatus::NullPointer;
    }
    let (tag, n) = match parse_group_spec(group) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let spec = match ChartSpec::new(tag, ChartKind::Hurwitz, n) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let q = QuadratureSpec::gauss((nodes as usize).max(2)).with_periodic_nodes(
        (2 * power as usize + 2).max(4),
    );
    match haarlab::haar::integrate_trace_powers(&spec, &q, power as usize + 1) {
        Ok(vals) => {
            let v = vals[power as usize];
            *out_re = v.re;
            if !out_im.is_null() {
                *out_im = v.im;
            }
            HlStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// (1/|W|) ∫ (tr h)^power |D(h)|² dh over the Cartan torus of SO(n).
#[no_mangle]
pub unsafe extern "C" fn hl_weyl_integrate_trace_power(
    n: u32,
    power: u32,
    torus_nodes: u32,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HlStatus {
    if out_re.is_null() {
        set_error("out_re is NULL");
        return HlStatus::NullPointer;
    }
    let nodes = (torus_nodes as usize).max(8);
    let result = haarlab::weyl::weyl_integrate(
        |h| {
            let t = h.trace();
            let mut p = haarlab::Complex64::new(1.0, 0.0);
            for _ in 0..power {
                p *= t;
            }
            p
        },
        n as usize,
        nodes,
    );
    match result {
        Ok(v) => {
            *out_re = v.re;
            if !out_im.is_null() {
                *out_im = v.im;
            }
            HlStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Order of the Weyl group of SO(n) by the calibration integral.
#[no_mangle]
pub unsafe extern "C" fn hl_weyl_group_order(n: u32, torus_nodes: u32, out: *mut u64) -> HlStatus {
    if out.is_null() {
        set_error("out is NULL");
        return HlStatus::NullPointer;
    }
    match haarlab::weyl::weyl_group_order(n as usize, (torus_nodes as usize).max(8)) {
        Ok(w) => {
            *out = w.order;
            HlStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Number of degree-`degree` invariants in the coefficients of a
/// degree-`form_degree` form under the group of `group`.
#[no_mangle]
pub unsafe extern "C" fn hl_invariant_dimension(
    group: *const c_char,
    form_degree: u32,
    degree: u32,
    nodes: u32,
    out: *mut i64,
) -> HlStatus {
    if out.is_null() {
        set_error("out is NULL");
        return HlStatus::NullPointer;
    }
    let (tag, n) = match parse_group_spec(group) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let spec = match ChartSpec::new(tag, ChartKind::Hurwitz, n) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let q = QuadratureSpec::gauss((nodes as usize).max(8));
    match haarlab::invariants::invariant_dimension(form_degree, degree, &spec, &q) {
        Ok(c) => {
            *out = c.rounded;
            HlStatus::Ok
        }
        Err(e) => fail(e),
    }
}

// ---------------------------------------------------------------------------
// Haar sampler handle

/// Opaque Haar sampler over a chart.
pub struct HlSampler {
    inner: HaarSampler,
    n: usize,
}

/// Create a sampler; `chart` may be NULL for the Hurwitz chart. Identical
/// seeds give identical streams.
#[no_mangle]
pub unsafe extern "C" fn hl_sampler_new(
    group: *const c_char,
    chart: *const c_char,
    seed: u64,
    out: *mut *mut HlSampler,
) -> HlStatus {
    if out.is_null() {
        set_error("out is NULL");
        return HlStatus::NullPointer;
    }
    let (tag, n) = match parse_group_spec(group) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let kind = match parse_chart_kind(chart) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let spec = match ChartSpec::new(tag, kind, n) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let boxed = Box::new(HlSampler {
        inner: HaarSampler::new(spec, seed),
        n,
    });
    *out = Box::into_raw(boxed);
    HlStatus::Ok
}

/// Matrix dimension n of the sampled group.
#[no_mangle]
pub unsafe extern "C" fn hl_sampler_dim(sampler: *const HlSampler, out: *mut usize) -> HlStatus {
    if sampler.is_null() || out.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    *out = (*sampler).n;
    HlStatus::Ok
}

/// Draw the next element into row-major buffers of length n²; `out_im` may be
/// NULL for SO groups.
#[no_mangle]
pub unsafe extern "C" fn hl_sampler_next(
    sampler: *mut HlSampler,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HlStatus {
    if sampler.is_null() || out_re.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    let s = &mut *sampler;
    let g = s.inner.sample();
    for i in 0..s.n {
        for j in 0..s.n {
            let z = g.entry(i, j);
            *out_re.add(i * s.n + j) = z.re;
            if !out_im.is_null() {
                *out_im.add(i * s.n + j) = z.im;
            }
        }
    }
    HlStatus::Ok
}

/// Release a sampler.
#[no_mangle]
pub unsafe extern "C" fn hl_sampler_free(sampler: *mut HlSampler) {
    if !sampler.is_null() {
        drop(Box::from_raw(sampler));
    }
}

// ---------------------------------------------------------------------------
// character table handle

/// Opaque exact character table of a finite group.
pub struct HlCharTable {
    table: CharacterTable,
    order: usize,
}

/// Solve the character table of the group described by `text`, which holds
/// either a multiplication table (first line = order, then rows of 0-based
/// indices) or permutation generators in cycle notation, one per line.
#[no_mangle]
pub unsafe extern "C" fn hl_chartable_parse(
    text: *const c_char,
    out: *mut *mut HlCharTable,
) -> HlStatus {
    if text.is_null() || out.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    let body = CStr::from_ptr(text).to_string_lossy();
    let first = body
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let group = if first.starts_with('(') {
        haarlab::finite::parse_generators(&body)
    } else {
        haarlab::finite::parse_mult_table(&body)
    };
    let group = match group {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    let order = group.order();
    match solve_character_equation(&group) {
        Ok(table) => {
            *out = Box::into_raw(Box::new(HlCharTable { table, order }));
            HlStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Build the table from a row-major h×h multiplication table of 0-based
/// element indices; element 0 must be the identity.
#[no_mangle]
pub unsafe extern "C" fn hl_chartable_from_mult_table(
    mult: *const u32,
    h: usize,
    out: *mut *mut HlCharTable,
) -> HlStatus {
    if mult.is_null() || out.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    let rows: Vec<Vec<usize>> = (0..h)
        .map(|i| (0..h).map(|j| *mult.add(i * h + j) as usize).collect())
        .collect();
    let group = match haarlab::finite::FiniteGroup::from_mult_table(rows) {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    match solve_character_equation(&group) {
        Ok(table) => {
            *out = Box::into_raw(Box::new(HlCharTable { table, order: h }));
            HlStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Group order h.
#[no_mangle]
pub unsafe extern "C" fn hl_chartable_order(t: *const HlCharTable, out: *mut usize) -> HlStatus {
    if t.is_null() || out.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    *out = (*t).order;
    HlStatus::Ok
}

/// Number of conjugacy classes (= number of irreducibles).
#[no_mangle]
pub unsafe extern "C" fn hl_chartable_class_count(
    t: *const HlCharTable,
    out: *mut usize,
) -> HlStatus {
    if t.is_null() || out.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    *out = (*t).table.k();
    HlStatus::Ok
}

/// Size of conjugacy class `alpha`.
#[no_mangle]
pub unsafe extern "C" fn hl_chartable_class_size(
    t: *const HlCharTable,
    alpha: usize,
    out: *mut usize,
) -> HlStatus {
    if t.is_null() || out.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    let table = &(*t).table;
    if alpha >= table.k() {
        set_error("class index out of range");
        return HlStatus::OutOfRange;
    }
    *out = table.classes.sizes[alpha];
    HlStatus::Ok
}

/// Degree of the `kappa`-th irreducible.
#[no_mangle]
pub unsafe extern "C" fn hl_chartable_degree(
    t: *const HlCharTable,
    kappa: usize,
    out: *mut u64,
) -> HlStatus {
    if t.is_null() || out.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    let table = &(*t).table;
    if kappa >= table.k() {
        set_error("row index out of range");
        return HlStatus::OutOfRange;
    }
    *out = table.degrees[kappa];
    HlStatus::Ok
}

/// Character value χ^(κ) on class α, embedded into the complex numbers.
#[no_mangle]
pub unsafe extern "C" fn hl_chartable_entry(
    t: *const HlCharTable,
    kappa: usize,
    alpha: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HlStatus {
    if t.is_null() || out_re.is_null() || out_im.is_null() {
        set_error("NULL pointer");
        return HlStatus::NullPointer;
    }
    let table = &(*t).table;
    if kappa >= table.k() || alpha >= table.k() {
        set_error("index out of range");
        return HlStatus::OutOfRange;
    }
    let z = table.rows[kappa][alpha].to_complex();
    *out_re = z.re;
    *out_im = z.im;
    HlStatus::Ok
}

/// Release a character table.
#[no_mangle]
pub unsafe extern "C" fn hl_chartable_free(t: *mut HlCharTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}
