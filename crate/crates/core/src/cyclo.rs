//! Exact arithmetic in cyclotomic fields Q(ζ_m).
//!
//! Values are stored as rational coordinate vectors over the power basis
//! 1, ζ, …, ζ^{φ(m)−1}, kept reduced modulo the m-th cyclotomic polynomial,
//! so equality of coordinate vectors is equality of field elements. Binary
//! operations lift both operands into Q(ζ_lcm) first.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

fn cyclotomic_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the m-th cyclotomic polynomial, ascending degree.
pub fn cyclotomic_polynomial(m: usize) -> Arc<Vec<BigInt>> {
    assert!(m >= 1);
    if let Some(hit) = cyclotomic_cache().lock().unwrap().get(&m) {
        return hit.clone();
    }
    // Φ_m = (x^m − 1) / ∏_{d|m, d<m} Φ_d, exact division of monic integer polys
    let mut num = vec![BigInt::zero(); m + 1];
    num[0] = -BigInt::one();
    num[m] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    let arc = Arc::new(num);
    cyclotomic_cache()
        .lock()
        .unwrap()
        .insert(m, arc.clone());
    arc
}

/// Exact division of integer polynomials (divisor monic, remainder zero).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quo = vec![BigInt::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = rem[i + dd].clone();
        quo[i] = c.clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..=dd {
            rem[i + j] -= &c * &den[j];
        }
    }
    assert!(rem.iter().all(Zero::is_zero), "division not exact");
    quo
}

/// Euler's totient, by trial factorization (orders here are tiny).
pub fn euler_phi(mut m: usize) -> usize {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result = result / p * (p - 1);
        }
        p += 1;
    }
    if m > 1 {
        result = result / m * (m - 1);
    }
    result
}

/// An element of Q(ζ_order), reduced modulo Φ_order.
#[derive(Debug, Clone)]
pub struct Cyclo {
    order: usize,
    /// length φ(order), coordinates over 1, ζ, …
    coeffs: Vec<BigRational>,
}

impl Cyclo {
    pub fn zero() -> Self {
        Self {
            order: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// ζ_m^t.
    pub fn root_of_unity(m: usize, t: usize) -> Self {
        let mut poly = vec![BigRational::zero(); (t % m) + 1];
        poly[t % m] = BigRational::one();
        Self::reduce(m, poly)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Reduce an arbitrary-degree rational polynomial in ζ_m mod Φ_m.
    fn reduce(order: usize, mut poly: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        let phi_rat: Vec<BigRational> = phi
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        while poly.len() > deg {
            let top = poly.len() - 1;
            let c = poly[top].clone();
            if !c.is_zero() {
                for j in 0..=deg {
                    let t = &c * &phi_rat[j];
                    poly[top - deg + j] -= t;
                }
            }
            poly.pop();
        }
        poly.resize(deg, BigRational::zero());
        Self {
            order,
            coeffs: poly,
        }
    }

    /// Lift into Q(ζ_target), target a multiple of the current order.
    pub fn promote(&self, target: usize) -> Self {
        if target == self.order {
            return self.clone();
        }
        assert_eq!(target % self.order, 0, "promotion requires a field extension");
        let step = target / self.order;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        Self::reduce(target, poly)
    }

    fn common_order(&self, other: &Self) -> usize {
        num_integer::lcm(self.order, other.order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.common_order(other);
        let a = self.promote(m);
        let b = other.promote(m);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x + y)
            .collect();
        Self { order: m, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let m = self.common_order(other);
        let a = self.promote(m);
        let b = other.promote(m);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x - y)
            .collect();
        Self { order: m, coeffs }
    }

    pub fn neg(&self) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.common_order(other);
        let a = self.promote(m);
        let b = other.promote(m);
        let mut poly = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = x * y;
                poly[i + j] += t;
            }
        }
        Self::reduce(m, poly)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * q).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Apply the Galois automorphism σ_t: ζ ↦ ζ^t (t coprime to the order).
    pub fn galois(&self, t: usize) -> Result<Self> {
        let m = self.order;
        let t = t % m;
        if num_integer::gcd(t, m) != 1 {
            return Err(Error::InvalidArgument(format!(
                "σ_{t} is not an automorphism of Q(ζ_{m})"
            )));
        }
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * t + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // ζ^{jt} may exceed the basis; reduce exponents mod m first
            let e = (j * t) % m;
            if e >= poly.len() {
                poly.resize(e + 1, BigRational::zero());
            }
            poly[e] += c;
        }
        Ok(Self::reduce(m, poly))
    }

    /// Complex conjugation ζ ↦ ζ^{−1}.
    pub fn conj(&self) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        self.galois(self.order - 1).expect("m−1 is coprime to m")
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the order's cyclotomic polynomial over the rationals.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("inverse of zero".into()));
        }
        let phi = cyclotomic_polynomial(self.order);
        let phi_rat: Vec<BigRational> = phi
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let (g, _, v) = rat_poly_ext_gcd(&phi_rat, &self.coeffs);
        // g is a nonzero constant (Φ is irreducible over Q)
        if g.len() != 1 || g[0].is_zero() {
            return Err(Error::Internal(
                "cyclotomic gcd is not a unit; reduction broken".into(),
            ));
        }
        let inv_g = g[0].recip();
        let coeffs = v.iter().map(|c| c * &inv_g).collect();
        Ok(Self::reduce(self.order, coeffs))
    }

    /// True iff the value lies in Q.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Numerical embedding ζ ↦ e^{2πi/m}.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = rational_to_f64(c);
            acc += num_complex::Complex64::from_polar(
                1.0,
                std::f64::consts::TAU * j as f64 / self.order as f64,
            ) * x;
        }
        acc
    }

    /// The monic minimal polynomial over Q, as ascending rational
    /// coefficients: ∏ (X − σ_t(x)) over the distinct Galois conjugates.
    pub fn minimal_polynomial(&self) -> Vec<BigRational> {
        let m = self.order;
        let mut conjugates: Vec<Cyclo> = Vec::new();
        for t in 1..=m {
            if num_integer::gcd(t, m) != 1 {
                continue;
            }
            let c = self.galois(t).expect("coprime");
            if !conjugates.iter().any(|x| x.equals(&c)) {
                conjugates.push(c);
            }
        }
        // expand ∏ (X − c_i) with Cyclo coefficients
        let mut poly = vec![Cyclo::one()];
        for c in &conjugates {
            let mut next = vec![Cyclo::zero(); poly.len() + 1];
            for (i, a) in poly.iter().enumerate() {
                next[i + 1] = next[i + 1].add(a);
                next[i] = next[i].sub(&a.mul(c));
            }
            poly = next;
        }
        poly.iter()
            .map(|c| {
                c.as_rational()
                    .expect("symmetric functions of all conjugates are rational")
            })
            .collect()
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    // exact for the magnitudes seen here; falls back to string parsing only
    // if the parts overflow i128
    let num = q.numer();
    let den = q.denom();
    match (i128::try_from(num.clone()), i128::try_from(den.clone())) {
        (Ok(n), Ok(d)) => n as f64 / d as f64,
        _ => {
            let s = format!("{num}/{den}");
            let parts: Vec<&str> = s.split('/').collect();
            let n: f64 = parts[0].parse().unwrap_or(f64::NAN);
            let d: f64 = parts[1].parse().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Render a rational as `a/b` (or `a` when integral).
pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Render a minimal polynomial like `x^2 + x + 1`.
pub fn min_poly_string(coeffs: &[BigRational]) -> String {
    let mut terms = Vec::new();
    for (d, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let coeff_str = if mag.is_one() && d > 0 {
            String::new()
        } else {
            rational_string(&mag)
        };
        let var = match d {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{d}"),
        };
        let body = match (coeff_str.is_empty(), var.is_empty()) {
            (true, _) => var,
            (false, true) => coeff_str,
            (false, false) => format!("{coeff_str}{var}"),
        };
        let sign = if c.is_negative() { "-" } else { "+" };
        terms.push((sign, body));
    }
    let mut out = String::new();
    for (i, (sign, body)) in terms.iter().enumerate() {
        if i == 0 {
            if *sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(if *sign == "-" { " - " } else { " + " });
        }
        out.push_str(body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Extended gcd for rational polynomials: returns (g, u, v) with
/// u·a + v·b = g.
fn rat_poly_ext_gcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let trim = |mut p: Vec<BigRational>| {
        while p.len() > 1 && p.last().unwrap().is_zero() {
            p.pop();
        }
        p
    };
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut u0 = vec![BigRational::one()];
    let mut u1 = vec![BigRational::zero()];
    let mut v0 = vec![BigRational::zero()];
    let mut v1 = vec![BigRational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = rat_poly_divmod(&r0, &r1);
        let new_u = rat_poly_sub(&u0, &rat_poly_mul(&q, &u1));
        let new_v = rat_poly_sub(&v0, &rat_poly_mul(&q, &v1));
        r0 = r1;
        r1 = trim(r);
        u0 = u1;
        u1 = trim(new_u);
        v0 = v1;
        v1 = trim(new_v);
    }
    (r0, u0, v0)
}

fn rat_poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (vec![BigRational::zero()], rem);
    }
    let mut quo = vec![BigRational::zero(); rem.len() - db];
    for i in (0..quo.len()).rev() {
        let c = &rem[i + db] / &lead;
        quo[i] = c.clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..=db {
            let t = &c * &b[j];
            rem[i + j] -= t;
        }
    }
    rem.truncate(db.max(1));
    (quo, rem)
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = x * y;
            out[i + j] += t;
        }
    }
    out
}

fn rat_poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), BigRational::zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}
