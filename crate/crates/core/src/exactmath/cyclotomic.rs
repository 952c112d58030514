//! Exact arithmetic in the cyclotomic field Q(ζ_n).
//!
//! Elements are stored as an integer coefficient vector over the power basis
//! 1, ζ, …, ζ^{d-1} (d = φ(n)) together with one positive common
//! denominator. After every operation the representation is reduced modulo
//! Φ_n and divided by the content gcd, so two equal field elements are
//! structurally identical.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use super::{ExactError, Scalar};

/// Context object for Q(ζ_n): the cyclotomic polynomial and the reduction
/// tables shared by all elements of the field.
#[derive(Debug)]
pub struct CyclotomicField {
    n: u32,
    phi: Vec<BigInt>,
    /// `powers[k]` = x^k mod Φ_n, long enough for products and all ζ^k, k < n.
    powers: Vec<Vec<BigInt>>,
    /// `conj[k]` = image of ζ^k under ζ ↦ ζ^{-1}, for k < d.
    conj: Vec<Vec<BigInt>>,
}

fn field_cache() -> &'static Mutex<HashMap<u32, Arc<CyclotomicField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients (low to high) of the n-th cyclotomic polynomial,
/// obtained by dividing x^n − 1 by Φ_d for every proper divisor d of n.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut p: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic_polynomial(d);
            p = exact_monic_div(&p, &q);
        }
    }
    p
}

/// Quotient of `num` by the monic `den`; the remainder must vanish.
fn exact_monic_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

impl CyclotomicField {
    /// The (cached) field Q(ζ_n).
    pub fn get(n: u32) -> Result<Arc<CyclotomicField>, ExactError> {
        if n == 0 {
            return Err(ExactError::InvalidOrder(n));
        }
        let mut cache = field_cache().lock().expect("field cache poisoned");
        if let Some(f) = cache.get(&n) {
            return Ok(f.clone());
        }
        let f = Arc::new(Self::build(n));
        cache.insert(n, f.clone());
        Ok(f)
    }

    fn build(n: u32) -> CyclotomicField {
        let phi = cyclotomic_polynomial(n);
        let d = phi.len() - 1;
        let table_len = std::cmp::max(2 * d, n as usize + 1);
        let mut powers = Vec::with_capacity(table_len);
        let mut cur = vec![BigInt::zero(); d];
        cur[0] = BigInt::one();
        for _ in 0..table_len {
            powers.push(cur.clone());
            // multiply by x and reduce the overflow coefficient with Φ_n
            let top = cur[d - 1].clone();
            let mut next = vec![BigInt::zero(); d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !top.is_zero() {
                for i in 0..d {
                    next[i] -= &top * &phi[i];
                }
            }
            cur = next;
        }
        let conj = (0..d)
            .map(|k| powers[(n as usize - k % n as usize) % n as usize].clone())
            .collect();
        CyclotomicField { n, phi, powers, conj }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// φ(n), the length of every coefficient vector.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn cyclotomic_poly(&self) -> &[BigInt] {
        &self.phi
    }

    fn reduce_wide(&self, wide: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        let mut out: Vec<BigInt> = Vec::with_capacity(d);
        let mut iter = wide.into_iter();
        for _ in 0..d {
            out.push(iter.next().unwrap_or_else(BigInt::zero));
        }
        for (k, c) in iter.enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.powers[d + k]) {
                if !p.is_zero() {
                    *o += &c * p;
                }
            }
        }
        out
    }
}

/// An element of Q(ζ_n) in canonical form.
#[derive(Clone)]
pub struct CycScalar {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycScalar {}

impl std::hash::Hash for CycScalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl CycScalar {
    fn from_parts(field: Arc<CyclotomicField>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut s = CycScalar { field, num, den };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for c in &mut self.num {
                *c = -c.clone();
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CycScalar {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    pub fn from_int(field: &Arc<CyclotomicField>, v: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(field);
        s.num[0] = v.into();
        s
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = q.numer().clone();
        Self::from_parts(field.clone(), num, q.denom().clone())
    }

    /// ζ^k for any integer k (taken mod n).
    pub fn zeta_pow(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let n = field.n as i64;
        let e = k.rem_euclid(n) as usize;
        CycScalar {
            field: field.clone(),
            num: field.powers[e].clone(),
            den: BigInt::one(),
        }
    }

    /// Build from rational coefficients over the power basis; the vector may
    /// be longer than φ(n), in which case it is reduced modulo Φ_n.
    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: &[BigRational]) -> Self {
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let wide: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let num = field.reduce_wide(wide);
        Self::from_parts(field.clone(), num, den)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.n
    }

    /// Canonical rational coefficients over 1, ζ, …, ζ^{d-1}.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// `Some(q)` when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check_field(&self, other: &Self) -> Result<(), ExactError> {
        if self.field.n != other.field.n {
            Err(ExactError::FieldMismatch {
                left: self.field.n,
                right: other.field.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_field(other)?;
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect();
            return Ok(Self::from_parts(self.field.clone(), num, self.den.clone()));
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Ok(Self::from_parts(
            self.field.clone(),
            num,
            &self.den * &other.den,
        ))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_field(other)?;
        let d = self.field.degree();
        if Scalar::is_zero(self) || Scalar::is_zero(other) {
            return Ok(Self::zero(&self.field));
        }
        let mut wide = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    wide[i + j] += a * b;
                }
            }
        }
        let num = self.field.reduce_wide(wide);
        Ok(Self::from_parts(
            self.field.clone(),
            num,
            &self.den * &other.den,
        ))
    }

    /// Image under the automorphism ζ ↦ ζ^{-1} (complex conjugation for
    /// the embedding ζ = e^{2πi/n}).
    pub fn conj(&self) -> Self {
        let d = self.field.degree();
        let mut num = vec![BigInt::zero(); d];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in num.iter_mut().zip(&self.field.conj[k]) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        Self::from_parts(self.field.clone(), num, self.den.clone())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = Scalar::mul(&acc, &base);
            }
            base = Scalar::mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn inverse(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        // Solve (num) * y = e_0 over Q using the multiplication matrix.
        let d = self.field.degree();
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(d);
        for k in 0..d {
            let mut wide = vec![BigInt::zero(); d + k];
            for (i, a) in self.num.iter().enumerate() {
                wide[i + k] = a.clone();
            }
            cols.push(self.field.reduce_wide(wide));
        }
        // augmented rows: a[r][c] = cols[c][r]
        let mut a: Vec<Vec<BigRational>> = (0..d)
            .map(|r| {
                let mut row: Vec<BigRational> =
                    (0..d).map(|c| BigRational::from(cols[c][r].clone())).collect();
                row.push(if r == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..d {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in col..=d {
                        let t = &f * &a[col][c];
                        a[r][c] = &a[r][c] - t;
                    }
                }
            }
        }
        let y: Vec<BigRational> = a.iter().map(|row| row[d].clone()).collect();
        let scale = BigRational::from(self.den.clone());
        let coeffs: Vec<BigRational> = y.iter().map(|c| c * &scale).collect();
        Some(Self::from_coeffs(&self.field, &coeffs))
    }

    /// Numerical value under ζ ↦ e^{2πi/n}, with an upper bound on the
    /// absolute error of the returned real and imaginary parts.
    pub fn to_complex(&self) -> (f64, f64, f64) {
        let n = self.field.n as f64;
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut re = 0.0;
        let mut im = 0.0;
        let mut mag = 0.0;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = c.to_f64().unwrap_or(f64::INFINITY) / den;
            let t = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += cf * t.cos();
            im += cf * t.sin();
            mag += cf.abs();
        }
        let d = self.field.degree() as f64;
        let err = mag * (8.0 * d + 16.0) * f64::EPSILON + f64::MIN_POSITIVE;
        (re, im, err)
    }

    /// JSON form: array of φ(n) decimal strings "num/den".
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs()
                .into_iter()
                .map(|q| Value::String(format!("{}/{}", q.numer(), q.denom())))
                .collect(),
        )
    }

    pub fn from_json(field: &Arc<CyclotomicField>, v: &Value) -> Result<Self, ExactError> {
        let arr = v
            .as_array()
            .ok_or_else(|| ExactError::Parse("scalar must be a JSON array".into()))?;
        if arr.len() != field.degree() {
            return Err(ExactError::Parse(format!(
                "expected {} coefficients, got {}",
                field.degree(),
                arr.len()
            )));
        }
        let coeffs = arr
            .iter()
            .map(|e| {
                let s = e
                    .as_str()
                    .ok_or_else(|| ExactError::Parse("coefficient must be a string".into()))?;
                BigRational::from_str(s.trim())
                    .map_err(|_| ExactError::Parse(format!("bad rational {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_coeffs(field, &coeffs))
    }
}

impl Scalar for CycScalar {
    fn zero_like(&self) -> Self {
        CycScalar::zero(&self.field)
    }

    fn one_like(&self) -> Self {
        CycScalar::from_int(&self.field, 1)
    }

    fn from_i64_like(&self, v: i64) -> Self {
        CycScalar::from_int(&self.field, v)
    }

    fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    fn add(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("cyclotomic field mismatch")
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.try_add(&rhs.neg()).expect("cyclotomic field mismatch")
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("cyclotomic field mismatch")
    }

    fn neg(&self) -> Self {
        CycScalar {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, q) in self.coeffs().into_iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let a = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = a.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{a}*z")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{a}*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycScalar[n={}]({})", self.field.n, self)
    }
}

/// Product in Q(ζ_n), rejecting operands from different fields.
pub fn cyc_mul(a: &CycScalar, b: &CycScalar) -> Result<CycScalar, ExactError> {
    a.try_mul(b)
}

/// The automorphism ζ ↦ ζ^{n-1}.
pub fn cyc_conj(a: &CycScalar) -> CycScalar {
    a.conj()
}
