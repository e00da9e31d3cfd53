//! The residue field `GF(p^e)` and the local field `GF(p^e)((t))`.
//!
//! Field elements are indices `Σ c_j p^j` of their coefficient vectors over
//! the prime field. Series carry an absolute precision: a value is known
//! modulo `t^prec`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Field;

const MAX_ORDER: u64 = 1 << 20;
const ADD_TABLE_LIMIT: u32 = 512;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GfElem(pub u32);

impl GfElem {
    pub const ZERO: GfElem = GfElem(0);
    pub const ONE: GfElem = GfElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct Tables {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    add: Vec<u32>,
    neg: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Handle to `GF(p^e)`; cheap to clone.
#[derive(Clone, Debug)]
pub struct GfField(Arc<Tables>);

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d: &u32| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn digits(mut x: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of `a` modulo the monic polynomial `m` (coefficients low to high).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let off = r.len() - dm;
            for i in 0..dm {
                r[off + i] = (r[off + i] + (p - lead) * m[i]) % p;
            }
        }
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

fn monic_from_index(idx: u32, deg: u32, p: u32) -> Vec<u32> {
    let mut c = digits(idx, p, deg);
    c.push(1);
    c
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = (m.len() - 1) as u32;
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d) {
            let f = monic_from_index(idx, d, p);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl GfField {
    /// Builds `GF(p^e)` with the first monic irreducible modulus, ordering
    /// candidates by the integer `Σ c_j p^j` of their lower coefficients.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !(1..=4).contains(&e) {
            return Err(Error::DegreeOutOfRange(e));
        }
        let q64 = (p as u64).pow(e);
        if q64 > MAX_ORDER {
            return Err(Error::FieldTooLarge(q64));
        }
        let q = q64 as u32;
        let modulus = (0..p.pow(e))
            .map(|idx| monic_from_index(idx, e, p))
            .find(|m| is_irreducible(m, p))
            .expect("irreducible polynomials exist in every degree");

        let mulmod = |a: u32, b: u32| -> u32 {
            undigits(&poly_mulmod(&digits(a, p, e), &digits(b, p, e), &modulus, p), p)
        };
        let order = |g: u32| -> u32 {
            let mut x = g;
            let mut k = 1;
            while x != 1 {
                x = mulmod(x, g);
                k += 1;
            }
            k
        };
        let generator = if q == 2 { 1 } else { (2..q).find(|&g| order(g) == q - 1).unwrap() };
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            if i < q as usize - 1 {
                log[x as usize] = i as u32;
            }
            x = mulmod(x, generator);
        }
        let neg = (0..q)
            .map(|a| undigits(&digits(a, p, e).iter().map(|&d| (p - d) % p).collect::<Vec<_>>(), p))
            .collect();
        let mut tables = Tables { p, e, q, modulus, generator, add: Vec::new(), neg, exp, log };
        if q <= ADD_TABLE_LIMIT {
            let mut add = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    add.push(digit_add(a, b, p));
                }
            }
            tables.add = add;
        }
        Ok(GfField(Arc::new(tables)))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The fixed generator of the multiplicative group.
    pub fn generator(&self) -> GfElem {
        GfElem(self.0.generator)
    }

    pub fn elements(&self) -> impl Iterator<Item = GfElem> {
        (0..self.0.q).map(GfElem)
    }

    pub fn units(&self) -> impl Iterator<Item = GfElem> {
        (1..self.0.q).map(GfElem)
    }

    /// The prime-field basis `1, x, …, x^{e-1}`.
    pub fn basis(&self) -> Vec<GfElem> {
        (0..self.0.e).map(|i| GfElem(self.0.p.pow(i))).collect()
    }

    pub fn coefficients(&self, a: GfElem) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.e)
    }

    pub fn from_coefficients(&self, c: &[u32]) -> GfElem {
        let mut ds: Vec<u32> = c.iter().map(|&x| x % self.0.p).collect();
        ds.resize(self.0.e as usize, 0);
        GfElem(undigits(&ds, self.0.p))
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> GfElem {
        GfElem(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn gen_pow(&self, k: i64) -> GfElem {
        let n = (self.0.q - 1) as i64;
        GfElem(self.0.exp[k.rem_euclid(n) as usize])
    }

    /// Discrete log to the fixed generator.
    pub fn log(&self, a: GfElem) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize])
    }

    /// `a^n` with `0^0 = 1`; negative powers of zero panic.
    pub fn pow(&self, a: GfElem, n: i64) -> GfElem {
        if a.is_zero() {
            assert!(n >= 0, "negative power of zero");
            return if n == 0 { GfElem::ONE } else { GfElem::ZERO };
        }
        let l = self.0.log[a.0 as usize] as i64;
        self.gen_pow(l * n.rem_euclid((self.0.q - 1) as i64))
    }

    pub fn frobenius(&self, a: GfElem) -> GfElem {
        self.pow(a, self.0.p as i64)
    }

    /// `a^(p^l)`.
    pub fn frobenius_pow(&self, a: GfElem, l: u32) -> GfElem {
        (0..l).fold(a, |x, _| self.frobenius(x))
    }

    pub fn format_elem(&self, a: GfElem) -> String {
        if self.0.e == 1 {
            return a.0.to_string();
        }
        let c: Vec<String> = self.coefficients(a).iter().map(|d| d.to_string()).collect();
        format!("({})", c.join(","))
    }
}

fn digit_add(mut a: u32, mut b: u32, p: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

impl Field for GfField {
    type Elem = GfElem;

    #[inline]
    fn zero(&self) -> GfElem {
        GfElem::ZERO
    }

    #[inline]
    fn one(&self) -> GfElem {
        GfElem::ONE
    }

    #[inline]
    fn add(&self, a: GfElem, b: GfElem) -> GfElem {
        let t = &self.0;
        if t.e == 1 {
            let s = a.0 + b.0;
            return GfElem(if s >= t.p { s - t.p } else { s });
        }
        if !t.add.is_empty() {
            GfElem(t.add[(a.0 * t.q + b.0) as usize])
        } else {
            GfElem(digit_add(a.0, b.0, t.p))
        }
    }

    #[inline]
    fn neg(&self, a: GfElem) -> GfElem {
        GfElem(self.0.neg[a.0 as usize])
    }

    #[inline]
    fn mul(&self, a: GfElem, b: GfElem) -> GfElem {
        if a.0 == 0 || b.0 == 0 {
            return GfElem::ZERO;
        }
        let t = &self.0;
        GfElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    #[inline]
    fn inv(&self, a: GfElem) -> Option<GfElem> {
        if a.0 == 0 {
            return None;
        }
        let t = &self.0;
        let l = t.log[a.0 as usize];
        Some(GfElem(t.exp[((t.q - 1 - l) % (t.q - 1)) as usize]))
    }
}

/// Laurent series `t^val·(c_0 + c_1 t + …) + O(t^prec)`.
///
/// `coeffs` is empty for a value that is zero to the known precision, in
/// which case `val == prec`. Otherwise `coeffs[0]` and the last coefficient
/// are nonzero and `val + coeffs.len() <= prec`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LSeries {
    val: i64,
    coeffs: Vec<GfElem>,
    prec: i64,
}

impl LSeries {
    pub fn zero(prec: i64) -> Self {
        LSeries { val: prec, coeffs: Vec::new(), prec }
    }

    pub fn one(prec: i64) -> Self {
        Self::monomial(GfElem::ONE, 0, prec)
    }

    pub fn constant(c: GfElem, prec: i64) -> Self {
        Self::monomial(c, 0, prec)
    }

    /// `c·t^v`.
    pub fn monomial(c: GfElem, v: i64, prec: i64) -> Self {
        if c.is_zero() || v >= prec {
            return Self::zero(prec);
        }
        LSeries { val: v, coeffs: vec![c], prec }
    }

    /// `Σ coeffs[i] t^(lo+i)` truncated at `prec`.
    pub fn from_coeffs(lo: i64, coeffs: &[GfElem], prec: i64) -> Self {
        Self::normalized(lo, coeffs.to_vec(), prec)
    }

    fn normalized(mut val: i64, mut coeffs: Vec<GfElem>, prec: i64) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero());
        let Some(lead) = lead else {
            return Self::zero(prec);
        };
        if lead > 0 {
            coeffs.drain(..lead);
            val += lead as i64;
        }
        if val >= prec {
            return Self::zero(prec);
        }
        coeffs.truncate((prec - val) as usize);
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LSeries { val, coeffs, prec }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for zero-to-precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Valuation, or the precision for zero; a lower bound in both cases.
    pub fn val_bound(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn lead(&self) -> GfElem {
        self.coeffs.first().copied().unwrap_or(GfElem::ZERO)
    }

    /// Nonzero coefficient data: `(val, coeffs)`.
    pub fn raw(&self) -> (i64, &[GfElem]) {
        (self.val, &self.coeffs)
    }

    /// Coefficient of `t^i`; `i` must lie below the precision.
    pub fn coeff(&self, i: i64) -> GfElem {
        debug_assert!(i < self.prec, "coefficient beyond precision");
        if i < self.val || self.is_zero() {
            return GfElem::ZERO;
        }
        self.coeffs.get((i - self.val) as usize).copied().unwrap_or(GfElem::ZERO)
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::normalized(self.val, self.coeffs.clone(), prec)
    }

    /// Drops all terms of degree `>= deg` and forgets the precision bound,
    /// keeping the result as a polynomial known to `prec`.
    pub fn poly_part(&self, deg: i64, prec: i64) -> Self {
        if self.is_zero() || self.val >= deg {
            return Self::zero(prec);
        }
        let n = ((deg - self.val) as usize).min(self.coeffs.len());
        Self::normalized(self.val, self.coeffs[..n].to_vec(), prec)
    }

    pub fn shift(&self, k: i64) -> Self {
        LSeries { val: self.val + k, coeffs: self.coeffs.clone(), prec: self.prec + k }
    }

    pub fn neg(&self, k: &GfField) -> Self {
        LSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|&c| k.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn scale(&self, c: GfElem, k: &GfField) -> Self {
        if c.is_zero() {
            return Self::zero(self.prec);
        }
        LSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|&x| k.mul(c, x)).collect(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self, k: &GfField) -> Self {
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            return other.truncate(prec);
        }
        if other.is_zero() {
            return self.truncate(prec);
        }
        let lo = self.val.min(other.val);
        if lo >= prec {
            return Self::zero(prec);
        }
        let hi = (self.val + self.coeffs.len() as i64)
            .max(other.val + other.coeffs.len() as i64)
            .min(prec);
        let mut out = vec![GfElem::ZERO; (hi - lo) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let idx = self.val + i as i64 - lo;
            if idx < out.len() as i64 {
                out[idx as usize] = c;
            }
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            let idx = other.val + i as i64 - lo;
            if idx < out.len() as i64 {
                out[idx as usize] = k.add(out[idx as usize], c);
            }
        }
        Self::normalized(lo, out, prec)
    }

    pub fn sub(&self, other: &Self, k: &GfField) -> Self {
        self.add(&other.neg(k), k)
    }

    pub fn mul(&self, other: &Self, k: &GfField) -> Self {
        let prec = (self.val + other.prec).min(other.val + self.prec);
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        let val = self.val + other.val;
        let len = ((prec - val) as usize).min(self.coeffs.len() + other.coeffs.len() - 1);
        let mut out = vec![GfElem::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        Self::normalized(val, out, prec)
    }

    /// Multiplicative inverse; the relative precision is preserved.
    pub fn inv(&self, k: &GfField) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let rel = self.prec - self.val;
        if rel < 1 {
            return Err(Error::PrecisionExhausted("inverse needs one known coefficient"));
        }
        let n = rel as usize;
        let c0inv = k.inv(self.coeffs[0]).expect("leading coefficient is nonzero");
        let mut out = vec![GfElem::ZERO; n];
        out[0] = c0inv;
        for i in 1..n {
            let mut s = GfElem::ZERO;
            for j in 1..=i.min(self.coeffs.len() - 1) {
                s = k.add(s, k.mul(self.coeffs[j], out[i - j]));
            }
            out[i] = k.neg(k.mul(c0inv, s));
        }
        Ok(Self::normalized(-self.val, out, -self.val + rel))
    }

    /// `self / other`.
    pub fn div(&self, other: &Self, k: &GfField) -> Result<Self> {
        Ok(self.mul(&other.inv(k)?, k))
    }

    /// Equality of the two values modulo the smaller precision.
    pub fn approx_eq(&self, other: &Self, k: &GfField) -> bool {
        self.sub(other, k).is_zero()
    }

    pub fn format(&self, k: &GfField) -> String {
        if self.is_zero() {
            return format!("O(t^{})", self.prec);
        }
        let mut body = String::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !body.is_empty() {
                body.push_str(" + ");
            }
            body.push_str(&k.format_elem(c));
            match i {
                0 => {}
                1 => body.push_str(" t"),
                _ => {
                    let _ = write!(body, " t^{i}");
                }
            }
        }
        format!("t^{}*({}) + O(t^{})", self.val, body, self.prec)
    }
}

/// `A(λ) = Σ λ_i t^i`.
pub fn lift_a(lambda: &[GfElem], prec: i64) -> LSeries {
    assert!(!lambda.is_empty(), "lift_a needs at least one residue");
    LSeries::from_coeffs(0, lambda, prec)
}
