//! Arithmetic in GF(q) for prime powers q ≤ 2^16.
//!
//! Elements are encoded as integers `0..q` whose base-p digits are the
//! coefficients of the polynomial representative (least significant digit =
//! constant term). Under this encoding `0` is zero, `1` is one, and the
//! integer order is the canonical element order used by point indexing.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An encoded field element.
pub type Elem = u16;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Orders up to this bound get precomputed operation tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Debug)]
struct Tables {
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// A finite field GF(p^e), immutable after construction.
#[derive(Clone)]
pub struct Field {
    order: u32,
    characteristic: u32,
    degree: u32,
    /// Lower coefficients of the monic modulus, constant term first.
    /// Empty for prime fields.
    modulus: Vec<u32>,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("order", &self.order)
            .field("characteristic", &self.characteristic)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus_coefficients())
            .finish()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.order)
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

/// Splits `q` into `(p, e)` with `q = p^e`, or fails if `q` is not a prime power.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotAPrimePower(q));
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::NotAPrimePower(q));
    }
    Ok((p as u32, e))
}

// Polynomials over GF(p) as coefficient vectors, constant term first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = (lead * c) % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

/// Decodes `code` into `len` base-p digits.
fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = code % p;
        code /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Whether the monic polynomial `x^e + lower` is irreducible over GF(p).
///
/// Trial division by every monic polynomial of degree `1..=e/2`.
pub fn is_irreducible(lower: &[u32], p: u32) -> bool {
    let e = lower.len();
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    if lower[0] == 0 {
        return false;
    }
    let mut f = lower.to_vec();
    f.push(1);
    for d in 1..=e / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g = digits(code, p, d);
            g.push(1);
            if poly_rem_monic(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible polynomial of degree `e` over GF(p) whose lower
/// coefficients have the smallest integer encoding.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = p.pow(e);
    (0..count)
        .map(|code| digits(code, p, e as usize))
        .find(|lower| is_irreducible(lower, p))
        .expect("an irreducible polynomial exists in every degree")
}

impl Field {
    /// Builds GF(q) with a deterministic modulus.
    pub fn new(q: u64) -> Result<Self> {
        if q > MAX_ORDER {
            return Err(Error::TooLarge(q));
        }
        let (p, e) = prime_power(q)?;
        let modulus = if e > 1 { smallest_irreducible(p, e) } else { Vec::new() };
        let mut field = Field {
            order: q as u32,
            characteristic: p,
            degree: e,
            modulus,
            tables: None,
        };
        if field.order <= TABLE_LIMIT {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    fn build_tables(&self) -> Tables {
        let q = self.order as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add_slow(a as Elem, b as Elem);
                mul[a * q + b] = self.mul_slow(a as Elem, b as Elem);
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as Elem;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as Elem;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_prime_field(&self) -> bool {
        self.degree == 1
    }

    /// Full coefficient list of the monic modulus (constant term first),
    /// or `None` for a prime field.
    pub fn modulus_coefficients(&self) -> Option<Vec<u32>> {
        if self.degree == 1 {
            None
        } else {
            let mut m = self.modulus.clone();
            m.push(1);
            Some(m)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order).map(|a| a as Elem)
    }

    pub fn contains(&self, a: u64) -> bool {
        a < self.order as u64
    }

    pub fn check(&self, a: u64) -> Result<Elem> {
        if self.contains(a) {
            Ok(a as Elem)
        } else {
            Err(Error::OutOfRange {
                value: a,
                order: self.order as u64,
            })
        }
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.characteristic;
        if self.degree == 1 {
            return ((a as u32 + b as u32) % p) as Elem;
        }
        if p == 2 {
            return a ^ b;
        }
        let e = self.degree as usize;
        let da = digits(a as u32, p, e);
        let db = digits(b as u32, p, e);
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
        undigits(&sum, p) as Elem
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.characteristic;
        if self.degree == 1 {
            return ((a as u64 * b as u64) % p as u64) as Elem;
        }
        let e = self.degree as usize;
        if p == 2 {
            // carry-less multiply, then reduce by x^e + lower
            let (x, y) = (a as u32, b as u32);
            let mut acc = 0u32;
            for i in 0..e {
                if y >> i & 1 == 1 {
                    acc ^= x << i;
                }
            }
            let red = undigits(&self.modulus, 2) | (1 << e);
            for bit in (e..2 * e).rev() {
                if acc >> bit & 1 == 1 {
                    acc ^= red << (bit - e);
                }
            }
            return acc as Elem;
        }
        let da = digits(a as u32, p, e);
        let db = digits(b as u32, p, e);
        let mut prod = vec![0u32; 2 * e - 1];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let mut m = self.modulus.clone();
        m.push(1);
        let mut r = poly_rem_monic(&prod, &m, p);
        r.resize(e, 0);
        undigits(&r, p) as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.add[a as usize * self.order as usize + b as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.mul[a as usize * self.order as usize + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.neg[a as usize],
            None => {
                // (p-1)·a, digit-wise
                let p = self.characteristic;
                if p == 2 {
                    a
                } else if self.degree == 1 {
                    ((p - a as u32) % p) as Elem
                } else {
                    let ds = digits(a as u32, p, self.degree as usize);
                    let n: Vec<u32> = ds.iter().map(|d| (p - d) % p).collect();
                    undigits(&n, p) as Elem
                }
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, mut base: Elem, mut exp: u64) -> Elem {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => t.inv[a as usize],
            None => self.pow(a, self.order as u64 - 2),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Range-checked addition.
    pub fn try_add(&self, a: u64, b: u64) -> Result<Elem> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    /// Range-checked multiplication.
    pub fn try_mul(&self, a: u64, b: u64) -> Result<Elem> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    /// Range-checked inverse.
    pub fn try_inv(&self, a: u64) -> Result<Elem> {
        self.inv(self.check(a)?)
    }

    /// Scales `a` so that its first nonzero entry is one. Returns the scale
    /// factor applied, or `None` for the zero vector.
    pub fn normalize(&self, a: &mut [Elem]) -> Option<Elem> {
        let lead = *a.iter().find(|&&x| x != 0)?;
        let s = self.inv(lead).ok()?;
        for x in a.iter_mut() {
            *x = self.mul(*x, s);
        }
        Some(s)
    }
}
