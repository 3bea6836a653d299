//! Exact arithmetic for finite fields GF(p^k).
//!
//! Elements are canonical integers in `[0, q)`, packing the base-p digits of
//! the polynomial residue little-endian (the constant term is the least
//! significant digit). That gives every field a total order, which the rest
//! of the crate relies on for deterministic enumeration.
//!
//! [`QuadExt`] is a quadratic-extension view `F[omega]` with
//! `omega^2 = -a*omega - b` for a rootless `t^2 + a t + b`; it is the field
//! written `F-bar` in the spread constructions and works over any base field.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Canonical element representation: an integer in `[0, q)`.
pub type Fe = u32;

/// Fields at or below this order get dense multiplication/inverse tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("unsupported extension degree {0} (need k >= 1)")]
    UnsupportedDegree(u32),
    #[error("modulus is reducible: {0}")]
    Reducible(String),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {rep} is not a member of GF({q})")]
    FieldMismatch { rep: Fe, q: u32 },
    #[error("element lies in the base field; it does not generate the extension")]
    NotAGenerator,
}

/// Serializable field description: `{"p": .., "k": .., "modulus": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<Fe>>,
}

/// A finite field GF(p^k) with exact arithmetic.
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus over GF(p), little-endian, length k+1. Empty when k = 1.
    modulus: Vec<Fe>,
    mul_table: Option<Vec<Fe>>,
    inv_table: Option<Vec<Fe>>,
}

/// Shared handle; fields are immutable after construction.
pub type FieldRc = Arc<Field>;

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// ---- polynomial helpers over GF(p), digit vectors little-endian ----

fn poly_trim(v: &mut Vec<Fe>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(p: u32, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u64 + ai as u64 * bj as u64) % p as u64) as Fe;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(p: u32, a: &[Fe], m: &[Fe]) -> Vec<Fe> {
    debug_assert_eq!(*m.last().unwrap(), 1);
    let mut r: Vec<Fe> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = i + shift;
                let sub = (lead as u64 * mi as u64) % p as u64;
                r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as Fe;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_eval(p: u32, poly: &[Fe], x: Fe) -> Fe {
    let mut acc = 0u64;
    for &c in poly.iter().rev() {
        acc = (acc * x as u64 + c as u64) % p as u64;
    }
    acc as Fe
}

/// Exact irreducibility over GF(p) by trial division with monic factors of
/// degree up to deg/2. Only used at construction time, so the p^d scan cost
/// is acceptable at desk scale.
fn poly_is_irreducible(p: u32, m: &[Fe]) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // all monic polynomials of degree d
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                f.push((t % p as u64) as Fe);
                t /= p as u64;
            }
            f.push(1);
            if poly_rem(p, m, &f).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Build GF(p^k). A supplied modulus must be monic of degree k and
    /// irreducible over GF(p); when absent (and k > 1) the lexicographically
    /// least irreducible monic polynomial of degree k is chosen, so repeated
    /// builds agree.
    pub fn new(p: u32, k: u32, modulus: Option<Vec<Fe>>) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if k < 1 {
            return Err(GfError::UnsupportedDegree(k));
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= 1 << 24).ok_or(
            GfError::BadModulus(format!("field order p^k = {}^{} too large", p, k)),
        )? as u32;
        let modulus = match (k, modulus) {
            (1, None) => vec![],
            (1, Some(_)) => {
                return Err(GfError::BadModulus("modulus supplied for k = 1".into()))
            }
            (_, Some(m)) => {
                if m.len() != k as usize + 1 || *m.last().unwrap_or(&0) != 1 {
                    return Err(GfError::BadModulus(format!(
                        "need a monic degree-{} coefficient list, got {:?}",
                        k, m
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(GfError::BadModulus("coefficient out of range".into()));
                }
                for r in 0..p {
                    if poly_eval(p, &m, r) == 0 {
                        return Err(GfError::Reducible(format!("root {} in GF({})", r, p)));
                    }
                }
                if !poly_is_irreducible(p, &m) {
                    return Err(GfError::Reducible("proper factor found".into()));
                }
                m
            }
            (_, None) => {
                // lexicographically least irreducible monic of degree k,
                // ordering coefficients (c_{k-1}, ..., c_0)
                let mut found = None;
                for idx in 0..(p as u64).pow(k) {
                    let mut m = Vec::with_capacity(k as usize + 1);
                    let mut t = idx;
                    for _ in 0..k {
                        m.push((t % p as u64) as Fe); // c_0 first
                        t /= p as u64;
                    }
                    m.push(1);
                    if poly_is_irreducible(p, &m) {
                        found = Some(m);
                        break;
                    }
                }
                found.ok_or_else(|| GfError::BadModulus("no irreducible polynomial".into()))?
            }
        };
        let mut field = Field {
            p,
            k,
            q,
            modulus,
            mul_table: None,
            inv_table: None,
        };
        if q <= TABLE_LIMIT {
            field.build_tables();
        }
        Ok(field)
    }

    /// GF(q) for a prime power q, with the default modulus.
    pub fn of_order(q: u32) -> Result<Field, GfError> {
        let (p, k) = factor_prime_power(q).ok_or(GfError::NotPrime(q))?;
        Field::new(p, k, None)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let mut mul = vec![0u32; q * q];
        for a in 0..self.q {
            for b in a..self.q {
                let v = self.mul_raw(a, b);
                mul[a as usize * q + b as usize] = v;
                mul[b as usize * q + a as usize] = v;
            }
        }
        let mut inv = vec![0u32; q];
        for a in 1..self.q {
            inv[a as usize] = self.inv_raw(a);
        }
        self.mul_table = Some(mul);
        self.inv_table = Some(inv);
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    /// Number of elements.
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn char2(&self) -> bool {
        self.p == 2
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            k: self.k,
            modulus: if self.k == 1 {
                None
            } else {
                Some(self.modulus.clone())
            },
        }
    }

    /// The modulus as `t^k + .. + c_0`, little-endian. Empty for k = 1.
    pub fn modulus(&self) -> &[Fe] {
        &self.modulus
    }

    pub fn check(&self, x: Fe) -> Result<(), GfError> {
        if x < self.q {
            Ok(())
        } else {
            Err(GfError::FieldMismatch { rep: x, q: self.q })
        }
    }

    pub fn els(&self) -> std::ops::Range<Fe> {
        0..self.q
    }

    fn decode(&self, mut x: Fe) -> Vec<Fe> {
        let mut d = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            d.push(x % self.p);
            x /= self.p;
        }
        d
    }

    fn encode(&self, digits: &[Fe]) -> Fe {
        let mut x = 0u64;
        for &d in digits.iter().rev() {
            x = x * self.p as u64 + d as u64;
        }
        x as Fe
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.decode(a), self.decode(b));
        let sum: Vec<Fe> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let da = self.decode(a);
        let n: Vec<Fe> = da.iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&n)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    fn mul_raw(&self, a: Fe, b: Fe) -> Fe {
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as Fe;
        }
        let prod = poly_mul(self.p, &self.decode(a), &self.decode(b));
        let rem = poly_rem(self.p, &prod, &self.modulus);
        let mut digits = rem;
        digits.resize(self.k as usize, 0);
        self.encode(&digits)
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match &self.mul_table {
            Some(t) => t[a as usize * self.q as usize + b as usize],
            None => self.mul_raw(a, b),
        }
    }

    pub fn pow(&self, mut a: Fe, mut e: u64) -> Fe {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    fn inv_raw(&self, a: Fe) -> Fe {
        // a^(q-2) = a^(-1) in GF(q)*
        self.pow(a, self.q as u64 - 2)
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        Ok(match &self.inv_table {
            Some(t) => t[a as usize],
            None => self.inv_raw(a),
        })
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// For k = 2: the characteristic polynomial of the adjoined root, as
    /// `(a, b)` with `omega^2 + a*omega + b = 0`.
    pub fn adjoined_root_poly(&self) -> Option<(Fe, Fe)> {
        if self.k == 2 {
            Some((self.modulus[1], self.modulus[0]))
        } else {
            None
        }
    }
}

pub fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    for p in 2..=q {
        if !is_prime(p) {
            continue;
        }
        if q.is_multiple_of(p) {
            let mut k = 0;
            let mut m = q;
            while m.is_multiple_of(p) {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p, k)) } else { None };
        }
    }
    None
}

/// The lexicographically least `(a, b)` such that `t^2 + a t + b` has no root
/// in the field. Finite fields are never quadratically closed, so this always
/// succeeds.
pub fn find_irreducible_quadratic(field: &Field) -> (Fe, Fe) {
    for a in field.els() {
        'b: for b in field.els() {
            for lam in field.els() {
                let v = field.add(field.add(field.mul(lam, lam), field.mul(a, lam)), b);
                if v == 0 {
                    continue 'b;
                }
            }
            return (a, b);
        }
    }
    unreachable!("a finite field always admits an irreducible quadratic");
}

/// Quadratic extension `F[omega]`, `omega^2 = -a*omega - b` for a rootless
/// `t^2 + a t + b` over the base. Elements `u + v*omega` pack as `u + v*q`.
#[derive(Clone)]
pub struct QuadExt {
    base: FieldRc,
    a: Fe,
    b: Fe,
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})[t^2+{}t+{}]", self.base.q(), self.a, self.b)
    }
}

impl QuadExt {
    pub fn new(base: FieldRc, a: Fe, b: Fe) -> Result<QuadExt, GfError> {
        base.check(a)?;
        base.check(b)?;
        for lam in base.els() {
            if base.add(base.add(base.mul(lam, lam), base.mul(a, lam)), b) == 0 {
                return Err(GfError::Reducible(format!(
                    "t^2 + {}t + {} has root {} in GF({})",
                    a,
                    b,
                    lam,
                    base.q()
                )));
            }
        }
        Ok(QuadExt { base, a, b })
    }

    /// Extension through the lexicographically least rootless quadratic.
    pub fn auto(base: FieldRc) -> QuadExt {
        let (a, b) = find_irreducible_quadratic(&base);
        QuadExt { base, a, b }
    }

    pub fn base(&self) -> &FieldRc {
        &self.base
    }

    /// Coefficients of the defining polynomial `t^2 + a t + b`.
    pub fn defining(&self) -> (Fe, Fe) {
        (self.a, self.b)
    }

    /// Number of elements q^2.
    pub fn order(&self) -> u32 {
        self.base.q() * self.base.q()
    }

    pub fn omega(&self) -> Fe {
        self.base.q()
    }

    pub fn parts(&self, x: Fe) -> (Fe, Fe) {
        (x % self.base.q(), x / self.base.q())
    }

    pub fn pack(&self, u: Fe, v: Fe) -> Fe {
        u + v * self.base.q()
    }

    pub fn in_base(&self, x: Fe) -> bool {
        x < self.base.q()
    }

    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        let f = &self.base;
        let (u1, v1) = self.parts(x);
        let (u2, v2) = self.parts(y);
        self.pack(f.add(u1, u2), f.add(v1, v2))
    }

    pub fn neg(&self, x: Fe) -> Fe {
        let (u, v) = self.parts(x);
        self.pack(self.base.neg(u), self.base.neg(v))
    }

    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        let f = &self.base;
        let (u1, v1) = self.parts(x);
        let (u2, v2) = self.parts(y);
        // (u1 + v1 w)(u2 + v2 w),  w^2 = -b - a w
        let vv = f.mul(v1, v2);
        let u = f.sub(f.mul(u1, u2), f.mul(self.b, vv));
        let v = f.sub(f.add(f.mul(u1, v2), f.mul(v1, u2)), f.mul(self.a, vv));
        self.pack(u, v)
    }

    pub fn inv(&self, x: Fe) -> Result<Fe, GfError> {
        if x == 0 {
            return Err(GfError::DivisionByZero);
        }
        let f = &self.base;
        let (u, v) = self.parts(x);
        // norm(u + v w) = u^2 - a u v + b v^2, never 0 for (u,v) != 0
        let norm = f.add(
            f.sub(f.mul(u, u), f.mul(self.a, f.mul(u, v))),
            f.mul(self.b, f.mul(v, v)),
        );
        let ninv = f.inv(norm)?;
        let iu = f.mul(f.sub(u, f.mul(self.a, v)), ninv);
        let iv = f.mul(f.neg(v), ninv);
        Ok(self.pack(iu, iv))
    }

    /// Monic `t^2 + A t + B` with `x` as a root and no root in the base.
    /// Errors when `x` lies in the base field.
    pub fn char_poly(&self, x: Fe) -> Result<(Fe, Fe), GfError> {
        let f = &self.base;
        let (u, v) = self.parts(x);
        if v == 0 {
            return Err(GfError::NotAGenerator);
        }
        // x^2 = c + d x  with  d = 2u - a v,  c = u^2 - b v^2 - d u
        let d = f.sub(f.add(u, u), f.mul(self.a, v));
        let c = f.sub(f.sub(f.mul(u, u), f.mul(self.b, f.mul(v, v))), f.mul(d, u));
        let big_a = f.neg(d);
        let big_b = f.neg(c);
        debug_assert_eq!(
            self.add(self.mul(x, x), self.add(self.mul(big_a, x), big_b)),
            0
        );
        Ok((big_a, big_b))
    }

    /// Field description for serialization. Flat `{p, k, modulus}` when the
    /// base is a prime field; nested otherwise.
    pub fn describe(&self) -> serde_json::Value {
        if self.base.k() == 1 {
            serde_json::json!({"p": self.base.p(), "k": 2, "modulus": [self.b, self.a, 1]})
        } else {
            serde_json::json!({"base": self.base.spec(), "ext_modulus": [self.b, self.a, 1]})
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(Field::new(4, 1, None).unwrap_err(), GfError::NotPrime(4));
    }

    #[test]
    fn rejects_degree_zero() {
        assert_eq!(
            Field::new(3, 0, None).unwrap_err(),
            GfError::UnsupportedDegree(0)
        );
    }

    #[test]
    fn rejects_reducible_modulus() {
        // t^2 + 1 = (t+1)^2 over GF(2)
        match Field::new(2, 2, Some(vec![1, 0, 1])) {
            Err(GfError::Reducible(_)) => {}
            other => panic!("expected Reducible, got {:?}", other),
        }
    }

    #[test]
    fn gf4_modulus_and_arithmetic() {
        // the only irreducible quadratic over GF(2) is t^2 + t + 1
        let f = gf(4);
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let w = 2; // omega
        assert_eq!(f.mul(w, w), 3); // omega^2 = omega + 1
        assert_eq!(f.inv(w).unwrap(), 3); // omega * (omega + 1) = 1
    }

    #[test]
    fn gf9_auto_modulus_is_t2_plus_1() {
        // exhaustive root check over the 9 monic quadratics with a = 0 first
        let f = gf(9);
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn gf5_add_example() {
        let f = gf(5);
        assert_eq!(f.add(3, 4), 2);
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = gf(q);
            for a in f.els() {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={} a={}", q, a);
                }
                for b in f.els() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.els() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "distributivity in GF({})",
                            q
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn irreducible_quadratic_search_frozen_values() {
        // GF(2): t^2, t^2+1, t^2+t all have roots; t^2+t+1 does not
        assert_eq!(find_irreducible_quadratic(&gf(2)), (1, 1));
        // GF(3): -1 is a non-square mod 3
        assert_eq!(find_irreducible_quadratic(&gf(3)), (0, 1));
        // GF(5): squares are {0,1,4}; -2 = 3 is not one
        assert_eq!(find_irreducible_quadratic(&gf(5)), (0, 2));
    }

    #[test]
    fn irreducible_quadratic_is_rootless_for_many_fields() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13] {
            let f = gf(q);
            let (a, b) = find_irreducible_quadratic(&f);
            for lam in f.els() {
                assert_ne!(
                    f.add(f.add(f.mul(lam, lam), f.mul(a, lam)), b),
                    0,
                    "root {} over GF({})",
                    lam,
                    q
                );
            }
        }
    }

    #[test]
    fn adjoined_root_satisfies_its_polynomial() {
        for q in [4, 9, 25, 49] {
            let f = gf(q);
            let (a, b) = f.adjoined_root_poly().unwrap();
            let w = f.p(); // the adjoined root has digits (0, 1)
            assert_eq!(f.add(f.add(f.mul(w, w), f.mul(a, w)), b), 0);
            // no root among the prime-subfield elements
            for lam in 0..f.p() {
                assert_ne!(f.add(f.add(f.mul(lam, lam), f.mul(a, lam)), b), 0);
            }
        }
    }

    #[test]
    fn quad_ext_matches_flat_extension_field() {
        // QuadExt over GF(3) with t^2+1 must agree with GF(9) built directly
        let base = Arc::new(gf(3));
        let ext = QuadExt::new(base, 0, 1).unwrap();
        let flat = gf(9);
        for x in 0..9 {
            for y in 0..9 {
                assert_eq!(ext.add(x, y), flat.add(x, y));
                assert_eq!(ext.mul(x, y), flat.mul(x, y));
            }
            if x != 0 {
                assert_eq!(ext.inv(x).unwrap(), flat.inv(x).unwrap());
            }
        }
    }

    #[test]
    fn quad_ext_char_poly() {
        let base = Arc::new(gf(2));
        let ext = QuadExt::auto(base);
        assert_eq!(ext.defining(), (1, 1));
        assert_eq!(ext.char_poly(ext.omega()).unwrap(), (1, 1));
        assert_eq!(ext.char_poly(1).unwrap_err(), GfError::NotAGenerator);
        // omega + 1 is the conjugate root of the same polynomial
        assert_eq!(ext.char_poly(3).unwrap(), (1, 1));
    }

    #[test]
    fn large_field_without_tables() {
        let f = Field::new(2, 9, None).unwrap(); // GF(512), above the table limit
        for a in [1u32, 37, 255, 400] {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), 1);
        }
    }
}
