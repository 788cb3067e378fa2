//! The tower GF(p) ⊂ F = GF(q) ⊂ E = GF(q^n).
//!
//! Elements of `F` are `u32` codes `c_0 + c_1 p + ... + c_{a-1} p^{a-1}`
//! whose base-p digits are the coefficients in the power basis of the
//! generator `u` of `F/GF(p)`. Elements of `E` are dense coefficient vectors
//! over `F`, least significant first, reduced modulo the extension modulus.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::fpoly::{FPoly, PolyRing};

/// The field `F = GF(p^a)` with a fixed defining polynomial for `u`.
#[derive(Debug, Clone)]
pub struct BaseField {
    p: u32,
    a: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace_basis: Vec<u32>,
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.a == other.a && self.modulus == other.modulus
    }
}

impl Eq for BaseField {}

const NO_LOG: u32 = u32::MAX;

/// Largest `q = p^a` with `a > 1` for which log tables are built.
pub const MAX_TABLE_FIELD: u64 = 1 << 22;

impl BaseField {
    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self> {
        if !arith::is_prime(p as u128) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(BaseField {
            p,
            a: 1,
            q: p,
            modulus: vec![0, 1],
            exp: Vec::new(),
            log: Vec::new(),
            trace_basis: vec![1],
        })
    }

    /// GF(q) with the default modulus for `u`: `u^2+u+1` for q=4,
    /// `u^3+u+1` for q=8, `u^2-u-1` for q=9, otherwise the least monic
    /// irreducible of degree `a` (candidates ordered by the integer whose
    /// base-p digits are the lower coefficients, constant term least).
    pub fn new(q: u64) -> Result<Self> {
        let (p, a) = arith::prime_power(q)?;
        let modulus = match q {
            4 => vec![1, 1, 1],
            8 => vec![1, 1, 0, 1],
            9 => vec![2, 2, 1],
            _ if a == 1 => return Self::prime(p as u32),
            _ => least_irreducible(&Self::prime(p as u32)?, a as usize).coeffs().to_vec(),
        };
        Self::with_modulus(p as u32, modulus)
    }

    /// GF(p^a) defined by the given monic polynomial over GF(p)
    /// (coefficients least significant first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        let prime = Self::prime(p)?;
        let poly = prime.poly(modulus.iter().map(|&c| c % p).collect());
        if poly.degree() < 1 || poly.leading() != 1 {
            return Err(Error::NotMonic);
        }
        if !PolyRing::new(&prime).is_irreducible(&poly) {
            return Err(Error::NotIrreducible(poly.to_string()));
        }
        let a = poly.degree() as u32;
        if a == 1 {
            return Ok(prime);
        }
        let q64 = (p as u64).pow(a);
        if q64 > MAX_TABLE_FIELD {
            return Err(Error::BudgetExceeded { size: q64 as u128, budget: MAX_TABLE_FIELD as u128 });
        }
        let q = q64 as u32;
        let mut field = BaseField {
            p,
            a,
            q,
            modulus: poly.coeffs().to_vec(),
            exp: Vec::new(),
            log: Vec::new(),
            trace_basis: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn digits(&self, mut c: u32) -> Vec<u32> {
        (0..self.a)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    fn from_digits(&self, ds: &[u32]) -> u32 {
        ds.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    /// Product of codes by polynomial arithmetic, used only to build tables.
    fn slow_mul(&self, x: u32, y: u32) -> u32 {
        let (p, a) = (self.p as u64, self.a as usize);
        let (dx, dy) = (self.digits(x), self.digits(y));
        let mut prod = vec![0u64; 2 * a - 1];
        for (i, &u) in dx.iter().enumerate() {
            for (j, &v) in dy.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p;
            }
        }
        for i in (a..prod.len()).rev() {
            let c = prod[i];
            if c != 0 {
                for j in 0..a {
                    let sub = c * self.modulus[j] as u64 % p;
                    prod[i - a + j] = (prod[i - a + j] + p - sub) % p;
                }
            }
        }
        let ds: Vec<u32> = prod[..a].iter().map(|&d| d as u32).collect();
        self.from_digits(&ds)
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        let gen = (2..self.q)
            .find(|&g| {
                let mut x = 1;
                for k in 1..=order {
                    x = self.slow_mul(x, g);
                    if x == 1 {
                        return k == order;
                    }
                }
                false
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NO_LOG; self.q as usize];
        let mut x = 1;
        for k in 0..order {
            exp.push(x);
            log[x as usize] = k;
            x = self.slow_mul(x, gen);
        }
        self.exp = exp;
        self.log = log;
        // tr(u^k) = sum over i < a of (u^k)^{p^i}
        self.trace_basis = (0..self.a)
            .map(|k| {
                let uk = self.pow(self.p, k as u128);
                let mut t = 0;
                let mut y = uk;
                for _ in 0..self.a {
                    t = self.add(t, y);
                    y = self.pow(y, self.p as u128);
                }
                debug_assert!(t < self.p);
                t
            })
            .collect();
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.a
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial of `u` over GF(p), least significant first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.a == 1
    }

    /// The generator `u` (for a prime field, 1).
    pub fn u(&self) -> u32 {
        if self.a == 1 {
            1
        } else {
            self.p
        }
    }

    /// Embeds an integer through GF(p).
    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        if self.a == 1 {
            let s = x + y;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            x ^ y
        } else {
            let (mut x, mut y) = (x, y);
            let mut out = 0;
            let mut place = 1;
            while x > 0 || y > 0 {
                out += (x % self.p + y % self.p) % self.p * place;
                x /= self.p;
                y /= self.p;
                place *= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        if self.a == 1 {
            if x == 0 {
                0
            } else {
                self.p - x
            }
        } else if self.p == 2 {
            x
        } else {
            let mut x = x;
            let mut out = 0;
            let mut place = 1;
            while x > 0 {
                out += (self.p - x % self.p) % self.p * place;
                x /= self.p;
                place *= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if self.a == 1 {
            (x as u64 * y as u64 % self.p as u64) as u32
        } else if x == 0 || y == 0 {
            0
        } else {
            let s = self.log[x as usize] as u64 + self.log[y as usize] as u64;
            self.exp[(s % (self.q as u64 - 1)) as usize]
        }
    }

    pub fn inv(&self, x: u32) -> Result<u32> {
        if x == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.a == 1 {
            Ok(self.pow(x, self.p as u128 - 2))
        } else {
            let l = self.log[x as usize];
            Ok(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
        }
    }

    pub fn pow(&self, x: u32, mut e: u128) -> u32 {
        let mut acc = 1;
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Trace from F down to GF(p).
    pub fn trace_to_prime(&self, x: u32) -> u32 {
        if self.a == 1 {
            return x;
        }
        let p = self.p as u64;
        let mut x = x;
        let mut t = 0u64;
        for &tk in &self.trace_basis {
            t += (x % self.p) as u64 * tk as u64;
            x /= self.p;
        }
        (t % p) as u32
    }

    /// Digits of an element in the basis `1, u, ..., u^{a-1}`.
    pub fn to_digits(&self, x: u32) -> Vec<u32> {
        self.digits(x)
    }

    pub fn poly(&self, coeffs: Vec<u32>) -> FPoly {
        FPoly::new(coeffs)
    }
}

/// The least monic irreducible of degree `d` over `f`; candidate `k`
/// supplies the lower coefficients as its base-q digits.
pub fn least_irreducible(f: &BaseField, d: usize) -> FPoly {
    let ring = PolyRing::new(f);
    let q = f.order() as u128;
    let mut k: u128 = 0;
    loop {
        let mut coeffs = Vec::with_capacity(d + 1);
        let mut t = k;
        for _ in 0..d {
            coeffs.push((t % q) as u32);
            t /= q;
        }
        coeffs.push(1);
        let cand = FPoly::new(coeffs);
        if ring.is_irreducible(&cand) {
            return cand;
        }
        k += 1;
    }
}

/// An element of `E`: `n` coefficients over `F`, least significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element(pub Vec<u32>);

/// `E = F[x]/(ext_modulus)` with a precomputed Frobenius matrix.
#[derive(Debug, Clone)]
pub struct FieldTower {
    base: Arc<BaseField>,
    n: usize,
    modulus: FPoly,
    /// Row `i` holds `x^{iq} mod ext_modulus`.
    frob: Vec<Vec<u32>>,
    /// `T(x^i)` for `i < n`.
    trace_basis: Vec<u32>,
}

impl FieldTower {
    /// Builds the tower over the default GF(q) with the least irreducible
    /// extension modulus of degree `n`.
    pub fn new(q: u64, n: usize) -> Result<Self> {
        Self::construct(Arc::new(BaseField::new(q)?), n, None)
    }

    /// Builds `E` over `base`, verifying a supplied modulus or choosing
    /// the least irreducible one.
    pub fn construct(base: Arc<BaseField>, n: usize, ext_modulus: Option<FPoly>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        let ring = PolyRing::new(&base);
        let modulus = match ext_modulus {
            Some(f) => {
                if f.degree() != n as isize {
                    return Err(Error::WrongDegree { expected: n, found: f.degree().max(0) as usize });
                }
                if f.leading() != 1 {
                    return Err(Error::NotMonic);
                }
                if !ring.is_irreducible(&f) {
                    return Err(Error::NotIrreducible(f.to_string()));
                }
                f
            }
            None => least_irreducible(&base, n),
        };
        let mut tower = FieldTower { base, n, modulus, frob: Vec::new(), trace_basis: Vec::new() };
        let xq = tower.pow(&tower.x(), tower.base.order() as u128);
        let mut row = tower.one();
        let mut frob = Vec::with_capacity(n);
        for _ in 0..n {
            frob.push(row.0.clone());
            row = tower.mul(&row, &xq);
        }
        tower.frob = frob;
        tower.trace_basis = (0..n)
            .map(|i| {
                let mut e = tower.zero();
                e.0[i] = 1;
                let mut t = tower.zero();
                let mut y = e;
                for _ in 0..n {
                    t = tower.add(&t, &y);
                    y = tower.frobenius(&y, 1);
                }
                debug_assert!(t.0[1..].iter().all(|&c| c == 0));
                t.0[0]
            })
            .collect();
        Ok(tower)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn base_arc(&self) -> Arc<BaseField> {
        Arc::clone(&self.base)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.base.order() as u64
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn modulus(&self) -> &FPoly {
        &self.modulus
    }

    /// `q^n`, the number of elements of `E`.
    pub fn size(&self) -> u128 {
        (self.q() as u128).pow(self.n as u32)
    }

    /// `q^n - 1`, the order of `E*`.
    pub fn group_order(&self) -> u128 {
        self.size() - 1
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.n])
    }

    pub fn one(&self) -> Element {
        self.constant(1)
    }

    pub fn constant(&self, c: u32) -> Element {
        let mut v = vec![0; self.n];
        v[0] = c;
        Element(v)
    }

    /// The class of `x`, a root of the extension modulus.
    pub fn x(&self) -> Element {
        let mut v = vec![0; self.n];
        if self.n == 1 {
            v[0] = self.base.neg(self.modulus.coeff(0));
        } else {
            v[1] = 1;
        }
        Element(v)
    }

    pub fn is_zero(&self, x: &Element) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    /// Element from coefficients (padded or reduced as needed).
    pub fn element(&self, coeffs: &[u32]) -> Element {
        if coeffs.len() <= self.n {
            let mut v = coeffs.to_vec();
            v.resize(self.n, 0);
            Element(v)
        } else {
            let ring = PolyRing::new(&self.base);
            let r = ring.rem(&FPoly::new(coeffs.to_vec()), &self.modulus);
            self.element(r.coeffs())
        }
    }

    pub fn from_poly(&self, f: &FPoly) -> Element {
        self.element(f.coeffs())
    }

    pub fn to_poly(&self, x: &Element) -> FPoly {
        FPoly::new(x.0.clone())
    }

    /// Index `sum c_i q^i`, a bijection `E -> [0, q^n)`.
    pub fn index(&self, x: &Element) -> u128 {
        let q = self.q() as u128;
        x.0.iter().rev().fold(0, |acc, &c| acc * q + c as u128)
    }

    pub fn from_index(&self, mut k: u128) -> Element {
        let q = self.q() as u128;
        Element(
            (0..self.n)
                .map(|_| {
                    let c = (k % q) as u32;
                    k /= q;
                    c
                })
                .collect(),
        )
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> Element {
        let q = self.base.order();
        Element((0..self.n).map(|_| rng.gen_range(0..q)).collect())
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        Element(x.0.iter().zip(&y.0).map(|(&a, &b)| self.base.add(a, b)).collect())
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        Element(x.0.iter().zip(&y.0).map(|(&a, &b)| self.base.sub(a, b)).collect())
    }

    pub fn neg(&self, x: &Element) -> Element {
        Element(x.0.iter().map(|&a| self.base.neg(a)).collect())
    }

    pub fn scale(&self, c: u32, x: &Element) -> Element {
        Element(x.0.iter().map(|&a| self.base.mul(c, a)).collect())
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let n = self.n;
        let f = self.modulus.coeffs();
        if self.base.is_prime_field() {
            let p = self.base.p() as u64;
            let mut prod = vec![0u64; 2 * n - 1];
            for (i, &a) in x.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in y.0.iter().enumerate() {
                    prod[i + j] += a as u64 * b as u64;
                }
                if p > 1 << 15 {
                    for v in &mut prod {
                        *v %= p;
                    }
                }
            }
            for i in (n..prod.len()).rev() {
                let c = prod[i] % p;
                if c != 0 {
                    let c = p - c;
                    for j in 0..n {
                        prod[i - n + j] = (prod[i - n + j] + c * f[j] as u64) % p;
                    }
                }
            }
            Element(prod[..n].iter().map(|&v| (v % p) as u32).collect())
        } else {
            let b = &*self.base;
            let mut prod = vec![0u32; 2 * n - 1];
            for (i, &a) in x.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &c) in y.0.iter().enumerate() {
                    prod[i + j] = b.add(prod[i + j], b.mul(a, c));
                }
            }
            for i in (n..prod.len()).rev() {
                let c = prod[i];
                if c != 0 {
                    for j in 0..n {
                        prod[i - n + j] = b.sub(prod[i - n + j], b.mul(c, f[j]));
                    }
                }
            }
            prod.truncate(n);
            Element(prod)
        }
    }

    pub fn square(&self, x: &Element) -> Element {
        self.mul(x, x)
    }

    pub fn pow(&self, x: &Element, mut e: u128) -> Element {
        let mut acc = self.one();
        let mut b = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.square(&b);
            }
        }
        acc
    }

    pub fn inverse(&self, x: &Element) -> Result<Element> {
        if self.is_zero(x) {
            return Err(Error::DivisionByZero);
        }
        let ring = PolyRing::new(&self.base);
        let (g, s, _) = ring.xgcd(&self.to_poly(x), &self.modulus);
        debug_assert_eq!(g, FPoly::one());
        Ok(self.from_poly(&s))
    }

    /// `x^{q^i}`, applying the precomputed Frobenius matrix `i mod n` times.
    pub fn frobenius(&self, x: &Element, i: usize) -> Element {
        let mut y = x.clone();
        for _ in 0..i % self.n {
            y = self.frobenius_once(&y);
        }
        y
    }

    fn frobenius_once(&self, x: &Element) -> Element {
        let n = self.n;
        if self.base.is_prime_field() {
            let p = self.base.p() as u64;
            let mut acc = vec![0u64; n];
            for (i, &c) in x.0.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (a, &r) in acc.iter_mut().zip(&self.frob[i]) {
                    *a = (*a + c as u64 * r as u64) % p;
                }
            }
            Element(acc.into_iter().map(|v| v as u32).collect())
        } else {
            let b = &*self.base;
            let mut acc = vec![0u32; n];
            for (i, &c) in x.0.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (a, &r) in acc.iter_mut().zip(&self.frob[i]) {
                    *a = b.add(*a, b.mul(c, r));
                }
            }
            Element(acc)
        }
    }

    /// The conjugates `x, x^q, ..., x^{q^{n-1}}`.
    pub fn conjugates(&self, x: &Element) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.n);
        let mut y = x.clone();
        for _ in 0..self.n {
            let next = self.frobenius_once(&y);
            out.push(y);
            y = next;
        }
        out
    }

    /// `T_{E/F}(x)`.
    pub fn trace_to_base(&self, x: &Element) -> u32 {
        let b = &*self.base;
        x.0.iter().zip(&self.trace_basis).fold(0, |acc, (&c, &t)| b.add(acc, b.mul(c, t)))
    }

    /// `T_{F/GF(p)}(y)`.
    pub fn trace_to_prime(&self, y: u32) -> u32 {
        self.base.trace_to_prime(y)
    }

    /// Absolute trace `E -> GF(p)`.
    pub fn absolute_trace(&self, x: &Element) -> u32 {
        self.trace_to_prime(self.trace_to_base(x))
    }

    /// Coefficients as nested lists of prime-field digits, least significant first.
    pub fn to_nested(&self, x: &Element) -> Vec<Vec<u32>> {
        x.0.iter().map(|&c| self.base.to_digits(c)).collect()
    }

    /// An `F_p`-basis of `E`: `u^k x^i`.
    pub fn prime_basis(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.n * self.base.degree() as usize);
        for i in 0..self.n {
            let mut c = 1u32;
            for _ in 0..self.base.degree() {
                let mut v = vec![0; self.n];
                v[i] = c;
                out.push(Element(v));
                c = self.base.mul(c, self.base.u());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop, prop_assert_eq, proptest};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gf4_u_times_u_plus_1() {
        let f = BaseField::new(4).unwrap();
        let u = f.u();
        assert_eq!(f.mul(u, f.add(u, 1)), 1);
    }

    #[test]
    fn default_moduli() {
        assert_eq!(BaseField::new(4).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(BaseField::new(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(BaseField::new(9).unwrap().modulus(), &[2, 2, 1]);
        assert_eq!(BaseField::new(16).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(BaseField::new(25).unwrap().modulus(), &[2, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(BaseField::prime(9), Err(Error::NotPrime(9))));
        assert!(matches!(BaseField::with_modulus(2, vec![1, 0, 1]), Err(Error::NotIrreducible(_))));
        let base = Arc::new(BaseField::new(2).unwrap());
        let reducible = FPoly::new(vec![1, 1, 0, 1, 1]);
        assert!(matches!(FieldTower::construct(base, 4, Some(reducible)), Err(Error::NotIrreducible(_))));
    }

    #[test]
    fn gf9_trace_of_u() {
        // E = GF(9) over GF(3): u^2 = u + 1, so u^3 = 2u + 1 and T(u) = u + u^3 = 1.
        let base = Arc::new(BaseField::prime(3).unwrap());
        let t = FieldTower::construct(base, 2, Some(FPoly::new(vec![2, 2, 1]))).unwrap();
        assert_eq!(t.trace_to_base(&t.x()), 1);
        assert_eq!(t.trace_to_base(&t.one()), 2);
    }

    #[test]
    fn inverse_of_one_and_zero() {
        let t = FieldTower::new(5, 3).unwrap();
        assert_eq!(t.inverse(&t.one()).unwrap(), t.one());
        assert_eq!(t.inverse(&t.zero()), Err(Error::DivisionByZero));
    }

    fn small_towers() -> Vec<FieldTower> {
        [(2, 3), (2, 6), (3, 4), (4, 3), (5, 2), (7, 3), (8, 2), (9, 3), (13, 2), (4, 5)]
            .iter()
            .map(|&(q, n)| FieldTower::new(q, n).unwrap())
            .collect()
    }

    #[test]
    fn frobenius_fixes_exactly_base_field() {
        for t in small_towers() {
            if t.size() > 4096 {
                continue;
            }
            let fixed = (0..t.size())
                .filter(|&k| {
                    let x = t.from_index(k);
                    t.frobenius(&x, 1) == x
                })
                .count();
            assert_eq!(fixed as u64, t.q());
        }
    }

    #[test]
    fn trace_surjective() {
        for t in small_towers() {
            if t.size() > 4096 {
                continue;
            }
            let mut seen = vec![false; t.q() as usize];
            for k in 0..t.size() {
                seen[t.trace_to_base(&t.from_index(k)) as usize] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn field_axioms_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in small_towers() {
            let n1 = t.group_order();
            for _ in 0..40 {
                let (x, y, z) = (t.random(&mut rng), t.random(&mut rng), t.random(&mut rng));
                assert_eq!(t.mul(&x, &t.add(&y, &z)), t.add(&t.mul(&x, &y), &t.mul(&x, &z)));
                assert_eq!(t.frobenius(&x, t.n()), x);
                assert_eq!(t.frobenius(&x, 0), x);
                assert_eq!(t.frobenius(&t.add(&x, &y), 1), t.add(&t.frobenius(&x, 1), &t.frobenius(&y, 1)));
                let c = rng.gen_range(0..t.q() as u32);
                assert_eq!(t.trace_to_base(&t.scale(c, &x)), t.base().mul(c, t.trace_to_base(&x)));
                assert_eq!(t.trace_to_base(&t.one()), t.base().from_int(t.n() as i64));
                if !t.is_zero(&x) {
                    assert_eq!(t.mul(&x, &t.inverse(&x).unwrap()), t.one());
                    assert_eq!(t.pow(&x, n1), t.one());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn index_roundtrip(k in 0u128..4096) {
            let t = FieldTower::new(4, 6).unwrap();
            prop_assert_eq!(t.index(&t.from_index(k)), k);
        }

        #[test]
        fn base_field_inverse(q in prop::sample::select(vec![4u64, 8, 9, 16, 25, 27, 49, 11]), c in 1u32..1000) {
            let f = BaseField::new(q).unwrap();
            let x = 1 + c % (f.order() - 1);
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
            prop_assert_eq!(f.add(x, f.neg(x)), 0);
        }
    }
}
