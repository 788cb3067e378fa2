//! Polynomials over `F = GF(q)`: ring operations, irreducibility, the
//! factorization of `x^n - 1`, F-orders and minimal polynomials.

mod factor;
mod order;
mod parse;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::BaseField;

pub use factor::{cyclotomic_cosets, cyclotomic_poly, equal_degree_split, factor_xn_minus_1, FOrderProfile, SPLIT_SEED};
pub use order::{min_poly, sigma_eval, sigma_eval_conj, FreenessContext};
pub use parse::{format_poly, parse_poly};

/// A polynomial over `F` stored least significant coefficient first,
/// without trailing zeros. The zero polynomial has no coefficients.
///
/// Ordering is by degree, then coefficient codes from the top down.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FPoly(Vec<u32>);

impl FPoly {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FPoly(coeffs)
    }

    pub fn zero() -> Self {
        FPoly(Vec::new())
    }

    pub fn one() -> Self {
        FPoly(vec![1])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = 1;
        FPoly(v)
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> u32 {
        self.0.last().copied().unwrap_or(0)
    }

    /// Reverses coefficients: `x^deg f(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut v = self.0.clone();
        v.reverse();
        FPoly::new(v)
    }
}

impl Ord for FPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for FPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Raw display with coefficient codes; use [`format_poly`] for readable output.
impl fmt::Display for FPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| format!("[{c}]x^{i}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Arithmetic on [`FPoly`] over a fixed base field.
#[derive(Clone, Copy)]
pub struct PolyRing<'a> {
    f: &'a BaseField,
}

impl<'a> PolyRing<'a> {
    pub fn new(f: &'a BaseField) -> Self {
        PolyRing { f }
    }

    pub fn field(&self) -> &'a BaseField {
        self.f
    }

    /// `x^n - 1`.
    pub fn xn_minus_1(&self, n: usize) -> FPoly {
        let mut v = vec![0; n + 1];
        v[0] = self.f.neg(1);
        v[n] = 1;
        FPoly::new(v)
    }

    /// `x - c`.
    pub fn linear(&self, c: u32) -> FPoly {
        FPoly::new(vec![self.f.neg(c), 1])
    }

    pub fn add(&self, a: &FPoly, b: &FPoly) -> FPoly {
        let len = a.0.len().max(b.0.len());
        FPoly::new((0..len).map(|i| self.f.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &FPoly, b: &FPoly) -> FPoly {
        let len = a.0.len().max(b.0.len());
        FPoly::new((0..len).map(|i| self.f.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &FPoly) -> FPoly {
        FPoly::new(a.0.iter().map(|&c| self.f.neg(c)).collect())
    }

    pub fn scale(&self, c: u32, a: &FPoly) -> FPoly {
        FPoly::new(a.0.iter().map(|&x| self.f.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &FPoly, b: &FPoly) -> FPoly {
        if a.is_zero() || b.is_zero() {
            return FPoly::zero();
        }
        let mut out = vec![0u32; a.0.len() + b.0.len() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                out[i + j] = self.f.add(out[i + j], self.f.mul(x, y));
            }
        }
        FPoly::new(out)
    }

    pub fn pow(&self, a: &FPoly, k: u32) -> FPoly {
        (0..k).fold(FPoly::one(), |acc, _| self.mul(&acc, a))
    }

    pub fn product<'b>(&self, items: impl IntoIterator<Item = &'b FPoly>) -> FPoly {
        items.into_iter().fold(FPoly::one(), |acc, p| self.mul(&acc, p))
    }

    pub fn monic(&self, a: &FPoly) -> FPoly {
        match a.leading() {
            0 | 1 => a.clone(),
            c => self.scale(self.f.inv(c).expect("nonzero leading coefficient"), a),
        }
    }

    pub fn divrem(&self, a: &FPoly, b: &FPoly) -> Result<(FPoly, FPoly)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let db = b.0.len() - 1;
        if a.0.len() <= db {
            return Ok((FPoly::zero(), a.clone()));
        }
        let inv_lead = self.f.inv(b.leading())?;
        let mut r = a.0.clone();
        let mut quot = vec![0u32; a.0.len() - db];
        for i in (db..r.len()).rev() {
            let c = self.f.mul(r[i], inv_lead);
            if c == 0 {
                continue;
            }
            quot[i - db] = c;
            for (j, &bj) in b.0.iter().enumerate() {
                r[i - db + j] = self.f.sub(r[i - db + j], self.f.mul(c, bj));
            }
        }
        r.truncate(db);
        Ok((FPoly::new(quot), FPoly::new(r)))
    }

    pub fn rem(&self, a: &FPoly, b: &FPoly) -> FPoly {
        self.divrem(a, b).expect("nonzero divisor").1
    }

    /// Exact quotient `a / b`, or `NotADivisor`.
    pub fn div_exact(&self, a: &FPoly, b: &FPoly) -> Result<FPoly> {
        let (q, r) = self.divrem(a, b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotADivisor(format!("{b} does not divide {a}")))
        }
    }

    pub fn divides(&self, d: &FPoly, a: &FPoly) -> bool {
        !d.is_zero() && self.rem(a, d).is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &FPoly, b: &FPoly) -> FPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `g = s a + t b` monic.
    pub fn xgcd(&self, a: &FPoly, b: &FPoly) -> (FPoly, FPoly, FPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (FPoly::one(), FPoly::zero());
        let (mut t0, mut t1) = (FPoly::zero(), FPoly::one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.sub(&t0, &self.mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            0 | 1 => (r0, s0, t0),
            c => {
                let inv = self.f.inv(c).expect("nonzero");
                (self.scale(inv, &r0), self.scale(inv, &s0), self.scale(inv, &t0))
            }
        }
    }

    pub fn mulmod(&self, a: &FPoly, b: &FPoly, m: &FPoly) -> FPoly {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, a: &FPoly, mut e: u128, m: &FPoly) -> FPoly {
        let mut acc = self.rem(&FPoly::one(), m);
        let mut b = self.rem(a, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &b, m);
            }
            e >>= 1;
            if e > 0 {
                b = self.mulmod(&b, &b, m);
            }
        }
        acc
    }

    /// `a^q mod m`.
    pub fn frobmod(&self, a: &FPoly, m: &FPoly) -> FPoly {
        self.powmod(a, self.f.order() as u128, m)
    }

    /// Irreducibility: no factor of degree `i <= d/2` divides `x^{q^i} - x`.
    pub fn is_irreducible(&self, a: &FPoly) -> bool {
        let d = a.degree();
        if d < 1 {
            return false;
        }
        let x = FPoly::monomial(1);
        let mut h = self.rem(&x, a);
        for _ in 1..=d / 2 {
            h = self.frobmod(&h, a);
            if !self.gcd(a, &self.sub(&h, &x)).is_one() {
                return false;
            }
        }
        true
    }

    /// Evaluates at a point of `F`.
    pub fn eval(&self, a: &FPoly, c: u32) -> u32 {
        a.0.iter().rev().fold(0, |acc, &k| self.f.add(self.f.mul(acc, c), k))
    }

    /// Monic reciprocal `x^d a(1/x) / a(0)`, for `a(0) != 0`.
    pub fn reciprocal(&self, a: &FPoly) -> FPoly {
        self.monic(&a.reversed())
    }
}
