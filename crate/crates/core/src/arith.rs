//! Exact integer number theory over `u128`: factorization, multiplicative
//! functions, and the numeric lemmas bounding `W(m) = 2^omega(m)`.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Default number of Pollard-Brent iterations spent on one cofactor.
pub const DEFAULT_FACTOR_EFFORT: u64 = 1 << 26;

/// A natural number together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    pub value: u128,
    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { value: 1, factors: Vec::new() }
    }

    /// Builds a factorization from prime powers, merging repeats.
    pub fn from_prime_powers(mut factors: Vec<(u128, u32)>) -> Self {
        factors.sort_unstable();
        let mut merged: Vec<(u128, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            if e == 0 {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => merged.push((p, e)),
            }
        }
        let value = merged.iter().fold(1u128, |acc, &(p, e)| acc * p.pow(e));
        Factorization { value, factors: merged }
    }

    pub fn primes(&self) -> Vec<u128> {
        self.factors.iter().map(|&(p, _)| p).collect()
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of square-free divisors, `2^omega`.
    pub fn w(&self) -> u128 {
        1u128 << self.omega()
    }

    pub fn radical(&self) -> u128 {
        self.factors.iter().map(|&(p, _)| p).product()
    }

    pub fn phi(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
    }

    pub fn moebius(&self) -> i32 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The radical as a factorization.
    pub fn radical_factorization(&self) -> Factorization {
        Factorization {
            value: self.radical(),
            factors: self.factors.iter().map(|&(p, _)| (p, 1)).collect(),
        }
    }

    /// All square-free divisors with their Moebius sign, ordered by subset mask.
    pub fn squarefree_divisors(&self) -> Vec<(u128, i32)> {
        let k = self.factors.len();
        (0..1usize << k)
            .map(|mask| {
                let mut d = 1u128;
                for (i, &(p, _)) in self.factors.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        d *= p;
                    }
                }
                let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
                (d, sign)
            })
            .collect()
    }

    /// Checks the structural invariants: the product matches and every
    /// listed prime passes the primality test.
    pub fn is_consistent(&self) -> bool {
        let strictly_increasing = self.factors.windows(2).all(|w| w[0].0 < w[1].0);
        let mut prod = BigUint::one();
        for &(p, e) in &self.factors {
            if e == 0 || !is_prime(p) {
                return false;
            }
            prod *= BigUint::from(p).pow(e);
        }
        strictly_increasing && prod == BigUint::from(self.value)
    }
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// The first `k` primes, skipping those listed in `omit`.
pub fn first_primes(k: usize, omit: &[u64]) -> Vec<u64> {
    let mut limit = 64u64;
    loop {
        let ps: Vec<u64> = primes_up_to(limit)
            .into_iter()
            .filter(|p| !omit.contains(p))
            .take(k)
            .collect();
        if ps.len() == k {
            return ps;
        }
        limit *= 2;
    }
}

pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    if a < (1 << 64) && b < (1 << 64) {
        return a * b % m;
    }
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

pub fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_round(n: u128, d: u128, r: u32, a: u128) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..r {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Miller-Rabin: deterministic below 2^64, 40 seeded random rounds above.
pub fn is_prime(n: u128) -> bool {
    const WITNESSES: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let r = (n - 1).trailing_zeros();
    let d = (n - 1) >> r;
    if !WITNESSES.iter().all(|&a| miller_rabin_round(n, d, r, a)) {
        return false;
    }
    if n <= u64::MAX as u128 {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64 ^ (n >> 64) as u64);
    (0..40).all(|_| miller_rabin_round(n, d, r, rng.gen_range(2..n - 1)))
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
/// composite `n`, or `None` after `effort` iterations.
fn pollard_brent(n: u128, effort: u64) -> Option<u128> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    let mut spent = 0u64;
    while spent < effort {
        let c = rng.gen_range(1..n);
        let mut y = rng.gen_range(0..n);
        let step = |v: u128| add_mod(mul_mod(v, v, n), c, n);
        let m = 128u64;
        let (mut g, mut r, mut q) = (1u128, 1u64, 1u128);
        let (mut x, mut ys) = (y, y);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = step(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
            spent += r;
            if spent >= effort {
                break;
            }
        }
        if g == n {
            loop {
                ys = step(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

/// Factors `n >= 1` with the default effort budget.
pub fn factor(n: u128) -> Result<Factorization> {
    factor_with_effort(n, DEFAULT_FACTOR_EFFORT)
}

/// Trial division to 10^6 followed by Pollard-Brent on the cofactor.
pub fn factor_with_effort(n: u128, effort: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let mut rest = n;
    let mut found: Vec<(u128, u32)> = Vec::new();
    for &p in small_primes() {
        let p = p as u128;
        if p * p > rest {
            break;
        }
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            found.push((p, e));
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            found.push((m, 1));
            continue;
        }
        if let Some(r) = exact_root(m) {
            let (root, k) = r;
            for _ in 0..k {
                stack.push(root);
            }
            continue;
        }
        match pollard_brent(m, effort) {
            Some(d) => {
                stack.push(d);
                stack.push(m / d);
            }
            None => return Err(Error::FactorTimeout { cofactor: m }),
        }
    }
    Ok(Factorization::from_prime_powers(found))
}

/// Detects perfect powers `m = root^k` with `k >= 2`, which rho handles poorly.
fn exact_root(m: u128) -> Option<(u128, u32)> {
    for k in (2..=4u32).rev() {
        let guess = (m as f64).powf(1.0 / k as f64).round() as u128;
        for r in guess.saturating_sub(2)..=guess + 2 {
            if r > 1 && r.checked_pow(k) == Some(m) {
                return Some((r, k));
            }
        }
    }
    None
}

/// Factors `q^n - 1` through the values `Phi_d(q)`, `d | n`, which keeps
/// every Pollard-Brent input far below `q^n`.
pub fn factor_qn_minus_1(q: u64, n: u32, effort: u64) -> Result<Factorization> {
    let q = q as u128;
    let total = q
        .checked_pow(n)
        .ok_or_else(|| Error::InvalidArgument(format!("{q}^{n} exceeds 128 bits")))?;
    let divs: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    let mut values: Vec<(u32, u128)> = Vec::new();
    let mut parts = Vec::new();
    for &d in &divs {
        let mut v = q.pow(d) - 1;
        for &(e, pe) in &values {
            if d % e == 0 {
                v /= pe;
            }
        }
        values.push((d, v));
        parts.extend(factor_with_effort(v, effort)?.factors);
    }
    let f = Factorization::from_prime_powers(parts);
    debug_assert_eq!(f.value, total - 1);
    Ok(f)
}

pub fn radical(n: u128) -> Result<u128> {
    Ok(factor(n)?.radical())
}

pub fn omega(n: u128) -> Result<u32> {
    Ok(factor(n)?.omega())
}

pub fn w(n: u128) -> Result<u128> {
    Ok(factor(n)?.w())
}

pub fn phi(n: u128) -> Result<u128> {
    Ok(factor(n)?.phi())
}

pub fn moebius(n: u128) -> Result<i32> {
    Ok(factor(n)?.moebius())
}

/// Returns `(p, a)` with `q = p^a`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let f = factor(q as u128)?;
    match f.factors.as_slice() {
        [(p, a)] => Ok((*p as u64, *a)),
        _ => Err(Error::NotPrimePower(q)),
    }
}

/// Multiplicative order of `a` modulo `m` (`gcd(a, m) = 1`, `m >= 1`).
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let (a, m) = (a as u128 % m as u128, m as u128);
    let mut x = a;
    let mut k = 1u64;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

/// `c_m = 2^s / (p_1 ... p_s)^{1/4}` over the distinct primes `p_i < 16`
/// dividing `m`, kept as the exact pair `(s, p_1 ... p_s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CBound {
    pub s: u32,
    pub small_prime_product: u64,
}

impl CBound {
    pub fn to_f64(self) -> f64 {
        2f64.powi(self.s as i32) / (self.small_prime_product as f64).powf(0.25)
    }

    /// Exact test of `c_m < num/den`: `2^{4s} den^4 < num^4 P`.
    pub fn less_than(self, num: u64, den: u64) -> bool {
        let lhs = BigUint::from(2u32).pow(4 * self.s) * BigUint::from(den).pow(4u32);
        let rhs = BigUint::from(num).pow(4u32) * BigUint::from(self.small_prime_product);
        lhs < rhs
    }

    /// Exact test of `W(m) <= c_m m^{1/4}`: `W^4 P <= 2^{4s} m`.
    pub fn bounds_w(self, w: u128, m: u128) -> bool {
        let lhs = BigUint::from(w).pow(4u32) * BigUint::from(self.small_prime_product);
        let rhs = BigUint::from(2u32).pow(4 * self.s) * BigUint::from(m);
        lhs <= rhs
    }
}

pub fn c_bound(m: u64) -> CBound {
    let mut s = 0;
    let mut prod = 1u64;
    for p in [2u64, 3, 5, 7, 11, 13] {
        if m % p == 0 {
            s += 1;
            prod *= p;
        }
    }
    CBound { s, small_prime_product: prod }
}

/// Which primes form the primorial in [`check_primorial_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimeFilter {
    All,
    Omit(u64),
}

impl PrimeFilter {
    fn omitted(self) -> Vec<u64> {
        match self {
            PrimeFilter::All => Vec::new(),
            PrimeFilter::Omit(p) => vec![p],
        }
    }
}

/// True iff `2^k < P^{num/den}` for `P` the product of the first `k`
/// admissible primes, and the next admissible prime `p` has
/// `p^{num/den} >= 2`, so the inequality persists for every `omega >= k`.
pub fn check_primorial_bound(k: usize, num: u32, den: u32, filter: PrimeFilter) -> bool {
    assert!(k >= 1 && num >= 1 && num < den, "exponent must lie in (0,1)");
    let ps = first_primes(k + 1, &filter.omitted());
    let primorial: BigUint = ps[..k].iter().map(|&p| BigUint::from(p)).product();
    let two = BigUint::from(2u32);
    let holds = (&two).pow(k as u32 * den) < primorial.pow(num);
    let propagates = BigUint::from(ps[k]).pow(num) >= (&two).pow(den);
    holds && propagates
}

/// Sum of `exp(2 pi i j k / d)` over `k` coprime to `d`.
pub fn ramanujan_sum(d: u128, j: u128) -> Result<i128> {
    let f = factor(d)?;
    let g = j.gcd(&d);
    let quotient = d / g;
    let qf = factor(quotient)?;
    let mu = qf.moebius() as i128;
    Ok(mu * f.phi() as i128 / qf.phi() as i128)
}
