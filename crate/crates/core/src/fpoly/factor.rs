use std::collections::BTreeMap;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{FPoly, PolyRing};
use crate::arith::multiplicative_order;
use crate::gf::BaseField;

/// Seed for equal-degree splitting. Factor lists are sorted afterwards,
/// so the seed only affects running time.
pub const SPLIT_SEED: u64 = 0x0f0f_2024;

/// The q-cyclotomic cosets modulo `n` (`gcd(q, n) = 1`), each sorted,
/// listed by least element.
pub fn cyclotomic_cosets(q: u64, n: u64) -> Vec<Vec<u64>> {
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for j in 0..n {
        if seen[j as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut k = j;
        while !seen[k as usize] {
            seen[k as usize] = true;
            coset.push(k);
            k = (k as u128 * q as u128 % n as u128) as u64;
        }
        coset.sort_unstable();
        out.push(coset);
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// The cyclotomic polynomial `Phi_d` over `F` (`p` must not divide `d`).
pub fn cyclotomic_poly(ring: &PolyRing<'_>, d: u64) -> FPoly {
    let mut table: BTreeMap<u64, FPoly> = BTreeMap::new();
    for e in divisors(d) {
        let mut phi = ring.xn_minus_1(e as usize);
        for (&k, f) in &table {
            if e % k == 0 {
                phi = ring.div_exact(&phi, f).expect("cyclotomic factor divides");
            }
        }
        table.insert(e, phi);
    }
    table.remove(&d).expect("d is its own divisor")
}

/// Splits a squarefree product of irreducibles all of degree `s` into its
/// factors by the Cantor-Zassenhaus method.
pub fn equal_degree_split<R: Rng>(ring: &PolyRing<'_>, f: &FPoly, s: usize, rng: &mut R) -> Vec<FPoly> {
    let d = f.degree() as usize;
    if d <= s {
        return vec![ring.monic(f)];
    }
    let field = ring.field();
    let q = field.order();
    loop {
        let a = FPoly::new((0..d).map(|_| rng.gen_range(0..q)).collect());
        if a.degree() < 1 {
            continue;
        }
        let b = if field.p() == 2 {
            // absolute trace from GF(q^s) to GF(2)
            let k = field.degree() as usize * s;
            let mut t = ring.rem(&a, f);
            let mut acc = t.clone();
            for _ in 1..k {
                t = ring.mulmod(&t, &t, f);
                acc = ring.add(&acc, &t);
            }
            acc
        } else {
            // a^{(q^s - 1)/2} = (a^{1 + q + ... + q^{s-1}})^{(q-1)/2}
            let mut t = ring.rem(&a, f);
            let mut norm = t.clone();
            for _ in 1..s {
                t = ring.frobmod(&t, f);
                norm = ring.mulmod(&norm, &t, f);
            }
            let half = ring.powmod(&norm, (q as u128 - 1) / 2, f);
            ring.sub(&half, &FPoly::one())
        };
        let g = ring.gcd(f, &b);
        if g.degree() > 0 && g.degree() < f.degree() {
            let h = ring.div_exact(f, &g).expect("gcd divides");
            let mut out = equal_degree_split(ring, &g, s, rng);
            out.extend(equal_degree_split(ring, &h, s, rng));
            return out;
        }
    }
}

/// Structure of `x^{n*} - 1` over `F` for the pair `(q, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FOrderProfile {
    pub q: u64,
    pub n: u64,
    /// `n = p^b n*` with `p` not dividing `n*`.
    pub n_star: u64,
    /// `p^b`, the multiplicity of each irreducible factor in `x^n - 1`.
    pub p_power: u64,
    /// Order of `q` modulo `n*`.
    pub s: u64,
    /// Irreducible factors of degree `< s`, sorted.
    pub g_factors: Vec<FPoly>,
    /// Irreducible factors of degree exactly `s`, sorted.
    pub big_factors: Vec<FPoly>,
    /// `deg g`.
    pub m: u64,
    /// Number of irreducible factors of `g`.
    pub omega_g: u64,
}

impl FOrderProfile {
    /// `rho = omega_g / n` as a reduced pair.
    pub fn rho(&self) -> (u64, u64) {
        let g = self.omega_g.gcd(&self.n);
        (self.omega_g / g, self.n / g)
    }

    /// All irreducible factors of `x^{n*} - 1`, sorted.
    pub fn factors(&self) -> Vec<FPoly> {
        let mut all: Vec<FPoly> = self.g_factors.iter().chain(&self.big_factors).cloned().collect();
        all.sort();
        all
    }

    /// Number of distinct irreducible factors of `x^{n*} - 1`.
    pub fn omega(&self) -> u64 {
        (self.g_factors.len() + self.big_factors.len()) as u64
    }
}

/// Factors `x^{n*} - 1` over `F` through the cyclotomic polynomials `Phi_d`,
/// `d | n*`; each splits into irreducibles of degree `ord_d(q)`.
pub fn factor_xn_minus_1(base: &BaseField, n: u64) -> FOrderProfile {
    assert!(n >= 1, "n must be positive");
    let q = base.order() as u64;
    let p = base.p() as u64;
    let mut n_star = n;
    let mut p_power = 1;
    while n_star % p == 0 {
        n_star /= p;
        p_power *= p;
    }
    let s = multiplicative_order(q % n_star, n_star);
    let ring = PolyRing::new(base);
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut factors = Vec::new();
    for d in divisors(n_star) {
        let phi = cyclotomic_poly(&ring, d);
        let deg = multiplicative_order(q % d, d) as usize;
        factors.extend(equal_degree_split(&ring, &phi, deg, &mut rng));
    }
    factors.sort();
    let (g_factors, big_factors): (Vec<FPoly>, Vec<FPoly>) =
        factors.into_iter().partition(|f| (f.degree() as u64) < s);
    let m = g_factors.iter().map(|f| f.degree() as u64).sum();
    let omega_g = g_factors.len() as u64;
    FOrderProfile { q, n, n_star, p_power, s, g_factors, big_factors, m, omega_g }
}
