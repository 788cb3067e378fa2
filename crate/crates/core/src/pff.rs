//! Primitivity, m-freeness, PFF verdicts, PFF polynomial search and
//! brute-force counting of `N(m, g, h)`.

use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Factorization, DEFAULT_FACTOR_EFFORT};
use crate::error::{Error, Result};
use crate::fpoly::{format_poly, min_poly, FPoly, FreenessContext, PolyRing};
use crate::gf::{BaseField, Element, FieldTower};

/// Default field-size cap for `SearchMode::First`.
pub const DEFAULT_FIRST_BUDGET: u128 = 10_000_000;
/// Default field-size cap for exhaustive modes and element tables.
pub const DEFAULT_EXHAUSTIVE_BUDGET: u128 = 100_000;

const CHUNK: u128 = 2048;

/// A tower with the data every PFF test needs: freeness divisors and the
/// factorization of `q^n - 1`.
#[derive(Debug, Clone)]
pub struct PffContext {
    tower: FieldTower,
    freeness: FreenessContext,
    group: Factorization,
}

impl PffContext {
    pub fn new(tower: FieldTower) -> Result<Self> {
        Self::with_effort(tower, DEFAULT_FACTOR_EFFORT)
    }

    pub fn with_effort(tower: FieldTower, effort: u64) -> Result<Self> {
        let group = arith::factor_qn_minus_1(tower.q(), tower.n() as u32, effort)?;
        let freeness = FreenessContext::new(&tower);
        Ok(PffContext { tower, freeness, group })
    }

    /// The default tower for `(q, n)`.
    pub fn for_pair(q: u64, n: usize) -> Result<Self> {
        Self::new(FieldTower::new(q, n)?)
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn freeness(&self) -> &FreenessContext {
        &self.freeness
    }

    /// Factorization of `q^n - 1`.
    pub fn group(&self) -> &Factorization {
        &self.group
    }

    /// Least prime `l | m` for which `x` is an `l`-th power.
    fn least_power_prime(&self, x: &Element, primes: &[u128]) -> Option<u128> {
        let n1 = self.group.value;
        primes
            .iter()
            .copied()
            .find(|&l| self.tower.pow(x, n1 / l) == self.tower.one())
    }

    fn check_nonzero(&self, x: &Element) -> Result<()> {
        if self.tower.is_zero(x) {
            Err(Error::ZeroElement)
        } else {
            Ok(())
        }
    }

    /// `x` is not an `l`-th power for any prime `l | m` (`m | q^n - 1`).
    pub fn is_m_free(&self, x: &Element, m: u128) -> Result<bool> {
        self.check_nonzero(x)?;
        if m == 0 || self.group.value % m != 0 {
            return Err(Error::NotADivisor(format!("{m} does not divide {}", self.group.value)));
        }
        let primes = arith::factor(m)?.primes();
        Ok(self.least_power_prime(x, &primes).is_none())
    }

    pub fn is_primitive(&self, x: &Element) -> Result<bool> {
        self.check_nonzero(x)?;
        Ok(self.least_power_prime(x, &self.group.primes()).is_none())
    }

    /// The primitive element of least index.
    pub fn generator(&self) -> Element {
        let primes = self.group.primes();
        (1..self.tower.size())
            .map(|k| self.tower.from_index(k))
            .find(|x| self.least_power_prime(x, &primes).is_none())
            .expect("E* is cyclic")
    }

    pub fn verdict(&self, x: &Element) -> Result<PffVerdict> {
        self.check_nonzero(x)?;
        let t = &self.tower;
        let inv = t.inverse(x)?;
        let power_witness = self.least_power_prime(x, &self.group.primes());
        let factors = self.freeness.factors();
        let show = |i: usize| format_poly(t.base(), &factors[i]);
        let free_witness = self.freeness.least_non_free(t, x).map(show);
        let inverse_free_witness = self.freeness.least_non_free(t, &inv).map(show);
        Ok(PffVerdict {
            q: t.q(),
            n: t.n() as u64,
            element: t.to_nested(x),
            polynomial: None,
            is_primitive: power_witness.is_none(),
            is_free: free_witness.is_none(),
            inverse_free: inverse_free_witness.is_none(),
            primitive_witness: power_witness,
            free_witness,
            inverse_free_witness,
        })
    }

    /// Whether `x` and `x^{-1}` are both free (primitivity not checked).
    pub fn free_both_ways(&self, x: &Element, inv: &Element) -> bool {
        self.freeness.is_free(&self.tower, x) && self.freeness.is_free(&self.tower, inv)
    }
}

/// The outcome of testing one element or polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PffVerdict {
    pub q: u64,
    pub n: u64,
    /// Coefficients over `F`, each as prime-field digits.
    pub element: Vec<Vec<u32>>,
    pub polynomial: Option<String>,
    pub is_primitive: bool,
    pub is_free: bool,
    pub inverse_free: bool,
    /// Least prime `l` with the element an `l`-th power.
    pub primitive_witness: Option<u128>,
    /// Least irreducible `P` for which the element is not `P`-free.
    pub free_witness: Option<String>,
    pub inverse_free_witness: Option<String>,
}

impl PffVerdict {
    /// Primitive, free, and with a free inverse (the inverse of a
    /// primitive element is primitive).
    pub fn is_pff(&self) -> bool {
        self.is_primitive && self.is_free && self.inverse_free
    }
}

/// Tests the root `x` of `f` in the tower `F[x]/(f)`.
pub fn verify_pff_polynomial(base: Arc<BaseField>, n: usize, f: &FPoly) -> Result<PffVerdict> {
    if f.degree() != n as isize {
        return Err(Error::WrongDegree { expected: n, found: f.degree().max(0) as usize });
    }
    let text = format_poly(&base, f);
    let tower = FieldTower::construct(base, n, Some(f.clone()))?;
    let ctx = PffContext::new(tower)?;
    let mut v = ctx.verdict(&ctx.tower().x())?;
    v.polynomial = Some(text);
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// The PFF polynomial of the least exponent.
    First,
    /// Every PFF polynomial.
    All,
    /// The number of PFF polynomials.
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub first_budget: u128,
    pub exhaustive_budget: u128,
    pub factor_effort: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            first_budget: DEFAULT_FIRST_BUDGET,
            exhaustive_budget: DEFAULT_EXHAUSTIVE_BUDGET,
            factor_effort: DEFAULT_FACTOR_EFFORT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub q: u64,
    pub n: u64,
    pub mode: SearchMode,
    /// Found polynomials, sorted (empty in `Count` mode).
    pub polynomials: Vec<FPoly>,
    pub count: u64,
}

/// Exponents `j` in `[start, end)` with the powers `gamma^j`, `gamma^{-j}`.
fn walk_chunk<'a>(
    ctx: &'a PffContext,
    gamma: &Element,
    gamma_inv: &Element,
    start: u128,
    end: u128,
) -> impl Iterator<Item = (u128, Element, Element)> + 'a {
    let t = ctx.tower();
    let mut w = t.pow(gamma, start);
    let mut v = t.pow(gamma_inv, start);
    let (gamma, gamma_inv) = (gamma.clone(), gamma_inv.clone());
    (start..end).map(move |j| {
        let out = (j, w.clone(), v.clone());
        w = t.mul(&w, &gamma);
        v = t.mul(&v, &gamma_inv);
        out
    })
}

fn is_coset_leader(j: u128, q: u128, n: usize, modulus: u128) -> bool {
    let mut k = j;
    for _ in 1..n {
        k = arith::mul_mod(k, q, modulus);
        if k < j {
            return false;
        }
    }
    true
}

/// Searches `E = GF(q^n)` for PFF elements by walking the primitive
/// elements `gamma^j`, `gcd(j, q^n - 1) = 1`, from the least-index generator.
pub fn search_pff(q: u64, n: usize, mode: SearchMode, config: &SearchConfig) -> Result<SearchOutcome> {
    let tower = FieldTower::new(q, n)?;
    let size = tower.size();
    let budget = match mode {
        SearchMode::First => config.first_budget,
        _ => config.exhaustive_budget,
    };
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let ctx = PffContext::with_effort(tower, config.factor_effort)?;
    search_in(&ctx, mode)
}

/// [`search_pff`] in a prepared context (no budget check).
pub fn search_in(ctx: &PffContext, mode: SearchMode) -> Result<SearchOutcome> {
    let t = ctx.tower();
    let n1 = ctx.group().value;
    let gamma = ctx.generator();
    let gamma_inv = t.inverse(&gamma)?;
    let chunks = n1.div_ceil(CHUNK) as u64;
    let range = |c: u64| (1 + c as u128 * CHUNK, (1 + (c as u128 + 1) * CHUNK).min(n1 + 1));
    let base = t.base();
    let (q, n) = (t.q(), t.n() as u64);
    match mode {
        SearchMode::First => {
            let hit = (0..chunks).into_par_iter().find_map_first(|c| {
                let (s, e) = range(c);
                walk_chunk(ctx, &gamma, &gamma_inv, s, e)
                    .find(|(j, w, v)| j.gcd(&n1) == 1 && ctx.free_both_ways(w, v))
                    .map(|(_, w, _)| min_poly(t, &w))
            });
            let polynomials: Vec<FPoly> = hit.into_iter().collect();
            let count = polynomials.len() as u64;
            Ok(SearchOutcome { q, n, mode, polynomials, count })
        }
        SearchMode::All | SearchMode::Count => {
            let qq = q as u128;
            let mut found: Vec<FPoly> = (0..chunks)
                .into_par_iter()
                .flat_map_iter(|c| {
                    let (s, e) = range(c);
                    walk_chunk(ctx, &gamma, &gamma_inv, s, e)
                        .filter(|(j, w, v)| {
                            j.gcd(&n1) == 1 && is_coset_leader(*j, qq, t.n(), n1) && ctx.free_both_ways(w, v)
                        })
                        .map(|(_, w, _)| min_poly(t, &w))
                        .collect::<Vec<_>>()
                })
                .collect();
            found.sort();
            found.dedup();
            debug_assert!(found.iter().all(|f| PolyRing::new(base).is_irreducible(f)));
            let count = found.len() as u64;
            if mode == SearchMode::Count {
                found.clear();
            }
            Ok(SearchOutcome { q, n, mode, polynomials: found, count })
        }
    }
}

/// Minimal polynomials of all primitive elements (the primitive polynomials
/// of degree `n`), sorted.
pub fn primitive_polynomials(ctx: &PffContext) -> Vec<FPoly> {
    let t = ctx.tower();
    let n1 = ctx.group().value;
    let gamma = ctx.generator();
    let gamma_inv = t.inverse(&gamma).expect("generator is nonzero");
    let qq = t.q() as u128;
    let mut out: Vec<FPoly> = walk_chunk(ctx, &gamma, &gamma_inv, 1, n1 + 1)
        .filter(|(j, _, _)| j.gcd(&n1) == 1 && is_coset_leader(*j, qq, t.n(), n1))
        .map(|(_, w, _)| min_poly(t, &w))
        .collect();
    out.sort();
    out
}

/// Per-element freeness data indexed by discrete logarithm: entry `j`
/// describes `gamma^j` for the least-index generator `gamma`.
#[derive(Debug, Clone)]
pub struct ElementTable {
    /// Bit `i` of `masks[j]` is set iff `gamma^j` is `P_i`-free.
    masks: Vec<u64>,
    group_order: u128,
}

impl ElementTable {
    pub fn build(ctx: &PffContext, budget: u128) -> Result<Self> {
        let t = ctx.tower();
        if t.size() > budget {
            return Err(Error::BudgetExceeded { size: t.size(), budget });
        }
        if ctx.freeness().factors().len() > 64 {
            return Err(Error::InvalidArgument("x^n-1 has more than 64 irreducible factors".into()));
        }
        let n1 = ctx.group().value;
        let gamma = ctx.generator();
        let gamma_inv = t.inverse(&gamma)?;
        let chunks = n1.div_ceil(CHUNK) as u64;
        let masks: Vec<u64> = (0..chunks)
            .into_par_iter()
            .flat_map_iter(|c| {
                let s = c as u128 * CHUNK;
                let e = (s + CHUNK).min(n1);
                walk_chunk(ctx, &gamma, &gamma_inv, s, e)
                    .map(|(_, w, _)| ctx.freeness().free_mask(t, &w))
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok(ElementTable { masks, group_order: n1 })
    }

    pub fn group_order(&self) -> u128 {
        self.group_order
    }

    /// Freeness mask of `gamma^j`.
    pub fn mask(&self, j: usize) -> u64 {
        self.masks[j]
    }

    /// Counts `w in E*` that are `m`-free (no prime of `m_primes` divides
    /// the logarithm), `g`-free, with `w^{-1}` `h`-free; `g`, `h` given as
    /// factor masks.
    pub fn count(&self, m_primes: &[u128], g_mask: u64, h_mask: u64) -> u128 {
        let n1 = self.group_order as usize;
        (0..n1)
            .into_par_iter()
            .filter(|&j| {
                m_primes.iter().all(|&l| j as u128 % l != 0)
                    && self.masks[j] & g_mask == g_mask
                    && self.masks[(n1 - j) % n1] & h_mask == h_mask
            })
            .count() as u128
    }

    /// `N(m, g, h)` for `m | q^n - 1` and `g, h | x^n - 1`.
    pub fn brute_n(&self, ctx: &PffContext, m: u128, g: &FPoly, h: &FPoly) -> Result<u128> {
        if m == 0 || self.group_order % m != 0 {
            return Err(Error::NotADivisor(format!("{m} does not divide {}", self.group_order)));
        }
        let primes = arith::factor(m)?.primes();
        let gm = ctx.freeness().divisor_mask(ctx.tower(), g)?;
        let hm = ctx.freeness().divisor_mask(ctx.tower(), h)?;
        Ok(self.count(&primes, gm, hm))
    }
}

/// `N(m, g, h)` computed from scratch.
pub fn brute_n(q: u64, n: usize, m: u128, g: &FPoly, h: &FPoly, budget: u128) -> Result<u128> {
    let ctx = PffContext::for_pair(q, n)?;
    ElementTable::build(&ctx, budget)?.brute_n(&ctx, m, g, h)
}
