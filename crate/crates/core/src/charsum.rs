//! Multiplicative and additive characters of small fields, Gauss and
//! Kloosterman sums, and the character-sum expression for `N(m, g, h)`.
//!
//! Every sum here is a direct floating-point summation over at most
//! [`DEFAULT_CHARSUM_BUDGET`] terms, so results are accurate far below 1e-9
//! relative error and are rounded to integers only after the fact.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Factorization};
use crate::error::{Error, Result};
use crate::fpoly::{sigma_eval_conj, FPoly, PolyRing};
use crate::gf::Element;
use crate::pff::PffContext;

pub const DEFAULT_CHARSUM_BUDGET: u128 = 4096;

/// `eta(gamma^j) = exp(2 pi i j k / (q^n - 1))` for the table's generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MulChar {
    pub k: u128,
}

impl MulChar {
    pub const TRIVIAL: MulChar = MulChar { k: 0 };

    pub fn order(self, group_order: u128) -> u128 {
        group_order / self.k.gcd(&group_order)
    }

    pub fn conj(self, group_order: u128) -> MulChar {
        MulChar { k: (group_order - self.k) % group_order }
    }
}

/// A complex value with helpers for integer recovery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexVal {
    pub re: f64,
    pub im: f64,
}

impl ComplexVal {
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn nearest_integer(self) -> i128 {
        self.re.round() as i128
    }

    /// Imaginary part and distance to the nearest integer both within `tol` relative to `scale`.
    pub fn is_integer_within(self, tol: f64, scale: f64) -> bool {
        let bound = tol * scale.max(1.0);
        self.im.abs() <= bound && (self.re - self.re.round()).abs() <= bound
    }
}

impl From<Complex64> for ComplexVal {
    fn from(z: Complex64) -> Self {
        ComplexVal { re: z.re, im: z.im }
    }
}

/// Discrete logarithms, absolute traces and roots of unity for one small field.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    ctx: PffContext,
    n1: usize,
    /// Element index -> logarithm (`u32::MAX` for zero).
    log: Vec<u32>,
    /// Logarithm -> element index.
    exp: Vec<u32>,
    trace_by_log: Vec<u32>,
    root_p: Vec<Complex64>,
    root_n: Vec<Complex64>,
    /// Basis of `E` over `GF(p)` with the conjugates of each basis element.
    basis_conj: Vec<Vec<Element>>,
    /// `Delta_D` for every F-order `D` of an additive character, keyed by `D`.
    deltas: BTreeMap<FPoly, Vec<u32>>,
}

fn unit(num: u128, den: u128) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (num % den) as f64 / den as f64)
}

impl CharacterTable {
    pub fn build(ctx: PffContext, budget: u128) -> Result<Self> {
        let t = ctx.tower();
        if t.size() > budget {
            return Err(Error::BudgetExceeded { size: t.size(), budget });
        }
        let n1 = ctx.group().value as usize;
        let p = t.p() as u128;
        let gamma = ctx.generator();
        let mut log = vec![u32::MAX; n1 + 1];
        let mut exp = Vec::with_capacity(n1);
        let mut trace_by_log = Vec::with_capacity(n1);
        let mut w = t.one();
        for j in 0..n1 {
            let idx = t.index(&w) as usize;
            log[idx] = j as u32;
            exp.push(idx as u32);
            trace_by_log.push(t.absolute_trace(&w));
            w = t.mul(&w, &gamma);
        }
        let basis_conj = t.prime_basis().iter().map(|b| t.conjugates(b)).collect();
        let mut table = CharacterTable {
            n1,
            log,
            exp,
            trace_by_log,
            root_p: (0..p).map(|k| unit(k, p)).collect(),
            root_n: (0..n1 as u128).map(|k| unit(k, n1 as u128)).collect(),
            basis_conj,
            deltas: BTreeMap::new(),
            ctx,
        };
        let mut deltas: BTreeMap<FPoly, Vec<u32>> = BTreeMap::new();
        for idx in 0..table.size() as u32 {
            let d = table.add_char_f_order(&table.element(idx));
            deltas.entry(d).or_default().push(idx);
        }
        table.deltas = deltas;
        Ok(table)
    }

    pub fn ctx(&self) -> &PffContext {
        &self.ctx
    }

    pub fn group_order(&self) -> u128 {
        self.n1 as u128
    }

    pub fn size(&self) -> u128 {
        self.n1 as u128 + 1
    }

    pub fn element(&self, idx: u32) -> Element {
        self.ctx.tower().from_index(idx as u128)
    }

    pub fn index(&self, x: &Element) -> u32 {
        self.ctx.tower().index(x) as u32
    }

    /// Discrete logarithm to the table's generator.
    pub fn log(&self, x: &Element) -> Result<usize> {
        match self.log[self.index(x) as usize] {
            u32::MAX => Err(Error::ZeroElement),
            l => Ok(l as usize),
        }
    }

    /// `gamma^j` as an element index.
    pub fn exp(&self, j: usize) -> u32 {
        self.exp[j % self.n1]
    }

    /// `chi(w) = exp(2 pi i Tr(w) / p)` with `Tr` the absolute trace.
    pub fn canonical_add_char(&self, w: &Element) -> Complex64 {
        self.root_p[self.ctx.tower().absolute_trace(w) as usize]
    }

    fn chi_by_log(&self, j: usize) -> Complex64 {
        self.root_p[self.trace_by_log[j % self.n1] as usize]
    }

    pub fn mul_char(&self, eta: MulChar, w: &Element) -> Result<Complex64> {
        Ok(self.eta_by_log(eta, self.log(w)?))
    }

    fn eta_by_log(&self, eta: MulChar, j: usize) -> Complex64 {
        self.root_n[((eta.k % self.n1 as u128) * j as u128 % self.n1 as u128) as usize]
    }

    /// F-order of `w -> chi(delta w)`: the least monic `D | x^n - 1` with
    /// `chi(delta D^sigma(b)) = 1` on a `GF(p)`-basis, found by peeling.
    pub fn add_char_f_order(&self, delta: &Element) -> FPoly {
        let t = self.ctx.tower();
        let ring = PolyRing::new(t.base());
        let trivial = |d: &FPoly| {
            self.basis_conj
                .iter()
                .all(|conj| t.absolute_trace(&t.mul(delta, &sigma_eval_conj(t, d, conj))) == 0)
        };
        let mut d = self.ctx.freeness().xn_minus_1().clone();
        for f in self.ctx.freeness().factors() {
            while let Ok(smaller) = ring.div_exact(&d, f) {
                if trivial(&smaller) {
                    d = smaller;
                } else {
                    break;
                }
            }
        }
        d
    }

    /// `Delta_D`: element indices of the `delta` whose character has F-order `D`.
    pub fn delta_set(&self, d: &FPoly) -> &[u32] {
        self.deltas.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn delta_sets(&self) -> &BTreeMap<FPoly, Vec<u32>> {
        &self.deltas
    }

    /// Characters of exact order `d` (`d | q^n - 1`).
    pub fn characters_of_order(&self, d: u128) -> Vec<MulChar> {
        let n1 = self.n1 as u128;
        (1..=d)
            .filter(|k| k.gcd(&d) == 1 || d == 1)
            .map(|k| MulChar { k: (k % d) * (n1 / d) })
            .collect()
    }

    /// `G(eta) = sum_{w in E*} chi(w) eta(w)`.
    pub fn gauss(&self, eta: MulChar) -> Complex64 {
        (0..self.n1).map(|j| self.chi_by_log(j) * self.eta_by_log(eta, j)).sum()
    }

    /// `K(alpha, beta; eta) = sum_{zeta in E*} chi(alpha zeta + beta / zeta) eta(zeta)`.
    pub fn kloosterman(&self, alpha: &Element, beta: &Element, eta: MulChar) -> Complex64 {
        let t = self.ctx.tower();
        (0..self.n1)
            .map(|j| {
                let zeta = self.element(self.exp(j));
                let zinv = self.element(self.exp(self.n1 - j));
                let arg = t.add(&t.mul(alpha, &zeta), &t.mul(beta, &zinv));
                self.canonical_add_char(&arg) * self.eta_by_log(eta, j)
            })
            .sum()
    }

    fn psi_sum_by_log(&self, set: &[u32]) -> Vec<Complex64> {
        let t = self.ctx.tower();
        (0..self.n1)
            .map(|j| {
                let zeta = self.element(self.exp(j));
                set.iter().map(|&i| self.canonical_add_char(&t.mul(&self.element(i), &zeta))).sum()
            })
            .collect()
    }

    /// Square-free divisors `D` of the radical of `g` with `mu(D)` and `Phi(D)`.
    fn poly_divisors(&self, g: &FPoly) -> Result<Vec<(FPoly, i32, u128)>> {
        let t = self.ctx.tower();
        let ring = PolyRing::new(t.base());
        if !ring.divides(g, self.ctx.freeness().xn_minus_1()) {
            return Err(Error::NotADivisor(g.to_string()));
        }
        let q = t.q() as u128;
        let primes: Vec<&FPoly> = self.ctx.freeness().factors().iter().filter(|f| ring.divides(f, g)).collect();
        Ok((0..1usize << primes.len())
            .map(|mask| {
                let mut d = FPoly::one();
                let mut phi = 1u128;
                for (i, f) in primes.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        d = ring.mul(&d, f);
                        phi *= q.pow(f.degree() as u32) - 1;
                    }
                }
                let mu = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
                (d, mu, phi)
            })
            .collect())
    }

    fn radical_parts(&self, m: u128, g: &FPoly, h: &FPoly) -> Result<(Factorization, f64)> {
        if m == 0 || self.group_order() % m != 0 {
            return Err(Error::NotADivisor(format!("{m}")));
        }
        let mf = arith::factor(m)?.radical_factorization();
        let theta = mf.phi() as f64 / mf.value as f64;
        let q = self.ctx.tower().q() as f64;
        let big_theta = |x: &FPoly| -> Result<f64> {
            let divs = self.poly_divisors(x)?;
            let full = divs.last().expect("at least the trivial divisor");
            Ok(full.2 as f64 / q.powi(full.0.degree() as i32))
        };
        Ok((mf, theta * big_theta(g)? * big_theta(h)?))
    }

    /// `A_D[j] = sum_{delta in Delta_D} chi(delta gamma^j)`.
    fn additive_profile(&self, d: &FPoly) -> Vec<Complex64> {
        let set = self.delta_set(d);
        (0..self.n1)
            .map(|j| {
                set.iter()
                    .map(|&idx| match self.log[idx as usize] {
                        u32::MAX => Complex64::new(1.0, 0.0),
                        l => self.chi_by_log(l as usize + j),
                    })
                    .sum()
            })
            .collect()
    }

    /// `N(m, g, h)` from characters, with the sum over characters of each
    /// order `d` collapsed to Ramanujan sums `c_d(j)`.
    pub fn n_formula(&self, m: u128, g: &FPoly, h: &FPoly) -> Result<Complex64> {
        let (mf, weight) = self.radical_parts(m, g, h)?;
        let gd = self.poly_divisors(g)?;
        let hd = self.poly_divisors(h)?;
        let profiles: BTreeMap<FPoly, Vec<Complex64>> = gd
            .iter()
            .chain(&hd)
            .map(|(d, _, _)| (d.clone(), self.additive_profile(d)))
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (d, mu_d) in mf.squarefree_divisors() {
            let phi_d = arith::phi(d)? as f64;
            let ram: Vec<f64> = (0..self.n1)
                .map(|j| arith::ramanujan_sum(d, j as u128).map(|c| c as f64))
                .collect::<Result<_>>()?;
            for (d1, mu1, phi1) in &gd {
                let a1 = &profiles[d1];
                for (d2, mu2, phi2) in &hd {
                    let a2 = &profiles[d2];
                    let s: Complex64 = (0..self.n1).map(|j| a1[j] * a2[(self.n1 - j) % self.n1] * ram[j]).sum();
                    let c = mu_d as f64 / phi_d * (*mu1 as f64) / *phi1 as f64 * (*mu2 as f64) / *phi2 as f64;
                    total += s * c;
                }
            }
        }
        Ok(total * weight)
    }

    /// The same count expanded into its main term `q^n + eps`, Gauss-sum
    /// terms and Kloosterman terms, each evaluated by direct summation.
    /// Here `eps = -1 + [g != 1] + [h != 1]`.
    pub fn n_formula_expanded(&self, m: u128, g: &FPoly, h: &FPoly) -> Result<Complex64> {
        let (mf, weight) = self.radical_parts(m, g, h)?;
        let n1 = self.group_order();
        let gd = self.poly_divisors(g)?;
        let hd = self.poly_divisors(h)?;
        let eps = -1.0 + f64::from(!g.is_one()) + f64::from(!h.is_one());
        let mut total = Complex64::new(self.size() as f64 + eps, 0.0);
        // sum_{a in Delta_D} psi(a zeta^j), indexed by j; turns each block of
        // Kloosterman sums into one pass over the group.
        let mut psi_sums: BTreeMap<&FPoly, Vec<Complex64>> = BTreeMap::new();
        for (dp, _, _) in gd.iter().chain(&hd) {
            psi_sums.entry(dp).or_insert_with(|| self.psi_sum_by_log(self.delta_set(dp)));
        }
        for (d, mu_d) in mf.squarefree_divisors() {
            let cd = mu_d as f64 / arith::phi(d)? as f64;
            for eta in self.characters_of_order(d) {
                let gauss = (d != 1).then(|| self.gauss(eta));
                let gauss_conj = (d != 1).then(|| self.gauss(eta.conj(n1)));
                for (d1, mu1, phi1) in &gd {
                    let c1 = *mu1 as f64 / *phi1 as f64;
                    for (d2, mu2, phi2) in &hd {
                        let c2 = *mu2 as f64 / *phi2 as f64;
                        let mut s = Complex64::new(0.0, 0.0);
                        match (d1.is_one(), d2.is_one()) {
                            // main term and eps
                            (true, true) => {}
                            (false, true) | (true, false) if d == 1 => {}
                            (false, true) => {
                                for &i1 in self.delta_set(d1) {
                                    let conj = self.mul_char(eta, &self.element(i1))?.conj();
                                    s += conj * gauss.expect("nontrivial");
                                }
                            }
                            (true, false) => {
                                for &i2 in self.delta_set(d2) {
                                    s += self.mul_char(eta, &self.element(i2))? * gauss_conj.expect("nontrivial");
                                }
                            }
                            (false, false) => {
                                // sum over a, b of K(a, b; eta)
                                let (s1, s2) = (&psi_sums[d1], &psi_sums[d2]);
                                s = (0..self.n1)
                                    .map(|j| self.eta_by_log(eta, j) * s1[j] * s2[(self.n1 - j) % self.n1])
                                    .sum();
                            }
                        }
                        total += s * (cd * c1 * c2);
                    }
                }
            }
        }
        Ok(total * weight)
    }

    /// `theta(m) sum_{d | m} mu(d)/phi(d) sum_{eta of order d} eta(w)`,
    /// which is 1 when `w` is `m`-free and 0 otherwise.
    pub fn m_free_indicator(&self, w: &Element, m: u128) -> Result<Complex64> {
        let mf = arith::factor(m)?.radical_factorization();
        let theta = mf.phi() as f64 / mf.value as f64;
        let mut s = Complex64::new(0.0, 0.0);
        for (d, mu) in mf.squarefree_divisors() {
            let inner: Complex64 = self
                .characters_of_order(d)
                .into_iter()
                .map(|eta| self.mul_char(eta, w))
                .sum::<Result<Complex64>>()?;
            s += inner * (mu as f64 / arith::phi(d)? as f64);
        }
        Ok(s * theta)
    }

    /// `Theta(g) sum_{D | g} mu(D)/Phi(D) sum_{delta in Delta_D} chi(delta w)`,
    /// which is 1 when `w` is `g`-free and 0 otherwise.
    pub fn g_free_indicator(&self, w: &Element, g: &FPoly) -> Result<Complex64> {
        let t = self.ctx.tower();
        let divs = self.poly_divisors(g)?;
        let full = divs.last().expect("trivial divisor present");
        let big_theta = full.2 as f64 / (t.q() as f64).powi(full.0.degree() as i32);
        let mut s = Complex64::new(0.0, 0.0);
        for (d, mu, phi) in &divs {
            let inner: Complex64 = self
                .delta_set(d)
                .iter()
                .map(|&i| self.canonical_add_char(&t.mul(&self.element(i), w)))
                .sum();
            s += inner * (*mu as f64 / *phi as f64);
        }
        Ok(s * big_theta)
    }
}
