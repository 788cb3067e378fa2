use super::{factor_xn_minus_1, FOrderProfile, FPoly, PolyRing};
use crate::error::{Error, Result};
use crate::gf::{Element, FieldTower};

/// `h^sigma(x) = sum h_i x^{q^i}`.
pub fn sigma_eval(tower: &FieldTower, h: &FPoly, x: &Element) -> Element {
    sigma_eval_conj(tower, h, &tower.conjugates(x))
}

/// `h^sigma` evaluated from precomputed conjugates; exponents wrap mod `n`.
pub fn sigma_eval_conj(tower: &FieldTower, h: &FPoly, conj: &[Element]) -> Element {
    let n = tower.n();
    let b = tower.base();
    let mut acc = vec![0u32; n];
    for (i, &c) in h.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (a, &y) in acc.iter_mut().zip(&conj[i % n].0) {
            *a = b.add(*a, b.mul(c, y));
        }
    }
    Element(acc)
}

/// Minimal polynomial of `x` over `F`.
pub fn min_poly(tower: &FieldTower, x: &Element) -> FPoly {
    let mut orbit = vec![x.clone()];
    loop {
        let next = tower.frobenius(orbit.last().expect("nonempty"), 1);
        if &next == x {
            break;
        }
        orbit.push(next);
    }
    // coefficients of prod (X - c) as elements of E
    let mut coeffs = vec![tower.one()];
    for c in &orbit {
        let neg_c = tower.neg(c);
        let mut next = vec![tower.zero(); coeffs.len() + 1];
        for (i, a) in coeffs.iter().enumerate() {
            next[i + 1] = tower.add(&next[i + 1], a);
            next[i] = tower.add(&next[i], &tower.mul(a, &neg_c));
        }
        coeffs = next;
    }
    FPoly::new(
        coeffs
            .into_iter()
            .map(|e| {
                debug_assert!(e.0[1..].iter().all(|&c| c == 0));
                e.0[0]
            })
            .collect(),
    )
}

/// Precomputed divisor data for freeness tests in one tower: the irreducible
/// factors `P_i` of `x^{n*} - 1` and the cofactors `(x^n - 1)/P_i`.
#[derive(Debug, Clone)]
pub struct FreenessContext {
    profile: FOrderProfile,
    factors: Vec<FPoly>,
    cofactors: Vec<FPoly>,
    xn1: FPoly,
}

impl FreenessContext {
    pub fn new(tower: &FieldTower) -> Self {
        let base = tower.base();
        let ring = PolyRing::new(base);
        let profile = factor_xn_minus_1(base, tower.n() as u64);
        let factors = profile.factors();
        let xn1 = ring.xn_minus_1(tower.n());
        let cofactors = factors.iter().map(|f| ring.div_exact(&xn1, f).expect("factor of x^n-1")).collect();
        FreenessContext { profile, factors, cofactors, xn1 }
    }

    pub fn profile(&self) -> &FOrderProfile {
        &self.profile
    }

    /// Distinct irreducible factors of `x^n - 1`, sorted.
    pub fn factors(&self) -> &[FPoly] {
        &self.factors
    }

    pub fn xn_minus_1(&self) -> &FPoly {
        &self.xn1
    }

    /// Whether `x` is `P_i`-free for each factor index `i`.
    pub fn free_flags(&self, tower: &FieldTower, x: &Element) -> Vec<bool> {
        let conj = tower.conjugates(x);
        self.cofactors
            .iter()
            .map(|c| !tower.is_zero(&sigma_eval_conj(tower, c, &conj)))
            .collect()
    }

    /// [`free_flags`](Self::free_flags) packed into a bit mask (at most 64 factors).
    pub fn free_mask(&self, tower: &FieldTower, x: &Element) -> u64 {
        assert!(self.factors.len() <= 64, "too many factors for a bit mask");
        self.free_flags(tower, x)
            .iter()
            .enumerate()
            .fold(0, |m, (i, &f)| if f { m | 1 << i } else { m })
    }

    /// Bit mask of the factors dividing `e`.
    pub fn divisor_mask(&self, tower: &FieldTower, e: &FPoly) -> Result<u64> {
        let ring = PolyRing::new(tower.base());
        if !ring.divides(e, &self.xn1) {
            return Err(Error::NotADivisor(e.to_string()));
        }
        Ok(self
            .factors
            .iter()
            .enumerate()
            .filter(|(_, f)| ring.divides(f, e))
            .fold(0, |m, (i, _)| m | 1 << i))
    }

    /// Index of the least factor `P` for which `x` is not `P`-free.
    pub fn least_non_free(&self, tower: &FieldTower, x: &Element) -> Option<usize> {
        let conj = tower.conjugates(x);
        self.cofactors.iter().position(|c| tower.is_zero(&sigma_eval_conj(tower, c, &conj)))
    }

    /// Free over `F`, i.e. F-order `x^n - 1`.
    pub fn is_free(&self, tower: &FieldTower, x: &Element) -> bool {
        self.least_non_free(tower, x).is_none()
    }

    /// `e`-freeness for a divisor `e` of `x^n - 1`.
    pub fn is_e_free(&self, tower: &FieldTower, x: &Element, e: &FPoly) -> Result<bool> {
        let ring = PolyRing::new(tower.base());
        if !ring.divides(e, &self.xn1) {
            return Err(Error::NotADivisor(e.to_string()));
        }
        let conj = tower.conjugates(x);
        Ok(self
            .factors
            .iter()
            .zip(&self.cofactors)
            .filter(|(f, _)| ring.divides(f, e))
            .all(|(_, c)| !tower.is_zero(&sigma_eval_conj(tower, c, &conj))))
    }

    /// The F-order: the least monic divisor `D` of `x^n - 1` with `D^sigma(x) = 0`.
    pub fn f_order(&self, tower: &FieldTower, x: &Element) -> FPoly {
        let ring = PolyRing::new(tower.base());
        let conj = tower.conjugates(x);
        let mut d = self.xn1.clone();
        for f in &self.factors {
            loop {
                let Ok(smaller) = ring.div_exact(&d, f) else { break };
                if tower.is_zero(&sigma_eval_conj(tower, &smaller, &conj)) {
                    d = smaller;
                } else {
                    break;
                }
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::BaseField;
    use std::collections::HashMap;
    use std::sync::Arc;

    fn towers() -> Vec<FieldTower> {
        [(2u64, 4usize), (2, 6), (3, 3), (3, 4), (4, 3), (5, 2), (2, 8), (3, 6), (7, 2), (9, 2), (8, 2), (2, 10)]
            .iter()
            .map(|&(q, n)| FieldTower::new(q, n).unwrap())
            .collect()
    }

    /// Polynomial Euler function of a monic divisor of x^n - 1.
    fn poly_phi(ctx: &FreenessContext, tower: &FieldTower, d: &FPoly) -> u128 {
        let ring = PolyRing::new(tower.base());
        let q = tower.q() as u128;
        let mut out = 1u128;
        let mut rest = d.clone();
        for f in ctx.factors() {
            let mut k = 0;
            while let Ok(r) = ring.div_exact(&rest, f) {
                rest = r;
                k += 1;
            }
            if k > 0 {
                let norm = q.pow(f.degree() as u32);
                out *= (norm - 1) * norm.pow(k - 1);
            }
        }
        out
    }

    #[test]
    fn sigma_eval_basics() {
        let t = FieldTower::new(3, 4).unwrap();
        let ring = PolyRing::new(t.base());
        let x_minus_1 = ring.linear(1);
        let xn1 = ring.xn_minus_1(4);
        for k in 0..t.size() {
            let w = t.from_index(k);
            let in_base = w.0[1..].iter().all(|&c| c == 0);
            assert_eq!(t.is_zero(&sigma_eval(&t, &x_minus_1, &w)), in_base);
            assert!(t.is_zero(&sigma_eval(&t, &xn1, &w)));
        }
    }

    #[test]
    fn f_order_small_cases() {
        let t = FieldTower::new(7, 3).unwrap();
        let ctx = FreenessContext::new(&t);
        let ring = PolyRing::new(t.base());
        assert_eq!(ctx.f_order(&t, &t.zero()), FPoly::one());
        assert_eq!(ctx.f_order(&t, &t.constant(3)), ring.linear(1));
    }

    #[test]
    fn counts_by_f_order_match_polynomial_phi() {
        for t in towers() {
            if t.size() > 1024 {
                continue;
            }
            let ctx = FreenessContext::new(&t);
            let ring = PolyRing::new(t.base());
            let mut counts: HashMap<FPoly, u128> = HashMap::new();
            for k in 0..t.size() {
                let d = ctx.f_order(&t, &t.from_index(k));
                assert!(ring.divides(&d, ctx.xn_minus_1()));
                *counts.entry(d).or_default() += 1;
            }
            let total: u128 = counts.values().sum();
            assert_eq!(total, t.size());
            for (d, c) in &counts {
                assert_eq!(*c, poly_phi(&ctx, &t, d), "q={} n={} D={d}", t.q(), t.n());
            }
            let free = (0..t.size()).filter(|&k| ctx.is_free(&t, &t.from_index(k))).count() as u128;
            assert_eq!(free, poly_phi(&ctx, &t, ctx.xn_minus_1()));
        }
    }

    #[test]
    fn inverse_keeps_order_x_plus_minus_1() {
        for t in towers() {
            if t.size() > 4096 {
                continue;
            }
            let ctx = FreenessContext::new(&t);
            let ring = PolyRing::new(t.base());
            let targets = [ring.linear(1), ring.linear(t.base().neg(1))];
            for k in 1..t.size() {
                let w = t.from_index(k);
                let d = ctx.f_order(&t, &w);
                if targets.contains(&d) {
                    assert_eq!(ctx.f_order(&t, &t.inverse(&w).unwrap()), d);
                }
            }
        }
    }

    #[test]
    fn zero_trace_is_not_x_minus_1_free() {
        let t = FieldTower::new(2, 4).unwrap();
        let ctx = FreenessContext::new(&t);
        let x1 = PolyRing::new(t.base()).linear(1);
        for k in 1..t.size() {
            let w = t.from_index(k);
            if t.trace_to_base(&w) == 0 {
                assert!(!ctx.is_e_free(&t, &w, &x1).unwrap());
            }
        }
        assert!(ctx.is_e_free(&t, &t.x(), &FPoly::one()).unwrap());
        assert!(matches!(ctx.is_e_free(&t, &t.x(), &FPoly::new(vec![1, 1, 1])), Err(Error::NotADivisor(_))));
    }

    #[test]
    fn min_poly_basics() {
        let t = FieldTower::new(2, 2).unwrap();
        assert_eq!(min_poly(&t, &t.zero()), FPoly::monomial(1));
        assert_eq!(min_poly(&t, &t.x()), *t.modulus());
        let base = Arc::new(BaseField::new(5).unwrap());
        let f = FPoly::new(vec![2, 4, 0, 1]);
        let t = FieldTower::construct(base, 3, Some(f.clone())).unwrap();
        assert_eq!(min_poly(&t, &t.x()), f);
        for k in 0..t.size() {
            let w = t.from_index(k);
            let mp = min_poly(&t, &w);
            let ring = PolyRing::new(t.base());
            assert!(ring.is_irreducible(&mp));
            assert_eq!(t.n() as isize % mp.degree(), 0);
            let mut acc = t.zero();
            for &c in mp.coeffs().iter().rev() {
                acc = t.add(&t.mul(&acc, &w), &t.constant(c));
            }
            assert!(t.is_zero(&acc));
        }
    }
}
