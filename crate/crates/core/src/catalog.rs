//! Published PFF polynomials and bound tables, kept as data for the
//! golden checks. Values are exactly as printed, including known misprints.

use serde::Serialize;

/// A tabulated PFF polynomial over `GF(q)`, written in the textual syntax of
/// [`crate::fpoly::parse_poly`]. Extension fields use the default modulus of
/// [`crate::gf::BaseField::new`], which matches the printed `u` polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CatalogPoly {
    pub q: u64,
    pub n: usize,
    pub text: &'static str,
    /// The printed entry cannot be the intended polynomial (e.g. a repeated term).
    pub corrupt: bool,
}

const fn entry(q: u64, n: usize, text: &'static str) -> CatalogPoly {
    CatalogPoly { q, n, text, corrupt: false }
}

static POLYS: &[CatalogPoly] = &[
    entry(11, 4, "x^4+x^3-5x+2"),
    entry(7, 4, "x^4+x^3-x^2-x-2"),
    entry(13, 12, "x^12+x^11-3x+2"),
    entry(11, 10, "x^10+x^9-2x+2"),
    entry(9, 8, "x^8-(u-1)x^7-x^6-x^5-(u+1)x^4+(u-1)x^3+(u+1)x^2-x-u"),
    entry(8, 7, "x^7+x^6+(u+1)x^5+(u^2+1)x^4+(u^2+u+1)x^3+u^2x^2+ux+u^2+u"),
    entry(7, 6, "x^6+x^5+x^2-x+3"),
    entry(13, 4, "x^4+x^3-x-2"),
    entry(11, 5, "x^5+x^4+3x-2"),
    entry(9, 4, "x^4-x^3+x^2+x-u+1"),
    entry(7, 3, "x^3+x^2+2x-3"),
    entry(5, 6, "x^6+x^5+x^3+x^2-x-2"),
    entry(7, 12, "x^12+x^11-3x-2"),
    entry(5, 8, "x^8+x^7-x^2-x-2"),
    entry(5, 12, "x^12+x^11+x^3-x^2-2x-2"),
    entry(4, 15, "x^15+x^14+(u+1)x^12+(u+1)x^10+x^9+x^8+x^7+ux^6+ux^5+ux^4+x^2+ux+u+1"),
    entry(4, 9, "x^9+(u+1)x^8+ux^7+(u+1)x^6+ux^5+ux^3+(u+1)x+u"),
    entry(4, 6, "x^6+ux^5+(u+1)x^4+(u+1)x^3+x+u+1"),
    entry(4, 5, "x^5+ux^4+ux^3+x+u+1"),
    CatalogPoly { q: 3, n: 16, text: "x^16-x^15-x^6+x-x-1", corrupt: true },
    entry(3, 12, "x^12+x^11+x^3+x^2+x-1"),
    entry(3, 10, "x^10+x^9+x^7+x^3-x-1"),
    entry(3, 8, "x^8+x^7+x^4-x^3-x^2+x-1"),
    entry(3, 6, "x^6+x^5+x^3+x^2+x-1"),
    entry(3, 5, "x^5+x^4-x+1"),
    entry(3, 3, "x^3+x^2-x+1"),
    entry(2, 15, "x^15+x^14+x^4+x+1"),
    entry(2, 14, "x^14+x^13+x^9+x^4+x^2+x+1"),
    entry(2, 12, "x^12+x^11+x^9+x^4+x^3+x+1"),
    entry(2, 10, "x^10+x^9+x^4+x+1"),
    entry(2, 9, "x^9+x^8+x^5+x^4+x^3+x+1"),
    entry(2, 8, "x^8+x^2-x+1"),
    entry(2, 7, "x^7+x^4+x^3+x+1"),
    entry(2, 6, "x^6+x^5+x^2+x+1"),
    entry(2, 5, "x^5+x^4+x^2+x+1"),
];

pub fn known_pff_polynomials() -> &'static [CatalogPoly] {
    POLYS
}

/// A printed row of an `R(n)` table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RTableRow {
    pub q: u64,
    pub n: u64,
    pub s: u64,
    pub rho: (u64, u64),
    pub u: u64,
    /// Number of sieving primes; they are the largest primes of `Q`.
    pub t: u64,
    /// Printed `delta` (1 when nothing sieves).
    pub delta: f64,
    pub r: f64,
    /// Printed in bold: the bound fails (`R >= q`).
    pub fails: bool,
}

const fn row(q: u64, n: u64, s: u64, rho: (u64, u64), u: u64, r: f64) -> RTableRow {
    RTableRow { q, n, s, rho, u, t: 0, delta: 1.0, r, fails: false }
}

const fn bold(q: u64, n: u64, s: u64, rho: (u64, u64), u: u64, r: f64) -> RTableRow {
    RTableRow { fails: true, ..row(q, n, s, rho, u, r) }
}

static R_ROWS: &[RTableRow] = &[
    row(5, 9, 6, (2, 9), 3, 4.49),
    row(5, 18, 6, (2, 9), 4, 3.85),
    row(5, 24, 2, (1, 6), 8, 3.91),
    RTableRow { t: 3, delta: 0.919, ..row(7, 9, 3, (1, 3), 1, 4.82) },
    row(4, 45, 6, (11, 45), 11, 3.187),
    row(4, 36, 3, (1, 12), 12, 2.277),
    row(4, 35, 6, (1, 7), 9, 2.532),
    row(4, 33, 5, (1, 11), 8, 2.195),
    row(4, 30, 2, (1, 10), 11, 2.965),
    row(4, 27, 9, (5, 27), 6, 2.729),
    row(4, 25, 10, (1, 5), 4, 3.238),
    row(4, 21, 3, (1, 7), 6, 3.063),
    row(4, 20, 2, (1, 20), 7, 2.392),
    row(4, 18, 3, (1, 6), 8, 3.815),
    bold(4, 15, 2, (1, 5), 6, 5.539),
    row(4, 14, 3, (1, 14), 6, 3.085),
    row(4, 11, 5, (1, 11), 4, 3.238),
    bold(4, 10, 2, (1, 10), 5, 4.337),
    row(3, 52, 6, (11, 52), 6, 2.390),
    row(3, 44, 10, (7, 44), 8, 2.245),
    row(3, 32, 8, (7, 32), 6, 2.811),
    row(3, 28, 6, (3, 28), 6, 2.234),
    row(3, 22, 5, (1, 11), 5, 2.298),
    row(3, 20, 4, (3, 20), 5, 2.903),
    bold(3, 16, 4, (5, 16), 4, 5.085),
    row(3, 14, 6, (1, 7), 3, 2.780),
    row(3, 13, 3, (1, 13), 1, 2.243),
    row(3, 11, 5, (1, 11), 2, 2.520),
    bold(3, 10, 4, (1, 5), 3, 4.208),
    bold(3, 8, 2, (1, 4), 3, 8.122),
    bold(3, 7, 6, (1, 7), 1, 3.023),
    bold(3, 5, 4, (1, 5), 1, 4.720),
    row(2, 45, 12, (2, 15), 6, 1.963),
    row(2, 42, 6, (2, 21), 6, 1.801),
    row(2, 36, 6, (1, 12), 8, 1.895),
    row(2, 35, 12, (4, 35), 4, 1.856),
    row(2, 30, 4, (1, 15), 6, 1.953),
    row(2, 28, 3, (1, 28), 6, 1.811),
    row(2, 27, 3, (1, 9), 3, 1.839),
    row(2, 25, 20, (2, 25), 3, 1.714),
    row(2, 24, 2, (1, 24), 6, 1.887),
    row(2, 22, 10, (1, 22), 4, 1.717),
    bold(2, 21, 6, (4, 21), 3, 2.662),
    row(2, 20, 4, (1, 21), 5, 1.941),
    bold(2, 18, 6, (1, 9), 4, 2.290),
    bold(2, 15, 4, (2, 15), 3, 2.892),
    bold(2, 14, 3, (1, 14), 3, 2.438),
    row(2, 13, 12, (1, 13), 1, 1.814),
];

pub fn r_table() -> &'static [RTableRow] {
    R_ROWS
}

/// A sieve decomposition value quoted in the text.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionValue {
    pub q: u64,
    pub n: u64,
    pub name: &'static str,
    pub value: f64,
}

static DECOMPOSITION_VALUES: &[DecompositionValue] = &[
    DecompositionValue { q: 17, n: 16, name: "delta", value: 0.2595 },
    DecompositionValue { q: 17, n: 16, name: "Delta", value: 59.79 },
    DecompositionValue { q: 5, n: 16, name: "delta", value: 0.8610 },
    DecompositionValue { q: 2, n: 21, name: "delta", value: 0.2838 },
    DecompositionValue { q: 2, n: 21, name: "R", value: 1.963 },
];

pub fn decomposition_values() -> &'static [DecompositionValue] {
    DECOMPOSITION_VALUES
}

/// A table row evaluated from scratch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowRecompute {
    pub s: u64,
    pub rho: (u64, u64),
    pub u: u64,
    /// `1 - sum 1/l` over the `t` largest primes of `Q`.
    pub delta: f64,
    /// `R` at the printed `(s, rho, u)`, or why it is undefined.
    pub r_at_printed: std::result::Result<f64, String>,
    pub r_at_recomputed: std::result::Result<f64, String>,
}

impl RowRecompute {
    pub fn params_match(&self, row: &RTableRow) -> bool {
        (self.s, self.rho, self.u) == (row.s, row.rho, row.u)
    }

    pub fn r_within(&self, row: &RTableRow, tol: f64) -> bool {
        self.r_at_printed.as_ref().is_ok_and(|r| (r - row.r).abs() <= tol)
    }
}

impl RTableRow {
    /// Recomputes `s`, `rho` and `u = omega(Q) - t`, and evaluates `R` (refined
    /// form) both at the printed and the recomputed parameters.
    pub fn recompute(&self) -> crate::Result<RowRecompute> {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        use num_traits::One;

        let base = crate::gf::BaseField::new(self.q)?;
        let profile = crate::fpoly::factor_xn_minus_1(&base, self.n);
        let qdata = crate::sieve::compute_q(self.q, self.n)?;
        let primes = qdata.q.primes();
        let t = self.t as usize;
        let delta = primes[primes.len().saturating_sub(t)..]
            .iter()
            .fold(BigRational::one(), |acc, &l| acc - BigRational::new(BigInt::one(), BigInt::from(l)));
        let u = primes.len() as u64 - self.t;
        let (s, rho) = (profile.s, profile.rho());
        let eval = |s, rho, u| {
            crate::sieve::eval_r(self.q, self.n, s, rho, u, self.t, &delta, true, profile.n_star)
                .map_err(|e| e.to_string())
        };
        Ok(RowRecompute {
            s,
            rho,
            u,
            delta: crate::sieve::to_f64(&delta),
            r_at_printed: eval(self.s, self.rho, self.u),
            r_at_recomputed: eval(s, rho, u),
        })
    }
}
