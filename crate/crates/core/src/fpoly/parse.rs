//! Reading and writing polynomials in the signed notation `x^4+x^3-x-2`,
//! with `u` standing for the generator of a non-prime base field.

use super::{FPoly, PolyRing};
use crate::error::{Error, Result};
use crate::gf::BaseField;

/// Signed representative of a residue: `-k` for `p - k` when `2k < p`.
fn signed(p: u32, d: u32) -> i64 {
    if d != 0 && 2 * (p - d) < p {
        -((p - d) as i64)
    } else {
        d as i64
    }
}

fn monomial(k: i64, u_pow: usize, x_pow: usize) -> String {
    let mut s = String::new();
    if k.abs() != 1 || (u_pow == 0 && x_pow == 0) {
        s.push_str(&k.abs().to_string());
    }
    match u_pow {
        0 => {}
        1 => s.push('u'),
        j => s.push_str(&format!("u^{j}")),
    }
    match x_pow {
        0 => {}
        1 => s.push('x'),
        i => s.push_str(&format!("x^{i}")),
    }
    s
}

fn join_signed(parts: &[(i64, String)]) -> String {
    let mut out = String::new();
    for (i, (k, body)) in parts.iter().enumerate() {
        if *k < 0 {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        out.push_str(body);
    }
    out
}

/// Formats with the highest power first and signed residues.
pub fn format_poly(base: &BaseField, f: &FPoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let p = base.p();
    let mut parts: Vec<(i64, String)> = Vec::new();
    for (i, &c) in f.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let digits: Vec<(i64, usize)> = base
            .to_digits(c)
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &d)| d != 0)
            .map(|(j, &d)| (signed(p, d), j))
            .collect();
        if digits.len() == 1 {
            let (k, j) = digits[0];
            parts.push((k, monomial(k, j, i)));
        } else if i == 0 {
            parts.extend(digits.iter().map(|&(k, j)| (k, monomial(k, j, 0))));
        } else {
            let flip = if digits[0].0 < 0 { -1 } else { 1 };
            let inner: Vec<(i64, String)> =
                digits.iter().map(|&(k, j)| (k * flip, monomial(k * flip, j, 0))).collect();
            let xs = monomial(1, 0, i);
            parts.push((flip, format!("({}){xs}", join_signed(&inner))));
        }
    }
    join_signed(&parts)
}

struct Parser<'a, 'f> {
    src: &'a [u8],
    pos: usize,
    ring: PolyRing<'f>,
}

impl Parser<'_, '_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .or_else(|_| self.err("number too large"))
    }

    fn expr(&mut self) -> Result<FPoly> {
        let mut acc = FPoly::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => return Ok(acc),
            };
            first = false;
            let t = self.term()?;
            acc = if sign < 0 { self.ring.sub(&acc, &t) } else { self.ring.add(&acc, &t) };
        }
    }

    fn term(&mut self) -> Result<FPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_digit() || c == b'x' || c == b'u' || c == b'(' => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = self.ring.mul(&acc, &f);
        }
    }

    fn factor(&mut self) -> Result<FPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = if self.peek() == Some(b'{') {
                self.pos += 1;
                let e = self.number()?;
                if self.peek() != Some(b'}') {
                    return self.err("expected '}'");
                }
                self.pos += 1;
                e
            } else {
                self.number()?
            };
            if e > 1 << 16 {
                return self.err("exponent too large");
            }
            return Ok(self.ring.pow(&base, e as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FPoly> {
        let f = self.ring.field();
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(FPoly::monomial(1))
            }
            Some(b'u') => {
                if f.is_prime_field() {
                    return self.err("'u' requires a non-prime base field");
                }
                self.pos += 1;
                Ok(FPoly::new(vec![f.u()]))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let k = self.number()?;
                Ok(FPoly::new(vec![f.from_int((k % f.p() as u64) as i64)]))
            }
            _ => self.err("expected x, u, a number or '('"),
        }
    }
}

/// Parses expressions such as `x^8-(u-1)x^7+u^2` or `x^{16}-x^{15}-1`.
/// Multiplication may be implicit; `\u{2212}` is accepted as a minus sign.
pub fn parse_poly(base: &BaseField, s: &str) -> Result<FPoly> {
    let cleaned = s.replace('\u{2212}', "-");
    let mut parser = Parser { src: cleaned.as_bytes(), pos: 0, ring: PolyRing::new(base) };
    let f = parser.expr()?;
    if parser.peek().is_some() {
        return parser.err("unexpected trailing input");
    }
    Ok(f)
}
