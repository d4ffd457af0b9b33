use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exactfield::{Field, RingElem, Scalar};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_ints(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.int(c)).collect())
    }

    pub fn constant(c: Scalar) -> Poly {
        let field = c.field();
        Poly::new(field, vec![c])
    }

    pub fn monomial(c: Scalar, deg: usize) -> Poly {
        let field = c.field();
        let mut coeffs = vec![field.zero(); deg + 1];
        coeffs[deg] = c;
        Poly::new(field, coeffs)
    }

    /// The variable itself.
    pub fn var(field: Field) -> Poly {
        Poly::monomial(field.one(), 1)
    }

    /// `t - c`.
    pub fn linear(c: &Scalar) -> Poly {
        let field = c.field();
        Poly::new(field, vec![-c, field.one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a signed integer, `-1` for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(Scalar::is_one)
    }

    /// Exponent of the lowest nonzero term; 0 for the zero polynomial.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.lead().inv() {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { field: self.field, coeffs }
    }

    /// Division by `t^k`, dropping lower terms.
    pub fn unshift(&self, k: usize) -> Poly {
        Poly::new(self.field, self.coeffs.iter().skip(k).cloned().collect())
    }

    /// `t^n p(1/t)` for `n >= deg p`.
    pub fn reverse(&self, n: usize) -> Poly {
        let mut coeffs = vec![self.field.zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[n - i] = c.clone();
        }
        Poly::new(self.field, coeffs)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.field,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| &self.field.int(i as i64) * c).collect(),
        )
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv = d.lead().inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = &r[i] * &inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    r[i - dd + j] = &r[i - dd + j] - &(&c * dc);
                }
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (Poly::new(self.field, q), Poly::new(self.field, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; gcd(0, 0) is an error.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        Ok(self.xgcd(other)?.0)
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = r0.lead().inv().expect("nonzero gcd");
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    /// Least common multiple, monic.
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let g = self.gcd(other).expect("nonzero operands");
        self.mul(other).exact_div(&g).expect("gcd divides product").monic()
    }

    /// Inverse of `self` modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.xgcd(m).ok()?;
        g.is_one().then(|| s.rem(m))
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    /// `self^e mod m` for a big exponent.
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one(self.field).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
        }
        acc
    }

    /// `p(t + c)`.
    pub fn translate(&self, c: &Scalar) -> Poly {
        let lin = Poly::new(self.field, vec![c.clone(), self.field.one()]);
        self.coeffs.iter().rev().fold(Poly::zero(self.field), |acc, a| acc.mul(&lin).add(&Poly::constant(a.clone())))
    }

    /// Renders with the given variable name, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative_rational();
            let mag = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&render_term(&mag, var, i as i64));
        }
        out
    }
}

pub(crate) fn render_term(c: &Scalar, var: &str, e: i64) -> String {
    let mono = match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    };
    if mono.is_empty() {
        c.to_string()
    } else if c.is_one() {
        mono
    } else {
        format!("{c}*{mono}")
    }
}

impl RingElem for Poly {
    fn zero(field: Field) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    fn one(field: Field) -> Self {
        Poly { field, coeffs: vec![field.one()] }
    }

    fn field(&self) -> Field {
        self.field
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Poly::new(self.field, out)
    }

    fn neg(&self) -> Self {
        Poly { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    fn from_scalar(c: &Scalar) -> Self {
        Poly::constant(c.clone())
    }
}

impl Poly {
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(Q, c)
    }

    #[test]
    fn xgcd_examples() {
        let (g, _, _) = p(&[0, 0, 1]).xgcd(&p(&[0, 1])).unwrap();
        assert_eq!(g, p(&[0, 1]));

        let a = p(&[-1, 1]);
        let b = p(&[1, 1]);
        let (g, s, t) = a.xgcd(&b).unwrap();
        assert!(g.is_one());
        let half = &Q.one() / &Q.int(2);
        assert_eq!(s, Poly::constant(-&half));
        assert_eq!(t, Poly::constant(half));
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);

        let f = p(&[2, 0, 4]);
        let (g, _, _) = f.xgcd(&Poly::zero(Q)).unwrap();
        assert_eq!(g, f.monic());

        assert_eq!(Poly::zero(Q).xgcd(&Poly::zero(Q)).unwrap_err(), Error::GcdOfZeros);
    }

    #[test]
    fn division() {
        let a = p(&[1, 2, 3, 4]);
        let d = p(&[1, 1]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.deg() < d.deg());
    }

    #[test]
    fn reverse_and_translate() {
        let a = p(&[1, 2, 3]);
        assert_eq!(a.reverse(2), p(&[3, 2, 1]));
        assert_eq!(a.reverse(3), p(&[0, 3, 2, 1]));
        assert_eq!(p(&[0, 0, 1]).translate(&Q.int(1)), p(&[1, 2, 1]));
    }

    #[test]
    fn rendering() {
        assert_eq!(p(&[-1, 1]).render("t"), "t - 1");
        assert_eq!(p(&[1, 0, -2]).render("s"), "-2*s^2 + 1");
        assert_eq!(Poly::zero(Q).render("t"), "0");
    }

    #[test]
    fn powmod_matches_repeated_multiplication() {
        let f = Field::Prime(5);
        let m = Poly::from_ints(f, &[2, 0, 1, 1]);
        let a = Poly::from_ints(f, &[1, 3]);
        let big = a.pow_mod(&BigUint::from(13u32), &m);
        assert_eq!(big, a.pow(13).rem(&m));
    }
}
