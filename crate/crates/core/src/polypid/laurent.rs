use std::fmt;

use super::poly::{render_term, Poly};
use crate::exactfield::{Field, RingElem, Scalar};

/// Laurent polynomial `Σ coeffs[i] t^(val + i)`, trimmed at both ends.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent {
    field: Field,
    val: i64,
    coeffs: Vec<Scalar>,
}

impl Laurent {
    pub fn new(field: Field, val: i64, coeffs: Vec<Scalar>) -> Laurent {
        let Some(first) = coeffs.iter().position(|c| !c.is_zero()) else {
            return Laurent { field, val: 0, coeffs: Vec::new() };
        };
        let last = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(first);
        Laurent { field, val: val + first as i64, coeffs: coeffs[first..=last].to_vec() }
    }

    pub fn monomial(c: Scalar, e: i64) -> Laurent {
        let field = c.field();
        Laurent::new(field, e, vec![c])
    }

    /// `t^e`.
    pub fn t_pow(field: Field, e: i64) -> Laurent {
        Laurent::monomial(field.one(), e)
    }

    pub fn from_poly(p: &Poly) -> Laurent {
        Laurent::new(p.field(), 0, p.coeffs().to_vec())
    }

    /// A polynomial in `s = t⁻¹` viewed as a Laurent polynomial in `t`.
    pub fn from_inverse_poly(p: &Poly) -> Laurent {
        Laurent::from_poly(p).invert_var()
    }

    /// Lowest exponent present (0 for zero).
    pub fn min_exp(&self) -> i64 {
        self.val
    }

    /// Highest exponent present (`val - 1` for zero).
    pub fn max_exp(&self) -> i64 {
        self.val + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, e: i64) -> Scalar {
        let i = e - self.val;
        if i < 0 {
            return self.field.zero();
        }
        self.coeffs.get(i as usize).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.val + i as i64, c))
    }

    /// `max_exp - min_exp`, the Euclidean norm in `k[t, t⁻¹]`.
    pub fn span(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Laurent {
        if self.is_zero() {
            return self.clone();
        }
        Laurent { field: self.field, val: self.val + k, coeffs: self.coeffs.clone() }
    }

    /// The polynomial `t^(-min_exp) · self`, with nonzero constant term.
    pub fn stripped(&self) -> Poly {
        Poly::new(self.field, self.coeffs.clone())
    }

    /// As a polynomial in `t`, if no negative powers occur.
    pub fn to_poly(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero(self.field));
        }
        (self.val >= 0).then(|| self.stripped().shift(self.val as usize))
    }

    /// As a polynomial in `s = t⁻¹`, if no positive powers of `t` occur.
    pub fn to_inverse_poly(&self) -> Option<Poly> {
        self.invert_var().to_poly()
    }

    /// Substitution `t ↦ t⁻¹`.
    pub fn invert_var(&self) -> Laurent {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Laurent { field: self.field, val: -self.max_exp(), coeffs }
    }

    pub fn scale(&self, c: &Scalar) -> Laurent {
        Laurent::new(self.field, self.val, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn trailing(&self) -> Scalar {
        self.coeffs.first().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn pow(&self, e: u64) -> Laurent {
        (0..e).fold(Laurent::one(self.field), |acc, _| acc.mul(self))
    }

    /// The image in `k[t]/(d)` for `d` with nonzero constant term, where
    /// `t` is invertible.
    pub fn reduce_mod(&self, d: &Poly) -> Poly {
        if self.is_zero() {
            return Poly::zero(self.field);
        }
        let base = self.stripped().rem(d);
        if self.val >= 0 {
            base.mul(&Poly::var(self.field).pow(self.val as u64)).rem(d)
        } else {
            let tinv = Poly::var(self.field).inv_mod(d).expect("t is a unit modulo d");
            base.mul(&tinv.pow((-self.val) as u64)).rem(d)
        }
    }

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
            out.push_str(&render_term(&mag, var, self.val + i as i64));
        }
        out
    }
}

impl RingElem for Laurent {
    fn zero(field: Field) -> Self {
        Laurent { field, val: 0, coeffs: Vec::new() }
    }

    fn one(field: Field) -> Self {
        Laurent { field, val: 0, coeffs: vec![field.one()] }
    }

    fn field(&self) -> Field {
        self.field
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.val.min(other.val);
        let hi = self.max_exp().max(other.max_exp());
        Laurent::new(self.field, lo, (lo..=hi).map(|e| &self.coeff(e) + &other.coeff(e)).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Laurent::zero(self.field);
        }
        let p = self.stripped().mul(&other.stripped());
        Laurent::new(self.field, self.val + other.val, p.coeffs().to_vec())
    }

    fn neg(&self) -> Self {
        Laurent { field: self.field, val: self.val, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    fn from_scalar(c: &Scalar) -> Self {
        Laurent::new(c.field(), 0, vec![c.clone()])
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn trimming_and_inversion() {
        let l = Laurent::new(Q, -3, vec![Q.zero(), Q.int(1), Q.int(2), Q.zero()]);
        assert_eq!(l.min_exp(), -2);
        assert_eq!(l.max_exp(), -1);
        let inv = l.invert_var();
        assert_eq!(inv.min_exp(), 1);
        assert_eq!(inv.coeff(1), Q.int(2));
        assert_eq!(inv.invert_var(), l);
        assert_eq!(inv.to_poly(), Some(Poly::from_ints(Q, &[0, 2, 1])));
        assert_eq!(l.to_poly(), None);
    }

    #[test]
    fn product_with_inverse_monomial() {
        let t = Laurent::t_pow(Q, 1);
        let tinv = Laurent::t_pow(Q, -1);
        assert_eq!(t.mul(&tinv), Laurent::one(Q));
        let x = Laurent::from_poly(&Poly::from_ints(Q, &[-1, 1]));
        assert_eq!(x.mul(&tinv).render("t"), "1 - t^-1");
    }

    #[test]
    fn reduction_modulo() {
        let d = Poly::from_ints(Q, &[-2, 1]);
        let tinv = Laurent::t_pow(Q, -1);
        // t = 2 in k[t]/(t - 2), so t⁻¹ = 1/2
        assert_eq!(tinv.reduce_mod(&d), Poly::constant(&Q.one() / &Q.int(2)));
    }
}
