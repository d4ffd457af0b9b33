use super::{Laurent, Poly};
use crate::exactfield::RingElem;

/// A Euclidean domain with canonical associates.
pub trait Euclidean: RingElem {
    /// Euclidean size, `None` for zero.
    fn norm(&self) -> Option<usize>;

    /// `(q, r)` with `self = q d + r` and `r = 0` or `norm r < norm d`.
    fn div_rem(&self, d: &Self) -> (Self, Self);

    fn unit_inverse(&self) -> Option<Self>;

    /// `(a, u)` with `a = u · self` the canonical associate and `u` a unit.
    fn normalize(&self) -> (Self, Self);

    fn is_unit(&self) -> bool {
        self.norm() == Some(0)
    }

    fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = std::mem::replace(&mut b, r);
        }
        a.normalize().0
    }
}

impl Euclidean for Poly {
    fn norm(&self) -> Option<usize> {
        self.degree()
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        Poly::div_rem(self, d)
    }

    fn unit_inverse(&self) -> Option<Self> {
        if self.degree() == Some(0) {
            self.lead().inv().map(Poly::constant)
        } else {
            None
        }
    }

    fn normalize(&self) -> (Self, Self) {
        match self.lead().inv() {
            Some(inv) => (self.scale(&inv), Poly::constant(inv)),
            None => (self.clone(), Poly::one(self.field())),
        }
    }
}

impl Euclidean for Laurent {
    fn norm(&self) -> Option<usize> {
        self.span()
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let d0 = d.stripped();
        assert!(!d0.is_zero(), "Laurent division by zero");
        if self.is_zero() {
            return (Laurent::zero(self.field()), Laurent::zero(self.field()));
        }
        let (q0, r0) = self.stripped().div_rem(&d0);
        let q = Laurent::from_poly(&q0).shift(self.min_exp() - d.min_exp());
        let r = Laurent::from_poly(&r0).shift(self.min_exp());
        (q, r)
    }

    fn unit_inverse(&self) -> Option<Self> {
        if self.is_monomial() {
            let c = self.lead().inv()?;
            Some(Laurent::monomial(c, -self.min_exp()))
        } else {
            None
        }
    }

    fn normalize(&self) -> (Self, Self) {
        if self.is_zero() {
            return (self.clone(), Laurent::one(self.field()));
        }
        let inv = self.lead().inv().expect("nonzero leading coefficient");
        let u = Laurent::monomial(inv, -self.min_exp());
        (self.mul(&u), u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;

    const Q: Field = Field::Rational;

    #[test]
    fn laurent_division_reduces_span() {
        let a = Laurent::new(Q, -2, vec![Q.int(1), Q.int(0), Q.int(3), Q.int(1)]);
        let d = Laurent::new(Q, 3, vec![Q.int(1), Q.int(1)]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.norm().unwrap_or(0) < d.norm().unwrap());
    }

    #[test]
    fn laurent_normal_associate() {
        let a = Laurent::new(Q, -2, vec![Q.int(2), Q.int(4)]);
        let (n, u) = a.normalize();
        let half = &Q.one() / &Q.int(2);
        assert_eq!(n, Laurent::from_poly(&Poly::new(Q, vec![half, Q.one()])));
        assert_eq!(n.min_exp(), 0);
        assert!(n.lead().is_one());
        assert_eq!(u.mul(&a), n);
    }

    #[test]
    fn poly_gcd_via_trait() {
        let a = Poly::from_ints(Q, &[0, 0, 1]);
        let b = Poly::from_ints(Q, &[0, 2]);
        assert_eq!(Euclidean::gcd(&a, &b), Poly::var(Q));
    }
}
