//! Factorization into monic irreducibles.
//!
//! Over GF(p) this is complete (squarefree split, distinct-degree, then
//! equal-degree splitting with deterministically enumerated test
//! polynomials). Over ℚ rational roots are found exactly and remaining
//! factors are split by Kronecker's method up to a candidate budget; a factor
//! whose search exceeds the budget is reported as irreducible.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Poly;
use crate::exactfield::{Field, RingElem, Scalar};

const KRONECKER_BUDGET: usize = 200_000;
const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

/// Canonical order on polynomials: degree, then coefficients from the top.
pub fn canonical_cmp(a: &Poly, b: &Poly) -> Ordering {
    a.deg().cmp(&b.deg()).then_with(|| {
        for i in (0..a.coeffs().len()).rev() {
            let o = a.coeffs()[i].canonical_cmp(&b.coeffs()[i]);
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

/// Monic irreducible factors with multiplicities, in canonical order.
/// Constants give an empty list.
pub fn factor(f: &Poly) -> Vec<(Poly, u32)> {
    assert!(!f.is_zero(), "factoring zero");
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (g, e) in squarefree(&f.monic()) {
        for h in factor_squarefree(&g) {
            match out.iter_mut().find(|(x, _)| *x == h) {
                Some(entry) => entry.1 += e,
                None => out.push((h, e)),
            }
        }
    }
    out.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
    out
}

pub fn is_irreducible(f: &Poly) -> bool {
    f.deg() >= 1 && {
        let fs = factor(f);
        fs.len() == 1 && fs[0].1 == 1
    }
}

/// Squarefree decomposition of a monic polynomial: pairwise coprime monic
/// squarefree `g` with `f = Π g^e`.
pub fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field();
    let mut out = Vec::new();
    if f.deg() <= 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        // only possible in characteristic p: f is a p-th power
        let p = field.characteristic() as u32;
        for (g, e) in squarefree(&pth_root(f)) {
            out.push((g, e * p));
        }
        return out;
    }
    let mut c = f.gcd(&d).expect("nonzero");
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c).expect("nonzero");
        let z = w.exact_div(&y).expect("gcd divides");
        if z.deg() > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        c = c.exact_div(&y).expect("gcd divides");
        w = y;
    }
    if c.deg() > 0 {
        let p = field.characteristic() as u32;
        for (g, e) in squarefree(&pth_root(&c.monic())) {
            out.push((g, e * p));
        }
    }
    out
}

/// `g` with `g^p = f`, for `f` whose exponents are all multiples of `p`.
/// In a prime field every scalar is its own p-th root.
fn pth_root(f: &Poly) -> Poly {
    let p = f.field().characteristic() as usize;
    Poly::new(f.field(), f.coeffs().iter().step_by(p).cloned().collect())
}

fn factor_squarefree(f: &Poly) -> Vec<Poly> {
    if f.deg() <= 0 {
        return Vec::new();
    }
    if f.deg() == 1 {
        return vec![f.monic()];
    }
    match f.field() {
        Field::Prime(p) => {
            let mut out = Vec::new();
            for (g, d) in distinct_degree(f, p) {
                equal_degree(&g, d, p, &mut out);
            }
            out
        }
        Field::Rational => factor_rational(f),
    }
}

fn distinct_degree(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
    let field = f.field();
    let x = Poly::var(field);
    let mut out = Vec::new();
    let mut rest = f.monic();
    let mut h = x.clone();
    let mut i = 1;
    let pe = BigUint::from(p);
    while rest.deg() >= 2 * i as i64 {
        h = h.pow_mod(&pe, &rest);
        let g = rest.gcd(&h.sub(&x)).expect("nonzero");
        if g.deg() > 0 {
            rest = rest.exact_div(&g).expect("gcd divides");
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.deg() > 0 {
        let d = rest.deg() as usize;
        out.push((rest, d));
    }
    out
}

fn equal_degree(g: &Poly, d: usize, p: u64, out: &mut Vec<Poly>) {
    if g.deg() as usize == d {
        out.push(g.monic());
        return;
    }
    let field = g.field();
    let n = g.deg() as usize;
    let exp = if p == 2 { BigUint::zero() } else { (BigUint::from(p).pow(d as u32) - 1u32) / 2u32 };
    let mut k: u64 = p;
    loop {
        let a = digits_poly(field, k, p, n);
        k += 1;
        if a.deg() < 1 {
            continue;
        }
        let b = if p == 2 {
            let mut acc = Poly::zero(field);
            let mut term = a.rem(g);
            for _ in 0..d {
                acc = acc.add(&term);
                term = term.mul_mod(&term, g);
            }
            acc
        } else {
            a.pow_mod(&exp, g).sub(&Poly::one(field))
        };
        let h = g.gcd(&b).unwrap_or_else(|_| g.clone());
        if h.deg() > 0 && h.deg() < g.deg() {
            let other = g.exact_div(&h).expect("gcd divides");
            equal_degree(&h, d, p, out);
            equal_degree(&other, d, p, out);
            return;
        }
    }
}

/// The polynomial whose coefficients are the base-`p` digits of `k`,
/// truncated below degree `n`.
fn digits_poly(field: Field, mut k: u64, p: u64, n: usize) -> Poly {
    let mut coeffs = Vec::new();
    while k > 0 && coeffs.len() < n {
        coeffs.push(field.int((k % p) as i64));
        k /= p;
    }
    Poly::new(field, coeffs)
}

/// Integer coefficients of a primitive integer multiple of `f`.
fn primitive_integer(f: &Poly) -> Vec<BigInt> {
    let rats: Vec<_> = f.coeffs().iter().map(|c| c.as_rational().expect("rational field").clone()).collect();
    let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| r.numer() * (&den / r.denom())).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter().map(|x| x / &content).collect()
}

fn factor_rational(f: &Poly) -> Vec<Poly> {
    let field = f.field();
    let mut out = Vec::new();
    let mut rest = f.monic();
    if rest.coeff(0).is_zero() {
        out.push(Poly::var(field));
        rest = rest.exact_div(&Poly::var(field)).expect("t divides");
    }
    for r in rational_roots(&rest) {
        let lin = Poly::linear(&r);
        if let Some(q) = rest.exact_div(&lin) {
            out.push(lin);
            rest = q;
        }
    }
    kronecker_split(&rest, &mut out);
    out
}

fn rational_roots(f: &Poly) -> Vec<Scalar> {
    if f.deg() < 1 {
        return Vec::new();
    }
    let field = f.field();
    let ints = primitive_integer(f);
    let c0 = ints[0].abs();
    let lead = ints.last().expect("nonempty").abs();
    let (Some(nums), Some(dens)) = (divisors(&c0), divisors(&lead)) else {
        return Vec::new();
    };
    let mut roots: Vec<Scalar> = Vec::new();
    for a in &nums {
        for b in &dens {
            if a.gcd(b) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let r = field.ratio(&(BigInt::from(*a) * sign), &BigInt::from(*b)).expect("nonzero");
                if f.eval(&r).is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.to_u64()?;
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

/// Splits a root-free monic `f` over ℚ by Kronecker's interpolation method,
/// trying factor degrees 2..=deg/2.
fn kronecker_split(f: &Poly, out: &mut Vec<Poly>) {
    if f.deg() <= 0 {
        return;
    }
    if f.deg() <= 3 {
        out.push(f.monic());
        return;
    }
    let field = f.field();
    let ints = primitive_integer(f);
    let fz = Poly::new(field, ints.iter().map(|c| field.ratio(c, &BigInt::one()).expect("integer")).collect());
    for k in 2..=(f.deg() as usize / 2) {
        let pts: Vec<i64> = (0..=k as i64).map(|i| if i % 2 == 0 { i / 2 } else { -(i + 1) / 2 }).collect();
        let mut divs = Vec::new();
        let mut budget = 1usize;
        for &x in &pts {
            let v = fz.eval(&field.int(x));
            let v = v.as_rational().expect("rational").numer().abs();
            let Some(ds) = divisors(&v) else {
                out.push(f.monic());
                return;
            };
            budget = budget.saturating_mul(ds.len() * 2);
            divs.push(ds);
        }
        if budget > KRONECKER_BUDGET {
            out.push(f.monic());
            return;
        }
        if let Some(g) = kronecker_search(f, &pts, &divs, k) {
            let h = f.exact_div(&g).expect("candidate divides");
            kronecker_split(&g.monic(), out);
            kronecker_split(&h.monic(), out);
            return;
        }
    }
    out.push(f.monic());
}

fn kronecker_search(f: &Poly, pts: &[i64], divs: &[Vec<u64>], k: usize) -> Option<Poly> {
    let field = f.field();
    let mut idx = vec![0usize; pts.len()];
    let sizes: Vec<usize> = divs.iter().enumerate().map(|(i, d)| if i == 0 { d.len() } else { 2 * d.len() }).collect();
    loop {
        let vals: Vec<Scalar> = idx
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                let d = divs[i][j % divs[i].len()] as i64;
                let sign = if i > 0 && j >= divs[i].len() { -1 } else { 1 };
                field.int(sign * d)
            })
            .collect();
        let g = interpolate(field, pts, &vals);
        if g.deg() == k as i64 && g.divides(f) {
            return Some(g);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return None;
            }
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Lagrange interpolation through `(pts[i], vals[i])`.
fn interpolate(field: Field, pts: &[i64], vals: &[Scalar]) -> Poly {
    let mut acc = Poly::zero(field);
    for (i, &xi) in pts.iter().enumerate() {
        let mut basis = Poly::one(field);
        let mut den = field.one();
        for (j, &xj) in pts.iter().enumerate() {
            if i != j {
                basis = basis.mul(&Poly::linear(&field.int(xj)));
                den = &den * &field.int(xi - xj);
            }
        }
        acc = acc.add(&basis.scale(&(&vals[i] / &den)));
    }
    acc
}
