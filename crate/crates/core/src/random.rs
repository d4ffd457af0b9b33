//! Seeded random sheaves, morphisms and exact sequences for tests and the
//! `--seed` commands.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::error::Result;
use crate::exactfield::{Field, RingElem};
use crate::modpid::PidModule;
use crate::polypid::{Laurent, Poly, PolyMat};
use crate::sheafp1::{reversed_monic, sheaf_of_split_in, GluedSheaf, SheafMap, SplitType, Support, TorsionPart};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

fn scalar(rng: &mut Rng64, field: Field, lo: i64, hi: i64) -> crate::Scalar {
    field.int(rng.gen_range(lo..=hi))
}

fn nonzero_scalar(rng: &mut Rng64, field: Field) -> crate::Scalar {
    loop {
        let c = scalar(rng, field, -3, 3);
        if !c.is_zero() {
            return c;
        }
    }
}

fn random_support(rng: &mut Rng64, field: Field) -> Support {
    match rng.gen_range(0..6) {
        0 => Support::Infinity,
        1 if field == Field::Rational => Support::Finite(Poly::from_ints(field, &[1, 0, 1])),
        _ => Support::Finite(Poly::from_ints(field, &[rng.gen_range(-3..=3), 1])),
    }
}

/// Splitting type with `lines` summands of degree in `[−5, 5]` and up to
/// `max_torsion` torsion summands of jet at most 3.
pub fn random_split_type(rng: &mut Rng64, field: Field, lines: usize, max_torsion: usize) -> SplitType {
    let degrees = (0..lines).map(|_| rng.gen_range(-5..=5)).collect();
    let nt = rng.gen_range(0..=max_torsion);
    let torsion = (0..nt)
        .map(|_| TorsionPart { support: random_support(rng, field), jet: rng.gen_range(1..=3) })
        .collect();
    SplitType::new(degrees, torsion)
}

/// A split type as in `random_split_type` with at most 3 lines and 2
/// torsion summands, not both empty.
pub fn random_small_split_type(rng: &mut Rng64, field: Field) -> SplitType {
    loop {
        let lines = rng.gen_range(0..=3);
        let st = random_split_type(rng, field, lines, 2);
        if !st.degrees.is_empty() || !st.torsion.is_empty() {
            return st;
        }
    }
}

/// A random invertible `n × n` polynomial matrix and its inverse.
pub fn random_unimodular(rng: &mut Rng64, field: Field, n: usize, steps: usize) -> (PolyMat, PolyMat) {
    let mut u = PolyMat::identity(field, n);
    let mut v = PolyMat::identity(field, n);
    if n < 2 {
        let c = nonzero_scalar(rng, field);
        let c_inv = c.inv().expect("nonzero");
        return (u.scale(&Poly::constant(c)), v.scale(&Poly::constant(c_inv)));
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let e = Poly::new(field, vec![scalar(rng, field, -2, 2), scalar(rng, field, -1, 1)]);
        // row i += e · row j, and its inverse on the other side
        let mut el = PolyMat::identity(field, n);
        el.set(i, j, e.clone());
        let mut el_inv = PolyMat::identity(field, n);
        el_inv.set(i, j, e.neg());
        u = el.mul(&u);
        v = v.mul(&el_inv);
    }
    (u, v)
}

/// `m` rewritten in random generators on both charts, with the isomorphism
/// from `m` to the new sheaf.
pub fn scramble(rng: &mut Rng64, m: &Arc<GluedSheaf>) -> Result<SheafMap> {
    let field = m.field();
    let (g0, g1) = (m.m0().gens(), m.m1().gens());
    let (u0, u0_inv) = random_unimodular(rng, field, g0, 2);
    let (u1, u1_inv) = random_unimodular(rng, field, g1, 2);
    let p0 = u0.mul(m.m0().presentation());
    let p1 = u1.mul(m.m1().presentation());
    let glue = u0.convert(Laurent::from_poly).mul(m.glue()).mul(&u1_inv.convert(Laurent::from_inverse_poly));
    let glue_inv = u1.convert(Laurent::from_inverse_poly).mul(m.glue_inv()).mul(&u0_inv.convert(Laurent::from_poly));
    let n = GluedSheaf::with_inverse(
        PidModule::from_presentation(field, g0, &p0),
        PidModule::from_presentation(field, g1, &p1),
        glue,
        glue_inv,
    )?;
    SheafMap::new(m.clone(), Arc::new(n), u0, u1)
}

/// A random sheaf of the given splitting type in scrambled coordinates.
pub fn random_sheaf_of_type(rng: &mut Rng64, field: Field, st: &SplitType) -> Result<Arc<GluedSheaf>> {
    let model = Arc::new(sheaf_of_split_in(field, st));
    Ok(scramble(rng, &model)?.target)
}

pub fn random_sheaf(rng: &mut Rng64, field: Field) -> Result<(SplitType, Arc<GluedSheaf>)> {
    let st = random_small_split_type(rng, field);
    let m = random_sheaf_of_type(rng, field, &st)?;
    Ok((st, m))
}

fn random_poly(rng: &mut Rng64, field: Field, len: usize) -> Poly {
    Poly::new(field, (0..len).map(|_| scalar(rng, field, -3, 3)).collect())
}

/// Chart-1 coordinate of the section `g(t)·t^a` near a point other than
/// `t = 0`, modulo `q`.
fn to_chart1(g: &Poly, a: i64, q: &Poly) -> Poly {
    Laurent::from_poly(g).shift(a).invert_var().reduce_mod(q)
}

fn torsion_modulus(field: Field, part: &TorsionPart) -> (Option<Poly>, Option<Poly>) {
    let e = part.jet as u64;
    match &part.support {
        Support::Infinity => (None, Some(Poly::var(field).pow(e))),
        Support::Finite(p) if p.deg() == 1 && p.coeff(0).is_zero() => (Some(p.pow(e)), None),
        Support::Finite(p) => (Some(p.pow(e)), Some(reversed_monic(p).pow(e))),
    }
}

/// A random morphism between the canonical models of two splitting types,
/// block by block.
pub fn random_model_map(rng: &mut Rng64, field: Field, a: &SplitType, b: &SplitType) -> Result<SheafMap> {
    let ma = Arc::new(sheaf_of_split_in(field, a));
    let mb = Arc::new(sheaf_of_split_in(field, b));
    let zero = Poly::zero(field);
    let mut f0 = PolyMat::zeros(field, mb.m0().gens(), ma.m0().gens());
    let mut f1 = PolyMat::zeros(field, mb.m1().gens(), ma.m1().gens());
    // generator offsets: lines occupy both charts, torsion only its charts
    let offsets = |st: &SplitType| -> Vec<(Option<usize>, Option<usize>)> {
        let mut out = Vec::new();
        let (mut c0, mut c1) = (0, 0);
        for _ in &st.degrees {
            out.push((Some(c0), Some(c1)));
            c0 += 1;
            c1 += 1;
        }
        for p in &st.torsion {
            let (m0, m1) = torsion_modulus(field, p);
            let (h0, h1) = (m0.is_some(), m1.is_some());
            out.push((h0.then_some(c0), h1.then_some(c1)));
            c0 += usize::from(h0);
            c1 += usize::from(h1);
        }
        out
    };
    let (oa, ob) = (offsets(a), offsets(b));
    let na = a.degrees.len();
    let nb = b.degrees.len();
    for (j, &(a0, a1)) in oa.iter().enumerate() {
        for (i, &(b0, b1)) in ob.iter().enumerate() {
            if rng.gen_range(0..3) == 0 {
                continue;
            }
            let (x0, x1): (Poly, Poly) = match (j < na, i < nb) {
                (true, true) => {
                    let e = b.degrees[i] - a.degrees[j];
                    if e < 0 {
                        continue;
                    }
                    let c = random_poly(rng, field, e as usize + 1);
                    let rev: Vec<_> = (0..=e as usize).rev().map(|k| c.coeff(k)).collect();
                    (c, Poly::new(field, rev))
                }
                (true, false) => {
                    let part = &b.torsion[i - nb];
                    let d = a.degrees[j];
                    match torsion_modulus(field, part) {
                        (Some(m0), Some(m1)) => {
                            let g = random_poly(rng, field, m0.deg() as usize).rem(&m0);
                            let h = to_chart1(&g, d, &m1);
                            (g, h)
                        }
                        (Some(m0), None) => (random_poly(rng, field, m0.deg() as usize), zero.clone()),
                        (None, Some(m1)) => (zero.clone(), random_poly(rng, field, m1.deg() as usize)),
                        (None, None) => continue,
                    }
                }
                (false, true) => continue,
                (false, false) => {
                    let (pa, pb) = (&a.torsion[j - na], &b.torsion[i - nb]);
                    if pa.support != pb.support {
                        continue;
                    }
                    let shift = pb.jet.saturating_sub(pa.jet) as u64;
                    let c = Poly::constant(nonzero_scalar(rng, field));
                    match torsion_modulus(field, pb) {
                        (Some(m0), Some(m1)) => {
                            let Support::Finite(p) = &pa.support else { unreachable!() };
                            let g = c.mul(&p.pow(shift)).rem(&m0);
                            let h = to_chart1(&g, 0, &m1);
                            (g, h)
                        }
                        (Some(m0), None) => {
                            let Support::Finite(p) = &pa.support else { unreachable!() };
                            (c.mul(&p.pow(shift)).rem(&m0), zero.clone())
                        }
                        (None, Some(m1)) => {
                            (zero.clone(), c.mul(&Poly::var(field).pow(shift)).rem(&m1))
                        }
                        (None, None) => continue,
                    }
                }
            };
            if let (Some(r), Some(c)) = (b0, a0) {
                f0.set(r, c, x0);
            }
            if let (Some(r), Some(c)) = (b1, a1) {
                f1.set(r, c, x1);
            }
        }
    }
    SheafMap::new(ma, mb, f0, f1)
}

/// A random morphism `M → N` between scrambled sheaves of the given types.
pub fn random_morphism(rng: &mut Rng64, field: Field, a: &SplitType, b: &SplitType) -> Result<SheafMap> {
    let model = random_model_map(rng, field, a, b)?;
    let sa = scramble(rng, &model.source)?;
    let sb = scramble(rng, &model.target)?;
    Ok(sb.compose(&model).compose(&sa.inverse()?))
}

/// A short exact sequence `0 → A → B → C → 0` as `(α, β)`.
pub fn random_ses(rng: &mut Rng64, field: Field) -> Result<(SheafMap, SheafMap)> {
    let (alpha, beta) = match rng.gen_range(0..4) {
        0 => {
            let (la, lc) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
            let a = Arc::new(sheaf_of_split_in(field, &random_split_type(rng, field, la, 1)));
            let c = Arc::new(sheaf_of_split_in(field, &random_split_type(rng, field, lc, 1)));
            split_sequence(&a, &c)
        }
        1 => {
            let n = rng.gen_range(-3..=3);
            tangent_sequence(field, n)
        }
        2 => {
            let d = rng.gen_range(-3..=3);
            let c = rng.gen_range(-3..=3);
            point_sequence(field, d, Some(c))
        }
        _ => point_sequence(field, rng.gen_range(-3..=3), None),
    };
    let sigma = scramble(rng, &alpha.target)?;
    let sigma_inv = sigma.inverse()?;
    Ok((sigma.compose(&alpha), beta.compose(&sigma_inv)))
}

/// `0 → A → A ⊕ C → C → 0`.
pub fn split_sequence(a: &Arc<GluedSheaf>, c: &Arc<GluedSheaf>) -> (SheafMap, SheafMap) {
    let field = a.field();
    let b = Arc::new(a.direct_sum(c));
    let inc = |n: usize, m: usize, top: bool| -> PolyMat {
        let id = PolyMat::identity(field, n);
        let z = PolyMat::zeros(field, m, n);
        if top {
            id.vstack(&z)
        } else {
            z.vstack(&id)
        }
    };
    let alpha = SheafMap::new_unchecked(
        a.clone(),
        b.clone(),
        inc(a.m0().gens(), c.m0().gens(), true),
        inc(a.m1().gens(), c.m1().gens(), true),
    );
    let beta = SheafMap::new_unchecked(
        b,
        c.clone(),
        inc(c.m0().gens(), a.m0().gens(), false).transpose(),
        inc(c.m1().gens(), a.m1().gens(), false).transpose(),
    );
    (alpha, beta)
}

/// `0 → O(−(n+2)) → O(−(n+1))² → O(−n) → 0` with maps `(−x₁, x₀)ᵀ` and
/// `(x₀, x₁)`.
pub fn tangent_sequence(field: Field, n: i64) -> (SheafMap, SheafMap) {
    let a = Arc::new(GluedSheaf::line(field, -(n + 2)));
    let b = Arc::new(GluedSheaf::line(field, -(n + 1)).direct_sum(&GluedSheaf::line(field, -(n + 1))));
    let c = Arc::new(GluedSheaf::line(field, -n));
    let one = Poly::one(field);
    let var = Poly::var(field);
    let alpha = SheafMap::new_unchecked(
        a,
        b.clone(),
        PolyMat::from_vec(field, 2, 1, vec![var.neg(), one.clone()]),
        PolyMat::from_vec(field, 2, 1, vec![one.neg(), var.clone()]),
    );
    let beta = SheafMap::new_unchecked(
        b,
        c,
        PolyMat::from_vec(field, 1, 2, vec![one.clone(), var.clone()]),
        PolyMat::from_vec(field, 1, 2, vec![var, one]),
    );
    (alpha, beta)
}

/// `0 → O(d−1) → O(d) → k_p → 0` for the point `t = c`, or `∞` when `c` is
/// `None`.
pub fn point_sequence(field: Field, d: i64, c: Option<i64>) -> (SheafMap, SheafMap) {
    let a = Arc::new(GluedSheaf::line(field, d - 1));
    let b = Arc::new(GluedSheaf::line(field, d));
    let one = PolyMat::identity(field, 1);
    match c {
        Some(c) => {
            let p = Poly::from_ints(field, &[-c, 1]);
            let sky = Arc::new(sheaf_of_split_in(field, &SplitType::new(vec![], vec![TorsionPart::finite(p.clone(), 1)])));
            // the form x₁ − c·x₀
            let f1 = Poly::from_ints(field, &[1, -c]);
            let alpha = SheafMap::new_unchecked(a, b.clone(), PolyMat::from_vec(field, 1, 1, vec![p.clone()]), PolyMat::from_vec(field, 1, 1, vec![f1]));
            let e1 = if sky.m1().gens() == 0 {
                PolyMat::zeros(field, 0, 1)
            } else {
                let q = reversed_monic(&p);
                PolyMat::from_vec(field, 1, 1, vec![to_chart1(&Poly::one(field), d, &q)])
            };
            let beta = SheafMap::new_unchecked(b, sky, one, e1);
            (alpha, beta)
        }
        None => {
            let sky = Arc::new(sheaf_of_split_in(field, &SplitType::new(vec![], vec![TorsionPart::infinity(1)])));
            let alpha = SheafMap::new_unchecked(a, b.clone(), one.clone(), PolyMat::from_vec(field, 1, 1, vec![Poly::var(field)]));
            let beta = SheafMap::new_unchecked(b, sky, PolyMat::zeros(field, 0, 1), one);
            (alpha, beta)
        }
    }
}

/// A random multiset of `H1Twist` indices in `[lo, hi]` with multiplicities
/// at most `max_mult`, as sorted `(i, n_i)` pairs.
pub fn random_tg_multiset(rng: &mut Rng64, lo: i64, hi: i64, max_mult: usize) -> Vec<(i64, usize)> {
    let mut idx: Vec<i64> = (lo..=hi).collect();
    idx.shuffle(rng);
    let k = rng.gen_range(1..=4.min(idx.len()));
    let mut out: Vec<(i64, usize)> = idx[..k].iter().map(|&i| (i, rng.gen_range(1..=max_mult))).collect();
    out.sort();
    out
}
