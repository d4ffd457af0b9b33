use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::{GluedSheaf, SheafMap};
use crate::error::{Error, Result};
use crate::exactfield::{solve, Field, Mat, RingElem};
use crate::modpid::PidModule;
use crate::polypid::{birkhoff_factorize, factor, LaurentMat, Poly, PolyMat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Support {
    /// A monic irreducible polynomial in `t`.
    Finite(Poly),
    Infinity,
}

impl Support {
    fn cmp_canonical(&self, other: &Support) -> Ordering {
        match (self, other) {
            (Support::Finite(a), Support::Finite(b)) => factor::canonical_cmp(a, b),
            (Support::Finite(_), Support::Infinity) => Ordering::Less,
            (Support::Infinity, Support::Finite(_)) => Ordering::Greater,
            (Support::Infinity, Support::Infinity) => Ordering::Equal,
        }
    }

    /// Whether the support is `t = 0`, which chart 1 does not see.
    fn is_origin(&self) -> bool {
        matches!(self, Support::Finite(p) if p.deg() == 1 && p.coeff(0).is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionPart {
    pub support: Support,
    pub jet: u32,
}

impl TorsionPart {
    pub fn finite(p: Poly, jet: u32) -> TorsionPart {
        TorsionPart { support: Support::Finite(p.monic()), jet }
    }

    pub fn infinity(jet: u32) -> TorsionPart {
        TorsionPart { support: Support::Infinity, jet }
    }

    fn cmp_canonical(&self, other: &TorsionPart) -> Ordering {
        self.support.cmp_canonical(&other.support).then(other.jet.cmp(&self.jet))
    }

    /// `k`-length of the summand.
    pub fn length(&self) -> usize {
        match &self.support {
            Support::Finite(p) => p.deg() as usize * self.jet as usize,
            Support::Infinity => self.jet as usize,
        }
    }
}

impl fmt::Display for TorsionPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.support {
            Support::Finite(p) => write!(f, "sky({}, {})", p.render("t"), self.jet),
            Support::Infinity => write!(f, "sky(inf, {})", self.jet),
        }
    }
}

/// `O(d₁) ⊕ … ⊕ O(d_n) ⊕ T` with degrees non-increasing and torsion sorted
/// by support (infinity last), jets descending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitType {
    pub degrees: Vec<i64>,
    pub torsion: Vec<TorsionPart>,
}

impl SplitType {
    pub fn new(mut degrees: Vec<i64>, mut torsion: Vec<TorsionPart>) -> SplitType {
        degrees.sort_by(|a, b| b.cmp(a));
        torsion.sort_by(|a, b| a.cmp_canonical(b));
        SplitType { degrees, torsion }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// Split type of `M(b)`.
    pub fn twisted(&self, b: i64) -> SplitType {
        SplitType { degrees: self.degrees.iter().map(|d| d + b).collect(), torsion: self.torsion.clone() }
    }

    pub fn torsion_length(&self) -> usize {
        self.torsion.iter().map(TorsionPart::length).sum()
    }

    pub fn render_degrees(&self) -> String {
        format!("({})", self.degrees.iter().map(i64::to_string).collect::<Vec<_>>().join(", "))
    }

    pub fn render_torsion(&self) -> String {
        if self.torsion.is_empty() {
            "none".to_string()
        } else {
            self.torsion.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        }
    }
}

impl fmt::Display for SplitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.render_degrees(), self.render_torsion())
    }
}

fn sky(field: Field, part: &TorsionPart) -> GluedSheaf {
    let e = part.jet as u64;
    match &part.support {
        Support::Infinity => {
            let m1 = PidModule::cyclic(&Poly::var(field).pow(e));
            GluedSheaf::raw(
                field,
                Arc::new(PidModule::zero(field)),
                Arc::new(m1),
                LaurentMat::zeros(field, 0, 1),
                LaurentMat::zeros(field, 1, 0),
            )
        }
        Support::Finite(p) if part.support.is_origin() => {
            let m0 = PidModule::cyclic(&p.pow(e));
            GluedSheaf::raw(
                field,
                Arc::new(m0),
                Arc::new(PidModule::zero(field)),
                LaurentMat::zeros(field, 1, 0),
                LaurentMat::zeros(field, 0, 1),
            )
        }
        Support::Finite(p) => {
            let m0 = PidModule::cyclic(&p.pow(e));
            let m1 = PidModule::cyclic(&reversed_monic(p).pow(e));
            GluedSheaf::raw(field, Arc::new(m0), Arc::new(m1), LaurentMat::identity(field, 1), LaurentMat::identity(field, 1))
        }
    }
}

/// The chart-1 equation of a point `p(t) = 0` away from `t = 0`, monic in `s`.
pub fn reversed_monic(p: &Poly) -> Poly {
    p.reverse(p.deg() as usize).monic()
}

/// Canonical model: `⊕ O(dᵢ)` glued by `t^dᵢ`, then each torsion summand
/// placed in the chart(s) containing its support, glued by `1`.
pub fn sheaf_of_split(st: &SplitType) -> GluedSheaf {
    let field = st
        .torsion
        .iter()
        .find_map(|p| match &p.support {
            Support::Finite(q) => Some(q.field()),
            Support::Infinity => None,
        })
        .unwrap_or(Field::Rational);
    sheaf_of_split_in(field, st)
}

/// `sheaf_of_split` over an explicit field (needed when there is no finite
/// torsion to carry one).
pub fn sheaf_of_split_in(field: Field, st: &SplitType) -> GluedSheaf {
    let mut parts: Vec<GluedSheaf> = st.degrees.iter().map(|&d| GluedSheaf::line(field, d)).collect();
    parts.extend(st.torsion.iter().map(|p| sky(field, p)));
    GluedSheaf::direct_sum_all(field, &parts)
}

/// Splitting type: Birkhoff degrees of the bundle block plus the primary
/// decomposition of the torsion.
pub fn split_classify(m: &GluedSheaf) -> Result<SplitType> {
    let n = m.normalized();
    let degrees = if n.rank == 0 { vec![] } else { birkhoff_factorize(&n.glue_ff())?.degrees };
    let mut torsion = Vec::new();
    for d in &n.tors0 {
        for (p, e) in factor::factor(d) {
            torsion.push(TorsionPart { support: Support::Finite(p), jet: e });
        }
    }
    for d in &n.tors1 {
        let v = d.valuation();
        if v > 0 {
            torsion.push(TorsionPart::infinity(v as u32));
        }
    }
    Ok(SplitType::new(degrees, torsion))
}

/// An explicit isomorphism with the canonical model.
#[derive(Clone, Debug)]
pub struct SplitIso {
    pub split: SplitType,
    pub model: Arc<GluedSheaf>,
    pub to_model: SheafMap,
    pub from_model: SheafMap,
}

enum Origin {
    Chart0(usize),
    Chart1(usize),
}

/// Builds `M ≅ sheaf_of_split(split_classify(M))` in four coordinate
/// changes: normal forms, removal of the torsion-by-free block of the glue,
/// Birkhoff on the bundle block, and primary decomposition of the torsion
/// transported to chart 1 through the glue.
pub fn split_iso(m: &Arc<GluedSheaf>) -> Result<SplitIso> {
    let field = m.field();
    let n = m.normalized();
    let (a, b, r) = (n.n_tors0(), n.n_tors1(), n.rank);

    let (c0, c1) = kill_tf(&n)?;
    let mut k0 = PolyMat::identity(field, a + r);
    k0.paste(0, a, &c0);
    let mut k1 = PolyMat::identity(field, b + r);
    k1.paste(0, b, &c1);

    let bk = if r == 0 { None } else { Some(birkhoff_factorize(&n.glue_ff())?) };
    let degrees = bk.as_ref().map(|x| x.degrees.clone()).unwrap_or_default();

    let mut summands: Vec<(TorsionPart, Origin)> = Vec::new();
    for (i, d) in n.tors0.iter().enumerate() {
        for (p, e) in factor::factor(d) {
            summands.push((TorsionPart { support: Support::Finite(p), jet: e }, Origin::Chart0(i)));
        }
    }
    for (j, d) in n.tors1.iter().enumerate() {
        let v = d.valuation();
        if v > 0 {
            summands.push((TorsionPart::infinity(v as u32), Origin::Chart1(j)));
        }
    }
    summands.sort_by(|x, y| x.0.cmp_canonical(&y.0));
    let split = SplitType { degrees: degrees.clone(), torsion: summands.iter().map(|s| s.0.clone()).collect() };
    let model = Arc::new(sheaf_of_split_in(field, &split));

    // chart 0: rows [lines | torsion summands with chart-0 presence]
    let rows0 = r + summands.iter().filter(|s| !matches!(s.0.support, Support::Infinity)).count();
    let mut pi0 = PolyMat::zeros(field, rows0, a + r);
    if let Some(bk) = &bk {
        pi0.paste(0, a, &bk.p);
    }
    let rows1 = r + summands.iter().filter(|s| !s.0.support.is_origin()).count();
    let mut pi1 = PolyMat::zeros(field, rows1, b + r);
    if let Some(bk) = &bk {
        pi1.paste(0, b, &bk.q_inv);
    }
    let gtt = n.glue_tt();
    let (mut row0, mut row1) = (r, r);
    for (part, origin) in &summands {
        match (&part.support, origin) {
            (Support::Infinity, Origin::Chart1(j)) => {
                pi1.set(row1, *j, Poly::one(field));
                row1 += 1;
            }
            (Support::Finite(p), Origin::Chart0(i)) => {
                pi0.set(row0, *i, Poly::one(field));
                row0 += 1;
                if !part.support.is_origin() {
                    let q = reversed_monic(p).pow(part.jet as u64);
                    for j in 0..b {
                        let x = gtt.get(*i, j).invert_var().reduce_mod(&q);
                        pi1.set(row1, j, x);
                    }
                    row1 += 1;
                }
            }
            _ => return Err(Error::Internal("torsion summand in the wrong chart".into())),
        }
    }
    let f0 = pi0.mul(&k0).mul(&n.to0);
    let f1 = pi1.mul(&k1).mul(&n.to1);
    let to_model = SheafMap::new(m.clone(), model.clone(), f0, f1)?;
    let from_model = to_model.inverse()?;
    Ok(SplitIso { split, model, to_model, from_model })
}

/// Solves `G_TF + C0·G_FF − G_TT·C1 ≡ 0` (rows modulo the overlap torsion
/// moduli) for `C0` over `k[t]` and `C1` over `k[s]`.
fn kill_tf(n: &super::NormalizedSheaf) -> Result<(PolyMat, PolyMat)> {
    let field = n.glue.field();
    let (a, b, r) = (n.n_tors0(), n.n_tors1(), n.rank);
    let mut c0 = PolyMat::zeros(field, a, r);
    let mut c1 = PolyMat::zeros(field, b, r);
    let gtf = n.glue_tf();
    if a == 0 || r == 0 || gtf.is_zero() {
        return Ok((c0, c1));
    }
    let gff = n.glue_ff();
    let gtt = n.glue_tt();
    let odeg: Vec<usize> = n.over0.iter().map(|d| d.deg() as usize).collect();
    let mut eq_off = Vec::new();
    let mut acc = 0;
    for &d in &odeg {
        eq_off.push(acc);
        acc += d * r;
    }
    let neq = acc;
    let eq = |i: usize, f: usize, k: usize| eq_off[i] + f * odeg[i] + k;

    let mut unknowns: Vec<(bool, usize, usize, usize)> = Vec::new();
    for i in 0..a {
        for g in 0..r {
            for k in 0..n.tors0[i].deg() as usize {
                unknowns.push((false, i, g, k));
            }
        }
    }
    for j in 0..b {
        for f in 0..r {
            for k in 0..n.tors1[j].deg() as usize {
                unknowns.push((true, j, f, k));
            }
        }
    }
    let mut sys = Mat::zeros(field, neq, unknowns.len());
    for (col, &(chart1, x, y, k)) in unknowns.iter().enumerate() {
        if !chart1 {
            let (i, g) = (x, y);
            if odeg[i] == 0 {
                continue;
            }
            for f in 0..r {
                let v = gff.get(g, f).shift(k as i64).reduce_mod(&n.over0[i]);
                for (kk, c) in v.coeffs().iter().enumerate() {
                    sys.set(eq(i, f, kk), col, c.clone());
                }
            }
        } else {
            let (j, f) = (x, y);
            for i in 0..a {
                if odeg[i] == 0 {
                    continue;
                }
                let v = gtt.get(i, j).shift(-(k as i64)).reduce_mod(&n.over0[i]);
                for (kk, c) in v.coeffs().iter().enumerate() {
                    sys.set(eq(i, f, kk), col, -c);
                }
            }
        }
    }
    let mut rhs = Mat::zeros(field, neq, 1);
    for i in 0..a {
        if odeg[i] == 0 {
            continue;
        }
        for f in 0..r {
            let v = gtf.get(i, f).reduce_mod(&n.over0[i]);
            for (kk, c) in v.coeffs().iter().enumerate() {
                rhs.set(eq(i, f, kk), 0, -c);
            }
        }
    }
    let sol = solve(&sys, &rhs).ok_or_else(|| Error::Internal("torsion extension does not split".into()))?;
    let mut acc0: Vec<Vec<Vec<crate::Scalar>>> = (0..a).map(|i| vec![vec![field.zero(); n.tors0[i].deg() as usize]; r]).collect();
    let mut acc1: Vec<Vec<Vec<crate::Scalar>>> = (0..b).map(|j| vec![vec![field.zero(); n.tors1[j].deg() as usize]; r]).collect();
    for (col, &(chart1, x, y, k)) in unknowns.iter().enumerate() {
        let v = sol.get(col, 0).clone();
        if chart1 {
            acc1[x][y][k] = v;
        } else {
            acc0[x][y][k] = v;
        }
    }
    for i in 0..a {
        for g in 0..r {
            c0.set(i, g, Poly::new(field, acc0[i][g].clone()));
        }
    }
    for j in 0..b {
        for f in 0..r {
            c1.set(j, f, Poly::new(field, acc1[j][f].clone()));
        }
    }
    Ok((c0, c1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polypid::Laurent;

    const Q: Field = Field::Rational;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(Q, c)
    }

    fn lm(rows: Vec<Vec<Laurent>>) -> LaurentMat {
        LaurentMat::from_rows(Q, rows)
    }

    #[test]
    fn canonical_models() {
        let st = SplitType::new(vec![0], vec![]);
        assert_eq!(sheaf_of_split_in(Q, &st).glue().get(0, 0), &Laurent::one(Q));
        let st = SplitType::new(vec![], vec![TorsionPart::finite(p(&[-1, 1]), 2)]);
        let s = sheaf_of_split(&st);
        assert_eq!(s.m0().torsion(), &[p(&[1, -2, 1])]);
        assert_eq!(split_classify(&s).unwrap(), st);
    }

    #[test]
    fn classify_bundles() {
        let t = |e| Laurent::t_pow(Q, e);
        let g = lm(vec![vec![t(1), Laurent::one(Q)], vec![Laurent::zero(Q), t(1)]]);
        assert_eq!(split_classify(&GluedSheaf::bundle(g).unwrap()).unwrap().degrees, vec![1, 1]);
        let g = lm(vec![vec![t(2), Laurent::one(Q)], vec![Laurent::zero(Q), Laurent::one(Q)]]);
        assert_eq!(split_classify(&GluedSheaf::bundle(g).unwrap()).unwrap().degrees, vec![2, 0]);
    }

    #[test]
    fn round_trip_mixed() {
        let st = SplitType::new(
            vec![-1, 3, 0],
            vec![
                TorsionPart::finite(p(&[0, 1]), 2),
                TorsionPart::infinity(1),
                TorsionPart::finite(p(&[1, 0, 1]), 1),
                TorsionPart::finite(p(&[-2, 1]), 1),
                TorsionPart::finite(p(&[-2, 1]), 3),
            ],
        );
        let s = sheaf_of_split_in(Q, &st);
        assert_eq!(split_classify(&s).unwrap(), st);
        assert_eq!(st.render_degrees(), "(3, 0, -1)");
        assert_eq!(st.torsion.last().unwrap().to_string(), "sky(inf, 1)");
    }

    #[test]
    fn iso_for_nonsplit_extension() {
        // O ⊕ sky(t-1) glued with a torsion-by-free entry
        let m0 = PidModule::from_invariants(Q, &[p(&[-1, 1])], 1);
        let m1 = PidModule::from_invariants(Q, &[p(&[-1, 1])], 1);
        let g = lm(vec![
            vec![Laurent::one(Q), Laurent::t_pow(Q, 3)],
            vec![Laurent::zero(Q), Laurent::t_pow(Q, -2)],
        ]);
        let m = Arc::new(GluedSheaf::new(m0, m1, g).unwrap());
        let iso = split_iso(&m).unwrap();
        assert_eq!(iso.split.degrees, vec![-2]);
        assert_eq!(iso.split.torsion, vec![TorsionPart::finite(p(&[-1, 1]), 1)]);
        let back = iso.from_model.compose(&iso.to_model);
        assert!(back.equals(&SheafMap::identity(m)));
    }

    #[test]
    fn iso_with_torsion_at_both_poles() {
        let st = SplitType::new(vec![1], vec![TorsionPart::finite(p(&[0, 1]), 2), TorsionPart::infinity(3)]);
        let s = Arc::new(sheaf_of_split_in(Q, &st));
        let iso = split_iso(&s).unwrap();
        assert_eq!(iso.split, st);
    }
}
