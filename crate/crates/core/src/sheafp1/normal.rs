use super::GluedSheaf;
use crate::exactfield::RingElem;
use crate::polypid::{Laurent, LaurentMat, Poly, PolyMat};

/// A sheaf rewritten in the invariant-factor coordinates of both charts.
///
/// Chart 0 is `⊕ k[t]/(tors0ᵢ) ⊕ k[t]^rank`, chart 1 is
/// `⊕ k[s]/(tors1ⱼ) ⊕ k[s]^rank`. On the overlap the torsion coordinate `i`
/// of chart 0 lives in `k[t,t⁻¹]/(over0ᵢ)` where `over0ᵢ` is `tors0ᵢ` with
/// its power of `t` removed; torsion rows of `glue` are reduced there. The
/// free rows of `glue` have zero torsion columns, so `glue_ff` is the glue of
/// the bundle `M / torsion`.
#[derive(Clone, Debug)]
pub struct NormalizedSheaf {
    pub rank: usize,
    pub tors0: Vec<Poly>,
    pub tors1: Vec<Poly>,
    pub over0: Vec<Poly>,
    pub glue: LaurentMat,
    pub glue_ff_inv: LaurentMat,
    pub to0: PolyMat,
    pub from0: PolyMat,
    pub to1: PolyMat,
    pub from1: PolyMat,
}

impl NormalizedSheaf {
    pub(crate) fn compute(m: &GluedSheaf) -> NormalizedSheaf {
        let n0 = m.m0().normal_form();
        let n1 = m.m1().normal_form();
        assert_eq!(n0.free_rank, n1.free_rank, "glue is an isomorphism, so chart ranks agree");
        let rank = n0.free_rank;
        let over0: Vec<Poly> = n0.torsion.iter().map(|d| d.unshift(d.valuation()).monic()).collect();
        let g = n0.to_normal.convert(Laurent::from_poly).mul(m.glue()).mul(&n1.from_normal.convert(Laurent::from_inverse_poly));
        let h = n1.to_normal.convert(Laurent::from_inverse_poly).mul(m.glue_inv()).mul(&n0.from_normal.convert(Laurent::from_poly));
        let (a, b) = (n0.torsion.len(), n1.torsion.len());
        let glue = reduce_torsion_rows(g, &over0);
        debug_assert!(glue.submatrix(a, a + rank, 0, b).is_zero());
        let glue_ff_inv = h.submatrix(b, b + rank, a, a + rank);
        NormalizedSheaf {
            rank,
            tors0: n0.torsion.clone(),
            tors1: n1.torsion.clone(),
            over0,
            glue,
            glue_ff_inv,
            to0: n0.to_normal.clone(),
            from0: n0.from_normal.clone(),
            to1: n1.to_normal.clone(),
            from1: n1.from_normal.clone(),
        }
    }

    /// Normal data of `M(n)`: the chart coordinates are unchanged.
    pub(crate) fn twisted(&self, n: i64) -> NormalizedSheaf {
        let f = self.glue.field();
        let g = self.glue.scale(&Laurent::t_pow(f, n));
        let mut out = self.clone();
        out.glue = reduce_torsion_rows(g, &self.over0);
        out.glue_ff_inv = self.glue_ff_inv.scale(&Laurent::t_pow(f, -n));
        out
    }

    pub fn n_tors0(&self) -> usize {
        self.tors0.len()
    }

    pub fn n_tors1(&self) -> usize {
        self.tors1.len()
    }

    /// The bundle block of the glue.
    pub fn glue_ff(&self) -> LaurentMat {
        let (a, b) = (self.tors0.len(), self.tors1.len());
        self.glue.submatrix(a, a + self.rank, b, b + self.rank)
    }

    /// Torsion-to-torsion block.
    pub fn glue_tt(&self) -> LaurentMat {
        self.glue.submatrix(0, self.tors0.len(), 0, self.tors1.len())
    }

    /// Free-to-torsion block.
    pub fn glue_tf(&self) -> LaurentMat {
        let b = self.tors1.len();
        self.glue.submatrix(0, self.tors0.len(), b, b + self.rank)
    }

    /// Length of the torsion: chart-0 torsion plus the part of chart-1
    /// torsion supported at `s = 0`.
    pub fn torsion_length(&self) -> usize {
        let a: usize = self.tors0.iter().map(|d| d.deg() as usize).sum();
        let b: usize = self.tors1.iter().map(|d| d.valuation()).sum();
        a + b
    }
}

/// Reduces row `i` modulo `over[i]` for the leading torsion rows.
pub(crate) fn reduce_torsion_rows(mut g: LaurentMat, over: &[Poly]) -> LaurentMat {
    for (i, d) in over.iter().enumerate() {
        for j in 0..g.cols() {
            let r = if d.is_constant() { Laurent::zero(g.field()) } else { Laurent::from_poly(&g.get(i, j).reduce_mod(d)) };
            g.set(i, j, r);
        }
    }
    g
}
