use std::sync::Arc;

use super::chart::{chart_system_at, common_stage, ChartSystem};
use super::{FunctorExpr, LineEvaluator};
use crate::error::{Error, Result};
use crate::exactfield::{Mat, RingElem};
use crate::modpid::{homology, PidMap, PidModule};
use crate::polypid::{Laurent, Poly, PolyMat};
use crate::sheafp1::{h0_map, GluedSheaf, SheafMap};

/// `W(F)` together with the stage it was read from.
///
/// The raw chart modules are generated by `V_N = F(O(N))` and glued by
/// `t^(-N)`; `sheaf` is the same sheaf on the invariant-factor generators of
/// both charts. `to_min[c]` rewrites a raw generator vector (an element of
/// `V_N`, possibly with polynomial coefficients) in those generators.
#[derive(Clone, Debug)]
pub struct WattsSheaf {
    pub stage: i64,
    pub sheaf: Arc<GluedSheaf>,
    pub systems: [ChartSystem; 2],
    pub to_min: [PolyMat; 2],
}

impl WattsSheaf {
    pub(crate) fn at(ev: &LineEvaluator, n: i64) -> Result<WattsSheaf> {
        let field = ev.field();
        let s0 = chart_system_at(ev, 0, n)?;
        let s1 = chart_system_at(ev, 1, n)?;
        let nf0 = s0.module.normal_form().clone();
        let nf1 = s1.module.normal_form().clone();
        let m0 = PidModule::from_invariants(field, &nf0.torsion, nf0.free_rank);
        let m1 = PidModule::from_invariants(field, &nf1.torsion, nf1.free_rank);
        let to0 = nf0.to_normal.convert(Laurent::from_poly);
        let from0 = nf0.from_normal.convert(Laurent::from_poly);
        let to1 = nf1.to_normal.convert(Laurent::from_inverse_poly);
        let from1 = nf1.from_normal.convert(Laurent::from_inverse_poly);
        let glue = to0.mul(&from1).scale(&Laurent::t_pow(field, -n));
        let glue_inv = to1.mul(&from0).scale(&Laurent::t_pow(field, n));
        let sheaf = GluedSheaf::with_inverse(m0, m1, glue, glue_inv)
            .map_err(|e| Error::Internal(format!("Watts gluing is not invertible: {e}")))?;
        Ok(WattsSheaf {
            stage: n,
            sheaf: Arc::new(sheaf),
            to_min: [nf0.to_normal, nf1.to_normal],
            systems: [s0, s1],
        })
    }

    /// Chart-`c` generator coordinates of the element `Σ y^j w_j`, the `w_j`
    /// being columns of `w` (vectors in `V_N`).
    pub(crate) fn chart_element(&self, c: usize, w: &[Mat]) -> Vec<Poly> {
        let field = self.sheaf.field();
        let d = self.systems[c].dim;
        let mut v = vec![Poly::zero(field); d];
        for (j, col) in w.iter().enumerate() {
            for (i, vi) in v.iter_mut().enumerate() {
                let c = col.get(i, 0);
                if !c.is_zero() {
                    *vi = vi.add(&Poly::monomial(c.clone(), j));
                }
            }
        }
        let m = &self.to_min[c];
        (0..m.rows())
            .map(|i| (0..d).fold(Poly::zero(field), |acc, j| acc.add(&m.get(i, j).mul(&v[j]))))
            .collect()
    }
}

/// `W(F)` with its construction data.
pub fn watts_construction(f: &FunctorExpr) -> Result<WattsSheaf> {
    let ev = LineEvaluator::new(f);
    let n = common_stage(&[&ev])?;
    WattsSheaf::at(&ev, n)
}

/// The Eilenberg-Watts sheaf `W(F)`, glued from the two chart bimodules.
pub fn watts_sheaf(f: &FunctorExpr) -> Result<Arc<GluedSheaf>> {
    Ok(watts_construction(f)?.sheaf)
}

/// `W(α)` for the transformation `H⁰(− ⊗ A) → H⁰(− ⊗ B)` induced by
/// `α: A → B`, computed at the common stage `n`.
fn watts_map_at(alpha: &SheafMap, wa: &WattsSheaf, wb: &WattsSheaf, ea: &LineEvaluator, eb: &LineEvaluator) -> Result<SheafMap> {
    let n = wa.stage;
    let src = ea.sheaf(0, n);
    let tgt = eb.sheaf(0, n);
    let a_n = h0_map(&SheafMap::new_unchecked(src, tgt, alpha.f0.clone(), alpha.f1.clone()))?;
    let a_n = a_n.convert(|c| Poly::constant(c.clone()));
    let chart = |c: usize| -> PolyMat {
        let from = &wa.systems[c].module.normal_form().from_normal;
        wb.to_min[c].mul(&a_n).mul(from)
    };
    SheafMap::new(wa.sheaf.clone(), wb.sheaf.clone(), chart(0), chart(1))
}

/// `W(α): W(H⁰(− ⊗ A)) → W(H⁰(− ⊗ B))`.
pub fn watts_map(alpha: &SheafMap) -> Result<SheafMap> {
    let fa = FunctorExpr::tensor((*alpha.source).clone());
    let fb = FunctorExpr::tensor((*alpha.target).clone());
    let (ea, eb) = (LineEvaluator::new(&fa), LineEvaluator::new(&fb));
    let n = common_stage(&[&ea, &eb])?;
    let wa = WattsSheaf::at(&ea, n)?;
    let wb = WattsSheaf::at(&eb, n)?;
    watts_map_at(alpha, &wa, &wb, &ea, &eb)
}

fn chartwise_exact(alpha: &SheafMap, beta: &SheafMap, require_onto: bool) -> Result<bool> {
    for c in 0..2 {
        let a: PidMap<Poly> = alpha.chart_map(c);
        let b = beta.chart_map(c);
        if !a.is_injective() || (require_onto && !b.is_surjective()) {
            return Ok(false);
        }
        match homology(&a, &b) {
            Ok(h) if h.is_zero() => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// For `0 → A → B → C → 0` (certified chartwise), checks that
/// `0 → W(A) → W(B) → W(C)` is exact on both charts.
pub fn w_left_exactness_check(alpha: &SheafMap, beta: &SheafMap) -> Result<bool> {
    if !Arc::ptr_eq(&alpha.target, &beta.source) && alpha.target.render() != beta.source.render() {
        return Err(Error::NotExact("maps are not composable".into()));
    }
    if !chartwise_exact(alpha, beta, true)? {
        return Err(Error::NotExact("input sequence is not exact".into()));
    }
    let fa = FunctorExpr::tensor((*alpha.source).clone());
    let fb = FunctorExpr::tensor((*alpha.target).clone());
    let fc = FunctorExpr::tensor((*beta.target).clone());
    let (ea, eb, ec) = (LineEvaluator::new(&fa), LineEvaluator::new(&fb), LineEvaluator::new(&fc));
    let n = common_stage(&[&ea, &eb, &ec])?;
    let (wa, wb, wc) = (WattsSheaf::at(&ea, n)?, WattsSheaf::at(&eb, n)?, WattsSheaf::at(&ec, n)?);
    let wal = watts_map_at(alpha, &wa, &wb, &ea, &eb)?;
    let wbe = watts_map_at(beta, &wb, &wc, &eb, &ec)?;
    chartwise_exact(&wal, &wbe, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;
    use crate::sheafp1::{sheaf_of_split_in, split_classify, SplitType, TorsionPart};

    const Q: Field = Field::Rational;

    #[test]
    fn lines_come_back() {
        for d in [-2, 0, 2] {
            let w = watts_sheaf(&FunctorExpr::tensor(GluedSheaf::line(Q, d))).unwrap();
            assert_eq!(split_classify(&w).unwrap(), SplitType::new(vec![d], vec![]));
        }
    }

    #[test]
    fn tg_summands_contribute_nothing() {
        assert!(watts_sheaf(&FunctorExpr::h1twist(Q, -2)).unwrap().is_zero());
        let f = FunctorExpr::tensor(GluedSheaf::line(Q, 1)).plus(&FunctorExpr::h1twist(Q, -3));
        let w = watts_sheaf(&f).unwrap();
        assert_eq!(split_classify(&w).unwrap(), SplitType::new(vec![1], vec![]));
    }

    #[test]
    fn mixed_sheaf_comes_back() {
        let st = SplitType::new(
            vec![1, -2],
            vec![TorsionPart::finite(Poly::from_ints(Q, &[-1, 1]), 2), TorsionPart::infinity(1)],
        );
        let g = sheaf_of_split_in(Q, &st);
        let w = watts_sheaf(&FunctorExpr::tensor(g)).unwrap();
        assert_eq!(split_classify(&w).unwrap(), st);
    }

    #[test]
    fn ideal_sheaf_sequence_stays_left_exact() {
        let sky = Arc::new(sheaf_of_split_in(Q, &SplitType::new(vec![], vec![TorsionPart::finite(Poly::from_ints(Q, &[0, 1]), 1)])));
        let o = Arc::new(GluedSheaf::line(Q, 0));
        let om = Arc::new(GluedSheaf::line(Q, -1));
        let alpha = SheafMap::new(om, o.clone(), PolyMat::from_vec(Q, 1, 1, vec![Poly::var(Q)]), PolyMat::identity(Q, 1)).unwrap();
        let beta = SheafMap::new(o, sky, PolyMat::identity(Q, 1), PolyMat::zeros(Q, 0, 1)).unwrap();
        assert!(w_left_exactness_check(&alpha, &beta).unwrap());
        assert!(w_left_exactness_check(&beta, &beta).is_err());
    }
}
