use std::cell::RefCell;
use std::collections::HashMap;
use std::ops::RangeInclusive;
use std::sync::Arc;

use super::chart::common_stage;
use super::watts::WattsSheaf;
use super::{eval_mors_into, Atom, FunctorExpr, LineEvaluator};
use crate::error::{Error, Result};
use crate::exactfield::{inverse, kernel_basis, rank, solve, Mat, RingElem};
use crate::polypid::PolyMat;
use crate::sheafp1::{
    cech_h0, flat_presentation_with_offset, h0_map, split_classify, FlatPresentation, GluedSheaf, SheafMap, Support,
};

/// `Γ_F` on lines, reusing the evaluator and the Watts sheaf.
pub(crate) struct GammaContext<'a> {
    ev: LineEvaluator<'a>,
    pub(crate) w: WattsSheaf,
    twists: RefCell<HashMap<i64, Arc<GluedSheaf>>>,
}

impl<'a> GammaContext<'a> {
    pub(crate) fn new(f: &'a FunctorExpr) -> Result<GammaContext<'a>> {
        let ev = LineEvaluator::new(f);
        let n = common_stage(&[&ev])?;
        let w = WattsSheaf::at(&ev, n)?;
        Ok(GammaContext { ev, w, twists: RefCell::new(HashMap::new()) })
    }

    fn functor(&self) -> &FunctorExpr {
        self.ev.functor()
    }

    /// `O(n) ⊗ W`.
    pub(crate) fn w_twist(&self, n: i64) -> Arc<GluedSheaf> {
        if let Some(s) = self.twists.borrow().get(&n) {
            return s.clone();
        }
        let s = Arc::new(self.w.sheaf.twist(n));
        self.twists.borrow_mut().insert(n, s.clone());
        s
    }

    /// `Γ: F(O(n)) → H⁰(W(n))`.
    ///
    /// A vector `φ ∈ F(O(n))` is the section of `W(n)` whose chart-`c`
    /// coordinate is the class of `φ` in the colimit along `x_c`; at stage
    /// `N` this is `x_c^(N−n) φ` when `n ≤ N`, and `Σ y^j w_j` when
    /// `φ = Σ x₀^(n−N−j) x₁^j w_j` with `n > N`.
    pub(crate) fn line(&self, n: i64) -> Result<Mat> {
        let field = self.ev.field();
        let big_n = self.w.stage;
        let dim = self.ev.dim(n)?;
        let target = cech_h0(&self.w_twist(n));
        let mut out = Mat::zeros(field, target.dim, dim);
        if dim == 0 || target.dim == 0 {
            return Ok(out);
        }
        let cols: Vec<(Vec<Mat>, Vec<Mat>)> = if n <= big_n {
            let e = (big_n - n) as u32;
            let x0 = self.ev.monomial(n, e, 0)?;
            let x1 = self.ev.monomial(n, 0, e)?;
            (0..dim).map(|k| (vec![x0.select_cols(&[k])], vec![x1.select_cols(&[k])])).collect()
        } else {
            let e = (n - big_n) as u32;
            let blocks: Vec<Mat> = (0..=e).map(|j| self.ev.monomial(big_n, e - j, j)).collect::<Result<_>>()?;
            let m = Mat::hconcat(field, dim, &blocks);
            let sol = solve(&m, &Mat::identity(field, dim))
                .ok_or_else(|| Error::Internal(format!("F(O({n})) is not generated from stage {big_n}")))?;
            let d = self.w.systems[0].dim;
            (0..dim)
                .map(|k| {
                    let ws: Vec<Mat> = (0..=e as usize).map(|j| sol.submatrix(j * d, (j + 1) * d, k, k + 1)).collect();
                    let rev: Vec<Mat> = ws.iter().rev().cloned().collect();
                    (ws, rev)
                })
                .collect()
        };
        for (k, (c0, c1)) in cols.iter().enumerate() {
            let a = self.w.chart_element(0, c0);
            let b = self.w.chart_element(1, c1);
            out.paste(0, k, &target.coords_of_sections(&a, &b)?);
        }
        Ok(out)
    }

    /// `Γ_M` through a presentation `L1 → L0 ↠ M` with `F(ε)` onto.
    pub(crate) fn through(&self, fp: &FlatPresentation) -> Result<Mat> {
        let f = self.functor();
        let field = self.ev.field();
        let l0 = fp.l0();
        let m = fp.target();
        let w = &self.w.sheaf;
        let mw = Arc::new(m.tensor(w));
        let l0w = Arc::new(l0.tensor(w));
        let r = fp.l0_degrees.len();

        let mut incl = Vec::with_capacity(r);
        for (j, &d) in fp.l0_degrees.iter().enumerate() {
            let mut e = PolyMat::zeros(field, r, 1);
            e.set(j, 0, crate::polypid::Poly::one(field));
            incl.push(SheafMap::new_unchecked(Arc::new(GluedSheaf::line(field, d)), l0.clone(), e.clone(), e));
        }
        let b_blocks = eval_mors_into(f, &incl)?;
        let mut a_blocks = Vec::with_capacity(r);
        for (j, &d) in fp.l0_degrees.iter().enumerate() {
            let iw = incl[j].tensor_identity(w);
            let iw = SheafMap::new_unchecked(self.w_twist(d), l0w.clone(), iw.f0, iw.f1);
            a_blocks.push(h0_map(&iw)?.mul(&self.line(d)?));
        }
        let dim_l0: usize = b_blocks.iter().map(|b| b.cols()).sum();
        let b = Mat::hconcat(field, b_blocks.first().map(|x| x.rows()).unwrap_or(dim_l0), &b_blocks);
        let a = Mat::hconcat(field, cech_h0(&l0w).dim, &a_blocks);
        let b_inv = inverse(&b).ok_or_else(|| Error::Internal("F is not additive on the lines of L0".into()))?;
        let gamma_l0 = a.mul(&b_inv);

        let e = eval_mors_into(f, std::slice::from_ref(&fp.eps))?.remove(0);
        let ew = fp.eps.tensor_identity(w);
        let h = h0_map(&SheafMap::new_unchecked(l0w, mw, ew.f0, ew.f1))?;
        let through = h.mul(&gamma_l0);
        if !through.mul(&kernel_basis(&e)).is_zero() {
            return Err(Error::Internal("Γ does not descend along the presentation".into()));
        }
        let x = solve(&e, &Mat::identity(field, e.rows()))
            .ok_or_else(|| Error::NotExact("F(L0) → F(M) is not onto for this presentation".into()))?;
        Ok(through.mul(&x))
    }
}

/// Offset making `H¹(L1 ⊗ G) = 0` for every tensor atom `G`, so that `F`
/// maps the presentation onto `F(M)`.
pub(crate) fn adapted_offset(f: &FunctorExpr, m: &GluedSheaf) -> Result<i64> {
    let st = split_classify(m)?;
    let max_len = st
        .torsion
        .iter()
        .map(|p| match &p.support {
            Support::Finite(q) => p.jet as i64 * q.deg(),
            Support::Infinity => p.jet as i64,
        })
        .max();
    let Some(len) = max_len else { return Ok(0) };
    let mut a = 0;
    for atom in &f.atoms {
        if let Atom::TensorWith(g) = atom {
            if let Some(&d) = split_classify(g)?.degrees.iter().min() {
                a = a.max(len - 1 - d);
            }
        }
    }
    Ok(a)
}

/// `Γ_F(M): F(M) → H⁰(M ⊗ W(F))`.
pub fn gamma(f: &FunctorExpr, m: &Arc<GluedSheaf>) -> Result<Mat> {
    let ctx = GammaContext::new(f)?;
    if let Some(n) = m.as_line() {
        return ctx.line(n);
    }
    let fp = flat_presentation_with_offset(m, adapted_offset(f, m)?)?;
    ctx.through(&fp)
}

/// `Γ_F(M)` through a caller-supplied presentation of `M`.
pub fn gamma_with_presentation(f: &FunctorExpr, fp: &FlatPresentation) -> Result<Mat> {
    GammaContext::new(f)?.through(fp)
}

/// Dimensions of `ker Γ` and `cok Γ` on `O(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaTable {
    pub degrees: Vec<i64>,
    pub ker: Vec<usize>,
    pub cok: Vec<usize>,
}

pub fn gamma_kernel_dims(f: &FunctorExpr, window: RangeInclusive<i64>) -> Result<GammaTable> {
    let ctx = GammaContext::new(f)?;
    let mut t = GammaTable { degrees: vec![], ker: vec![], cok: vec![] };
    for n in window {
        let g = ctx.line(n)?;
        let r = rank(&g);
        t.degrees.push(n);
        t.ker.push(g.cols() - r);
        t.cok.push(g.rows() - r);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;
    use crate::polypid::Poly;
    use crate::sheafp1::{padded_presentation, sheaf_of_split_in, SplitType, TorsionPart};

    const Q: Field = Field::Rational;

    fn invertible(m: &Mat) -> bool {
        m.rows() == m.cols() && rank(m) == m.rows()
    }

    #[test]
    fn tensor_with_line_is_recovered() {
        let f = FunctorExpr::tensor(GluedSheaf::line(Q, 1));
        let g = gamma(&f, &Arc::new(GluedSheaf::line(Q, 0))).unwrap();
        assert_eq!((g.rows(), g.cols()), (2, 2));
        assert!(invertible(&g));
        for n in -4..4 {
            let g = gamma(&f, &Arc::new(GluedSheaf::line(Q, n))).unwrap();
            assert!(invertible(&g), "n = {n}");
        }
    }

    #[test]
    fn h1_twist_has_zero_target() {
        let g = gamma(&FunctorExpr::h1twist(Q, 0), &Arc::new(GluedSheaf::line(Q, -2))).unwrap();
        assert_eq!((g.rows(), g.cols()), (0, 1));
        let g = gamma(&FunctorExpr::zero(Q), &Arc::new(GluedSheaf::line(Q, 3))).unwrap();
        assert_eq!((g.rows(), g.cols()), (0, 0));
    }

    #[test]
    fn kernel_tables() {
        let t = gamma_kernel_dims(&FunctorExpr::h1twist(Q, 0), -5..=3).unwrap();
        for (k, n) in t.degrees.iter().enumerate() {
            assert_eq!(t.ker[k] as i64, (-n - 1).max(0));
            assert_eq!(t.cok[k], 0);
        }
        let f = FunctorExpr::tensor(GluedSheaf::line(Q, 0)).plus(&FunctorExpr::h1twist(Q, -3));
        let t = gamma_kernel_dims(&f, -4..=4).unwrap();
        for (k, n) in t.degrees.iter().enumerate() {
            assert_eq!(t.ker[k] as i64, (-n + 3 - 1).max(0));
            assert_eq!(t.cok[k], 0);
        }
    }

    #[test]
    fn torsion_and_presentation_independence() {
        let g = sheaf_of_split_in(Q, &SplitType::new(vec![-1], vec![TorsionPart::finite(Poly::from_ints(Q, &[1, 1]), 1)]));
        let f = FunctorExpr::tensor(g);
        let st = SplitType::new(vec![2], vec![TorsionPart::finite(Poly::from_ints(Q, &[-2, 1]), 2), TorsionPart::infinity(1)]);
        let m = Arc::new(sheaf_of_split_in(Q, &st));
        let g1 = gamma(&f, &m).unwrap();
        assert!(invertible(&g1));
        let a = adapted_offset(&f, &m).unwrap();
        let fp = flat_presentation_with_offset(&m, a + 2).unwrap();
        let g2 = gamma_with_presentation(&f, &padded_presentation(&fp, 1)).unwrap();
        assert_eq!(g1, g2);
    }
}
