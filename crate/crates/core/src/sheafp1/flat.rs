use std::sync::Arc;

use super::split::{reversed_monic, split_iso, Support};
use super::{GluedSheaf, SheafMap};
use crate::error::{Error, Result};
use crate::modpid::homology;
use crate::polypid::{Laurent, Poly, PolyMat};

/// `L1 → L0 ↠ M` with `L0`, `L1` direct sums of line bundles.
#[derive(Clone, Debug)]
pub struct FlatPresentation {
    pub l1_degrees: Vec<i64>,
    pub l0_degrees: Vec<i64>,
    pub d: SheafMap,
    pub eps: SheafMap,
}

impl FlatPresentation {
    pub fn l1(&self) -> &Arc<GluedSheaf> {
        &self.d.source
    }

    pub fn l0(&self) -> &Arc<GluedSheaf> {
        &self.d.target
    }

    pub fn target(&self) -> &Arc<GluedSheaf> {
        &self.eps.target
    }

    /// Chartwise: `eps ∘ d = 0`, `eps` onto, `ker eps = im d`.
    pub fn certify(&self) -> Result<()> {
        for c in 0..2 {
            let d = self.d.chart_map(c);
            let e = self.eps.chart_map(c);
            if !e.is_surjective() {
                return Err(Error::NotExact(format!("presentation not onto in chart {c}")));
            }
            if !homology(&d, &e)?.is_zero() {
                return Err(Error::NotExact(format!("presentation not exact at L0 in chart {c}")));
            }
        }
        Ok(())
    }
}

/// Flat presentation with torsion summands presented from `O(0)`.
pub fn flat_presentation(m: &Arc<GluedSheaf>) -> Result<FlatPresentation> {
    flat_presentation_with_offset(m, 0)
}

/// Flat presentation in which every torsion summand of jet `e` at a point of
/// degree `D` is presented as `O(a − eD) → O(a)` by the homogenized
/// support polynomial to the power `e`.
pub fn flat_presentation_with_offset(m: &Arc<GluedSheaf>, a: i64) -> Result<FlatPresentation> {
    let field = m.field();
    let iso = split_iso(m)?;
    let st = &iso.split;
    let one = || PolyMat::identity(field, 1);
    let zero = |r, c| PolyMat::zeros(field, r, c);

    let mut l0_degrees = st.degrees.clone();
    let mut l1_degrees = Vec::new();
    let mut d_parts: Vec<(PolyMat, PolyMat)> = Vec::new();
    // eps blocks: (chart-0 rows, chart-1 rows) for the model generators
    let mut eps_parts: Vec<(PolyMat, PolyMat)> = st.degrees.iter().map(|_| (one(), one())).collect();
    for part in &st.torsion {
        let e = part.jet as u64;
        l0_degrees.push(a);
        match &part.support {
            Support::Infinity => {
                l1_degrees.push(a - e as i64);
                d_parts.push((one(), PolyMat::from_vec(field, 1, 1, vec![Poly::var(field).pow(e)])));
                eps_parts.push((zero(0, 1), one()));
            }
            Support::Finite(p) if p.deg() == 1 && p.coeff(0).is_zero() => {
                l1_degrees.push(a - e as i64);
                d_parts.push((PolyMat::from_vec(field, 1, 1, vec![p.pow(e)]), one()));
                eps_parts.push((one(), zero(0, 1)));
            }
            Support::Finite(p) => {
                let deg = p.deg();
                l1_degrees.push(a - e as i64 * deg);
                let hom = p.reverse(deg as usize).pow(e);
                d_parts.push((PolyMat::from_vec(field, 1, 1, vec![p.pow(e)]), PolyMat::from_vec(field, 1, 1, vec![hom])));
                let q = reversed_monic(p).pow(e);
                let s_pow = Laurent::t_pow(field, -a).reduce_mod(&q);
                eps_parts.push((one(), PolyMat::from_vec(field, 1, 1, vec![s_pow])));
            }
        }
    }
    let lines = |ds: &[i64]| GluedSheaf::direct_sum_all(field, &ds.iter().map(|&d| GluedSheaf::line(field, d)).collect::<Vec<_>>());
    let l0 = Arc::new(lines(&l0_degrees));
    let l1 = Arc::new(lines(&l1_degrees));
    let r = st.degrees.len();

    let nt = d_parts.len();
    let mut d0 = PolyMat::zeros(field, r + nt, nt);
    let mut d1 = PolyMat::zeros(field, r + nt, nt);
    for (k, (x0, x1)) in d_parts.iter().enumerate() {
        d0.set(r + k, k, x0.get(0, 0).clone());
        d1.set(r + k, k, x1.get(0, 0).clone());
    }
    let d = SheafMap::new(l1, l0.clone(), d0, d1)?;

    let e0 = PolyMat::block_diag_all(field, &eps_parts.iter().map(|p| p.0.clone()).collect::<Vec<_>>());
    let e1 = PolyMat::block_diag_all(field, &eps_parts.iter().map(|p| p.1.clone()).collect::<Vec<_>>());
    let eps_model = SheafMap::new(l0, iso.model.clone(), e0, e1)?;
    let eps = iso.from_model.compose(&eps_model);
    Ok(FlatPresentation { l1_degrees, l0_degrees, d, eps })
}

/// A second presentation of the same sheaf: `p ⊕ (O(b) = O(b))` with the
/// extra summand mapping to zero.
pub fn padded_presentation(p: &FlatPresentation, b: i64) -> FlatPresentation {
    let field = p.eps.source.field();
    let ob = Arc::new(GluedSheaf::line(field, b));
    let d = p.d.direct_sum(&SheafMap::identity(ob.clone()));
    let extra = SheafMap::zero(ob, Arc::new(GluedSheaf::zero(field)));
    let s = p.eps.direct_sum(&extra);
    let eps = SheafMap::new_unchecked(s.source, p.eps.target.clone(), s.f0, s.f1);
    let mut l1_degrees = p.l1_degrees.clone();
    l1_degrees.push(b);
    let mut l0_degrees = p.l0_degrees.clone();
    l0_degrees.push(b);
    FlatPresentation { l1_degrees, l0_degrees, d, eps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;
    use crate::sheafp1::{sheaf_of_split_in, SplitType, TorsionPart};

    const Q: Field = Field::Rational;

    #[test]
    fn line_bundle_presents_itself() {
        let m = Arc::new(GluedSheaf::line(Q, 3));
        let fp = flat_presentation(&m).unwrap();
        assert!(fp.l1_degrees.is_empty());
        assert_eq!(fp.l0_degrees, vec![3]);
        fp.certify().unwrap();
    }

    #[test]
    fn skyscraper_presentation() {
        let st = SplitType::new(vec![], vec![TorsionPart::finite(Poly::from_ints(Q, &[-2, 1]), 1)]);
        let m = Arc::new(sheaf_of_split_in(Q, &st));
        let fp = flat_presentation(&m).unwrap();
        assert_eq!(fp.l1_degrees, vec![-1]);
        assert_eq!(fp.l0_degrees, vec![0]);
        assert_eq!(fp.d.f0.get(0, 0), &Poly::from_ints(Q, &[-2, 1]));
        assert_eq!(fp.d.f1.get(0, 0), &Poly::from_ints(Q, &[1, -2]));
        fp.certify().unwrap();
    }

    #[test]
    fn mixed_presentations_certify() {
        let st = SplitType::new(
            vec![2, -1],
            vec![
                TorsionPart::finite(Poly::from_ints(Q, &[0, 1]), 2),
                TorsionPart::finite(Poly::from_ints(Q, &[1, 0, 1]), 2),
                TorsionPart::infinity(2),
            ],
        );
        let m = Arc::new(sheaf_of_split_in(Q, &st));
        for a in [-2, 0, 3] {
            let fp = flat_presentation_with_offset(&m, a).unwrap();
            fp.certify().unwrap();
            padded_presentation(&fp, -4).certify().unwrap();
        }
    }
}
