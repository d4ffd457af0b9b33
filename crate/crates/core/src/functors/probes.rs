use std::ops::RangeInclusive;
use std::sync::Arc;

use super::{eval_mor, eval_obj, FunctorExpr};
use crate::error::Result;
use crate::exactfield::{rank, RingElem};
use crate::polypid::{Poly, PolyMat};
use crate::sheafp1::{sheaf_of_split_in, GluedSheaf, SheafMap, SplitType, TorsionPart};

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub checked: usize,
    /// The first epimorphism whose image under `F` is not onto, with the
    /// rank and target dimension.
    pub counterexample: Option<String>,
}

impl ProbeReport {
    pub fn is_right_exact_on_probes(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// `(x₀, x₁): O(−(n+1))² → O(−n)`.
pub fn tangent_surjection(field: crate::Field, n: i64) -> SheafMap {
    let src = Arc::new(GluedSheaf::line(field, -(n + 1)).direct_sum(&GluedSheaf::line(field, -(n + 1))));
    let tgt = Arc::new(GluedSheaf::line(field, -n));
    let one = Poly::one(field);
    let var = Poly::var(field);
    let f0 = PolyMat::from_vec(field, 1, 2, vec![one.clone(), var.clone()]);
    let f1 = PolyMat::from_vec(field, 1, 2, vec![var, one]);
    SheafMap::new_unchecked(src, tgt, f0, f1)
}

fn point_quotients(field: crate::Field) -> Vec<(String, SheafMap)> {
    let o = Arc::new(GluedSheaf::line(field, 0));
    let mut out = Vec::new();
    for c in [0, 1] {
        let p = Poly::from_ints(field, &[-c, 1]);
        let sky = sheaf_of_split_in(field, &SplitType::new(vec![], vec![TorsionPart::finite(p, 1)]));
        let f1 = PolyMat::identity(field, sky.m1().gens());
        let f1 = if f1.rows() == 0 { PolyMat::zeros(field, 0, 1) } else { f1 };
        let map = SheafMap::new_unchecked(o.clone(), Arc::new(sky), PolyMat::identity(field, 1), f1);
        out.push((format!("O -> sky(t - {c}, 1)"), map));
    }
    let sky = sheaf_of_split_in(field, &SplitType::new(vec![], vec![TorsionPart::infinity(1)]));
    let map = SheafMap::new_unchecked(o, Arc::new(sky), PolyMat::zeros(field, 0, 1), PolyMat::identity(field, 1));
    out.push(("O -> sky(inf, 1)".to_string(), map));
    out
}

/// Applies `F` to the tangent surjections for `n` in `window` and to the
/// quotients of `O` by points, reporting the first image that is not onto.
pub fn right_exactness_probe(f: &FunctorExpr, window: RangeInclusive<i64>) -> Result<ProbeReport> {
    let field = f.field;
    let mut family: Vec<(String, SheafMap)> = window
        .map(|n| (format!("(x0, x1): O({})^2 -> O({})", -(n + 1), -n), tangent_surjection(field, n)))
        .collect();
    family.extend(point_quotients(field));
    let mut checked = 0;
    for (name, map) in &family {
        checked += 1;
        let m = eval_mor(f, map)?;
        let target = eval_obj(f, &map.target)?.dim;
        let r = rank(&m);
        if r < target {
            return Ok(ProbeReport { checked, counterexample: Some(format!("{name}: rank {r} < {target}")) });
        }
    }
    Ok(ProbeReport { checked, counterexample: None })
}
