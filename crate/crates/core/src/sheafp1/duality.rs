use super::cech::{cech_h0, cech_h1};
use super::GluedSheaf;
use crate::error::Result;
use crate::modpid::PidModule;
use crate::polypid::Poly;

/// Dual of the bundle part `M / torsion`: glued by the inverse transpose.
pub fn dual_bundle(m: &GluedSheaf) -> GluedSheaf {
    let n = m.normalized();
    let field = m.field();
    let free = std::sync::Arc::new(PidModule::free(field, n.rank));
    GluedSheaf::raw(field, free.clone(), free, n.glue_ff_inv.transpose(), n.glue_ff().transpose())
}

/// `dim Hom(M, N)`: sections of `E^∨ ⊗ N` for the bundle part `E` of `M`,
/// plus local homs between the torsion parts.
pub fn hom_dim(m: &GluedSheaf, n: &GluedSheaf) -> usize {
    let bundle = cech_h0(&dual_bundle(m).tensor(n)).dim;
    let nm = m.normalized();
    let nn = n.normalized();
    let mut tors = 0;
    for d in &nm.tors0 {
        for e in &nn.tors0 {
            tors += gcd_deg(d, e);
        }
    }
    for d in &nm.tors1 {
        for e in &nn.tors1 {
            tors += d.valuation().min(e.valuation());
        }
    }
    bundle + tors
}

fn gcd_deg(a: &Poly, b: &Poly) -> usize {
    a.gcd(b).map(|g| g.deg().max(0) as usize).unwrap_or(0)
}

/// `dim Hom(M, O(r)) = dim H¹(M(−2−r))`.
pub fn serre_check(m: &GluedSheaf, r: i64) -> Result<bool> {
    let field = m.field();
    let lhs = hom_dim(m, &GluedSheaf::line(field, r));
    let rhs = cech_h1(&m.twist(-2 - r))?.dim;
    Ok(lhs == rhs)
}
