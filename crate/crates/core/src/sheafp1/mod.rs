//! Coherent sheaves on P¹ as pairs of chart modules glued on the overlap.
//!
//! Chart 0 is `U₀ = {x₀ ≠ 0}` with coordinate `t = x₁/x₀`, chart 1 is
//! `U₁ = {x₁ ≠ 0}` with `s = x₀/x₁`. A sheaf stores a `k[t]`-module `m0`, a
//! `k[s]`-module `m1` and a Laurent matrix `glue` (rows: generators of `m0`,
//! columns: generators of `m1`) such that a pair of chart sections
//! `(a, b)` agrees on the overlap iff `a = glue · b` there. With this
//! convention `O(d)` is glued by `t^d`, and a morphism `(f0, f1)` is
//! compatible when `f0 · glue_M = glue_N · f1` on the overlap.

mod cech;
mod duality;
mod flat;
mod normal;
mod split;

use std::fmt;
use std::sync::{Arc, OnceLock};

pub use cech::{cech_h0, cech_h1, delta_map, h0_map, h1_map, DeltaMap, H0Space, H1Space};
pub use duality::{dual_bundle, hom_dim, serre_check};
pub use flat::{flat_presentation, flat_presentation_with_offset, padded_presentation, FlatPresentation};
pub use normal::NormalizedSheaf;
pub use split::{reversed_monic, sheaf_of_split, sheaf_of_split_in, split_classify, split_iso, SplitIso, SplitType, Support, TorsionPart};

use crate::error::{Error, Result};
use crate::exactfield::Field;
use crate::modpid::{localize, localize_chart1, tensor, ChartModule, PidMap, PidModule};
use crate::polypid::{Laurent, LaurentMat, Poly, PolyMat};

/// A coherent sheaf on P¹ in two-chart form.
#[derive(Debug)]
pub struct GluedSheaf {
    field: Field,
    m0: Arc<ChartModule>,
    m1: Arc<ChartModule>,
    glue: LaurentMat,
    glue_inv: LaurentMat,
    normal: OnceLock<Arc<NormalizedSheaf>>,
    h0: OnceLock<Arc<H0Space>>,
    h1: OnceLock<std::result::Result<Arc<H1Space>, Error>>,
}

impl Clone for GluedSheaf {
    fn clone(&self) -> Self {
        let normal = OnceLock::new();
        if let Some(n) = self.normal.get() {
            let _ = normal.set(n.clone());
        }
        GluedSheaf {
            field: self.field,
            m0: self.m0.clone(),
            m1: self.m1.clone(),
            glue: self.glue.clone(),
            glue_inv: self.glue_inv.clone(),
            normal,
            h0: OnceLock::new(),
            h1: OnceLock::new(),
        }
    }
}

impl GluedSheaf {
    /// Glues `m0` and `m1` along `glue`, computing and certifying the inverse.
    pub fn new(m0: ChartModule, m1: ChartModule, glue: LaurentMat) -> Result<GluedSheaf> {
        let field = m0.field();
        let l0 = Arc::new(localize(&m0));
        let l1 = Arc::new(localize_chart1(&m1));
        let g = PidMap::new(l1, l0, glue.clone()).map_err(|e| match e {
            Error::IllDefinedMap => Error::IllDefinedMap,
            other => other,
        })?;
        let inv = g.inverse()?;
        Ok(GluedSheaf::raw(field, Arc::new(m0), Arc::new(m1), glue, inv.matrix))
    }

    /// Glues with a supplied inverse, certifying both composites.
    pub fn with_inverse(m0: ChartModule, m1: ChartModule, glue: LaurentMat, glue_inv: LaurentMat) -> Result<GluedSheaf> {
        let field = m0.field();
        let l0 = Arc::new(localize(&m0));
        let l1 = Arc::new(localize_chart1(&m1));
        let g = PidMap::new(l1.clone(), l0.clone(), glue.clone())?;
        let h = PidMap::new(l0.clone(), l1.clone(), glue_inv.clone())?;
        if !g.compose(&h).equals(&PidMap::identity(l0)) || !h.compose(&g).equals(&PidMap::identity(l1)) {
            return Err(Error::NotInvertible);
        }
        Ok(GluedSheaf::raw(field, Arc::new(m0), Arc::new(m1), glue, glue_inv))
    }

    pub(crate) fn raw(
        field: Field,
        m0: Arc<ChartModule>,
        m1: Arc<ChartModule>,
        glue: LaurentMat,
        glue_inv: LaurentMat,
    ) -> GluedSheaf {
        GluedSheaf { field, m0, m1, glue, glue_inv, normal: OnceLock::new(), h0: OnceLock::new(), h1: OnceLock::new() }
    }

    /// Locally free sheaf glued from free chart modules by an invertible
    /// Laurent matrix.
    pub fn bundle(glue: LaurentMat) -> Result<GluedSheaf> {
        let field = glue.field();
        let n = glue.rows();
        if glue.cols() != n {
            return Err(Error::NotInvertible);
        }
        GluedSheaf::new(PidModule::free(field, n), PidModule::free(field, n), glue)
    }

    /// `O(d)`.
    pub fn line(field: Field, d: i64) -> GluedSheaf {
        let m = Arc::new(PidModule::free(field, 1));
        let g = LaurentMat::from_vec(field, 1, 1, vec![Laurent::t_pow(field, d)]);
        let gi = LaurentMat::from_vec(field, 1, 1, vec![Laurent::t_pow(field, -d)]);
        GluedSheaf::raw(field, m.clone(), m, g, gi)
    }

    pub fn structure(field: Field) -> GluedSheaf {
        GluedSheaf::line(field, 0)
    }

    pub fn zero(field: Field) -> GluedSheaf {
        let m = Arc::new(PidModule::zero(field));
        GluedSheaf::raw(field, m.clone(), m, LaurentMat::zeros(field, 0, 0), LaurentMat::zeros(field, 0, 0))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn m0(&self) -> &Arc<ChartModule> {
        &self.m0
    }

    pub fn m1(&self) -> &Arc<ChartModule> {
        &self.m1
    }

    pub fn chart(&self, i: usize) -> &Arc<ChartModule> {
        if i == 0 {
            &self.m0
        } else {
            &self.m1
        }
    }

    pub fn glue(&self) -> &LaurentMat {
        &self.glue
    }

    pub fn glue_inv(&self) -> &LaurentMat {
        &self.glue_inv
    }

    pub fn is_zero(&self) -> bool {
        self.m0.is_zero() && self.m1.is_zero()
    }

    /// Invariant-factor normal form of both charts and the glue, computed
    /// once per value.
    pub fn normalized(&self) -> Arc<NormalizedSheaf> {
        self.normal.get_or_init(|| Arc::new(NormalizedSheaf::compute(self))).clone()
    }

    pub fn rank(&self) -> usize {
        self.m0.free_rank()
    }

    pub fn direct_sum(&self, other: &GluedSheaf) -> GluedSheaf {
        GluedSheaf::raw(
            self.field,
            Arc::new(self.m0.direct_sum(&other.m0)),
            Arc::new(self.m1.direct_sum(&other.m1)),
            self.glue.block_diag(&other.glue),
            self.glue_inv.block_diag(&other.glue_inv),
        )
    }

    pub fn direct_sum_all(field: Field, parts: &[GluedSheaf]) -> GluedSheaf {
        parts.iter().fold(GluedSheaf::zero(field), |acc, p| acc.direct_sum(p))
    }

    /// `M(n) = M ⊗ O(n)`: same chart modules, glue multiplied by `t^n`.
    pub fn twist(&self, n: i64) -> GluedSheaf {
        let tn = Laurent::t_pow(self.field, n);
        let tmn = Laurent::t_pow(self.field, -n);
        let out = GluedSheaf::raw(self.field, self.m0.clone(), self.m1.clone(), self.glue.scale(&tn), self.glue_inv.scale(&tmn));
        let _ = out.normal.set(Arc::new(self.normalized().twisted(n)));
        out
    }

    /// `Some(d)` when this is literally `O(d)`: one free generator per chart
    /// glued by `t^d`.
    pub fn as_line(&self) -> Option<i64> {
        let free1 = |m: &ChartModule| m.gens() == 1 && m.presentation().cols() == 0;
        if !free1(&self.m0) || !free1(&self.m1) {
            return None;
        }
        let g = self.glue.get(0, 0);
        (g.is_monomial() && g.lead().is_one()).then(|| g.min_exp())
    }

    /// Chartwise tensor product with the Kronecker product of the glues.
    /// Tensoring with a line bundle is a twist and keeps the other factor's
    /// generators.
    pub fn tensor(&self, other: &GluedSheaf) -> GluedSheaf {
        if let Some(d) = other.as_line() {
            return self.twist(d);
        }
        if let Some(d) = self.as_line() {
            return other.twist(d);
        }
        GluedSheaf::raw(
            self.field,
            Arc::new(tensor(&self.m0, &other.m0)),
            Arc::new(tensor(&self.m1, &other.m1)),
            self.glue.kron(&other.glue),
            self.glue_inv.kron(&other.glue_inv),
        )
    }

    /// Text form `glued(n0, [[relations]], n1, [[relations]], [[glue]])`.
    pub fn render(&self) -> String {
        format!(
            "glued({}, {}, {}, {}, {})",
            self.m0.gens(),
            render_poly_matrix(self.m0.presentation(), "t"),
            self.m1.gens(),
            render_poly_matrix(self.m1.presentation(), "s"),
            render_laurent_matrix(&self.glue)
        )
    }
}

pub fn twist(m: &GluedSheaf, n: i64) -> GluedSheaf {
    m.twist(n)
}

pub fn tensor_sheaf(m: &GluedSheaf, n: &GluedSheaf) -> GluedSheaf {
    m.tensor(n)
}

pub(crate) fn render_poly_matrix(m: &PolyMat, var: &str) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("[{}]", (0..m.cols()).map(|j| m.get(i, j).render(var)).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

pub(crate) fn render_laurent_matrix(m: &LaurentMat) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("[{}]", (0..m.cols()).map(|j| m.get(i, j).render("t")).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

impl fmt::Display for GluedSheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A morphism of glued sheaves given by chart matrices on generators.
#[derive(Clone, Debug)]
pub struct SheafMap {
    pub source: Arc<GluedSheaf>,
    pub target: Arc<GluedSheaf>,
    pub f0: PolyMat,
    pub f1: PolyMat,
}

impl SheafMap {
    /// Certifies both chart maps and the overlap compatibility
    /// `f0 · glue_source = glue_target · f1`.
    pub fn new(source: Arc<GluedSheaf>, target: Arc<GluedSheaf>, f0: PolyMat, f1: PolyMat) -> Result<SheafMap> {
        PidMap::new(source.m0.clone(), target.m0.clone(), f0.clone())?;
        PidMap::new(source.m1.clone(), target.m1.clone(), f1.clone())?;
        let lhs = f0.convert(Laurent::from_poly).mul(&source.glue);
        let rhs = target.glue.mul(&f1.convert(Laurent::from_inverse_poly));
        let l0 = localize(&target.m0);
        if !l0.is_zero_element(&lhs.sub(&rhs)) {
            return Err(Error::IllDefinedMap);
        }
        Ok(SheafMap { source, target, f0, f1 })
    }

    pub(crate) fn new_unchecked(source: Arc<GluedSheaf>, target: Arc<GluedSheaf>, f0: PolyMat, f1: PolyMat) -> SheafMap {
        SheafMap { source, target, f0, f1 }
    }

    pub fn identity(m: Arc<GluedSheaf>) -> SheafMap {
        let f = m.field;
        let (n0, n1) = (m.m0.gens(), m.m1.gens());
        SheafMap { source: m.clone(), target: m, f0: PolyMat::identity(f, n0), f1: PolyMat::identity(f, n1) }
    }

    pub fn zero(source: Arc<GluedSheaf>, target: Arc<GluedSheaf>) -> SheafMap {
        let f = source.field;
        let f0 = PolyMat::zeros(f, target.m0.gens(), source.m0.gens());
        let f1 = PolyMat::zeros(f, target.m1.gens(), source.m1.gens());
        SheafMap { source, target, f0, f1 }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &SheafMap) -> SheafMap {
        SheafMap {
            source: first.source.clone(),
            target: self.target.clone(),
            f0: self.f0.mul(&first.f0),
            f1: self.f1.mul(&first.f1),
        }
    }

    pub fn chart_map(&self, i: usize) -> PidMap<Poly> {
        if i == 0 {
            PidMap::new_unchecked(self.source.m0.clone(), self.target.m0.clone(), self.f0.clone())
        } else {
            PidMap::new_unchecked(self.source.m1.clone(), self.target.m1.clone(), self.f1.clone())
        }
    }

    /// Whether both chart maps vanish.
    pub fn is_zero(&self) -> bool {
        self.chart_map(0).is_zero() && self.chart_map(1).is_zero()
    }

    /// Equality as morphisms.
    pub fn equals(&self, other: &SheafMap) -> bool {
        self.chart_map(0).equals(&other.chart_map(0)) && self.chart_map(1).equals(&other.chart_map(1))
    }

    /// Inverse of an isomorphism, chart by chart.
    pub fn inverse(&self) -> Result<SheafMap> {
        let g0 = self.chart_map(0).inverse()?;
        let g1 = self.chart_map(1).inverse()?;
        Ok(SheafMap { source: self.target.clone(), target: self.source.clone(), f0: g0.matrix, f1: g1.matrix })
    }

    /// `f ⊕ g`.
    pub fn direct_sum(&self, other: &SheafMap) -> SheafMap {
        SheafMap {
            source: Arc::new(self.source.direct_sum(&other.source)),
            target: Arc::new(self.target.direct_sum(&other.target)),
            f0: self.f0.block_diag(&other.f0),
            f1: self.f1.block_diag(&other.f1),
        }
    }

    /// `f ⊗ id_G`, with source and target tensored by `g`.
    pub fn tensor_identity(&self, g: &GluedSheaf) -> SheafMap {
        let f = self.source.field;
        SheafMap {
            source: Arc::new(self.source.tensor(g)),
            target: Arc::new(self.target.tensor(g)),
            f0: self.f0.kron(&PolyMat::identity(f, g.m0.gens())),
            f1: self.f1.kron(&PolyMat::identity(f, g.m1.gens())),
        }
    }

    /// `f(n)`: same chart matrices between the twisted sheaves.
    pub fn twist(&self, n: i64) -> SheafMap {
        SheafMap {
            source: Arc::new(self.source.twist(n)),
            target: Arc::new(self.target.twist(n)),
            f0: self.f0.clone(),
            f1: self.f1.clone(),
        }
    }

    /// Multiplication by the form `x₀^a x₁^b` from `O(n)` to `O(n + a + b)`.
    pub fn monomial(field: Field, n: i64, a: u32, b: u32) -> SheafMap {
        let src = Arc::new(GluedSheaf::line(field, n));
        let tgt = Arc::new(GluedSheaf::line(field, n + a as i64 + b as i64));
        let f0 = PolyMat::from_vec(field, 1, 1, vec![Poly::monomial(field.one(), b as usize)]);
        let f1 = PolyMat::from_vec(field, 1, 1, vec![Poly::monomial(field.one(), a as usize)]);
        SheafMap { source: src, target: tgt, f0, f1 }
    }

    /// Multiplication by a binary form `Σ c_j x₀^(e-j) x₁^j` (coefficients
    /// `c_0..=c_e`) from `O(n)` to `O(n + e)`.
    pub fn form(field: Field, n: i64, coeffs: &[crate::Scalar]) -> SheafMap {
        let e = coeffs.len().saturating_sub(1);
        let src = Arc::new(GluedSheaf::line(field, n));
        let tgt = Arc::new(GluedSheaf::line(field, n + e as i64));
        let p0 = Poly::new(field, coeffs.to_vec());
        let p1 = Poly::new(field, coeffs.iter().rev().cloned().collect());
        SheafMap {
            source: src,
            target: tgt,
            f0: PolyMat::from_vec(field, 1, 1, vec![p0]),
            f1: PolyMat::from_vec(field, 1, 1, vec![p1]),
        }
    }
}
