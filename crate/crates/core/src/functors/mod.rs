//! Functors `Qcoh P¹ → Vect_k` built from two kinds of atoms and finite
//! direct sums:
//!
//! * `TensorWith(G)`: `M ↦ H⁰(P¹, M ⊗ G)`,
//! * `H1Twist(i)`: `M ↦ H¹(P¹, M(i))`.
//!
//! Values are concatenated atom by atom, so the atom order is part of the
//! functor. On top of evaluation this module computes the chart bimodules
//! and the Watts sheaf `W(F)`, the transformation `Γ_F: F → − ⊗ W(F)`, and
//! the classification of totally global functors.

mod affine;
mod chart;
mod gamma;
mod probes;
mod tg;
mod watts;

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub use affine::{affine_roundtrip, watts_affine, AffineRing, Bimodule, TensorFunctor, WattsData};
pub use chart::{chart_bimodule, chart_system, ChartSystem};
pub use gamma::{gamma, gamma_kernel_dims, gamma_with_presentation, GammaTable};
pub use probes::{right_exactness_probe, tangent_surjection, ProbeReport};
pub use tg::{classify_tg, classify_tg_table, is_totally_global, TgClassification, TgReport, TG_DEPTH};
pub use watts::{w_left_exactness_check, watts_construction, watts_map, watts_sheaf, WattsSheaf};

use crate::error::Result;
use crate::exactfield::{Field, Mat};
use crate::sheafp1::{cech_h0, cech_h1, h0_map, h1_map, GluedSheaf, SheafMap};

#[derive(Clone, Debug)]
pub enum Atom {
    TensorWith(Arc<GluedSheaf>),
    H1Twist(i64),
}

impl Atom {
    pub fn is_totally_global(&self) -> bool {
        matches!(self, Atom::H1Twist(_))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::TensorWith(g) => write!(f, "tensor({})", g.render()),
            Atom::H1Twist(i) => write!(f, "h1twist({i})"),
        }
    }
}

/// A finite direct sum of atoms over a base field; the empty sum is the
/// zero functor.
#[derive(Clone, Debug)]
pub struct FunctorExpr {
    pub field: Field,
    pub atoms: Vec<Atom>,
}

impl FunctorExpr {
    pub fn new(field: Field, atoms: Vec<Atom>) -> FunctorExpr {
        FunctorExpr { field, atoms }
    }

    pub fn zero(field: Field) -> FunctorExpr {
        FunctorExpr { field, atoms: vec![] }
    }

    pub fn tensor(g: GluedSheaf) -> FunctorExpr {
        FunctorExpr { field: g.field(), atoms: vec![Atom::TensorWith(Arc::new(g))] }
    }

    pub fn h1twist(field: Field, i: i64) -> FunctorExpr {
        FunctorExpr { field, atoms: vec![Atom::H1Twist(i)] }
    }

    /// Direct sum, atoms of `self` first.
    pub fn plus(&self, other: &FunctorExpr) -> FunctorExpr {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        FunctorExpr { field: self.field, atoms }
    }

    /// `self ⊕ … ⊕ self`, `k` copies.
    pub fn times(&self, k: usize) -> FunctorExpr {
        let atoms = (0..k).flat_map(|_| self.atoms.iter().cloned()).collect();
        FunctorExpr { field: self.field, atoms }
    }

    pub fn is_zero_expr(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The `H1Twist` atoms only.
    pub fn tg_part(&self) -> FunctorExpr {
        FunctorExpr { field: self.field, atoms: self.atoms.iter().filter(|a| a.is_totally_global()).cloned().collect() }
    }

    /// The `TensorWith` atoms only.
    pub fn tensor_part(&self) -> FunctorExpr {
        FunctorExpr { field: self.field, atoms: self.atoms.iter().filter(|a| !a.is_totally_global()).cloned().collect() }
    }

    pub fn render(&self) -> String {
        if self.atoms.is_empty() {
            return "zero".to_string();
        }
        self.atoms.iter().map(ToString::to_string).collect::<Vec<_>>().join(" + ")
    }
}

impl fmt::Display for FunctorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// `F(M)`: its dimension and a label per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorValue {
    pub dim: usize,
    /// `(atom index, label)`: `h0[k]` for the `k`-th section, `h1[i:t^-j]`
    /// for the class of `t^(-j)` in bundle coordinate `i`.
    pub basis_labels: Vec<(usize, String)>,
}

pub fn eval_obj(f: &FunctorExpr, m: &GluedSheaf) -> Result<FunctorValue> {
    let mut labels = Vec::new();
    for (k, atom) in f.atoms.iter().enumerate() {
        match atom {
            Atom::TensorWith(g) => {
                let h = cech_h0(&m.tensor(g));
                labels.extend((0..h.dim).map(|j| (k, format!("h0[{j}]"))));
            }
            Atom::H1Twist(i) => {
                let h = cech_h1(&m.twist(*i))?;
                labels.extend(h.basis.iter().map(|(c, j)| (k, format!("h1[{c}:t^-{j}]"))));
            }
        }
    }
    Ok(FunctorValue { dim: labels.len(), basis_labels: labels })
}

/// `F(f)` in the bases of `eval_obj`, block diagonal over the atoms.
pub fn eval_mor(f: &FunctorExpr, map: &SheafMap) -> Result<Mat> {
    let field = map.source.field();
    let mut blocks = Vec::with_capacity(f.atoms.len());
    for atom in &f.atoms {
        blocks.push(match atom {
            Atom::TensorWith(g) => h0_map(&map.tensor_identity(g))?,
            Atom::H1Twist(i) => h1_map(&map.twist(*i))?,
        });
    }
    Ok(Mat::block_diag_all(field, &blocks))
}

/// `F(f_j)` for maps into a common target, computing the cohomology of the
/// target once per atom.
pub(crate) fn eval_mors_into(f: &FunctorExpr, maps: &[SheafMap]) -> Result<Vec<Mat>> {
    let Some(first) = maps.first() else { return Ok(vec![]) };
    let field = first.target.field();
    let mut blocks: Vec<Vec<Mat>> = vec![Vec::new(); maps.len()];
    for atom in &f.atoms {
        match atom {
            Atom::TensorWith(g) => {
                let tgt = Arc::new(first.target.tensor(g));
                for (j, m) in maps.iter().enumerate() {
                    let t = m.tensor_identity(g);
                    blocks[j].push(h0_map(&SheafMap::new_unchecked(t.source, tgt.clone(), t.f0, t.f1))?);
                }
            }
            Atom::H1Twist(i) => {
                let tgt = Arc::new(first.target.twist(*i));
                for (j, m) in maps.iter().enumerate() {
                    let t = m.twist(*i);
                    blocks[j].push(h1_map(&SheafMap::new_unchecked(t.source, tgt.clone(), t.f0, t.f1))?);
                }
            }
        }
    }
    Ok(blocks.iter().map(|b| Mat::block_diag_all(field, b)).collect())
}

/// Evaluation on line bundles `O(n)` and on monomial maps between them,
/// reusing the twisted sheaves (and their cohomology) across calls.
pub(crate) struct LineEvaluator<'a> {
    f: &'a FunctorExpr,
    field: Field,
    cache: RefCell<HashMap<(usize, i64), Arc<GluedSheaf>>>,
}

impl<'a> LineEvaluator<'a> {
    pub(crate) fn new(f: &'a FunctorExpr) -> LineEvaluator<'a> {
        LineEvaluator { f, field: f.field, cache: RefCell::new(HashMap::new()) }
    }

    pub(crate) fn field(&self) -> Field {
        self.field
    }

    pub(crate) fn functor(&self) -> &FunctorExpr {
        self.f
    }

    /// The sheaf whose cohomology gives atom `k` on `O(n)`.
    pub(crate) fn sheaf(&self, k: usize, n: i64) -> Arc<GluedSheaf> {
        if let Some(s) = self.cache.borrow().get(&(k, n)) {
            return s.clone();
        }
        let s = Arc::new(match &self.f.atoms[k] {
            Atom::TensorWith(g) => g.twist(n),
            Atom::H1Twist(i) => GluedSheaf::line(self.field, n + i),
        });
        self.cache.borrow_mut().insert((k, n), s.clone());
        s
    }

    pub(crate) fn dim(&self, n: i64) -> Result<usize> {
        let mut d = 0;
        for k in 0..self.f.atoms.len() {
            d += self.atom_dim(k, n)?;
        }
        Ok(d)
    }

    pub(crate) fn atom_dim(&self, k: usize, n: i64) -> Result<usize> {
        let s = self.sheaf(k, n);
        Ok(match &self.f.atoms[k] {
            Atom::TensorWith(_) => cech_h0(&s).dim,
            Atom::H1Twist(_) => cech_h1(&s)?.dim,
        })
    }

    /// `F(x₀^a x₁^b): F(O(n)) → F(O(n + a + b))`.
    pub(crate) fn monomial(&self, n: i64, a: u32, b: u32) -> Result<Mat> {
        let mut blocks = Vec::new();
        for k in 0..self.f.atoms.len() {
            blocks.push(self.atom_monomial(k, n, a, b)?);
        }
        Ok(Mat::block_diag_all(self.field, &blocks))
    }

    pub(crate) fn atom_monomial(&self, k: usize, n: i64, a: u32, b: u32) -> Result<Mat> {
        let e = a as i64 + b as i64;
        let src = self.sheaf(k, n);
        let tgt = self.sheaf(k, n + e);
        let g = src.m0().gens();
        let g1 = src.m1().gens();
        let x = crate::polypid::Poly::monomial(self.field.one(), b as usize);
        let y = crate::polypid::Poly::monomial(self.field.one(), a as usize);
        let f0 = crate::polypid::PolyMat::identity(self.field, g).scale(&x);
        let f1 = crate::polypid::PolyMat::identity(self.field, g1).scale(&y);
        let map = SheafMap::new_unchecked(src, tgt, f0, f1);
        match &self.f.atoms[k] {
            Atom::TensorWith(_) => h0_map(&map),
            Atom::H1Twist(_) => h1_map(&map),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rank;

    const Q: Field = Field::Rational;

    #[test]
    fn evaluation_examples() {
        let f = FunctorExpr::h1twist(Q, 0);
        assert_eq!(eval_obj(&f, &GluedSheaf::line(Q, -2)).unwrap().dim, 1);
        let f = FunctorExpr::tensor(GluedSheaf::line(Q, 1));
        assert_eq!(eval_obj(&f, &GluedSheaf::line(Q, 0)).unwrap().dim, 2);
        assert_eq!(eval_obj(&FunctorExpr::zero(Q), &GluedSheaf::line(Q, 4)).unwrap().dim, 0);
    }

    #[test]
    fn morphism_examples() {
        let f = FunctorExpr::h1twist(Q, 0);
        let x0 = SheafMap::monomial(Q, -3, 1, 0);
        let m = eval_mor(&f, &x0).unwrap();
        assert_eq!((m.rows(), m.cols(), rank(&m)), (1, 2, 1));
        let g = FunctorExpr::tensor(GluedSheaf::line(Q, 2)).plus(&f);
        let id = SheafMap::identity(Arc::new(GluedSheaf::line(Q, -1)));
        let m = eval_mor(&g, &id).unwrap();
        assert!(m.is_identity());
        let z = SheafMap::zero(Arc::new(GluedSheaf::line(Q, 0)), Arc::new(GluedSheaf::line(Q, 1)));
        assert!(eval_mor(&g, &z).unwrap().is_zero());
    }

    #[test]
    fn line_evaluator_matches_eval_mor() {
        let f = FunctorExpr::tensor(GluedSheaf::line(Q, 1)).plus(&FunctorExpr::h1twist(Q, -1));
        let ev = LineEvaluator::new(&f);
        for n in -3..2 {
            let m = ev.monomial(n, 1, 1).unwrap();
            let direct = eval_mor(&f, &SheafMap::monomial(Q, n, 1, 1)).unwrap();
            assert_eq!(m, direct);
            assert_eq!(ev.dim(n).unwrap(), eval_obj(&f, &GluedSheaf::line(Q, n)).unwrap().dim);
        }
    }
}
