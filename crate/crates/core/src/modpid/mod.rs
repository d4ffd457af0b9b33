//! Finitely presented modules over a Euclidean chart ring: `k[t]`, `k[s]`
//! or the overlap ring `k[t, t⁻¹]`.
//!
//! A module is a generator count plus a presentation matrix whose columns
//! are relations. The Smith form of the presentation gives the normal form
//! `R/(d₁) ⊕ … ⊕ R/(d_m) ⊕ R^r` together with coordinate changes in both
//! directions, so elements and maps can be compared exactly.

mod ops;

use std::sync::Arc;

pub use ops::{cokernel, hom, homology, image, kernel, localize, localize_chart1, localize_map, tensor};

use crate::error::{Error, Result};
use crate::exactfield::{Field, Matrix};
use crate::polypid::{smith_normal_form, Euclidean, Laurent, Poly};

/// Invariant-factor normal form with coordinate changes.
///
/// Normal coordinates list the torsion summands first (in divisibility
/// order) and then the free summands. `to_normal · from_normal = I` and every
/// generator vector `x` equals `from_normal · to_normal · x` modulo the
/// relations.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm<R> {
    pub free_rank: usize,
    pub torsion: Vec<R>,
    pub to_normal: Matrix<R>,
    pub from_normal: Matrix<R>,
}

impl<R: Euclidean> NormalForm<R> {
    pub fn len(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PidModule<R> {
    field: Field,
    gens: usize,
    presentation: Matrix<R>,
    normal: NormalForm<R>,
}

pub type ChartModule = PidModule<Poly>;
pub type OverlapModule = PidModule<Laurent>;

impl<R: Euclidean> PidModule<R> {
    /// Module on `gens` generators with the columns of `pres` as relations.
    /// Zero columns are dropped.
    pub fn from_presentation(field: Field, gens: usize, pres: &Matrix<R>) -> PidModule<R> {
        assert_eq!(pres.rows(), gens, "presentation rows must match generator count");
        let presentation = pres.select_cols(&pres.nonzero_cols());
        let s = smith_normal_form(&presentation);
        let diag = s.diagonal();
        let units = diag.iter().take_while(|d| d.is_unit()).count();
        let rank = diag.len();
        let idx: Vec<usize> = (units..gens).collect();
        let normal = NormalForm {
            free_rank: gens - rank,
            torsion: diag[units..].to_vec(),
            to_normal: s.u.select_rows(&idx),
            from_normal: s.u_inv.select_cols(&idx),
        };
        PidModule { field, gens, presentation, normal }
    }

    /// Trusts `normal` to be a normal form of `presentation`.
    pub(crate) fn with_normal_form(field: Field, gens: usize, presentation: Matrix<R>, normal: NormalForm<R>) -> PidModule<R> {
        PidModule { field, gens, presentation, normal }
    }

    pub fn free(field: Field, n: usize) -> PidModule<R> {
        PidModule::from_presentation(field, n, &Matrix::zeros(field, n, 0))
    }

    pub fn zero(field: Field) -> PidModule<R> {
        PidModule::free(field, 0)
    }

    /// `R/(d)`.
    pub fn cyclic(d: &R) -> PidModule<R> {
        let field = d.field();
        PidModule::from_presentation(field, 1, &Matrix::from_vec(field, 1, 1, vec![d.clone()]))
    }

    /// `⊕ R/(dᵢ) ⊕ R^free`, presented diagonally on `len + free` generators.
    pub fn from_invariants(field: Field, torsion: &[R], free: usize) -> PidModule<R> {
        let n = torsion.len() + free;
        let mut p = Matrix::zeros(field, n, torsion.len());
        for (i, d) in torsion.iter().enumerate() {
            p.set(i, i, d.clone());
        }
        PidModule::from_presentation(field, n, &p)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn presentation(&self) -> &Matrix<R> {
        &self.presentation
    }

    pub fn normal_form(&self) -> &NormalForm<R> {
        &self.normal
    }

    pub fn free_rank(&self) -> usize {
        self.normal.free_rank
    }

    pub fn torsion(&self) -> &[R] {
        &self.normal.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.normal.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.normal.free_rank == 0
    }

    /// Same isomorphism class.
    pub fn isomorphic(&self, other: &PidModule<R>) -> bool {
        self.normal.free_rank == other.normal.free_rank && self.normal.torsion == other.normal.torsion
    }

    /// Normal coordinates of the columns of `x` (generator coordinates), with
    /// torsion coordinates reduced modulo their invariant factor.
    pub fn normal_coords(&self, x: &Matrix<R>) -> Matrix<R> {
        let mut y = self.normal.to_normal.mul(x);
        for (i, d) in self.normal.torsion.iter().enumerate() {
            for j in 0..y.cols() {
                let r = y.get(i, j).div_rem(d).1;
                y.set(i, j, r);
            }
        }
        y
    }

    /// Whether every column of `x` is zero in the module.
    pub fn is_zero_element(&self, x: &Matrix<R>) -> bool {
        self.normal_coords(x).is_zero()
    }

    /// Canonical representatives: `from_normal · normal_coords(x)`.
    pub fn reduce(&self, x: &Matrix<R>) -> Matrix<R> {
        self.normal.from_normal.mul(&self.normal_coords(x))
    }

    /// The module `⊕ R/(dᵢ) ⊕ R^r` on normal generators, with mutually
    /// inverse isomorphisms to and from `self`.
    pub fn minimal(self: &Arc<Self>) -> (Arc<PidModule<R>>, PidMap<R>, PidMap<R>) {
        let m = Arc::new(PidModule::from_invariants(self.field, &self.normal.torsion, self.normal.free_rank));
        let to_self = PidMap::new_unchecked(m.clone(), self.clone(), self.normal.from_normal.clone());
        let from_self = PidMap::new_unchecked(self.clone(), m.clone(), self.normal.to_normal.clone());
        (m, to_self, from_self)
    }

    /// Direct sum with block-diagonal presentation.
    pub fn direct_sum(&self, other: &PidModule<R>) -> PidModule<R> {
        PidModule::from_presentation(self.field, self.gens + other.gens, &self.presentation.block_diag(&other.presentation))
    }
}

impl PidModule<Poly> {
    /// Dimension over the base field, `None` if there is a free summand.
    pub fn k_dim(&self) -> Option<usize> {
        self.is_torsion().then(|| self.normal.torsion.iter().map(|d| d.deg() as usize).sum())
    }
}

/// A module homomorphism given on generators: column `j` of `matrix` is the
/// image of generator `j` of the source, in target generator coordinates.
#[derive(Clone, Debug)]
pub struct PidMap<R> {
    pub source: Arc<PidModule<R>>,
    pub target: Arc<PidModule<R>>,
    pub matrix: Matrix<R>,
}

impl<R: Euclidean> PidMap<R> {
    /// Certifies that relations map into relations.
    pub fn new(source: Arc<PidModule<R>>, target: Arc<PidModule<R>>, matrix: Matrix<R>) -> Result<PidMap<R>> {
        if matrix.rows() != target.gens || matrix.cols() != source.gens {
            return Err(Error::Shape(format!(
                "map matrix {}x{} between modules on {} and {} generators",
                matrix.rows(),
                matrix.cols(),
                source.gens,
                target.gens
            )));
        }
        if !target.is_zero_element(&matrix.mul(&source.presentation)) {
            return Err(Error::IllDefinedMap);
        }
        Ok(PidMap { source, target, matrix })
    }

    pub(crate) fn new_unchecked(source: Arc<PidModule<R>>, target: Arc<PidModule<R>>, matrix: Matrix<R>) -> PidMap<R> {
        debug_assert!(target.is_zero_element(&matrix.mul(&source.presentation)));
        PidMap { source, target, matrix }
    }

    pub fn identity(m: Arc<PidModule<R>>) -> PidMap<R> {
        let n = m.gens;
        let f = m.field;
        PidMap { source: m.clone(), target: m, matrix: Matrix::identity(f, n) }
    }

    pub fn zero(source: Arc<PidModule<R>>, target: Arc<PidModule<R>>) -> PidMap<R> {
        let matrix = Matrix::zeros(source.field, target.gens, source.gens);
        PidMap { source, target, matrix }
    }

    pub fn compose(&self, first: &PidMap<R>) -> PidMap<R> {
        assert_eq!(first.target.gens, self.source.gens, "composition shape mismatch");
        PidMap { source: first.source.clone(), target: self.target.clone(), matrix: self.matrix.mul(&first.matrix) }
    }

    pub fn is_zero(&self) -> bool {
        self.target.is_zero_element(&self.matrix)
    }

    /// Equality as homomorphisms (matrices may differ by relations).
    pub fn equals(&self, other: &PidMap<R>) -> bool {
        self.target.is_zero_element(&self.matrix.sub(&other.matrix))
    }

    pub fn is_injective(&self) -> bool {
        kernel(self).0.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        cokernel(self).0.is_zero()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<PidMap<R>> {
        if !self.is_iso() {
            return Err(Error::NotInvertible);
        }
        let f = self.source.field;
        let b = self.matrix.hstack(&self.target.presentation);
        let rhs = Matrix::identity(f, self.target.gens);
        let z = pid_solve(&b, &rhs).ok_or_else(|| Error::Internal("iso has no preimages".into()))?;
        let m = z.submatrix(0, self.source.gens, 0, self.target.gens);
        Ok(PidMap::new_unchecked(self.target.clone(), self.source.clone(), m))
    }

    /// The matrix of the map in normal coordinates of source and target.
    pub fn normal_matrix(&self) -> Matrix<R> {
        self.target.normal_coords(&self.matrix.mul(&self.source.normal.from_normal))
    }

    /// Preimage of elements in the image: columns `x` with `f x = y`.
    pub fn lift(&self, y: &Matrix<R>) -> Option<Matrix<R>> {
        let b = self.matrix.hstack(&self.target.presentation);
        let z = pid_solve(&b, y)?;
        Some(z.submatrix(0, self.source.gens, 0, y.cols()))
    }
}

/// Generators of `{z : b z = 0}` over the ring, as columns.
pub fn syzygies<R: Euclidean>(b: &Matrix<R>) -> Matrix<R> {
    let s = smith_normal_form(b);
    let r = s.rank();
    let idx: Vec<usize> = (r..b.cols()).collect();
    s.v.select_cols(&idx)
}

/// Some `z` with `b z = rhs` over the ring, or `None`.
pub fn pid_solve<R: Euclidean>(b: &Matrix<R>, rhs: &Matrix<R>) -> Option<Matrix<R>> {
    let f = b.field();
    let s = smith_normal_form(b);
    let c = s.u.mul(rhs);
    let diag = s.diagonal();
    let mut zp = Matrix::zeros(f, b.cols(), rhs.cols());
    for j in 0..rhs.cols() {
        for i in 0..b.rows() {
            let v = c.get(i, j);
            if i < diag.len() {
                let (q, r) = v.div_rem(&diag[i]);
                if !r.is_zero() {
                    return None;
                }
                zp.set(i, j, q);
            } else if !v.is_zero() {
                return None;
            }
        }
    }
    Some(s.v.mul(&zp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::RingElem;

    const Q: Field = Field::Rational;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(Q, c)
    }

    #[test]
    fn presentation_examples() {
        let m: ChartModule = PidModule::from_presentation(Q, 2, &Matrix::zeros(Q, 2, 0));
        assert_eq!(m.free_rank(), 2);
        let m = PidModule::cyclic(&p(&[0, 1]));
        assert_eq!(m.torsion(), &[p(&[0, 1])]);
        assert_eq!(m.free_rank(), 0);
        let t = p(&[0, 1]);
        let pres = Matrix::from_rows(Q, vec![vec![t.clone(), t.clone()], vec![Poly::zero(Q), t.clone()]]);
        let m = PidModule::from_presentation(Q, 2, &pres);
        assert_eq!(m.torsion(), &[t.clone(), t]);
    }

    #[test]
    fn zero_columns_dropped() {
        let pres = Matrix::from_rows(Q, vec![vec![Poly::zero(Q), p(&[1, 1])]]);
        let m = PidModule::from_presentation(Q, 1, &pres);
        assert_eq!(m.presentation().cols(), 1);
        assert_eq!(m.k_dim(), Some(1));
    }

    #[test]
    fn normal_coordinates_round_trip() {
        let pres = Matrix::from_rows(Q, vec![vec![p(&[0, 1]), p(&[1])], vec![p(&[0, 0, 1]), p(&[0, 1])]]);
        let m = PidModule::from_presentation(Q, 2, &pres);
        let nf = m.normal_form();
        assert!(nf.to_normal.mul(&nf.from_normal).is_identity());
        let x = Matrix::from_rows(Q, vec![vec![p(&[3, 1])], vec![p(&[0, 2])]]);
        let back = m.reduce(&x);
        assert!(m.is_zero_element(&back.sub(&x)));
    }

    #[test]
    fn ill_defined_map_rejected() {
        let src = Arc::new(PidModule::cyclic(&p(&[0, 1])));
        let tgt = Arc::new(PidModule::free(Q, 1));
        let err = PidMap::new(src, tgt, Matrix::identity(Q, 1)).unwrap_err();
        assert_eq!(err, Error::IllDefinedMap);
    }

    #[test]
    fn solving_over_the_ring() {
        let b = Matrix::from_rows(Q, vec![vec![p(&[0, 1]), p(&[1, 1])]]);
        let rhs = Matrix::from_rows(Q, vec![vec![p(&[1])]]);
        let z = pid_solve(&b, &rhs).unwrap();
        assert_eq!(b.mul(&z), rhs);
        let b = Matrix::from_rows(Q, vec![vec![p(&[0, 1])]]);
        assert!(pid_solve(&b, &rhs).is_none());
    }
}
