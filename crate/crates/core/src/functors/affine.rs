//! The affine case: functors `Mod R → Mod S` for `R = k[t]` or `k[t]/(f)`
//! and `S = k[u]`, represented by bimodules.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactfield::Field;
use crate::modpid::{PidMap, PidModule};
use crate::polypid::{Poly, PolyMat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineRing {
    Polynomial,
    Quotient(Poly),
}

impl AffineRing {
    /// `R` as a module over itself, seen as a `k[t]`-module.
    pub fn regular_module(&self, field: Field) -> PidModule<Poly> {
        match self {
            AffineRing::Polynomial => PidModule::free(field, 1),
            AffineRing::Quotient(f) => PidModule::cyclic(f),
        }
    }

    fn relation(&self) -> Option<&Poly> {
        match self {
            AffineRing::Polynomial => None,
            AffineRing::Quotient(f) => Some(f),
        }
    }
}

/// `p(T)` for a square polynomial matrix `T`.
fn eval_at(p: &Poly, t: &PolyMat) -> PolyMat {
    let field = t.field();
    let n = t.rows();
    let mut acc = PolyMat::zeros(field, n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(t).add(&PolyMat::identity(field, n).scale(&Poly::constant(c.clone())));
    }
    acc
}

/// An `R`–`S` bimodule: an `S`-module with the action of `t ∈ R` as an
/// `S`-linear endomorphism.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub ring: AffineRing,
    pub module: Arc<PidModule<Poly>>,
    pub action: PidMap<Poly>,
}

impl Bimodule {
    /// Certifies that `action` is `S`-linear and kills the relation of `R`.
    pub fn new(ring: AffineRing, module: Arc<PidModule<Poly>>, action: PolyMat) -> Result<Bimodule> {
        let action = PidMap::new(module.clone(), module.clone(), action).map_err(|_| Error::NotCentral)?;
        if let Some(f) = ring.relation() {
            let ft = eval_at(f, &action.matrix);
            if !PidMap::new_unchecked(module.clone(), module.clone(), ft).is_zero() {
                return Err(Error::NotCentral);
            }
        }
        Ok(Bimodule { ring, module, action })
    }

    /// `R` itself.
    pub fn regular(field: Field, ring: AffineRing) -> Result<Bimodule> {
        let m = Arc::new(ring.regular_module(field));
        let t = PolyMat::from_vec(field, 1, 1, vec![Poly::var(field)]);
        Bimodule::new(ring, m, t)
    }
}

/// `M ↦ M ⊗_R B`.
#[derive(Clone, Debug)]
pub struct TensorFunctor {
    pub bimodule: Bimodule,
}

impl TensorFunctor {
    pub fn new(bimodule: Bimodule) -> TensorFunctor {
        TensorFunctor { bimodule }
    }

    /// Block matrix `A(T_B)` for a matrix `A` over `R`.
    fn substitute(&self, a: &PolyMat) -> PolyMat {
        let b = &self.bimodule;
        let field = b.module.field();
        let g = b.module.gens();
        let mut out = PolyMat::zeros(field, a.rows() * g, a.cols() * g);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                out.paste(i * g, j * g, &eval_at(a.get(i, j), &b.action.matrix));
            }
        }
        out
    }

    /// `M ⊗_R B` for an `R`-module given by a `k[t]`-presentation.
    pub fn apply(&self, m: &PidModule<Poly>) -> PidModule<Poly> {
        let b = &self.bimodule;
        let field = b.module.field();
        let gens = m.gens();
        let own = PolyMat::identity(field, gens).kron(b.module.presentation());
        let pres = own.hstack(&self.substitute(m.presentation()));
        PidModule::from_presentation(field, gens * b.module.gens(), &pres)
    }

    /// `A ⊗ B` for an `R`-linear map given on generators.
    pub fn apply_map(&self, a: &PidMap<Poly>) -> Result<PidMap<Poly>> {
        let src = Arc::new(self.apply(&a.source));
        let tgt = Arc::new(self.apply(&a.target));
        PidMap::new(src, tgt, self.substitute(&a.matrix))
    }
}

/// What the reconstruction needs from a functor: `F(R)` and `F(μ_t)`.
#[derive(Clone, Debug)]
pub struct WattsData {
    pub ring: AffineRing,
    pub value: Arc<PidModule<Poly>>,
    pub action: PolyMat,
}

impl WattsData {
    pub fn of(f: &TensorFunctor) -> Result<WattsData> {
        let ring = f.bimodule.ring.clone();
        let field = f.bimodule.module.field();
        let r = Arc::new(ring.regular_module(field));
        let mu = PidMap::new(r.clone(), r, PolyMat::from_vec(field, 1, 1, vec![Poly::var(field)]))?;
        let image = f.apply_map(&mu)?;
        Ok(WattsData { ring, value: image.source.clone(), action: image.matrix })
    }
}

/// The bimodule `F(R)` with `t` acting by `F(μ_t)`.
pub fn watts_affine(w: &WattsData) -> Result<Bimodule> {
    Bimodule::new(w.ring.clone(), w.value.clone(), w.action.clone())
}

/// Rebuilds `− ⊗_R B`, extracts its bimodule and checks that the identity
/// on generators is an isomorphism of bimodules back to `B`.
pub fn affine_roundtrip(b: &Bimodule) -> Result<bool> {
    let w = WattsData::of(&TensorFunctor::new(b.clone()))?;
    let b2 = watts_affine(&w)?;
    if !b.module.isomorphic(&b2.module) || b.module.gens() != b2.module.gens() {
        return Ok(false);
    }
    let field = b.module.field();
    let id = PolyMat::identity(field, b.module.gens());
    let (Ok(there), Ok(back)) = (
        PidMap::new(b.module.clone(), b2.module.clone(), id.clone()),
        PidMap::new(b2.module.clone(), b.module.clone(), id),
    ) else {
        return Ok(false);
    };
    let identity_both_ways = there.compose(&back).equals(&PidMap::identity(b2.module.clone()))
        && back.compose(&there).equals(&PidMap::identity(b.module.clone()));
    let intertwines = b2.action.compose(&there).equals(&there.compose(&b.action));
    Ok(identity_both_ways && intertwines)
}
