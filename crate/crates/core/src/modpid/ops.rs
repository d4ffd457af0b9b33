use std::sync::Arc;

use super::{syzygies, NormalForm, PidMap, PidModule};
use crate::error::{Error, Result};
use crate::exactfield::Matrix;
use crate::polypid::{Euclidean, Laurent, Poly};

/// Kernel of `f` in minimal form, with its inclusion into the source.
pub fn kernel<R: Euclidean>(f: &PidMap<R>) -> (Arc<PidModule<R>>, PidMap<R>) {
    let field = f.source.field();
    let m = f.source.gens();
    let b = f.matrix.hstack(f.target.presentation());
    let z = syzygies(&b);
    let k = z.submatrix(0, m, 0, z.cols());
    sub_generated(&f.source, &k, field)
}

/// The submodule of `m` generated by the columns of `k`, in minimal form.
fn sub_generated<R: Euclidean>(
    m: &Arc<PidModule<R>>,
    k: &Matrix<R>,
    field: crate::Field,
) -> (Arc<PidModule<R>>, PidMap<R>) {
    let n = k.cols();
    let rel = syzygies(&k.hstack(m.presentation()));
    let rel = rel.submatrix(0, n, 0, rel.cols());
    let sub = Arc::new(PidModule::from_presentation(field, n, &rel));
    let (min, to_sub, _) = sub.minimal();
    let incl = PidMap::new_unchecked(min.clone(), m.clone(), k.mul(&to_sub.matrix));
    (min, incl)
}

/// Cokernel of `f` with the projection from the target.
pub fn cokernel<R: Euclidean>(f: &PidMap<R>) -> (Arc<PidModule<R>>, PidMap<R>) {
    let field = f.target.field();
    let n = f.target.gens();
    let pres = f.target.presentation().hstack(&f.matrix);
    let c = Arc::new(PidModule::from_presentation(field, n, &pres));
    let proj = PidMap::new_unchecked(f.target.clone(), c.clone(), Matrix::identity(field, n));
    (c, proj)
}

/// Image of `f` as a submodule of the target, in minimal form.
pub fn image<R: Euclidean>(f: &PidMap<R>) -> (Arc<PidModule<R>>, PidMap<R>) {
    sub_generated(&f.target, &f.matrix, f.target.field())
}

/// `ker β / im α` for composable `α: A → B`, `β: B → C` with `β α = 0`.
pub fn homology<R: Euclidean>(alpha: &PidMap<R>, beta: &PidMap<R>) -> Result<Arc<PidModule<R>>> {
    if !beta.compose(alpha).is_zero() {
        return Err(Error::NotExact("composite is not zero".into()));
    }
    let field = beta.source.field();
    let (_, incl) = kernel(beta);
    let k = incl.matrix;
    let n = k.cols();
    let b = k.hstack(&alpha.matrix.neg()).hstack(&beta.source.presentation().neg());
    let z = syzygies(&b);
    let rel = z.submatrix(0, n, 0, z.cols());
    let h = Arc::new(PidModule::from_presentation(field, n, &rel));
    Ok(h.minimal().0)
}

/// Tensor product over the ring.
pub fn tensor<R: Euclidean>(a: &PidModule<R>, b: &PidModule<R>) -> PidModule<R> {
    let field = a.field();
    let ia = Matrix::identity(field, a.gens());
    let ib = Matrix::identity(field, b.gens());
    let pres = a.presentation().kron(&ib).hstack(&ia.kron(b.presentation()));
    let pres = pres.select_cols(&pres.nonzero_cols());
    // normal form through the factors' normal forms: the Smith form of the
    // raw Kronecker presentation has far larger coefficients
    let (na, nb) = (a.normal_form(), b.normal_form());
    let ma = PidModule::from_invariants(field, &na.torsion, na.free_rank);
    let mb = PidModule::from_invariants(field, &nb.torsion, nb.free_rank);
    let pk = ma.presentation().kron(&Matrix::identity(field, mb.gens())).hstack(&Matrix::identity(field, ma.gens()).kron(mb.presentation()));
    let k = PidModule::from_presentation(field, ma.gens() * mb.gens(), &pk);
    let nk = k.normal_form();
    let normal = NormalForm {
        free_rank: nk.free_rank,
        torsion: nk.torsion.clone(),
        to_normal: nk.to_normal.mul(&na.to_normal.kron(&nb.to_normal)),
        from_normal: na.from_normal.kron(&nb.from_normal).mul(&nk.from_normal),
    };
    PidModule::with_normal_form(field, a.gens() * b.gens(), pres, normal)
}

/// `Hom(a, b)` computed summand by summand from the normal forms:
/// `Hom(R/d, R/e) = R/gcd(d, e)`, `Hom(R/d, R) = 0`, `Hom(R, N) = N`.
pub fn hom<R: Euclidean>(a: &PidModule<R>, b: &PidModule<R>) -> PidModule<R> {
    let field = a.field();
    let mut torsion = Vec::new();
    for d in a.torsion() {
        for e in b.torsion() {
            let g = d.gcd(e);
            if !g.is_unit() {
                torsion.push(g);
            }
        }
    }
    for _ in 0..a.free_rank() {
        torsion.extend(b.torsion().iter().cloned());
    }
    let free = a.free_rank() * b.free_rank();
    let m = PidModule::from_invariants(field, &torsion, free);
    // re-present so the torsion list is a divisibility chain
    PidModule::from_presentation(field, m.gens(), m.presentation())
}

/// Localization of a chart-0 module at `t`: same generators, relations read
/// in `k[t, t⁻¹]`.
pub fn localize(m: &PidModule<Poly>) -> PidModule<Laurent> {
    let pres = m.presentation().convert(Laurent::from_poly);
    PidModule::from_presentation(m.field(), m.gens(), &pres)
}

/// Localization of a chart-1 module (polynomials in `s`) at `s`, written in
/// the overlap coordinate `t = s⁻¹`.
pub fn localize_chart1(m: &PidModule<Poly>) -> PidModule<Laurent> {
    let pres = m.presentation().convert(Laurent::from_inverse_poly);
    PidModule::from_presentation(m.field(), m.gens(), &pres)
}

/// Localization of a chart-0 map.
pub fn localize_map(f: &PidMap<Poly>) -> PidMap<Laurent> {
    let s = Arc::new(localize(&f.source));
    let t = Arc::new(localize(&f.target));
    PidMap::new_unchecked(s, t, f.matrix.convert(Laurent::from_poly))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;
    use crate::modpid::ChartModule;

    const Q: Field = Field::Rational;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(Q, c)
    }

    fn free(n: usize) -> Arc<ChartModule> {
        Arc::new(PidModule::free(Q, n))
    }

    #[test]
    fn multiplication_by_t() {
        let f = PidMap::new(free(1), free(1), Matrix::from_rows(Q, vec![vec![p(&[0, 1])]])).unwrap();
        assert!(kernel(&f).0.is_zero());
        let (c, _) = cokernel(&f);
        assert_eq!(c.torsion(), &[p(&[0, 1])]);
        assert_eq!(c.free_rank(), 0);
    }

    #[test]
    fn zero_map() {
        let m = Arc::new(PidModule::from_invariants(Q, &[p(&[1, 1])], 1));
        let n = Arc::new(PidModule::cyclic(&p(&[0, 0, 1])));
        let f = PidMap::zero(m.clone(), n.clone());
        assert!(kernel(&f).0.isomorphic(&m));
        assert!(cokernel(&f).0.isomorphic(&n));
    }

    #[test]
    fn diagonal_map_cokernel() {
        let d = Matrix::diagonal(Q, &[p(&[0, 1]), p(&[1])]);
        let f = PidMap::new(free(2), free(2), d).unwrap();
        let (c, _) = cokernel(&f);
        assert_eq!(c.torsion(), &[p(&[0, 1])]);
        assert_eq!(c.free_rank(), 0);
    }

    #[test]
    fn tensor_examples() {
        let a = PidModule::cyclic(&p(&[0, 0, 1]));
        let b = PidModule::cyclic(&p(&[0, 0, 0, 1]));
        assert_eq!(tensor(&a, &b).torsion(), &[p(&[0, 0, 1])]);
        let fr = tensor(&PidModule::<Poly>::free(Q, 2), &PidModule::free(Q, 3));
        assert_eq!(fr.free_rank(), 6);
    }

    #[test]
    fn hom_torsion_into_free() {
        let a = PidModule::cyclic(&p(&[0, 1]));
        assert!(hom(&a, &PidModule::free(Q, 1)).is_zero());
        let h = hom(&PidModule::cyclic(&p(&[0, 0, 1])), &PidModule::cyclic(&p(&[0, 1, 1])));
        assert_eq!(h.torsion(), &[p(&[0, 1])]);
    }

    #[test]
    fn localization_examples() {
        assert!(localize(&PidModule::cyclic(&p(&[0, 1]))).is_zero());
        let m = localize(&PidModule::cyclic(&p(&[-1, 1])));
        assert_eq!(m.torsion(), &[Laurent::from_poly(&p(&[-1, 1]))]);
        assert_eq!(localize(&PidModule::free(Q, 3)).free_rank(), 3);
    }

    #[test]
    fn homology_examples() {
        // k[t] --t--> k[t] --t--> k[t]/(t^2): ker = (t) = im
        let m = free(1);
        let t = Matrix::from_rows(Q, vec![vec![p(&[0, 1])]]);
        let a = PidMap::new(m.clone(), m.clone(), t.clone()).unwrap();
        let b = PidMap::new(m.clone(), Arc::new(PidModule::cyclic(&p(&[0, 0, 1]))), t).unwrap();
        assert!(homology(&a, &b).unwrap().is_zero());
        // k[t] --t^2--> k[t] --> k[t]/(t): ker = (t), homology (t)/(t^2) = k
        let a2 = PidMap::new(m.clone(), m.clone(), Matrix::from_rows(Q, vec![vec![p(&[0, 0, 1])]])).unwrap();
        let c = PidMap::new(m.clone(), Arc::new(PidModule::cyclic(&p(&[0, 1]))), Matrix::identity(Q, 1)).unwrap();
        let h = homology(&a2, &c).unwrap();
        assert_eq!(h.torsion(), &[p(&[0, 1])]);
        let id = PidMap::identity(m);
        assert!(homology(&a, &id).is_err());
    }

    #[test]
    fn inverse_of_iso() {
        let m = Arc::new(PidModule::cyclic(&p(&[1, 0, 1])));
        let f = PidMap::new(m.clone(), m.clone(), Matrix::from_rows(Q, vec![vec![p(&[0, 1])]])).unwrap();
        let g = f.inverse().unwrap();
        assert!(g.compose(&f).equals(&PidMap::identity(m)));
    }
}
