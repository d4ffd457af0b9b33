//! Randomized invariants. Sheaf-level cases draw a seed and feed it to the
//! crate's own samplers; matrix-level cases use proptest strategies directly.

use std::sync::Arc;

use proptest::prelude::*;

use ewatts::cli::{parse_job, run_job, Options};
use ewatts::exactfield::{kernel_basis, solve, Field, Mat, Matrix, RingElem};
use ewatts::functors::{chart_bimodule, eval_mor, is_totally_global, watts_sheaf, FunctorExpr};
use ewatts::modpid::{cokernel, kernel, localize, localize_map, tensor, PidMap, PidModule};
use ewatts::polypid::{birkhoff_factorize, smith_normal_form, Euclidean, Laurent, LaurentMat, Poly, PolyMat};
use ewatts::random;
use ewatts::sheafp1::{
    cech_h0, serre_check, sheaf_of_split_in, split_classify, GluedSheaf, SheafMap,
};

const Q: Field = Field::Rational;

fn small_mat(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec(-4i64..=4, rows * cols).prop_map(move |v| {
        let rows_v: Vec<&[i64]> = v.chunks(cols.max(1)).take(rows).collect();
        if cols == 0 {
            Mat::zeros(Q, rows, 0)
        } else {
            Mat::from_ints(Q, &rows_v)
        }
    })
}

fn poly_mat(rows: usize, cols: usize) -> impl Strategy<Value = PolyMat> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 0..=3), rows * cols).prop_map(move |v| {
        let mut m = PolyMat::zeros(Q, rows, cols);
        for (k, c) in v.iter().enumerate() {
            m.set(k / cols, k % cols, Poly::from_ints(Q, c));
        }
        m
    })
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn kernel_basis_is_annihilated(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| small_mat(r, c))) {
        let k = kernel_basis(&m);
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.cols() + ewatts::exactfield::rank(&m), m.cols());
    }

    #[test]
    fn solve_is_exact(m in small_mat(4, 3), x in small_mat(3, 2)) {
        let b = m.mul(&x);
        let y = solve(&m, &b).expect("b is in the column space");
        prop_assert_eq!(m.mul(&y), b);
    }

    #[test]
    fn smith_form_is_a_divisibility_chain(m in poly_mat(3, 3)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.mul(&s.u_inv).is_identity() && s.v.mul(&s.v_inv).is_identity());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[0].divides(&w[1]));
        }
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!(i == j || s.d.get(i, j).is_zero());
            }
        }
    }

    #[test]
    fn tensor_is_right_exact(f in poly_mat(2, 2), p in poly_mat(2, 1)) {
        let a = Arc::new(PidModule::free(Q, 2));
        let b = Arc::new(PidModule::free(Q, 2));
        let pm = PidModule::from_presentation(Q, 2, &p);
        let fm = PidMap::new(a.clone(), b.clone(), f.clone()).unwrap();
        let lhs = tensor(&cokernel(&fm).0, &pm);
        let fp = PidMap::new(Arc::new(tensor(&a, &pm)), Arc::new(tensor(&b, &pm)), f.kron(&PolyMat::identity(Q, 2))).unwrap();
        prop_assert!(lhs.isomorphic(&cokernel(&fp).0));
    }

    #[test]
    fn localization_is_exact(f in poly_mat(2, 3)) {
        let fm = PidMap::new(Arc::new(PidModule::free(Q, 3)), Arc::new(PidModule::free(Q, 2)), f).unwrap();
        let lf = localize_map(&fm);
        prop_assert!(localize(&cokernel(&fm).0).isomorphic(&cokernel(&lf).0));
        prop_assert!(localize(&kernel(&fm).0).isomorphic(&kernel(&lf).0));
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn birkhoff_degrees_are_invariant(seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = random::rng(seed);
        let n = rng.gen_range(1..=3);
        let degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
        let diag = LaurentMat::diagonal(Q, &degrees.iter().map(|&d| Laurent::t_pow(Q, d)).collect::<Vec<_>>());
        let (u0, _) = random::random_unimodular(&mut rng, Q, n, 3);
        let (u1, _) = random::random_unimodular(&mut rng, Q, n, 3);
        let t = u0.convert(Laurent::from_poly).mul(&diag).mul(&u1.convert(Laurent::from_inverse_poly));
        let b = birkhoff_factorize(&t).unwrap();
        prop_assert_eq!(b.recompose(&t), b.diagonal(Q));
        let mut sorted = degrees.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        prop_assert_eq!(&b.degrees, &sorted);
        let e = GluedSheaf::bundle(t).unwrap();
        for m in -5..=3 {
            let oracle: i64 = sorted.iter().map(|d| (d + m + 1).max(0)).sum();
            prop_assert_eq!(cech_h0(&e.twist(m)).dim as i64, oracle);
        }
    }

    #[test]
    fn split_types_round_trip(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let field = if seed % 3 == 0 { Field::prime(5).unwrap() } else { Q };
        let st = random::random_small_split_type(&mut rng, field);
        prop_assert_eq!(split_classify(&sheaf_of_split_in(field, &st)).unwrap(), st.clone());
        let m = random::random_sheaf_of_type(&mut rng, field, &st).unwrap();
        prop_assert_eq!(split_classify(&m).unwrap(), st.clone());
        let b = (seed % 7) as i64 - 3;
        let tw = m.tensor(&GluedSheaf::line(field, b));
        prop_assert_eq!(split_classify(&tw).unwrap(), st.twisted(b));
    }

    #[test]
    fn serre_duality_holds(seed in any::<u64>(), r in -3i64..=3) {
        let mut rng = random::rng(seed);
        let (_, m) = random::random_sheaf(&mut rng, Q).unwrap();
        prop_assert!(serre_check(&m, r).unwrap());
    }

    #[test]
    fn evaluation_is_functorial(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (a, b, c) = (
            random::random_small_split_type(&mut rng, Q),
            random::random_small_split_type(&mut rng, Q),
            random::random_small_split_type(&mut rng, Q),
        );
        let f = random::random_model_map(&mut rng, Q, &a, &b).unwrap();
        let g = random::random_model_map(&mut rng, Q, &b, &c).unwrap();
        let s = random::scramble(&mut rng, &f.target).unwrap();
        let f2 = s.compose(&f);
        let g2 = g.compose(&s.inverse().unwrap());
        let (_, gsheaf) = random::random_sheaf(&mut rng, Q).unwrap();
        let functor = FunctorExpr::tensor((*gsheaf).clone()).plus(&FunctorExpr::h1twist(Q, (seed % 5) as i64 - 2));
        let lhs = eval_mor(&functor, &g2.compose(&f2)).unwrap();
        let rhs = eval_mor(&functor, &g2).unwrap().mul(&eval_mor(&functor, &f2).unwrap());
        prop_assert_eq!(lhs, rhs);
        let id = eval_mor(&functor, &SheafMap::identity(f2.target.clone())).unwrap();
        prop_assert!(id.is_identity());
    }

    #[test]
    fn tensor_functors_restrict_to_charts(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (_, g) = random::random_sheaf(&mut rng, Q).unwrap();
        let f = FunctorExpr::tensor((*g).clone());
        for k in 0..2 {
            prop_assert!(chart_bimodule(&f, k).unwrap().isomorphic(g.chart(k)));
        }
    }

    #[test]
    fn watts_sheaf_vanishes_exactly_on_tg_functors(seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = random::rng(seed);
        let mut f = FunctorExpr::zero(Q);
        for (i, k) in random::random_tg_multiset(&mut rng, -5, 1, 2) {
            f = f.plus(&FunctorExpr::h1twist(Q, i).times(k));
        }
        if rng.gen_bool(0.5) {
            let (_, g) = random::random_sheaf(&mut rng, Q).unwrap();
            f = f.plus(&FunctorExpr::tensor((*g).clone()));
        }
        let w = watts_sheaf(&f).unwrap();
        let tg = is_totally_global(&f).unwrap().is_totally_global;
        prop_assert_eq!(w.is_zero(), tg);
        if tg {
            let fw = FunctorExpr::tensor((*w).clone());
            for n in -3..=3 {
                prop_assert_eq!(ewatts::functors::eval_obj(&fw, &GluedSheaf::line(Q, n)).unwrap().dim, 0);
            }
        }
    }

    #[test]
    fn job_text_is_canonical(
        degs in prop::collection::vec(-6i64..=6, 1..3),
        root in -3i64..=3,
        jet in 1u32..=3,
        twists in prop::collection::vec(-5i64..=2, 0..3),
        kind in 0usize..4,
    ) {
        let point = if root < 0 { format!("t + {}", -root) } else { format!("t - {root}") };
        let sheaf = format!(
            "{} + sky({point}, {jet}) + sky(inf, {jet})",
            degs.iter().map(|d| format!("O({d})")).collect::<Vec<_>>().join(" + ")
        );
        let functor = std::iter::once(format!("tensor({sheaf})"))
            .chain(twists.iter().map(|i| format!("h1twist({i})")))
            .collect::<Vec<_>>()
            .join("+");
        let text = match kind {
            0 => format!("field GF(11); cohomology {sheaf};"),
            1 => format!("watts {functor};"),
            2 => format!("gamma {functor} at {sheaf};"),
            _ => format!("birkhoff [[t^{}, {root}], [0, t^-{jet}]];", degs[0]),
        };
        let once = parse_job(&text).unwrap();
        let canon = once.render();
        let twice = parse_job(&canon).unwrap();
        prop_assert_eq!(&twice, &once);
        prop_assert_eq!(twice.render(), canon);
        if kind == 0 {
            let o = Options::default();
            prop_assert_eq!(run_job(&once, &o).unwrap(), run_job(&twice, &o).unwrap());
        }
    }
}

#[test]
fn smith_of_zero_matrix_is_trivial() {
    let s = smith_normal_form(&Matrix::<Poly>::zeros(Q, 2, 3));
    assert!(s.diagonal().is_empty());
    assert!(Poly::one(Q).is_unit());
}
