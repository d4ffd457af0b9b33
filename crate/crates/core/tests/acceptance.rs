//! The twelve acceptance checks. Each test prints one `criterion N: PASS`
//! or `criterion N: FAIL` line (run with `--nocapture` to see them) and
//! fails on the first mismatch it reports.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use ewatts::exactfield::{nullity, rank, Field, Mat};
use ewatts::functors::{
    affine_roundtrip, classify_tg, eval_mor, eval_obj, gamma, gamma_kernel_dims, w_left_exactness_check, watts_sheaf,
    AffineRing, Bimodule, FunctorExpr,
};
use ewatts::modpid::PidModule;
use ewatts::polypid::{birkhoff_factorize, Laurent, LaurentMat, Poly, PolyMat};
use ewatts::random::{self, Rng64};
use ewatts::sheafp1::{cech_h0, cech_h1, delta_map, h0_map, h1_map, hom_dim, GluedSheaf, SplitType, Support};

const Q: Field = Field::Rational;

fn gf7() -> Field {
    Field::prime(7).unwrap()
}

fn report(n: u32, what: &str, start: Instant, failures: &[String]) {
    let secs = start.elapsed().as_secs_f64();
    if failures.is_empty() {
        println!("criterion {n}: PASS  {what} ({secs:.2}s)");
    } else {
        println!("criterion {n}: FAIL  {what} ({secs:.2}s)");
        for f in failures.iter().take(5) {
            println!("    {f}");
        }
        panic!("criterion {n} failed: {}", failures[0]);
    }
}

fn h0_line(d: i64) -> usize {
    (d + 1).max(0) as usize
}

fn h1_line(d: i64) -> usize {
    (-d - 1).max(0) as usize
}

/// `h⁰` and `h¹` of a sheaf read off its splitting type.
fn split_cohomology(st: &SplitType) -> (usize, usize) {
    let h0 = st.degrees.iter().map(|&d| h0_line(d)).sum::<usize>() + st.torsion_length();
    let h1 = st.degrees.iter().map(|&d| h1_line(d)).sum();
    (h0, h1)
}

fn tg_functor(field: Field, mult: &[(i64, usize)]) -> FunctorExpr {
    let mut f = FunctorExpr::zero(field);
    for &(i, k) in mult {
        f = f.plus(&FunctorExpr::h1twist(field, i).times(k));
    }
    f
}

fn tg_table(mult: &[(i64, usize)], n: i64) -> usize {
    mult.iter().map(|&(i, k)| k * h1_line(n + i)).sum()
}

#[test]
fn criterion_01_line_bundle_cohomology() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for field in [Q, gf7()] {
        for d in -8..=8 {
            let o = GluedSheaf::line(field, d);
            let h0 = cech_h0(&o).dim;
            let h1 = cech_h1(&o).unwrap().dim;
            if (h0, h1) != (h0_line(d), h1_line(d)) {
                failures.push(format!("{field:?} O({d}): got ({h0}, {h1})"));
            }
        }
    }
    report(1, "h0/h1 of O(d), d in [-8, 8], over Q and GF(7)", start, &failures);
}

#[test]
fn criterion_02_watts_round_trip() {
    let start = Instant::now();
    let mut rng = random::rng(2);
    let mut failures = Vec::new();
    for k in 0..50 {
        let field = if k % 5 == 4 { gf7() } else { Q };
        let (st, g) = random::random_sheaf(&mut rng, field).unwrap();
        let w = watts_sheaf(&FunctorExpr::tensor((*g).clone())).unwrap();
        let got = ewatts::sheafp1::split_classify(&w).unwrap();
        if got != st {
            failures.push(format!("sample {k}: expected {st}, got {got}"));
        }
    }
    report(2, "split type of W(tensor(G)) equals that of G, 50 samples", start, &failures);
}

#[test]
fn criterion_03_gamma_recovery_and_naturality() {
    let start = Instant::now();
    let mut rng = random::rng(3);
    let mut failures = Vec::new();
    for k in 0..50 {
        let (_, g) = random::random_sheaf(&mut rng, Q).unwrap();
        let st_m = if k % 2 == 0 {
            // torsion forced in half of the samples
            loop {
                let st = random::random_small_split_type(&mut rng, Q);
                if !st.torsion.is_empty() {
                    break st;
                }
            }
        } else {
            random::random_small_split_type(&mut rng, Q)
        };
        let m = random::random_sheaf_of_type(&mut rng, Q, &st_m).unwrap();
        let f = FunctorExpr::tensor((*g).clone());
        let gm = gamma(&f, &m).unwrap();
        let expected = cech_h0(&m.tensor(&g)).dim;
        if gm.rows() != expected || gm.cols() != expected || rank(&gm) != expected {
            failures.push(format!("pair {k}: Γ is {}x{} of rank {}, h0(M⊗G) = {expected}", gm.rows(), gm.cols(), rank(&gm)));
        }
    }
    for k in 0..30 {
        let (_, g) = random::random_sheaf(&mut rng, Q).unwrap();
        let a = random::random_small_split_type(&mut rng, Q);
        let b = random::random_small_split_type(&mut rng, Q);
        let map = random::random_morphism(&mut rng, Q, &a, &b).unwrap();
        let f = FunctorExpr::tensor((*g).clone());
        let w = watts_sheaf(&f).unwrap();
        let lhs = gamma(&f, &map.target).unwrap().mul(&eval_mor(&f, &map).unwrap());
        let rhs = h0_map(&map.tensor_identity(&w)).unwrap().mul(&gamma(&f, &map.source).unwrap());
        if lhs != rhs {
            failures.push(format!("naturality square {k} does not commute"));
        }
    }
    report(3, "Γ invertible for 50 (G, M); 30 naturality squares commute", start, &failures);
}

#[test]
fn criterion_04_gamma_kernel_is_the_tg_part() {
    let start = Instant::now();
    let mut rng = random::rng(4);
    let mut failures = Vec::new();
    for k in 0..20 {
        let (_, g) = random::random_sheaf(&mut rng, Q).unwrap();
        let mult = random::random_tg_multiset(&mut rng, -6, 2, 2);
        let f = FunctorExpr::tensor((*g).clone()).plus(&tg_functor(Q, &mult));
        let t = gamma_kernel_dims(&f, -10..=5).unwrap();
        for (j, &n) in t.degrees.iter().enumerate() {
            let want = tg_table(&mult, n);
            if t.ker[j] != want || t.cok[j] != 0 {
                failures.push(format!("functor {k}, n = {n}: ker {} (want {want}), cok {}", t.ker[j], t.cok[j]));
            }
        }
    }
    report(4, "ker Γ table equals the H1Twist table, cok Γ = 0, n in [-10, 5]", start, &failures);
}

#[test]
fn criterion_05_tg_classifier() {
    let start = Instant::now();
    let mut rng = random::rng(5);
    let mut failures = Vec::new();
    for k in 0..50 {
        let mult = random::random_tg_multiset(&mut rng, -8, 0, 3);
        let f = tg_functor(Q, &mult);
        let want: BTreeMap<i64, usize> = mult.iter().cloned().collect();
        match classify_tg(&f) {
            Ok(c) if c.multiplicities == want => {}
            Ok(c) => failures.push(format!("multiset {k}: want {want:?}, got {:?}", c.multiplicities)),
            Err(e) => failures.push(format!("multiset {k}: {e}")),
        }
    }
    report(5, "classify_tg recovers 50 H1Twist multisets", start, &failures);
}

#[test]
fn criterion_06_serre_duality_dimensions() {
    let start = Instant::now();
    let mut rng = random::rng(6);
    let mut failures = Vec::new();
    for k in 0..50 {
        let (st, m) = random::random_sheaf(&mut rng, Q).unwrap();
        let r = (k % 9) as i64 - 4;
        let lhs = hom_dim(&m, &GluedSheaf::line(Q, r));
        let rhs = cech_h1(&m.twist(-2 - r)).unwrap().dim;
        let oracle: usize = st.degrees.iter().map(|&d| h0_line(r - d)).sum();
        if lhs != rhs || lhs != oracle {
            failures.push(format!("sample {k} ({st}), r = {r}: hom {lhs}, h1 {rhs}, oracle {oracle}"));
        }
    }
    report(6, "dim Hom(M, O(r)) = dim H1(M(-2-r)) for 50 (M, r)", start, &failures);
}

#[test]
fn criterion_07_cech_kernel() {
    let start = Instant::now();
    let mut rng = random::rng(7);
    let mut failures = Vec::new();
    for k in 0..50 {
        let field = if k % 5 == 4 { gf7() } else { Q };
        let (st, m) = random::random_sheaf(&mut rng, field).unwrap();
        let delta = delta_map(&m);
        let ker = nullity(&delta.matrix);
        let h0 = cech_h0(&m).dim;
        let (oracle, _) = split_cohomology(&st);
        if ker != h0 || h0 != oracle {
            failures.push(format!("sample {k} ({st}): ker δ {ker}, h0 {h0}, oracle {oracle}"));
        }
    }
    report(7, "h0(M) is the kernel dimension of δ for 50 M", start, &failures);
}

#[test]
fn criterion_08_birkhoff() {
    let start = Instant::now();
    let mut rng = random::rng(8);
    let mut failures = Vec::new();
    for k in 0..50 {
        use rand::Rng;
        let n = rng.gen_range(1..=4);
        let mut degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
        let (u0, _) = random::random_unimodular(&mut rng, Q, n, 3);
        let (u1, _) = random::random_unimodular(&mut rng, Q, n, 3);
        let diag = LaurentMat::diagonal(Q, &degrees.iter().map(|&d| Laurent::t_pow(Q, d)).collect::<Vec<_>>());
        let t = u0.convert(Laurent::from_poly).mul(&diag).mul(&u1.convert(Laurent::from_inverse_poly));
        let b = birkhoff_factorize(&t).unwrap();
        if b.recompose(&t) != b.diagonal(Q) {
            failures.push(format!("sample {k}: P·T·Q is not diagonal"));
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        if b.degrees != degrees {
            failures.push(format!("sample {k}: degrees {:?}, planted {degrees:?}", b.degrees));
        }
        // jumps of n ↦ h0(E(n)): the second difference at −d counts summands O(d)
        let e = GluedSheaf::bundle(t).unwrap();
        let h: BTreeMap<i64, i64> = (-7..=5).map(|m| (m, cech_h0(&e.twist(m)).dim as i64)).collect();
        let mut jumps = Vec::new();
        for d in (-5..=5).rev() {
            let c = h[&-d] - 2 * h[&(-d - 1)] + h[&(-d - 2)];
            jumps.extend(std::iter::repeat(d).take(c.max(0) as usize));
        }
        if jumps != b.degrees {
            failures.push(format!("sample {k}: cohomology jumps {jumps:?}, Birkhoff {:?}", b.degrees));
        }
    }
    report(8, "Birkhoff P·T·Q = diag(t^d) for 50 transitions, degrees match cohomology jumps", start, &failures);
}

fn random_bimodule(rng: &mut Rng64, ring: &AffineRing) -> Bimodule {
    use rand::Rng;
    let n = rng.gen_range(1..=3);
    let nilpotent = matches!(ring, AffineRing::Quotient(_));
    let module = if rng.gen_bool(0.5) {
        PidModule::free(Q, n)
    } else {
        let c = rng.gen_range(-3..=3);
        let p = Poly::from_ints(Q, &[c, 1]);
        let mut m = PidModule::cyclic(&p);
        for _ in 1..n {
            m = m.direct_sum(&PidModule::cyclic(&p));
        }
        m
    };
    let mut a = PolyMat::zeros(Q, n, n);
    for i in 0..n {
        for j in 0..n {
            if nilpotent && j <= i {
                continue;
            }
            let coeffs: Vec<i64> = (0..2).map(|_| rng.gen_range(-2..=2)).collect();
            a.set(i, j, Poly::from_ints(Q, &coeffs));
        }
    }
    Bimodule::new(ring.clone(), Arc::new(module), a).unwrap()
}

#[test]
fn criterion_09_affine_round_trip() {
    let start = Instant::now();
    let mut rng = random::rng(9);
    let mut failures = Vec::new();
    let t = Poly::from_ints(Q, &[0, 1]);
    for ring in [AffineRing::Polynomial, AffineRing::Quotient(t.pow(3))] {
        for k in 0..20 {
            let b = random_bimodule(&mut rng, &ring);
            if !affine_roundtrip(&b).unwrap() {
                failures.push(format!("{ring:?}, bimodule {k}"));
            }
        }
    }
    report(9, "extract-rebuild-extract is stable for 20 bimodules over k[t] and k[t]/(t^3)", start, &failures);
}

#[test]
fn criterion_10_tangent_sequence_bookkeeping() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in -3..=6 {
        let (alpha, beta) = random::tangent_sequence(Q, n);
        let (a, b, c) = (&alpha.source, &alpha.target, &beta.target);
        let h0 = |m: &GluedSheaf| cech_h0(m).dim;
        let h1 = |m: &GluedSheaf| cech_h1(m).unwrap().dim;
        let (h0a, h0b, h0c, h1a, h1b, h1c) = (h0(a), h0(b), h0(c), h1(a), h1(b), h1(c));
        let want = |m: i64| (h0_line(m), h1_line(m));
        if (h0a, h1a) != want(-(n + 2)) || (h0c, h1c) != want(-n) || (h0b, h1b) != (2 * h0_line(-(n + 1)), 2 * h1_line(-(n + 1))) {
            failures.push(format!("n = {n}: dimensions disagree with the line formulas"));
        }
        let alt = h0a as i64 - h0b as i64 + h0c as i64 - h1a as i64 + h1b as i64 - h1c as i64;
        if alt != 0 {
            failures.push(format!("n = {n}: alternating sum {alt}"));
        }
        let (a0, b0) = (h0_map(&alpha).unwrap(), h0_map(&beta).unwrap());
        let (a1, b1) = (h1_map(&alpha).unwrap(), h1_map(&beta).unwrap());
        let zero = |m: &Mat| m.is_zero();
        if (b0.cols() > 0 && a0.cols() > 0 && !zero(&b0.mul(&a0))) || (b1.cols() > 0 && a1.cols() > 0 && !zero(&b1.mul(&a1))) {
            failures.push(format!("n = {n}: composites are not zero"));
        }
        let (ra0, rb0, ra1, rb1) = (rank(&a0), rank(&b0), rank(&a1), rank(&b1));
        let connecting_from_h0 = h0c - rb0;
        let connecting_from_h1 = h1a - ra1;
        let ok = ra0 == h0a && rb0 == h0b - ra0 && connecting_from_h0 == connecting_from_h1 && rb1 == h1b - ra1 && rb1 == h1c;
        if !ok {
            failures.push(format!("n = {n}: ranks H0(α) {ra0}, H0(β) {rb0}, H1(α) {ra1}, H1(β) {rb1} do not balance"));
        }
    }
    report(10, "long exact sequence of the tangent sequence balances, n in [-3, 6]", start, &failures);
}

#[test]
fn criterion_11_strict_monotonicity() {
    let start = Instant::now();
    let mut rng = random::rng(11);
    let mut failures = Vec::new();
    let mut functors: Vec<Vec<(i64, usize)>> = vec![vec![(-2, 1)], vec![(-2, 1), (-3, 2)], vec![(0, 1), (-8, 1)], vec![(4, 2)]];
    for _ in 0..20 {
        functors.push(random::random_tg_multiset(&mut rng, -8, 0, 3));
    }
    for mult in &functors {
        let f = tg_functor(Q, mult);
        let c = classify_tg(&f).unwrap();
        if !c.strictly_decreasing {
            failures.push(format!("{mult:?}: classifier reports a non-decreasing step"));
        }
        let top = c.top.unwrap();
        for n in top - 12..=top {
            let (dn, dn1) = (eval_obj(&f, &GluedSheaf::line(Q, n)).unwrap().dim, eval_obj(&f, &GluedSheaf::line(Q, n + 1)).unwrap().dim);
            if dn <= dn1 || dn != tg_table(mult, n) {
                failures.push(format!("{mult:?}: d({n}) = {dn}, d({}) = {dn1}", n + 1));
            }
        }
    }
    report(11, "dim F(O(n)) strictly decreasing on the nonzero range of tg functors", start, &failures);
}

#[test]
fn criterion_12_w_left_exact() {
    let start = Instant::now();
    let mut rng = random::rng(12);
    let mut failures = Vec::new();
    for k in 0..20 {
        let (alpha, beta) = random::random_ses(&mut rng, Q).unwrap();
        match w_left_exactness_check(&alpha, &beta) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("sequence {k}: W-sequence not exact")),
            Err(e) => failures.push(format!("sequence {k}: {e}")),
        }
    }
    report(12, "0 → W(A) → W(B) → W(C) exact for 20 short exact sequences", start, &failures);
}

#[test]
fn torsion_supports_are_generated() {
    // guards the samplers above: both charts and both kinds of points occur
    let mut rng = random::rng(2);
    let (mut inf, mut fin) = (false, false);
    for _ in 0..50 {
        let (st, _) = random::random_sheaf(&mut rng, Q).unwrap();
        for p in &st.torsion {
            match p.support {
                Support::Infinity => inf = true,
                Support::Finite(_) => fin = true,
            }
        }
    }
    assert!(inf && fin);
}
