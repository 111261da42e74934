//! Small hand-built instances with values worked out by hand.

use curvedalg::barcobar::{bar_morphism, bar_of_algebra, cobar_morphism, cobar_object};
use curvedalg::curved::{
    basis_functional, basis_vector, compose_alg_morphisms, compose_coalg_morphisms, is_ac, is_ucdg,
    validate_alg_morphism, validate_ca_coalgebra, validate_cainf_algebra, validate_coalg_morphism,
    validate_ucc_algebra, AlgMorphism, CACoalgebra, CoalgMorphism, CurvedAInfAlgebra, UCCAlgebra,
};
use curvedalg::curved::gen::{random_alg_morphism_from, random_ca_coalgebra, random_coalg_morphism_from, random_ucc_algebra};
use curvedalg::gmod::koszul_sign_oracle;
use curvedalg::{GradedMap, GradedModule, Ring, RingElement};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const F7: Ring = Ring::PrimeField { p: 7 };

fn map(dom: &GradedModule, cod: &GradedModule, deg: i32, e: Vec<(usize, usize, RingElement)>) -> GradedMap {
    GradedMap::from_entries(dom, cod, deg, e).unwrap()
}

/// `F_7[x]/(x^3)`, `deg x = 1`, `m1 = alpha (x -> x^2)`, `m0 = c x^2`.
fn truncated_poly(alpha: i64, c: i64) -> UCCAlgebra {
    let a = GradedModule::new(F7, vec![0, 1, 2]);
    let aa = a.tensor(&a).unwrap();
    let one = F7.one();
    let m2 = map(
        &aa,
        &a,
        0,
        vec![
            (0, 0, one.clone()),
            (1, 1, one.clone()),
            (2, 2, one.clone()),
            (3, 1, one.clone()),
            (6, 2, one.clone()),
            (4, 2, one.clone()),
        ],
    );
    let m1 = map(&a, &a, 1, vec![(1, 2, F7.int(alpha))]);
    let m0 = map(&GradedModule::unit(F7), &a, 2, vec![(0, 2, F7.int(c))]);
    UCCAlgebra::new(&a, m2, m1, m0, basis_vector(&a, 0), basis_functional(&a, 0)).unwrap()
}

/// The dual of [`truncated_poly`]: `C = span{1*, x*, (x^2)*}` in degrees
/// `0, -1, -2`, `delta1 ((x^2)*) = alpha x*`, `delta0 ((x^2)*) = c`.
fn dual_poly(alpha: i64, c: i64) -> CACoalgebra {
    let m = GradedModule::new(F7, vec![0, -1, -2]);
    let mm = m.tensor(&m).unwrap();
    let k = GradedModule::unit(F7);
    let one = F7.one();
    let d2 = map(
        &m,
        &mm,
        0,
        vec![
            (0, 0, one.clone()),
            (1, 1, one.clone()),
            (1, 3, one.clone()),
            (2, 2, one.clone()),
            (2, 4, one.clone()),
            (2, 6, one.clone()),
        ],
    );
    let d1 = map(&m, &m, 1, vec![(2, 1, F7.int(alpha))]);
    let d0 = map(&m, &k, 2, vec![(2, 0, F7.int(c))]);
    CACoalgebra::new(&m, d2, d1, d0, basis_functional(&m, 0), basis_vector(&m, 0)).unwrap()
}

/// `EvenTruncated(7,2)`, basis `1, x` with `deg x = 1`, `x^2 = u`.
fn x_squared_u() -> UCCAlgebra {
    let r = Ring::even_truncated(7, 2);
    let a = GradedModule::new(r, vec![0, 1]);
    let aa = a.tensor(&a).unwrap();
    let k = GradedModule::unit(r);
    let m2 = map(
        &aa,
        &a,
        0,
        vec![(0, 0, r.one()), (1, 1, r.one()), (2, 1, r.one()), (3, 0, r.monomial(2, 1))],
    );
    UCCAlgebra::new(
        &a,
        m2,
        GradedMap::zero(&a, &a, 1),
        GradedMap::zero(&k, &a, 2),
        basis_vector(&a, 0),
        basis_functional(&a, 0),
    )
    .unwrap()
}

fn ground_algebra(ring: Ring) -> UCCAlgebra {
    let a = GradedModule::new(ring, vec![0]);
    let k = GradedModule::unit(ring);
    let m2 = map(&a.tensor(&a).unwrap(), &a, 0, vec![(0, 0, ring.one())]);
    UCCAlgebra::new(
        &a,
        m2,
        GradedMap::zero(&a, &a, 1),
        GradedMap::zero(&k, &a, 2),
        basis_vector(&a, 0),
        basis_functional(&a, 0),
    )
    .unwrap()
}

fn ground_coalgebra(ring: Ring) -> CACoalgebra {
    let c = GradedModule::new(ring, vec![0]);
    let k = GradedModule::unit(ring);
    let d2 = map(&c, &c.tensor(&c).unwrap(), 0, vec![(0, 0, ring.one())]);
    CACoalgebra::new(
        &c,
        d2,
        GradedMap::zero(&c, &c, 1),
        GradedMap::zero(&c, &k, 2),
        basis_functional(&c, 0),
        basis_vector(&c, 0),
    )
    .unwrap()
}

#[test]
fn truncated_polynomial_family_validates() {
    for alpha in 0..7 {
        for c in 0..7 {
            let a = truncated_poly(alpha, c);
            let r = validate_ucc_algebra(&a).unwrap();
            assert!(r.pass, "alpha={alpha} c={c}: {r:?}");
            assert_eq!(is_ucdg(&a), c == 0);
            let d = dual_poly(alpha, c);
            let r = validate_ca_coalgebra(&d).unwrap();
            assert!(r.pass, "dual alpha={alpha} c={c}: {r:?}");
            assert_eq!(d.conilpotency(), Some(3));
        }
    }
}

#[test]
fn non_grouplike_w_is_rejected() {
    let m = GradedModule::new(F7, vec![0, 0]);
    let mm = m.tensor(&m).unwrap();
    let k = GradedModule::unit(F7);
    let one = F7.one();
    let d2 = map(&m, &mm, 0, vec![(0, 0, one.clone()), (1, 1, one.clone()), (1, 2, one.clone())]);
    let w = map(&k, &m, 0, vec![(0, 0, one.clone()), (0, 1, one.clone())]);
    let c = CACoalgebra::new(&m, d2, GradedMap::zero(&m, &m, 1), GradedMap::zero(&m, &k, 2), basis_functional(&m, 0), w)
        .unwrap();
    let r = validate_ca_coalgebra(&c).unwrap();
    assert!(!r.pass);
    assert!(r.violated_eq.is_some());
}

#[test]
fn morphism_examples() {
    let a = truncated_poly(3, 5);
    let id = AlgMorphism::identity(&a);
    assert!(validate_alg_morphism(&id, &a, &a).unwrap().pass);
    assert_eq!(compose_alg_morphisms(&id, &id).unwrap(), id);

    let mut rng = ChaCha8Rng::seed_from_u64(90);
    let (b, f) = random_alg_morphism_from(&mut rng, &a).unwrap();
    let (c, g) = random_alg_morphism_from(&mut rng, &b).unwrap();
    let (d, h) = random_alg_morphism_from(&mut rng, &c).unwrap();
    let fg = compose_alg_morphisms(&f, &g).unwrap();
    assert!(validate_alg_morphism(&fg, &a, &c).unwrap().pass);
    assert_eq!(fg.und, f.und.add(&g.und));
    assert_eq!(
        compose_alg_morphisms(&fg, &h).unwrap(),
        compose_alg_morphisms(&f, &compose_alg_morphisms(&g, &h).unwrap()).unwrap()
    );
    assert!(validate_alg_morphism(&compose_alg_morphisms(&fg, &h).unwrap(), &a, &d).unwrap().pass);

    // breaking the unit: f1 sends 1 to 2
    let broken = AlgMorphism { f1: id.f1.scale(2), und: id.und.clone() };
    assert!(!validate_alg_morphism(&broken, &a, &a).unwrap().pass);

    let x = dual_poly(2, 4);
    let (y, p) = random_coalg_morphism_from(&mut rng, &x).unwrap();
    let (_, q) = random_coalg_morphism_from(&mut rng, &y).unwrap();
    let pq = compose_coalg_morphisms(&p, &q).unwrap();
    let h0 = p.g0.add(&p.g1.compose(&q.g0).unwrap()).unwrap();
    assert_eq!(pq.g0, h0);
    let idc = CoalgMorphism::identity(&x);
    assert!(validate_coalg_morphism(&idc, &x, &x).unwrap().pass);
    assert_eq!(compose_coalg_morphisms(&p, &CoalgMorphism::identity(&y)).unwrap(), p);
}

#[test]
fn ground_ring_bar_and_cobar() {
    for ring in [F7, Ring::Integers, Ring::odd_exterior(3), Ring::even_truncated(5, 2)] {
        let bar = bar_of_algebra(&ground_algebra(ring), 4).unwrap();
        let c = &bar.coalgebra;
        assert_eq!(c.module().rank(), 1);
        assert!(c.d1().is_zero() && c.d0().is_zero());
        assert_eq!(c.w().entry(0, 0), ring.one());
        assert_eq!(c.eps().entry(0, 0), ring.one());

        let cob = cobar_object(&ground_coalgebra(ring), 4).unwrap();
        assert_eq!(cob.algebra.module().rank(), 1);
        assert!(cob.algebra.m1().is_zero() && cob.algebra.m0().is_zero());
    }
}

#[test]
fn one_dimensional_generators_give_the_ground_ring() {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    for _ in 0..5 {
        let a = random_ucc_algebra(&mut rng, F7, 1).unwrap();
        assert_eq!(a.module().gens(), vec![0]);
        assert_eq!(a.m2().entry(0, 0), F7.one());
        assert!(a.m1().is_zero() && a.m0().is_zero());
        let c = random_ca_coalgebra(&mut rng, F7, 1).unwrap();
        assert_eq!(c.module().gens(), vec![0]);
    }
}

#[test]
fn bar_of_truncated_polynomial() {
    for (alpha, c) in [(0, 0), (1, 0), (3, 2), (0, 6)] {
        let a = truncated_poly(alpha, c);
        let bar = bar_of_algebra(&a, 5).unwrap();
        assert!(validate_ca_coalgebra(&bar.coalgebra).unwrap().pass);
        // no product of x and x^2 reaches the unit line
        assert!(bar.coalgebra.d0().is_zero(), "alpha={alpha} c={c}");
        // on the one-letter word (x), length-2 outputs come from pr(m0) = c x^2 only
        let words = &bar.words;
        let x = words.index(&[0]).unwrap();
        let (out, _) = bar.coalgebra.d1().eval_basis(x);
        let long = out.iter().any(|(j, _)| words.length(*j) == 2);
        assert_eq!(long, c != 0);
        let unit_word = words.index(&[]).unwrap();
        let (out, _) = bar.coalgebra.d1().eval_basis(unit_word);
        assert_eq!(out.is_empty(), c == 0);
        assert_eq!(is_ac(&bar.coalgebra), c == 0);
    }
}

#[test]
fn curvature_example_in_the_bar_construction() {
    let a = x_squared_u();
    assert!(validate_ucc_algebra(&a).unwrap().pass);
    let bar = bar_of_algebra(&a, 4).unwrap();
    assert!(validate_ca_coalgebra(&bar.coalgebra).unwrap().pass);
    let xx = bar.words.index(&[0, 0]).unwrap();
    // (xs (x) xs) = sign * (x (x) x)(s (x) s); delta0 = -b2 v contributes -sign
    let sign = koszul_sign_oracle(&[1, 1], &[-1, -1], &[1, 2]).unwrap();
    let r = Ring::even_truncated(7, 2);
    let expected = r.monomial(2, -i64::from(sign));
    assert_eq!(bar.coalgebra.d0().entry(xx, 0), expected);
    assert_eq!(expected, r.monomial(2, 1));
    // m0 = 0, so the bar construction is augmented curved: curved through delta0 alone
    assert!(is_ac(&bar.coalgebra));

}

#[test]
fn cobar_of_the_curved_ground_ring() {
    // k with curvature m0 = u; its bar construction is k with delta0 = -u
    let r = Ring::even_truncated(7, 2);
    let k = GradedModule::unit(r);
    let base = ground_algebra(r);
    let a = UCCAlgebra::new(
        base.module(),
        base.m2().clone(),
        base.m1().clone(),
        map(&k, base.module(), 2, vec![(0, 0, r.monomial(2, 1))]),
        base.eta().clone(),
        base.v().clone(),
    )
    .unwrap();
    assert!(validate_ucc_algebra(&a).unwrap().pass);
    let c = bar_of_algebra(&a, 4).unwrap().coalgebra;
    assert_eq!(c.d0().entry(0, 0), r.monomial(2, -1));
    assert!(cobar_object(&c, 4).is_err(), "truncated input");
    // no letters, so nothing was cut off
    let c = c.without_truncation();
    let cob = cobar_object(&c, 4).unwrap();
    assert!(!cob.algebra.m0().is_zero());
    assert_eq!(cob.algebra.m0().entry(0, 0).homogeneous_degree(), Some(2));
    assert!(cob.algebra.m0().compose(cob.algebra.m1()).unwrap().is_zero());
    assert!(validate_ucc_algebra(&cob.algebra).unwrap().pass);
}

#[test]
fn identity_morphisms_are_preserved() {
    let a = truncated_poly(2, 3);
    let ba = bar_of_algebra(&a, 4).unwrap();
    let g = bar_morphism(&AlgMorphism::identity(&a), &a, &a, 4).unwrap();
    assert_eq!(g, CoalgMorphism::identity(&ba.coalgebra));
    let c = dual_poly(2, 3);
    let cc = cobar_object(&c, 4).unwrap();
    let f = cobar_morphism(&CoalgMorphism::identity(&c), &c, &c, 4).unwrap();
    assert_eq!(f, AlgMorphism::identity(&cc.algebra));
}

#[test]
fn ground_ring_as_ainf_algebra() {
    let k = CurvedAInfAlgebra::from_ucc(&ground_algebra(F7)).unwrap();
    assert!(validate_cainf_algebra(&k, 4).unwrap().pass);
    let a = CurvedAInfAlgebra::from_ucc(&truncated_poly(4, 1)).unwrap();
    assert!(validate_cainf_algebra(&a, 4).unwrap().pass);
}

#[test]
fn perturbing_b2_is_detected() {
    let a = CurvedAInfAlgebra::from_ucc(&truncated_poly(4, 1)).unwrap();
    let b2 = a.b(2);
    let (i, j, c) = b2.entries()[0].clone();
    let patch = GradedMap::from_entries(b2.dom(), b2.cod(), b2.deg(), vec![(i, j, c)]).unwrap();
    let mut bs: Vec<GradedMap> = (0..a.arity_len()).map(|n| a.b(n)).collect();
    bs[2] = b2.add(&patch).unwrap();
    let broken = CurvedAInfAlgebra::new(a.module(), bs, a.eta_bold().clone(), a.v_bold().clone()).unwrap();
    let r = validate_cainf_algebra(&broken, 4).unwrap();
    assert!(!r.pass);
    assert!(r.witness_word.is_some());
}
