use curvedalg::curved::gen::{random_map, random_scalar};
use curvedalg::gmod::{koszul_sign_oracle, shift_map, tensor_map};
use curvedalg::linsolve::MapUnknowns;
use curvedalg::tca::{
    algebra_hom_from_components, coalgebra_hom_from_components, coderivation_from_components,
    concat_product, cut_coproduct, derivation_from_components, WordModule,
};
use curvedalg::{Expr, GradedMap, GradedModule, Ring, RingElement};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RINGS: [Ring; 5] = [
    Ring::PrimeField { p: 7 },
    Ring::PrimeField { p: 2 },
    Ring::Integers,
    Ring::OddExterior { p: 7 },
    Ring::EvenTruncated { p: 7, top: 3 },
];

fn element(rng: &mut ChaCha8Rng, ring: Ring) -> RingElement {
    ring.degree_support()
        .into_iter()
        .fold(ring.zero(), |acc, d| acc.add(&random_scalar(rng, ring, d)))
}

fn homogeneous(rng: &mut ChaCha8Rng, ring: Ring) -> (i32, RingElement) {
    let degs = ring.degree_support();
    let d = degs[rng.gen_range(0..degs.len())];
    (d, random_scalar(rng, ring, d))
}

fn random_module(rng: &mut ChaCha8Rng, ring: Ring, max_rank: usize) -> GradedModule {
    let n = rng.gen_range(1..=max_rank);
    GradedModule::new(ring, (0..n).map(|_| rng.gen_range(-2..=2)).collect())
}

fn any_map(rng: &mut ChaCha8Rng, dom: &GradedModule, cod: &GradedModule, deg: i32) -> GradedMap {
    let slots = MapUnknowns::new(dom, cod, deg, |_, _| true);
    random_map(rng, &slots, dom.ring(), 0.6)
}

fn ring_of(i: usize) -> Ring {
    RINGS[i % RINGS.len()]
}

/// Rows of `lhs` and `rhs` that agree, skipping rows either side truncated.
fn agree_on(lhs: &Expr<'_>, rhs: &Expr<'_>, rows: impl Iterator<Item = usize>) -> bool {
    rows.into_iter().all(|i| {
        let (a, la) = lhs.eval_basis(i);
        let (b, lb) = rhs.eval_basis(i);
        la || lb || a == b
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn ring_laws(seed: u64, r in 0usize..5) {
        let ring = ring_of(r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (element(&mut rng, ring), element(&mut rng, ring), element(&mut rng, ring));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&ring.one()), a.clone());
        prop_assert!(a.add(&a.neg()).is_zero());
        let ((da, x), (db, y)) = (homogeneous(&mut rng, ring), homogeneous(&mut rng, ring));
        prop_assert_eq!(x.mul(&y), y.mul(&x).signed(da * db % 2 != 0));
        if da % 2 != 0 {
            prop_assert!(x.mul(&x).is_zero());
        }
    }
}

/// The sign picked up by `(e_1 (x) .. (x) e_n).(1 .. f_j .. 1)` as built from
/// `tensor_map`, with 1-dimensional factors and `f_j: e -> e'` of degree `ops[j]`.
fn composite_sign(ring: Ring, word: &[i32], ops: &[i32], positions: &[usize]) -> i64 {
    let mut total: Option<GradedMap> = None;
    let mut op = 0;
    for (i, &d) in word.iter().enumerate() {
        let m = GradedModule::new(ring, vec![d]);
        let f = if op < positions.len() && positions[op] == i + 1 {
            let cod = GradedModule::new(ring, vec![d + ops[op]]);
            op += 1;
            GradedMap::from_entries(&m, &cod, ops[op - 1], vec![(0, 0, ring.one())]).unwrap()
        } else {
            GradedMap::identity(&m)
        };
        total = Some(match total {
            None => f,
            Some(t) => tensor_map(&t, &f).unwrap(),
        });
    }
    let e = total.unwrap().entry(0, 0);
    if e == ring.one() {
        1
    } else {
        assert_eq!(e, ring.one().neg());
        -1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn koszul_sign_oracle_matches_tensor_maps(
        seed: u64,
        odd_ring: bool,
        word in prop::collection::vec(-3i32..=3, 1..6),
    ) {
        let ring = if odd_ring { Ring::odd_exterior(7) } else { Ring::prime_field(7) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let positions: Vec<usize> = (1..=word.len()).filter(|_| rng.gen_bool(0.5)).collect();
        let ops: Vec<i32> = positions.iter().map(|_| rng.gen_range(-2..=2)).collect();
        let oracle = koszul_sign_oracle(&word, &ops, &positions).unwrap();
        prop_assert_eq!(i64::from(oracle), composite_sign(ring, &word, &ops, &positions));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn interchange_and_tensor_functoriality(seed: u64, r in 0usize..5) {
        let ring = ring_of(r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, n, p, q, s, t) = (
            random_module(&mut rng, ring, 2),
            random_module(&mut rng, ring, 2),
            random_module(&mut rng, ring, 2),
            random_module(&mut rng, ring, 2),
            random_module(&mut rng, ring, 2),
            random_module(&mut rng, ring, 2),
        );
        let (df, dg) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        let f = any_map(&mut rng, &m, &n, df);
        let g = any_map(&mut rng, &p, &q, dg);
        let fg = tensor_map(&f, &g).unwrap();
        let f1 = tensor_map(&f, &GradedMap::identity(&p)).unwrap();
        let g1 = tensor_map(&GradedMap::identity(&n), &g).unwrap();
        prop_assert_eq!(f1.compose(&g1).unwrap(), fg.clone());
        let g2 = tensor_map(&GradedMap::identity(&m), &g).unwrap();
        let f2 = tensor_map(&f, &GradedMap::identity(&q)).unwrap();
        let swapped = if df * dg % 2 != 0 { fg.neg() } else { fg.clone() };
        prop_assert_eq!(g2.compose(&f2).unwrap(), swapped);

        // (f (x) g)(f' (x) g') = (-1)^{|g||f'|} (f f') (x) (g g')
        let (dh, dk) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        let h = any_map(&mut rng, &n, &s, dh);
        let k = any_map(&mut rng, &q, &t, dk);
        let lhs = fg.compose(&tensor_map(&h, &k).unwrap()).unwrap();
        let rhs = tensor_map(&f.compose(&h).unwrap(), &g.compose(&k).unwrap()).unwrap();
        let rhs = if dg * dh % 2 != 0 { rhs.neg() } else { rhs };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shifts_compose(seed: u64, r in 0usize..5, a in -3i32..=3, b in -3i32..=3) {
        let ring = ring_of(r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, n) = (random_module(&mut rng, ring, 3), random_module(&mut rng, ring, 3));
        let deg = rng.gen_range(-2..=2);
        let f = any_map(&mut rng, &m, &n, deg);
        prop_assert_eq!(shift_map(&shift_map(&f, a), b), shift_map(&f, a + b));
        prop_assert_eq!(shift_map(&f, 0), f.clone());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn coderivations_satisfy_co_leibniz(seed: u64, r in 0usize..5) {
        let ring = ring_of(r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_module(&mut rng, ring, 2);
        let w = WordModule::new(&x, 4);
        let comps: Vec<GradedMap> = (0..3).map(|k| any_map(&mut rng, &w.component(k), &x, 1)).collect();
        let d = coderivation_from_components(&w, &comps).unwrap();
        let delta = cut_coproduct(&w);
        let id = Expr::id(w.module());
        let lhs = d.ex().then(delta.ex()).unwrap();
        let rhs = delta.ex().then(d.ex().tensor(id.clone()).unwrap().plus(id.tensor(d.ex()).unwrap()).unwrap()).unwrap();
        prop_assert!(agree_on(&lhs, &rhs, w.words_up_to(3)));
    }

    #[test]
    fn derivations_satisfy_leibniz(seed: u64, r in 0usize..5) {
        let ring = ring_of(r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_module(&mut rng, ring, 2);
        let w = WordModule::new(&x, 4);
        let comps: Vec<GradedMap> = (0..3).map(|k| any_map(&mut rng, &x, &w.component(k), 1)).collect();
        let d = derivation_from_components(&w, &comps).unwrap();
        let m2 = concat_product(&w);
        let id = Expr::id(w.module());
        let lhs = m2.ex().then(d.ex()).unwrap();
        let rhs = d.ex().tensor(id.clone()).unwrap().plus(id.tensor(d.ex()).unwrap()).unwrap().then(m2.ex()).unwrap();
        let rank = w.rank();
        let short = (0..rank * rank).filter(|i| w.length(i / rank) + w.length(i % rank) <= 3);
        prop_assert!(agree_on(&lhs, &rhs, short));
    }

    #[test]
    fn coalgebra_homs_are_comultiplicative(seed: u64, r in 0usize..5) {
        let ring = ring_of(r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_module(&mut rng, ring, 2), random_module(&mut rng, ring, 2));
        let (src, dst) = (WordModule::new(&x, 4), WordModule::new(&y, 4));
        let mut comps = vec![GradedMap::zero(&src.component(0), &y, 0)];
        comps.extend((1..4).map(|k| any_map(&mut rng, &src.component(k), &y, 0)));
        let f = coalgebra_hom_from_components(&src, &dst, &comps).unwrap();
        let (ds, dd) = (cut_coproduct(&src), cut_coproduct(&dst));
        let lhs = f.ex().then(dd.ex()).unwrap();
        let rhs = ds.ex().then(f.ex().tensor(f.ex()).unwrap()).unwrap();
        prop_assert!(agree_on(&lhs, &rhs, 0..src.rank()));
    }

    #[test]
    fn algebra_homs_are_multiplicative(seed: u64, r in 0usize..5) {
        let ring = ring_of(r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_module(&mut rng, ring, 2), random_module(&mut rng, ring, 2));
        let (src, dst) = (WordModule::new(&x, 3), WordModule::new(&y, 6));
        let comps: Vec<GradedMap> = (0..3).map(|k| any_map(&mut rng, &x, &dst.component(k), 0)).collect();
        let g = algebra_hom_from_components(&src, &dst, &comps).unwrap();
        let (ms, md) = (concat_product(&src), concat_product(&dst));
        let lhs = ms.ex().then(g.ex()).unwrap();
        let rhs = g.ex().tensor(g.ex()).unwrap().then(md.ex()).unwrap();
        let rank = src.rank();
        let short = (0..rank * rank).filter(|i| src.length(i / rank) + src.length(i % rank) <= 3);
        prop_assert!(agree_on(&lhs, &rhs, short));
    }
}
