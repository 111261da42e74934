//! Seeded property suite behind `curvedalg selftest`.

use std::collections::BTreeMap;
use std::thread;

use curvedalg::adjoint::{
    adjoint_bwd, adjoint_fwd, alg_from_theta_bar, check_naturality_in_a, check_naturality_in_c,
    coalg_from_theta_bar, coalg_to_twisting_cochain, generator_component, letter_component,
    random_witness, split_alg_equations, split_coalg_equations, theta_bar_of_alg,
    to_twisting_cochain, tw_to_alg, tw_to_coalg, validate_witness_parts, WitnessFamily,
};
use curvedalg::barcobar::{bar_morphism, bar_object, bar_of_algebra, cobar_morphism, cobar_object};
use curvedalg::curved::gen::{
    invert_unipotent_coalg_morphism, perturb_map, random_alg_morphism_from, random_ca_coalgebra,
    random_cainf_algebra, random_coalg_morphism_from, random_scalar, random_ucc_algebra,
};
use curvedalg::curved::{
    compose_alg_morphisms, compose_coalg_morphisms, validate_alg_morphism, validate_ca_coalgebra,
    validate_cainf_algebra, validate_coalg_morphism, validate_ucc_algebra, UCCAlgebra,
};
use curvedalg::gmod::koszul_sign_oracle;
use curvedalg::json::{self, Document, WitnessData};
use curvedalg::{AlgebraError, GradedMap, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_RINGS: [Ring; 4] = [
    Ring::PrimeField { p: 7 },
    Ring::Integers,
    Ring::OddExterior { p: 7 },
    Ring::EvenTruncated { p: 7, top: 3 },
];

type Check = Result<bool, AlgebraError>;

#[derive(Debug, Default)]
pub struct Tally {
    /// property -> (passed, run)
    pub counts: BTreeMap<&'static str, (usize, usize)>,
    pub first_failure: Option<String>,
}

impl Tally {
    fn record(&mut self, case: usize, name: &'static str, outcome: Check) {
        let entry = self.counts.entry(name).or_default();
        entry.1 += 1;
        match outcome {
            Ok(true) => entry.0 += 1,
            Ok(false) => {
                self.first_failure
                    .get_or_insert_with(|| format!("{name} failed on case {case}"));
            }
            Err(e) => {
                self.first_failure
                    .get_or_insert_with(|| format!("{name} raised on case {case}: {e}"));
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.counts.values().all(|&(p, n)| p == n)
    }
}

fn ring_seed(seed: u64, ring: Ring) -> u64 {
    // FNV-1a of the ring name, mixed with the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in ring.to_string().bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Negates the `m2` entry `e_0 (x) e_last -> e_last`: a single sign flip in
/// the unit law.
pub fn inject_fault(a: &UCCAlgebra) -> Result<UCCAlgebra, AlgebraError> {
    let n = a.module().rank();
    let last = n - 1;
    let row = last;
    let c = a.m2().entry(row, last);
    let patch = GradedMap::from_entries(a.m2().dom(), a.m2().cod(), 0, vec![(row, last, c.scale(2))])?;
    UCCAlgebra::new(
        a.module(),
        a.m2().sub(&patch)?,
        a.m1().clone(),
        a.m0().clone(),
        a.eta().clone(),
        a.v().clone(),
    )
}

fn ring_laws<R: Rng>(rng: &mut R, ring: Ring) -> Check {
    let degs = ring.degree_support();
    let pick = |rng: &mut R| {
        let d = degs[rng.gen_range(0..degs.len())];
        (d, random_scalar(rng, ring, d))
    };
    let ((da, a), (db, b), (_, c)) = (pick(rng), pick(rng), pick(rng));
    let assoc = a.mul(&b).mul(&c) == a.mul(&b.mul(&c));
    let distrib = a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c));
    let graded = a.mul(&b) == b.mul(&a).signed(da * db % 2 != 0);
    let unit = a.mul(&ring.one()) == a && a.add(&ring.zero()) == a;
    Ok(assoc && distrib && graded && unit && a.add(&a.neg()).is_zero())
}

/// Koszul sign of a random transposition pattern against the brute-force
/// oracle, computed by counting crossings.
fn koszul_signs<R: Rng>(rng: &mut R) -> Check {
    let n = rng.gen_range(1..6);
    let word: Vec<i32> = (0..n).map(|_| rng.gen_range(-3..4)).collect();
    let mut positions: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
    if positions.is_empty() {
        positions.push(1);
    }
    let ops: Vec<i32> = positions.iter().map(|_| rng.gen_range(-2..3)).collect();
    let mut parity = 0i64;
    for (&p, &f) in positions.iter().zip(&ops) {
        // f passes exactly the letters after position p
        let letters: i64 = word[p..].iter().map(|&d| i64::from(d)).sum();
        parity += i64::from(f) * letters;
    }
    let expected = if parity.rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(koszul_sign_oracle(&word, &ops, &positions)? == expected)
}

fn json_round_trip(doc: &Document) -> Check {
    let s = json::to_string(&json::document_to_value(doc)?);
    let back = json::parse_str(&s).map_err(|e| AlgebraError::InvalidStructure(e.to_string()))?;
    Ok(json::to_string(&json::document_to_value(&back)?) == s)
}

fn run_case(rng: &mut ChaCha8Rng, ring: Ring, i: usize, fault: bool, t: &mut Tally) {
    t.record(i, "ring_laws", ring_laws(rng, ring));
    t.record(i, "koszul_signs", koszul_signs(rng));

    let dim = 1 + i % 4;
    let alg = random_ucc_algebra(rng, ring, dim);
    t.record(
        i,
        "ucc_algebra",
        alg.as_ref().map_err(Clone::clone).and_then(|a| {
            let a = if fault { inject_fault(a)? } else { a.clone() };
            Ok(validate_ucc_algebra(&a)?.pass)
        }),
    );
    let coalg = random_ca_coalgebra(rng, ring, dim);
    t.record(
        i,
        "ca_coalgebra",
        coalg.as_ref().map_err(Clone::clone).and_then(|c| Ok(validate_ca_coalgebra(c)?.pass)),
    );
    let (Ok(alg), Ok(coalg)) = (alg, coalg) else { return };

    t.record(i, "bar_object", (|| Ok(validate_ca_coalgebra(&bar_of_algebra(&alg, 5)?.coalgebra)?.pass))());
    t.record(i, "cobar_object", (|| Ok(validate_ucc_algebra(&cobar_object(&coalg, 4)?.algebra)?.pass))());
    t.record(i, "cainf_bar", (|| {
        let x = random_cainf_algebra(rng, ring, 2 + i % 2, 4)?;
        Ok(validate_cainf_algebra(&x, 4)?.pass && validate_ca_coalgebra(&bar_object(&x, 5)?.coalgebra)?.pass)
    })());

    t.record(i, "bar_functor", (|| {
        let (b, f) = random_alg_morphism_from(rng, &alg)?;
        let (c, g) = random_alg_morphism_from(rng, &b)?;
        let (ba, bb) = (bar_of_algebra(&alg, 4)?, bar_of_algebra(&b, 4)?);
        let bf = bar_morphism(&f, &alg, &b, 4)?;
        let bg = bar_morphism(&g, &b, &c, 4)?;
        Ok(validate_alg_morphism(&f, &alg, &b)?.pass
            && validate_coalg_morphism(&bf, &ba.coalgebra, &bb.coalgebra)?.pass
            && bar_morphism(&compose_alg_morphisms(&f, &g)?, &alg, &c, 4)? == compose_coalg_morphisms(&bf, &bg)?)
    })());
    t.record(i, "cobar_functor", (|| {
        let (d, p) = random_coalg_morphism_from(rng, &coalg)?;
        let (e, q) = random_coalg_morphism_from(rng, &d)?;
        let (cc, cd) = (cobar_object(&coalg, 4)?, cobar_object(&d, 4)?);
        let cp = cobar_morphism(&p, &coalg, &d, 4)?;
        let cq = cobar_morphism(&q, &d, &e, 4)?;
        Ok(validate_coalg_morphism(&p, &coalg, &d)?.pass
            && validate_alg_morphism(&cp, &cc.algebra, &cd.algebra)?.pass
            && cobar_morphism(&compose_coalg_morphisms(&p, &q)?, &coalg, &e, 4)?
                == compose_alg_morphisms(&cp, &cq)?)
    })());

    let family = WitnessFamily::ALL[i % WitnessFamily::ALL.len()];
    let w = match random_witness(rng, ring, family) {
        Ok(w) => w,
        Err(e) => {
            t.record(i, "adjunction_witness", Err(e));
            return;
        }
    };
    let (c, a) = (&w.c, &w.a);
    t.record(i, "adjunction_witness", (|| {
        Ok(validate_witness_parts(c, a, &w.f, &w.g, w.theta.theta(), w.cobar_cap, w.bar_cap)?.pass)
    })());
    t.record(i, "adjunction_round_trip", (|| {
        Ok(adjoint_fwd(&w.f, c, a, w.bar_cap)? == w.g && adjoint_bwd(&w.g, c, a, w.cobar_cap)? == w.f)
    })());
    t.record(i, "twisting_triangle", (|| {
        let th = to_twisting_cochain(&w.f, c, a)?;
        let th2 = coalg_to_twisting_cochain(&w.g, c, a)?;
        let f0 = tw_to_alg(&th, c, a, w.cobar_cap)?;
        let g0 = tw_to_coalg(&th, c, a, w.bar_cap)?;
        Ok(th == th2
            && th == w.theta
            && to_twisting_cochain(&f0, c, a)? == th
            && adjoint_fwd(&f0, c, a, w.bar_cap)? == g0)
    })());
    t.record(i, "split_systems", (|| {
        let tb = theta_bar_of_alg(&w.f, c, a)?;
        let tb = perturb_map(rng, &tb).filter(|_| rng.gen_bool(0.5)).unwrap_or(tb);
        let f = alg_from_theta_bar(&tb, &w.f.und, c, a, w.cobar_cap)?;
        let g = coalg_from_theta_bar(&tb, &w.f.und, c, a, w.bar_cap)?;
        let sa = split_alg_equations(&generator_component(&f, c, a)?, c, a)?;
        let sc = split_coalg_equations(&letter_component(&g, c, a)?, &g.g0, c, a)?;
        Ok(sa == sc)
    })());
    t.record(i, "naturality", (|| {
        let (b, h) = random_alg_morphism_from(rng, a)?;
        let (c2, k) = random_coalg_morphism_from(rng, c)?;
        let j = invert_unipotent_coalg_morphism(&k)?;
        Ok(check_naturality_in_a(&h, &w.f, c, a, &b, w.bar_cap)?.pass
            && check_naturality_in_c(&j, &w.f, &c2, c, a, w.cobar_cap, w.bar_cap)?.pass)
    })());
    t.record(i, "json_round_trip", (|| {
        Ok(json_round_trip(&Document::UccAlgebra(alg.clone()))?
            && json_round_trip(&Document::CaCoalgebra(coalg.clone()))?
            && json_round_trip(&Document::Witness(Box::new(WitnessData::from(&w))))?)
    })());
}

/// Runs `cases` instances on `ring`; deterministic in `(seed, ring)`.
pub fn run_ring(seed: u64, ring: Ring, cases: usize, fault: bool) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(ring_seed(seed, ring));
    let mut t = Tally::default();
    for i in 0..cases {
        run_case(&mut rng, ring, i, fault, &mut t);
    }
    t
}

/// One tally per ring, rings in parallel.
pub fn run(seed: u64, rings: &[Ring], cases: usize, fault: bool) -> Vec<(Ring, Tally)> {
    thread::scope(|s| {
        let handles: Vec<_> = rings
            .iter()
            .map(|&r| s.spawn(move || (r, run_ring(seed, r, cases, fault))))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("selftest worker panicked"))
            .collect()
    })
}
