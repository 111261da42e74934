use curvedalg::adjoint::{random_witness, WitnessFamily};
use curvedalg::barcobar::{bar_of_algebra, cobar_object};
use curvedalg::curved::gen::{
    random_alg_morphism_from, random_ca_coalgebra, random_cainf_algebra, random_coalg_morphism_from,
    random_ucc_algebra,
};
use curvedalg::curved::CurvedAInfCoalgebra;
use curvedalg::json::{self, Document, FormatError, WitnessData};
use curvedalg::Ring;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rings() -> [Ring; 4] {
    [Ring::prime_field(7), Ring::Integers, Ring::odd_exterior(3), Ring::even_truncated(5, 3)]
}

fn round_trip(doc: &Document) -> String {
    let s = json::to_string(&json::document_to_value(doc).unwrap());
    let back = json::parse_str(&s).unwrap();
    let again = json::to_string(&json::document_to_value(&back).unwrap());
    assert_eq!(s, again);
    s
}

fn documents(ring: Ring, seed: u64) -> Vec<Document> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for dim in 1..=3 {
        let a = random_ucc_algebra(&mut rng, ring, dim).unwrap();
        let c = random_ca_coalgebra(&mut rng, ring, dim).unwrap();
        let (b, f) = random_alg_morphism_from(&mut rng, &a).unwrap();
        let (d, g) = random_coalg_morphism_from(&mut rng, &c).unwrap();
        out.push(Document::CainfCoalgebra(CurvedAInfCoalgebra::from_ca(&c).unwrap()));
        out.push(Document::CaCoalgebra(bar_of_algebra(&a, 4).unwrap().coalgebra));
        out.push(Document::UccAlgebra(cobar_object(&c, 4).unwrap().algebra));
        out.push(Document::AlgMorphism { source: a.clone(), target: b, f });
        out.push(Document::CoalgMorphism { source: c.clone(), target: d, g });
        out.push(Document::UccAlgebra(a));
        out.push(Document::CaCoalgebra(c));
    }
    out.push(Document::CainfAlgebra(random_cainf_algebra(&mut rng, ring, 2, 4).unwrap()));
    for family in WitnessFamily::ALL {
        let w = random_witness(&mut rng, ring, family).unwrap();
        out.push(Document::TwistingCochain {
            c: w.c.clone(),
            a: w.a.clone(),
            theta: w.theta.theta().clone(),
        });
        out.push(Document::Witness(Box::new(WitnessData::from(&w))));
    }
    out
}

#[test]
fn every_document_type_round_trips_byte_for_byte() {
    for ring in rings() {
        for doc in documents(ring, 61) {
            let s = round_trip(&doc);
            assert!(s.ends_with('\n'));
            assert!(!s.contains('.'), "no floats: {s}");
        }
    }
}

#[test]
fn parsing_recovers_the_same_objects() {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let a = random_ucc_algebra(&mut rng, Ring::odd_exterior(5), 3).unwrap();
    let s = json::to_string(&json::ucc_to_value(&a));
    let Document::UccAlgebra(b) = json::parse_str(&s).unwrap() else { panic!("wrong type") };
    assert_eq!(a.m2(), b.m2());
    assert_eq!(a.m1(), b.m1());
    assert_eq!(a.m0(), b.m0());
    assert_eq!(a.v(), b.v());

    let bar = bar_of_algebra(&a, 4).unwrap();
    let s = json::to_string(&json::ca_to_value(&bar.coalgebra));
    assert!(s.contains("\"deconcatenation\""));
    let Document::CaCoalgebra(c) = json::parse_str(&s).unwrap() else { panic!("wrong type") };
    assert_eq!(c.truncation(), bar.coalgebra.truncation());
    assert_eq!(c.d1(), bar.coalgebra.d1());
}

#[test]
fn keys_and_entries_are_sorted() {
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let a = random_ucc_algebra(&mut rng, Ring::prime_field(7), 3).unwrap();
    let v = json::ucc_to_value(&a);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let entries = v["m2"]["entries"].as_array().unwrap();
    let pairs: Vec<(u64, u64)> = entries
        .iter()
        .map(|e| (e[0].as_u64().unwrap(), e[1].as_u64().unwrap()))
        .collect();
    let mut sorted = pairs.clone();
    sorted.sort();
    assert_eq!(pairs, sorted);
}

#[test]
fn malformed_input_is_rejected() {
    assert!(matches!(json::parse_str("{"), Err(FormatError::Json(_))));
    assert!(matches!(json::parse_str("{\"type\": \"nonsense\"}"), Err(FormatError::Field(_))));
    assert!(json::parse_str("{\"type\": \"ucc_algebra\"}").is_err());

    let mut rng = ChaCha8Rng::seed_from_u64(64);
    let a = random_ucc_algebra(&mut rng, Ring::prime_field(7), 2).unwrap();
    let mut v = json::ucc_to_value(&a);
    v["A"]["ring"] = serde_json::json!({"kind": "prime_field", "p": 8});
    assert!(json::document_from_value(&v).is_err());

    let mut v = json::ucc_to_value(&a);
    v["m1"]["entries"] = serde_json::json!([[0, 0, [[0, 1]]]]);
    assert!(json::document_from_value(&v).is_err(), "degree-inconsistent entry");
}
