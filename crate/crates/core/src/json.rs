//! Canonical JSON for rings, modules, maps, structures, morphisms, twisting
//! cochains and adjunction witnesses. Objects have sorted keys and sparse
//! entries are sorted triplets `[row, col, [[degree, coefficient], ..]]`, so
//! serializing a parsed document reproduces it byte for byte.
//!
//! Maps inside a structure omit their domain and codomain, which the
//! structure type determines. Structures on a truncated word module carry a
//! `truncation` object, and their canonical (de)concatenation is written as
//! the string `"concatenation"` / `"deconcatenation"`.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::adjoint::{AdjunctionWitness, WitnessFamily};
use crate::curved::{
    AlgMorphism, CACoalgebra, CoalgMorphism, CurvedAInfAlgebra, CurvedAInfCoalgebra, Report,
    Truncation, UCCAlgebra,
};
use crate::curved::xi_from_delta;
use crate::error::AlgebraError;
use crate::gmod::{GradedMap, GradedModule};
use crate::gring::{Ring, RingElement};
use crate::tca::{concat_product, cut_coproduct, WordModule};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad document: {0}")]
    Field(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError::Field(msg.into())
}

/// Any document the tools read or write.
#[derive(Debug, Clone)]
pub enum Document {
    UccAlgebra(UCCAlgebra),
    CaCoalgebra(CACoalgebra),
    CainfAlgebra(CurvedAInfAlgebra),
    CainfCoalgebra(CurvedAInfCoalgebra),
    AlgMorphism {
        source: UCCAlgebra,
        target: UCCAlgebra,
        f: AlgMorphism,
    },
    CoalgMorphism {
        source: CACoalgebra,
        target: CACoalgebra,
        g: CoalgMorphism,
    },
    TwistingCochain {
        c: CACoalgebra,
        a: UCCAlgebra,
        theta: GradedMap,
    },
    /// An adjunction witness as read from disk; `theta` is not yet validated.
    Witness(Box<WitnessData>),
}

#[derive(Debug, Clone)]
pub struct WitnessData {
    /// `None` for witnesses assembled from user input.
    pub family: Option<WitnessFamily>,
    pub c: CACoalgebra,
    pub a: UCCAlgebra,
    pub f: AlgMorphism,
    pub g: CoalgMorphism,
    pub theta: GradedMap,
    pub cobar_cap: usize,
    pub bar_cap: usize,
}

impl From<&AdjunctionWitness> for WitnessData {
    fn from(w: &AdjunctionWitness) -> WitnessData {
        WitnessData {
            family: Some(w.family),
            c: w.c.clone(),
            a: w.a.clone(),
            f: w.f.clone(),
            g: w.g.clone(),
            theta: w.theta.theta().clone(),
            cobar_cap: w.cobar_cap,
            bar_cap: w.bar_cap,
        }
    }
}

pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn parse_str(s: &str) -> Result<Document, FormatError> {
    document_from_value(&serde_json::from_str(s)?)
}

// ---- leaves

pub fn ring_to_value(r: Ring) -> Value {
    serde_json::to_value(r).expect("ring serializes")
}

pub fn ring_from_value(v: &Value) -> Result<Ring, FormatError> {
    let r: Ring = serde_json::from_value(v.clone())?;
    r.validate()?;
    Ok(r)
}

pub fn element_to_value(e: &RingElement) -> Value {
    Value::Array(e.terms().iter().map(|&(d, c)| json!([d, c])).collect())
}

pub fn element_from_value(ring: Ring, v: &Value) -> Result<RingElement, FormatError> {
    let pairs: Vec<(i32, i64)> = serde_json::from_value(v.clone())?;
    Ok(RingElement::from_terms(ring, &pairs)?)
}

pub fn module_to_value(m: &GradedModule) -> Value {
    json!({"ring": ring_to_value(m.ring()), "gens": m.gens()})
}

pub fn module_from_value(v: &Value) -> Result<GradedModule, FormatError> {
    let ring = ring_from_value(field(v, "ring")?)?;
    let gens: Vec<i32> = serde_json::from_value(field(v, "gens")?.clone())?;
    if gens.is_empty() {
        return Err(bad("a module needs at least one generator"));
    }
    Ok(GradedModule::new(ring, gens))
}

/// `{"deg", "entries"}`.
pub fn map_body(f: &GradedMap) -> Value {
    let entries: Vec<Value> = f
        .entries()
        .into_iter()
        .map(|(i, j, c)| json!([i, j, element_to_value(&c)]))
        .collect();
    json!({"deg": f.deg(), "entries": entries})
}

pub fn map_from_body(dom: &GradedModule, cod: &GradedModule, v: &Value) -> Result<GradedMap, FormatError> {
    let deg: i32 = serde_json::from_value(field(v, "deg")?.clone())?;
    let raw: Vec<(usize, usize, Value)> = serde_json::from_value(field(v, "entries")?.clone())?;
    let mut entries = Vec::with_capacity(raw.len());
    for (i, j, c) in raw {
        if i >= dom.rank() || j >= cod.rank() {
            return Err(bad(format!("entry ({i}, {j}) outside a {}x{} matrix", dom.rank(), cod.rank())));
        }
        entries.push((i, j, element_from_value(dom.ring(), &c)?));
    }
    Ok(GradedMap::from_entries(dom, cod, deg, entries)?)
}

/// `{"dom", "cod", "deg", "entries"}`.
pub fn map_to_value(f: &GradedMap) -> Value {
    let mut v = map_body(f);
    let o = v.as_object_mut().expect("object");
    o.insert("dom".into(), module_to_value(f.dom()));
    o.insert("cod".into(), module_to_value(f.cod()));
    v
}

pub fn map_from_value(v: &Value) -> Result<GradedMap, FormatError> {
    map_from_body(
        &module_from_value(field(v, "dom")?)?,
        &module_from_value(field(v, "cod")?)?,
        v,
    )
}

pub fn report_to_value(r: &Report) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value, FormatError> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize, FormatError> {
    field(v, key)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| bad(format!("`{key}` must be a non-negative integer")))
}

fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

// ---- truncation

fn truncation_to_value(t: &Truncation) -> Value {
    json!({"cap": t.cap, "window": t.window, "letter_rank": t.letter_rank})
}

/// The word module of a truncated structure: the letters are the basis
/// words of length one.
fn words_of(m: &GradedModule, t: &Value) -> Result<(WordModule, usize), FormatError> {
    let (cap, window, r) = (usize_field(t, "cap")?, usize_field(t, "window")?, usize_field(t, "letter_rank")?);
    if m.rank() < 1 + r || window > cap {
        return Err(bad("truncation does not fit the module"));
    }
    let letter = GradedModule::new(m.ring(), (1..=r).map(|i| m.degree(i)).collect());
    let words = WordModule::new(&letter, cap);
    if words.module() != m {
        return Err(bad("module is not the word module described by `truncation`"));
    }
    Ok((words, window))
}

/// Smallest cap `N` with `sum_{k <= N} r^k = rank`, if any.
pub fn infer_cap(letter_rank: usize, rank: usize) -> Option<usize> {
    if letter_rank == 0 {
        return (rank == 1).then_some(0);
    }
    let (mut total, mut power, mut n) = (1usize, 1usize, 0usize);
    while total < rank {
        power = power.checked_mul(letter_rank)?;
        total = total.checked_add(power)?;
        n += 1;
    }
    (total == rank).then_some(n)
}

// ---- structures

pub fn ucc_to_value(a: &UCCAlgebra) -> Value {
    let mut pairs = vec![
        ("type", json!("ucc_algebra")),
        ("A", module_to_value(a.module())),
        ("m1", map_body(a.m1())),
        ("m0", map_body(a.m0())),
        ("eta", map_body(a.eta())),
        ("v", map_body(a.v())),
    ];
    match a.truncation() {
        Some(t) => {
            pairs.push(("m2", json!("concatenation")));
            pairs.push(("truncation", truncation_to_value(t)));
        }
        None => pairs.push(("m2", map_body(a.m2()))),
    }
    object(pairs)
}

pub fn ucc_from_value(v: &Value) -> Result<UCCAlgebra, FormatError> {
    expect_type(v, "ucc_algebra")?;
    let a = module_from_value(field(v, "A")?)?;
    let k = GradedModule::unit(a.ring());
    let trunc = v.get("truncation").map(|t| words_of(&a, t)).transpose()?;
    let m2 = match (&trunc, field(v, "m2")?) {
        (Some((w, _)), Value::String(s)) if s == "concatenation" => concat_product(w),
        (_, body) => map_from_body(&a.tensor(&a)?, &a, body)?,
    };
    let alg = UCCAlgebra::new(
        &a,
        m2,
        map_from_body(&a, &a, field(v, "m1")?)?,
        map_from_body(&k, &a, field(v, "m0")?)?,
        map_from_body(&k, &a, field(v, "eta")?)?,
        map_from_body(&a, &k, field(v, "v")?)?,
    )?;
    Ok(match trunc {
        Some((w, window)) => alg.with_truncation(Truncation::new(&w, window)),
        None => alg,
    })
}

pub fn ca_to_value(c: &CACoalgebra) -> Value {
    let mut pairs = vec![
        ("type", json!("ca_coalgebra")),
        ("C", module_to_value(c.module())),
        ("delta1", map_body(c.d1())),
        ("delta0", map_body(c.d0())),
        ("eps", map_body(c.eps())),
        ("w", map_body(c.w())),
    ];
    match c.truncation() {
        Some(t) => {
            pairs.push(("delta2", json!("deconcatenation")));
            pairs.push(("truncation", truncation_to_value(t)));
        }
        None => pairs.push(("delta2", map_body(c.d2()))),
    }
    object(pairs)
}

pub fn ca_from_value(v: &Value) -> Result<CACoalgebra, FormatError> {
    expect_type(v, "ca_coalgebra")?;
    let c = module_from_value(field(v, "C")?)?;
    let k = GradedModule::unit(c.ring());
    let trunc = v.get("truncation").map(|t| words_of(&c, t)).transpose()?;
    let d2 = match (&trunc, field(v, "delta2")?) {
        (Some((w, _)), Value::String(s)) if s == "deconcatenation" => cut_coproduct(w),
        (_, body) => map_from_body(&c, &c.tensor(&c)?, body)?,
    };
    let coalg = CACoalgebra::new(
        &c,
        d2,
        map_from_body(&c, &c, field(v, "delta1")?)?,
        map_from_body(&c, &k, field(v, "delta0")?)?,
        map_from_body(&c, &k, field(v, "eps")?)?,
        map_from_body(&k, &c, field(v, "w")?)?,
    )?;
    Ok(match trunc {
        Some((w, window)) => coalg.with_truncation(Truncation::new(&w, window)),
        None => coalg,
    })
}

/// Stored in unshifted form: `m_0, m_1, ...`, `eta`, `v`.
pub fn cainf_algebra_to_value(a: &CurvedAInfAlgebra) -> Result<Value, AlgebraError> {
    let m: Vec<Value> = a.m_family()?.iter().map(map_body).collect();
    Ok(json!({
        "type": "cainf_algebra",
        "A": module_to_value(a.module()),
        "m": m,
        "eta": map_body(&a.eta_bold().relabel_shift(0, -1)),
        "v": map_body(&a.v_bold().relabel_shift(-1, 0)),
    }))
}

pub fn cainf_algebra_from_value(v: &Value) -> Result<CurvedAInfAlgebra, FormatError> {
    expect_type(v, "cainf_algebra")?;
    let a = module_from_value(field(v, "A")?)?;
    let k = GradedModule::unit(a.ring());
    let bodies = field(v, "m")?.as_array().ok_or_else(|| bad("`m` must be an array"))?;
    let m = bodies
        .iter()
        .enumerate()
        .map(|(n, b)| map_from_body(&a.tensor_power(n), &a, b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CurvedAInfAlgebra::from_m_family(
        &a,
        &m,
        &map_from_body(&k, &a, field(v, "eta")?)?,
        &map_from_body(&a, &k, field(v, "v")?)?,
    )?)
}

/// Stored in unshifted form: `delta_0, delta_1, ...`, `eps`, `w`.
pub fn cainf_coalgebra_to_value(c: &CurvedAInfCoalgebra) -> Result<Value, AlgebraError> {
    let delta: Vec<Value> = c.delta_family()?.iter().map(map_body).collect();
    Ok(json!({
        "type": "cainf_coalgebra",
        "C": module_to_value(c.module()),
        "delta": delta,
        "eps": map_body(&c.eps_bold().relabel_shift(1, 0)),
        "w": map_body(&c.w_bold().relabel_shift(0, 1)),
    }))
}

pub fn cainf_coalgebra_from_value(v: &Value) -> Result<CurvedAInfCoalgebra, FormatError> {
    expect_type(v, "cainf_coalgebra")?;
    let c = module_from_value(field(v, "C")?)?;
    let k = GradedModule::unit(c.ring());
    let bodies = field(v, "delta")?
        .as_array()
        .ok_or_else(|| bad("`delta` must be an array"))?;
    let xi = bodies
        .iter()
        .enumerate()
        .map(|(n, b)| -> Result<GradedMap, FormatError> {
            let d = map_from_body(&c, &c.tensor_power(n), b)?;
            Ok(xi_from_delta(&c, n, &d)?)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let eps = map_from_body(&c, &k, field(v, "eps")?)?;
    let w = map_from_body(&k, &c, field(v, "w")?)?;
    Ok(CurvedAInfCoalgebra::new(&c, xi, eps.relabel_shift(-1, 0), w.relabel_shift(0, -1))?)
}

// ---- morphisms and the rest

fn alg_morphism_body(f: &AlgMorphism) -> Value {
    json!({"f1": map_body(&f.f1), "und": element_to_value(&f.und)})
}

fn alg_morphism_from_body(a: &GradedModule, b: &GradedModule, v: &Value) -> Result<AlgMorphism, FormatError> {
    Ok(AlgMorphism::new(
        map_from_body(a, b, field(v, "f1")?)?,
        element_from_value(a.ring(), field(v, "und")?)?,
    )?)
}

fn coalg_morphism_body(g: &CoalgMorphism) -> Value {
    json!({"g1": map_body(&g.g1), "g0": map_body(&g.g0)})
}

fn coalg_morphism_from_body(c: &GradedModule, d: &GradedModule, v: &Value) -> Result<CoalgMorphism, FormatError> {
    let k = GradedModule::unit(c.ring());
    Ok(CoalgMorphism::new(
        map_from_body(c, d, field(v, "g1")?)?,
        map_from_body(c, &k, field(v, "g0")?)?,
    )?)
}

pub fn alg_morphism_to_value(f: &AlgMorphism, source: &UCCAlgebra, target: &UCCAlgebra) -> Value {
    let mut v = alg_morphism_body(f);
    let o = v.as_object_mut().expect("object");
    o.insert("type".into(), json!("alg_morphism"));
    o.insert("source".into(), ucc_to_value(source));
    o.insert("target".into(), ucc_to_value(target));
    v
}

pub fn coalg_morphism_to_value(g: &CoalgMorphism, source: &CACoalgebra, target: &CACoalgebra) -> Value {
    let mut v = coalg_morphism_body(g);
    let o = v.as_object_mut().expect("object");
    o.insert("type".into(), json!("coalg_morphism"));
    o.insert("source".into(), ca_to_value(source));
    o.insert("target".into(), ca_to_value(target));
    v
}

pub fn twisting_cochain_to_value(theta: &GradedMap, c: &CACoalgebra, a: &UCCAlgebra) -> Value {
    json!({
        "type": "twisting_cochain",
        "C": ca_to_value(c),
        "A": ucc_to_value(a),
        "theta": map_body(theta),
    })
}

fn family_name(f: WitnessFamily) -> &'static str {
    match f {
        WitnessFamily::ZeroCochain => "zero_cochain",
        WitnessFamily::BarOfMorphism => "bar_of_morphism",
        WitnessFamily::TrivialCoextension => "trivial_coextension",
    }
}

pub fn witness_to_value(w: &WitnessData) -> Value {
    json!({
        "type": "adjunction_witness",
        "family": w.family.map(family_name),
        "C": ca_to_value(&w.c),
        "A": ucc_to_value(&w.a),
        "f": alg_morphism_body(&w.f),
        "g": coalg_morphism_body(&w.g),
        "theta": map_body(&w.theta),
        "cobar_cap": w.cobar_cap,
        "bar_cap": w.bar_cap,
    })
}

fn witness_from_value(v: &Value) -> Result<WitnessData, FormatError> {
    let family = match field(v, "family")? {
        Value::Null => None,
        f => Some(match f.as_str() {
            Some("zero_cochain") => WitnessFamily::ZeroCochain,
            Some("bar_of_morphism") => WitnessFamily::BarOfMorphism,
            Some("trivial_coextension") => WitnessFamily::TrivialCoextension,
            _ => return Err(bad("unknown witness family")),
        }),
    };
    let c = ca_from_value(field(v, "C")?)?;
    let a = ucc_from_value(field(v, "A")?)?;
    let (cobar_cap, bar_cap) = (usize_field(v, "cobar_cap")?, usize_field(v, "bar_cap")?);
    let cobar = WordModule::new(&crate::barcobar::cobar_letter(&c), cobar_cap);
    let bar = WordModule::new(
        &crate::barcobar::bar_letter(&CurvedAInfAlgebra::from_ucc(&a)?),
        bar_cap,
    );
    let f = alg_morphism_from_body(cobar.module(), a.module(), field(v, "f")?)?;
    let g = coalg_morphism_from_body(c.module(), bar.module(), field(v, "g")?)?;
    let theta = map_from_body(c.module(), a.module(), field(v, "theta")?)?;
    Ok(WitnessData {
        family,
        c,
        a,
        f,
        g,
        theta,
        cobar_cap,
        bar_cap,
    })
}

fn expect_type(v: &Value, t: &str) -> Result<(), FormatError> {
    match v.get("type").and_then(Value::as_str) {
        Some(s) if s == t => Ok(()),
        other => Err(bad(format!("expected type `{t}`, found {other:?}"))),
    }
}

pub fn document_to_value(d: &Document) -> Result<Value, AlgebraError> {
    Ok(match d {
        Document::UccAlgebra(a) => ucc_to_value(a),
        Document::CaCoalgebra(c) => ca_to_value(c),
        Document::CainfAlgebra(a) => cainf_algebra_to_value(a)?,
        Document::CainfCoalgebra(c) => cainf_coalgebra_to_value(c)?,
        Document::AlgMorphism { source, target, f } => alg_morphism_to_value(f, source, target),
        Document::CoalgMorphism { source, target, g } => coalg_morphism_to_value(g, source, target),
        Document::TwistingCochain { c, a, theta } => twisting_cochain_to_value(theta, c, a),
        Document::Witness(w) => witness_to_value(w),
    })
}

pub fn document_from_value(v: &Value) -> Result<Document, FormatError> {
    let t = v
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing `type`"))?;
    Ok(match t {
        "ucc_algebra" => Document::UccAlgebra(ucc_from_value(v)?),
        "ca_coalgebra" => Document::CaCoalgebra(ca_from_value(v)?),
        "cainf_algebra" => Document::CainfAlgebra(cainf_algebra_from_value(v)?),
        "cainf_coalgebra" => Document::CainfCoalgebra(cainf_coalgebra_from_value(v)?),
        "alg_morphism" => {
            let source = ucc_from_value(field(v, "source")?)?;
            let target = ucc_from_value(field(v, "target")?)?;
            let f = alg_morphism_from_body(source.module(), target.module(), v)?;
            Document::AlgMorphism { source, target, f }
        }
        "coalg_morphism" => {
            let source = ca_from_value(field(v, "source")?)?;
            let target = ca_from_value(field(v, "target")?)?;
            let g = coalg_morphism_from_body(source.module(), target.module(), v)?;
            Document::CoalgMorphism { source, target, g }
        }
        "twisting_cochain" => {
            let c = ca_from_value(field(v, "C")?)?;
            let a = ucc_from_value(field(v, "A")?)?;
            let theta = map_from_body(c.module(), a.module(), field(v, "theta")?)?;
            Document::TwistingCochain { c, a, theta }
        }
        "adjunction_witness" => Document::Witness(Box::new(witness_from_value(v)?)),
        other => return Err(bad(format!("unknown type `{other}`"))),
    })
}
