//! Seeded random instances: unit-complemented curved algebras, curved
//! augmented coalgebras, curved A-infinity algebras, and morphisms out of a
//! given structure.
//!
//! Associative multiplications come from a few small families; differentials
//! and curvatures are then sampled from the solution spaces of the (linear)
//! remaining axioms, and the result is transported along a random unipotent
//! change of basis so that structure constants are dense.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{
    validate_ca_coalgebra, validate_cainf_algebra, validate_ucc_algebra, AlgMorphism, CACoalgebra,
    CoalgMorphism, CurvedAInfAlgebra, UCCAlgebra,
};
use crate::error::AlgebraError;
use crate::gmod::{Expr, GradedMap, GradedModule};
use crate::gring::{Ring, RingElement};
use crate::linsolve::{solve_affine, AffineSolution, MapUnknowns};

/// A random integer coefficient suited to the ring.
pub fn random_coefficient<R: Rng>(rng: &mut R, ring: Ring) -> i64 {
    match ring.characteristic() {
        Some(p) => rng.gen_range(0..p as i64),
        None => rng.gen_range(-2..=2),
    }
}

/// A random map on the given slots, each slot nonzero with probability `density`.
pub fn random_map<R: Rng>(
    rng: &mut R,
    slots: &MapUnknowns,
    ring: Ring,
    density: f64,
) -> GradedMap {
    let coeffs: Vec<i64> = (0..slots.len())
        .map(|_| {
            if rng.gen_bool(density) {
                random_coefficient(rng, ring)
            } else {
                0
            }
        })
        .collect();
    slots.map(&coeffs)
}

/// A random element of the degree-`deg` part of the ring.
pub fn random_scalar<R: Rng>(rng: &mut R, ring: Ring, deg: i32) -> RingElement {
    if ring.supports_degree(deg) {
        ring.monomial(deg, random_coefficient(rng, ring))
    } else {
        ring.zero()
    }
}

/// Inverse of `1 + N` with `N` nilpotent.
pub fn unipotent_inverse(phi: &GradedMap) -> Result<GradedMap, AlgebraError> {
    let m = phi.dom().clone();
    let id = GradedMap::identity(&m);
    let neg_n = id.sub(phi)?;
    let mut inv = id.clone();
    let mut term = id;
    for _ in 0..m.rank() {
        term = term.compose(&neg_n)?;
        if term.is_zero() {
            break;
        }
        inv = inv.add(&term)?;
    }
    Ok(inv)
}

/// `1 + N` where `N` only has entries at slots accepted by `keep`; the caller
/// makes sure these are strictly triangular in some order.
fn random_unipotent<R: Rng>(
    rng: &mut R,
    m: &GradedModule,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<GradedMap, AlgebraError> {
    let slots = MapUnknowns::new(m, m, 0, keep);
    let n = random_map(rng, &slots, m.ring(), 0.6);
    GradedMap::identity(m).add(&n)
}

/// A solution of an affine system as a map, or `None` if inconsistent.
/// Over the integers a fractional solution is returned together with its
/// denominator.
fn sample_solution<R: Rng>(
    rng: &mut R,
    unknowns: &MapUnknowns,
    sol: &AffineSolution,
) -> (GradedMap, i64) {
    let (x, den) = sol.sample(rng);
    (unknowns.map(&x), den)
}

/// Multiplication table of a unital associative algebra with basis
/// `e_0 = 1, e_1, ...`; `prod` lists the products `e_i e_j = c e_k` for `i, j >= 1`.
#[derive(Debug, Clone)]
pub struct Table {
    pub gens: Vec<i32>,
    pub prod: Vec<(usize, usize, usize, RingElement)>,
    /// Products of positive-index generators never involve `e_0`.
    pub local: bool,
}

impl Table {
    pub fn multiplication(&self, ring: Ring) -> Result<GradedMap, AlgebraError> {
        let a = GradedModule::new(ring, self.gens.clone());
        let n = a.rank();
        let aa = a.tensor(&a)?;
        let mut entries = Vec::new();
        for j in 0..n {
            entries.push((j, j, ring.one()));
            if j > 0 {
                entries.push((j * n, j, ring.one()));
            }
        }
        for (i, j, k, c) in &self.prod {
            entries.push((i * n + j, *k, c.clone()));
        }
        GradedMap::from_entries(&aa, &a, 0, entries)
    }
}

/// The multiplication families used by the generators.
pub fn random_table<R: Rng>(rng: &mut R, ring: Ring, dim: usize, local_only: bool) -> Table {
    let one = ring.one();
    let d = |rng: &mut R| rng.gen_range(-1..=2);
    let mut choices = vec![0, 1, 2];
    if dim == 3 && !local_only {
        choices.push(3);
    }
    if dim == 2 && !local_only && ring.supports_degree(2) {
        choices.push(4);
    }
    if dim == 4 {
        choices.push(5);
    }
    match (dim, *choices.choose(rng).expect("nonempty")) {
        (1, _) => Table {
            gens: vec![0],
            prod: vec![],
            local: true,
        },
        (_, 0) | (_, 1) => {
            // k[x]/(x^dim)
            let dx = d(rng);
            let gens = (0..dim as i32).map(|j| j * dx).collect();
            let mut prod = Vec::new();
            for i in 1..dim {
                for j in 1..dim - i {
                    prod.push((i, j, i + j, one.clone()));
                }
            }
            Table {
                gens,
                prod,
                local: true,
            }
        }
        (_, 2) => {
            // trivial extension k + V
            let gens = std::iter::once(0).chain((1..dim).map(|_| d(rng))).collect();
            Table {
                gens,
                prod: vec![],
                local: true,
            }
        }
        (_, 3) => {
            // span(1, E11, E12) inside upper triangular 2x2 matrices
            let de = d(rng);
            Table {
                gens: vec![0, 0, de],
                prod: vec![(1, 1, 1, one.clone()), (1, 2, 2, one)],
                local: false,
            }
        }
        (_, 4) => {
            // x^2 = u with u of degree 2 in the ring
            Table {
                gens: vec![0, 1],
                prod: vec![(1, 1, 0, ring.monomial(2, 1))],
                local: false,
            }
        }
        _ => {
            // x, y, xy with x^2 = y^2 = 0 and yx = q xy
            let (dx, dy) = (d(rng), d(rng));
            let q = ring.int(*[1, -1, 2].choose(rng).expect("nonempty"));
            Table {
                gens: vec![0, dx, dy, dx + dy],
                prod: vec![(1, 2, 3, one), (2, 1, 3, q)],
                local: true,
            }
        }
    }
}

fn expect_valid(what: &str, report: super::Report) -> Result<(), AlgebraError> {
    if report.pass {
        Ok(())
    } else {
        Err(AlgebraError::InvalidStructure(format!(
            "generated {what} failed {:?} at {:?}",
            report.violated_eq, report.witness_word
        )))
    }
}

/// Samples `m1` among derivations killing the unit and then `m0` among
/// solutions of the curvature and Bianchi identities.
fn differential_and_curvature<R: Rng>(
    rng: &mut R,
    a: &GradedModule,
    m2: &GradedMap,
) -> Result<(GradedMap, GradedMap), AlgebraError> {
    let ring = a.ring();
    let k = GradedModule::unit(ring);
    let id = GradedMap::identity(a);
    let d_slots = MapUnknowns::new(a, a, 1, |i, _| i > 0);
    let derivations = solve_affine(&d_slots, |d| {
        let lhs = m2.compose(d)?;
        let rhs = id.ex().tensor(d.ex())?.plus(d.ex().tensor(id.ex())?)?.then(m2.ex())?;
        Ok(vec![lhs.sub(&rhs.materialize()?)?])
    })?;
    let c_slots = MapUnknowns::new(&k, a, 2, |_, _| true);
    for attempt in 0..8 {
        let (m1, _) = if attempt < 7 {
            sample_solution(rng, &d_slots, &derivations)
        } else {
            (GradedMap::zero(a, a, 1), 1)
        };
        let m1m1 = m1.compose(&m1)?;
        let curv = solve_affine(&c_slots, |m0| {
            let bracket = m0
                .ex()
                .tensor(id.ex())?
                .minus(id.ex().tensor(m0.ex())?)?
                .then(m2.ex())?
                .materialize()?;
            Ok(vec![bracket.sub(&m1m1)?, m0.compose(&m1)?])
        });
        let Ok(curv) = curv else { continue };
        let (m0, den) = sample_solution(rng, &c_slots, &curv);
        // Over Z a solution m0/den is cleared by rescaling m1 by den.
        return Ok((m1.scale(den), m0.scale(den)));
    }
    Err(AlgebraError::EmptySolutionSpace)
}

/// Transport of an algebra along `phi: A' -> A` (same module, `phi(e_0) = e_0`).
pub fn transport_algebra(
    alg: &UCCAlgebra,
    phi: &GradedMap,
    v: GradedMap,
) -> Result<UCCAlgebra, AlgebraError> {
    let inv = unipotent_inverse(phi)?;
    let m2 = phi.ex().tensor(phi.ex())?.then(alg.m2().ex())?.then(inv.ex())?.materialize()?;
    let m1 = phi.compose(alg.m1())?.compose(&inv)?;
    let m0 = alg.m0().compose(&inv)?;
    let eta = alg.eta().compose(&inv)?;
    UCCAlgebra::new(alg.module(), m2, m1, m0, eta, v)
}

/// Transport of a coalgebra along `psi: C' -> C` (same module, `psi` preserving the counit).
pub fn transport_coalgebra(coalg: &CACoalgebra, psi: &GradedMap) -> Result<CACoalgebra, AlgebraError> {
    let inv = unipotent_inverse(psi)?;
    let d2 = psi
        .ex()
        .then(coalg.d2().ex())?
        .then(inv.ex().tensor(inv.ex())?)?
        .materialize()?;
    let d1 = psi.compose(coalg.d1())?.compose(&inv)?;
    let d0 = psi.compose(coalg.d0())?;
    let eps = psi.compose(coalg.eps())?;
    let w = coalg.w().compose(&inv)?;
    CACoalgebra::new(coalg.module(), d2, d1, d0, eps, w)
}

/// A random splitting `v` with `v(e_0) = 1`.
pub fn random_splitting<R: Rng>(rng: &mut R, a: &GradedModule) -> GradedMap {
    let k = GradedModule::unit(a.ring());
    let slots = MapUnknowns::new(a, &k, 0, |i, _| i > 0);
    let v = random_map(rng, &slots, a.ring(), 0.7);
    v.add(&super::basis_functional(a, 0)).expect("same shape")
}

/// Unipotent change of basis fixing `e_0` (rows `i >= 1` may gain an `e_0` term).
fn algebra_unipotent<R: Rng>(rng: &mut R, a: &GradedModule) -> Result<GradedMap, AlgebraError> {
    random_unipotent(rng, a, |i, j| i > 0 && (j > i || j == 0))
}

/// Unipotent change of basis preserving `eps = e_0^*`.
fn coalgebra_unipotent<R: Rng>(rng: &mut R, c: &GradedModule) -> Result<GradedMap, AlgebraError> {
    random_unipotent(rng, c, |i, j| j > i)
}

/// A random unit-complemented curved algebra of dimension `dim` (1 to 4).
pub fn random_ucc_algebra<R: Rng>(rng: &mut R, ring: Ring, dim: usize) -> Result<UCCAlgebra, AlgebraError> {
    let table = random_table(rng, ring, dim, false);
    ucc_from_table(rng, ring, &table)
}

pub fn ucc_from_table<R: Rng>(rng: &mut R, ring: Ring, table: &Table) -> Result<UCCAlgebra, AlgebraError> {
    let a = GradedModule::new(ring, table.gens.clone());
    let m2 = table.multiplication(ring)?;
    let (m1, m0) = differential_and_curvature(rng, &a, &m2)?;
    let base = UCCAlgebra::new(
        &a,
        m2,
        m1,
        m0,
        super::basis_vector(&a, 0),
        super::basis_functional(&a, 0),
    )?;
    let phi = algebra_unipotent(rng, &a)?;
    let alg = transport_algebra(&base, &phi, random_splitting(rng, &a))?;
    expect_valid("algebra", validate_ucc_algebra(&alg)?)?;
    Ok(alg)
}

/// A random curved augmented coalgebra of dimension `dim` (1 to 4), dual to
/// a local algebra.
pub fn random_ca_coalgebra<R: Rng>(rng: &mut R, ring: Ring, dim: usize) -> Result<CACoalgebra, AlgebraError> {
    let table = random_table(rng, ring, dim, true);
    ca_from_local_table(rng, ring, &table)
}

pub fn ca_from_local_table<R: Rng>(
    rng: &mut R,
    ring: Ring,
    table: &Table,
) -> Result<CACoalgebra, AlgebraError> {
    if !table.local || table.prod.iter().any(|(_, _, _, c)| !c.is_homogeneous_of(0)) {
        return Err(AlgebraError::InvalidStructure(
            "dualizing needs a local table with degree-0 constants".into(),
        ));
    }
    let c = GradedModule::new(ring, table.gens.iter().map(|d| -d).collect());
    let m2 = table.multiplication(ring)?;
    let cc = c.tensor(&c)?;
    let d2 = GradedMap::from_entries(
        &c,
        &cc,
        0,
        m2.entries().into_iter().map(|(ij, k, v)| (k, ij, v)),
    )?;
    let k = GradedModule::unit(ring);
    let id = GradedMap::identity(&c);
    let d_slots = MapUnknowns::new(&c, &c, 1, |_, j| j > 0);
    let coderivations = solve_affine(&d_slots, |d| {
        let lhs = d.compose(&d2)?;
        let rhs = d2
            .ex()
            .then(id.ex().tensor(d.ex())?.plus(d.ex().tensor(id.ex())?)?)?
            .materialize()?;
        Ok(vec![lhs.sub(&rhs)?])
    })?;
    let c_slots = MapUnknowns::new(&c, &k, 2, |_, _| true);
    let mut found = None;
    for attempt in 0..8 {
        let (d1, _) = if attempt < 7 {
            sample_solution(rng, &d_slots, &coderivations)
        } else {
            (GradedMap::zero(&c, &c, 1), 1)
        };
        let d1d1 = d1.compose(&d1)?;
        let curv = solve_affine(&c_slots, |d0| {
            let bracket = d2
                .ex()
                .then(id.ex().tensor(d0.ex())?.minus(d0.ex().tensor(id.ex())?)?)?
                .materialize()?;
            Ok(vec![bracket.sub(&d1d1)?, d1.compose(d0)?])
        });
        let Ok(curv) = curv else { continue };
        let (d0, den) = sample_solution(rng, &c_slots, &curv);
        found = Some((d1.scale(den), d0.scale(den)));
        break;
    }
    let (d1, d0) = found.ok_or(AlgebraError::EmptySolutionSpace)?;
    let base = CACoalgebra::new(
        &c,
        d2,
        d1,
        d0,
        super::basis_functional(&c, 0),
        super::basis_vector(&c, 0),
    )?;
    let psi = coalgebra_unipotent(rng, &c)?;
    let coalg = transport_coalgebra(&base, &psi)?;
    expect_valid("coalgebra", validate_ca_coalgebra(&coalg)?)?;
    Ok(coalg)
}

/// Degree templates (non-unit generators in degree at least 2) for which
/// conjugated structures have `b_n = 0` beyond arity 4.
const CAINF_TEMPLATES: [&[i32]; 4] = [&[0, 2, 4, 6], &[0, 2, 3, 5], &[0, 2, 4], &[0, 2, 3]];

/// A random strictly unital curved A-infinity algebra with operations up to
/// arity `cap + 1`, obtained by conjugating a curved algebra with a random
/// strictly unital A-infinity automorphism `f = (1, f_2, f_3)`.
pub fn random_cainf_algebra<R: Rng>(
    rng: &mut R,
    ring: Ring,
    dim: usize,
    cap: usize,
) -> Result<CurvedAInfAlgebra, AlgebraError> {
    let gens: Vec<i32> = if dim <= 1 {
        vec![0]
    } else {
        let fitting: Vec<&[i32]> = CAINF_TEMPLATES.iter().copied().filter(|t| t.len() == dim).collect();
        fitting.choose(rng).map(|t| t.to_vec()).unwrap_or_else(|| vec![0, 2])
    };
    let table = match gens.as_slice() {
        [0, 2, 3, 5] => Table {
            gens: gens.clone(),
            prod: vec![(1, 2, 3, ring.one()), (2, 1, 3, ring.one())],
            local: true,
        },
        [0, 2, 3] => Table {
            gens: gens.clone(),
            prod: vec![],
            local: true,
        },
        _ => {
            let n = gens.len();
            let mut prod = Vec::new();
            for i in 1..n {
                for j in 1..n - i {
                    prod.push((i, j, i + j, ring.one()));
                }
            }
            Table {
                gens: gens.clone(),
                prod,
                local: true,
            }
        }
    };
    let alg = ucc_from_table(rng, ring, &table)?;
    let base = CurvedAInfAlgebra::from_ucc(&alg)?;
    let a1 = base.shifted();
    let pr = base.pr();
    let abar1 = pr.cod().clone();
    let mut f: Vec<GradedMap> = vec![GradedMap::zero(&GradedModule::unit(ring), &a1, 0), GradedMap::identity(&a1)];
    for n in 2..=3 {
        let slots = MapUnknowns::new(&abar1.tensor_power(n), &a1, 0, |_, _| true);
        let phi = random_map(rng, &slots, ring, 0.5);
        let mut prn = Expr::id(&GradedModule::unit(ring));
        for _ in 0..n {
            prn = prn.tensor(pr.ex())?;
        }
        f.push(prn.then(phi.ex())?.materialize()?);
    }
    let conj = conjugate(&base, &f, cap + 1)?;
    expect_valid("A-infinity algebra", validate_cainf_algebra(&conj, cap)?)?;
    Ok(conj)
}

/// The structure `b'` with `b' f = f b` for an A-infinity morphism
/// `f = (0, 1, f_2, ...)`, computed up to arity `top`.
pub fn conjugate(
    base: &CurvedAInfAlgebra,
    f: &[GradedMap],
    top: usize,
) -> Result<CurvedAInfAlgebra, AlgebraError> {
    let a1 = base.shifted();
    let (b0, b1, b2) = (base.b(0), base.b(1), base.b(2));
    let fz = |n: usize| -> GradedMap {
        f.get(n)
            .cloned()
            .unwrap_or_else(|| GradedMap::zero(&a1.tensor_power(n), &a1, 0))
    };
    let fs: Vec<GradedMap> = (0..=top + 1).map(fz).collect();
    let mut out: Vec<GradedMap> = Vec::new();
    for n in 0..=top {
        let dom = a1.tensor_power(n);
        let mut acc = Expr::zero(&dom, &a1, 1);
        if n == 0 {
            acc = acc.plus(b0.ex())?;
        }
        // f then b: compositions of n into k parts, k in {1, 2}
        if n >= 1 {
            acc = acc.plus(fs[n].ex().then(b1.ex())?)?;
            for i in 1..n {
                let e = fs[i].ex().tensor(fs[n - i].ex())?.then(b2.ex())?;
                acc = acc.plus(e)?;
            }
        }
        // minus the terms of b' f not involving b'_n
        for k in 0..n {
            for r in 0..=n - k {
                let t = n - k - r;
                if r + 1 + t < 2 || fs[r + 1 + t].is_zero() {
                    continue;
                }
                let e = Expr::id(&a1.tensor_power(r))
                    .tensor(out[k].ex())?
                    .tensor(Expr::id(&a1.tensor_power(t)))?
                    .then(fs[r + 1 + t].ex())?;
                acc = acc.minus(e)?;
            }
        }
        out.push(acc.materialize()?);
    }
    while out.len() > 3 && out.last().is_some_and(|b| b.is_zero()) {
        out.pop();
    }
    CurvedAInfAlgebra::new(base.module(), out, base.eta_bold().clone(), base.v_bold().clone())
}

/// A random morphism out of `alg`: a transport `alg -> B` with a random
/// degree-1 scalar part. Returns `B` and the morphism.
pub fn random_alg_morphism_from<R: Rng>(
    rng: &mut R,
    alg: &UCCAlgebra,
) -> Result<(UCCAlgebra, AlgMorphism), AlgebraError> {
    let a = alg.module();
    let phi = algebra_unipotent(rng, a)?;
    let b = transport_algebra(alg, &phi, random_splitting(rng, a))?;
    let h = AlgMorphism::new(unipotent_inverse(&phi)?, random_scalar(rng, a.ring(), 1))?;
    Ok((b, h))
}

/// A random morphism out of `coalg`: a transport `coalg -> D` with
/// `g0 = eps u` for a random degree-1 scalar `u`.
pub fn random_coalg_morphism_from<R: Rng>(
    rng: &mut R,
    coalg: &CACoalgebra,
) -> Result<(CACoalgebra, CoalgMorphism), AlgebraError> {
    let c = coalg.module();
    let psi = coalgebra_unipotent(rng, c)?;
    let d = transport_coalgebra(coalg, &psi)?;
    let u = random_scalar(rng, c.ring(), 1);
    let g0 = coalg.eps().scalar_mul(&u)?;
    let g0 = if u.is_zero() {
        GradedMap::zero(c, &GradedModule::unit(c.ring()), 1)
    } else {
        g0
    };
    let g = CoalgMorphism::new(unipotent_inverse(&psi)?, g0)?;
    Ok((d, g))
}

/// Inverse of a coalgebra morphism with unipotent `g1`: `(g1^{-1}, -g1^{-1} g0)`.
pub fn invert_unipotent_coalg_morphism(g: &CoalgMorphism) -> Result<CoalgMorphism, AlgebraError> {
    let inv = unipotent_inverse(&g.g1)?;
    let g0 = inv.compose(&g.g0)?.neg();
    CoalgMorphism::new(inv, g0)
}

/// A single-entry perturbation: adds a random nonzero monomial to one
/// degree-consistent slot of `f`.
pub fn perturb_map<R: Rng>(rng: &mut R, f: &GradedMap) -> Option<GradedMap> {
    let slots = MapUnknowns::new(f.dom(), f.cod(), f.deg(), |_, _| true);
    if slots.is_empty() {
        return None;
    }
    let ring = f.ring();
    let mut coeffs = vec![0i64; slots.len()];
    let k = rng.gen_range(0..slots.len());
    coeffs[k] = loop {
        let c = random_coefficient(rng, ring);
        if ring.characteristic().map_or(c != 0, |p| c.rem_euclid(p as i64) != 0) {
            break c;
        }
    };
    f.add(&slots.map(&coeffs)).ok()
}
