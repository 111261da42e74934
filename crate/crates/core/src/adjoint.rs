//! The adjunction `Hom(Cobar C, A) = Hom(C, Bar A)`, twisting cochains, and
//! machine checks of the naturality squares and of the split equation systems.
//!
//! Both morphism sets are parametrized by `theta_bar: Cbar -> A` of degree 1
//! together with the scalar `und`. On the algebra side `theta_bar` is the
//! restriction of `f1` to the generators `Cbar[-1]`; on the coalgebra side it
//! combines the letter component of `g1` with `g0` on `Cbar`.

use rand::Rng;

use crate::barcobar::{
    bar_letter, bar_morphism, bar_of_algebra, check_cap, cobar_letter, cobar_morphism,
    tensor_power_expr, BAR_MIN_CAP, COBAR_MIN_CAP,
};
use crate::curved::gen::{
    ca_from_local_table, random_alg_morphism_from, random_ca_coalgebra, random_scalar,
    random_ucc_algebra, Table,
};
use crate::curved::{
    compose_alg_morphisms, compose_coalg_morphisms, validate_ca_coalgebra, AlgMorphism,
    CACoalgebra, Checker, CoalgMorphism, CurvedAInfAlgebra, CurvedAInfCoalgebra, Report,
    UCCAlgebra,
};
use crate::error::AlgebraError;
use crate::gmod::{compare_on_rows, tensor_elements, Expr, GradedMap, GradedModule, SparseVec};
use crate::gring::{Ring, RingElement};
use crate::linsolve::{solve_affine, MapUnknowns};
use crate::tca::{iterated_coproduct, WordModule};

/// A degree-1 map `theta: C -> A` with `w theta = 0` satisfying the
/// Maurer-Cartan equation. Only constructed through validation.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistingCochain {
    theta: GradedMap,
}

impl TwistingCochain {
    pub fn new(theta: GradedMap, c: &CACoalgebra, a: &UCCAlgebra) -> Result<TwistingCochain, AlgebraError> {
        let report = validate_twisting_cochain(&theta, c, a)?;
        if !report.pass {
            return Err(AlgebraError::TwistingCochainViolation {
                equation: report.violated_eq.unwrap_or_default(),
                witness: report.witness_word.unwrap_or_default(),
            });
        }
        Ok(TwistingCochain { theta })
    }

    pub fn theta(&self) -> &GradedMap {
        &self.theta
    }

    /// `theta` restricted to `Cbar`.
    pub fn restricted(&self, c: &CACoalgebra) -> Result<GradedMap, AlgebraError> {
        c.incl().compose(&self.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessFamily {
    /// `theta = 0`.
    ZeroCochain,
    /// `C` a small bar construction, `g = Bar h`.
    BarOfMorphism,
    /// `C` with vanishing reduced coproduct; the Maurer-Cartan equation is affine.
    TrivialCoextension,
}

impl WitnessFamily {
    pub const ALL: [WitnessFamily; 3] = [
        WitnessFamily::ZeroCochain,
        WitnessFamily::BarOfMorphism,
        WitnessFamily::TrivialCoextension,
    ];
}

/// Corresponding `f: Cobar C -> A`, `g: C -> Bar A` and `theta`.
#[derive(Debug, Clone)]
pub struct AdjunctionWitness {
    pub family: WitnessFamily,
    pub c: CACoalgebra,
    pub a: UCCAlgebra,
    pub f: AlgMorphism,
    pub g: CoalgMorphism,
    pub theta: TwistingCochain,
    pub cobar_cap: usize,
    pub bar_cap: usize,
}

fn shape(msg: &str) -> AlgebraError {
    AlgebraError::ShapeMismatch(msg.into())
}

/// `f1` restricted to the generators: `fcheck: Cbar[-1] -> A`.
pub fn generator_component(
    f: &AlgMorphism,
    c: &CACoalgebra,
    a: &UCCAlgebra,
) -> Result<GradedMap, AlgebraError> {
    let y = cobar_letter(c);
    if f.f1.cod() != a.module() || f.f1.dom().rank() < 1 + y.rank() {
        return Err(shape("expected a morphism Cobar C -> A"));
    }
    let rows = (1..=y.rank()).map(|i| f.f1.row_vec(i)).collect();
    GradedMap::from_rows(&y, a.module(), 0, rows)
}

/// The letter component of `g1` on `Cbar`: `gcheck: Cbar -> Abar[1]`.
pub fn letter_component(
    g: &CoalgMorphism,
    c: &CACoalgebra,
    a: &UCCAlgebra,
) -> Result<GradedMap, AlgebraError> {
    let x = bar_letter(&CurvedAInfAlgebra::from_ucc(a)?);
    if g.g1.dom() != c.module() || g.g1.cod().rank() < 1 + x.rank() {
        return Err(shape("expected a morphism C -> Bar A"));
    }
    let rows = (1..c.module().rank())
        .map(|i| {
            g.g1.row_vec(i)
                .into_iter()
                .filter(|&(j, _)| (1..=x.rank()).contains(&j))
                .map(|(j, v)| (j - 1, v))
                .collect()
        })
        .collect();
    GradedMap::from_rows(&c.complement(), &x, 0, rows)
}

/// `theta_bar` of an algebra morphism out of `Cobar C`.
pub fn theta_bar_of_alg(
    f: &AlgMorphism,
    c: &CACoalgebra,
    a: &UCCAlgebra,
) -> Result<GradedMap, AlgebraError> {
    Ok(generator_component(f, c, a)?.relabel_shift(1, 0))
}

/// `theta_bar = gcheck incl_A + g0|_Cbar eta` of a coalgebra morphism into `Bar A`.
pub fn theta_bar_of_coalg(
    g: &CoalgMorphism,
    c: &CACoalgebra,
    a: &UCCAlgebra,
) -> Result<GradedMap, AlgebraError> {
    let gcheck = letter_component(g, c, a)?.relabel_shift(0, -1);
    let g0bar = c.incl().compose(&g.g0)?;
    gcheck
        .ex()
        .then(a.incl().ex())?
        .plus(g0bar.ex().then(a.eta().ex())?)?
        .materialize()
}

/// The algebra morphism `Cobar_cap C -> A` extending `theta_bar` (shifted to
/// the generators) multiplicatively.
pub fn alg_from_theta_bar(
    theta_bar: &GradedMap,
    und: &RingElement,
    c: &CACoalgebra,
    a: &UCCAlgebra,
    cobar_cap: usize,
) -> Result<AlgMorphism, AlgebraError> {
    check_cap(cobar_cap, COBAR_MIN_CAP)?;
    if theta_bar.dom() != &c.complement() || theta_bar.cod() != a.module() || theta_bar.deg() != 1 {
        return Err(shape("expected theta_bar: Cbar -> A of degree 1"));
    }
    let words = WordModule::new(&cobar_letter(c), cobar_cap);
    let fcheck = theta_bar.relabel_shift(-1, 0);
    let am = a.module();
    let mut rows: Vec<SparseVec> = Vec::with_capacity(words.rank());
    rows.push(a.eta().row_vec(0));
    for idx in 1..words.rank() {
        let word = words.word(idx);
        let n = word.len();
        let prefix = words.index(&word[..n - 1]).expect("prefix fits");
        let t = tensor_elements(am, am, &rows[prefix], &fcheck.row_vec(word[n - 1]));
        rows.push(a.m2().apply(&t).0);
    }
    let f1 = GradedMap::from_rows(words.module(), am, 0, rows)?;
    AlgMorphism::new(f1, und.clone())
}

/// The coalgebra morphism `C -> Bar_cap A` with letter component
/// `theta_bar pr_A` and `g0 = pr_C theta_bar v + eps und`, assembled through
/// the iterated reduced coproduct.
pub fn coalg_from_theta_bar(
    theta_bar: &GradedMap,
    und: &RingElement,
    c: &CACoalgebra,
    a: &UCCAlgebra,
    bar_cap: usize,
) -> Result<CoalgMorphism, AlgebraError> {
    check_cap(bar_cap, BAR_MIN_CAP)?;
    if theta_bar.dom() != &c.complement() || theta_bar.cod() != a.module() || theta_bar.deg() != 1 {
        return Err(shape("expected theta_bar: Cbar -> A of degree 1"));
    }
    let conil = c
        .conilpotency()
        .ok_or(AlgebraError::NotConilpotentUpToCap { cap: c.module().rank() + 2 })?;
    check_cap(bar_cap, conil)?;
    let words = WordModule::new(&bar_letter(&CurvedAInfAlgebra::from_ucc(a)?), bar_cap);
    let gcheck = theta_bar.compose(&a.pr())?.relabel_shift(0, 1);

    let mut g0 = c.pr().compose(&theta_bar.compose(a.v())?)?;
    if !und.is_zero() {
        g0 = g0.add(&c.eps().scalar_mul(und)?)?;
    }

    let (pr, dbar) = (c.pr(), c.reduced_coproduct()?);
    let mut rows: Vec<SparseVec> = (0..c.module().rank())
        .map(|i| {
            let e = c.eps().entry(i, 0);
            if e.is_zero() {
                SparseVec::new()
            } else {
                SparseVec::from([(0, e)])
            }
        })
        .collect();
    for k in 1..conil {
        let e = pr
            .ex()
            .then(iterated_coproduct(&dbar, k)?)?
            .then(tensor_power_expr(&gcheck, k)?)?;
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in e.eval_basis(i).0 {
                row.insert(words.offset(k) + j, v);
            }
        }
    }
    let g1 = GradedMap::from_rows(c.module(), words.module(), 0, rows)?;
    CoalgMorphism::new(g1, g0)
}

/// `f: Cobar C -> A` to `g: C -> Bar_cap A`. Needs `cap` at least the
/// conilpotency index of `Cbar`.
pub fn adjoint_fwd(
    f: &AlgMorphism,
    c: &CACoalgebra,
    a: &UCCAlgebra,
    bar_cap: usize,
) -> Result<CoalgMorphism, AlgebraError> {
    coalg_from_theta_bar(&theta_bar_of_alg(f, c, a)?, &f.und, c, a, bar_cap)
}

/// `g: C -> Bar A` to `f: Cobar_cap C -> A`, with `und f = w g0`.
pub fn adjoint_bwd(
    g: &CoalgMorphism,
    c: &CACoalgebra,
    a: &UCCAlgebra,
    cobar_cap: usize,
) -> Result<AlgMorphism, AlgebraError> {
    let und = c.w().compose(&g.g0)?.entry(0, 0);
    alg_from_theta_bar(&theta_bar_of_coalg(g, c, a)?, &und, c, a, cobar_cap)
}

pub fn to_twisting_cochain(
    f: &AlgMorphism,
    c: &CACoalgebra,
    a: &UCCAlgebra,
) -> Result<TwistingCochain, AlgebraError> {
    TwistingCochain::new(c.pr().compose(&theta_bar_of_alg(f, c, a)?)?, c, a)
}

pub fn coalg_to_twisting_cochain(
    g: &CoalgMorphism,
    c: &CACoalgebra,
    a: &UCCAlgebra,
) -> Result<TwistingCochain, AlgebraError> {
    TwistingCochain::new(c.pr().compose(&theta_bar_of_coalg(g, c, a)?)?, c, a)
}

/// The algebra morphism of `theta`, with `und = 0`.
pub fn tw_to_alg(
    theta: &TwistingCochain,
    c: &CACoalgebra,
    a: &UCCAlgebra,
    cobar_cap: usize,
) -> Result<AlgMorphism, AlgebraError> {
    alg_from_theta_bar(&theta.restricted(c)?, &a.ring().zero(), c, a, cobar_cap)
}

/// The coalgebra morphism of `theta`, with `w g0 = 0`.
pub fn tw_to_coalg(
    theta: &TwistingCochain,
    c: &CACoalgebra,
    a: &UCCAlgebra,
    bar_cap: usize,
) -> Result<CoalgMorphism, AlgebraError> {
    coalg_from_theta_bar(&theta.restricted(c)?, &a.ring().zero(), c, a, bar_cap)
}

/// Both sides of `theta m1 + delta1 theta = delta0 eta + eps m0 - delta2 (theta (x) theta) m2`.
fn maurer_cartan_sides<'a>(
    theta: &'a GradedMap,
    c: &'a CACoalgebra,
    a: &'a UCCAlgebra,
) -> Result<(Expr<'a>, Expr<'a>), AlgebraError> {
    let lhs = theta.ex().then(a.m1().ex())?.plus(c.d1().ex().then(theta.ex())?)?;
    let rhs = c
        .d0()
        .ex()
        .then(a.eta().ex())?
        .plus(c.eps().ex().then(a.m0().ex())?)?
        .minus(
            c.d2()
                .ex()
                .then(theta.ex().tensor(theta.ex())?)?
                .then(a.m2().ex())?,
        )?;
    Ok((lhs, rhs))
}

pub fn validate_twisting_cochain(
    theta: &GradedMap,
    c: &CACoalgebra,
    a: &UCCAlgebra,
) -> Result<Report, AlgebraError> {
    if theta.dom() != c.module() || theta.cod() != a.module() || theta.deg() != 1 {
        return Err(shape("expected theta: C -> A of degree 1"));
    }
    let k = GradedModule::unit(a.ring());
    let mut ck = Checker::new(c.truncation());
    ck.eq_rows(
        "counit_annihilates",
        c.w().ex().then(theta.ex())?,
        Expr::zero(&k, a.module(), 1),
        vec![0],
        |_| vec![0],
    )?;
    let (lhs, rhs) = maurer_cartan_sides(theta, c, a)?;
    ck.eq("maurer_cartan", lhs, rhs, c.module().rank(), 1)?;
    Ok(ck.finish())
}

/// The equation on `Cbar` alone:
/// `theta_bar m1 + incl delta1 pr theta_bar = incl delta0 eta - dbar (theta_bar (x) theta_bar) m2`.
/// For ucdg `A` and ac `C` it is equivalent to the full pair of equations.
pub fn validate_reduced_twisting_equation(
    theta_bar: &GradedMap,
    c: &CACoalgebra,
    a: &UCCAlgebra,
) -> Result<Report, AlgebraError> {
    if theta_bar.dom() != &c.complement() || theta_bar.cod() != a.module() || theta_bar.deg() != 1 {
        return Err(shape("expected theta_bar: Cbar -> A of degree 1"));
    }
    let (incl, pr, dbar) = (c.incl(), c.pr(), c.reduced_coproduct()?);
    let tb = theta_bar.ex();
    let lhs = tb.clone().then(a.m1().ex())?.plus(
        incl.ex()
            .then(c.d1().ex())?
            .then(pr.ex())?
            .then(tb.clone())?,
    )?;
    let rhs = incl
        .ex()
        .then(c.d0().ex())?
        .then(a.eta().ex())?
        .minus(dbar.ex().then(tb.clone().tensor(tb)?)?.then(a.m2().ex())?)?;
    let mut ck = Checker::new(None);
    ck.eq("reduced_maurer_cartan", lhs, rhs, c.complement().rank(), 1)?;
    Ok(ck.finish())
}

fn holds(lhs: Expr<'_>, rhs: Expr<'_>) -> Result<bool, AlgebraError> {
    let rows: Vec<usize> = (0..lhs.dom().rank()).collect();
    Ok(compare_on_rows(&lhs, &rhs, rows)?.holds())
}

/// Truth values of the algebra-side system for `fcheck: Cbar[-1] -> A`: its
/// components after `pr_A` and `v`, on the generators and on the image of `w`.
pub fn split_alg_equations(
    fcheck: &GradedMap,
    c: &CACoalgebra,
    a: &UCCAlgebra,
) -> Result<[bool; 4], AlgebraError> {
    let xi = CurvedAInfCoalgebra::from_ca(c)?;
    let (xi0, xi1, xi2) = (xi.xi(0), xi.xi(1), xi.xi(2));
    let incl = c.incl().relabel_shift(-1, -1);
    let pr = c.pr().relabel_shift(-1, -1);
    let (pra, v) = (a.pr(), a.v());
    let f = || fcheck.ex();
    let xib0 = || incl.ex().then(xi0.ex());
    let xib1 = || -> Result<Expr<'_>, AlgebraError> { incl.ex().then(xi1.ex())?.then(pr.ex()) };
    let quad = || -> Result<Expr<'_>, AlgebraError> {
        incl.ex()
            .then(xi2.ex())?
            .then(pr.ex().tensor(pr.ex())?)?
            .then(f().tensor(f())?)?
            .then(a.m2().ex())
    };
    let w_xi1 = || -> Result<Expr<'_>, AlgebraError> {
        xi.w_bold().ex().then(xi1.ex())?.then(pr.ex())?.then(f())
    };
    Ok([
        holds(
            f().then(a.m1().ex())?.then(pra.ex())?,
            xib1()?.then(f())?.then(pra.ex())?.plus(quad()?.then(pra.ex())?)?,
        )?,
        holds(
            f().then(a.m1().ex())?.then(v.ex())?,
            xib0()?
                .plus(xib1()?.then(f())?.then(v.ex())?)?
                .plus(quad()?.then(v.ex())?)?,
        )?,
        holds(a.m0().ex().then(pra.ex())?, w_xi1()?.then(pra.ex())?.neg())?,
        holds(
            a.m0().ex().then(v.ex())?,
            xi.w_bold()
                .ex()
                .then(xi0.ex())?
                .plus(w_xi1()?.then(v.ex())?)?
                .neg(),
        )?,
    ])
}

/// Truth values of the coalgebra-side system for `gcheck: Cbar -> Abar[1]`
/// and `g0: C -> k`, in the same order as [`split_alg_equations`].
pub fn split_coalg_equations(
    gcheck: &GradedMap,
    g0: &GradedMap,
    c: &CACoalgebra,
    a: &UCCAlgebra,
) -> Result<[bool; 4], AlgebraError> {
    let sa = CurvedAInfAlgebra::from_ucc(a)?;
    let (b0, b1, b2) = (sa.b(0), sa.b(1), sa.b(2));
    let (incl_x, pr_x, vb) = (sa.incl(), sa.pr(), sa.v_bold());
    let (incl, pr, dbar) = (c.incl(), c.pr(), c.reduced_coproduct()?);
    let g0bar = incl.compose(g0)?;
    let id = || Expr::id(c.module());
    let gi = || gcheck.ex().then(incl_x.ex());
    let quad = || -> Result<Expr<'_>, AlgebraError> {
        dbar.ex().then(gi()?.tensor(gi()?)?)?.then(b2.ex())
    };
    let mixed = g0.ex().tensor(id())?.minus(id().tensor(g0.ex())?)?;
    let w = c.w();
    Ok([
        holds(
            incl.ex()
                .then(c.d1().ex())?
                .then(pr.ex())?
                .then(gcheck.ex())?
                .plus(
                    incl.ex()
                        .then(c.d2().ex())?
                        .then(mixed)?
                        .then(pr.ex())?
                        .then(gcheck.ex())?,
                )?,
            gi()?
                .then(b1.ex())?
                .then(pr_x.ex())?
                .plus(quad()?.then(pr_x.ex())?)?,
        )?,
        holds(
            incl.ex()
                .then(c.d0().ex())?
                .minus(incl.ex().then(c.d1().ex())?.then(g0.ex())?)?
                .minus(dbar.ex().then(g0bar.ex().tensor(g0bar.ex())?)?)?,
            gi()?
                .then(b1.ex())?
                .then(vb.ex())?
                .plus(quad()?.then(vb.ex())?)?
                .neg(),
        )?,
        holds(
            w.ex().then(c.d1().ex())?.then(pr.ex())?.then(gcheck.ex())?,
            b0.ex().then(pr_x.ex())?,
        )?,
        holds(
            w.ex()
                .then(c.d0().ex())?
                .minus(w.ex().then(c.d1().ex())?.then(g0.ex())?)?,
            b0.ex().then(vb.ex())?.neg(),
        )?,
    ])
}

/// Square for `h: A -> B`: `adjoint(f h) = adjoint(f) Bar(h)`, plus the
/// scalar bookkeeping and `v_A + pr_A h1 v_B = h1 v_B`.
pub fn check_naturality_in_a(
    h: &AlgMorphism,
    f: &AlgMorphism,
    c: &CACoalgebra,
    a: &UCCAlgebra,
    b: &UCCAlgebra,
    bar_cap: usize,
) -> Result<Report, AlgebraError> {
    let lhs = adjoint_fwd(&compose_alg_morphisms(f, h)?, c, b, bar_cap)?;
    let rhs = compose_coalg_morphisms(&adjoint_fwd(f, c, a, bar_cap)?, &bar_morphism(h, a, b, bar_cap)?)?;
    let r = c.module().rank();
    let mut ck = Checker::new(None);
    ck.eq("square_g1", lhs.g1.ex(), rhs.g1.ex(), r, 1)?;
    ck.eq("square_g0", lhs.g0.ex(), rhs.g0.ex(), r, 1)?;
    let wq0 = c.w().compose(&lhs.g0)?.entry(0, 0);
    if wq0 != f.und.try_add(&h.und)? {
        ck.fail("und_sum".into(), Some(vec![0]), None);
    }
    let pr_a = Expr::id(a.module()).minus(a.v().ex().then(a.eta().ex())?)?;
    ck.eq(
        "unit_projection",
        a.v().ex().plus(pr_a.then(h.f1.ex())?.then(b.v().ex())?)?,
        h.f1.ex().then(b.v().ex())?,
        a.module().rank(),
        1,
    )?;
    Ok(ck.finish())
}

/// Square for `j: C -> D` and `f: Cobar D -> A`:
/// `adjoint(Cobar(j) f) = j adjoint(f)`, plus `und Cobar j + und f = w r0`.
pub fn check_naturality_in_c(
    j: &CoalgMorphism,
    f: &AlgMorphism,
    c: &CACoalgebra,
    d: &CACoalgebra,
    a: &UCCAlgebra,
    cobar_cap: usize,
    bar_cap: usize,
) -> Result<Report, AlgebraError> {
    let cobar_j = cobar_morphism(j, c, d, cobar_cap)?;
    let lhs = adjoint_fwd(&compose_alg_morphisms(&cobar_j, f)?, c, a, bar_cap)?;
    let rhs = compose_coalg_morphisms(j, &adjoint_fwd(f, d, a, bar_cap)?)?;
    let r = c.module().rank();
    let mut ck = Checker::new(None);
    ck.eq("square_g1", lhs.g1.ex(), rhs.g1.ex(), r, 1)?;
    ck.eq("square_g0", lhs.g0.ex(), rhs.g0.ex(), r, 1)?;
    let wr0 = c.w().compose(&lhs.g0)?.entry(0, 0);
    if wr0 != cobar_j.und.try_add(&f.und)? {
        ck.fail("und_sum".into(), Some(vec![0]), None);
    }
    Ok(ck.finish())
}

const WITNESS_ATTEMPTS: usize = 64;

fn witness_from_theta_bar(
    family: WitnessFamily,
    c: CACoalgebra,
    a: UCCAlgebra,
    theta_bar: &GradedMap,
    und: &RingElement,
) -> Result<AdjunctionWitness, AlgebraError> {
    let cobar_cap = COBAR_MIN_CAP;
    let bar_cap = c.conilpotency().unwrap_or(BAR_MIN_CAP).max(4);
    let f = alg_from_theta_bar(theta_bar, und, &c, &a, cobar_cap)?;
    let g = coalg_from_theta_bar(theta_bar, und, &c, &a, bar_cap)?;
    let theta = TwistingCochain::new(c.pr().compose(theta_bar)?, &c, &a)?;
    Ok(AdjunctionWitness {
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

/// A random witness of the given family. Coalgebras are kept small (rank at
/// most 7) so that `Cobar_4 C` stays in the low thousands of words.
pub fn random_witness<R: Rng>(
    rng: &mut R,
    ring: Ring,
    family: WitnessFamily,
) -> Result<AdjunctionWitness, AlgebraError> {
    for _ in 0..WITNESS_ATTEMPTS {
        let found = match family {
            WitnessFamily::ZeroCochain => zero_witness(rng, ring)?,
            WitnessFamily::BarOfMorphism => bar_witness(rng, ring)?,
            WitnessFamily::TrivialCoextension => coextension_witness(rng, ring)?,
        };
        if let Some(w) = found {
            return Ok(w);
        }
    }
    Err(AlgebraError::EmptySolutionSpace)
}

fn zero_witness<R: Rng>(rng: &mut R, ring: Ring) -> Result<Option<AdjunctionWitness>, AlgebraError> {
    let (dc, da) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let c = random_ca_coalgebra(rng, ring, dc)?;
    let mut found = None;
    for _ in 0..16 {
        let a = random_ucc_algebra(rng, ring, da)?;
        let zero = GradedMap::zero(c.module(), a.module(), 1);
        if validate_twisting_cochain(&zero, &c, &a)?.pass {
            found = Some(a);
            break;
        }
    }
    let Some(a) = found else { return Ok(None) };
    let theta_bar = GradedMap::zero(&c.complement(), a.module(), 1);
    let und = random_scalar(rng, ring, 1);
    witness_from_theta_bar(WitnessFamily::ZeroCochain, c, a, &theta_bar, &und).map(Some)
}

fn bar_witness<R: Rng>(rng: &mut R, ring: Ring) -> Result<Option<AdjunctionWitness>, AlgebraError> {
    let dim = rng.gen_range(2..=3);
    let a0 = random_ucc_algebra(rng, ring, dim)?;
    if !a0.m0().compose(&a0.pr())?.is_zero() {
        return Ok(None);
    }
    // with pr(m0) = 0 no letters are inserted, so the truncated bar
    // construction is an honest coalgebra
    let words = if dim == 2 { 3 } else { 2 };
    let c = bar_of_algebra(&a0, words)?.coalgebra.without_truncation();
    let report = validate_ca_coalgebra(&c)?;
    if !report.pass {
        return Err(AlgebraError::InvalidStructure(format!(
            "untruncated bar construction fails {:?}",
            report.violated_eq
        )));
    }
    let (a, h) = random_alg_morphism_from(rng, &a0)?;
    let bar_cap = c.conilpotency().unwrap_or(BAR_MIN_CAP).max(4);
    let full = bar_morphism(&h, &a0, &a, bar_cap)?;
    let keep: Vec<usize> = (0..c.module().rank()).collect();
    let g = CoalgMorphism::new(
        full.g1.select_rows(c.module(), &keep).materialized(),
        full.g0.select_rows(c.module(), &keep).materialized(),
    )?;
    let cobar_cap = COBAR_MIN_CAP;
    let f = adjoint_bwd(&g, &c, &a, cobar_cap)?;
    let theta = coalg_to_twisting_cochain(&g, &c, &a)?;
    Ok(Some(AdjunctionWitness {
        family: WitnessFamily::BarOfMorphism,
        c,
        a,
        f,
        g,
        theta,
        cobar_cap,
        bar_cap,
    }))
}

fn coextension_witness<R: Rng>(rng: &mut R, ring: Ring) -> Result<Option<AdjunctionWitness>, AlgebraError> {
    let dim = rng.gen_range(2..=4);
    let gens = std::iter::once(0)
        .chain((1..dim).map(|_| rng.gen_range(-1..=2)))
        .collect();
    let table = Table {
        gens,
        prod: Vec::new(),
        local: true,
    };
    let c = ca_from_local_table(rng, ring, &table)?;
    let da = rng.gen_range(1..=3);
    let a = random_ucc_algebra(rng, ring, da)?;
    let slots = MapUnknowns::new(&c.complement(), a.module(), 1, |_, _| true);
    let pr = c.pr();
    // the quadratic term vanishes because dbar = 0 and theta w = 0
    let sol = solve_affine(&slots, |tb| {
        let theta = pr.compose(tb)?;
        let (lhs, rhs) = maurer_cartan_sides(&theta, &c, &a)?;
        Ok(vec![lhs.minus(rhs)?.materialize()?])
    });
    let Ok(sol) = sol else { return Ok(None) };
    let (coeffs, den) = sol.sample(rng);
    if den != 1 {
        return Ok(None);
    }
    let theta_bar = slots.map(&coeffs);
    let und = random_scalar(rng, ring, 1);
    witness_from_theta_bar(WitnessFamily::TrivialCoextension, c, a, &theta_bar, &und).map(Some)
}

/// Everything a witness claims: both objects valid, `f` and `g` morphisms,
/// `theta` a twisting cochain, and the three in correspondence.
#[allow(clippy::too_many_arguments)]
pub fn validate_witness_parts(
    c: &CACoalgebra,
    a: &UCCAlgebra,
    f: &AlgMorphism,
    g: &CoalgMorphism,
    theta: &GradedMap,
    cobar_cap: usize,
    bar_cap: usize,
) -> Result<Report, AlgebraError> {
    let prefixed = |what: &str, mut r: Report| {
        r.violated_eq = r.violated_eq.map(|e| format!("{what}: {e}"));
        r
    };
    let r = validate_ca_coalgebra(c)?;
    if !r.pass {
        return Ok(prefixed("coalgebra", r));
    }
    let r = crate::curved::validate_ucc_algebra(a)?;
    if !r.pass {
        return Ok(prefixed("algebra", r));
    }
    let cobar = crate::barcobar::cobar_object(c, cobar_cap)?;
    let r = crate::curved::validate_alg_morphism(f, &cobar.algebra, a)?;
    if !r.pass {
        return Ok(prefixed("f", r));
    }
    let bar = bar_of_algebra(a, bar_cap)?;
    let r = crate::curved::validate_coalg_morphism(g, c, &bar.coalgebra)?;
    if !r.pass {
        return Ok(prefixed("g", r));
    }
    let r = validate_twisting_cochain(theta, c, a)?;
    if !r.pass {
        return Ok(prefixed("theta", r));
    }
    let mut ck = Checker::new(None);
    let rank = c.module().rank();
    let g2 = adjoint_fwd(f, c, a, bar_cap)?;
    ck.eq("correspondence f -> g1", g2.g1.ex(), g.g1.ex(), rank, 1)?;
    ck.eq("correspondence f -> g0", g2.g0.ex(), g.g0.ex(), rank, 1)?;
    let f2 = adjoint_bwd(g, c, a, cobar_cap)?;
    ck.eq("correspondence g -> f1", f2.f1.ex(), f.f1.ex(), f.f1.dom().rank(), 1)?;
    if f2.und != f.und {
        ck.fail("correspondence g -> und".into(), Some(vec![0]), None);
    }
    let t2 = c.pr().compose(&theta_bar_of_alg(f, c, a)?)?;
    ck.eq("correspondence f -> theta", t2.ex(), theta.ex(), rank, 1)?;
    Ok(ck.finish())
}
