//! Morphisms of curved algebras and coalgebras.

use super::validate::Checker;
use super::{CACoalgebra, Report, UCCAlgebra};
use crate::error::AlgebraError;
use crate::gmod::{Expr, GradedMap, GradedModule};
use crate::gring::RingElement;

/// `(f1, und f)`: `f1: A -> B` of degree 0 and a degree-1 scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgMorphism {
    pub f1: GradedMap,
    pub und: RingElement,
}

/// `(g1, g0)`: `g1: C -> D` of degree 0 and `g0: C -> k` of degree 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalgMorphism {
    pub g1: GradedMap,
    pub g0: GradedMap,
}

impl AlgMorphism {
    pub fn new(f1: GradedMap, und: RingElement) -> Result<AlgMorphism, AlgebraError> {
        if f1.deg() != 0 {
            return Err(AlgebraError::ShapeMismatch("f1 must have degree 0".into()));
        }
        if !und.is_homogeneous_of(1) {
            return Err(AlgebraError::ShapeMismatch(format!(
                "und must have degree 1, got {und}"
            )));
        }
        Ok(AlgMorphism { f1, und })
    }

    pub fn identity(a: &UCCAlgebra) -> AlgMorphism {
        AlgMorphism {
            f1: GradedMap::identity(a.module()),
            und: a.ring().zero(),
        }
    }
}

impl CoalgMorphism {
    pub fn new(g1: GradedMap, g0: GradedMap) -> Result<CoalgMorphism, AlgebraError> {
        if g1.deg() != 0 || g0.deg() != 1 || g0.dom() != g1.dom() || !g0.cod().is_unit() {
            return Err(AlgebraError::ShapeMismatch(
                "expected g1: C -> D of degree 0 and g0: C -> k of degree 1".into(),
            ));
        }
        Ok(CoalgMorphism { g1, g0 })
    }

    pub fn identity(c: &CACoalgebra) -> CoalgMorphism {
        let k = GradedModule::unit(c.ring());
        CoalgMorphism {
            g1: GradedMap::identity(c.module()),
            g0: GradedMap::zero(c.module(), &k, 1),
        }
    }
}

fn check_ends(f: &GradedMap, dom: &GradedModule, cod: &GradedModule) -> Result<(), AlgebraError> {
    if f.dom() != dom || f.cod() != cod {
        return Err(AlgebraError::ShapeMismatch(format!(
            "morphism goes {:?} -> {:?}, expected {:?} -> {:?}",
            f.dom(),
            f.cod(),
            dom,
            cod
        )));
    }
    Ok(())
}

pub fn validate_alg_morphism(
    f: &AlgMorphism,
    a: &UCCAlgebra,
    b: &UCCAlgebra,
) -> Result<Report, AlgebraError> {
    check_ends(&f.f1, a.module(), b.module())?;
    let r = a.module().rank();
    let f1 = f.f1.ex();
    let mut ck = Checker::new(a.truncation());
    ck.eq(
        "multiplicative",
        f1.clone().tensor(f1.clone())?.then(b.m2().ex())?,
        a.m2().ex().then(f1.clone())?,
        r,
        2,
    )?;
    ck.eq(
        "differential",
        f1.clone().then(b.m1().ex())?,
        a.m1().ex().then(f1.clone())?,
        r,
        1,
    )?;
    ck.eq("curvature", b.m0().ex(), a.m0().ex().then(f1.clone())?, r, 0)?;
    ck.eq("unital", a.eta().ex().then(f1)?, b.eta().ex(), r, 0)?;
    Ok(ck.finish())
}

pub fn validate_coalg_morphism(
    g: &CoalgMorphism,
    c: &CACoalgebra,
    d: &CACoalgebra,
) -> Result<Report, AlgebraError> {
    check_ends(&g.g1, c.module(), d.module())?;
    let cm = c.module();
    let r = cm.rank();
    let id = || Expr::id(cm);
    let (g1, g0) = (g.g1.ex(), g.g0.ex());
    let mut ck = Checker::new(c.truncation());
    ck.eq(
        "comultiplicative",
        c.d2().ex().then(g1.clone().tensor(g1.clone())?)?,
        g1.clone().then(d.d2().ex())?,
        r,
        1,
    )?;
    let mixed = g0.clone().tensor(g1.clone())?.minus(g1.clone().tensor(g0.clone())?)?;
    ck.eq(
        "differential",
        c.d1().ex().then(g1.clone())?.plus(c.d2().ex().then(mixed)?)?,
        g1.clone().then(d.d1().ex())?,
        r,
        1,
    )?;
    ck.eq(
        "curvature",
        c.d0()
            .ex()
            .minus(c.d1().ex().then(g0.clone())?)?
            .minus(c.d2().ex().then(g0.clone().tensor(g0.clone())?)?)?,
        g1.clone().then(d.d0().ex())?,
        r,
        1,
    )?;
    ck.eq("counital", g1.clone().then(d.eps().ex())?, c.eps().ex(), r, 1)?;
    ck.eq("pointed", c.w().ex().then(g1)?, d.w().ex(), r, 0)?;

    // Only the restriction of g0 to Cbar can matter in the mixed terms.
    let incl = c.incl();
    let pr = c.pr();
    let dbar = c.reduced_coproduct()?;
    let g0bar = incl.compose(&g.g0)?;
    ck.eq(
        "reduced_form",
        c.d2()
            .ex()
            .then(g0.clone().tensor(id())?.minus(id().tensor(g0.clone())?)?)?,
        pr.ex()
            .then(dbar.ex())?
            .then(
                g0bar
                    .ex()
                    .tensor(incl.ex())?
                    .minus(incl.ex().tensor(g0bar.ex())?)?,
            )?,
        r,
        1,
    )?;
    Ok(ck.finish())
}

/// `f` then `g`: `h1 = f1 g1`, `und h = und f + und g`.
pub fn compose_alg_morphisms(f: &AlgMorphism, g: &AlgMorphism) -> Result<AlgMorphism, AlgebraError> {
    Ok(AlgMorphism {
        f1: f.f1.ex().then(g.f1.ex())?.materialize()?,
        und: f.und.try_add(&g.und)?,
    })
}

/// `f` then `g`: `h1 = f1 g1`, `h0 = f0 + f1 g0`.
pub fn compose_coalg_morphisms(
    f: &CoalgMorphism,
    g: &CoalgMorphism,
) -> Result<CoalgMorphism, AlgebraError> {
    Ok(CoalgMorphism {
        g1: f.g1.ex().then(g.g1.ex())?.materialize()?,
        g0: f.g0.ex().plus(f.g1.ex().then(g.g0.ex())?)?.materialize()?,
    })
}
