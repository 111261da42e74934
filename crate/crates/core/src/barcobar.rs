//! The bar construction of a curved algebra and the cobar construction of a
//! curved augmented coalgebra, on truncated word modules.

use crate::curved::{
    basis_functional, basis_vector, AlgMorphism, CACoalgebra, CoalgMorphism, CurvedAInfAlgebra,
    CurvedAInfCoalgebra, Truncation, UCCAlgebra,
};
use crate::error::AlgebraError;
use crate::gmod::{Expr, GradedMap, GradedModule, SparseVec};
use crate::gring::RingElement;
use crate::tca::{
    algebra_hom_from_components, coalgebra_hom_from_components, coderivation_from_components,
    concat_product, cut_coproduct, derivation_from_components, WordModule,
};

pub const BAR_MIN_CAP: usize = 2;
pub const COBAR_MIN_CAP: usize = 4;

/// `Bar A` truncated at word length `cap`; all axioms are exact on words of
/// length at most `exactness_window = cap - 2`.
#[derive(Debug, Clone)]
pub struct BarResult {
    pub coalgebra: CACoalgebra,
    pub words: WordModule,
    pub cap: usize,
    pub exactness_window: usize,
}

/// `Cobar C` truncated at word length `cap`, with the components of `m0` in
/// word lengths 0, 1, 2 (the last one always vanishes).
#[derive(Debug, Clone)]
pub struct CobarResult {
    pub algebra: UCCAlgebra,
    pub words: WordModule,
    pub cap: usize,
    pub m0_components: [GradedMap; 3],
}

pub(crate) fn tensor_power_expr(f: &GradedMap, n: usize) -> Result<Expr<'_>, AlgebraError> {
    let mut e = Expr::id(&GradedModule::unit(f.ring()));
    for _ in 0..n {
        e = e.tensor(f.ex())?;
    }
    Ok(e)
}

pub(crate) fn check_cap(given: usize, required: usize) -> Result<(), AlgebraError> {
    if given < required {
        return Err(AlgebraError::CapTooSmall { given, required });
    }
    Ok(())
}

/// Letter module `Abar[1]` of the bar construction.
pub fn bar_letter(alg: &CurvedAInfAlgebra) -> GradedModule {
    alg.complement().shift(1)
}

/// Letter module `Cbar[-1]` of the cobar construction.
pub fn cobar_letter(coalg: &CACoalgebra) -> GradedModule {
    coalg.complement().shift(-1)
}

pub fn bar_object(alg: &CurvedAInfAlgebra, cap: usize) -> Result<BarResult, AlgebraError> {
    check_cap(cap, BAR_MIN_CAP)?;
    let letter = bar_letter(alg);
    let words = WordModule::new(&letter, cap);
    let pr = alg.pr();
    let incl = alg.incl();
    let top = alg.arity_len().min(cap + 2);
    let mut bbar = Vec::with_capacity(top);
    for k in 0..top {
        let bk = alg.b(k);
        bbar.push(
            tensor_power_expr(&incl, k)?
                .then(bk.ex())?
                .then(pr.ex())?
                .materialize()?,
        );
    }
    let d1 = coderivation_from_components(&words, &bbar)?;
    let d2 = cut_coproduct(&words);

    // delta0 = -(incl b v) on each word length
    let k = GradedModule::unit(alg.ring());
    let mut rows = vec![SparseVec::new(); words.rank()];
    for n in 0..top.min(cap + 1) {
        let bn = alg.b(n);
        let e = tensor_power_expr(&incl, n)?
            .then(bn.ex())?
            .then(alg.v_bold().ex())?
            .neg();
        for idx in words.offset(n)..words.offset(n + 1) {
            rows[idx] = e.eval_basis(idx - words.offset(n)).0;
        }
    }
    let d0 = GradedMap::from_rows(words.module(), &k, 2, rows)?;
    let coalgebra = CACoalgebra::new(
        words.module(),
        d2,
        d1,
        d0,
        basis_functional(words.module(), 0),
        basis_vector(words.module(), 0),
    )?
    .with_truncation(Truncation::new(&words, cap - 2));
    Ok(BarResult {
        coalgebra,
        words,
        cap,
        exactness_window: cap - 2,
    })
}

/// `Bar A` for a unit-complemented curved algebra.
pub fn bar_of_algebra(alg: &UCCAlgebra, cap: usize) -> Result<BarResult, AlgebraError> {
    bar_object(&CurvedAInfAlgebra::from_ucc(alg)?, cap)
}

/// `Bar f`: the strict coalgebra map with letter map `incl f1 pr` together
/// with `g0 = incl f v` (the unit word gives `und f`, letters give `f1 v`).
pub fn bar_morphism(
    f: &AlgMorphism,
    a: &UCCAlgebra,
    b: &UCCAlgebra,
    cap: usize,
) -> Result<CoalgMorphism, AlgebraError> {
    check_cap(cap, BAR_MIN_CAP)?;
    let (sa, sb) = (CurvedAInfAlgebra::from_ucc(a)?, CurvedAInfAlgebra::from_ucc(b)?);
    let (wa, wb) = (
        WordModule::new(&bar_letter(&sa), cap),
        WordModule::new(&bar_letter(&sb), cap),
    );
    let f1 = f.f1.relabel_shift(1, 1);
    let incl_a = sa.incl();
    let letter_map = incl_a.ex().then(f1.ex())?.then(sb.pr().ex())?.materialize()?;
    let zero = GradedMap::zero(&GradedModule::unit(a.ring()), wb.letter(), 0);
    let g1 = coalgebra_hom_from_components(&wa, &wb, &[zero, letter_map])?;

    let k = GradedModule::unit(a.ring());
    let on_letters = incl_a.ex().then(f1.ex())?.then(sb.v_bold().ex())?;
    let mut rows = vec![SparseVec::new(); wa.rank()];
    if !f.und.is_zero() {
        rows[0].insert(0, f.und.clone());
    }
    for idx in wa.offset(1)..wa.offset(2) {
        rows[idx] = on_letters.eval_basis(idx - 1).0;
    }
    let g0 = GradedMap::from_rows(wa.module(), &k, 1, rows)?;
    CoalgMorphism::new(g1, g0)
}

pub fn cobar_object(coalg: &CACoalgebra, cap: usize) -> Result<CobarResult, AlgebraError> {
    check_cap(cap, COBAR_MIN_CAP)?;
    if let Some(t) = coalg.truncation() {
        return Err(AlgebraError::InvalidStructure(format!(
            "cobar construction needs an exact coalgebra; the input is truncated at cap {} and only exact on words of length <= {}",
            t.cap, t.window
        )));
    }
    let xi = CurvedAInfCoalgebra::from_ca(coalg)?;
    let c1 = xi.shifted();
    let letter = cobar_letter(coalg);
    let words = WordModule::new(&letter, cap);
    let pr = coalg.pr().relabel_shift(-1, -1);
    let incl = coalg.incl().relabel_shift(-1, -1);
    let (eps, w) = (xi.eps_bold(), xi.w_bold());
    let (xi0, xi1, xi2) = (xi.xi(0), xi.xi(1), xi.xi(2));

    let ok = |name: &str, lhs: Expr<'_>, rhs: Expr<'_>, rows: usize| -> Result<(), AlgebraError> {
        for i in 0..rows {
            if lhs.eval_basis(i) != rhs.eval_basis(i) {
                return Err(AlgebraError::InvalidStructure(format!(
                    "cobar construction: {name} fails on generator {i}"
                )));
            }
        }
        Ok(())
    };
    // xi2 composed with pr (x) pr, extended from Cbar[-1]
    ok(
        "reduced xi2",
        xi2.ex().then(pr.ex().then(incl.ex())?.tensor(pr.ex().then(incl.ex())?)?)?,
        xi2.ex()
            .plus(Expr::id(&c1).tensor(w.ex())?)?
            .minus(w.ex().tensor(Expr::id(&c1))?)?
            .minus(eps.ex().then(w.ex().tensor(w.ex())?)?)?,
        c1.rank(),
    )?;

    let bars: Vec<GradedMap> = [&xi0, &xi1, &xi2]
        .iter()
        .enumerate()
        .map(|(n, x)| {
            incl.ex()
                .then(x.ex())?
                .then(tensor_power_expr(&pr, n)?)?
                .materialize()
        })
        .collect::<Result<_, _>>()?;
    let m1 = derivation_from_components(&words, &bars)?;
    let m2 = concat_product(&words);

    let m00 = w.ex().then(xi0.ex())?.neg().materialize()?;
    let m01_full = w.ex().then(xi1.ex())?.neg().materialize()?;
    if !m01_full.entry(0, 0).is_zero() {
        return Err(AlgebraError::InvalidStructure(
            "cobar construction: w xi1 has a counit component".into(),
        ));
    }
    let m01 = m01_full.compose(&pr)?;
    let m02 = w
        .ex()
        .tensor(w.ex())?
        .plus(w.ex().then(xi2.ex())?)?
        .neg()
        .materialize()?;
    if !m02.is_zero() {
        return Err(AlgebraError::InvalidStructure(
            "cobar construction: (m0)_2 = -w (x) w - w xi2 is nonzero".into(),
        ));
    }
    let k = GradedModule::unit(coalg.ring());
    let mut m0_row = SparseVec::new();
    let c00 = m00.entry(0, 0);
    if !c00.is_zero() {
        m0_row.insert(0, c00);
    }
    for (j, c) in m01.row_vec(0) {
        m0_row.insert(words.offset(1) + j, c);
    }
    let m0 = GradedMap::from_rows(&k, words.module(), 2, vec![m0_row])?;
    let (m0m1, lossy) = m1.apply(&m0.row_vec(0));
    if lossy || !m0m1.is_empty() {
        return Err(AlgebraError::InvalidStructure(
            "cobar construction: m0 m1 is nonzero".into(),
        ));
    }
    let algebra = UCCAlgebra::new(
        words.module(),
        m2,
        m1,
        m0,
        basis_vector(words.module(), 0),
        basis_functional(words.module(), 0),
    )?
    .with_truncation(Truncation::new(&words, cap - 2));
    Ok(CobarResult {
        algebra,
        words,
        cap,
        m0_components: [m00, m01, m02],
    })
}

/// `w g0`, a degree-1 scalar.
fn pointed_value(w: &GradedMap, g0: &GradedMap) -> Result<RingElement, AlgebraError> {
    Ok(w.compose(g0)?.entry(0, 0))
}

/// `Cobar g`: the algebra map generated by `g1` and `g0` restricted to
/// `Cbar[-1]`, with `und(Cobar g) = w g0`.
pub fn cobar_morphism(
    g: &CoalgMorphism,
    c: &CACoalgebra,
    d: &CACoalgebra,
    cap: usize,
) -> Result<AlgMorphism, AlgebraError> {
    check_cap(cap, COBAR_MIN_CAP)?;
    let (wc, wd) = (
        WordModule::new(&cobar_letter(c), cap),
        WordModule::new(&cobar_letter(d), cap),
    );
    let incl_c = c.incl().relabel_shift(-1, -1);
    let pr_d = d.pr().relabel_shift(-1, -1);
    let g1 = g.g1.relabel_shift(-1, -1);
    let g0 = g.g0.relabel_shift(-1, 0);
    let gbar1 = incl_c.ex().then(g1.ex())?.then(pr_d.ex())?.materialize()?;
    let gbar0 = incl_c.compose(&g0)?;
    if !c.w().compose(&g.g1)?.compose(&d.pr())?.is_zero() {
        return Err(AlgebraError::InvalidStructure(
            "cobar of a morphism: w g1 pr is nonzero".into(),
        ));
    }
    let f1 = algebra_hom_from_components(&wc, &wd, &[gbar0, gbar1])?;
    AlgMorphism::new(f1, pointed_value(c.w(), &g.g0)?)
}
