//! Axiom checks. Every check compares two map expressions generator by
//! generator and stops at the first violated equation.

use serde::Serialize;

use super::{rows_within, CACoalgebra, CurvedAInfAlgebra, CurvedAInfCoalgebra, Truncation, UCCAlgebra};
use crate::error::AlgebraError;
use crate::gmod::{compare_on_rows, Expr, GradedModule, SparseVec};

/// Outcome of a validation: either everything held, or the first violated
/// equation together with a witness generator (its tensor-factor indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub pass: bool,
    pub violated_eq: Option<String>,
    pub witness_word: Option<Vec<usize>>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub equations_checked: usize,
    pub rows_checked: usize,
}

pub(crate) fn show_vec(v: &SparseVec) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter()
        .map(|(j, c)| format!("({c})*e{j}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn digits(mut i: usize, rank: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = i % rank;
        i /= rank;
    }
    out
}

pub(crate) struct Checker<'t> {
    trunc: Option<&'t Truncation>,
    report: Report,
}

impl<'t> Checker<'t> {
    pub(crate) fn new(trunc: Option<&'t Truncation>) -> Checker<'t> {
        Checker {
            trunc,
            report: Report {
                pass: true,
                violated_eq: None,
                witness_word: None,
                lhs: None,
                rhs: None,
                equations_checked: 0,
                rows_checked: 0,
            },
        }
    }

    /// Checks `lhs = rhs` on `M^{(x) arity}`, `M` of rank `rank`, within the window.
    pub(crate) fn eq(
        &mut self,
        name: &str,
        lhs: Expr<'_>,
        rhs: Expr<'_>,
        rank: usize,
        arity: usize,
    ) -> Result<(), AlgebraError> {
        let rows = rows_within(self.trunc, rank, arity);
        self.eq_rows(name, lhs, rhs, rows, |i| digits(i, rank, arity))
    }

    pub(crate) fn eq_rows(
        &mut self,
        name: &str,
        lhs: Expr<'_>,
        rhs: Expr<'_>,
        rows: Vec<usize>,
        decode: impl Fn(usize) -> Vec<usize>,
    ) -> Result<(), AlgebraError> {
        if !self.report.pass {
            return Ok(());
        }
        let res = compare_on_rows(&lhs, &rhs, rows)?;
        self.report.equations_checked += 1;
        self.report.rows_checked += res.checked;
        if let Some(&i) = res.inexact.first() {
            self.fail(format!("{name} (inexact within window)"), Some(decode(i)), None);
        } else if let Some((i, a, b)) = res.mismatch {
            self.fail(name.to_string(), Some(decode(i)), Some((a, b)));
        }
        Ok(())
    }

    pub(crate) fn fail(
        &mut self,
        name: String,
        witness: Option<Vec<usize>>,
        sides: Option<(SparseVec, SparseVec)>,
    ) {
        if !self.report.pass {
            return;
        }
        self.report.pass = false;
        self.report.violated_eq = Some(name);
        self.report.witness_word = witness;
        if let Some((a, b)) = sides {
            self.report.lhs = Some(show_vec(&a));
            self.report.rhs = Some(show_vec(&b));
        }
    }

    pub(crate) fn finish(self) -> Report {
        self.report
    }
}

/// `1^{(x) r} (x) f (x) 1^{(x) t}`.
pub(crate) fn sandwich<'a>(
    m: &GradedModule,
    r: usize,
    f: Expr<'a>,
    t: usize,
) -> Result<Expr<'a>, AlgebraError> {
    Expr::id(&m.tensor_power(r)).tensor(f)?.tensor(Expr::id(&m.tensor_power(t)))
}

pub fn validate_ucc_algebra(alg: &UCCAlgebra) -> Result<Report, AlgebraError> {
    let a = alg.module();
    let k = GradedModule::unit(a.ring());
    let r = a.rank();
    let id = || Expr::id(a);
    let (m2, m1, m0, eta, v) = (alg.m2().ex(), alg.m1().ex(), alg.m0().ex(), alg.eta().ex(), alg.v().ex());
    let mut ck = Checker::new(alg.truncation());
    ck.eq(
        "associativity",
        id().tensor(m2.clone())?.then(m2.clone())?,
        m2.clone().tensor(id())?.then(m2.clone())?,
        r,
        3,
    )?;
    ck.eq(
        "leibniz",
        m2.clone().then(m1.clone())?,
        id().tensor(m1.clone())?.plus(m1.clone().tensor(id())?)?.then(m2.clone())?,
        r,
        2,
    )?;
    ck.eq(
        "curvature",
        m1.clone().then(m1.clone())?,
        m0.clone().tensor(id())?.minus(id().tensor(m0.clone())?)?.then(m2.clone())?,
        r,
        1,
    )?;
    ck.eq("bianchi", m0.clone().then(m1.clone())?, Expr::zero(&k, a, 3), r, 0)?;
    ck.eq("right_unit", id().tensor(eta.clone())?.then(m2.clone())?, id(), r, 1)?;
    ck.eq("left_unit", eta.clone().tensor(id())?.then(m2)?, id(), r, 1)?;
    ck.eq("unit_closed", eta.clone().then(m1)?, Expr::zero(&k, a, 1), r, 0)?;
    ck.eq("splitting", eta.then(v)?, Expr::id(&k), r, 0)?;
    Ok(ck.finish())
}

pub fn validate_ca_coalgebra(coalg: &CACoalgebra) -> Result<Report, AlgebraError> {
    let c = coalg.module();
    let k = GradedModule::unit(c.ring());
    let r = c.rank();
    let id = || Expr::id(c);
    let (d2, d1, d0, eps, w) = (
        coalg.d2().ex(),
        coalg.d1().ex(),
        coalg.d0().ex(),
        coalg.eps().ex(),
        coalg.w().ex(),
    );
    let mut ck = Checker::new(coalg.truncation());
    ck.eq(
        "coassociativity",
        d2.clone().then(id().tensor(d2.clone())?)?,
        d2.clone().then(d2.clone().tensor(id())?)?,
        r,
        1,
    )?;
    ck.eq(
        "coleibniz",
        d1.clone().then(d2.clone())?,
        d2.clone().then(id().tensor(d1.clone())?.plus(d1.clone().tensor(id())?)?)?,
        r,
        1,
    )?;
    ck.eq(
        "curvature",
        d1.clone().then(d1.clone())?,
        d2.clone().then(id().tensor(d0.clone())?.minus(d0.clone().tensor(id())?)?)?,
        r,
        1,
    )?;
    ck.eq("bianchi", d1.clone().then(d0)?, Expr::zero(c, &k, 3), r, 1)?;
    ck.eq("right_counit", d2.clone().then(id().tensor(eps.clone())?)?, id(), r, 1)?;
    ck.eq("left_counit", d2.clone().then(eps.clone().tensor(id())?)?, id(), r, 1)?;
    ck.eq("counit_closed", d1.then(eps.clone())?, Expr::zero(c, &k, 1), r, 1)?;
    ck.eq("splitting", w.clone().then(eps)?, Expr::id(&k), r, 0)?;
    ck.eq("grouplike", w.clone().then(d2.clone())?, w.clone().tensor(w.clone())?, r, 0)?;

    // On Cbar, delta2 - 1 (x) w - w (x) 1 must agree with the reduced coproduct.
    let incl = coalg.incl();
    let dbar = coalg.reduced_coproduct()?;
    let cbar_rows: Vec<usize> = rows_within(coalg.truncation(), r, 1)
        .into_iter()
        .filter(|&i| i > 0)
        .map(|i| i - 1)
        .collect();
    ck.eq_rows(
        "reduced_coproduct",
        incl.ex()
            .then(d2.minus(id().tensor(w.clone())?)?.minus(w.tensor(id())?)?)?,
        dbar.ex().then(incl.ex().tensor(incl.ex())?)?,
        cbar_rows,
        |i| vec![i + 1],
    )?;
    if coalg.conilpotency().is_none() {
        ck.fail("conilpotency".into(), None, None);
    }
    Ok(ck.finish())
}

/// The curved A-infinity relations and strict unit laws up to arity `cap`.
pub fn validate_cainf_algebra(alg: &CurvedAInfAlgebra, cap: usize) -> Result<Report, AlgebraError> {
    let a1 = alg.shifted();
    let r = a1.rank();
    let k = GradedModule::unit(a1.ring());
    let bs: Vec<_> = (0..=cap + 1).map(|n| alg.b(n)).collect();
    let mut ck = Checker::new(None);
    for n in 0..=cap {
        let mut lhs = Expr::zero(&a1.tensor_power(n), &a1, 2);
        for kk in 0..=n {
            for rr in 0..=n - kk {
                let t = n - kk - rr;
                let (inner, outer) = (&bs[kk], &bs[rr + 1 + t]);
                if inner.is_zero() || outer.is_zero() {
                    continue;
                }
                lhs = lhs.plus(sandwich(&a1, rr, inner.ex(), t)?.then(outer.ex())?)?;
            }
        }
        ck.eq(&format!("ainf_relation[n={n}]"), lhs, Expr::zero(&a1.tensor_power(n), &a1, 2), r, n)?;
    }
    let eta = alg.eta_bold();
    for (j, bj) in bs.iter().enumerate().skip(1) {
        for left in 0..j {
            let right = j - 1 - left;
            let lhs = sandwich(&a1, left, eta.ex(), right)?.then(bj.ex())?;
            let dom = a1.tensor_power(j - 1);
            let rhs = match (j, left) {
                (2, 1) => Expr::id(&a1),
                (2, 0) => Expr::id(&a1).neg(),
                _ => Expr::zero(&dom, &a1, 0),
            };
            ck.eq(&format!("strict_unit[n={j},pos={left}]"), lhs, rhs, r, j - 1)?;
        }
    }
    ck.eq("splitting", eta.ex().then(alg.v_bold().ex())?, Expr::id(&k), r, 0)?;
    Ok(ck.finish())
}

/// The curved A-infinity coalgebra relations and strict counit laws up to arity `cap`.
pub fn validate_cainf_coalgebra(coalg: &CurvedAInfCoalgebra, cap: usize) -> Result<Report, AlgebraError> {
    let c1 = coalg.shifted();
    let r = c1.rank();
    let k = GradedModule::unit(c1.ring());
    let xs: Vec<_> = (0..=cap + 1).map(|n| coalg.xi(n)).collect();
    let mut ck = Checker::new(None);
    for n in 0..=cap {
        let mut lhs = Expr::zero(&c1, &c1.tensor_power(n), 2);
        for kk in 0..=n {
            for rr in 0..=n - kk {
                let t = n - kk - rr;
                let (outer, inner) = (&xs[rr + 1 + t], &xs[kk]);
                if inner.is_zero() || outer.is_zero() {
                    continue;
                }
                lhs = lhs.plus(outer.ex().then(sandwich(&c1, rr, inner.ex(), t)?)?)?;
            }
        }
        ck.eq(&format!("ainf_relation[n={n}]"), lhs, Expr::zero(&c1, &c1.tensor_power(n), 2), r, 1)?;
    }
    let eps = coalg.eps_bold();
    for (j, xj) in xs.iter().enumerate().skip(1) {
        for left in 0..j {
            let right = j - 1 - left;
            let lhs = xj.ex().then(sandwich(&c1, left, eps.ex(), right)?)?;
            let cod = c1.tensor_power(j - 1);
            let rhs = match (j, left) {
                (2, 1) => Expr::id(&c1).neg(),
                (2, 0) => Expr::id(&c1),
                _ => Expr::zero(&c1, &cod, 0),
            };
            ck.eq(&format!("strict_counit[n={j},pos={left}]"), lhs, rhs, r, 1)?;
        }
    }
    let w = coalg.w_bold();
    ck.eq("splitting", w.ex().then(eps.ex())?, Expr::id(&k), r, 0)?;
    ck.eq(
        "grouplike",
        w.ex().then(xs[2].ex())?,
        w.ex().tensor(w.ex())?.neg(),
        r,
        0,
    )?;
    Ok(ck.finish())
}

/// `m0 = 0`.
pub fn is_ucdg(alg: &UCCAlgebra) -> bool {
    alg.m0().is_zero()
}

/// `w delta1 = 0` and `w delta0 = 0`.
pub fn is_ac(coalg: &CACoalgebra) -> bool {
    let w = coalg.w().row_vec(0);
    coalg.d1().ex().apply(&w).0.is_empty() && coalg.d0().ex().apply(&w).0.is_empty()
}
