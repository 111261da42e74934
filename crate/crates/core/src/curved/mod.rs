//! Curved algebras and coalgebras in both their shifted (`b`, `xi`) and
//! unshifted (`m`, `delta`) forms, their morphisms, validators and seeded
//! instance generators.
//!
//! Structures are normalized so that the unit (resp. counit) generator is
//! index 0: `eta = e_0` and `v(e_0) = 1` for algebras, `eps = e_0^*` and
//! `w = e_0 + sum w_i e_i` for coalgebras. The complements are then
//! `Abar = span(e_i - v_i e_0, i >= 1)` and `Cbar = span(e_i, i >= 1)`.

mod convert;
pub mod gen;
mod morphism;
mod validate;

use std::sync::Arc;

pub use convert::{b_from_m, delta_from_xi, m_from_b, xi_from_delta};
pub use morphism::{
    compose_alg_morphisms, compose_coalg_morphisms, validate_alg_morphism, validate_coalg_morphism,
    AlgMorphism, CoalgMorphism,
};
pub use validate::{
    is_ac, is_ucdg, validate_ca_coalgebra, validate_cainf_algebra, validate_cainf_coalgebra,
    validate_ucc_algebra, Report,
};
pub(crate) use validate::Checker;

use crate::error::AlgebraError;
use crate::gmod::{GradedMap, GradedModule, SparseVec};
use crate::gring::{Ring, RingElement};
use crate::tca::{conilpotency_index, WordModule};

/// Word-length bookkeeping for structures living on a truncated word module.
/// Axioms are only asserted on tensors of basis words whose total length is
/// at most `window`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub cap: usize,
    pub window: usize,
    pub letter_rank: usize,
    lengths: Arc<[usize]>,
}

impl Truncation {
    pub fn new(words: &WordModule, window: usize) -> Truncation {
        Truncation {
            cap: words.cap(),
            window,
            letter_rank: words.letter().rank(),
            lengths: Arc::from(words.lengths()),
        }
    }

    pub fn length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    /// Number of basis words of length at most `l`.
    pub fn count_up_to(&self, l: usize) -> usize {
        self.lengths.partition_point(|&n| n <= l)
    }
}

/// Row indices of `M^{(x) k}` (rank of `M` is `rank`) that a validator checks.
pub(crate) fn rows_within(trunc: Option<&Truncation>, rank: usize, k: usize) -> Vec<usize> {
    let Some(t) = trunc else {
        return (0..rank.pow(k as u32)).collect();
    };
    let mut out = Vec::new();
    fn rec(t: &Truncation, rank: usize, k: usize, budget: usize, acc: usize, out: &mut Vec<usize>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in 0..t.count_up_to(budget) {
            rec(t, rank, k - 1, budget - t.length(i), acc * rank + i, out);
        }
    }
    rec(t, rank, k, t.window, 0, &mut out);
    out
}

fn unit_module(ring: Ring) -> GradedModule {
    GradedModule::unit(ring)
}

/// `k -> M` sending 1 to `e_idx`.
pub fn basis_vector(m: &GradedModule, idx: usize) -> GradedMap {
    let k = unit_module(m.ring());
    GradedMap::from_entries(&k, m, -m.degree(idx), [(0, idx, m.ring().one())])
        .expect("degree-consistent")
}

/// `M -> k` reading the `idx` coordinate.
pub fn basis_functional(m: &GradedModule, idx: usize) -> GradedMap {
    let k = unit_module(m.ring());
    GradedMap::from_entries(m, &k, m.degree(idx), [(idx, 0, m.ring().one())])
        .expect("degree-consistent")
}

fn expect_shape(
    name: &str,
    f: &GradedMap,
    dom: &GradedModule,
    cod: &GradedModule,
    deg: i32,
) -> Result<(), AlgebraError> {
    if f.dom() != dom || f.cod() != cod || f.deg() != deg {
        return Err(AlgebraError::ShapeMismatch(format!(
            "{name} must be a degree {deg} map {dom:?} -> {cod:?}, got degree {} {:?} -> {:?}",
            f.deg(),
            f.dom(),
            f.cod()
        )));
    }
    Ok(())
}

fn is_basis_row(row: &SparseVec, idx: usize, one: &RingElement) -> bool {
    row.len() == 1 && row.get(&idx) == Some(one)
}

/// `Abar` generators: the degrees of `e_1, ..., e_{n-1}`.
fn complement_module(m: &GradedModule) -> GradedModule {
    GradedModule::new(m.ring(), m.gens()[1..].to_vec())
}

/// A unit-complemented curved algebra `(A, m2, m1, m0, eta, v)`.
#[derive(Debug, Clone)]
pub struct UCCAlgebra {
    a: GradedModule,
    m2: GradedMap,
    m1: GradedMap,
    m0: GradedMap,
    eta: GradedMap,
    v: GradedMap,
    trunc: Option<Truncation>,
}

impl UCCAlgebra {
    pub fn new(
        a: &GradedModule,
        m2: GradedMap,
        m1: GradedMap,
        m0: GradedMap,
        eta: GradedMap,
        v: GradedMap,
    ) -> Result<UCCAlgebra, AlgebraError> {
        let a = a.flatten();
        let k = unit_module(a.ring());
        if a.rank() == 0 {
            return Err(AlgebraError::InvalidStructure("an algebra needs a unit generator".into()));
        }
        expect_shape("m2", &m2, &a.tensor(&a)?, &a, 0)?;
        expect_shape("m1", &m1, &a, &a, 1)?;
        expect_shape("m0", &m0, &k, &a, 2)?;
        expect_shape("eta", &eta, &k, &a, 0)?;
        expect_shape("v", &v, &a, &k, 0)?;
        let one = a.ring().one();
        if !is_basis_row(&eta.row_vec(0), 0, &one) {
            return Err(AlgebraError::InvalidStructure("the unit must be e_0".into()));
        }
        if v.entry(0, 0) != one {
            return Err(AlgebraError::InvalidStructure("v(e_0) must be 1".into()));
        }
        Ok(UCCAlgebra {
            a,
            m2,
            m1,
            m0,
            eta,
            v,
            trunc: None,
        })
    }

    pub fn with_truncation(mut self, t: Truncation) -> UCCAlgebra {
        self.trunc = Some(t);
        self
    }

    pub fn module(&self) -> &GradedModule {
        &self.a
    }

    pub fn ring(&self) -> Ring {
        self.a.ring()
    }

    pub fn m2(&self) -> &GradedMap {
        &self.m2
    }

    pub fn m1(&self) -> &GradedMap {
        &self.m1
    }

    pub fn m0(&self) -> &GradedMap {
        &self.m0
    }

    pub fn eta(&self) -> &GradedMap {
        &self.eta
    }

    pub fn v(&self) -> &GradedMap {
        &self.v
    }

    pub fn truncation(&self) -> Option<&Truncation> {
        self.trunc.as_ref()
    }

    /// `Abar = Ker v`, with basis `e_i - v_i e_0` for `i >= 1`.
    pub fn complement(&self) -> GradedModule {
        complement_module(&self.a)
    }

    /// `Abar -> A`.
    pub fn incl(&self) -> GradedMap {
        let abar = self.complement();
        let one = self.ring().one();
        let rows = (1..self.a.rank())
            .map(|i| {
                let mut r = SparseVec::from([(i, one.clone())]);
                let vi = self.v.entry(i, 0);
                if !vi.is_zero() {
                    r.insert(0, vi.neg());
                }
                r
            })
            .collect();
        GradedMap::from_rows(&abar, &self.a, 0, rows).expect("degree-consistent")
    }

    /// `A -> Abar`, the projection `1 - v eta`.
    pub fn pr(&self) -> GradedMap {
        let abar = self.complement();
        let one = self.ring().one();
        let rows = (0..self.a.rank())
            .map(|i| {
                if i == 0 {
                    SparseVec::new()
                } else {
                    SparseVec::from([(i - 1, one.clone())])
                }
            })
            .collect();
        GradedMap::from_rows(&self.a, &abar, 0, rows).expect("degree-consistent")
    }

    /// Same structure with another splitting of the unit.
    pub fn with_v(&self, v: GradedMap) -> Result<UCCAlgebra, AlgebraError> {
        UCCAlgebra::new(
            &self.a,
            self.m2.clone(),
            self.m1.clone(),
            self.m0.clone(),
            self.eta.clone(),
            v,
        )
    }
}

/// A curved augmented coalgebra `(C, delta2, delta1, delta0, eps, w)`.
#[derive(Debug, Clone)]
pub struct CACoalgebra {
    c: GradedModule,
    d2: GradedMap,
    d1: GradedMap,
    d0: GradedMap,
    eps: GradedMap,
    w: GradedMap,
    trunc: Option<Truncation>,
    conil: Option<usize>,
}

impl CACoalgebra {
    pub fn new(
        c: &GradedModule,
        d2: GradedMap,
        d1: GradedMap,
        d0: GradedMap,
        eps: GradedMap,
        w: GradedMap,
    ) -> Result<CACoalgebra, AlgebraError> {
        let c = c.flatten();
        let k = unit_module(c.ring());
        if c.rank() == 0 {
            return Err(AlgebraError::InvalidStructure("a coalgebra needs a counit generator".into()));
        }
        expect_shape("delta2", &d2, &c, &c.tensor(&c)?, 0)?;
        expect_shape("delta1", &d1, &c, &c, 1)?;
        expect_shape("delta0", &d0, &c, &k, 2)?;
        expect_shape("eps", &eps, &c, &k, 0)?;
        expect_shape("w", &w, &k, &c, 0)?;
        let one = c.ring().one();
        let eps_ok = (0..c.rank()).all(|i| {
            let r = eps.row_vec(i);
            if i == 0 {
                is_basis_row(&r, 0, &one)
            } else {
                r.is_empty()
            }
        });
        if !eps_ok {
            return Err(AlgebraError::InvalidStructure("the counit must be e_0^*".into()));
        }
        if w.entry(0, 0) != one {
            return Err(AlgebraError::InvalidStructure("w must have e_0-coefficient 1".into()));
        }
        let mut out = CACoalgebra {
            c,
            d2,
            d1,
            d0,
            eps,
            w,
            trunc: None,
            conil: None,
        };
        out.conil = conilpotency_index(&out.reduced_coproduct()?, out.c.rank() + 2).ok();
        Ok(out)
    }

    pub fn with_truncation(mut self, t: Truncation) -> CACoalgebra {
        self.trunc = Some(t);
        self
    }

    /// Drops the truncation window, e.g. for a bar construction that is
    /// known to be exact on all words.
    pub fn without_truncation(mut self) -> CACoalgebra {
        self.trunc = None;
        self
    }

    pub fn module(&self) -> &GradedModule {
        &self.c
    }

    pub fn ring(&self) -> Ring {
        self.c.ring()
    }

    pub fn d2(&self) -> &GradedMap {
        &self.d2
    }

    pub fn d1(&self) -> &GradedMap {
        &self.d1
    }

    pub fn d0(&self) -> &GradedMap {
        &self.d0
    }

    pub fn eps(&self) -> &GradedMap {
        &self.eps
    }

    pub fn w(&self) -> &GradedMap {
        &self.w
    }

    pub fn truncation(&self) -> Option<&Truncation> {
        self.trunc.as_ref()
    }

    /// Conilpotency index of `(Cbar, dbar2)`, if finite.
    pub fn conilpotency(&self) -> Option<usize> {
        self.conil
    }

    pub fn complement(&self) -> GradedModule {
        complement_module(&self.c)
    }

    /// `Cbar -> C`.
    pub fn incl(&self) -> GradedMap {
        let cbar = self.complement();
        let one = self.ring().one();
        let rows = (1..self.c.rank())
            .map(|i| SparseVec::from([(i, one.clone())]))
            .collect();
        GradedMap::from_rows(&cbar, &self.c, 0, rows).expect("degree-consistent")
    }

    /// `C -> Cbar`, the projection `1 - eps w`.
    pub fn pr(&self) -> GradedMap {
        let cbar = self.complement();
        let one = self.ring().one();
        let wrow = self.w.row_vec(0);
        let rows = (0..self.c.rank())
            .map(|i| {
                if i == 0 {
                    wrow.iter()
                        .filter(|(&j, _)| j > 0)
                        .map(|(&j, c)| (j - 1, c.neg()))
                        .collect()
                } else {
                    SparseVec::from([(i - 1, one.clone())])
                }
            })
            .collect();
        GradedMap::from_rows(&self.c, &cbar, 0, rows).expect("degree-consistent")
    }

    /// `dbar2 = incl . delta2 . (pr (x) pr): Cbar -> Cbar (x) Cbar`.
    pub fn reduced_coproduct(&self) -> Result<GradedMap, AlgebraError> {
        let incl = self.incl();
        let pr = self.pr();
        incl.ex()
            .then(self.d2.ex())?
            .then(pr.ex().tensor(pr.ex())?)?
            .materialize()
    }
}

/// A strict-unit-complemented curved A-infinity algebra in shifted form:
/// `b[n]: A[1]^{(x) n} -> A[1]` of degree 1, with `b_n = 0` beyond the list.
#[derive(Debug, Clone)]
pub struct CurvedAInfAlgebra {
    a: GradedModule,
    b: Vec<GradedMap>,
    eta: GradedMap,
    v: GradedMap,
}

impl CurvedAInfAlgebra {
    pub fn new(
        a: &GradedModule,
        b: Vec<GradedMap>,
        eta_bold: GradedMap,
        v_bold: GradedMap,
    ) -> Result<CurvedAInfAlgebra, AlgebraError> {
        let a = a.flatten();
        let a1 = a.shift(1);
        let k = unit_module(a.ring());
        for (n, bn) in b.iter().enumerate() {
            expect_shape(&format!("b_{n}"), bn, &a1.tensor_power(n), &a1, 1)?;
        }
        expect_shape("eta", &eta_bold, &k, &a1, -1)?;
        expect_shape("v", &v_bold, &a1, &k, 1)?;
        let one = a.ring().one();
        if !is_basis_row(&eta_bold.row_vec(0), 0, &one) || v_bold.entry(0, 0) != one {
            return Err(AlgebraError::InvalidStructure(
                "the strict unit must be e_0 with v(e_0) = 1".into(),
            ));
        }
        Ok(CurvedAInfAlgebra {
            a,
            b,
            eta: eta_bold,
            v: v_bold,
        })
    }

    pub fn module(&self) -> &GradedModule {
        &self.a
    }

    pub fn shifted(&self) -> GradedModule {
        self.a.shift(1)
    }

    pub fn ring(&self) -> Ring {
        self.a.ring()
    }

    /// `b_n`, or the zero map past the stored arities.
    pub fn b(&self, n: usize) -> GradedMap {
        self.b.get(n).cloned().unwrap_or_else(|| {
            let a1 = self.shifted();
            GradedMap::zero(&a1.tensor_power(n), &a1, 1)
        })
    }

    /// One past the largest stored arity.
    pub fn arity_len(&self) -> usize {
        self.b.len()
    }

    pub fn eta_bold(&self) -> &GradedMap {
        &self.eta
    }

    pub fn v_bold(&self) -> &GradedMap {
        &self.v
    }

    /// `pr = 1 - v eta` on `A[1]`, as a map `A[1] -> Abar[1]`.
    pub fn pr(&self) -> GradedMap {
        let alg = self.unit_data();
        alg.pr().relabel_shift(1, 1)
    }

    /// `Abar[1] -> A[1]`.
    pub fn incl(&self) -> GradedMap {
        let alg = self.unit_data();
        alg.incl().relabel_shift(1, 1)
    }

    pub fn complement(&self) -> GradedModule {
        complement_module(&self.a)
    }

    /// A structure with the same unit data and trivial operations, used for
    /// the complement maps (which only depend on `v`).
    fn unit_data(&self) -> UCCAlgebra {
        let a = &self.a;
        let k = unit_module(a.ring());
        UCCAlgebra {
            a: a.clone(),
            m2: GradedMap::zero(&a.tensor(a).expect("same ring"), a, 0),
            m1: GradedMap::zero(a, a, 1),
            m0: GradedMap::zero(&k, a, 2),
            eta: self.eta.relabel_shift(0, -1),
            v: self.v.relabel_shift(-1, 0),
            trunc: None,
        }
    }
}

/// A strict-counit-complemented curved A-infinity coalgebra in shifted form:
/// `xi[n]: C[-1] -> C[-1]^{(x) n}` of degree 1.
#[derive(Debug, Clone)]
pub struct CurvedAInfCoalgebra {
    c: GradedModule,
    xi: Vec<GradedMap>,
    eps: GradedMap,
    w: GradedMap,
}

impl CurvedAInfCoalgebra {
    pub fn new(
        c: &GradedModule,
        xi: Vec<GradedMap>,
        eps_bold: GradedMap,
        w_bold: GradedMap,
    ) -> Result<CurvedAInfCoalgebra, AlgebraError> {
        let c = c.flatten();
        let c1 = c.shift(-1);
        let k = unit_module(c.ring());
        for (n, x) in xi.iter().enumerate() {
            expect_shape(&format!("xi_{n}"), x, &c1, &c1.tensor_power(n), 1)?;
        }
        expect_shape("eps", &eps_bold, &c1, &k, -1)?;
        expect_shape("w", &w_bold, &k, &c1, 1)?;
        Ok(CurvedAInfCoalgebra {
            c,
            xi,
            eps: eps_bold,
            w: w_bold,
        })
    }

    pub fn module(&self) -> &GradedModule {
        &self.c
    }

    pub fn shifted(&self) -> GradedModule {
        self.c.shift(-1)
    }

    pub fn ring(&self) -> Ring {
        self.c.ring()
    }

    pub fn xi(&self, n: usize) -> GradedMap {
        self.xi.get(n).cloned().unwrap_or_else(|| {
            let c1 = self.shifted();
            GradedMap::zero(&c1, &c1.tensor_power(n), 1)
        })
    }

    pub fn arity_len(&self) -> usize {
        self.xi.len()
    }

    pub fn eps_bold(&self) -> &GradedMap {
        &self.eps
    }

    pub fn w_bold(&self) -> &GradedMap {
        &self.w
    }
}
