//! Free graded modules, homogeneous maps, Koszul-signed tensor products and shifts.
//!
//! Conventions. Scalars act on the left of module elements and maps act on the
//! right of their arguments, so a map is a matrix whose row `i` is the image of
//! the `i`-th generator and composition `f . g` is the matrix product `F G`
//! with no sign. Every sign of the calculus is introduced in exactly two
//! places: [`Expr::Tensor`] evaluation (the Koszul rule
//! `(x (x) y).(f (x) g) = (-1)^{|y||f|} x.f (x) y.g`, plus the sign for moving
//! a coefficient of `y.g` past `x.f`) and [`shift_map`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::AlgebraError;
use crate::gring::{Ring, RingElement};

/// A sparse row vector over a module basis.
pub type SparseVec = BTreeMap<usize, RingElement>;

pub(crate) fn vec_add_term(v: &mut SparseVec, idx: usize, c: RingElement) {
    if c.is_zero() {
        return;
    }
    match v.entry(idx) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// `acc += scalar * v` (scalar on the left).
pub(crate) fn vec_axpy(acc: &mut SparseVec, scalar: &RingElement, v: &SparseVec) {
    for (&k, c) in v {
        vec_add_term(acc, k, scalar.mul(c));
    }
}

/// A finitely generated free graded module, presented as a tensor product of
/// explicitly listed free factors. The empty product is the ground ring, and
/// factors equal to the ground ring are dropped, so `k (x) M` and `M` coincide.
#[derive(Clone)]
pub struct GradedModule {
    ring: Ring,
    factors: Arc<[Arc<[i32]>]>,
}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedModule({}", self.ring)?;
        for fac in self.factors.iter() {
            write!(f, " {:?}", fac)?;
        }
        write!(f, ")")
    }
}

impl PartialEq for GradedModule {
    /// Modules are equal when they have the same ring and the same ordered
    /// generator degrees, regardless of how the tensor factors are grouped.
    fn eq(&self, other: &GradedModule) -> bool {
        if self.ring != other.ring {
            return false;
        }
        if Arc::ptr_eq(&self.factors, &other.factors) || self.factors == other.factors {
            return true;
        }
        let n = self.rank();
        n == other.rank() && (0..n).all(|i| self.degree(i) == other.degree(i))
    }
}

impl Eq for GradedModule {}

impl GradedModule {
    /// Free module with generator `i` in degree `gens[i]`.
    pub fn new(ring: Ring, gens: Vec<i32>) -> GradedModule {
        let factors: Vec<Arc<[i32]>> = if gens == [0] {
            Vec::new()
        } else {
            vec![Arc::from(gens)]
        };
        GradedModule {
            ring,
            factors: Arc::from(factors),
        }
    }

    /// The ground ring as a rank-1 module in degree 0.
    pub fn unit(ring: Ring) -> GradedModule {
        GradedModule {
            ring,
            factors: Arc::from(Vec::new()),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.len()).product()
    }

    /// Degree of the `i`-th generator in lexicographic order of factor indices.
    pub fn degree(&self, mut i: usize) -> i32 {
        let mut d = 0;
        for fac in self.factors.iter().rev() {
            let n = fac.len();
            d += fac[i % n];
            i /= n;
        }
        d
    }

    /// All generator degrees (materialized; only for modest ranks).
    pub fn gens(&self) -> Vec<i32> {
        (0..self.rank()).map(|i| self.degree(i)).collect()
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    /// Tensor product; generators are ordered pairs in lexicographic order.
    pub fn tensor(&self, other: &GradedModule) -> Result<GradedModule, AlgebraError> {
        if self.ring != other.ring {
            return Err(AlgebraError::DescriptorMismatch(self.ring, other.ring));
        }
        let factors: Vec<Arc<[i32]>> = self
            .factors
            .iter()
            .chain(other.factors.iter())
            .cloned()
            .collect();
        Ok(GradedModule {
            ring: self.ring,
            factors: Arc::from(factors),
        })
    }

    /// `M^{(x) n}`; `n = 0` gives the ground ring.
    pub fn tensor_power(&self, n: usize) -> GradedModule {
        let mut out = GradedModule::unit(self.ring);
        for _ in 0..n {
            out = out.tensor(self).expect("same ring");
        }
        out
    }

    /// `M[a]` with `M[a]^k = M^{a+k}`: generator degrees decrease by `a`.
    pub fn shift(&self, a: i32) -> GradedModule {
        if a == 0 {
            return self.clone();
        }
        GradedModule::new(self.ring, self.gens().into_iter().map(|d| d - a).collect())
    }

    /// Collapses the factor structure into a single free factor with the same basis.
    pub fn flatten(&self) -> GradedModule {
        if self.factors.len() <= 1 {
            return self.clone();
        }
        GradedModule::new(self.ring, self.gens())
    }
}

/// Free graded module with the given degrees (convenience).
pub fn tensor_module(m: &GradedModule, n: &GradedModule) -> Result<GradedModule, AlgebraError> {
    m.tensor(n)
}

/// Row oracle of a lazily evaluated map: image of a generator and a lossy flag.
pub type RowFn = Arc<dyn Fn(usize) -> (SparseVec, bool) + Send + Sync>;

#[derive(Clone)]
enum Repr {
    Rows {
        rows: Vec<Vec<(usize, RingElement)>>,
        lossy: BTreeSet<usize>,
    },
    Lazy(RowFn),
}

/// A homogeneous linear map between free graded modules.
///
/// Usually stored as sparse rows; maps on very large modules (concatenation on
/// a tensor square of a word module, say) may instead be given by a row oracle
/// and are evaluated on demand. `lossy` rows are images whose true value had
/// terms outside a truncated codomain; such rows are exact only modulo the
/// dropped terms and are never used as evidence in checks.
#[derive(Clone)]
pub struct GradedMap {
    dom: GradedModule,
    cod: GradedModule,
    deg: i32,
    repr: Repr,
}

impl fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GradedMap(deg {}) {:?} -> {:?}", self.deg, self.dom, self.cod)?;
        match &self.repr {
            Repr::Lazy(_) => writeln!(f, "  <lazy>"),
            Repr::Rows { rows, lossy } => {
                for (i, row) in rows.iter().enumerate() {
                    if !row.is_empty() {
                        write!(f, "  {i}:")?;
                        for (j, c) in row {
                            write!(f, " [{j}] {c};")?;
                        }
                        writeln!(f)?;
                    }
                }
                if !lossy.is_empty() {
                    writeln!(f, "  lossy rows: {lossy:?}")?;
                }
                Ok(())
            }
        }
    }
}

impl PartialEq for GradedMap {
    fn eq(&self, other: &GradedMap) -> bool {
        self.dom == other.dom
            && self.cod == other.cod
            && self.deg == other.deg
            && (0..self.dom.rank()).all(|i| self.eval_basis(i) == other.eval_basis(i))
    }
}

impl GradedMap {
    pub fn zero(dom: &GradedModule, cod: &GradedModule, deg: i32) -> GradedMap {
        GradedMap {
            dom: dom.clone(),
            cod: cod.clone(),
            deg,
            repr: Repr::Rows {
                rows: vec![Vec::new(); dom.rank()],
                lossy: BTreeSet::new(),
            },
        }
    }

    pub fn identity(m: &GradedModule) -> GradedMap {
        let one = m.ring().one();
        GradedMap {
            dom: m.clone(),
            cod: m.clone(),
            deg: 0,
            repr: Repr::Rows {
                rows: (0..m.rank()).map(|i| vec![(i, one.clone())]).collect(),
                lossy: BTreeSet::new(),
            },
        }
    }

    /// Builds a map from sparse rows, validating indices and entry degrees.
    pub fn from_rows(
        dom: &GradedModule,
        cod: &GradedModule,
        deg: i32,
        rows: Vec<SparseVec>,
    ) -> Result<GradedMap, AlgebraError> {
        if dom.ring() != cod.ring() {
            return Err(AlgebraError::DescriptorMismatch(dom.ring(), cod.ring()));
        }
        if rows.len() != dom.rank() {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{} rows for a domain of rank {}",
                rows.len(),
                dom.rank()
            )));
        }
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (j, c) in row {
                if j >= cod.rank() {
                    return Err(AlgebraError::IndexOutOfRange {
                        index: j,
                        rank: cod.rank(),
                    });
                }
                if c.ring() != dom.ring() {
                    return Err(AlgebraError::DescriptorMismatch(dom.ring(), c.ring()));
                }
                let expected = dom.degree(i) + deg - cod.degree(j);
                if !c.is_homogeneous_of(expected) {
                    return Err(AlgebraError::InhomogeneousEntry {
                        row: i,
                        col: j,
                        expected,
                    });
                }
                if !c.is_zero() {
                    r.push((j, c));
                }
            }
            out.push(r);
        }
        Ok(GradedMap {
            dom: dom.clone(),
            cod: cod.clone(),
            deg,
            repr: Repr::Rows {
                rows: out,
                lossy: BTreeSet::new(),
            },
        })
    }

    /// Builds a map from `(row, col, value)` triplets (duplicates are summed).
    pub fn from_entries(
        dom: &GradedModule,
        cod: &GradedModule,
        deg: i32,
        entries: impl IntoIterator<Item = (usize, usize, RingElement)>,
    ) -> Result<GradedMap, AlgebraError> {
        let mut rows = vec![SparseVec::new(); dom.rank()];
        for (i, j, c) in entries {
            if i >= dom.rank() {
                return Err(AlgebraError::IndexOutOfRange {
                    index: i,
                    rank: dom.rank(),
                });
            }
            vec_add_term(&mut rows[i], j, c);
        }
        GradedMap::from_rows(dom, cod, deg, rows)
    }

    /// Internal constructor trusting the caller on degree consistency.
    pub(crate) fn from_rows_unchecked(
        dom: &GradedModule,
        cod: &GradedModule,
        deg: i32,
        rows: Vec<SparseVec>,
        lossy: BTreeSet<usize>,
    ) -> GradedMap {
        debug_assert_eq!(rows.len(), dom.rank());
        GradedMap {
            dom: dom.clone(),
            cod: cod.clone(),
            deg,
            repr: Repr::Rows {
                rows: rows.into_iter().map(|r| r.into_iter().collect()).collect(),
                lossy,
            },
        }
    }

    /// A map given by a row oracle. The oracle must return homogeneous rows of
    /// the stated degree; this is the caller's responsibility.
    pub fn lazy(dom: &GradedModule, cod: &GradedModule, deg: i32, rows: RowFn) -> GradedMap {
        GradedMap {
            dom: dom.clone(),
            cod: cod.clone(),
            deg,
            repr: Repr::Lazy(rows),
        }
    }

    pub fn dom(&self) -> &GradedModule {
        &self.dom
    }

    pub fn cod(&self) -> &GradedModule {
        &self.cod
    }

    pub fn deg(&self) -> i32 {
        self.deg
    }

    pub fn ring(&self) -> Ring {
        self.dom.ring()
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self.repr, Repr::Lazy(_))
    }

    /// Image of the `i`-th generator and whether it is lossy.
    pub fn eval_basis(&self, i: usize) -> (SparseVec, bool) {
        match &self.repr {
            Repr::Rows { rows, lossy } => {
                (rows[i].iter().cloned().collect(), lossy.contains(&i))
            }
            Repr::Lazy(f) => f(i),
        }
    }

    pub fn row_vec(&self, i: usize) -> SparseVec {
        self.eval_basis(i).0
    }

    pub fn is_row_lossy(&self, i: usize) -> bool {
        match &self.repr {
            Repr::Rows { lossy, .. } => lossy.contains(&i),
            Repr::Lazy(f) => f(i).1,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> RingElement {
        self.row_vec(i)
            .remove(&j)
            .unwrap_or_else(|| self.ring().zero())
    }

    /// Lossy rows of a stored map (lazy maps report per row instead).
    pub fn lossy_rows(&self) -> BTreeSet<usize> {
        match &self.repr {
            Repr::Rows { lossy, .. } => lossy.clone(),
            Repr::Lazy(_) => (0..self.dom.rank()).filter(|&i| self.is_row_lossy(i)).collect(),
        }
    }

    pub fn is_lossless(&self) -> bool {
        self.lossy_rows().is_empty()
    }

    pub fn is_zero(&self) -> bool {
        (0..self.dom.rank()).all(|i| self.row_vec(i).is_empty())
    }

    /// All nonzero entries as `(row, col, value)`, sorted.
    pub fn entries(&self) -> Vec<(usize, usize, RingElement)> {
        (0..self.dom.rank())
            .flat_map(|i| self.row_vec(i).into_iter().map(move |(j, c)| (i, j, c)))
            .collect()
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        (0..self.dom.rank()).map(|i| self.row_vec(i).len()).sum()
    }

    /// Evaluates every row and stores the result.
    pub fn materialized(&self) -> GradedMap {
        match self.repr {
            Repr::Rows { .. } => self.clone(),
            Repr::Lazy(_) => {
                let mut lossy = BTreeSet::new();
                let rows = (0..self.dom.rank())
                    .map(|i| {
                        let (v, l) = self.eval_basis(i);
                        if l {
                            lossy.insert(i);
                        }
                        v
                    })
                    .collect();
                GradedMap::from_rows_unchecked(&self.dom, &self.cod, self.deg, rows, lossy)
            }
        }
    }

    /// Applies the map to a row vector; the flag reports whether a lossy row was used.
    pub fn apply(&self, v: &SparseVec) -> (SparseVec, bool) {
        let mut out = SparseVec::new();
        let mut lossy = false;
        for (&i, c) in v {
            let (row, l) = self.eval_basis(i);
            lossy |= l;
            vec_axpy(&mut out, c, &row);
        }
        (out, lossy)
    }

    /// `self . g` (first `self`, then `g`).
    pub fn compose(&self, g: &GradedMap) -> Result<GradedMap, AlgebraError> {
        self.ex().then(g.ex())?.materialize()
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap, AlgebraError> {
        self.ex().plus(other.ex())?.materialize()
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap, AlgebraError> {
        self.ex().minus(other.ex())?.materialize()
    }

    pub fn neg(&self) -> GradedMap {
        self.scale(-1)
    }

    /// Multiplies every entry by the integer `k`.
    pub fn scale(&self, k: i64) -> GradedMap {
        self.ex().scaled(k).materialize().expect("scaling preserves shape")
    }

    /// Multiplies every entry on the left by a ring element of degree `d`;
    /// the result has degree `deg + d`.
    pub fn scalar_mul(&self, c: &RingElement) -> Result<GradedMap, AlgebraError> {
        let d = c.homogeneous_degree().unwrap_or(0);
        let rows = (0..self.dom.rank())
            .map(|i| {
                self.row_vec(i)
                    .into_iter()
                    .map(|(j, a)| (j, c.mul(&a)))
                    .filter(|(_, a)| !a.is_zero())
                    .collect()
            })
            .collect();
        GradedMap::from_rows(&self.dom, &self.cod, self.deg + d, rows)
    }

    /// Same matrix viewed between other modules with the same generator degrees.
    pub fn reinterpret(
        &self,
        dom: &GradedModule,
        cod: &GradedModule,
    ) -> Result<GradedMap, AlgebraError> {
        if dom != &self.dom || cod != &self.cod {
            return Err(AlgebraError::ShapeMismatch("degree mismatch in reinterpret".into()));
        }
        let mut out = self.clone();
        out.dom = dom.clone();
        out.cod = cod.clone();
        Ok(out)
    }

    /// Same matrix with the domain and codomain shifted by `a` and the degree
    /// unchanged. Not a signed operation; see [`shift_map`] for `f[a]`.
    pub(crate) fn relabel_shift(&self, a_dom: i32, a_cod: i32) -> GradedMap {
        let mut out = self.clone();
        out.dom = self.dom.shift(a_dom);
        out.cod = self.cod.shift(a_cod);
        out.deg = self.deg + a_dom - a_cod;
        out
    }

    /// Restriction along a list of domain generators (new generator `k` is old `keep[k]`).
    pub fn select_rows(&self, dom: &GradedModule, keep: &[usize]) -> GradedMap {
        debug_assert_eq!(dom.rank(), keep.len());
        let mut lossy = BTreeSet::new();
        let rows = keep
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let (v, l) = self.eval_basis(i);
                if l {
                    lossy.insert(k);
                }
                v
            })
            .collect();
        GradedMap::from_rows_unchecked(dom, &self.cod, self.deg, rows, lossy)
    }

    /// Inverse of a map whose matrix is a signed permutation with unit entries
    /// of degree 0 (e.g. tensor powers of shift maps).
    pub fn inverse_signed_permutation(&self) -> Result<GradedMap, AlgebraError> {
        let n = self.dom.rank();
        if n != self.cod.rank() {
            return Err(AlgebraError::NotInvertible("ranks differ".into()));
        }
        let ring = self.ring();
        let mut rows = vec![SparseVec::new(); n];
        let mut seen = vec![false; n];
        for i in 0..n {
            let row: Vec<_> = self.row_vec(i).into_iter().collect();
            let [(j, c)] = row.as_slice() else {
                return Err(AlgebraError::NotInvertible(format!("row {i} is not a unit vector")));
            };
            let sign = if *c == ring.one() || *c == ring.one().neg() {
                c.clone()
            } else {
                return Err(AlgebraError::NotInvertible(format!("entry {c} is not a sign")));
            };
            if seen[*j] {
                return Err(AlgebraError::NotInvertible("not a permutation".into()));
            }
            seen[*j] = true;
            rows[*j].insert(i, sign);
        }
        Ok(GradedMap::from_rows_unchecked(
            &self.cod,
            &self.dom,
            -self.deg,
            rows,
            BTreeSet::new(),
        ))
    }

    pub fn ex(&self) -> Expr<'_> {
        Expr::from(self)
    }
}

/// The element `u (x) v` of `left (x) right`: coefficients of `v` pass the
/// basis vectors of `u` with the Koszul sign.
pub fn tensor_elements(left: &GradedModule, right: &GradedModule, u: &SparseVec, v: &SparseVec) -> SparseVec {
    let m = right.rank();
    let mut out = SparseVec::new();
    for (&a, ca) in u {
        let da = left.degree(a) as i64;
        for (&b, cb) in v {
            let odd = (da * cb.homogeneous_degree().unwrap_or(0) as i64) % 2 != 0;
            vec_add_term(&mut out, a * m + b, ca.mul(&cb.signed(odd)));
        }
    }
    out
}

/// `f . g`.
pub fn compose(f: &GradedMap, g: &GradedMap) -> Result<GradedMap, AlgebraError> {
    f.compose(g)
}

/// Koszul-signed tensor product of maps, materialized.
pub fn tensor_map(f: &GradedMap, g: &GradedMap) -> Result<GradedMap, AlgebraError> {
    f.ex().tensor(g.ex())?.materialize()
}

/// `M[a]`.
pub fn shift_module(m: &GradedModule, a: i32) -> GradedModule {
    m.shift(a)
}

/// The degree `-a` identity-on-elements map `sigma^a: M -> M[a]`.
pub fn sigma(m: &GradedModule, a: i32) -> GradedMap {
    GradedMap::identity(m).relabel_shift(0, a)
}

/// `f[a] = (-1)^{a deg f} sigma^{-a} f sigma^a`: same entries, one global sign.
pub fn shift_map(f: &GradedMap, a: i32) -> GradedMap {
    let odd = (a as i64 * f.deg() as i64) % 2 != 0;
    let g = if odd { f.neg() } else { f.clone() };
    g.relabel_shift(a, a)
}

/// A lazily evaluated map expression. Used where materializing a map would
/// touch a huge tensor module while only a few rows are needed.
#[derive(Clone)]
pub struct Expr<'a> {
    dom: GradedModule,
    cod: GradedModule,
    deg: i32,
    kind: Kind<'a>,
}

#[derive(Clone)]
enum Kind<'a> {
    Map(&'a GradedMap),
    Owned(Arc<GradedMap>),
    Identity,
    Tensor(Box<Expr<'a>>, Box<Expr<'a>>),
    Compose(Box<Expr<'a>>, Box<Expr<'a>>),
    /// Integer combination of parallel expressions.
    Sum(Vec<(i64, Expr<'a>)>),
}

impl<'a> From<&'a GradedMap> for Expr<'a> {
    fn from(m: &'a GradedMap) -> Expr<'a> {
        Expr {
            dom: m.dom.clone(),
            cod: m.cod.clone(),
            deg: m.deg,
            kind: Kind::Map(m),
        }
    }
}

impl Expr<'static> {
    pub fn owned(m: GradedMap) -> Expr<'static> {
        Expr {
            dom: m.dom.clone(),
            cod: m.cod.clone(),
            deg: m.deg,
            kind: Kind::Owned(Arc::new(m)),
        }
    }

    pub fn id(m: &GradedModule) -> Expr<'static> {
        Expr {
            dom: m.clone(),
            cod: m.clone(),
            deg: 0,
            kind: Kind::Identity,
        }
    }

    /// The zero map, as an expression.
    pub fn zero(dom: &GradedModule, cod: &GradedModule, deg: i32) -> Expr<'static> {
        Expr::owned(GradedMap::zero(dom, cod, deg))
    }
}

impl<'a> Expr<'a> {
    pub fn dom(&self) -> &GradedModule {
        &self.dom
    }

    pub fn cod(&self) -> &GradedModule {
        &self.cod
    }

    pub fn deg(&self) -> i32 {
        self.deg
    }

    pub fn ring(&self) -> Ring {
        self.dom.ring()
    }

    /// `self . g`.
    pub fn then(self, g: Expr<'a>) -> Result<Expr<'a>, AlgebraError> {
        if self.cod != g.dom {
            return Err(AlgebraError::ShapeMismatch(format!(
                "cannot compose: codomain {:?} vs domain {:?}",
                self.cod, g.dom
            )));
        }
        Ok(Expr {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            deg: self.deg + g.deg,
            kind: Kind::Compose(Box::new(self), Box::new(g)),
        })
    }

    pub fn tensor(self, g: Expr<'a>) -> Result<Expr<'a>, AlgebraError> {
        if self.ring() != g.ring() {
            return Err(AlgebraError::DescriptorMismatch(self.ring(), g.ring()));
        }
        Ok(Expr {
            dom: self.dom.tensor(&g.dom)?,
            cod: self.cod.tensor(&g.cod)?,
            deg: self.deg + g.deg,
            kind: Kind::Tensor(Box::new(self), Box::new(g)),
        })
    }

    fn combine(self, k: i64, g: Expr<'a>) -> Result<Expr<'a>, AlgebraError> {
        if self.dom != g.dom || self.cod != g.cod || self.deg != g.deg {
            return Err(AlgebraError::ShapeMismatch(format!(
                "cannot add maps: {:?} -> {:?} (deg {}) and {:?} -> {:?} (deg {})",
                self.dom, self.cod, self.deg, g.dom, g.cod, g.deg
            )));
        }
        let (dom, cod, deg) = (self.dom.clone(), self.cod.clone(), self.deg);
        let mut terms = match self.kind {
            Kind::Sum(t) => t,
            _ => vec![(1, self)],
        };
        terms.push((k, g));
        Ok(Expr {
            dom,
            cod,
            deg,
            kind: Kind::Sum(terms),
        })
    }

    pub fn plus(self, g: Expr<'a>) -> Result<Expr<'a>, AlgebraError> {
        self.combine(1, g)
    }

    pub fn minus(self, g: Expr<'a>) -> Result<Expr<'a>, AlgebraError> {
        self.combine(-1, g)
    }

    pub fn scaled(self, k: i64) -> Expr<'a> {
        Expr {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            deg: self.deg,
            kind: Kind::Sum(vec![(k, self)]),
        }
    }

    pub fn neg(self) -> Expr<'a> {
        self.scaled(-1)
    }

    /// Image of the `i`-th domain generator and whether any lossy row contributed.
    pub fn eval_basis(&self, i: usize) -> (SparseVec, bool) {
        match &self.kind {
            Kind::Map(m) => m.eval_basis(i),
            Kind::Owned(m) => m.eval_basis(i),
            Kind::Identity => {
                let mut v = SparseVec::new();
                v.insert(i, self.ring().one());
                (v, false)
            }
            Kind::Tensor(f, g) => {
                let n = g.dom.rank();
                let (a, b) = (i / n, i % n);
                let (vf, lf) = f.eval_basis(a);
                if vf.is_empty() {
                    return (SparseVec::new(), lf);
                }
                let (vg, lg) = g.eval_basis(b);
                (tensor_combine(f, g, b, &vf, &vg), lf || lg)
            }
            Kind::Compose(f, g) => {
                let (v, l1) = f.eval_basis(i);
                let (w, l2) = g.apply(&v);
                (w, l1 || l2)
            }
            Kind::Sum(terms) => {
                let mut out = SparseVec::new();
                let mut lossy = false;
                for (k, e) in terms {
                    let (v, l) = e.eval_basis(i);
                    lossy |= l;
                    for (j, c) in v {
                        vec_add_term(&mut out, j, c.scale(*k));
                    }
                }
                (out, lossy)
            }
        }
    }

    /// Applies the expression to a vector (scalars stay on the left).
    pub fn apply(&self, v: &SparseVec) -> (SparseVec, bool) {
        let mut out = SparseVec::new();
        let mut lossy = false;
        for (&i, c) in v {
            let (w, l) = self.eval_basis(i);
            lossy |= l;
            vec_axpy(&mut out, c, &w);
        }
        (out, lossy)
    }

    pub fn materialize(&self) -> Result<GradedMap, AlgebraError> {
        let mut rows = Vec::with_capacity(self.dom.rank());
        let mut lossy = BTreeSet::new();
        for i in 0..self.dom.rank() {
            let (v, l) = self.eval_basis(i);
            if l {
                lossy.insert(i);
            }
            rows.push(v);
        }
        Ok(GradedMap::from_rows_unchecked(
            &self.dom, &self.cod, self.deg, rows, lossy,
        ))
    }
}

/// The single Koszul sign site. Given `e_a.f = vf` and `e_b.g = vg`, returns
/// `(e_a (x) e_b).(f (x) g) = (-1)^{|e_b| deg f} sum_{k,l} (-1)^{|g_bl| |e'_k|} f_ak g_bl (e'_k (x) e''_l)`.
fn tensor_combine(f: &Expr<'_>, g: &Expr<'_>, b: usize, vf: &SparseVec, vg: &SparseVec) -> SparseVec {
    let gdom = &g.dom;
    let fcod = &f.cod;
    let gcod = &g.cod;
    let m = gcod.rank();
    let deg_eb = gdom.degree(b);
    let outer_odd = (deg_eb as i64 * f.deg() as i64) % 2 != 0;
    let mut out = SparseVec::new();
    for (&k, fa) in vf {
        let deg_ek = fcod.degree(k);
        for (&l, gb) in vg {
            let deg_gb = deg_eb + g.deg() - gcod.degree(l);
            let odd = outer_odd ^ ((deg_gb as i64 * deg_ek as i64) % 2 != 0);
            vec_add_term(&mut out, k * m + l, fa.mul(gb).signed(odd));
        }
    }
    out
}

/// Result of comparing two parallel expressions on a set of rows.
#[derive(Debug, Clone)]
pub struct RowCheck {
    pub checked: usize,
    /// Rows skipped because one side used a truncated (lossy) row.
    pub inexact: Vec<usize>,
    /// First differing row with both images.
    pub mismatch: Option<(usize, SparseVec, SparseVec)>,
}

impl RowCheck {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares `lhs` and `rhs` on the given domain generators.
pub fn compare_on_rows(
    lhs: &Expr<'_>,
    rhs: &Expr<'_>,
    rows: impl IntoIterator<Item = usize>,
) -> Result<RowCheck, AlgebraError> {
    if lhs.dom() != rhs.dom() || lhs.cod() != rhs.cod() {
        return Err(AlgebraError::ShapeMismatch(format!(
            "sides are not parallel: {:?} -> {:?} vs {:?} -> {:?}",
            lhs.dom(),
            lhs.cod(),
            rhs.dom(),
            rhs.cod()
        )));
    }
    if lhs.deg() != rhs.deg() {
        return Err(AlgebraError::ShapeMismatch(format!(
            "sides have degrees {} and {}",
            lhs.deg(),
            rhs.deg()
        )));
    }
    let mut out = RowCheck {
        checked: 0,
        inexact: Vec::new(),
        mismatch: None,
    };
    for i in rows {
        let (a, la) = lhs.eval_basis(i);
        let (b, lb) = rhs.eval_basis(i);
        if la || lb {
            out.inexact.push(i);
            continue;
        }
        out.checked += 1;
        if a != b {
            out.mismatch = Some((i, a, b));
            break;
        }
    }
    Ok(out)
}

/// Sign of reordering a sequence of graded symbols: `target[k]` is the source
/// position of the symbol that ends up at position `k`. Computed by literal
/// adjacent transpositions, each contributing `-1` when both symbols are odd.
pub fn permutation_sign(degrees: &[i32], target: &[usize]) -> i32 {
    debug_assert_eq!(degrees.len(), target.len());
    // rank[src] = destination position; bubble-sort symbols into destination order.
    let mut dest = vec![0usize; target.len()];
    for (k, &src) in target.iter().enumerate() {
        dest[src] = k;
    }
    let mut seq: Vec<usize> = (0..degrees.len()).collect();
    let mut sign = 1;
    let mut swapped = true;
    while swapped {
        swapped = false;
        for k in 1..seq.len() {
            if dest[seq[k - 1]] > dest[seq[k]] {
                if degrees[seq[k - 1]] % 2 != 0 && degrees[seq[k]] % 2 != 0 {
                    sign = -sign;
                }
                seq.swap(k - 1, k);
                swapped = true;
            }
        }
    }
    sign
}

/// Brute-force Koszul sign of `(x_1 ... x_n).(1 .. f_1 .. f_m .. 1)` where operator
/// `f_j` acts on letter number `positions[j]` (counted from 1, strictly
/// increasing). The
/// operators start to the right of the word and each one is transposed leftwards
/// to sit immediately after its letter.
pub fn koszul_sign_oracle(
    word_degrees: &[i32],
    operator_degrees: &[i32],
    positions: &[usize],
) -> Result<i32, AlgebraError> {
    let n = word_degrees.len();
    if operator_degrees.len() != positions.len() {
        return Err(AlgebraError::ShapeMismatch(
            "one position per operator is required".into(),
        ));
    }
    for (j, &p) in positions.iter().enumerate() {
        if p == 0 || p > n {
            return Err(AlgebraError::PositionOutOfRange { position: p, len: n });
        }
        if j > 0 && positions[j - 1] >= p {
            return Err(AlgebraError::ShapeMismatch(
                "positions must be strictly increasing".into(),
            ));
        }
    }
    let degrees: Vec<i32> = word_degrees.iter().chain(operator_degrees).copied().collect();
    let mut target = Vec::with_capacity(degrees.len());
    let mut op = 0;
    for letter in 0..n {
        target.push(letter);
        if op < positions.len() && positions[op] == letter + 1 {
            target.push(n + op);
            op += 1;
        }
    }
    Ok(permutation_sign(&degrees, &target))
}
