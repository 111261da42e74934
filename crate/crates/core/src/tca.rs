//! Truncated tensor modules `X T^{<=N}`: cut coproduct, concatenation,
//! (co)derivations and (co)algebra homomorphisms from their components, and
//! conilpotency of reduced coproducts.
//!
//! Words are indexed by length first and lexicographically within a length,
//! so the length-`n` block is exactly the basis of `X^{(x) n}`. Terms that
//! would land beyond the cap are never dropped silently: the affected rows
//! are marked lossy, or a [`AlgebraError::CapOverflow`] is returned.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::AlgebraError;
use crate::gmod::{vec_add_term, Expr, GradedMap, GradedModule, SparseVec};
use crate::gring::Ring;

/// `X T^{<=N} = (+)_{n <= N} X^{(x) n}` with `X^{(x) 0}` the ground ring.
#[derive(Debug, Clone)]
pub struct WordModule {
    letter: GradedModule,
    cap: usize,
    module: GradedModule,
    offsets: Arc<[usize]>,
}

impl PartialEq for WordModule {
    fn eq(&self, other: &WordModule) -> bool {
        self.cap == other.cap && self.letter == other.letter
    }
}

impl WordModule {
    pub fn new(letter: &GradedModule, cap: usize) -> WordModule {
        let letter = letter.flatten();
        let r = letter.rank();
        let mut offsets = vec![0usize];
        let mut block = 1usize;
        for _ in 0..=cap {
            let last = *offsets.last().expect("nonempty");
            offsets.push(last + block);
            block = block.saturating_mul(r);
        }
        let lgens = letter.gens();
        let mut gens = Vec::with_capacity(offsets[cap + 1]);
        gens.push(0);
        let mut prev: Vec<i32> = vec![0];
        for _ in 1..=cap {
            let next: Vec<i32> = prev
                .iter()
                .flat_map(|&d| lgens.iter().map(move |&g| d + g))
                .collect();
            gens.extend_from_slice(&next);
            prev = next;
        }
        let module = if gens.len() == 1 {
            GradedModule::unit(letter.ring())
        } else {
            GradedModule::new(letter.ring(), gens)
        };
        WordModule {
            letter,
            cap,
            module,
            offsets: Arc::from(offsets),
        }
    }

    pub fn letter(&self) -> &GradedModule {
        &self.letter
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn ring(&self) -> Ring {
        self.letter.ring()
    }

    /// The underlying free module (all words of length `<= cap`).
    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn rank(&self) -> usize {
        self.offsets[self.cap + 1]
    }

    /// Index of the first word of length `n`.
    pub fn offset(&self, n: usize) -> usize {
        self.offsets[n]
    }

    /// `X^{(x) n}`, factorized so its basis order matches the length-`n` block.
    pub fn component(&self, n: usize) -> GradedModule {
        self.letter.tensor_power(n)
    }

    pub fn length(&self, idx: usize) -> usize {
        self.offsets.partition_point(|&o| o <= idx) - 1
    }

    pub fn lengths(&self) -> Vec<usize> {
        (0..=self.cap)
            .flat_map(|n| std::iter::repeat(n).take(self.offsets[n + 1] - self.offsets[n]))
            .collect()
    }

    /// Letters of the word with global index `idx`.
    pub fn word(&self, idx: usize) -> Vec<usize> {
        let n = self.length(idx);
        let r = self.letter.rank();
        let mut local = idx - self.offsets[n];
        let mut out = vec![0; n];
        for slot in out.iter_mut().rev() {
            *slot = local % r;
            local /= r;
        }
        out
    }

    /// Global index of a word, or `None` if it is longer than the cap.
    pub fn index(&self, letters: &[usize]) -> Option<usize> {
        if letters.len() > self.cap {
            return None;
        }
        let r = self.letter.rank();
        let local = letters.iter().fold(0, |acc, &l| acc * r + l);
        Some(self.offsets[letters.len()] + local)
    }

    /// Words of length at most `n` (an initial segment of the basis).
    pub fn words_up_to(&self, n: usize) -> std::ops::Range<usize> {
        0..self.offsets[n.min(self.cap) + 1]
    }

    /// `X^{(x) n} -> W`.
    pub fn inj(&self, n: usize) -> GradedMap {
        let comp = self.component(n);
        let one = self.ring().one();
        let rows = (0..comp.rank())
            .map(|j| SparseVec::from([(self.offsets[n] + j, one.clone())]))
            .collect();
        GradedMap::from_rows_unchecked(&comp, &self.module, 0, rows, BTreeSet::new())
    }

    /// `W -> X^{(x) n}`.
    pub fn proj(&self, n: usize) -> GradedMap {
        let comp = self.component(n);
        let one = self.ring().one();
        let rows = (0..self.rank())
            .map(|i| {
                if self.length(i) == n {
                    SparseVec::from([(i - self.offsets[n], one.clone())])
                } else {
                    SparseVec::new()
                }
            })
            .collect();
        GradedMap::from_rows_unchecked(&self.module, &comp, 0, rows, BTreeSet::new())
    }

    /// Concatenation of two basis words.
    pub fn concat_words(&self, a: usize, b: usize) -> Result<usize, AlgebraError> {
        let (la, lb) = (self.length(a), self.length(b));
        if la + lb > self.cap {
            return Err(AlgebraError::CapOverflow {
                cap: self.cap,
                dropped: 1,
            });
        }
        let r = self.letter.rank();
        let local = (a - self.offsets[la]) * r.pow(lb as u32) + (b - self.offsets[lb]);
        Ok(self.offsets[la + lb] + local)
    }

    /// Product `u . v` of two elements under concatenation. Coefficients of
    /// `v` pass the basis words of `u` with the Koszul sign. The flag reports
    /// terms beyond the cap (which are dropped from the result).
    pub fn multiply(&self, u: &SparseVec, v: &SparseVec) -> (SparseVec, bool) {
        let mut out = SparseVec::new();
        let mut lossy = false;
        for (&a, ca) in u {
            let da = self.module.degree(a) as i64;
            for (&b, cb) in v {
                let c = ca.mul(cb);
                if c.is_zero() {
                    continue;
                }
                let Ok(ab) = self.concat_words(a, b) else {
                    lossy = true;
                    continue;
                };
                let odd = (da * cb.homogeneous_degree().unwrap_or(0) as i64) % 2 != 0;
                vec_add_term(&mut out, ab, ca.mul(&cb.signed(odd)));
            }
        }
        (out, lossy)
    }
}

/// Deconcatenation `W -> W (x) W`, `x_1..x_n -> sum_k x_1..x_k (x) x_{k+1}..x_n`.
pub fn cut_coproduct(w: &WordModule) -> GradedMap {
    let ws = w.clone();
    let cod = w.module.tensor(&w.module).expect("same ring");
    let one = w.ring().one();
    let rank = w.rank();
    GradedMap::lazy(
        &w.module,
        &cod,
        0,
        Arc::new(move |i| {
            let word = ws.word(i);
            let mut out = SparseVec::new();
            for k in 0..=word.len() {
                let a = ws.index(&word[..k]).expect("prefix fits");
                let b = ws.index(&word[k..]).expect("suffix fits");
                out.insert(a * rank + b, one.clone());
            }
            (out, false)
        }),
    )
}

/// Concatenation `W (x) W -> W`; pairs whose total length exceeds the cap
/// give empty lossy rows.
pub fn concat_product(w: &WordModule) -> GradedMap {
    let ws = w.clone();
    let dom = w.module.tensor(&w.module).expect("same ring");
    let one = w.ring().one();
    let rank = w.rank();
    GradedMap::lazy(
        &dom,
        &w.module,
        0,
        Arc::new(move |i| match ws.concat_words(i / rank, i % rank) {
            Ok(k) => (SparseVec::from([(k, one.clone())]), false),
            Err(_) => (SparseVec::new(), true),
        }),
    )
}

fn check_family(
    maps: &[GradedMap],
    ok: impl Fn(usize, &GradedMap) -> bool,
) -> Result<Option<i32>, AlgebraError> {
    let mut deg = None;
    for (k, m) in maps.iter().enumerate() {
        if !ok(k, m) {
            return Err(AlgebraError::ShapeMismatch(format!(
                "component of arity {k} has the wrong domain or codomain"
            )));
        }
        match deg {
            None => deg = Some(m.deg()),
            Some(d) if d != m.deg() => {
                return Err(AlgebraError::ShapeMismatch(
                    "components do not share one degree".into(),
                ))
            }
            _ => {}
        }
    }
    Ok(deg)
}

/// Sum over all placements `1^{(x) r} (x) op (x) 1^{(x) t}` of operators
/// `X^{(x) k_in} -> X^{(x) k_out}` on every word.
fn insertion_sum(w: &WordModule, ops: &[(usize, usize, &GradedMap)], deg: i32) -> Result<GradedMap, AlgebraError> {
    let mut rows = vec![SparseVec::new(); w.rank()];
    let mut lossy = BTreeSet::new();
    for n in 0..=w.cap {
        let mut exprs = Vec::new();
        for &(kin, kout, op) in ops {
            if kin > n || op.is_zero() {
                continue;
            }
            for r in 0..=n - kin {
                let t = n - r - kin;
                let e = Expr::id(&w.component(r))
                    .tensor(op.ex())?
                    .tensor(Expr::id(&w.component(t)))?;
                exprs.push((r + kout + t, e));
            }
        }
        for local in 0..w.offsets[n + 1] - w.offsets[n] {
            let i = w.offsets[n] + local;
            for (len, e) in &exprs {
                let (v, l) = e.eval_basis(local);
                if l {
                    lossy.insert(i);
                }
                if v.is_empty() {
                    continue;
                }
                if *len > w.cap {
                    lossy.insert(i);
                    continue;
                }
                for (j, c) in v {
                    vec_add_term(&mut rows[i], w.offsets[*len] + j, c);
                }
            }
        }
    }
    Ok(GradedMap::from_rows_unchecked(&w.module, &w.module, deg, rows, lossy))
}

/// The coderivation `W -> W` with components `b_k: X^{(x) k} -> X`
/// (`comps[k]`), `sum_{r+k+t=n} 1^{(x) r} (x) b_k (x) 1^{(x) t}` on length `n`.
pub fn coderivation_from_components(w: &WordModule, comps: &[GradedMap]) -> Result<GradedMap, AlgebraError> {
    let deg = check_family(comps, |k, m| {
        m.dom() == &w.component(k) && m.cod() == &w.letter
    })?
    .unwrap_or(0);
    let ops: Vec<_> = comps.iter().enumerate().map(|(k, m)| (k, 1, m)).collect();
    insertion_sum(w, &ops, deg)
}

/// The derivation `W -> W` with components `xi_k: X -> X^{(x) k}` (`comps[k]`),
/// acting on each letter in turn.
pub fn derivation_from_components(w: &WordModule, comps: &[GradedMap]) -> Result<GradedMap, AlgebraError> {
    let deg = check_family(comps, |k, m| {
        m.dom() == &w.letter && m.cod() == &w.component(k)
    })?
    .unwrap_or(0);
    let ops: Vec<_> = comps.iter().enumerate().map(|(k, m)| (1, k, m)).collect();
    insertion_sum(w, &ops, deg)
}

/// Coalgebra map `src -> dst` with components `f_i: X^{(x) i} -> Y`:
/// a length-`n` word goes to `sum_{i_1+..+i_k=n} f_{i_1} (x) .. (x) f_{i_k}`.
pub fn coalgebra_hom_from_components(
    src: &WordModule,
    dst: &WordModule,
    comps: &[GradedMap],
) -> Result<GradedMap, AlgebraError> {
    check_family(comps, |k, m| {
        m.deg() == 0 && m.dom() == &src.component(k) && m.cod() == &dst.letter
    })?;
    if comps.first().is_some_and(|f0| !f0.is_zero()) {
        return Err(AlgebraError::NonzeroArityZero);
    }
    let ring = src.ring();
    let mut rows: Vec<SparseVec> = Vec::with_capacity(src.rank());
    let mut lossy = BTreeSet::new();
    rows.push(SparseVec::from([(0, ring.one())]));
    for idx in 1..src.rank() {
        let word = src.word(idx);
        let n = word.len();
        let mut acc = SparseVec::new();
        for (i, f) in comps.iter().enumerate().skip(1).take(n) {
            if f.is_zero() {
                continue;
            }
            let prefix = src.index(&word[..n - i]).expect("prefix fits");
            let suffix = src.index(&word[n - i..]).expect("suffix fits") - src.offset(i);
            let letter_img: SparseVec = f
                .row_vec(suffix)
                .into_iter()
                .map(|(j, c)| (dst.offset(1) + j, c))
                .collect();
            if lossy.contains(&prefix) {
                lossy.insert(idx);
            }
            let (v, l) = dst.multiply(&rows[prefix], &letter_img);
            if l {
                lossy.insert(idx);
            }
            for (j, c) in v {
                vec_add_term(&mut acc, j, c);
            }
        }
        rows.push(acc);
    }
    Ok(GradedMap::from_rows_unchecked(src.module(), dst.module(), 0, rows, lossy))
}

/// Algebra map `src -> dst` with components `g_k: X -> Y^{(x) k}`, extended
/// multiplicatively: `x_1..x_n -> (x_1 g) .. (x_n g)`.
pub fn algebra_hom_from_components(
    src: &WordModule,
    dst: &WordModule,
    comps: &[GradedMap],
) -> Result<GradedMap, AlgebraError> {
    check_family(comps, |k, m| {
        m.deg() == 0 && m.dom() == &src.letter && m.cod() == &dst.component(k)
    })?;
    let ring = src.ring();
    // Image of each letter in the target word module.
    let letter_imgs: Vec<(SparseVec, bool)> = (0..src.letter.rank())
        .map(|x| {
            let mut v = SparseVec::new();
            let mut lossy = false;
            for (k, g) in comps.iter().enumerate() {
                let row = g.row_vec(x);
                if row.is_empty() {
                    continue;
                }
                if k > dst.cap {
                    lossy = true;
                    continue;
                }
                for (j, c) in row {
                    vec_add_term(&mut v, dst.offset(k) + j, c);
                }
            }
            (v, lossy)
        })
        .collect();
    let mut rows: Vec<SparseVec> = Vec::with_capacity(src.rank());
    let mut lossy = BTreeSet::new();
    rows.push(SparseVec::from([(0, ring.one())]));
    for idx in 1..src.rank() {
        let word = src.word(idx);
        let n = word.len();
        let prefix = src.index(&word[..n - 1]).expect("prefix fits");
        let (img, l0) = &letter_imgs[word[n - 1]];
        let (v, l) = dst.multiply(&rows[prefix], img);
        if *l0 || l || lossy.contains(&prefix) {
            lossy.insert(idx);
        }
        rows.push(v);
    }
    Ok(GradedMap::from_rows_unchecked(src.module(), dst.module(), 0, rows, lossy))
}

/// `Delta^{(k)}: C -> C^{(x) k}` with `Delta^{(1)} = 1`, `Delta^{(2)} = d` and
/// `Delta^{(k+1)} = Delta^{(k)} (d (x) 1^{(x) (k-1)})`.
pub fn iterated_coproduct(d: &GradedMap, k: usize) -> Result<Expr<'_>, AlgebraError> {
    let c = d.dom().clone();
    let mut e = Expr::id(&c);
    for j in 1..k {
        let step = d.ex().tensor(Expr::id(&c.tensor_power(j - 1)))?;
        e = e.then(step)?;
    }
    Ok(e)
}

/// Smallest `n` (at least 2, at most `cap`) with `Delta^{(n)} = 0`.
pub fn conilpotency_index(dbar: &GradedMap, cap: usize) -> Result<usize, AlgebraError> {
    if dbar.cod() != &dbar.dom().tensor_power(2) || dbar.deg() != 0 {
        return Err(AlgebraError::ShapeMismatch(
            "reduced coproduct must be a degree-0 map C -> C (x) C".into(),
        ));
    }
    let c = dbar.dom().clone();
    let mut best = 2;
    for i in 0..c.rank() {
        let mut v = dbar.row_vec(i);
        let mut n = 2;
        while !v.is_empty() {
            if n >= cap {
                return Err(AlgebraError::NotConilpotentUpToCap { cap });
            }
            let step = dbar.ex().tensor(Expr::id(&c.tensor_power(n - 1)))?;
            v = step.apply(&v).0;
            n += 1;
        }
        best = best.max(n);
    }
    Ok(best)
}
