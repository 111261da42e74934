//! Exact linear solving for unknown structure maps.
//!
//! An unknown homogeneous map is parametrized by one coefficient per
//! degree-consistent matrix slot (every shipped ring has a single monomial per
//! degree). Conditions that are affine in the unknown are probed on the slot
//! basis and solved over the coefficient field: `F_p` for the finite rings and
//! `Q` for the integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::AlgebraError;
use crate::gmod::{GradedMap, GradedModule};
use crate::gring::Ring;

/// Coefficient field of a ring's monomial coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Fp(u32),
    Rationals,
}

impl Field {
    pub fn of(ring: Ring) -> Field {
        match ring.characteristic() {
            Some(p) => Field::Fp(p),
            None => Field::Rationals,
        }
    }
}

/// The free parameters of an unknown map `dom -> cod` of degree `deg`.
#[derive(Debug, Clone)]
pub struct MapUnknowns {
    dom: GradedModule,
    cod: GradedModule,
    deg: i32,
    /// `(row, col, ring degree)` of each parameter.
    slots: Vec<(usize, usize, i32)>,
}

impl MapUnknowns {
    /// All degree-consistent slots `(i, j)` accepted by `keep`.
    pub fn new(
        dom: &GradedModule,
        cod: &GradedModule,
        deg: i32,
        keep: impl Fn(usize, usize) -> bool,
    ) -> MapUnknowns {
        let ring = dom.ring();
        let mut slots = Vec::new();
        for i in 0..dom.rank() {
            for j in 0..cod.rank() {
                let d = dom.degree(i) + deg - cod.degree(j);
                if ring.supports_degree(d) && keep(i, j) {
                    slots.push((i, j, d));
                }
            }
        }
        MapUnknowns {
            dom: dom.clone(),
            cod: cod.clone(),
            deg,
            slots,
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// The map with the given integer coefficient on each slot.
    pub fn map(&self, coeffs: &[i64]) -> GradedMap {
        let ring = self.dom.ring();
        let entries = self
            .slots
            .iter()
            .zip(coeffs)
            .filter(|(_, &c)| c != 0)
            .map(|(&(i, j, d), &c)| (i, j, ring.monomial(d, c)));
        GradedMap::from_entries(&self.dom, &self.cod, self.deg, entries)
            .expect("slots are degree-consistent")
    }

    fn unit(&self, k: usize) -> GradedMap {
        let mut c = vec![0; self.slots.len()];
        c[k] = 1;
        self.map(&c)
    }
}

/// Solutions `particular + span(kernel)` of an affine system; all vectors are
/// integer representatives, with `denominator` applying to `particular`.
#[derive(Debug, Clone)]
pub struct AffineSolution {
    pub field: Field,
    pub particular: Vec<i64>,
    pub denominator: i64,
    pub kernel: Vec<Vec<i64>>,
}

impl AffineSolution {
    /// A random member, returned as `(numerators, denominator)`. Kernel
    /// directions get small random integer weights.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> (Vec<i64>, i64) {
        let mut x: Vec<i64> = self.particular.clone();
        for k in &self.kernel {
            let w: i64 = match self.field {
                Field::Fp(p) => rng.gen_range(0..p as i64),
                Field::Rationals => rng.gen_range(-2..=2),
            };
            if w == 0 {
                continue;
            }
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += w * self.denominator * ki;
                if let Field::Fp(p) = self.field {
                    *xi = xi.rem_euclid(p as i64);
                }
            }
        }
        (x, self.denominator)
    }

    pub fn is_unique(&self) -> bool {
        self.kernel.is_empty()
    }
}

type Coord = (usize, usize, usize, i32);

fn coordinates(residuals: &[GradedMap]) -> BTreeMap<Coord, i64> {
    let mut out = BTreeMap::new();
    for (e, r) in residuals.iter().enumerate() {
        for i in 0..r.dom().rank() {
            for (j, c) in r.row_vec(i) {
                for &(d, v) in c.terms() {
                    out.insert((e, i, j, d), v);
                }
            }
        }
    }
    out
}

/// Solves `residual(X) = 0` over the slot span, where `residual` returns the
/// list of maps that must vanish and is affine in `X`.
pub fn solve_affine(
    unknowns: &MapUnknowns,
    residual: impl Fn(&GradedMap) -> Result<Vec<GradedMap>, AlgebraError>,
) -> Result<AffineSolution, AlgebraError> {
    let field = Field::of(unknowns.dom.ring());
    let base = coordinates(&residual(&unknowns.map(&vec![0; unknowns.len()]))?);
    let mut columns = Vec::with_capacity(unknowns.len());
    for k in 0..unknowns.len() {
        let probe = coordinates(&residual(&unknowns.unit(k))?);
        let mut col = BTreeMap::new();
        for (key, v) in &probe {
            let d = v - base.get(key).copied().unwrap_or(0);
            if d != 0 {
                col.insert(*key, d);
            }
        }
        for (key, v) in &base {
            if !probe.contains_key(key) {
                col.insert(*key, -v);
            }
        }
        columns.push(col);
    }
    let mut keys: Vec<Coord> = base.keys().copied().collect();
    for c in &columns {
        keys.extend(c.keys().copied());
    }
    keys.sort_unstable();
    keys.dedup();
    let index: BTreeMap<Coord, usize> = keys.iter().enumerate().map(|(n, k)| (*k, n)).collect();
    let mut rows = vec![vec![0i64; unknowns.len() + 1]; keys.len()];
    for (k, col) in columns.iter().enumerate() {
        for (key, v) in col {
            rows[index[key]][k] = *v;
        }
    }
    for (key, v) in &base {
        rows[index[key]][unknowns.len()] = -v;
    }
    match field {
        Field::Fp(p) => solve_fp(rows, unknowns.len(), p),
        Field::Rationals => solve_q(rows, unknowns.len()),
    }
}

fn inv_mod(a: i64, p: i64) -> i64 {
    let (mut t, mut new_t, mut r, mut new_r) = (0i64, 1i64, p, a.rem_euclid(p));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p)
}

fn solve_fp(mut rows: Vec<Vec<i64>>, n: usize, p: u32) -> Result<AffineSolution, AlgebraError> {
    let p = p as i64;
    for row in rows.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(p);
        }
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = (*x * inv).rem_euclid(p);
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[n] != 0) {
        return Err(AlgebraError::EmptySolutionSpace);
    }
    let mut particular = vec![0; n];
    for (k, &c) in pivots.iter().enumerate() {
        particular[c] = rows[k][n];
    }
    let kernel = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; n];
            v[free] = 1;
            for (k, &c) in pivots.iter().enumerate() {
                v[c] = (-rows[k][free]).rem_euclid(p);
            }
            v
        })
        .collect();
    Ok(AffineSolution {
        field: Field::Fp(p as u32),
        particular,
        denominator: 1,
        kernel,
    })
}

fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x.clone()).expect("integer coefficient overflow")
}

fn lcm_of_denominators<'a>(xs: impl Iterator<Item = &'a BigRational>) -> BigInt {
    xs.fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

fn solve_q(rows: Vec<Vec<i64>>, n: usize) -> Result<AffineSolution, AlgebraError> {
    let mut rows: Vec<Vec<BigRational>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return Err(AlgebraError::EmptySolutionSpace);
    }
    let mut particular = vec![BigRational::zero(); n];
    for (k, &c) in pivots.iter().enumerate() {
        particular[c] = rows[k][n].clone();
    }
    let den = lcm_of_denominators(particular.iter());
    let particular_num: Vec<i64> = particular
        .iter()
        .map(|x| to_i64(&(x * BigRational::from_integer(den.clone())).to_integer()))
        .collect();
    let kernel = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); n];
            v[free] = BigRational::one();
            for (k, &c) in pivots.iter().enumerate() {
                v[c] = -rows[k][free].clone();
            }
            let l = BigRational::from_integer(lcm_of_denominators(v.iter()));
            v.iter().map(|x| to_i64(&(x * &l).to_integer())).collect()
        })
        .collect();
    Ok(AffineSolution {
        field: Field::Rationals,
        particular: particular_num,
        denominator: to_i64(&den),
        kernel,
    })
}
