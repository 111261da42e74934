//! Graded strongly commutative base rings.
//!
//! Every shipped ring has at most one basis monomial per degree, so an element
//! is a finite map `degree -> coefficient`. Coefficients are reduced modulo `p`
//! for the finite-characteristic rings; the integer ring uses checked `i64`
//! arithmetic and panics on overflow instead of wrapping.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::AlgebraError;

/// Descriptor of a graded strongly commutative ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ring {
    /// `F_p`, concentrated in degree 0.
    PrimeField { p: u32 },
    /// `Z`, concentrated in degree 0.
    Integers,
    /// `F_p[e]/(e^2)` with `deg e = 1`.
    OddExterior { p: u32 },
    /// `F_p[u]/(u^top)` with `deg u = 2`.
    EvenTruncated { p: u32, top: u32 },
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn prime_field(p: u32) -> Ring {
        Ring::PrimeField { p }
    }

    pub fn odd_exterior(p: u32) -> Ring {
        Ring::OddExterior { p }
    }

    pub fn even_truncated(p: u32, top: u32) -> Ring {
        Ring::EvenTruncated { p, top }
    }

    /// Checks the descriptor invariants (`p` prime, `top >= 2`).
    pub fn validate(&self) -> Result<(), AlgebraError> {
        match *self {
            Ring::Integers => Ok(()),
            Ring::PrimeField { p } | Ring::OddExterior { p } => {
                if is_prime(p) {
                    Ok(())
                } else {
                    Err(AlgebraError::InvalidRing(format!("{p} is not prime")))
                }
            }
            Ring::EvenTruncated { p, top } => {
                if !is_prime(p) {
                    Err(AlgebraError::InvalidRing(format!("{p} is not prime")))
                } else if top < 2 {
                    Err(AlgebraError::InvalidRing(format!("top = {top} must be at least 2")))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// The characteristic, `None` for the integers.
    pub fn characteristic(&self) -> Option<u32> {
        match *self {
            Ring::Integers => None,
            Ring::PrimeField { p } | Ring::OddExterior { p } | Ring::EvenTruncated { p, .. } => {
                Some(p)
            }
        }
    }

    /// Degrees carrying a (one-dimensional) monomial, in increasing order.
    pub fn degree_support(&self) -> Vec<i32> {
        match *self {
            Ring::PrimeField { .. } | Ring::Integers => vec![0],
            Ring::OddExterior { .. } => vec![0, 1],
            Ring::EvenTruncated { top, .. } => (0..top as i32).map(|k| 2 * k).collect(),
        }
    }

    pub fn supports_degree(&self, d: i32) -> bool {
        match *self {
            Ring::PrimeField { .. } | Ring::Integers => d == 0,
            Ring::OddExterior { .. } => d == 0 || d == 1,
            Ring::EvenTruncated { top, .. } => d >= 0 && d % 2 == 0 && d < 2 * top as i32,
        }
    }

    /// Reduces an integer into canonical range (`[0, p)`), or checks nothing for `Z`.
    pub fn reduce(&self, c: i64) -> i64 {
        match self.characteristic() {
            Some(p) => c.rem_euclid(p as i64),
            None => c,
        }
    }

    pub(crate) fn add_coef(&self, a: i64, b: i64) -> i64 {
        match self.characteristic() {
            Some(p) => (a + b).rem_euclid(p as i64),
            None => a.checked_add(b).expect("integer coefficient overflow"),
        }
    }

    pub(crate) fn mul_coef(&self, a: i64, b: i64) -> i64 {
        match self.characteristic() {
            Some(p) => ((a as i128 * b as i128).rem_euclid(p as i128)) as i64,
            None => a.checked_mul(b).expect("integer coefficient overflow"),
        }
    }

    pub(crate) fn neg_coef(&self, a: i64) -> i64 {
        match self.characteristic() {
            Some(p) => (-a).rem_euclid(p as i64),
            None => a.checked_neg().expect("integer coefficient overflow"),
        }
    }

    pub fn zero(self) -> RingElement {
        RingElement {
            ring: self,
            terms: SmallVec::new(),
        }
    }

    pub fn one(self) -> RingElement {
        self.monomial(0, 1)
    }

    /// The integer `c` viewed in degree 0.
    pub fn int(self, c: i64) -> RingElement {
        self.monomial(0, c)
    }

    /// `c` times the basis monomial of degree `deg` (zero if unsupported).
    pub fn monomial(self, deg: i32, c: i64) -> RingElement {
        let c = self.reduce(c);
        let mut terms = SmallVec::new();
        if c != 0 && self.supports_degree(deg) {
            terms.push((deg, c));
        }
        RingElement { ring: self, terms }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Ring::PrimeField { p } => write!(f, "prime_field:{p}"),
            Ring::Integers => write!(f, "integers"),
            Ring::OddExterior { p } => write!(f, "odd_exterior:{p}"),
            Ring::EvenTruncated { p, top } => write!(f, "even_truncated:{p}:{top}"),
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = AlgebraError;

    /// Parses `prime_field:7`, `integers`, `odd_exterior:7`, `even_truncated:7:3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u32, AlgebraError> {
            parts
                .get(i)
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| AlgebraError::InvalidRing(format!("cannot parse ring `{s}`")))
        };
        let ring = match parts[0] {
            "prime_field" if parts.len() == 2 => Ring::PrimeField { p: num(1)? },
            "integers" if parts.len() == 1 => Ring::Integers,
            "odd_exterior" if parts.len() == 2 => Ring::OddExterior { p: num(1)? },
            "even_truncated" if parts.len() == 3 => Ring::EvenTruncated {
                p: num(1)?,
                top: num(2)?,
            },
            _ => return Err(AlgebraError::InvalidRing(format!("cannot parse ring `{s}`"))),
        };
        ring.validate()?;
        Ok(ring)
    }
}

/// An element of a shipped graded ring: sorted `(degree, coefficient)` pairs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: Ring,
    terms: SmallVec<[(i32, i64); 2]>,
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let var = match self.ring {
            Ring::OddExterior { .. } => "e",
            _ => "u",
        };
        for (k, &(d, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let power = match self.ring {
                Ring::EvenTruncated { .. } => d / 2,
                _ => d,
            };
            match power {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}{var}")?,
                _ => write!(f, "{c}{var}^{power}")?,
            }
        }
        Ok(())
    }
}

impl RingElement {
    /// Builds an element from `(degree, coefficient)` pairs, validating degrees.
    pub fn from_terms(ring: Ring, pairs: &[(i32, i64)]) -> Result<RingElement, AlgebraError> {
        let mut acc = ring.zero();
        for &(d, c) in pairs {
            if !ring.supports_degree(d) {
                return Err(AlgebraError::UnsupportedDegree { ring, degree: d });
            }
            acc = acc.add(&ring.monomial(d, c));
        }
        Ok(acc)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &[(i32, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        match self.terms.as_slice() {
            [(d, _)] => Some(*d),
            _ => None,
        }
    }

    pub fn is_homogeneous_of(&self, deg: i32) -> bool {
        self.terms.iter().all(|&(d, _)| d == deg)
    }

    /// Coefficient of the degree-`deg` monomial.
    pub fn coefficient(&self, deg: i32) -> i64 {
        self.terms
            .iter()
            .find(|&&(d, _)| d == deg)
            .map(|&(_, c)| c)
            .unwrap_or(0)
    }

    pub fn try_add(&self, other: &RingElement) -> Result<RingElement, AlgebraError> {
        if self.ring != other.ring {
            return Err(AlgebraError::DescriptorMismatch(self.ring, other.ring));
        }
        Ok(self.add(other))
    }

    pub fn try_mul(&self, other: &RingElement) -> Result<RingElement, AlgebraError> {
        if self.ring != other.ring {
            return Err(AlgebraError::DescriptorMismatch(self.ring, other.ring));
        }
        Ok(self.mul(other))
    }

    /// Sum; both operands must share the descriptor (debug-asserted).
    pub fn add(&self, other: &RingElement) -> RingElement {
        debug_assert_eq!(self.ring, other.ring);
        let ring = self.ring;
        let mut out: SmallVec<[(i32, i64); 2]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let c = ring.add_coef(a[i].1, b[j].1);
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        RingElement { ring, terms: out }
    }

    pub fn neg(&self) -> RingElement {
        let ring = self.ring;
        RingElement {
            ring,
            terms: self.terms.iter().map(|&(d, c)| (d, ring.neg_coef(c))).collect(),
        }
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.add(&other.neg())
    }

    /// Product in the given order; monomials multiply without sign.
    pub fn mul(&self, other: &RingElement) -> RingElement {
        debug_assert_eq!(self.ring, other.ring);
        let ring = self.ring;
        if self.terms.is_empty() || other.terms.is_empty() {
            return ring.zero();
        }
        let mut acc = ring.zero();
        for &(da, ca) in &self.terms {
            for &(db, cb) in &other.terms {
                let d = da + db;
                if ring.supports_degree(d) {
                    let c = ring.mul_coef(ca, cb);
                    if c != 0 {
                        acc = acc.add(&RingElement {
                            ring,
                            terms: SmallVec::from_slice(&[(d, c)]),
                        });
                    }
                }
            }
        }
        acc
    }

    /// Multiplies by an integer (in degree 0).
    pub fn scale(&self, k: i64) -> RingElement {
        let ring = self.ring;
        let k = ring.reduce(k);
        RingElement {
            ring,
            terms: self
                .terms
                .iter()
                .map(|&(d, c)| (d, ring.mul_coef(c, k)))
                .filter(|&(_, c)| c != 0)
                .collect(),
        }
    }

    /// `(-1)^bit * self`.
    pub fn signed(&self, odd: bool) -> RingElement {
        if odd {
            self.neg()
        } else {
            self.clone()
        }
    }
}

/// Outcome of [`check_strong_commutativity`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommutativityReport {
    Pass,
    /// Two monomials (by degree) with `ba != (-1)^{|a||b|} ab`.
    NotGradedCommutative { a: i32, b: i32 },
    /// An odd monomial whose square is nonzero.
    OddSquareNonzero { c: i32 },
}

/// Verifies `ba = (-1)^{|a||b|} ab` on all monomial pairs and `c^2 = 0` for odd `c`.
///
/// Checking monomials suffices: the commutation rule makes the cross terms of
/// `(sum c_i)^2` cancel in pairs for odd `c_i`.
pub fn check_strong_commutativity(ring: Ring) -> CommutativityReport {
    let support = ring.degree_support();
    for &da in &support {
        let a = ring.monomial(da, 1);
        for &db in &support {
            let b = ring.monomial(db, 1);
            let lhs = b.mul(&a);
            let rhs = a.mul(&b).signed((da * db) % 2 != 0);
            if lhs != rhs {
                return CommutativityReport::NotGradedCommutative { a: da, b: db };
            }
        }
        if da % 2 != 0 && !a.mul(&a).is_zero() {
            return CommutativityReport::OddSquareNonzero { c: da };
        }
    }
    CommutativityReport::Pass
}
