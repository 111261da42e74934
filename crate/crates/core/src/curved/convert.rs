//! Passing between the shifted and unshifted forms of the structure maps.

use super::{CACoalgebra, CurvedAInfAlgebra, CurvedAInfCoalgebra, UCCAlgebra};
use crate::error::AlgebraError;
use crate::gmod::{sigma, Expr, GradedMap, GradedModule};

fn sign(n: usize) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

fn tensor_power_expr(f: &GradedMap, n: usize) -> Result<Expr<'_>, AlgebraError> {
    let mut e = Expr::id(&GradedModule::unit(f.ring()));
    for _ in 0..n {
        e = e.tensor(f.ex())?;
    }
    Ok(e)
}

/// `m_n = (-1)^n sigma^{(x) n} b_n sigma^{-1}` for a component
/// `b_n: A[1]^{(x) n} -> A[1]`.
pub fn m_from_b(a: &GradedModule, n: usize, b: &GradedMap) -> Result<GradedMap, AlgebraError> {
    let s = sigma(a, 1);
    let s_inv = sigma(&a.shift(1), -1);
    tensor_power_expr(&s, n)?
        .then(b.ex())?
        .then(s_inv.ex())?
        .scaled(sign(n))
        .materialize()
}

/// Inverse of [`m_from_b`].
pub fn b_from_m(a: &GradedModule, n: usize, m: &GradedMap) -> Result<GradedMap, AlgebraError> {
    let s = sigma(a, 1);
    let sn_inv = tensor_power_expr(&s, n)?.materialize()?.inverse_signed_permutation()?;
    sn_inv.ex().then(m.ex())?.then(s.ex())?.scaled(sign(n)).materialize()
}

/// `delta_n = (-1)^n sigma^{-1} xi_n sigma^{(x) n}` for a component
/// `xi_n: C[-1] -> C[-1]^{(x) n}`.
pub fn delta_from_xi(c: &GradedModule, n: usize, xi: &GradedMap) -> Result<GradedMap, AlgebraError> {
    let down = sigma(c, -1);
    let up = sigma(&c.shift(-1), 1);
    down.ex()
        .then(xi.ex())?
        .then(tensor_power_expr(&up, n)?)?
        .scaled(sign(n))
        .materialize()
}

/// Inverse of [`delta_from_xi`].
pub fn xi_from_delta(c: &GradedModule, n: usize, delta: &GradedMap) -> Result<GradedMap, AlgebraError> {
    let up = sigma(&c.shift(-1), 1);
    let un_inv = tensor_power_expr(&up, n)?.materialize()?.inverse_signed_permutation()?;
    up.ex()
        .then(delta.ex())?
        .then(un_inv.ex())?
        .scaled(sign(n))
        .materialize()
}

impl CurvedAInfAlgebra {
    /// The shifted form of a unit-complemented curved algebra (`b_n = 0` for `n > 2`).
    pub fn from_ucc(alg: &UCCAlgebra) -> Result<CurvedAInfAlgebra, AlgebraError> {
        let a = alg.module();
        let b = vec![
            b_from_m(a, 0, alg.m0())?,
            b_from_m(a, 1, alg.m1())?,
            b_from_m(a, 2, alg.m2())?,
        ];
        CurvedAInfAlgebra::new(
            a,
            b,
            alg.eta().relabel_shift(0, 1),
            alg.v().relabel_shift(1, 0),
        )
    }

    /// The unshifted family `m_n`, for every stored arity.
    pub fn m_family(&self) -> Result<Vec<GradedMap>, AlgebraError> {
        (0..self.arity_len()).map(|n| m_from_b(self.module(), n, &self.b(n))).collect()
    }

    /// Builds the shifted structure from an unshifted family `m_0, m_1, ...`.
    pub fn from_m_family(
        a: &GradedModule,
        m: &[GradedMap],
        eta: &GradedMap,
        v: &GradedMap,
    ) -> Result<CurvedAInfAlgebra, AlgebraError> {
        let a = a.flatten();
        let b = m
            .iter()
            .enumerate()
            .map(|(n, mn)| b_from_m(&a, n, mn))
            .collect::<Result<Vec<_>, _>>()?;
        CurvedAInfAlgebra::new(&a, b, eta.relabel_shift(0, 1), v.relabel_shift(1, 0))
    }

    /// Back to a unit-complemented curved algebra; fails if some `b_n`, `n > 2`, is nonzero.
    pub fn to_ucc(&self) -> Result<UCCAlgebra, AlgebraError> {
        if let Some(n) = (3..self.arity_len()).find(|&n| !self.b(n).is_zero()) {
            return Err(AlgebraError::InvalidStructure(format!(
                "b_{n} is nonzero; not a curved algebra"
            )));
        }
        let a = self.module();
        UCCAlgebra::new(
            a,
            m_from_b(a, 2, &self.b(2))?,
            m_from_b(a, 1, &self.b(1))?,
            m_from_b(a, 0, &self.b(0))?,
            self.eta_bold().relabel_shift(0, -1),
            self.v_bold().relabel_shift(-1, 0),
        )
    }
}

impl CurvedAInfCoalgebra {
    pub fn from_ca(coalg: &CACoalgebra) -> Result<CurvedAInfCoalgebra, AlgebraError> {
        let c = coalg.module();
        let xi = vec![
            xi_from_delta(c, 0, coalg.d0())?,
            xi_from_delta(c, 1, coalg.d1())?,
            xi_from_delta(c, 2, coalg.d2())?,
        ];
        CurvedAInfCoalgebra::new(
            c,
            xi,
            coalg.eps().relabel_shift(-1, 0),
            coalg.w().relabel_shift(0, -1),
        )
    }

    pub fn delta_family(&self) -> Result<Vec<GradedMap>, AlgebraError> {
        (0..self.arity_len())
            .map(|n| delta_from_xi(self.module(), n, &self.xi(n)))
            .collect()
    }

    pub fn to_ca(&self) -> Result<CACoalgebra, AlgebraError> {
        if let Some(n) = (3..self.arity_len()).find(|&n| !self.xi(n).is_zero()) {
            return Err(AlgebraError::InvalidStructure(format!(
                "xi_{n} is nonzero; not a curved coalgebra"
            )));
        }
        let c = self.module();
        CACoalgebra::new(
            c,
            delta_from_xi(c, 2, &self.xi(2))?,
            delta_from_xi(c, 1, &self.xi(1))?,
            delta_from_xi(c, 0, &self.xi(0))?,
            self.eps_bold().relabel_shift(1, 0),
            self.w_bold().relabel_shift(0, 1),
        )
    }
}
