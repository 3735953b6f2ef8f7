//! Rational cycles of a composition.
//!
//! With `D = qⁿ − p_0·…·p_{n-1}` and `U_t = q^t / D`, the cycle terms have
//! the closed form
//!
//! ```text
//! x_i = Σ_{t=0}^{n-1} (p_i·p_{i+1}·…·p_{i+n-2-t}) · k_{i-1-t} · U_t      (indices mod n)
//! ```
//!
//! [`affine_fold_fixed_point`] computes `x_0` a second way, by folding the
//! steps into one affine map and solving for its fixed point. The two
//! routes share nothing beyond [`Composition`] itself.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exact::{ipow, Rational};

/// `qⁿ − p_0·p_1·…·p_{n-1}`.
pub fn discriminant(c: &Composition) -> BigInt {
    ipow(c.q(), c.len()) - c.full_product()
}

/// `U_t = q^t / D` for any `t ≥ 0`.
pub fn u_value(c: &Composition, t: usize) -> Result<Rational> {
    let d = discriminant(c);
    if d.is_zero() {
        return Err(Error::DegenerateCycle(d));
    }
    Rational::new(ipow(c.q(), t), d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSolution {
    pub q: i64,
    pub prod_p: BigInt,
    pub d: BigInt,
    /// `U_0 … U_n`.
    pub u: Vec<Rational>,
    /// `x_0 … x_{n-1}`.
    pub x: Vec<Rational>,
    pub common_den: BigInt,
}

impl CycleSolution {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `x_i` with `i` taken mod `n`.
    pub fn term(&self, i: i64) -> &Rational {
        &self.x[i.rem_euclid(self.n() as i64) as usize]
    }

    /// `true` iff every cycle term is an integer.
    pub fn is_integer_cycle(&self) -> bool {
        self.common_den.is_one()
    }
}

impl Serialize for CycleSolution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CycleSolution", 7)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("prodP", &self.prod_p.to_string())?;
        st.serialize_field("D", &self.d.to_string())?;
        st.serialize_field("U", &self.u)?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("commonDen", &self.common_den.to_string())?;
        st.end()
    }
}

/// Solves for every cycle term by the closed form.
pub fn solve_cycle(c: &Composition) -> Result<CycleSolution> {
    let n = c.len();
    let d = discriminant(c);
    if d.is_zero() {
        return Err(Error::DegenerateCycle(d));
    }
    let u: Vec<Rational> = (0..=n)
        .map(|t| Rational::new(ipow(c.q(), t), d.clone()))
        .collect::<Result<_>>()?;

    let x: Vec<Rational> = (0..n as i64)
        .map(|i| {
            (0..n).fold(Rational::zero(), |acc, t| {
                let coeff = c.p_product(i, i + (n - 1 - t) as i64).expect("within one period")
                    * BigInt::from(c.step(i - 1 - t as i64).k);
                acc + u[t].scale(&coeff)
            })
        })
        .collect();

    let common_den = x[0].denom().clone();
    if let Some((i, bad)) = x.iter().enumerate().find(|(_, xi)| xi.denom() != &common_den) {
        return Err(Error::Internal(format!(
            "x_{i} = {bad} does not share the denominator {common_den} of x_0"
        )));
    }

    Ok(CycleSolution {
        q: c.q(),
        prod_p: c.full_product(),
        d,
        u,
        x,
        common_den,
    })
}

/// The map `x ↦ (a·x + c) / q^e`, kept unreduced while folding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub a: BigInt,
    pub c: BigInt,
    pub e: usize,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            a: BigInt::one(),
            c: BigInt::zero(),
            e: 0,
        }
    }

    /// `step ∘ self` for a step `x ↦ (p·x + k)/q`.
    pub fn then_step(&self, q: i64, p: i64, k: i64) -> Self {
        AffineMap {
            a: &self.a * p,
            c: &self.c * p + ipow(q, self.e) * k,
            e: self.e + 1,
        }
    }

    /// Folds the whole composition, innermost step `B_{n-1}` first.
    pub fn of(c: &Composition) -> Self {
        c.steps()
            .iter()
            .rev()
            .fold(Self::identity(), |m, s| m.then_step(c.q(), s.p, s.k))
    }

    pub fn apply(&self, x: &Rational, q: i64) -> Rational {
        let top = x.scale(&self.a) + Rational::from(self.c.clone());
        top.checked_div(&Rational::from(ipow(q, self.e)))
            .expect("q is nonzero")
    }
}

/// Fixed point of the folded map: solves `a·x + c = qⁿ·x`.
pub fn affine_fold_fixed_point(c: &Composition) -> Result<Rational> {
    let m = AffineMap::of(c);
    let qn = ipow(c.q(), m.e);
    if m.a == qn {
        return Err(Error::DegenerateCycle(qn - &m.a));
    }
    Rational::new(m.c, qn - m.a)
}

/// Checks `x_i = B_i(x_{i+1})` for every `i`, and that each `x_i` is the
/// folded-map fixed point of the `i`-th rotation.
pub fn verify_closure(c: &Composition, sol: &CycleSolution) -> bool {
    let n = c.len();
    if sol.x.len() != n {
        return false;
    }
    (0..n as i64).all(|i| {
        let chained = c.apply_step(i, sol.term(i + 1)) == *sol.term(i);
        let fixed = affine_fold_fixed_point(&c.rotate(i)).is_ok_and(|v| v == *sol.term(i));
        chained && fixed
    })
}
