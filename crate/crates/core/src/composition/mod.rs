//! Compositions `P = B_0 ∘ B_1 ∘ … ∘ B_{n-1}` of affine steps
//! `B_i(x) = (p_i·x + k_i)/q`.
//!
//! # Order convention
//!
//! `B_{n-1}` is applied **first** and `B_0` last, i.e. `P(x) = B_0(B_1(…B_{n-1}(x)…))`.
//! The cycle terms therefore satisfy `x_i = B_i(x_{i+1})`, and when a
//! composition is written as a word the leftmost letter is `B_0`.
//!
//! Indices are taken modulo `n` everywhere: `B_i = B_j` whenever
//! `i ≡ j (mod n)`, so every operation here accepts any `i64` index.

mod parse;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;

pub use parse::parse_spec;

/// One affine step `x ↦ (p·x + k)/q`; `q` is shared by the whole composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineStep {
    pub p: i64,
    pub k: i64,
}

impl AffineStep {
    pub const fn new(p: i64, k: i64) -> Self {
        AffineStep { p, k }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawComposition")]
pub struct Composition {
    q: i64,
    steps: Vec<AffineStep>,
}

#[derive(Deserialize)]
struct RawComposition {
    q: i64,
    steps: Vec<AffineStep>,
}

impl TryFrom<RawComposition> for Composition {
    type Error = Error;
    fn try_from(raw: RawComposition) -> Result<Self> {
        Composition::new(raw.q, raw.steps)
    }
}

impl Composition {
    /// Validates `q ≠ 0`, `n ≥ 1`, `p_i ≠ 0` and `gcd(p_i, q) = 1`.
    pub fn new(q: i64, steps: Vec<AffineStep>) -> Result<Self> {
        if q == 0 {
            return Err(Error::Validation("q must be nonzero".into()));
        }
        if steps.is_empty() {
            return Err(Error::Validation("a composition needs at least one step".into()));
        }
        for (i, s) in steps.iter().enumerate() {
            if s.p == 0 {
                return Err(Error::Validation(format!("p_{i} must be nonzero")));
            }
            let g = s.p.gcd(&q);
            if g != 1 {
                return Err(Error::Validation(format!(
                    "gcd(p_{i}, q) = gcd({}, {q}) = {g}, expected 1",
                    s.p
                )));
            }
        }
        Ok(Composition { q, steps })
    }

    /// Builds a two-type composition from a word over `{S, T}`; the leftmost
    /// letter becomes `B_0`. `S ↦ (p, k_s)` and `T ↦ (1, k_t)`.
    pub fn from_word(q: i64, p: i64, k_s: i64, k_t: i64, word: &str) -> Result<Self> {
        let steps = word
            .chars()
            .map(|c| match c {
                'S' => Ok(AffineStep::new(p, k_s)),
                'T' => Ok(AffineStep::new(1, k_t)),
                other => Err(Error::BadArgument(format!("letter {other:?} is not S or T"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(q, steps)
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn steps(&self) -> &[AffineStep] {
        &self.steps
    }

    /// Number of steps `n`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Reduces an arbitrary index modulo `n`.
    pub fn index(&self, i: i64) -> usize {
        i.rem_euclid(self.len() as i64) as usize
    }

    pub fn step(&self, i: i64) -> AffineStep {
        self.steps[self.index(i)]
    }

    /// `B_i(x) = (p_i·x + k_i)/q`.
    pub fn apply_step(&self, i: i64, x: &Rational) -> Rational {
        let s = self.step(i);
        let lifted = x.scale(&BigInt::from(s.p)) + Rational::from(s.k);
        lifted
            .checked_div(&Rational::from(self.q))
            .expect("q is nonzero by construction")
    }

    /// `p_0·p_1·…·p_{n-1}`.
    pub fn full_product(&self) -> BigInt {
        self.steps.iter().map(|s| BigInt::from(s.p)).product()
    }

    fn check_range(&self, i: i64, j: i64) -> Result<usize> {
        let n = self.len();
        match j.checked_sub(i) {
            Some(len) if (0..=n as i64).contains(&len) => Ok(len as usize),
            _ => Err(Error::BadRange { i, j, n }),
        }
    }

    /// `p_i·p_{i+1}·…·p_{j-1}` with indices mod `n`; the empty range gives 1.
    pub fn p_product(&self, i: i64, j: i64) -> Result<BigInt> {
        let len = self.check_range(i, j)?;
        Ok((0..len as i64)
            .map(|t| BigInt::from(self.step(i + t).p))
            .fold(BigInt::one(), |acc, p| acc * p))
    }

    /// The single multiplier `p ≠ 1` shared by every non-`T` step, if the
    /// composition is two-type. `Ok(None)` means every step has `p_i = 1`.
    pub fn two_type_multiplier(&self) -> Result<Option<i64>> {
        let mut found: Option<i64> = None;
        for s in &self.steps {
            if s.p == 1 {
                continue;
            }
            match found {
                None => found = Some(s.p),
                Some(p) if p == s.p => {}
                Some(_) => return Err(Error::NotTwoType(self.multipliers())),
            }
        }
        Ok(found)
    }

    fn multipliers(&self) -> Vec<i64> {
        self.steps.iter().map(|s| s.p).collect()
    }

    /// `σ(i, j)`: number of `S`-type steps (`p_t ≠ 1`) in `B_i … B_{j-1}`.
    pub fn sigma(&self, i: i64, j: i64) -> Result<usize> {
        self.two_type_multiplier()?;
        let len = self.check_range(i, j)?;
        Ok((0..len as i64).filter(|&t| self.step(i + t).p != 1).count())
    }

    /// Total number of `S`-type steps, `m = σ(0, n)`.
    pub fn s_count(&self) -> Result<usize> {
        self.sigma(0, self.len() as i64)
    }

    /// The composition `B_i ∘ B_{i+1} ∘ … ∘ B_{i+n-1}`.
    pub fn rotate(&self, i: i64) -> Composition {
        let mut steps = self.steps.clone();
        steps.rotate_left(self.index(i));
        Composition { q: self.q, steps }
    }

    /// `P^k`: the step list repeated `k` times.
    pub fn power(&self, k: usize) -> Result<Composition> {
        if k < 1 {
            return Err(Error::BadArgument("power must be at least 1".into()));
        }
        Ok(Composition {
            q: self.q,
            steps: self.steps.repeat(k),
        })
    }

    /// Label in the `S_k` / `T_k` shorthand for step `i` of a two-type composition.
    pub fn step_label(&self, i: i64) -> String {
        let s = self.step(i);
        let letter = if s.p == 1 { 'T' } else { 'S' };
        format!("{letter}_{}", s.k)
    }
}

/// Renders the `steps=` form of the spec grammar.
impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q={}", self.q)?;
        write!(f, "steps=")?;
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({},{})", s.p, s.k)?;
        }
        writeln!(f)
    }
}

impl FromStr for Composition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}
