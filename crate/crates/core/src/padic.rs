//! Base-`p` digit expansions of rationals whose denominator is prime to `p`.
//!
//! For `x = a/b` (reduced, `b > 0`) the digits come from the state recurrence
//!
//! ```text
//! d_t     = a_t · b⁻¹ mod p
//! a_{t+1} = (a_t − d_t·b) / p
//! ```
//!
//! Each state `a_t` determines the whole remaining digit stream, so the first
//! repeated state gives both the minimal preperiod and the primitive period.
//! `p` need not be prime.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::composition::Composition;
use crate::cycles::CycleSolution;
use crate::error::{Error, Result};
use crate::exact::{divides, ipow, mod_inverse, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PAdicExpansion {
    pub base: i64,
    /// Least significant digit first.
    pub preperiod: Vec<u64>,
    pub period: Vec<u64>,
}

impl PAdicExpansion {
    /// Digit at place value `p^j`.
    pub fn digit(&self, j: usize) -> u64 {
        match self.preperiod.get(j) {
            Some(&d) => d,
            None => self.period[(j - self.preperiod.len()) % self.period.len()],
        }
    }

    /// The first `count` digits, least significant first.
    pub fn digits(&self, count: usize) -> Vec<u64> {
        (0..count).map(|j| self.digit(j)).collect()
    }

    /// `Σ_{j<count} d_j·p^j`.
    pub fn partial_sum(&self, count: usize) -> BigInt {
        (0..count).rev().fold(BigInt::zero(), |acc, j| acc * self.base + self.digit(j))
    }
}

fn check_base(den: &BigInt, p: i64) -> Result<()> {
    if p < 2 {
        return Err(Error::BadBase(p));
    }
    if !den.gcd(&BigInt::from(p)).is_one() {
        return Err(Error::BaseNotCoprime {
            den: den.clone(),
            base: p,
        });
    }
    Ok(())
}

/// Expands `x` in base `p`, giving up after `max_digits` digits without a
/// repeated state.
pub fn expand(x: &Rational, p: i64, max_digits: usize) -> Result<PAdicExpansion> {
    let b = x.denom();
    check_base(b, p)?;
    let modulus = BigInt::from(p);
    let b_inv = mod_inverse(b, &modulus)?;

    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut state = x.numer().clone();
    while digits.len() <= max_digits {
        if let Some(&start) = seen.get(&state) {
            let period = digits.split_off(start);
            return Ok(PAdicExpansion {
                base: p,
                preperiod: digits,
                period,
            });
        }
        let d = (&state * &b_inv).mod_floor(&modulus);
        seen.insert(state.clone(), digits.len());
        state = (&state - &d * b) / &modulus;
        digits.push(d.to_u64().expect("digit below base"));
    }
    Err(Error::NoPeriodWithinBound(max_digits))
}

/// A digit budget that is always enough for `x`: states shrink by a factor
/// of `p` until they settle in `[-b, 0]`, which has `b + 1` members.
pub fn digit_budget(x: &Rational) -> usize {
    let settle = x.numer().bits() as usize + 2;
    x.denom().to_usize().map_or(usize::MAX, |b| b.saturating_add(settle))
}

/// [`expand`] with [`digit_budget`].
pub fn expand_exact(x: &Rational, p: i64) -> Result<PAdicExpansion> {
    expand(x, p, digit_budget(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgreementMode {
    /// The digit streams coincide from some place value on.
    TailEqual,
    /// The streams never settle into agreement; the integer difference shows
    /// up as an endless carry, as with `0 = …000` against `-1 = …(p-1)(p-1)`.
    TailComplement,
}

impl std::fmt::Display for AgreementMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AgreementMode::TailEqual => "tail-equal",
            AgreementMode::TailComplement => "tail-complement",
        })
    }
}

/// Compares two expansions in the same base past both preperiods.
pub fn tail_agreement(a: &PAdicExpansion, b: &PAdicExpansion) -> AgreementMode {
    let start = a.preperiod.len().max(b.preperiod.len());
    let span = a.period.len().lcm(&b.period.len());
    if (start..start + span).all(|j| a.digit(j) == b.digit(j)) {
        AgreementMode::TailEqual
    } else {
        AgreementMode::TailComplement
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternReport {
    pub l: u32,
    pub i: i64,
    pub b: usize,
    pub sigma: usize,
    /// `p^l·x_i − p^σ·x_{i+b}`.
    #[serde(serialize_with = "as_decimal")]
    pub difference: BigInt,
    #[serde(rename = "agreementMode")]
    pub mode: AgreementMode,
}

fn as_decimal<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn base_of(c: &Composition) -> Result<i64> {
    c.two_type_multiplier()?.ok_or_else(|| {
        Error::BadArgument("composition has no S-type step, so the base p is undetermined".into())
    })
}

/// Checks `p^l·x_i − p^{σ(i,i+b)}·x_{i+b} ∈ ℤ` for a two-type composition,
/// where `D | p^l − q^b` and `0 ≤ b ≤ n`.
pub fn pattern_check(c: &Composition, sol: &CycleSolution, l: u32, i: i64, b: usize) -> Result<PatternReport> {
    let p = base_of(c)?;
    let n = c.len();
    if b > n {
        return Err(Error::BadB { b: b as i64, n });
    }
    let pl = num_traits::pow(BigInt::from(p), l as usize);
    let target = &pl - ipow(c.q(), b);
    if !divides(&sol.d, &target) {
        return Err(Error::NotCertified {
            divisor: sol.d.clone(),
            value: target,
        });
    }
    if 0 < b && b < n && !crate::integrality::is_witness(c, &pl, &BigInt::from(-1), b as i64)? {
        return Err(Error::Internal("witness check disagrees with divisibility".into()));
    }
    let sigma = c.sigma(i, i + b as i64)?;
    let lhs = sol.term(i).scale(&pl);
    let rhs = sol.term(i + b as i64).scale(&ipow(p, sigma));
    let difference = (&lhs - &rhs)
        .to_integer()
        .ok_or_else(|| Error::Internal(format!("pattern difference at i = {i} is not an integer")))?;
    let mode = tail_agreement(&expand_exact(&lhs, p)?, &expand_exact(&rhs, p)?);
    Ok(PatternReport {
        l,
        i,
        b,
        sigma,
        difference,
        mode,
    })
}

/// Glyph for one digit: `0-9`, then `A` = 10 up to `Z` = 35, then `[d]`.
pub fn digit_glyph(d: u64) -> String {
    match d {
        0..=9 => char::from(b'0' + d as u8).to_string(),
        10..=35 => char::from(b'A' + (d - 10) as u8).to_string(),
        _ => format!("[{d}]"),
    }
}

/// One row of the digit table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    /// Index of the cycle term shown in this row.
    pub term: usize,
    pub value: Rational,
    pub expansion: PAdicExpansion,
    /// Columns the row is moved left by: the number of `S` steps between it
    /// and the bottom row.
    pub shift: usize,
    /// Digits shown, most significant first.
    pub shown: Vec<u64>,
    /// `S_k=B_j` for the step producing the next row down; empty on the last row.
    pub step_label: String,
}

/// Rows `x_0, x_{n-1}, …, x_1, x_0` with place values aligned so that
/// multiplying by `p` reads as a one-column shift.
pub fn table_rows(c: &Composition, sol: &CycleSolution, p: i64, digit_count: usize) -> Result<Vec<TableRow>> {
    let n = c.len();
    if c.steps().iter().any(|s| s.p != 1 && s.p != p) {
        return Err(Error::NotTwoType(c.steps().iter().map(|s| s.p).collect()));
    }
    (0..=n)
        .rev()
        .map(|level| {
            let term = level % n;
            let value = sol.x[term].clone();
            let expansion = expand_exact(&value, p)?;
            let shift = c.sigma(0, level as i64)?;
            let mut shown = expansion.digits(digit_count.saturating_sub(shift));
            shown.reverse();
            let step_label = if level == 0 {
                String::new()
            } else {
                format!("{}=B_{}", c.step_label(level as i64 - 1), level - 1)
            };
            Ok(TableRow {
                term,
                value,
                expansion,
                shift,
                shown,
                step_label,
            })
        })
        .collect()
}

/// Plain-text digit table: one row per cycle term, digit columns right-aligned
/// and separated by one space, producing step in the right margin.
pub fn render_table(c: &Composition, sol: &CycleSolution, p: i64, digit_count: usize) -> Result<String> {
    let rows = table_rows(c, sol, p, digit_count)?;
    let labels: Vec<String> = rows.iter().map(|r| format!("x_{} = {}", r.term, r.value)).collect();
    let label_width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let cell = rows
        .iter()
        .flat_map(|r| r.shown.iter())
        .map(|&d| digit_glyph(d).len())
        .max()
        .unwrap_or(1);

    let mut out = String::new();
    for (row, label) in rows.iter().zip(&labels) {
        let mut line = format!("{label:<label_width$} = ...");
        for col in 0..digit_count {
            let glyph = row.shown.get(col).map(|&d| digit_glyph(d)).unwrap_or_default();
            write!(line, " {glyph:>cell$}").expect("writing to a String");
        }
        if !row.step_label.is_empty() {
            write!(line, "   {}", row.step_label).expect("writing to a String");
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    Ok(out)
}
