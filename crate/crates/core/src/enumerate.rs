//! Exhaustive enumeration of `S`/`T` words and their cycles.
//!
//! A word is read left to right as `B_0 B_1 … B_{n-1}`, so the leftmost
//! letter is applied last. `S` stands for `x ↦ (p·x + k_S)/q` and `T` for
//! `x ↦ (x + k_T)/q`; the classic `3x+1` setting is `q = 2, p = 3, k_S = 1, k_T = 0`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::composition::{AffineStep, Composition};
use crate::cycles::{affine_fold_fixed_point, discriminant, solve_cycle};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// The two step types shared by every enumerated word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordParams {
    pub q: i64,
    pub p: i64,
    pub k_s: i64,
    pub k_t: i64,
}

impl WordParams {
    /// `q = 2, p = 3, k_S = 1, k_T = 0`.
    pub const CLASSIC: WordParams = WordParams {
        q: 2,
        p: 3,
        k_s: 1,
        k_t: 0,
    };

    pub fn new(q: i64, p: i64, k_s: i64, k_t: i64) -> Result<Self> {
        // Validates q ≠ 0, p ≠ 0 and gcd(p, q) = 1 once, up front.
        Composition::new(q, vec![AffineStep::new(p, k_s), AffineStep::new(1, k_t)])?;
        Ok(WordParams { q, p, k_s, k_t })
    }

    pub fn composition(&self, word: &str) -> Result<Composition> {
        Composition::from_word(self.q, self.p, self.k_s, self.k_t, word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleRecord {
    pub word: String,
    pub n: usize,
    /// Number of `S` letters.
    pub m: usize,
    pub d: BigInt,
    pub x0: Rational,
    pub is_integer: bool,
    pub rotation_class: String,
}

impl Serialize for CycleRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CycleRecord", 8)?;
        st.serialize_field("word", &self.word)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("D", &self.d.to_string())?;
        st.serialize_field("x0_num", &self.x0.numer().to_string())?;
        st.serialize_field("x0_den", &self.x0.denom().to_string())?;
        st.serialize_field("is_integer", &self.is_integer)?;
        st.serialize_field("rotation_class", &self.rotation_class)?;
        st.end()
    }
}

/// Rank of a letter in the word order; `T` sorts before `S`.
fn letter_rank(c: u8) -> u8 {
    match c {
        b'T' => 0,
        b'S' => 1,
        other => other,
    }
}

/// Lexicographically least rotation under the order `T < S`.
///
/// With this order the least rotation of each known integer cycle is the
/// word that starts the cycle at `0, -1, 1, -5, -17` respectively.
pub fn canonical_rotation(word: &str) -> String {
    let n = word.len();
    (0..n)
        .map(|i| format!("{}{}", &word[i..], &word[..i]))
        .min_by_key(|w| w.bytes().map(letter_rank).collect::<Vec<_>>())
        .unwrap_or_default()
}

/// Solves a single word. `Ok(None)` when `D = 0`.
pub fn word_record(params: &WordParams, word: &str) -> Result<Option<CycleRecord>> {
    let c = params.composition(word)?;
    let d = discriminant(&c);
    if d.is_zero() {
        return Ok(None);
    }
    let x0 = solve_cycle(&c)?.x.swap_remove(0);
    Ok(Some(CycleRecord {
        word: word.to_string(),
        n: word.len(),
        m: word.bytes().filter(|&b| b == b'S').count(),
        d,
        is_integer: x0.is_integer(),
        x0,
        rotation_class: canonical_rotation(word),
    }))
}

/// Iterator over all words of length `1..=max_len`, in length-then-lex order
/// (`T` before `S`). Words with `D = 0` are skipped and counted.
#[derive(Debug, Clone)]
pub struct WordRecords {
    params: WordParams,
    max_len: usize,
    len: usize,
    next: u64,
    skipped: usize,
}

impl WordRecords {
    /// Words skipped so far because `qⁿ = p^m`.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    fn word(&self, idx: u64) -> String {
        (0..self.len)
            .map(|pos| {
                if idx >> (self.len - 1 - pos) & 1 == 1 {
                    'S'
                } else {
                    'T'
                }
            })
            .collect()
    }
}

impl Iterator for WordRecords {
    type Item = CycleRecord;

    fn next(&mut self) -> Option<CycleRecord> {
        while self.len <= self.max_len {
            if self.next >= 1u64 << self.len {
                self.len += 1;
                self.next = 0;
                continue;
            }
            let word = self.word(self.next);
            self.next += 1;
            match word_record(&self.params, &word).expect("parameters validated up front") {
                Some(rec) => return Some(rec),
                None => self.skipped += 1,
            }
        }
        None
    }
}

/// Every word of each length `1..=max_len` (`2^L` per length).
pub fn enumerate_words(params: WordParams, max_len: usize) -> Result<WordRecords> {
    if max_len < 1 {
        return Err(Error::BadArgument("max length must be at least 1".into()));
    }
    if max_len > 40 {
        return Err(Error::BadArgument(format!("max length {max_len} is beyond exhaustive reach")));
    }
    let params = WordParams::new(params.q, params.p, params.k_s, params.k_t)?;
    Ok(WordRecords {
        params,
        max_len,
        len: 1,
        next: 0,
        skipped: 0,
    })
}

/// Words whose cycle is integral, optionally keeping only the first word of
/// each rotation class. Enumeration order makes that first word the
/// canonical rotation.
pub fn find_integer_cycles(params: WordParams, max_len: usize, dedup_rotations: bool) -> Result<Vec<CycleRecord>> {
    let mut seen = std::collections::HashSet::new();
    Ok(enumerate_words(params, max_len)?
        .filter(|r| r.is_integer)
        .filter(|r| !dedup_rotations || seen.insert(r.rotation_class.clone()))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationClass {
    pub canonical: String,
    /// Fixed point of the word rotated left by `i`, which is `x_i` of the word.
    pub x: Vec<Rational>,
}

pub fn classify_rotations(params: &WordParams, word: &str) -> Result<RotationClass> {
    let c = params.composition(word)?;
    let x = (0..c.len() as i64)
        .map(|i| affine_fold_fixed_point(&c.rotate(i)))
        .collect::<Result<_>>()?;
    Ok(RotationClass {
        canonical: canonical_rotation(word),
        x,
    })
}
