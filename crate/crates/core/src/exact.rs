//! Exact arithmetic: reduced big rationals plus the bits of modular number
//! theory the rest of the crate leans on.
//!
//! A [`Rational`] is always stored in lowest terms with a positive
//! denominator, so structural equality is numeric equality and `0` has the
//! single representation `0/1`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// Builds the reduced representative of `num/den`.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    fn reduce(mut num: BigInt, mut den: BigInt) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        Rational { num, den }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.num.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::reduce(&self.num * k, self.den.clone())
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational::reduce(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational::reduce(
            &self.num * &rhs.den - &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -self.clone()
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadArgument(format!("not a rational: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => Ok(Rational::from_integer(
                s.parse::<BigInt>().map_err(|_| bad())?,
            )),
        }
    }
}

// Wire form: {"num": "<decimal>", "den": "<decimal>"}.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &self.num.to_string())?;
        st.serialize_field("den", &self.den.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            num: String,
            den: String,
        }
        let w = Wire::deserialize(deserializer)?;
        let num: BigInt = w.num.parse().map_err(de::Error::custom)?;
        let den: BigInt = w.den.parse().map_err(de::Error::custom)?;
        Rational::new(num, den).map_err(de::Error::custom)
    }
}

/// `true` iff `d` divides `n`. Zero divides only zero.
pub fn divides(d: &BigInt, n: &BigInt) -> bool {
    if d.is_zero() {
        n.is_zero()
    } else {
        (n % d).is_zero()
    }
}

/// `base^exp` for a machine-sized base.
pub fn ipow(base: i64, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

/// Inverse of `a` modulo `m`, in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    if *m < BigInt::from(2) {
        return Err(Error::BadModulus(m.clone()));
    }
    let ext = a.mod_floor(m).extended_gcd(m);
    if !ext.gcd.is_one() {
        return Err(Error::NotCoprime {
            a: a.clone(),
            m: m.clone(),
        });
    }
    Ok(ext.x.mod_floor(m))
}

/// Euler's totient by trial-division factorization.
pub fn euler_totient(n: &BigInt) -> Result<BigInt> {
    if n.sign() != Sign::Plus {
        return Err(Error::BadArgument(format!("totient of {n} is undefined")));
    }
    let mut rest = n.clone();
    let mut phi = n.clone();
    let mut f = BigInt::from(2);
    while &f * &f <= rest {
        if (&rest % &f).is_zero() {
            while (&rest % &f).is_zero() {
                rest /= &f;
            }
            phi -= &phi / &f;
        }
        f += 1;
    }
    if rest > BigInt::one() {
        phi -= &phi / &rest;
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn make_normalizes() {
        let x = r(-69, 11);
        assert_eq!((x.numer().clone(), x.denom().clone()), (BigInt::from(-69), BigInt::from(11)));
        assert_eq!(r(0, 5), Rational::zero());
        assert_eq!(r(0, -5).denom(), &BigInt::one());
        assert_eq!(r(4, -6), r(-2, 3));
        assert_eq!(r(4, -6).numer(), &BigInt::from(-2));
        assert_eq!(Rational::new(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn integer_check() {
        assert!(!r(53, 7).is_integer());
        assert!(r(-116, 1).is_integer());
        assert!(Rational::zero().is_integer());
        assert!(r(22, 11).is_integer());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(r(1, 2).checked_div(&Rational::zero()), Err(Error::DivisionByZero));
        assert_eq!(Rational::zero().recip(), Err(Error::DivisionByZero));
        assert_eq!(r(1, 2).checked_div(&r(-3, 4)).unwrap(), r(-2, 3));
    }

    #[test]
    fn text_and_json_forms() {
        assert_eq!(r(-69, 11).to_string(), "-69/11");
        assert_eq!(r(-116, 1).to_string(), "-116");
        assert_eq!("-69/11".parse::<Rational>().unwrap(), r(-69, 11));
        assert_eq!("8/-4".parse::<Rational>().unwrap(), r(-2, 1));
        assert!("1/0".parse::<Rational>().is_err());
        let json = serde_json::to_string(&r(-69, 11)).unwrap();
        assert_eq!(json, r#"{"num":"-69","den":"11"}"#);
        let back: Rational = serde_json::from_str(r#"{"num":"4","den":"-6"}"#).unwrap();
        assert_eq!(back, r(-2, 3));
    }

    #[test]
    fn modular_inverse() {
        let b = BigInt::from;
        assert_eq!(mod_inverse(&b(7), &b(11)).unwrap(), b(8));
        assert_eq!(mod_inverse(&b(1), &b(97)).unwrap(), b(1));
        assert_eq!(mod_inverse(&b(-4), &b(11)).unwrap(), b(8));
        assert!(matches!(mod_inverse(&b(2), &b(4)), Err(Error::NotCoprime { .. })));
        assert!(matches!(mod_inverse(&b(1), &b(1)), Err(Error::BadModulus(_))));
    }

    fn totient_brute(n: u64) -> u64 {
        (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
    }

    #[test]
    fn totient_values() {
        let b = BigInt::from;
        assert_eq!(euler_totient(&b(1)).unwrap(), b(1));
        assert_eq!(euler_totient(&b(11)).unwrap(), b(10));
        assert_eq!(euler_totient(&b(139)).unwrap(), b(138));
        assert!(euler_totient(&b(0)).is_err());
        for n in 1..300u64 {
            assert_eq!(euler_totient(&b(n as i64)).unwrap(), BigInt::from(totient_brute(n)), "n={n}");
        }
    }

    #[test]
    fn totient_of_sieved_primes() {
        let limit = 1000usize;
        let mut composite = vec![false; limit + 1];
        for i in 2..=limit {
            if composite[i] {
                continue;
            }
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
            let p = BigInt::from(i);
            assert_eq!(euler_totient(&p).unwrap(), &p - 1);
        }
    }

    #[test]
    fn inverse_on_random_coprime_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x51);
        let mut checked = 0;
        while checked < 1000 {
            let m: i64 = rng.gen_range(2..100_000);
            let a: i64 = rng.gen_range(-1_000_000..1_000_000);
            if a.gcd(&m) != 1 {
                continue;
            }
            let (a, m) = (BigInt::from(a), BigInt::from(m));
            let u = mod_inverse(&a, &m).unwrap();
            assert!(u >= BigInt::zero() && u < m);
            assert!((&a * &u).mod_floor(&m).is_one());
            checked += 1;
        }
    }

    fn nonzero() -> impl Strategy<Value = i64> {
        prop_oneof![-10_000i64..=-1, 1i64..=10_000]
    }

    fn reduced(x: &Rational) -> bool {
        x.denom() > &BigInt::zero() && x.numer().gcd(x.denom()).is_one()
    }

    proptest! {
        #[test]
        fn scaling_does_not_change_value(n in -10_000i64..10_000, d in nonzero(), k in nonzero()) {
            prop_assert_eq!(r(n, d), r(n * k, d * k));
        }

        #[test]
        fn arithmetic_stays_reduced(a in -500i64..500, b in nonzero(), c in -500i64..500, d in nonzero()) {
            let (x, y) = (r(a, b), r(c, d));
            prop_assert!(reduced(&(&x + &y)));
            prop_assert!(reduced(&(&x - &y)));
            prop_assert!(reduced(&(&x * &y)));
            if let Ok(q) = x.checked_div(&y) {
                prop_assert!(reduced(&q));
                prop_assert_eq!(&q * &y, x.clone());
            } else {
                prop_assert!(y.is_zero());
            }
            prop_assert_eq!(&(&x + &y) - &y, x);
        }

        #[test]
        fn text_round_trip(n in -10_000i64..10_000, d in nonzero()) {
            let x = r(n, d);
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }
    }
}
