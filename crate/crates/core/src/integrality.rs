//! Integer linear combinations of cycle terms.
//!
//! A witness `(α, β, b)` with `α, β ≠ 0`, `0 < b < n` and `D | α + β·q^b`
//! (equivalently `α·U_0 + β·U_b ∈ ℤ`) guarantees that
//!
//! ```text
//! α·x_i + β·p_i·p_{i+1}·…·p_{i+b-1}·x_{i+b}
//! ```
//!
//! is an integer for every `i`, including the wraparound case `i + b ≥ n`.
//! The converse does not hold: cycles whose terms are all integers make every
//! such combination integral, witness or not.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::composition::Composition;
use crate::cycles::{discriminant, CycleSolution};
use crate::error::{Error, Result};
use crate::exact::{divides, euler_totient, ipow, Rational};

/// A certified triple `(α, β, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    alpha: BigInt,
    beta: BigInt,
    b: usize,
    d: BigInt,
    /// `(α + β·q^b) / D`
    value: BigInt,
}

impl Witness {
    /// Certifies `(alpha, beta, b)` against `c`.
    pub fn certify(c: &Composition, alpha: BigInt, beta: BigInt, b: i64) -> Result<Self> {
        let b = check_shift(c, &alpha, &beta, b)?;
        let d = nonzero_discriminant(c)?;
        let target = &alpha + &beta * ipow(c.q(), b);
        let (value, rem) = target.div_rem(&d);
        if !rem.is_zero() {
            return Err(Error::NotCertified {
                divisor: d,
                value: target,
            });
        }
        Ok(Witness {
            alpha,
            beta,
            b,
            d,
            value,
        })
    }

    pub fn alpha(&self) -> &BigInt {
        &self.alpha
    }

    pub fn beta(&self) -> &BigInt {
        &self.beta
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.d
    }

    pub fn certificate(&self) -> &BigInt {
        &self.value
    }

    pub fn triple(&self) -> (BigInt, BigInt, usize) {
        (self.alpha.clone(), self.beta.clone(), self.b)
    }
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.b)
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Certificate {
            #[serde(rename = "D")]
            d: String,
            value: String,
        }
        let mut st = serializer.serialize_struct("Witness", 4)?;
        st.serialize_field("alpha", &self.alpha.to_string())?;
        st.serialize_field("beta", &self.beta.to_string())?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field(
            "certificate",
            &Certificate {
                d: self.d.to_string(),
                value: self.value.to_string(),
            },
        )?;
        st.end()
    }
}

fn nonzero_discriminant(c: &Composition) -> Result<BigInt> {
    let d = discriminant(c);
    if d.is_zero() {
        Err(Error::DegenerateCycle(d))
    } else {
        Ok(d)
    }
}

fn check_shift(c: &Composition, alpha: &BigInt, beta: &BigInt, b: i64) -> Result<usize> {
    let n = c.len();
    if b <= 0 || b >= n as i64 {
        return Err(Error::BadB { b, n });
    }
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    Ok(b as usize)
}

fn u_at(c: &Composition, d: &BigInt, t: usize) -> Rational {
    Rational::new(ipow(c.q(), t), d.clone()).expect("D is nonzero")
}

fn integral(x: Rational, what: impl FnOnce() -> String) -> Result<BigInt> {
    x.to_integer()
        .ok_or_else(|| Error::Internal(format!("{} = {x} is not an integer", what())))
}

/// `D | α + β·q^b`, cross-checked against `α·U_0 + β·U_b ∈ ℤ`.
pub fn is_witness(c: &Composition, alpha: &BigInt, beta: &BigInt, b: i64) -> Result<bool> {
    let b = check_shift(c, alpha, beta, b)?;
    let d = nonzero_discriminant(c)?;
    let by_divisibility = divides(&d, &(alpha + beta * ipow(c.q(), b)));
    let combo = u_at(c, &d, 0).scale(alpha) + u_at(c, &d, b).scale(beta);
    if combo.is_integer() != by_divisibility {
        return Err(Error::Internal(format!(
            "divisibility and U-combination disagree for ({alpha}, {beta}, {b})"
        )));
    }
    Ok(by_divisibility)
}

/// `(α, β, b) ↦ (∏p·β, α, n − b)`.
pub fn lemma1_transform(c: &Composition, w: &Witness) -> Result<Witness> {
    let alpha = c.full_product() * &w.beta;
    let b = (c.len() - w.b) as i64;
    Witness::certify(c, alpha, w.alpha.clone(), b).map_err(|e| match e {
        Error::NotCertified { .. } => Error::Internal(format!("lemma transform of {w} is not a witness")),
        other => other,
    })
}

/// `(α·U_i + β·U_{i+b},  ∏p·β·U_i + α·U_{n+i−b})`, both integers.
pub fn lemma2_shift(c: &Composition, w: &Witness, i: usize) -> Result<(BigInt, BigInt)> {
    let n = c.len();
    let d = &w.d;
    let first = u_at(c, d, i).scale(&w.alpha) + u_at(c, d, i + w.b).scale(&w.beta);
    let second = u_at(c, d, i).scale(&(c.full_product() * &w.beta)) + u_at(c, d, n + i - w.b).scale(&w.alpha);
    Ok((
        integral(first, || format!("alpha*U_{i} + beta*U_{}", i + w.b))?,
        integral(second, || format!("prodP*beta*U_{i} + alpha*U_{}", n + i - w.b))?,
    ))
}

/// `α·x_i + β·p_i·…·p_{i+b-1}·x_{i+b}` for any `i` (taken mod `n`).
///
/// A non-integer result means the index conventions are broken somewhere
/// and is reported as [`Error::Internal`].
pub fn theorem_combination(c: &Composition, sol: &CycleSolution, w: &Witness, i: i64) -> Result<BigInt> {
    let b = w.b as i64;
    let weight = c.p_product(i, i + b)? * &w.beta;
    let value = sol.term(i).scale(&w.alpha) + sol.term(i + b).scale(&weight);
    integral(value, || format!("combination at i = {i} for witness {w}"))
}

/// The `M_j` terms from the proof of the non-wraparound case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub m: Vec<BigInt>,
    /// `Σ_j k_j·M_j`, equal to the theorem combination.
    pub combination: BigInt,
}

/// Splits the combination at `i` into `Σ_j k_j·M_j` with
///
/// ```text
///        ⎧ p_i…p_{j-1}   · (α·U_{n+i-1-j} + β·∏p·U_{i+b-1-j})   i ≤ j < i+b
/// M_j =  ⎨ p_i…p_{n+j-1} · (α·U_{i-1-j}   + β·U_{i+b-1-j})      0 ≤ j < i
///        ⎩ p_i…p_{j-1}   · (α·U_{n+i-1-j} + β·U_{n+i+b-1-j})    i+b ≤ j < n
/// ```
///
/// `i` is reduced mod `n` and must then satisfy `i + b < n`.
pub fn decompose_m(c: &Composition, sol: &CycleSolution, w: &Witness, i: i64) -> Result<DecompositionReport> {
    let n = c.len();
    let i = c.index(i);
    let b = w.b;
    if i + b >= n {
        return Err(Error::WraparoundUnsupported {
            i: i as i64,
            b: b as i64,
            n,
        });
    }
    let u = &sol.u;
    let prod = c.full_product();
    let (alpha, beta) = (&w.alpha, &w.beta);

    let m: Vec<BigInt> = (0..n)
        .map(|j| {
            let (prefix_end, inner) = if j < i {
                (n + j, u[i - 1 - j].scale(alpha) + u[i + b - 1 - j].scale(beta))
            } else if j < i + b {
                (j, u[n + i - 1 - j].scale(alpha) + u[i + b - 1 - j].scale(&(beta * &prod)))
            } else {
                (j, u[n + i - 1 - j].scale(alpha) + u[n + i + b - 1 - j].scale(beta))
            };
            let prefix = c.p_product(i as i64, prefix_end as i64)?;
            integral(inner.scale(&prefix), || format!("M_{j}"))
        })
        .collect::<Result<_>>()?;

    let combination: BigInt = m
        .iter()
        .enumerate()
        .map(|(j, mj)| mj * c.step(j as i64).k)
        .sum();
    let direct = theorem_combination(c, sol, w, i as i64)?;
    if combination != direct {
        return Err(Error::Internal(format!(
            "sum of k_j*M_j = {combination} differs from the combination {direct} at i = {i}"
        )));
    }
    Ok(DecompositionReport { m, combination })
}

/// The `b ∈ {0, n}` edge cases: returns `(α+β)·x_i` (for `b = 0`) or
/// `(α + ∏p·β)·x_i` (for `b = n`) for every `i`.
pub fn remark_edge(c: &Composition, sol: &CycleSolution, alpha: &BigInt, beta: &BigInt, b: i64) -> Result<Vec<BigInt>> {
    let n = c.len();
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let coeff = if b == 0 {
        alpha + beta
    } else if b == n as i64 {
        alpha + c.full_product() * beta
    } else {
        return Err(Error::BadB { b, n });
    };
    if !divides(&sol.d, &coeff) {
        return Err(Error::NotCertified {
            divisor: sol.d.clone(),
            value: coeff,
        });
    }
    sol.x
        .iter()
        .enumerate()
        .map(|(i, x)| integral(x.scale(&coeff), || format!("({coeff})*x_{i}")))
        .collect()
}

/// Every witness with `0 < |α| ≤ alpha_bound`, `0 < |β| ≤ beta_bound`,
/// `0 < b < n`, ordered by `(b, α, β)`.
pub fn search_witnesses(c: &Composition, alpha_bound: i64, beta_bound: i64) -> Result<Vec<Witness>> {
    if alpha_bound < 1 || beta_bound < 1 {
        return Err(Error::BadArgument("search bounds must be at least 1".into()));
    }
    let d = nonzero_discriminant(c)?;
    let nonzero = |bound: i64| (-bound..=bound).filter(|v| *v != 0);
    let mut found = Vec::new();
    for b in 1..c.len() {
        let qb = ipow(c.q(), b).mod_floor(&d.abs());
        for alpha in nonzero(alpha_bound) {
            for beta in nonzero(beta_bound) {
                // Cheap residue filter before building the certified value.
                if divides(&d, &(BigInt::from(alpha) + &qb * beta)) {
                    found.push(Witness::certify(c, alpha.into(), beta.into(), b as i64)?);
                }
            }
        }
    }
    Ok(found)
}

/// `(k, −k·q^{φ(|D|)−1}, 1)`, certified by Euler's theorem.
pub fn canonical_witness(c: &Composition, k: &BigInt) -> Result<Witness> {
    if c.len() == 1 {
        return Err(Error::NoValidB);
    }
    if k.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let d = nonzero_discriminant(c)?;
    if !BigInt::from(c.q()).gcd(&d).is_one() {
        return Err(Error::Internal(format!("gcd(q, D) != 1 for D = {d}")));
    }
    let phi = euler_totient(&d.abs())?;
    let exp = (phi - 1u8)
        .to_usize()
        .ok_or_else(|| Error::BadArgument(format!("totient of {d} is too large to exponentiate")))?;
    let beta = -(k * ipow(c.q(), exp));
    Witness::certify(c, k.clone(), beta, 1).map_err(|e| match e {
        Error::NotCertified { .. } => Error::Internal("Euler witness failed to certify".into()),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::tests::{arb_composition, golden_four_step, golden_seven_step};
    use crate::composition::AffineStep;
    use crate::cycles::solve_cycle;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn w(c: &Composition, a: i64, b_: i64, b: i64) -> Witness {
        Witness::certify(c, big(a), big(b_), b).unwrap()
    }

    fn three_one_one_one() -> Composition {
        Composition::new(2, [3, 1, 1, 1].iter().map(|&p| AffineStep::new(p, 0)).collect()).unwrap()
    }

    #[test]
    fn witness_checks() {
        let c = golden_four_step();
        assert!(is_witness(&c, &big(4), &big(2), 2).unwrap());
        let c = three_one_one_one();
        for b in 1..4 {
            assert!(!is_witness(&c, &big(1), &big(1), b).unwrap());
        }
        assert!(is_witness(&c, &big(9), &big(1), 2).unwrap());
        assert!(matches!(is_witness(&c, &big(9), &big(1), 4), Err(Error::BadB { .. })));
        assert!(matches!(is_witness(&c, &big(9), &big(1), 0), Err(Error::BadB { .. })));
        assert!(matches!(is_witness(&c, &big(0), &big(1), 1), Err(Error::ZeroCoefficient)));
    }

    #[test]
    fn certify_rejects_non_witness() {
        let c = golden_four_step();
        match Witness::certify(&c, big(1), big(1), 1) {
            Err(Error::NotCertified { divisor, value }) => {
                assert_eq!((divisor, value), (big(11), big(4)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lemma1_examples() {
        let c = golden_four_step();
        let t = lemma1_transform(&c, &w(&c, 4, 2, 2)).unwrap();
        assert_eq!(t.triple(), (big(140), big(4), 2));
        assert_eq!(t.certificate(), &big(16));

        let c = golden_seven_step();
        let t = lemma1_transform(&c, &w(&c, 11, -1, 2)).unwrap();
        assert_eq!(t.triple(), (big(-121), big(11), 5));
        assert_eq!(t.certificate(), &big(33));

        let w0 = w(&c, 11, -1, 2);
        let twice = lemma1_transform(&c, &lemma1_transform(&c, &w0).unwrap()).unwrap();
        assert_eq!(twice.triple(), (big(121 * 11), big(-121), 2));
    }

    #[test]
    fn lemma2_examples() {
        let c = golden_four_step();
        let w0 = w(&c, 4, 2, 2);
        assert_eq!(lemma2_shift(&c, &w0, 0).unwrap().0, big(2));
        assert_eq!(lemma2_shift(&c, &w0, 1).unwrap().0, big(6));
        let c = golden_seven_step();
        assert_eq!(lemma2_shift(&c, &w(&c, 1, -1, 3), 0).unwrap().0, big(-1));
        assert_eq!(lemma2_shift(&c, &w(&c, 11, -1, 2), 0).unwrap().0, big(1));
        assert_eq!(lemma2_shift(&c, &w(&c, 121, -1, 1), 0).unwrap().0, big(17));
    }

    #[test]
    fn theorem_tables() {
        let c = golden_four_step();
        let sol = solve_cycle(&c).unwrap();
        let first: Vec<_> = (0..4).map(|i| theorem_combination(&c, &sol, &w(&c, 4, 2, 2), i).unwrap()).collect();
        assert_eq!(first, [-116, 44, 106, 38].map(big));
        let second: Vec<_> = (0..4)
            .map(|i| theorem_combination(&c, &sol, &w(&c, -5, -13, 1), i).unwrap())
            .collect();
        assert_eq!(second, [250, -135, -122, -87].map(big));
        assert_eq!(theorem_combination(&c, &sol, &w(&c, 4, 2, 2), 6).unwrap(), big(106));
    }

    #[test]
    fn integer_cycles_make_everything_integral() {
        let c = Composition::from_word(2, 3, 1, 0, "TTTSSSTSSSS").unwrap();
        let sol = solve_cycle(&c).unwrap();
        assert!(sol.is_integer_cycle());
        // (1, 1, 1) is not a witness here, yet the combination is an integer.
        assert!(!is_witness(&c, &big(1), &big(1), 1).unwrap());
        for i in 0..11 {
            let x = sol.term(i) + &sol.term(i + 1).scale(&big(c.step(i).p));
            assert!(x.is_integer());
        }
    }

    #[test]
    fn decomposition_examples() {
        let c = golden_four_step();
        let sol = solve_cycle(&c).unwrap();
        let rep = decompose_m(&c, &sol, &w(&c, 4, 2, 2), 0).unwrap();
        assert_eq!(rep.combination, big(-116));
        assert_eq!(rep.m.len(), 4);
        assert_eq!(decompose_m(&c, &sol, &w(&c, -5, -13, 1), 2).unwrap().combination, big(-122));
        assert!(matches!(
            decompose_m(&c, &sol, &w(&c, 4, 2, 2), 2),
            Err(Error::WraparoundUnsupported { .. })
        ));
    }

    #[test]
    fn decomposition_terms_by_hand() {
        // i = 0, b = 2 on the four-step cycle: only the first and third cases occur.
        //   M_0 = 1        * (4*U_3 + 2*70*U_1) = (108 + 420)/11 = 48
        //   M_1 = p_0      * (4*U_2 + 2*70*U_0) = -5 * (36 + 140)/11 = -80
        //   M_2 = p_0 p_1  * (4*U_1 + 2*U_3)    = -10 * (12 + 54)/11 = -60
        //   M_3 = p_0..p_2 * (4*U_0 + 2*U_2)    = -70 * (4 + 18)/11 = -140
        let c = golden_four_step();
        let sol = solve_cycle(&c).unwrap();
        let rep = decompose_m(&c, &sol, &w(&c, 4, 2, 2), 0).unwrap();
        assert_eq!(rep.m, [48, -80, -60, -140].map(big));
        // k = (-2, 1, 6, -3): -96 - 80 - 360 + 420 = -116
    }

    #[test]
    fn remark_cases() {
        let c = golden_four_step();
        let sol = solve_cycle(&c).unwrap();
        let vals = remark_edge(&c, &sol, &big(5), &big(6), 0).unwrap();
        assert_eq!(vals[0], big(-69));
        let vals = remark_edge(&c, &sol, &big(1), &big(30), 4).unwrap();
        assert_eq!(vals[0], big(-13179));
        assert!(matches!(remark_edge(&c, &sol, &big(11), &big(0), 0), Err(Error::ZeroCoefficient)));
        assert!(matches!(remark_edge(&c, &sol, &big(1), &big(11), 4), Err(Error::NotCertified { .. })));
        assert!(matches!(remark_edge(&c, &sol, &big(1), &big(1), 2), Err(Error::BadB { .. })));
    }

    #[test]
    fn search_examples() {
        let c = golden_four_step();
        let found: Vec<_> = search_witnesses(&c, 5, 5).unwrap().iter().map(Witness::triple).collect();
        assert!(found.contains(&(big(2), big(1), 2)));
        assert!(found.contains(&(big(4), big(2), 2)));
        let mut sorted = found.clone();
        sorted.sort_by(|x, y| (x.2, &x.0, &x.1).cmp(&(y.2, &y.0, &y.1)));
        assert_eq!(found, sorted);

        assert!(search_witnesses(&three_one_one_one(), 1, 1).unwrap().is_empty());

        let c = golden_seven_step();
        let found: Vec<_> = search_witnesses(&c, 11, 1).unwrap().iter().map(Witness::triple).collect();
        assert!(found.contains(&(big(11), big(-1), 2)));
        assert!(search_witnesses(&c, 0, 1).is_err());
    }

    #[test]
    fn canonical_examples() {
        let c = golden_four_step();
        let w1 = canonical_witness(&c, &big(1)).unwrap();
        assert_eq!(w1.triple(), (big(1), big(-19683), 1));
        assert_eq!(w1.certificate(), &big(-5368));

        let c = golden_seven_step();
        let w1 = canonical_witness(&c, &big(1)).unwrap();
        assert_eq!(w1.triple(), (big(1), big(-32), 1));
        let w2 = canonical_witness(&c, &big(2)).unwrap();
        assert_eq!(w2.triple(), (big(2), big(-64), 1));

        let s = Composition::from_word(2, 3, 1, 0, "S").unwrap();
        assert_eq!(canonical_witness(&s, &big(1)), Err(Error::NoValidB));
        assert_eq!(canonical_witness(&c, &big(0)), Err(Error::ZeroCoefficient));
    }

    #[test]
    fn witness_json() {
        let c = golden_four_step();
        let json = serde_json::to_string(&w(&c, 4, 2, 2)).unwrap();
        assert_eq!(json, r#"{"alpha":"4","beta":"2","b":2,"certificate":{"D":"11","value":"2"}}"#);
    }

    fn brute_window(c: &Composition, a: i64, bb: i64) -> Vec<(BigInt, BigInt, usize)> {
        let d = discriminant(c);
        let mut out = Vec::new();
        for b in 1..c.len() {
            for alpha in -a..=a {
                for beta in -bb..=bb {
                    if alpha == 0 || beta == 0 {
                        continue;
                    }
                    let v = big(alpha) + big(beta) * num_traits::pow(big(c.q()), b);
                    if (&v % &d).is_zero() {
                        out.push((big(alpha), big(beta), b));
                    }
                }
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn witness_properties(c in arb_composition()) {
            prop_assume!(!discriminant(&c).is_zero());
            let sol = solve_cycle(&c).unwrap();
            let n = c.len();
            let found = search_witnesses(&c, 6, 6).unwrap();
            let triples: Vec<_> = found.iter().map(Witness::triple).collect();
            prop_assert_eq!(triples, brute_window(&c, 6, 6));
            for w in found.iter().take(40) {
                prop_assert!(is_witness(&c, w.alpha(), w.beta(), w.b() as i64).unwrap());
                let t = lemma1_transform(&c, w).unwrap();
                prop_assert!(is_witness(&c, t.alpha(), t.beta(), t.b() as i64).unwrap());
                for i in 0..2 * n {
                    let (first, _) = lemma2_shift(&c, w, i).unwrap();
                    let (next, _) = lemma2_shift(&c, w, i + 1).unwrap();
                    prop_assert_eq!(next, first * c.q());
                    let combo = theorem_combination(&c, &sol, w, i as i64).unwrap();
                    if i + w.b() < n {
                        prop_assert_eq!(decompose_m(&c, &sol, w, i as i64).unwrap().combination, combo);
                    }
                }
            }
        }
    }
}
