//! Dedekind sums `s(q, p) = sum_{k=1}^{p-1} ((k/p)) ((kq/p))`.
//!
//! The second argument is always the modulus of the summation. Two
//! independent routes are provided: [`dedekind_sum_direct`] sums the
//! definition term by term, [`dedekind_sum_fast`] runs a Euclidean descent
//! on the reciprocity law. The direct route is the oracle for the fast one.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Mod3Residue, Rational};

/// Coprime argument pair of `s(q, p)`, with modulus `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DedekindPair {
    q: i64,
    p: i64,
}

impl DedekindPair {
    pub fn new(q: i64, p: i64) -> Result<Self> {
        if p < 1 {
            return Err(Error::HypothesisViolated(format!(
                "Dedekind sum modulus must be positive, got p = {p}"
            )));
        }
        if q.gcd(&p) != 1 {
            return Err(Error::NotCoprime(q, p));
        }
        Ok(DedekindPair { q, p })
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn p(&self) -> i64 {
        self.p
    }
}

/// Which evaluation route to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Fast,
}

/// The sawtooth `((x))`: zero on integers, `x - floor(x) - 1/2` elsewhere.
pub fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        return Rational::zero();
    }
    let frac = x - Rational::from_integer(x.floor());
    frac - Rational::new(1, 2).expect("nonzero")
}

/// `2p * ((a/p))` as an integer.
fn doubled_sawtooth(a: i128, p: i128) -> i128 {
    let r = a.rem_euclid(p);
    if r == 0 {
        0
    } else {
        2 * r - p
    }
}

/// Term-by-term evaluation of the defining sum. Theta(p).
///
/// Each factor `((x/p))` is an integer over `2p`, so the sum is
/// accumulated exactly over the common denominator `4p^2` and reduced once.
pub fn dedekind_sum_direct(pair: DedekindPair) -> Rational {
    let p = pair.p as i128;
    let q = pair.q as i128;
    let mut small: i128 = 0;
    let mut spill = BigInt::from(0);
    for k in 1..p {
        let term = doubled_sawtooth(k, p) * doubled_sawtooth(k * q.rem_euclid(p), p);
        match small.checked_add(term) {
            Some(v) => small = v,
            None => {
                spill += small;
                small = term;
            }
        }
    }
    spill += small;
    Rational::new(spill, BigInt::from(4) * p * p).expect("p >= 1")
}

/// Evaluation through `s(q,p) = -s(p,q) + R(p,q)` and periodicity, where
/// `R(p,q) = -1/4 + (p/q + q/p + 1/(pq))/12`. O(log p) steps.
pub fn dedekind_sum_fast(pair: DedekindPair) -> Rational {
    let mut p = pair.p as i128;
    let mut q = (pair.q as i128).rem_euclid(p);
    let mut acc = Rational::zero();
    let mut positive = true;
    // s(0, 1) = 0 terminates the descent.
    while p > 1 {
        let term = reciprocity_rhs_combined(p, q);
        if positive {
            acc += term;
        } else {
            acc -= term;
        }
        positive = !positive;
        (p, q) = (q, p.rem_euclid(q));
    }
    acc
}

/// `R(p,q) = (p^2 + q^2 + 1 - 3pq) / (12pq)`.
fn reciprocity_rhs_combined(p: i128, q: i128) -> Rational {
    let (p, q) = (BigInt::from(p), BigInt::from(q));
    let num = &p * &p + &q * &q + 1 - BigInt::from(3) * &p * &q;
    Rational::new(num, BigInt::from(12) * p * q).expect("p, q >= 1")
}

pub fn dedekind_sum(pair: DedekindPair, method: Method) -> Rational {
    match method {
        Method::Direct => dedekind_sum_direct(pair),
        Method::Fast => dedekind_sum_fast(pair),
    }
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

/// `-1/4 + (1/12)(p/q + q/p + 1/(pq))`, assembled from its separate terms.
pub fn reciprocity_rhs(p: i64, q: i64) -> Rational {
    let inv_pq = Rational::new(1, BigInt::from(p) * q).expect("p, q >= 1");
    let bracket = frac(p, q) + frac(q, p) + inv_pq;
    frac(-1, 4) + frac(1, 12) * bracket
}

/// `s(p,q) + s(q,p)` minus the reciprocity right-hand side.
///
/// Both sums go through the direct route so that the check does not rely on
/// the law it is checking. Always zero.
pub fn reciprocity_residual(p: i64, q: i64) -> Result<Rational> {
    check_positive(p, q)?;
    let s_pq = dedekind_sum_direct(DedekindPair::new(p, q)?);
    let s_qp = dedekind_sum_direct(DedekindPair::new(q, p)?);
    Ok(s_pq + s_qp - reciprocity_rhs(p, q))
}

fn check_positive(p: i64, q: i64) -> Result<()> {
    if p < 1 || q < 1 {
        return Err(Error::HypothesisViolated(format!(
            "p and q must be positive, got p = {p}, q = {q}"
        )));
    }
    Ok(())
}

/// Both sides of
/// `12s(m,1) - m + 12s(p,q) - p/q = -m - 12s(q,p) + q/p + 1/(pq) - 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RearrangedTerm {
    pub lhs: Rational,
    pub rhs: Rational,
}

pub fn rearranged_dedekind_sides(m: i64, p: i64, q: i64) -> Result<RearrangedTerm> {
    check_positive(p, q)?;
    let s_m1 = dedekind_sum_direct(DedekindPair::new(m, 1)?);
    let s_pq = dedekind_sum_direct(DedekindPair::new(p, q)?);
    let s_qp = dedekind_sum_direct(DedekindPair::new(q, p)?);
    let m = Rational::from(m);
    let inv_pq = Rational::new(1, BigInt::from(p) * q).expect("p, q >= 1");

    let lhs = s_m1.mul_int(12) - &m + s_pq.mul_int(12) - frac(p, q);
    let rhs = -m - s_qp.mul_int(12) + frac(q, p) + inv_pq - Rational::from(3);
    Ok(RearrangedTerm { lhs, rhs })
}

/// The common value of both sides of the rearranged reciprocity identity.
/// Fails with `IdentityViolated` if the sides disagree.
pub fn rearranged_dedekind_term(m: i64, p: i64, q: i64) -> Result<Rational> {
    let RearrangedTerm { lhs, rhs } = rearranged_dedekind_sides(m, p, q)?;
    if lhs != rhs {
        return Err(Error::IdentityViolated(format!(
            "rearranged reciprocity at (m={m}, p={p}, q={q}): {lhs} != {rhs}"
        )));
    }
    Ok(lhs)
}

/// `6p * s(q,p)`, which is always an integer.
pub fn six_p_s(pair: DedekindPair) -> Result<BigInt> {
    let v = dedekind_sum_fast(pair).mul_int(6).mul_int(pair.p);
    v.to_integer()
        .ok_or_else(|| Error::NonIntegral(v.to_string()))
}

/// Whether `p = 9 p0` with `p0` not divisible by 3.
pub fn is_nine_p0(p: i64) -> bool {
    p > 0 && p % 9 == 0 && (p / 9) % 3 != 0
}

/// Checks `6p s(q,p) = q (mod 3)` on its stated domain: `p = 9 p0` with
/// `3 ∤ p0`, `q > 0`, `3 ∤ q`, `gcd(p, q) = 1`.
pub fn six_ps_mod3_fact(p: i64, q: i64) -> Result<bool> {
    if !is_nine_p0(p) {
        return Err(Error::HypothesisViolated(format!(
            "p = {p} is not of the form 9*p0 with p0 not divisible by 3"
        )));
    }
    if q < 1 || q % 3 == 0 {
        return Err(Error::HypothesisViolated(format!(
            "q = {q} must be positive and not divisible by 3"
        )));
    }
    let v = six_p_s(DedekindPair::new(q, p)?)?;
    Ok(Mod3Residue::of_bigint(&v) == Mod3Residue::of_i64(q))
}

/// Classes of moduli used when probing `6p s(q,p) = q (mod 3)` beyond
/// the domain where it is claimed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusClass {
    /// `9 | p`, `27 ∤ p`.
    NineP0,
    /// `3 | p`, `9 ∤ p`.
    ExactlyThree,
    /// `27 | p`.
    TwentySeven,
    /// `3 ∤ p`.
    CoprimeToThree,
}

impl ModulusClass {
    pub fn of(p: i64) -> Self {
        if p % 27 == 0 {
            ModulusClass::TwentySeven
        } else if p % 9 == 0 {
            ModulusClass::NineP0
        } else if p % 3 == 0 {
            ModulusClass::ExactlyThree
        } else {
            ModulusClass::CoprimeToThree
        }
    }
}

/// Tally of the congruence over one modulus class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceSurvey {
    pub class: ModulusClass,
    pub pairs_checked: u64,
    pub counterexamples: u64,
    /// First few `(q, p)` where the congruence fails.
    pub first_counterexamples: Vec<(i64, i64)>,
}

/// Counts pairs `0 < q < p <= p_max`, `gcd(p,q) = 1`, `3 ∤ q`, where
/// `6p s(q,p) = q (mod 3)` fails, grouped by [`ModulusClass`]. Reports what
/// is observed; only the `NineP0` class carries a claim.
pub fn survey_six_ps_mod3(p_max: i64) -> Vec<CongruenceSurvey> {
    use std::collections::BTreeMap;
    let mut by_class: BTreeMap<ModulusClass, CongruenceSurvey> = BTreeMap::new();
    for p in 2..=p_max {
        let class = ModulusClass::of(p);
        let entry = by_class.entry(class).or_insert_with(|| CongruenceSurvey {
            class,
            pairs_checked: 0,
            counterexamples: 0,
            first_counterexamples: Vec::new(),
        });
        for q in (1..p).filter(|q| q % 3 != 0 && q.gcd(&p) == 1) {
            let pair = DedekindPair::new(q, p).expect("coprime by construction");
            let v = six_p_s(pair).expect("6p s(q,p) is integral");
            entry.pairs_checked += 1;
            if Mod3Residue::of_bigint(&v) != Mod3Residue::of_i64(q) {
                entry.counterexamples += 1;
                if entry.first_counterexamples.len() < 5 {
                    entry.first_counterexamples.push((q, p));
                }
            }
        }
    }
    by_class.into_values().collect()
}
