//! Casson–Walker invariant of surgeries, under an explicit normalization.
//!
//! Two conventions are in circulation: Walker's, with `λ(P) = 1` on the
//! Poincaré sphere, and the doubled one with `λ(P) = 2` that the
//! two-component link surgery formula is written in. Every function that
//! produces or consumes `λ` takes a [`Normalization`] argument; there is no
//! global default.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::dedekind::{dedekind_sum_fast, DedekindPair};
use crate::error::{Error, Result};
use crate::numerics::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `λ(P) = 1`: `λ(S³_{p/q}(K)) = (q/p) a₂(K) - s(q,p)/2`.
    WalkerP1,
    /// `λ(P) = 2`: twice the Walker value.
    PaperP2,
}

impl Normalization {
    pub const ALL: [Normalization; 2] = [Normalization::WalkerP1, Normalization::PaperP2];

    /// `λ(P)` under this convention.
    pub fn poincare_value(self) -> i64 {
        match self {
            Normalization::WalkerP1 => 1,
            Normalization::PaperP2 => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::WalkerP1 => "walker_p1",
            Normalization::PaperP2 => "paper_p2",
        }
    }
}

fn require_surgery_coefficient(p: i64, q: i64) -> Result<()> {
    if p < 1 || q < 1 {
        return Err(Error::HypothesisViolated(format!(
            "surgery coefficient p/q needs p, q > 0, got p = {p}, q = {q}"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime(p, q));
    }
    Ok(())
}

/// `p/q` surgery on a knot with second Conway coefficient `a2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurgeryOnKnot {
    a2: i64,
    p: i64,
    q: i64,
}

impl SurgeryOnKnot {
    pub fn new(a2: i64, p: i64, q: i64) -> Result<Self> {
        require_surgery_coefficient(p, q)?;
        Ok(SurgeryOnKnot { a2, p, q })
    }

    pub fn a2(&self) -> i64 {
        self.a2
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

/// `λ(S³_{p/q}(K))` under normalization `n`.
pub fn lambda_knot_surgery(s: SurgeryOnKnot, n: Normalization) -> Rational {
    let pair = DedekindPair::new(s.q, s.p).expect("coprime by construction");
    let half = Rational::new(1, 2).expect("nonzero");
    let walker =
        Rational::new(s.q, s.p).expect("p > 0").mul_int(s.a2) - half * dedekind_sum_fast(pair);
    walker.mul_int(n.poincare_value())
}

/// `λ(-M) = -λ(M)`.
pub fn lambda_orientation_reverse(v: &Rational) -> Rational {
    -v
}

/// Signature of the symmetric matrix `[[m, ell], [ell, p/q]]`, computed
/// from the signs of its determinant and trace.
pub fn linking_matrix_signature(m: i64, ell: i64, p: i64, q: i64) -> Result<i8> {
    require_surgery_coefficient(p, q)?;
    let p_over_q = Rational::new(p, q)?;
    let det = p_over_q.mul_int(m) - Rational::from_integer(BigInt::from(ell) * ell);
    if det.is_zero() {
        return Err(Error::DegenerateMatrix);
    }
    if det.is_negative() {
        return Ok(0);
    }
    // Definite: both eigenvalues share the sign of the trace, which is
    // nonzero because det > 0.
    let trace = p_over_q + Rational::from(m);
    Ok(if trace.is_positive() { 2 } else { -2 })
}

/// `2v₃(L) = -a₃(L) + (a₂(K_x) + a₂(K_y)) ℓ + (ℓ³ - ℓ)/12`.
///
/// Fails with `NonHalfInteger` when the result is not in `(1/2)Z`, which
/// means the inputs cannot come from an actual link.
pub fn two_v3_from_a3(a3: &Rational, a2x: i64, a2y: i64, ell: i64) -> Result<Rational> {
    let ell_big = BigInt::from(ell);
    let cubic = Rational::new(&ell_big * &ell_big * &ell_big - &ell_big, 12)?;
    let linear = Rational::from_integer(BigInt::from(a2x) + a2y).mul_int(ell);
    let v = -a3 + linear + cubic;
    if !v.mul_int(2).is_integer() {
        return Err(Error::NonHalfInteger(v.to_string()));
    }
    Ok(v)
}

/// Framing data of a two-component link `L = K_x ∪ K_y`: integral
/// framing `m` on `K_x`, rational framing `p/q` on `K_y`, linking number
/// `ell`, and the second Conway coefficients of both components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkFraming {
    pub m: i64,
    pub ell: i64,
    pub p: i64,
    pub q: i64,
    pub a2x: i64,
    pub a2y: i64,
}

impl LinkFraming {
    pub fn new(m: i64, ell: i64, p: i64, q: i64, a2x: i64, a2y: i64) -> Result<Self> {
        require_surgery_coefficient(p, q)?;
        Ok(LinkFraming {
            m,
            ell,
            p,
            q,
            a2x,
            a2y,
        })
    }

    /// `mp - q ell^2`.
    pub fn homology_order(&self) -> BigInt {
        BigInt::from(self.m) * self.p - BigInt::from(self.q) * self.ell * self.ell
    }
}

/// A framed two-component link together with its integer invariant `4v₃(L)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FramedLink2 {
    pub framing: LinkFraming,
    pub four_v3: i64,
}

/// The two sides of the link surgery formula with the `2v₃` term split off
/// from the right:
///
/// ```text
/// lhs = ((mp - q ell^2)/q) (λ(S³_L)/2 - σ/8)
/// rhs_without_v3 = (p/q) a₂x - p/(12q) + p ell^2/(24q) + m a₂y - m/24
///     - m/(24q^2) + m ell^2/24
///     + ((mp - q ell^2)/(24q)) (12 s(m,1) - m + 12 s(p,q) - p/q)
/// ```
///
/// so that the identity reads `lhs = rhs_without_v3 + 2v₃`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkIdentitySides {
    pub lhs: Rational,
    pub rhs_without_v3: Rational,
    pub signature: i8,
}

pub fn link_identity_sides(l: &LinkFraming, lambda_sl: &Rational) -> Result<LinkIdentitySides> {
    let LinkFraming {
        m,
        ell,
        p,
        q,
        a2x,
        a2y,
    } = *l;
    let signature = linking_matrix_signature(m, ell, p, q)?;

    let r = |n: BigInt, d: BigInt| Rational::new(n, d).expect("q > 0");
    let (mb, pb, qb) = (BigInt::from(m), BigInt::from(p), BigInt::from(q));
    let ell_sq = BigInt::from(ell) * ell;
    let order_over_q = r(l.homology_order(), qb.clone());

    let half = Rational::new(1, 2)?;
    let lhs = &order_over_q * (lambda_sl * &half - Rational::new(signature, 8)?);

    // s(m, 1) is the empty sum.
    let s_m1 = Rational::zero();
    let s_pq = dedekind_sum_fast(DedekindPair::new(p, q)?);
    let bracket =
        s_m1.mul_int(12) - Rational::from(m) + s_pq.mul_int(12) - r(pb.clone(), qb.clone());

    let rhs_without_v3 = r(&pb * a2x, qb.clone()) - r(pb.clone(), 12 * &qb)
        + r(&pb * &ell_sq, 24 * &qb)
        + Rational::from_integer(&mb * a2y)
        - r(mb.clone(), BigInt::from(24))
        - r(mb.clone(), 24 * &qb * &qb)
        + r(&mb * &ell_sq, BigInt::from(24))
        + order_over_q * Rational::new(1, 24)? * bracket;

    Ok(LinkIdentitySides {
        lhs,
        rhs_without_v3,
        signature,
    })
}

/// `LHS - RHS` of the link surgery formula with `2v₃ = four_v3 / 2`.
/// Zero exactly when `lambda_sl` is consistent with the link data.
pub fn link_identity_residual(l: &FramedLink2, lambda_sl: &Rational) -> Result<Rational> {
    let sides = link_identity_sides(&l.framing, lambda_sl)?;
    let two_v3 = Rational::new(l.four_v3, 2)?;
    Ok(sides.lhs - sides.rhs_without_v3 - two_v3)
}

/// `λ(S³_L) = λ(-M) = -λ(M)` for `M = S³_{p/q}(K_y)`.
pub fn lambda_of_surgered_link(a2y: i64, p: i64, q: i64, n: Normalization) -> Result<Rational> {
    let m = lambda_knot_surgery(SurgeryOnKnot::new(a2y, p, q)?, n);
    Ok(lambda_orientation_reverse(&m))
}

/// Solves the link surgery formula for `4v₃(L)`, with `λ(S³_L)` taken to be
/// `-λ(M)` for `M` the `p/q` surgery on a knot with `a₂ = knot_a2y_for_lambda`,
/// evaluated under `n`. The `2v₃` term has coefficient 1, so the solution is
/// unique; it need not be an integer.
pub fn solve_four_v3(
    l: &LinkFraming,
    n: Normalization,
    knot_a2y_for_lambda: i64,
) -> Result<Rational> {
    let lambda_sl = lambda_of_surgered_link(knot_a2y_for_lambda, l.p, l.q, n)?;
    let sides = link_identity_sides(l, &lambda_sl)?;
    Ok((sides.lhs - sides.rhs_without_v3).mul_int(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dedekind::rearranged_dedekind_term;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn knot(a2: i64, p: i64, q: i64) -> SurgeryOnKnot {
        SurgeryOnKnot::new(a2, p, q).unwrap()
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(
            lambda_knot_surgery(knot(0, 1, 1), Normalization::WalkerP1),
            Rational::zero()
        );
        assert_eq!(
            lambda_knot_surgery(knot(0, 9, 1), Normalization::PaperP2),
            r(-14, 27)
        );
        assert_eq!(
            lambda_knot_surgery(knot(1, 1, 1), Normalization::WalkerP1),
            r(1, 1)
        );
    }

    #[test]
    fn reversal() {
        assert_eq!(
            lambda_orientation_reverse(&Rational::zero()),
            Rational::zero()
        );
        assert_eq!(lambda_orientation_reverse(&r(-14, 27)), r(14, 27));
        assert_eq!(lambda_orientation_reverse(&r(5, 3)), r(-5, 3));
    }

    #[test]
    fn surgery_validation() {
        assert_eq!(SurgeryOnKnot::new(0, 4, 2), Err(Error::NotCoprime(4, 2)));
        assert!(matches!(
            SurgeryOnKnot::new(0, -9, 1),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            SurgeryOnKnot::new(0, 9, 0),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(linking_matrix_signature(2, 3, 9, 1).unwrap(), 2);
        assert_eq!(linking_matrix_signature(0, 3, 9, 1).unwrap(), 0);
        assert_eq!(
            linking_matrix_signature(0, 0, 9, 1),
            Err(Error::DegenerateMatrix)
        );
        assert_eq!(linking_matrix_signature(-2, 3, 9, 1).unwrap(), 0);
        assert_eq!(linking_matrix_signature(-2, 0, 9, 1).unwrap(), 0);
        // Both diagonal entries negative is impossible with p/q > 0; det > 0
        // then forces m > 0.
        assert_eq!(linking_matrix_signature(1, 0, 1, 1).unwrap(), 2);
    }

    #[test]
    fn two_v3_examples() {
        assert_eq!(
            two_v3_from_a3(&Rational::zero(), 0, 0, 0).unwrap(),
            Rational::zero()
        );
        assert_eq!(
            two_v3_from_a3(&Rational::zero(), 0, 0, 1).unwrap(),
            Rational::zero()
        );
        assert_eq!(two_v3_from_a3(&Rational::zero(), 1, 0, 2).unwrap(), r(5, 2));
        assert!(matches!(
            two_v3_from_a3(&r(1, 3), 0, 0, 0),
            Err(Error::NonHalfInteger(_))
        ));
    }

    #[test]
    fn residual_vanishes_at_solved_lambda() {
        // lhs is affine in λ with slope (mp - q ell^2)/(2q); pick λ to zero it.
        // (0, 0, 1, 1) has a singular linking matrix; m = 1 is the nearest
        // nondegenerate framing.
        let framing = LinkFraming::new(1, 0, 1, 1, 0, 0).unwrap();
        let link = FramedLink2 {
            framing,
            four_v3: 0,
        };
        let at_zero = link_identity_residual(&link, &Rational::zero()).unwrap();
        let slope = Rational::from_integer(framing.homology_order()) * r(1, 2 * framing.q);
        let lambda = -(at_zero.checked_div(&slope).unwrap());
        assert_eq!(
            link_identity_residual(&link, &lambda).unwrap(),
            Rational::zero()
        );
    }

    #[test]
    fn residual_is_affine_in_four_v3() {
        let framing = LinkFraming::new(2, 3, 9, 1, 0, 0).unwrap();
        let lambda = r(14, 27);
        let res = |v| {
            link_identity_residual(
                &FramedLink2 {
                    framing,
                    four_v3: v,
                },
                &lambda,
            )
            .unwrap()
        };
        let (r0, r1, r2) = (res(0), res(1), res(2));
        assert_eq!(&r1 - &r0, r(-1, 2));
        assert_eq!(&r2 - &r1, r(-1, 2));
    }

    #[test]
    fn solved_fixtures() {
        // Frozen from an independent Fraction-based evaluation.
        let allowed = LinkFraming::new(2, 3, 9, 1, 0, 0).unwrap();
        let v = solve_four_v3(&allowed, Normalization::PaperP2, 0).unwrap();
        assert_eq!(v, r(2, 1));
        let ruled_out = LinkFraming::new(0, 3, 9, 1, 0, 0).unwrap();
        let w = solve_four_v3(&ruled_out, Normalization::PaperP2, 0).unwrap();
        assert_eq!(w, r(-50, 3));
        let erroneous = solve_four_v3(&allowed, Normalization::WalkerP1, 0).unwrap();
        assert_eq!(erroneous, r(-1, 3));
        let erroneous = solve_four_v3(&ruled_out, Normalization::WalkerP1, 0).unwrap();
        assert_eq!(erroneous, r(-43, 3));
    }

    #[test]
    fn plug_back_at_integral_solution() {
        let framing = LinkFraming::new(5, 6, 9, 1, 2, -1).unwrap();
        let v = solve_four_v3(&framing, Normalization::PaperP2, framing.a2y).unwrap();
        let lambda = lambda_of_surgered_link(framing.a2y, 9, 1, Normalization::PaperP2).unwrap();
        if let Some(iv) = v.to_i64() {
            let link = FramedLink2 {
                framing,
                four_v3: iv,
            };
            assert_eq!(
                link_identity_residual(&link, &lambda).unwrap(),
                Rational::zero()
            );
        }
        // The affine residual vanishes at the rational solution regardless.
        let sides = link_identity_sides(&framing, &lambda).unwrap();
        assert_eq!(
            sides.lhs - sides.rhs_without_v3 - v * r(1, 2),
            Rational::zero()
        );
    }

    #[test]
    fn lens_space_antisymmetry() {
        for p in 2..=50 {
            for q in (1..p).filter(|q| q.gcd(&p) == 1) {
                let a = lambda_knot_surgery(knot(0, p, q), Normalization::WalkerP1);
                let b = lambda_knot_surgery(knot(0, p, p - q), Normalization::WalkerP1);
                assert_eq!(a, -b, "L({p},{q})");
            }
        }
    }

    #[test]
    fn signature_epsilon_law_small_sweep() {
        for p in 1..=20 {
            for q in (1..=20).filter(|q| q.gcd(&p) == 1) {
                for m in -30..=30 {
                    for ell in -10..=10 {
                        let order = m * p - q * ell * ell;
                        if order == p || order == -p {
                            let eps = order / p;
                            assert_eq!(
                                linking_matrix_signature(m, ell, p, q).unwrap() as i64,
                                1 + eps
                            );
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn p2_is_twice_p1(a2 in -1000i64..1000, p in 1i64..5000, q in 1i64..5000) {
            prop_assume!(p.gcd(&q) == 1);
            let k = knot(a2, p, q);
            prop_assert_eq!(
                lambda_knot_surgery(k, Normalization::PaperP2),
                lambda_knot_surgery(k, Normalization::WalkerP1).mul_int(2)
            );
        }

        #[test]
        fn solved_value_zeroes_residual(
            m in -60i64..60, ell in -40i64..40, p in 1i64..200, q in 1i64..50,
            a2x in -5i64..5, a2y in -5i64..5,
        ) {
            prop_assume!(p.gcd(&q) == 1);
            prop_assume!(BigInt::from(m) * p != BigInt::from(q) * ell * ell);
            let framing = LinkFraming::new(m, ell, p, q, a2x, a2y).unwrap();
            for n in Normalization::ALL {
                let v = solve_four_v3(&framing, n, a2y).unwrap();
                let lambda = lambda_of_surgered_link(a2y, p, q, n).unwrap();
                let sides = link_identity_sides(&framing, &lambda).unwrap();
                prop_assert_eq!(sides.lhs - sides.rhs_without_v3 - v * r(1, 2), Rational::zero());
            }
            // The bracket in the formula matches its rearranged form.
            let bracket = Rational::from(-m)
                + dedekind_sum_fast(DedekindPair::new(p, q).unwrap()).mul_int(12)
                - r(p, q);
            prop_assert_eq!(bracket, rearranged_dedekind_term(m, p, q).unwrap());
        }
    }
}
