//! Chirally cosmetic banding verdicts for knots.
//!
//! A chirally cosmetic banding of `K` gives a distance-one surgery between
//! `Σ₂(K)` and `-Σ₂(K)`. The obstruction checked here rules that out when
//! `det(K) = 9d` with `3 ∤ d`, `σ(K) ∉ {0, ±4}`, `K` is quasi-alternating
//! and `Σ₂(K)` is surgery on a knot. Since the mod-3 argument behind the
//! non-null-homologous case no longer closes, every verdict carries a second,
//! post-correction status that is never conclusive.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Rational;
use crate::obstruction::{theorem2_status, CONSTRAINT};

/// Signature convention of [`torus_2k_invariants`].
pub const SIGNATURE_CONVENTION: &str = "right-handed T(2,k), sigma = -(k-1)";

/// Search bound used when listing surviving surgeries in verdict notes.
const SURVIVOR_SEARCH_BOUND: i64 = 30;

/// `Σ₂(K)` presented as `p/q` surgery on a knot with the given `a₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverSurgery {
    pub p: i64,
    pub q: i64,
    pub a2_of_core_knot: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotDescriptor {
    pub name: String,
    pub determinant: i64,
    pub signature: i64,
    pub a2: i64,
    pub quasi_alternating: bool,
    #[serde(default)]
    pub branched_cover_surgery: Option<CoverSurgery>,
}

impl KnotDescriptor {
    pub fn validate(&self) -> Result<()> {
        if self.determinant < 1 || self.determinant % 2 == 0 {
            return Err(Error::HypothesisViolated(format!(
                "knot determinant must be odd and positive, got {}",
                self.determinant
            )));
        }
        if let Some(c) = self.branched_cover_surgery {
            if c.p < 1 || c.q < 1 {
                return Err(Error::HypothesisViolated(format!(
                    "cover surgery needs p, q > 0, got {}/{}",
                    c.p, c.q
                )));
            }
            if c.p.gcd(&c.q) != 1 {
                return Err(Error::NotCoprime(c.p, c.q));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PreErratum {
    NoBanding,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PostErratum {
    /// Hypotheses hold, but the mod-3 step they relied on does not close.
    InconclusiveErratum,
    /// Hypotheses fail, so the obstruction never applied.
    InconclusiveHypotheses,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandingVerdict {
    pub pre_erratum: PreErratum,
    pub post_erratum: PostErratum,
    pub surviving_constraint: Option<String>,
    pub notes: Vec<String>,
}

/// Invariants of the `(2, k)` torus knot.
pub fn torus_2k_invariants(k: i64) -> Result<KnotDescriptor> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::InvalidTorusParameter(k));
    }
    Ok(KnotDescriptor {
        name: format!("T(2,{k})"),
        determinant: k,
        signature: -(k - 1),
        a2: (k * k - 1) / 8,
        quasi_alternating: true,
        // Σ₂(T(2,k)) = L(k,1), k-surgery on the unknot.
        branched_cover_surgery: Some(CoverSurgery {
            p: k,
            q: 1,
            a2_of_core_knot: 0,
        }),
    })
}

/// Whether `d ∈ {0, ±1}`, i.e. a null-homologous distance-one surgery from
/// `Y` to `-Y` is not excluded by the d-invariant condition.
pub fn mv_d_filter(d: &Rational) -> bool {
    d.is_zero() || d.abs() == Rational::one()
}

/// `d = scale * σ`; see [`default_d_scale`] and [`literal_d_scale`].
pub fn signature_to_d(sigma: i64, convention_scale: &Rational) -> Rational {
    convention_scale.mul_int(sigma)
}

/// `d = σ/4`, under which `σ ∉ {0, ±4}` is exactly `d ∉ {0, ±1}`.
pub fn default_d_scale() -> Rational {
    Rational::new(1, 4).expect("nonzero")
}

/// `d = 4σ`. Under this scale the thresholds `σ ∉ {0, ±4}` no longer line
/// up with `d ∉ {0, ±1}`; kept for comparison.
pub fn literal_d_scale() -> Rational {
    Rational::from(4)
}

/// Literature facts attached to specific knots.
fn known_results(name: &str) -> Vec<String> {
    match name {
        "T(2,5)" => vec!["chirally cosmetic banding of T(2,5) is known".to_owned()],
        "T(2,9)" => vec![
            "T(2,9) is the case this obstruction was aimed at; without the mod-3 step it stays open on this route"
                .to_owned(),
        ],
        _ => Vec::new(),
    }
}

pub fn corollary_verdict(k: &KnotDescriptor) -> Result<BandingVerdict> {
    corollary_verdict_with_scale(k, &default_d_scale())
}

pub fn corollary_verdict_with_scale(
    k: &KnotDescriptor,
    convention_scale: &Rational,
) -> Result<BandingVerdict> {
    k.validate()?;
    let mut notes = known_results(&k.name);

    let det_ok = k.determinant % 9 == 0 && (k.determinant / 9) % 3 != 0;
    let sig_ok = ![0, 4, -4].contains(&k.signature);
    if !det_ok {
        notes.push(format!(
            "det = {} is not 9d with d not divisible by 3",
            k.determinant
        ));
    }
    if !sig_ok {
        notes.push(format!("signature {} lies in {{0, +-4}}", k.signature));
    }
    if !k.quasi_alternating {
        notes.push(
            "knot not asserted quasi-alternating; d = scale * sigma does not apply".to_owned(),
        );
    }

    let d = signature_to_d(k.signature, convention_scale);
    let passes = mv_d_filter(&d);

    if !(det_ok && sig_ok && k.quasi_alternating) {
        notes.push(format!(
            "null-homologous branch: d = {d} {} the d-invariant filter",
            if passes { "passes" } else { "fails" }
        ));
        return Ok(BandingVerdict {
            pre_erratum: PreErratum::Inconclusive,
            post_erratum: PostErratum::InconclusiveHypotheses,
            surviving_constraint: None,
            notes,
        });
    }

    let cover = k
        .branched_cover_surgery
        .ok_or_else(|| Error::MissingCoverData(k.name.clone()))?;
    if cover.p != k.determinant {
        return Err(Error::HypothesisViolated(format!(
            "cover surgery p = {} differs from det = {}",
            cover.p, k.determinant
        )));
    }

    if passes {
        notes.push(format!(
            "null-homologous branch: d = {d} passes the d-invariant filter under scale {convention_scale}"
        ));
    } else {
        notes.push(format!(
            "null-homologous branch excluded: d = {d} not in {{0, +-1}}"
        ));
    }

    let status = theorem2_status(cover.p, cover.q, SURVIVOR_SEARCH_BOUND)?;
    notes.push(format!(
        "non-null-homologous branch: {} of {} admissible surgeries with |m|, ell <= {} survive the corrected congruence",
        status.corrected.allowed.len(),
        status.erroneous.scenarios_checked,
        SURVIVOR_SEARCH_BOUND
    ));

    Ok(BandingVerdict {
        // Pre-correction, both branches were closed only if the d filter
        // excluded the null-homologous one.
        pre_erratum: if passes {
            PreErratum::Inconclusive
        } else {
            PreErratum::NoBanding
        },
        post_erratum: PostErratum::InconclusiveErratum,
        surviving_constraint: Some(format!("{CONSTRAINT} with p/q = {}/{}", cover.p, cover.q)),
        notes,
    })
}

/// One row of the `T(2,k)` table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusRow {
    pub k: i64,
    pub determinant: i64,
    pub signature: i64,
    pub pre_erratum: PreErratum,
    pub post_erratum: PostErratum,
    pub constraint: Option<String>,
    pub notes: Vec<String>,
}

/// Verdicts for `T(2,k)`, odd `3 <= k <= k_max`, in increasing `k`.
pub fn torus_banding_table(k_max: i64) -> Result<Vec<TorusRow>> {
    (3..=k_max)
        .step_by(2)
        .map(|k| {
            let knot = torus_2k_invariants(k)?;
            let v = corollary_verdict(&knot)?;
            Ok(TorusRow {
                k,
                determinant: knot.determinant,
                signature: knot.signature,
                pre_erratum: v.pre_erratum,
                post_erratum: v.post_erratum,
                constraint: v.surviving_constraint,
                notes: v.notes,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn torus_invariants() {
        let t3 = torus_2k_invariants(3).unwrap();
        assert_eq!((t3.determinant, t3.signature, t3.a2), (3, -2, 1));
        let t5 = torus_2k_invariants(5).unwrap();
        assert_eq!((t5.determinant, t5.signature, t5.a2), (5, -4, 3));
        let t9 = torus_2k_invariants(9).unwrap();
        assert_eq!((t9.determinant, t9.signature, t9.a2), (9, -8, 10));
        assert_eq!(
            t9.branched_cover_surgery,
            Some(CoverSurgery {
                p: 9,
                q: 1,
                a2_of_core_knot: 0
            })
        );
        assert_eq!(torus_2k_invariants(4), Err(Error::InvalidTorusParameter(4)));
        assert_eq!(torus_2k_invariants(1), Err(Error::InvalidTorusParameter(1)));
    }

    #[test]
    fn d_filter() {
        assert!(mv_d_filter(&Rational::zero()));
        assert!(mv_d_filter(&r(-1, 1)));
        assert!(mv_d_filter(&r(1, 1)));
        assert!(!mv_d_filter(&r(-2, 1)));
        assert!(!mv_d_filter(&r(1, 2)));
    }

    #[test]
    fn signature_scales() {
        assert_eq!(signature_to_d(-8, &default_d_scale()), r(-2, 1));
        assert_eq!(signature_to_d(0, &literal_d_scale()), Rational::zero());
        assert_eq!(signature_to_d(-4, &default_d_scale()), r(-1, 1));
        assert_eq!(signature_to_d(-4, &literal_d_scale()), r(-16, 1));
    }

    #[test]
    fn verdict_t29() {
        let v = corollary_verdict(&torus_2k_invariants(9).unwrap()).unwrap();
        assert_eq!(v.pre_erratum, PreErratum::NoBanding);
        assert_eq!(v.post_erratum, PostErratum::InconclusiveErratum);
        assert_eq!(
            v.surviving_constraint.as_deref(),
            Some("eps*q ≡ ell0 (mod 3) with p/q = 9/1")
        );
        assert!(v
            .notes
            .iter()
            .any(|n| n.contains("null-homologous branch excluded")));
    }

    #[test]
    fn verdict_t25_and_t23() {
        let v = corollary_verdict(&torus_2k_invariants(5).unwrap()).unwrap();
        assert_eq!(v.pre_erratum, PreErratum::Inconclusive);
        assert_eq!(v.post_erratum, PostErratum::InconclusiveHypotheses);
        assert!(v.notes.iter().any(|n| n.contains("T(2,5) is known")));
        let v = corollary_verdict(&torus_2k_invariants(3).unwrap()).unwrap();
        assert_eq!(v.pre_erratum, PreErratum::Inconclusive);
    }

    #[test]
    fn missing_cover_data() {
        let mut k = torus_2k_invariants(9).unwrap();
        k.branched_cover_surgery = None;
        assert_eq!(
            corollary_verdict(&k),
            Err(Error::MissingCoverData("T(2,9)".into()))
        );
        // Failing hypotheses take priority over missing cover data.
        let mut k = torus_2k_invariants(5).unwrap();
        k.branched_cover_surgery = None;
        assert!(corollary_verdict(&k).is_ok());
    }

    #[test]
    fn not_quasi_alternating_is_inconclusive() {
        let mut k = torus_2k_invariants(9).unwrap();
        k.quasi_alternating = false;
        let v = corollary_verdict(&k).unwrap();
        assert_eq!(v.pre_erratum, PreErratum::Inconclusive);
        assert_eq!(v.post_erratum, PostErratum::InconclusiveHypotheses);
    }

    #[test]
    fn printed_scale_changes_nothing_for_t29() {
        let k = torus_2k_invariants(9).unwrap();
        let v = corollary_verdict_with_scale(&k, &literal_d_scale()).unwrap();
        assert_eq!(v.pre_erratum, PreErratum::NoBanding);
    }

    #[test]
    fn mirror_signature_same_verdict() {
        let k = torus_2k_invariants(45).unwrap();
        let mut mirror = k.clone();
        mirror.signature = -k.signature;
        let (a, b) = (
            corollary_verdict(&k).unwrap(),
            corollary_verdict(&mirror).unwrap(),
        );
        assert_eq!(a.pre_erratum, b.pre_erratum);
        assert_eq!(a.post_erratum, b.post_erratum);
    }

    #[test]
    fn table() {
        let rows = torus_banding_table(9).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.k).collect::<Vec<_>>(),
            vec![3, 5, 7, 9]
        );
        let no_banding: Vec<i64> = rows
            .iter()
            .filter(|r| r.pre_erratum == PreErratum::NoBanding)
            .map(|r| r.k)
            .collect();
        assert_eq!(no_banding, vec![9]);
        assert_eq!(torus_banding_table(3).unwrap().len(), 1);
        assert!(torus_banding_table(1).unwrap().is_empty());
    }

    #[test]
    fn descriptor_json_round_trip() {
        let k = torus_2k_invariants(9).unwrap();
        let json = serde_json::to_string(&k).unwrap();
        assert!(json.contains("\"branched_cover_surgery\":{\"p\":9,\"q\":1,\"a2_of_core_knot\":0}"));
        let back: KnotDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, k);
        let bad = r#"{"name":"x","determinant":9,"signature":0,"a2":0,"quasi_alternating":true,"extra":1}"#;
        assert!(serde_json::from_str::<KnotDescriptor>(bad).is_err());
    }

    #[test]
    fn d_filter_symmetric() {
        for n in -20..=20 {
            for d in 1..=5 {
                let x = r(n, d);
                assert_eq!(mv_d_filter(&x), mv_d_filter(&-&x));
            }
        }
    }
}
