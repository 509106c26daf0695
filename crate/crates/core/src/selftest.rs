//! Property sweeps over every module, run by the `selftest` command.

use std::time::Instant;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::banding::{torus_banding_table, PostErratum, PreErratum};
use crate::casson_walker::{
    lambda_knot_surgery, lambda_of_surgered_link, link_identity_sides, linking_matrix_signature,
    solve_four_v3, Normalization, SurgeryOnKnot,
};
use crate::dedekind::{
    dedekind_sum_direct, dedekind_sum_fast, is_nine_p0, reciprocity_residual, six_p_s,
    six_ps_mod3_fact, DedekindPair,
};
use crate::numerics::{mod3_residue, Rational};
use crate::obstruction::{
    admissible_scenarios, constraint_check, derive_congruence, minimal_linking_root,
    Classification, SurgeryScenario, UNKNOWN_ASSIGNMENTS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

/// Sweep sizes for one level.
#[derive(Debug, Clone, Copy)]
struct Bounds {
    dedekind_p: i64,
    reciprocity_pq: i64,
    mod3_fact_p: i64,
    symmetry_p: i64,
    sweep_ps: &'static [i64],
    random_scenarios: usize,
    random_knots: usize,
    lens_p: i64,
}

impl Level {
    fn bounds(self) -> Bounds {
        match self {
            Level::Quick => Bounds {
                dedekind_p: 120,
                reciprocity_pq: 60,
                mod3_fact_p: 180,
                symmetry_p: 60,
                sweep_ps: &[9, 18],
                random_scenarios: 20,
                random_knots: 50,
                lens_p: 20,
            },
            Level::Full => Bounds {
                dedekind_p: 1000,
                reciprocity_pq: 500,
                mod3_fact_p: 900,
                symmetry_p: 300,
                sweep_ps: &[9, 18, 36, 45, 63, 90],
                random_scenarios: 100,
                random_knots: 200,
                lens_p: 50,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub detail: Option<String>,
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub level: Level,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckOutcome>,
}

type CheckResult = std::result::Result<u64, String>;

fn coprime_pairs(p_max: i64) -> Vec<(i64, i64)> {
    (1..=p_max)
        .flat_map(|p| {
            (0..p.max(1))
                .filter(move |q| q.gcd(&p) == 1)
                .map(move |q| (q, p))
        })
        .collect()
}

fn first_failure<T: Send + Sync + std::fmt::Debug>(
    items: &[T],
    check: impl Fn(&T) -> bool + Sync + Send,
) -> CheckResult {
    match items.par_iter().find_first(|x| !check(x)) {
        Some(x) => Err(format!("fails at {x:?}")),
        None => Ok(items.len() as u64),
    }
}

fn dedekind_equivalence(b: Bounds) -> CheckResult {
    first_failure(&coprime_pairs(b.dedekind_p), |&(q, p)| {
        let pair = DedekindPair::new(q, p).expect("coprime");
        dedekind_sum_fast(pair) == dedekind_sum_direct(pair)
    })
}

fn reciprocity(b: Bounds) -> CheckResult {
    let pairs: Vec<(i64, i64)> = (1..=b.reciprocity_pq)
        .flat_map(|p| {
            (1..=b.reciprocity_pq)
                .filter(move |q| q.gcd(&p) == 1)
                .map(move |q| (p, q))
        })
        .collect();
    first_failure(&pairs, |&(p, q)| {
        reciprocity_residual(p, q)
            .map(|r| r.is_zero())
            .unwrap_or(false)
    })
}

fn integrality(b: Bounds) -> CheckResult {
    first_failure(&coprime_pairs(b.dedekind_p), |&(q, p)| {
        six_p_s(DedekindPair::new(q, p).expect("coprime")).is_ok()
    })
}

fn mod3_fact(b: Bounds) -> CheckResult {
    let pairs: Vec<(i64, i64)> = (9..=b.mod3_fact_p)
        .filter(|&p| is_nine_p0(p))
        .flat_map(|p| {
            (1..p)
                .filter(move |q| q % 3 != 0 && q.gcd(&p) == 1)
                .map(move |q| (p, q))
        })
        .collect();
    first_failure(&pairs, |&(p, q)| six_ps_mod3_fact(p, q).unwrap_or(false))
}

fn symmetries(b: Bounds) -> CheckResult {
    let pairs = coprime_pairs(b.symmetry_p);
    first_failure(&pairs, |&(q, p)| {
        let s = dedekind_sum_fast(DedekindPair::new(q, p).expect("coprime"));
        let odd = dedekind_sum_fast(DedekindPair::new(-q, p).expect("coprime")) == -&s;
        let periodic = dedekind_sum_fast(DedekindPair::new(q + p, p).expect("coprime")) == s;
        let closed = q != 1 || s == Rational::new((p - 1) * (p - 2), 12 * p).expect("p >= 1");
        odd && periodic && closed
    })
}

fn sweep_scenarios(ps: &[i64]) -> Vec<SurgeryScenario> {
    ps.iter()
        .flat_map(|&p| {
            (1..p).filter(move |q| q.gcd(&p) == 1).flat_map(move |q| {
                admissible_scenarios(p, q, -50..=50, 1..=50).expect("valid p, q")
            })
        })
        .collect()
}

fn erratum_sweep(b: Bounds) -> CheckResult {
    let scenarios = sweep_scenarios(b.sweep_ps);
    if scenarios.is_empty() {
        return Err("no admissible scenarios".into());
    }
    first_failure(&scenarios, |s| {
        let Ok(wrong) = derive_congruence(s, Normalization::WalkerP1) else {
            return false;
        };
        let Ok(right) = derive_congruence(s, Normalization::PaperP2) else {
            return false;
        };
        let sigma = linking_matrix_signature(s.m(), s.ell(), s.p(), s.q());
        wrong.classification == Classification::Contradiction
            && right.holds == constraint_check(s)
            && sigma == Ok(1 + s.epsilon())
            && i64::from(s.epsilon()) - s.m() == -s.q() * s.ell0()
    })?;
    let survivors = admissible_scenarios(9, 1, -50..=50, 1..=50).expect("valid");
    let has_known = survivors.iter().any(|s| {
        (s.m(), s.ell(), s.epsilon()) == (2, 3, 1)
            && derive_congruence(s, Normalization::PaperP2).map(|v| v.holds) == Ok(true)
    });
    if !has_known {
        return Err("(m=2, ell=3) is not ALLOWED for p=9, q=1".into());
    }
    Ok(scenarios.len() as u64)
}

/// A random admissible scenario with `p = 9 p0 <= 9 * 40`.
pub fn random_scenario(rng: &mut impl Rng) -> SurgeryScenario {
    let ps: Vec<i64> = (9..=360).filter(|&p| is_nine_p0(p)).collect();
    let p = *ps.choose(rng).expect("non-empty");
    let q = loop {
        let q = rng.gen_range(1..p);
        if q.gcd(&p) == 1 {
            break q;
        }
    };
    let root = minimal_linking_root(p);
    let eps = if rng.gen_bool(0.5) { 1 } else { -1 };
    loop {
        // Fails when p | ell or 3 | ell0; p itself is a multiple of root,
        // so ell = root always works.
        if let Ok(s) = SurgeryScenario::from_linking(p, q, root * rng.gen_range(1..=6), eps) {
            return s;
        }
    }
}

fn unknown_independence(b: Bounds) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let scenarios: Vec<SurgeryScenario> = (0..b.random_scenarios)
        .map(|_| random_scenario(&mut rng))
        .collect();
    first_failure(&scenarios, |s| {
        Normalization::ALL.iter().all(|&n| {
            derive_congruence(s, n).is_ok()
                && UNKNOWN_ASSIGNMENTS.iter().all(|&(a2x, a2y)| {
                    let framing = s.framing(a2x, a2y);
                    let v = solve_four_v3(&framing, n, a2y).expect("solvable");
                    let lambda = lambda_of_surgered_link(a2y, s.p(), s.q(), n).expect("valid");
                    let sides = link_identity_sides(&framing, &lambda).expect("nondegenerate");
                    let residual =
                        sides.lhs - sides.rhs_without_v3 - v * Rational::new(1, 2).unwrap();
                    residual.is_zero()
                })
        })
    })
}

fn normalization_scaling(b: Bounds) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0xca55);
    let knots: Vec<SurgeryOnKnot> = (0..b.random_knots)
        .map(|_| loop {
            let (p, q) = (rng.gen_range(1..5000), rng.gen_range(1..5000));
            if let Ok(k) = SurgeryOnKnot::new(rng.gen_range(-100..100), p, q) {
                break k;
            }
        })
        .collect();
    first_failure(&knots, |&k| {
        lambda_knot_surgery(k, Normalization::PaperP2)
            == lambda_knot_surgery(k, Normalization::WalkerP1).mul_int(2)
    })
}

fn lens_antisymmetry(b: Bounds) -> CheckResult {
    let pairs: Vec<(i64, i64)> = (2..=b.lens_p)
        .flat_map(|p| (1..p).filter(move |q| q.gcd(&p) == 1).map(move |q| (p, q)))
        .collect();
    first_failure(&pairs, |&(p, q)| {
        let lam = |q| {
            lambda_knot_surgery(
                SurgeryOnKnot::new(0, p, q).unwrap(),
                Normalization::WalkerP1,
            )
        };
        lam(q) == -lam(p - q)
    })
}

fn banding_table() -> CheckResult {
    let rows = torus_banding_table(45).map_err(|e| e.to_string())?;
    let no_banding: Vec<i64> = rows
        .iter()
        .filter(|r| r.pre_erratum == PreErratum::NoBanding)
        .map(|r| r.k)
        .collect();
    if no_banding != [9, 45] {
        return Err(format!("pre-erratum NO_BANDING at {no_banding:?}"));
    }
    if rows.iter().any(|r| {
        !matches!(
            r.post_erratum,
            PostErratum::InconclusiveErratum | PostErratum::InconclusiveHypotheses
        )
    }) {
        return Err("conclusive post-erratum verdict".into());
    }
    let k5 = rows.iter().find(|r| r.k == 5).ok_or("missing k=5")?;
    if !k5.notes.iter().any(|n| n.contains("is known")) {
        return Err("k=5 lacks the known-banding note".into());
    }
    Ok(rows.len() as u64)
}

fn residue_sanity() -> CheckResult {
    let x = Rational::new(4, 5).expect("nonzero");
    match mod3_residue(&x) {
        Ok(r) if r.value() == 2 => Ok(1),
        other => Err(format!("residue of 4/5 gave {other:?}")),
    }
}

fn timed(name: &str, f: impl FnOnce() -> CheckResult) -> CheckOutcome {
    let start = Instant::now();
    let result = f();
    let millis = start.elapsed().as_millis();
    match result {
        Ok(cases) => CheckOutcome {
            name: name.to_owned(),
            passed: true,
            cases,
            detail: None,
            millis,
        },
        Err(detail) => CheckOutcome {
            name: name.to_owned(),
            passed: false,
            cases: 0,
            detail: Some(detail),
            millis,
        },
    }
}

/// Runs every property sweep at `level`. With `inject_fault`, one extra
/// check that always fails is appended, for exercising failure handling.
pub fn run_selftest(level: Level, inject_fault: bool) -> SelftestReport {
    let b = level.bounds();
    let mut checks = vec![
        timed("mod3_residue_sanity", residue_sanity),
        timed("dedekind_fast_equals_direct", || dedekind_equivalence(b)),
        timed("dedekind_reciprocity", || reciprocity(b)),
        timed("six_p_s_integrality", || integrality(b)),
        timed("six_ps_congruent_q_mod3", || mod3_fact(b)),
        timed("dedekind_symmetries_and_closed_form", || symmetries(b)),
        timed("erratum_reproduction", || erratum_sweep(b)),
        timed("unknown_independence_and_plug_back", || {
            unknown_independence(b)
        }),
        timed("normalization_scaling", || normalization_scaling(b)),
        timed("lens_space_antisymmetry", || lens_antisymmetry(b)),
        timed("torus_banding_table", banding_table),
    ];
    if inject_fault {
        checks.push(timed("injected_fault", || Err("deliberate failure".into())));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    SelftestReport {
        level,
        passed: checks.len() - failed,
        failed,
        checks,
    }
}
