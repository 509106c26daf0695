use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::Path;

use serde_json::{json, Value};
use surgery_obstruction::banding::{
    corollary_verdict_with_scale, default_d_scale, torus_2k_invariants, torus_banding_table,
    SIGNATURE_CONVENTION,
};
use surgery_obstruction::casson_walker::{lambda_knot_surgery, lambda_orientation_reverse};
use surgery_obstruction::dedekind::{dedekind_sum, six_p_s, survey_six_ps_mod3};
use surgery_obstruction::obstruction::{
    constraint_check, derive_congruence, scenario_report, theorem2_status, CONSTRAINT,
};
use surgery_obstruction::selftest::{run_selftest, Level};
use surgery_obstruction::{
    DedekindPair, Error, KnotDescriptor, Method, Normalization, Rational, SurgeryOnKnot,
    SurgeryScenario,
};

use crate::output::{CliError, Outcome};

type CmdResult = Result<Outcome, CliError>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload types serialize")
}

/// Parses `a:b`, inclusive on both ends.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, CliError> {
    let bad = || CliError::parse(format!("expected a range a:b with a <= b, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    s.parse().map_err(|e| CliError::parse(format!("{e}")))
}

pub fn dedekind(q: i64, p: i64, method: Option<Method>) -> CmdResult {
    let pair = DedekindPair::new(q, p)?;
    match method {
        Some(method) => {
            let s = dedekind_sum(pair, method);
            Ok(Outcome {
                payload: json!({ "q": q, "p": p, "method": method, "s": s }),
                human: format!("s({q},{p}) = {s}\n"),
            })
        }
        None => {
            let direct = dedekind_sum(pair, Method::Direct);
            let fast = dedekind_sum(pair, Method::Fast);
            if direct != fast {
                return Err(Error::IdentityViolated(format!(
                    "direct {direct} and fast {fast} disagree at s({q},{p})"
                ))
                .into());
            }
            Ok(Outcome {
                payload: json!({ "q": q, "p": p, "method": "both", "s": fast, "direct": direct, "fast": fast }),
                human: format!("s({q},{p}) = {fast}  (direct {direct}, fast {fast})\n"),
            })
        }
    }
}

pub fn lambda(a2: i64, p: i64, q: i64, n: Normalization) -> CmdResult {
    let lam = lambda_knot_surgery(SurgeryOnKnot::new(a2, p, q)?, n);
    let rev = lambda_orientation_reverse(&lam);
    Ok(Outcome {
        payload: json!({
            "a2": a2, "p": p, "q": q,
            "normalization": n,
            "lambda": lam,
            "lambda_reversed": rev,
        }),
        human: format!(
            "lambda({p}/{q} surgery, a2 = {a2}) = {lam}  [{}]\nreversed: {rev}\n",
            n.as_str()
        ),
    })
}

pub fn erratum(p: i64, q: i64, m: i64, ell: i64) -> CmdResult {
    let s = SurgeryScenario::new(p, q, m, ell)?;
    let wrong = derive_congruence(&s, Normalization::WalkerP1)?;
    let right = derive_congruence(&s, Normalization::PaperP2)?;
    let six_ps = six_p_s(DedekindPair::new(q, p)?)?;
    let six_ps_json = match i64::try_from(&six_ps) {
        Ok(v) => json!(v),
        Err(_) => json!(six_ps.to_string()),
    };
    let holds = constraint_check(&s);

    let mut human = String::new();
    let _ = writeln!(human, "scenario p={p} q={q} m={m} ell={ell}");
    let _ = writeln!(
        human,
        "  epsilon = {:+}, ell0 = {}, 6ps(q,p) = {six_ps}",
        s.epsilon(),
        s.ell0()
    );
    for v in [&wrong, &right] {
        let _ = writeln!(
            human,
            "  {:<10} {} ≡ {} (mod 3)  -> {}",
            v.normalization.as_str(),
            v.lhs_residue.value(),
            v.rhs_residue.value(),
            v.classification.as_str()
        );
    }
    let _ = writeln!(human, "  constraint {CONSTRAINT}: {holds}");

    Ok(Outcome {
        payload: json!({
            "p": p, "q": q, "m": m, "ell": ell,
            "epsilon": s.epsilon(),
            "ell0": s.ell0(),
            "six_ps": six_ps_json,
            "erroneous": wrong.classification,
            "corrected": right.classification,
            "erroneous_verdict": wrong,
            "corrected_verdict": right,
            "constraint": CONSTRAINT,
            "constraint_holds": holds,
        }),
        human,
    })
}

pub fn enumerate(
    p: i64,
    q: i64,
    m_range: RangeInclusive<i64>,
    ell_range: RangeInclusive<i64>,
    n: Normalization,
) -> CmdResult {
    let report = scenario_report(p, q, m_range, ell_range, n)?;
    let mut human = format!(
        "p={p} q={q} [{}]\n     m   ell  eps  ell0  verdict\n",
        n.as_str()
    );
    for c in &report.scenarios {
        let _ = writeln!(
            human,
            "{:>6} {:>5} {:>4} {:>5}  {}",
            c.m,
            c.ell,
            c.epsilon,
            c.ell0,
            c.verdict.as_str()
        );
    }
    let _ = writeln!(human, "{} scenario(s)", report.scenarios.len());
    Ok(Outcome {
        payload: to_value(&report),
        human,
    })
}

pub fn status(p: i64, q: i64, bound: i64) -> CmdResult {
    let st = theorem2_status(p, q, bound)?;
    let mut human = String::new();
    let _ = writeln!(human, "p={p} q={q}, |m| <= {bound}, 1 <= ell <= {bound}");
    let _ = writeln!(
        human,
        "  erroneous: {}/{} contradictions",
        st.erroneous.contradictions, st.erroneous.scenarios_checked
    );
    let _ = writeln!(
        human,
        "  corrected: {} allowed, {} ruled out, constraint agrees: {}",
        st.corrected.allowed.len(),
        st.corrected.ruled_out,
        st.corrected.matches_constraint
    );
    if !st.outside_argument.is_empty() {
        let _ = writeln!(
            human,
            "  {} scenario(s) with 3 | ell0 not covered",
            st.outside_argument.len()
        );
    }
    let _ = writeln!(human, "  claim established: {}", st.claim_established);
    Ok(Outcome {
        payload: to_value(&st),
        human,
    })
}

fn render_verdict(knot: &KnotDescriptor, payload: Value, scale: &Rational) -> CmdResult {
    let v = corollary_verdict_with_scale(knot, scale)?;
    let mut human = String::new();
    let _ = writeln!(
        human,
        "{}: det {}, signature {}, a2 {}",
        knot.name, knot.determinant, knot.signature, knot.a2
    );
    let _ = writeln!(
        human,
        "  pre-erratum:  {}",
        to_value(&v.pre_erratum).as_str().unwrap_or_default()
    );
    let _ = writeln!(
        human,
        "  post-erratum: {}",
        to_value(&v.post_erratum).as_str().unwrap_or_default()
    );
    if let Some(c) = &v.surviving_constraint {
        let _ = writeln!(human, "  surviving constraint: {c}");
    }
    for note in &v.notes {
        let _ = writeln!(human, "  - {note}");
    }
    let mut payload = payload;
    payload["knot"] = to_value(knot);
    payload["verdict"] = to_value(&v);
    payload["d_scale"] = to_value(scale);
    Ok(Outcome { payload, human })
}

pub fn banding_torus(k: i64, scale: Option<Rational>) -> CmdResult {
    let knot = torus_2k_invariants(k)?;
    let scale = scale.unwrap_or_else(default_d_scale);
    render_verdict(
        &knot,
        json!({ "signature_convention": SIGNATURE_CONVENTION }),
        &scale,
    )
}

pub fn banding_file(path: &Path, scale: Option<Rational>) -> CmdResult {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let knot: KnotDescriptor = serde_json::from_str(&text)
        .map_err(|e| CliError::malformed_json(format!("{}: {e}", path.display())))?;
    let scale = scale.unwrap_or_else(default_d_scale);
    render_verdict(&knot, json!({}), &scale)
}

pub fn banding_table(k_max: i64) -> CmdResult {
    let rows = torus_banding_table(k_max)?;
    let mut human = String::from("    k   det   sig  pre           post\n");
    for r in &rows {
        let _ = writeln!(
            human,
            "{:>5} {:>5} {:>5}  {:<12}  {}",
            r.k,
            r.determinant,
            r.signature,
            to_value(&r.pre_erratum).as_str().unwrap_or_default(),
            to_value(&r.post_erratum).as_str().unwrap_or_default()
        );
    }
    Ok(Outcome {
        payload: json!({ "signature_convention": SIGNATURE_CONVENTION, "rows": rows }),
        human,
    })
}

pub fn survey(p_max: i64) -> CmdResult {
    let rows = survey_six_ps_mod3(p_max);
    let mut human = format!("6p s(q,p) ≡ q (mod 3), 3 ∤ q, p <= {p_max}\n");
    for r in &rows {
        let _ = writeln!(
            human,
            "  {:<16} {:>8} pairs, {:>8} failures",
            to_value(&r.class).as_str().unwrap_or_default(),
            r.pairs_checked,
            r.counterexamples
        );
    }
    Ok(Outcome {
        payload: json!({ "p_max": p_max, "classes": rows }),
        human,
    })
}

pub fn selftest(level: Level, inject_fault: bool) -> CmdResult {
    let report = run_selftest(level, inject_fault);
    for c in &report.checks {
        eprintln!(
            "{} {} ({} cases, {} ms){}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.cases,
            c.millis,
            c.detail
                .as_deref()
                .map(|d| format!(": {d}"))
                .unwrap_or_default()
        );
    }
    if report.failed > 0 {
        let names: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        return Err(CliError::selftest_failed(format!(
            "{} of {} checks failed: {}",
            report.failed,
            report.passed + report.failed,
            names.join(", ")
        )));
    }
    Ok(Outcome {
        human: format!("passed {}, failed {}\n", report.passed, report.failed),
        payload: to_value(&report),
    })
}
