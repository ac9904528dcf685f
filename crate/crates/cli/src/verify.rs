//! The reproduction suite: ten numbered checks, each returning a status and a
//! JSON payload. Payloads never contain timings or thread counts, so the
//! serialized report is byte-identical across runs and worker-pool sizes.

use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use twistkit_core::catalog::{self, BUILTIN_NAMES};
use twistkit_core::chartab::ClassFunction;
use twistkit_core::cyclo::field_of_values;
use twistkit_core::twists::{self, Relation, RepSpec, SearchMode, TwistContext};
use twistkit_core::weil::{self, WeilPolynomial};
use twistkit_core::Error;

pub const CRITERIA: u8 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A known disagreement with a printed table, reported verbatim.
    DiscrepancyDocumented,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub claim: String,
    pub status: Status,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl Check {
    fn new(criterion: u8, name: &str, claim: &str, ok: bool, payload: Value) -> Self {
        Self {
            criterion,
            name: name.into(),
            claim: claim.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            payload,
            wall_ms: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub discrepancy_documented: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl RunReport {
    pub fn from_checks(checks: Vec<Check>) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::DiscrepancyDocumented => summary.discrepancy_documented += 1,
            }
        }
        Self { checks, summary }
    }

    /// 0 when nothing failed; documented discrepancies do not fail the run.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail == 0 {
            crate::EXIT_OK
        } else {
            crate::EXIT_RELATION_FAILS
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::DiscrepancyDocumented => "DOCUMENTED",
            };
            let time = c.wall_ms.map(|ms| format!(" ({ms} ms)")).unwrap_or_default();
            out.push_str(&format!("[{tag:>10}] {:>2} {}: {}{time}\n", c.criterion, c.name, c.claim));
            if c.status != Status::Pass {
                if let Some(note) = c.payload.get("note").and_then(Value::as_str) {
                    out.push_str(&format!("             {note}\n"));
                }
            }
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} documented discrepancies\n",
            self.summary.pass, self.summary.fail, self.summary.discrepancy_documented
        ));
        out
    }
}

/// Character tables and twist data for every bundled group.
pub struct Workbench {
    groups: Vec<(String, Arc<TwistContext>)>,
}

impl Workbench {
    pub fn context(&self, name: &str) -> Result<&Arc<TwistContext>> {
        self.groups
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
            .ok_or_else(|| anyhow!("group {name} not loaded"))
    }

    pub fn groups(&self) -> impl Iterator<Item = (&str, &Arc<TwistContext>)> {
        self.groups.iter().map(|(n, c)| (n.as_str(), c))
    }
}

/// Criterion 1: loads every bundled group and verifies its table exactly.
pub fn load_workbench(max_group_order: usize) -> Result<(Workbench, Check)> {
    let mut groups = Vec::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for name in BUILTIN_NAMES {
        let loaded = catalog::load_builtin(name, max_group_order)
            .with_context(|| format!("loading bundled group {name}"))?;
        let table = &loaded.table;
        let verified = table.verify().is_ok();
        let sum_sq: u64 = table.degrees().iter().map(|d| d * d).sum();
        let order = loaded.group.order() as u64;
        ok &= verified && sum_sq == order && table.len() == loaded.group.num_classes();
        rows.push(json!({
            "group": name,
            "order": order,
            "classes": loaded.group.num_classes(),
            "degrees": table.degrees(),
            "sum_of_squared_degrees": sum_sq,
            "orthogonality": verified,
        }));
        groups.push((name.to_string(), TwistContext::new(loaded.table)?));
    }
    let check = Check::new(
        1,
        "character-table-integrity",
        "exact row and column orthogonality and sum of squared degrees equal to the order",
        ok,
        json!({ "groups": rows }),
    );
    Ok((Workbench { groups }, check))
}

fn verdict_json(v: &twists::TwistVerdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

fn dicyclic_pair(bench: &Workbench) -> Result<Check> {
    let ctx = bench.context("dic3")?;
    let named = catalog::dic3_characters(ctx.table())?;
    let (a, b) = twists::dic3_locally_quadratic_pair(ctx)?;
    let lq = twists::is_locally_quadratic_twist(&a, &b)?;
    let q = twists::is_quadratic_twist(&a, &b)?;
    let lpq = twists::is_locally_polyquadratic_twist(&a, &b)?;
    let pq = twists::decide(Relation::Polyquadratic, &a, &b)?;
    let witnesses = twists::verify_witness(&lq, &a, &b)? && twists::verify_witness(&q, &a, &b)?;
    Ok(Check::new(
        2,
        "dicyclic-locally-quadratic-not-quadratic",
        "on Dic3, (1 + eps + chi theta, chi + eps chi + theta) is locally quadratic but not quadratic",
        lq.holds && !q.holds && witnesses,
        json!({
            "epsilon": named.epsilon,
            "theta": named.theta,
            "a": a.to_json(),
            "b": b.to_json(),
            "locally_quadratic": verdict_json(&lq),
            "quadratic": verdict_json(&q),
            "locally_polyquadratic": lpq.holds,
            "polyquadratic": pq.holds,
        }),
    ))
}

fn faithful_cubics(bench: &Workbench) -> Result<Check> {
    let ctx = bench.context("sg48_3")?;
    let table = ctx.table();
    let faithful: Vec<usize> = (0..table.len())
        .filter(|&i| table.degrees()[i] == 3 && table.is_faithful(i))
        .collect();
    let mut fields_ok = true;
    for &i in &faithful {
        fields_ok &= field_of_values(table.irreducible(i).values())?.in_gaussian_rationals;
    }
    let mut pairs = Vec::new();
    let mut pairs_ok = true;
    for (n, &i) in faithful.iter().enumerate() {
        for &j in &faithful[n + 1..] {
            let a = RepSpec::irreducible(ctx, i)?;
            let b = RepSpec::irreducible(ctx, j)?;
            let lpq = twists::is_locally_polyquadratic_twist(&a, &b)?.holds;
            let matching = twists::is_polyquadratic_twist(&a, &b)?.holds;
            let oracle = twists::polyquadratic_subgroup_oracle(&a, &b)?.holds;
            pairs_ok &= lpq && !matching && !oracle;
            pairs.push(json!({
                "a": i, "b": j,
                "locally_polyquadratic": lpq,
                "polyquadratic_matching": matching,
                "polyquadratic_oracle": oracle,
            }));
        }
    }
    let exactly_two = faithful.len() == 2;
    let mut payload = json!({
        "faithful_degree_3": faithful,
        "count": faithful.len(),
        "exactly_two": exactly_two,
        "character_fields_in_gaussian_rationals": fields_ok,
        "pairs": pairs,
    });
    if !exactly_two {
        payload["note"] = json!(format!(
            "expected exactly two faithful degree-3 characters, the table has {}; \
             every other clause holds for all {} pairs",
            faithful.len(),
            pairs.len()
        ));
    }
    Ok(Check::new(
        3,
        "order-48-faithful-cubics",
        "exactly two faithful degree-3 characters, Q(i)-valued, locally polyquadratic but not polyquadratic",
        exactly_two && fields_ok && pairs_ok && !pairs.is_empty(),
        payload,
    ))
}

fn degree_two_search(bench: &Workbench, mode: SearchMode) -> Result<(bool, Vec<Value>)> {
    let mut ok = true;
    let mut rows = Vec::new();
    for (name, ctx) in bench.groups() {
        let res = twists::search_counterexamples(ctx, 2, mode, usize::MAX)?;
        ok &= res.pairs.is_empty() && !res.truncated;
        rows.push(json!({
            "group": name,
            "pairs_examined": res.examined,
            "counterexamples": res.pairs,
        }));
    }
    Ok((ok, rows))
}

fn degree_two_local_quadratic(bench: &Workbench) -> Result<Check> {
    let (ok, rows) = degree_two_search(bench, SearchMode::LqNotQ)?;
    Ok(Check::new(
        4,
        "degree-2-locally-quadratic-sweep",
        "no degree-2 pair of any bundled group is locally quadratic without being quadratic",
        ok,
        json!({ "groups": rows }),
    ))
}

fn degree_two_local_polyquadratic(bench: &Workbench) -> Result<Check> {
    let (mut ok, rows) = degree_two_search(bench, SearchMode::LpqNotPq)?;
    let mut instances = 0usize;
    let mut identity_failures = Vec::new();
    for (name, ctx) in bench.groups() {
        let trivial = ClassFunction::trivial(ctx.group());
        let reps = ctx.representations_of_degree(2);
        for a in &reps {
            for b in &reps {
                if !twists::is_locally_polyquadratic_twist(a, b)?.holds {
                    continue;
                }
                if twists::epsilon_character(a, b)?.same_values(&trivial) {
                    continue;
                }
                instances += 1;
                let (lhs, rhs) = twists::adjoint_multiplicity_identity(a, b)?;
                if lhs != rhs {
                    identity_failures.push(json!({
                        "group": name, "a": a.mults(), "b": b.mults(),
                        "lhs": lhs.to_string(), "rhs": rhs.to_string(),
                    }));
                }
            }
        }
    }
    ok &= identity_failures.is_empty();
    Ok(Check::new(
        5,
        "degree-2-locally-polyquadratic-sweep",
        "no degree-2 locally polyquadratic pair fails to be polyquadratic; the adjoint multiplicity identity holds",
        ok,
        json!({
            "groups": rows,
            "identity_instances": instances,
            "identity_failures": identity_failures,
        }),
    ))
}

fn oracle_rows(bench: &Workbench) -> Result<(usize, Vec<Value>)> {
    let mut total = 0;
    let mut rows = Vec::new();
    for (name, ctx) in bench.groups() {
        let mut pairs = Vec::new();
        for r in 0..=4 {
            let reps = ctx.representations_of_degree(r);
            for i in 0..reps.len() {
                for j in i..reps.len() {
                    pairs.push((reps[i].clone(), reps[j].clone()));
                }
            }
        }
        let outcomes: Vec<Option<Value>> = pairs
            .par_iter()
            .map(|(a, b)| -> Result<Option<Value>> {
                let m = twists::is_polyquadratic_twist(a, b)?.holds;
                let o = twists::polyquadratic_subgroup_oracle(a, b)?.holds;
                Ok((m != o).then(|| json!({ "a": a.mults(), "b": b.mults(), "matching": m, "oracle": o })))
            })
            .collect::<Result<_>>()?;
        let disagreements: Vec<Value> = outcomes.into_iter().flatten().collect();
        total += disagreements.len();
        rows.push(json!({ "group": name, "pairs": pairs.len(), "disagreements": disagreements }));
    }
    Ok((total, rows))
}

fn oracle_equivalence(bench: &Workbench) -> Result<Check> {
    let (total, rows) = oracle_rows(bench)?;
    Ok(Check::new(
        6,
        "polyquadratic-oracle-equivalence",
        "orbit matching agrees with subgroup enumeration on every pair of degree at most 4",
        total == 0,
        json!({ "groups": rows, "disagreements": total }),
    ))
}

/// Random representation of exactly `degree`.
pub fn random_rep(ctx: &Arc<TwistContext>, degree: u64, rng: &mut ChaCha8Rng) -> Result<RepSpec> {
    let degrees = ctx.table().degrees().to_vec();
    let mut mults = vec![0u32; degrees.len()];
    let mut left = degree;
    while left > 0 {
        let fitting: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] <= left).collect();
        let i = fitting[rng.gen_range(0..fitting.len())];
        mults[i] += 1;
        left -= degrees[i];
    }
    Ok(RepSpec::new(ctx, mults)?)
}

fn square_criteria(bench: &Workbench) -> Result<Check> {
    const PAIRS: usize = 500;
    let mut rows = Vec::new();
    let mut total = 0;
    for (index, (name, ctx)) in bench.groups().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007 + index as u64);
        let quad = ctx.quadratic_characters().to_vec();
        let mut pairs = Vec::with_capacity(PAIRS);
        for _ in 0..PAIRS {
            let a = random_rep(ctx, 4, &mut rng)?;
            let b = match rng.gen_range(0..3) {
                0 => a.twist(quad[rng.gen_range(0..quad.len())])?,
                1 => {
                    // Twist one constituent block only.
                    let part = random_rep(ctx, 2, &mut rng)?;
                    let rest = random_rep(ctx, 2, &mut rng)?;
                    let a2 = part.direct_sum(&rest)?;
                    pairs.push((a2, part.twist(quad[rng.gen_range(0..quad.len())])?.direct_sum(&rest)?));
                    continue;
                }
                _ => random_rep(ctx, 4, &mut rng)?,
            };
            pairs.push((a, b));
        }
        let results: Vec<(bool, bool, bool, bool)> = pairs
            .par_iter()
            .map(|(a, b)| -> Result<(bool, bool, bool, bool)> {
                // Each direct test raises an internal disagreement error itself; count it.
                let lq = match twists::is_locally_quadratic_twist(a, b) {
                    Ok(v) => v.holds == twists::locally_quadratic_by_squares(a, b)?,
                    Err(Error::OracleDisagreement(_)) => false,
                    Err(e) => return Err(e.into()),
                };
                let lpq_v = twists::is_locally_polyquadratic_twist(a, b);
                let lpq = match &lpq_v {
                    Ok(v) => v.holds == twists::locally_polyquadratic_by_adams(a, b)?,
                    Err(Error::OracleDisagreement(_)) => false,
                    Err(e) => return Err(anyhow!("{e}")),
                };
                let lq_true = twists::locally_quadratic_by_squares(a, b)?;
                let lpq_true = twists::locally_polyquadratic_by_adams(a, b)?;
                Ok((lq, lpq, lq_true, lpq_true))
            })
            .collect::<Result<_>>()?;
        let lq_dis = results.iter().filter(|r| !r.0).count();
        let lpq_dis = results.iter().filter(|r| !r.1).count();
        total += lq_dis + lpq_dis;
        rows.push(json!({
            "group": name,
            "pairs": pairs.len(),
            "locally_quadratic_disagreements": lq_dis,
            "locally_polyquadratic_disagreements": lpq_dis,
            "locally_quadratic_pairs": results.iter().filter(|r| r.2).count(),
            "locally_polyquadratic_pairs": results.iter().filter(|r| r.3).count(),
        }));
    }
    Ok(Check::new(
        7,
        "square-criteria-cross-check",
        "direct local tests agree with the Sym^2/Alt^2 and Adams-square criteria on random degree-4 pairs",
        total == 0,
        json!({ "groups": rows, "disagreements": total }),
    ))
}

const SMALL_PRIME_POWERS: &[u64] = &[
    2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49,
];

/// Random Weil polynomial: a product of elliptic factors, or for `g = 2` an
/// irreducible-shaped quartic drawn from the exact coefficient region.
pub fn random_weil(rng: &mut ChaCha8Rng) -> Result<WeilPolynomial> {
    let q = SMALL_PRIME_POWERS[rng.gen_range(0..SMALL_PRIME_POWERS.len())];
    let g = rng.gen_range(1..=3u32);
    let qi = q as i128;
    if g == 2 && rng.gen_bool(0.5) {
        loop {
            let a1_bound = (16 * q as i64).isqrt() as i128;
            let a1 = rng.gen_range(-a1_bound..=a1_bound);
            let a2 = rng.gen_range(-2 * qi..=(a1 * a1 / 4 + 2 * qi));
            let upper = 4 * a2 <= a1 * a1 + 8 * qi;
            let lower = a2 + 2 * qi >= 0 && 4 * a1 * a1 * qi <= (a2 + 2 * qi) * (a2 + 2 * qi);
            if upper && lower {
                return Ok(WeilPolynomial::new(2, q, vec![1, a1, a2, qi * a1, qi * qi])?);
            }
        }
    }
    let bound = (4 * q as i64).isqrt();
    let mut p = WeilPolynomial::new(0, q, vec![1])?;
    for _ in 0..g {
        p = p.mul(&WeilPolynomial::elliptic(q, rng.gen_range(-bound..=bound))?)?;
    }
    Ok(p)
}

fn times_sign_flip(p: &WeilPolynomial) -> Vec<i128> {
    let a = p.coeffs();
    let b = p.sign_twist(-1);
    let mut out = vec![0i128; 2 * a.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn weil_identities() -> Result<Check> {
    const SAMPLES: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut failures = Vec::new();
    for _ in 0..SAMPLES {
        let p = random_weil(&mut rng)?;
        let direct = times_sign_flip(&p);
        let mut ok = true;
        for q2 in [weil::base_change(&p, 2)?, weil::base_change_by_resultant(&p, 2)?] {
            let mut spread = vec![0i128; direct.len()];
            for (k, c) in q2.coeffs().iter().enumerate() {
                spread[2 * k] = *c;
            }
            ok &= spread == direct;
        }
        if !ok {
            failures.push(p.to_line());
        }
    }
    let sweep = weil::trace_zero_sweep(100)?;
    let ok = failures.is_empty() && sweep.falsifications.is_empty();
    Ok(Check::new(
        8,
        "weil-identities",
        "root-squaring identity on random Weil polynomials; trace-zero polyquadratic pairs are quadratic",
        ok,
        json!({
            "graeffe_samples": SAMPLES,
            "graeffe_failures": failures,
            "trace_zero_sweep": {
                "max_q": sweep.max_q,
                "configurations": sweep.configurations,
                "hypothesis_met": sweep.hypothesis_met,
                "falsifications": sweep.falsifications,
            },
        }),
    ))
}

fn supersingular_images() -> Result<Check> {
    let report = weil::supersingular_phi()?;
    let only_known = report.discrepancies.len() == 1
        && report.discrepancies[0].source.coeffs() == [1, 0, 0, 0, 1]
        && report.discrepancies[0].image.coeffs() == [1, 0, 2, 0, 1];
    let cross_checked = report.entries.iter().all(|e| e.cross_checked);
    let status = if !(report.injective && cross_checked) {
        Status::Fail
    } else if report.discrepancies.is_empty() {
        Status::Pass
    } else if only_known && report.matches == 4 {
        Status::DiscrepancyDocumented
    } else {
        Status::Fail
    };
    let mut payload = serde_json::to_value(&report)?;
    if status == Status::DiscrepancyDocumented {
        payload["note"] = json!(
            "Phi(1 + T^4) = (1 + T^2)^2, whereas the printed table lists (1 - T^2)^2 = Phi(1 - T^4); \
             the five computed images are pairwise distinct"
        );
    }
    Ok(Check {
        status,
        ..Check::new(
            9,
            "supersingular-phi",
            "Phi is injective on the five normalized supersingular quartics; images compared with the printed table",
            false,
            payload,
        )
    })
}

/// Payload digest that must not depend on the worker pool.
fn parallel_digest(bench: &Workbench) -> Result<String> {
    let mut parts = Vec::new();
    parts.push(serde_json::to_string(&degree_two_search(bench, SearchMode::LqNotQ)?.1)?);
    parts.push(serde_json::to_string(&oracle_rows(bench)?.1)?);
    parts.push(serde_json::to_string(&twists::search_counterexamples(
        bench.context("dic3")?,
        4,
        SearchMode::LqNotQ,
        usize::MAX,
    )?)?);
    parts.push(serde_json::to_string(&twists::search_counterexamples(
        bench.context("sg48_3")?,
        3,
        SearchMode::LpqNotPq,
        usize::MAX,
    )?)?);
    Ok(parts.join("\n"))
}

fn determinism(bench: &Workbench) -> Result<Check> {
    let run = |threads: usize| -> Result<String> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()?
            .install(|| parallel_digest(bench))
    };
    let one = run(1)?;
    let four = run(4)?;
    let again = run(4)?;
    Ok(Check::new(
        10,
        "determinism",
        "parallel sweeps and searches give identical output at 1 and 4 worker threads",
        one == four && four == again,
        json!({
            "compared": [
                "degree-2 locally-quadratic sweep",
                "degree <= 4 oracle comparison",
                "Dic3 degree-4 locally-quadratic search",
                "order-48 degree-3 locally-polyquadratic search",
            ],
            "thread_counts": [1, 4],
            "identical": one == four && four == again,
            "bytes": one.len(),
        }),
    ))
}

/// Runs criterion `n` (2..=10) against a loaded workbench.
pub fn run_check(n: u8, bench: &Workbench) -> Result<Check> {
    match n {
        2 => dicyclic_pair(bench),
        3 => faithful_cubics(bench),
        4 => degree_two_local_quadratic(bench),
        5 => degree_two_local_polyquadratic(bench),
        6 => oracle_equivalence(bench),
        7 => square_criteria(bench),
        8 => weil_identities(),
        9 => supersingular_images(),
        10 => determinism(bench),
        _ => Err(anyhow!("no criterion {n}")),
    }
}

/// Runs every criterion, recording wall times separately from the payloads.
pub fn run_all(max_group_order: usize) -> Result<(RunReport, Vec<Duration>)> {
    let start = Instant::now();
    let (bench, first) = load_workbench(max_group_order)?;
    let mut times = vec![start.elapsed()];
    let mut checks = vec![first];
    for n in 2..=CRITERIA {
        let t = Instant::now();
        checks.push(run_check(n, &bench)?);
        times.push(t.elapsed());
    }
    Ok((RunReport::from_checks(checks), times))
}

/// Copies wall times into the report (opt-in; breaks byte-identical output).
pub fn with_timings(mut report: RunReport, times: &[Duration]) -> RunReport {
    for (c, t) in report.checks.iter_mut().zip(times) {
        c.wall_ms = Some(t.as_millis() as u64);
    }
    report
}
