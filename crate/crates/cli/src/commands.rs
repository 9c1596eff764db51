//! The five subcommands. Each builds a report document and returns the
//! process exit code: 0 success, 1 verification failure, 2 invalid input,
//! 3 search budget exceeded.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use pgfam_core::search::{self, SearchLimits, SearchObserver, SearchResult, StopCause};
use pgfam_core::{
    exhaustive_search_pg32, pg, Gf, HyperplaneSection, Kind, Quadric, Sign, VerdictKind,
};
use serde_json::{json, Map, Value};

use crate::family_file;
use crate::report::{
    analysis_json, count_table_json, family_report, parameters_json, render_value_text,
    ReportDocument,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

fn fail_usage(message: &str) -> u8 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn sign_kind(sign: Sign) -> Kind {
    match sign {
        Sign::Plus => Kind::Hyperbolic,
        Sign::Minus => Kind::Elliptic,
    }
}

fn histogram_json(histogram: &BTreeMap<u64, u64>) -> Value {
    let mut map = Map::new();
    for (k, v) in histogram {
        map.insert(k.to_string(), json!(v));
    }
    Value::Object(map)
}

/// `counts`: emit the closed-form count table; with `--enumerate`,
/// cross-check every entry against the standard quadric.
pub fn cmd_counts(n: u32, q: u64, sign: Sign, enumerate: bool, as_json: bool) -> u8 {
    let field = match Gf::new(q) {
        Ok(f) => f,
        Err(e) => return fail_usage(&e.to_string()),
    };
    if !pgfam_core::quadric::count_table_supported(n, q) {
        return fail_usage(&format!("count table at n={n}, q={q} exceeds exact-arithmetic range"));
    }
    let table = pgfam_core::expected_counts(n, q, sign);
    let mut violations: Vec<String> = Vec::new();
    let mut observed = Value::Null;

    if enumerate {
        let quad = match Quadric::standard(sign_kind(sign), n, field) {
            Ok(quad) => quad,
            Err(e) => return fail_usage(&e.to_string()),
        };
        observed = enumerate_counts(&quad, &mut violations);
    }

    let doc = ReportDocument {
        parameters: parameters_json(n, q, sign),
        expected: count_table_json(&table),
        observed,
        theorem_violations: violations.clone(),
        verdict: Value::Null,
    };
    print!("{}", doc.render(as_json));
    if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}

fn enumerate_counts(quad: &Quadric, violations: &mut Vec<String>) -> Value {
    let table = quad.table();
    let space = quad.space();

    let point_count = quad.points().len() as u64;
    if point_count != table.quadric_size {
        violations.push(format!(
            "quadric size: enumerated {point_count}, formula {}",
            table.quadric_size
        ));
    }

    let mut section_histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let mut parabolic = 0u64;
    let mut tangent = 0u64;
    for h in space.hyperplanes() {
        *section_histogram.entry(quad.section_size(&h)).or_insert(0) += 1;
        match quad.classify_hyperplane(&h) {
            Ok(HyperplaneSection::Parabolic) => parabolic += 1,
            Ok(HyperplaneSection::TangentCone) => tangent += 1,
            Err(e) => violations.push(e.to_string()),
        }
    }
    if parabolic != table.parabolic_hyperplanes {
        violations.push(format!(
            "parabolic hyperplanes: enumerated {parabolic}, formula {}",
            table.parabolic_hyperplanes
        ));
    }
    if tangent != table.quadric_size {
        violations.push(format!(
            "tangent hyperplanes: enumerated {tangent}, expected the quadric size {}",
            table.quadric_size
        ));
    }

    let mut codim2_histogram: BTreeMap<u64, u64> = BTreeMap::new();
    for sub in space.codim2_subspaces() {
        *codim2_histogram.entry(quad.codim2_section_size(&sub)).or_insert(0) += 1;
        if let Err(e) = quad.classify_codim2(&sub) {
            violations.push(e.to_string());
        }
    }

    let mut polar_injective = true;
    let mut tangents = Vec::new();
    for p in quad.points() {
        match quad.polar_hyperplane(p) {
            Ok(h) => {
                if quad.classify_hyperplane(&h) != Ok(HyperplaneSection::TangentCone) {
                    violations.push(format!("polar hyperplane of {p} is not a tangent cone"));
                }
                tangents.push(h);
            }
            Err(e) => violations.push(format!("polar hyperplane of {p}: {e}")),
        }
    }
    tangents.sort();
    tangents.dedup();
    if tangents.len() as u64 != point_count {
        polar_injective = false;
        violations.push("polar map is not injective on the quadric".to_string());
    }

    let family = quad.parabolic_family();
    let analysis = family.analyze();
    if !analysis.p1.holds {
        violations.push("canonical family fails the point-degree axiom".to_string());
    }
    if !analysis.p2.holds {
        violations.push("canonical family fails the covering axiom".to_string());
    }
    if analysis.b != table.quadric_size {
        violations.push(format!(
            "canonical family black total {}, expected {}",
            analysis.b, table.quadric_size
        ));
    }
    let admissible = [table.q - 1, table.q, table.q + 1];
    for &s in analysis.p2.multiplicity_histogram.keys() {
        if !admissible.contains(&s) {
            violations.push(format!("pencil multiplicity {s} outside 0/{admissible:?}"));
        }
    }
    violations.extend(analysis.theorem_violations.iter().map(|v| v.to_string()));

    json!({
        "quadric_size": point_count,
        "parabolic_hyperplanes": parabolic,
        "tangent_hyperplanes": tangent,
        "hyperplane_sections": histogram_json(&section_histogram),
        "codim2_sections": histogram_json(&codim2_histogram),
        "polar_injective": polar_injective,
        "family": analysis_json(&analysis),
    })
}

/// `canonical`: write the standard quadric's parabolic family to a file.
pub fn cmd_canonical(n: u32, q: u64, sign: Sign, out: &Path, as_json: bool) -> u8 {
    let field = match Gf::new(q) {
        Ok(f) => f,
        Err(e) => return fail_usage(&e.to_string()),
    };
    let quad = match Quadric::standard(sign_kind(sign), n, field) {
        Ok(quad) => quad,
        Err(e) => return fail_usage(&e.to_string()),
    };
    let family = quad.parabolic_family();
    if let Err(e) = family_file::store(out, &family) {
        eprintln!("error: {e}");
        return EXIT_VERIFICATION;
    }
    if as_json {
        let value = json!({
            "written": out.display().to_string(),
            "members": family.members().len(),
        });
        println!("{}", serde_json::to_string(&value).expect("serializes"));
    } else {
        println!("wrote {} ({} members)", out.display(), family.members().len());
    }
    EXIT_OK
}

/// `check`: verify both axioms on a family file, run the derivation ladder,
/// and classify.
pub fn cmd_check(path: &Path, as_json: bool) -> u8 {
    let family = match family_file::load(path) {
        Ok(f) => f,
        Err(e) => return fail_usage(&e),
    };
    let analysis = family.analyze();
    let table = family.expected();
    let doc = family_report(family.n(), family.q(), family.sign(), &analysis, &table);
    print!("{}", doc.render(as_json));

    let clean = analysis.p1.holds
        && analysis.p2.holds
        && analysis.theorem_violations.is_empty()
        && analysis.verdict.kind() != VerdictKind::Unknown;
    if clean {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}

struct StderrProgress {
    start: Instant,
    deadline: Option<Duration>,
}

impl SearchObserver for StderrProgress {
    fn progress(&mut self, nodes: u64) {
        eprintln!(
            "search: {nodes} nodes explored ({:.1}s)",
            self.start.elapsed().as_secs_f64()
        );
    }

    fn should_stop(&mut self) -> bool {
        self.deadline.is_some_and(|d| self.start.elapsed() >= d)
    }
}

/// Splits the PG(3,2) mask range over worker threads; the merged result is
/// identical to the sequential scan.
fn searched_pg32(sign: Sign, threads: usize) -> SearchResult {
    if threads <= 1 {
        return exhaustive_search_pg32(sign);
    }
    let full = 1u32 << 15;
    let chunk = (full / threads as u32).max(1);
    let masks: Vec<u32> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        let mut start = 1u32;
        while start < full {
            let end = start.saturating_add(chunk).min(full);
            handles.push(scope.spawn(move || search::pg32_survivor_masks(sign, start, end)));
            start = end;
        }
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("search worker"))
            .collect()
    });
    let mut families: Vec<_> = masks
        .into_iter()
        .filter_map(|mask| {
            let family = search::pg32_family_from_mask(sign, mask);
            let analysis = family.analyze();
            (analysis.p1.holds && analysis.p2.holds).then_some((family, analysis))
        })
        .collect();
    families.sort_by(|a, b| a.0.members().cmp(b.0.members()));
    SearchResult {
        families,
        exhaustive: true,
        nodes_explored: (full - 1) as u64,
        stop: StopCause::Completed,
    }
}

/// `search`: find every family satisfying both axioms — exhaustively for
/// PG(3,2), by pruned backtracking elsewhere — and classify each.
#[allow(clippy::too_many_arguments)]
pub fn cmd_search(
    n: u32,
    q: u64,
    sign: Sign,
    node_budget: u64,
    time_budget: Option<u64>,
    report_every: u64,
    threads: usize,
    as_json: bool,
) -> u8 {
    if let Err(e) = Gf::new(q) {
        return fail_usage(&e.to_string());
    }
    let k = 2 * n as usize + 1;
    if !pg::enumerable(k, q) || pg::theta(k, q) > 1 << 16 {
        return fail_usage("search space beyond desk scale");
    }

    let result = if (n, q) == (1, 2) {
        searched_pg32(sign, threads)
    } else {
        let limits = SearchLimits {
            node_budget,
            report_every: report_every.max(1),
        };
        let mut observer = StderrProgress {
            start: Instant::now(),
            deadline: time_budget.map(Duration::from_secs),
        };
        search::backtracking_search(n, q, sign, limits, &mut observer)
    };

    let table = pgfam_core::expected_counts(n, q, sign);
    let mut verdict_tally: BTreeMap<String, u64> = BTreeMap::new();
    let mut suspicious = false;
    for (family, analysis) in &result.families {
        *verdict_tally
            .entry(analysis.verdict.kind().to_string())
            .or_insert(0) += 1;
        suspicious |= analysis.verdict.kind() == VerdictKind::Unknown
            || !analysis.theorem_violations.is_empty();
        let doc = family_report(family.n(), family.q(), family.sign(), analysis, &table);
        if as_json {
            println!("{}", serde_json::to_string(&doc.to_json()).expect("serializes"));
        } else {
            print!("{}", doc.render(false));
            println!("--");
        }
    }

    let summary = json!({
        "summary": {
            "exhaustive": result.exhaustive,
            "nodes_explored": result.nodes_explored,
            "families_found": result.families.len(),
            "stop": match result.stop {
                StopCause::Completed => "completed",
                StopCause::NodeBudget => "node_budget",
                StopCause::ObserverStop => "time_budget",
            },
            "verdicts": verdict_tally,
        }
    });
    if as_json {
        println!("{}", serde_json::to_string(&summary).expect("serializes"));
    } else {
        print!("{}", render_value_text(&summary));
    }

    if result.stop != StopCause::Completed {
        EXIT_BUDGET
    } else if suspicious {
        EXIT_VERIFICATION
    } else {
        EXIT_OK
    }
}

fn prime_powers(max: u64) -> Vec<u64> {
    (2..=max)
        .filter(|&q| {
            let p = (2..=q).find(|&d| q % d == 0).unwrap();
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
            }
            rest == 1
        })
        .collect()
}

/// The k values in 1..=q where the divisibility in fact holds, derived by
/// factoring the expression: always k = 1; for (n=1, Plus) and odd q the
/// modulus q+1 also divides 2(k-1) at k = (q+3)/2.
fn expected_divisibility_ks(n: u32, q: u64, sign: Sign) -> Vec<u64> {
    let mut ks = vec![1];
    if n == 1 && sign == Sign::Plus && q % 2 == 1 {
        ks.push((q + 3) / 2);
    }
    ks
}

/// `suite`: arithmetic verification of the whole counting ladder over every
/// prime power q ≤ max_q and 1 ≤ n ≤ max_n, both signs.
pub fn cmd_suite(max_n: u32, max_q: u64, as_json: bool) -> u8 {
    if max_n < 1 || max_q < 2 {
        return fail_usage("suite bounds must satisfy max-n >= 1 and max-q >= 2");
    }
    let mut check_tally: BTreeMap<&'static str, (u64, u64)> = BTreeMap::new();
    let mut failures: Vec<String> = Vec::new();
    let mut sweeps = 0u64;
    let mut sweeps_matching = 0u64;
    let mut exceptions: Vec<String> = Vec::new();

    for q in prime_powers(max_q) {
        for n in 1..=max_n {
            let report = pgfam_core::consistency_suite(n, q);
            for check in &report.checks {
                let slot = check_tally.entry(check.name).or_insert((0, 0));
                if check.pass {
                    slot.0 += 1;
                } else {
                    slot.1 += 1;
                    failures.push(format!(
                        "{} (n={n}, q={q}, sign {}): {}",
                        check.name, check.sign, check.detail
                    ));
                }
            }

            for sign in [Sign::Plus, Sign::Minus] {
                if n == 1 && sign == Sign::Minus {
                    continue;
                }
                sweeps += 1;
                let observed: Vec<u64> = (1..=q)
                    .filter(|&k| {
                        pgfam_core::lemma_divisibility(n, q, sign, k)
                            .expect("sweep stays inside the lemma's scope")
                    })
                    .collect();
                let expected = expected_divisibility_ks(n, q, sign);
                if observed == expected {
                    sweeps_matching += 1;
                } else {
                    failures.push(format!(
                        "divisibility sweep (n={n}, q={q}, sign {sign}): observed k set {observed:?}, derived {expected:?}"
                    ));
                }
                for &k in observed.iter().filter(|&&k| k != 1) {
                    exceptions.push(format!("n={n} q={q} sign {sign} k={k}"));
                }
            }
        }
    }

    let checks_json: Map<String, Value> = check_tally
        .iter()
        .map(|(name, (pass, fail))| ((*name).to_string(), json!({ "pass": pass, "fail": fail })))
        .collect();
    let doc = ReportDocument {
        parameters: json!({ "max_n": max_n, "max_q": max_q }),
        expected: json!({
            "consistency_checks": check_tally.values().map(|(p, f)| p + f).sum::<u64>(),
            "divisibility_sweeps": sweeps,
        }),
        observed: json!({
            "checks": Value::Object(checks_json),
            "divisibility_sweeps_matching": sweeps_matching,
            "divisibility_beyond_k1": exceptions,
        }),
        theorem_violations: failures.clone(),
        verdict: Value::Null,
    };
    print!("{}", doc.render(as_json));
    if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}
