//! Acceptance checks, one line per criterion.
//!
//! Exits nonzero when a criterion fails, unless it is listed in `KNOWN_RED`.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use vdwt_cli::cert::Certificate;
use vdwt_core::bounds::{BoundRecord, Dor, Justification, ReferenceTable};
use vdwt_core::colorings::{doubling_prefix, gamma_color, verify_gamma_against, GammaParams};
use vdwt_core::rado::regularity_necessary;
use vdwt_core::solver::{brute_force_decide, decide, find_n, FindN, SearchConfig, SearchStatus};
use vdwt_core::triple::{embed_triple, enumerate_triples};
use vdwt_core::{verify_coloring, FamilyParams, Verdict};

/// Criteria that cannot pass as stated. The block coloring with c = 5 has the
/// monochromatic (1,7)-triple (25, 26, 177), so criterion 4 stays red.
const KNOWN_RED: &[u32] = &[4];

struct Check {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Check {
    Check {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Check {
    Check {
        ok: false,
        detail: detail.into(),
    }
}

fn fam(a: u32, b: u32) -> FamilyParams {
    FamilyParams::new(a, b).unwrap()
}

fn vdwt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vdwt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn within(elapsed: Duration, limit: Duration) -> String {
    format!(
        "{:.2} s (limit {} s)",
        elapsed.as_secs_f64(),
        limit.as_secs()
    )
}

fn criterion_1(tmp: &Path) -> Check {
    let limit = Duration::from_secs(600);
    let cert = tmp.join("a2-b2-r3.cert");
    let cert_arg = cert.to_str().unwrap();
    let start = Instant::now();
    let o = vdwt(&[
        "solve",
        "--a",
        "2",
        "--b",
        "2",
        "--r",
        "3",
        "--workers",
        "1",
        "--no-cache",
        "--cert",
        cert_arg,
    ]);
    let elapsed = start.elapsed();
    let printed = String::from_utf8_lossy(&o.stdout).trim().to_string();
    if o.status.code() != Some(0) || printed != "88" {
        return fail(format!(
            "solve printed {printed:?} with status {:?}",
            o.status.code()
        ));
    }
    let v = vdwt(&["verify", cert_arg]);
    let parsed = std::fs::read_to_string(&cert)
        .ok()
        .and_then(|t| Certificate::parse(&t).ok());
    let n = parsed.as_ref().map(|c| c.n());
    if v.status.code() != Some(0) || n != Some(87) {
        return fail(format!(
            "certificate n={n:?}, verify status {:?}",
            v.status.code()
        ));
    }
    let detail = format!(
        "n(2,2;3) = 88; certificate for [1,87] valid; {}",
        within(elapsed, limit)
    );
    if elapsed <= limit {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_2() -> Check {
    let limit = Duration::from_secs(60);
    let start = Instant::now();
    let cfg = SearchConfig::default();
    let (mut cases, mut mismatches) = (0, Vec::new());
    for a in 1..=4 {
        for b in a..=4 {
            for r in 1..=2 {
                for n in 1..=12 {
                    let fast =
                        decide(fam(a, b), r, n, &cfg).unwrap().status == SearchStatus::Colorable;
                    if fast != brute_force_decide(fam(a, b), r, n).unwrap() {
                        mismatches.push((a, b, r, n));
                    }
                    cases += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{cases} cases, {} mismatches; {}",
        mismatches.len(),
        within(elapsed, limit)
    );
    if mismatches.is_empty() && elapsed <= limit {
        pass(detail)
    } else {
        fail(format!("{detail} {mismatches:?}"))
    }
}

fn criterion_3() -> Check {
    let limit = Duration::from_secs(1);
    let start = Instant::now();
    let o = vdwt(&["solve", "--a", "1", "--b", "1", "--r", "2", "--no-cache"]);
    let elapsed = start.elapsed();
    let printed = String::from_utf8_lossy(&o.stdout).trim().to_string();
    // w(3,2) = 9 from exhaustive enumeration.
    let brute = brute_force_decide(fam(1, 1), 2, 8).unwrap()
        && !brute_force_decide(fam(1, 1), 2, 9).unwrap();
    let detail = format!(
        "solve printed {printed}; brute force agrees: {brute}; {}",
        within(elapsed, limit)
    );
    if printed == "9" && brute && elapsed <= limit {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_4() -> Check {
    let limit = Duration::from_secs(60);
    let start = Instant::now();
    let n = 100_000;
    let mut cases = vec![(5, 2, 2)];
    cases.extend((2..=7).map(|b| (5, 1, b)));
    cases.extend([(6, 1, 8), (6, 1, 9)]);
    let mut failures = Vec::new();
    for &(c, a, b) in &cases {
        let verdict = verify_gamma_against(GammaParams::new(c).unwrap(), fam(a, b), n).unwrap();
        if let Verdict::Violation(t) = verdict {
            failures.push(format!(
                "gamma_{c} vs ({a},{b}): ({}, {}, {})",
                t.x, t.y, t.z
            ));
        }
    }
    let doubling = doubling_prefix(1_000_000).unwrap();
    for a in 1..=10 {
        if let Verdict::Violation(t) = verify_coloring(fam(a, 2 * a), &doubling) {
            failures.push(format!(
                "doubling vs ({a},{}): ({}, {}, {})",
                2 * a,
                t.x,
                t.y,
                t.z
            ));
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{} block-coloring and 10 doubling checks, {} failing; {}{}",
        cases.len(),
        failures.len(),
        within(elapsed, limit),
        if failures.is_empty() {
            String::new()
        } else {
            format!(": {}", failures.join("; "))
        }
    );
    if failures.is_empty() && elapsed <= limit {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_5() -> Check {
    let mut wrong = Vec::new();
    for a in 1..=50u32 {
        for b in a..=50u32 {
            let diff = i64::from(b) - 2 * i64::from(a);
            if regularity_necessary(fam(a, b)) != matches!(diff, -2 | -1 | 1) {
                wrong.push((a, b));
            }
        }
    }
    let detail = format!("1275 families, {} disagreements", wrong.len());
    if wrong.is_empty() {
        pass(detail)
    } else {
        fail(format!("{detail} {wrong:?}"))
    }
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let o = vdwt(&[
        "bounds",
        "--a-max",
        "3",
        "--b-max",
        "11",
        "--shipped-axioms",
        "--shipped-reference",
        "--search-lower",
        "--search-max-r",
        "3",
        "--search-max-n",
        "600",
        "--search-budget",
        "10000000",
        "--format",
        "json",
        "--no-cache",
    ]);
    let elapsed = start.elapsed();
    let records: Vec<BoundRecord> = match serde_json::from_slice(&o.stdout) {
        Ok(r) => r,
        Err(e) => return fail(format!("unreadable table: {e}")),
    };
    let by_family: BTreeMap<(u32, u32), &BoundRecord> =
        records.iter().map(|r| (r.family(), r)).collect();
    let reference = ReferenceTable::shipped();
    let mut problems = Vec::new();
    for entry in reference.entries() {
        let Some(rec) = by_family.get(&(entry.a, entry.b)) else {
            problems.push(format!("({},{}) missing", entry.a, entry.b));
            continue;
        };
        if (entry.a, entry.b) == (3, 4) {
            let flagged = rec.flags.iter().any(|f| f.starts_with("reference-upper("));
            if rec.upper != Some(Dor::Finite(4)) || !flagged || rec.lower != entry.lower {
                problems.push(format!(
                    "(3,4) expected upper 4 with a flag, got {:?} {:?}",
                    rec.upper, rec.flags
                ));
            }
            continue;
        }
        if rec.lower != entry.lower || rec.upper != Some(entry.upper) {
            problems.push(format!(
                "({},{}) engine {}-{:?}, reference {}-{}",
                entry.a, entry.b, rec.lower, rec.upper, entry.lower, entry.upper
            ));
        }
    }
    // A lower bound of 2 must come from a finished search or a quoted value.
    for rec in &records {
        if rec.lower == Dor::Finite(2) {
            let backed = rec.lower_provenance.iter().any(|j| {
                matches!(
                    j,
                    Justification::Search { r: 2, .. } | Justification::Axiom { .. }
                )
            });
            if !backed {
                problems.push(format!("({},{}) lower 2 without a source", rec.a, rec.b));
            }
        }
        let cut_at_two = rec
            .flags
            .iter()
            .any(|f| f.starts_with("search-cutoff(r=2") || f.starts_with("search-max-n(r=2"));
        if cut_at_two && rec.lower != Dor::Finite(1) {
            problems.push(format!(
                "({},{}) cut off at r=2 but lower {}",
                rec.a, rec.b, rec.lower
            ));
        }
    }
    if o.status.code() != Some(0) {
        problems.push(format!("bounds exited with {:?}", o.status.code()));
    }
    let detail = format!(
        "{} reference entries, {} problems; (3,4) upper 4 flagged; {:.2} s",
        reference.entries().len(),
        problems.len(),
        elapsed.as_secs_f64()
    );
    if problems.is_empty() {
        pass(detail)
    } else {
        fail(format!("{detail}: {}", problems.join("; ")))
    }
}

fn computed_values() -> BTreeMap<(u32, u32, u32), u32> {
    let mut values = BTreeMap::new();
    let cfg = SearchConfig {
        max_n: 600,
        node_budget: Some(2_000_000),
        ..SearchConfig::default()
    };
    for a in 1..=4 {
        for b in a..=11 {
            for r in 1..=3 {
                if b == 2 * a && r > 1 {
                    continue;
                }
                if r == 3 && !matches!((a, b), (1, 1) | (2, 2)) {
                    continue;
                }
                if let FindN::Exact { n, .. } = find_n(fam(a, b), r, &cfg).unwrap() {
                    values.insert((a, b, r), n);
                }
            }
        }
    }
    values
}

fn criterion_7(values: &BTreeMap<(u32, u32, u32), u32>) -> Check {
    let (mut embedded, mut failures) = (0u64, 0u64);
    for a in 1..=5 {
        for b in a..=10 {
            for i in 1..=5 {
                let shifted = fam(a + i, b + 2 * i);
                for t in enumerate_triples(shifted, 500) {
                    match embed_triple(fam(a, b), i, t) {
                        Ok(e) if e.is_member_of(fam(a, b)) && e.elements() == t.elements() => {}
                        _ => failures += 1,
                    }
                    embedded += 1;
                }
            }
        }
    }
    let mut pairs = 0;
    let mut bad = Vec::new();
    for (&(a, b, r), &n) in values {
        for i in 1..=4 {
            if let Some(&m) = values.get(&(a + i, b + 2 * i, r)) {
                pairs += 1;
                if n > m {
                    bad.push((a, b, i, r));
                }
            }
        }
    }
    let detail = format!(
        "{embedded} embeddings, {failures} failures; {pairs} shift pairs, {} violations",
        bad.len()
    );
    if failures == 0 && bad.is_empty() && pairs > 0 {
        pass(detail)
    } else {
        fail(format!("{detail} {bad:?}"))
    }
}

fn criterion_8(values: &BTreeMap<(u32, u32, u32), u32>) -> Check {
    let mut pairs = 0;
    let mut bad = Vec::new();
    for (&(a, b, r), &n) in values {
        if let Some(&m) = values.get(&(a, b, r + 1)) {
            pairs += 1;
            if n > m {
                bad.push((a, b, r));
            }
        }
    }
    let cfg = SearchConfig::default();
    let mut sampled = 0;
    for (&(a, b, r), &n) in values.iter().filter(|((_, _, r), n)| *r == 2 && **n <= 120) {
        for m in n..=n + 3 {
            sampled += 1;
            if decide(fam(a, b), r, m, &cfg).unwrap().status != SearchStatus::Unsatisfiable {
                bad.push((a, b, r));
            }
        }
    }
    let detail = format!(
        "{pairs} (r, r+1) pairs, {sampled} unsatisfiable extensions, {} violations",
        bad.len()
    );
    if bad.is_empty() && pairs > 0 && sampled > 0 {
        pass(detail)
    } else {
        fail(format!("{detail} {bad:?}"))
    }
}

type F = FBig<HalfEven, 2>;

fn float(v: u64) -> F {
    F::from(v).with_precision(200).value()
}

fn criterion_9() -> Check {
    let limit = 1_000_000u64;
    let mut disagreements = Vec::new();
    let mut ambiguous = 0;
    for c in 3..=10u32 {
        let gp = GammaParams::new(c).unwrap();
        let p = float(2 * u64::from(c) - 2) / float(c.into());
        let eps = float(1) / (float(1 << 50) * float(1 << 50));
        let mut starts = Vec::new();
        let mut tied = Vec::new();
        let mut pk = p.clone();
        loop {
            let start = u64::try_from(pk.ceil().to_int().value()).unwrap();
            if &pk.ceil() - &pk < eps || &pk - &pk.floor() < eps {
                tied.push(start);
            }
            starts.push(start);
            if start > limit {
                break;
            }
            pk = &pk * &p;
        }
        let mut k = 0usize;
        for m in 1..=limit {
            while k < starts.len() && starts[k] <= m {
                k += 1;
            }
            if tied.contains(&m) {
                ambiguous += 1;
                continue;
            }
            if gamma_color(gp, m) != k as u32 % c {
                disagreements.push((c, m));
            }
        }
    }
    let detail = format!(
        "8,000,000 points, {} disagreements, {ambiguous} inside the tie band",
        disagreements.len()
    );
    if disagreements.is_empty() {
        pass(detail)
    } else {
        fail(format!(
            "{detail} {:?}",
            &disagreements[..disagreements.len().min(10)]
        ))
    }
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let values = computed_values();
    let checks: Vec<(u32, Check)> = vec![
        (1, criterion_1(tmp.path())),
        (2, criterion_2()),
        (3, criterion_3()),
        (4, criterion_4()),
        (5, criterion_5()),
        (6, criterion_6()),
        (7, criterion_7(&values)),
        (8, criterion_8(&values)),
        (9, criterion_9()),
    ];
    let mut unexpected = 0;
    for (id, check) in &checks {
        let status = if check.ok { "PASS" } else { "FAIL" };
        let note = if !check.ok && KNOWN_RED.contains(id) {
            " [known red]"
        } else {
            ""
        };
        println!("criterion {id}: {status}{note} - {}", check.detail);
        if !check.ok && !KNOWN_RED.contains(id) {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
