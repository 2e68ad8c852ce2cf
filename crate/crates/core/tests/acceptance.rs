//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits nonzero if any criterion fails.
//!
//! Set `BOA_STRETCH=1` to add the longest stretch workbook, (15,13312,10).

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use boa_sieve::orchestrator::{Schedule, SieveOptions, Visibility};
use boa_sieve::{
    brute_force_enumerate, build_workbook, coexistence_propagate, enumerate_initial, mirror,
    DistributionSet, ParameterTriple, RunReport, SetKind, Verdict, Workbook,
};
use common::{all_distributions, corpus_for, witness_consistency};

type Outcome = Result<String, String>;

fn t(n: usize, m: u64, tau: usize) -> ParameterTriple {
    ParameterTriple::new(n, m, tau).unwrap()
}

/// One row of a published count table: `initial -> final` for consecutive
/// lengths starting at `first_n`.
struct Row {
    m: u64,
    tau: usize,
    first_n: usize,
    p: &'static [(usize, usize)],
    q: &'static [(usize, usize)],
    w: &'static [(usize, usize)],
}

const ROWS_96: [Row; 3] = [
    Row {
        m: 96,
        tau: 4,
        first_n: 4,
        p: &[(1, 1), (6, 6), (12, 12), (20, 10), (34, 9), (37, 0)],
        q: &[(0, 0), (1, 1), (4, 4), (12, 6), (41, 11), (97, 0)],
        w: &[(1, 1), (7, 7), (16, 16), (32, 16), (75, 20), (134, 0)],
    },
    Row {
        m: 48,
        tau: 3,
        first_n: 3,
        p: &[(1, 1), (6, 6), (13, 13), (31, 25), (53, 38), (96, 62)],
        q: &[(0, 0), (1, 1), (4, 4), (13, 9), (41, 30), (110, 85)],
        w: &[(1, 1), (7, 7), (17, 17), (44, 34), (94, 68), (206, 147)],
    },
    Row {
        m: 24,
        tau: 2,
        first_n: 2,
        p: &[(1, 1), (6, 6), (13, 13), (30, 28), (49, 47), (74, 69)],
        q: &[(0, 0), (1, 1), (5, 5), (19, 17), (54, 52), (130, 125)],
        w: &[(1, 1), (7, 7), (18, 18), (49, 45), (103, 99), (204, 194)],
    },
];

const ROWS_192: [Row; 1] = [Row {
    m: 192,
    tau: 5,
    first_n: 5,
    p: &[(1, 1), (6, 6), (12, 12), (21, 8), (35, 4), (35, 0)],
    q: &[(0, 0), (1, 1), (4, 4), (12, 4), (32, 4), (85, 0)],
    w: &[(1, 1), (7, 7), (16, 16), (33, 12), (67, 8), (120, 0)],
}];

const ROWS_112: [Row; 3] = [
    Row {
        m: 112,
        tau: 4,
        first_n: 4,
        p: &[(1, 1), (7, 7), (15, 13), (31, 12), (58, 16), (72, 9), (88, 0)],
        q: &[(0, 0), (1, 1), (5, 3), (17, 6), (59, 18), (158, 24), (373, 0)],
        w: &[(1, 1), (8, 8), (20, 16), (48, 18), (117, 34), (230, 33), (461, 0)],
    },
    Row {
        m: 56,
        tau: 3,
        first_n: 3,
        p: &[(1, 1), (7, 7), (17, 16), (49, 40), (95, 68), (199, 135), (311, 193)],
        q: &[(0, 0), (1, 1), (4, 3), (15, 14), (59, 44), (181, 129), (451, 313)],
        w: &[(1, 1), (8, 8), (21, 19), (64, 54), (154, 112), (380, 264), (762, 506)],
    },
    Row {
        m: 28,
        tau: 2,
        first_n: 2,
        p: &[(1, 1), (7, 7), (17, 17), (46, 43), (87, 82), (145, 137), (208, 196)],
        q: &[(0, 0), (1, 1), (5, 4), (23, 22), (79, 76), (205, 195), (469, 450)],
        w: &[(1, 1), (8, 8), (22, 21), (69, 65), (166, 158), (350, 332), (677, 646)],
    },
];

const ROWS_224: [Row; 1] = [Row {
    m: 224,
    tau: 5,
    first_n: 7,
    p: &[(15, 11), (32, 4), (63, 5), (74, 2), (108, 0)],
    q: &[(4, 2), (16, 2), (47, 4), (141, 4), (337, 0)],
    w: &[(19, 13), (48, 6), (110, 9), (215, 6), (445, 0)],
}];

/// Compares `report` with the listed cells; `initial_only` skips the final
/// counts.
fn compare(report: &RunReport, rows: &[Row], initial_only: bool) -> Vec<String> {
    let mut bad = Vec::new();
    for row in rows {
        for (kind, cells) in [(SetKind::P, row.p), (SetKind::Q, row.q), (SetKind::W, row.w)] {
            for (off, &(init, fin)) in cells.iter().enumerate() {
                let triple = t(row.first_n + off, row.m, row.tau);
                let Some(cell) = report.cell(triple) else {
                    bad.push(format!("{kind}{triple} missing"));
                    continue;
                };
                let got = (cell.initial.get(kind), cell.last.get(kind));
                if got.0 != init || (!initial_only && got.1 != fin) {
                    bad.push(format!(
                        "{kind}{triple}: expected {init}->{fin}, got {}->{}",
                        got.0, got.1
                    ));
                }
            }
        }
    }
    bad
}

fn verdict_is(report: &RunReport, triple: ParameterTriple, want: Verdict) -> Result<(), String> {
    match report.cell(triple) {
        Some(c) if c.verdict == want => Ok(()),
        Some(c) => Err(format!("{triple}: verdict {} (wanted {want})", c.verdict)),
        None => Err(format!("{triple}: not in workbook")),
    }
}

fn run_workbook(target: ParameterTriple, options: &SieveOptions) -> (Workbook, RunReport) {
    let mut wb = build_workbook(target, 2).unwrap();
    let report = wb.run_fixed_point(options).unwrap();
    (wb, report)
}

fn cell_spot(report: &RunReport, kind: SetKind, triple: ParameterTriple, init: usize, fin: usize) -> Result<(), String> {
    let c = report.cell(triple).ok_or_else(|| format!("{triple} missing"))?;
    let got = (c.initial.get(kind), c.last.get(kind));
    if got == (init, fin) {
        Ok(())
    } else {
        Err(format!("{kind}{triple}: expected {init}->{fin}, got {}->{}", got.0, got.1))
    }
}

fn joined(bad: Vec<String>) -> Result<(), String> {
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad.join("; "))
    }
}

struct Runs {
    wb96: Workbook,
    r96: RunReport,
    wb192: Workbook,
    r192: RunReport,
    wb112: Workbook,
    r112: RunReport,
    wb224: Workbook,
    r224: RunReport,
}

fn criterion_1(runs: &Runs) -> Outcome {
    // Initial counts come straight from enumeration; recompute them outside
    // the workbook as well.
    let mut bad = compare(&runs.r96, &ROWS_96, true);
    for row in &ROWS_96 {
        for (kind, cells) in [(SetKind::P, row.p), (SetKind::Q, row.q), (SetKind::W, row.w)] {
            for (off, &(init, _)) in cells.iter().enumerate() {
                let triple = t(row.first_n + off, row.m, row.tau);
                let got = enumerate_initial(triple, kind).map_err(|e| e.to_string())?.len();
                if got != init {
                    bad.push(format!("enumerate {kind}{triple}: {got} != {init}"));
                }
            }
        }
    }
    joined(bad)?;
    Ok("P/Q/W(n,96,4), P/Q/W(n,48,3), P/Q/W(n,24,2) initial counts match".into())
}

fn criterion_2(runs: &Runs) -> Outcome {
    let r = &runs.r96;
    joined(compare(r, &ROWS_96, false))?;
    verdict_is(r, t(9, 96, 4), Verdict::Nonexistent)?;
    verdict_is(r, t(8, 48, 3), Verdict::Undecided { survivors: 147 })?;
    if !runs.wb96.set(t(9, 96, 4), SetKind::W).unwrap().is_empty() {
        return Err("W(9,96,4) not empty".into());
    }
    Ok(format!(
        "(9,96,4) NONEXISTENT; all 54 final counts match ({} passes)",
        r.passes.len()
    ))
}

fn criterion_3(runs: &Runs) -> Outcome {
    let r = &runs.r192;
    joined(compare(r, &ROWS_192, false))?;
    verdict_is(r, t(10, 192, 5), Verdict::Nonexistent)?;
    if !runs.wb192.set(t(10, 192, 5), SetKind::W).unwrap().is_empty() {
        return Err("W(10,192,5) not empty".into());
    }
    let derived = coexistence_propagate(&[(t(9, 96, 4), runs.r96.target_verdict())]);
    if !derived.contains(&(t(10, 192, 5), Verdict::Nonexistent)) {
        return Err("coexistence from (9,96,4) does not give (10,192,5)".into());
    }
    Ok("(10,192,5) W 120->0, P(9,192,5) 35->4, Q(10,192,5) 85->0; coexistence agrees".into())
}

fn criterion_4(runs: &Runs) -> Outcome {
    let r = &runs.r112;
    joined(compare(r, &ROWS_112, false))?;
    cell_spot(r, SetKind::W, t(10, 112, 4), 461, 0)?;
    cell_spot(r, SetKind::W, t(8, 112, 4), 117, 34)?;
    cell_spot(r, SetKind::Q, t(9, 112, 4), 158, 24)?;
    // The three spot cells below sit in the second half of the table, at
    // lengths 8 and 9 of the strength 3 and 2 rows.
    cell_spot(r, SetKind::P, t(8, 56, 3), 199, 135)?;
    cell_spot(r, SetKind::W, t(9, 56, 3), 762, 506)?;
    cell_spot(r, SetKind::W, t(8, 28, 2), 677, 646)?;
    verdict_is(r, t(10, 112, 4), Verdict::Nonexistent)?;
    verdict_is(r, t(11, 112, 4), Verdict::Nonexistent)?;
    let derived = coexistence_propagate(&[(t(10, 112, 4), Verdict::Nonexistent)]);
    if !derived.contains(&(t(11, 112, 4), Verdict::Nonexistent)) {
        return Err("column extension from (10,112,4) missing".into());
    }
    Ok(format!(
        "(10,112,4) and (11,112,4) NONEXISTENT; all 63 listed cells match ({} passes)",
        r.passes.len()
    ))
}

fn criterion_5(runs: &Runs) -> Outcome {
    let r = &runs.r224;
    joined(compare(r, &ROWS_224, false))?;
    verdict_is(r, t(11, 224, 5), Verdict::Nonexistent)?;
    if !runs.wb224.set(t(11, 224, 5), SetKind::P).unwrap().is_empty() {
        return Err("P(11,224,5) not empty".into());
    }
    let from_run = coexistence_propagate(&[(t(11, 224, 5), r.target_verdict())]);
    let from_112 = coexistence_propagate(&[(t(10, 112, 4), runs.r112.cell(t(10, 112, 4)).unwrap().verdict)]);
    for (label, derived) in [("(11,224,5)", from_run), ("(10,112,4)", from_112)] {
        if !derived.contains(&(t(12, 224, 5), Verdict::Nonexistent)) {
            return Err(format!("(12,224,5) not derived from {label}"));
        }
    }
    Ok("(11,224,5) W 445->0, P 108->0; (12,224,5) NONEXISTENT by coexistence".into())
}

/// Largest composition count used for the strength-0 triples, whose initial
/// sets contain every composition of `M`.
const STRENGTH_ZERO_LIMIT: u128 = 200_000;

fn criterion_6a() -> Outcome {
    let mut checked = 0;
    let mut skipped = 0;
    for n in 1..=5usize {
        for m in 1..=96u64 {
            for tau in 0..=n {
                let Ok(triple) = ParameterTriple::new(n, m, tau) else {
                    continue;
                };
                if tau == 0 {
                    let visits = (0..n as u128)
                        .fold(1u128, |acc, i| acc * (m as u128 + n as u128 - i) / (i + 1));
                    if visits > STRENGTH_ZERO_LIMIT {
                        skipped += 1;
                        continue;
                    }
                }
                let fast = enumerate_initial(triple, SetKind::W).map_err(|e| e.to_string())?;
                let slow = brute_force_enumerate(triple).map_err(|e| e.to_string())?;
                if fast != slow {
                    return Err(format!("{triple}: {} vs {} members", fast.len(), slow.len()));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "enumeration equals exhaustive search on {checked} triples (n<=5, M<=96; {skipped} strength-0 triples above {STRENGTH_ZERO_LIMIT} compositions skipped)"
    ))
}

fn partition_ok(wb: &Workbook, triple: ParameterTriple, initial: bool) -> Result<(), String> {
    let get = |k| {
        if initial {
            wb.initial_set(triple, k)
        } else {
            wb.set(triple, k)
        }
        .unwrap()
    };
    let (p, q, w) = (get(SetKind::P), get(SetKind::Q), get(SetKind::W));
    if p.len() + q.len() != w.len()
        || !p.iter().all(|x| w.contains(x) && !q.contains(x))
        || !q.iter().all(|x| w.contains(x))
    {
        return Err(format!("{triple}: P/Q do not partition W"));
    }
    if !p.iter().all(|x| x.0[0] >= 1) || !q.iter().all(|x| x.0[0] == 0) {
        return Err(format!("{triple}: misclassified member"));
    }
    Ok(())
}

fn criterion_6b(runs: &Runs) -> Outcome {
    let mut cells = 0;
    for wb in [&runs.wb96, &runs.wb192, &runs.wb112, &runs.wb224] {
        for triple in wb.rows().iter().flatten() {
            let w: DistributionSet = wb.initial_set(*triple, SetKind::W).unwrap();
            if !w.is_mirror_closed() || !w.iter().all(|x| w.contains(&mirror(x))) {
                return Err(format!("initial W{triple} not mirror closed"));
            }
            if !wb.set(*triple, SetKind::W).unwrap().is_mirror_closed() {
                return Err(format!("final W{triple} not mirror closed"));
            }
            partition_ok(wb, *triple, true)?;
            partition_ok(wb, *triple, false)?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells: W mirror closed, P/Q partition W, initial and final"))
}

fn criterion_6c(runs: &Runs) -> Outcome {
    let mut small = Vec::new();
    for target in [t(6, 64, 4), t(6, 128, 5), t(6, 192, 4), t(7, 192, 5), t(6, 320, 3)] {
        small.push(run_workbook(target, &SieveOptions::default()).0);
    }
    let mut arrays = 0;
    let mut cells = 0;
    for wb in small.iter().chain([&runs.wb96, &runs.wb192, &runs.wb112, &runs.wb224]) {
        for &triple in wb.rows().iter().flatten() {
            let corpus = corpus_for(triple);
            if corpus.is_empty() {
                continue;
            }
            cells += 1;
            let survivors = wb.set(triple, SetKind::W).unwrap();
            for array in &corpus {
                if !boa_sieve::oracle::verify_strength(array, triple.tau) {
                    return Err(format!("corpus array for {triple} lacks strength"));
                }
                for w in all_distributions(array) {
                    if !survivors.contains(&w) {
                        return Err(format!("{w} of a genuine {triple} array was removed"));
                    }
                }
                arrays += 1;
            }
        }
    }
    let mut consistent = 0;
    for n in 2..=6 {
        for array in corpus_for(t(n, 3 << (n - 1), n - 1)) {
            witness_consistency(&array)?;
            consistent += 1;
        }
        witness_consistency(&boa_sieve::oracle::make_replicated_factorial(n, 2).unwrap())?;
        consistent += 1;
    }
    Ok(format!(
        "{arrays} genuine arrays over {cells} cells survive; witness/hat/multiplicity identities hold on {consistent} arrays"
    ))
}

fn final_sets(wb: &Workbook) -> BTreeMap<ParameterTriple, DistributionSet> {
    wb.rows()
        .iter()
        .flatten()
        .map(|&t| (t, wb.set(t, SetKind::W).unwrap()))
        .collect()
}

fn criterion_6d(runs: &Runs) -> Outcome {
    let reference = final_sets(&runs.wb96);
    let variants = [
        (Schedule::Reversed, Visibility::Snapshot),
        (Schedule::Shuffled(7), Visibility::Snapshot),
        (Schedule::Shuffled(2024), Visibility::Immediate),
        (Schedule::BottomUp, Visibility::Immediate),
        (Schedule::Reversed, Visibility::Immediate),
    ];
    for (schedule, visibility) in variants {
        let options = SieveOptions {
            schedule,
            visibility,
            ..Default::default()
        };
        let (wb, _) = run_workbook(t(9, 96, 4), &options);
        if final_sets(&wb) != reference {
            return Err(format!("{schedule:?}/{visibility:?} reaches a different fixed point"));
        }
    }
    Ok(format!(
        "(9,96,4) fixed point identical under {} schedule/visibility combinations",
        variants.len() + 1
    ))
}

fn stretch(long: bool) -> Outcome {
    let mut targets = vec![
        t(10, 448, 6),
        t(11, 896, 7),
        t(12, 2560, 8),
        t(13, 5120, 9),
        t(12, 2816, 8),
        t(13, 5632, 9),
    ];
    if long {
        targets.push(t(15, 13312, 10));
    }
    let mut notes = Vec::new();
    for target in targets {
        let start = Instant::now();
        let (_, report) = run_workbook(target, &SieveOptions::default());
        let v = report.target_verdict();
        notes.push(format!("{target} {v} in {:.1?}", start.elapsed()));
        if v != Verdict::Nonexistent {
            return Err(notes.join("; "));
        }
    }
    if !long {
        notes.push("(15,13312,10) needs BOA_STRETCH=1".into());
    }
    Ok(notes.join("; "))
}

fn report(id: &str, title: &str, start: Instant, outcome: Outcome) -> bool {
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("[PASS] {id} {title}: {detail} [{secs:.1}s]");
            true
        }
        Err(detail) => {
            println!("[FAIL] {id} {title}: {detail} [{secs:.1}s]");
            false
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let defaults = SieveOptions::default();
    let (wb96, r96) = run_workbook(t(9, 96, 4), &defaults);
    let (wb192, r192) = run_workbook(t(10, 192, 5), &defaults);
    let (wb112, r112) = run_workbook(t(11, 112, 4), &defaults);
    let (wb224, r224) = run_workbook(t(11, 224, 5), &defaults);
    let runs = Runs {
        wb96,
        r96,
        wb192,
        r192,
        wb112,
        r112,
        wb224,
        r224,
    };
    println!("workbooks (9,96,4), (10,192,5), (11,112,4), (11,224,5) run in {:.1?}", start.elapsed());

    let mut ok = true;
    let now = Instant::now;
    let s = now();
    ok &= report("1", "initial counts, (9,96,4) workbook", s, criterion_1(&runs));
    let s = now();
    ok &= report("2", "final counts, (9,96,4) workbook", s, criterion_2(&runs));
    let s = now();
    ok &= report("3", "(10,192,5) workbook", s, criterion_3(&runs));
    let s = now();
    ok &= report("4", "(11,112,4) workbook", s, criterion_4(&runs));
    let s = now();
    ok &= report("5", "(11,224,5) workbook", s, criterion_5(&runs));
    let s = now();
    ok &= report("6a", "oracle equivalence", s, criterion_6a());
    let s = now();
    ok &= report("6b", "mirror closure and P/Q partition", s, criterion_6b(&runs));
    let s = now();
    ok &= report("6c", "soundness on genuine arrays", s, criterion_6c(&runs));
    let s = now();
    ok &= report("6d", "order independence", s, criterion_6d(&runs));
    let long = std::env::var("BOA_STRETCH").is_ok_and(|v| v == "1");
    let s = now();
    report("7", "stretch workbooks (not gating)", s, stretch(long));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
