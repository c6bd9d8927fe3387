//! Acceptance criteria. Prints one PASS/FAIL line per criterion, then fails if
//! any criterion failed.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use narayana_concat::constants::Constants;
use narayana_concat::numeric::decimal::parse_decimal;
use narayana_concat::numeric::PrecisionBudget;
use narayana_concat::par::Execution;
use narayana_concat::pipeline::{
    low_range_search, oracle_cross_check, prove, verify_certificate, ProofCertificate, ProofConfig,
};
use narayana_concat::reduction::expand_cf_terms;
use narayana_concat::sequence::{
    digit_count, dominant_bounds_check, index_window, narayana_terms, residual_bound_check,
};

const EXPECTED: [u64; 7] = [13, 19, 28, 41, 60, 88, 277];
const EXPECTED_N: [u64; 7] = [9, 10, 11, 12, 13, 14, 17];

struct Ledger(Vec<(u32, bool)>);

impl Ledger {
    fn record(&mut self, id: u32, ok: bool, elapsed: Duration, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!(
            "{tag} criterion {id} [{:.2}s] {detail}",
            elapsed.as_secs_f64()
        );
        self.0.push((id, ok));
    }
}

fn dec(s: &str) -> BigRational {
    parse_decimal(s).unwrap_or_else(|| panic!("not a decimal: {s}"))
}

fn in_open(x: &str, lo: &str, hi: &str) -> bool {
    let x = dec(x);
    dec(lo) < x && x < dec(hi)
}

fn values(cert: &ProofCertificate) -> Vec<u64> {
    let mut v: Vec<u64> = cert
        .low_range
        .solutions
        .iter()
        .map(|s| s.value.parse().unwrap())
        .collect();
    v.sort_unstable();
    v
}

fn tamper(cert: &ProofCertificate, edit: impl FnOnce(&mut ProofCertificate)) -> ProofCertificate {
    let mut t = cert.clone();
    edit(&mut t);
    t
}

#[test]
fn acceptance() {
    let mut ledger = Ledger(Vec::new());
    let exec = Execution::default();
    let budget = PrecisionBudget::default();
    let c = Constants::new();

    // 1. The full proof closes with the exact solution set.
    let t = Instant::now();
    let native = prove(&ProofConfig::default()).expect("native proof runs");
    let el = t.elapsed();
    let vals = values(&native.certificate);
    ledger.record(
        1,
        native.closed() && vals == EXPECTED && el < Duration::from_secs(600),
        el,
        format!("closed = {}, solutions = {vals:?}", native.closed()),
    );

    // 2. Low-range search.
    let t = Instant::now();
    let sols = low_range_search(250);
    let el = t.elapsed();
    let ns: Vec<u64> = sols.iter().map(|s| s.n).collect();
    let vs: Vec<u64> = sols
        .iter()
        .map(|s| s.value.to_string().parse().unwrap())
        .collect();
    ledger.record(
        2,
        ns == EXPECTED_N && vs == EXPECTED && el < Duration::from_secs(1),
        el,
        format!("n = {ns:?}, values = {vs:?}"),
    );

    // 3. Independent oracle up to 12 digits.
    let t = Instant::now();
    let oracle = oracle_cross_check(12, &exec);
    let el = t.elapsed();
    let detail = match &oracle {
        Ok(r) => format!("{} patterns, values {:?}", r.patterns, r.values),
        Err(e) => e.to_string(),
    };
    ledger.record(
        3,
        oracle.is_ok() && el < Duration::from_secs(30),
        el,
        detail,
    );

    // 4. Binet-type bounds and the index window.
    let t = Instant::now();
    let (mut dominant, mut residual, mut window) = (0u64, 0u64, 0u64);
    for n in 1..=1000u64 {
        dominant += u64::from(dominant_bounds_check(&c, n, &budget).unwrap());
        residual += u64::from(residual_bound_check(&c, n, &budget).unwrap());
    }
    // Digit counts of N_0, N_1, ...; N_n has about n / 6.02 digits.
    let digits: Vec<u64> = narayana_terms()
        .take(6200)
        .map(|v| digit_count(&v))
        .collect();
    assert!(*digits.last().unwrap() > 1000);
    for total in 3..=1000u64 {
        let (lo, hi) = index_window(&c, total, &budget).unwrap();
        let holds = digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == total)
            .all(|(n, _)| lo <= n as u64 && n as u64 <= hi);
        window += u64::from(holds);
    }
    let el = t.elapsed();
    ledger.record(
        4,
        dominant == 1000 && residual == 1000 && window == 998 && el < Duration::from_secs(60),
        el,
        format!(
            "dominant holds for {dominant}/1000, residual {residual}/1000, window {window}/998"
        ),
    );

    // 5 and 6. Reduction stages in both modes.
    let t = Instant::now();
    let paper = prove(&ProofConfig {
        paper_constants: true,
        ..ProofConfig::default()
    })
    .expect("paper proof runs");
    let el_paper = t.elapsed();
    let pr = paper
        .certificate
        .reduction
        .as_ref()
        .expect("paper reduction recorded");
    let nr = native
        .certificate
        .reduction
        .as_ref()
        .expect("native reduction recorded");
    let p1 = &pr.stage1;
    let n1 = &nr.stage1;
    let p1_ok = in_open(&p1.eps_min, "0.0160", "0.0175") && dec(&p1.m1_bound) <= dec("34");
    let n1_ok = dec(&n1.m1_bound) <= dec("40");
    ledger.record(
        5,
        p1_ok && n1_ok,
        el_paper,
        format!(
            "paper: eps_min = {}, m1 <= {} ({}); native: m1 <= {} ({})",
            p1.eps_min,
            p1.m1_bound,
            if p1_ok { "ok" } else { "out of range" },
            n1.m1_bound,
            if n1_ok { "ok" } else { "out of range" },
        ),
    );

    let p2 = pr.stage2.as_ref().expect("paper stage 2 recorded");
    let n2 = nr.stage2.as_ref().expect("native stage 2 recorded");
    let p2_eps = in_open(&p2.eps_min, "0.00085", "0.00095");
    let p2_n = dec(&p2.n_bound) < dec("200");
    let n2_ok = dec(&n2.n_bound) <= dec("250");
    ledger.record(
        6,
        p2_eps && p2_n && n2_ok,
        el_paper,
        format!(
            "paper: eps_min = {} (in range: {p2_eps}), n <= {} (< 200: {p2_n}); native: n <= {} (<= 250: {n2_ok})",
            p2.eps_min, p2.n_bound, n2.n_bound
        ),
    );

    // 7. Discrepancy report.
    let t = Instant::now();
    let ib = native
        .certificate
        .initial_bounds
        .as_ref()
        .expect("initial bounds recorded");
    let required = [
        ("h(eta1), step 1", "2.41"),
        ("Matveev coefficient, step 1", "6.9e12"),
        ("Matveev coefficient, step 2", "2.0e25"),
        ("n bound (n < H (ln n)^2)", "2.15e29"),
    ];
    let mut missing = Vec::new();
    for (q, paper_value) in required {
        let consistent = ib.discrepancies.iter().any(|d| {
            d.quantity == q
                && d.paper == paper_value
                && d.note.starts_with("NOT reproduced") == !d.reproduced
                && parse_decimal(&d.artifact).is_some()
        });
        if !consistent {
            missing.push(q);
        }
    }
    let matches_record = ib
        .discrepancies
        .iter()
        .any(|d| d.artifact == ib.matveev.stage1)
        && ib
            .discrepancies
            .iter()
            .any(|d| d.artifact == ib.matveev.stage2)
        && ib
            .discrepancies
            .iter()
            .any(|d| d.artifact == ib.gsl.n_bound);
    let reproduced = ib.discrepancies.iter().filter(|d| d.reproduced).count();
    ledger.record(
        7,
        missing.is_empty() && matches_record,
        t.elapsed(),
        format!(
            "{} entries, {reproduced} reproduced, missing or inconsistent: {missing:?}, artifacts match record: {matches_record}",
            ib.discrepancies.len()
        ),
    );

    // 8. Verification accepts a fresh certificate and rejects tampering.
    let t = Instant::now();
    let cert = &native.certificate;
    let fresh = verify_certificate(
        &ProofCertificate::from_json(&cert.to_json()).unwrap(),
        &exec,
    )
    .ok();
    let deleted = tamper(cert, |c| {
        c.low_range.solutions.remove(0);
    });
    let flipped = tamper(cert, |c| {
        let e = &mut c.reduction.as_mut().unwrap().stage1.eps_table[0].eps;
        *e = format!("-{e}");
    });
    let verdict = tamper(cert, |c| c.verdict.closed = !c.verdict.closed);
    let rejected: Vec<bool> = [deleted, flipped, verdict]
        .iter()
        .map(|c| !verify_certificate(c, &exec).ok())
        .collect();
    let el = t.elapsed();
    ledger.record(
        8,
        fresh && rejected.iter().all(|&r| r) && el < Duration::from_secs(5),
        el,
        format!(
            "fresh accepted: {fresh}; rejected (deleted solution, eps sign, verdict): {rejected:?}"
        ),
    );

    // 9. Continued fraction of tau.
    let t = Instant::now();
    let cf = expand_cf_terms(&c.tau, 80, &budget).expect("80 partial quotients");
    let big = BigInt::from(6) * BigInt::from(10).pow(29u32);
    let first = cf.first_index_above(&big);
    ledger.record(
        9,
        cf.determinants_ok() && cf.partial_quotients.len() >= 80 && first.is_some_and(|i| i < 80),
        t.elapsed(),
        format!(
            "determinants ok: {}, first q > 6e29 at index {first:?}",
            cf.determinants_ok()
        ),
    );

    let failed: Vec<u32> = ledger
        .0
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(id, _)| *id)
        .collect();
    println!(
        "{} of {} criteria passed",
        ledger.0.len() - failed.len(),
        ledger.0.len()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
