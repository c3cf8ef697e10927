//! Acceptance criteria, one PASS/FAIL line each.

use std::time::{Duration, Instant};

use ogring::{torsion_index, CoeffMode};
use ogring_verifier::certificate::{Status, VerificationCertificate};
use ogring_verifier::cli::{default_coeff, run_suite, Suite, DEFAULT_SEED};
use ogring_verifier::context::Context;
use ogring_verifier::suites::PROPERTY_CASES;
use serde_json::Value;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, title: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("criterion {id} {}: {title} ({detail})", if ok { "PASS" } else { "FAIL" });
    }
}

fn passed(cert: &VerificationCertificate, name: &str) -> bool {
    cert.check(name).is_some_and(|c| c.status == Status::Pass)
}

fn all_passed<'a>(cert: &'a VerificationCertificate, prefix: &str) -> (usize, Vec<&'a str>) {
    let matching: Vec<_> = cert.checks.iter().filter(|c| c.name.starts_with(prefix)).collect();
    let bad = matching.iter().filter(|c| c.status != Status::Pass).map(|c| c.name.as_str()).collect();
    (matching.len(), bad)
}

fn witness<'a>(cert: &'a VerificationCertificate, name: &str) -> &'a Value {
    &cert.check(name).expect("check exists").witness
}

fn suites(n: u32, which: &[Suite]) -> (Vec<VerificationCertificate>, Duration) {
    let start = Instant::now();
    let ctx = Context::new(n, default_coeff(n), DEFAULT_SEED).unwrap();
    let certs = which.iter().map(|&s| run_suite(s, &ctx).unwrap()).collect();
    (certs, start.elapsed())
}

fn main() {
    let mut report = Report { failed: 0 };

    let start = Instant::now();
    let appendix: Vec<VerificationCertificate> = (2..=12)
        .map(|n| run_suite(Suite::AppendixPieri, &Context::new(n, CoeffMode::Exact, DEFAULT_SEED).unwrap()).unwrap())
        .collect();
    let appendix_time = start.elapsed();

    let mut bad = Vec::new();
    let mut count = 0;
    for cert in &appendix {
        for prefix in ["pieri_", "ex_kogt_", "kog_definition"] {
            let (k, b) = all_passed(cert, prefix);
            count += k;
            bad.extend(b.into_iter().map(|name| format!("n={} {name}", cert.n)));
        }
    }
    report.line(
        1,
        "Pieri closed forms for n <= 12 and KOG example counts for r <= 10",
        bad.is_empty() && count > 0 && appendix_time < Duration::from_secs(60),
        format!("{count} checks, failures {bad:?}, {:.1}s", appendix_time.as_secs_f64()),
    );

    let mut bad = Vec::new();
    let mut count = 0;
    for cert in appendix.iter().filter(|c| c.n <= 10) {
        let (k, b) = all_passed(cert, "squares_products_");
        count += k;
        bad.extend(b.into_iter().map(|name| format!("n={} {name}", cert.n)));
    }
    let expected: usize = (2..=10u32).map(|n| n.saturating_sub(2) as usize).sum();
    report.line(
        2,
        "f(i)^2 congruence modulo I^2 for 1 < i < n <= 10",
        bad.is_empty() && count == expected && appendix_time < Duration::from_secs(60),
        format!("{count} of {expected} pairs, failures {bad:?}"),
    );

    let (eight, eight_time) = suites(8, &[Suite::Rees, Suite::Chow, Suite::MainTheorem]);
    let (rees8, chow8, main8) = (&eight[0], &eight[1], &eight[2]);
    let top = witness(chow8, "indXplus1n8_eonefifteen")["point_coefficient_mod_2^(m+1)"].as_i64();
    let ok3 = passed(rees8, "indXplus1n8_fonefifteen1")
        && passed(rees8, "indXplus1n8_fonefifteen2")
        && passed(chow8, "indXplus1n8_eonefifteen")
        && top == Some(16)
        && torsion_index(8).unwrap() == 16.into()
        && eight_time < Duration::from_secs(10);
    report.line(
        3,
        "n = 8 anchors",
        ok3,
        format!(
            "v(f1^15 g(J)) {}, v(z - 4t^2 f([2,8])) {}, point coefficient mod 32 = {top:?}, {:.1}s",
            witness(rees8, "indXplus1n8_fonefifteen1")["valuation"],
            witness(rees8, "indXplus1n8_fonefifteen2")["valuation"],
            eight_time.as_secs_f64()
        ),
    );

    let (sixteen, sixteen_time) = suites(16, &[Suite::Rees, Suite::Chow, Suite::MainTheorem]);
    let (rees16, chow16, main16) = (&sixteen[0], &sixteen[1], &sixteen[2]);
    let top16 = witness(chow16, "indXplus1_chow")["point_coefficient_mod_2^(m+1)"].as_i64();
    let ok4 = passed(rees16, "indXplus1_a")
        && passed(rees16, "indXplus1_b")
        && passed(chow16, "indXplus1_chow")
        && top16 == Some(1024)
        && passed(main16, "torsionindex")
        && passed(main16, "sizeofJset")
        && passed(main16, "degree_arithmetic")
        && sixteen_time < Duration::from_secs(30 * 60);
    report.line(
        4,
        "n = 16 theorem suite",
        ok4,
        format!(
            "v(y) {}, v(z - 2^8 t^2 f([2,16])) {}, point coefficient mod 2^11 = {top16:?}, |J| {}, {:.1}s",
            witness(rees16, "indXplus1_a")["valuation"],
            witness(rees16, "indXplus1_b")["valuation"],
            witness(main16, "sizeofJset")["size"],
            sixteen_time.as_secs_f64()
        ),
    );

    let names5 = [
        (0, "eonenj_quarter_square"),
        (0, "eonenj_quarter_square_minus_n"),
        (1, "eonenj_chow_quarter_square"),
        (1, "eonenj_chow_quarter_square_minus_n"),
    ];
    let mut detail = Vec::new();
    let mut ok5 = true;
    for (n, certs) in [(8, &eight), (16, &sixteen)] {
        for (i, name) in names5 {
            ok5 &= passed(&certs[i], name);
            detail.push(format!("n={n} {name} v={}", witness(&certs[i], name)["valuation"]));
        }
    }
    report.line(5, "valuation lower bounds for powers of f(1) and e(1)", ok5, detail.join(", "));

    let props = [
        (chow8, "prop_confluence"),
        (chow8, "prop_ring_axioms"),
        (chow8, "prop_modulus_soundness"),
        (rees8, "prop_valuation_oracle"),
        (rees8, "psi_compat_harness"),
        (rees16, "psi_compat_harness"),
    ];
    let mut ok6 = props.iter().all(|(c, name)| passed(c, name));
    for (c, name) in &props[..4] {
        ok6 &= witness(c, name)["cases"].as_u64().is_some_and(|k| k >= PROPERTY_CASES as u64);
        ok6 &= c.engine.seed == DEFAULT_SEED;
    }
    let mut mod4 = 0;
    for cert in appendix.iter().filter(|c| c.n <= 10) {
        let (k, b) = all_passed(cert, "relationinbar_mod4_");
        mod4 += k;
        ok6 &= b.is_empty();
    }
    ok6 &= mod4 > 0 && main8.passed();
    report.line(
        6,
        "oracle and property checks",
        ok6,
        format!("{} property checks with {PROPERTY_CASES} cases, seed {DEFAULT_SEED}, {mod4} mod-4 relation checks", props.len()),
    );

    if report.failed > 0 {
        println!("{} criteria failed", report.failed);
        std::process::exit(1);
    }
}
