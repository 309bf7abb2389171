//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run alone with `cargo test -p multivalent --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use multivalent::harness::{all_checks, reports_to_json, run_campaign, run_check, CampaignConfig};
use multivalent::VerifyReport;

struct Outcome {
    pass: bool,
    detail: String,
}

fn checks(cfg: &CampaignConfig, ids: &[&str]) -> Outcome {
    let reports: Vec<VerifyReport> = ids
        .iter()
        .map(|id| run_check(cfg, id).expect("known check id"))
        .collect();
    let pass = reports.iter().all(|r| r.pass);
    let detail = reports
        .iter()
        .map(|r| {
            let mut line = format!("{r}");
            if !r.pass {
                for n in &r.notes {
                    line.push_str(&format!("\n        note: {n}"));
                }
            }
            line
        })
        .collect::<Vec<_>>()
        .join("\n      ");
    Outcome { pass, detail }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if took > limit {
        out.pass = false;
    }
    out.detail = format!("{}\n      elapsed {:.2?} (limit {:?})", out.detail, took, limit);
    out
}

fn determinism(cfg: &CampaignConfig) -> Outcome {
    let ids = all_checks();
    let start = Instant::now();
    let first = reports_to_json(&run_campaign(cfg, &ids).expect("default campaign runs"));
    let one = start.elapsed();
    let second = reports_to_json(&run_campaign(cfg, &ids).expect("default campaign runs"));
    let identical = first == second;
    let fast = one < Duration::from_secs(300);
    Outcome {
        pass: identical && fast,
        detail: format!(
            "{} checks, reports identical: {identical}, {} bytes, one campaign took {one:.2?} (limit 300s)",
            ids.len(),
            first.len()
        ),
    }
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let cfg = CampaignConfig::default();
    let criteria: Vec<Criterion> = vec![
        (
            "operator: differential recursion matches the closed form",
            Box::new(|| timed(Duration::from_secs(5), || checks(&cfg, &["operator-recursion"]))),
        ),
        (
            "coefficient test: extremal terms are sharp",
            Box::new(|| checks(&cfg, &["coefficient-sharpness"])),
        ),
        (
            "coefficient test: sufficient on the disk grid",
            Box::new(|| timed(Duration::from_secs(60), || checks(&cfg, &["coefficient-sufficiency"]))),
        ),
        (
            "coefficient test: necessary on the real radius",
            Box::new(|| checks(&cfg, &["coefficient-necessity"])),
        ),
        (
            "kernel real part at least 1/2 under the inclusion hypothesis",
            Box::new(|| checks(&cfg, &["kernel-real-part"])),
        ),
        (
            "distortion: extremal attains, members stay inside",
            Box::new(|| checks(&cfg, &["distortion"])),
        ),
        (
            "neighborhoods: radius is exact and sharp",
            Box::new(|| checks(&cfg, &["neighborhood-radius", "neighborhood-sharpness"])),
        ),
        (
            "partial sums: ratio bounds hold and are approached",
            Box::new(|| checks(&cfg, &["partial-sums", "partial-sums-sharpness"])),
        ),
        (
            "quasi-convolution closure and its sharpness",
            Box::new(|| checks(&cfg, &["quasi-convolution", "closure-sharpness"])),
        ),
        (
            "fractional compositions and the quadrature oracle",
            Box::new(|| checks(&cfg, &["fractional-compose", "fractional-quadrature"])),
        ),
        (
            "fractional integral and derivative bounds",
            Box::new(|| checks(&cfg, &["fractional-integral-bounds", "fractional-derivative-bounds"])),
        ),
        ("determinism and campaign runtime", Box::new(|| determinism(&cfg))),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!("[{verdict}] criterion {:>2}: {name}\n      {}", i + 1, out.detail);
    }
    println!("\n{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
