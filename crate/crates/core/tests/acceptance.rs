//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that the lines always show:
//! `cargo test -p qeuclid-core --test acceptance`.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qeuclid_core::{
    verify, Family, GaussRational, KConvention, Mode, QScalar, Status, VerificationReport, VerifyOptions,
};

const DIMS: [usize; 4] = [3, 4, 5, 6];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn run(dim: usize, families: &[Family]) -> VerificationReport {
    verify(&VerifyOptions::new(dim).families(families.to_vec()), &Mode::Exact).expect("exact run")
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Every listed id (with `{n}` substituted) is present and passes.
fn require(report: &VerificationReport, ids: &[String], problems: &mut Vec<String>) {
    for id in ids {
        match report.get(id) {
            Some(c) if c.status == Status::Pass => {}
            Some(c) => problems.push(format!("{id}: {:?} {}", c.status, c.residual.as_deref().unwrap_or(""))),
            None => problems.push(format!("{id}: missing")),
        }
    }
}

fn failures(report: &VerificationReport, problems: &mut Vec<String>) {
    problems.extend(report.failures().map(|c| format!("{}: {}", c.check_id, c.residual.as_deref().unwrap_or(""))));
}

fn outcome(problems: Vec<String>, within: bool, elapsed: Duration, budget: Duration) -> Outcome {
    let mut detail = format!("{:.2}s (budget {}s)", elapsed.as_secs_f64(), budget.as_secs());
    if !within {
        detail.push_str(" over budget");
    }
    if let Some(first) = problems.first() {
        let mut first = first.clone();
        first.truncate(160);
        detail = format!("{detail}; {} problem(s), first: {first}", problems.len());
    }
    Outcome { ok: problems.is_empty() && within, detail }
}

fn criterion1() -> Outcome {
    let mut problems = Vec::new();
    let mut worst = Duration::ZERO;
    for n in DIMS {
        let (r, t) = timed(|| run(n, &[Family::Rmatrix]));
        worst = worst.max(t);
        let mut ids: Vec<String> = ["braid", "projector.idempotent", "projector.orthogonal", "projector.complete", "decomposition", "ranks"]
            .iter()
            .map(|k| format!("rmatrix.{k}.N{n}"))
            .collect();
        for s in ["plus", "minus"] {
            ids.push(format!("rmatrix.gtt.lower.{s}.N{n}"));
            ids.push(format!("rmatrix.gtt.upper.{s}.N{n}"));
        }
        require(&r, &ids, &mut problems);
        failures(&r, &mut problems);
    }
    let budget = Duration::from_secs(60);
    outcome(problems, worst < budget, worst, budget)
}

fn criterion2() -> Outcome {
    let mut problems = Vec::new();
    let (_, t) = timed(|| {
        for n in DIMS {
            let r = run(n, &[Family::Space]);
            require(&r, &[format!("space.xrel.N{n}"), format!("space.confluence.N{n}")], &mut problems);
            failures(&r, &mut problems);
        }
    });
    let budget = Duration::from_secs(60);
    outcome(problems, t < budget, t, budget)
}

fn criterion3() -> Outcome {
    let mut problems = Vec::new();
    let (_, t) = timed(|| {
        for n in DIMS {
            let r = run(n, &[Family::Theorem(1), Family::Theorem(3)]);
            require(&r, &[format!("thm1.lambda.N{n}.plain"), format!("thm3.lambda.N{n}.barred")], &mut problems);
            failures(&r, &mut problems);
        }
    });
    let budget = Duration::from_secs(300);
    outcome(problems, t < budget, t, budget)
}

fn criterion4() -> Outcome {
    let mut problems = Vec::new();
    let (_, t) = timed(|| {
        for n in DIMS {
            let r = run(n, &[Family::Theorem(2), Family::Theorem(4)]);
            for (thm, tag) in [("thm2", "plain"), ("thm4", "barred")] {
                let mut ids: Vec<String> =
                    ["lambdalambda", "rtt", "gtt.upper", "gtt.lower"].iter().map(|k| format!("{thm}.{k}.N{n}.{tag}")).collect();
                if n % 2 == 1 {
                    ids.push(format!("{thm}.nor.N{n}.{tag}"));
                    ids.push(format!("{thm}.e00.N{n}.{tag}"));
                }
                require(&r, &ids, &mut problems);
            }
            failures(&r, &mut problems);
        }
        let mut opts = VerifyOptions::new(5).families([Family::Theorem(2), Family::Theorem(4)]);
        opts.k_convention = KConvention::H;
        let control = verify(&opts, &Mode::Exact).expect("control run");
        if control.all_pass() {
            problems.push("k = h did not break any check for N = 5".into());
        }
    });
    let budget = Duration::from_secs(600);
    outcome(problems, t < budget, t, budget)
}

fn criterion5() -> Outcome {
    let mut problems = Vec::new();
    let (_, t) = timed(|| {
        for n in [3, 5] {
            let r = run(n, &[Family::Theorem(5)]);
            require(&r, &[format!("thm5.diag.N{n}"), format!("thm5.mixed.N{n}")], &mut problems);
            failures(&r, &mut problems);
        }
        let r = run(4, &[Family::Theorem(5)]);
        match r.get("thm5.N4") {
            Some(c) if c.status == Status::Fail && c.residual.as_deref().is_some_and(|w| w.contains("not possible")) => {}
            other => problems.push(format!("N = 4 not reported impossible: {other:?}")),
        }
    });
    let budget = Duration::from_secs(300);
    outcome(problems, t < budget, t, budget)
}

fn criterion6() -> Outcome {
    let mut problems = Vec::new();
    let (_, t) = timed(|| {
        for n in [3, 4] {
            let r = run(n, &[Family::Frame]);
            for tag in ["plain", "barred"] {
                let ids: Vec<String> = [
                    "commute.x",
                    "commute.lambda",
                    "duality.left",
                    "duality.right",
                    "dirac",
                    "d.coordinates",
                    "d.quadratic",
                ]
                .iter()
                .map(|k| format!("frame.{k}.N{n}.{tag}"))
                .collect();
                require(&r, &ids, &mut problems);
            }
            failures(&r, &mut problems);
        }
    });
    let budget = Duration::from_secs(300);
    outcome(problems, t < budget, t, budget)
}

fn criterion7() -> Outcome {
    let mut problems = Vec::new();
    let q2 = QScalar::s_pow(4).to_string();
    let q_2 = QScalar::s_pow(-4).to_string();
    let (_, t) = timed(|| {
        for n in [3, 4, 5] {
            let r = run(n, &[Family::Geometry]);
            for tag in ["plain", "barred"] {
                let mut ids = vec![format!("geom.compat.reciprocal.N{n}.{tag}")];
                for b in ["plus", "minus"] {
                    ids.push(format!("geom.torsion.N{n}.{tag}.{b}"));
                    ids.push(format!("geom.braid.N{n}.{tag}.{b}"));
                    if n == 3 {
                        ids.push(format!("geom.curvature.N{n}.{tag}.{b}"));
                    }
                }
                require(&r, &ids, &mut problems);
                for (b, want) in [("plus", &q2), ("minus", &q_2)] {
                    let id = format!("geom.compat.factor.N{n}.{tag}.{b}");
                    let got = r.get(&id).and_then(|c| c.residual.clone());
                    if got.as_ref() != Some(want) {
                        problems.push(format!("{id}: factor {got:?}, expected {want}"));
                    }
                }
            }
            failures(&r, &mut problems);
        }
    });
    let budget = Duration::from_secs(900);
    outcome(problems, t < budget, t, budget)
}

fn verdicts(r: &VerificationReport) -> Vec<(String, Status)> {
    r.checks.iter().filter(|c| !c.check_id.starts_with("rmatrix.ranks")).map(|c| (c.check_id.clone(), c.status)).collect()
}

fn criterion8() -> Outcome {
    let mut problems = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut exact_total = Duration::ZERO;
    let mut sampled_total = Duration::ZERO;
    let mut points_used = Vec::new();
    for n in DIMS {
        let opts = VerifyOptions::new(n);
        let (exact, te) = timed(|| verify(&opts, &Mode::Exact).expect("exact run"));
        exact_total += te;
        let want = verdicts(&exact);
        let mut drawn = 0;
        while drawn < 3 {
            let p = GaussRational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9));
            let (sampled, ts) = timed(|| verify(&opts, &Mode::Sampled(p.clone())));
            let Ok(sampled) = sampled else { continue };
            drawn += 1;
            sampled_total += ts;
            points_used.push(format!("N{n}@{p}"));
            let got = verdicts(&sampled);
            if got != want {
                let diff = want.iter().zip(&got).find(|(a, b)| a != b).map(|(a, b)| format!("{a:?} vs {b:?}"));
                problems.push(format!("N = {n} at s = {p}: {}", diff.unwrap_or_else(|| "different check lists".into())));
            }
        }
    }
    // budget: one sampled evaluation costs less than half an exact one
    let per_point = sampled_total / 3;
    let within = per_point * 2 < exact_total;
    let mut o = outcome(problems, within, per_point, Duration::ZERO);
    o.detail = format!(
        "exact {:.2}s, sampled {:.2}s for 3 points ({:.2}s per point, ratio {:.2}); points {}; {}",
        exact_total.as_secs_f64(),
        sampled_total.as_secs_f64(),
        per_point.as_secs_f64(),
        per_point.as_secs_f64() / exact_total.as_secs_f64(),
        points_used.join(" "),
        o.detail.split_once("; ").map_or("", |x| x.1)
    );
    if !within {
        o.detail.push_str(" over budget");
    }
    o
}

fn main() {
    // libtest flags such as --nocapture are accepted and ignored
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [Criterion; 8] = [
        ("R-matrix layer", criterion1),
        ("quantum-space layer", criterion2),
        ("theorems 1 and 3", criterion3),
        ("theorems 2 and 4 with the k = h control", criterion4),
        ("theorem 5", criterion5),
        ("frame layer", criterion6),
        ("geometry layer", criterion7),
        ("mode agreement", criterion8),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let num = (k + 1).to_string();
        if !filter.is_empty() && !filter.contains(&num) {
            continue;
        }
        let o = check();
        if !o.ok {
            failed += 1;
        }
        println!("criterion {num} ({name}): {} - {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
