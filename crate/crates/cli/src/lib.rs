//! Library half of the `qeuclid` command: the expression language, the
//! emitters and report rendering. `main.rs` only parses arguments.

pub mod emit;
pub mod expr;
pub mod render;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use qeuclid_core::{verify, GaussRational, Mode, ScalarError, VerificationReport, VerifyError, VerifyOptions};

/// JSON schema version stamped on every document.
pub const SCHEMA: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleMode {
    Exact,
    /// Evaluate at each listed point; `random` more points are drawn from
    /// the seed.
    Sampled { points: Vec<GaussRational>, random: usize },
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

pub struct Run {
    pub dim: usize,
    pub point: Option<GaussRational>,
    pub report: VerificationReport,
}

/// Parses `p/q` or an integer.
pub fn parse_point(text: &str) -> Result<GaussRational, String> {
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text.trim(), "1"),
    };
    let num: i64 = num.parse().map_err(|_| format!("bad sample point {text:?}"))?;
    let den: i64 = den.parse().map_err(|_| format!("bad sample point {text:?}"))?;
    if den == 0 {
        return Err(format!("bad sample point {text:?}"));
    }
    Ok(GaussRational::ratio(num, den))
}

/// Small heights keep sampled arithmetic on the machine-word path.
pub fn random_point(rng: &mut ChaCha8Rng) -> GaussRational {
    loop {
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=9);
        if num != 0 && num.abs() != den {
            return GaussRational::ratio(num, den);
        }
    }
}

/// Runs every configured dimension (and sample point). Random points that
/// hit a pole are redrawn; listed points that do are a usage error.
pub fn run_verify(dims: &[usize], opts: &VerifyOptions, mode: &SampleMode) -> Result<Vec<Run>, RunError> {
    let mut runs = Vec::new();
    for &dim in dims {
        let opts = VerifyOptions { dim, ..opts.clone() };
        match mode {
            SampleMode::Exact => runs.push(Run { dim, point: None, report: verify(&opts, &Mode::Exact)? }),
            SampleMode::Sampled { points, random } => {
                for p in points {
                    match verify(&opts, &Mode::Sampled(p.clone())) {
                        Ok(report) => runs.push(Run { dim, point: Some(p.clone()), report }),
                        Err(VerifyError::Scalar(ScalarError::Pole)) => {
                            return Err(RunError::Usage(format!("sample point {p} is a pole")))
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                let mut drawn = 0;
                while drawn < *random {
                    let p = random_point(&mut rng);
                    match verify(&opts, &Mode::Sampled(p.clone())) {
                        Ok(report) => {
                            runs.push(Run { dim, point: Some(p), report });
                            drawn += 1;
                        }
                        Err(VerifyError::Scalar(ScalarError::Pole)) => continue,
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
    }
    Ok(runs)
}

pub fn exit_code(runs: &[Run]) -> i32 {
    if runs.iter().all(|r| r.report.all_pass()) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub fn verify_json(config: Json, runs: &[Run]) -> Json {
    let runs_json: Vec<Json> = runs
        .iter()
        .map(|r| {
            let count = |s| r.report.checks.iter().filter(|c| c.status == s).count();
            json!({
                "n": r.dim,
                "mode": if r.point.is_some() { "sampled" } else { "exact" },
                "point": r.point.as_ref().map(|p| p.to_string()),
                "passed": count(qeuclid_core::Status::Pass),
                "failed": count(qeuclid_core::Status::Fail),
                "info": count(qeuclid_core::Status::Info),
                "checks": serde_json::to_value(&r.report.checks).expect("report serializes"),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "command": "verify",
        "config": config,
        "runs": runs_json,
        "all_pass": exit_code(runs) == EXIT_PASS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qeuclid_core::Family;

    #[test]
    fn points_parse() {
        assert_eq!(parse_point("7/5").unwrap(), GaussRational::ratio(7, 5));
        assert_eq!(parse_point("-3").unwrap(), GaussRational::from_integer(-3));
        assert!(parse_point("1/0").is_err());
        assert!(parse_point("x").is_err());
    }

    #[test]
    fn listed_pole_is_usage_error() {
        let opts = VerifyOptions::new(3).families([Family::Rmatrix]);
        let mode = SampleMode::Sampled { points: vec![GaussRational::from_integer(-1)], random: 0 };
        assert!(matches!(run_verify(&[3], &opts, &mode), Err(RunError::Usage(_))));
    }

    #[test]
    fn random_points_are_seeded() {
        let opts = VerifyOptions::new(3).families([Family::Rmatrix]);
        let mode = SampleMode::Sampled { points: vec![], random: 2 };
        let a = run_verify(&[3], &opts, &mode).unwrap();
        let b = run_verify(&[3], &opts, &mode).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a.iter().map(|r| r.point.clone()).collect::<Vec<_>>(), b.iter().map(|r| r.point.clone()).collect::<Vec<_>>());
        assert_eq!(exit_code(&a), EXIT_PASS);
    }
}
