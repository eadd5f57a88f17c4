use anyhow::Result;
use clap::Args;
use serde::Serialize;

use quadfourier::suites::{resolve_lemmas, run_suite, SuiteParams, SuiteReport};

use crate::output::{emit, num};
use crate::{Common, Outcome};

const DEFAULT_SUITE_CAP: u128 = 1 << 26;

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    /// Lemma ids, comma separated, or `all`
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub lemma: Vec<String>,

    /// Random instances per lemma; 0 runs the exhaustive mode where one exists
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
}

#[derive(Serialize)]
struct Summary {
    records: usize,
    passed: usize,
    failed: usize,
    errored: usize,
}

#[derive(Serialize)]
struct VerificationReport<'a> {
    command: &'static str,
    config: (&'a Common, &'a VerifyArgs),
    suites: Vec<SuiteReport>,
    summary: Summary,
    pass: bool,
}

pub fn run(common: &Common, args: &VerifyArgs) -> Result<Outcome> {
    let lemmas = resolve_lemmas(&args.lemma)?;
    let params = SuiteParams {
        p: common.p,
        n: common.n,
        seed: common.seed,
        trials: args.trials,
        cap: common.cap.unwrap_or(DEFAULT_SUITE_CAP),
    };
    let suites = lemmas
        .iter()
        .map(|id| run_suite(id, &params))
        .collect::<quadfourier::Result<Vec<_>>>()?;
    let summary = Summary {
        records: suites.iter().map(|s| s.records.len()).sum(),
        passed: suites.iter().map(|s| s.passed).sum(),
        failed: suites.iter().map(|s| s.failed).sum(),
        errored: suites.iter().map(|s| s.errored).sum(),
    };
    let errored = summary.errored > 0;
    let pass = summary.failed == 0 && !errored;

    let mut rows = Vec::new();
    for s in &suites {
        for r in &s.records {
            let instance = serde_json::to_string(&r.instance)?;
            if let Some(e) = &r.error {
                rows.push(vec![
                    r.lemma.clone(),
                    r.trial.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    "false".into(),
                    e.clone(),
                    instance.clone(),
                ]);
            }
            for c in &r.checks {
                rows.push(vec![
                    r.lemma.clone(),
                    r.trial.to_string(),
                    c.label.clone(),
                    num(c.lhs),
                    num(c.rhs),
                    num(c.margin),
                    c.pass.to_string(),
                    String::new(),
                    instance.clone(),
                ]);
            }
        }
    }
    let report = VerificationReport {
        command: "verify",
        config: (common, args),
        suites,
        summary,
        pass,
    };
    emit(
        common,
        &report,
        &["lemma", "trial", "check", "lhs", "rhs", "margin", "pass", "error", "instance"],
        &rows,
    )?;
    if errored {
        anyhow::bail!("{} record(s) could not be evaluated", report.summary.errored);
    }
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}
