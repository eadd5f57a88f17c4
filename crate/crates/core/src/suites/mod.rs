//! Randomized and exhaustive inequality suites, one per lemma.
//!
//! Every record carries the serialized instance it was checked on, so any
//! single record can be re-verified from its descriptor alone with
//! [`recheck`].

mod lemmas;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::check::{all_pass, Check};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::random::trial_rng;

pub use lemmas::*;

/// Lemma ids in run order.
pub const LEMMAS: &[&str] = &[
    "gauss",
    "quadaveu2",
    "quadavecorr",
    "calculation",
    "quadaveu2*",
    "shrink",
    "u2vsl2",
    "rankrestr",
    "bilinearqr",
    "justonebilinear",
    "rankaverage",
    "rankaveragecor",
    "nbds",
    "unitvectors",
    "bogolyubov",
    "rankgap",
    "gvn",
    "quadraticpart",
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub p: u32,
    pub n: usize,
    pub seed: u64,
    /// Zero selects exhaustive mode where a suite has one.
    pub trials: u64,
    pub cap: u128,
}

/// One lemma's generator and checker.
pub trait Suite {
    const ID: &'static str;
    type Instance: Serialize + DeserializeOwned + Send + Sync;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, trial: u64) -> Self::Instance;

    /// Every instance at this size, if the suite has an exhaustive mode.
    fn exhaustive(_field: PrimeField, _n: usize, _cap: u128) -> Option<Result<Vec<Self::Instance>>> {
        None
    }

    fn check(instance: &Self::Instance, cap: u128) -> Result<Vec<Check>>;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub lemma: String,
    pub trial: u64,
    pub instance: serde_json::Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub lemma: String,
    pub p: u32,
    pub n: usize,
    pub seed: u64,
    pub exhaustive: bool,
    pub records: Vec<Record>,
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.failed == 0 && self.errored == 0
    }
}

fn record<S: Suite>(trial: u64, instance: &S::Instance, cap: u128) -> Record {
    let value = serde_json::to_value(instance).expect("instances serialize");
    match S::check(instance, cap) {
        Ok(checks) => Record {
            lemma: S::ID.into(),
            trial,
            instance: value,
            pass: all_pass(&checks),
            checks,
            error: None,
        },
        Err(e) => Record {
            lemma: S::ID.into(),
            trial,
            instance: value,
            checks: Vec::new(),
            pass: false,
            error: Some(e.to_string()),
        },
    }
}

fn run<S: Suite>(params: &SuiteParams) -> Result<SuiteReport> {
    let field = PrimeField::new(params.p)?;
    let n = params.n;
    let (exhaustive, records) = if params.trials == 0 {
        match S::exhaustive(field, n, params.cap) {
            Some(list) => {
                let list = list?;
                let records: Vec<Record> = list
                    .par_iter()
                    .enumerate()
                    .map(|(i, inst)| record::<S>(i as u64, inst, params.cap))
                    .collect();
                (true, records)
            }
            None => (false, Vec::new()),
        }
    } else {
        let records: Vec<Record> = (0..params.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(params.seed, S::ID, t);
                let inst = S::generate(&mut rng, field, n, t);
                record::<S>(t, &inst, params.cap)
            })
            .collect();
        (false, records)
    };
    let errored = records.iter().filter(|r| r.error.is_some()).count();
    let passed = records.iter().filter(|r| r.pass).count();
    Ok(SuiteReport {
        lemma: S::ID.into(),
        p: params.p,
        n,
        seed: params.seed,
        exhaustive,
        failed: records.len() - passed - errored,
        passed,
        errored,
        records,
    })
}

fn recheck_as<S: Suite>(instance: &serde_json::Value, cap: u128) -> Result<Vec<Check>> {
    let inst: S::Instance = serde_json::from_value(instance.clone())
        .map_err(|e| Error::Parse(format!("{} instance: {e}", S::ID)))?;
    S::check(&inst, cap)
}

macro_rules! dispatch {
    ($id:expr, $f:ident, $($arg:expr),*) => {
        match $id {
            "gauss" => $f::<Gauss>($($arg),*),
            "quadaveu2" => $f::<QuadAveU2>($($arg),*),
            "quadavecorr" => $f::<QuadAveCorr>($($arg),*),
            "calculation" => $f::<Calculation>($($arg),*),
            "quadaveu2*" => $f::<QuadAveU2Dual>($($arg),*),
            "shrink" => $f::<Shrink>($($arg),*),
            "u2vsl2" => $f::<U2VsL2>($($arg),*),
            "rankrestr" => $f::<RankRestr>($($arg),*),
            "bilinearqr" => $f::<BilinearQr>($($arg),*),
            "justonebilinear" => $f::<JustOneBilinear>($($arg),*),
            "rankaverage" => $f::<RankAverage>($($arg),*),
            "rankaveragecor" => $f::<RankAverageCor>($($arg),*),
            "nbds" => $f::<Nbds>($($arg),*),
            "unitvectors" => $f::<UnitVectors>($($arg),*),
            "bogolyubov" => $f::<Bogolyubov>($($arg),*),
            "rankgap" => $f::<RankGapSuite>($($arg),*),
            "gvn" => $f::<Gvn>($($arg),*),
            "quadraticpart" => $f::<QuadraticPart>($($arg),*),
            other => Err(Error::InvalidArgument(format!("unknown lemma id {other:?}"))),
        }
    };
}

/// Runs one suite by id.
pub fn run_suite(lemma: &str, params: &SuiteParams) -> Result<SuiteReport> {
    dispatch!(lemma, run, params)
}

/// Re-verifies a serialized instance of the given suite.
pub fn recheck(lemma: &str, instance: &serde_json::Value, cap: u128) -> Result<Vec<Check>> {
    dispatch!(lemma, recheck_as, instance, cap)
}

/// Expands `"all"` and validates ids.
pub fn resolve_lemmas(ids: &[String]) -> Result<Vec<&'static str>> {
    let mut out = Vec::new();
    for id in ids {
        if id == "all" {
            out.extend_from_slice(LEMMAS);
            continue;
        }
        let found = LEMMAS
            .iter()
            .find(|&&l| l == id)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown lemma id {id:?}")))?;
        out.push(*found);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u32, n: usize, trials: u64) -> SuiteParams {
        SuiteParams {
            p,
            n,
            seed: 11,
            trials,
            cap: 1 << 24,
        }
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        for &id in LEMMAS {
            let (p, n) = match id {
                "gvn" => (5, 1),
                "justonebilinear" => (3, 2),
                _ => (3, 2),
            };
            let r = run_suite(id, &params(p, n, 6)).unwrap();
            assert_eq!(r.records.len(), 6, "{id}");
            assert!(r.pass(), "{id}: {:?}", r.records.iter().find(|r| !r.pass));
        }
    }

    #[test]
    fn records_recheck_from_descriptor() {
        for &id in LEMMAS {
            let (p, n) = if id == "gvn" { (5, 1) } else { (3, 2) };
            let r = run_suite(id, &params(p, n, 3)).unwrap();
            for rec in &r.records {
                let again = recheck(id, &rec.instance, 1 << 24).unwrap();
                assert_eq!(again, rec.checks, "{id}");
            }
        }
    }

    #[test]
    fn exhaustive_gauss() {
        let r = run_suite("gauss", &params(3, 2, 0)).unwrap();
        assert!(r.exhaustive);
        assert_eq!(r.records.len(), 3usize.pow(6));
        assert!(r.pass());
    }

    #[test]
    fn unknown_ids_are_rejected() {
        assert!(run_suite("nope", &params(3, 2, 1)).is_err());
        assert!(resolve_lemmas(&["all".into()]).unwrap().len() == LEMMAS.len());
        assert!(resolve_lemmas(&["gauss".into(), "bad".into()]).is_err());
    }

    #[test]
    fn same_seed_same_report() {
        let a = run_suite("shrink", &params(3, 2, 5)).unwrap();
        let b = run_suite("shrink", &params(3, 2, 5)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
