use std::fs;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use quadfourier::counting::{
    build_excess_4ap_set, expected_count, level_set_report, system_average, DEFAULT_AVERAGE_CAP,
};
use quadfourier::forms::QuadraticForm;
use quadfourier::harmonic::{u2_norm, u3_norm, FieldFunction};
use quadfourier::random::{random_set, trial_rng};
use quadfourier::{cs_complexity, LinearSystem, PrimeField};

use crate::output::{emit, num};
use crate::{Common, Outcome};

#[derive(Args, Debug, Clone, Serialize)]
pub struct CountArgs {
    /// `3ap`, `4ap`, `xy`, or `file:<path>` to a JSON catalog
    #[arg(long, default_value = "xy")]
    pub system: String,

    /// `full`, `random:<density>`, `excess4ap`, or `file:<path>` to a JSON table
    #[arg(long, default_value = "full")]
    pub set: String,

    /// Number of random sets drawn for `random:` specs
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ImpboundArgs {
    /// Random sets per dimension
    #[arg(long, default_value_t = 3)]
    pub trials: u64,

    /// Density of the random sets
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
}

/// One entry of a system catalog file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub p: u32,
    pub coeffs: Vec<Vec<u32>>,
    #[serde(default)]
    pub declared_cs_complexity: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
struct CountRow {
    system: String,
    set: String,
    p: u32,
    n: usize,
    density: f64,
    u2: f64,
    u3: f64,
    average: f64,
    expected: f64,
    deviation: f64,
}

fn systems(spec: &str, field: PrimeField) -> Result<Vec<(String, LinearSystem)>> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let entries: Vec<CatalogEntry> =
            serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
        let mut out = Vec::new();
        for e in entries {
            if e.p != field.p() {
                bail!("catalog entry {} is over F_{}, expected F_{}", e.name, e.p, field.p());
            }
            let s = LinearSystem::new(field, &e.coeffs).with_context(|| format!("system {}", e.name))?;
            if let Some(declared) = e.declared_cs_complexity {
                let actual = cs_complexity(&s)?;
                if actual != declared {
                    bail!("system {} declares CS complexity {declared}, computed {actual}", e.name);
                }
            }
            out.push((e.name, s));
        }
        return Ok(out);
    }
    Ok(vec![(spec.to_string(), LinearSystem::by_name(spec, field)?)])
}

/// `(label, set)` pairs for a set spec.
fn sets(common: &Common, spec: &str, trials: u64, cap: u128) -> Result<Vec<(String, FieldFunction)>> {
    let field = PrimeField::new(common.p)?;
    let n = common.n;
    if spec == "full" {
        return Ok(vec![("full".into(), FieldFunction::indicator(field, n, |_| true))]);
    }
    if spec == "excess4ap" {
        let (set, _) = build_excess_4ap_set(common.p, n, cap)?;
        return Ok(vec![("excess4ap".into(), set)]);
    }
    if let Some(d) = spec.strip_prefix("random:") {
        let density: f64 = d.parse().with_context(|| format!("density {d:?}"))?;
        if !(0.0..=1.0).contains(&density) {
            bail!("density {density} outside [0, 1]");
        }
        return Ok((0..trials)
            .map(|t| {
                let mut rng = trial_rng(common.seed, "count", t);
                (format!("random:{d}#{t}"), random_set(&mut rng, field, n, density))
            })
            .collect());
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let set: FieldFunction = serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
        if set.p() != common.p || set.n() != n {
            bail!("set in {path} lives on F_{}^{}, expected F_{}^{}", set.p(), set.n(), common.p, n);
        }
        return Ok(vec![(format!("file:{path}"), set)]);
    }
    bail!("unknown set spec {spec:?}")
}

fn count_row(name: &str, label: &str, s: &LinearSystem, set: &FieldFunction, cap: u128) -> Result<CountRow> {
    let density = set.mean().re;
    let balanced = set.balanced();
    let average = system_average(s, &vec![set.clone(); s.m()], cap)?.re;
    let expected = expected_count(s, density.clamp(0.0, 1.0))?;
    Ok(CountRow {
        system: name.into(),
        set: label.into(),
        p: set.p(),
        n: set.n(),
        density,
        u2: u2_norm(&balanced),
        u3: u3_norm(&balanced),
        average,
        expected,
        deviation: average - expected,
    })
}

fn csv_rows(rows: &[CountRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.system.clone(),
                r.set.clone(),
                r.p.to_string(),
                r.n.to_string(),
                num(r.density),
                num(r.u2),
                num(r.u3),
                num(r.average),
                num(r.expected),
                num(r.deviation),
            ]
        })
        .collect()
}

const COUNT_HEADER: &[&str] = &[
    "system", "set", "p", "n", "density", "u2", "u3", "average", "expected", "deviation",
];

#[derive(Serialize)]
struct CountReport<'a, A: Serialize> {
    command: &'static str,
    config: (&'a Common, &'a A),
    rows: Vec<CountRow>,
}

pub fn run(common: &Common, args: &CountArgs) -> Result<Outcome> {
    let field = PrimeField::new(common.p)?;
    let cap = common.cap.unwrap_or(DEFAULT_AVERAGE_CAP);
    let systems = systems(&args.system, field)?;
    let sets = sets(common, &args.set, args.trials, cap)?;
    let mut rows = Vec::new();
    for (name, s) in &systems {
        for (label, set) in &sets {
            rows.push(count_row(name, label, s, set, cap)?);
        }
    }
    let table = csv_rows(&rows);
    emit(common, &CountReport { command: "count", config: (common, args), rows }, COUNT_HEADER, &table)?;
    Ok(Outcome::Pass)
}

/// Sweeps dimensions `1..=n`. For each, random sets and the most uniform
/// level set of `x_1^2 + ... + x_n^2` are counted against both a
/// square-independent system (`xy`) and the square-dependent 4-AP system.
pub fn run_impbound(common: &Common, args: &ImpboundArgs) -> Result<Outcome> {
    let field = PrimeField::new(common.p)?;
    let cap = common.cap.unwrap_or(DEFAULT_AVERAGE_CAP);
    if !(0.0..=1.0).contains(&args.density) {
        bail!("density {} outside [0, 1]", args.density);
    }
    let mut catalog = vec![("xy".to_string(), LinearSystem::schur_triple(field)?)];
    if let Ok(s) = LinearSystem::four_ap(field) {
        catalog.push(("4ap".into(), s));
    }
    let mut rows = Vec::new();
    for n in 1..=common.n {
        let mut sets: Vec<(String, FieldFunction)> = (0..args.trials)
            .map(|t| {
                let mut rng = trial_rng(common.seed, "impbound", (n as u64) << 32 | t);
                (format!("random:{}#{t}", args.density), random_set(&mut rng, field, n, args.density))
            })
            .collect();
        let q = QuadraticForm::diagonal_sum_of_squares(field, n);
        let mut best: Option<(u32, f64, FieldFunction)> = None;
        for level in 0..field.p() {
            let (set, report) = level_set_report(&q, level, cap)?;
            if report.density > 0.0 && best.as_ref().is_none_or(|(_, u, _)| report.u2 < *u - 1e-12) {
                best = Some((level, report.u2, set));
            }
        }
        if let Some((level, _, set)) = best {
            sets.push((format!("level:{level}"), set));
        }
        for (name, s) in &catalog {
            for (label, set) in &sets {
                rows.push(count_row(name, label, s, set, cap)?);
            }
        }
    }
    let table = csv_rows(&rows);
    emit(
        common,
        &CountReport { command: "experiment-impbound", config: (common, args), rows },
        COUNT_HEADER,
        &table,
    )?;
    Ok(Outcome::Pass)
}
