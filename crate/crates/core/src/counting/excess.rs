use serde::{Deserialize, Serialize};

use super::average::{expected_count, system_average};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::forms::QuadraticForm;
use crate::harmonic::{u2_norm, FieldFunction};
use crate::system::LinearSystem;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcessReport {
    pub p: u32,
    pub n: usize,
    /// The set is `{x : q(x) = level}`.
    pub level: u32,
    pub density: f64,
    /// `||1_A - alpha||_{U^2}`.
    pub u2: f64,
    pub four_ap_average: f64,
    pub four_ap_expected: f64,
    /// `four_ap_average / alpha^4`; absent for the empty set.
    pub excess_ratio: Option<f64>,
    pub schur_average: f64,
    pub schur_expected: f64,
    /// `|average - alpha^3|` for `{x, y, x + y}`.
    pub schur_deviation: f64,
    /// `2 ||1_A - alpha||_{U^2} * 3`.
    pub schur_bound: f64,
}

/// Counts 4-APs and `{x, y, x+y}` configurations in the level set `{q = level}`.
pub fn level_set_report(q: &QuadraticForm, level: u32, cap: u128) -> Result<(FieldFunction, ExcessReport)> {
    let field = q.field();
    let n = q.ambient_dim();
    let level = level % field.p();
    let values = q.values();
    let set = FieldFunction::indicator(field, n, |x| values[field.encode(x)] == level);
    let density = set.mean().re;
    let u2 = u2_norm(&set.balanced());
    let four = LinearSystem::four_ap(field)?;
    let four_ap_average = system_average(&four, &vec![set.clone(); 4], cap)?.re;
    let four_ap_expected = expected_count(&four, density)?;
    let schur = LinearSystem::schur_triple(field)?;
    let schur_average = system_average(&schur, &vec![set.clone(); 3], cap)?.re;
    let schur_expected = expected_count(&schur, density)?;
    let report = ExcessReport {
        p: field.p(),
        n,
        level,
        density,
        u2,
        four_ap_average,
        four_ap_expected,
        excess_ratio: (four_ap_expected > 0.0).then(|| four_ap_average / four_ap_expected),
        schur_average,
        schur_expected,
        schur_deviation: (schur_average - schur_expected).abs(),
        schur_bound: 2.0 * u2 * 3.0,
    };
    Ok((set, report))
}

/// A set with many more 4-APs than its density predicts while its balanced
/// function has small `U^2` norm: the level set of `x_1^2 + ... + x_n^2`
/// whose balanced function has the least `U^2` norm (smallest level on ties).
pub fn build_excess_4ap_set(p: u32, n: usize, cap: u128) -> Result<(FieldFunction, ExcessReport)> {
    if p < 5 {
        return Err(Error::InvalidArgument(format!("p = {p} must be at least 5")));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 2")));
    }
    let field = PrimeField::new(p)?;
    let q = QuadraticForm::diagonal_sum_of_squares(field, n);
    let values = q.values();
    let mut best: Option<(u32, f64)> = None;
    for c in 0..p {
        let set = FieldFunction::indicator(field, n, |x| values[field.encode(x)] == c);
        if set.mean().re == 0.0 {
            continue;
        }
        let u = u2_norm(&set.balanced());
        if best.is_none_or(|(_, b)| u < b - 1e-12) {
            best = Some((c, u));
        }
    }
    let (level, _) = best.expect("some level set is nonempty");
    level_set_report(&q, level, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::DEFAULT_AVERAGE_CAP;

    #[test]
    fn plane_over_f5() {
        let (set, r) = build_excess_4ap_set(5, 2, DEFAULT_AVERAGE_CAP).unwrap();
        // direct count over all (x, d) in (F_5^2)^2
        let field = PrimeField::new(5).unwrap();
        let mut hits = 0usize;
        for x in field.points(2) {
            for d in field.points(2) {
                let pts = (0..4u32).map(|k| field.add_vec(&x, &field.scale_vec(k, &d)));
                if pts.into_iter().all(|y| set.at(&y).re > 0.5) {
                    hits += 1;
                }
            }
        }
        assert!((r.four_ap_average - hits as f64 / 625.0).abs() < 1e-12);
        assert!((r.density - 0.2).abs() < 0.05);
        assert!(r.excess_ratio.unwrap() > 1.5);
        assert!(r.u2 <= 0.25);
        assert!(r.schur_deviation <= r.schur_bound);
    }

    #[test]
    fn three_dimensions() {
        let (_, r) = build_excess_4ap_set(5, 3, DEFAULT_AVERAGE_CAP).unwrap();
        assert!(r.excess_ratio.unwrap() > 1.5);
        assert!(r.u2 < 0.2);
    }

    #[test]
    fn degenerate_form_is_everything() {
        let field = PrimeField::new(5).unwrap();
        let (set, r) = level_set_report(&QuadraticForm::zero(field, 2), 0, DEFAULT_AVERAGE_CAP).unwrap();
        assert!(set.values().iter().all(|z| z.re == 1.0));
        assert_eq!(r.excess_ratio, Some(1.0));
        assert_eq!(r.u2, 0.0);
    }

    #[test]
    fn rejects_small_parameters() {
        assert!(build_excess_4ap_set(3, 2, DEFAULT_AVERAGE_CAP).is_err());
        assert!(build_excess_4ap_set(5, 1, DEFAULT_AVERAGE_CAP).is_err());
    }
}
