use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankGap {
    /// Indices with rank at most `threshold`, ascending.
    pub low: Vec<usize>,
    /// Indices with rank at least `m * threshold + t`, ascending.
    pub high: Vec<usize>,
    pub threshold: f64,
    pub checks: Vec<Check>,
}

/// `R_j = m^j R0 + (m^{j-1} + ... + 1) t`.
pub fn ladder(r0: f64, m: f64, t: f64, j: usize) -> f64 {
    let mut r = r0;
    for _ in 0..j {
        r = m * r + t;
    }
    r
}

/// Splits indices into a low-rank and a high-rank part with a multiplicative
/// gap. Sorting the ranks ascending, the first position `i` (1-based) with
/// `rank >= R_i` fixes `R = R_{i-1}`; if no position crosses, everything is
/// low and `R = R_k`.
///
/// `m >= 1` is required so that the ladder is non-decreasing; the range
/// `R <= m^k (R0 + t)` is reported as a check and holds whenever `m >= 2`.
pub fn rank_gap_partition(ranks: &[usize], r0: f64, m: f64, t: f64) -> Result<RankGap> {
    if !(r0 > 0.0) || !(t > 1.0) || !(m >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rank gap needs R0 > 0, t > 1, m >= 1 (got R0 = {r0}, t = {t}, m = {m})"
        )));
    }
    let k = ranks.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| (ranks[i], i));
    let crossing = (1..=k).find(|&i| ranks[order[i - 1]] as f64 >= ladder(r0, m, t, i));
    let (threshold, split) = match crossing {
        Some(i) => (ladder(r0, m, t, i - 1), i - 1),
        None => (ladder(r0, m, t, k), k),
    };
    let mut low: Vec<usize> = order[..split].to_vec();
    let mut high: Vec<usize> = order[split..].to_vec();
    low.sort_unstable();
    high.sort_unstable();

    let max_low = low.iter().map(|&i| ranks[i]).max().unwrap_or(0) as f64;
    let min_high = high.iter().map(|&i| ranks[i]).min();
    let mut checks = vec![
        Check::le("max rank on L <= R", max_low, threshold),
        Check::le("R0 <= R", r0, threshold),
        Check::le("R <= m^k (R0 + t)", threshold, m.powi(k as i32) * (r0 + t)),
    ];
    if let Some(h) = min_high {
        checks.push(Check::ge("min rank on H >= mR + t", h as f64, m * threshold + t));
    }
    Ok(RankGap {
        low,
        high,
        threshold,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::all_pass;

    #[test]
    fn empty_list() {
        let g = rank_gap_partition(&[], 2.0, 2.0, 2.0).unwrap();
        assert!(g.low.is_empty() && g.high.is_empty());
        assert_eq!(g.threshold, 2.0);
    }

    #[test]
    fn all_below_first_rung() {
        let g = rank_gap_partition(&[0, 1, 1], 2.0, 2.0, 2.0).unwrap();
        assert!(g.high.is_empty());
        assert!(all_pass(&g.checks));
    }

    #[test]
    fn wide_gap_splits() {
        let g = rank_gap_partition(&[1, 100], 2.0, 2.0, 2.0).unwrap();
        assert_eq!(g.low, vec![0]);
        assert_eq!(g.high, vec![1]);
        assert!(1.0 <= g.threshold);
        assert!(100.0 >= 2.0 * g.threshold + 2.0);
        assert!(all_pass(&g.checks));
    }

    #[test]
    fn ladder_values() {
        assert_eq!(ladder(1.0, 2.0, 3.0, 0), 1.0);
        assert_eq!(ladder(1.0, 2.0, 3.0, 2), 4.0 + 3.0 * 3.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(rank_gap_partition(&[1], 1.0, 2.0, 1.0).is_err());
        assert!(rank_gap_partition(&[1], 0.0, 2.0, 2.0).is_err());
        assert!(rank_gap_partition(&[1], 1.0, 0.5, 2.0).is_err());
    }
}
