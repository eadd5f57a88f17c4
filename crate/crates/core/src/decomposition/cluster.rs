use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::check::{Check, SLACK};
use crate::error::{Error, Result};
use crate::harmonic::{l2_norm, FieldFunction};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    /// Pivot indices, in selection order.
    pub pivots: Vec<usize>,
    /// `members[j]`: indices removed when `pivots[j]` was chosen.
    pub members: Vec<Vec<usize>>,
    /// Indices in no cluster, ascending.
    pub residual: Vec<usize>,
    /// `||sum_{i in residual} lambda_i u_i||_2`.
    pub residual_norm: f64,
    /// Correlation threshold `delta^2 / 2C^2` used for adjacency.
    pub threshold: f64,
    pub checks: Vec<Check>,
}

/// Groups vectors by correlation: `u_i` and `u_j` are joined when
/// `|<u_i, u_j>| >= delta^2 / 2C^2` (a vector is joined to itself when its
/// squared norm clears the threshold). Pivots are chosen greedily by heaviest
/// neighbourhood among unclustered vectors, ties going to larger `|lambda|`
/// and then to the lower index, until the unclustered part has norm at most
/// `delta`.
pub fn cluster_vectors(
    vectors: &[FieldFunction],
    lambdas: &[Complex64],
    c: f64,
    delta: f64,
) -> Result<Clustering> {
    if vectors.len() != lambdas.len() {
        return Err(Error::Dimension("one weight per vector is required".into()));
    }
    if !(c > 0.0) || !(delta > 0.0) {
        return Err(Error::InvalidArgument("C and delta must be positive".into()));
    }
    for (i, u) in vectors.iter().enumerate() {
        if l2_norm(u) > 1.0 + SLACK {
            return Err(Error::Precondition(format!("vector {i} has norm above 1")));
        }
        u.same_space(&vectors[0])?;
    }
    let weight: f64 = lambdas.iter().map(|l| l.norm()).sum();
    if weight > c + SLACK {
        return Err(Error::Precondition(format!(
            "sum of |lambda| is {weight}, above C = {c}"
        )));
    }
    let k = vectors.len();
    let tau = delta * delta / (2.0 * c * c);
    let mut gram = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let v = vectors[i].inner(&vectors[j])?.norm();
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    let adjacent = |i: usize, j: usize| gram[i][j] >= tau;
    let residual_of = |set: &[usize]| -> Result<f64> {
        match set.first() {
            None => Ok(0.0),
            Some(&i0) => {
                let mut acc = FieldFunction::zeros(vectors[i0].field(), vectors[i0].n());
                for &i in set {
                    acc = acc.add(&vectors[i].scale(lambdas[i]))?;
                }
                Ok(l2_norm(&acc))
            }
        }
    };

    let mut alive = vec![true; k];
    let mut pivots = Vec::new();
    let mut members = Vec::new();
    loop {
        let current: Vec<usize> = (0..k).filter(|&i| alive[i]).collect();
        if residual_of(&current)? <= delta {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for &x in &current {
            let s: f64 = current
                .iter()
                .filter(|&&y| adjacent(x, y))
                .map(|&y| lambdas[y].norm())
                .sum();
            let better = match best {
                None => true,
                Some((b, bs)) => s > bs || (s == bs && lambdas[x].norm() > lambdas[b].norm()),
            };
            if better {
                best = Some((x, s));
            }
        }
        let (x, s) = best.expect("nonzero residual has a vector");
        if s == 0.0 {
            // cannot happen while the residual exceeds delta; stop rather than loop
            break;
        }
        let removed: Vec<usize> = current.iter().copied().filter(|&y| adjacent(x, y)).collect();
        for &y in &removed {
            alive[y] = false;
        }
        pivots.push(x);
        members.push(removed);
    }
    let residual: Vec<usize> = (0..k).filter(|&i| alive[i]).collect();
    let residual_norm = residual_of(&residual)?;
    let clustered_ok = (0..k)
        .filter(|i| !alive[*i])
        .all(|i| pivots.iter().any(|&p| gram[i][p] >= tau));
    let checks = vec![
        Check::le("pivots <= C^2 / delta^2", pivots.len() as f64, c * c / (delta * delta)),
        Check::holds("every clustered vector correlates with a pivot", clustered_ok),
        Check::le("residual norm <= delta", residual_norm, delta),
    ];
    Ok(Clustering {
        pivots,
        members,
        residual,
        residual_norm,
        threshold: tau,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::all_pass;
    use crate::field::PrimeField;

    fn unit(i: usize) -> FieldFunction {
        let fp = PrimeField::new(2).unwrap();
        // scaled indicators of distinct points are orthogonal with norm 1
        FieldFunction::from_fn(fp, 3, |x| {
            let idx = fp.encode(x);
            Complex64::new(if idx == i { 8f64.sqrt() } else { 0.0 }, 0.0)
        })
    }

    #[test]
    fn empty_input() {
        let out = cluster_vectors(&[], &[], 1.0, 0.5).unwrap();
        assert!(out.pivots.is_empty() && out.residual.is_empty());
        assert_eq!(out.residual_norm, 0.0);
    }

    #[test]
    fn orthogonal_vectors_with_small_weights() {
        let vs: Vec<FieldFunction> = (0..4).map(unit).collect();
        let ls = vec![Complex64::new(0.1, 0.0); 4];
        let out = cluster_vectors(&vs, &ls, 1.0, 0.5).unwrap();
        assert_eq!(out.residual, vec![0, 1, 2, 3]);
        assert!((out.residual_norm - 0.2).abs() < 1e-9);
        assert!(all_pass(&out.checks));
    }

    #[test]
    fn identical_vectors_share_a_pivot() {
        let vs = vec![unit(0), unit(0)];
        let ls = vec![Complex64::new(1.0, 0.0); 2];
        let out = cluster_vectors(&vs, &ls, 2.0, 1.0).unwrap();
        assert_eq!(out.pivots, vec![0]);
        assert_eq!(out.members, vec![vec![0, 1]]);
        assert!(out.residual.is_empty());
        assert!(all_pass(&out.checks));
    }

    #[test]
    fn weight_precondition() {
        let vs = vec![unit(0)];
        let ls = vec![Complex64::new(2.0, 0.0)];
        assert!(cluster_vectors(&vs, &ls, 1.0, 0.5).is_err());
    }
}
