use serde::{Deserialize, Serialize};

use crate::check::{Check, SLACK};
use crate::error::{Error, Result};

/// A graph with positive vertex weights; edge `{x, y}` weighs `mu(x) mu(y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct WeightedGraph {
    weights: Vec<f64>,
    adjacency: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    weights: Vec<f64>,
    adjacency: Vec<Vec<bool>>,
}

impl TryFrom<GraphRepr> for WeightedGraph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        WeightedGraph::new(r.weights, r.adjacency)
    }
}

impl From<WeightedGraph> for GraphRepr {
    fn from(g: WeightedGraph) -> Self {
        GraphRepr {
            weights: g.weights,
            adjacency: g.adjacency,
        }
    }
}

impl WeightedGraph {
    pub fn new(weights: Vec<f64>, adjacency: Vec<Vec<bool>>) -> Result<Self> {
        let n = weights.len();
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument("vertex weights must be positive".into()));
        }
        if adjacency.len() != n || adjacency.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension(format!("adjacency is not {n}x{n}")));
        }
        for i in 0..n {
            if adjacency[i][i] {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {i}")));
            }
            for j in 0..i {
                if adjacency[i][j] != adjacency[j][i] {
                    return Err(Error::InvalidArgument("adjacency is not symmetric".into()));
                }
            }
        }
        Ok(WeightedGraph { weights, adjacency })
    }

    pub fn edgeless(weights: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        WeightedGraph::new(weights, vec![vec![false; n]; n])
    }

    pub fn complete(weights: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        let adjacency = (0..n).map(|i| (0..n).map(|j| i != j).collect()).collect();
        WeightedGraph::new(weights, adjacency)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j]
    }

    pub fn vertex_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Total weight of the subgraph induced by `vertices`, each edge once.
    pub fn induced_weight(&self, vertices: &[usize]) -> f64 {
        let mut total = 0.0;
        for (a, &i) in vertices.iter().enumerate() {
            for &j in &vertices[a + 1..] {
                if self.adjacency[i][j] {
                    total += self.weights[i] * self.weights[j];
                }
            }
        }
        total
    }

    pub fn edge_weight(&self) -> f64 {
        let all: Vec<usize> = (0..self.len()).collect();
        self.induced_weight(&all)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodPeel {
    /// Chosen centres, in selection order.
    pub selected: Vec<usize>,
    /// Vertices joined to no chosen centre, ascending.
    pub residual: Vec<usize>,
    pub residual_weight: f64,
    pub checks: Vec<Check>,
}

/// Greedily picks centres until the graph induced on vertices joined to no
/// centre has total weight at most `gamma`.
///
/// The counting argument needs the vertex weights to sum to at most `c`;
/// that is the precondition checked here. Each round takes the vertex whose
/// current neighbourhood is heaviest (ties: larger own weight, then lower
/// index) and deletes that neighbourhood, removing at least `2 gamma / c` of
/// weight, so at most `c^2 / (2 gamma)` rounds occur.
pub fn peel_neighborhoods(g: &WeightedGraph, c: f64, gamma: f64) -> Result<NeighborhoodPeel> {
    if !(c > 0.0) || !(gamma > 0.0) {
        return Err(Error::InvalidArgument("C and gamma must be positive".into()));
    }
    let total = g.vertex_weight();
    if total > c + SLACK {
        return Err(Error::Precondition(format!(
            "vertex weight {total} exceeds C = {c}"
        )));
    }
    let n = g.len();
    let mut alive = vec![true; n];
    let mut selected = Vec::new();
    loop {
        let current: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        if g.induced_weight(&current) <= gamma {
            break;
        }
        let nbhd = |x: usize| -> f64 {
            current
                .iter()
                .filter(|&&y| g.adjacent(x, y))
                .map(|&y| g.weights[y])
                .sum()
        };
        let mut best: Option<(usize, f64)> = None;
        for &x in &current {
            let s = nbhd(x);
            let better = match best {
                None => true,
                Some((b, bs)) => s > bs || (s == bs && g.weights[x] > g.weights[b]),
            };
            if better {
                best = Some((x, s));
            }
        }
        let (x, _) = best.expect("positive induced weight implies a vertex");
        for &y in &current {
            if g.adjacent(x, y) {
                alive[y] = false;
            }
        }
        selected.push(x);
    }
    let residual: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let residual_weight = g.induced_weight(&residual);
    let detached = residual
        .iter()
        .all(|&i| selected.iter().all(|&x| !g.adjacent(i, x)));
    let checks = vec![
        Check::le("residual induced weight <= gamma", residual_weight, gamma),
        Check::le("centres <= C^2 / 2 gamma", selected.len() as f64, c * c / (2.0 * gamma)),
        Check::holds("residual vertices avoid every centre", detached),
    ];
    Ok(NeighborhoodPeel {
        selected,
        residual,
        residual_weight,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::all_pass;

    #[test]
    fn edgeless_graph_needs_no_centres() {
        let g = WeightedGraph::edgeless(vec![0.5, 0.25]).unwrap();
        let out = peel_neighborhoods(&g, 1.0, 0.1).unwrap();
        assert!(out.selected.is_empty());
        assert_eq!(out.residual, vec![0, 1]);
        assert_eq!(out.residual_weight, 0.0);
    }

    #[test]
    fn single_edge_is_cleared_by_one_centre() {
        let g = WeightedGraph::complete(vec![1.0, 1.0]).unwrap();
        let out = peel_neighborhoods(&g, 2.0, 0.5).unwrap();
        assert_eq!(out.selected, vec![0]);
        assert_eq!(out.residual_weight, 0.0);
        assert!(all_pass(&out.checks));
    }

    #[test]
    fn complete_graph_on_four_vertices() {
        let g = WeightedGraph::complete(vec![1.0; 4]).unwrap();
        let out = peel_neighborhoods(&g, 6.0, 1.0).unwrap();
        assert!(out.selected.len() as f64 <= 18.0);
        // recount from scratch
        let mut recount = 0.0;
        for &i in &out.residual {
            for &j in &out.residual {
                if i < j {
                    recount += 1.0;
                }
            }
        }
        assert_eq!(recount, out.residual_weight);
        assert!(out.residual_weight <= 1.0);
    }

    #[test]
    fn vertex_weight_precondition() {
        let g = WeightedGraph::complete(vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            peel_neighborhoods(&g, 1.0, 0.5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn rejects_self_loops() {
        assert!(WeightedGraph::new(vec![1.0], vec![vec![true]]).is_err());
    }
}
