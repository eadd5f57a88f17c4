use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::verify::{budget_verify, BudgetReport};
use crate::check::SLACK;
use crate::error::{Error, Result};
use crate::forms::QuadraticForm;
use crate::harmonic::{best_quadratic_phase, l2_norm, phase_function, FieldFunction};
use crate::quadave::QuadraticAverage;

/// Weights `(eta, delta, M)` of `eta^-1 ||g||_1 + delta^-1 ||h||_{U^3} + M^-1 sum |lambda_i|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionBudget {
    pub eta: f64,
    pub delta: f64,
    pub big_m: f64,
}

impl DecompositionBudget {
    pub fn new(eta: f64, delta: f64, big_m: f64) -> Result<Self> {
        if !(eta > 0.0 && delta > 0.0 && big_m > 0.0) {
            return Err(Error::InvalidArgument(
                "eta, delta and M must be positive".into(),
            ));
        }
        Ok(DecompositionBudget { eta, delta, big_m })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomShape {
    Phase(QuadraticForm),
    Average(QuadraticAverage),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub lambda: Complex64,
    pub shape: AtomShape,
}

impl Atom {
    pub fn table(&self) -> FieldFunction {
        match &self.shape {
            AtomShape::Phase(q) => phase_function(q),
            AtomShape::Average(a) => a.evaluate(),
        }
    }
}

/// `f = sum_i lambda_i Q_i + g + h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomicDecomposition {
    pub atoms: Vec<Atom>,
    pub g: FieldFunction,
    pub h: FieldFunction,
    /// Set when the iteration cap stopped the solver before the stopping rule did.
    pub partial: bool,
    /// `||h||_2` before the first peel and after each one.
    pub residual_history: Vec<f64>,
    /// Correlation magnitude found at each peel.
    pub correlations: Vec<f64>,
}

impl AtomicDecomposition {
    pub fn reconstruct(&self) -> Result<FieldFunction> {
        let mut acc = self.g.add(&self.h)?;
        for a in &self.atoms {
            acc = acc.add(&a.table().scale(a.lambda))?;
        }
        Ok(acc)
    }

    pub fn sum_lambda(&self) -> f64 {
        self.atoms.iter().map(|a| a.lambda.norm()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeelOutcome {
    pub decomposition: AtomicDecomposition,
    pub budget: BudgetReport,
}

/// `ceil(1 / stop^2) * 4`.
pub fn default_iteration_cap(stop_u3: f64) -> usize {
    (1.0 / (stop_u3 * stop_u3)).ceil() as usize * 4
}

/// Greedy peeling: subtract the exact projection onto the best-correlating
/// pure quadratic phase until the best correlation drops below `stop_u3`.
pub fn peel_atoms(f: &FieldFunction, stop_u3: f64, cap: u128) -> Result<AtomicDecomposition> {
    if !(stop_u3 > 0.0) {
        return Err(Error::InvalidArgument("stopping threshold must be positive".into()));
    }
    let norm = l2_norm(f);
    if norm > 1.0 + SLACK {
        return Err(Error::Precondition(format!("||f||_2 = {norm} exceeds 1")));
    }
    let max_iter = default_iteration_cap(stop_u3);
    let mut h = f.clone();
    let mut atoms = Vec::new();
    let mut history = vec![norm];
    let mut correlations = Vec::new();
    let mut partial = true;
    for _ in 0..max_iter {
        let best = best_quadratic_phase(&h, cap)?;
        if best.magnitude < stop_u3 {
            partial = false;
            break;
        }
        let lambda = best.correlation;
        h = h.sub(&phase_function(&best.form).scale(lambda))?;
        history.push(l2_norm(&h));
        correlations.push(best.magnitude);
        atoms.push(Atom {
            lambda,
            shape: AtomShape::Phase(best.form),
        });
    }
    Ok(AtomicDecomposition {
        atoms,
        g: FieldFunction::zeros(f.field(), f.n()),
        h,
        partial,
        residual_history: history,
        correlations,
    })
}

/// [`peel_atoms`] followed by [`budget_verify`] on the result.
pub fn peel_decompose(
    f: &FieldFunction,
    budget: &DecompositionBudget,
    stop_u3: f64,
    cap: u128,
) -> Result<PeelOutcome> {
    let decomposition = peel_atoms(f, stop_u3, cap)?;
    let budget = budget_verify(f, &decomposition, budget)?;
    Ok(PeelOutcome {
        decomposition,
        budget,
    })
}
