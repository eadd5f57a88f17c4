use serde::{Deserialize, Serialize};

use super::peel::{AtomicDecomposition, DecompositionBudget};
use crate::check::{all_pass, Check, TOL};
use crate::error::{Error, Result};
use crate::harmonic::{best_quadratic_phase, l1_norm, linf_norm, u3_norm, FieldFunction, PhaseMatch};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub reconstruction_error: f64,
    pub l1_g: f64,
    pub u3_h: f64,
    pub sum_lambda: f64,
    /// `eta^-1 ||g||_1 + delta^-1 ||h||_{U^3} + M^-1 sum |lambda_i|`.
    pub lhs: f64,
    pub pass: bool,
    pub checks: Vec<Check>,
}

/// Recomputes the decomposition from scratch and evaluates the budget
/// expression. A reconstruction error above `1e-9` is an error, not a fail.
pub fn budget_verify(
    f: &FieldFunction,
    d: &AtomicDecomposition,
    budget: &DecompositionBudget,
) -> Result<BudgetReport> {
    let reconstruction_error = d.reconstruct()?.max_abs_diff(f)?;
    if reconstruction_error > TOL {
        return Err(Error::Reconstruction {
            error: reconstruction_error,
        });
    }
    let l1_g = l1_norm(&d.g);
    let u3_h = u3_norm(&d.h);
    let sum_lambda = d.sum_lambda();
    let lhs = l1_g / budget.eta + u3_h / budget.delta + sum_lambda / budget.big_m;
    let checks = vec![
        Check::le("reconstruction error", reconstruction_error, 0.0),
        Check::le("budget expression <= 1", lhs, 1.0),
    ];
    Ok(BudgetReport {
        reconstruction_error,
        l1_g,
        u3_h,
        sum_lambda,
        lhs,
        pass: all_pass(&checks),
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub checks: Vec<Check>,
    /// The dual `U^3` condition has no tractable certificate and is never evaluated.
    pub u3_dual: String,
    pub best_phase: PhaseMatch,
    pub pass: bool,
}

/// Checks the three tractable conditions on a separating witness `phi`:
/// `|<f, phi>| >= 1`, `||phi||_inf <= 1/eta`, and `|<phi, omega^q>| <= 1/M`
/// for every pure quadratic phase.
pub fn witness_verify(
    f: &FieldFunction,
    phi: &FieldFunction,
    budget: &DecompositionBudget,
    cap: u128,
) -> Result<WitnessReport> {
    let pairing = f.inner(phi)?.norm();
    let best_phase = best_quadratic_phase(phi, cap)?;
    let checks = vec![
        Check::ge("|<f, phi>| >= 1", pairing, 1.0),
        Check::le("||phi||_inf <= 1/eta", linf_norm(phi), 1.0 / budget.eta),
        Check::le(
            "max_q |<phi, omega^q>| <= 1/M",
            best_phase.magnitude,
            1.0 / budget.big_m,
        ),
    ];
    Ok(WitnessReport {
        pass: all_pass(&checks),
        checks,
        u3_dual: "not checked".into(),
        best_phase,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::peel::{peel_decompose, Atom, AtomShape};
    use crate::field::PrimeField;
    use crate::harmonic::{all_pure_phases, phase_function, quad_correlation, DEFAULT_PHASE_CAP};
    use crate::random;
    use num_complex::Complex64;

    fn fp() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn single_atom_budget() {
        let mut rng = random::trial_rng(1, "budget", 0);
        let q = random::pure_phase(&mut rng, fp(), 2);
        let f = phase_function(&q);
        let d = AtomicDecomposition {
            atoms: vec![Atom {
                lambda: Complex64::new(1.0, 0.0),
                shape: AtomShape::Phase(q),
            }],
            g: FieldFunction::zeros(fp(), 2),
            h: FieldFunction::zeros(fp(), 2),
            partial: false,
            residual_history: vec![],
            correlations: vec![],
        };
        let b = DecompositionBudget::new(1.0, 0.2, 4.0).unwrap();
        let r = budget_verify(&f, &d, &b).unwrap();
        assert!((r.lhs - 0.25).abs() < 1e-9);
        assert!(r.pass);
    }

    #[test]
    fn everything_in_g() {
        let mut rng = random::trial_rng(2, "budget", 0);
        let f = random::bounded_function(&mut rng, fp(), 2);
        let d = AtomicDecomposition {
            atoms: vec![],
            g: f.clone(),
            h: FieldFunction::zeros(fp(), 2),
            partial: false,
            residual_history: vec![],
            correlations: vec![],
        };
        let b = DecompositionBudget::new(2.0, 0.2, 4.0).unwrap();
        let r = budget_verify(&f, &d, &b).unwrap();
        assert!((r.lhs - l1_norm(&f) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn mismatch_is_an_error() {
        let f = FieldFunction::constant(fp(), 1, Complex64::new(0.5, 0.0));
        let d = AtomicDecomposition {
            atoms: vec![],
            g: FieldFunction::zeros(fp(), 1),
            h: FieldFunction::zeros(fp(), 1),
            partial: false,
            residual_history: vec![],
            correlations: vec![],
        };
        let b = DecompositionBudget::new(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(budget_verify(&f, &d, &b), Err(Error::Reconstruction { .. })));
    }

    #[test]
    fn solver_report_matches_recomputation() {
        let mut rng = random::trial_rng(3, "budget", 0);
        let f = random::bounded_function(&mut rng, fp(), 2).scale(Complex64::new(0.7, 0.0));
        let b = DecompositionBudget::new(1.0, 0.3, 10.0).unwrap();
        let out = peel_decompose(&f, &b, 0.2, DEFAULT_PHASE_CAP).unwrap();
        let again = budget_verify(&f, &out.decomposition, &b).unwrap();
        assert!((again.lhs - out.budget.lhs).abs() < 1e-9);
    }

    #[test]
    fn witness_examples() {
        let mut rng = random::trial_rng(4, "witness", 0);
        let q = random::pure_phase(&mut rng, fp(), 2);
        let f = phase_function(&q);
        let b = DecompositionBudget::new(1.0, 0.2, 2.0).unwrap();
        let r = witness_verify(&f, &f, &b, DEFAULT_PHASE_CAP).unwrap();
        assert!(r.checks[0].pass && r.checks[1].pass);
        assert!(!r.checks[2].pass);
        assert!(!r.pass);
        assert_eq!(r.u3_dual, "not checked");

        let zero = FieldFunction::zeros(fp(), 2);
        let r = witness_verify(&f, &zero, &b, DEFAULT_PHASE_CAP).unwrap();
        assert!(!r.checks[0].pass);
    }

    #[test]
    fn witness_matches_exhaustive_scan() {
        let mut rng = random::trial_rng(5, "witness", 0);
        let eta = 0.5;
        let raw = random::bounded_function(&mut rng, fp(), 2);
        let phi = raw.scale(Complex64::new(1.0 / (eta * linf_norm(&raw)), 0.0));
        let f = random::bounded_function(&mut rng, fp(), 2);
        let b = DecompositionBudget::new(eta, 0.2, 3.0).unwrap();
        let r = witness_verify(&f, &phi, &b, DEFAULT_PHASE_CAP).unwrap();
        let scan = all_pure_phases(fp(), 2, DEFAULT_PHASE_CAP)
            .unwrap()
            .iter()
            .map(|q| quad_correlation(&phi, q).unwrap().norm())
            .fold(0.0, f64::max);
        assert!((r.checks[2].lhs - scan).abs() < 1e-9);
        assert!((r.checks[1].lhs - 1.0 / eta).abs() < 1e-9);
    }
}
