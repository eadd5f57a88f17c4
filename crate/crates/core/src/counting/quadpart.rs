use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::average::system_average;
use crate::check::{Check, SLACK};
use crate::error::{Error, Result};
use crate::harmonic::FieldFunction;
use crate::quadave::QuadAverageCombination;
use crate::system::{square_independent, LinearSystem};

/// Parameters `(C, D, R, T, delta)` of the quadratic-part bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadPartParams {
    pub c: f64,
    pub d: usize,
    pub r: usize,
    pub t: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadPartReport {
    pub average: Complex64,
    /// `(C^m p^{D + delta^-4 T^4 - R/2m} + delta) prod_i k_i`.
    pub bound: f64,
    pub term_counts: Vec<usize>,
    pub check: Check,
}

fn verify_terms(fs: &[QuadAverageCombination], params: &QuadPartParams) -> Result<()> {
    for (i, comb) in fs.iter().enumerate() {
        for (j, t) in comb.terms.iter().enumerate() {
            let rank = t.average.rank();
            if rank < params.r {
                return Err(Error::Precondition(format!(
                    "function {i} term {j}: rank {rank} < R = {}",
                    params.r
                )));
            }
            let cx = t.average.complexity();
            if cx > params.d {
                return Err(Error::Precondition(format!(
                    "function {i} term {j}: complexity {cx} > D = {}",
                    params.d
                )));
            }
        }
        let linf = comb.sum_linf();
        if linf > params.c + SLACK {
            return Err(Error::Precondition(format!(
                "function {i}: sum ||U_j||_inf = {linf} > C = {}",
                params.c
            )));
        }
        let dual = comb.sum_u2_dual();
        if dual > params.t + SLACK {
            return Err(Error::Precondition(format!(
                "function {i}: sum ||U_j||*_U2 = {dual} > T = {}",
                params.t
            )));
        }
    }
    Ok(())
}

/// Evaluates the system average of `f_i = sum_j U_j^(i) Q_j^(i)` and compares
/// it with the quadratic-part bound. Every precondition is recomputed; the
/// first failing one is reported as an error naming the term.
pub fn quadraticpart_bound_check(
    fs: &[QuadAverageCombination],
    s: &LinearSystem,
    n: usize,
    params: &QuadPartParams,
    cap: u128,
) -> Result<QuadPartReport> {
    if !(params.delta > 0.0) {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    if !square_independent(s) {
        return Err(Error::Precondition("system is not square-independent".into()));
    }
    verify_terms(fs, params)?;
    let field = s.field();
    let tables = fs
        .iter()
        .map(|c| c.evaluate(field, n))
        .collect::<Result<Vec<FieldFunction>>>()?;
    let average = system_average(s, &tables, cap)?;
    let m = s.m() as f64;
    let p = field.p() as f64;
    let exponent = params.d as f64 + params.t.powi(4) / params.delta.powi(4) - params.r as f64 / (2.0 * m);
    let term_counts: Vec<usize> = fs.iter().map(|c| c.terms.len()).collect();
    let k: f64 = term_counts.iter().map(|&k| k as f64).product();
    let bound = (params.c.powf(m) * p.powf(exponent) + params.delta) * k;
    Ok(QuadPartReport {
        average,
        bound,
        term_counts,
        check: Check::le("|average| <= quadratic-part bound", average.norm(), bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::forms::QuadraticForm;
    use crate::harmonic::phase_function;
    use crate::linalg::Matrix;
    use crate::quadave::{CombinationTerm, Factor, QuadraticAverage};

    fn fp() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    fn single(q: &QuadraticForm) -> QuadAverageCombination {
        QuadAverageCombination {
            terms: vec![CombinationTerm {
                factor: Factor::Coefficient(Complex64::new(1.0, 0.0)),
                average: QuadraticAverage::from_phase(q).unwrap(),
            }],
        }
    }

    fn params() -> QuadPartParams {
        QuadPartParams {
            c: 1.0,
            d: 0,
            r: 2,
            t: 1.0,
            delta: 0.5,
        }
    }

    #[test]
    fn zero_functions() {
        let s = LinearSystem::schur_triple(fp()).unwrap();
        let fs = vec![QuadAverageCombination::default(); 3];
        let r = quadraticpart_bound_check(&fs, &s, 2, &params(), 1 << 20).unwrap();
        assert_eq!(r.average, Complex64::new(0.0, 0.0));
        assert!(r.check.pass);
    }

    #[test]
    fn full_rank_phases() {
        let field = fp();
        let s = LinearSystem::schur_triple(field).unwrap();
        let q = QuadraticForm::pure(Matrix::identity(field, 2)).unwrap();
        let fs = vec![single(&q); 3];
        let r = quadraticpart_bound_check(&fs, &s, 2, &params(), 1 << 20).unwrap();
        // E_{x,y} omega^{x.x + y.y + (x+y).(x+y)} by direct enumeration
        let f = phase_function(&q);
        let mut acc = Complex64::new(0.0, 0.0);
        for x in field.points(2) {
            for y in field.points(2) {
                acc += f.at(&x) * f.at(&y) * f.at(&field.add_vec(&x, &y));
            }
        }
        assert!((r.average - acc / 81.0).norm() < 1e-12);
        let expect = (3f64.powf(0.0 + 16.0 - 2.0 / 6.0) + 0.5) * 1.0;
        assert!((r.bound - expect).abs() < 1e-9 * expect);
        assert!(r.check.pass);
    }

    #[test]
    fn precondition_violations() {
        let field = fp();
        let s = LinearSystem::schur_triple(field).unwrap();
        let q = QuadraticForm::pure(Matrix::identity(field, 2)).unwrap();
        let mut heavy = single(&q);
        heavy.terms[0].factor = Factor::Coefficient(Complex64::new(2.0, 0.0));
        let fs = vec![single(&q), heavy, single(&q)];
        let err = quadraticpart_bound_check(&fs, &s, 2, &params(), 1 << 20).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref msg) if msg.starts_with("function 1")));

        let low = QuadraticForm::zero(field, 2);
        let fs = vec![single(&low), single(&q), single(&q)];
        let err = quadraticpart_bound_check(&fs, &s, 2, &params(), 1 << 20).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref msg) if msg.contains("rank")));
    }
}
