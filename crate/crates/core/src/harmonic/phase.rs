use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fourier::fourier;
use super::function::FieldFunction;
use crate::error::{Error, Result};
use crate::field::{pow_u128, PrimeField};
use crate::forms::QuadraticForm;
use crate::linalg::Matrix;

/// Default limit on the number of pure phases an exhaustive search may visit.
pub const DEFAULT_PHASE_CAP: u128 = 1 << 24;

/// Gap a later candidate must clear to displace an earlier one.
const TIE_EPS: f64 = 1e-12;

/// `x -> omega^{q(x)}` on the whole ambient space.
pub fn phase_function(q: &QuadraticForm) -> FieldFunction {
    FieldFunction::phase_table(q.field(), q.ambient_dim(), &q.values()).expect("full table")
}

/// `E_{x in domain} omega^{q(x)}`.
pub fn gauss_sum(q: &QuadraticForm) -> Complex64 {
    let roots = q.field().roots_of_unity();
    let elems = q.domain().elements();
    let s: Complex64 = elems.iter().map(|x| roots[q.eval(x) as usize]).sum();
    s / elems.len() as f64
}

/// `E_x f(x) conj(omega^{q(x)})`.
pub fn quad_correlation(f: &FieldFunction, q: &QuadraticForm) -> Result<Complex64> {
    if !q.domain().is_full() {
        return Err(Error::InvalidArgument(
            "correlation needs a form on the whole space".into(),
        ));
    }
    if q.field() != f.field() || q.ambient_dim() != f.n() {
        return Err(Error::Dimension("form and function live on different spaces".into()));
    }
    f.inner(&phase_function(q))
}

/// Number of pure phases `x^T A x + l.x` on `F_p^n`.
pub fn phase_count(field: PrimeField, n: usize) -> u128 {
    pow_u128(field.p(), n * (n + 1) / 2 + n)
}

fn check_cap(field: PrimeField, n: usize, cap: u128) -> Result<()> {
    let required = phase_count(field, n);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    Ok(())
}

/// Upper-triangular matrix for the `t`-th quadratic part, with the first
/// encoding entry most significant so that `t` follows lexicographic order.
fn quad_part(field: PrimeField, n: usize, t: usize) -> Matrix {
    let tri = n * (n + 1) / 2;
    let mut digits = field.decode(t, tri);
    digits.reverse();
    let mut m = Matrix::zeros(field, n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m.set(i, j, digits[k]);
            k += 1;
        }
    }
    m
}

/// The exhaustive maximizer of `|<f, omega^q>|` over pure phases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseMatch {
    pub form: QuadraticForm,
    pub correlation: Complex64,
    pub magnitude: f64,
}

struct Candidate {
    quad_index: usize,
    lin: Vec<u32>,
    correlation: Complex64,
}

/// Best correlation with a fixed quadratic part. Multiplying `f` by
/// `omega^{-x^T A x}` turns every linear part into one Fourier coefficient:
/// `<f, omega^{x^T A x + l.x}> = g^(-l)`.
fn best_for_part(f: &FieldFunction, t: usize) -> Candidate {
    let field = f.field();
    let n = f.n();
    let quad = quad_part(field, n, t);
    let q = QuadraticForm::pure(quad).expect("square");
    let roots = field.roots_of_unity();
    let twisted = FieldFunction::new(
        field,
        n,
        f.values()
            .iter()
            .zip(q.values())
            .map(|(&v, k)| v * roots[field.neg(k) as usize])
            .collect(),
    )
    .expect("same shape");
    let spec = fourier(&twisted);
    let mut best: Option<(Vec<u32>, Complex64)> = None;
    let mut lin = vec![0u32; n];
    for li in 0..f.len() {
        // lexicographic order on l with the first coordinate most significant
        field.decode_into(li, &mut lin);
        lin.reverse();
        let neg: Vec<u32> = lin.iter().map(|&c| field.neg(c)).collect();
        let c = spec.coeffs()[field.encode(&neg)];
        let better = match &best {
            None => true,
            Some((_, b)) => c.norm() > b.norm() + TIE_EPS,
        };
        if better {
            best = Some((lin.clone(), c));
        }
    }
    let (lin, correlation) = best.expect("at least one linear part");
    Candidate {
        quad_index: t,
        lin,
        correlation,
    }
}

/// Exhaustive search over all pure quadratic phases `omega^{x^T A x + l.x}`
/// for the largest `|<f, omega^q>|`. Ties go to the lexicographically first
/// encoding; the result does not depend on thread scheduling.
pub fn best_quadratic_phase(f: &FieldFunction, cap: u128) -> Result<PhaseMatch> {
    let field = f.field();
    let n = f.n();
    check_cap(field, n, cap)?;
    let parts = pow_u128(field.p(), n * (n + 1) / 2) as usize;
    let candidates: Vec<Candidate> = (0..parts)
        .into_par_iter()
        .map(|t| best_for_part(f, t))
        .collect();
    let mut best: Option<Candidate> = None;
    for c in candidates {
        let better = match &best {
            None => true,
            Some(b) => c.correlation.norm() > b.correlation.norm() + TIE_EPS,
        };
        if better {
            best = Some(c);
        }
    }
    let best = best.expect("at least one quadratic part");
    let form = QuadraticForm::new(
        quad_part(field, n, best.quad_index),
        best.lin,
        0,
        crate::subspace::Subspace::full(field, n),
    )?;
    Ok(PhaseMatch {
        magnitude: best.correlation.norm(),
        correlation: best.correlation,
        form,
    })
}

/// Every pure phase in search order, for reference scans in tests.
pub fn all_pure_phases(field: PrimeField, n: usize, cap: u128) -> Result<Vec<QuadraticForm>> {
    check_cap(field, n, cap)?;
    let parts = pow_u128(field.p(), n * (n + 1) / 2) as usize;
    let lins = field.size(n).expect("small space");
    let mut out = Vec::with_capacity(parts * lins);
    let mut lin = vec![0u32; n];
    for t in 0..parts {
        let quad = quad_part(field, n, t);
        for li in 0..lins {
            field.decode_into(li, &mut lin);
            lin.reverse();
            out.push(QuadraticForm::new(
                quad.clone(),
                lin.clone(),
                0,
                crate::subspace::Subspace::full(field, n),
            )?);
        }
    }
    Ok(out)
}

/// Every quadratic form `x^T A x + l.x + c` on `F_p^n`, constants included.
pub fn all_quadratic_forms(field: PrimeField, n: usize, cap: u128) -> Result<Vec<QuadraticForm>> {
    let required = phase_count(field, n).saturating_mul(field.p() as u128);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    let mut out = Vec::new();
    for q in all_pure_phases(field, n, cap)? {
        for c in 0..field.p() {
            out.push(QuadraticForm::new(
                q.quad().clone(),
                q.lin().to_vec(),
                c,
                q.domain().clone(),
            )?);
        }
    }
    Ok(out)
}
