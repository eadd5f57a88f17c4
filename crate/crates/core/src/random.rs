//! Seeded instance generators.
//!
//! Every random instance comes from its own ChaCha stream keyed on
//! `(seed, label, trial)`, so any single record can be regenerated without
//! replaying the ones before it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::PrimeField;
use crate::forms::{BilinearForm, QuadraticForm};
use crate::harmonic::FieldFunction;
use crate::linalg::Matrix;
use crate::quadave::{AffinePhase, QuadraticAverage};
use crate::subspace::Subspace;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// The generator for one trial of one labelled suite.
pub fn trial_rng(seed: u64, label: &str, trial: u64) -> ChaCha8Rng {
    let key = splitmix(splitmix(seed ^ fnv1a(label)).wrapping_add(trial));
    ChaCha8Rng::seed_from_u64(key)
}

pub fn residue(rng: &mut impl Rng, field: PrimeField) -> u32 {
    rng.gen_range(0..field.p())
}

pub fn nonzero_residue(rng: &mut impl Rng, field: PrimeField) -> u32 {
    rng.gen_range(1..field.p())
}

pub fn vector(rng: &mut impl Rng, field: PrimeField, n: usize) -> Vec<u32> {
    (0..n).map(|_| residue(rng, field)).collect()
}

/// Entries uniform in the unit disk.
pub fn bounded_function(rng: &mut impl Rng, field: PrimeField, n: usize) -> FieldFunction {
    FieldFunction::from_fn(field, n, |_| {
        let r: f64 = rng.gen::<f64>().sqrt();
        let t: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
        Complex64::from_polar(r, t)
    })
}

/// Real entries uniform in `[-1, 1]`.
pub fn real_function(rng: &mut impl Rng, field: PrimeField, n: usize) -> FieldFunction {
    FieldFunction::from_fn(field, n, |_| Complex64::new(rng.gen_range(-1.0..=1.0), 0.0))
}

pub fn sign_function(rng: &mut impl Rng, field: PrimeField, n: usize) -> FieldFunction {
    FieldFunction::from_fn(field, n, |_| {
        Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0)
    })
}

/// Indicator of a set containing each point independently with probability `density`.
pub fn random_set(rng: &mut impl Rng, field: PrimeField, n: usize, density: f64) -> FieldFunction {
    FieldFunction::indicator(field, n, |_| rng.gen::<f64>() < density)
}

/// A uniformly chosen subspace of the given dimension.
pub fn subspace_of_dim(rng: &mut impl Rng, field: PrimeField, n: usize, dim: usize) -> Subspace {
    let mut vecs: Vec<Vec<u32>> = Vec::new();
    let mut s = Subspace::zero(field, n);
    while s.dim() < dim.min(n) {
        let v = vector(rng, field, n);
        if !s.contains(&v) {
            vecs.push(v);
            s = Subspace::span(field, n, &vecs).expect("ambient vectors");
        }
    }
    s
}

pub fn subspace(rng: &mut impl Rng, field: PrimeField, n: usize) -> Subspace {
    let dim = rng.gen_range(0..=n);
    subspace_of_dim(rng, field, n, dim)
}

pub fn matrix(rng: &mut impl Rng, field: PrimeField, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| residue(rng, field)).collect();
    Matrix::from_flat(field, rows, cols, data).expect("shape")
}

pub fn symmetric_matrix(rng: &mut impl Rng, field: PrimeField, n: usize) -> Matrix {
    let mut m = Matrix::zeros(field, n, n);
    for i in 0..n {
        for j in i..n {
            let v = residue(rng, field);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

pub fn invertible_matrix(rng: &mut impl Rng, field: PrimeField, n: usize) -> Matrix {
    loop {
        let m = matrix(rng, field, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// A symmetric `n x n` matrix of rank exactly `r`, as `P^T D P` with `D`
/// diagonal carrying `r` nonzero entries.
pub fn symmetric_of_rank(rng: &mut impl Rng, field: PrimeField, n: usize, r: usize) -> Matrix {
    let mut d = Matrix::zeros(field, n, n);
    for i in 0..r.min(n) {
        d.set(i, i, nonzero_residue(rng, field));
    }
    let p = invertible_matrix(rng, field, n);
    p.transpose()
        .mul(&d)
        .and_then(|pd| pd.mul(&p))
        .expect("square")
}

pub fn bilinear_form(rng: &mut impl Rng, field: PrimeField, n: usize) -> BilinearForm {
    BilinearForm::on_full(symmetric_matrix(rng, field, n)).expect("symmetric")
}

/// `x^T A x + l.x + c` with `A` random upper-triangular, on `domain`.
pub fn quadratic_form_on(rng: &mut impl Rng, domain: &Subspace) -> QuadraticForm {
    let field = domain.field();
    let n = domain.ambient_dim();
    let mut quad = Matrix::zeros(field, n, n);
    for i in 0..n {
        for j in i..n {
            quad.set(i, j, residue(rng, field));
        }
    }
    let lin = vector(rng, field, n);
    let c = residue(rng, field);
    QuadraticForm::new(quad, lin, c, domain.clone()).expect("shapes agree")
}

/// A pure phase `x^T A x + l.x` on the whole space.
pub fn pure_phase(rng: &mut impl Rng, field: PrimeField, n: usize) -> QuadraticForm {
    quadratic_form_on(rng, &Subspace::full(field, n)).without_constant()
}

fn affine_phase(rng: &mut impl Rng, field: PrimeField, n: usize) -> AffinePhase {
    AffinePhase {
        lin: vector(rng, field, n),
        constant: residue(rng, field),
    }
}

/// A quadratic average whose base has codimension at most `max_codim`. Half
/// the time the phases are coset-wise, so `Q` is a quadratic phase on every
/// coset; otherwise each point gets an independent affine phase.
pub fn quadratic_average(
    rng: &mut impl Rng,
    field: PrimeField,
    n: usize,
    max_codim: usize,
) -> QuadraticAverage {
    let codim = rng.gen_range(0..=max_codim.min(n));
    let base = subspace_of_dim(rng, field, n, n - codim);
    let form = quadratic_form_on(rng, &base);
    if rng.gen::<bool>() {
        let size = field.size(n).expect("small space");
        let table: Vec<AffinePhase> = (0..size).map(|_| affine_phase(rng, field, n)).collect();
        QuadraticAverage::coset_wise(base, form, |rep| table[rep].clone()).expect("consistent")
    } else {
        let size = field.size(n).expect("small space");
        let phases = (0..size).map(|_| affine_phase(rng, field, n)).collect();
        QuadraticAverage::new(base, form, phases).expect("consistent")
    }
}
