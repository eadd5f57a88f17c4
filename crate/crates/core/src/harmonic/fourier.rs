use num_complex::Complex64;

use super::function::{FieldFunction, Spectrum};
use crate::field::PrimeField;

/// Applies `out[r] = sum_x in[x] w^{r x}` along every axis, where `roots[k]`
/// holds `w^k` for a primitive `p`-th root `w`.
fn transform_axes(field: PrimeField, n: usize, data: &mut [Complex64], roots: &[Complex64]) {
    let p = field.p() as usize;
    let mut fiber = vec![Complex64::new(0.0, 0.0); p];
    let mut stride = 1usize;
    for _ in 0..n {
        let block = stride * p;
        for base in (0..data.len()).step_by(block) {
            for off in 0..stride {
                let start = base + off;
                for (x, slot) in fiber.iter_mut().enumerate() {
                    *slot = data[start + x * stride];
                }
                for r in 0..p {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (x, &v) in fiber.iter().enumerate() {
                        acc += v * roots[(r * x) % p];
                    }
                    data[start + r * stride] = acc;
                }
            }
        }
        stride = block;
    }
}

/// `f^(r) = E_x f(x) omega^{r.x}`, so that `f(x) = sum_r f^(r) omega^{-r.x}`.
pub fn fourier(f: &FieldFunction) -> Spectrum {
    let field = f.field();
    let mut data = f.values().to_vec();
    transform_axes(field, f.n(), &mut data, &field.roots_of_unity());
    let scale = 1.0 / data.len() as f64;
    for z in data.iter_mut() {
        *z *= scale;
    }
    Spectrum::new(field, f.n(), data).expect("transform preserves shape")
}

/// Inverse of [`fourier`]: `f(x) = sum_r f^(r) omega^{-r.x}`.
pub fn inverse_fourier(s: &Spectrum) -> FieldFunction {
    let field = s.field();
    let roots: Vec<Complex64> = field.roots_of_unity().iter().map(|z| z.conj()).collect();
    let mut data = s.coeffs().to_vec();
    transform_axes(field, s.n(), &mut data, &roots);
    FieldFunction::new(field, s.n(), data).expect("transform preserves shape")
}

/// The `O(N^2)` definition, used as a reference.
pub fn fourier_direct(f: &FieldFunction) -> Spectrum {
    let field = f.field();
    let n = f.n();
    let roots = field.roots_of_unity();
    let pts = field.points(n);
    let coeffs = pts
        .iter()
        .map(|r| {
            let s: Complex64 = pts
                .iter()
                .zip(f.values())
                .map(|(x, &v)| v * roots[field.dot(r, x) as usize])
                .sum();
            s / pts.len() as f64
        })
        .collect();
    Spectrum::new(field, n, coeffs).expect("shape")
}
