use num_complex::Complex64;
use rayon::prelude::*;

use super::fourier::fourier;
use super::function::FieldFunction;

/// `E_x |f(x)|`.
pub fn l1_norm(f: &FieldFunction) -> f64 {
    f.values().iter().map(|z| z.norm()).sum::<f64>() / f.len() as f64
}

/// `(E_x |f(x)|^2)^{1/2}`.
pub fn l2_norm(f: &FieldFunction) -> f64 {
    (f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / f.len() as f64).sqrt()
}

pub fn linf_norm(f: &FieldFunction) -> f64 {
    f.values().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `||f||_{U^2}^4 = sum_r |f^(r)|^4`.
pub fn u2_norm_pow4(f: &FieldFunction) -> f64 {
    fourier(f).power_sum(4.0)
}

pub fn u2_norm(f: &FieldFunction) -> f64 {
    u2_norm_pow4(f).powf(0.25)
}

/// `(sum_r |f^(r)|^{4/3})^{3/4}`, the norm dual to `U^2`.
pub fn u2_dual_norm(f: &FieldFunction) -> f64 {
    fourier(f).power_sum(4.0 / 3.0).powf(0.75)
}

/// `||f||_{U^3}^8 = E_c ||Delta_c f||_{U^2}^4`.
pub fn u3_norm(f: &FieldFunction) -> f64 {
    let field = f.field();
    let n = f.n();
    let parts: Vec<f64> = (0..f.len())
        .into_par_iter()
        .map(|c| u2_norm_pow4(&f.derivative(&field.decode(c, n))))
        .collect();
    let mean = parts.iter().sum::<f64>() / parts.len() as f64;
    mean.max(0.0).powf(0.125)
}

/// The defining four-fold average `E_{x,a,b} f(x) conj f(x+a) conj f(x+b) f(x+a+b)`,
/// to the power `1/4`. Cost `O(N^3)`; a reference for [`u2_norm`].
pub fn u2_norm_direct(f: &FieldFunction) -> f64 {
    let field = f.field();
    let n = f.n();
    let size = f.len();
    let v = f.values();
    let add = |i: usize, j: usize| {
        let x = field.decode(i, n);
        let y = field.decode(j, n);
        field.encode(&field.add_vec(&x, &y))
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 0..size {
        for a in 0..size {
            let xa = add(x, a);
            for b in 0..size {
                let xb = add(x, b);
                let xab = add(xa, b);
                acc += v[x] * v[xa].conj() * v[xb].conj() * v[xab];
            }
        }
    }
    (acc.re / (size * size * size) as f64).max(0.0).powf(0.25)
}

/// The eight-fold cube average defining `U^3`, to the power `1/8`. Cost `O(N^4)`.
pub fn u3_norm_direct(f: &FieldFunction) -> f64 {
    let field = f.field();
    let n = f.n();
    let size = f.len();
    let v = f.values();
    let pts = field.points(n);
    let add = |i: usize, j: usize| field.encode(&field.add_vec(&pts[i], &pts[j]));
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 0..size {
        for a in 0..size {
            let xa = add(x, a);
            for b in 0..size {
                let xb = add(x, b);
                let xab = add(xa, b);
                for c in 0..size {
                    let xc = add(x, c);
                    let xac = add(xa, c);
                    let xbc = add(xb, c);
                    let xabc = add(xab, c);
                    acc += v[x]
                        * v[xa].conj()
                        * v[xb].conj()
                        * v[xc].conj()
                        * v[xab]
                        * v[xac]
                        * v[xbc]
                        * v[xabc].conj();
                }
            }
        }
    }
    (acc.re / (size as f64).powi(4)).max(0.0).powf(0.125)
}
