//! Fourier analysis and Gowers norms for functions on `F_p^n`.

mod fourier;
mod function;
mod norms;
mod phase;

pub use fourier::{fourier, fourier_direct, inverse_fourier};
pub use function::{FieldFunction, Spectrum, TableRepr};
pub use norms::{
    l1_norm, l2_norm, linf_norm, u2_dual_norm, u2_norm, u2_norm_direct, u2_norm_pow4, u3_norm,
    u3_norm_direct,
};
pub use phase::{
    all_pure_phases, all_quadratic_forms, best_quadratic_phase, gauss_sum, phase_count,
    phase_function, quad_correlation, PhaseMatch, DEFAULT_PHASE_CAP,
};

use crate::error::Result;
use crate::subspace::Subspace;

/// `x -> E_{u in V} f(x + u)`: averages `f` over each coset of `V`.
pub fn convolve_subspace(f: &FieldFunction, v: &Subspace) -> Result<FieldFunction> {
    if v.field() != f.field() || v.ambient_dim() != f.n() {
        return Err(crate::Error::Dimension(
            "subspace and function live on different spaces".into(),
        ));
    }
    let labels = v.coset_labels();
    let mut sums = vec![num_complex::Complex64::new(0.0, 0.0); f.len()];
    for (&l, &z) in labels.iter().zip(f.values()) {
        sums[l] += z;
    }
    let size = v.size() as f64;
    let values = labels.iter().map(|&l| sums[l] / size).collect();
    FieldFunction::new(f.field(), f.n(), values)
}
