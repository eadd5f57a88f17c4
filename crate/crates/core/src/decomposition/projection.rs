use serde::{Deserialize, Serialize};

use crate::check::{Check, SLACK};
use crate::error::{Error, Result};
use crate::harmonic::{convolve_subspace, fourier, l2_norm, u2_dual_norm, FieldFunction};
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralProjection {
    /// Annihilator of the large spectrum.
    pub subspace: Subspace,
    /// `f * mu_V`.
    pub smoothed: FieldFunction,
    /// `||f - f * mu_V||_2`.
    pub residual_norm: f64,
    /// Frequencies with `|f^(r)| >= rho`, as table indices.
    pub large_spectrum: Vec<usize>,
    pub rho: f64,
    pub checks: Vec<Check>,
}

/// Projects `f` onto functions constant on cosets of `V`, where `V` annihilates
/// every frequency of modulus at least `rho = delta^3 / T^2`.
pub fn large_spectrum_projection(
    f: &FieldFunction,
    delta: f64,
    t: f64,
) -> Result<SpectralProjection> {
    if !(delta > 0.0) || !(t > 0.0) {
        return Err(Error::InvalidArgument("delta and T must be positive".into()));
    }
    let dual = u2_dual_norm(f);
    if dual > t + SLACK {
        return Err(Error::Precondition(format!(
            "U2 dual norm {dual} exceeds T = {t}"
        )));
    }
    let field = f.field();
    let n = f.n();
    let rho = delta.powi(3) / (t * t);
    let spec = fourier(f);
    let large: Vec<usize> = spec
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() >= rho)
        .map(|(i, _)| i)
        .collect();
    let freqs: Vec<Vec<u32>> = large.iter().map(|&i| field.decode(i, n)).collect();
    let subspace = Subspace::annihilator_of(field, n, &freqs)?;
    let smoothed = convolve_subspace(f, &subspace)?;
    let residual_norm = l2_norm(&f.sub(&smoothed)?);

    // the smoothed spectrum lives on span(K) and agrees with f there
    let perp = subspace.perp();
    let smooth_spec = fourier(&smoothed);
    let mut spectrum_err: f64 = 0.0;
    for (i, (a, b)) in smooth_spec.coeffs().iter().zip(spec.coeffs()).enumerate() {
        let want = if perp.contains(&field.decode(i, n)) { *b } else { num_complex::Complex64::new(0.0, 0.0) };
        spectrum_err = spectrum_err.max((a - want).norm());
    }
    let checks = vec![
        Check::le(
            "codim V <= delta^-4 T^4",
            subspace.codim() as f64,
            t.powi(4) / delta.powi(4),
        ),
        Check::le("||f - f*mu_V||_2 <= delta", residual_norm, delta),
        Check::le("spectrum of f*mu_V is f^ restricted to V^perp", spectrum_err, 0.0),
    ];
    Ok(SpectralProjection {
        subspace,
        smoothed,
        residual_norm,
        large_spectrum: large,
        rho,
        checks,
    })
}
