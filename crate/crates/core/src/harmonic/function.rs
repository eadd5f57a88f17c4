use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;

/// A complex-valued function on `F_p^n`, stored densely in index order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct FieldFunction {
    field: PrimeField,
    n: usize,
    values: Vec<Complex64>,
}

/// Fourier coefficients `f^(r)`, indexed like the physical side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct Spectrum {
    field: PrimeField,
    n: usize,
    coeffs: Vec<Complex64>,
}

/// Wire format shared by functions and spectra: `{p, n, re, im}`.
#[derive(Serialize, Deserialize)]
pub struct TableRepr {
    pub p: u32,
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

fn check_table(field: PrimeField, n: usize, values: &[Complex64]) -> Result<()> {
    let size = field
        .size(n)
        .ok_or_else(|| Error::Dimension(format!("F_{}^{n} is too large", field.p())))?;
    if values.len() != size {
        return Err(Error::Dimension(format!(
            "table of length {} for F_{}^{n} (expected {size})",
            values.len(),
            field.p()
        )));
    }
    if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidArgument("table has non-finite entries".into()));
    }
    Ok(())
}

fn from_repr(r: TableRepr) -> Result<(PrimeField, usize, Vec<Complex64>)> {
    let field = PrimeField::new(r.p)?;
    if r.re.len() != r.im.len() {
        return Err(Error::Dimension("re and im have different lengths".into()));
    }
    let values: Vec<Complex64> = r
        .re
        .iter()
        .zip(&r.im)
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect();
    check_table(field, r.n, &values)?;
    Ok((field, r.n, values))
}

fn to_repr(field: PrimeField, n: usize, values: &[Complex64]) -> TableRepr {
    TableRepr {
        p: field.p(),
        n,
        re: values.iter().map(|z| z.re).collect(),
        im: values.iter().map(|z| z.im).collect(),
    }
}

impl TryFrom<TableRepr> for FieldFunction {
    type Error = Error;

    fn try_from(r: TableRepr) -> Result<Self> {
        let (field, n, values) = from_repr(r)?;
        Ok(FieldFunction { field, n, values })
    }
}

impl From<FieldFunction> for TableRepr {
    fn from(f: FieldFunction) -> Self {
        to_repr(f.field, f.n, &f.values)
    }
}

impl TryFrom<TableRepr> for Spectrum {
    type Error = Error;

    fn try_from(r: TableRepr) -> Result<Self> {
        let (field, n, coeffs) = from_repr(r)?;
        Ok(Spectrum { field, n, coeffs })
    }
}

impl From<Spectrum> for TableRepr {
    fn from(s: Spectrum) -> Self {
        to_repr(s.field, s.n, &s.coeffs)
    }
}

impl FieldFunction {
    pub fn new(field: PrimeField, n: usize, values: Vec<Complex64>) -> Result<Self> {
        check_table(field, n, &values)?;
        Ok(FieldFunction { field, n, values })
    }

    pub fn zeros(field: PrimeField, n: usize) -> Self {
        FieldFunction::constant(field, n, Complex64::new(0.0, 0.0))
    }

    pub fn constant(field: PrimeField, n: usize, c: Complex64) -> Self {
        let size = field.size(n).expect("ambient space too large");
        FieldFunction {
            field,
            n,
            values: vec![c; size],
        }
    }

    /// Tabulates `g` at every point of `F_p^n`.
    pub fn from_fn(field: PrimeField, n: usize, mut g: impl FnMut(&[u32]) -> Complex64) -> Self {
        let size = field.size(n).expect("ambient space too large");
        let mut x = vec![0u32; n];
        let values = (0..size)
            .map(|i| {
                field.decode_into(i, &mut x);
                g(&x)
            })
            .collect();
        FieldFunction { field, n, values }
    }

    pub fn from_real(field: PrimeField, n: usize, values: &[f64]) -> Result<Self> {
        FieldFunction::new(
            field,
            n,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Indicator of the points for which `member` holds.
    pub fn indicator(field: PrimeField, n: usize, mut member: impl FnMut(&[u32]) -> bool) -> Self {
        FieldFunction::from_fn(field, n, |x| {
            Complex64::new(if member(x) { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// `omega^{k(x)}` for an `F_p`-valued table `k` in index order.
    pub fn phase_table(field: PrimeField, n: usize, exponents: &[u32]) -> Result<Self> {
        let roots = field.roots_of_unity();
        FieldFunction::new(
            field,
            n,
            exponents.iter().map(|&k| roots[(k % field.p()) as usize]).collect(),
        )
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at(&self, x: &[u32]) -> Complex64 {
        self.values[self.field.encode(x)]
    }

    pub fn same_space(&self, other: &FieldFunction) -> Result<()> {
        if self.field != other.field || self.n != other.n {
            return Err(Error::Dimension(format!(
                "functions on F_{}^{} and F_{}^{}",
                self.p(),
                self.n,
                other.p(),
                other.n
            )));
        }
        Ok(())
    }

    pub fn map(&self, g: impl Fn(Complex64) -> Complex64) -> FieldFunction {
        FieldFunction {
            field: self.field,
            n: self.n,
            values: self.values.iter().map(|&z| g(z)).collect(),
        }
    }

    fn zip(&self, other: &FieldFunction, g: impl Fn(Complex64, Complex64) -> Complex64) -> Result<FieldFunction> {
        self.same_space(other)?;
        Ok(FieldFunction {
            field: self.field,
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| g(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &FieldFunction) -> Result<FieldFunction> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &FieldFunction) -> Result<FieldFunction> {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &FieldFunction) -> Result<FieldFunction> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> FieldFunction {
        self.map(|z| z * c)
    }

    pub fn conj(&self) -> FieldFunction {
        self.map(|z| z.conj())
    }

    /// `x -> f(x + c)`.
    pub fn translate(&self, c: &[u32]) -> FieldFunction {
        let f = self.field;
        let mut x = vec![0u32; self.n];
        let values = (0..self.len())
            .map(|i| {
                f.decode_into(i, &mut x);
                for (xi, &ci) in x.iter_mut().zip(c) {
                    *xi = f.add(*xi, ci);
                }
                self.values[f.encode(&x)]
            })
            .collect();
        FieldFunction {
            field: self.field,
            n: self.n,
            values,
        }
    }

    /// Multiplicative derivative `x -> f(x) conj(f(x + c))`.
    pub fn derivative(&self, c: &[u32]) -> FieldFunction {
        let shifted = self.translate(c);
        self.zip(&shifted, |a, b| a * b.conj()).expect("same space")
    }

    /// `E_x f(x)`.
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.len() as f64
    }

    /// `<f, g> = E_x f(x) conj(g(x))`.
    pub fn inner(&self, other: &FieldFunction) -> Result<Complex64> {
        self.same_space(other)?;
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a * b.conj())
            .sum();
        Ok(s / self.len() as f64)
    }

    /// `f - E f`; for an indicator this is the balanced function.
    pub fn balanced(&self) -> FieldFunction {
        let m = self.mean();
        self.map(|z| z - m)
    }

    /// Largest pointwise distance to `other`.
    pub fn max_abs_diff(&self, other: &FieldFunction) -> Result<f64> {
        self.same_space(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl Spectrum {
    pub fn new(field: PrimeField, n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_table(field, n, &coeffs)?;
        Ok(Spectrum { field, n, coeffs })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn at(&self, r: &[u32]) -> Complex64 {
        self.coeffs[self.field.encode(r)]
    }

    /// `sum_r |f^(r)|^s`.
    pub fn power_sum(&self, s: f64) -> f64 {
        self.coeffs.iter().map(|z| z.norm().powf(s)).sum()
    }
}
