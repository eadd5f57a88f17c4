//! Quadratic averages `Q(x) = E_{y in x - V} omega^{q(x-y) + phi_y(x-y) + c_y}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::check::SLACK;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::forms::QuadraticForm;
use crate::harmonic::{linf_norm, u2_dual_norm, u2_norm, FieldFunction};
use crate::subspace::Subspace;

/// An affine map `v -> lin . v + constant`, read on the base space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinePhase {
    pub lin: Vec<u32>,
    pub constant: u32,
}

impl AffinePhase {
    pub fn zero(n: usize) -> Self {
        AffinePhase {
            lin: vec![0; n],
            constant: 0,
        }
    }

    pub fn eval(&self, field: PrimeField, v: &[u32]) -> u32 {
        field.add(field.dot(&self.lin, v), self.constant)
    }
}

/// A quadratic average with base `(V, q)` and one affine phase per point `y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AverageRepr", into = "AverageRepr")]
pub struct QuadraticAverage {
    base: Subspace,
    form: QuadraticForm,
    phases: Vec<AffinePhase>,
}

#[derive(Serialize, Deserialize)]
struct AverageRepr {
    base: Subspace,
    form: QuadraticForm,
    phases: Vec<AffinePhase>,
}

impl TryFrom<AverageRepr> for QuadraticAverage {
    type Error = Error;

    fn try_from(r: AverageRepr) -> Result<Self> {
        QuadraticAverage::new(r.base, r.form, r.phases)
    }
}

impl From<QuadraticAverage> for AverageRepr {
    fn from(a: QuadraticAverage) -> Self {
        AverageRepr {
            base: a.base,
            form: a.form,
            phases: a.phases,
        }
    }
}

impl QuadraticAverage {
    /// `phases[i]` belongs to the point with table index `i`. The form is
    /// re-homed onto `base`.
    pub fn new(base: Subspace, form: QuadraticForm, phases: Vec<AffinePhase>) -> Result<Self> {
        let field = base.field();
        let n = base.ambient_dim();
        if form.field() != field || form.ambient_dim() != n {
            return Err(Error::Dimension("form and base live on different spaces".into()));
        }
        let size = field
            .size(n)
            .ok_or_else(|| Error::Dimension("ambient space too large".into()))?;
        if phases.len() != size {
            return Err(Error::Dimension(format!(
                "{} phases for {size} points",
                phases.len()
            )));
        }
        let p = field.p();
        let phases = phases
            .into_iter()
            .map(|ph| {
                if ph.lin.len() != n {
                    return Err(Error::Dimension("phase functional has wrong length".into()));
                }
                Ok(AffinePhase {
                    lin: ph.lin.iter().map(|&c| c % p).collect(),
                    constant: ph.constant % p,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let form = form.with_domain(base.clone())?;
        Ok(QuadraticAverage { base, form, phases })
    }

    /// All phases zero.
    pub fn plain(base: Subspace, form: QuadraticForm) -> Result<Self> {
        let n = base.ambient_dim();
        let size = base.field().size(n).expect("ambient space too large");
        QuadraticAverage::new(base, form, vec![AffinePhase::zero(n); size])
    }

    /// Base `(V, q)` with phases chosen so that on every coset `C` of `V`,
    /// `Q(x) = omega^{q(x - y_C) + psi_C(x - y_C)}` where `y_C` is the canonical
    /// coset representative and `psi_C` is given per representative index.
    pub fn coset_wise(
        base: Subspace,
        form: QuadraticForm,
        coset_phase: impl Fn(usize) -> AffinePhase,
    ) -> Result<Self> {
        let field = base.field();
        let n = base.ambient_dim();
        let form = form.with_domain(base.clone())?;
        let beta = form.bilinear();
        let q0 = form.eval(&vec![0; n]);
        let labels = base.coset_labels();
        let mut phases = Vec::with_capacity(labels.len());
        let mut y = vec![0u32; n];
        for (i, &rep) in labels.iter().enumerate() {
            field.decode_into(i, &mut y);
            let w = field.sub_vec(&y, &field.decode(rep, n));
            let psi = coset_phase(rep);
            // q(v + w) = q(v) + q(w) - q(0) + beta(w, v)
            let lin = field.add_vec(&beta.matrix().apply(&w), &psi.lin);
            let constant = field.add(field.sub(form.eval(&w), q0), psi.eval(field, &w));
            phases.push(AffinePhase { lin, constant });
        }
        QuadraticAverage::new(base, form, phases)
    }

    /// The pure phase `omega^{q(x)}` of a form on the whole space, written as
    /// an average with base `(F_p^n, q)`.
    pub fn from_phase(q: &QuadraticForm) -> Result<Self> {
        let n = q.ambient_dim();
        let full = Subspace::full(q.field(), n);
        let q = q.with_domain(full.clone())?;
        QuadraticAverage::coset_wise(full, q, |_| AffinePhase::zero(n))
    }

    pub fn field(&self) -> PrimeField {
        self.base.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.ambient_dim()
    }

    pub fn base(&self) -> &Subspace {
        &self.base
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn phases(&self) -> &[AffinePhase] {
        &self.phases
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn complexity(&self) -> usize {
        self.base.codim()
    }

    /// Dense table of `Q`.
    pub fn evaluate(&self) -> FieldFunction {
        let field = self.field();
        let n = self.ambient_dim();
        let roots = field.roots_of_unity();
        let elems = self.base.elements();
        let qv: Vec<u32> = elems.iter().map(|v| self.form.eval(v)).collect();
        let inv = 1.0 / elems.len() as f64;
        FieldFunction::from_fn(field, n, |x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (v, &qval) in elems.iter().zip(&qv) {
                let y = field.sub_vec(x, v);
                let ph = &self.phases[field.encode(&y)];
                let e = field.add(qval, ph.eval(field, v));
                acc += roots[e as usize];
            }
            acc * inv
        })
    }
}

/// One inequality `value <= bound`, evaluated with [`SLACK`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl BoundCheck {
    pub fn new(value: f64, bound: f64) -> Self {
        BoundCheck {
            value,
            bound,
            pass: value <= bound + SLACK,
        }
    }
}

fn same_ambient(a: &QuadraticAverage, b: &QuadraticAverage) -> Result<()> {
    if a.field() != b.field() || a.ambient_dim() != b.ambient_dim() {
        return Err(Error::Dimension("averages live on different spaces".into()));
    }
    Ok(())
}

/// Rank of `q_a - q_b` on `V_a ∩ V_b`, and the codimension of that intersection.
pub fn relative_rank(a: &QuadraticAverage, b: &QuadraticAverage) -> Result<(usize, usize)> {
    same_ambient(a, b)?;
    let diff = a.form.difference(&b.form)?;
    Ok((diff.rank(), diff.domain().codim()))
}

/// `||Q||_{U^2} <= p^{-rank/4}`.
pub fn quadave_u2_bound_check(qa: &QuadraticAverage) -> BoundCheck {
    let p = qa.field().p() as f64;
    BoundCheck::new(
        u2_norm(&qa.evaluate()),
        p.powf(-(qa.rank() as f64) / 4.0),
    )
}

/// `|<Q, Q'>| <= p^{-r/2}` with `r` the rank of `q - q'` on `V ∩ V'`.
pub fn quadave_pair_correlation_check(
    a: &QuadraticAverage,
    b: &QuadraticAverage,
) -> Result<BoundCheck> {
    let (r, _) = relative_rank(a, b)?;
    let p = a.field().p() as f64;
    let value = a.evaluate().inner(&b.evaluate())?.norm();
    Ok(BoundCheck::new(value, p.powf(-(r as f64) / 2.0)))
}

/// `||Q conj(Q')||*_{U^2} <= p^{3(d + r)/4}`.
pub fn quadave_product_dual_check(
    a: &QuadraticAverage,
    b: &QuadraticAverage,
) -> Result<BoundCheck> {
    let (r, d) = relative_rank(a, b)?;
    let p = a.field().p() as f64;
    let product = a.evaluate().mul(&b.evaluate().conj())?;
    Ok(BoundCheck::new(
        u2_dual_norm(&product),
        p.powf(3.0 * (d + r) as f64 / 4.0),
    ))
}

/// The multiplier of one term: a scalar or a function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Coefficient(Complex64),
    Function(FieldFunction),
}

impl Factor {
    fn table(&self, field: PrimeField, n: usize) -> FieldFunction {
        match self {
            Factor::Coefficient(c) => FieldFunction::constant(field, n, *c),
            Factor::Function(u) => u.clone(),
        }
    }

    pub fn linf(&self) -> f64 {
        match self {
            Factor::Coefficient(c) => c.norm(),
            Factor::Function(u) => linf_norm(u),
        }
    }

    pub fn u2_dual(&self) -> f64 {
        match self {
            Factor::Coefficient(c) => c.norm(),
            Factor::Function(u) => u2_dual_norm(u),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombinationTerm {
    pub factor: Factor,
    pub average: QuadraticAverage,
}

/// `sum_i U_i Q_i` with each `U_i` a scalar or a function.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QuadAverageCombination {
    pub terms: Vec<CombinationTerm>,
}

impl QuadAverageCombination {
    pub fn evaluate(&self, field: PrimeField, n: usize) -> Result<FieldFunction> {
        let mut acc = FieldFunction::zeros(field, n);
        for t in &self.terms {
            let term = t.factor.table(field, n).mul(&t.average.evaluate())?;
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// `sum_i ||U_i||_inf`.
    pub fn sum_linf(&self) -> f64 {
        self.terms.iter().map(|t| t.factor.linf()).sum()
    }

    /// `sum_i ||U_i||*_{U^2}`.
    pub fn sum_u2_dual(&self) -> f64 {
        self.terms.iter().map(|t| t.factor.u2_dual()).sum()
    }

    pub fn min_rank(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.average.rank()).min()
    }

    pub fn max_complexity(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.average.complexity()).max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{gauss_sum, phase_function};
    use crate::linalg::Matrix;
    use crate::random;

    const TOL: f64 = 1e-9;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn trivial_average_is_one() {
        let fp = f(3);
        let qa = QuadraticAverage::plain(Subspace::full(fp, 2), QuadraticForm::zero(fp, 2)).unwrap();
        assert!(qa
            .evaluate()
            .values()
            .iter()
            .all(|z| (z - Complex64::new(1.0, 0.0)).norm() < TOL));
    }

    #[test]
    fn zero_phases_give_gauss_sum_on_every_coset() {
        let fp = f(3);
        let mut rng = random::trial_rng(1, "plain", 0);
        let v = random::subspace_of_dim(&mut rng, fp, 3, 2);
        let q = random::quadratic_form_on(&mut rng, &v);
        let qa = QuadraticAverage::plain(v.clone(), q.clone()).unwrap();
        let g = gauss_sum(&q);
        assert!(qa.evaluate().values().iter().all(|z| (z - g).norm() < TOL));
    }

    #[test]
    fn zero_dimensional_base_gives_pointwise_phases() {
        let fp = f(5);
        let phases: Vec<AffinePhase> = (0..25)
            .map(|i| AffinePhase {
                lin: vec![0, 0],
                constant: (i * 7 % 5) as u32,
            })
            .collect();
        let qa = QuadraticAverage::new(Subspace::zero(fp, 2), QuadraticForm::zero(fp, 2), phases.clone()).unwrap();
        let roots = fp.roots_of_unity();
        for (z, ph) in qa.evaluate().values().iter().zip(&phases) {
            assert!((z - roots[ph.constant as usize]).norm() < TOL);
        }
    }

    #[test]
    fn phase_round_trip() {
        let mut rng = random::trial_rng(2, "from-phase", 0);
        for p in [2, 3, 5] {
            let q = random::quadratic_form_on(&mut rng, &Subspace::full(f(p), 2));
            let qa = QuadraticAverage::from_phase(&q).unwrap();
            assert!(qa.evaluate().max_abs_diff(&phase_function(&q)).unwrap() < TOL);
            assert_eq!(qa.rank(), q.rank());
            assert_eq!(qa.complexity(), 0);
        }
    }

    #[test]
    fn coset_wise_average_is_quadratic_on_cosets() {
        let fp = f(3);
        let mut rng = random::trial_rng(3, "coset", 0);
        let v = random::subspace_of_dim(&mut rng, fp, 3, 2);
        let q = random::quadratic_form_on(&mut rng, &v);
        let psis: Vec<AffinePhase> = (0..27)
            .map(|_| AffinePhase {
                lin: random::vector(&mut rng, fp, 3),
                constant: random::residue(&mut rng, fp),
            })
            .collect();
        let qa = QuadraticAverage::coset_wise(v.clone(), q.clone(), |rep| psis[rep].clone()).unwrap();
        let table = qa.evaluate();
        let labels = v.coset_labels();
        let roots = fp.roots_of_unity();
        for (i, z) in table.values().iter().enumerate() {
            let x = fp.decode(i, 3);
            let rep = labels[i];
            let w = fp.sub_vec(&x, &fp.decode(rep, 3));
            let e = fp.add(q.eval(&w), psis[rep].eval(fp, &w));
            assert!((z - roots[e as usize]).norm() < TOL);
        }
    }

    #[test]
    fn u2_check_examples() {
        let fp = f(3);
        let mut rng = random::trial_rng(4, "u2", 0);
        let zero = QuadraticAverage::plain(Subspace::full(fp, 2), QuadraticForm::zero(fp, 2)).unwrap();
        let c = quadave_u2_bound_check(&zero);
        assert!(c.pass && (c.bound - 1.0).abs() < TOL);

        let q = QuadraticForm::pure(Matrix::identity(fp, 2)).unwrap();
        let lin = random::vector(&mut rng, fp, 2);
        let qa = QuadraticAverage::coset_wise(Subspace::full(fp, 2), q, |_| AffinePhase {
            lin: lin.clone(),
            constant: 0,
        })
        .unwrap();
        let c = quadave_u2_bound_check(&qa);
        assert!(c.pass && (c.bound - 3f64.powf(-0.5)).abs() < TOL);

        let mut m = Matrix::zeros(f(2), 3, 3);
        m.set(0, 1, 1);
        let qa = QuadraticAverage::plain(Subspace::full(f(2), 3), QuadraticForm::pure(m).unwrap()).unwrap();
        let c = quadave_u2_bound_check(&qa);
        assert!(c.pass && (c.bound - 2f64.powf(-0.5)).abs() < TOL);
    }

    #[test]
    fn pair_correlation_examples() {
        let fp = f(3);
        let q0 = QuadraticForm::pure(Matrix::identity(fp, 2)).unwrap();
        let a = QuadraticAverage::from_phase(&q0).unwrap();
        let c = quadave_pair_correlation_check(&a, &a).unwrap();
        assert!(c.pass && (c.bound - 1.0).abs() < TOL);

        let b = QuadraticAverage::from_phase(&QuadraticForm::zero(fp, 2)).unwrap();
        let c = quadave_pair_correlation_check(&a, &b).unwrap();
        assert!((c.value - c.bound).abs() < TOL);
        assert!((c.bound - 1.0 / 3.0).abs() < TOL);
    }

    #[test]
    fn product_dual_examples() {
        let fp = f(3);
        let trivial = QuadraticAverage::plain(Subspace::full(fp, 2), QuadraticForm::zero(fp, 2)).unwrap();
        let c = quadave_product_dual_check(&trivial, &trivial).unwrap();
        assert!(c.pass && (c.value - 1.0).abs() < TOL);

        let q0 = QuadraticForm::pure(Matrix::identity(fp, 2)).unwrap();
        let a = QuadraticAverage::from_phase(&q0).unwrap();
        let b = QuadraticAverage::from_phase(&QuadraticForm::zero(fp, 2)).unwrap();
        let c = quadave_product_dual_check(&a, &b).unwrap();
        // a rank-2 phase has flat spectrum of modulus 1/3 on 9 points
        assert!((c.value - 3f64.powf(0.5)).abs() < TOL);
        assert!(c.pass);
    }

    #[test]
    fn json_round_trip() {
        let fp = f(3);
        let mut rng = random::trial_rng(5, "json", 0);
        let v = random::subspace_of_dim(&mut rng, fp, 2, 1);
        let q = random::quadratic_form_on(&mut rng, &v);
        let qa = QuadraticAverage::plain(v, q).unwrap();
        let text = serde_json::to_string(&qa).unwrap();
        let back: QuadraticAverage = serde_json::from_str(&text).unwrap();
        assert_eq!(qa, back);
    }
}
