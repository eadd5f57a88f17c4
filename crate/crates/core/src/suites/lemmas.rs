use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Suite;
use crate::check::{Check, TOL};
use crate::counting::{
    bilinear_correlation_check, gvn_check, multibilinear_average, quadraticpart_bound_check,
    rank_combination, square_indep_rank_witness, MultiBilinearSystem, QuadPartParams,
};
use crate::decomposition::{
    cluster_vectors, large_spectrum_projection, peel_neighborhoods, rank_gap_partition,
    WeightedGraph,
};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::forms::{BilinearForm, QuadraticForm};
use crate::harmonic::{
    all_quadratic_forms, convolve_subspace, gauss_sum, l1_norm, l2_norm, linf_norm, u2_dual_norm,
    u2_norm, u3_norm, FieldFunction,
};
use crate::linalg::Matrix;
use crate::quadave::{
    quadave_pair_correlation_check, quadave_product_dual_check, quadave_u2_bound_check,
    CombinationTerm, Factor, QuadAverageCombination, QuadraticAverage,
};
use crate::random;
use crate::subspace::Subspace;
use crate::system::{square_independent, LinearSystem};

fn pow(p: u32, e: f64) -> f64 {
    (p as f64).powf(e)
}

pub struct Gauss;

#[derive(Serialize, Deserialize)]
pub struct GaussInstance {
    pub form: QuadraticForm,
}

impl Suite for Gauss {
    const ID: &'static str = "gauss";
    type Instance = GaussInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> GaussInstance {
        let domain = random::subspace(rng, field, n);
        GaussInstance {
            form: random::quadratic_form_on(rng, &domain),
        }
    }

    fn exhaustive(field: PrimeField, n: usize, cap: u128) -> Option<Result<Vec<GaussInstance>>> {
        Some(all_quadratic_forms(field, n, cap).map(|qs| {
            qs.into_iter().map(|form| GaussInstance { form }).collect()
        }))
    }

    fn check(inst: &GaussInstance, _: u128) -> Result<Vec<Check>> {
        let g = gauss_sum(&inst.form).norm();
        let level = pow(inst.form.field().p(), -(inst.form.rank() as f64) / 2.0);
        Ok(vec![
            Check::le("|E omega^q| <= p^{-r/2}", g, level),
            Check::le("|E omega^q| in {0, p^{-r/2}}", g.min((g - level).abs()), 0.0),
        ])
    }
}

pub struct QuadAveU2;

#[derive(Serialize, Deserialize)]
pub struct AverageInstance {
    pub average: QuadraticAverage,
}

impl Suite for QuadAveU2 {
    const ID: &'static str = "quadaveu2";
    type Instance = AverageInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> AverageInstance {
        AverageInstance {
            average: random::quadratic_average(rng, field, n, 2),
        }
    }

    fn check(inst: &AverageInstance, _: u128) -> Result<Vec<Check>> {
        let b = quadave_u2_bound_check(&inst.average);
        Ok(vec![
            Check::le("||Q||_U2 <= p^{-r/4}", b.value, b.bound),
            Check::le("||Q||_inf <= 1", linf_norm(&inst.average.evaluate()), 1.0),
        ])
    }
}

#[derive(Serialize, Deserialize)]
pub struct PairInstance {
    pub a: QuadraticAverage,
    pub b: QuadraticAverage,
}

fn random_pair(rng: &mut ChaCha8Rng, field: PrimeField, n: usize) -> PairInstance {
    let a = random::quadratic_average(rng, field, n, 2);
    // a quarter of the time share the base so the difference form matters
    let b = if rng.gen_range(0..4) == 0 {
        let form = random::quadratic_form_on(rng, a.base());
        QuadraticAverage::plain(a.base().clone(), form).expect("same space")
    } else {
        random::quadratic_average(rng, field, n, 2)
    };
    PairInstance { a, b }
}

pub struct QuadAveCorr;

impl Suite for QuadAveCorr {
    const ID: &'static str = "quadavecorr";
    type Instance = PairInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> PairInstance {
        random_pair(rng, field, n)
    }

    fn check(inst: &PairInstance, _: u128) -> Result<Vec<Check>> {
        let b = quadave_pair_correlation_check(&inst.a, &inst.b)?;
        Ok(vec![Check::le("|<Q, Q'>| <= p^{-r/2}", b.value, b.bound)])
    }
}

pub struct QuadAveU2Dual;

impl Suite for QuadAveU2Dual {
    const ID: &'static str = "quadaveu2*";
    type Instance = PairInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> PairInstance {
        random_pair(rng, field, n)
    }

    fn check(inst: &PairInstance, _: u128) -> Result<Vec<Check>> {
        let b = quadave_product_dual_check(&inst.a, &inst.b)?;
        Ok(vec![Check::le("||Q conj(Q')||*_U2 <= p^{3(d+r)/4}", b.value, b.bound)])
    }
}

pub struct Calculation;

#[derive(Serialize, Deserialize)]
pub struct CalculationInstance {
    pub subspace: Subspace,
    /// Shift, an element of `W^perp`.
    pub shift: Vec<u32>,
    /// Linear functional coefficients.
    pub twist: Vec<u32>,
}

impl CalculationInstance {
    pub fn function(&self) -> FieldFunction {
        let w = &self.subspace;
        let field = w.field();
        let roots = field.roots_of_unity();
        FieldFunction::from_fn(field, w.ambient_dim(), |x| {
            let v = field.sub_vec(x, &self.shift);
            if w.contains(&v) {
                roots[field.dot(&self.twist, &v) as usize]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

impl Suite for Calculation {
    const ID: &'static str = "calculation";
    type Instance = CalculationInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> CalculationInstance {
        let subspace = random::subspace(rng, field, n);
        let perp = subspace.perp();
        let coeffs = random::vector(rng, field, perp.dim());
        CalculationInstance {
            shift: perp.combine(&coeffs),
            twist: random::vector(rng, field, n),
            subspace,
        }
    }

    fn exhaustive(field: PrimeField, n: usize, _: u128) -> Option<Result<Vec<CalculationInstance>>> {
        Some(Ok(Subspace::enumerate_all(field, n)
            .into_iter()
            .map(|subspace| CalculationInstance {
                subspace,
                shift: vec![0; n],
                twist: vec![0; n],
            })
            .collect()))
    }

    fn check(inst: &CalculationInstance, _: u128) -> Result<Vec<Check>> {
        let w = &inst.subspace;
        if !w.perp().contains(&inst.shift) {
            return Err(Error::Precondition("shift is not in W^perp".into()));
        }
        let dual = u2_dual_norm(&inst.function());
        let want = pow(w.field().p(), -(w.codim() as f64) / 4.0);
        Ok(vec![Check::close("||g||*_U2 = p^{-d/4}", dual, want)])
    }
}

pub struct Shrink;

#[derive(Serialize, Deserialize)]
pub struct FunctionSubspace {
    pub f: FieldFunction,
    pub subspace: Subspace,
}

impl Suite for Shrink {
    const ID: &'static str = "shrink";
    type Instance = FunctionSubspace;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> FunctionSubspace {
        FunctionSubspace {
            f: random::bounded_function(rng, field, n),
            subspace: random::subspace(rng, field, n),
        }
    }

    fn check(inst: &FunctionSubspace, _: u128) -> Result<Vec<Check>> {
        let f = &inst.f;
        let g = convolve_subspace(f, &inst.subspace)?;
        Ok(vec![
            Check::le("||f*mu_V||_1 <= ||f||_1", l1_norm(&g), l1_norm(f)),
            Check::le("||f*mu_V||_2 <= ||f||_2", l2_norm(&g), l2_norm(f)),
            Check::le("||f*mu_V||_U2 <= ||f||_U2", u2_norm(&g), u2_norm(f)),
            Check::le("||f*mu_V||_U3 <= ||f||_U3", u3_norm(&g), u3_norm(f)),
        ])
    }
}

pub struct U2VsL2;

impl Suite for U2VsL2 {
    const ID: &'static str = "u2vsl2";
    type Instance = FunctionSubspace;

    /// `f` is made constant on the cosets of `V`.
    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> FunctionSubspace {
        let subspace = random::subspace(rng, field, n);
        let per_coset = random::bounded_function(rng, field, n);
        let labels = subspace.coset_labels();
        let values = labels.iter().map(|&l| per_coset.values()[l]).collect();
        FunctionSubspace {
            f: FieldFunction::new(field, n, values).expect("length p^n"),
            subspace,
        }
    }

    fn check(inst: &FunctionSubspace, _: u128) -> Result<Vec<Check>> {
        let f = &inst.f;
        let v = &inst.subspace;
        let smoothed = convolve_subspace(f, v)?;
        if smoothed.max_abs_diff(f)? > TOL {
            return Err(Error::Precondition("f is not constant on cosets of V".into()));
        }
        let r = v.codim() as f64;
        let p = v.field().p();
        let l2 = l2_norm(f);
        Ok(vec![
            Check::ge("||f||_U2 >= p^{-r/4} ||f||_2", u2_norm(f), pow(p, -r / 4.0) * l2),
            Check::le("||f||*_U2 <= p^{r/4} ||f||_2", u2_dual_norm(f), pow(p, r / 4.0) * l2),
        ])
    }
}

pub struct RankRestr;

#[derive(Serialize, Deserialize)]
pub struct RestrictionInstance {
    pub form: BilinearForm,
    pub subspace: Subspace,
}

impl Suite for RankRestr {
    const ID: &'static str = "rankrestr";
    type Instance = RestrictionInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> RestrictionInstance {
        let r = rng.gen_range(0..=n);
        RestrictionInstance {
            form: BilinearForm::on_full(random::symmetric_of_rank(rng, field, n, r)).expect("symmetric"),
            subspace: random::subspace(rng, field, n),
        }
    }

    fn check(inst: &RestrictionInstance, _: u128) -> Result<Vec<Check>> {
        let restricted = inst.form.restrict(&inst.subspace)?;
        let d = inst.subspace.codim() as f64;
        Ok(vec![Check::ge(
            "rank(beta|W) >= r - 2d",
            restricted.rank() as f64,
            inst.form.rank() as f64 - 2.0 * d,
        )])
    }
}

pub struct BilinearQr;

#[derive(Serialize, Deserialize)]
pub struct BilinearInstance {
    pub form: BilinearForm,
    pub g: FieldFunction,
    pub h: FieldFunction,
}

impl Suite for BilinearQr {
    const ID: &'static str = "bilinearqr";
    type Instance = BilinearInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> BilinearInstance {
        let domain = random::subspace(rng, field, n);
        let r = rng.gen_range(0..=n);
        let m = random::symmetric_of_rank(rng, field, n, r);
        BilinearInstance {
            form: BilinearForm::new(m, domain).expect("symmetric"),
            g: random::bounded_function(rng, field, n),
            h: random::bounded_function(rng, field, n),
        }
    }

    fn check(inst: &BilinearInstance, _: u128) -> Result<Vec<Check>> {
        let out = bilinear_correlation_check(&inst.form, &inst.g, &inst.h)?;
        Ok(vec![out.check])
    }
}

pub struct JustOneBilinear;

#[derive(Serialize, Deserialize)]
pub struct MultiBilinearInstance {
    pub system: MultiBilinearSystem,
    pub domain: Subspace,
}

impl Suite for JustOneBilinear {
    const ID: &'static str = "justonebilinear";
    type Instance = MultiBilinearInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> MultiBilinearInstance {
        let d = rng.gen_range(1..=3);
        let dim = rng.gen_range(0..=n.min(2));
        let domain = random::subspace_of_dim(rng, field, n, dim);
        let forms = (0..d * d)
            .map(|_| {
                let r = rng.gen_range(0..=n);
                BilinearForm::new(random::symmetric_of_rank(rng, field, n, r), domain.clone())
                    .expect("symmetric")
            })
            .collect();
        let lin = (0..d).map(|_| random::vector(rng, field, n)).collect();
        MultiBilinearInstance {
            system: MultiBilinearSystem::new(d, forms, lin).expect("consistent"),
            domain,
        }
    }

    fn check(inst: &MultiBilinearInstance, cap: u128) -> Result<Vec<Check>> {
        Ok(vec![multibilinear_average(&inst.system, &inst.domain, cap)?.check])
    }
}

fn forms_on(rng: &mut ChaCha8Rng, domain: &Subspace, count: usize) -> Vec<BilinearForm> {
    let field = domain.field();
    let n = domain.ambient_dim();
    (0..count)
        .map(|_| {
            let r = rng.gen_range(1..=n.max(1));
            BilinearForm::new(random::symmetric_of_rank(rng, field, n, r), domain.clone())
                .expect("symmetric")
        })
        .collect()
}

pub struct RankAverage;

#[derive(Serialize, Deserialize)]
pub struct RankAverageInstance {
    pub forms: Vec<BilinearForm>,
    pub mixing: Vec<Vec<u32>>,
}

impl Suite for RankAverage {
    const ID: &'static str = "rankaverage";
    type Instance = RankAverageInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> RankAverageInstance {
        let m = rng.gen_range(1..=3);
        let domain = random::subspace(rng, field, n);
        RankAverageInstance {
            forms: forms_on(rng, &domain, m),
            mixing: random::invertible_matrix(rng, field, m).row_vecs(),
        }
    }

    fn check(inst: &RankAverageInstance, _: u128) -> Result<Vec<Check>> {
        let field = inst
            .forms
            .first()
            .ok_or_else(|| Error::InvalidArgument("no forms".into()))?
            .field();
        let b = Matrix::from_rows(field, &inst.mixing, inst.forms.len())?;
        Ok(vec![rank_combination(&inst.forms, &b)?.check])
    }
}

pub struct RankAverageCor;

#[derive(Serialize, Deserialize)]
pub struct RankWitnessInstance {
    pub system: LinearSystem,
    pub forms: Vec<BilinearForm>,
}

fn random_square_independent(rng: &mut ChaCha8Rng, field: PrimeField) -> LinearSystem {
    loop {
        let d = rng.gen_range(1..=3usize);
        let m = rng.gen_range(1..=(d * (d + 1) / 2).min(4));
        let rows: Vec<Vec<u32>> = (0..m).map(|_| random::vector(rng, field, d)).collect();
        if let Ok(s) = LinearSystem::new(field, &rows) {
            if square_independent(&s) {
                return s;
            }
        }
    }
}

impl Suite for RankAverageCor {
    const ID: &'static str = "rankaveragecor";
    type Instance = RankWitnessInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> RankWitnessInstance {
        let system = random_square_independent(rng, field);
        let domain = random::subspace(rng, field, n);
        let forms = forms_on(rng, &domain, system.m());
        RankWitnessInstance { system, forms }
    }

    fn check(inst: &RankWitnessInstance, _: u128) -> Result<Vec<Check>> {
        Ok(vec![square_indep_rank_witness(&inst.system, &inst.forms)?.check])
    }
}

pub struct Nbds;

#[derive(Serialize, Deserialize)]
pub struct GraphInstance {
    pub graph: WeightedGraph,
    pub c: f64,
    pub gamma: f64,
}

impl Suite for Nbds {
    const ID: &'static str = "nbds";
    type Instance = GraphInstance;

    fn generate(rng: &mut ChaCha8Rng, _: PrimeField, _: usize, _: u64) -> GraphInstance {
        let k = rng.gen_range(1..=10);
        let density: f64 = rng.gen();
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
        let c: f64 = rng.gen_range(0.5..3.0);
        let total: f64 = raw.iter().sum();
        // vertex weights sum to at most C
        let scale = c * rng.gen_range(0.5..=1.0) / total;
        let weights = raw.iter().map(|w| w * scale).collect();
        let mut adjacency = vec![vec![false; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let e = rng.gen::<f64>() < density;
                adjacency[i][j] = e;
                adjacency[j][i] = e;
            }
        }
        GraphInstance {
            graph: WeightedGraph::new(weights, adjacency).expect("valid graph"),
            c,
            gamma: rng.gen_range(0.01..0.5),
        }
    }

    fn check(inst: &GraphInstance, _: u128) -> Result<Vec<Check>> {
        Ok(peel_neighborhoods(&inst.graph, inst.c, inst.gamma)?.checks)
    }
}

pub struct UnitVectors;

#[derive(Serialize, Deserialize)]
pub struct ClusterInstance {
    pub vectors: Vec<FieldFunction>,
    pub lambdas: Vec<Complex64>,
    pub c: f64,
    pub delta: f64,
}

impl Suite for UnitVectors {
    const ID: &'static str = "unitvectors";
    type Instance = ClusterInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> ClusterInstance {
        let k = rng.gen_range(0..=6);
        let mut vectors: Vec<FieldFunction> = Vec::with_capacity(k);
        for _ in 0..k {
            let v = match rng.gen_range(0..3) {
                0 if !vectors.is_empty() => {
                    // a near copy of an earlier vector, so that clusters form
                    let j = rng.gen_range(0..vectors.len());
                    let noise = random::bounded_function(rng, field, n);
                    let t: f64 = rng.gen_range(0.0..0.5);
                    vectors[j]
                        .scale(Complex64::new(1.0 - t, 0.0))
                        .add(&noise.scale(Complex64::new(t, 0.0)))
                        .expect("same space")
                }
                1 => crate::harmonic::phase_function(&random::pure_phase(rng, field, n)),
                _ => random::bounded_function(rng, field, n),
            };
            vectors.push(v);
        }
        let lambdas: Vec<Complex64> = (0..k)
            .map(|_| Complex64::from_polar(rng.gen::<f64>(), rng.gen::<f64>() * std::f64::consts::TAU))
            .collect();
        let weight: f64 = lambdas.iter().map(|l| l.norm()).sum();
        let c = weight.max(0.1) * rng.gen_range(1.0..1.5);
        ClusterInstance {
            vectors,
            lambdas,
            c,
            delta: rng.gen_range(0.1..1.0),
        }
    }

    fn check(inst: &ClusterInstance, _: u128) -> Result<Vec<Check>> {
        Ok(cluster_vectors(&inst.vectors, &inst.lambdas, inst.c, inst.delta)?.checks)
    }
}

pub struct Bogolyubov;

#[derive(Serialize, Deserialize)]
pub struct ProjectionInstance {
    pub f: FieldFunction,
    pub delta: f64,
    pub t: f64,
}

impl Suite for Bogolyubov {
    const ID: &'static str = "bogolyubov";
    type Instance = ProjectionInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> ProjectionInstance {
        let f = match rng.gen_range(0..3) {
            0 => random::bounded_function(rng, field, n),
            1 => {
                let density = rng.gen_range(0.1..0.9);
                random::random_set(rng, field, n, density).balanced()
            }
            _ => random::quadratic_average(rng, field, n, 2).evaluate(),
        };
        let t = u2_dual_norm(&f) * rng.gen_range(1.0..2.0);
        ProjectionInstance {
            f,
            delta: rng.gen_range(0.1..0.9),
            t: t.max(1e-6),
        }
    }

    fn check(inst: &ProjectionInstance, _: u128) -> Result<Vec<Check>> {
        Ok(large_spectrum_projection(&inst.f, inst.delta, inst.t)?.checks)
    }
}

pub struct RankGapSuite;

#[derive(Serialize, Deserialize)]
pub struct RankGapInstance {
    pub ranks: Vec<usize>,
    pub r0: f64,
    pub m: f64,
    pub t: f64,
}

impl Suite for RankGapSuite {
    const ID: &'static str = "rankgap";
    type Instance = RankGapInstance;

    fn generate(rng: &mut ChaCha8Rng, _: PrimeField, _: usize, _: u64) -> RankGapInstance {
        let k = rng.gen_range(0..=8);
        let top = rng.gen_range(1..=200);
        RankGapInstance {
            ranks: (0..k).map(|_| rng.gen_range(0..=top)).collect(),
            r0: rng.gen_range(0.5..4.0),
            m: rng.gen_range(2.0..4.0),
            t: rng.gen_range(1.01..4.0),
        }
    }

    fn check(inst: &RankGapInstance, _: u128) -> Result<Vec<Check>> {
        Ok(rank_gap_partition(&inst.ranks, inst.r0, inst.m, inst.t)?.checks)
    }
}

pub struct Gvn;

#[derive(Serialize, Deserialize)]
pub struct GvnInstance {
    pub system: LinearSystem,
    pub k: usize,
    pub functions: Vec<FieldFunction>,
}

/// `(system, k)` pairs valid over this field, cycled by trial.
pub fn gvn_catalog(field: PrimeField) -> Vec<(LinearSystem, usize)> {
    [("3ap", 1), ("xy", 1), ("4ap", 2)]
        .iter()
        .filter_map(|&(name, k)| LinearSystem::by_name(name, field).ok().map(|s| (s, k)))
        .collect()
}

impl Suite for Gvn {
    const ID: &'static str = "gvn";
    type Instance = GvnInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, trial: u64) -> GvnInstance {
        let catalog = gvn_catalog(field);
        let (system, k) = catalog[trial as usize % catalog.len()].clone();
        let functions = (0..system.m())
            .map(|_| match rng.gen_range(0..3) {
                0 => random::bounded_function(rng, field, n),
                1 => {
                    let density = rng.gen_range(0.1..0.9);
                    random::random_set(rng, field, n, density).balanced()
                }
                _ => random::real_function(rng, field, n),
            })
            .collect();
        GvnInstance { system, k, functions }
    }

    fn check(inst: &GvnInstance, cap: u128) -> Result<Vec<Check>> {
        let report = gvn_check(&inst.system, &inst.functions, inst.k, cap)?;
        Ok(vec![
            Check::le("CS complexity <= k", report.complexity as f64, inst.k as f64),
            report.check,
        ])
    }
}

pub struct QuadraticPart;

#[derive(Serialize, Deserialize)]
pub struct QuadPartInstance {
    pub system: LinearSystem,
    pub n: usize,
    pub functions: Vec<QuadAverageCombination>,
    pub params: QuadPartParams,
}

impl Suite for QuadraticPart {
    const ID: &'static str = "quadraticpart";
    type Instance = QuadPartInstance;

    fn generate(rng: &mut ChaCha8Rng, field: PrimeField, n: usize, _: u64) -> QuadPartInstance {
        let system = LinearSystem::schur_triple(field).expect("valid for every p");
        let functions: Vec<QuadAverageCombination> = (0..system.m())
            .map(|_| {
                let k = rng.gen_range(1..=2);
                let terms = (0..k)
                    .map(|_| {
                        let r = rng.gen_range(1..=n.max(1));
                        let q = QuadraticForm::pure(random::symmetric_of_rank(rng, field, n, r))
                            .expect("square");
                        let lambda = Complex64::from_polar(
                            rng.gen_range(0.0..1.0) / k as f64,
                            rng.gen::<f64>() * std::f64::consts::TAU,
                        );
                        CombinationTerm {
                            factor: Factor::Coefficient(lambda),
                            average: QuadraticAverage::from_phase(&q).expect("full space"),
                        }
                    })
                    .collect();
                QuadAverageCombination { terms }
            })
            .collect();
        let c = functions.iter().map(|f| f.sum_linf()).fold(0.0, f64::max);
        let t = functions.iter().map(|f| f.sum_u2_dual()).fold(0.0, f64::max);
        let r = functions.iter().filter_map(|f| f.min_rank()).min().unwrap_or(0);
        QuadPartInstance {
            system,
            n,
            functions,
            params: QuadPartParams {
                c,
                d: 0,
                r,
                t,
                delta: rng.gen_range(0.2..1.0),
            },
        }
    }

    fn check(inst: &QuadPartInstance, cap: u128) -> Result<Vec<Check>> {
        let out = quadraticpart_bound_check(&inst.functions, &inst.system, inst.n, &inst.params, cap)?;
        Ok(vec![out.check])
    }
}
