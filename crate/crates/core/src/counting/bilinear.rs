use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::error::{Error, Result};
use crate::field::pow_u128;
use crate::forms::{restricted_rank, BilinearForm};
use crate::harmonic::FieldFunction;
use crate::linalg::Matrix;
use crate::subspace::Subspace;
use crate::system::{square_independent, LinearSystem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilinearCorrelation {
    pub value: Complex64,
    pub rank: usize,
    pub check: Check,
}

/// `|E_{x,y in V} omega^{beta(x,y)} g(x) h(y)| <= p^{-r/2}` with `V` the
/// domain of `beta` and `r` its rank there.
pub fn bilinear_correlation_check(
    beta: &BilinearForm,
    g: &FieldFunction,
    h: &FieldFunction,
) -> Result<BilinearCorrelation> {
    let field = beta.field();
    g.same_space(h)?;
    if g.field() != field || g.n() != beta.domain().ambient_dim() {
        return Err(Error::Dimension("functions and form live on different spaces".into()));
    }
    let roots = field.roots_of_unity();
    let elems = beta.domain().elements();
    let hv: Vec<Complex64> = elems.iter().map(|y| h.at(y)).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for x in &elems {
        let mx = beta.matrix().apply(x);
        let inner: Complex64 = elems
            .iter()
            .zip(&hv)
            .map(|(y, &hy)| roots[field.dot(&mx, y) as usize] * hy)
            .sum();
        acc += g.at(x) * inner;
    }
    let value = acc / (elems.len() * elems.len()) as f64;
    let rank = beta.rank();
    Ok(BilinearCorrelation {
        value,
        rank,
        check: Check::le(
            "|E omega^beta(x,y) g(x) h(y)| <= p^{-r/2}",
            value.norm(),
            (field.p() as f64).powf(-(rank as f64) / 2.0),
        ),
    })
}

/// `sum_{u,v} beta_uv(x_u, x_v) + sum_u phi_u(x_u)` on `d` copies of a space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiBilinearSystem {
    d: usize,
    /// Row-major `d x d`.
    forms: Vec<BilinearForm>,
    lin: Vec<Vec<u32>>,
}

impl MultiBilinearSystem {
    pub fn new(d: usize, forms: Vec<BilinearForm>, lin: Vec<Vec<u32>>) -> Result<Self> {
        if d == 0 || forms.len() != d * d || lin.len() != d {
            return Err(Error::Dimension(format!(
                "need {} forms and {d} linear parts for d = {d}",
                d * d
            )));
        }
        let n = forms[0].domain().ambient_dim();
        let field = forms[0].field();
        if forms.iter().any(|b| b.field() != field || b.domain().ambient_dim() != n)
            || lin.iter().any(|l| l.len() != n)
        {
            return Err(Error::Dimension("parts live on different spaces".into()));
        }
        let lin = lin
            .into_iter()
            .map(|l| l.iter().map(|&c| c % field.p()).collect())
            .collect();
        Ok(MultiBilinearSystem { d, forms, lin })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn form(&self, u: usize, v: usize) -> &BilinearForm {
        &self.forms[u * self.d + v]
    }

    pub fn lin(&self, u: usize) -> &[u32] {
        &self.lin[u]
    }

    /// Largest `rank(beta_uv)` on `v`.
    pub fn stated_rank(&self, v: &Subspace) -> usize {
        self.forms
            .iter()
            .map(|b| restricted_rank(b.matrix(), v))
            .max()
            .unwrap_or(0)
    }

    /// Largest rank of the coupling that actually appears in the exponent:
    /// `beta_uu(x, x)` has bilinear part `2 M_uu`, and `x_u, x_v` with `u < v`
    /// interact through `M_uv + M_vu`.
    pub fn effective_rank(&self, v: &Subspace) -> usize {
        let mut best = 0;
        for a in 0..self.d {
            for b in a..self.d {
                let m = if a == b {
                    self.form(a, a).matrix().scale(2)
                } else {
                    self.form(a, b)
                        .matrix()
                        .add(self.form(b, a).matrix())
                        .expect("same shape")
                };
                best = best.max(restricted_rank(&m, v));
            }
        }
        best
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiBilinearAverage {
    pub value: Complex64,
    pub stated_rank: usize,
    pub effective_rank: usize,
    /// `|value| <= p^{-r/2}` with `r` the effective rank.
    pub check: Check,
}

/// `E_{x in V^d} omega^{sum beta_uv(x_u, x_v) + sum phi_u(x_u)}` by enumeration.
pub fn multibilinear_average(
    msys: &MultiBilinearSystem,
    v: &Subspace,
    cap: u128,
) -> Result<MultiBilinearAverage> {
    let field = v.field();
    let d = msys.d;
    if field != msys.forms[0].field() || v.ambient_dim() != msys.forms[0].domain().ambient_dim() {
        return Err(Error::Dimension("domain and system live on different spaces".into()));
    }
    let required = pow_u128(field.p(), d * v.dim());
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    let elems = v.elements();
    let k = elems.len();
    // pair[u][v][a * k + b] = beta_uv(e_a, e_b)
    let pair: Vec<Vec<u32>> = msys
        .forms
        .iter()
        .map(|b| {
            let mut t = Vec::with_capacity(k * k);
            for x in &elems {
                for y in &elems {
                    t.push(b.eval(x, y));
                }
            }
            t
        })
        .collect();
    let lin: Vec<Vec<u32>> = msys
        .lin
        .iter()
        .map(|l| elems.iter().map(|x| field.dot(l, x)).collect())
        .collect();
    let roots = field.roots_of_unity();
    let mut idx = vec![0usize; d];
    let mut acc = Complex64::new(0.0, 0.0);
    loop {
        let mut e = 0u32;
        for a in 0..d {
            e = field.add(e, lin[a][idx[a]]);
            for b in 0..d {
                e = field.add(e, pair[a * d + b][idx[a] * k + idx[b]]);
            }
        }
        acc += roots[e as usize];
        let mut pos = 0;
        while pos < d {
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == d {
            break;
        }
    }
    let value = acc / required as f64;
    let effective_rank = msys.effective_rank(v);
    Ok(MultiBilinearAverage {
        value,
        stated_rank: msys.stated_rank(v),
        effective_rank,
        check: Check::le(
            "|multi-bilinear average| <= p^{-r/2}",
            value.norm(),
            (field.p() as f64).powf(-(effective_rank as f64) / 2.0),
        ),
    })
}

fn min_rank(forms: &[BilinearForm]) -> Result<usize> {
    let first = forms
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty list of forms".into()))?;
    if forms.iter().any(|b| b.domain() != first.domain()) {
        return Err(Error::Dimension("forms have different domains".into()));
    }
    Ok(forms.iter().map(|b| b.rank()).min().unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankCombination {
    pub combined: Vec<BilinearForm>,
    pub ranks: Vec<usize>,
    pub max_rank: usize,
    /// `r / m` with `r` the least input rank.
    pub bound: f64,
    pub check: Check,
}

/// `eta_j = sum_i B[i][j] beta_i`; some `eta_j` has rank at least `r / m`.
pub fn rank_combination(forms: &[BilinearForm], b: &Matrix) -> Result<RankCombination> {
    let r = min_rank(forms)?;
    let m = forms.len();
    if b.rows != m || b.cols != m {
        return Err(Error::Dimension(format!("need an {m}x{m} matrix")));
    }
    if b.rank() < m {
        return Err(Error::Singular(b.field.p()));
    }
    let combined = (0..m)
        .map(|j| {
            let col: Vec<u32> = (0..m).map(|i| b.get(i, j)).collect();
            BilinearForm::linear_combination(&col, forms)
        })
        .collect::<Result<Vec<_>>>()?;
    let ranks: Vec<usize> = combined.iter().map(|f| f.rank()).collect();
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    let bound = r as f64 / m as f64;
    Ok(RankCombination {
        combined,
        ranks,
        max_rank,
        bound,
        check: Check::ge("max_j rank(eta_j) >= r/m", max_rank as f64, bound),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankWitness {
    pub pair: (usize, usize),
    pub rank: usize,
    pub bound: f64,
    pub check: Check,
}

/// Over all `u <= v`, the `beta_uv = sum_i c_iu c_iv beta_i` of largest rank
/// (first pair on ties), checked against `r / m`.
pub fn square_indep_rank_witness(s: &LinearSystem, forms: &[BilinearForm]) -> Result<RankWitness> {
    if forms.len() != s.m() {
        return Err(Error::Dimension(format!("{} forms for {} linear forms", forms.len(), s.m())));
    }
    if !square_independent(s) {
        return Err(Error::Precondition("system is not square-independent".into()));
    }
    let r = min_rank(forms)?;
    let field = s.field();
    let mut best: Option<((usize, usize), usize)> = None;
    for u in 0..s.d() {
        for v in u..s.d() {
            let coeffs: Vec<u32> = (0..s.m()).map(|i| field.mul(s.c(i, u), s.c(i, v))).collect();
            let rank = BilinearForm::linear_combination(&coeffs, forms)?.rank();
            if best.is_none_or(|(_, b)| rank > b) {
                best = Some(((u, v), rank));
            }
        }
    }
    let (pair, rank) = best.expect("at least one variable");
    let bound = r as f64 / s.m() as f64;
    Ok(RankWitness {
        pair,
        rank,
        bound,
        check: Check::ge("max rank(beta_uv) >= r/m", rank as f64, bound),
    })
}
