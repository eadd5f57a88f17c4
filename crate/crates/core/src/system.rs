//! Systems of linear forms `L_i(x) = sum_u c_iu x_u` in `d` variables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::Matrix;

/// Largest form count accepted by the exhaustive partition search.
pub const MAX_CS_FORMS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct LinearSystem {
    coeffs: Matrix,
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    p: u32,
    coeffs: Vec<Vec<u32>>,
}

impl TryFrom<SystemRepr> for LinearSystem {
    type Error = Error;

    fn try_from(r: SystemRepr) -> Result<Self> {
        LinearSystem::new(PrimeField::new(r.p)?, &r.coeffs)
    }
}

impl From<LinearSystem> for SystemRepr {
    fn from(s: LinearSystem) -> Self {
        SystemRepr {
            p: s.coeffs.field.p(),
            coeffs: s.coeffs.row_vecs(),
        }
    }
}

impl LinearSystem {
    /// Builds a system from its `m x d` coefficient rows. Zero forms and
    /// pairs of proportional forms are rejected.
    pub fn new(field: PrimeField, rows: &[Vec<u32>]) -> Result<Self> {
        let d = rows
            .first()
            .map(|r| r.len())
            .ok_or_else(|| Error::InvalidSystem("no forms".into()))?;
        if d == 0 {
            return Err(Error::InvalidSystem("forms in zero variables".into()));
        }
        let coeffs = Matrix::from_rows(field, rows, d)?;
        for i in 0..coeffs.rows {
            if coeffs.row(i).iter().all(|&c| c == 0) {
                return Err(Error::InvalidSystem(format!("form {i} is identically zero")));
            }
            for j in 0..i {
                let pair = Matrix::from_rows(field, &[coeffs.row(i).to_vec(), coeffs.row(j).to_vec()], d)?;
                if pair.rank() < 2 {
                    return Err(Error::InvalidSystem(format!(
                        "forms {j} and {i} are proportional"
                    )));
                }
            }
        }
        Ok(LinearSystem { coeffs })
    }

    /// `{x, x+y, x+2y}`
    pub fn three_ap(field: PrimeField) -> Result<Self> {
        LinearSystem::new(field, &[vec![1, 0], vec![1, 1], vec![1, 2]])
    }

    /// `{x, x+y, x+2y, x+3y}`
    pub fn four_ap(field: PrimeField) -> Result<Self> {
        LinearSystem::new(field, &[vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3]])
    }

    /// `{x, y, x+y}`
    pub fn schur_triple(field: PrimeField) -> Result<Self> {
        LinearSystem::new(field, &[vec![1, 0], vec![0, 1], vec![1, 1]])
    }

    /// Looks up a built-in system by its short name.
    pub fn by_name(name: &str, field: PrimeField) -> Result<Self> {
        match name {
            "3ap" => LinearSystem::three_ap(field),
            "4ap" => LinearSystem::four_ap(field),
            "xy" => LinearSystem::schur_triple(field),
            other => Err(Error::InvalidSystem(format!("unknown system '{other}'"))),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.coeffs.field
    }

    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    /// Number of forms.
    pub fn m(&self) -> usize {
        self.coeffs.rows
    }

    /// Number of variables.
    pub fn d(&self) -> usize {
        self.coeffs.cols
    }

    pub fn c(&self, i: usize, u: usize) -> u32 {
        self.coeffs.get(i, u)
    }

    pub fn form(&self, i: usize) -> &[u32] {
        self.coeffs.row(i)
    }

    /// The `m x d^2` matrix whose rows are the flattened `(c_iu c_iv)`.
    pub fn square_matrix(&self) -> Matrix {
        let f = self.field();
        let d = self.d();
        let rows: Vec<Vec<u32>> = (0..self.m())
            .map(|i| {
                let mut row = Vec::with_capacity(d * d);
                for u in 0..d {
                    for v in 0..d {
                        row.push(f.mul(self.c(i, u), self.c(i, v)));
                    }
                }
                row
            })
            .collect();
        Matrix::from_rows(f, &rows, d * d).expect("rows have d^2 entries")
    }

    /// The same system after the change of variables `x -> A x`, i.e. with
    /// coefficient matrix `C A`.
    pub fn substitute(&self, a: &Matrix) -> Result<LinearSystem> {
        let c = self.coeffs.mul(a)?;
        LinearSystem::new(self.field(), &c.row_vecs())
    }
}

/// Whether the squares `L_i^2` are linearly independent, tested through the
/// matrices `(c_iu c_iv)`. For `p = 2` this is the matrix verdict only.
pub fn square_independent(s: &LinearSystem) -> bool {
    s.square_matrix().rank() == s.m()
}

/// Cauchy-Schwarz complexity: the least `k >= 1` such that for every `i` the
/// other forms split into `k + 1` classes none of whose spans contains `L_i`.
pub fn cs_complexity(s: &LinearSystem) -> Result<usize> {
    let m = s.m();
    if m > MAX_CS_FORMS {
        return Err(Error::InvalidArgument(format!(
            "complexity search limited to {MAX_CS_FORMS} forms, got {m}"
        )));
    }
    let mut worst = 0;
    for i in 0..m {
        let others: Vec<usize> = (0..m).filter(|&j| j != i).collect();
        worst = worst.max(min_classes(s, i, &others));
    }
    Ok(worst.saturating_sub(1).max(1))
}

fn outside_span(s: &LinearSystem, target: usize, class: &[usize]) -> bool {
    let rows: Vec<Vec<u32>> = class.iter().map(|&j| s.form(j).to_vec()).collect();
    let base = Matrix::from_rows(s.field(), &rows, s.d()).expect("form rows").rank();
    let mut with = rows;
    with.push(s.form(target).to_vec());
    Matrix::from_rows(s.field(), &with, s.d()).expect("form rows").rank() > base
}

/// Fewest classes in a valid partition of `others` with respect to `target`.
fn min_classes(s: &LinearSystem, target: usize, others: &[usize]) -> usize {
    let n = others.len();
    if n == 0 {
        return 0;
    }
    // restricted growth strings enumerate set partitions without repeats
    let mut best = n;
    let mut labels = vec![0usize; n];
    fn rec(
        s: &LinearSystem,
        target: usize,
        others: &[usize],
        pos: usize,
        used: usize,
        labels: &mut Vec<usize>,
        best: &mut usize,
    ) {
        if used >= *best {
            return;
        }
        if pos == others.len() {
            let valid = (0..used).all(|c| {
                let class: Vec<usize> = others
                    .iter()
                    .zip(labels.iter())
                    .filter(|(_, &l)| l == c)
                    .map(|(&j, _)| j)
                    .collect();
                outside_span(s, target, &class)
            });
            if valid {
                *best = used;
            }
            return;
        }
        for c in 0..=used {
            labels[pos] = c;
            rec(s, target, others, pos + 1, used.max(c + 1), labels, best);
        }
    }
    // singletons always work for pairwise non-proportional forms
    rec(s, target, others, 0, 0, &mut labels, &mut best);
    best
}
