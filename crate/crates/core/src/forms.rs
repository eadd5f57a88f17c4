//! Bilinear and quadratic forms over `F_p`, with ranks computed on a domain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::Matrix;
use crate::subspace::Subspace;

/// A symmetric bilinear form `beta(x, y) = x^T M y` considered on a subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BilinearRepr", into = "BilinearRepr")]
pub struct BilinearForm {
    matrix: Matrix,
    domain: Subspace,
}

#[derive(Serialize, Deserialize)]
struct BilinearRepr {
    matrix: Vec<Vec<u32>>,
    domain: Subspace,
}

impl TryFrom<BilinearRepr> for BilinearForm {
    type Error = Error;

    fn try_from(r: BilinearRepr) -> Result<Self> {
        let n = r.domain.ambient_dim();
        let m = Matrix::from_rows(r.domain.field(), &r.matrix, n)?;
        BilinearForm::new(m, r.domain)
    }
}

impl From<BilinearForm> for BilinearRepr {
    fn from(b: BilinearForm) -> Self {
        BilinearRepr {
            matrix: b.matrix.row_vecs(),
            domain: b.domain,
        }
    }
}

impl BilinearForm {
    pub fn new(matrix: Matrix, domain: Subspace) -> Result<Self> {
        let n = domain.ambient_dim();
        if matrix.rows != n || matrix.cols != n || matrix.field != domain.field() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for a form on F_{}^{n}",
                matrix.rows,
                matrix.cols,
                domain.field().p()
            )));
        }
        if !matrix.is_symmetric() {
            return Err(Error::InvalidArgument("bilinear form matrix is not symmetric".into()));
        }
        Ok(BilinearForm { matrix, domain })
    }

    /// A form on the whole ambient space.
    pub fn on_full(matrix: Matrix) -> Result<Self> {
        let domain = Subspace::full(matrix.field, matrix.rows);
        BilinearForm::new(matrix, domain)
    }

    pub fn field(&self) -> PrimeField {
        self.domain.field()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn eval(&self, x: &[u32], y: &[u32]) -> u32 {
        self.field().dot(x, &self.matrix.apply(y))
    }

    /// Rank of the form restricted to its domain: the rank of `B M B^T` for
    /// the echelon basis `B` of the domain.
    pub fn rank(&self) -> usize {
        restricted_rank(&self.matrix, &self.domain)
    }

    /// The same form with domain replaced by `w`, which must lie in the current domain.
    pub fn restrict(&self, w: &Subspace) -> Result<BilinearForm> {
        if !w.is_subspace_of(&self.domain) {
            return Err(Error::NotContained);
        }
        Ok(BilinearForm {
            matrix: self.matrix.clone(),
            domain: w.clone(),
        })
    }

    /// `sum_i c_i beta_i` over a shared domain.
    pub fn linear_combination(coeffs: &[u32], forms: &[BilinearForm]) -> Result<BilinearForm> {
        let first = forms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty list of forms".into()))?;
        if coeffs.len() != forms.len() {
            return Err(Error::Dimension("coefficient count differs from form count".into()));
        }
        let mut acc = Matrix::zeros(first.field(), first.matrix.rows, first.matrix.cols);
        for (&c, b) in coeffs.iter().zip(forms) {
            if b.domain != first.domain {
                return Err(Error::Dimension("forms have different domains".into()));
            }
            acc = acc.add(&b.matrix.scale(c))?;
        }
        BilinearForm::new(acc, first.domain.clone())
    }
}

/// Rank of `x^T M y` restricted to `domain` (need not be symmetric).
pub fn restricted_rank(matrix: &Matrix, domain: &Subspace) -> usize {
    if domain.dim() == 0 {
        return 0;
    }
    let b = Matrix::from_rows(domain.field(), domain.basis(), domain.ambient_dim())
        .expect("basis rows have ambient length");
    let bt = b.transpose();
    b.mul(matrix)
        .and_then(|bm| bm.mul(&bt))
        .expect("shapes agree")
        .rank()
}

/// `bilinear_rank`: rank over `F_p` of the form on its domain.
pub fn bilinear_rank(b: &BilinearForm) -> usize {
    b.rank()
}

/// `restrict_form`: restriction of `b` to a subspace of its domain.
pub fn restrict_form(b: &BilinearForm, w: &Subspace) -> Result<BilinearForm> {
    b.restrict(w)
}

/// `quad_rank`: rank of the bilinear form associated with `q` on `q`'s domain.
pub fn quad_rank(q: &QuadraticForm) -> usize {
    q.rank()
}

/// `q(x) = x^T A x + l . x + c` with `A` stored upper-triangular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuadraticRepr", into = "QuadraticRepr")]
pub struct QuadraticForm {
    quad: Matrix,
    lin: Vec<u32>,
    constant: u32,
    domain: Subspace,
}

#[derive(Serialize, Deserialize)]
struct QuadraticRepr {
    quad: Vec<Vec<u32>>,
    lin: Vec<u32>,
    constant: u32,
    domain: Subspace,
}

impl TryFrom<QuadraticRepr> for QuadraticForm {
    type Error = Error;

    fn try_from(r: QuadraticRepr) -> Result<Self> {
        let field = r.domain.field();
        let n = r.domain.ambient_dim();
        let quad = Matrix::from_rows(field, &r.quad, n)?;
        QuadraticForm::new(quad, r.lin, r.constant, r.domain)
    }
}

impl From<QuadraticForm> for QuadraticRepr {
    fn from(q: QuadraticForm) -> Self {
        QuadraticRepr {
            quad: q.quad.row_vecs(),
            lin: q.lin,
            constant: q.constant,
            domain: q.domain,
        }
    }
}

fn fold_upper(m: &Matrix) -> Matrix {
    let f = m.field;
    let n = m.rows;
    let mut out = Matrix::zeros(f, n, n);
    for i in 0..n {
        out.set(i, i, m.get(i, i));
        for j in i + 1..n {
            out.set(i, j, f.add(m.get(i, j), m.get(j, i)));
        }
    }
    out
}

impl QuadraticForm {
    /// Any square coefficient matrix is accepted; entries below the diagonal
    /// are folded into the upper triangle, which leaves `x^T A x` unchanged.
    pub fn new(quad: Matrix, lin: Vec<u32>, constant: u32, domain: Subspace) -> Result<Self> {
        let n = domain.ambient_dim();
        let field = domain.field();
        if quad.rows != n || quad.cols != n || lin.len() != n || quad.field != field {
            return Err(Error::Dimension(format!(
                "quadratic form data does not match F_{}^{n}",
                field.p()
            )));
        }
        Ok(QuadraticForm {
            quad: fold_upper(&quad),
            lin: lin.into_iter().map(|v| v % field.p()).collect(),
            constant: constant % field.p(),
            domain,
        })
    }

    /// A pure form `x^T A x` on the whole space.
    pub fn pure(quad: Matrix) -> Result<Self> {
        let field = quad.field;
        let n = quad.rows;
        QuadraticForm::new(quad, vec![0; n], 0, Subspace::full(field, n))
    }

    pub fn zero(field: PrimeField, n: usize) -> Self {
        QuadraticForm {
            quad: Matrix::zeros(field, n, n),
            lin: vec![0; n],
            constant: 0,
            domain: Subspace::full(field, n),
        }
    }

    /// `x_1^2 + ... + x_n^2` on the whole space.
    pub fn diagonal_sum_of_squares(field: PrimeField, n: usize) -> Self {
        QuadraticForm::pure(Matrix::identity(field, n)).expect("square identity")
    }

    /// Rebuilds a pure phase `x^T A x + l . x` on the whole space from its
    /// canonical encoding (upper-triangular entries row-major, then `l`).
    pub fn from_encoding(field: PrimeField, n: usize, code: &[u32]) -> Result<Self> {
        let tri = n * (n + 1) / 2;
        if code.len() != tri + n {
            return Err(Error::Dimension(format!(
                "encoding of length {} for n = {n}",
                code.len()
            )));
        }
        let mut quad = Matrix::zeros(field, n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                quad.set(i, j, code[k]);
                k += 1;
            }
        }
        QuadraticForm::new(quad, code[tri..].to_vec(), 0, Subspace::full(field, n))
    }

    pub fn field(&self) -> PrimeField {
        self.domain.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.domain.ambient_dim()
    }

    pub fn quad(&self) -> &Matrix {
        &self.quad
    }

    pub fn lin(&self) -> &[u32] {
        &self.lin
    }

    pub fn constant(&self) -> u32 {
        self.constant
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    /// Upper-triangular entries row-major, then the linear part. The constant
    /// is not part of the encoding.
    pub fn encoding(&self) -> Vec<u32> {
        let n = self.ambient_dim();
        let mut out = Vec::with_capacity(n * (n + 1) / 2 + n);
        for i in 0..n {
            for j in i..n {
                out.push(self.quad.get(i, j));
            }
        }
        out.extend_from_slice(&self.lin);
        out
    }

    pub fn eval(&self, x: &[u32]) -> u32 {
        let f = self.field();
        let n = self.ambient_dim();
        let p = f.p() as u64;
        let mut acc = self.constant as u64;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let mut row = 0u64;
            for j in i..n {
                row += self.quad.get(i, j) as u64 * x[j] as u64;
            }
            acc += (row % p) * x[i] as u64 + self.lin[i] as u64 * x[i] as u64;
            acc %= p;
        }
        (acc % p) as u32
    }

    /// Values of `q` at every point of the ambient space, in index order.
    pub fn values(&self) -> Vec<u32> {
        let f = self.field();
        let n = self.ambient_dim();
        let size = f.size(n).expect("ambient space too large");
        let mut x = vec![0u32; n];
        (0..size)
            .map(|i| {
                f.decode_into(i, &mut x);
                self.eval(&x)
            })
            .collect()
    }

    /// `beta(x, y) = q(x + y) - q(x) - q(y) + q(0) = x^T (A + A^T) y`.
    pub fn bilinear(&self) -> BilinearForm {
        let sym = self
            .quad
            .add(&self.quad.transpose())
            .expect("square matrix");
        BilinearForm::new(sym, self.domain.clone()).expect("A + A^T is symmetric")
    }

    pub fn rank(&self) -> usize {
        self.bilinear().rank()
    }

    pub fn with_domain(&self, domain: Subspace) -> Result<QuadraticForm> {
        if domain.field() != self.field() || domain.ambient_dim() != self.ambient_dim() {
            return Err(Error::Dimension("domain in a different ambient space".into()));
        }
        Ok(QuadraticForm {
            domain,
            ..self.clone()
        })
    }

    pub fn restrict(&self, w: &Subspace) -> Result<QuadraticForm> {
        if !w.is_subspace_of(&self.domain) {
            return Err(Error::NotContained);
        }
        self.with_domain(w.clone())
    }

    /// `self - other` on the intersection of the two domains.
    pub fn difference(&self, other: &QuadraticForm) -> Result<QuadraticForm> {
        let f = self.field();
        let domain = self.domain.intersect(&other.domain)?;
        Ok(QuadraticForm {
            quad: self.quad.sub(&other.quad)?,
            lin: f.sub_vec(&self.lin, &other.lin),
            constant: f.sub(self.constant, other.constant),
            domain,
        })
    }

    /// The same polynomial without its constant term.
    pub fn without_constant(&self) -> QuadraticForm {
        QuadraticForm {
            constant: 0,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Brute-force rank: `dim(domain) - dim(radical)`, where the radical is
    /// counted by exhaustion.
    fn brute_rank(b: &BilinearForm) -> usize {
        let elems = b.domain().elements();
        let radical = elems
            .iter()
            .filter(|y| elems.iter().all(|x| b.eval(x, y) == 0))
            .count();
        let p = b.field().p() as usize;
        let mut rad_dim = 0;
        while p.pow(rad_dim) < radical {
            rad_dim += 1;
        }
        assert_eq!(p.pow(rad_dim), radical);
        b.domain().dim() - rad_dim as usize
    }

    #[test]
    fn bilinear_rank_examples() {
        let zero = BilinearForm::on_full(Matrix::zeros(f(3), 2, 2)).unwrap();
        assert_eq!(bilinear_rank(&zero), 0);
        let id = BilinearForm::on_full(Matrix::identity(f(3), 3)).unwrap();
        assert_eq!(bilinear_rank(&id), 3);

        let w = Subspace::span(f(5), 3, &[vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        let b = BilinearForm::new(Matrix::identity(f(5), 3), w).unwrap();
        assert_eq!(bilinear_rank(&b), brute_rank(&b));
        assert_eq!(bilinear_rank(&b), 2);
    }

    #[test]
    fn quad_rank_examples() {
        assert_eq!(quad_rank(&QuadraticForm::zero(f(3), 2)), 0);
        let sq = QuadraticForm::pure(Matrix::identity(f(3), 1)).unwrap();
        assert_eq!(quad_rank(&sq), 1);
        assert_eq!(brute_rank(&sq.bilinear()), 1);
        let mut m = Matrix::zeros(f(2), 2, 2);
        m.set(0, 1, 1);
        let x1x2 = QuadraticForm::pure(m).unwrap();
        assert_eq!(quad_rank(&x1x2), 2);
        assert_eq!(brute_rank(&x1x2.bilinear()), 2);
    }

    #[test]
    fn restriction_examples() {
        // identity on F_2^4 restricted to a codim-1 subspace
        let id = BilinearForm::on_full(Matrix::identity(f(2), 4)).unwrap();
        let w = Subspace::annihilator_of(f(2), 4, &[vec![1, 1, 1, 1]]).unwrap();
        let r = restrict_form(&id, &w).unwrap();
        assert_eq!(r.rank(), brute_rank(&r));
        assert!(r.rank() >= 4 - 2);
        // the all-ones functional lies in W, so the restriction is degenerate
        assert_eq!(r.rank(), 2);

        assert_eq!(restrict_form(&id, id.domain()).unwrap().rank(), 4);

        let mut m = Matrix::zeros(f(3), 3, 3);
        m.set(0, 0, 1);
        m.set(1, 1, 1);
        let b = BilinearForm::on_full(m).unwrap();
        let line = Subspace::span(f(3), 3, &[vec![1, 0, 0]]).unwrap();
        assert_eq!(restrict_form(&b, &line).unwrap().rank(), 1);
    }

    #[test]
    fn restriction_outside_domain_rejected() {
        let line = Subspace::span(f(3), 2, &[vec![1, 0]]).unwrap();
        let other = Subspace::span(f(3), 2, &[vec![0, 1]]).unwrap();
        let b = BilinearForm::new(Matrix::identity(f(3), 2), line).unwrap();
        assert_eq!(restrict_form(&b, &other), Err(Error::NotContained));
    }

    #[test]
    fn associated_form_is_bilinear_and_symmetric() {
        for p in [2, 3, 5] {
            let fp = f(p);
            let mut quad = Matrix::zeros(fp, 2, 2);
            quad.set(0, 0, 1 % p);
            quad.set(0, 1, 2 % p);
            quad.set(1, 1, 3 % p);
            let q = QuadraticForm::new(quad, vec![1, 1], 1, Subspace::full(fp, 2)).unwrap();
            let b = q.bilinear();
            let pts = fp.points(2);
            for x in &pts {
                for y in &pts {
                    let via_q = fp.add(
                        fp.sub(fp.sub(q.eval(&fp.add_vec(x, y)), q.eval(x)), q.eval(y)),
                        q.eval(&[0, 0]),
                    );
                    assert_eq!(b.eval(x, y), via_q);
                    assert_eq!(b.eval(x, y), b.eval(y, x));
                    for z in &pts {
                        assert_eq!(
                            b.eval(&fp.add_vec(x, z), y),
                            fp.add(b.eval(x, y), b.eval(z, y))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn encoding_round_trip() {
        let q = QuadraticForm::from_encoding(f(3), 2, &[1, 2, 0, 1, 1]).unwrap();
        assert_eq!(q.encoding(), vec![1, 2, 0, 1, 1]);
        assert_eq!(q.eval(&[1, 1]), (1 + 2 + 1 + 1) % 3);
    }
}
