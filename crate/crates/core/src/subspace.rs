//! Subspaces of `F_p^n` in canonical reduced row echelon form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::Matrix;

/// A linear subspace of `F_p^n`.
///
/// The basis is kept in reduced row echelon form with ascending pivot
/// columns, so two subspaces are equal exactly when their representations are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubspaceRepr", into = "SubspaceRepr")]
pub struct Subspace {
    field: PrimeField,
    n: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    p: u32,
    n: usize,
    basis: Vec<Vec<u32>>,
}

impl TryFrom<SubspaceRepr> for Subspace {
    type Error = Error;

    fn try_from(r: SubspaceRepr) -> Result<Self> {
        Subspace::span(PrimeField::new(r.p)?, r.n, &r.basis)
    }
}

impl From<Subspace> for SubspaceRepr {
    fn from(s: Subspace) -> Self {
        SubspaceRepr {
            p: s.field.p(),
            n: s.n,
            basis: s.basis,
        }
    }
}

impl Subspace {
    /// The span of the given vectors.
    pub fn span(field: PrimeField, n: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        if vectors.is_empty() {
            return Ok(Subspace::zero(field, n));
        }
        let m = Matrix::from_rows(field, vectors, n)?;
        let (r, pivots) = m.rref();
        Ok(Subspace {
            field,
            n,
            basis: r.row_vecs(),
            pivots,
        })
    }

    pub fn zero(field: PrimeField, n: usize) -> Self {
        Subspace {
            field,
            n,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: PrimeField, n: usize) -> Self {
        let basis = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        Subspace {
            field,
            n,
            basis,
            pivots: (0..n).collect(),
        }
    }

    /// The kernel of the linear map `x -> (a_1 . x, ..., a_k . x)`.
    pub fn annihilator_of(field: PrimeField, n: usize, functionals: &[Vec<u32>]) -> Result<Self> {
        if functionals.is_empty() {
            return Ok(Subspace::full(field, n));
        }
        let m = Matrix::from_rows(field, functionals, n)?;
        Subspace::span(field, n, &m.kernel())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.n - self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Number of elements, `p^dim`.
    pub fn size(&self) -> usize {
        (self.field.p() as usize).pow(self.dim() as u32)
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field || self.n != other.n {
            return Err(Error::Dimension(format!(
                "subspaces of F_{}^{} and F_{}^{}",
                self.field.p(),
                self.n,
                other.field.p(),
                other.n
            )));
        }
        Ok(())
    }

    /// Canonical coset representative: `v` minus the element of the subspace
    /// that clears every pivot coordinate.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = out[pc];
            if c != 0 {
                for (o, &b) in out.iter_mut().zip(row) {
                    *o = f.sub(*o, f.mul(c, b));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.n && self.reduce(v).iter().all(|&c| c == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.field == other.field
            && self.n == other.n
            && self.basis.iter().all(|b| other.contains(b))
    }

    /// The annihilator `{r : r . x = 0 for all x in self}`.
    pub fn perp(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.field, self.n);
        }
        Subspace::annihilator_of(self.field, self.n, &self.basis)
            .expect("basis rows have ambient length")
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.n, &all)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        Ok(self.perp().sum(&other.perp())?.perp())
    }

    /// The element with the given coordinates in the echelon basis.
    pub fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0u32; self.n];
        for (c, row) in coeffs.iter().zip(&self.basis) {
            if *c == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(*c, b));
            }
        }
        out
    }

    /// All elements, ordered by their little-endian basis coordinates.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let k = self.dim();
        let mut coeffs = vec![0u32; k];
        (0..self.size())
            .map(|i| {
                self.field.decode_into(i, &mut coeffs);
                self.combine(&coeffs)
            })
            .collect()
    }

    /// Ambient table indices of all elements, in `elements()` order.
    pub fn element_indices(&self) -> Vec<usize> {
        self.elements().iter().map(|v| self.field.encode(v)).collect()
    }

    /// For every ambient index, the index of its canonical coset representative.
    pub fn coset_labels(&self) -> Vec<usize> {
        let size = self.field.size(self.n).expect("ambient space too large");
        let mut x = vec![0u32; self.n];
        (0..size)
            .map(|i| {
                self.field.decode_into(i, &mut x);
                self.field.encode(&self.reduce(&x))
            })
            .collect()
    }

    /// Canonical coset representatives, one per coset, ascending by index.
    pub fn coset_representatives(&self) -> Vec<Vec<u32>> {
        let mut labels = self.coset_labels();
        labels.sort_unstable();
        labels.dedup();
        labels.iter().map(|&i| self.field.decode(i, self.n)).collect()
    }

    /// Every subspace of `F_p^n`, ordered by dimension then pivot pattern.
    pub fn enumerate_all(field: PrimeField, n: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        for k in 0..=n {
            for pivots in combinations(n, k) {
                // free slots: row i, column c > pivots[i] with c not a pivot
                let slots: Vec<(usize, usize)> = pivots
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &pc)| {
                        let pivots = &pivots;
                        (pc + 1..n)
                            .filter(move |c| !pivots.contains(c))
                            .map(move |c| (i, c))
                    })
                    .collect();
                let count = (field.p() as usize).pow(slots.len() as u32);
                let mut digits = vec![0u32; slots.len()];
                for idx in 0..count {
                    field.decode_into(idx, &mut digits);
                    let mut basis = vec![vec![0u32; n]; k];
                    for (i, &pc) in pivots.iter().enumerate() {
                        basis[i][pc] = 1;
                    }
                    for (&(i, c), &d) in slots.iter().zip(&digits) {
                        basis[i][c] = d;
                    }
                    out.push(Subspace {
                        field,
                        n,
                        basis,
                        pivots: pivots.clone(),
                    });
                }
            }
        }
        out
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn canonical_representation() {
        let a = Subspace::span(f(5), 3, &[vec![1, 2, 0], vec![0, 1, 1]]).unwrap();
        let b = Subspace::span(f(5), 3, &[vec![1, 3, 1], vec![2, 4, 0], vec![1, 3, 1]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn perp_examples() {
        let full = Subspace::full(f(3), 2);
        assert_eq!(full.perp(), Subspace::zero(f(3), 2));
        assert_eq!(Subspace::zero(f(3), 2).perp(), full);
        let v = Subspace::span(f(5), 2, &[vec![1, 2]]).unwrap();
        let expected = Subspace::span(f(5), 2, &[vec![3, 1]]).unwrap();
        assert_eq!(v.perp(), expected);
        assert_eq!(v.perp().perp(), v);
    }

    #[test]
    fn subspace_counts() {
        // Gaussian binomials: F_3^3 has 1 + 13 + 13 + 1 subspaces
        assert_eq!(Subspace::enumerate_all(f(3), 3).len(), 28);
        assert_eq!(Subspace::enumerate_all(f(2), 3).len(), 16);
        let all = Subspace::enumerate_all(f(2), 4);
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(all.len(), 67);
        assert_eq!(dedup.len(), 67);
    }

    #[test]
    fn cosets_partition_space() {
        let v = Subspace::span(f(3), 3, &[vec![1, 1, 0]]).unwrap();
        let reps = v.coset_representatives();
        assert_eq!(reps.len(), 9);
        let labels = v.coset_labels();
        for (i, &l) in labels.iter().enumerate() {
            let x = f(3).decode(i, 3);
            let r = f(3).decode(l, 3);
            assert!(v.contains(&f(3).sub_vec(&x, &r)));
        }
    }

    #[test]
    fn intersection() {
        let a = Subspace::span(f(3), 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let b = Subspace::span(f(3), 3, &[vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c, Subspace::span(f(3), 3, &[vec![0, 1, 0]]).unwrap());
    }
}
