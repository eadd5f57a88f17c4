use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::error::{Error, Result};
use crate::field::{pow_u128, PrimeField};
use crate::harmonic::{linf_norm, u2_norm, u3_norm, FieldFunction};
use crate::system::{cs_complexity, LinearSystem};

/// Default bound on `p^{dn}` for exhaustive averages.
pub const DEFAULT_AVERAGE_CAP: u128 = 1 << 26;

/// Table-index arithmetic on `F_p^n`.
struct IndexArith {
    field: PrimeField,
    n: usize,
    size: usize,
    add: Option<Vec<u32>>,
}

impl IndexArith {
    fn new(field: PrimeField, n: usize) -> Result<Self> {
        let size = field
            .size(n)
            .ok_or_else(|| Error::Dimension("ambient space too large".into()))?;
        let add = (size <= 2048).then(|| {
            let pts = field.points(n);
            let mut t = vec![0u32; size * size];
            for (a, x) in pts.iter().enumerate() {
                for (b, y) in pts.iter().enumerate() {
                    t[a * size + b] = field.encode(&field.add_vec(x, y)) as u32;
                }
            }
            t
        });
        Ok(IndexArith { field, n, size, add })
    }

    fn size(&self) -> usize {
        self.size
    }

    fn add(&self, a: usize, b: usize) -> usize {
        match &self.add {
            Some(t) => t[a * self.size + b] as usize,
            None => {
                let x = self.field.decode(a, self.n);
                let y = self.field.decode(b, self.n);
                self.field.encode(&self.field.add_vec(&x, &y))
            }
        }
    }

    /// `idx -> index of c * x` for every point.
    fn scale_table(&self, c: u32) -> Vec<usize> {
        (0..self.size)
            .map(|i| {
                let x = self.field.decode(i, self.n);
                self.field.encode(&self.field.scale_vec(c, &x))
            })
            .collect()
    }
}

fn check_inputs(s: &LinearSystem, fs: &[FieldFunction]) -> Result<(PrimeField, usize)> {
    if fs.len() != s.m() {
        return Err(Error::Dimension(format!(
            "{} functions for {} forms",
            fs.len(),
            s.m()
        )));
    }
    let field = fs[0].field();
    if field != s.field() {
        return Err(Error::Dimension("system and functions use different primes".into()));
    }
    for f in fs {
        f.same_space(&fs[0])?;
    }
    Ok((field, fs[0].n()))
}

/// `E_{x in (F_p^n)^d} prod_i f_i(L_i(x))` by full enumeration.
///
/// The first variable is split across threads and the per-block sums are
/// added in block order, so the result does not depend on scheduling.
pub fn system_average(s: &LinearSystem, fs: &[FieldFunction], cap: u128) -> Result<Complex64> {
    let (field, n) = check_inputs(s, fs)?;
    let (m, d) = (s.m(), s.d());
    let required = pow_u128(field.p(), d * n);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    let arith = IndexArith::new(field, n)?;
    let size = arith.size();
    // scaled[i][u][x] = index of c_iu * x
    let scaled: Vec<Vec<Vec<usize>>> = (0..m)
        .map(|i| (0..d).map(|u| arith.scale_table(s.c(i, u))).collect())
        .collect();
    let blocks: Vec<Complex64> = (0..size)
        .into_par_iter()
        .map(|x0| {
            let base: Vec<usize> = (0..m).map(|i| scaled[i][0][x0]).collect();
            let mut rest = vec![0usize; d - 1];
            let mut acc = Complex64::new(0.0, 0.0);
            loop {
                let mut prod = Complex64::new(1.0, 0.0);
                for i in 0..m {
                    let mut idx = base[i];
                    for (u, &xu) in rest.iter().enumerate() {
                        idx = arith.add(idx, scaled[i][u + 1][xu]);
                    }
                    prod *= fs[i].values()[idx];
                }
                acc += prod;
                // odometer over the remaining variables
                let mut k = 0;
                while k < rest.len() {
                    rest[k] += 1;
                    if rest[k] < size {
                        break;
                    }
                    rest[k] = 0;
                    k += 1;
                }
                if k == rest.len() {
                    break;
                }
            }
            acc
        })
        .collect();
    let total: Complex64 = blocks.iter().sum();
    Ok(total / required as f64)
}

/// The average a random set of density `alpha` would give: `alpha^m`.
pub fn expected_count(s: &LinearSystem, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("density {alpha} outside [0, 1]")));
    }
    Ok(alpha.powi(s.m() as i32))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GvnReport {
    pub k: usize,
    pub complexity: usize,
    pub average: Complex64,
    pub check: Check,
}

/// `|average| <= min_i ||f_i||_{U^{k+1}} prod_{j != i} ||f_j||_inf`.
///
/// The system's Cauchy-Schwarz complexity is computed and must be at most `k`.
pub fn gvn_check(s: &LinearSystem, fs: &[FieldFunction], k: usize, cap: u128) -> Result<GvnReport> {
    if !(1..=2).contains(&k) {
        return Err(Error::InvalidArgument(format!("k = {k} not in {{1, 2}}")));
    }
    check_inputs(s, fs)?;
    let complexity = cs_complexity(s)?;
    if complexity > k {
        return Err(Error::Precondition(format!(
            "system has Cauchy-Schwarz complexity {complexity} > {k}"
        )));
    }
    let average = system_average(s, fs, cap)?;
    let sup: Vec<f64> = fs.iter().map(linf_norm).collect();
    let rhs = (0..fs.len())
        .map(|i| {
            let u = if k == 1 { u2_norm(&fs[i]) } else { u3_norm(&fs[i]) };
            let others: f64 = (0..fs.len()).filter(|&j| j != i).map(|j| sup[j]).product();
            u * others
        })
        .fold(f64::INFINITY, f64::min);
    Ok(GvnReport {
        k,
        complexity,
        average,
        check: Check::le(format!("|average| <= min_i ||f_i||_U{} prod ||f_j||_inf", k + 1), average.norm(), rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn fp(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn brute(s: &LinearSystem, fs: &[FieldFunction]) -> Complex64 {
        let field = s.field();
        let n = fs[0].n();
        let pts = field.points(n);
        let d = s.d();
        let total = pts.len().pow(d as u32);
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 0..total {
            let xs: Vec<&Vec<u32>> = (0..d).map(|u| &pts[(t / pts.len().pow(u as u32)) % pts.len()]).collect();
            let mut prod = Complex64::new(1.0, 0.0);
            for (i, f) in fs.iter().enumerate() {
                let mut y = vec![0; n];
                for (u, x) in xs.iter().enumerate() {
                    y = field.add_vec(&y, &field.scale_vec(s.c(i, u), x));
                }
                prod *= f.at(&y);
            }
            acc += prod;
        }
        acc / total as f64
    }

    #[test]
    fn constant_functions() {
        let s = LinearSystem::four_ap(fp(5)).unwrap();
        let alpha = Complex64::new(0.3, 0.0);
        let fs = vec![FieldFunction::constant(fp(5), 1, alpha); 4];
        let v = system_average(&s, &fs, DEFAULT_AVERAGE_CAP).unwrap();
        assert!((v - alpha.powi(4)).norm() < 1e-12);
        let ones = vec![FieldFunction::constant(fp(5), 2, Complex64::new(1.0, 0.0)); 4];
        assert!((system_average(&s, &ones, DEFAULT_AVERAGE_CAP).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn three_ap_hand_count() {
        // A = {0, 1} in F_5: the 3-APs (x, x+y, x+2y) inside A are x in A with y = 0
        let field = fp(5);
        let a = FieldFunction::indicator(field, 1, |x| x[0] <= 1);
        let s = LinearSystem::three_ap(field).unwrap();
        let v = system_average(&s, &vec![a.clone(); 3], DEFAULT_AVERAGE_CAP).unwrap();
        assert!((v.re - 2.0 / 25.0).abs() < 1e-12);
        let b = a.balanced();
        let v = system_average(&s, &vec![b.clone(); 3], DEFAULT_AVERAGE_CAP).unwrap();
        assert!((v - brute(&s, &vec![b; 3])).norm() < 1e-12);
    }

    #[test]
    fn matches_brute_force() {
        let field = fp(3);
        let s = LinearSystem::new(field, &[vec![1, 0, 0], vec![1, 1, 0], vec![2, 1, 1], vec![0, 1, 2]]).unwrap();
        let mut rng = random::trial_rng(1, "avg", 0);
        let fs: Vec<_> = (0..4).map(|_| random::bounded_function(&mut rng, field, 2)).collect();
        let v = system_average(&s, &fs, DEFAULT_AVERAGE_CAP).unwrap();
        assert!((v - brute(&s, &fs)).norm() < 1e-12);
    }

    #[test]
    fn cap_refusal() {
        let field = fp(5);
        let s = LinearSystem::four_ap(field).unwrap();
        let fs = vec![FieldFunction::zeros(field, 3); 4];
        assert_eq!(
            system_average(&s, &fs, 1000),
            Err(Error::CapExceeded { required: 15625, cap: 1000 })
        );
    }

    #[test]
    fn expected_powers() {
        let s = LinearSystem::four_ap(fp(5)).unwrap();
        assert_eq!(expected_count(&s, 1.0).unwrap(), 1.0);
        assert_eq!(expected_count(&s, 0.0).unwrap(), 0.0);
        assert_eq!(expected_count(&s, 0.5).unwrap(), 0.0625);
        assert!(expected_count(&s, 1.5).is_err());
    }

    #[test]
    fn gvn_examples() {
        let field = fp(5);
        let s = LinearSystem::three_ap(field).unwrap();
        let mut rng = random::trial_rng(2, "gvn", 0);
        let mut fs: Vec<_> = (0..3).map(|_| random::real_function(&mut rng, field, 1)).collect();
        let r = gvn_check(&s, &fs, 1, DEFAULT_AVERAGE_CAP).unwrap();
        assert!(r.check.pass);
        fs[1] = FieldFunction::zeros(field, 1);
        let r = gvn_check(&s, &fs, 1, DEFAULT_AVERAGE_CAP).unwrap();
        assert_eq!(r.check.lhs, 0.0);
        assert_eq!(r.check.rhs, 0.0);

        let s4 = LinearSystem::four_ap(field).unwrap();
        let fs: Vec<_> = (0..4).map(|_| random::real_function(&mut rng, field, 1)).collect();
        assert!(gvn_check(&s4, &fs, 2, DEFAULT_AVERAGE_CAP).unwrap().check.pass);
        assert!(matches!(gvn_check(&s4, &fs, 1, DEFAULT_AVERAGE_CAP), Err(Error::Precondition(_))));
        assert!(gvn_check(&s4, &fs, 3, DEFAULT_AVERAGE_CAP).is_err());
    }
}
