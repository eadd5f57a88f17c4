use num_complex::Complex64;
use proptest::prelude::*;

use quadfourier::counting::{expected_count, system_average};
use quadfourier::harmonic::{
    fourier, gauss_sum, inverse_fourier, l2_norm, phase_function, u2_dual_norm, u2_norm,
    u2_norm_direct, u3_norm, u3_norm_direct, FieldFunction,
};
use quadfourier::quadave::{AffinePhase, QuadraticAverage};
use quadfourier::random::{
    bounded_function, quadratic_form_on, random_set, subspace, trial_rng, vector,
};
use quadfourier::{LinearSystem, PrimeField, QuadraticForm};

fn small_space() -> impl Strategy<Value = (u32, usize)> {
    prop_oneof![Just((2, 3)), Just((3, 2)), Just((3, 3)), Just((5, 2))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval_and_round_trip((p, n) in small_space(), seed in any::<u64>()) {
        let fp = PrimeField::new(p).unwrap();
        let f = bounded_function(&mut trial_rng(seed, "parseval", 0), fp, n);
        let spec = fourier(&f);
        let energy: f64 = spec.coeffs().iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((energy - l2_norm(&f).powi(2)).abs() < 1e-9);
        prop_assert!(inverse_fourier(&spec).max_abs_diff(&f).unwrap() < 1e-9);
    }

    #[test]
    fn gowers_norms_agree_and_are_ordered((p, n) in small_space(), seed in any::<u64>()) {
        let fp = PrimeField::new(p).unwrap();
        let f = bounded_function(&mut trial_rng(seed, "gowers", 0), fp, n);
        let (u2, u3) = (u2_norm(&f), u3_norm(&f));
        prop_assert!((u2 - u2_norm_direct(&f)).abs() < 1e-9);
        prop_assert!((u3 - u3_norm_direct(&f)).abs() < 1e-9);
        let max_coeff = fourier(&f).coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        prop_assert!(max_coeff <= u2 + 1e-9);
        prop_assert!(u2 <= u3 + 1e-9);
        prop_assert!(u3 <= 1.0 + 1e-9);
    }

    #[test]
    fn dual_norm_pairs_with_u2((p, n) in small_space(), seed in any::<u64>()) {
        let fp = PrimeField::new(p).unwrap();
        let mut rng = trial_rng(seed, "duality", 0);
        let f = bounded_function(&mut rng, fp, n);
        let g = bounded_function(&mut rng, fp, n);
        let pairing = f.inner(&g).unwrap().norm();
        prop_assert!(pairing <= u2_norm(&f) * u2_dual_norm(&g) + 1e-9);
    }

    #[test]
    fn gauss_sum_takes_two_values((p, n) in small_space(), seed in any::<u64>()) {
        let fp = PrimeField::new(p).unwrap();
        let mut rng = trial_rng(seed, "gauss", 0);
        let domain = subspace(&mut rng, fp, n);
        let q = quadratic_form_on(&mut rng, &domain);
        let g = gauss_sum(&q).norm();
        let level = (p as f64).powf(-(q.rank() as f64) / 2.0);
        prop_assert!(g < 1e-9 || (g - level).abs() < 1e-9, "|gauss| = {g}, level {level}");
    }

    #[test]
    fn coset_wise_average_is_a_quadratic_phase_on_each_coset(
        (p, n) in small_space(),
        seed in any::<u64>(),
    ) {
        let fp = PrimeField::new(p).unwrap();
        let mut rng = trial_rng(seed, "coset-wise", 0);
        let base = subspace(&mut rng, fp, n);
        let form = quadratic_form_on(&mut rng, &base);
        let size = fp.size(n).unwrap();
        let table: Vec<AffinePhase> = (0..size)
            .map(|_| AffinePhase { lin: vector(&mut rng, fp, n), constant: vector(&mut rng, fp, 1)[0] })
            .collect();
        let qa = QuadraticAverage::coset_wise(base.clone(), form.clone(), |rep| table[rep].clone()).unwrap();
        let values = qa.evaluate();
        let roots = fp.roots_of_unity();
        let labels = base.coset_labels();
        for (i, &rep) in labels.iter().enumerate() {
            let x = fp.decode(i, n);
            let v = fp.sub_vec(&x, &fp.decode(rep, n));
            let k = fp.add(form.eval(&v), table[rep].eval(fp, &v));
            prop_assert!((values.values()[i] - roots[k as usize]).norm() < 1e-9);
        }
    }

    #[test]
    fn schur_average_tracks_density(seed in any::<u64>(), density in 0.0f64..1.0) {
        let fp = PrimeField::new(3).unwrap();
        let set = random_set(&mut trial_rng(seed, "schur", 0), fp, 2, density);
        let s = LinearSystem::schur_triple(fp).unwrap();
        let avg = system_average(&s, &vec![set.clone(); 3], 1 << 20).unwrap().re;
        let alpha = set.mean().re;
        let bound = 3.0 * u2_norm(&set.balanced());
        prop_assert!((avg - expected_count(&s, alpha).unwrap()).abs() <= bound + 1e-9);
    }
}

#[test]
fn gauss_sum_of_a_single_square() {
    // E_x omega^{x^2} has modulus p^{-1/2} for odd p
    for p in [3u32, 5, 7] {
        let fp = PrimeField::new(p).unwrap();
        let q = QuadraticForm::diagonal_sum_of_squares(fp, 1);
        let expected = 1.0 / (p as f64).sqrt();
        assert!((gauss_sum(&q).norm() - expected).abs() < 1e-12);
    }
}

#[test]
fn phase_u3_is_one_and_u2_is_small() {
    let fp = PrimeField::new(3).unwrap();
    let q = QuadraticForm::diagonal_sum_of_squares(fp, 3);
    let f = phase_function(&q);
    assert!((u3_norm(&f) - 1.0).abs() < 1e-9);
    // full-rank phase on F_3^3: every Fourier coefficient has modulus 3^{-3/2}
    assert!((u2_norm(&f) - 3f64.powf(-0.75)).abs() < 1e-9);
}

#[test]
fn three_term_progressions_in_the_full_space() {
    let fp = PrimeField::new(5).unwrap();
    let s = LinearSystem::three_ap(fp).unwrap();
    let one = FieldFunction::constant(fp, 2, Complex64::new(1.0, 0.0));
    let avg = system_average(&s, &vec![one; 3], 1 << 20).unwrap();
    assert!((avg - Complex64::new(1.0, 0.0)).norm() < 1e-12);
}
