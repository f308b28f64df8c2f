use dixlab_core::cocycle::{evaluate_on, Cochain, FredholmModuleSpec};
use dixlab_core::op::{kernel_diagonal, modulus_one_identity, rho, rho_exact, TruncationWindow};
use dixlab_core::seq::{Complex, FourierSeries, TorusIndex};
use dixlab_core::trace::Schedule;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn index() -> impl Strategy<Value = TorusIndex> {
    (-20i64..=20, -20i64..=20).prop_map(|(a, b)| TorusIndex::new(a, b))
}

fn unit() -> impl Strategy<Value = Complex> {
    (0.0..std::f64::consts::TAU).prop_map(|t| Complex::from_polar(1.0, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn kernel_is_homogeneous_of_degree_zero(k in index(), m in index(), n in index()) {
        let base = rho_exact(k, m, n);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        for t in [2, 3, 7] {
            prop_assert_eq!(rho_exact(k.scaled(t), m.scaled(t), n.scaled(t)).unwrap(), base.clone());
        }
    }

    #[test]
    fn kernel_is_antisymmetric_in_offsets(k in index(), m in index(), n in index()) {
        let forward = rho_exact(k, m, n);
        prop_assume!(forward.is_ok());
        prop_assert_eq!(rho_exact(k, n, m).unwrap(), forward.unwrap().neg());
        prop_assert!((rho(k, n, m).unwrap() + rho(k, m, n).unwrap()).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn modulus_one_identity_holds(z in unit(), w in unit(), u in unit()) {
        let (lhs, rhs) = modulus_one_identity(z, w, u);
        prop_assert!((lhs - rhs).norm() < 1e-12, "{lhs} vs {rhs}");
    }
}

fn trig_polynomial(rng: &mut ChaCha8Rng, degree: i64) -> FourierSeries<TorusIndex, Complex> {
    let terms: Vec<_> = (0..4)
        .map(|_| {
            let k = TorusIndex::new(rng.gen_range(-degree..=degree), rng.gen_range(-degree..=degree));
            (k, Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        })
        .collect();
    FourierSeries::from_terms(terms)
}

#[test]
fn supertrace_diagonal_matches_kernel_on_laplacian_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spec = FredholmModuleSpec::torus(2).unwrap();
    for _ in 0..5 {
        let a: Vec<_> = (0..3).map(|_| trig_polynomial(&mut rng, 3)).collect();
        for shells in [4, 17, 200] {
            let w = TruncationWindow::Shells(shells);
            let e = evaluate_on(&Cochain::Cyclic(spec), &a, w, &Schedule::dyadic(0, 3)).unwrap();
            let basis: Vec<TorusIndex> = w.basis().unwrap();
            let mut operator_sum = Complex::new(0.0, 0.0);
            let mut kernel_sum = Complex::new(0.0, 0.0);
            for (pos, k) in basis.iter().enumerate() {
                let (op, ker) = (e.diagonal.get(pos as u64), kernel_diagonal(&a[0], &a[1], &a[2], *k));
                assert!((op - ker).norm() < 1e-10, "shells {shells}, k = {k:?}: {op} vs {ker}");
                operator_sum += op;
                kernel_sum += ker;
            }
            assert!((operator_sum - kernel_sum).norm() < 1e-10);
        }
    }
}
