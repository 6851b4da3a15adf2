use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sixvertex::lattice::{r_matrix, ybe_residual};
use sixvertex::linalg::{cauchy_det, cauchy_inverse, cauchy_matrix};
use sixvertex::oracles::Sampler;
use sixvertex::partition::{applies_to, compute_z, ZMethod};
use sixvertex::scalar::{f, g, h, htilde, kernel_product, lambda1, lambda2, sigma_y_pairing, Kernel, Side};
use sixvertex::{Field, Matrix, ParamSet, Scalar};

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (rational(), rational(), any::<bool>())
        .prop_map(|(re, im, real)| if real { Scalar::real(re) } else { Scalar::new(re, im) })
}

fn nonzero() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |x| !x.is_zero())
}

fn matrix(n: usize) -> impl Strategy<Value = Matrix<Scalar>> {
    prop::collection::vec(scalar(), n * n).prop_map(move |d| Matrix::new(n, n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), k in scalar(), d in nonzero()) {
        prop_assert_eq!(a.clone() + &b, b.clone() + &a);
        prop_assert_eq!(a.clone() * &b, b.clone() * &a);
        prop_assert_eq!((a.clone() * &b) * &k, a.clone() * &(b.clone() * &k));
        prop_assert_eq!(a.clone() * &(b.clone() + &k), a.clone() * &b + &(a.clone() * &k));
        prop_assert_eq!((a.clone() / &d) * &d, a.clone());
        prop_assert_eq!(a.clone() - &a, Scalar::zero());
        prop_assert_eq!(d.powi(-2).unwrap() * &d * &d, Scalar::one());
    }

    #[test]
    fn literal_round_trip(a in scalar()) {
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Scalar>(&text).unwrap(), a);
    }

    #[test]
    fn kernel_identities(u in scalar(), v in scalar(), c in nonzero()) {
        prop_assume!(u != v);
        let fv = f(&u, &v, &c).unwrap();
        prop_assert_eq!(fv.clone(), g(&u, &v, &c).unwrap() + &Scalar::one());
        prop_assert_eq!(fv.clone(), g(&u, &v, &c).unwrap() * &h(&u, &v, &c).unwrap());
        prop_assert_eq!(fv, g(&v, &u, &c).unwrap() * &htilde(&v, &u, &c).unwrap());
        prop_assert_eq!(g(&u, &v, &c).unwrap(), -g(&v, &u, &c).unwrap());
    }

    #[test]
    fn sigma_y_is_antisymmetric(x0 in scalar(), x1 in scalar(), y0 in scalar(), y1 in scalar()) {
        let (x, y) = ([x0, x1], [y0, y1]);
        prop_assert_eq!(sigma_y_pairing(&x, &y), -sigma_y_pairing(&y, &x));
        prop_assert!(sigma_y_pairing(&x, &x).is_zero());
    }

    #[test]
    fn vacuum_eigenvalue_ratio(seed in any::<u64>(), n in 0usize..5) {
        let mut s = Sampler::new(seed, 0);
        let p = s.params(1, n);
        let u = &p.u[0];
        let ratio = lambda1(u, &p).unwrap() / lambda2(u, &p).unwrap();
        prop_assert_eq!(ratio, kernel_product(Kernel::F, u, &p.v, Side::Left, &p.c).unwrap());
    }

    #[test]
    fn det_is_multiplicative(a in matrix(3), b in matrix(3)) {
        let ab = a.matmul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * &b.det().unwrap());
    }

    #[test]
    fn inverse_round_trip(a in matrix(3)) {
        prop_assume!(!a.det().unwrap().is_zero());
        let inv = a.inverse().unwrap();
        prop_assert_eq!(a.matmul(&inv).unwrap(), Matrix::identity(3));
        prop_assert_eq!(inv.det().unwrap() * &a.det().unwrap(), Scalar::one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn yang_baxter(u in scalar(), v in scalar(), w in scalar(), c in nonzero()) {
        prop_assume!(u != v && u != w && v != w);
        prop_assert!(ybe_residual(&u, &v, &w, &c).unwrap().is_zero());
    }

    #[test]
    fn r_matrix_unitarity(u in scalar(), v in scalar(), c in nonzero()) {
        prop_assume!(u != v && u.clone() - &v != c && v.clone() - &u != c);
        let forward = r_matrix(&u, &v, &c).unwrap();
        let back = r_matrix(&v, &u, &c).unwrap();
        let prod = forward.matmul(&back).unwrap();
        let k = prod[(0, 0)].clone();
        prop_assert_eq!(prod, Matrix::identity(4).scale(&k));
    }

    #[test]
    fn cauchy_inverse_is_inverse(seed in any::<u64>(), n in 1usize..5) {
        let p = Sampler::new(seed, 1).params(n, n);
        let m = cauchy_matrix(&p).unwrap();
        prop_assert_eq!(m.det().unwrap(), cauchy_det(&p).unwrap());
        prop_assert_eq!(m.matmul(&cauchy_inverse(&p).unwrap()).unwrap(), Matrix::identity(n));
    }

    #[test]
    fn methods_agree_on_random_lattices(seed in any::<u64>(), m in 0usize..3, n in 0usize..3, free in any::<bool>()) {
        let mut s = Sampler::new(seed, 2);
        let p: ParamSet<Scalar> = s.params(m, n);
        let cfg = s.boundary(free);
        let reference = compute_z(ZMethod::ContractionTrace, &p, &cfg).unwrap();
        for method in ZMethod::ALL.into_iter().filter(|&k| applies_to(k, m, n)) {
            prop_assert_eq!(compute_z(method, &p, &cfg).unwrap(), reference.clone(), "{}", method);
        }
    }

    #[test]
    fn boundary_scaling_is_multilinear(seed in any::<u64>(), k in nonzero()) {
        let mut s = Sampler::new(seed, 3);
        let p = s.params(2, 2);
        let cfg = s.boundary(false);
        let scaled = sixvertex::boundary::build_boundary(
            [cfg.w[0].clone() * &k, cfg.w[1].clone() * &k],
            cfg.e.clone(), cfg.n.clone(), cfg.s.clone(), None, None,
        ).unwrap();
        let base = compute_z(ZMethod::DetV, &p, &cfg).unwrap();
        prop_assert_eq!(compute_z(ZMethod::DetV, &p, &scaled).unwrap(), base * &k.powi(2).unwrap());
    }
}
