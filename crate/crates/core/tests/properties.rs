use htcrystal::dp::{format_monomial, parse_monomial, DpPoly, Shape};
use htcrystal::galois::{exp_nilpotent, log_unipotent};
use htcrystal::homology::snf;
use htcrystal::input::{module_to_toml, ModuleSpec};
use htcrystal::matrix::Matrix;
use htcrystal::random::{instance_rng, random_enhanced, standard_configs};
use htcrystal::ring::{make_base_ring_with_guard, Ring, Scalar};
use htcrystal::stratification::Stratification;
use htcrystal::Coefficient;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn ring(config: usize, n: u32) -> Ring {
    let cfgs = standard_configs(n);
    make_base_ring_with_guard(&cfgs[config % cfgs.len()], 0).unwrap()
}

fn scalar(ring: &Ring, rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::random_small(ring, rng, 50)
}

fn dp(shape: Shape, ring: &Ring, rng: &mut ChaCha8Rng) -> DpPoly<Scalar> {
    let mut p = DpPoly::zero(shape, &Scalar::zero(ring));
    for e in shape.monomials(shape.degree) {
        if rng.gen_bool(0.4) {
            p.insert_add(e, scalar(ring, rng));
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_ring_axioms(seed in any::<u64>(), config in 0usize..6) {
        let r = ring(config, 6);
        let mut rng = instance_rng(seed, 0);
        let (a, b, c) = (scalar(&r, &mut rng), scalar(&r, &mut rng), scalar(&r, &mut rng));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!(a.clone() - a.clone(), Scalar::zero(&r));
    }

    #[test]
    fn dp_product_is_associative_and_commutative(seed in any::<u64>(), config in 0usize..6, d in 1usize..=2, arith in any::<bool>()) {
        let r = ring(config, 6);
        let shape = if arith { Shape::arith(1, d, 4) } else { Shape::geo(1, d, 4) };
        let mut rng = instance_rng(seed, 1);
        let (f, g, h) = (dp(shape, &r, &mut rng), dp(shape, &r, &mut rng), dp(shape, &r, &mut rng));
        prop_assert_eq!((f.clone() * g.clone()) * h.clone(), f.clone() * (g.clone() * h.clone()));
        prop_assert_eq!(f.clone() * g.clone(), g.clone() * f.clone());
        prop_assert_eq!(f.clone() * (g.clone() + h.clone()), f.clone() * g.clone() + f * h);
    }

    #[test]
    fn monomial_text_round_trips(d in 1usize..=3, n in 1usize..=2, seed in any::<u64>()) {
        let shape = Shape::arith(n, d, 6);
        let monos = shape.monomials(6);
        let e = &monos[(seed % monos.len() as u64) as usize];
        let text = format_monomial(&shape, e);
        prop_assert_eq!(&parse_monomial(&shape, &text).unwrap(), e);
    }

    #[test]
    fn snf_reconstructs(seed in any::<u64>(), config in 0usize..6, rows in 1usize..=4, cols in 1usize..=4) {
        let r = ring(config, 6);
        let mut rng = instance_rng(seed, 2);
        let zero = Scalar::zero(&r);
        let pi = Scalar::pi(&r);
        let a = Matrix::from_fn(rows, cols, &zero, |_, _| {
            let k = rng.gen_range(0..4u32);
            scalar(&r, &mut rng) * pi.pow(k)
        });
        let s = snf(&a).unwrap();
        prop_assert_eq!(s.u.clone() * a.clone() * s.v.clone(), s.d.clone());
        prop_assert_eq!(s.u.clone() * s.u_inv.clone(), Matrix::identity(rows, &zero));
        prop_assert_eq!(s.v.clone() * s.v_inv.clone(), Matrix::identity(cols, &zero));
        prop_assert!(s.divisors.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rational_exp_log_are_inverse(entries in proptest::collection::vec(-20i64..=20, 10), r in 1usize..=4) {
        let q = |n: i64| BigRational::from_integer(n.into());
        let zero = q(0);
        let mut it = entries.into_iter();
        let n = Matrix::from_fn(r, r, &zero, |i, j| if i > j { q(it.next().unwrap_or(1)) } else { q(0) });
        let g = exp_nilpotent(&n).unwrap();
        prop_assert_eq!(log_unipotent(&g).unwrap(), n.clone());
        prop_assert_eq!(exp_nilpotent(&log_unipotent(&g).unwrap()).unwrap(), g);
    }

    #[test]
    fn module_files_round_trip(seed in any::<u64>(), config in 0usize..6, d in 1usize..=2, r in 1usize..=3) {
        let cfg = standard_configs(6)[config].clone();
        let base = make_base_ring_with_guard(&cfg, 0).unwrap();
        let m = random_enhanced(&base, d, r, &mut instance_rng(seed, 3)).module;
        let text = module_to_toml(&m, &cfg, Some("random"));
        let spec = ModuleSpec::from_toml_str(&text).unwrap();
        prop_assert_eq!(spec.instantiate(&base).unwrap(), m);
    }

    #[test]
    fn stratification_round_trips(seed in any::<u64>(), config in 0usize..6, d in 1usize..=2, r in 1usize..=3) {
        let base = ring(config, 6);
        let wide = make_base_ring_with_guard(&base.cfg, 6).unwrap();
        let m = random_enhanced(&wide, d, r, &mut instance_rng(seed, 4)).module;
        let s = Stratification::build(&m, 4).unwrap();
        prop_assert!(s.check_cocycle().passed());
        prop_assert_eq!(s.extract().unwrap(), m);
    }
}
