use modrep_core::fields::lift_a;
use modrep_core::sl2::{BorelSide, HeckeOp, SubgroupId};
use modrep_core::{GfElem, GfField, LSeries, Mat2, Sl2};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx(p: u32, e: u32) -> Sl2 {
    Sl2::new(GfField::new(p, e).unwrap(), 48)
}

/// Class read off from entry valuations alone.
fn oracle_class(g: &Mat2) -> i64 {
    let n = -g.min_val();
    if n <= 0 {
        return 0;
    }
    if g.c.val_bound().min(g.a.val_bound()) > -n {
        n
    } else {
        -n
    }
}

fn check_class(s: &Sl2, g: &Mat2) -> i64 {
    let c = s.kgi_class(g).unwrap();
    assert_eq!(c.n, oracle_class(g), "{}", g.format(&s.k));
    assert_eq!(c.n.abs(), g.cartan());
    let back = s.prod(&[&c.k, &s.alpha0_pow(-c.n), &c.i]);
    assert!(back.approx_eq(g, &s.k));
    c.n
}

#[test]
fn sampled_classes_are_invariant() {
    for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let s = ctx(p, e);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let g = s.sample_word(&mut rng, 6);
            let n = check_class(&s, &g);
            let k = s.sample_k0(&mut rng);
            let i = s.sample_i1(&mut rng);
            assert!(s.member(&k, SubgroupId::K0).unwrap());
            assert!(s.member(&i, SubgroupId::IS1).unwrap());
            assert_eq!(check_class(&s, &s.prod(&[&k, &g, &i])), n);
        }
    }
}

#[test]
fn borel_sides_are_invariant() {
    let s = ctx(3, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut plain, mut beta) = (0, 0);
    for _ in 0..200 {
        let g = s.sample_word(&mut rng, 6);
        let c = s.borel_class(&g).unwrap();
        assert!(s.member(&c.b, SubgroupId::BS).unwrap());
        let b = s.sample_borel(&mut rng);
        let i = s.sample_i1(&mut rng);
        assert_eq!(s.borel_class(&s.prod(&[&b, &g, &i])).unwrap().side, c.side);
        match c.side {
            BorelSide::Plain => plain += 1,
            BorelSide::Beta0 => beta += 1,
        }
    }
    assert!(plain > 0 && beta > 0);
}

#[test]
fn alpha_conjugate_sends_k0_to_k1() {
    let s = ctx(3, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let k = s.sample_k0(&mut rng);
        assert!(s.member(&s.alpha_conjugate(&k), SubgroupId::K1).unwrap());
        let g = s.sample_word(&mut rng, 4);
        let h = s.sample_word(&mut rng, 4);
        let lhs = s.alpha_conjugate(&s.mul(&g, &h));
        let rhs = s.mul(&s.alpha_conjugate(&g), &s.alpha_conjugate(&h));
        assert!(lhs.approx_eq(&rhs, &s.k));
    }
    let d = s.torus(&s.mono(GfElem(2), 3)).unwrap();
    assert!(s.alpha_conjugate(&d).approx_eq(&d, &s.k));
}

#[test]
fn coset_quotient_sizes() {
    for (p, e) in [(2, 1), (3, 1), (2, 2)] {
        let s = ctx(p, e);
        for op in [HeckeOp::W0, HeckeOp::Alpha0] {
            let (g, reps) = s.hecke_cosets(op);
            let ginv = s.inv(&g);
            for (a, ra) in reps.iter().enumerate() {
                for rb in &reps[a + 1..] {
                    let x = s.prod(&[&g, &s.inv(ra), rb, &ginv]);
                    assert!(!s.member(&x, SubgroupId::IS1).unwrap());
                }
            }
        }
    }
}

#[test]
fn membership_precision_error() {
    let s = Sl2::new(GfField::new(3, 1).unwrap(), 2);
    let g = Mat2::new(s.one(), LSeries::zero(1), s.zero(), s.one());
    assert!(s.member(&g, SubgroupId::US(3)).is_err());
}

#[test]
fn iwahori_factor_rejects_outside() {
    let s = ctx(3, 1);
    assert!(s.iwahori_factor(&s.w0()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(p in prop::sample::select(vec![2u32, 3, 5, 7]), e in 1u32..=2, a in 0u32..49, b in 0u32..49, c in 0u32..49) {
        use modrep_core::linalg::Field;
        let k = GfField::new(p, e).unwrap();
        let q = k.q();
        let (a, b, c) = (GfElem(a % q), GfElem(b % q), GfElem(c % q));
        prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        prop_assert_eq!(k.add(a, k.neg(a)), GfElem::ZERO);
        prop_assert_eq!(k.pow(a, q as i64), a);
        prop_assert_eq!(k.frobenius(k.add(a, b)), k.add(k.frobenius(a), k.frobenius(b)));
        if !a.is_zero() {
            prop_assert_eq!(k.mul(a, k.inv(a).unwrap()), GfElem::ONE);
        }
    }

    #[test]
    fn series_inverse_and_valuation(v in -3i64..3, w in -3i64..3, cs in prop::collection::vec(1u32..5, 1..5), ds in prop::collection::vec(1u32..5, 1..5)) {
        let k = GfField::new(5, 1).unwrap();
        let x = LSeries::from_coeffs(v, &cs.iter().map(|&c| GfElem(c)).collect::<Vec<_>>(), 20);
        let y = LSeries::from_coeffs(w, &ds.iter().map(|&c| GfElem(c)).collect::<Vec<_>>(), 20);
        prop_assert_eq!(x.mul(&y, &k).valuation(), Some(v + w));
        let xi = x.inv(&k).unwrap();
        prop_assert_eq!(xi.valuation(), Some(-v));
        let one = x.mul(&xi, &k);
        prop_assert!(one.approx_eq(&LSeries::one(one.precision()), &k));
    }

    #[test]
    fn lift_a_valuation(l0 in 0u32..3, l1 in 0u32..3, l2 in 0u32..3) {
        let a = lift_a(&[GfElem(l0), GfElem(l1), GfElem(l2)], 10);
        let first = [l0, l1, l2].iter().position(|&x| x != 0).map(|i| i as i64);
        prop_assert_eq!(a.valuation(), first);
    }

    #[test]
    fn iwahori_roundtrip(seed in any::<u64>()) {
        let s = ctx(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = s.sample_i1(&mut rng);
        let f = s.iwahori_factor(&g).unwrap();
        prop_assert!(f.x.val_bound() >= 0);
        prop_assert!(f.z.val_bound() >= 1);
        prop_assert!(s.iwahori_product(&f).unwrap().approx_eq(&g, &s.k));
    }
}
