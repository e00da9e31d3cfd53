use modrep_core::cind::{CIndVec, Ind, Weight};
use modrep_core::linalg::Field;
use modrep_core::smooth::*;
use modrep_core::{GfElem, GfField, Mat2, Sl2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field(p: u32, e: u32) -> GfField {
    GfField::new(p, e).unwrap()
}

fn ps(k: &GfField, eta: SmoothChar) -> PsModel {
    PsModel::new(Sl2::new(k.clone(), 16), eta, 4)
}

fn small_fields() -> Vec<GfField> {
    vec![field(2, 1), field(3, 1), field(2, 2), field(5, 1)]
}

fn random_vec(m: &PsModel, level: u32, rng: &mut ChaCha8Rng) -> PSVec {
    let q = m.s.q();
    PSVec { level, vals: (0..m.points(level)).map(|_| GfElem(rng.gen_range(0..q))).collect() }
}

#[test]
fn basic_vectors() {
    for k in small_fields() {
        for eta in SmoothChar::all(&k) {
            let m = ps(&k, eta);
            let (l1, l2) = m.ps_basics();
            let beta0 = m.s.beta0();
            let id = m.s.identity();
            assert_eq!(m.eval(&l1, &id).unwrap(), GfElem::ONE);
            assert_eq!(m.eval(&l1, &beta0).unwrap(), GfElem::ZERO);
            assert_eq!(m.eval(&l2, &beta0).unwrap(), GfElem::ONE);
            assert_eq!(m.eval(&l2, &id).unwrap(), GfElem::ZERO);
            assert!(m.v_eta_membership(&l2) && !m.v_eta_membership(&l1));
            for lvl in 1..=3 {
                assert_eq!(m.i1_fixed_basis(lvl).unwrap().len(), 2);
            }
            assert_eq!(isotypic_check(&m, &l1).unwrap(), Some(eta.plus(&k)));
            assert_eq!(isotypic_check(&m, &l2).unwrap(), Some(eta.minus(&k)));
            if eta.plus(&k) != eta.minus(&k) {
                assert_eq!(isotypic_check(&m, &m.add(&l1, &l2)).unwrap(), None);
            }
            if eta.is_trivial() {
                assert!(m.same(&m.add(&l1, &l2), &m.constant(1)));
            }
        }
    }
}

/// `f(bx) = η(b)f(x)` read off from the diagonal of `b`, never through `locate`'s pivot.
#[test]
fn borel_cocycle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in small_fields() {
        for eta in SmoothChar::all(&k).into_iter().step_by(3) {
            let m = ps(&k, eta);
            for _ in 0..20 {
                let f = random_vec(&m, 2, &mut rng);
                let b = m.s.sample_borel(&mut rng);
                let x = m.s.sample_k0(&mut rng);
                let lhs = m.eval(&f, &b.mul(&x, &k)).unwrap();
                let rhs = k.mul(eta.eval(&k, &b.a).unwrap(), m.eval(&f, &x).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn s_eigenvector_and_weight() {
    for k in small_fields() {
        for eta in SmoothChar::all(&k) {
            let m = ps(&k, eta);
            let (_, l2) = m.ps_basics();
            let sl2 = s_operator(&m, SOp::S, &l2).unwrap();
            assert_eq!(proportion(&m, &sl2, &l2), Some(eta.at_alpha0(&k)));
            assert!(m.v_eta_membership(&sl2));
            let composed = s_operator(&m, SOp::S1, &s_operator(&m, SOp::S2, &l2).unwrap()).unwrap();
            assert!(m.same(&composed, &sl2));
            match k0_weight_of(&m, &sl2).unwrap() {
                WeightOf::Weight(w) => assert_ne!(w, modrep_core::finrep::sym_label(&k, 0), "q={}", k.q()),
                other => panic!("{other:?}"),
            }
            let kern = m.operator_kernel(SOp::S, 1).unwrap();
            assert_eq!(kern.len(), 1);
            assert!(proportion(&m, &kern[0], &l2).is_none());
        }
    }
    let k = field(3, 1);
    let m = ps(&k, SmoothChar::trivial());
    assert_eq!(k0_weight_of(&m, &m.constant(1)).unwrap(), WeightOf::Weight(modrep_core::finrep::sym_label(&k, 0)));
}

#[test]
fn weight_of_f0_is_sigma() {
    let k = field(5, 1);
    for r in 0..5 {
        let w = Weight::serre(&k, r).unwrap();
        let label = w.label;
        let ind = Ind::new(Sl2::new(k.clone(), 32), w).unwrap();
        assert_eq!(k0_weight_of(&ind, &ind.f_basis(0).unwrap()).unwrap(), WeightOf::Weight(label));
    }
}

#[test]
fn transport_kills_hecke_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in [field(2, 1), field(3, 1), field(5, 1)] {
        for eta in SmoothChar::all(&k).into_iter().step_by(2) {
            let m = ps(&k, eta);
            let (ind, tr) = ps_transport(&m).unwrap();
            let c = eta.at_alpha0(&k);
            let phi = ind.phi();
            let rel = ind.tau_sigma(&phi).unwrap().sub(&phi.scale(c, &k), &k);
            assert!(m.is_zero(&tr.apply(&ind, &m, &rel).unwrap()));
            let img = tr.apply(&ind, &m, &phi).unwrap();
            assert!(!m.is_zero(&img));
            for _ in 0..3 {
                let g = m.s.sample_word(&mut rng, 3);
                let f = ind.act(&g, &ind.f_basis(rng.gen_range(-1..=1)).unwrap()).unwrap();
                let rel = ind.tau_sigma(&f).unwrap().sub(&f.scale(c, &k), &k);
                for _ in 0..8 {
                    let x = m.s.sample_k0(&mut rng);
                    assert_eq!(transport_eval(&m, &ind, &tr, &rel, &x).unwrap(), GfElem::ZERO);
                }
            }
        }
    }
}

#[test]
fn identities_on_kernels() {
    for k in small_fields() {
        for eta in SmoothChar::all(&k) {
            let m = ps(&k, eta);
            let s = &m.s;
            let w0 = [(GfElem::ONE, s.w0())];
            for v in m.operator_kernel(SOp::S, 2).unwrap() {
                assert!(m.combos_agree(&w0, &w0_relation_terms(s).unwrap(), &v).unwrap());
                let chi = isotypic_check(&m, &v).unwrap().unwrap();
                let s2v = s_operator(&m, SOp::S2, &v).unwrap();
                assert!(m.same(&s2v, &combo(&m, &s2_terms(s, chi), &v).unwrap()));
            }
            for v in m.operator_kernel(SOp::S2, 2).unwrap() {
                let chi = isotypic_check(&m, &v).unwrap().unwrap();
                assert!(m.combos_agree(&w0, &w0_terms_for_s2_kernel(s, chi), &v).unwrap());
            }
        }
    }
}

#[test]
fn identities_in_supersingular_quotient() {
    for (k, rs) in [(field(2, 1), vec![1]), (field(3, 1), vec![1, 2]), (field(2, 2), vec![1, 3])] {
        for r in rs {
            let ind = Ind::new(Sl2::new(k.clone(), 64), Weight::serre(&k, r).unwrap()).unwrap();
            let s = ind.s.clone();
            let phi = ind.phi();
            let eq = |a: &CIndVec, b: &CIndVec| ind.ssq_equal(a, b, None).unwrap().is_equal();
            let zero = CIndVec::zero();
            assert!(eq(&s_operator(&ind, SOp::S, &phi).unwrap(), &zero));
            assert!(!eq(&phi, &zero));
            let w0phi = ind.act(&s.w0(), &phi).unwrap();
            assert!(eq(&w0phi, &combo(&ind, &w0_relation_terms(&s).unwrap(), &phi).unwrap()));
            let chi = isotypic_check(&ind, &phi).unwrap().unwrap();
            let s2phi = s_operator(&ind, SOp::S2, &phi).unwrap();
            assert!(!eq(&s2phi, &zero));
            assert!(eq(&s2phi, &combo(&ind, &s2_terms(&s, chi), &phi).unwrap()));
        }
    }
}

#[test]
fn steinberg_lifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let k = field(3, 1);
    let st = StModel::new(Sl2::new(k.clone(), 16), 4);
    for lvl in 1..=2 {
        for _ in 0..10 {
            let f = random_vec(&st.ps, lvl, &mut rng);
            let c = st.ps.constant(lvl);
            let shifted = st.ps.add(&f, &st.ps.scale(GfElem(2), &c));
            assert!(st.same(&f, &shifted));
            let lift = st.lift_to_v1(&f);
            assert!(st.ps.v_eta_membership(&lift));
            assert_eq!(lift, st.lift_to_v1(&shifted));
            let b = st.ps.s.sample_borel(&mut rng);
            if b.cartan() == 0 {
                let lhs = st.lift_to_v1(&st.act(&b, &f).unwrap());
                let rhs = st.ps.act(&b, &lift).unwrap();
                assert!(st.ps.same(&lhs, &rhs));
            }
        }
    }
    for v in st.ps.i1_fixed_basis(2).unwrap() {
        let image = st.canonical(&v);
        assert!(is_i1_fixed(&st, &image).unwrap());
    }
}

#[test]
fn borel_lines_and_generation() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in [field(2, 1), field(3, 1)] {
        for eta in SmoothChar::all(&k) {
            let m = ps(&k, eta);
            for lvl in 1..=2 {
                let (lines, fixed) = stable_lines(&m, lvl).unwrap();
                assert!(fixed);
                assert_eq!(lines, usize::from(eta.is_trivial()));
                for _ in 0..3 {
                    let w = random_vec(&m, lvl, &mut rng);
                    if !m.is_zero(&w) {
                        assert!(borel_generation(&m, &w).unwrap());
                    }
                }
            }
            let (got, full) = v_eta_spin(&m, 2).unwrap();
            assert_eq!(got, full);
        }
    }
}

#[test]
fn level_cap_is_enforced() {
    let k = field(3, 1);
    let m = ps(&k, SmoothChar::trivial());
    let a = m.s.alpha0_pow(3);
    assert!(m.act(&a, &m.constant(1)).is_err());
    assert!(m.i1_fixed_basis(5).is_err());
}

fn cases() -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 0usize..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn action_is_a_group_action((seed, which) in cases()) {
        let k = small_fields().swap_remove(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let etas = SmoothChar::all(&k);
        let m = ps(&k, etas[rng.gen_range(0..etas.len())]);
        let f = random_vec(&m, 1, &mut rng);
        let g = m.s.sample_k0(&mut rng);
        let h: Mat2 = m.s.sample_word(&mut rng, 1);
        if h.cartan() <= 1 {
            let lhs = m.act(&g, &m.act(&h, &f).unwrap()).unwrap();
            let rhs = m.act(&g.mul(&h, &k), &f).unwrap();
            prop_assert!(m.same(&lhs, &rhs));
        }
        let deep = m.s.u(&m.s.mono(GfElem::ONE, 1));
        prop_assert!(m.same(&m.act(&deep, &f).unwrap(), &f));
    }

    #[test]
    fn twisted_action_is_a_group_action(seed in any::<u64>()) {
        let k = field(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tw = Twisted(PsModel::new(Sl2::new(k.clone(), 16), SmoothChar::trivial(), 6));
        let f = random_vec(&tw.0, 1, &mut rng);
        let g = tw.0.s.sample_k0(&mut rng);
        let h = tw.0.s.sample_k0(&mut rng);
        let lhs = tw.act(&g, &tw.act(&h, &f).unwrap()).unwrap();
        let rhs = tw.act(&g.mul(&h, &k), &f).unwrap();
        prop_assert!(tw.same(&lhs, &rhs));
    }
}
