use modrep_core::cind::*;
use modrep_core::linalg::{solve, Field, Matrix};
use modrep_core::sl2::{HeckeOp, SubgroupId};
use modrep_core::{GfElem, GfField, Mat2, Sl2};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ind(p: u32, e: u32, r: u32) -> Ind {
    let k = GfField::new(p, e).unwrap();
    Ind::new(Sl2::new(k.clone(), 64), Weight::serre(&k, r).unwrap()).unwrap()
}

/// `f(x)` straight from `[g, v](x) = σ(xg)v` on `K₀g⁻¹`.
fn eval_oracle(m: &Ind, f: &CIndVec, x: &Mat2) -> Vec<GfElem> {
    let k = m.field();
    let mut acc = vec![GfElem::ZERO; m.dim()];
    for (v, val) in f.terms() {
        let y = x.mul(&m.vertex_rep(v), k);
        if m.s.member(&y, SubgroupId::K0).unwrap() {
            let w = m.w.rep.act(&y.reduce().unwrap(), val);
            acc = acc.iter().zip(&w).map(|(&a, &b)| k.add(a, b)).collect();
        }
    }
    acc
}

fn unit(d: usize, i: usize) -> Vec<GfElem> {
    let mut e = vec![GfElem::ZERO; d];
    e[i] = GfElem::ONE;
    e
}

#[test]
fn canonical_form_is_a_witness() {
    let m = ind(3, 1, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let g = m.s.sample_word(&mut rng, 6);
        let (v, kb) = m.canonical(&g).unwrap();
        let kk = m.vertex_rep(&v).inv(m.field()).mul(&g, m.field());
        assert!(m.s.member(&kk, SubgroupId::K0).unwrap());
        assert_eq!(kk.reduce().unwrap(), kb);
        let h = m.s.sample_k0(&mut rng);
        assert_eq!(m.canonical(&g.mul(&h, m.field())).unwrap().0, v);
    }
}

#[test]
fn standard_functions() {
    let m = ind(3, 1, 2);
    let k = m.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let v = m.w.v.clone();
    for _ in 0..50 {
        let g = m.s.sample_word(&mut rng, 5);
        let h = m.s.sample_k0(&mut rng);
        let lhs = m.std_fn(&g.mul(&h, &k), &v).unwrap();
        let rhs = m.std_fn(&g, &m.w.rep.act(&h.reduce().unwrap(), &v)).unwrap();
        assert_eq!(lhs, rhs);
        let x = m.s.sample_word(&mut rng, 5);
        assert_eq!(m.act(&x, &lhs).unwrap(), m.std_fn(&x.mul(&g, &k).mul(&h, &k), &v).unwrap());
        for _ in 0..4 {
            let y = m.s.sample_word(&mut rng, 5);
            assert_eq!(m.evaluate(&lhs, &y).unwrap(), eval_oracle(&m, &lhs, &y));
        }
        let kk = m.s.sample_k0(&mut rng);
        assert_eq!(m.evaluate(&m.phi(), &kk).unwrap(), m.w.rep.act(&kk.reduce().unwrap(), &v));
    }
    assert!(m.evaluate(&m.phi(), &m.s.alpha0().inv(&k)).unwrap().iter().all(|c| c.is_zero()));
}

#[test]
fn f_basis_support_and_characters() {
    for (p, e, r) in [(2, 1, 1), (3, 1, 1), (2, 2, 1), (5, 1, 2)] {
        let m = ind(p, e, r);
        let q = m.field().q() as usize;
        for n in -2i64..=2 {
            let f = m.f_basis(n).unwrap();
            let expected = if n > 0 { q.pow(2 * n as u32 - 1) } else { q.pow(2 * n.unsigned_abs() as u32) };
            assert_eq!(f.len(), expected);
            assert_eq!(m.support_classes(&f).unwrap().into_iter().collect::<Vec<_>>(), vec![n]);
            assert!(m.is_i1_fixed(&f).unwrap(), "q={q} n={n}");
            let c = m.torus_eigenvalue(&f).unwrap().unwrap();
            assert_eq!(c, m.field().gen_pow(m.w.exponent_for(n) as i64));
            let val = m.evaluate(&f, &m.s.alpha0_pow(-n)).unwrap();
            assert_eq!(val.as_slice(), m.base_value(n));
        }
    }
    assert!(ind(2, 1, 1).f_basis(9).is_err());
}

#[test]
fn fixed_space_is_spanned_by_f_basis() {
    for (p, e, r, radius) in [(2, 1, 1, 3), (3, 1, 1, 3), (3, 1, 2, 2), (2, 2, 2, 2)] {
        let m = ind(p, e, r);
        assert_eq!(m.i1_fixed_dim(radius).unwrap(), 2 * radius as usize + 1);
    }
}

#[test]
fn tau_on_phi() {
    for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        for r in [0, 1] {
            let m = ind(p, e, r);
            let k = m.field().clone();
            assert!(m.check_tau_well_defined().unwrap());
            let tphi = m.tau_apply(&m.phi()).unwrap();
            let s_phi = m.right_hecke(&m.phi(), HeckeOp::Alpha0).unwrap();
            let classes = m.support_classes(&tphi).unwrap();
            assert!(classes.iter().all(|n| n.abs() == 1));
            if m.w.is_trivial() {
                let extra = m.act_sum(&m.s.hecke_summands(HeckeOp::Alpha0Inv).iter().take(k.q() as usize).cloned().collect::<Vec<_>>(), &m.phi()).unwrap();
                assert_eq!(tphi, s_phi.add(&extra, &k));
                assert_eq!(m.tau_sigma(&m.phi()).unwrap(), tphi.add(&m.phi(), &k));
                assert_eq!(classes.len(), 2);
            } else {
                assert_eq!(tphi, s_phi);
                assert_eq!(m.tau_sigma(&m.phi()).unwrap(), tphi);
            }
        }
    }
}

#[test]
fn tau_commutes_with_hecke() {
    for (p, r) in [(2, 1), (3, 0), (3, 2)] {
        let m = ind(p, 1, r);
        for n in -2i64..=2 {
            let f = m.f_basis(n).unwrap();
            let tf = m.tau_apply(&f).unwrap();
            for op in HeckeOp::ALL {
                let a = m.tau_apply(&m.right_hecke(&f, op).unwrap()).unwrap();
                let b = m.right_hecke(&tf, op).unwrap();
                assert_eq!(a, b, "p={p} r={r} n={n} {}", op.name());
            }
        }
    }
}

#[test]
fn hecke_coefficients_agree_with_explicit_sums() {
    for (p, e, r) in [(2, 1, 0), (3, 1, 1), (2, 2, 1), (2, 2, 3)] {
        let m = ind(p, e, r);
        for n in -2i64..=2 {
            let f = m.f_basis(n).unwrap();
            for op in HeckeOp::ALL {
                let explicit = m.cind_to_iw(&m.right_hecke(&f, op).unwrap(), true).unwrap();
                let coeff = m.right_hecke_iw(&IwVec::from([(n, GfElem::ONE)]), op).unwrap();
                assert_eq!(explicit, coeff, "q={} r={r} n={n} {}", m.field().q(), op.name());
            }
        }
    }
}

/// `τ_σ(ind) ∩ V_radius` by one dense solve over the whole ball.
fn dense_ssq(m: &Ind, f: &CIndVec, radius: i64) -> bool {
    let k = m.field();
    let d = m.dim();
    let rows: Vec<Vertex> = m.ball(radius);
    let flatten = |g: &CIndVec| -> Vec<GfElem> {
        rows.iter().flat_map(|v| g.get(v).cloned().unwrap_or_else(|| vec![GfElem::ZERO; d])).collect()
    };
    let mut cols = Vec::new();
    for x in m.ball(radius - 1) {
        for i in 0..d {
            let mut h = CIndVec::zero();
            h.add_term(k, x.clone(), &unit(d, i));
            cols.push(flatten(&m.tau_sigma(&h).unwrap()));
        }
    }
    let a = Matrix::from_cols(&cols, rows.len() * d, GfElem::ZERO);
    solve(k, &a, &flatten(f)).is_some()
}

#[test]
fn ssq_equal_matches_dense_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (p, r) in [(2, 0), (2, 1), (3, 1)] {
        let m = ind(p, 1, r);
        let k = m.field().clone();
        let balls = [m.ball(0), m.ball(1)];
        for trial in 0..12 {
            // Half the samples are images, half are random.
            let mut h = CIndVec::zero();
            for v in &balls[trial % 2] {
                let x: Vec<GfElem> = (0..m.dim()).map(|_| GfElem(rand::Rng::gen_range(&mut rng, 0..k.q()))).collect();
                h.add_term(&k, v.clone(), &x);
            }
            let f = if trial % 3 == 0 { m.tau_sigma(&h).unwrap() } else { h.clone() };
            let radius = f.radius().max(1);
            let out = m.ssq_equal(&f, &CIndVec::zero(), None).unwrap();
            assert_eq!(out.is_equal(), dense_ssq(&m, &f, radius), "p={p} r={r} trial={trial}");
            if let SsqOutcome::Equal(w) = out {
                assert_eq!(m.tau_sigma(&w).unwrap(), f);
            }
        }
    }
}

#[test]
fn quotient_basics() {
    let m = ind(3, 1, 1);
    let phi = m.phi();
    let s_phi = m.right_hecke(&phi, HeckeOp::Alpha0).unwrap();
    match m.ssq_equal(&s_phi, &CIndVec::zero(), None).unwrap() {
        SsqOutcome::Equal(w) => assert_eq!(w, phi),
        SsqOutcome::NotEqual => panic!("S·φ must vanish"),
    }
    assert_eq!(m.ssq_equal(&phi, &CIndVec::zero(), None).unwrap(), SsqOutcome::NotEqual);
    let far = m.f_basis(-3).unwrap();
    assert!(matches!(m.ssq_equal(&far, &CIndVec::zero(), Some(1)), Err(modrep_core::Error::RadiusTooSmall { .. })));
}

#[test]
fn parent_is_adjacent() {
    let m = ind(2, 1, 1);
    for v in m.ball(3) {
        if v.radius() == 0 {
            continue;
        }
        let p = m.parent(&v).unwrap();
        assert_eq!(p.radius(), v.radius() - 1);
        let g = m.vertex_rep(&p).inv(m.field()).mul(&m.vertex_rep(&v), m.field());
        assert_eq!(g.cartan(), 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn action_is_a_group_action(seed in any::<u64>()) {
        let m = ind(3, 1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = m.act(&m.s.sample_word(&mut rng, 4), &m.phi()).unwrap();
        let g = m.s.sample_word(&mut rng, 4);
        let h = m.s.sample_word(&mut rng, 4);
        let lhs = m.act(&g, &m.act(&h, &f).unwrap()).unwrap();
        prop_assert_eq!(lhs, m.act(&g.mul(&h, m.field()), &f).unwrap());
    }

    #[test]
    fn tau_is_equivariant_and_linear(seed in any::<u64>(), r in 0u32..3) {
        let m = ind(3, 1, r);
        let k = m.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f1 = m.act(&m.s.sample_word(&mut rng, 3), &m.phi()).unwrap();
        let f2 = m.act(&m.s.sample_word(&mut rng, 3), &m.phi()).unwrap();
        let g = m.s.sample_word(&mut rng, 4);
        prop_assert_eq!(m.tau_apply(&m.act(&g, &f1).unwrap()).unwrap(), m.act(&g, &m.tau_apply(&f1).unwrap()).unwrap());
        let c = GfElem(2);
        let lin = m.tau_sigma(&f1.add(&f2.scale(c, &k), &k)).unwrap();
        prop_assert_eq!(lin, m.tau_sigma(&f1).unwrap().add(&m.tau_sigma(&f2).unwrap().scale(c, &k), &k));
    }
}
