use modrep_core::finrep::*;
use modrep_core::linalg::{identity, is_zero_matrix, mat_add, mat_mul, Field};
use modrep_core::{GfElem, GfField, Mat2k};

fn fields() -> Vec<GfField> {
    [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)]
        .iter()
        .map(|&(p, e)| GfField::new(p, e).unwrap())
        .collect()
}

#[test]
fn t_w0_square_rule() {
    for k in fields() {
        for r in 0..k.q() - 1 {
            let t = t_w0_matrix(&k, r).unwrap();
            let back = t_w0_matrix(&k, (k.q() - 1 - r) % (k.q() - 1)).unwrap();
            let sq = mat_mul(&k, &back, &t);
            if r == 0 {
                assert!(is_zero_matrix(&k, &mat_add(&k, &sq, &t)), "q={} r=0", k.q());
            } else {
                assert!(is_zero_matrix(&k, &sq), "q={} r={r}", k.q());
            }
        }
    }
}

#[test]
fn t_w0_on_phi_matches_coset_sum() {
    for k in fields() {
        for r in 0..k.q() - 1 {
            let t = t_w0_matrix(&k, r).unwrap();
            let ind = IndB::new(&k, r).unwrap();
            let lhs = modrep_core::linalg::mat_vec(&k, &t, &ind.phi());
            assert_eq!(lhs, t_w0_phi_by_sum(&k, r).unwrap());
        }
    }
}

#[test]
fn principal_series_u_invariants_and_borel_eigenvector() {
    for k in fields() {
        for r in 0..k.q() - 1 {
            let ind = IndB::new(&k, r).unwrap();
            assert_eq!(ind.rep.u_invariants().len(), 2);
            assert!(!ind.rep.is_irreducible().unwrap());
            let s = k.generator();
            let b = Mat2k::new(s, GfElem::ONE, GfElem::ZERO, k.inv(s).unwrap());
            let phi = ind.phi();
            let expected: Vec<GfElem> = phi.iter().map(|&x| k.mul(k.pow(s, r as i64), x)).collect();
            assert_eq!(ind.rep.act(&b, &phi), expected);
        }
    }
}

#[test]
fn classification() {
    for k in fields() {
        let all = classify_all(&k).unwrap();
        assert_eq!(all.len(), k.q() as usize);
        let mut dims: Vec<usize> = all.iter().map(|c| c.image.rep.dim()).collect();
        dims.sort();
        for c in &all {
            assert!(c.image.rep.is_irreducible().unwrap());
            assert_eq!(c.image.rep.u_invariants().len(), 1);
            let (_, r) = c.image.rep.weight_data().unwrap();
            assert_eq!(r, c.label.r);
        }
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert!(find_iso(&a.image.rep, &b.image.rep).is_none());
            }
        }
        if k.e() == 1 {
            assert_eq!(dims, (1..=k.q() as usize).collect::<Vec<_>>());
        }
    }
}

#[test]
fn sym_models_match_theta_images() {
    for k in fields() {
        for r in 1..k.q() - 1 {
            let img = theta_image(&k, r, false).unwrap();
            let sym = sym_model(&k, &digits_of(&k, r)).unwrap();
            assert!(find_iso(&img.rep, &sym).is_some(), "q={} r={r}", k.q());
        }
        let st = theta_image(&k, 0, false).unwrap();
        let top = vec![k.p() - 1; k.e() as usize];
        assert!(find_iso(&st.rep, &sym_model(&k, &top).unwrap()).is_some());
    }
}

#[test]
fn eigenvalues_of_generators() {
    for k in fields() {
        for c in classify_all(&k).unwrap() {
            let ev = t_w0_eigenvalue(&k, &c.image).unwrap();
            let expected = if c.label.r == 0 && !c.label.j { k.neg(GfElem::ONE) } else { GfElem::ZERO };
            assert_eq!(ev, expected, "q={} {}", k.q(), c.label);
        }
    }
}

#[test]
fn self_iso_is_scalar() {
    let k = GfField::new(5, 1).unwrap();
    let rep = sym_model(&k, &[3]).unwrap();
    let x = find_iso(&rep, &rep).unwrap();
    let c = x.get(0, 0);
    assert_eq!(x, modrep_core::linalg::mat_scale(&k, c, &identity(&k, 4)));
}

#[test]
fn representations_are_multiplicative() {
    let k = GfField::new(2, 2).unwrap();
    let all = Mat2k::all(&k);
    let rep = sym_model(&k, &[1, 1]).unwrap();
    for (i, g) in all.iter().enumerate().step_by(7) {
        let h = &all[(i * 13 + 5) % all.len()];
        assert!(is_multiplicative(&rep, g, h));
    }
}
