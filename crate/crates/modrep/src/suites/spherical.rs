use std::collections::BTreeSet;

use modrep_core::cind::{CIndVec, Ind, Weight};
use modrep_core::sl2::HeckeOp;
use modrep_core::smooth::isotypic_check;
use modrep_core::{GfField, Result, Sl2};
use rand::Rng;

use super::{basis_bound, capped_radius, field, join, rng, Cases};
use crate::SuiteConfig;

/// Vertices allowed in the ball used for the fixed-space count.
const BALL_BUDGET: u64 = 20_000;

pub(super) fn run(cfg: &SuiteConfig, out: &mut Cases) {
    let k = field(cfg);
    let q = k.q();
    let mut inds = Vec::new();
    for r in 0..q {
        match Weight::serre(&k, r).and_then(|w| Ind::new(Sl2::new(k.clone(), cfg.precision), w)) {
            Ok(ind) => inds.push(ind),
            Err(e) => out.check(&format!("weight/r={r}"), "§4.1", || Err(e)),
        }
    }

    for (r, ind) in inds.iter().enumerate() {
        out.check(&format!("tau-phi/r={r}"), "§4.1", || tau_phi_by_hand(&k, ind));
    }

    out.check("equivariance", "§4.1", || {
        let mut rr = rng(cfg, 0x7A0E);
        for i in 0..100 {
            let ind = &inds[i % inds.len()];
            let s = &ind.s;
            let f = ind.act(&s.sample_word(&mut rr, 3), &ind.phi())?;
            let f = f.add(&ind.act(&s.sample_word(&mut rr, 2), &ind.phi())?.scale(k.gen_pow(rr.gen_range(0..q as i64)), &k), &k);
            let g = s.sample_word(&mut rr, 4);
            if ind.tau_apply(&ind.act(&g, &f)?)? != ind.act(&g, &ind.tau_apply(&f)?)? {
                return Ok((false, format!("pair {i} (r={}) breaks equivariance", i % inds.len())));
            }
        }
        Ok((true, format!("100 pairs over {} weights", inds.len())))
    });

    let top = basis_bound(q);
    for (r, ind) in inds.iter().enumerate() {
        out.check(&format!("commutes-with-hecke/r={r}"), "§4.1", || {
            for n in -top..=top {
                let f = ind.f_basis(n)?;
                let tf = ind.tau_apply(&f)?;
                for op in HeckeOp::ALL {
                    if ind.tau_apply(&ind.right_hecke(&f, op)?)? != ind.right_hecke(&tf, op)? {
                        return Ok((false, format!("f{n} and {} do not commute", op.name())));
                    }
                }
            }
            Ok((true, format!("tau commutes with all four operators on f_n, |n| <= {top}")))
        });
    }

    let radius = capped_radius(q, cfg.radius, BALL_BUDGET);
    for (r, ind) in inds.iter().enumerate() {
        out.check(&format!("fixed-space/r={r}"), "§4.3", || {
            let dim = ind.i1_fixed_dim(radius)?;
            let mut fixed = true;
            for n in -radius..=radius {
                fixed &= ind.is_i1_fixed(&ind.f_basis(n)?)?;
            }
            let want = 2 * radius as usize + 1;
            Ok((dim == want && fixed, format!("radius {radius}: dim {dim}, span of f_n has dim {want}")))
        });
    }

    for (r, ind) in inds.iter().enumerate() {
        out.check(&format!("isotypic/r={r}"), "§4.3", || isotypic(&k, ind));
    }
}

/// `τ(φ)` summed directly over `u(A(λ))α₀⁻¹` and, for the trivial
/// weight, `ū([μ]t)α₀`.
fn tau_phi_by_hand(k: &GfField, ind: &Ind) -> Result<(bool, String)> {
    let s = &ind.s;
    let a = s.alpha0();
    let a_inv = s.inv(&a);
    let v = &ind.w.v;
    let mut sum = CIndVec::zero();
    for x in s.lifts2() {
        sum = sum.add(&ind.std_fn(&s.mul(&s.u(&x), &a_inv), v)?, k);
    }
    let s_phi = sum.clone();
    if ind.w.is_trivial() {
        for m in k.elements() {
            sum = sum.add(&ind.std_fn(&s.mul(&s.ubar(&s.mono(m, 1)), &a), v)?, k);
        }
    }
    let tphi = ind.tau_apply(&ind.phi())?;
    let classes = ind.support_classes(&tphi)?;
    let mut ok = tphi == sum && ind.check_tau_well_defined()?;
    ok &= if ind.w.is_trivial() { tphi != s_phi } else { tphi == s_phi };
    let sigma = ind.tau_sigma(&ind.phi())?;
    ok &= if ind.w.is_trivial() { sigma == tphi.add(&ind.phi(), k) } else { sigma == tphi };
    Ok((ok, format!("{} terms, support classes {{{}}}", tphi.len(), join(classes))))
}

fn isotypic(k: &GfField, ind: &Ind) -> Result<(bool, String)> {
    let m = k.q() - 1;
    let r = ind.w.r % m;
    let allowed = BTreeSet::from([r, (m - r) % m]);
    let mut seen = BTreeSet::new();
    let mut ok = true;
    for n in -2i64..=2 {
        let s = isotypic_check(ind, &ind.f_basis(n)?)?;
        ok &= s == Some(ind.w.exponent_for(n));
        if let Some(s) = s {
            seen.insert(s);
        }
    }
    ok &= seen == allowed;
    let mixed = ind.f_basis(0)?.add(&ind.f_basis(1)?, k);
    let mixed_exp = isotypic_check(ind, &mixed)?;
    ok &= if ind.w.is_degenerate() { mixed_exp == Some(r) } else { mixed_exp.is_none() };
    let empty: Vec<u32> = (0..m).filter(|s| !allowed.contains(s)).collect();
    Ok((
        ok,
        format!("characters with non-zero component {{{}}}; zero for {{{}}}", join(&seen), join(empty)),
    ))
}
