use modrep_core::smooth::{
    borel_generation, combo, is_i1_fixed, isotypic_check, s2_terms, s_operator, stable_lines, v_eta_spin,
    w0_terms_for_s2_kernel, PSVec, SOp, SmoothChar, SmoothRep, StModel, Twisted,
};
use modrep_core::{GfElem, Sl2};
use rand::Rng;

use super::principal_series::{eta_id, ps_model};
use super::supersingular::{quotient_models, ssq_zero};
use super::{basis_bound, field, rng, search_level, Cases};
use crate::SuiteConfig;

/// Borel generation spins orbits at level 2 only while `q` stays small.
const BOREL_LEVEL2_MAX_Q: u32 = 3;

pub(super) fn run(cfg: &SuiteConfig, out: &mut Cases) {
    let k = field(cfg);

    for (r, ind) in quotient_models(cfg) {
        out.check(&format!("s2-quotient/r={r}"), "§6", || {
            let ind = ind?;
            let phi = ind.phi();
            let chi = isotypic_check(&ind, &phi)?.unwrap_or(u32::MAX);
            let s2phi = s_operator(&ind, SOp::S2, &phi)?;
            let rhs = combo(&ind, &s2_terms(&ind.s, chi), &phi)?;
            let ok = !ssq_zero(&ind, &s2phi)? && ind.ssq_equal(&s2phi, &rhs, None)?.is_equal();
            Ok((ok, format!("S2.phi non-zero and equal to the chi={chi} combination in the quotient")))
        });
    }

    out.check("s-factors/f_n", "§4.2", || {
        let mut n_checked = 0;
        let top = basis_bound(k.q()).min(2);
        for (r, ind) in quotient_models(cfg) {
            let ind = ind?;
            for n in -top..=top {
                let f = ind.f_basis(n)?;
                let lhs = s_operator(&ind, SOp::S, &f)?;
                let rhs = s_operator(&ind, SOp::S1, &s_operator(&ind, SOp::S2, &f)?)?;
                if lhs != rhs || !is_i1_fixed(&ind, &lhs)? {
                    return Ok((false, format!("S != S1 S2 on f{n} for r={r}")));
                }
                n_checked += 1;
            }
        }
        Ok((true, format!("S = S1 S2 and fixedness on {n_checked} basis vectors, |n| <= {top}")))
    });

    out.check("ps-kernel-identities", "§6", || {
        let (mut s_kern, mut s2_kern) = (0, 0);
        let level = search_level(cfg, k.q());
        for eta in SmoothChar::all(&k) {
            let m = ps_model(cfg, &k, eta);
            let s = &m.s;
            let w0 = [(GfElem::ONE, s.w0())];
            let bad = |what: &str| Ok((false, format!("{what} fails for {}", eta_id(&k, &eta))));
            for v in m.operator_kernel(SOp::S, level)? {
                let Some(chi) = isotypic_check(&m, &v)? else { return bad("isotypic kernel vector") };
                let s2v = s_operator(&m, SOp::S2, &v)?;
                if !m.same(&s2v, &combo(&m, &s2_terms(s, chi), &v)?) {
                    return bad("S2 identity");
                }
                s_kern += 1;
            }
            for v in m.operator_kernel(SOp::S2, level)? {
                let Some(chi) = isotypic_check(&m, &v)? else { return bad("isotypic kernel vector") };
                if !m.combos_agree(&w0, &w0_terms_for_s2_kernel(s, chi), &v)? {
                    return bad("w0 identity on the S2 kernel");
                }
                s2_kern += 1;
            }
        }
        Ok((s_kern > 0 && s2_kern > 0, format!("{s_kern} S-kernel and {s2_kern} S2-kernel vectors at level {level}")))
    });

    out.check("borel-generation", "§6", || {
        let mut r = rng(cfg, 0xB0C1);
        let level = if k.q() <= BOREL_LEVEL2_MAX_Q { 2.min(cfg.level) } else { 1 };
        let mut tried = 0;
        for eta in SmoothChar::all(&k) {
            let m = ps_model(cfg, &k, eta);
            for _ in 0..2 {
                let w = PSVec { level, vals: (0..m.points(level)).map(|_| GfElem(r.gen_range(0..k.q()))).collect() };
                if m.is_zero(&w) {
                    continue;
                }
                tried += 1;
                if !borel_generation(&m, &w)? {
                    return Ok((false, format!("orbit misses the fixed vectors for {}", eta_id(&k, &eta))));
                }
            }
        }
        Ok((true, format!("{tried} random vectors up to level {level}")))
    });

    out.check("stable-lines", "§5", || {
        let mut notes = Vec::new();
        for eta in SmoothChar::all(&k) {
            let m = ps_model(cfg, &k, eta);
            let (lines, fixed) = stable_lines(&m, 1)?;
            if !fixed || lines != usize::from(eta.is_trivial()) {
                return Ok((false, format!("{} has {lines} stable lines, fixed {fixed}", eta_id(&k, &eta))));
            }
            if lines > 0 {
                notes.push(eta_id(&k, &eta));
            }
        }
        Ok((true, format!("B-stable lines only for {}; each fixed by G generators", notes.join(","))))
    });

    out.check("steinberg-lift", "§5", || {
        let mut r = rng(cfg, 0x57E1);
        let st = StModel::new(Sl2::new(k.clone(), cfg.precision.min(4 * cfg.level as i64 + 4)), cfg.level);
        for lvl in 1..=2.min(cfg.level) {
            for _ in 0..10 {
                let f = PSVec { level: lvl, vals: (0..st.ps.points(lvl)).map(|_| GfElem(r.gen_range(0..k.q()))).collect() };
                let shifted = st.ps.add(&f, &st.ps.scale(k.gen_pow(1), &st.ps.constant(lvl)));
                let lift = st.lift_to_v1(&f);
                if !st.same(&f, &shifted) || !st.ps.v_eta_membership(&lift) || lift != st.lift_to_v1(&shifted) {
                    return Ok((false, format!("lift not unique at level {lvl}")));
                }
            }
        }
        for v in st.ps.i1_fixed_basis(2.min(cfg.level))? {
            if !is_i1_fixed(&st, &st.canonical(&v))? {
                return Ok((false, "fixed vector not fixed in the quotient".into()));
            }
        }
        Ok((true, "unique V_1 lifts of St vectors at levels 1..2".into()))
    });

    out.check("alpha-twist", "§6", || {
        let mut r = rng(cfg, 0xA175);
        let tw = Twisted(ps_model(&crate::SuiteConfig { level: cfg.level.max(6), ..cfg.clone() }, &k, SmoothChar::trivial()));
        for _ in 0..20 {
            let f = PSVec { level: 1, vals: (0..tw.0.points(1)).map(|_| GfElem(r.gen_range(0..k.q()))).collect() };
            let g = tw.0.s.sample_k0(&mut r);
            let h = tw.0.s.sample_k0(&mut r);
            let lhs = tw.act(&g, &tw.act(&h, &f)?)?;
            if !tw.same(&lhs, &tw.act(&tw.0.s.mul(&g, &h), &f)?) {
                return Ok((false, "twisted action is not a group action".into()));
            }
        }
        Ok((true, "20 sampled products of the alpha-twisted action".into()))
    });

    out.check("v-eta-spin", "§5", || {
        let level = 2.min(cfg.level);
        for eta in SmoothChar::all(&k) {
            let (got, full) = v_eta_spin(&ps_model(cfg, &k, eta), level)?;
            if got != full {
                return Ok((false, format!("{} spins to {got} of {full}", eta_id(&k, &eta))));
            }
        }
        Ok((true, format!("B-span of l2 fills V_eta at level {level} for all tame eta")))
    });
}
