use modrep_core::cind::{CIndVec, Ind, SsqOutcome, Weight};
use modrep_core::smooth::{combo, w0_relation_terms, s_operator, SOp, SmoothChar, SmoothRep};
use modrep_core::{Result, Sl2};

use super::principal_series::{eta_id, ps_model};
use super::{field, search_level, Cases};
use crate::SuiteConfig;

/// Largest power of `𝒮` tried before declaring a vector non-nilpotent.
const MAX_POWER: usize = 4;

pub(crate) fn quotient_models(cfg: &SuiteConfig) -> Vec<(u32, Result<Ind>)> {
    let k = field(cfg);
    (1..k.q())
        .map(|r| (r, Weight::serre(&k, r).and_then(|w| Ind::new(Sl2::new(k.clone(), cfg.precision), w))))
        .collect()
}

pub(crate) fn ssq_zero(ind: &Ind, f: &CIndVec) -> Result<bool> {
    Ok(ind.ssq_equal(f, &CIndVec::zero(), None)?.is_equal())
}

pub(super) fn run(cfg: &SuiteConfig, out: &mut Cases) {
    for (r, ind) in quotient_models(cfg) {
        let ind = match ind {
            Ok(ind) => ind,
            Err(e) => {
                out.check(&format!("weight/r={r}"), "§6", || Err(e));
                continue;
            }
        };
        let phi = ind.phi();
        out.check(&format!("s-kills-phi/r={r}"), "§6", || {
            let sphi = s_operator(&ind, SOp::S, &phi)?;
            Ok(match ind.ssq_equal(&sphi, &CIndVec::zero(), None)? {
                SsqOutcome::Equal(w) => (true, format!("S.phi = tau_sigma(h) with h of {} terms", w.len())),
                SsqOutcome::NotEqual => (false, "S.phi is not in the image of tau_sigma".into()),
            })
        });
        out.check(&format!("phi-nonzero/r={r}"), "§6", || {
            let at = ind.ssq_equal(&phi, &CIndVec::zero(), None)?;
            let wider = ind.ssq_equal(&phi, &CIndVec::zero(), Some(1))?;
            let ok = at == SsqOutcome::NotEqual && wider == SsqOutcome::NotEqual;
            Ok((ok, "phi not in tau_sigma(ind) at search radius 0 and 1".into()))
        });
        out.check(&format!("nilpotence/r={r}"), "§6", || {
            let mut powers = Vec::new();
            for n in -2i64..=2 {
                let mut v = ind.f_basis(n)?;
                let mut hit = None;
                for j in 0..=MAX_POWER {
                    if ssq_zero(&ind, &v)? {
                        hit = Some(j);
                        break;
                    }
                    v = s_operator(&ind, SOp::S, &v)?;
                }
                match hit {
                    Some(j) => powers.push(format!("f{n}:{j}")),
                    None => return Ok((false, format!("S^j f{n} non-zero for j <= {MAX_POWER}"))),
                }
            }
            Ok((true, format!("least j with S^j f_n = 0: {}", powers.join(" "))))
        });
        out.check(&format!("w0-relation/r={r}"), "§6", || {
            let s = &ind.s;
            let lhs = ind.act(&s.w0(), &phi)?;
            let rhs = combo(&ind, &w0_relation_terms(s)?, &phi)?;
            Ok((ind.ssq_equal(&lhs, &rhs, None)?.is_equal(), "w0.phi = -sum B_l.phi in the quotient".into()))
        });
    }

    let k = field(cfg);
    out.check("w0-relation-ps-kernels", "§6", || {
        let mut count = 0;
        let level = search_level(cfg, k.q());
        for eta in SmoothChar::all(&k) {
            let m = ps_model(cfg, &k, eta);
            let s = &m.s;
            let w0 = [(modrep_core::GfElem::ONE, s.w0())];
            let terms = w0_relation_terms(s)?;
            for v in m.operator_kernel(SOp::S, level)? {
                if m.is_zero(&v) {
                    continue;
                }
                count += 1;
                if !m.combos_agree(&w0, &terms, &v)? {
                    return Ok((false, format!("identity fails on a kernel vector for {}", eta_id(&k, &eta))));
                }
            }
        }
        Ok((count > 0, format!("{count} kernel vectors of S at level {level} over all tame eta")))
    });
}
