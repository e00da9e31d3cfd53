use modrep_core::cind::CIndVec;
use modrep_core::finrep::sym_label;
use modrep_core::linalg::Field;
use modrep_core::smooth::{
    isotypic_check, k0_weight_of, proportion, ps_transport, s_operator, transport_eval, PSVec, PsModel, SOp,
    SmoothChar, SmoothRep, WeightOf,
};
use modrep_core::{GfElem, GfField, Result, Sl2};
use rand::Rng;

use super::{field, rng, Cases};
use crate::SuiteConfig;

/// Working precision for principal-series models: enough for level `M`
/// witnesses, lower than `N` so level-raising actions stay cheap.
pub(crate) fn ps_model(cfg: &SuiteConfig, k: &GfField, eta: SmoothChar) -> PsModel {
    let prec = cfg.precision.min(4 * cfg.level as i64 + 4);
    PsModel::new(Sl2::new(k.clone(), prec), eta, cfg.level)
}

pub(crate) fn eta_id(k: &GfField, eta: &SmoothChar) -> String {
    format!("eta=({},{})", eta.r, k.format_elem(eta.at_uniformizer))
}

fn random_vec(m: &PsModel, level: u32, r: &mut impl Rng) -> PSVec {
    let q = m.s.q();
    PSVec { level, vals: (0..m.points(level)).map(|_| GfElem(r.gen_range(0..q))).collect() }
}

pub(super) fn run(cfg: &SuiteConfig, out: &mut Cases) {
    let k = field(cfg);
    for eta in SmoothChar::all(&k) {
        let m = ps_model(cfg, &k, eta);
        let id = eta_id(&k, &eta);
        out.check(&format!("basics/{id}"), "§5", || basics(&k, &m));
        out.check(&format!("s-eigen/{id}"), "§5", || {
            let (_, l2) = m.ps_basics();
            let sl2 = s_operator(&m, SOp::S, &l2)?;
            let want = eta.at_alpha0(&k);
            let c = proportion(&m, &sl2, &l2);
            let at_id = m.eval(&sl2, &m.s.identity())?;
            let composed = s_operator(&m, SOp::S1, &s_operator(&m, SOp::S2, &l2)?)?;
            let ok = c == Some(want) && at_id.is_zero() && m.v_eta_membership(&sl2) && m.same(&composed, &sl2);
            let shown = c.map_or("-".into(), |c| k.format_elem(c));
            Ok((
                ok,
                format!(
                    "q={} r={} eta(w)={} coeff={shown} eta(a0)={}",
                    k.q(),
                    eta.r,
                    k.format_elem(eta.at_uniformizer),
                    k.format_elem(want)
                ),
            ))
        });
        out.check(&format!("weight/{id}"), "§5", || {
            let (_, l2) = m.ps_basics();
            let sl2 = s_operator(&m, SOp::S, &l2)?;
            Ok(match k0_weight_of(&m, &sl2)? {
                WeightOf::Weight(w) => (w != sym_label(&k, 0), format!("K0-span of S.l2 is the weight {w}")),
                other => (false, format!("K0-span of S.l2 is {other:?}")),
            })
        });
        out.check(&format!("kernel/{id}"), "§5", || {
            let (_, l2) = m.ps_basics();
            let kern = m.operator_kernel(SOp::S, 1)?;
            let ok = kern.len() == 1 && proportion(&m, &kern[0], &l2).is_none();
            Ok((ok, format!("level-1 kernel of S has dim {}, meets the l2 line trivially", kern.len())))
        });
        out.check(&format!("transport/{id}"), "§5", || transport(cfg, &k, &m, eta));
    }

    out.check("group-law", "§2.1", || {
        let mut r = rng(cfg, 0x6A0E);
        let etas = SmoothChar::all(&k);
        let mut tried = 0;
        for _ in 0..40 {
            let m = ps_model(cfg, &k, etas[r.gen_range(0..etas.len())]);
            let f = random_vec(&m, 1, &mut r);
            let g = m.s.sample_k0(&mut r);
            let h = m.s.sample_word(&mut r, 1);
            if h.cartan() <= 1 {
                tried += 1;
                let lhs = m.act(&g, &m.act(&h, &f)?)?;
                if !m.same(&lhs, &m.act(&m.s.mul(&g, &h), &f)?) {
                    return Ok((false, "(gh).f differs from g.(h.f)".into()));
                }
            }
            let deep = m.s.u(&m.s.mono(GfElem::ONE, 1));
            if !m.same(&m.act(&deep, &f)?, &f) {
                return Ok((false, "K0(1) moves a level-1 vector".into()));
            }
        }
        Ok((true, format!("{tried} sampled products; K0(1) fixes level-1 vectors")))
    });

    out.check("cocycle", "§2.1", || {
        let mut r = rng(cfg, 0xC0C1);
        let etas = SmoothChar::all(&k);
        for _ in 0..60 {
            let eta = etas[r.gen_range(0..etas.len())];
            let m = ps_model(cfg, &k, eta);
            let f = random_vec(&m, 2, &mut r);
            let b = m.s.sample_borel(&mut r);
            let x = m.s.sample_k0(&mut r);
            let lhs = m.eval(&f, &m.s.mul(&b, &x))?;
            if lhs != k.mul(eta.eval(&k, &b.a)?, m.eval(&f, &x)?) {
                return Ok((false, format!("f(bx) != eta(b)f(x) for {}", b.format(&k))));
            }
        }
        Ok((true, "60 samples of f(bx) = eta(b) f(x)".into()))
    });
}

fn basics(k: &GfField, m: &PsModel) -> Result<(bool, String)> {
    let (l1, l2) = m.ps_basics();
    let s = &m.s;
    let (id, beta0) = (s.identity(), s.beta0());
    let mut ok = m.eval(&l1, &id)? == GfElem::ONE
        && m.eval(&l1, &beta0)?.is_zero()
        && m.eval(&l2, &beta0)? == GfElem::ONE
        && m.eval(&l2, &id)?.is_zero()
        && m.v_eta_membership(&l2)
        && !m.v_eta_membership(&l1);
    let dims: Vec<usize> = (1..=m.cap.min(3)).map(|lvl| m.i1_fixed_basis(lvl).map(|b| b.len())).collect::<Result<_>>()?;
    ok &= dims.iter().all(|&d| d == 2);
    let (plus, minus) = (isotypic_check(m, &l1)?, isotypic_check(m, &l2)?);
    ok &= plus == Some(m.eta.plus(k)) && minus == Some(m.eta.minus(k));
    if m.eta.is_trivial() {
        ok &= m.same(&m.add(&l1, &l2), &m.constant(1));
    }
    Ok((ok, format!("fixed dims by level {dims:?}; l1 exponent {plus:?}, l2 exponent {minus:?}")))
}

/// `Ψ∘(τ_σ − η(α₀))` vanishes: exactly on `[1, e_i]`, which suffices by
/// equivariance, and pointwise on sampled radius-3 standard functions.
fn transport(cfg: &SuiteConfig, k: &GfField, m: &PsModel, eta: SmoothChar) -> Result<(bool, String)> {
    let (ind, tr) = ps_transport(m)?;
    let c = eta.at_alpha0(k);
    let d = ind.dim();
    for i in 0..d {
        let mut e = vec![GfElem::ZERO; d];
        e[i] = GfElem::ONE;
        let g = ind.std_fn(&ind.s.identity(), &e)?;
        let rel = ind.tau_sigma(&g)?.sub(&g.scale(c, k), k);
        if !m.is_zero(&tr.apply(&ind, m, &rel)?) {
            return Ok((false, format!("relation survives on basis vector {i}")));
        }
    }
    if m.is_zero(&tr.apply(&ind, m, &ind.phi())?) {
        return Ok((false, "transport kills phi".into()));
    }
    let mut r = rng(cfg, 0x7E45 ^ ((eta.r as u64) << 8) ^ eta.at_uniformizer.0 as u64);
    let ball = ind.ball(3.min(cfg.radius));
    let samples = 12;
    for _ in 0..samples {
        let v = &ball[r.gen_range(0..ball.len())];
        let x: Vec<GfElem> = (0..d).map(|_| GfElem(r.gen_range(0..k.q()))).collect();
        let mut f = CIndVec::zero();
        f.add_term(k, v.clone(), &x);
        let f = if f.is_zero() { ind.phi() } else { f };
        let rel = ind.tau_sigma(&f)?.sub(&f.scale(c, k), k);
        for _ in 0..6 {
            let y = m.s.sample_k0(&mut r);
            if !transport_eval(m, &ind, &tr, &rel, &y)?.is_zero() {
                return Ok((false, format!("relation survives at a vertex of radius {}", v.radius())));
            }
        }
    }
    Ok((true, format!("sigma of dim {d}; exact on generators, {samples} radius<=3 inputs at 6 points each")))
}
