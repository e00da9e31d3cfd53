use modrep_core::fields::lift_a;
use modrep_core::sl2::{BorelSide, HeckeOp, SubgroupId};
use modrep_core::{GfElem, LSeries, Mat2, Sl2};

use super::{field, rng, Cases};
use crate::SuiteConfig;

/// One membership family: elements with the class the split predicts and
/// the set of classes the containment allows.
struct Family {
    id: &'static str,
    rows: Vec<(Mat2, i64, Vec<i64>)>,
}

pub(super) fn run(cfg: &SuiteConfig, out: &mut Cases) {
    let s = Sl2::new(field(cfg), cfg.precision);

    out.check("sampled-classes", "§4.3", || {
        let mut r = rng(cfg, 0xC05E);
        let mut hist = [0usize; 3];
        for _ in 0..200 {
            let g = s.sample_word(&mut r, 6);
            let c = s.kgi_class(&g)?;
            if c.n.abs() != g.cartan() {
                return Ok((false, format!("Cartan mismatch at {}", g.format(&s.k))));
            }
            let back = s.prod(&[&c.k, &s.alpha0_pow(-c.n), &c.i]);
            if !back.approx_eq(&g, &s.k) {
                return Ok((false, format!("witness fails at {}", g.format(&s.k))));
            }
            let k = s.sample_k0(&mut r);
            let i = s.sample_i1(&mut r);
            if s.kgi_class(&s.prod(&[&k, &g, &i]))?.n != c.n {
                return Ok((false, format!("class moves under K0 x I(1) at {}", g.format(&s.k))));
            }
            hist[(c.n.signum() + 1) as usize] += 1;
        }
        Ok((true, format!("200 samples; classes <0:{} =0:{} >0:{}", hist[0], hist[1], hist[2])))
    });

    out.check("borel-sides", "§5", || {
        let mut r = rng(cfg, 0xB0E1);
        let (mut plain, mut beta) = (0, 0);
        for _ in 0..200 {
            let g = s.sample_word(&mut r, 6);
            let c = s.borel_class(&g)?;
            let b = s.sample_borel(&mut r);
            let j = s.sample_i1(&mut r);
            if !s.member(&c.b, SubgroupId::BS)? || s.borel_class(&s.prod(&[&b, &g, &j]))?.side != c.side {
                return Ok((false, format!("side not invariant at {}", g.format(&s.k))));
            }
            match c.side {
                BorelSide::Plain => plain += 1,
                BorelSide::Beta0 => beta += 1,
            }
        }
        Ok((plain > 0 && beta > 0, format!("200 samples; plain {plain}, beta0 {beta}")))
    });

    for fam in families(&s) {
        out.check(&format!("membership/{}", fam.id), "§4.3", || {
            let mut seen = std::collections::BTreeSet::new();
            for (g, want, allowed) in &fam.rows {
                let n = s.kgi_class(g)?.n;
                seen.insert(n);
                if n != *want || !allowed.contains(&n) {
                    return Ok((false, format!("{} has class {n}, expected {want}", g.format(&s.k))));
                }
            }
            let classes: Vec<String> = seen.iter().map(|n| n.to_string()).collect();
            Ok((true, format!("{} elements, classes {{{}}}", fam.rows.len(), classes.join(","))))
        });
    }

    out.check("quotient-sizes", "§4.2", || {
        let q = s.q() as usize;
        let mut sizes = Vec::new();
        for (op, want) in [(HeckeOp::W0, q), (HeckeOp::Alpha0, q * q)] {
            let (g, reps) = s.hecke_cosets(op);
            let ginv = s.inv(&g);
            for (a, ra) in reps.iter().enumerate() {
                for rb in &reps[a + 1..] {
                    if s.member(&s.prod(&[&g, &s.inv(ra), rb, &ginv]), SubgroupId::IS1)? {
                        return Ok((false, format!("{} has coincident cosets", op.name())));
                    }
                }
            }
            if reps.len() != want {
                return Ok((false, format!("{} has {} cosets, expected {want}", op.name(), reps.len())));
            }
            sizes.push(format!("{}:{}", op.name(), reps.len()));
        }
        for (op, want) in [(HeckeOp::W0, q), (HeckeOp::W0InvAlpha0Inv, q), (HeckeOp::Alpha0, q * q), (HeckeOp::Alpha0Inv, q * q)]
        {
            if s.hecke_summands(op).len() != want {
                return Ok((false, format!("{} has the wrong number of summands", op.name())));
            }
        }
        Ok((true, format!("pairwise distinct cosets {}", sizes.join(" "))))
    });

    out.check("alpha-conjugate", "§2.2", || {
        let mut r = rng(cfg, 0xA1FA);
        for _ in 0..100 {
            let k = s.sample_k0(&mut r);
            if !s.member(&s.alpha_conjugate(&k), SubgroupId::K1)? {
                return Ok((false, format!("conjugate of {} not in K1", k.format(&s.k))));
            }
            let g = s.sample_word(&mut r, 4);
            let h = s.sample_word(&mut r, 4);
            let lhs = s.alpha_conjugate(&s.mul(&g, &h));
            if !lhs.approx_eq(&s.mul(&s.alpha_conjugate(&g), &s.alpha_conjugate(&h)), &s.k) {
                return Ok((false, "conjugation is not multiplicative".into()));
            }
        }
        Ok((true, "100 samples of K0 land in K1; conjugation multiplicative".into()))
    });

    out.check("iwahori-factor", "§2.2", || {
        let mut r = rng(cfg, 0x1AE0);
        for _ in 0..100 {
            let g = s.sample_i1(&mut r);
            let f = s.iwahori_factor(&g)?;
            let ok = s.iwahori_product(&f)?.approx_eq(&g, &s.k)
                && f.x.val_bound() >= 0
                && f.z.val_bound() >= 1
                && f.delta.sub(&s.one(), &s.k).val_bound() >= 1;
            if !ok {
                return Ok((false, format!("factorization of {} fails", g.format(&s.k))));
            }
        }
        Ok((s.iwahori_factor(&s.w0()).is_err(), "100 samples of I(1) factor and multiply back; w0 rejected".into()))
    });
}

/// Sample entries of `O` of valuation 0, 1 and 2, including
/// Teichmüller lifts and two-digit lifts with non-trivial tails.
fn sample_o(s: &Sl2) -> Vec<LSeries> {
    let k = &s.k;
    let mut out = Vec::new();
    for v in 0..3 {
        for l in k.units() {
            out.push(s.mono(l, v));
            let tail = lift_a(&[GfElem::ZERO, l], s.prec).shift(1);
            out.push(s.mono(l, v).add(&tail.shift(v), k));
        }
    }
    out
}

fn lifts_nonzero(s: &Sl2) -> Vec<LSeries> {
    s.lifts2().into_iter().filter(|a| !a.is_zero()).collect()
}

fn families(s: &Sl2) -> Vec<Family> {
    let a = |n: i64| s.alpha0_pow(n);
    let w0 = s.w0();
    let teich: Vec<LSeries> = s.k.units().map(|l| s.cst(l)).collect();
    let val = |x: &LSeries| x.valuation().unwrap_or(i64::MAX);
    let mut fams = Vec::new();

    let mut rows = Vec::new();
    for n in 1..=3 {
        for l in &teich {
            rows.push((s.prod(&[&a(n), &s.u(l), &w0]), -n, vec![-n]));
        }
    }
    fams.push(Family { id: "a0^n.u(l).w0", rows });

    let mut rows = Vec::new();
    for n in 1..=3 {
        for x in sample_o(s).into_iter().chain([s.zero()]) {
            let want = if val(&x) == 0 { -n } else { n };
            rows.push((s.prod(&[&a(n), &s.u(&x), &w0]), want, vec![-n, n]));
        }
    }
    fams.push(Family { id: "a0^n.u(x).w0", rows });

    let mut rows = Vec::new();
    for n in 0..=3 {
        for l in s.k.units() {
            rows.push((s.prod(&[&a(-(n + 1)), &s.ubar(&s.mono(l, 1)), &a(1), &w0]), n + 1, vec![n + 1]));
        }
    }
    fams.push(Family { id: "a0^-(n+1).ubar(mt).a0.w0", rows });

    let mut rows = Vec::new();
    for n in 1..=3 {
        for x in sample_o(s).into_iter().filter(|x| val(x) >= 1).chain([s.zero()]) {
            let want = if val(&x) == 1 { n } else { -(n - 1) };
            rows.push((s.prod(&[&a(n), &s.u(&x), &a(-1)]), want, vec![n, -(n - 1)]));
        }
    }
    fams.push(Family { id: "a0^n.u(x).a0^-1,x-in-p", rows });

    let mut rows = Vec::new();
    for n in 1..=3 {
        for x in sample_o(s).into_iter().chain([s.zero()]) {
            let want = match val(&x) {
                0 => n + 1,
                1 => n,
                _ => -(n - 1),
            };
            rows.push((s.prod(&[&a(n), &s.u(&x), &a(-1)]), want, vec![n + 1, n, -(n - 1)]));
        }
    }
    fams.push(Family { id: "a0^n.u(a).a0^-1", rows });

    let mut rows = Vec::new();
    for n in 0..=3 {
        for x in lifts_nonzero(s) {
            let want = if val(&x) == 0 { n + 2 } else { n + 1 };
            rows.push((s.prod(&[&a(n + 1), &s.u(&x), &a(-1)]), want, vec![n + 1, n + 2]));
        }
    }
    fams.push(Family { id: "a0^(n+1).u(A).a0^-1", rows });

    let mut rows = Vec::new();
    for n in 1..=3 {
        for x in s.lifts2() {
            rows.push((s.prod(&[&a(n - 1), &s.ubar(&x.shift(1)), &a(1)]), -n, vec![-n]));
        }
    }
    fams.push(Family { id: "a0^(n-1).ubar(tA).a0", rows });

    let mut rows = Vec::new();
    for n in 1..=3 {
        for x in lifts_nonzero(s) {
            let want = if val(&x) == 0 { -(n + 1) } else { -n };
            rows.push((s.prod(&[&a(-(n + 1)), &s.ubar(&x.shift(1)), &a(1)]), want, vec![-n, -(n + 1)]));
        }
    }
    fams.push(Family { id: "a0^-(n+1).ubar(tA).a0", rows });

    fams
}
