use std::collections::{BTreeMap, BTreeSet, VecDeque};

use modrep_core::cind::{Ind, IwVec, Weight};
use modrep_core::sl2::HeckeOp;
use modrep_core::{GfElem, GfField, Result, Sl2};

use super::{field, join, Cases};
use crate::{Case, SuiteConfig};

/// Explicit `ind` computations are used for `q ≤ 3`; above that only the
/// coefficient path runs except for the `|n| ≤ 2` cross-check.
const EXPLICIT_Q: u32 = 3;

pub(super) fn run(cfg: &SuiteConfig, out: &mut Cases) {
    let k = field(cfg);
    for r in 0..k.q() {
        let ind = match Weight::serre(&k, r).and_then(|w| Ind::new(Sl2::new(k.clone(), cfg.precision), w)) {
            Ok(ind) => ind,
            Err(e) => {
                out.check(&format!("weight/r={r}"), "§4.3", || Err(e));
                continue;
            }
        };
        if ind.w.is_degenerate() {
            degenerate(cfg, &ind, r, out);
        } else {
            non_degenerate(cfg, &ind, r, out);
        }
        out.check(&format!("cross-check/r={r}"), "§4.3", || cross_check(&ind));
    }
    out.check("quotient-summands", "§4.2", || {
        let s = Sl2::new(k.clone(), cfg.precision);
        let q = k.q() as usize;
        let sizes: Vec<usize> = HeckeOp::ALL.iter().map(|&op| s.hecke_summands(op).len()).collect();
        Ok((sizes == [q, q, q * q, q * q], format!("summand counts [{}]", join(&sizes))))
    });
    ladder(cfg, out);
}

fn basis(n: i64) -> IwVec {
    IwVec::from([(n, GfElem::ONE)])
}

/// `f_n | op` as coefficients, explicitly for small `q`.
fn apply(ind: &Ind, n: i64, op: HeckeOp, explicit: bool) -> Result<IwVec> {
    if explicit {
        let f = ind.f_basis(n)?;
        ind.cind_to_iw(&ind.right_hecke(&f, op)?, true)
    } else {
        ind.right_hecke_iw(&basis(n), op)
    }
}

fn show(k: &GfField, v: &IwVec) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = v.iter().map(|(n, c)| format!("{}*f{n}", k.format_elem(*c))).collect();
    terms.join("+")
}

/// Scalar `c` with `v = c·f_n`, or `None` when `v` leaves that line.
fn scalar_on(v: &IwVec, n: i64) -> Option<GfElem> {
    match v.len() {
        0 => Some(GfElem::ZERO),
        1 => v.get(&n).copied(),
        _ => None,
    }
}

fn degenerate(cfg: &SuiteConfig, ind: &Ind, r: u32, out: &mut Cases) {
    let k = ind.field().clone();
    let explicit = k.q() <= EXPLICIT_Q;
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    for n in 0..=cfg.radius {
        out.check(&format!("deg/r={r}/n={n}"), "§4.3", || {
            let mut ok = true;
            let mut notes = Vec::new();
            let t1 = apply(ind, -n, HeckeOp::W0, explicit)?;
            match scalar_on(&t1, -n) {
                Some(c) => {
                    a.insert(-n, c);
                }
                None => ok = false,
            }
            notes.push(format!("f{}|T_w0={}", -n, show(&k, &t1)));
            let t2 = apply(ind, -n, HeckeOp::W0InvAlpha0Inv, explicit)?;
            ok &= t2 == basis(n + 1);
            notes.push(format!("f{}|T2={}", -n, show(&k, &t2)));
            if n >= 1 {
                let t3 = apply(ind, n, HeckeOp::W0, explicit)?;
                ok &= t3 == basis(-n);
                notes.push(format!("f{n}|T_w0={}", show(&k, &t3)));
                let t4 = apply(ind, n, HeckeOp::W0InvAlpha0Inv, explicit)?;
                match scalar_on(&t4, n) {
                    Some(c) => {
                        b.insert(n, c);
                    }
                    None => ok = false,
                }
                notes.push(format!("f{n}|T2={}", show(&k, &t4)));
            }
            Ok((ok, notes.join(" ")))
        });
    }
    let fmt = |m: &BTreeMap<i64, GfElem>| join(m.values().map(|c| k.format_elem(*c)));
    let complete = a.len() == cfg.radius as usize + 1 && b.len() == cfg.radius as usize;
    let details = format!(
        "a[0..-{R}]=[{}] b[1..{R}]=[{}]",
        join(a.iter().rev().map(|(_, c)| k.format_elem(*c))),
        fmt(&b),
        R = cfg.radius
    );
    out.check(&format!("scalars/r={r}"), "§4.3", || Ok((complete, details)));
}

fn non_degenerate(cfg: &SuiteConfig, ind: &Ind, r: u32, out: &mut Cases) {
    let k = ind.field().clone();
    let explicit = k.q() <= EXPLICIT_Q;
    for n in 0..=cfg.radius {
        out.check(&format!("nondeg/r={r}/n={n}"), "§4.3", || {
            let mut ok = true;
            let mut notes = Vec::new();
            let t1 = apply(ind, -n, HeckeOp::Alpha0Inv, explicit)?;
            ok &= t1.is_empty();
            notes.push(format!("f{}|T_a0^-1={}", -n, show(&k, &t1)));
            let t2 = apply(ind, -n, HeckeOp::Alpha0, explicit)?;
            ok &= t2 == basis(-(n + 1));
            notes.push(format!("f{}|T_a0={}", -n, show(&k, &t2)));
            if n >= 1 {
                let t3 = apply(ind, n, HeckeOp::Alpha0, explicit)?;
                ok &= t3.is_empty();
                notes.push(format!("f{n}|T_a0={}", show(&k, &t3)));
                let t4 = apply(ind, n, HeckeOp::Alpha0Inv, explicit)?;
                ok &= t4 == basis(n + 1);
                notes.push(format!("f{n}|T_a0^-1={}", show(&k, &t4)));
            }
            Ok((ok, notes.join(" ")))
        });
    }
}

/// Explicit coset sums against the coefficient path for `|n| ≤ 2`.
fn cross_check(ind: &Ind) -> Result<(bool, String)> {
    let ops: &[HeckeOp] = if ind.w.is_degenerate() {
        &[HeckeOp::W0, HeckeOp::W0InvAlpha0Inv]
    } else {
        &[HeckeOp::Alpha0, HeckeOp::Alpha0Inv]
    };
    let mut count = 0;
    for n in -2i64..=2 {
        for &op in ops {
            if apply(ind, n, op, true)? != apply(ind, n, op, false)? {
                return Ok((false, format!("f{n}|{} differs between explicit and coefficient paths", op.name())));
            }
            count += 1;
        }
    }
    Ok((true, format!("{count} products agree")))
}

/// The two operators alternated by the ladder for a weight.
fn ladder_ops(degenerate: bool) -> [HeckeOp; 2] {
    if degenerate {
        [HeckeOp::W0, HeckeOp::W0InvAlpha0Inv]
    } else {
        [HeckeOp::Alpha0, HeckeOp::Alpha0Inv]
    }
}

/// Indices a ladder from `f_n` must miss, inside `|m| ≤ bound`.
fn predicted_window(degenerate: bool, n: i64, bound: i64) -> BTreeSet<i64> {
    let range: Box<dyn Fn(i64) -> bool> = match (degenerate, n > 0) {
        (true, true) => Box::new(move |m| -n < m && m < n),
        (true, false) => Box::new(move |m| n < m && m <= -n),
        (false, false) => Box::new(move |m| m > n),
        (false, true) => Box::new(move |m| m < n),
    };
    (-bound..=bound).filter(|&m| range(m)).collect()
}

/// Basis indices reached from `f_n` by words in the two operators,
/// truncated at `|m| ≤ bound`.
fn reach(ind: &Ind, n: i64, ops: [HeckeOp; 2], bound: i64) -> Result<BTreeSet<i64>> {
    let mut seen = BTreeSet::from([n]);
    let mut queue = VecDeque::from([n]);
    while let Some(m) = queue.pop_front() {
        for op in ops {
            for (&j, c) in &ind.right_hecke_iw(&basis(m), op)? {
                if !c.is_zero() && j.abs() <= bound && seen.insert(j) {
                    queue.push_back(j);
                }
            }
        }
    }
    Ok(seen)
}

fn ladder(cfg: &SuiteConfig, out: &mut Cases) {
    let k = field(cfg);
    let bound = 2 * cfg.radius;
    for r in 0..k.q() {
        out.check(&format!("ladder/r={r}"), "§4.4", || {
            let ind = Ind::new(Sl2::new(k.clone(), cfg.precision), Weight::serre(&k, r)?)?;
            let deg = ind.w.is_degenerate();
            let ops = ladder_ops(deg);
            let mut notes = Vec::new();
            let mut ok = true;
            for n in -2i64..=2 {
                let got = reach(&ind, n, ops, bound)?;
                let missed: BTreeSet<i64> = (-bound..=bound).filter(|m| !got.contains(m)).collect();
                let want = predicted_window(deg, n, bound);
                ok &= missed == want;
                notes.push(format!("f{n}:miss{{{}}}", join(&missed)));
            }
            Ok((ok, format!("{} via {}/{}; {}", if deg { "degenerate" } else { "non-degenerate" }, ops[0].name(), ops[1].name(), notes.join(" "))))
        });
    }
}

/// Ladder cases alone, for timing the ladder separately.
pub fn ladder_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let mut out = Cases::new("iwahori-hecke");
    ladder(cfg, &mut out);
    out.into_cases()
}
