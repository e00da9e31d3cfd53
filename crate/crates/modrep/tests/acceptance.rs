//! One line per acceptance criterion; exits non-zero if any is red.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use modrep::{ladder_cases, run_suite, Case, Report, Status, SuiteConfig};

const GOLDEN_SCALARS: &str = include_str!("golden/ih_scalars.json");

fn cfg(p: u32, e: u32) -> SuiteConfig {
    SuiteConfig { p, e, ..SuiteConfig::default() }
}

/// Fields by size: q = 2, 3, 4, 5, 7.
fn field_of(q: u32) -> (u32, u32) {
    match q {
        4 => (2, 2),
        q => (q, 1),
    }
}

fn run(suite: &str, q: u32) -> Result<Report, String> {
    let (p, e) = field_of(q);
    run_suite(suite, &cfg(p, e)).map_err(|err| format!("{suite} q={q}: {err}"))
}

fn all_pass(cases: &[Case], what: &str) -> Result<(), String> {
    match cases.iter().find(|c| c.status != Status::Pass) {
        Some(c) => Err(format!("{what}: {} {:?}: {}", c.id, c.status, c.details)),
        None => Ok(()),
    }
}

fn count(report: &Report, prefix: &str) -> usize {
    report.cases.iter().filter(|c| c.id.starts_with(prefix)).count()
}

fn carter_lusztig() -> Result<String, String> {
    let mut total = 0;
    for q in [2, 3, 4, 5, 7] {
        let r = run("carter-lusztig", q)?;
        all_pass(&r.cases, &format!("q={q}"))?;
        total += r.cases.len();
    }
    Ok(format!("{total} cases over q in {{2,3,4,5,7}}"))
}

fn cosets() -> Result<String, String> {
    let r = run("cosets", 3)?;
    all_pass(&r.cases, "q=3")?;
    let sampled = r.case("cosets/sampled-classes").ok_or("no sampled-classes case")?;
    if !sampled.details.starts_with("200 ") {
        return Err(format!("sampled-classes: {}", sampled.details));
    }
    let families = count(&r, "cosets/membership/");
    if families != 8 {
        return Err(format!("{families} membership families, want 8"));
    }
    Ok("200 samples, 8 membership families".into())
}

fn iwahori_hecke() -> Result<String, String> {
    let golden: BTreeMap<String, BTreeMap<String, String>> =
        serde_json::from_str(GOLDEN_SCALARS).map_err(|e| e.to_string())?;
    let mut pinned = 0;
    for q in [2, 3, 4, 5] {
        let r = run("iwahori-hecke", q)?;
        all_pass(&r.cases, &format!("q={q}"))?;
        if q <= 3 {
            for rr in 0..q {
                for n in 0..=4 {
                    r.case(&format!("ih/deg/r={rr}/n={n}")).ok_or(format!("q={q}: no deg case r={rr} n={n}"))?;
                }
            }
        } else if count(&r, "ih/nondeg/") == 0 {
            return Err(format!("q={q}: no non-degenerate cases"));
        }
        let (p, e) = field_of(q);
        let want = golden.get(&format!("p={p} e={e}")).ok_or(format!("q={q}: no golden entry"))?;
        for (id, details) in want {
            let got = r.case(id).ok_or(format!("q={q}: missing {id}"))?;
            if &got.details != details {
                return Err(format!("q={q} {id}: {} != golden {details}", got.details));
            }
            pinned += 1;
        }
        if want.len() != count(&r, "ih/scalars/") {
            return Err(format!("q={q}: scalar cases differ from golden set"));
        }
    }
    Ok(format!("q in {{2,3,4,5}}, {pinned} scalar rows match golden"))
}

fn spherical() -> Result<String, String> {
    let mut total = 0;
    for q in [2, 3, 4] {
        let r = run("spherical", q)?;
        all_pass(&r.cases, &format!("q={q}"))?;
        total += r.cases.len();
    }
    Ok(format!("{total} cases over q in {{2,3,4}}"))
}

fn principal_series() -> Result<String, String> {
    let mut eigen = 0;
    for q in [2, 3, 5] {
        let r = run("principal-series", q)?;
        all_pass(&r.cases, &format!("q={q}"))?;
        let n = count(&r, "ps/s-eigen/");
        if n != ((q - 1) * (q - 1)) as usize {
            return Err(format!("q={q}: {n} characters, want {}", (q - 1) * (q - 1)));
        }
        eigen += n;
    }
    Ok(format!("S.l2 = eta(a0).l2 for {eigen} characters over q in {{2,3,5}}"))
}

fn supersingular() -> Result<String, String> {
    let mut total = 0;
    for q in [2, 3, 4, 5] {
        for suite in ["supersingular", "identities"] {
            let r = run(suite, q)?;
            all_pass(&r.cases, &format!("{suite} q={q}"))?;
            total += r.cases.len();
        }
        let r = run("supersingular", q)?;
        if count(&r, "ss/s-kills-phi/r=0") != 0 || count(&r, "ss/s-kills-phi/") != (q - 1) as usize {
            return Err(format!("q={q}: quotients not indexed by non-trivial weights"));
        }
    }
    Ok(format!("{total} cases over q in {{2,3,4,5}}, sigma non-trivial"))
}

fn ladder() -> Result<String, String> {
    let mut total = 0;
    for q in [2, 3, 4, 5] {
        let (p, e) = field_of(q);
        let cases = ladder_cases(&cfg(p, e));
        if cases.is_empty() {
            return Err(format!("q={q}: no ladder cases"));
        }
        all_pass(&cases, &format!("q={q}"))?;
        total += cases.len();
    }
    Ok(format!("{total} weights over q in {{2,3,4,5}}, starts |n| <= 2"))
}

fn determinism() -> Result<String, String> {
    let once = || -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_modrep"))
            .args(["verify", "--suite", "all", "--format", "json"])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("exit {:?}", out.status.code()));
        }
        Ok(out.stdout)
    };
    let (a, b) = (once()?, once()?);
    if a != b {
        return Err("outputs differ".into());
    }
    Ok(format!("{} identical bytes", a.len()))
}

fn main() {
    type Check = fn() -> Result<String, String>;
    let criteria: [(&str, u64, Check); 8] = [
        ("Carter-Lusztig", 60, carter_lusztig),
        ("cosets", 30, cosets),
        ("Iwahori-Hecke", 120, iwahori_hecke),
        ("spherical", 120, spherical),
        ("principal series", 120, principal_series),
        ("supersingular", 180, supersingular),
        ("ladder", 60, ladder),
        ("determinism", 600, determinism),
    ];
    let mut red = 0;
    for (i, (name, budget, check)) in criteria.into_iter().enumerate() {
        let t0 = Instant::now();
        let result = check();
        let took = t0.elapsed();
        let verdict = match result {
            Ok(note) if took <= Duration::from_secs(budget) => Ok(note),
            Ok(note) => Err(format!("{note}; over the {budget}s budget")),
            Err(e) => Err(e),
        };
        let (tag, note) = match verdict {
            Ok(n) => ("PASS", n),
            Err(n) => {
                red += 1;
                ("FAIL", n)
            }
        };
        println!("criterion {}: {tag} {name} ({:.2}s) {note}", i + 1, took.as_secs_f64());
    }
    if red > 0 {
        std::process::exit(1);
    }
}
