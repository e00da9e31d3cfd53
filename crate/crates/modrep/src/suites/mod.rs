use modrep_core::{GfField, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Case, Status, SuiteConfig};

mod carter_lusztig;
mod cosets;
mod hecke;
mod identities;
mod principal_series;
mod spherical;
mod supersingular;

pub use hecke::ladder_cases;

pub(crate) fn run(name: &str, cfg: &SuiteConfig) -> Vec<Case> {
    let mut out = Cases::new(name);
    match name {
        "carter-lusztig" => carter_lusztig::run(cfg, &mut out),
        "cosets" => cosets::run(cfg, &mut out),
        "iwahori-hecke" => hecke::run(cfg, &mut out),
        "spherical" => spherical::run(cfg, &mut out),
        "principal-series" => principal_series::run(cfg, &mut out),
        "supersingular" => supersingular::run(cfg, &mut out),
        "identities" => identities::run(cfg, &mut out),
        _ => unreachable!("suite names are checked by the caller"),
    }
    out.into_cases()
}

/// Case collector; ids are prefixed with the suite name.
pub(crate) struct Cases {
    prefix: &'static str,
    cases: Vec<Case>,
}

impl Cases {
    fn new(suite: &str) -> Cases {
        let prefix = match suite {
            "carter-lusztig" => "cl",
            "cosets" => "cosets",
            "iwahori-hecke" => "ih",
            "spherical" => "sph",
            "principal-series" => "ps",
            "supersingular" => "ss",
            _ => "id",
        };
        Cases { prefix, cases: Vec::new() }
    }

    /// Runs `f`; `Ok((true, d))` passes, `Ok((false, d))` and errors fail.
    pub(crate) fn check(&mut self, id: &str, anchor: &'static str, f: impl FnOnce() -> Result<(bool, String)>) {
        let (status, details) = match f() {
            Ok((true, d)) => (Status::Pass, d),
            Ok((false, d)) => (Status::Fail, d),
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        self.cases.push(Case { id: format!("{}/{id}", self.prefix), anchor, status, details });
    }

    pub(crate) fn into_cases(self) -> Vec<Case> {
        self.cases
    }
}

pub(crate) fn field(cfg: &SuiteConfig) -> GfField {
    GfField::new(cfg.p, cfg.e).expect("validated configuration")
}

/// Independent deterministic stream per case.
pub(crate) fn rng(cfg: &SuiteConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

/// Largest radius `≤ want` whose ball has at most `budget` vertices.
pub(crate) fn capped_radius(q: u32, want: i64, budget: u64) -> i64 {
    let q = q as u64;
    let ball = |r: u32| (q.pow(2 * r + 1) - 1) / (q - 1);
    (0..=want).rev().find(|&r| ball(r as u32) <= budget).unwrap_or(0)
}

/// `|n|` bound for explicit `f_n` work: supports grow like `q^{2|n|}`.
pub(crate) fn basis_bound(q: u32) -> i64 {
    match q {
        0..=3 => 3,
        4..=5 => 2,
        _ => 1,
    }
}

/// Principal-series level for kernel searches and spins.
pub(crate) fn search_level(cfg: &SuiteConfig, q: u32) -> u32 {
    if q <= 5 {
        2.min(cfg.level)
    } else {
        1
    }
}

pub(crate) fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
