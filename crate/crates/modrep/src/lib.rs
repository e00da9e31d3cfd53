//! Suite registry and reporting for the `modrep` verifier.

use std::fmt::Write as _;

use serde::Serialize;

mod suites;

pub use suites::ladder_cases;

/// Names accepted by `--suite`.
pub const SUITES: [&str; 8] = [
    "carter-lusztig",
    "cosets",
    "iwahori-hecke",
    "spherical",
    "principal-series",
    "supersingular",
    "identities",
    "all",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub p: u32,
    pub e: u32,
    pub precision: i64,
    pub radius: i64,
    pub level: u32,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { p: 3, e: 1, precision: 64, radius: 4, level: 4, seed: 0 }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::InvalidConfig(m.to_string()));
        if self.precision < 8 {
            return bad("precision must be at least 8");
        }
        if !(1..=6).contains(&self.radius) {
            return bad("radius must lie in 1..=6");
        }
        if !(2..=6).contains(&self.level) {
            return bad("level must lie in 2..=6");
        }
        modrep_core::GfField::new(self.p, self.e).map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case {
    pub id: String,
    pub anchor: &'static str,
    pub status: Status,
    pub details: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub config: SuiteConfig,
    pub cases: Vec<Case>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: &str, config: SuiteConfig, cases: Vec<Case>) -> Report {
        let count = |s: Status| cases.iter().filter(|c| c.status == s).count();
        let summary =
            Summary { total: cases.len(), pass: count(Status::Pass), fail: count(Status::Fail), skip: count(Status::Skip) };
        Report { suite: suite.to_string(), config, cases, summary }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn case(&self, id: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<Report, HarnessError> {
    config.validate()?;
    let cases = match name {
        "all" => SUITES[..7].iter().flat_map(|s| suites::run(s, config)).collect(),
        s if SUITES.contains(&s) => suites::run(s, config),
        other => return Err(HarnessError::UnknownSuite(other.to_string())),
    };
    Ok(Report::new(name, config.clone(), cases))
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            let c = &report.config;
            let _ = writeln!(
                s,
                "suite {}  p={} e={} N={} R={} M={} seed={}",
                report.suite, c.p, c.e, c.precision, c.radius, c.level, c.seed
            );
            for case in &report.cases {
                let tag = match case.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skip => "SKIP",
                };
                let _ = writeln!(s, "{tag} {:<44} {:<5} {}", case.id, case.anchor, case.details);
            }
            let m = &report.summary;
            let _ = writeln!(s, "{} cases: {} pass, {} fail, {} skip", m.total, m.pass, m.fail, m.skip);
            s
        }
    }
}
