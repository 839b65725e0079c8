//! Verification reports: per-suite pass/fail records with reproducing
//! seeds and dimension-table witnesses. The JSON rendering is deterministic
//! (wall time is reported separately so that identical inputs give
//! byte-identical reports).

use serde::Serialize;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        CheckRecord { name: name.into(), pass, detail: detail.into(), witness: None }
    }

    pub fn with_witness(mut self, witness: String) -> Self {
        self.witness = Some(witness);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub primes: Vec<u32>,
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
    #[serde(skip)]
    pub wall_ms: u128,
}

impl VerificationReport {
    pub fn new(suite: &str, primes: &[u32], seed: u64, trials: usize, checks: Vec<CheckRecord>) -> Self {
        let passed = checks.iter().all(|c| c.pass);
        VerificationReport {
            schema: REPORT_SCHEMA,
            suite: suite.to_string(),
            primes: primes.to_vec(),
            seed,
            trials,
            passed,
            checks,
            wall_ms: 0,
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# Suite `{}`\n\n", self.suite));
        out.push_str(&format!(
            "- primes: {:?}\n- seed: {}\n- trials: {}\n- wall time: {} ms\n- result: **{}**\n\n",
            self.primes,
            self.seed,
            self.trials,
            self.wall_ms,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out.push_str("| check | result | detail |\n|---|---|---|\n");
        for c in &self.checks {
            out.push_str(&format!(
                "| {} | {} | {} |\n",
                c.name,
                if c.pass { "pass" } else { "FAIL" },
                c.detail.replace('|', "/")
            ));
        }
        out
    }
}
