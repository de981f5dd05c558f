use serde::Serialize;
use serde_json::{Map, Value};

use crate::settings::Settings;

pub const SCHEMA: &str = "bigonal-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    /// The worse of the two.
    pub fn and(self, other: Status) -> Status {
        self.max(other)
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One checked statement about one input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub values: Map<String, Value>,
}

impl Claim {
    pub fn new(id: &str, status: Status) -> Self {
        Claim { id: id.into(), instance: None, status, witness: None, values: Map::new() }
    }

    pub fn check(id: &str, ok: bool) -> Self {
        Claim::new(id, Status::from_bool(ok))
    }

    pub fn value(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.values.insert(key.into(), v.into());
        self
    }

    /// Sets the witness unless the claim passed.
    pub fn witness(mut self, w: impl Into<String>) -> Self {
        if self.status != Status::Pass {
            self.witness = Some(w.into());
        }
        self
    }

    pub fn for_instance(mut self, id: &str) -> Self {
        self.instance = Some(id.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub tolerances: Settings,
    pub status: Status,
    pub summary: Summary,
    pub claims: Vec<Claim>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl Report {
    /// Claims keep their order; a claim that fails or is inconclusive
    /// without a witness gets a generic one.
    pub fn new(command: &str, seed: u64, tolerances: &Settings, claims: Vec<Claim>) -> Self {
        let mut summary = Summary::default();
        let mut status = Status::Pass;
        let claims: Vec<Claim> = claims
            .into_iter()
            .map(|mut c| {
                match c.status {
                    Status::Pass => summary.pass += 1,
                    Status::Fail => summary.fail += 1,
                    Status::Inconclusive => summary.inconclusive += 1,
                }
                status = status.and(c.status);
                if c.status != Status::Pass && c.witness.is_none() {
                    c.witness = Some(format!("{} did not hold; see values", c.id));
                }
                c
            })
            .collect();
        Report {
            schema: SCHEMA,
            tool: "bigonal",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            seed,
            tolerances: tolerances.clone(),
            status,
            summary,
            claims,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.status == Status::Pass {
            0
        } else {
            1
        }
    }

    pub fn claim(&self, id: &str, instance: Option<&str>) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id && c.instance.as_deref() == instance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_status() {
        let s = Settings::default();
        let r = Report::new("x", 0, &s, vec![]);
        assert_eq!((r.status, r.exit_code()), (Status::Pass, 0));
        let r = Report::new(
            "x",
            0,
            &s,
            vec![Claim::check("a", true), Claim::new("b", Status::Inconclusive), Claim::check("c", true).witness("w")],
        );
        assert_eq!(r.status, Status::Inconclusive);
        assert_eq!(r.summary, Summary { pass: 2, fail: 0, inconclusive: 1 });
        assert!(r.claims[1].witness.is_some());
        assert!(r.claims[2].witness.is_none());
        let r = Report::new("x", 0, &s, vec![Claim::check("a", false), Claim::new("b", Status::Inconclusive)]);
        assert_eq!((r.status, r.exit_code()), (Status::Fail, 1));
        assert!(r.to_json().contains("\"status\": \"fail\""));
    }
}
