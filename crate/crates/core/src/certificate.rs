//! Serializable pass/fail records with witness data.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One verified (or refuted) claim. `witness` holds everything needed to
/// re-check the claim independently; `runtime_ms` is the only field that
/// varies between runs with the same seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub check: String,
    pub params: Value,
    pub status: Status,
    pub witness: Value,
    pub seed: u64,
    pub runtime_ms: u64,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Copy with the timing field cleared, for reproducibility comparisons.
    pub fn without_runtime(&self) -> Certificate {
        Certificate {
            runtime_ms: 0,
            ..self.clone()
        }
    }
}

/// Times a certificate computation from creation to [`Timer::finish`].
pub struct Timer {
    start: Instant,
}

impl Timer {
    pub fn start() -> Timer {
        Timer {
            start: Instant::now(),
        }
    }

    pub fn finish(
        self,
        check: &str,
        params: Value,
        status: Status,
        witness: Value,
        seed: u64,
    ) -> Certificate {
        Certificate {
            check: check.to_string(),
            params,
            status,
            witness,
            seed,
            runtime_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}
