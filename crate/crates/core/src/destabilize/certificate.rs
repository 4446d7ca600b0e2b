use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::CurveTag;
use crate::positivity::PositivityReport;
use crate::rational::{serde_q, Q};

pub const SCHEMA_VERSION: u32 = 1;

/// Blow-up perturbation stays below the Seshadri constant for small `ε`.
pub const ASSUME_SMALL_EPSILON: &str = "rt-blowup-small-epsilon";
/// Ampleness is only checked against the tracked curves.
pub const ASSUME_TRACKED_AMPLENESS: &str = "tracked-curves-only-ampleness";

pub const KNOWN_ASSUMPTIONS: [&str; 2] = [ASSUME_SMALL_EPSILON, ASSUME_TRACKED_AMPLENESS];

pub fn tool_version() -> String {
    format!("slopecert {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveRecord {
    pub tag: CurveTag,
    #[serde(with = "serde_q::vec")]
    pub class: Vec<Q>,
}

/// A replayable witness that `(S, L)` is K-unstable: the slope test
/// configuration of `curve` at `lambda` has negative invariant `df_value`.
///
/// `polarization` is written in the basis of `normalized_presentation`;
/// its exceptional coordinates are `−epsilon_chain`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema_version: u32,
    pub tool_version: String,
    pub presentation: String,
    pub normalized_presentation: String,
    #[serde(with = "serde_q::vec")]
    pub polarization: Vec<Q>,
    /// The same class in the basis of `presentation`.
    #[serde(with = "serde_q::vec")]
    pub polarization_in_presentation: Vec<Q>,
    pub curve: CurveRecord,
    #[serde(with = "serde_q")]
    pub seshadri_bound: Q,
    #[serde(with = "serde_q")]
    pub lambda: Q,
    #[serde(with = "serde_q")]
    pub df_value: Q,
    #[serde(with = "serde_q::vec")]
    pub epsilon_chain: Vec<Q>,
    pub positivity: PositivityReport,
    pub assumptions: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        let cert: Certificate =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if cert.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cert.schema_version
            )));
        }
        Ok(cert)
    }

    pub fn load(path: &Path) -> Result<Certificate> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn emit(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json().as_bytes())
    }
}

/// Write to a sibling temporary file, then rename over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| Error::Usage(format!("cannot write {}: {e}", path.display()));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Usage(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io)
}
