use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::args::Command;
use crate::error::CliError;

pub const TOOL: &str = "abphase";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Everything needed to reproduce an output byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    #[serde(flatten)]
    pub command: Command,
    pub format: Format,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(command: Command, format: Format, timestamp: u64) -> Self {
        Self {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            format,
            timestamp,
        }
    }

    /// Read the manifest back from a CSV header line or a JSON document.
    pub fn parse_output(text: &str) -> Result<Self, CliError> {
        let trimmed = text.trim_start();
        if let Some(rest) = trimmed.strip_prefix('#') {
            let line = rest.lines().next().unwrap_or_default();
            return Ok(serde_json::from_str(line.trim())?);
        }
        #[derive(Deserialize)]
        struct Wrapper {
            manifest: RunManifest,
        }
        let doc: Wrapper = serde_json::from_str(trimmed)?;
        Ok(doc.manifest)
    }
}

/// Pinned timestamp: `--timestamp`, else `SOURCE_DATE_EPOCH`, else the clock.
pub fn resolve_timestamp(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(t) = flag {
        return Ok(t);
    }
    if let Ok(v) = std::env::var("SOURCE_DATE_EPOCH") {
        return v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("SOURCE_DATE_EPOCH is not an integer: {v:?}")));
    }
    Ok(std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0))
}

/// Inclusive range of angular momenta, written `a..b` or a single `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MRange {
    pub min: i64,
    pub max: i64,
}

impl MRange {
    pub fn values(&self) -> impl Iterator<Item = i64> {
        self.min..=self.max
    }
}

impl FromStr for MRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("bad angular momentum {t:?}: {e}"));
        let (min, max) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if min > max {
            return Err(format!("empty range {s:?}"));
        }
        if max - min > 100_000 {
            return Err(format!("range {s:?} spans more than 100000 channels"));
        }
        Ok(Self { min, max })
    }
}

impl fmt::Display for MRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.min, self.max)
    }
}

impl Serialize for MRange {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
