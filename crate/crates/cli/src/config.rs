//! Run configuration: a TOML file merged with command-line overrides.
//!
//! ```toml
//! algebra = "A2"              # check accepts a comma-separated list
//! family = "rational"         # rational | trigonometric | elliptic
//! delta_prime = "all"         # all | none | comma-separated root labels
//! pi_prime = "a1"             # simple roots for the trigonometric family
//! omega1 = "1"                # lattice half-periods, complex as "a+bi"
//! omega2 = "0+1i"
//! seed = 7
//!
//! [check]
//! suites = ["rmatrix", "fpb"]
//! samples = 100
//! negative_control = false
//! [check.tolerances]
//! cdybe = 1e-9
//!
//! [initial]                   # explicit point, or random = true
//! q = [0.9]
//! p = [0.4]
//! xi = [0, "0.5", "-0.6"]
//! sigma = false               # project a random point onto Σ
//!
//! [integrate]
//! method = "rk4"
//! dt = 1e-3
//! t_end = 10
//! record_every = 10
//! spectral_z = ["0.35", "0.2+0.3i"]
//! spectral_kmax = 3
//!
//! [eval]
//! z = "0.5"
//! what = ["h", "lax", "r", "spectral"]
//!
//! [output]
//! path = "trajectory.csv"
//! format = "csv"              # csv | json
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use spincm::Complex64;

/// A complex number written as `a+bi` (also `3`, `-2i`, `1e-3-4.5i`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cplx(pub Complex64);

impl fmt::Display for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex64 { re, im } = self.0;
        if im == 0.0 {
            write!(f, "{re}")
        } else if im < 0.0 {
            write!(f, "{re}-{}i", -im)
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

fn parse_real(text: &str, whole: &str) -> Result<f64> {
    match text {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => t
            .parse::<f64>()
            .map_err(|_| anyhow!("'{whole}' is not a complex number (expected a+bi)")),
    }
}

impl FromStr for Cplx {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            bail!("empty complex number");
        }
        let Some(body) = t.strip_suffix(['i', 'j']) else {
            let re = t
                .parse::<f64>()
                .map_err(|_| anyhow!("'{s}' is not a complex number (expected a+bi)"))?;
            return Ok(Cplx(Complex64::new(re, 0.0)));
        };
        // split at the last sign that is not a leading sign or an exponent sign
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (
                body[..k]
                    .parse::<f64>()
                    .map_err(|_| anyhow!("'{s}' is not a complex number (expected a+bi)"))?,
                parse_real(&body[k..], s)?,
            ),
            None => (0.0, parse_real(body, s)?),
        };
        Ok(Cplx(Complex64::new(re, im)))
    }
}

impl Serialize for Cplx {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Cplx {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Real(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Cplx(Complex64::new(v as f64, 0.0))),
            Raw::Real(v) => Ok(Cplx(Complex64::new(v, 0.0))),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Comma-separated complex list, e.g. `1,0.5-2i`.
pub fn parse_list(text: &str) -> Result<Vec<Cplx>> {
    text.split(',').map(str::parse).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative_control: Option<bool>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Cplx>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<Cplx>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<Cplx>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegrateSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record_every: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral_z: Option<Vec<Cplx>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral_kmax: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Cplx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub what: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_prime: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi_prime: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega1: Option<Cplx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega2: Option<Cplx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub check: CheckSection,
    pub initial: InitialSection,
    pub integrate: IntegrateSection,
    pub eval: EvalSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
    }

    /// The effective configuration as JSON, echoed into every output.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

/// Sets `slot` when the flag was given.
pub fn set<T>(slot: &mut Option<T>, flag: Option<T>) {
    if flag.is_some() {
        *slot = flag;
    }
}
