use std::path::PathBuf;

use clap::ValueEnum;
use serde_json::{json, Value};

use hallforge::fqlinalg::is_prime;
use hallforge::heredcat::{Caps, QuiverSpec};
use hallforge::{Error, Result};

pub const CAPS_ENV: &str = "HALLFORGE_CAPS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum CheckName {
    Euler,
    Rp,
    Pairing,
    Assoc,
    Oracle,
    D3,
    Hopf,
    Uv,
    Serre,
    Heisenberg,
    Triangular,
}

impl CheckName {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Euler => "euler",
            CheckName::Rp => "rp",
            CheckName::Pairing => "pairing",
            CheckName::Assoc => "assoc",
            CheckName::Oracle => "oracle",
            CheckName::D3 => "d3",
            CheckName::Hopf => "hopf",
            CheckName::Uv => "uv",
            CheckName::Serre => "serre",
            CheckName::Heisenberg => "heisenberg",
            CheckName::Triangular => "triangular",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub quiver: String,
    pub spec: QuiverSpec,
    pub dim_bound: usize,
    pub caps: Caps,
    pub checks: Vec<CheckName>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn header(&self, command: &str) -> Value {
        json!({
            "command": command,
            "quiver": self.quiver,
            "spec": {
                "vertices": self.spec.n,
                "arrows": self.spec.arrows,
                "nilpotent": self.spec.nilpotent,
                "q": self.spec.q,
            },
            "dim_bound": self.dim_bound,
            "caps": {
                "hom_scan": self.caps.hom_scan,
                "subspace_scan": self.caps.subspace_scan,
                "complex_scan": self.caps.complex_scan,
            },
            "checks": self.checks.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }
}

/// A preset name, or a path to a JSON quiver document; `q` overrides the document's field.
pub fn load_spec(quiver: &str, q: Option<u64>) -> Result<QuiverSpec> {
    if matches!(quiver, "a1" | "a2" | "jordan") {
        return QuiverSpec::preset(quiver, q.unwrap_or(2));
    }
    let text = std::fs::read_to_string(quiver)
        .map_err(|e| Error::Invalid(format!("cannot read quiver file {quiver:?}: {e}")))?;
    let mut spec: QuiverSpec =
        serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("bad quiver file {quiver:?}: {e}")))?;
    if let Some(q) = q {
        spec.q = q;
    }
    spec.validate()?;
    Ok(spec)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CapFlags {
    pub hom: Option<u64>,
    pub subspace: Option<u64>,
    pub complex: Option<u64>,
}

/// Defaults, then the environment override string, then explicit flags.
pub fn resolve_caps(env: Option<&str>, flags: CapFlags) -> Result<Caps> {
    let mut caps = Caps::default();
    if let Some(s) = env {
        caps = caps.apply_overrides(s)?;
    }
    caps.hom_scan = flags.hom.unwrap_or(caps.hom_scan);
    caps.subspace_scan = flags.subspace.unwrap_or(caps.subspace_scan);
    caps.complex_scan = flags.complex.unwrap_or(caps.complex_scan);
    Ok(caps)
}

pub fn parse_prime(s: &str) -> std::result::Result<u64, String> {
    let q: u64 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if is_prime(q) {
        Ok(q)
    } else {
        Err(format!("q = {q} is not prime"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(parse_prime("3"), Ok(3));
        assert!(parse_prime("4").is_err());
        assert!(parse_prime("1").is_err());
        assert!(parse_prime("x").is_err());
    }

    #[test]
    fn cap_precedence() {
        let flags = CapFlags { hom: Some(7), ..CapFlags::default() };
        let caps = resolve_caps(Some("hom=5,complex=9"), flags).unwrap();
        assert_eq!((caps.hom_scan, caps.subspace_scan, caps.complex_scan), (7, Caps::default().subspace_scan, 9));
        assert!(resolve_caps(Some("bogus=1"), CapFlags::default()).is_err());
    }

    #[test]
    fn presets_and_overrides() {
        assert_eq!(load_spec("a2", Some(3)).unwrap().q, 3);
        assert_eq!(load_spec("jordan", None).unwrap().q, 2);
        assert!(load_spec("/nonexistent.json", None).is_err());
    }
}
