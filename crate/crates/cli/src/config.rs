//! Flat `key = value` experiment configs. Keys are the CLI flag names;
//! flags override the file. Every combination is validated up front.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use vqss_core::engine::{adversary_by_name, CoinMode, CoinSource, PlayerSet, Regime};
use vqss_core::{FieldParams, SupportSet};

pub const KEYS: &[&str] = &[
    "experiment",
    "protocol",
    "n",
    "t",
    "p",
    "k",
    "delta",
    "adversary",
    "seed",
    "trials",
    "backend",
    "input",
    "coins",
    "circuit",
    "output",
    "transcript",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    ClassicalVss,
    Subspace,
    DualSubspace,
    Vqss,
    TopLevel,
    Mpqc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    Stabilizer,
    Share,
    Statevector,
}

/// The dealer's input state for quantum protocols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputKind {
    Zero,
    One,
    Plus,
    /// Uniform basis state (per trial).
    Random,
}

macro_rules! names {
    ($t:ty { $($s:literal => $v:ident),* $(,)? }) => {
        impl FromStr for $t {
            type Err = anyhow::Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok(Self::$v),)*
                    _ => bail!("unknown {} `{s}` (expected one of: {})", stringify!($t), [$($s),*].join(", ")),
                }
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let s = match self { $(Self::$v => $s,)* };
                f.write_str(s)
            }
        }
    };
}

names!(Protocol {
    "classical-vss" => ClassicalVss,
    "subspace" => Subspace,
    "dual-subspace" => DualSubspace,
    "vqss" => Vqss,
    "top-level" => TopLevel,
    "mpqc" => Mpqc,
});
names!(BackendKind {
    "stabilizer" => Stabilizer,
    "share" => Share,
    "statevector" => Statevector,
});
names!(InputKind {
    "zero" => Zero,
    "one" => One,
    "plus" => Plus,
    "random" => Random,
});

/// Raw settings before validation.
#[derive(Clone, Debug, Default)]
pub struct Settings(pub BTreeMap<String, String>);

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", i + 1))?;
            let k = k.trim().to_string();
            if !KEYS.contains(&k.as_str()) {
                bail!("line {}: unknown key `{k}`", i + 1);
            }
            map.insert(k, v.trim().to_string());
        }
        Ok(Settings(map))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(key.to_string(), value.into());
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.0
            .get(key)
            .map(|s| s.parse::<T>().map_err(|e| anyhow!("{key} = `{s}`: {e}")))
            .transpose()
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        self.0
            .get(key)
            .map(|s| {
                s.split(',')
                    .map(|x| x.trim().parse::<T>().map_err(|e| anyhow!("{key} = `{s}`: {e}")))
                    .collect()
            })
            .transpose()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub protocol: Protocol,
    pub n: usize,
    pub t: usize,
    pub p: u64,
    /// Sweep axis.
    pub k: Vec<usize>,
    pub delta: usize,
    /// Sweep axis.
    pub adversary: Vec<String>,
    pub seed: u64,
    pub trials: u64,
    pub backend: BackendKind,
    pub input: InputKind,
    pub coins: CoinMode,
    pub circuit: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub transcript: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Fills defaults and validates every point of the grid.
    pub fn from_settings(s: &Settings) -> Result<Self> {
        let protocol: Protocol = s.get("protocol")?.unwrap_or(Protocol::Vqss);
        let t: usize = s.get("t")?.unwrap_or(1);
        let default_n = match protocol {
            Protocol::Mpqc => 6 * t + 1,
            _ => 4 * t + 1,
        };
        let n: usize = s.get("n")?.unwrap_or(default_n);
        let p: u64 = s.get("p")?.unwrap_or(if n < 7 { 7 } else { 11 });
        let default_backend = match protocol {
            Protocol::ClassicalVss | Protocol::Mpqc => BackendKind::Share,
            _ => BackendKind::Stabilizer,
        };
        let coins = match s.0.get("coins").map(String::as_str) {
            None | Some("ideal") => CoinMode::IdealVss,
            Some("turn-based") => CoinMode::TurnBased,
            Some(x) => bail!("coins = `{x}`: expected ideal or turn-based"),
        };
        let cfg = ExperimentConfig {
            experiment: s.0.get("experiment").cloned().unwrap_or_else(|| "run".into()),
            protocol,
            n,
            t,
            p,
            k: s.list("k")?.unwrap_or_else(|| vec![10]),
            delta: s.get("delta")?.unwrap_or(2 * t),
            adversary: s.list("adversary")?.unwrap_or_else(|| vec!["none".into()]),
            seed: s.get("seed")?.unwrap_or(1),
            trials: s.get("trials")?.unwrap_or(1),
            backend: s.get("backend")?.unwrap_or(default_backend),
            input: s.get("input")?.unwrap_or(InputKind::Zero),
            coins,
            circuit: s.get("circuit")?,
            output: s.get("output")?,
            transcript: s.get("transcript")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn coin_source(&self) -> CoinSource {
        CoinSource { mode: self.coins }
    }

    pub fn validate(&self) -> Result<()> {
        FieldParams::new(self.p, self.n).map_err(|e| anyhow!("n={}, p={}: {e}", self.n, self.p))?;
        PlayerSet::new(self.n, self.t, SupportSet::EMPTY)?;
        let regime = match self.protocol {
            Protocol::Mpqc => Regime::Sixth,
            _ => Regime::Quarter,
        };
        if !regime.holds(self.n, self.t) {
            bail!("n={} t={} violates {regime:?} needed by {}", self.n, self.t, self.protocol);
        }
        if self.delta == 0 || self.delta + 1 >= self.n {
            bail!("delta={} must lie in 1..n-1 (n={})", self.delta, self.n);
        }
        if self.protocol == Protocol::Mpqc && self.delta != 2 * self.t {
            bail!("mpqc needs delta = 2t");
        }
        if self.k.is_empty() || self.k.contains(&0) {
            bail!("k must be a non-empty list of positive integers");
        }
        if self.trials == 0 {
            bail!("trials must be positive");
        }
        for a in &self.adversary {
            if adversary_by_name(a, 0).is_none() {
                bail!("unknown adversary `{a}`");
            }
        }
        let ok = match (self.protocol, self.backend) {
            (Protocol::ClassicalVss, _) => true,
            (Protocol::Subspace | Protocol::DualSubspace, b) => b != BackendKind::Share,
            (Protocol::Vqss | Protocol::TopLevel | Protocol::Mpqc, BackendKind::Statevector) => false,
            _ => true,
        };
        if !ok {
            bail!("protocol {} cannot run on the {} backend", self.protocol, self.backend);
        }
        if self.backend == BackendKind::Share && self.input == InputKind::Plus && self.protocol != Protocol::ClassicalVss {
            bail!("the share backend holds basis states only; input = plus needs a quantum backend");
        }
        if let Some(c) = &self.circuit {
            if self.protocol != Protocol::Mpqc {
                bail!("circuit is only used by mpqc");
            }
            let circ = crate::circuit_text::parse_circuit(&std::fs::read_to_string(c).with_context(|| format!("reading {}", c.display()))?)?;
            if circ.p as u64 != self.p || circ.num_qupits < self.n {
                bail!("circuit must use p={} and at least n={} wires", self.p, self.n);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_and_overrides() {
        let mut s = Settings::parse("# grid\nprotocol = classical-vss\nk = 1, 5,10\nadversary = guess-ahead\ntrials=100\n").unwrap();
        s.set("seed", "9");
        let c = ExperimentConfig::from_settings(&s).unwrap();
        assert_eq!(c.protocol, Protocol::ClassicalVss);
        assert_eq!(c.k, vec![1, 5, 10]);
        assert_eq!((c.n, c.t, c.p, c.delta, c.seed), (5, 1, 7, 2, 9));
    }

    #[test]
    fn rejects_invalid_grids() {
        for bad in [
            "n = 4\n",
            "p = 6\n",
            "k = 0\n",
            "adversary = nobody\n",
            "protocol = mpqc\nn = 5\n",
            "protocol = subspace\nbackend = share\n",
            "colour = blue\n",
            "n 5\n",
        ] {
            let r = Settings::parse(bad).and_then(|s| ExperimentConfig::from_settings(&s));
            assert!(r.is_err(), "{bad}");
        }
    }
}
