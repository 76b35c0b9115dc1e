//! Run configuration: flat `key = value` files merged with command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::verify::CaseId;

use super::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Solve,
    Convergence,
    Check,
    Infsup,
}

/// Suites run by `check`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Identity,
    Commuting,
    Exactness,
    Simplified,
}

/// Deliberate faults for demonstrating that the checks detect errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    VectSign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeshSource {
    /// Unit cube meshes with `n` subdivisions per axis, one per level.
    Box(Vec<usize>),
    /// MSH 2.2 files, one per level.
    Files(Vec<PathBuf>),
}

impl MeshSource {
    pub fn levels(&self) -> usize {
        match self {
            MeshSource::Box(n) => n.len(),
            MeshSource::Files(p) => p.len(),
        }
    }
}

impl fmt::Display for MeshSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshSource::Box(n) => {
                let list: Vec<String> = n.iter().map(usize::to_string).collect();
                write!(f, "box:{}", list.join(","))
            }
            MeshSource::Files(p) => {
                let list: Vec<String> = p.iter().map(|p| p.display().to_string()).collect();
                write!(f, "file:{}", list.join(","))
            }
        }
    }
}

impl FromStr for MeshSource {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CliError::Config(format!("mesh must be box:N[,N..] or file:PATH[,PATH..], got '{s}'"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let items: Vec<&str> = rest.split(',').map(str::trim).collect();
        if items.iter().any(|i| i.is_empty()) {
            return Err(bad());
        }
        match kind {
            "box" => {
                let n = items
                    .iter()
                    .map(|i| i.parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                Ok(MeshSource::Box(n))
            }
            "file" => Ok(MeshSource::Files(items.iter().map(PathBuf::from).collect())),
            _ => Err(bad()),
        }
    }
}

/// Flags as given on the command line; `None` leaves the file or default value.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub mesh: Option<String>,
    pub degree: Option<usize>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub case: Option<String>,
    pub simplified: bool,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub assert_rates: Option<f64>,
    pub suite: Option<Suite>,
    pub trials: Option<usize>,
    pub tol: Option<f64>,
    pub assert_stable: bool,
    pub unstable_control: bool,
    pub inject_fault: Option<Fault>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub mesh: MeshSource,
    pub degree: usize,
    pub lambda: f64,
    pub mu: f64,
    pub case: CaseId,
    pub simplified: bool,
    pub out: PathBuf,
    pub seed: u64,
    pub threads: Option<usize>,
    pub assert_rates: Option<f64>,
    pub suite: Suite,
    /// Random inputs per suite; `None` uses the suite defaults.
    pub trials: Option<usize>,
    pub tol: f64,
    pub assert_stable: bool,
    pub unstable_control: bool,
    pub inject_fault: Option<Fault>,
}

const KEYS: [&str; 15] = [
    "mesh",
    "degree",
    "lambda",
    "mu",
    "case",
    "simplified",
    "out",
    "seed",
    "threads",
    "assert_rates",
    "suite",
    "trials",
    "tol",
    "assert_stable",
    "unstable_control",
];

/// Parse `key = value` lines; `#` starts a comment. Dashes in keys read as underscores.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("config line {}: unknown key '{}'", i + 1, k.trim())));
        }
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("config line {}: duplicate key '{key}'", i + 1)));
        }
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Config(format!("invalid value '{v}' for {key}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("invalid value '{v}' for {key}, expected true or false"))),
    }
}

fn parse_enum<T: clap::ValueEnum>(key: &str, v: &str) -> Result<T, CliError> {
    T::from_str(v, true).map_err(|_| CliError::Config(format!("invalid value '{v}' for {key}")))
}

fn default_mesh(command: Command, degree: usize) -> MeshSource {
    MeshSource::Box(match command {
        Command::Solve | Command::Check => vec![if command == Command::Solve { 2 } else { 1 }],
        Command::Convergence if degree == 0 => vec![2, 4, 8],
        Command::Convergence => vec![1, 2, 4],
        Command::Infsup => vec![1, 2, 3, 4],
    })
}

impl RunConfig {
    /// Merge file values and flags, then validate everything.
    pub fn resolve(command: Command, file: BTreeMap<String, String>, flags: Overrides) -> Result<RunConfig, CliError> {
        let get = |k: &str| file.get(k).map(String::as_str);
        let degree = match flags.degree {
            Some(d) => d,
            None => get("degree").map_or(Ok(0), |v| parse_value("degree", v))?,
        };
        let mesh = match flags.mesh.as_deref().or(get("mesh")) {
            Some(s) => s.parse()?,
            None => default_mesh(command, degree),
        };
        let case_name = flags.case.as_deref().or(get("case")).unwrap_or("trig");
        let case = case_name.parse::<CaseId>().map_err(|e| CliError::Config(e.to_string()))?;
        let cfg = RunConfig {
            command,
            mesh,
            degree,
            lambda: flags.lambda.map_or_else(|| get("lambda").map_or(Ok(1.0), |v| parse_value("lambda", v)), Ok)?,
            mu: flags.mu.map_or_else(|| get("mu").map_or(Ok(1.0), |v| parse_value("mu", v)), Ok)?,
            case,
            simplified: flags.simplified || get("simplified").map_or(Ok(false), |v| parse_bool("simplified", v))?,
            out: flags.out.unwrap_or_else(|| PathBuf::from(get("out").unwrap_or("out"))),
            seed: flags.seed.map_or_else(|| get("seed").map_or(Ok(20240601), |v| parse_value("seed", v)), Ok)?,
            threads: match flags.threads {
                Some(t) => Some(t),
                None => get("threads").map(|v| parse_value("threads", v)).transpose()?,
            },
            assert_rates: match flags.assert_rates {
                Some(x) => Some(x),
                None => get("assert_rates").map(|v| parse_value("assert_rates", v)).transpose()?,
            },
            suite: match flags.suite {
                Some(s) => s,
                None => get("suite").map_or(Ok(Suite::All), |v| parse_enum("suite", v))?,
            },
            trials: match flags.trials {
                Some(t) => Some(t),
                None => get("trials").map(|v| parse_value("trials", v)).transpose()?,
            },
            tol: flags.tol.map_or_else(|| get("tol").map_or(Ok(1e-10), |v| parse_value("tol", v)), Ok)?,
            assert_stable: flags.assert_stable
                || get("assert_stable").map_or(Ok(false), |v| parse_bool("assert_stable", v))?,
            unstable_control: flags.unstable_control
                || get("unstable_control").map_or(Ok(false), |v| parse_bool("unstable_control", v))?,
            inject_fault: flags.inject_fault,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let err = |m: String| Err(CliError::Config(m));
        if self.degree > 1 {
            return err(format!("degree must be 0 or 1, got {}", self.degree));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return err(format!("lambda must be finite and >= 0, got {}", self.lambda));
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return err(format!("mu must be finite and > 0, got {}", self.mu));
        }
        if self.simplified && self.degree != 0 {
            return err(format!(
                "the simplified stress element exists only for degree 0, got degree {}",
                self.degree
            ));
        }
        if self.mesh.levels() == 0 {
            return err("at least one mesh is required".into());
        }
        if let MeshSource::Box(ns) = &self.mesh {
            if ns.contains(&0) {
                return err("box meshes need n >= 1".into());
            }
        }
        if self.trials == Some(0) {
            return err("trials must be at least 1".into());
        }
        if self.threads == Some(0) {
            return err("threads must be at least 1".into());
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return err(format!("tol must lie in (0, 1), got {}", self.tol));
        }
        match self.command {
            Command::Solve if self.mesh.levels() != 1 => err("solve takes exactly one mesh".into()),
            Command::Convergence if self.assert_rates.is_some() && self.mesh.levels() < 3 => err(format!(
                "--assert-rates needs at least three mesh levels, got {}",
                self.mesh.levels()
            )),
            Command::Convergence if self.mesh.levels() < 2 => {
                err(format!("a convergence study needs at least two mesh levels, got {}", self.mesh.levels()))
            }
            Command::Infsup if self.simplified && self.unstable_control => {
                err("the unstable control uses the full stress element".into())
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_sources_parse() {
        assert_eq!("box:2".parse::<MeshSource>().unwrap(), MeshSource::Box(vec![2]));
        assert_eq!("box:2,4,8".parse::<MeshSource>().unwrap(), MeshSource::Box(vec![2, 4, 8]));
        assert_eq!(
            "file:a.msh".parse::<MeshSource>().unwrap(),
            MeshSource::Files(vec![PathBuf::from("a.msh")])
        );
        for bad in ["box", "box:", "box:x", "sphere:3", "box:1,,2"] {
            assert!(bad.parse::<MeshSource>().is_err(), "{bad}");
        }
    }

    #[test]
    fn flags_override_file() {
        let file = parse_config_text("# study\nmesh = box:1,2\ndegree = 1\nlambda = 5 # inline\n").unwrap();
        let flags = Overrides {
            lambda: Some(2.0),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Command::Convergence, file, flags).unwrap();
        assert_eq!(cfg.mesh, MeshSource::Box(vec![1, 2]));
        assert_eq!((cfg.degree, cfg.lambda, cfg.mu), (1, 2.0, 1.0));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let resolve = |cmd, text: &str, flags| RunConfig::resolve(cmd, parse_config_text(text)?, flags);
        assert!(resolve(Command::Solve, "mu = 0", Overrides::default()).is_err());
        assert!(resolve(Command::Solve, "degree = 1\nsimplified = true", Overrides::default()).is_err());
        assert!(resolve(Command::Solve, "colour = red", Overrides::default()).is_err());
        let flags = Overrides {
            assert_rates: Some(0.9),
            mesh: Some("box:2,4".into()),
            ..Default::default()
        };
        assert!(resolve(Command::Convergence, "", flags).is_err());
        assert!(resolve(Command::Solve, "case = circle", Overrides::default()).is_err());
    }
}
