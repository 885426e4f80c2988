//! Command-line surface and its merge with the config file into a
//! [`RunConfig`]. Precedence: flags > config file > defaults.

use std::path::PathBuf;

use bethe_asym::models::ModelSpec;
use bethe_asym::C64;
use clap::{Args, Parser, Subcommand};

use crate::config::ConfigFile;
use crate::output::Format;
use crate::UsageError;

#[derive(Debug, Parser)]
#[command(name = "bethe-asym", version, about = "Thermodynamic data, long-distance asymptotics and identity checks for the XXZ chain and the Bose gas")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// xxz | ll
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Anisotropy angle ζ ∈ (0, π)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub zeta: Option<f64>,
    /// Anisotropy Δ ∈ (−1, 1); ζ = arccos Δ
    #[arg(long, global = true, allow_negative_numbers = true, conflicts_with = "zeta")]
    pub delta: Option<f64>,
    /// Magnetic field (XXZ) or chemical potential (Bose gas)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub field: Option<f64>,
    /// Bose-gas coupling c > 0
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long = "beta-re", global = true, allow_negative_numbers = true)]
    pub beta_re: Option<f64>,
    #[arg(long = "beta-im", global = true, allow_negative_numbers = true)]
    pub beta_im: Option<f64>,
    /// Distances: comma list (1,2,5) or range a:b:step (inclusive)
    #[arg(long, global = true)]
    pub m: Option<String>,
    /// Quadrature nodes on [−q, q] (the contour gets twice as many)
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    /// Half-height of the ellipse around the Fermi zone
    #[arg(long = "contour-height", global = true)]
    pub contour_height: Option<f64>,
    /// Seed for randomized checks
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// csv | json
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Flat key=value file with defaults for any of the options above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fermi boundary and dressed functions on the quadrature grid
    Thermo,
    /// Leading asymptotics of ⟨σᶻσᶻ⟩ for the XXZ chain
    Szsz,
    /// Leading asymptotics of the density–density function of the Bose gas
    Jj,
    /// Asymptotic generating function of the XXZ chain at complex β
    Generating,
    /// Pure sine kernel: exact determinant against its asymptotic expansion
    GskCheck {
        #[arg(long, allow_negative_numbers = true)]
        gamma: Option<f64>,
    },
    /// Run the identity-check battery
    Verify {
        /// Run every group (the default)
        #[arg(long, conflicts_with = "only")]
        all: bool,
        /// Run a single group: cycle | lagrange | fredholm | free-fermion
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Thermo,
    Szsz,
    Jj,
    Generating,
    GskCheck,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Thermo => "thermo",
            Self::Szsz => "szsz",
            Self::Jj => "jj",
            Self::Generating => "generating",
            Self::GskCheck => "gsk-check",
            Self::Verify => "verify",
        }
    }

    fn default_m(self) -> &'static str {
        match self {
            Self::Generating => "20,40,80,160",
            Self::GskCheck => "100,200,400",
            _ => "1:100:1",
        }
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub model_name: String,
    pub zeta: Option<f64>,
    pub field: Option<f64>,
    pub c: Option<f64>,
    pub beta: C64,
    pub m: Vec<f64>,
    pub nodes: Option<usize>,
    pub contour_height: Option<f64>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub gamma: f64,
    pub only: Option<String>,
}

pub const DEFAULT_BETA_RE: f64 = 0.2;
pub const DEFAULT_GAMMA: f64 = 0.1;

/// Parse `1,2,5` or `a:b:step` (inclusive of `b` up to rounding).
pub fn parse_m_list(s: &str) -> Result<Vec<f64>, UsageError> {
    let bad = |why: &str| UsageError(format!("--m '{s}': {why}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(&format!("'{}' is not a number", t.trim())));
    let out = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("range must be a:b:step"));
        }
        let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || !(b >= a) {
            return Err(bad("range needs step > 0 and b ≥ a"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(bad("range has more than 10⁶ points"));
        }
        (0..count).map(|k| a + step * k as f64).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if out.is_empty() {
        return Err(bad("empty list"));
    }
    if let Some(x) = out.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
        return Err(bad(&format!("distance {x} must be positive")));
    }
    Ok(out)
}

fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

impl RunConfig {
    pub fn resolve(cli: Cli) -> Result<Self, UsageError> {
        let a = cli.common;
        let file = match &a.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let (command, gamma_flag, all, only) = match cli.command {
            Command::Thermo => (CommandKind::Thermo, None, false, None),
            Command::Szsz => (CommandKind::Szsz, None, false, None),
            Command::Jj => (CommandKind::Jj, None, false, None),
            Command::Generating => (CommandKind::Generating, None, false, None),
            Command::GskCheck { gamma } => (CommandKind::GskCheck, gamma, false, None),
            Command::Verify { all, only } => (CommandKind::Verify, None, all, only),
        };
        debug_assert!(!(all && only.is_some()));

        // An anisotropy given on the command line, in either form, overrides
        // both forms in the file.
        let zeta = match (a.zeta, a.delta) {
            (Some(z), _) => Some(z),
            (None, Some(d)) => Some(zeta_from_delta(d)?),
            (None, None) => match (file.get::<f64>("zeta")?, file.get::<f64>("delta")?) {
                (Some(_), Some(_)) => return Err(UsageError("config sets both zeta and delta".into())),
                (Some(z), None) => Some(z),
                (None, Some(d)) => Some(zeta_from_delta(d)?),
                (None, None) => None,
            },
        };

        let format = match pick(a.format, file.get::<String>("format")?) {
            Some(f) => f.parse::<Format>().map_err(UsageError)?,
            None => Format::Csv,
        };
        let m_spec = pick(a.m, file.get::<String>("m")?).unwrap_or_else(|| command.default_m().to_string());
        let nodes = pick(a.nodes, file.get("nodes")?);
        if nodes == Some(0) {
            return Err(UsageError("--nodes must be positive".into()));
        }
        let contour_height = pick(a.contour_height, file.get("contour-height")?);
        if let Some(d) = contour_height {
            if !(d > 0.0) {
                return Err(UsageError(format!("--contour-height {d} must be positive")));
            }
        }
        let beta = C64::new(
            pick(a.beta_re, file.get("beta-re")?).unwrap_or(DEFAULT_BETA_RE),
            pick(a.beta_im, file.get("beta-im")?).unwrap_or(0.0),
        );

        Ok(Self {
            command,
            model_name: pick(a.model, file.get::<String>("model")?).unwrap_or_else(|| "xxz".into()).to_ascii_lowercase(),
            zeta,
            field: pick(a.field, file.get("field")?),
            c: pick(a.c, file.get("c")?),
            beta,
            m: parse_m_list(&m_spec)?,
            nodes,
            contour_height,
            seed: pick(a.seed, file.get("seed")?).unwrap_or(bethe_asym::verify::DEFAULT_SEED),
            output: pick(a.output, file.get::<PathBuf>("output")?),
            format,
            gamma: pick(gamma_flag, file.get("gamma")?).unwrap_or(DEFAULT_GAMMA),
            only,
        })
    }

    /// The physical model; every missing parameter is a usage error.
    pub fn model(&self) -> Result<ModelSpec, UsageError> {
        let field = self
            .field
            .ok_or_else(|| UsageError(format!("{} needs --field", self.command.name())))?;
        let built = match self.model_name.as_str() {
            "xxz" => {
                let zeta = self.zeta.ok_or_else(|| UsageError("model xxz needs --zeta or --delta".into()))?;
                ModelSpec::xxz(zeta, field)
            }
            "ll" | "lieb-liniger" => {
                let c = self.c.ok_or_else(|| UsageError("model ll needs --c".into()))?;
                ModelSpec::lieb_liniger(c, field)
            }
            other => return Err(UsageError(format!("unknown model '{other}' (xxz | ll)"))),
        };
        built.map_err(|e| UsageError(e.to_string()))
    }
}

fn zeta_from_delta(d: f64) -> Result<f64, UsageError> {
    if !(d > -1.0 && d < 1.0) {
        return Err(UsageError(format!("--delta {d} must lie in (−1, 1)")));
    }
    Ok(d.acos())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(argv: &[&str]) -> Result<RunConfig, UsageError> {
        let cli = Cli::try_parse_from(std::iter::once("bethe-asym").chain(argv.iter().copied()))
            .map_err(|e| UsageError(e.to_string()))?;
        RunConfig::resolve(cli)
    }

    #[test]
    fn m_lists() {
        assert_eq!(parse_m_list("1,2, 5").unwrap(), vec![1.0, 2.0, 5.0]);
        assert_eq!(parse_m_list("2:10:4").unwrap(), vec![2.0, 6.0, 10.0]);
        assert_eq!(parse_m_list("1:100:1").unwrap().len(), 100);
        assert_eq!(parse_m_list("0.5:1.0:0.1").unwrap().len(), 6);
        for bad in ["", "1,,2", "1:2", "3:1:1", "1:5:0", "0,1", "-2", "x"] {
            assert!(parse_m_list(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn delta_maps_to_zeta() {
        let r = resolve(&["thermo", "--delta", "0.5", "--field", "1"]).unwrap();
        assert!((r.zeta.unwrap() - std::f64::consts::PI / 3.0).abs() < 1e-15);
        assert!(resolve(&["thermo", "--delta", "0.5", "--zeta", "1", "--field", "1"]).is_err());
        assert!(resolve(&["thermo", "--delta", "1.5", "--field", "1"]).is_err());
    }

    #[test]
    fn defaults() {
        let r = resolve(&["szsz"]).unwrap();
        assert_eq!(r.seed, 42);
        assert_eq!(r.format, Format::Csv);
        assert_eq!(r.m.len(), 100);
        assert_eq!(r.beta, C64::new(DEFAULT_BETA_RE, 0.0));
        assert!(r.model().is_err(), "no field");
        let r = resolve(&["gsk-check"]).unwrap();
        assert_eq!(r.m, vec![100.0, 200.0, 400.0]);
        assert_eq!(r.gamma, DEFAULT_GAMMA);
    }

    #[test]
    fn global_flags_before_subcommand() {
        let r = resolve(&["--zeta", "1.2", "--field", "-0.5", "szsz", "--beta-im", "-1"]).unwrap();
        assert_eq!(r.zeta, Some(1.2));
        assert_eq!(r.field, Some(-0.5));
        assert_eq!(r.beta.im, -1.0);
    }

    #[test]
    fn verify_flags() {
        assert_eq!(resolve(&["verify", "--only", "cycle"]).unwrap().only.as_deref(), Some("cycle"));
        assert!(resolve(&["verify", "--all", "--only", "cycle"]).is_err());
        assert_eq!(resolve(&["verify", "--all"]).unwrap().only, None);
    }
}
