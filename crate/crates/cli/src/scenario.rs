//! Scenario description and the figure presets.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use cavity_qfi::params::DEFAULT_OMEGA0;
use cavity_qfi::qfi::Mode;
use cavity_qfi::{InitialStateSpec, PhysParams, TimeGrid};
use serde::Serialize;

use crate::CliError;

/// Initial-state family selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Dressed,
    Standard,
    /// `cos(θ/2)|1g⟩ + e^{iφ}sin(θ/2)|0g⟩`, passed to the model as raw
    /// dressed-basis amplitudes.
    Raw,
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dressed" => Ok(Family::Dressed),
            "standard" => Ok(Family::Standard),
            "raw" => Ok(Family::Raw),
            other => Err(CliError::BadArgument(format!("unknown family '{other}'"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Dressed => "dressed",
            Family::Standard => "standard",
            Family::Raw => "raw",
        })
    }
}

pub fn parse_mode(s: &str) -> Result<Mode, CliError> {
    match s {
        "rederived" => Ok(Mode::Rederived),
        "paper-faithful" | "paper_faithful" => Ok(Mode::PaperFaithful),
        other => Err(CliError::BadArgument(format!("unknown mode '{other}'"))),
    }
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Rederived => "rederived",
        Mode::PaperFaithful => "paper-faithful",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(CliError::BadArgument(format!("unknown format '{other}'"))),
        }
    }
}

pub fn parse_formats(s: &str) -> Result<Vec<Format>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let f: Format = part.parse()?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.is_empty() {
        return Err(CliError::BadArgument("no output format selected".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub lambda: f64,
    pub omega: f64,
    pub omega0: f64,
    pub theta: f64,
    pub phi: f64,
    pub family: Family,
    pub mode: Mode,
    pub t_max: f64,
    pub samples: usize,
    pub formats: Vec<Format>,
    pub plot_columns: Vec<String>,
}

pub const DEFAULT_T_MAX: f64 = 20.0;
pub const DEFAULT_SAMPLES: usize = 2001;

/// `(name, λ, Ω, family, mode)`; θ = π/2 for all of them.
pub const PRESETS: [(&str, f64, f64, Family, Mode); 10] = [
    ("fig1a", 5.0, 0.05, Family::Dressed, Mode::Rederived),
    ("fig1b", 5.0, 3.0, Family::Dressed, Mode::Rederived),
    ("fig1c", 0.05, 0.05, Family::Dressed, Mode::Rederived),
    ("fig1d", 0.05, 3.0, Family::Dressed, Mode::Rederived),
    ("fig1b-inset", 5.0, 20.0, Family::Dressed, Mode::Rederived),
    ("fig3a", 5.0, 0.05, Family::Standard, Mode::PaperFaithful),
    ("fig3b", 5.0, 3.0, Family::Standard, Mode::PaperFaithful),
    ("fig3c", 0.05, 0.05, Family::Standard, Mode::PaperFaithful),
    ("fig3d", 0.05, 3.0, Family::Standard, Mode::PaperFaithful),
    (
        "fig3b-inset",
        5.0,
        20.0,
        Family::Standard,
        Mode::PaperFaithful,
    ),
];

impl Scenario {
    pub fn preset(name: &str) -> Result<Self, CliError> {
        let &(name, lambda, omega, family, mode) = PRESETS
            .iter()
            .find(|entry| entry.0 == name)
            .ok_or_else(|| CliError::BadArgument(format!("unknown preset '{name}'")))?;
        Ok(Scenario {
            name: name.to_string(),
            lambda,
            omega,
            omega0: DEFAULT_OMEGA0,
            theta: FRAC_PI_2,
            phi: 0.0,
            family,
            mode,
            t_max: DEFAULT_T_MAX,
            samples: DEFAULT_SAMPLES,
            formats: vec![Format::Csv],
            plot_columns: vec!["F_closed".to_string()],
        })
    }

    /// A scenario with no preset behind it; rates must be supplied.
    pub fn custom(lambda: f64, omega: f64) -> Self {
        Scenario {
            name: "custom".to_string(),
            lambda,
            omega,
            omega0: DEFAULT_OMEGA0,
            theta: FRAC_PI_2,
            phi: 0.0,
            family: Family::Dressed,
            mode: Mode::Rederived,
            t_max: DEFAULT_T_MAX,
            samples: DEFAULT_SAMPLES,
            formats: vec![Format::Csv],
            plot_columns: vec!["F_closed".to_string()],
        }
    }

    pub fn params(&self) -> Result<PhysParams, CliError> {
        Ok(PhysParams::new(self.lambda, self.omega, self.omega0)?)
    }

    pub fn grid(&self) -> Result<TimeGrid, CliError> {
        Ok(TimeGrid::new(self.t_max, self.samples)?)
    }

    /// The model-level state. The raw family maps to the cavity-excitation
    /// amplitudes.
    pub fn state(&self) -> Result<InitialStateSpec, CliError> {
        Ok(match self.family {
            Family::Dressed => InitialStateSpec::dressed(self.theta, self.phi)?,
            Family::Standard => InitialStateSpec::standard(self.theta, self.phi)?,
            Family::Raw => InitialStateSpec::cavity_excitation(self.theta, self.phi)?,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |e: CliError| match e {
            CliError::Model(inner) => CliError::InvalidScenario(inner),
            other => other,
        };
        self.params().map_err(invalid)?;
        self.grid().map_err(invalid)?;
        self.state().map_err(invalid)?;
        if self.family == Family::Raw && self.mode == Mode::PaperFaithful {
            return Err(CliError::BadArgument(
                "paper-faithful mode needs the dressed or standard family".into(),
            ));
        }
        if self.formats.is_empty() {
            return Err(CliError::BadArgument("no output format selected".into()));
        }
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
        {
            return Err(CliError::BadArgument(format!(
                "scenario name '{}' must be non-empty [A-Za-z0-9_-]",
                self.name
            )));
        }
        Ok(())
    }
}
