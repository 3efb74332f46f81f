//! Flat key-value configuration files with sections.
//!
//! Grammar (one entry per line):
//!
//! ```text
//! file    := { blank | comment | section | entry }*
//! comment := '#' .... end of line
//! section := '[' name ']'
//! entry   := key '=' value        # value: scalar, word, or
//!                                 # whitespace-separated scalar list
//! ```
//!
//! Sections and keys (defaults in parentheses):
//!
//! ```text
//! [model]      mu, a (auto), n_modes, s (0.8), grid_points (4·n_modes)
//! [initial]    preset (equilibrium) = equilibrium | fourier-polynomial |
//!                  bump | random-smooth
//!              theta0 (1.0), amplitude (0.1), seed (0), decay (3.0),
//!              width (0.4), u/v/theta (coefficient lists), size (none)
//! [integrator] method (etd_rk2) = etd_rk2 | rk4, dt (1e-3),
//!              t_end (10.0), record_every (10)
//! [duhamel]    t_end (5.0), dt (1e-3), tol (1e-10), max_iter (300),
//!              n_split (auto)
//! [eigen]      n_min (16), n_max (1024), points (13)
//! [fit]        quantity (hs_theta_dev), window (auto | "t_lo t_hi")
//! ```
//!
//! `a = auto` resolves to the equilibrium temperature of the initial
//! state; `size = x` rescales the deviation coefficients so the largest
//! `H^s` seminorm equals `x`. Unknown sections or keys are errors, and
//! all parse errors carry the offending line number.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use heatstring::integrator::{IntegratorConfig, Method, NormColumn};
use heatstring::presets::InitialCondition;
use heatstring::spectral::theta_infinity;
use heatstring::{ModelParams, SpectralState};

#[derive(Debug)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config error at line {l}: {}", self.message),
            None => write!(f, "config error: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(line: Option<usize>, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        message: message.into(),
    })
}

/// Raw sectioned key-value data with line provenance.
struct RawConfig {
    sections: BTreeMap<String, BTreeMap<String, (String, usize)>>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut sections: BTreeMap<String, BTreeMap<String, (String, usize)>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(p) => &raw_line[..p],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = match name.strip_suffix(']') {
                    Some(n) => n.trim(),
                    None => return err(Some(line_no), "unterminated section header"),
                };
                if name.is_empty() {
                    return err(Some(line_no), "empty section name");
                }
                sections.entry(name.to_string()).or_default();
                current = Some(name.to_string());
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(
                    Some(line_no),
                    format!("expected `key = value`, got `{line}`"),
                );
            };
            let Some(section) = &current else {
                return err(Some(line_no), "entry before any [section]");
            };
            let key = key.trim().to_string();
            let entry = (value.trim().to_string(), line_no);
            if sections
                .get_mut(section)
                .unwrap()
                .insert(key.clone(), entry)
                .is_some()
            {
                return err(Some(line_no), format!("duplicate key `{key}`"));
            }
        }
        Ok(Self { sections })
    }

    fn section(&self, name: &str) -> Option<&BTreeMap<String, (String, usize)>> {
        self.sections.get(name)
    }
}

/// Typed view over one section that tracks which keys were consumed.
struct Section<'a> {
    name: &'a str,
    entries: Option<&'a BTreeMap<String, (String, usize)>>,
    used: Vec<&'a str>,
}

impl<'a> Section<'a> {
    fn get(&mut self, key: &'a str) -> Option<&'a (String, usize)> {
        self.used.push(key);
        self.entries.and_then(|m| m.get(key))
    }

    fn f64(&mut self, key: &'a str, default: f64) -> Result<f64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some((v, line)) => v.parse().map_err(|_| ConfigError {
                line: Some(*line),
                message: format!("`{key}` must be a number, got `{v}`"),
            }),
        }
    }

    fn usize(&mut self, key: &'a str, default: usize) -> Result<usize, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some((v, line)) => v.parse().map_err(|_| ConfigError {
                line: Some(*line),
                message: format!("`{key}` must be a non-negative integer, got `{v}`"),
            }),
        }
    }

    fn u64(&mut self, key: &'a str, default: u64) -> Result<u64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some((v, line)) => v.parse().map_err(|_| ConfigError {
                line: Some(*line),
                message: format!("`{key}` must be an unsigned integer, got `{v}`"),
            }),
        }
    }

    fn word(&mut self, key: &'a str, default: &str) -> (String, Option<usize>) {
        match self.get(key) {
            None => (default.to_string(), None),
            Some((v, line)) => (v.clone(), Some(*line)),
        }
    }

    fn list(&mut self, key: &'a str) -> Result<Vec<f64>, ConfigError> {
        match self.get(key) {
            None => Ok(Vec::new()),
            Some((v, line)) => v
                .split_whitespace()
                .map(|tok| {
                    tok.parse().map_err(|_| ConfigError {
                        line: Some(*line),
                        message: format!("`{key}` list entry `{tok}` is not a number"),
                    })
                })
                .collect(),
        }
    }

    fn finish(self) -> Result<(), ConfigError> {
        if let Some(entries) = self.entries {
            for (key, (_, line)) in entries {
                if !self.used.contains(&key.as_str()) {
                    return err(
                        Some(*line),
                        format!("unknown key `{key}` in section [{}]", self.name),
                    );
                }
            }
        }
        Ok(())
    }
}

/// Fully resolved experiment configuration.
#[derive(Debug)]
pub struct ExperimentConfig {
    pub params: ModelParams,
    pub initial: SpectralState,
    pub theta_inf: f64,
    pub integrator: IntegratorConfig,
    pub duhamel_t_end: f64,
    pub duhamel_dt: f64,
    pub duhamel_tol: f64,
    pub duhamel_max_iter: usize,
    pub n_split: Option<usize>,
    pub eigen_n_min: usize,
    pub eigen_n_max: usize,
    pub eigen_points: usize,
    pub fit_quantity: NormColumn,
    pub fit_window: Option<(f64, f64)>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path, seed_override: Option<u64>) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::from_str(&text, seed_override)
    }

    pub fn from_str(text: &str, seed_override: Option<u64>) -> Result<Self, ConfigError> {
        let raw = RawConfig::parse(text)?;
        for name in raw.sections.keys() {
            if !["model", "initial", "integrator", "duhamel", "eigen", "fit"]
                .contains(&name.as_str())
            {
                return err(None, format!("unknown section [{name}]"));
            }
        }

        let mut model = Section {
            name: "model",
            entries: raw.section("model"),
            used: Vec::new(),
        };
        let mu = model.f64("mu", 1.0)?;
        let n_modes = model.usize("n_modes", 16)?;
        let s = model.f64("s", 0.8)?;
        let grid_points = model.usize("grid_points", 4 * n_modes)?;
        let (a_word, a_line) = model.word("a", "auto");
        model.finish()?;

        let mut init = Section {
            name: "initial",
            entries: raw.section("initial"),
            used: Vec::new(),
        };
        let (preset, preset_line) = init.word("preset", "equilibrium");
        let theta0 = init.f64("theta0", 1.0)?;
        let amplitude = init.f64("amplitude", 0.1)?;
        let config_seed = init.u64("seed", 0)?;
        let seed = seed_override.unwrap_or(config_seed);
        let decay = init.f64("decay", 3.0)?;
        let width = init.f64("width", 0.4)?;
        let u = init.list("u")?;
        let v = init.list("v")?;
        let theta = init.list("theta")?;
        let size = init.f64("size", f64::NAN)?;
        init.finish()?;

        let ic = match preset.as_str() {
            "equilibrium" => InitialCondition::Equilibrium { theta0 },
            "fourier-polynomial" => InitialCondition::FourierPolynomial {
                theta0,
                u,
                v,
                theta,
            },
            "bump" => InitialCondition::Bump {
                theta0,
                amplitude,
                width,
            },
            "random-smooth" => InitialCondition::RandomSmooth {
                theta0,
                amplitude,
                seed,
                decay,
            },
            other => {
                return err(preset_line, format!("unknown preset `{other}`"));
            }
        };

        // a = auto needs the initial state; build with a placeholder first.
        let params_tmp =
            ModelParams::with_unrestricted_s(mu, 1.0, n_modes, s.max(0.0), grid_points).map_err(
                |e| ConfigError {
                    line: None,
                    message: e.to_string(),
                },
            )?;
        let mut state = heatstring::presets::build(&ic, &params_tmp).map_err(|e| ConfigError {
            line: None,
            message: e.to_string(),
        })?;
        if size.is_finite() {
            state = heatstring::presets::rescale_to_size(&state, &params_tmp, size);
        }
        let theta_inf = theta_infinity(&state, &params_tmp);
        let a = if a_word == "auto" {
            theta_inf
        } else {
            a_word.parse().map_err(|_| ConfigError {
                line: a_line,
                message: format!("`a` must be a number or `auto`, got `{a_word}`"),
            })?
        };
        let params = if (0.75..1.0).contains(&s) {
            ModelParams::new(mu, a, n_modes, s, grid_points)
        } else {
            ModelParams::with_unrestricted_s(mu, a, n_modes, s, grid_points)
        }
        .map_err(|e| ConfigError {
            line: None,
            message: e.to_string(),
        })?;

        let mut integ = Section {
            name: "integrator",
            entries: raw.section("integrator"),
            used: Vec::new(),
        };
        let (method_word, method_line) = integ.word("method", "etd_rk2");
        let method = match method_word.as_str() {
            "etd_rk2" => Method::EtdRk2,
            "rk4" => Method::Rk4,
            other => return err(method_line, format!("unknown method `{other}`")),
        };
        let dt = integ.f64("dt", 1e-3)?;
        let t_end = integ.f64("t_end", 10.0)?;
        let record_every = integ.usize("record_every", 10)?;
        integ.finish()?;
        let integrator =
            IntegratorConfig::new(t_end, dt, method, record_every).map_err(|e| ConfigError {
                line: None,
                message: e.to_string(),
            })?;

        let mut duh = Section {
            name: "duhamel",
            entries: raw.section("duhamel"),
            used: Vec::new(),
        };
        let duhamel_t_end = duh.f64("t_end", 5.0)?;
        let duhamel_dt = duh.f64("dt", 1e-3)?;
        let duhamel_tol = duh.f64("tol", 1e-10)?;
        let duhamel_max_iter = duh.usize("max_iter", 300)?;
        let (split_word, split_line) = duh.word("n_split", "auto");
        let n_split = match split_word.as_str() {
            "auto" => None,
            other => Some(other.parse().map_err(|_| ConfigError {
                line: split_line,
                message: format!("`n_split` must be an integer or `auto`, got `{other}`"),
            })?),
        };
        duh.finish()?;

        let mut eig = Section {
            name: "eigen",
            entries: raw.section("eigen"),
            used: Vec::new(),
        };
        let eigen_n_min = eig.usize("n_min", 16)?;
        let eigen_n_max = eig.usize("n_max", 1024)?;
        let eigen_points = eig.usize("points", 13)?;
        eig.finish()?;
        if eigen_n_min < 1 || eigen_n_max <= eigen_n_min || eigen_points < 3 {
            return err(None, "need 1 <= n_min < n_max and points >= 3 in [eigen]");
        }

        let mut fit = Section {
            name: "fit",
            entries: raw.section("fit"),
            used: Vec::new(),
        };
        let (quantity_word, quantity_line) = fit.word("quantity", "hs_theta_dev");
        let fit_quantity = match quantity_word.as_str() {
            "energy" => NormColumn::Energy,
            "hs_u_x" => NormColumn::HsUx,
            "hs_u_t" => NormColumn::HsUt,
            "hs_theta_dev" => NormColumn::HsThetaDev,
            "theta0_dev" => NormColumn::Theta0Dev,
            other => return err(quantity_line, format!("unknown fit quantity `{other}`")),
        };
        let (window_word, window_line) = fit.word("window", "auto");
        let fit_window = if window_word == "auto" {
            None
        } else {
            let parts: Vec<&str> = window_word.split_whitespace().collect();
            if parts.len() != 2 {
                return err(
                    window_line,
                    "window must be `auto` or two numbers `t_lo t_hi`",
                );
            }
            let lo: f64 = parts[0].parse().map_err(|_| ConfigError {
                line: window_line,
                message: "bad window t_lo".into(),
            })?;
            let hi: f64 = parts[1].parse().map_err(|_| ConfigError {
                line: window_line,
                message: "bad window t_hi".into(),
            })?;
            Some((lo, hi))
        };
        fit.finish()?;

        Ok(Self {
            params,
            initial: state,
            theta_inf,
            integrator,
            duhamel_t_end,
            duhamel_dt,
            duhamel_tol,
            duhamel_max_iter,
            n_split,
            eigen_n_min,
            eigen_n_max,
            eigen_points,
            fit_quantity,
            fit_window,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = ExperimentConfig::from_str("[model]\nn_modes = 8\n", None).unwrap();
        assert_eq!(cfg.params.n_modes, 8);
        assert_eq!(cfg.params.grid_points, 32);
        assert_eq!(cfg.integrator.record_every, 10);
        assert!((cfg.theta_inf - 1.0).abs() < 1e-15);
        assert!((cfg.params.a - 1.0).abs() < 1e-15); // auto = theta_inf
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "[model]\nn_modes = 8\nmu = fast\n";
        let e = ExperimentConfig::from_str(bad, None).unwrap_err();
        assert_eq!(e.line, Some(3));

        let unknown = "[model]\nwarp = 9\n";
        let e = ExperimentConfig::from_str(unknown, None).unwrap_err();
        assert_eq!(e.line, Some(2));

        let orphan = "n_modes = 8\n";
        let e = ExperimentConfig::from_str(orphan, None).unwrap_err();
        assert_eq!(e.line, Some(1));
    }

    #[test]
    fn seed_override_wins() {
        let text = "[initial]\npreset = random-smooth\nseed = 1\n";
        let a = ExperimentConfig::from_str(text, None).unwrap();
        let b = ExperimentConfig::from_str(text, Some(2)).unwrap();
        assert_ne!(a.initial, b.initial);
    }

    #[test]
    fn fourier_polynomial_lists() {
        let text = "[model]\nn_modes = 4\n[initial]\npreset = fourier-polynomial\nu = 0.5 0.25\ntheta = 0.1\n";
        let cfg = ExperimentConfig::from_str(text, None).unwrap();
        assert_eq!(cfg.initial.u, vec![0.5, 0.25, 0.0, 0.0]);
        assert_eq!(cfg.initial.theta, vec![0.1, 0.0, 0.0, 0.0]);
    }
}
