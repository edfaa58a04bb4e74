//! Optional key=value configuration file, overridden by flags.
//!
//! ```text
//!   # solver tolerances
//!   residual_tol = 1e-12
//!   fd_grid_sizes = 400,800,1600
//! ```

use indefspec_core::SolverConfig;
use std::path::Path;

/// Flag-level overrides collected from the command line.
#[derive(Debug, Default, Clone)]
pub struct ConfigOverrides {
    pub residual_tol: Option<f64>,
    pub bracket_width_tol: Option<f64>,
    pub quad_rel_tol: Option<f64>,
    pub pole_exclusion: Option<f64>,
    pub continuation_steps: Option<usize>,
    pub fd_grid_sizes: Option<Vec<usize>>,
}

pub fn parse_grid_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid grid size '{tok}'"))
        })
        .collect()
}

/// Loads the config file (if given), applies the flag overrides, and
/// validates the result.
pub fn resolve(file: Option<&Path>, overrides: &ConfigOverrides) -> Result<SolverConfig, String> {
    let mut config = SolverConfig::default();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        apply_file(&mut config, &text)?;
    }
    if let Some(v) = overrides.residual_tol {
        config.residual_tol = v;
    }
    if let Some(v) = overrides.bracket_width_tol {
        config.bracket_width_tol = v;
    }
    if let Some(v) = overrides.quad_rel_tol {
        config.quad_rel_tol = v;
    }
    if let Some(v) = overrides.pole_exclusion {
        config.pole_exclusion = v;
    }
    if let Some(v) = overrides.continuation_steps {
        config.continuation_steps = v;
    }
    if let Some(v) = &overrides.fd_grid_sizes {
        config.fd_grid_sizes = v.clone();
    }
    config.validate()?;
    Ok(config)
}

fn apply_file(config: &mut SolverConfig, text: &str) -> Result<(), String> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| format!("config line {}: invalid {what} '{value}'", lineno + 1);
        match key {
            "residual_tol" => config.residual_tol = value.parse().map_err(|_| bad("number"))?,
            "bracket_width_tol" => {
                config.bracket_width_tol = value.parse().map_err(|_| bad("number"))?
            }
            "quad_rel_tol" => config.quad_rel_tol = value.parse().map_err(|_| bad("number"))?,
            "pole_exclusion" => config.pole_exclusion = value.parse().map_err(|_| bad("number"))?,
            "continuation_steps" => {
                config.continuation_steps = value.parse().map_err(|_| bad("integer"))?
            }
            "fd_grid_sizes" => config.fd_grid_sizes = parse_grid_list(value)?,
            other => return Err(format!("config line {}: unknown key '{other}'", lineno + 1)),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_and_flag_precedence() {
        let mut config = SolverConfig::default();
        apply_file(
            &mut config,
            "# comment\nresidual_tol = 1e-11\nfd_grid_sizes = 100, 200\n",
        )
        .unwrap();
        assert_eq!(config.residual_tol, 1e-11);
        assert_eq!(config.fd_grid_sizes, vec![100, 200]);

        let overrides = ConfigOverrides {
            residual_tol: Some(5e-13),
            ..Default::default()
        };
        let resolved = resolve(None, &overrides).unwrap();
        assert_eq!(resolved.residual_tol, 5e-13);
    }

    #[test]
    fn rejects_unknown_keys_and_odd_grids() {
        let mut config = SolverConfig::default();
        assert!(apply_file(&mut config, "no_such_key = 1\n").is_err());
        let overrides = ConfigOverrides {
            fd_grid_sizes: Some(vec![401]),
            ..Default::default()
        };
        assert!(resolve(None, &overrides).is_err());
    }
}
