//! Command line arguments and the run configuration built from them.

use clap::{Args, ValueEnum};
use darboux::operator::{linspace, Potential};
use darboux::soliton::{poschl_teller_potential, two_soliton_potential, TwoSolitonParams};
use darboux::lame::lame_potential;
use darboux::{Lattice, C64};
use num_complex::Complex64;

use crate::usage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Lame,
    TwoSoliton,
    PoschlTeller,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.n)
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.x_min, self.x_max, self.n)
    }
}

/// `x_min:x_max:n_points`.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(format!("grid must be x_min:x_max:n_points, got '{s}'"));
    };
    let x_min: f64 = a.trim().parse().map_err(|e| format!("x_min: {e}"))?;
    let x_max: f64 = b.trim().parse().map_err(|e| format!("x_max: {e}"))?;
    let n: usize = n.trim().parse().map_err(|e| format!("n_points: {e}"))?;
    if n < 2 {
        return Err(format!("grid needs at least 2 points, got {n}"));
    }
    if !x_min.is_finite() || !x_max.is_finite() || x_min >= x_max {
        return Err(format!("grid needs finite x_min < x_max, got {x_min} and {x_max}"));
    }
    Ok(Grid { x_min, x_max, n })
}

/// `1.5`, `-2i`, `0.4+0.9i` or `re,im`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let s = s.trim();
    if let Some((re, im)) = s.split_once(',') {
        let re: f64 = re.trim().parse().map_err(|e| format!("'{s}': {e}"))?;
        let im: f64 = im.trim().parse().map_err(|e| format!("'{s}': {e}"))?;
        return Ok(C64::new(re, im));
    }
    s.parse::<Complex64>().map_err(|e| format!("'{s}' is not a complex number: {e}"))
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Family::Lame)]
    pub family: Family,
    /// Real half-period ω.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Imaginary magnitude of ω′: `--omega-prime 2` means ω′ = 2i.
    #[arg(long, default_value_t = 2.0)]
    pub omega_prime: f64,
    /// Full complex ω′, overriding --omega-prime.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub omega_prime_complex: Option<C64>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha1: f64,
    #[arg(long, default_value_t = 2.0)]
    pub alpha2: f64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    pub beta1: C64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    pub beta2: C64,
    /// Polynomial coefficients c0,c1,... of a custom potential.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Vec<f64>,
    /// x_min:x_max:n_points.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-5:5:201")]
    pub grid: Grid,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Multiplies every default tolerance (overrides DARBOUX_TOLERANCE_SCALE).
    #[arg(long)]
    pub tolerance_scale: Option<f64>,
}

impl Common {
    pub fn lattice(&self) -> anyhow::Result<Lattice> {
        Ok(match self.omega_prime_complex {
            Some(wp) => Lattice::from_half_periods(C64::new(self.omega, 0.0), wp)?,
            None => Lattice::rectangular(self.omega, self.omega_prime)?,
        })
    }

    pub fn soliton_params(&self) -> anyhow::Result<TwoSolitonParams> {
        Ok(TwoSolitonParams::complex(self.alpha1, self.alpha2, self.beta1, self.beta2)?)
    }

    pub fn potential(&self) -> anyhow::Result<Potential> {
        Ok(match self.family {
            Family::Lame => lame_potential(&self.lattice()?),
            Family::PoschlTeller => poschl_teller_potential(),
            Family::TwoSoliton => two_soliton_potential(&self.soliton_params()?),
            Family::Custom => {
                if self.coeffs.is_empty() {
                    return Err(usage("the custom family needs --coeffs c0,c1,..."));
                }
                Potential::polynomial("custom polynomial", self.coeffs.clone())
            }
        })
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    /// Parameter echo for table headers.
    pub fn describe(&self) -> Vec<(String, String)> {
        let name = self.family.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
        let mut m = vec![("family".to_string(), name)];
        match self.family {
            Family::Lame => {
                m.push(("omega".into(), self.omega.to_string()));
                match self.omega_prime_complex {
                    Some(w) => m.push(("omega_prime".into(), w.to_string())),
                    None => m.push(("omega_prime".into(), format!("{}i", self.omega_prime))),
                }
            }
            Family::TwoSoliton => {
                m.push(("alpha1".into(), self.alpha1.to_string()));
                m.push(("alpha2".into(), self.alpha2.to_string()));
                m.push(("beta1".into(), self.beta1.to_string()));
                m.push(("beta2".into(), self.beta2.to_string()));
            }
            Family::Custom => {
                let c: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
                m.push(("coeffs".into(), c.join(",")));
            }
            Family::PoschlTeller => {}
        }
        m.push(("grid".into(), self.grid.to_string()));
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("-3:3:600").unwrap(), Grid { x_min: -3.0, x_max: 3.0, n: 600 });
        assert!(parse_grid("0:1:1").is_err());
        assert!(parse_grid("1:0:10").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn complex_numbers() {
        assert_eq!(parse_complex("-5").unwrap(), C64::new(-5.0, 0.0));
        assert_eq!(parse_complex("0.4+0.9i").unwrap(), C64::new(0.4, 0.9));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("0.3,-1").unwrap(), C64::new(0.3, -1.0));
        assert!(parse_complex("abc").is_err());
    }
}
