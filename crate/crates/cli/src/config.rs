//! Line-oriented `key = value` scenario files.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use tcm3_core::{AtomicInitState, Preset, Window, C64, DEFAULT_TAIL_TOL};

/// Deviation from unit norm tolerated in custom atomic coefficients before
/// they are renormalized.
pub const CUSTOM_NORM_TOL: f64 = 1e-9;

const KEYS: &[&str] = &[
    "name",
    "atoms",
    "c_e",
    "c_w1",
    "c_w2",
    "c_g",
    "alpha0",
    "tau_start",
    "tau_end",
    "tau_step",
    "products",
    "q_window",
    "q_resolution",
    "q_tau",
    "tail_tol",
    "output_dir",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self { line: Some(line), message: message.into() }
    }

    fn global(message: impl Into<String>) -> Self {
        Self { line: None, message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Atoms {
    Preset(Preset),
    Custom(AtomicInitState),
}

impl Atoms {
    pub fn state(&self) -> AtomicInitState {
        match self {
            Atoms::Preset(p) => p.atoms(),
            Atoms::Custom(s) => *s,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Atoms::Preset(p) => p.name(),
            Atoms::Custom(_) => "custom",
        }
    }
}

/// Which outputs a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Products {
    pub inversions: bool,
    pub entanglement: bool,
    pub negativity: bool,
    pub qgrid: bool,
    pub qsnapshots: bool,
}

impl Products {
    pub const NAMES: [&'static str; 5] = ["inversions", "entanglement", "negativity", "qgrid", "qsnapshots"];

    pub fn series(&self) -> bool {
        self.inversions || self.entanglement || self.negativity
    }

    pub fn names(&self) -> Vec<&'static str> {
        let flags = [self.inversions, self.entanglement, self.negativity, self.qgrid, self.qsnapshots];
        Self::NAMES.iter().zip(flags).filter(|(_, on)| *on).map(|(n, _)| *n).collect()
    }

    fn set(&mut self, name: &str) -> bool {
        match name {
            "inversions" => self.inversions = true,
            "entanglement" => self.entanglement = true,
            "negativity" => self.negativity = true,
            "qgrid" => self.qgrid = true,
            "qsnapshots" => self.qsnapshots = true,
            _ => return false,
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub atoms: Atoms,
    pub alpha0: C64,
    pub tau_start: f64,
    pub tau_end: f64,
    pub tau_step: f64,
    pub products: Products,
    pub q_window: Option<Window>,
    pub q_resolution: Option<(usize, usize)>,
    /// Time of the single `qgrid` product; defaults to `tau_start`.
    pub q_tau: Option<f64>,
    pub tail_tol: f64,
    pub output_dir: Option<PathBuf>,
}

impl Scenario {
    /// Scenario for a preset with every default filled in.
    pub fn preset(preset: Preset) -> Self {
        let alpha0 = C64::new(10.0, 0.0);
        Self {
            name: preset.name().to_string(),
            atoms: Atoms::Preset(preset),
            alpha0,
            tau_start: 0.0,
            tau_end: default_tau_end(alpha0),
            tau_step: 0.05,
            products: Products { inversions: true, entanglement: true, negativity: true, ..Default::default() },
            q_window: None,
            q_resolution: None,
            q_tau: None,
            tail_tol: DEFAULT_TAIL_TOL,
            output_dir: None,
        }
    }

    pub fn nbar(&self) -> f64 {
        self.alpha0.norm_sqr()
    }

    /// Sample times `tau_start + k·tau_step` up to `tau_end`.
    pub fn times(&self) -> Vec<f64> {
        let count = ((self.tau_end - self.tau_start) / self.tau_step * (1.0 + 1e-12)).floor() as usize;
        (0..=count).map(|k| self.tau_start + k as f64 * self.tau_step).collect()
    }

    /// `[-(|α0|+5), |α0|+5]²` unless overridden.
    pub fn window(&self) -> Window {
        self.q_window.unwrap_or_else(|| Window::square(self.alpha0.norm() + 5.0))
    }

    pub fn resolution(&self) -> (usize, usize) {
        self.q_resolution.unwrap_or((201, 201))
    }
}

/// One revival period `2π√n̄` plus a margin.
pub fn default_tau_end(alpha0: C64) -> f64 {
    2.0 * PI * alpha0.norm() + 2.0
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v.parse().map_err(|_| ConfigError::at(line, format!("{key}: expected a number, got {v:?}")))?;
    if !x.is_finite() {
        return Err(ConfigError::at(line, format!("{key}: value must be finite")));
    }
    Ok(x)
}

/// `re im` or a lone real part.
fn parse_complex(line: usize, key: &str, v: &str) -> Result<C64, ConfigError> {
    let parts: Vec<&str> = v.split_whitespace().collect();
    match parts.as_slice() {
        [re] => Ok(C64::new(parse_f64(line, key, re)?, 0.0)),
        [re, im] => Ok(C64::new(parse_f64(line, key, re)?, parse_f64(line, key, im)?)),
        _ => Err(ConfigError::at(line, format!("{key}: expected \"re\" or \"re im\", got {v:?}"))),
    }
}

pub fn parse_config(text: &str) -> Result<Scenario, ConfigError> {
    let mut s = Scenario::preset(Preset::Excited);
    let mut name = None;
    let mut tau_end = None;
    let mut products = None;
    let mut custom: [Option<(usize, C64)>; 4] = [None; 4];
    let mut custom_requested = None;
    let mut seen: Vec<(&str, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, format!("expected \"key = value\", got {content:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let key =
            *KEYS.iter().find(|k| **k == key).ok_or_else(|| ConfigError::at(line, format!("unknown key {key:?}")))?;
        if let Some((_, first)) = seen.iter().find(|(k, _)| *k == key) {
            return Err(ConfigError::at(line, format!("{key} already set on line {first}")));
        }
        seen.push((key, line));
        if value.is_empty() {
            return Err(ConfigError::at(line, format!("{key}: missing value")));
        }

        match key {
            "name" => name = Some(value.to_string()),
            "atoms" => {
                if value == "custom" {
                    custom_requested = Some(line);
                } else {
                    let p = Preset::from_name(value).ok_or_else(|| {
                        ConfigError::at(line, format!("atoms: expected eee, ghz, w or custom, got {value:?}"))
                    })?;
                    s.atoms = Atoms::Preset(p);
                }
            }
            "c_e" | "c_w1" | "c_w2" | "c_g" => {
                let slot = ["c_e", "c_w1", "c_w2", "c_g"].iter().position(|k| *k == key).unwrap();
                custom[slot] = Some((line, parse_complex(line, key, value)?));
            }
            "alpha0" => s.alpha0 = parse_complex(line, key, value)?,
            "tau_start" => s.tau_start = parse_f64(line, key, value)?,
            "tau_end" => tau_end = Some((line, parse_f64(line, key, value)?)),
            "tau_step" => {
                let x = parse_f64(line, key, value)?;
                if x <= 0.0 {
                    return Err(ConfigError::at(line, format!("tau_step must be positive, got {x}")));
                }
                s.tau_step = x;
            }
            "products" => {
                let mut p = Products::default();
                for item in value.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                    if !p.set(item) {
                        return Err(ConfigError::at(
                            line,
                            format!("products: unknown product {item:?} (known: {})", Products::NAMES.join(", ")),
                        ));
                    }
                }
                products = Some(p);
            }
            "q_window" => {
                let v: Vec<f64> =
                    value.split_whitespace().map(|t| parse_f64(line, key, t)).collect::<Result<_, _>>()?;
                if v.len() != 4 || v[0] >= v[1] || v[2] >= v[3] {
                    return Err(ConfigError::at(
                        line,
                        "q_window: expected \"re_min re_max im_min im_max\" with min < max",
                    ));
                }
                s.q_window = Some(Window { re_min: v[0], re_max: v[1], im_min: v[2], im_max: v[3] });
            }
            "q_resolution" => {
                let parts: Vec<&str> =
                    value.split(|c: char| c == 'x' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
                let dims: Option<Vec<usize>> = parts.iter().map(|t| t.parse().ok()).collect();
                match dims.as_deref() {
                    Some([nx, ny]) if *nx >= 2 && *ny >= 2 => s.q_resolution = Some((*nx, *ny)),
                    _ => {
                        return Err(ConfigError::at(
                            line,
                            format!("q_resolution: expected \"NxM\" with N, M >= 2, got {value:?}"),
                        ))
                    }
                }
            }
            "q_tau" => s.q_tau = Some(parse_f64(line, key, value)?),
            "tail_tol" => {
                let x = parse_f64(line, key, value)?;
                if !(x > 0.0 && x <= 1e-6) {
                    return Err(ConfigError::at(line, format!("tail_tol must lie in (0, 1e-6], got {x}")));
                }
                s.tail_tol = x;
            }
            "output_dir" => s.output_dir = Some(PathBuf::from(value)),
            _ => unreachable!("key list and match arms disagree"),
        }
    }

    match custom_requested {
        Some(line) => {
            let c: Vec<C64> = custom.iter().map(|c| c.map_or(C64::new(0.0, 0.0), |(_, z)| z)).collect();
            let norm_sqr: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            if (norm_sqr.sqrt() - 1.0).abs() > CUSTOM_NORM_TOL {
                return Err(ConfigError::at(
                    line,
                    format!("custom atoms are not normalized (norm {:.12})", norm_sqr.sqrt()),
                ));
            }
            let k = 1.0 / norm_sqr.sqrt();
            let state = AtomicInitState::new(c[0] * k, c[1] * k, c[2] * k, c[3] * k)
                .map_err(|e| ConfigError::at(line, e.to_string()))?;
            s.atoms = Atoms::Custom(state);
        }
        None => {
            if let Some((line, _)) = custom.iter().flatten().min_by_key(|(l, _)| *l) {
                return Err(ConfigError::at(*line, "atomic coefficients need \"atoms = custom\""));
            }
        }
    }

    s.name = name.unwrap_or_else(|| s.atoms.label().to_string());
    if let Some(p) = products {
        s.products = p;
    }
    match tau_end {
        Some((line, end)) => {
            if end <= s.tau_start {
                return Err(ConfigError::at(line, format!("tau_end ({end}) must exceed tau_start ({})", s.tau_start)));
            }
            s.tau_end = end;
        }
        None => {
            s.tau_end = default_tau_end(s.alpha0);
            if s.tau_end <= s.tau_start {
                return Err(ConfigError::global(format!(
                    "tau_start ({}) lies past the default tau_end ({}); set tau_end",
                    s.tau_start, s.tau_end
                )));
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let s = parse_config("# nothing here\n\n").unwrap();
        assert_eq!(s.atoms, Atoms::Preset(Preset::Excited));
        assert_eq!(s.alpha0, C64::new(10.0, 0.0));
        assert_eq!(s.tau_start, 0.0);
        assert!((s.tau_end - (20.0 * PI + 2.0)).abs() < 1e-12);
        assert_eq!(s.tau_step, 0.05);
        assert_eq!(s.name, "eee");
    }

    #[test]
    fn preset_by_name() {
        let s = parse_config("atoms = ghz").unwrap();
        assert_eq!(s.atoms, Atoms::Preset(Preset::Ghz));
        assert_eq!(s.name, "ghz");
    }

    #[test]
    fn custom_state() {
        let s = parse_config("atoms = custom\nc_e = 0.5 0\nc_w1 = 0.5 0\nc_w2 = 0.5 0\nc_g = 0.5 0").unwrap();
        let c = s.atoms.state().coefficients();
        assert!(c.iter().all(|z| (z.norm() - 0.5).abs() < 1e-15));
    }

    #[test]
    fn custom_state_is_renormalized_within_tolerance() {
        let s = parse_config("atoms = custom\nc_e = 0.6000000000001\nc_g = 0 0.8").unwrap();
        assert!((s.atoms.state().norm_sqr() - 1.0).abs() < 1e-15);
        let err = parse_config("atoms = custom\nc_e = 0.6\nc_g = 0 0.81").unwrap_err();
        assert_eq!(err.line, Some(1));
    }

    #[test]
    fn rejections_carry_line_numbers() {
        assert_eq!(parse_config("tau_step = -1").unwrap_err().line, Some(1));
        assert_eq!(parse_config("atoms = w\n\nspeed = 3").unwrap_err().line, Some(3));
        assert_eq!(parse_config("alpha0 = ten").unwrap_err().line, Some(1));
        assert_eq!(parse_config("tau_start = 5\ntau_end = 4").unwrap_err().line, Some(2));
        assert_eq!(parse_config("atoms = w\nc_e = 1").unwrap_err().line, Some(2));
        assert_eq!(parse_config("products = inversions, wigner").unwrap_err().line, Some(1));
        assert_eq!(parse_config("atoms = w\natoms = ghz").unwrap_err().line, Some(2));
        assert_eq!(parse_config("just words").unwrap_err().line, Some(1));
    }

    #[test]
    fn products_and_grid_options() {
        let s =
            parse_config("products = inversions qsnapshots\nq_window = -12 12 -12 12\nq_resolution = 81x61").unwrap();
        assert_eq!(s.products.names(), vec!["inversions", "qsnapshots"]);
        assert_eq!(s.window(), Window::square(12.0));
        assert_eq!(s.resolution(), (81, 61));
    }

    #[test]
    fn time_grid_includes_end() {
        let s = parse_config("tau_start = 1\ntau_end = 2\ntau_step = 0.1").unwrap();
        let t = s.times();
        assert_eq!(t.len(), 11);
        assert!((t[10] - 2.0).abs() < 1e-12);
    }
}
