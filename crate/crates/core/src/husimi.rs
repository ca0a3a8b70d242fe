//! Husimi Q-function of the cavity field.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::dynamics::SymmetricWavefunction;
use crate::numerics::{coherent_coefficient_series, C64};

/// `Q(β) = (1/π) Σ_i |Σ_n d_{n+i-1}(β*) X_i^{(n)}|²` with
/// `d_k(z) = e^{-|z|²/2} z^k/√(k!)`.
pub fn q_value(psi: &SymmetricWavefunction, beta: C64) -> f64 {
    (0..4).map(|i| coherent_coefficient_series(beta, i, &psi.component(i)).norm_sqr()).sum::<f64>() / PI
}

/// Rectangular window of the β plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn square(half: f64) -> Self {
        Self { re_min: -half, re_max: half, im_min: -half, im_max: half }
    }
}

/// Q values on an `nx × ny` lattice including the window edges.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    /// `values[iy * nx + ix]`
    pub values: Vec<f64>,
}

/// A local maximum of a Q grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub re: f64,
    pub im: f64,
    pub height: f64,
}

impl QGrid {
    pub fn dx(&self) -> f64 {
        (self.window.re_max - self.window.re_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.window.im_max - self.window.im_min) / (self.ny - 1) as f64
    }

    pub fn re_at(&self, ix: usize) -> f64 {
        self.window.re_min + ix as f64 * self.dx()
    }

    pub fn im_at(&self, iy: usize) -> f64 {
        self.window.im_min + iy as f64 * self.dy()
    }

    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    /// Riemann sum `Σ Q·dx·dy`; close to 1 when the window holds the state.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.dx() * self.dy()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Grid point of the global maximum.
    pub fn argmax(&self) -> Peak {
        let (k, &h) = self.values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("grid is never empty");
        Peak { re: self.re_at(k % self.nx), im: self.im_at(k / self.nx), height: h }
    }

    /// CSV with `# key=value` metadata lines, a `re,im,q` header and one row
    /// per grid point (17 significant digits).
    pub fn to_csv(&self, metadata: &[(&str, String)]) -> String {
        let mut out = String::new();
        let w = &self.window;
        let _ = writeln!(out, "# window={:?},{:?},{:?},{:?}", w.re_min, w.re_max, w.im_min, w.im_max);
        let _ = writeln!(out, "# resolution={}x{}", self.nx, self.ny);
        for (k, v) in metadata {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str("re,im,q\n");
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", self.re_at(ix), self.im_at(iy), self.at(ix, iy));
            }
        }
        out
    }

    /// Parses the output of [`QGrid::to_csv`].
    pub fn from_csv(text: &str) -> Option<QGrid> {
        let mut window = None;
        let mut res = None;
        let mut values = Vec::new();
        let mut seen_header = false;
        for line in text.lines() {
            if let Some(meta) = line.strip_prefix("# ") {
                let (k, v) = meta.split_once('=')?;
                match k {
                    "window" => {
                        let p: Vec<f64> = v.split(',').map(|s| s.parse().ok()).collect::<Option<_>>()?;
                        if p.len() != 4 {
                            return None;
                        }
                        window = Some(Window { re_min: p[0], re_max: p[1], im_min: p[2], im_max: p[3] });
                    }
                    "resolution" => {
                        let (a, b) = v.split_once('x')?;
                        res = Some((a.parse().ok()?, b.parse().ok()?));
                    }
                    _ => {}
                }
            } else if line == "re,im,q" {
                seen_header = true;
            } else if seen_header && !line.is_empty() {
                values.push(line.rsplit(',').next()?.parse().ok()?);
            }
        }
        let (nx, ny) = res?;
        if values.len() != nx * ny {
            return None;
        }
        Some(QGrid { window: window?, nx, ny, values })
    }
}

/// Evaluates [`q_value`] on every lattice point; rows run in parallel.
pub fn q_grid(psi: &SymmetricWavefunction, window: Window, resolution: (usize, usize)) -> QGrid {
    let (nx, ny) = resolution;
    assert!(nx >= 2 && ny >= 2, "q_grid needs at least 2x2 points");
    let mut grid = QGrid { window, nx, ny, values: vec![0.0; nx * ny] };
    let (dx, dy) = (grid.dx(), grid.dy());
    let components: Vec<Vec<C64>> = (0..4).map(|i| psi.component(i)).collect();
    grid.values.par_chunks_mut(nx).enumerate().for_each(|(iy, row)| {
        let im = window.im_min + iy as f64 * dy;
        for (ix, q) in row.iter_mut().enumerate() {
            let beta = C64::new(window.re_min + ix as f64 * dx, im);
            *q = components
                .iter()
                .enumerate()
                .map(|(i, amps)| coherent_coefficient_series(beta, i, amps).norm_sqr())
                .sum::<f64>()
                / PI;
        }
    });
    grid
}

/// Local maxima above `floor` under 8-neighbour comparison, highest first.
///
/// Neighbours that come earlier in row-major order must be strictly lower,
/// later ones lower or equal, so a flat plateau reports one point.
pub fn peak_census(grid: &QGrid, floor: f64) -> Vec<Peak> {
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let mut peaks = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let h = grid.at(ix as usize, iy as usize);
            if h <= floor {
                continue;
            }
            let mut is_peak = true;
            'nb: for dy in -1..=1 {
                for dx in -1..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (jx, jy) = (ix + dx, iy + dy);
                    if jx < 0 || jy < 0 || jx >= nx || jy >= ny {
                        continue;
                    }
                    let g = grid.at(jx as usize, jy as usize);
                    let earlier = (dy, dx) < (0, 0);
                    if g > h || (earlier && g == h) {
                        is_peak = false;
                        break 'nb;
                    }
                }
            }
            if is_peak {
                peaks.push(Peak { re: grid.re_at(ix as usize), im: grid.im_at(iy as usize), height: h });
            }
        }
    }
    peaks.sort_by(|a, b| b.height.total_cmp(&a.height));
    peaks
}

/// Signed angle of a peak relative to the initial field centre `alpha0`, in
/// `(-π, π]`.
pub fn angular_offset(peak: &Peak, alpha0: C64) -> f64 {
    let z = C64::new(peak.re, peak.im) / alpha0;
    z.arg()
}

/// The six snapshot times `0, π√n̄/3, 2π√n̄/3, π√n̄, 4π√n̄/3, 2π√n̄`.
pub fn characteristic_times(nbar: f64) -> [f64; 6] {
    let r = nbar.sqrt();
    [0.0, PI * r / 3.0, 2.0 * PI * r / 3.0, PI * r, 4.0 * PI * r / 3.0, 2.0 * PI * r]
}
