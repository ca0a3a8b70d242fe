//! Scenario execution and file emission.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use tcm3_core::husimi::characteristic_times;
use tcm3_core::reduced::LEAK_TOL;
use tcm3_core::{
    atomic_density_sym, coherent_amplitudes, entanglement_sample, evolve, initial_amplitudes, inversion_sample, q_grid,
    CoherentField, QGrid, SymmetricWavefunction,
};

use crate::config::Scenario;
use crate::series::{Series, ALL_COLUMNS};
use crate::svg;

/// Abort threshold on `|‖ψ(τ)‖² − ‖ψ(0)‖²|`.
pub const NORM_DRIFT_ABORT: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("numeric invariant violated: {0}")]
    Numeric(String),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    /// Process exit code: 2 for invariant aborts, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Numeric(_) => 2,
            _ => 1,
        }
    }
}

impl From<tcm3_core::Error> for RunError {
    fn from(e: tcm3_core::Error) -> Self {
        RunError::Numeric(e.to_string())
    }
}

/// Worst-case invariant deviations over all samples.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Invariants {
    pub norm_drift: f64,
    pub excitation_drift: f64,
    /// Largest coherence weight that fell past the truncated ladder.
    pub leaked_mass: f64,
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub label: String,
    pub tau: f64,
    pub grid: QGrid,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub scenario: Scenario,
    pub field: CoherentField,
    pub series: Option<Series>,
    pub snapshots: Vec<Snapshot>,
    pub invariants: Invariants,
    pub wall_seconds: f64,
}

impl Simulation {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        self.series.as_ref()?.column(name)
    }
}

fn series_columns(s: &Scenario) -> Vec<&'static str> {
    let p = s.products;
    ALL_COLUMNS
        .iter()
        .copied()
        .filter(|c| match *c {
            "tau" => true,
            "w_total" | "w_single" | "p_ini" => p.inversions,
            "i_f_abc" | "i_fc_ab" | "i_fcb_a" | "c_ab" => p.entanglement,
            _ => p.negativity,
        })
        .collect()
}

struct Sample {
    row: Vec<f64>,
    invariants: Invariants,
}

fn sample(s: &Scenario, psi0: &SymmetricWavefunction, columns: &[&str], tau: f64) -> Result<Sample, RunError> {
    let psi = evolve(psi0, tau - psi0.tau);
    let norm0 = psi0.norm_sqr();
    let mut inv = Invariants {
        norm_drift: (psi.norm_sqr() - norm0).abs(),
        excitation_drift: (psi.mean_excitation() - psi0.mean_excitation()).abs(),
        leaked_mass: 0.0,
    };
    let mut row = vec![tau];
    if s.products.inversions {
        let v = inversion_sample(psi0, &psi)?;
        row.extend([v.w_total, v.w_single, v.p_ini]);
    }
    if s.products.entanglement || s.products.negativity {
        inv.leaked_mass = atomic_density_sym(&psi).leaked_mass;
        let e = entanglement_sample(&psi)?;
        if s.products.entanglement {
            row.extend([e.i_f_abc, e.i_fc_ab, e.i_fcb_a, e.c_ab]);
        }
        if s.products.negativity {
            row.extend([e.n_a_bc, e.n_ab, e.n_abc]);
        }
    }
    debug_assert_eq!(row.len(), columns.len());
    Ok(Sample { row, invariants: inv })
}

fn check(inv: &Invariants, tau: f64) -> Result<(), RunError> {
    if !(inv.norm_drift <= NORM_DRIFT_ABORT) {
        return Err(RunError::Numeric(format!(
            "norm drift {:.3e} at tau={tau} exceeds {NORM_DRIFT_ABORT:e}",
            inv.norm_drift
        )));
    }
    if !(inv.leaked_mass <= LEAK_TOL) {
        return Err(RunError::Numeric(format!(
            "truncation leak {:.3e} at tau={tau} exceeds {LEAK_TOL:e}; tighten tail_tol",
            inv.leaked_mass
        )));
    }
    Ok(())
}

/// Runs the dynamics and every requested product in memory.
pub fn simulate(s: &Scenario) -> Result<Simulation, RunError> {
    if !(s.tau_step > 0.0) || !(s.tau_end > s.tau_start) {
        return Err(RunError::Validation(format!(
            "time grid [{}, {}] step {} is empty",
            s.tau_start, s.tau_end, s.tau_step
        )));
    }
    let started = Instant::now();
    let field = coherent_amplitudes(s.alpha0, s.tail_tol).map_err(|e| RunError::Validation(e.to_string()))?;
    let psi0 = initial_amplitudes(&s.atoms.state(), &field).map_err(|e| RunError::Validation(e.to_string()))?;

    let mut invariants = Invariants::default();
    let mut merge = |inv: &Invariants| {
        invariants.norm_drift = invariants.norm_drift.max(inv.norm_drift);
        invariants.excitation_drift = invariants.excitation_drift.max(inv.excitation_drift);
        invariants.leaked_mass = invariants.leaked_mass.max(inv.leaked_mass);
    };

    let series = if s.products.series() {
        let columns = series_columns(s);
        let times = s.times();
        let samples: Vec<Sample> =
            times.par_iter().map(|&t| sample(s, &psi0, &columns, t)).collect::<Result<_, _>>()?;
        let mut out = Series::new(&columns);
        for (t, smp) in times.iter().zip(samples) {
            check(&smp.invariants, *t)?;
            merge(&smp.invariants);
            out.rows.push(smp.row);
        }
        Some(out)
    } else {
        None
    };

    let mut wanted: Vec<(String, f64)> = Vec::new();
    if s.products.qgrid {
        wanted.push(("qgrid".into(), s.q_tau.unwrap_or(s.tau_start)));
    }
    if s.products.qsnapshots {
        for (k, t) in characteristic_times(s.nbar()).into_iter().enumerate() {
            wanted.push((format!("q_t{k}"), t));
        }
    }
    let mut snapshots = Vec::new();
    for (label, tau) in wanted {
        let psi = evolve(&psi0, tau - psi0.tau);
        let inv = Invariants {
            norm_drift: (psi.norm_sqr() - psi0.norm_sqr()).abs(),
            excitation_drift: (psi.mean_excitation() - psi0.mean_excitation()).abs(),
            leaked_mass: 0.0,
        };
        check(&inv, tau)?;
        merge(&inv);
        let grid = q_grid(&psi, s.window(), s.resolution());
        snapshots.push(Snapshot { label, tau, grid });
    }

    Ok(Simulation {
        scenario: s.clone(),
        field,
        series,
        snapshots,
        invariants,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Writes `contents` to a sibling temporary file and renames it over `path`,
/// so readers see either the old file or the complete new one.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), RunError> {
    let io = |source| RunError::Io { path: path.to_path_buf(), source };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut builder = tempfile::Builder::new();
    builder.prefix(".tcm3-").suffix(".tmp");
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        builder.permissions(fs::Permissions::from_mode(0o644));
    }
    let mut tmp = builder.tempfile_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn manifest(sim: &Simulation) -> String {
    let s = &sim.scenario;
    let c = s.atoms.state().coefficients();
    let fmt_c = |z: tcm3_core::C64| format!("{:?} {:?}", z.re, z.im);
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "# {k}={v}");
    };
    kv("scenario", s.name.clone());
    kv("atoms", s.atoms.label().to_string());
    for (name, z) in ["c_e", "c_w1", "c_w2", "c_g"].iter().zip(c) {
        kv(name, fmt_c(z));
    }
    kv("alpha0", fmt_c(s.alpha0));
    kv("nbar", format!("{:?}", sim.field.nbar));
    kv("tail_tol", format!("{:e}", s.tail_tol));
    kv("n_max", sim.field.n_max.to_string());
    kv("tail_mass", format!("{:e}", sim.field.tail_mass));
    kv("tau_start", format!("{:?}", s.tau_start));
    kv("tau_end", format!("{:?}", s.tau_end));
    kv("tau_step", format!("{:?}", s.tau_step));
    kv("samples", sim.series.as_ref().map_or(0, |x| x.len()).to_string());
    kv("products", s.products.names().join(","));
    for snap in &sim.snapshots {
        kv(&format!("{}_tau", snap.label), format!("{:?}", snap.tau));
    }
    kv("norm_drift", format!("{:e}", sim.invariants.norm_drift));
    kv("excitation_drift", format!("{:e}", sim.invariants.excitation_drift));
    kv("leaked_mass", format!("{:e}", sim.invariants.leaked_mass));
    kv("wall_time_s", format!("{:.3}", sim.wall_seconds));
    kv("version", env!("CARGO_PKG_VERSION").to_string());
    out
}

/// Parses the `# key=value` lines of a manifest.
pub fn read_manifest(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Writes series, Q grids, optional SVGs and the manifest into `dir`.
/// Returns the paths written, in order.
pub fn write_outputs(sim: &Simulation, dir: &Path, with_svg: bool) -> Result<Vec<PathBuf>, RunError> {
    fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.to_path_buf(), source })?;
    let mut written = Vec::new();
    let mut emit = |name: &str, contents: &[u8]| -> Result<(), RunError> {
        let path = dir.join(name);
        write_atomic(&path, contents)?;
        written.push(path);
        Ok(())
    };
    let name = &sim.scenario.name;

    if let Some(series) = &sim.series {
        emit("series.csv", series.to_csv().as_bytes())?;
        if with_svg {
            let groups: [(&str, &[&str], &str); 3] = [
                ("inversions.svg", &["w_total", "w_single", "p_ini"], "inversions"),
                ("entanglement.svg", &["i_f_abc", "i_fc_ab", "i_fcb_a", "c_ab"], "entanglement"),
                ("negativity.svg", &["n_a_bc", "n_ab", "n_abc"], "negativity"),
            ];
            for (file, cols, what) in groups {
                if series.column_index(cols[0]).is_some() {
                    let doc = svg::render_series(series, cols, &format!("{name}: {what}"))
                        .map_err(|e| RunError::Validation(e.to_string()))?;
                    emit(file, doc.as_bytes())?;
                }
            }
        }
    }
    for snap in &sim.snapshots {
        let meta = [("tau", format!("{:?}", snap.tau)), ("scenario", name.clone())];
        emit(&format!("{}.csv", snap.label), snap.grid.to_csv(&meta).as_bytes())?;
        if with_svg {
            let doc = svg::render_grid(&snap.grid, &format!("{name}: Q at τ = {:.3}", snap.tau))
                .map_err(|e| RunError::Validation(e.to_string()))?;
            emit(&format!("{}.svg", snap.label), doc.as_bytes())?;
        }
    }
    emit("manifest.txt", manifest(sim).as_bytes())?;
    Ok(written)
}

pub fn run_scenario(s: &Scenario, dir: &Path, with_svg: bool) -> Result<(Simulation, Vec<PathBuf>), RunError> {
    let sim = simulate(s)?;
    let files = write_outputs(&sim, dir, with_svg)?;
    Ok((sim, files))
}
