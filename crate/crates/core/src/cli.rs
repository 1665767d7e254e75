//! Command-line front end behind the `casimir` binary.
//!
//! Every output carries the resolved run configuration: CSV files start with
//! `#` comment lines, JSON documents embed it under `"config"`. Files are
//! written to a temporary sibling and renamed into place.
//!
//! Exit status: 0 on success, 1 on invalid input or I/O failure, 2 on usage
//! errors, 3 when some separations failed (a `.partial` dump is written).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    fit_deflection_calibration, read_calibration_csv, read_measurements_csv, reduce_measurements,
    synthesize_calibration, synthesize_measurements, voltage_pairs, write_calibration_csv, write_measurements_csv,
    write_summaries_csv, ElectrostaticCalib, Residuals,
};
use crate::lifshitz::{force_values, CurveKind, CurveMetadata, CurveRequest, ForceCurve, HalfSpace, LifshitzConfig};
use crate::materials::{MaterialProfile, PermittivityModel, ProfileSpec};
use crate::{Error, Result};

/// Experimental window, 3 points per nm.
pub const DEFAULT_GRID: &str = "100nm:500nm:1201";
/// Large-separation window used for electrostatic calibration.
pub const DEFAULT_CALIBRATION_GRID: &str = "0.9um:4.9um:41";
pub const CONFIG_DIR_ENV: &str = "CASIMIR_CONFIG_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Units for the human-readable summaries on stderr. Files are always SI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DisplayUnits {
    /// pN, nm, nN per unit, V.
    Lab,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthKind {
    Measurements,
    Calibration,
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(
    name = "casimir",
    version,
    about = "Sphere-plate dispersion forces and force-difference data reduction"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Temperature, K.
    #[arg(long, global = true, default_value_t = 300.0)]
    pub temperature: f64,
    #[arg(long = "tol-matsubara", global = true, default_value_t = 1e-9)]
    pub tol_matsubara: f64,
    #[arg(long = "tol-quad", global = true, default_value_t = 1e-8)]
    pub tol_quad: f64,
    #[arg(long = "max-terms", global = true, default_value_t = 100_000)]
    pub max_terms: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory searched for `<name>.json` profile descriptions.
    #[arg(long = "config-dir", global = true, env = CONFIG_DIR_ENV)]
    pub config_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = DisplayUnits::Lab)]
    pub units: DisplayUnits,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// ε(iξ) of every profile on a logarithmic frequency grid.
    #[command(allow_negative_numbers = true)]
    Permittivity {
        #[arg(long = "xi-min", default_value_t = 1e12)]
        xi_min: f64,
        #[arg(long = "xi-max", default_value_t = 1e17)]
        xi_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Profiles to tabulate (names or JSON files); all four by default.
        #[arg(long = "profile")]
        profiles: Vec<String>,
        /// Optical table (`omega_rad_s,eps1,eps2`) replacing the silicon base model.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Absolute sphere-plate force F(z).
    #[command(allow_negative_numbers = true)]
    Force {
        #[arg(long, default_value = "gold_tabulated")]
        sphere: String,
        /// Plate profile.
        #[arg(long, default_value = "si_illuminated")]
        profile: String,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_parser = parse_length, default_value = "98.9um")]
        radius: f64,
        #[arg(long, default_value = DEFAULT_GRID)]
        grid: String,
    },
    /// ΔF_d(z) = F(illuminated) − F(dark) for both dark-plate models.
    #[command(name = "delta-force", allow_negative_numbers = true)]
    DeltaForce {
        #[arg(long, default_value = "gold_tabulated")]
        sphere: String,
        /// Bright-phase plate profile.
        #[arg(long, default_value = "si_illuminated")]
        profile: String,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_parser = parse_length, default_value = "98.9um")]
        radius: f64,
        #[arg(long, default_value = DEFAULT_GRID)]
        grid: String,
    },
    /// Fit m, z₀, V₀ and the force scale to electrostatic force-distance curves.
    #[command(allow_negative_numbers = true)]
    Calibrate {
        /// Calibration CSV (`z_piezo_m,s_def_units,force_signal_units,v_applied_V`).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_length, default_value = "98.9um")]
        radius: f64,
    },
    /// Remove the electric term from measured ΔF_tot and aggregate per separation.
    #[command(allow_negative_numbers = true)]
    Analyze {
        /// Measurement CSV (`z_m,delta_f_tot_N,v_light_V,v_dark_V`).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_length, default_value = "98.9um")]
        radius: f64,
        #[arg(long = "v0-light", default_value_t = -0.303)]
        v0_light: f64,
        #[arg(long = "v0-dark", default_value_t = -0.225)]
        v0_dark: f64,
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        /// Systematic error, N.
        #[arg(long, default_value_t = 0.09e-12)]
        systematic: f64,
    },
    /// Deterministic synthetic measurement or calibration data.
    #[command(allow_negative_numbers = true)]
    Synth {
        #[arg(long, value_enum, default_value_t = SynthKind::Measurements)]
        kind: SynthKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Gaussian noise per reading: N for measurements, signal units for calibration.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, value_parser = parse_length, default_value = "98.9um")]
        radius: f64,
        /// Separation grid (measurements) or piezo grid (calibration).
        #[arg(long)]
        grid: Option<String>,
        /// Force-difference curve (`z_m,value_N`) used instead of computing one.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, default_value = "gold_tabulated")]
        sphere: String,
        #[arg(long, default_value = "si_illuminated")]
        profile: String,
        #[arg(long, default_value = "si_dark_dielectric")]
        dark: String,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 41)]
        pairs: usize,
        /// Half-width of the bright-phase voltage sweep around V₀^l, V.
        #[arg(long, default_value_t = 0.05)]
        span: f64,
        #[arg(long = "v0-light", default_value_t = -0.303)]
        v0_light: f64,
        #[arg(long = "v0-dark", default_value_t = -0.225)]
        v0_dark: f64,
        /// Calibration: m per deflection unit.
        #[arg(long = "deflection-coeff", value_parser = parse_length, default_value = "137.2nm")]
        deflection_coeff: f64,
        /// Calibration: separation at contact offset.
        #[arg(long, value_parser = parse_length, default_value = "97nm")]
        z0: f64,
        /// Calibration: residual potential, V.
        #[arg(long, default_value_t = -0.171)]
        v0: f64,
        /// Calibration: N per deflection unit.
        #[arg(long = "force-per-signal", default_value_t = 6.16e-9)]
        force_per_signal: f64,
        /// Calibration: applied voltages, V.
        #[arg(long, value_delimiter = ',', default_value = "-0.9,-0.6,-0.4,0.1,0.3,0.5")]
        voltages: Vec<f64>,
    },
}

impl RunConfig {
    pub fn lifshitz(&self) -> LifshitzConfig {
        LifshitzConfig {
            temperature: self.temperature,
            matsubara_rel_tol: self.tol_matsubara,
            matsubara_max_terms: self.max_terms,
            quad_rel_tol: self.tol_quad,
            ..LifshitzConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.lifshitz().validate()?;
        let inputs: Vec<&PathBuf> = match &self.command {
            Command::Calibrate { input, .. } | Command::Analyze { input, .. } => vec![input],
            Command::Synth { truth: Some(t), .. } => vec![t],
            _ => vec![],
        };
        for p in inputs {
            if !p.is_file() {
                return Err(Error::invalid(format!("input file {} does not exist", p.display())));
            }
        }
        match &self.command {
            Command::Force { grid, .. } | Command::DeltaForce { grid, .. } => {
                parse_grid(grid)?;
            }
            Command::Synth { grid: Some(grid), .. } => {
                parse_grid(grid)?;
            }
            Command::Permittivity {
                xi_min, xi_max, points, ..
            } if !(*xi_min > 0.0 && xi_max > xi_min && *points >= 2) => {
                return Err(Error::invalid(
                    "permittivity grid needs 0 < xi-min < xi-max and points >= 2",
                ));
            }
            _ => {}
        }
        Ok(())
    }

    fn command_name(&self) -> &'static str {
        match self.command {
            Command::Permittivity { .. } => "permittivity",
            Command::Force { .. } => "force",
            Command::DeltaForce { .. } => "delta-force",
            Command::Calibrate { .. } => "calibrate",
            Command::Analyze { .. } => "analyze",
            Command::Synth { .. } => "synth",
        }
    }
}

/// Length with an optional unit suffix (m, mm, um/μm, nm, pm); bare numbers are metres.
pub fn parse_length(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    // Divisors rather than factors: 100/1e9 rounds to 1e-7 exactly, 100·1e-9 does not.
    let units = [
        ("nm", 1e9),
        ("um", 1e6),
        ("μm", 1e6),
        ("µm", 1e6),
        ("mm", 1e3),
        ("pm", 1e12),
        ("m", 1.0),
    ];
    let (num, divisor) = units
        .iter()
        .find_map(|(u, f)| s.strip_suffix(u).map(|n| (n, *f)))
        .unwrap_or((s, 1.0));
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a length (expected e.g. 100nm, 1.5um, 2e-7)"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v / divisor)
}

/// `min:max:count` with unit suffixes, e.g. `100nm:500nm:1201`: `count`
/// evenly spaced separations including both ends, in metres.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::invalid(format!(
            "grid `{spec}` must have the form min:max:count"
        )));
    }
    let length = |tok: &str| parse_length(tok).map_err(|e| Error::invalid(format!("grid token {e}")));
    let min = length(parts[0])?;
    let max = length(parts[1])?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("grid token `{}` is not a point count", parts[2])))?;
    if count == 0 {
        return Err(Error::invalid(format!("grid token `{}`: count must be >= 1", parts[2])));
    }
    if !(min > 0.0) {
        return Err(Error::invalid(format!(
            "grid token `{}`: minimum must be > 0",
            parts[0]
        )));
    }
    if !(max > min) {
        return Err(Error::invalid(format!(
            "grid tokens `{}` and `{}`: minimum must be below maximum",
            parts[0], parts[1]
        )));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let step = (max - min) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i == count - 1 { max } else { min + step * i as f64 })
        .collect())
}

/// Resolve a profile argument: an existing JSON file, `<name>.json` in the
/// config directory, or a built-in profile name. `table` overrides the
/// optical table of silicon profiles.
pub fn resolve_profile(arg: &str, table: Option<&Path>, config_dir: Option<&Path>) -> Result<PermittivityModel> {
    let direct = Path::new(arg);
    let from_dir = config_dir
        .map(|d| d.join(format!("{arg}.json")))
        .filter(|p| p.is_file());
    let json = if direct.is_file() {
        Some(direct.to_path_buf())
    } else {
        from_dir
    };
    let mut spec = match &json {
        Some(p) => ProfileSpec::from_json_path(p)?,
        None => {
            let profile = MaterialProfile::parse(arg).ok_or_else(|| {
                Error::invalid(format!(
                    "unknown profile `{arg}` (expected one of {} or a JSON file)",
                    MaterialProfile::ALL.map(|p| p.name()).join(", ")
                ))
            })?;
            ProfileSpec::reference(profile)
        }
    };
    if let Some(t) = table {
        if spec.profile != MaterialProfile::GoldTabulated {
            spec.table_path = Some(std::env::current_dir()?.join(t));
        }
    }
    let base = json.as_deref().and_then(Path::parent);
    let model = spec.build(base)?;
    Ok(match &json {
        Some(_) => model.with_label(arg.trim_end_matches(".json").rsplit('/').next().unwrap_or(arg)),
        None => model,
    })
}

pub(crate) fn write_atomic(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.flush()?;
            tmp.persist(p).map_err(|e| Error::Io(e.error))?;
        }
    }
    Ok(())
}

fn partial_path(out: Option<&Path>) -> Option<PathBuf> {
    out.map(|p| {
        let mut s = p.as_os_str().to_owned();
        s.push(".partial");
        PathBuf::from(s)
    })
}

struct Emitter<'a> {
    cfg: &'a RunConfig,
}

impl Emitter<'_> {
    fn csv_preamble(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        writeln!(buf, "# casimir {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(buf, "# command: {}", self.cfg.command_name())?;
        writeln!(buf, "# config: {}", serde_json::to_string(self.cfg)?)?;
        Ok(buf)
    }

    fn json(&self, data: serde_json::Value) -> Result<Vec<u8>> {
        let doc = serde_json::json!({
            "casimir_version": env!("CARGO_PKG_VERSION"),
            "command": self.cfg.command_name(),
            "config": self.cfg,
            "data": data,
        });
        let mut buf = serde_json::to_vec_pretty(&doc)?;
        buf.push(b'\n');
        Ok(buf)
    }

    /// Rows `z, v₁, v₂, ...`; a failing separation in any column is dropped
    /// and reported, and the surviving rows go to the `.partial` file.
    fn columns(&self, grid: &[f64], names: &[&str], cols: Vec<Vec<Result<f64>>>) -> Result<()> {
        let mut failures = Vec::new();
        let mut rows = Vec::new();
        for (i, &z) in grid.iter().enumerate() {
            let mut row = Vec::with_capacity(cols.len());
            let mut ok = true;
            for c in &cols {
                match &c[i] {
                    Ok(v) => row.push(*v),
                    Err(e) => {
                        ok = false;
                        failures.push(e.to_string());
                    }
                }
            }
            if ok {
                rows.push((z, row));
            }
        }
        let bytes = match self.cfg.format {
            Format::Csv => {
                let mut buf = self.csv_preamble()?;
                for f in &failures {
                    writeln!(buf, "# failed: {f}")?;
                }
                writeln!(buf, "z_m,{}", names.join(","))?;
                for (z, row) in &rows {
                    let vals: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
                    writeln!(buf, "{z:e},{}", vals.join(","))?;
                }
                buf
            }
            Format::Json => {
                let mut obj = serde_json::Map::new();
                obj.insert("z_m".into(), rows.iter().map(|r| r.0).collect::<Vec<_>>().into());
                for (k, name) in names.iter().enumerate() {
                    obj.insert((*name).into(), rows.iter().map(|r| r.1[k]).collect::<Vec<_>>().into());
                }
                obj.insert("failed".into(), failures.clone().into());
                self.json(serde_json::Value::Object(obj))?
            }
        };
        if failures.is_empty() {
            return write_atomic(self.cfg.out.as_deref(), &bytes);
        }
        let partial = partial_path(self.cfg.out.as_deref());
        write_atomic(partial.as_deref(), &bytes)?;
        Err(Error::Incomplete {
            failed: grid.len() - rows.len(),
            total: grid.len(),
            dump: partial.map_or_else(|| "standard output".into(), |p| p.display().to_string()),
        })
    }
}

fn incomplete(err: &Error) -> bool {
    match err {
        Error::Convergence { .. } | Error::Incomplete { .. } => true,
        Error::AtSeparation { source, .. } => incomplete(source),
        _ => false,
    }
}

/// Exit status for an error returned by [`run`].
pub fn exit_code(err: &Error) -> i32 {
    if incomplete(err) {
        3
    } else {
        1
    }
}

fn lab_force(v: f64, units: DisplayUnits) -> String {
    match units {
        DisplayUnits::Lab => format!("{:.4} pN", v * 1e12),
        DisplayUnits::Si => format!("{v:.6e} N"),
    }
}

pub fn run(cfg: &RunConfig) -> Result<()> {
    cfg.validate()?;
    let lcfg = cfg.lifshitz();
    let dir = cfg.config_dir.as_deref();
    let emit = Emitter { cfg };
    match &cfg.command {
        Command::Permittivity {
            xi_min,
            xi_max,
            points,
            profiles,
            table,
        } => {
            let names: Vec<String> = if profiles.is_empty() {
                MaterialProfile::ALL.iter().map(|p| p.name().to_string()).collect()
            } else {
                profiles.clone()
            };
            let models = names
                .iter()
                .map(|n| resolve_profile(n, table.as_deref(), dir))
                .collect::<Result<Vec<_>>>()?;
            let ratio = xi_max / xi_min;
            let xs: Vec<f64> = (0..*points)
                .map(|i| xi_min * ratio.powf(i as f64 / (*points - 1) as f64))
                .collect();
            let rows = xs
                .par_iter()
                .map(|&xi| models.iter().map(|m| m.eval(xi)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let labels: Vec<&str> = models.iter().map(|m| m.label()).collect();
            let bytes = match cfg.format {
                Format::Csv => {
                    let mut buf = emit.csv_preamble()?;
                    writeln!(buf, "xi_rad_s,{}", labels.join(","))?;
                    for (xi, row) in xs.iter().zip(&rows) {
                        let vals: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
                        writeln!(buf, "{xi:e},{}", vals.join(","))?;
                    }
                    buf
                }
                Format::Json => {
                    let mut obj = serde_json::Map::new();
                    obj.insert("xi_rad_s".into(), xs.clone().into());
                    for (k, l) in labels.iter().enumerate() {
                        obj.insert((*l).into(), rows.iter().map(|r| r[k]).collect::<Vec<_>>().into());
                    }
                    emit.json(serde_json::Value::Object(obj))?
                }
            };
            write_atomic(cfg.out.as_deref(), &bytes)
        }
        Command::Force {
            sphere,
            profile,
            table,
            radius,
            grid,
        } => {
            let grid = parse_grid(grid)?;
            let s = HalfSpace::new(resolve_profile(sphere, None, dir)?);
            let p = HalfSpace::new(resolve_profile(profile, table.as_deref(), dir)?);
            let vals = force_values(&grid, *radius, &CurveRequest::Force { sphere: &s, plate: &p }, &lcfg)?;
            emit.columns(&grid, &["force_N"], vec![vals])
        }
        Command::DeltaForce {
            sphere,
            profile,
            table,
            radius,
            grid,
        } => {
            let grid = parse_grid(grid)?;
            let s = HalfSpace::new(resolve_profile(sphere, None, dir)?);
            let light = HalfSpace::new(resolve_profile(profile, table.as_deref(), dir)?);
            let mut cols = Vec::new();
            for dark in [MaterialProfile::SiDarkDielectric, MaterialProfile::SiDarkWithDc] {
                let d = HalfSpace::new(resolve_profile(dark.name(), table.as_deref(), dir)?);
                let req = CurveRequest::Difference {
                    sphere: &s,
                    light: &light,
                    dark: &d,
                };
                cols.push(force_values(&grid, *radius, &req, &lcfg)?);
            }
            if let (Some(Ok(a)), Some(Ok(b))) = (cols[0].first(), cols[1].first()) {
                eprintln!(
                    "z = {:.1} nm: dielectric dark {}, dark with dc {}",
                    grid[0] * 1e9,
                    lab_force(*a, cfg.units),
                    lab_force(*b, cfg.units)
                );
            }
            emit.columns(&grid, &["delta_f_dielectric_N", "delta_f_with_dc_N"], cols)
        }
        Command::Calibrate { input, radius } => {
            let file = std::fs::File::open(input)?;
            let points = read_calibration_csv(file, &input.display().to_string())?;
            let fit = fit_deflection_calibration(&points, *radius)?;
            let (c, e) = (fit.calib, fit.std_errors);
            match cfg.units {
                DisplayUnits::Lab => {
                    eprintln!(
                        "m  = {:.4} ± {:.4} nm/unit",
                        c.deflection_coeff_m * 1e9,
                        e.deflection_coeff_m * 1e9
                    );
                    eprintln!(
                        "z0 = {:.4} ± {:.4} nm",
                        c.contact_separation_z0 * 1e9,
                        e.contact_separation_z0 * 1e9
                    );
                    eprintln!("V0 = {:.5} ± {:.5} V", c.residual_potential_v0, e.residual_potential_v0);
                    eprintln!(
                        "k  = {:.5} ± {:.5} nN/unit",
                        c.force_per_signal * 1e9,
                        e.force_per_signal * 1e9
                    );
                }
                DisplayUnits::Si => eprintln!("{c:?}\n{e:?}"),
            }
            let bytes = match cfg.format {
                Format::Csv => {
                    let mut buf = emit.csv_preamble()?;
                    writeln!(buf, "parameter,value,std_error,unit")?;
                    for (name, v, s, unit) in [
                        (
                            "deflection_coeff_m",
                            c.deflection_coeff_m,
                            e.deflection_coeff_m,
                            "m/unit",
                        ),
                        (
                            "contact_separation_z0",
                            c.contact_separation_z0,
                            e.contact_separation_z0,
                            "m",
                        ),
                        (
                            "residual_potential_V0",
                            c.residual_potential_v0,
                            e.residual_potential_v0,
                            "V",
                        ),
                        ("force_per_signal", c.force_per_signal, e.force_per_signal, "N/unit"),
                    ] {
                        writeln!(buf, "{name},{v:e},{s:e},{unit}")?;
                    }
                    buf
                }
                Format::Json => emit.json(serde_json::to_value(&fit)?)?,
            };
            write_atomic(cfg.out.as_deref(), &bytes)
        }
        Command::Analyze {
            input,
            radius,
            v0_light,
            v0_dark,
            confidence,
            systematic,
        } => {
            let file = std::fs::File::open(input)?;
            let meas = read_measurements_csv(file, &input.display().to_string())?;
            let res = Residuals {
                v0_light: *v0_light,
                v0_dark: *v0_dark,
            };
            let sums = reduce_measurements(&meas, &res, *radius, *confidence, *systematic)?;
            if let Some(s) = sums.first() {
                eprintln!(
                    "{} separations; z = {:.1} nm: ΔF_d = {} ± {} (dof {}, t {:.4})",
                    sums.len(),
                    s.z * 1e9,
                    lab_force(s.mean_delta_fd, cfg.units),
                    lab_force(s.total_error, cfg.units),
                    s.dof,
                    s.t_factor
                );
            }
            let bytes = match cfg.format {
                Format::Csv => {
                    let mut buf = emit.csv_preamble()?;
                    write_summaries_csv(&mut buf, &sums)?;
                    buf
                }
                Format::Json => emit.json(serde_json::to_value(&sums)?)?,
            };
            write_atomic(cfg.out.as_deref(), &bytes)
        }
        Command::Synth {
            kind,
            seed,
            noise,
            radius,
            grid,
            truth,
            sphere,
            profile,
            dark,
            table,
            pairs,
            span,
            v0_light,
            v0_dark,
            deflection_coeff,
            z0,
            v0,
            force_per_signal,
            voltages,
        } => {
            let mut buf = match cfg.format {
                Format::Csv => emit.csv_preamble()?,
                Format::Json => Vec::new(),
            };
            let data = match kind {
                SynthKind::Calibration => {
                    let calib = ElectrostaticCalib::new(*deflection_coeff, *z0, *v0, *force_per_signal)?;
                    let zp = parse_grid(grid.as_deref().unwrap_or(DEFAULT_CALIBRATION_GRID))?;
                    let pts = synthesize_calibration(&calib, *radius, &zp, voltages, *noise, *seed)?;
                    match cfg.format {
                        Format::Csv => {
                            write_calibration_csv(&mut buf, &pts)?;
                            None
                        }
                        Format::Json => Some(serde_json::to_value(&pts)?),
                    }
                }
                SynthKind::Measurements => {
                    let res = Residuals {
                        v0_light: *v0_light,
                        v0_dark: *v0_dark,
                    };
                    let curve = match truth {
                        Some(path) => {
                            let meta = CurveMetadata {
                                sphere: sphere.clone(),
                                plate: profile.clone(),
                                plate_dark: Some(dark.clone()),
                                temperature: cfg.temperature,
                                radius: Some(*radius),
                                config: None,
                            };
                            let f = std::fs::File::open(path)?;
                            ForceCurve::read_csv(f, &path.display().to_string(), CurveKind::ForceDifference, meta)?
                        }
                        None => {
                            let zs = parse_grid(grid.as_deref().unwrap_or(DEFAULT_GRID))?;
                            let s = HalfSpace::new(resolve_profile(sphere, None, dir)?);
                            let l = HalfSpace::new(resolve_profile(profile, table.as_deref(), dir)?);
                            let d = HalfSpace::new(resolve_profile(dark, table.as_deref(), dir)?);
                            let req = CurveRequest::Difference {
                                sphere: &s,
                                light: &l,
                                dark: &d,
                            };
                            crate::lifshitz::force_curve(&zs, *radius, &req, &lcfg)?
                        }
                    };
                    let vp = voltage_pairs(*pairs, &res, *span);
                    let meas = synthesize_measurements(&curve, &vp, &res, *noise, *seed)?;
                    match cfg.format {
                        Format::Csv => {
                            write_measurements_csv(&mut buf, &meas)?;
                            None
                        }
                        Format::Json => Some(serde_json::to_value(&meas)?),
                    }
                }
            };
            let bytes = match data {
                Some(v) => emit.json(v)?,
                None => buf,
            };
            write_atomic(cfg.out.as_deref(), &bytes)
        }
    }
}

fn report(err: &Error) {
    eprintln!("error: {err}");
    let mut src = std::error::Error::source(err);
    while let Some(s) = src {
        eprintln!("  caused by: {s}");
        src = s.source();
    }
}

/// Parse `args` (including the program name), run, and return the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cfg) {
        Ok(()) => 0,
        Err(e) => {
            report(&e);
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::reference;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("100nm:500nm:1201").unwrap();
        assert_eq!(g.len(), 1201);
        assert_eq!(g[0], 1.0e-7);
        assert_eq!(*g.last().unwrap(), 5.0e-7);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!((g[3] - 101e-9).abs() < 1e-20);

        let g = parse_grid("1um:5um:5").unwrap();
        for (a, b) in g.iter().zip([1e-6, 2e-6, 3e-6, 4e-6, 5e-6]) {
            assert!((a - b).abs() < 1e-20);
        }
        assert_eq!(parse_grid("2e-7:3e-7:1").unwrap(), vec![2e-7]);
    }

    #[test]
    fn grid_errors_name_the_token() {
        let msg = |s: &str| parse_grid(s).unwrap_err().to_string();
        assert!(msg("500nm:100nm:3").contains("500nm"));
        assert!(msg("100nm:500xm:3").contains("500xm"));
        assert!(msg("100nm:500nm:abc").contains("abc"));
        assert!(msg("100nm:500nm:0").contains('0'));
        assert!(msg("100nm:500nm").contains("min:max:count"));
    }

    #[test]
    fn lengths() {
        assert_eq!(parse_length("98.9um").unwrap(), 98.9e-6);
        assert_eq!(parse_length("2e-7").unwrap(), 2e-7);
        assert_eq!(parse_length("1.5 mm").unwrap(), 1.5e-3);
        assert_eq!(parse_length("3μm").unwrap(), 3e-6);
        assert!(parse_length("nm").is_err());
    }

    #[test]
    fn profile_resolution() {
        let m = resolve_profile("si-illuminated", None, None).unwrap();
        assert_eq!(m.label(), "si_illuminated");
        assert!(resolve_profile("copper", None, None).is_err());

        let dir = tempfile::tempdir().unwrap();
        let spec = serde_json::json!({
            "profile": "si_dark_dielectric",
            "lorentz": { "eps_inf": 1.035, "eps_static": 11.9, "omega0": 6.6e15 }
        });
        std::fs::write(dir.path().join("custom_si.json"), spec.to_string()).unwrap();
        let m = resolve_profile("custom_si", None, Some(dir.path())).unwrap();
        assert_eq!(m.label(), "custom_si");
        assert_eq!(m.static_permittivity().unwrap(), Some(11.9));
    }

    #[test]
    fn parse_and_validate() {
        let cfg =
            RunConfig::try_parse_from(["casimir", "force", "--grid", "1um:2um:3", "--temperature", "290"]).unwrap();
        assert_eq!(cfg.temperature, 290.0);
        assert!(cfg.validate().is_ok());
        let bad = RunConfig::try_parse_from(["casimir", "analyze", "--input", "/nonexistent/x.csv"]).unwrap();
        assert!(bad.validate().is_err());
        let bad = RunConfig::try_parse_from(["casimir", "--tol-quad", "0.5", "force"]).unwrap();
        assert!(matches!(bad.validate(), Err(Error::Configuration(_))));
        let neg = RunConfig::try_parse_from(["casimir", "analyze", "--input", "x", "--v0-light", "-0.31"]).unwrap();
        assert!(matches!(neg.command, Command::Analyze { v0_light, .. } if v0_light == -0.31));
    }

    #[test]
    fn config_round_trips_into_preamble() {
        let cfg = RunConfig::try_parse_from(["casimir", "synth", "--seed", "9"]).unwrap();
        let pre = String::from_utf8(Emitter { cfg: &cfg }.csv_preamble().unwrap()).unwrap();
        assert!(pre.starts_with("# casimir "));
        let line = pre.lines().find(|l| l.starts_with("# config: ")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&line["# config: ".len()..]).unwrap();
        assert_eq!(v["command"]["name"], "synth");
        assert_eq!(v["command"]["seed"], 9);
        assert_eq!(v["temperature"], 300.0);
    }

    #[test]
    fn default_radius_matches_reference() {
        let cfg = RunConfig::try_parse_from(["casimir", "force"]).unwrap();
        match cfg.command {
            Command::Force { radius, .. } => assert!((radius - reference::SPHERE_RADIUS).abs() < 1e-18),
            _ => unreachable!(),
        }
    }
}
