//! Subcommand dispatch for the `nanowire` binary.
//!
//! Parameters come from three layers with increasing precedence: built-in
//! defaults, a `key=value` file given with `--config`, and repeated
//! `--set key=value` flags. All outputs go to the `--out` directory.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;

use crate::error::{Error, Result};
use crate::fitting::{
    field_grid, fit_wl, lso_profile, simulate_trace, FitConfig, LsoBound, LsoScan,
    MagnetoTrace, Param,
};
use crate::gpa::{
    compute_phase_map, fft_peaks, line_scan, strain_from_phase, synthesize_lattice,
    unwrap_phase, LatticeRegion, LatticeSpec, PixelPoint, ReciprocalPeak, Rect,
};
use crate::io::{self, fmt_f64};
use crate::morphology::{
    energy_table, facet_dihedral, minimize_aspect_ratio, CrossSectionModel,
};
use crate::tlm::{control_ratio, fit_tlm, DEFAULT_CONTROL_THRESHOLD};
use crate::transport::{
    TransportGeometry, WlModel, WlParams, CONSTANTS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    FitWl,
    SimulateWl,
    Gpa,
    LineScan,
    ShapeMinimize,
    Tlm,
    SynthLattice,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::FitWl,
        Command::SimulateWl,
        Command::Gpa,
        Command::LineScan,
        Command::ShapeMinimize,
        Command::Tlm,
        Command::SynthLattice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::FitWl => "fit-wl",
            Command::SimulateWl => "simulate-wl",
            Command::Gpa => "gpa",
            Command::LineScan => "line-scan",
            Command::ShapeMinimize => "shape-minimize",
            Command::Tlm => "tlm",
            Command::SynthLattice => "synth-lattice",
        }
    }

    fn inputs(self) -> usize {
        match self {
            Command::FitWl | Command::Gpa | Command::LineScan | Command::Tlm => 1,
            Command::SimulateWl | Command::ShapeMinimize | Command::SynthLattice => 0,
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    /// Merged file and command-line parameters.
    pub params: BTreeMap<String, String>,
    pub output_dir: PathBuf,
    pub seed: u64,
}

pub const USAGE: &str = "\
usage: nanowire <command> [inputs...] [--config <path>] [--out <dir>] [--seed <u64>] [--set key=value]...

commands:
  simulate-wl      synthetic magnetoconductance trace        -> trace.csv
  fit-wl <trace>   fit the weak-localization model           -> fit_result.txt, fit_model.dat
  tlm <csv>        contact resistance and resistivity        -> tlm_result.txt, tlm_fit.dat
  synth-lattice    synthetic lattice image                   -> lattice.gpa1
  gpa <raster>     geometric phase strain map                -> strain.gpa1, phase.gpa1
  line-scan <map>  strain profile along a segment            -> profile.dat
  shape-minimize   optimal cross-section aspect ratio        -> energy_vs_r.dat
";

#[derive(Debug, Parser)]
#[command(name = "nanowire", version, about = "Nanowire transport, strain and shape analysis", override_usage = USAGE)]
struct Cli {
    /// Subcommand name.
    command: String,
    /// Input files.
    inputs: Vec<PathBuf>,
    /// key=value parameter file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Parameter override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl RunConfig {
    /// Builds a run configuration from command-line arguments (without the
    /// program name). `Ok(None)` means help or version was printed.
    pub fn from_args<I, S>(args: I) -> std::result::Result<Option<Self>, (i32, String)>
    where
        I: IntoIterator<Item = S>,
        S: Into<std::ffi::OsString> + Clone,
    {
        let argv = std::iter::once(std::ffi::OsString::from("nanowire"))
            .chain(args.into_iter().map(Into::into));
        let cli = match Cli::try_parse_from(argv) {
            Ok(cli) => cli,
            Err(e) => {
                use clap::error::ErrorKind;
                if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                    print!("{e}");
                    return Ok(None);
                }
                return Err((1, format!("{e}")));
            }
        };
        let command: Command = cli
            .command
            .parse()
            .map_err(|m: String| (1, format!("error: {m}\n\n{USAGE}")))?;
        let mut params = BTreeMap::new();
        if let Some(path) = &cli.config {
            let file = io::read_key_values(path).map_err(|e| {
                (2, format!("{} {e}", crate::error::ErrorCategory::Parse.prefix()))
            })?;
            params.extend(file);
        }
        for kv in &cli.set {
            let (k, v) = kv.split_once('=').ok_or_else(|| {
                (1, format!("error: --set expects key=value, got `{kv}`\n\n{USAGE}"))
            })?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        let seed = match cli.seed {
            Some(s) => s,
            None => match params.remove("seed") {
                Some(s) => s.parse().map_err(|_| {
                    (2, format!("{} parameter seed: invalid u64 `{s}`", crate::error::ErrorCategory::Parse.prefix()))
                })?,
                None => 0,
            },
        };
        params.remove("seed");
        Ok(Some(RunConfig {
            command,
            inputs: cli.inputs,
            params,
            output_dir: cli.out,
            seed,
        }))
    }
}

/// Entry point used by the binary; returns the process exit status.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::from_args(args) {
        Ok(Some(c)) => c,
        Ok(None) => return 0,
        Err((code, message)) => {
            eprintln!("{}", message.trim_end());
            return code;
        }
    };
    match run(&config) {
        Ok(summary) => {
            for w in &summary.warnings {
                eprintln!("warning: {w}");
            }
            println!("{}", summary.message);
            0
        }
        Err(e) => {
            let cat = e.category();
            eprintln!("{} {e}", cat.prefix());
            cat.exit_code()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub message: String,
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Typed access to string parameters, tracking which keys were consumed.
struct Params<'a> {
    map: &'a BTreeMap<String, String>,
    used: RefCell<BTreeSet<&'a str>>,
}

impl<'a> Params<'a> {
    fn new(map: &'a BTreeMap<String, String>) -> Self {
        Self {
            map,
            used: RefCell::new(BTreeSet::new()),
        }
    }

    fn raw(&self, key: &str) -> Option<&'a str> {
        let (k, v) = self.map.get_key_value(key)?;
        self.used.borrow_mut().insert(k.as_str());
        Some(v.as_str())
    }

    fn parsed<T: FromStr>(&self, key: &str, what: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|v| {
                v.parse::<T>().map_err(|_| Error::BadValue {
                    key: key.to_string(),
                    message: format!("invalid {what} `{v}`"),
                })
            })
            .transpose()
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        self.parsed(key, "number")
    }

    fn f64(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.opt_f64(key)?.unwrap_or(default))
    }

    fn req_f64(&self, key: &str) -> Result<f64> {
        self.opt_f64(key)?
            .ok_or_else(|| Error::Config(format!("missing required parameter `{key}`")))
    }

    fn usize(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.parsed(key, "count")?.unwrap_or(default))
    }

    fn req_usize(&self, key: &str) -> Result<usize> {
        self.parsed(key, "count")?
            .ok_or_else(|| Error::Config(format!("missing required parameter `{key}`")))
    }

    fn bool(&self, key: &str, default: bool) -> Result<bool> {
        Ok(self.parsed(key, "boolean")?.unwrap_or(default))
    }

    fn string(&self, key: &str, default: &str) -> String {
        self.raw(key).unwrap_or(default).to_string()
    }

    fn unused(&self) -> Vec<String> {
        let used = self.used.borrow();
        self.map
            .keys()
            .filter(|k| !used.contains(k.as_str()))
            .map(|k| format!("unused parameter `{k}`"))
            .collect()
    }
}

struct Output {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Output {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Write {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, bytes: impl AsRef<[u8]>) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|source| Error::Write {
            path: path.clone(),
            source,
        })?;
        self.written.push(path);
        Ok(())
    }
}

pub fn run(config: &RunConfig) -> Result<RunSummary> {
    let expected = config.command.inputs();
    if config.inputs.len() != expected {
        return Err(Error::Config(format!(
            "{} expects {expected} input file(s), got {}",
            config.command.name(),
            config.inputs.len()
        )));
    }
    let params = Params::new(&config.params);
    let mut out = Output::new(&config.output_dir)?;
    let message = match config.command {
        Command::SimulateWl => simulate_wl(config, &params, &mut out)?,
        Command::FitWl => run_fit_wl(config, &params, &mut out)?,
        Command::Gpa => run_gpa(config, &params, &mut out)?,
        Command::LineScan => run_line_scan(config, &params, &mut out)?,
        Command::ShapeMinimize => run_shape(&params, &mut out)?,
        Command::Tlm => run_tlm(config, &params, &mut out)?,
        Command::SynthLattice => run_synth_lattice(config, &params, &mut out)?,
    };
    Ok(RunSummary {
        message,
        written: out.written,
        warnings: params.unused(),
    })
}

const NM: f64 = 1e-9;
const US: f64 = 1e-6;

fn simulate_wl(config: &RunConfig, p: &Params<'_>, out: &mut Output) -> Result<String> {
    let geometry = TransportGeometry::new(p.f64("L", 1.25e-6)?, p.f64("W", 20.0 * NM)?)?;
    let params = WlParams::new(p.f64("l_phi", 130.0 * NM)?, p.opt_f64("l_so")?, geometry)?;
    let grid = field_grid(p.f64("B_min", -8.0)?, p.f64("B_max", 8.0)?, p.usize("n_points", 201)?);
    let sigma = p.f64("noise_sigma", 0.05 * US)?;
    let background = p.f64("background_G", 0.0)?;
    let n_parallel: u32 = p.parsed("n_parallel", "count")?.unwrap_or(1);
    if n_parallel == 0 {
        return Err(Error::Config("n_parallel must be >= 1".into()));
    }
    let per_wire = simulate_trace(&params, background, &grid, sigma, config.seed)?;
    let total = per_wire
        .conductance()
        .iter()
        .map(|g| g * f64::from(n_parallel))
        .collect();
    let mut trace = MagnetoTrace::new(per_wire.field().to_vec(), total)?;
    trace.n_parallel = n_parallel;
    trace.bias_mv = p.f64("bias_mV", 0.0)?;
    trace.temperature_k = p.f64("temperature_K", 1.5)?;
    trace.label = p.string("label", "synthetic");
    out.write("trace.csv", io::write_trace_csv(&trace))?;

    let mut r = String::from("simulate-wl\n");
    writeln!(r, "l_phi = {:.3} nm", params.l_phi() / NM).unwrap();
    match params.l_so() {
        Some(l) => writeln!(r, "l_so = {:.3} nm", l / NM).unwrap(),
        None => writeln!(r, "l_so = none (no spin-orbit term)").unwrap(),
    }
    writeln!(r, "W = {:.3} nm, L = {:.3} nm", geometry.channel_width() / NM, geometry.contact_spacing() / NM).unwrap();
    writeln!(r, "background = {:.6} uS per wire, noise sigma = {:.4} uS", background / US, sigma / US).unwrap();
    writeln!(r, "points = {}, n_parallel = {n_parallel}, seed = {}", grid.len(), config.seed).unwrap();
    out.write("simulate_report.txt", &r)?;
    Ok(format!("wrote {} points to {}", grid.len(), out.dir.join("trace.csv").display()))
}

fn fit_config_from(p: &Params<'_>) -> Result<FitConfig> {
    let model = match p.string("model", "base").as_str() {
        "base" => WlModel::Base,
        "spin_orbit" => WlModel::SpinOrbit,
        other => {
            return Err(Error::BadValue {
                key: "model".into(),
                message: format!("expected base or spin_orbit, got `{other}`"),
            })
        }
    };
    let mut cfg = FitConfig::new(model, p.f64("L", 1.25e-6)?);
    let width = p.f64("W", crate::fitting::DEFAULT_CHANNEL_WIDTH)?;
    cfg = if p.bool("fit_W", false)? {
        cfg.free(Param::Width, width)
    } else {
        cfg.fix(Param::Width, width)
    };
    cfg.initial.insert(Param::LPhi, p.f64("l_phi_init", 100.0 * NM)?);
    if let Some(l_so) = p.opt_f64("l_so_fixed")? {
        cfg = cfg.fix(Param::LSo, l_so);
    } else {
        cfg.initial.insert(Param::LSo, p.f64("l_so_init", 500.0 * NM)?);
    }
    if let Some(bg) = p.opt_f64("background_init")? {
        cfg.initial.insert(Param::Background, bg);
    }
    cfg.max_iterations = p.usize("max_iterations", cfg.max_iterations)?;
    cfg.convergence_tol = p.f64("convergence_tol", cfg.convergence_tol)?;
    cfg.damping_init = p.f64("damping_init", cfg.damping_init)?;
    cfg.field_window = p.opt_f64("field_window")?;
    Ok(cfg)
}

fn model_name(m: WlModel) -> &'static str {
    match m {
        WlModel::Base => "base",
        WlModel::SpinOrbit => "spin_orbit",
    }
}

fn run_fit_wl(config: &RunConfig, p: &Params<'_>, out: &mut Output) -> Result<String> {
    let input = &config.inputs[0];
    let trace = io::parse_trace_csv(input)?;
    let cfg = fit_config_from(p)?;
    let want_bound = p.bool("lso_bound", false)?;
    let confidence = p.f64("confidence", 0.95)?;
    let scan = LsoScan {
        min: p.f64("lso_min", LsoScan::default().min)?,
        max: p.f64("lso_max", LsoScan::default().max)?,
        points_per_decade: p.usize("lso_points_per_decade", LsoScan::default().points_per_decade)?,
        noise_sigma: p.opt_f64("noise_sigma")?,
    };
    let mean_free_path = p.opt_f64("mean_free_path")?;

    let fit = fit_wl(&trace, &cfg)?;
    let profile = if want_bound {
        Some(lso_profile(&trace, &cfg, &scan, confidence)?)
    } else {
        None
    };

    let per_wire = trace.per_wire_conductance();
    let data: Vec<(f64, f64)> = trace.field().iter().copied().zip(per_wire).collect();
    let model: Vec<(f64, f64)> = trace.field().iter().map(|&b| (b, fit.predict(b))).collect();
    out.write("fit_data.dat", io::write_table(["B_T", "G_S"], &data))?;
    out.write("fit_model.dat", io::write_table(["B_T", "G_model_S"], &model))?;
    if let Some(prof) = &profile {
        out.write("lso_profile.dat", io::write_table(["l_so_m", "chi2_S2"], &prof.points))?;
    }

    let mut kv: Vec<(&str, String)> = vec![
        ("model", model_name(fit.model).into()),
        ("converged", fit.converged.to_string()),
        ("n_iterations", fit.n_iterations.to_string()),
        ("n_points", fit.n_points.to_string()),
        ("chi2", fmt_f64(fit.chi2)),
        ("L", fmt_f64(fit.params.geometry().contact_spacing())),
    ];
    for param in Param::ALL {
        if let Some(v) = fit.value(param) {
            kv.push((param.name(), fmt_f64(v)));
        }
        if let Some(e) = fit.std_error(param) {
            let key = match param {
                Param::LPhi => "l_phi_err",
                Param::LSo => "l_so_err",
                Param::Width => "W_err",
                Param::Background => "background_G_err",
            };
            kv.push((key, fmt_f64(e)));
        }
    }
    if let Some(prof) = &profile {
        kv.push(("confidence", fmt_f64(confidence)));
        kv.push((
            "lso_lower_bound",
            match prof.bound {
                LsoBound::Bounded(v) => fmt_f64(v),
                LsoBound::Unbounded => "unbounded".into(),
            },
        ));
    }
    out.write("fit_result.txt", io::write_key_values(&kv))?;

    let mut r = String::from("fit-wl report\n");
    writeln!(r, "input: {}", input.display()).unwrap();
    writeln!(r, "model: {}", model_name(fit.model)).unwrap();
    writeln!(r, "points fitted: {} (conductance divided by n_parallel = {})", fit.n_points, trace.n_parallel).unwrap();
    writeln!(
        r,
        "converged: {} after {} iterations",
        if fit.converged { "yes" } else { "NO" },
        fit.n_iterations
    )
    .unwrap();
    let nm = |param: Param| -> String {
        let v = fit.value(param).unwrap_or(f64::NAN) / NM;
        match fit.std_error(param) {
            Some(e) => format!("{v:.3} ± {:.3} nm", e / NM),
            None => format!("{v:.3} nm (fixed)"),
        }
    };
    writeln!(r, "l_phi = {}", nm(Param::LPhi)).unwrap();
    if fit.params.l_so().is_some() {
        writeln!(r, "l_so = {}", nm(Param::LSo)).unwrap();
    }
    writeln!(r, "W = {}", nm(Param::Width)).unwrap();
    writeln!(r, "L = {:.3} nm (fixed)", fit.params.geometry().contact_spacing() / NM).unwrap();
    match fit.std_error(Param::Background) {
        Some(e) => writeln!(r, "background = {:.6} ± {:.6} uS", fit.background / US, e / US).unwrap(),
        None => writeln!(r, "background = {:.6} uS (fixed)", fit.background / US).unwrap(),
    }
    let g0 = CONSTANTS.conductance_quantum();
    writeln!(
        r,
        "zero-field correction = {:.4} uS ({:.4} G0)",
        (fit.predict(0.0) - fit.background) / US,
        (fit.predict(0.0) - fit.background) / g0
    )
    .unwrap();
    writeln!(r, "residual sum of squares = {:.4e} S^2", fit.chi2).unwrap();
    if let Some(le) = mean_free_path {
        let ok = fit.params.geometry().is_diffusive(le);
        writeln!(
            r,
            "diffusive regime (W >= 5 l_e with l_e = {:.2} nm): {}",
            le / NM,
            if ok { "yes" } else { "NO, model validity questionable" }
        )
        .unwrap();
    }
    if let Some(prof) = &profile {
        match prof.bound {
            LsoBound::Bounded(v) => writeln!(
                r,
                "l_so lower bound ({:.1}% confidence): {:.2} nm",
                confidence * 100.0,
                v / NM
            )
            .unwrap(),
            LsoBound::Unbounded => writeln!(r, "l_so lower bound: unbounded (data uninformative)").unwrap(),
        }
    }
    out.write("fit_report.txt", &r)?;
    let mut msg = format!(
        "l_phi = {:.3} nm{}",
        fit.params.l_phi() / NM,
        fit.std_error(Param::LPhi)
            .map(|e| format!(" ± {:.3} nm", e / NM))
            .unwrap_or_default()
    );
    if !fit.converged {
        msg.push_str(" (not converged)");
    }
    Ok(msg)
}

fn peak_from(p: &Params<'_>) -> Result<ReciprocalPeak> {
    let peak = match (p.opt_f64("gx")?, p.opt_f64("gy")?) {
        (Some(gx), gy) => ReciprocalPeak::with_default_mask(gx, gy.unwrap_or(0.0))?,
        (None, Some(gy)) => ReciprocalPeak::with_default_mask(0.0, gy)?,
        (None, None) => ReciprocalPeak::from_period(
            p.req_f64("period_nm")?,
            p.f64("orientation_deg", 0.0)?,
        )?,
    };
    Ok(match p.opt_f64("mask_sigma")? {
        Some(s) => peak.with_mask_sigma(s)?,
        None => peak,
    })
}

fn run_gpa(config: &RunConfig, p: &Params<'_>, out: &mut Output) -> Result<String> {
    let input = &config.inputs[0];
    let image = io::parse_raster(input)?;
    let peak = peak_from(p)?;
    let reference = Rect::new(
        p.req_usize("ref_row0")?,
        p.req_usize("ref_col0")?,
        p.req_usize("ref_rows")?,
        p.req_usize("ref_cols")?,
    );
    let phase = compute_phase_map(&image, &peak)?;
    let strain = strain_from_phase(&unwrap_phase(&phase), &peak, reference)?;
    out.write("phase.gpa1", io::encode_raster(&phase.raster))?;
    out.write("strain.gpa1", io::encode_raster(&strain.raster))?;

    let trusted: Vec<f64> = (0..strain.raster.rows())
        .flat_map(|r| (0..strain.raster.cols()).map(move |c| (r, c)))
        .filter(|&(r, c)| strain.is_trusted(r, c))
        .map(|(r, c)| strain.raster.get(r, c))
        .collect();
    let (lo, hi) = trusted
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));

    let [gx, gy] = peak.g();
    let mut r = String::from("gpa report\n");
    writeln!(r, "input: {} ({}x{}, {} nm/px)", input.display(), image.raster().rows(), image.raster().cols(), image.raster().pixel_size_nm()).unwrap();
    writeln!(r, "g = ({gx:.5}, {gy:.5}) nm^-1, |g| = {:.5} nm^-1, period = {:.5} nm", peak.magnitude(), 1.0 / peak.magnitude()).unwrap();
    writeln!(r, "mask sigma = {:.5} nm^-1, untrusted border = {} px", peak.mask_sigma(), strain.border_px).unwrap();
    writeln!(r, "reference region: rows {}..{}, cols {}..{}", reference.row0, reference.row0 + reference.rows, reference.col0, reference.col0 + reference.cols).unwrap();
    if trusted.is_empty() {
        writeln!(r, "no trusted pixels (image smaller than twice the border)").unwrap();
    } else {
        writeln!(r, "strain range in trusted area: {:.3}% .. {:.3}%", lo * 100.0, hi * 100.0).unwrap();
    }
    writeln!(r, "strongest Fourier peaks (gx, gy nm^-1):").unwrap();
    for (px, py, m) in fft_peaks(&image, 5) {
        writeln!(r, "  ({px:.5}, {py:.5})  |F| = {m:.4e}").unwrap();
    }
    out.write("gpa_report.txt", &r)?;
    Ok(format!("strain map written to {}", out.dir.join("strain.gpa1").display()))
}

fn run_line_scan(config: &RunConfig, p: &Params<'_>, out: &mut Output) -> Result<String> {
    let map = io::read_raster(&config.inputs[0])?;
    let p0 = PixelPoint::new(p.req_f64("p0_row")?, p.req_f64("p0_col")?);
    let p1 = PixelPoint::new(p.req_f64("p1_row")?, p.req_f64("p1_col")?);
    let width = p.usize("width", 1)?;
    let profile = line_scan(&map, p0, p1, width)?;
    out.write("profile.dat", io::write_table(["distance_nm", "strain"], &profile))?;
    Ok(format!("{} profile samples", profile.len()))
}

fn shape_model_from(p: &Params<'_>) -> Result<CrossSectionModel> {
    let d = CrossSectionModel::default();
    Ok(CrossSectionModel {
        gamma_top: p.f64("gamma_top", d.gamma_top)?,
        gamma_side: p.f64("gamma_side", d.gamma_side)?,
        gamma_interface: p.f64("gamma_interface", d.gamma_interface)?,
        area: p.f64("area", d.area)?,
        misfit: p.f64("misfit", d.misfit)?,
        modulus: p.f64("modulus", d.modulus)?,
        relaxation_k: p.f64("relaxation_k", d.relaxation_k)?,
    })
}

fn run_shape(p: &Params<'_>, out: &mut Output) -> Result<String> {
    let model = shape_model_from(p)?;
    let (r_lo, r_hi) = (p.f64("r_lo", 0.01)?, p.f64("r_hi", 100.0)?);
    let n = p.usize("n_table", 401)?;
    let best = minimize_aspect_ratio(&model, r_lo, r_hi)?;
    let surface_only = minimize_aspect_ratio(&model.without_strain(), r_lo, r_hi)?;
    let table = energy_table(&model, r_lo, r_hi, n)?;
    out.write("energy_vs_r.dat", io::write_table(["aspect_ratio", "energy_J_per_m"], &table))?;
    out.write(
        "shape_result.txt",
        io::write_key_values(&[
            ("aspect_ratio", fmt_f64(best.aspect_ratio)),
            ("energy", fmt_f64(best.energy)),
            ("width", fmt_f64(best.shape.width)),
            ("height", fmt_f64(best.shape.height)),
            ("edge_minimum", best.edge_minimum.to_string()),
            ("aspect_ratio_strain_off", fmt_f64(surface_only.aspect_ratio)),
        ]),
    )?;

    let mut r = String::from("shape-minimize report\n");
    writeln!(r, "gamma_top (111) = {} J/m^2, gamma_side (110) = {} J/m^2, gamma_interface = {} J/m^2", model.gamma_top, model.gamma_side, model.gamma_interface).unwrap();
    writeln!(r, "area = {:.3} nm^2, misfit = {:.4}, modulus = {:.3} GPa, relaxation k = {}", model.area / (NM * NM), model.misfit, model.modulus / 1e9, model.relaxation_k).unwrap();
    writeln!(
        r,
        "side/top facet angle: {:.3} deg",
        facet_dihedral([1, -1, 0], [1, 1, 1])?
    )
    .unwrap();
    writeln!(r, "optimum aspect ratio h/w = {:.6}{}", best.aspect_ratio, if best.edge_minimum { " (AT BRACKET EDGE)" } else { "" }).unwrap();
    writeln!(r, "width = {:.3} nm, height = {:.3} nm", best.shape.width / NM, best.shape.height / NM).unwrap();
    writeln!(r, "energy = {:.6e} J/m", best.energy).unwrap();
    writeln!(r, "surface-only optimum h/w = {:.6}", surface_only.aspect_ratio).unwrap();
    out.write("shape_report.txt", &r)?;
    Ok(format!("optimum aspect ratio {:.6}", best.aspect_ratio))
}

fn run_tlm(config: &RunConfig, p: &Params<'_>, out: &mut Output) -> Result<String> {
    let input = &config.inputs[0];
    let data = io::parse_tlm_csv(input)?;
    let result = fit_tlm(&data)?;
    let control = p.opt_f64("control_R")?;
    let threshold = p.f64("control_threshold", DEFAULT_CONTROL_THRESHOLD)?;
    let comparison = control
        .map(|c| control_ratio(data.mean_resistance(), c, threshold))
        .transpose()?;

    let per_wire = data.per_wire();
    let fitted: Vec<(f64, f64)> = per_wire.iter().map(|&(l, _)| (l, result.predict(l))).collect();
    out.write("tlm_data.dat", io::write_table(["L_m", "R_per_wire_ohm"], &per_wire))?;
    out.write("tlm_fit.dat", io::write_table(["L_m", "R_fit_ohm"], &fitted))?;

    let mut kv = vec![
        ("contact_resistance", fmt_f64(result.contact_resistance)),
        ("resistance_per_length", fmt_f64(result.resistance_per_length)),
        ("r_squared", fmt_f64(result.r_squared)),
        ("n_parallel", data.n_parallel.to_string()),
        ("negative_contact_warning", result.negative_contact_warning.to_string()),
    ];
    if let Some((se_rc, se_rho)) = result.std_errors {
        kv.push(("contact_resistance_err", fmt_f64(se_rc)));
        kv.push(("resistance_per_length_err", fmt_f64(se_rho)));
    }
    if let Some(c) = comparison {
        kv.push(("control_ratio", fmt_f64(c.ratio)));
        kv.push(("conduction_attributed", c.conduction_attributed.to_string()));
    }
    out.write("tlm_result.txt", io::write_key_values(&kv))?;

    let mut r = String::from("tlm report\n");
    writeln!(r, "input: {} ({} points, n_parallel = {})", input.display(), result.n_points, data.n_parallel).unwrap();
    writeln!(r, "convention: R_wire = R_measured * n_parallel = 2 Rc + rho_lin * L").unwrap();
    let err = |i: usize| {
        result
            .std_errors
            .map(|e| format!(" ± {:.4}", if i == 0 { e.0 } else { e.1 * 1e-6 }))
            .unwrap_or_default()
    };
    writeln!(r, "Rc = {:.4}{} ohm per contact per wire", result.contact_resistance, err(0)).unwrap();
    writeln!(r, "rho_lin = {:.4}{} ohm/um per wire", result.resistance_per_length * 1e-6, err(1)).unwrap();
    writeln!(r, "r^2 = {:.6}", result.r_squared).unwrap();
    if result.negative_contact_warning {
        writeln!(r, "WARNING: negative contact resistance (non-physical)").unwrap();
    }
    if let Some(c) = comparison {
        writeln!(
            r,
            "control/sample resistance ratio = {:.4e} ({})",
            c.ratio,
            if c.conduction_attributed { "conduction attributed to the wires" } else { "below threshold" }
        )
        .unwrap();
    }
    out.write("tlm_report.txt", &r)?;
    Ok(format!(
        "Rc = {:.4} ohm, rho_lin = {:.4} ohm/um",
        result.contact_resistance,
        result.resistance_per_length * 1e-6
    ))
}

fn run_synth_lattice(config: &RunConfig, p: &Params<'_>, out: &mut Output) -> Result<String> {
    let rows = p.usize("rows", 512)?;
    let cols = p.usize("cols", 512)?;
    let period = p.f64("period_nm", 0.35)?;
    let orientation = p.f64("orientation_deg", 0.0)?;
    let amplitude = p.f64("amplitude", 1.0)?;
    let mut background = LatticeRegion::uniform(period, orientation);
    background.amplitude = amplitude;
    let mut regions = vec![background];
    if let Some(win_rows) = p.parsed::<usize>("win_rows", "count")? {
        let window = Rect::new(
            p.req_usize("win_row0")?,
            p.req_usize("win_col0")?,
            win_rows,
            p.req_usize("win_cols")?,
        );
        regions.push(background.window(window, p.f64("strain", -0.025)?));
    }
    let spec = LatticeSpec {
        rows,
        cols,
        pixel_size_nm: p.f64("pixel_size_nm", 0.035)?,
        regions,
        noise_sigma: p.f64("noise_sigma", 0.0)?,
        seed: config.seed,
    };
    let image = synthesize_lattice(&spec)?;
    out.write("lattice.gpa1", io::encode_raster(image.raster()))?;
    Ok(format!("{rows}x{cols} lattice written to {}", out.dir.join("lattice.gpa1").display()))
}
