//! Command-line frontend for the Blaschke tongue atlas.
//!
//! Subcommands: `root`, `trace`, `tip`, `slice`, `probe`, `index`,
//! `render-param`, `render-dyn`, `reproduce`. Validation failures exit
//! with code 2, solver failures with code 3; both print a JSON error
//! object on stderr.

mod complexarg;
mod config;
mod reproduce;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use blaschke::cycle::TongueType;
use blaschke::index::{diagnose_pair, index_multiplier, index_residue};
use blaschke::locus::{
    extended_tongue_slice, find_root, find_tip_of, tip_probe, trace_boundary_with, BoundarySide,
    LocusError, TraceSettings,
};
use blaschke::map::BlaschkeMap;
use blaschke::render::{
    rasterize_dynamical, rasterize_parameter, scan_dynamical_plane, scan_parameter_plane,
    ScanSpec,
};
use blaschke::report::{write_curve_csv, LocusReport, ProbeReport, SliceReport};

use complexarg::{format_complex, parse_complex};
use config::FileConfig;

#[derive(Parser)]
#[command(
    name = "blaschke-atlas",
    version,
    about = "Tongues of the degree-4 Blaschke family: parabolic loci, indices and plane scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for artifacts (created if missing).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Residual tolerance override for the locus solvers.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker-pool size hint for renders.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Flat key=value config file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the root of the tongue (p, k) on |a| = 2.
    Root {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u64,
    },
    /// Trace one side of the boundary of the tongue (p, k) up to its tip.
    Trace {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u64,
        /// `left` or `right`.
        #[arg(long)]
        side: String,
        /// Radius continuation step.
        #[arg(long, default_value_t = 1e-3)]
        r_step: f64,
    },
    /// Solve the multiplicity-3 tip system of the tongue (p, k).
    Tip {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u64,
    },
    /// Slice the extended fixed tongue at radius r in (1, 2].
    Slice {
        #[arg(long)]
        r: f64,
    },
    /// Locate the three fixed points of B^p near a tip and diagnose them.
    Probe {
        /// Parameter in RE+IMi form.
        #[arg(long)]
        a: String,
        #[arg(long)]
        p: u32,
    },
    /// Holomorphic index of a fixed point of B^p, residue and multiplier form.
    Index {
        /// Parameter in RE+IMi form.
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 1)]
        p: u32,
        /// Fixed point in RE+IMi form.
        #[arg(long)]
        z: String,
        /// Contour radius.
        #[arg(long, default_value_t = 0.05)]
        radius: f64,
    },
    /// Scan the parameter plane.
    RenderParam {
        /// Rectangle center in RE+IMi form.
        #[arg(long, default_value = "0")]
        center: String,
        #[arg(long, default_value_t = 8.0)]
        width: f64,
        #[arg(long, default_value_t = 8.0)]
        height: f64,
        #[arg(long)]
        pixels: Option<u32>,
        #[arg(long)]
        max_iters: Option<usize>,
        /// Also write a PNG next to the PPM.
        #[arg(long)]
        png: bool,
        /// Also dump the per-pixel class grid as CSV.
        #[arg(long)]
        grid_csv: bool,
    },
    /// Scan the dynamical plane of B_a.
    RenderDyn {
        /// Parameter in RE+IMi form.
        #[arg(long)]
        a: String,
        #[arg(long, default_value = "0")]
        center: String,
        #[arg(long, default_value_t = 3.2)]
        width: f64,
        #[arg(long, default_value_t = 3.2)]
        height: f64,
        #[arg(long)]
        pixels: Option<u32>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        png: bool,
        #[arg(long)]
        grid_csv: bool,
    },
    /// Re-render one of the atlas figures.
    Reproduce {
        /// One of: fig2, fig3a, fig4, fig5a, fig5b, fig5c, fig5d, fig6.
        figure: String,
        #[arg(long)]
        pixels: Option<u32>,
        #[arg(long)]
        png: bool,
    },
}

#[derive(Debug)]
enum CliErrorKind {
    Validation,
    Solver,
}

#[derive(Debug)]
struct CliError {
    kind: CliErrorKind,
    message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        Self { kind: CliErrorKind::Validation, message: message.into() }
    }

    fn solver(message: impl std::fmt::Display) -> Self {
        Self { kind: CliErrorKind::Solver, message: message.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::solver(format!("io error: {e}"))
    }
}

impl From<LocusError> for CliError {
    fn from(e: LocusError) -> Self {
        match e {
            LocusError::WindingOutOfRange { .. } | LocusError::OutOfAnnulus(_) => {
                CliError::validation(e.to_string())
            }
            other => CliError::solver(other),
        }
    }
}

/// Effective settings after merging the config file and the flags.
struct Context {
    out: PathBuf,
    tol: f64,
    pixels: u32,
    max_iters: usize,
    png: bool,
}

impl Context {
    fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => FileConfig::load(path).map_err(CliError::validation)?,
            None => FileConfig::default(),
        };
        let parsed = |key: &str| -> Result<Option<f64>, CliError> {
            file.get_parsed::<f64>(key).map_err(CliError::validation)
        };
        let out = cli
            .out
            .clone()
            .or_else(|| file.get("out").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let tol = cli.tol.or(parsed("tol")?).unwrap_or(1e-10);
        if tol <= 0.0 {
            return Err(CliError::validation("tolerance must be positive"));
        }
        let threads = match cli.threads {
            Some(n) => Some(n),
            None => file
                .get_parsed::<usize>("threads")
                .map_err(CliError::validation)?,
        };
        if let Some(n) = threads {
            if n == 0 {
                return Err(CliError::validation("threads must be positive"));
            }
            // Ignore failure if a global pool already exists.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        let pixels = file
            .get_parsed::<u32>("pixels")
            .map_err(CliError::validation)?
            .unwrap_or(400);
        let max_iters = file
            .get_parsed::<usize>("max_iters")
            .map_err(CliError::validation)?
            .unwrap_or(2000);
        let png = file
            .get_parsed::<bool>("png")
            .map_err(CliError::validation)?
            .unwrap_or(false);

        fs::create_dir_all(&out)
            .map_err(|e| CliError::validation(format!("cannot create output dir: {e}")))?;
        // Check writability before any compute.
        let probe = out.join(".atlas-write-probe");
        fs::write(&probe, b"ok")
            .map_err(|e| CliError::validation(format!("output dir not writable: {e}")))?;
        let _ = fs::remove_file(&probe);

        Ok(Self { out, tol, pixels, max_iters, png })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::solver(format!("serialization failed: {e}")))?;
    fs::write(path, json + "\n")?;
    Ok(())
}

fn parse_side(s: &str) -> Result<BoundarySide, CliError> {
    match s {
        "left" => Ok(BoundarySide::Left),
        "right" => Ok(BoundarySide::Right),
        other => Err(CliError::validation(format!(
            "side must be left or right, got {other:?}"
        ))),
    }
}

fn tongue(p: u32, k: u64) -> Result<TongueType, CliError> {
    if p == 0 || p >= 60 {
        return Err(CliError::validation("period must be in 1..60"));
    }
    if k > (1u64 << p) - 2 {
        return Err(CliError::validation(format!(
            "k = {k} out of range for period {p} (need 0 <= k <= 2^p - 2)"
        )));
    }
    Ok(TongueType::new(k, p))
}

fn parse_complex_arg(label: &str, s: &str) -> Result<Complex64, CliError> {
    parse_complex(s).map_err(|e| CliError::validation(format!("--{label}: {e}")))
}

fn write_raster(
    ctx: &Context,
    stem: &str,
    raster: &blaschke::render::Raster,
    png: bool,
) -> Result<PathBuf, CliError> {
    let ppm_path = ctx.path(&format!("{stem}.ppm"));
    let mut file = fs::File::create(&ppm_path)?;
    raster.write_ppm(&mut file)?;
    if png || ctx.png {
        raster
            .write_png(&ctx.path(&format!("{stem}.png")))
            .map_err(CliError::solver)?;
    }
    Ok(ppm_path)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Context::resolve(&cli)?;
    match cli.command {
        Command::Root { p, k } => {
            tongue(p, k)?;
            let root = find_root(p, k)?;
            let report = LocusReport::from_root(&root);
            let path = ctx.path(&format!("root_p{p}_k{k}.json"));
            write_json(&path, &report)?;
            println!(
                "root p={p} k={k}: a = {} (alpha = {:.12}), residual {:.3e} -> {}",
                format_complex(root.a()),
                root.alpha,
                root.residual,
                path.display()
            );
        }
        Command::Trace { p, k, side, r_step } => {
            let tau = tongue(p, k)?;
            let side = parse_side(&side)?;
            if !(r_step > 0.0 && r_step < 1.0) {
                return Err(CliError::validation("r-step must be in (0, 1)"));
            }
            let settings = TraceSettings {
                r_step,
                residual_tol: ctx.tol,
                ..TraceSettings::default()
            };
            let curve = trace_boundary_with(tau, side, &settings)?;
            let path = ctx.path(&format!("trace_p{p}_k{k}_{side}.csv"));
            let mut file = fs::File::create(&path)?;
            write_curve_csv(&curve, &mut file).map_err(CliError::solver)?;
            let tip = curve.samples.last().unwrap();
            println!(
                "trace tau={} side={side}: {} samples, ends at a = {} -> {}",
                tau,
                curve.samples.len(),
                format_complex(tip.a()),
                path.display()
            );
        }
        Command::Tip { p, k } => {
            let tau = tongue(p, k)?;
            let tip = find_tip_of(tau)?;
            let report = LocusReport::from_tip(tau, &tip);
            let path = ctx.path(&format!("tip_p{p}_k{k}.json"));
            write_json(&path, &report)?;
            println!(
                "tip tau={}: a = {} (r = {:.12}, alpha = {:.3e}, x = {:.3e}), residuals {:.2e}/{:.2e}/{:.2e} -> {}",
                tau,
                format_complex(tip.point.a()),
                tip.point.r,
                tip.point.alpha,
                tip.point.x,
                tip.residuals[0],
                tip.residuals[1],
                tip.residuals[2],
                path.display()
            );
        }
        Command::Slice { r } => {
            let slice = extended_tongue_slice(r)?;
            let report = SliceReport::from_slice(&slice);
            let path = ctx.path(&format!("slice_r{r}.json"));
            write_json(&path, &report)?;
            let minus = match report.alpha_minus_one {
                Some(alpha) => format!("{alpha:.9}"),
                None => "none".into(),
            };
            println!(
                "slice r={r}: alpha_plus_one = {:.9}, alpha_minus_one = {minus}, {} profile samples -> {}",
                report.alpha_plus_one,
                report.profile.len(),
                path.display()
            );
        }
        Command::Probe { a, p } => {
            let a = parse_complex_arg("a", &a)?;
            if p == 0 || p >= 60 {
                return Err(CliError::validation("period must be in 1..60"));
            }
            let probe = tip_probe(a, p)?;
            let report = diagnose_pair(&probe).map_err(CliError::solver)?;
            let dto = ProbeReport::from_report(&report);
            let path = ctx.path(&format!("probe_p{p}.json"));
            write_json(&path, &dto)?;
            println!(
                "probe a={} p={p}: classification {} (eta = {:.9}, |rho| = {:.9}, pair index sum = {:.6}) -> {}",
                format_complex(a),
                dto.classification,
                report.eta,
                report.rho_plus.norm(),
                report.pair_index_sum,
                path.display()
            );
        }
        Command::Index { a, p, z, radius } => {
            let a = parse_complex_arg("a", &a)?;
            let z = parse_complex_arg("z", &z)?;
            if !(radius > 0.0) {
                return Err(CliError::validation("radius must be positive"));
            }
            let map = BlaschkeMap::new(a);
            let residue = index_residue(&map, p as usize, z, radius).map_err(CliError::solver)?;
            let rho = map.multiplier(z, p as usize).map_err(CliError::solver)?;
            let multiplier_form = index_multiplier(rho).ok();
            let mut obj = serde_json::Map::new();
            obj.insert("a_re".into(), a.re.into());
            obj.insert("a_im".into(), a.im.into());
            obj.insert("p".into(), p.into());
            obj.insert("z_re".into(), z.re.into());
            obj.insert("z_im".into(), z.im.into());
            obj.insert("radius".into(), radius.into());
            obj.insert("rho_re".into(), rho.re.into());
            obj.insert("rho_im".into(), rho.im.into());
            obj.insert("residue_re".into(), residue.re.into());
            obj.insert("residue_im".into(), residue.im.into());
            if let Some(m) = multiplier_form {
                obj.insert("multiplier_form_re".into(), m.re.into());
                obj.insert("multiplier_form_im".into(), m.im.into());
                obj.insert("agreement".into(), (m - residue).norm().into());
            }
            let path = ctx.path(&format!("index_p{p}.json"));
            write_json(&path, &serde_json::Value::Object(obj))?;
            println!(
                "index a={} p={p} z={}: residue = {:.12}+{:.12}i -> {}",
                format_complex(a),
                format_complex(z),
                residue.re,
                residue.im,
                path.display()
            );
        }
        Command::RenderParam {
            center,
            width,
            height,
            pixels,
            max_iters,
            png,
            grid_csv,
        } => {
            let center = parse_complex_arg("center", &center)?;
            let (pixels, max_iters) = (pixels.unwrap_or(ctx.pixels), max_iters.unwrap_or(ctx.max_iters));
            validate_scan(width, height, pixels)?;
            let mut spec = ScanSpec::parameter(center, width, height, pixels, pixels);
            spec.max_iters = max_iters;
            let grid = scan_parameter_plane(&spec).map_err(CliError::solver)?;
            let path = write_raster(&ctx, "render_param", &rasterize_parameter(&grid), png)?;
            if grid_csv {
                let mut file = fs::File::create(ctx.path("render_param_grid.csv"))?;
                grid.write_csv(&mut file)?;
            }
            println!(
                "render-param center={} {}x{} px={pixels}: -> {}",
                format_complex(center),
                width,
                height,
                path.display()
            );
        }
        Command::RenderDyn {
            a,
            center,
            width,
            height,
            pixels,
            max_iters,
            png,
            grid_csv,
        } => {
            let a = parse_complex_arg("a", &a)?;
            let center = parse_complex_arg("center", &center)?;
            let (pixels, max_iters) = (pixels.unwrap_or(ctx.pixels), max_iters.unwrap_or(ctx.max_iters));
            validate_scan(width, height, pixels)?;
            let mut spec = ScanSpec::dynamical(a, center, width, height, pixels, pixels);
            spec.max_iters = max_iters;
            let grid = scan_dynamical_plane(a, &spec).map_err(CliError::solver)?;
            let path = write_raster(&ctx, "render_dyn", &rasterize_dynamical(&grid), png)?;
            if grid_csv {
                let mut file = fs::File::create(ctx.path("render_dyn_grid.csv"))?;
                grid.write_csv(&mut file)?;
            }
            println!(
                "render-dyn a={} px={pixels}: -> {}",
                format_complex(a),
                path.display()
            );
        }
        Command::Reproduce { figure, pixels, png } => {
            if !reproduce::FIGURES.contains(&figure.as_str()) {
                return Err(CliError::validation(format!(
                    "unknown figure {figure:?}; known: {:?}",
                    reproduce::FIGURES
                )));
            }
            let pixels = pixels.unwrap_or(ctx.pixels);
            validate_scan(1.0, 1.0, pixels)?;
            let raster = reproduce::reproduce(&figure, pixels).map_err(CliError::solver)?;
            let path = write_raster(&ctx, &figure, &raster, png)?;
            println!("reproduce {figure} at {pixels}x{pixels} -> {}", path.display());
        }
    }
    Ok(())
}

fn validate_scan(width: f64, height: f64, pixels: u32) -> Result<(), CliError> {
    if !(width > 0.0 && height > 0.0) {
        return Err(CliError::validation("width and height must be positive"));
    }
    if pixels == 0 || pixels > 20_000 {
        return Err(CliError::validation("pixels must be in 1..=20000"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            let json = serde_json::json!({"error": e.to_string(), "kind": "validation"});
            let _ = writeln!(std::io::stderr(), "{json}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (kind, code) = match err.kind {
                CliErrorKind::Validation => ("validation", 2),
                CliErrorKind::Solver => ("solver", 3),
            };
            let json = serde_json::json!({"error": err.message, "kind": kind});
            let _ = writeln!(std::io::stderr(), "{json}");
            ExitCode::from(code)
        }
    }
}
