use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cmapforge::catalog::{build_with_metric, cyclic_shift, preset, preset_names, validate_attributes};
use cmapforge::equalize::auto_metric;
use cmapforge::io::{
    grid_to_grey, map_to_csv, map_to_json, path_from_json, read_grid, read_map, write_grid, write_image,
};
use cmapforge::relief::{default_band, one_on_f_noise, shade, shade_and_drape, spectrum_slope, ShadingParams};
use cmapforge::render::{modulate, render, ModulateDirection, RenderMode, RenderPolicy, ValueRange};
use cmapforge::ternary::{compose, paper_basis, rgb_basis};
use cmapforge::test_images::{cyclic_test_image, linear_test_image, CyclicTestSpec, LinearTestSpec};
use cmapforge::uniformity::analyze_uniformity;
use cmapforge::{Attribute, ColorMap, ContrastMetric, MapPath, RgbColor, ScalarGrid};

#[derive(Parser)]
#[command(
    name = "cmapforge",
    version,
    about = "Perceptually uniform colour maps and the tools to test them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a colour map from a preset or a path file.
    Generate(GenerateArgs),
    /// Resample an existing map so successive entries have equal contrast.
    Equalize(EqualizeArgs),
    /// Report flat spots and discontinuities; exits 1 when any are found.
    Analyze(AnalyzeArgs),
    /// Render the linear or cyclic test image through a map.
    Testimage(TestimageArgs),
    /// Colour a data grid.
    Render(RenderArgs),
    /// Relief-shade a surface, optionally draped with a colour map.
    Shade(ShadeArgs),
    /// Compose three channel grids into one image.
    Ternary(TernaryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Auto,
    Lightness,
    Cie76,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, conflicts_with = "path", required_unless_present_any = ["path", "list"])]
    preset: Option<String>,
    /// JSON path definition.
    #[arg(long)]
    path: Option<PathBuf>,
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Smoothing width in entries of a 256-entry map.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, value_enum, default_value = "auto", conflicts_with = "preset")]
    metric: MetricArg,
    /// Rotate a cyclic map by this fraction of its length.
    #[arg(long)]
    shift: Option<f64>,
    /// .csv or .json; the CSV goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the preset names and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct EqualizeArgs {
    /// Map file or preset name.
    #[arg(long)]
    map: String,
    /// Entries in the result; defaults to the input length.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, value_enum, default_value = "auto")]
    metric: MetricArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Map file or preset name.
    map: String,
    /// Write the per-entry lightness and step profile as CSV.
    #[arg(long)]
    profile: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestKind {
    Linear,
    Cyclic,
}

#[derive(Args)]
struct TestimageArgs {
    #[arg(long, value_enum)]
    kind: TestKind,
    /// Map file or preset name.
    #[arg(long)]
    map: String,
    /// .png, or a binary pixmap for any other extension.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Black,
    White,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    map: String,
    #[arg(long)]
    data: PathBuf,
    /// Data value placed on the central entry.
    #[arg(long, conflicts_with = "cyclic", allow_negative_numbers = true)]
    diverging: Option<f64>,
    /// Period of wrapped data.
    #[arg(long)]
    cyclic: Option<f64>,
    #[arg(long, requires = "cyclic", default_value_t = 0.0, allow_negative_numbers = true)]
    origin: f64,
    /// Weight grid in [0, 1] that fades colours toward black or white.
    #[arg(long)]
    modulate: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "black", requires = "modulate")]
    direction: DirectionArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ShadeArgs {
    /// Elevation grid.
    #[arg(long, required_unless_present = "noise", conflicts_with = "noise")]
    data: Option<PathBuf>,
    #[arg(long, default_value_t = 135.0)]
    azimuth: f64,
    #[arg(long, default_value_t = 45.0)]
    elevation: f64,
    /// Vertical exaggeration applied to the gradients.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long)]
    drape_map: Option<String>,
    #[arg(long, requires = "drape_map", allow_negative_numbers = true)]
    diverging: Option<f64>,
    /// Use 1/f^P noise as the surface.
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 512)]
    size: usize,
    /// Also write the surface as an ASCII grid.
    #[arg(long)]
    surface_out: Option<PathBuf>,
    /// Image, or an ASCII grid of shading intensities for a .asc extension.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Paper,
    Rgb,
}

#[derive(Args)]
struct TernaryArgs {
    #[arg(long)]
    c1: PathBuf,
    #[arg(long)]
    c2: PathBuf,
    #[arg(long)]
    c3: PathBuf,
    #[arg(long, value_enum, default_value = "paper")]
    basis: BasisArg,
    /// Percentile clip before scaling each channel, e.g. 2,98.
    #[arg(long, value_parser = parse_clip)]
    clip: Option<(f64, f64)>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_clip(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if !(0.0..100.0).contains(&lo) || !(lo < hi && hi <= 100.0) {
        return Err(format!("need 0 <= LO < HI <= 100, got {lo},{hi}"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Equalize(a) => equalize(a),
        Command::Analyze(a) => analyze(a),
        Command::Testimage(a) => testimage(a),
        Command::Render(a) => render_cmd(a),
        Command::Shade(a) => shade_cmd(a),
        Command::Ternary(a) => ternary(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn metric_for(arg: MetricArg, path: &MapPath) -> ContrastMetric {
    match arg {
        MetricArg::Auto => auto_metric(path),
        MetricArg::Lightness => ContrastMetric::Lightness,
        MetricArg::Cie76 => ContrastMetric::Cie76,
    }
}

/// A file when one exists at `spec`, otherwise a 256-entry preset.
fn load_map(spec: &str) -> Result<ColorMap> {
    let p = Path::new(spec);
    if p.exists() {
        return read_map(p).with_context(|| format!("reading {spec}"));
    }
    preset(spec, 256, None).with_context(|| format!("`{spec}` is neither a map file nor a preset"))
}

fn load_grid(path: &Path) -> Result<ScalarGrid> {
    read_grid(path).with_context(|| format!("reading {}", path.display()))
}

fn emit_map(map: &ColorMap, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => {
            let text = if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
                map_to_json(map)?
            } else {
                map_to_csv(map)
            };
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
        }
        None => std::io::stdout().write_all(map_to_csv(map).as_bytes())?,
    }
    Ok(())
}

fn summarize(map: &ColorMap) -> Result<()> {
    let report = analyze_uniformity(map)?;
    eprint!("{}", report.summary());
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<ExitCode> {
    if a.list {
        for name in preset_names() {
            println!("{name}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let mut map = if let Some(name) = &a.preset {
        preset(name, a.n, a.sigma)?
    } else {
        let file = a.path.as_ref().expect("clap requires --preset or --path");
        let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
        let path = path_from_json(&text).with_context(|| format!("parsing {}", file.display()))?;
        let name = file.file_stem().and_then(|s| s.to_str()).unwrap_or("custom");
        let attrs: &[Attribute] = if path.is_cyclic() { &[Attribute::Cyclic] } else { &[] };
        let metric = metric_for(a.metric, &path);
        build_with_metric(&path, a.n, a.sigma.unwrap_or(0.0), metric, name, attrs.iter().copied())?
    };
    if let Some(f) = a.shift {
        map = cyclic_shift(&map, f)?;
    }
    emit_map(&map, a.out.as_deref())?;
    summarize(&map)?;
    Ok(ExitCode::SUCCESS)
}

fn equalize(a: EqualizeArgs) -> Result<ExitCode> {
    let src = load_map(&a.map)?;
    let cyclic = src.has(Attribute::Cyclic);
    let lab = src.lab_entries()?;
    let path = MapPath::new(lab, cmapforge::SplineOrder::Linear, cyclic)?;
    let metric = metric_for(a.metric, &path);
    let n = a.n.unwrap_or(src.len());
    let map = build_with_metric(&path, n, a.sigma, metric, &src.name, src.attributes.iter().copied())?;
    if let Err(e) = validate_attributes(&map) {
        log::warn!("{e}");
    }
    emit_map(&map, a.out.as_deref())?;
    summarize(&map)?;
    Ok(ExitCode::SUCCESS)
}

fn analyze(a: AnalyzeArgs) -> Result<ExitCode> {
    let map = load_map(&a.map)?;
    let report = analyze_uniformity(&map)?;
    print!("{}", report.summary());
    if let Some(p) = &a.profile {
        fs::write(p, report.profile_csv()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn testimage(a: TestimageArgs) -> Result<ExitCode> {
    let map = load_map(&a.map)?;
    let (grid, policy) = match a.kind {
        TestKind::Linear => (
            linear_test_image(&LinearTestSpec::default())?,
            RenderPolicy::new(RenderMode::Linear(ValueRange::Explicit(0.0, 255.0))),
        ),
        TestKind::Cyclic => (
            cyclic_test_image(&CyclicTestSpec::default())?,
            RenderPolicy::cyclic(TAU, 0.0),
        ),
    };
    let img = render(&grid, &map, &policy)?.image;
    write_image(&a.out, &img)?;
    Ok(ExitCode::SUCCESS)
}

fn render_cmd(a: RenderArgs) -> Result<ExitCode> {
    let map = load_map(&a.map)?;
    let grid = load_grid(&a.data)?;
    let policy = match (a.diverging, a.cyclic) {
        (Some(r), _) => RenderPolicy::diverging(r),
        (None, Some(p)) => RenderPolicy::cyclic(p, a.origin),
        (None, None) => RenderPolicy::linear(),
    };
    let mut img = render(&grid, &map, &policy)?.image;
    if let Some(w) = &a.modulate {
        let weights = load_grid(w)?;
        let dir = match a.direction {
            DirectionArg::Black => ModulateDirection::TowardBlack,
            DirectionArg::White => ModulateDirection::TowardWhite,
        };
        img = modulate(&img, &weights, dir)?;
    }
    write_image(&a.out, &img)?;
    Ok(ExitCode::SUCCESS)
}

fn shade_cmd(a: ShadeArgs) -> Result<ExitCode> {
    let surface = match (&a.data, a.noise) {
        (Some(p), _) => load_grid(p)?,
        (None, Some(p)) => {
            let g = one_on_f_noise(a.size, a.size, p, a.seed)?;
            let fit = spectrum_slope(&g, default_band(a.size, a.size))?;
            println!("noise slope: {:.4} (residual {:.4})", fit.slope, fit.residual);
            g
        }
        (None, None) => bail!("either --data or --noise is required"),
    };
    if let Some(p) = &a.surface_out {
        write_grid(p, &surface)?;
    }
    let params = ShadingParams {
        azimuth: a.azimuth,
        elevation: a.elevation,
        gradient_scale: a.scale,
    };
    let is_grid = a.out.extension().is_some_and(|e| e.eq_ignore_ascii_case("asc"));
    if let Some(m) = &a.drape_map {
        if is_grid {
            bail!("a draped result is an image; choose an image extension for --out");
        }
        let map = load_map(m)?;
        let policy = a.diverging.map_or_else(RenderPolicy::linear, RenderPolicy::diverging);
        let draped = shade_and_drape(&surface, &map, &policy, &params)?;
        write_image(&a.out, &draped.image)?;
    } else {
        let s = shade(&surface, &params)?;
        if is_grid {
            write_grid(&a.out, &s)?;
        } else {
            write_image(&a.out, &grid_to_grey(&s, 0.0, 1.0, RgbColor::MID_GREY)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Linear interpolation between order statistics.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q / 100.0 * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let j = (i + 1).min(sorted.len() - 1);
    sorted[i] + (sorted[j] - sorted[i]) * (pos - i as f64)
}

/// Scales a channel to [0, 1] between its extremes or clip percentiles;
/// masked cells become 0.
fn normalize(g: &ScalarGrid, clip: Option<(f64, f64)>) -> Result<ScalarGrid> {
    let mut v: Vec<f64> = g.values().iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        bail!("channel has no unmasked cells");
    }
    v.sort_by(f64::total_cmp);
    let (lo, hi) = match clip {
        Some((a, b)) => (percentile(&v, a), percentile(&v, b)),
        None => (v[0], v[v.len() - 1]),
    };
    let span = hi - lo;
    Ok(g.map(|x| {
        if x.is_nan() {
            0.0
        } else if span > 0.0 {
            ((x - lo) / span).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }))
}

fn ternary(a: TernaryArgs) -> Result<ExitCode> {
    let ch = [&a.c1, &a.c2, &a.c3].map(|p| load_grid(p).and_then(|g| normalize(&g, a.clip)));
    let [c1, c2, c3] = ch;
    let basis = match a.basis {
        BasisArg::Paper => paper_basis(),
        BasisArg::Rgb => rgb_basis(),
    };
    let img = compose(&c1?, &c2?, &c3?, &basis)?;
    write_image(&a.out, &img)?;
    Ok(ExitCode::SUCCESS)
}
