use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use texsynth::blocks::DEFAULT_EPSILON;
use texsynth::periodicity::probe_depth;
use texsynth::pipeline::{DEFAULT_DMAX_FRACTION, NATURAL_THRESHOLD};
use texsynth::testgen::{generate, random_texel_styled};
use texsynth::{
    analyze, column_dmf, forward_difference, highlight_anomalies, load_pgm, row_dmf, save_pgm,
    AnalysisConfig, BlockIndex, DmfCurve, GrayImage, GroundTruth, PeriodEstimate, PgmFormat,
    PipelineReport, TexelStyle,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ANOMALIES: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_NO_REPRESENTATIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "texsynth",
    version,
    about = "Texture periodicity, texel synthesis and block defect detection"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate periods and classify blocks; prints a JSON report
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        analysis: AnalysisFlags,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        json_out: Option<PathBuf>,
        /// Dump both DMF curves as CSV (axis,d,dmf,forward_difference)
        #[arg(long)]
        csv_dmf: Option<PathBuf>,
    },
    /// Tile the representative texel into a new image
    Synthesize {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        analysis: AnalysisFlags,
        /// Output width (defaults to the input width)
        #[arg(long)]
        width: Option<usize>,
        /// Output height (defaults to the input height)
        #[arg(long)]
        height: Option<usize>,
        /// Also write the extracted texel
        #[arg(long)]
        texel_out: Option<PathBuf>,
        #[arg(long)]
        json_out: Option<PathBuf>,
        /// Write ASCII (P2) instead of binary (P5) PGM
        #[arg(long)]
        ascii: bool,
    },
    /// Outline blocks whose statistics deviate from the whole image
    Detect {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        analysis: AnalysisFlags,
        #[arg(long, default_value_t = 255)]
        highlight_value: u8,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        thickness: u64,
        #[arg(long)]
        json_out: Option<PathBuf>,
        #[arg(long)]
        ascii: bool,
    },
    /// Write a seeded synthetic texture and its ground-truth JSON sidecar
    Generate {
        output: PathBuf,
        #[arg(long)]
        texel_h: usize,
        #[arg(long)]
        texel_w: usize,
        #[arg(long)]
        reps_r: usize,
        #[arg(long)]
        reps_c: usize,
        /// Defect blocks as "i,j;i,j"
        #[arg(long, value_parser = parse_defects, default_value = "")]
        defects: DefectList,
        /// Uniform noise half-width in gray levels
        #[arg(long, default_value_t = 0)]
        noise: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = StyleArg::Uniform)]
        style: StyleArg,
        /// Ground-truth sidecar path (defaults to OUTPUT with a .json extension)
        #[arg(long)]
        json_out: Option<PathBuf>,
        /// Also write the texel
        #[arg(long)]
        texel_out: Option<PathBuf>,
        #[arg(long)]
        ascii: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct AnalysisFlags {
    /// Maximum relative deviation of a conforming block
    #[arg(long, default_value_t = NATURAL_THRESHOLD)]
    threshold: f64,
    /// Denominator guard for relative deviations
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// DMF probe depth as a fraction of each image dimension
    #[arg(long, default_value_t = DEFAULT_DMAX_FRACTION)]
    dmax_fraction: f64,
    /// Manual row period; skips DMF estimation
    #[arg(long, requires = "period_cols")]
    period_rows: Option<usize>,
    /// Manual column period; skips DMF estimation
    #[arg(long, requires = "period_rows")]
    period_cols: Option<usize>,
}

impl AnalysisFlags {
    fn config(&self) -> AnalysisConfig {
        AnalysisConfig {
            threshold: self.threshold,
            epsilon: self.epsilon,
            d_max_fraction: self.dmax_fraction,
            manual_periods: self.period_rows.zip(self.period_cols),
            ..AnalysisConfig::default()
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum StyleArg {
    Uniform,
    Speckled,
}

impl From<StyleArg> for TexelStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Uniform => TexelStyle::Uniform,
            StyleArg::Speckled => TexelStyle::Speckled,
        }
    }
}

#[derive(Debug, Clone, Default)]
struct DefectList(Vec<BlockIndex>);

fn parse_defects(s: &str) -> Result<DefectList, String> {
    let mut out = Vec::new();
    for item in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let (i, j) = item
            .split_once(',')
            .ok_or_else(|| format!("defect {item:?} is not of the form i,j"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|e| format!("defect {item:?}: {e}"))
        };
        out.push((parse(i)?, parse(j)?));
    }
    Ok(DefectList(out))
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Analyze {
            input,
            analysis,
            json_out,
            csv_dmf,
        } => cmd_analyze(&input, &analysis, json_out.as_deref(), csv_dmf.as_deref()),
        Command::Synthesize {
            input,
            output,
            analysis,
            width,
            height,
            texel_out,
            json_out,
            ascii,
        } => cmd_synthesize(
            &input,
            &output,
            &analysis,
            width,
            height,
            texel_out.as_deref(),
            json_out.as_deref(),
            ascii,
        ),
        Command::Detect {
            input,
            output,
            analysis,
            highlight_value,
            thickness,
            json_out,
            ascii,
        } => cmd_detect(
            &input,
            &output,
            &analysis,
            highlight_value,
            thickness as usize,
            json_out.as_deref(),
            ascii,
        ),
        Command::Generate {
            output,
            texel_h,
            texel_w,
            reps_r,
            reps_c,
            defects,
            noise,
            seed,
            style,
            json_out,
            texel_out,
            ascii,
        } => {
            let gt = GroundTruth {
                texel_h,
                texel_w,
                reps_r,
                reps_c,
                defect_blocks: defects.0,
                noise_amplitude: noise,
                seed,
            };
            cmd_generate(
                &output,
                &gt,
                style.into(),
                json_out.as_deref(),
                texel_out.as_deref(),
                ascii,
            )
        }
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    }
}

fn read_image(path: &Path) -> Result<GrayImage, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    load_pgm(&bytes).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write_image(path: &Path, img: &GrayImage, ascii: bool) -> Result<(), Failure> {
    let format = if ascii {
        PgmFormat::Ascii
    } else {
        PgmFormat::Binary
    };
    fs::write(path, save_pgm(img, format)).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

/// Pretty JSON to `path`, or to stdout.
fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_analysis(img: &GrayImage, flags: &AnalysisFlags) -> Result<PipelineReport, Failure> {
    let report = analyze(img, &flags.config())?;
    let p = &report.periods;
    if p.row_degenerate {
        eprintln!(
            "warning: no row periodicity found; using period {} (pass --period-rows to override)",
            p.row_period
        );
    }
    if p.col_degenerate {
        eprintln!("warning: no column periodicity found; using period {} (pass --period-cols to override)", p.col_period);
    }
    if report.analysis.representative.is_none() {
        eprintln!(
            "warning: no block within threshold {}",
            report.analysis.threshold
        );
    }
    Ok(report)
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    source: &'static str,
    periods: &'a PeriodEstimate,
    analysis: &'a texsynth::AnalysisResult,
}

fn cmd_analyze(
    input: &Path,
    flags: &AnalysisFlags,
    json_out: Option<&Path>,
    csv_dmf: Option<&Path>,
) -> CmdResult {
    let img = read_image(input)?;
    let report = run_analysis(&img, flags)?;
    if let Some(path) = csv_dmf {
        let rows = row_dmf(&img, probe_depth(img.height(), flags.dmax_fraction)?)?;
        let cols = column_dmf(&img, probe_depth(img.width(), flags.dmax_fraction)?)?;
        let mut csv = String::from("axis,d,dmf,forward_difference\n");
        write_curve_csv(&mut csv, "rows", &rows)?;
        write_curve_csv(&mut csv, "columns", &cols)?;
        fs::write(path, csv).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    let out = AnalyzeOutput {
        source: if flags.period_rows.is_some() {
            "manual"
        } else {
            "dmf"
        },
        periods: &report.periods,
        analysis: &report.analysis,
    };
    emit_json(&out, json_out)?;
    Ok(EXIT_OK)
}

fn write_curve_csv(out: &mut String, axis: &str, curve: &DmfCurve) -> Result<(), Failure> {
    use std::fmt::Write;
    let diffs = forward_difference(curve)?;
    for (i, v) in curve.values().iter().enumerate() {
        match diffs.get(i) {
            Some(fd) => writeln!(out, "{axis},{},{v},{fd}", i + 1)?,
            None => writeln!(out, "{axis},{},{v},", i + 1)?,
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SynthesizeOutput {
    periods: PeriodEstimate,
    representative: BlockIndex,
    max_deviation: f64,
    texel_w: usize,
    texel_h: usize,
    width: usize,
    height: usize,
}

#[allow(clippy::too_many_arguments)]
fn cmd_synthesize(
    input: &Path,
    output: &Path,
    flags: &AnalysisFlags,
    width: Option<usize>,
    height: Option<usize>,
    texel_out: Option<&Path>,
    json_out: Option<&Path>,
    ascii: bool,
) -> CmdResult {
    let img = read_image(input)?;
    let report = run_analysis(&img, flags)?;
    let (out_w, out_h) = (width.unwrap_or(img.width()), height.unwrap_or(img.height()));
    let Some(texel) = report.texel(&img)? else {
        eprintln!("error: no conforming block to synthesize from");
        return Ok(EXIT_NO_REPRESENTATIVE);
    };
    let synthesized = texsynth::synthesize(&texel, out_w, out_h)?;
    write_image(output, &synthesized, ascii)?;
    if let Some(path) = texel_out {
        write_image(path, &texel, ascii)?;
    }
    let rep = report
        .analysis
        .representative
        .expect("texel implies a representative");
    let summary = SynthesizeOutput {
        representative: rep,
        max_deviation: report.analysis.report(rep).map_or(0.0, |b| b.max_deviation),
        texel_w: texel.width(),
        texel_h: texel.height(),
        width: out_w,
        height: out_h,
        periods: report.periods,
    };
    emit_json(&summary, json_out)?;
    Ok(EXIT_OK)
}

fn cmd_detect(
    input: &Path,
    output: &Path,
    flags: &AnalysisFlags,
    value: u8,
    thickness: usize,
    json_out: Option<&Path>,
    ascii: bool,
) -> CmdResult {
    let img = read_image(input)?;
    let report = run_analysis(&img, flags)?;
    let analysis = &report.analysis;
    let marked = highlight_anomalies(&img, &analysis.grid, &analysis.anomalies, value, thickness)?;
    write_image(output, &marked, ascii)?;
    emit_json(analysis, json_out)?;
    Ok(if analysis.anomalies.is_empty() {
        EXIT_OK
    } else {
        EXIT_ANOMALIES
    })
}

fn cmd_generate(
    output: &Path,
    gt: &GroundTruth,
    style: TexelStyle,
    json_out: Option<&Path>,
    texel_out: Option<&Path>,
    ascii: bool,
) -> CmdResult {
    let texel = random_texel_styled(gt.texel_h, gt.texel_w, gt.seed, style)?;
    let img = generate(gt, &texel)?;
    write_image(output, &img, ascii)?;
    if let Some(path) = texel_out {
        write_image(path, &texel, ascii)?;
    }
    let sidecar = json_out.map_or_else(|| output.with_extension("json"), Path::to_path_buf);
    emit_json(gt, Some(&sidecar))?;
    Ok(EXIT_OK)
}
