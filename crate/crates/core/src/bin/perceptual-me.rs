use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use perceptual_me::cli::{
    cmd_estimate, cmd_reconstruct, cmd_report, parse_metrics, parse_ssim_window, RunSpec,
};
use perceptual_me::eval::ReportFormat;
use perceptual_me::frame::{ChromaSampling, FrameFormat};

#[derive(Parser)]
#[command(
    name = "perceptual-me",
    version,
    about = "Full-search motion estimation with perceptual block metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate one motion field per metric.
    Estimate(Common),
    /// Apply a motion field to the reference frame.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Motion field CSV to apply.
        #[arg(long)]
        field: PathBuf,
    },
    /// Estimate, compensate and compare for every metric.
    Report(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Y4m,
    Raw,
    Pgm,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
    Table,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "y4m")]
    format: InputFormat,
    /// Frame width (raw input only).
    #[arg(long)]
    width: Option<usize>,
    /// Frame height (raw input only).
    #[arg(long)]
    height: Option<usize>,
    /// Chroma layout of raw input: 420, 422, 444 or mono.
    #[arg(long, default_value = "420")]
    chroma: String,
    #[arg(long, default_value_t = 0)]
    ref_index: usize,
    #[arg(long, default_value_t = 1)]
    target_index: usize,
    /// sad, mse, ssim, cwssim, vif or all; repeat or comma-separate.
    #[arg(long, default_value = "sad")]
    metric: Vec<String>,
    #[arg(long, default_value_t = 16)]
    block_size: usize,
    #[arg(long, default_value_t = 16)]
    search_radius: usize,
    /// block or sliding:N
    #[arg(long, default_value = "block")]
    ssim_window: String,
    #[arg(long, default_value_t = 0.4)]
    vif_sigma_nsq: f64,
    #[arg(long)]
    pyramid_levels: Option<usize>,
    #[arg(long)]
    pyramid_orients: Option<usize>,
    #[arg(long)]
    out_field: Option<PathBuf>,
    #[arg(long)]
    out_frame: Option<PathBuf>,
    #[arg(long)]
    out_report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    report_format: OutFormat,
}

impl Common {
    fn into_spec(self) -> Result<RunSpec, String> {
        let format = match self.format {
            InputFormat::Y4m => FrameFormat::Y4m,
            InputFormat::Pgm => FrameFormat::Pgm,
            InputFormat::Raw => {
                let (Some(width), Some(height)) = (self.width, self.height) else {
                    return Err("raw input needs --width and --height".into());
                };
                let chroma: ChromaSampling = self.chroma.parse().map_err(|e| format!("{e}"))?;
                FrameFormat::RawYuv {
                    width,
                    height,
                    chroma,
                }
            }
        };
        let mut spec = RunSpec::new(self.input, format);
        spec.ref_index = self.ref_index;
        spec.target_index = self.target_index;
        spec.metrics = parse_metrics(&self.metric).map_err(|e| e.to_string())?;
        spec.block_size = self.block_size;
        spec.search_radius = self.search_radius;
        spec.ssim_window = parse_ssim_window(&self.ssim_window).map_err(|e| e.to_string())?;
        spec.vif_sigma_n_sq = self.vif_sigma_nsq;
        spec.pyramid_levels = self.pyramid_levels;
        spec.pyramid_orientations = self.pyramid_orients;
        spec.out_field = self.out_field;
        spec.out_frame = self.out_frame;
        spec.out_report = self.out_report;
        spec.report_format = match self.report_format {
            OutFormat::Csv => ReportFormat::Csv,
            OutFormat::Json => ReportFormat::Json,
            OutFormat::Table => ReportFormat::Table,
        };
        Ok(spec)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stage, result) = match cli.command {
        Command::Estimate(common) => (
            "estimate",
            common.into_spec().and_then(|s| {
                let paths = cmd_estimate(&s).map_err(|e| e.to_string())?;
                for p in paths {
                    println!("{}", p.display());
                }
                Ok(())
            }),
        ),
        Command::Reconstruct { common, field } => (
            "reconstruct",
            common.into_spec().and_then(|s| {
                if s.out_frame.is_none() {
                    return Err("--out-frame is required".into());
                }
                cmd_reconstruct(&s, &field)
                    .map(|_| ())
                    .map_err(|e| e.to_string())
            }),
        ),
        Command::Report(common) => (
            "report",
            common
                .into_spec()
                .and_then(|s| cmd_report(&s).map(|_| ()).map_err(|e| e.to_string())),
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("perceptual-me {stage}: {e}");
            ExitCode::FAILURE
        }
    }
}
