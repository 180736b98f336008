use std::net::IpAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chromatika::apps::QueryScoring;
use chromatika::click::{SpreadDivisor, SummaryMean};
use chromatika::color::{EdgeWeighting, WedMode, WedOptions};
use chromatika::lda::Estimate;

#[derive(Debug, Parser)]
#[command(name = "chromatika", version, about = "Color-word topic models and color semantics tools")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a corpus file from a manifest of images and transcripts.
    Ingest(IngestArgs),
    /// Fit the joint color-word topic model.
    Train(TrainArgs),
    /// Write a synthetic corpus with planted topics.
    Generate(GenerateArgs),
    /// Extract one 5-color palette per manifest image into a pool file.
    Pool(PoolArgs),
    /// Nearest pool palettes for each color topic.
    Palettes(PalettesArgs),
    /// Topic weights and recommended palettes for a text query.
    Query(QueryArgs),
    /// Rank images by closeness to a text query's colors.
    Rerank(RerankArgs),
    /// Keep the pixels whose colors match a query; gray out the rest.
    SelectPixels(SelectPixelsArgs),
    /// Paint a grayscale pattern with the palette recommended for a query.
    Recolor(RecolorArgs),
    /// Estimate relevance and aggregates from a survey trial log.
    SurveyAnalyze(SurveyAnalyzeArgs),
    /// Simulate a survey trial log from known relevance and position bias.
    SurveySimulate(SurveySimulateArgs),
    /// Serve the model over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArg {
    /// Model checkpoint written by `train`.
    #[arg(long, env = "CHROMATIKA_MODEL")]
    pub model: PathBuf,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct JsonArg {
    /// Emit full-precision JSON numbers instead of 12 significant digits.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightingArg {
    Inverse,
    Proportional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Assignment,
    FullSum,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct WedArgs {
    /// Edge cost scaling by bin weight.
    #[arg(long, value_enum, default_value = "inverse")]
    pub weighting: WeightingArg,
    /// Matching (cheapest assignment) or the sum over all edges.
    #[arg(long, value_enum, default_value = "assignment")]
    pub distance: ModeArg,
}

impl From<WedArgs> for WedOptions {
    fn from(a: WedArgs) -> Self {
        WedOptions {
            weighting: match a.weighting {
                WeightingArg::Inverse => EdgeWeighting::Inverse,
                WeightingArg::Proportional => EdgeWeighting::Proportional,
            },
            mode: match a.distance {
                ModeArg::Assignment => WedMode::Assignment,
                ModeArg::FullSum => WedMode::FullSum,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScoringArg {
    Additive,
    Multiplicative,
}

impl From<ScoringArg> for QueryScoring {
    fn from(a: ScoringArg) -> Self {
        match a {
            ScoringArg::Additive => QueryScoring::Additive,
            ScoringArg::Multiplicative => QueryScoring::Multiplicative,
        }
    }
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimateArg {
    Final,
    Average,
}

impl From<EstimateArg> for Estimate {
    fn from(a: EstimateArg) -> Self {
        match a {
            EstimateArg::Final => Estimate::FinalState,
            EstimateArg::Average => Estimate::Average,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Checkpoint path; matrices are written next to it.
    #[arg(long, short)]
    pub out: PathBuf,
    /// `default` or a JSON file of hyperparameters; flags below override it.
    #[arg(long, default_value = "default")]
    pub config: String,
    #[arg(long, short)]
    pub k: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub sweeps: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub estimate: Option<EstimateArg>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, short)]
    pub out: PathBuf,
    /// Also write the planted phi, psi and theta as JSON.
    #[arg(long)]
    pub truth_out: Option<PathBuf>,
    #[arg(long, short, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 30)]
    pub words: usize,
    #[arg(long, default_value_t = 30)]
    pub colors: usize,
    #[arg(long, default_value_t = 200)]
    pub docs: usize,
    /// Color tokens and word tokens per document.
    #[arg(long, default_value_t = 200)]
    pub tokens: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sharpness: f64,
    #[arg(long, default_value_t = 0.8)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PoolArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, default_value_t = chromatika::color::DEFAULT_EXTRACTION_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PalettesArgs {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long)]
    pub pool: PathBuf,
    /// One topic; all topics when omitted.
    #[arg(long)]
    pub topic: Option<usize>,
    #[arg(long, short, default_value_t = 5)]
    pub n: usize,
    #[command(flatten)]
    pub wed: WedArgs,
    #[command(flatten)]
    pub json: JsonArg,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long)]
    pub pool: PathBuf,
    #[arg(long, short)]
    pub text: String,
    #[arg(long, short, default_value_t = 5)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "additive")]
    pub scoring: ScoringArg,
    #[command(flatten)]
    pub wed: WedArgs,
    #[command(flatten)]
    pub json: JsonArg,
}

#[derive(Debug, Args)]
pub struct RerankArgs {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long, short)]
    pub text: String,
    #[arg(required = true)]
    pub images: Vec<PathBuf>,
    #[command(flatten)]
    pub json: JsonArg,
}

#[derive(Debug, Args)]
pub struct SelectPixelsArgs {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long, short)]
    pub text: String,
    #[arg(long, short)]
    pub image: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Also write the selection as a 1-bit PNG.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long, default_value_t = chromatika::apps::DEFAULT_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct RecolorArgs {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long)]
    pub pool: PathBuf,
    #[arg(long, short)]
    pub text: String,
    #[arg(long, short)]
    pub image: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DivisorArg {
    AsPrinted,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SummaryArg {
    RowRatios,
    AsPrinted,
}

#[derive(Debug, Args)]
pub struct SurveyAnalyzeArgs {
    #[arg(long)]
    pub trials: PathBuf,
    #[arg(long, short, default_value_t = 12)]
    pub k: usize,
    /// JSON report path; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write the per-row CSV report.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Spread normalization for the separation score.
    #[arg(long, value_enum, default_value = "as-printed")]
    pub divisor: DivisorArg,
    /// What the matrix-level means average.
    #[arg(long, value_enum, default_value = "row-ratios")]
    pub summary: SummaryArg,
    /// Restrict to respondents matching `field=value` (gender, country, designer, age, set);
    /// `age` takes `lo-hi`. Repeat to combine.
    #[arg(long = "where", value_name = "FIELD=VALUE")]
    pub filters: Vec<String>,
    /// One report per question set.
    #[arg(long)]
    pub by_set: bool,
    #[command(flatten)]
    pub json: JsonArg,
}

impl SurveyAnalyzeArgs {
    pub fn divisor(&self) -> SpreadDivisor {
        match self.divisor {
            DivisorArg::AsPrinted => SpreadDivisor::AsPrinted,
            DivisorArg::Sample => SpreadDivisor::Sample,
        }
    }

    pub fn summary(&self) -> SummaryMean {
        match self.summary {
            SummaryArg::RowRatios => SummaryMean::RowRatios,
            SummaryArg::AsPrinted => SummaryMean::AsPrinted,
        }
    }
}

#[derive(Debug, Args)]
pub struct SurveySimulateArgs {
    /// Trial CSV path; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long, short, default_value_t = 12)]
    pub k: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials_per_palette: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Slot biases for the three positions.
    #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [0.33, 0.36, 0.34])]
    pub bias: Vec<f64>,
    /// K×K relevance as a JSON array of rows; drawn uniformly from [0, 0.9) when omitted.
    #[arg(long)]
    pub relevance: Option<PathBuf>,
    /// Write the relevance used as JSON.
    #[arg(long)]
    pub truth_out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub set_id: u8,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long)]
    pub pool: PathBuf,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
}
