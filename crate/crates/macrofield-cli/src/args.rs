use clap::{Args, Parser, Subcommand, ValueEnum};
use macrofield::diagnostics::InflationMethod;
use macrofield::model::Method;
use serde::Deserialize;
use std::path::PathBuf;

/// Macroeconomic capital/GDP field model: data indicators, simulation,
/// calibration and diagnostics.
#[derive(Debug, Parser)]
#[command(name = "macrofield", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PopulationTable {
    /// Population growth from the FRG series
    Frg,
}

/// Where the economic series comes from.
#[derive(Debug, Clone, Default, Args)]
pub struct DataArgs {
    /// Read the series from a delimited file (tab, `;` or `,`)
    #[arg(long, value_name = "PATH", conflicts_with = "frg")]
    pub input: Option<PathBuf>,
    /// Use the FRG series (the default when no input is given)
    #[arg(long)]
    pub frg: bool,
    /// Input numbers use `,` as the decimal separator
    #[arg(long)]
    pub decimal_comma: bool,
    /// First year to keep
    #[arg(long, value_name = "YEAR")]
    pub from: Option<i32>,
    /// Last year to keep
    #[arg(long, value_name = "YEAR")]
    pub to: Option<i32>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutArgs {
    /// JSON run configuration; flags given on the command line win
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write the result here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Years to integrate
    #[arg(long, value_name = "YEARS")]
    pub horizon: Option<f64>,
    /// Largest integration step in years
    #[arg(long, value_name = "YEARS")]
    pub step: Option<f64>,
    /// Integration method: rk4 or euler
    #[arg(long, value_name = "METHOD")]
    pub method: Option<Method>,
    /// Keep integrating after GDP turns non-positive
    #[arg(long)]
    pub allow_negative: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived indicators per year
    Derive {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Integrate the model; trajectory CSV plus a summary
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Take the population growth rate from a data table
        #[arg(long, value_enum)]
        population_table: Option<PopulationTable>,
        /// Write the summary JSON here (CSV output only; default stderr)
        #[arg(long, value_name = "PATH")]
        summary: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Closed-form solutions and regime checks
    Analytic {
        #[command(subcommand)]
        cmd: AnalyticCmd,
    },
    /// Fits against data
    Calibrate {
        #[command(subcommand)]
        cmd: CalibrateCmd,
    },
    /// Sustainability phases and threshold crossings
    Phases {
        #[command(flatten)]
        data: DataArgs,
        /// State debt to loans quota
        #[arg(long, value_name = "FRACTION")]
        quota: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Inflation estimates from the series
    Inflation {
        #[command(flatten)]
        data: DataArgs,
        /// structural, core, core_simplified, house_number or data_cpi
        #[arg(long = "method", value_name = "METHOD")]
        inflation_method: Option<InflationMethod>,
        /// Fixed average asset rate for the house number
        #[arg(long, value_name = "RATE")]
        p_va: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Modelled state debt against the data
    Debt {
        #[command(flatten)]
        data: DataArgs,
        /// Interest rate on state debt
        #[arg(long, value_name = "RATE")]
        p_a: Option<f64>,
        /// State debt in the first year
        #[arg(long, value_name = "AMOUNT")]
        s0: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Coupled economies; without a world config runs the capital export experiment
    Scenario {
        #[command(flatten)]
        run: RunArgs,
        /// Share of the strong economy's GDP exported as capital per year
        #[arg(long, value_name = "FRACTION")]
        export_fraction: Option<f64>,
        /// Years between the two economies' start
        #[arg(long, value_name = "YEARS")]
        lag: Option<u32>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Plot data for a figure id (fig1, fig2, ...)
    Report {
        /// Figure id
        figure: String,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum AnalyticCmd {
    /// Closed-form Y and K for constant rates
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        p_n: f64,
        #[arg(long)]
        p_s: f64,
        #[arg(long)]
        y0: f64,
        #[arg(long)]
        k0: f64,
        /// Years to tabulate
        #[arg(long, default_value_t = 50)]
        years: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Characteristic time and frequency
    Time {
        #[arg(long, allow_hyphen_values = true)]
        p_n: f64,
        #[arg(long)]
        p_s: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Growth or crisis regime for an asset rate, lending share and savings rate
    Regime {
        #[arg(long, allow_hyphen_values = true)]
        p_v: f64,
        #[arg(long)]
        p_rel: f64,
        #[arg(long)]
        p_s: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Years until the lending share halves
    Tmax {
        #[arg(long)]
        t_h: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Year-by-year closed-form run of the configured model
    Piecewise {
        /// Years to run
        #[arg(long, default_value_t = 85)]
        years: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum CalibrateCmd {
    /// Quadratic Y(K) regression and capital extremes
    Yk {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exponential fit of the lending share
    Prel {
        /// Fix p_rel0 to 1
        #[arg(long)]
        anchored: bool,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Chain-corrected model against the data
    Chain {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}
