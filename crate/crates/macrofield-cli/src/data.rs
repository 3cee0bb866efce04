use crate::args::DataArgs;
use crate::config::RunConfig;
use anyhow::{Context, Result};
use macrofield::dataset::{frg_dataset, parse_series, EconSeries, ParseOptions};
use std::path::Path;

pub const DATA_DIR_ENV: &str = "MACROFIELD_DATA_DIR";

fn read(path: &Path, decimal_comma: bool, country: &str) -> Result<EconSeries> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let opts = ParseOptions {
        decimal_comma,
        country: country.to_string(),
        ..ParseOptions::default()
    };
    parse_series(&text, &opts).with_context(|| format!("parsing {}", path.display()))
}

/// The FRG series, from `$MACROFIELD_DATA_DIR/frg.tsv` when set.
pub fn frg(decimal_comma: Option<bool>) -> Result<EconSeries> {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => {
            let path = Path::new(&dir).join("frg.tsv");
            // the bundled layout: tab separated with decimal commas
            read(&path, decimal_comma.unwrap_or(true), "FRG")
        }
        None => Ok(frg_dataset()),
    }
}

pub fn load(args: &DataArgs, cfg: &RunConfig) -> Result<EconSeries> {
    let flag_comma = args.decimal_comma.then_some(true).or(cfg.decimal_comma);
    let series = match (&args.input, args.frg) {
        (Some(path), _) => read(path, flag_comma.unwrap_or(false), &stem(path))?,
        (None, true) => frg(flag_comma)?,
        (None, false) => match &cfg.input {
            Some(path) => read(path, flag_comma.unwrap_or(false), &stem(path))?,
            None => frg(flag_comma)?,
        },
    };
    let from = args.from.or(cfg.from);
    let to = args.to.or(cfg.to);
    if from.is_none() && to.is_none() {
        return Ok(series);
    }
    Ok(series.window(from, to)?)
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}
