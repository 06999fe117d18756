use anyhow::{bail, Context, Result};
use lfmo_core::{Dimension, SubordinatorModel};

use crate::DimensionArg;

/// Parses JSON, `@file` or the `pareto:LAMBDA:ALPHA` / `drift:C` shorthands.
pub fn parse_model(text: &str) -> Result<SubordinatorModel> {
    let text = text.trim();
    let model = if let Some(path) = text.strip_prefix('@') {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading model file {path}"))?;
        serde_json::from_str(&text).context("parsing model JSON")?
    } else if text.starts_with('{') {
        serde_json::from_str(text).context("parsing model JSON")?
    } else {
        let parts: Vec<&str> = text.split(':').collect();
        let num = |s: &str| s.parse::<f64>().with_context(|| format!("bad number {s:?} in model {text:?}"));
        match parts.as_slice() {
            ["pareto", lambda, alpha] => SubordinatorModel::cpp_pareto(num(lambda)?, num(alpha)?),
            ["drift", c] => SubordinatorModel::drift(num(c)?),
            _ => bail!("unrecognized model {text:?}; expected JSON, @FILE, pareto:LAMBDA:ALPHA or drift:C"),
        }
    };
    model.validate()?;
    Ok(model)
}

pub fn dimension(arg: &DimensionArg) -> Result<Dimension> {
    let d = match (arg.n, arg.log10n) {
        (Some(n), None) => Dimension::Exact(n),
        (None, Some(l)) => Dimension::from_log10(l),
        _ => bail!("give exactly one of --n and --log10n"),
    };
    d.validate()?;
    Ok(d)
}

/// Exact formulas accept only `--n`.
pub fn exact_n(arg: &DimensionArg) -> Result<u64> {
    match (arg.n, arg.log10n) {
        (Some(n), None) => Ok(n),
        (None, Some(_)) => bail!("exact formulas need an exact --n; --log10n is only for sampling"),
        _ => bail!("give exactly one of --n and --log10n"),
    }
}
