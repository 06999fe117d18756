use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::ecdf::Ecdf;
use super::experiment::{ExperimentResult, OutputPaths};
use crate::error::Result;

pub const SAMPLES_HEADER: &str = "log10_n,sample_index,raw_value,normalized_value";
pub const SUMMARY_HEADER: &str = "log10_n,ks_statistic,ks_side,n_samples,limit_kind,sigma,alpha";

pub fn write_samples_csv<W: Write>(result: &ExperimentResult, out: &mut W) -> Result<()> {
    writeln!(out, "{SAMPLES_HEADER}")?;
    for row in &result.rows {
        for (i, (raw, norm)) in row.raw.iter().zip(&row.normalized).enumerate() {
            writeln!(out, "{},{},{:e},{:e}", row.log10_n, i, raw, norm)?;
        }
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(result: &ExperimentResult, out: &mut W) -> Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    let t = &result.target;
    for row in &result.rows {
        writeln!(
            out,
            "{},{:e},{},{},{},{:e},{:e}",
            row.log10_n,
            row.ks.statistic,
            row.ks.side(),
            row.ecdf.count(),
            t.kind_name(),
            t.sigma(),
            t.alpha()
        )?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(fs::File::create(path)?))
}

/// Writes every configured output; returns the paths written.
pub fn write_outputs(result: &ExperimentResult, paths: &OutputPaths) -> Result<Vec<String>> {
    let mut written = Vec::new();
    if let Some(p) = &paths.samples_csv {
        let mut w = create(p)?;
        write_samples_csv(result, &mut w)?;
        w.flush()?;
        written.push(p.display().to_string());
    }
    if let Some(p) = &paths.summary_csv {
        let mut w = create(p)?;
        write_summary_csv(result, &mut w)?;
        w.flush()?;
        written.push(p.display().to_string());
    }
    if let Some(p) = &paths.svg {
        let mut w = create(p)?;
        w.write_all(render_svg(result).as_bytes())?;
        w.flush()?;
        written.push(p.display().to_string());
    }
    Ok(written)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 48.0;
const POINTS: usize = 400;
const PALETTE: [&str; 6] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"];

fn step_points(ecdf: &Ecdf, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    (0..=POINTS)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / POINTS as f64;
            (x, ecdf.eval(x))
        })
        .collect()
}

fn polyline(points: &[(f64, f64)], lo: f64, hi: f64, stroke: &str, dashed: bool) -> String {
    let sx = |x: f64| MARGIN + (x - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y * (HEIGHT - 2.0 * MARGIN);
    let mut d = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "" } else { " " }, sx(*x), sy(*y));
    }
    format!(
        "<polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"{} points=\"{d}\"/>\n",
        if dashed { " stroke-dasharray=\"6 4\"" } else { "" }
    )
}

/// Overlaid ECDFs of the normalized statistic, one per n, plus the limit CDF (dashed).
pub fn render_svg(result: &ExperimentResult) -> String {
    let pooled: Vec<f64> = result.rows.iter().flat_map(|r| r.normalized.iter().copied()).collect();
    let pooled = Ecdf::new(pooled).expect("experiment rows are nonempty");
    let (mut lo, mut hi) = (pooled.quantile(0.005), pooled.quantile(0.995));
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        lo -= 1.0;
        hi += 1.0;
    }
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <line x1=\"{MARGIN}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{MARGIN}\" y1=\"{MARGIN}\" x2=\"{MARGIN}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <text x=\"{MARGIN}\" y=\"{lb}\" font-size=\"11\">{lo:.3}</text>\n\
         <text x=\"{r}\" y=\"{lb}\" font-size=\"11\" text-anchor=\"end\">{hi:.3}</text>\n\
         <text x=\"{MARGIN}\" y=\"{t}\" font-size=\"12\">{title}</text>\n",
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN,
        lb = HEIGHT - MARGIN + 16.0,
        t = MARGIN - 16.0,
        title = format_args!("{} (sigma = {:.4}, alpha = {})", result.target.kind_name(), result.target.sigma(), result.target.alpha()),
    );
    for (i, row) in result.rows.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        svg.push_str(&polyline(&step_points(&row.ecdf, lo, hi), lo, hi, color, false));
        let _ = writeln!(
            svg,
            "<text x=\"{x}\" y=\"{y}\" font-size=\"11\" fill=\"{color}\">log10 n = {}</text>",
            row.log10_n,
            x = MARGIN + 8.0,
            y = MARGIN + 14.0 * (i as f64 + 1.0),
        );
    }
    let limit: Option<Vec<(f64, f64)>> = match (result.target.cdf(), &result.reference) {
        (Some(f), _) => Some(
            (0..=POINTS)
                .map(|i| {
                    let x = lo + (hi - lo) * i as f64 / POINTS as f64;
                    (x, f(x))
                })
                .collect(),
        ),
        (None, Some(r)) => Some(step_points(r, lo, hi)),
        (None, None) => None,
    };
    if let Some(points) = limit {
        svg.push_str(&polyline(&points, lo, hi, "black", true));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::{run_experiment, ExperimentConfig};
    use crate::subordinator::SubordinatorModel;

    fn result() -> ExperimentResult {
        let mut c = ExperimentConfig::new(SubordinatorModel::cpp_pareto(1.0, 4.0), vec![3.0, 6.0], 200, 1);
        c.workers = Some(1);
        run_experiment(&c).unwrap()
    }

    #[test]
    fn csv_shapes() {
        let r = result();
        let mut buf = Vec::new();
        write_samples_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SAMPLES_HEADER);
        assert_eq!(lines.len(), 1 + 400);
        assert!(lines[1].starts_with("3,0,"));
        let mut buf = Vec::new();
        write_summary_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SUMMARY_HEADER);
        assert_eq!(lines.len(), 3);
        let fields: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(fields[0], "6");
        assert_eq!(fields[3], "200");
        assert_eq!(fields[4], "part1_normal");
        assert!(fields[2] == "left" || fields[2] == "right");
    }

    #[test]
    fn svg_and_files() {
        let r = result();
        let svg = render_svg(&r);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 3);
        let dir = tempfile::tempdir().unwrap();
        let paths = OutputPaths {
            samples_csv: Some(dir.path().join("out/samples.csv")),
            summary_csv: Some(dir.path().join("summary.csv")),
            svg: Some(dir.path().join("plot.svg")),
        };
        assert_eq!(write_outputs(&r, &paths).unwrap().len(), 3);
        assert!(dir.path().join("out/samples.csv").exists());
    }
}
