//! Writing trajectories to disk as CSV, JSON and SVG.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Csv, Format::Json, Format::Svg];

    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.as_str() == s.trim())
    }
}

/// Writes `contents` next to `path` and renames it into place, so readers
/// never see a half-written file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn to_csv(trajectory: &Trajectory) -> Result<Vec<u8>, CliError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(Vec::new());
    writer.write_record(&trajectory.columns)?;
    for row in trajectory.rows() {
        writer.write_record(row.iter().map(|c| c.to_csv()))?;
    }
    writer.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))
}

pub fn to_json(trajectory: &Trajectory) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&trajectory.to_json()).expect("JSON values serialize");
    out.push(b'\n');
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;

/// One line plot of `column` against the first column (or the row index
/// when the first column is not numeric). `None` if the column has no
/// numeric values.
pub fn to_svg(trajectory: &Trajectory, column: usize) -> Option<String> {
    let rows = trajectory.rows();
    let ys: Vec<Option<f64>> = rows.iter().map(|r| r[column].numeric()).collect();
    if column == 0 || ys.iter().all(Option::is_none) && !rows.is_empty() {
        return None;
    }
    let x_numeric = rows.iter().all(|r| r[0].numeric().is_some());
    let x_label = if x_numeric { trajectory.columns[0].as_str() } else { "row" };
    let points: Vec<(f64, f64)> = rows
        .iter()
        .enumerate()
        .filter_map(|(k, r)| {
            let x = if x_numeric { r[0].numeric()? } else { k as f64 };
            let y = r[column].numeric()?;
            (x.is_finite() && y.is_finite()).then_some((x, y))
        })
        .collect();

    let (x_min, x_max) = extent(points.iter().map(|p| p.0));
    let (y_min, y_max) = extent(points.iter().map(|p| p.1));
    let sx = |x: f64| MARGIN + (x - x_min) / (x_max - x_min) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_min) / (y_max - y_min) * (HEIGHT - 2.0 * MARGIN);

    let name = &trajectory.columns[column];
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<title>{} / {}</title>"#,
        escape(&trajectory.metadata.scenario),
        escape(name)
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{}" text-anchor="middle" font-size="14" transform="rotate(-90 15 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(name)
    );
    for (value, x, y, anchor) in [
        (x_min, left, bottom + 18.0, "start"),
        (x_max, right, bottom + 18.0, "end"),
    ] {
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-size="11">{value}</text>"#
        );
    }
    for (value, y) in [(y_min, bottom), (y_max, top)] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{y}" text-anchor="end" font-size="11">{value}</text>"#,
            left - 4.0
        );
    }
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        coords.join(" ")
    );
    svg.push_str("</svg>\n");
    Some(svg)
}

/// Range of the values, widened when degenerate so scaling stays finite.
fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Writes the requested formats into `dir` and returns the files written.
/// CSV and JSON are named after the scenario; each plotted column gets its
/// own `<scenario>_<column>.svg`.
pub fn emit_report(
    trajectory: &Trajectory,
    formats: &[Format],
    dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let stem = &trajectory.metadata.scenario;
    let mut written = Vec::new();
    for format in formats {
        match format {
            Format::Csv => {
                let path = dir.join(format!("{stem}.csv"));
                write_atomic(&path, &to_csv(trajectory)?)?;
                written.push(path);
            }
            Format::Json => {
                let path = dir.join(format!("{stem}.json"));
                write_atomic(&path, &to_json(trajectory))?;
                written.push(path);
            }
            Format::Svg => {
                for column in 1..trajectory.columns.len() {
                    if let Some(svg) = to_svg(trajectory, column) {
                        let name = sanitize(&trajectory.columns[column]);
                        let path = dir.join(format!("{stem}_{name}.svg"));
                        write_atomic(&path, svg.as_bytes())?;
                        written.push(path);
                    }
                }
            }
        }
    }
    Ok(written)
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect()
}
