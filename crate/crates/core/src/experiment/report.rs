use std::collections::BTreeMap;
use std::path::Path;

use plotters::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Method, Quantity};
use crate::error::{Error, Result};

/// Unit roundoff of binary64, drawn as a reference line.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub family: String,
    pub params: String,
    pub n: usize,
    pub quantity: Quantity,
    pub method: Method,
    #[serde(serialize_with = "sci", deserialize_with = "unsci")]
    pub value: f64,
    #[serde(serialize_with = "sci", deserialize_with = "unsci")]
    pub reference: f64,
    #[serde(serialize_with = "sci", deserialize_with = "unsci")]
    pub rel_err_mean: f64,
    #[serde(serialize_with = "sci", deserialize_with = "unsci")]
    pub rel_err_max: f64,
    pub seed: u64,
}

/// 17 significant digits.
fn sci<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{v:.16e}"))
}

fn unsci<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    let text = String::deserialize(d)?;
    text.parse().map_err(serde::de::Error::custom)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn find(&self, n: usize, quantity: Quantity, method: Method) -> Option<&ErrorRow> {
        self.rows.iter().find(|r| r.n == n && r.quantity == quantity && r.method == method)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record(HEADER)?;
        }
        for row in &self.rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

const HEADER: [&str; 10] =
    ["family", "params", "n", "quantity", "method", "value", "reference", "rel_err_mean", "rel_err_max", "seed"];

pub fn parse_csv(text: &str) -> Result<ErrorReport> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let rows = r.deserialize().collect::<std::result::Result<Vec<ErrorRow>, _>>()?;
    Ok(ErrorReport { rows })
}

pub fn emit_csv(report: &ErrorReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_csv()?)?;
    Ok(())
}

fn plot_err(e: impl std::fmt::Display) -> Error {
    Error::Plot(e.to_string())
}

/// Log-scale chart of `rel_err_max` against `n`, one series per
/// `(quantity, method)`; oracle rows are omitted.
pub fn emit_plot(report: &ErrorReport, path: &Path) -> Result<()> {
    if report.is_empty() {
        return Err(Error::Plot("nothing to plot".into()));
    }
    let mut series: BTreeMap<(Quantity, Method), Vec<(f64, f64)>> = BTreeMap::new();
    for r in report.rows.iter().filter(|r| r.method != Method::Oracle) {
        series.entry((r.quantity, r.method)).or_default().push((r.n as f64, r.rel_err_max));
    }
    let finite = || series.values().flatten().map(|p| p.1).filter(|v| v.is_finite() && *v > 0.0);
    let lo = finite().fold(UNIT_ROUNDOFF, f64::min) / 10.0;
    let hi = finite().fold(1.0, f64::max) * 10.0;
    // zero errors sit on the floor, failures on the ceiling
    let clamp = |v: f64| if v.is_nan() || v >= hi { hi } else { v.max(lo) };
    let n_min = report.rows.iter().map(|r| r.n).min().unwrap_or(0) as f64;
    let n_max = report.rows.iter().map(|r| r.n).max().unwrap_or(1) as f64;

    let root = SVGBackend::new(path, (900, 600)).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let title = format!("{} {}", report.rows[0].family, report.rows[0].params);
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(70)
        .build_cartesian_2d(n_min..n_max.max(n_min + 1.0), (lo..hi).log_scale())
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc("n")
        .y_desc("max relative error")
        .y_label_formatter(&|v| format!("{v:.0e}"))
        .draw()
        .map_err(plot_err)?;
    for (k, ((quantity, method), points)) in series.iter().enumerate() {
        let color = Palette99::pick(k).to_rgba();
        let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x, clamp(y))).collect();
        chart
            .draw_series(LineSeries::new(pts.clone(), color.stroke_width(2)))
            .map_err(plot_err)?
            .label(format!("{quantity} / {method}"))
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2)));
        chart.draw_series(pts.into_iter().map(|p| Circle::new(p, 3, color.filled()))).map_err(plot_err)?;
    }
    chart
        .draw_series(LineSeries::new(vec![(n_min, UNIT_ROUNDOFF), (n_max, UNIT_ROUNDOFF)], BLACK.stroke_width(1)))
        .map_err(plot_err)?
        .label("unit roundoff")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], BLACK));
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.85))
        .border_style(BLACK)
        .position(SeriesLabelPosition::UpperLeft)
        .draw()
        .map_err(plot_err)?;
    root.present().map_err(plot_err)?;
    Ok(())
}
