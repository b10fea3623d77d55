//! Newline-delimited JSON or CSV output.

use std::io::Write;

use rcgen_core::genop::TEval;
use rcgen_core::numerics::C;
use rcgen_core::verify::Check;
use serde::Serialize;

use crate::config::Format;
use crate::CliError;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<C> for Complex {
    fn from(z: C) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Serialize)]
pub struct EvalRecord {
    pub value: Complex,
    pub err_estimate: f64,
    pub contour_radius: f64,
    pub nodes: usize,
}

impl From<TEval> for EvalRecord {
    fn from(e: TEval) -> Self {
        Self {
            value: e.value.into(),
            err_estimate: e.err_estimate,
            contour_radius: e.contour_radius,
            nodes: e.nodes,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SeriesRecord {
    pub l: usize,
    pub jet: Complex,
    pub quadrature: Complex,
    pub disagreement: f64,
}

impl SeriesRecord {
    pub fn new(l: usize, jet: C, quadrature: C) -> Self {
        Self {
            l,
            jet: jet.into(),
            quadrature: quadrature.into(),
            disagreement: (jet - quadrature).norm(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SeriesSummary {
    pub max_disagreement: f64,
}

impl SeriesSummary {
    pub fn of(records: &[SeriesRecord]) -> Self {
        Self {
            max_disagreement: records.iter().map(|r| r.disagreement).fold(0.0, f64::max),
        }
    }
}

pub struct Report {
    format: Format,
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Output(e.to_string())
}

impl Report {
    pub fn new(format: Format) -> Self {
        Self { format }
    }

    fn json_line(out: &mut dyn Write, record: &impl Serialize) -> Result<(), CliError> {
        serde_json::to_writer(&mut *out, record).map_err(io_err)?;
        writeln!(out).map_err(io_err)
    }

    fn csv(out: &mut dyn Write, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), CliError> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(header).map_err(io_err)?;
        for row in rows {
            writer.write_record(&row).map_err(io_err)?;
        }
        writer.flush().map_err(io_err)
    }

    pub fn eval(&self, out: &mut dyn Write, record: &EvalRecord) -> Result<(), CliError> {
        match self.format {
            Format::Json => Self::json_line(out, record),
            Format::Csv => Self::csv(
                out,
                &["value_re", "value_im", "err_estimate", "contour_radius", "nodes"],
                [vec![
                    record.value.re.to_string(),
                    record.value.im.to_string(),
                    record.err_estimate.to_string(),
                    record.contour_radius.to_string(),
                    record.nodes.to_string(),
                ]],
            ),
        }
    }

    pub fn series(&self, out: &mut dyn Write, records: &[SeriesRecord], summary: &SeriesSummary) -> Result<(), CliError> {
        match self.format {
            Format::Json => {
                for r in records {
                    Self::json_line(out, r)?;
                }
                Self::json_line(out, summary)
            }
            Format::Csv => Self::csv(
                out,
                &["l", "jet_re", "jet_im", "quadrature_re", "quadrature_im", "disagreement"],
                records.iter().map(|r| {
                    vec![
                        r.l.to_string(),
                        r.jet.re.to_string(),
                        r.jet.im.to_string(),
                        r.quadrature.re.to_string(),
                        r.quadrature.im.to_string(),
                        r.disagreement.to_string(),
                    ]
                }),
            ),
        }
    }

    pub fn checks(&self, out: &mut dyn Write, rows: &[Check]) -> Result<(), CliError> {
        match self.format {
            Format::Json => rows.iter().try_for_each(|r| Self::json_line(out, r)),
            Format::Csv => Self::csv(
                out,
                &["name", "criterion", "residual", "tolerance", "passed", "detail"],
                rows.iter().map(|r| {
                    vec![
                        r.name.clone(),
                        r.criterion.map(|c| c.to_string()).unwrap_or_default(),
                        format!("{:e}", r.residual),
                        format!("{:e}", r.tolerance),
                        r.passed.to_string(),
                        r.detail.clone(),
                    ]
                }),
            ),
        }
    }
}
