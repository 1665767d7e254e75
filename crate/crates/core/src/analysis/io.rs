use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{CalibrationPoint, DeltaMeasurement, StatSummary, VoltagePair};
use crate::materials::table::csv_error;
use crate::{Error, Result};

const MEASUREMENT_HEADER: [&str; 4] = ["z_m", "delta_f_tot_N", "v_light_V", "v_dark_V"];
const CALIBRATION_HEADER: [&str; 4] = ["z_piezo_m", "s_def_units", "force_signal_units", "v_applied_V"];
const SUMMARY_HEADER: [&str; 5] = ["z_m", "mean_N", "random_err_N", "systematic_err_N", "total_err_N"];

// The header is written even when there are no rows.
fn writer_with_header<W: Write>(writer: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(header).map_err(|e| csv_error(e, "<output>"))?;
    Ok(w)
}

#[derive(Serialize, Deserialize)]
struct MeasurementRow {
    z_m: f64,
    #[serde(rename = "delta_f_tot_N")]
    delta_f_tot: f64,
    #[serde(rename = "v_light_V")]
    v_light: f64,
    #[serde(rename = "v_dark_V")]
    v_dark: f64,
}

#[derive(Serialize)]
struct SummaryRow {
    z_m: f64,
    #[serde(rename = "mean_N")]
    mean: f64,
    #[serde(rename = "random_err_N")]
    random: f64,
    #[serde(rename = "systematic_err_N")]
    systematic: f64,
    #[serde(rename = "total_err_N")]
    total: f64,
}

// Rows after a fixed header; `#` lines are comments. Returns each row with
// its 1-based line number.
fn read_rows<T: DeserializeOwned, R: Read>(reader: R, source: &str, header: &[&str]) -> Result<Vec<(u64, T)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let found = rdr.headers().map_err(|e| csv_error(e, source))?.clone();
    if found.iter().collect::<Vec<_>>() != header {
        let line = found.position().map(|p| p.line()).unwrap_or(1);
        return Err(Error::Parse {
            path: source.to_string(),
            line,
            message: format!("expected header `{}`", header.join(",")),
        });
    }
    let mut out = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map(|p| p.line()).unwrap_or(0);
                let row = record.deserialize(Some(&found)).map_err(|e| Error::Parse {
                    path: source.to_string(),
                    line,
                    message: e.to_string(),
                })?;
                out.push((line, row));
            }
            Err(e) => return Err(csv_error(e, source)),
        }
    }
    Ok(out)
}

pub fn read_measurements_csv<R: Read>(reader: R, source: &str) -> Result<Vec<DeltaMeasurement>> {
    read_rows::<MeasurementRow, _>(reader, source, &MEASUREMENT_HEADER)?
        .into_iter()
        .map(|(line, r)| {
            DeltaMeasurement::new(
                r.z_m,
                r.delta_f_tot,
                VoltagePair {
                    v_light: r.v_light,
                    v_dark: r.v_dark,
                },
            )
            .map_err(|e| Error::Parse {
                path: source.to_string(),
                line,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn write_measurements_csv<W: Write>(writer: W, rows: &[DeltaMeasurement]) -> Result<()> {
    let mut w = writer_with_header(writer, &MEASUREMENT_HEADER)?;
    for m in rows {
        w.serialize(MeasurementRow {
            z_m: m.z,
            delta_f_tot: m.delta_f_tot,
            v_light: m.pair.v_light,
            v_dark: m.pair.v_dark,
        })
        .map_err(|e| csv_error(e, "<output>"))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_calibration_csv<R: Read>(reader: R, source: &str) -> Result<Vec<CalibrationPoint>> {
    Ok(read_rows::<CalibrationPoint, _>(reader, source, &CALIBRATION_HEADER)?
        .into_iter()
        .map(|(_, p)| p)
        .collect())
}

pub fn write_calibration_csv<W: Write>(writer: W, rows: &[CalibrationPoint]) -> Result<()> {
    let mut w = writer_with_header(writer, &CALIBRATION_HEADER)?;
    for p in rows {
        w.serialize(p).map_err(|e| csv_error(e, "<output>"))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summaries_csv<W: Write>(writer: W, rows: &[StatSummary]) -> Result<()> {
    let mut w = writer_with_header(writer, &SUMMARY_HEADER)?;
    for s in rows {
        w.serialize(SummaryRow {
            z_m: s.z,
            mean: s.mean_delta_fd,
            random: s.random_error,
            systematic: s.systematic_error,
            total: s.total_error,
        })
        .map_err(|e| csv_error(e, "<output>"))?;
    }
    w.flush()?;
    Ok(())
}
