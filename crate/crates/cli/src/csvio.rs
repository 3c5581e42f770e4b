//! CSV tables. Floats are written as `{:.16e}` so they read back bit-exact;
//! missing values are empty cells.

use std::io::{Read, Write};
use std::path::Path;

use gapscope_core::Shots;

use crate::runner::{BenchRow, CurveRow, ResultRow, SeriesRow};

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: column `{column}`: {msg}")]
    Field { line: u64, column: &'static str, msg: String },
    #[error("missing column `{0}`")]
    MissingColumn(&'static str),
}

pub const ESTIMATE_COLUMNS: [&str; 17] = [
    "sweep_value",
    "status",
    "gap_est",
    "gap_std",
    "amplitude",
    "phase",
    "offset",
    "gap_exact",
    "rel_err",
    "shots",
    "backend",
    "delta_tau",
    "t_max",
    "refined",
    "residual_rms",
    "runtime_s",
    "error",
];

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn fmt_bool(b: Option<bool>) -> String {
    b.map(|b| b.to_string()).unwrap_or_default()
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(w)
}

pub fn write_estimates<W: Write>(w: W, rows: &[ResultRow]) -> Result<(), CsvError> {
    let mut wr = writer(w);
    wr.write_record(ESTIMATE_COLUMNS)?;
    for r in rows {
        wr.write_record([
            fmt_f64(r.sweep_value),
            r.status.clone(),
            fmt_opt(r.gap_est),
            fmt_opt(r.gap_std),
            fmt_opt(r.amplitude),
            fmt_opt(r.phase),
            fmt_opt(r.offset),
            fmt_opt(r.gap_exact),
            fmt_opt(r.rel_err),
            r.shots.to_string(),
            r.backend.clone(),
            fmt_opt(r.delta_tau),
            fmt_opt(r.t_max),
            fmt_bool(r.refined),
            fmt_opt(r.residual_rms),
            fmt_opt(r.runtime_s),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_series<W: Write>(w: W, rows: &[SeriesRow]) -> Result<(), CsvError> {
    let mut wr = writer(w);
    wr.write_record(["sweep_value", "t", "value", "sigma", "used"])?;
    for r in rows {
        wr.write_record([fmt_f64(r.sweep_value), fmt_f64(r.t), fmt_f64(r.value), fmt_f64(r.sigma), r.used.to_string()])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_curves<W: Write>(w: W, rows: &[CurveRow]) -> Result<(), CsvError> {
    let mut wr = writer(w);
    wr.write_record(["sweep_value", "t", "fit", "exact"])?;
    for r in rows {
        wr.write_record([fmt_f64(r.sweep_value), fmt_f64(r.t), fmt_opt(r.fit), fmt_opt(r.exact)])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_bench<W: Write>(w: W, rows: &[BenchRow]) -> Result<(), CsvError> {
    let mut wr = writer(w);
    wr.write_record(["sweep_value", "gap_exact", "amplitude"])?;
    for r in rows {
        wr.write_record([fmt_f64(r.sweep_value), fmt_f64(r.gap_exact), fmt_opt(r.amplitude)])?;
    }
    wr.flush()?;
    Ok(())
}

/// Header-indexed record access with typed parsing.
struct Table {
    headers: csv::StringRecord,
    records: Vec<csv::StringRecord>,
}

impl Table {
    fn read<R: Read>(r: R) -> Result<Self, CsvError> {
        let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let headers = rd.headers()?.clone();
        let records = rd.records().collect::<Result<Vec<_>, _>>()?;
        Ok(Self { headers, records })
    }

    fn col(&self, name: &'static str) -> Result<usize, CsvError> {
        self.headers.iter().position(|h| h == name).ok_or(CsvError::MissingColumn(name))
    }

    fn opt_col(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }
}

fn line(rec: &csv::StringRecord) -> u64 {
    rec.position().map(|p| p.line()).unwrap_or(0)
}

fn parse_f64(rec: &csv::StringRecord, idx: usize, column: &'static str) -> Result<f64, CsvError> {
    let s = rec.get(idx).unwrap_or("");
    s.trim().parse().map_err(|_| CsvError::Field { line: line(rec), column, msg: format!("not a number: {s:?}") })
}

fn parse_opt(rec: &csv::StringRecord, idx: Option<usize>, column: &'static str) -> Result<Option<f64>, CsvError> {
    match idx.and_then(|i| rec.get(i)) {
        None | Some("") => Ok(None),
        Some(_) => parse_f64(rec, idx.unwrap(), column).map(Some),
    }
}

fn parse_bool(rec: &csv::StringRecord, idx: Option<usize>, column: &'static str) -> Result<Option<bool>, CsvError> {
    match idx.and_then(|i| rec.get(i)) {
        None | Some("") => Ok(None),
        Some(s) => s
            .parse()
            .map(Some)
            .map_err(|_| CsvError::Field { line: line(rec), column, msg: format!("not a bool: {s:?}") }),
    }
}

fn text(rec: &csv::StringRecord, idx: Option<usize>) -> Option<String> {
    idx.and_then(|i| rec.get(i)).filter(|s| !s.is_empty()).map(str::to_string)
}

pub fn read_estimates<R: Read>(r: R) -> Result<Vec<ResultRow>, CsvError> {
    let t = Table::read(r)?;
    let x = t.col("sweep_value")?;
    let c = |name| t.opt_col(name);
    t.records
        .iter()
        .map(|rec| {
            let shots = match text(rec, c("shots")) {
                None => Shots::Exact,
                Some(s) => s
                    .parse()
                    .map_err(|e: gapscope_core::GapError| CsvError::Field { line: line(rec), column: "shots", msg: e.to_string() })?,
            };
            Ok(ResultRow {
                sweep_value: parse_f64(rec, x, "sweep_value")?,
                status: text(rec, c("status")).unwrap_or_else(|| "ok".into()),
                gap_est: parse_opt(rec, c("gap_est"), "gap_est")?,
                gap_std: parse_opt(rec, c("gap_std"), "gap_std")?,
                amplitude: parse_opt(rec, c("amplitude"), "amplitude")?,
                phase: parse_opt(rec, c("phase"), "phase")?,
                offset: parse_opt(rec, c("offset"), "offset")?,
                gap_exact: parse_opt(rec, c("gap_exact"), "gap_exact")?,
                rel_err: parse_opt(rec, c("rel_err"), "rel_err")?,
                shots,
                backend: text(rec, c("backend")).unwrap_or_default(),
                delta_tau: parse_opt(rec, c("delta_tau"), "delta_tau")?,
                t_max: parse_opt(rec, c("t_max"), "t_max")?,
                refined: parse_bool(rec, c("refined"), "refined")?,
                residual_rms: parse_opt(rec, c("residual_rms"), "residual_rms")?,
                runtime_s: parse_opt(rec, c("runtime_s"), "runtime_s")?,
                error: text(rec, c("error")),
            })
        })
        .collect()
}

pub fn read_series<R: Read>(r: R) -> Result<Vec<SeriesRow>, CsvError> {
    let t = Table::read(r)?;
    let (x, tt, v, s) = (t.col("sweep_value")?, t.col("t")?, t.col("value")?, t.col("sigma")?);
    let used = t.opt_col("used");
    t.records
        .iter()
        .map(|rec| {
            Ok(SeriesRow {
                sweep_value: parse_f64(rec, x, "sweep_value")?,
                t: parse_f64(rec, tt, "t")?,
                value: parse_f64(rec, v, "value")?,
                sigma: parse_f64(rec, s, "sigma")?,
                used: parse_bool(rec, used, "used")?.unwrap_or(true),
            })
        })
        .collect()
}

pub fn read_curves<R: Read>(r: R) -> Result<Vec<CurveRow>, CsvError> {
    let t = Table::read(r)?;
    let (x, tt) = (t.col("sweep_value")?, t.col("t")?);
    let (f, e) = (t.opt_col("fit"), t.opt_col("exact"));
    t.records
        .iter()
        .map(|rec| {
            Ok(CurveRow {
                sweep_value: parse_f64(rec, x, "sweep_value")?,
                t: parse_f64(rec, tt, "t")?,
                fit: parse_opt(rec, f, "fit")?,
                exact: parse_opt(rec, e, "exact")?,
            })
        })
        .collect()
}

pub fn read_bench<R: Read>(r: R) -> Result<Vec<BenchRow>, CsvError> {
    let t = Table::read(r)?;
    let (x, g) = (t.col("sweep_value")?, t.col("gap_exact")?);
    let a = t.opt_col("amplitude");
    t.records
        .iter()
        .map(|rec| {
            Ok(BenchRow {
                sweep_value: parse_f64(rec, x, "sweep_value")?,
                gap_exact: parse_f64(rec, g, "gap_exact")?,
                amplitude: parse_opt(rec, a, "amplitude")?,
            })
        })
        .collect()
}

pub fn open(path: &Path) -> Result<std::io::BufReader<std::fs::File>, CsvError> {
    Ok(std::io::BufReader::new(std::fs::File::open(path)?))
}

pub fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, CsvError> {
    Ok(std::io::BufWriter::new(std::fs::File::create(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips_bits() {
        for x in [0.1, -1e-300, 5e-324, 1.0 / 3.0, 123456789.12345679, f64::MAX] {
            let back: f64 = fmt_f64(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x}");
        }
    }

    #[test]
    fn quoted_error_text_survives() {
        let row = ResultRow {
            sweep_value: 1.5,
            status: "failed".into(),
            gap_est: None,
            gap_std: None,
            amplitude: None,
            phase: None,
            offset: None,
            gap_exact: Some(0.25),
            rel_err: None,
            shots: Shots::Finite(100),
            backend: "statevector".into(),
            delta_tau: None,
            t_max: None,
            refined: None,
            residual_rms: None,
            runtime_s: None,
            error: Some("bad \"file\", line 3\nnext".into()),
        };
        let mut buf = Vec::new();
        write_estimates(&mut buf, std::slice::from_ref(&row)).unwrap();
        assert_eq!(read_estimates(&buf[..]).unwrap(), vec![row]);
    }
}
