//! CSV tables for sweep rows and aggregates.

use std::io::Write;

use super::aggregate::AggregateRow;
use super::execute::{SweepRow, METRIC_NAMES};
use super::spec::GridParam;

const SIG_DIGITS: i32 = 9;

/// Formats a float with 9 significant digits, `%g` style: positional notation
/// for exponents in `[-5, 9)`, scientific otherwise, trailing zeros trimmed.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS).contains(&exp) {
        let fixed = format!("{:.*}", (SIG_DIGITS - 1 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn grid_value(p: GridParam, v: f64) -> String {
    match p {
        GridParam::GMax | GridParam::Memory => format!("{}", v as u64),
        GridParam::RatioRef => format_float(v),
    }
}

/// Columns: swept parameters (alphabetical), `replication`, `seed`, the
/// metrics, `wall_time_ms`, `error`.
pub fn write_rows_csv<W: Write>(params: &[GridParam], rows: &[SweepRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = params.iter().map(|p| p.name()).collect();
    header.extend(["replication", "seed"]);
    header.extend(METRIC_NAMES);
    header.extend(["wall_time_ms", "error"]);
    w.write_record(&header)?;

    for r in rows {
        let mut rec: Vec<String> = params
            .iter()
            .map(|&p| r.key.point.get(p).map(|v| grid_value(p, v)).unwrap_or_default())
            .collect();
        rec.push(r.key.replication.to_string());
        rec.push(r.key.seed.to_string());
        match &r.outcome {
            Ok(m) => {
                rec.extend(m.values().map(opt));
                rec.push(opt(r.wall_time_ms));
                rec.push(String::new());
            }
            Err(e) => {
                rec.extend(std::iter::repeat_n(String::new(), METRIC_NAMES.len()));
                rec.push(opt(r.wall_time_ms));
                rec.push(e.clone());
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: swept parameters, `n_runs`, `n_errors`, then `<metric>_mean` and
/// `<metric>_stderr` for each metric.
pub fn write_aggregate_csv<W: Write>(
    params: &[GridParam],
    rows: &[AggregateRow],
    out: W,
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = params.iter().map(|p| p.name().to_string()).collect();
    header.extend(["n_runs".to_string(), "n_errors".to_string()]);
    for m in METRIC_NAMES {
        header.push(format!("{m}_mean"));
        header.push(format!("{m}_stderr"));
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = params
            .iter()
            .map(|&p| r.point.get(p).map(|v| grid_value(p, v)).unwrap_or_default())
            .collect();
        rec.push(r.n_ok.to_string());
        rec.push(r.n_errors.to_string());
        for s in &r.metrics {
            rec.push(opt(s.mean));
            rec.push(opt(s.stderr));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
