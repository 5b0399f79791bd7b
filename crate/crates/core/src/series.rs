//! Per-tick time-series CSV.
//!
//! Columns: `tick, price, excess_demand, pair_buys, pair_sells, ref_buys,
//! ref_sells, is_measured`. Prices are written with the shortest decimal
//! representation that parses back to the same `f64`.

use std::io::{Read, Write};

use thiserror::Error;

use crate::market::TickRecord;

pub const SERIES_HEADER: [&str; 8] = [
    "tick",
    "price",
    "excess_demand",
    "pair_buys",
    "pair_sells",
    "ref_buys",
    "ref_sells",
    "is_measured",
];

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("missing required column `{0}`")]
    MissingColumn(&'static str),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub fn write_series<W: Write>(records: &[TickRecord], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SERIES_HEADER)?;
    for r in records {
        w.write_record([
            r.tick.to_string(),
            r.price.to_string(),
            r.excess_demand.to_string(),
            r.pair_buys.to_string(),
            r.pair_sells.to_string(),
            r.ref_buys.to_string(),
            r.ref_sells.to_string(),
            u8::from(r.measured).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// A price series read back from CSV. Only `price` is required.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeriesTable {
    pub price: Vec<f64>,
    pub excess_demand: Option<Vec<i64>>,
    pub measured: Option<Vec<bool>>,
}

impl SeriesTable {
    /// Prices of the measured rows, or every price if the file has no `is_measured` column.
    pub fn measured_prices(&self) -> Vec<f64> {
        match &self.measured {
            Some(m) => self
                .price
                .iter()
                .zip(m)
                .filter(|(_, &keep)| keep)
                .map(|(&p, _)| p)
                .collect(),
            None => self.price.clone(),
        }
    }

    pub fn is_measured(&self, i: usize) -> bool {
        self.measured.as_ref().is_none_or(|m| m[i])
    }
}

pub fn read_series<R: Read>(input: R) -> Result<SeriesTable, SeriesError> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let price_col = col("price").ok_or(SeriesError::MissingColumn("price"))?;
    let demand_col = col("excess_demand");
    let measured_col = col("is_measured");

    let mut table = SeriesTable {
        excess_demand: demand_col.map(|_| Vec::new()),
        measured: measured_col.map(|_| Vec::new()),
        ..Default::default()
    };
    for rec in rdr.records() {
        let rec = rec.map_err(|e| match e.position() {
            Some(pos) => SeriesError::Malformed {
                line: pos.line(),
                message: e.to_string(),
            },
            None => SeriesError::Csv(e),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| rec.get(i).unwrap_or("").trim();
        let bad = |name: &str, v: &str| SeriesError::Malformed {
            line,
            message: format!("invalid {name} `{v}`"),
        };

        let p = field(price_col);
        let price: f64 = p.parse().map_err(|_| bad("price", p))?;
        if !(price.is_finite() && price > 0.0) {
            return Err(bad("price", p));
        }
        table.price.push(price);
        if let (Some(c), Some(v)) = (demand_col, table.excess_demand.as_mut()) {
            let s = field(c);
            v.push(s.parse().map_err(|_| bad("excess_demand", s))?);
        }
        if let (Some(c), Some(v)) = (measured_col, table.measured.as_mut()) {
            let s = field(c);
            v.push(match s {
                "1" | "true" => true,
                "0" | "false" => false,
                _ => return Err(bad("is_measured", s)),
            });
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{run_seeded, MarketConfig};

    #[test]
    fn round_trip_preserves_prices_exactly() {
        let c = MarketConfig {
            n_agents: 100,
            ratio_ref: 0.3,
            relax_steps: 20,
            measure_steps: 30,
            ..MarketConfig::default()
        };
        let out = run_seeded(&c).unwrap();
        let mut buf = Vec::new();
        write_series(&out.records, &mut buf).unwrap();
        let t = read_series(buf.as_slice()).unwrap();
        let prices: Vec<f64> = out.records.iter().map(|r| r.price).collect();
        assert_eq!(t.price, prices);
        assert_eq!(t.measured_prices(), out.measured_prices());
        assert_eq!(
            t.excess_demand.unwrap(),
            out.records.iter().map(|r| r.excess_demand).collect::<Vec<_>>()
        );
    }

    #[test]
    fn price_only_file() {
        let t = read_series("price\n100\n101.5\n".as_bytes()).unwrap();
        assert_eq!(t.price, vec![100.0, 101.5]);
        assert!(t.excess_demand.is_none() && t.measured.is_none());
        assert_eq!(t.measured_prices().len(), 2);
    }

    #[test]
    fn malformed_rows_report_line() {
        let err = read_series("tick,price\n1,100\n2,abc\n".as_bytes()).unwrap_err();
        match err {
            SeriesError::Malformed { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let err = read_series("price\n100\n-1\n".as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("line 3"));
        assert!(matches!(
            read_series("tick\n1\n".as_bytes()),
            Err(SeriesError::MissingColumn("price"))
        ));
        let err = read_series("price,x\n100,1\n1\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }
}
