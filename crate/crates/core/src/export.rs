//! Serialized forms: bound tables, figure curves, weight spectra, generator
//! matrices. Every writer is deterministic so repeated runs are
//! byte-identical.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::WeightSpectrum;
use crate::bounds::{bound_sweep, BoundReport};
use crate::codec::CodeInstance;
use crate::error::{Error, Result};
use crate::par::Exec;

fn csv_error(e: impl fmt::Display) -> Error {
    Error::Parse(format!("csv: {e}"))
}

fn write_csv<T: Serialize>(records: impl IntoIterator<Item = T>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for rec in records {
        w.serialize(rec).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(csv_error)?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct BoundRow {
    k: u64,
    partial_k: u64,
    rs_degree_lower: u64,
    lower_opt: u64,
    lrc_upper: u64,
    grid_upper: u64,
    gridv2_upper: Option<u64>,
    exact: Option<u64>,
    witness_a: u64,
    witness_b: u64,
    witness_nr: u64,
    witness_nc: u64,
}

impl From<&BoundReport> for BoundRow {
    fn from(b: &BoundReport) -> BoundRow {
        BoundRow {
            k: b.k,
            partial_k: b.partial_k,
            rs_degree_lower: b.rs_degree_lower,
            lower_opt: b.lower_opt,
            lrc_upper: b.lrc_upper,
            grid_upper: b.grid_upper,
            gridv2_upper: b.gridv2_upper,
            exact: b.exact,
            witness_a: b.witness_ab.0,
            witness_b: b.witness_ab.1,
            witness_nr: b.witness_nrnc.0,
            witness_nc: b.witness_nrnc.1,
        }
    }
}

/// One row per report; absent optional values are blank.
pub fn bounds_csv(rows: &[BoundReport]) -> Result<String> {
    write_csv(rows.iter().map(BoundRow::from))
}

pub fn bounds_json(rows: &[BoundReport]) -> Result<String> {
    to_json(&rows)
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// The bound comparison figures: `(n, r)` = (32, 8), (32, 16), (128, 64), (32, 25).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    Eg1,
    Eg2a,
    Eg2b,
    Eg3,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Eg1, Figure::Eg2a, Figure::Eg2b, Figure::Eg3];

    pub fn params(self) -> (u64, u64) {
        match self {
            Figure::Eg1 => (32, 8),
            Figure::Eg2a => (32, 16),
            Figure::Eg2b => (128, 64),
            Figure::Eg3 => (32, 25),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Figure::Eg1 => "eg1",
            Figure::Eg2a => "eg2a",
            Figure::Eg2b => "eg2b",
            Figure::Eg3 => "eg3",
        }
    }

    /// Bound reports for every `k` in `1..=r^2`.
    pub fn sweep(self, exec: Exec) -> Result<Vec<BoundReport>> {
        let (n, r) = self.params();
        bound_sweep(n, r, 1..=r * r, exec)
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Figure> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown figure {s:?}; expected eg1, eg2a, eg2b or eg3")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurvePoint {
    pub k: u64,
    pub value: u64,
    pub series: &'static str,
}

/// Points of the series `lower_opt`, `grid_upper` and `gridv2_upper` (the
/// last only where defined), ordered by `k` then series.
pub fn figure_points(rows: &[BoundReport]) -> Vec<CurvePoint> {
    rows.iter()
        .flat_map(|b| {
            [
                Some(CurvePoint { k: b.k, value: b.lower_opt, series: "lower_opt" }),
                Some(CurvePoint { k: b.k, value: b.grid_upper, series: "grid_upper" }),
                b.gridv2_upper.map(|v| CurvePoint { k: b.k, value: v, series: "gridv2_upper" }),
            ]
            .into_iter()
            .flatten()
        })
        .collect()
}

/// Long format `k,value,series`, one line per [`figure_points`] entry.
pub fn figure_csv(rows: &[BoundReport]) -> Result<String> {
    write_csv(figure_points(rows))
}

#[derive(Serialize)]
struct SpectrumRow {
    weight: usize,
    count: u64,
}

pub fn spectrum_csv(spectrum: &WeightSpectrum) -> Result<String> {
    write_csv(spectrum.counts.iter().map(|(&weight, &count)| SpectrumRow { weight, count }))
}

/// A JSON header line, then one line per generator row of comma-separated
/// lowercase hex symbols in `Zf`-major coordinate order.
pub fn generator_csv(code: &CodeInstance) -> Result<String> {
    let mut out = serde_json::to_string(&code.export_header()).map_err(|e| Error::Parse(e.to_string()))?;
    out.push('\n');
    let g = code.generator();
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for i in 0..g.rows() {
        w.write_record(g.row(i).iter().map(|e| e.to_hex())).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(csv_error)?;
    out.push_str(std::str::from_utf8(&bytes).expect("csv output is utf-8"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{exhaustive_distance, DEFAULT_BUDGET};
    use crate::codec::{build_code, GeneratorHeader};
    use crate::field::Elem;
    use crate::linearized::instantiate_standard;

    #[test]
    fn bounds_table_q4() {
        let rows = bound_sweep(4, 2, 1..=4, Exec::default()).unwrap();
        let csv = bounds_csv(&rows).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "k,partial_k,rs_degree_lower,lower_opt,lrc_upper,grid_upper,gridv2_upper,exact,witness_a,witness_b,witness_nr,witness_nc"
        );
        assert_eq!(lines.len(), 5);
        // gridv2 is blank at k = 1
        assert!(lines[1].starts_with("1,0,16,16,16,16,,16,"));
        let exact: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(7).unwrap()).collect();
        assert_eq!(exact, vec!["16", "15", "12", "9"]);
        assert_eq!(csv, bounds_csv(&bound_sweep(4, 2, 1..=4, Exec::Sequential).unwrap()).unwrap());
        let json: serde_json::Value = serde_json::from_str(&bounds_json(&rows).unwrap()).unwrap();
        assert_eq!(json[3]["exact"], 9);
    }

    #[test]
    fn figure_names_and_curves() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        assert!("eg4".parse::<Figure>().is_err());
        let rows = Figure::Eg1.sweep(Exec::default()).unwrap();
        let csv = figure_csv(&rows).unwrap();
        assert_eq!(csv.lines().next(), Some("k,value,series"));
        // 64 k values, three series except gridv2 at k = 1
        assert_eq!(csv.lines().count(), 1 + 64 * 3 - 1);
        assert!(csv.contains("\n63,650,grid_upper\n"));
    }

    #[test]
    fn spectrum_and_generator() {
        let pair = instantiate_standard(2).unwrap();
        let code = build_code(&pair, 2, 2).unwrap();
        let (_, spec) = exhaustive_distance(&code, DEFAULT_BUDGET).unwrap();
        let csv = spectrum_csv(&spec).unwrap();
        assert!(csv.starts_with("weight,count\n0,1\n"));
        let text = generator_csv(&code).unwrap();
        let mut lines = text.lines();
        let header: GeneratorHeader = serde_json::from_str(lines.next().unwrap()).unwrap();
        assert_eq!((header.q, header.m, header.r, header.k), (4, 4, 2, 2));
        assert_eq!(header.reduction_poly_hex, "13");
        assert_eq!(header.coordinate_order, "Zf-major");
        let rows: Vec<Vec<Elem>> =
            lines.map(|l| l.split(',').map(|h| Elem::from_hex(h).unwrap()).collect()).collect();
        assert_eq!(rows.len(), 2);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.as_slice(), code.generator().row(i));
        }
    }
}
