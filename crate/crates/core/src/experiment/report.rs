use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::{ExperimentError, ExperimentResult};

pub const DYNAMIC_OBJECT: &str = "[Dynamic Object]";
pub const PROCESSED: &str = "[Processed]";

const HEADER: [&str; 5] = ["object_name", "data_source", "category", "statistic", "value"];

/// Creation, destruction and processing counts are `Throughput`; what a
/// buffer still holds at the end of the run is `Content`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Category {
    Throughput,
    Content,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Statistic {
    Total,
    Mean,
    Min,
    Max,
}

macro_rules! string_enum {
    ($ty:ident { $($variant:ident),* }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => stringify!($variant)),* }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = ExperimentError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $(stringify!($variant) => Ok($ty::$variant),)*
                    other => Err(ExperimentError::Parse(format!(
                        concat!("unknown ", stringify!($ty), " {:?}"), other
                    ))),
                }
            }
        }
    };
}

string_enum!(Category { Throughput, Content });
string_enum!(Statistic { Total, Mean, Min, Max });

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub object_name: String,
    pub data_source: String,
    pub category: Category,
    pub statistic: Statistic,
    pub value: f64,
}

pub(crate) fn sort_rows(rows: &mut [ReportRow]) {
    rows.sort_by(|a, b| {
        (&a.object_name, &a.data_source, a.statistic.as_str(), a.category.as_str()).cmp(&(
            &b.object_name,
            &b.data_source,
            b.statistic.as_str(),
            b.category.as_str(),
        ))
    });
}

/// Integral values print without a decimal point; everything else is
/// rounded to six significant digits with trailing zeros removed.
pub fn format_value(value: f64) -> String {
    if value.fract() == 0.0 && value.abs() < 1e15 {
        return format!("{}", value as i64);
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let text = format!("{value:.decimals$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

/// Writes the header and `rows` in report order (object, source, statistic).
pub fn write_csv<W: Write>(rows: &[ReportRow], writer: W) -> Result<(), csv::Error> {
    let mut sorted = rows.to_vec();
    sort_rows(&mut sorted);
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(HEADER)?;
    for r in &sorted {
        w.write_record([
            r.object_name.as_str(),
            r.data_source.as_str(),
            r.category.as_str(),
            r.statistic.as_str(),
            &format_value(r.value),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_csv(result: &ExperimentResult, path: impl AsRef<Path>) -> Result<(), ExperimentError> {
    let path = path.as_ref();
    let io_err = |source: std::io::Error| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    write_csv(&result.rows, &mut out).map_err(|e| io_err(e.into()))?;
    out.flush().map_err(io_err)
}

pub fn parse_csv<R: Read>(reader: R) -> Result<Vec<ReportRow>, ExperimentError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = r.headers().map_err(|e| ExperimentError::Parse(e.to_string()))?;
    if header.iter().ne(HEADER) {
        return Err(ExperimentError::Parse(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| ExperimentError::Parse(e.to_string()))?;
        if record.len() != HEADER.len() {
            return Err(ExperimentError::Parse(format!("expected 5 fields, got {}", record.len())));
        }
        let value = record[4]
            .parse::<f64>()
            .map_err(|e| ExperimentError::Parse(format!("value {:?}: {e}", &record[4])))?;
        rows.push(ReportRow {
            object_name: record[0].to_string(),
            data_source: record[1].to_string(),
            category: record[2].parse()?,
            statistic: record[3].parse()?,
            value,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(value: f64) -> ReportRow {
        ReportRow {
            object_name: "Path1".into(),
            data_source: "[Travelers]".into(),
            category: Category::Throughput,
            statistic: Statistic::Total,
            value,
        }
    }

    fn to_string(rows: &[ReportRow]) -> String {
        let mut buf = Vec::new();
        write_csv(rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(to_string(&[]), "object_name,data_source,category,statistic,value\n");
    }

    #[test]
    fn one_row_exact_bytes() {
        assert_eq!(
            to_string(&[row(92.0)]),
            "object_name,data_source,category,statistic,value\nPath1,[Travelers],Throughput,Total,92\n"
        );
    }

    #[test]
    fn value_formatting() {
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(1234567.0), "1234567");
        assert_eq!(format_value(74.5), "74.5");
        assert_eq!(format_value(2.123456789), "2.12346");
        assert_eq!(format_value(100.0 / 3.0), "33.3333");
        assert_eq!(format_value(0.000718754321), "0.000718754");
        assert_eq!(format_value(9.9999996), "10");
        assert_eq!(format_value(-1.5), "-1.5");
    }

    #[test]
    fn rows_are_sorted_on_output() {
        let mut a = row(1.0);
        a.object_name = "Path2".into();
        let mut b = row(2.0);
        b.statistic = Statistic::Max;
        let text = to_string(&[a, b]);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[1].starts_with("Path1,[Travelers],Throughput,Max"));
        assert!(lines[2].starts_with("Path2,"));
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(parse_csv("a,b\n1,2\n".as_bytes()).is_err());
        let bad = "object_name,data_source,category,statistic,value\nX,[Y],Sideways,Total,1\n";
        assert!(parse_csv(bad.as_bytes()).is_err());
    }

    #[test]
    fn names_with_commas_are_quoted() {
        let mut r = row(3.0);
        r.object_name = "Path1, Path2".into();
        let text = to_string(std::slice::from_ref(&r));
        assert!(text.contains("\"Path1, Path2\""));
        assert_eq!(parse_csv(text.as_bytes()).unwrap(), vec![r]);
    }

    proptest! {
        #[test]
        fn round_trip_within_six_significant_digits(v in -1e9f64..1e9, int in 0u64..1_000_000_000) {
            let rows = vec![row(v), row(int as f64)];
            let parsed = parse_csv(to_string(&rows).as_bytes()).unwrap();
            prop_assert_eq!(parsed[1].value, int as f64);
            let expected: f64 = format_value(v).parse().unwrap();
            prop_assert_eq!(parsed[0].value, expected);
            if v != 0.0 {
                prop_assert!(((parsed[0].value - v) / v).abs() <= 5e-6);
            }
        }
    }
}
