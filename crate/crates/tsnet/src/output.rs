//! CSV output. Columns are fixed per sweep kind and floats are written with
//! nine significant digits in scientific notation, independent of locale.

use std::io::Write;

use crate::sweep::SweepTable;

/// `1.23456789e-2`; `NaN`, `inf` and `-inf` for non-finite values.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Header: `series, <axis>, <columns...>, status`.
pub fn write_table<W: Write>(table: &SweepTable, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["series".to_string(), table.axis.clone()];
    header.extend(table.columns.iter().cloned());
    header.push("status".into());
    w.write_record(&header)?;
    for row in &table.rows {
        let mut rec = vec![row.series.clone(), format_float(row.axis)];
        rec.extend(row.values.iter().map(|&v| format_float(v)));
        rec.push(row.status());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
