use std::io::Write;

use crate::harness::{Rate, SimRow};

pub const HEADER: [&str; 14] = [
    "t", "fer", "bound", "fer1", "bound1", "fer2", "bound2", "fer3", "bound3", "trials", "fer_ci", "fer1_ci", "fer2_ci",
    "fer3_ci",
];

fn num(x: f64) -> String {
    format!("{x:.6e}")
}

fn value(rate: Option<Rate>) -> String {
    rate.map(|r| num(r.value)).unwrap_or_default()
}

fn half_width(rate: Option<Rate>) -> String {
    rate.map(|r| num(r.half_width)).unwrap_or_default()
}

/// Writes the header and one record per row; empirical fields are empty for
/// bound-only rows.
pub fn write_csv<W: Write>(out: W, rows: &[SimRow]) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(HEADER)?;
    for row in rows {
        let rates = [row.fer(), row.fer_product(), row.fer_syndrome(), row.fer_intersection()];
        let b = &row.bounds;
        writer.write_record([
            row.t.to_string(),
            value(rates[0]),
            num(b.overall),
            value(rates[1]),
            num(b.product),
            value(rates[2]),
            num(b.syndrome),
            value(rates[3]),
            num(b.intersection),
            row.counts.map(|c| c.trials.to_string()).unwrap_or_default(),
            half_width(rates[0]),
            half_width(rates[1]),
            half_width(rates[2]),
            half_width(rates[3]),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SimConfig;
    use crate::harness::bounds_only;

    #[test]
    fn bounds_only_rows_leave_empirical_fields_empty() {
        let config = SimConfig { t_range: 1..=2, ..SimConfig::reference() };
        let mut buf = Vec::new();
        write_csv(&mut buf, &bounds_only(&config).unwrap()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], HEADER.join(","));
        assert_eq!(lines.len(), 3);
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 14);
        assert_eq!(fields[0], "1");
        assert!(fields[1].is_empty() && fields[9].is_empty() && fields[13].is_empty());
        assert!(fields[2].parse::<f64>().unwrap() > 0.0);
    }
}
