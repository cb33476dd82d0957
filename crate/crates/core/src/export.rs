//! CSV and SVG output for time series.

use crate::engine::TimeSeries;
use std::fmt::Write;

/// `Month,<Name1>,<Name2>,...` then one row per record, integer counts,
/// LF line endings.
pub fn to_csv(series: &TimeSeries) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["Month".to_string()];
    header.extend(series.names.iter().cloned());
    writer.write_record(&header).expect("in-memory csv write");
    for record in &series.records {
        let mut row = vec![record.tick.to_string()];
        row.extend(record.counts.iter().map(|c| format!("{}", c.round() as i64)));
        writer.write_record(&row).expect("in-memory csv write");
    }
    String::from_utf8(writer.into_inner().expect("flush to Vec")).expect("csv output is UTF-8")
}

const PALETTE: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Static multi-series line chart: months on the x axis, population levels
/// on the y axis.
pub fn to_svg(series: &TimeSeries, title: &str) -> String {
    let (w, h, margin) = (720.0, 400.0, 50.0);
    let ticks = series.records.last().map(|r| r.tick).unwrap_or(0).max(1) as f64;
    let peak = series
        .records
        .iter()
        .flat_map(|r| r.counts.iter().copied())
        .fold(1.0_f64, f64::max);
    let sx = |t: f64| margin + t / ticks * (w - 2.0 * margin);
    let sy = |v: f64| h - margin - v / peak * (h - 2.0 * margin);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        w / 2.0,
        escape(title)
    )
    .unwrap();
    writeln!(
        out,
        r#"<path d="M{m} {m} V{b} H{r}" stroke="black" fill="none"/>"#,
        m = margin,
        b = h - margin,
        r = w - margin
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">Month</text>"#,
        w / 2.0,
        h - 12.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 14 {})">Population</text>"#,
        h / 2.0,
        h / 2.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="10">{}</text>"#,
        margin - 4.0,
        margin + 4.0,
        peak.round()
    )
    .unwrap();
    for (c, name) in series.names.iter().enumerate() {
        let colour = PALETTE[c % PALETTE.len()];
        let points: Vec<String> = series
            .records
            .iter()
            .map(|r| format!("{:.1},{:.1}", sx(f64::from(r.tick)), sy(r.counts[c])))
            .collect();
        writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{colour}">{}</text>"#,
            w - margin + 4.0,
            margin + 16.0 * c as f64,
            escape(name)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn escape(text: &str) -> String {
    quick_xml::escape::escape(text).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::PopulationRecord;

    fn sample() -> TimeSeries {
        TimeSeries {
            names: vec!["Wolf".into(), "Sheep".into(), "Grass".into()],
            records: vec![
                PopulationRecord {
                    tick: 0,
                    counts: vec![200.0, 1200.0, 1000.0],
                },
                PopulationRecord {
                    tick: 1,
                    counts: vec![200.0, 1128.0, 57.4],
                },
            ],
        }
    }

    #[test]
    fn csv_layout() {
        assert_eq!(
            to_csv(&sample()),
            "Month,Wolf,Sheep,Grass\n0,200,1200,1000\n1,200,1128,57\n"
        );
    }

    #[test]
    fn csv_quotes_awkward_names() {
        let mut s = sample();
        s.names[0] = "Wolf, grey".into();
        assert!(to_csv(&s).starts_with("Month,\"Wolf, grey\",Sheep,Grass\n"));
    }

    #[test]
    fn svg_has_one_line_per_series() {
        let svg = to_svg(&sample(), "Wolves & sheep");
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("Wolves &amp; sheep"));
    }
}
