//! Summary table output: CSV for machines, aligned text for people.

use std::fmt::Write as _;

use shotchart_core::{ShotValue, SummaryRow, SummaryTable};

pub const CSV_HEADER: [&str; 6] = [
    "value",
    "attempts",
    "observed_made_fraction",
    "estimated_mean_probability",
    "observed_points_per_attempt",
    "estimated_expected_score",
];

fn value_label(v: ShotValue) -> &'static str {
    match v {
        ShotValue::Two => "2pt",
        ShotValue::Three => "3pt",
    }
}

fn stats(r: &SummaryRow) -> [Option<f64>; 4] {
    [
        r.observed_made_fraction,
        r.estimated_mean_probability,
        r.observed_points_per_attempt,
        r.estimated_expected_score,
    ]
}

/// One row per shot value; missing statistics are empty fields. Numbers use
/// shortest round-trip formatting.
pub fn summary_csv(table: &SummaryTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in &table.rows {
        let mut rec = vec![value_label(r.value).to_string(), r.attempts.to_string()];
        rec.extend(stats(r).iter().map(|s| s.map(|v| format!("{v:?}")).unwrap_or_default()));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

pub fn summary_text(table: &SummaryTable) -> String {
    let header = ["shot", "attempts", "made%", "est.prob", "pts/att", "est.pts"];
    let mut rows: Vec<[String; 6]> = Vec::new();
    for r in &table.rows {
        let s = stats(r).map(|v| v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}")));
        let [a, b, c, d] = s;
        rows.push([
            value_label(r.value).to_string(),
            r.attempts.to_string(),
            a,
            b,
            c,
            d,
        ]);
    }
    let widths: Vec<usize> = (0..6)
        .map(|i| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap())
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, cells: &[&str]| {
        for (i, c) in cells.iter().enumerate() {
            if i == 0 {
                let _ = write!(out, "{c:<w$}", w = widths[0]);
            } else {
                let _ = write!(out, "  {c:>w$}", w = widths[i]);
            }
        }
        out.push('\n');
    };
    line(&mut out, &header);
    for r in &rows {
        line(&mut out, &r.each_ref().map(String::as_str));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> SummaryTable {
        SummaryTable {
            rows: [
                SummaryRow {
                    value: ShotValue::Two,
                    attempts: 3,
                    observed_made_fraction: Some(2.0 / 3.0),
                    estimated_mean_probability: Some(0.6),
                    observed_points_per_attempt: Some(4.0 / 3.0),
                    estimated_expected_score: Some(1.2),
                },
                SummaryRow {
                    value: ShotValue::Three,
                    attempts: 0,
                    observed_made_fraction: None,
                    estimated_mean_probability: None,
                    observed_points_per_attempt: None,
                    estimated_expected_score: None,
                },
            ],
        }
    }

    #[test]
    fn csv_layout() {
        let s = summary_csv(&table());
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert_eq!(lines[1], "2pt,3,0.6666666666666666,0.6,1.3333333333333333,1.2");
        assert_eq!(lines[2], "3pt,0,,,,");
    }

    #[test]
    fn text_is_aligned() {
        let s = summary_text(&table());
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l.len() == lines[0].len()));
        assert!(lines[1].contains("0.6667"));
        assert!(lines[2].ends_with('-'));
    }
}
