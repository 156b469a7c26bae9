use serde::{Deserialize, Serialize};

use fqgauss::exactmath::CycNum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Mismatch,
    Unsupported,
}

/// One computed quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub form: String,
    pub quantity: String,
    pub exact: String,
    pub approx: String,
    pub rule: String,
    pub status: Status,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<Entry>,
    pub notes: Vec<String>,
}

/// One row of `table` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub form: String,
    pub order: u64,
    pub sigma: u8,
    pub g_exact: String,
    pub g_approx: String,
    pub gprime_exact: String,
    pub gprime_approx: String,
    pub rule: String,
}

pub const TABLE_HEADER: [&str; 8] =
    ["form", "|A|", "sigma", "G_exact", "G_approx", "Gprime_exact", "Gprime_approx", "rule"];

impl Report {
    pub fn push(&mut self, entry: Entry) {
        self.entries.push(entry);
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn has_mismatch(&self) -> bool {
        self.count(Status::Mismatch) > 0
    }
}

/// Decimal rendering of a cyclotomic number, e.g. `2.2360679775` or `-0.5000000000+0.8660254038i`.
pub fn approx(c: &CycNum) -> String {
    let (re, im) = c.to_complex();
    let clean = |x: f64| if x.abs() < 5e-11 { 0.0 } else { x };
    let (re, im) = (clean(re), clean(im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re:.10}"),
        (true, false) => format!("{im:.10}i"),
        _ => format!("{re:.10}{}{:.10}i", if im < 0.0 { '-' } else { '+' }, im.abs()),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

pub fn report_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for e in &report.entries {
        w.serialize(e).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf-8")
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(TABLE_HEADER).expect("csv header");
    for r in rows {
        w.serialize(r).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf-8")
}

pub fn report_text(report: &Report) -> String {
    let mut out = String::new();
    for e in &report.entries {
        let status = match e.status {
            Status::Ok => "",
            Status::Mismatch => "  MISMATCH",
            Status::Unsupported => "  unsupported",
        };
        let approx = if e.approx.is_empty() { String::new() } else { format!("  ~ {}", e.approx) };
        let rule = if e.rule.is_empty() { String::new() } else { format!("  [{}]", e.rule) };
        let exact = if e.exact.is_empty() { "-" } else { &e.exact };
        out.push_str(&format!("{}  {} = {exact}{approx}{rule}{status}\n", e.form, e.quantity));
    }
    for n in &report.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}

pub fn table_text(rows: &[TableRow]) -> String {
    let cells: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.form.clone(),
                r.order.to_string(),
                r.sigma.to_string(),
                r.g_exact.clone(),
                r.g_approx.clone(),
                r.gprime_exact.clone(),
                r.gprime_approx.clone(),
                r.rule.clone(),
            ]
        })
        .collect();
    let mut widths = TABLE_HEADER.map(|h| h.chars().count());
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |row: &[String]| -> String {
        let padded: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(&TABLE_HEADER.map(String::from));
    for row in &cells {
        out.push_str(&line(row));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use fqgauss::exactmath::{cyc, sqrt_int};

    #[test]
    fn decimal_rendering() {
        assert_eq!(approx(&sqrt_int(5)), "2.2360679775");
        assert_eq!(approx(&cyc(1, 4)), "1.0000000000i");
        assert_eq!(approx(&cyc(1, 3)), "-0.5000000000+0.8660254038i");
        assert_eq!(approx(&CycNum::zero()), "0.0000000000");
    }
}
