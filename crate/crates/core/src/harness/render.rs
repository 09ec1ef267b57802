use std::fmt::Write as _;

use serde::Serialize;

use super::run::RunReport;
use super::suite::SuiteReport;
use super::sweep::CostTable;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

pub trait Report: Serialize {
    fn table(&self) -> String;
    fn csv(&self) -> Result<String>;
}

pub fn render<R: Report>(report: &R, format: Format) -> Result<String> {
    match format {
        Format::Table => Ok(report.table()),
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => report.csv(),
    }
}

fn write_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.into()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, e)))
}

#[derive(Serialize)]
struct RunRow<'a> {
    theta: usize,
    element: &'a str,
    count: u64,
    expected: usize,
    download: usize,
    upload: usize,
    randomness_sharing: usize,
    total: usize,
    theorem_bound: usize,
    digest: &'a str,
}

impl Report for RunReport {
    fn table(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} M={} N={} T={} Y={:?} E={} p={} seed={}",
            p.variant.name(),
            p.m,
            p.n,
            p.t,
            p.y,
            p.e,
            p.p,
            self.seed
        );
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        let _ = writeln!(s, "{:>6}  {:<12} {:>5} {:>8}  digest", "theta", "element", "count", "expected");
        for r in &self.runs {
            let _ = writeln!(
                s,
                "{:>6}  {:<12} {:>5} {:>8}  {}",
                r.theta,
                r.element.as_deref().unwrap_or("-"),
                r.count,
                r.expected,
                &r.transcript_digest[..16]
            );
        }
        let c = &self.cost;
        let _ = writeln!(
            s,
            "download {} (bound {}), upload {}, randomness sharing {}, total {}",
            c.download_symbols, c.theorem_bound, c.upload_symbols, c.randomness_sharing_symbols, c.total
        );
        if let Some(r) = c.remark_total {
            let _ = writeln!(s, "published total formula {r}");
        }
        if c.storage_symbols > 0 || c.excluded_sharing_symbols > 0 || c.idle_databases > 0 {
            let _ = writeln!(
                s,
                "not in total: storage {}, repeated noise {}; idle databases {}",
                c.storage_symbols, c.excluded_sharing_symbols, c.idle_databases
            );
        }
        s
    }

    fn csv(&self) -> Result<String> {
        let c = &self.cost;
        write_csv(self.runs.iter().map(|r| RunRow {
            theta: r.theta,
            element: r.element.as_deref().unwrap_or(""),
            count: r.count,
            expected: r.expected,
            download: c.download_symbols,
            upload: c.upload_symbols,
            randomness_sharing: c.randomness_sharing_symbols,
            total: c.total,
            theorem_bound: c.theorem_bound,
            digest: &r.transcript_digest,
        }))
    }
}

impl Report for CostTable {
    fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} T={} Y={:?} E={}", self.variant.name(), self.t, self.y, self.e);
        let _ = writeln!(
            s,
            "{:>3} {:>3} {:>5} {:>9} {:>7} {:>8} {:>7} {:>6} {:>5}  M^{}({}-1)",
            "M", "N", "p", "download", "upload", "sharing", "total", "bound", "idle", self.k, self.k
        );
        for r in &self.rows {
            let reference = r.threshold_reference.map_or("overflow".to_string(), |v| v.to_string());
            let _ = writeln!(
                s,
                "{:>3} {:>3} {:>5} {:>9} {:>7} {:>8} {:>7} {:>6} {:>5}  {}",
                r.m, r.n, r.p, r.download, r.upload, r.randomness_sharing, r.total, r.theorem_bound, r.idle_databases, reference
            );
        }
        let _ = writeln!(
            s,
            "download = {} * M, residual {}{}",
            self.fit.slope,
            self.fit.residual,
            if self.fit.exact { " (exact)" } else { "" }
        );
        s
    }

    fn csv(&self) -> Result<String> {
        write_csv(self.rows.iter().map(|r| {
            (
                r.m,
                r.n,
                r.p,
                r.download,
                r.upload,
                r.randomness_sharing,
                r.total,
                r.theorem_bound,
                r.idle_databases,
                r.threshold_reference.map(|v| v.to_string()),
            )
        }))
        .map(|body| {
            "m,n,p,download,upload,randomness_sharing,total,theorem_bound,idle_databases,threshold_reference\n".to_string()
                + &body
        })
    }
}

#[derive(Serialize)]
struct AuditRow<'a> {
    lemma: &'a str,
    name: &'a str,
    verdict: &'a str,
    expected: &'a str,
    enumerated_assignments: u64,
    error: &'a str,
}

fn verdict_name(v: crate::audit::Verdict) -> &'static str {
    match v {
        crate::audit::Verdict::Pass => "pass",
        crate::audit::Verdict::Fail => "fail",
    }
}

impl Report for SuiteReport {
    fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<7} {:<52} {:<7} {:<8} {:>12}", "lemma", "audit", "verdict", "expected", "assignments");
        for r in &self.reports {
            let _ = writeln!(
                s,
                "{:<7} {:<52} {:<7} {:<8} {:>12}{}",
                r.lemma,
                r.name,
                verdict_name(r.verdict),
                verdict_name(r.expected),
                r.enumerated_assignments,
                if r.as_expected() { "" } else { "  UNEXPECTED" }
            );
        }
        for e in &self.errors {
            let _ = writeln!(s, "{:<7} {:<52} error: {}", e.lemma, e.name, e.error);
        }
        let _ = writeln!(
            s,
            "{} audits, {} unexpected, {} could not run",
            self.reports.len() + self.errors.len(),
            self.unexpected,
            self.errors.len()
        );
        s
    }

    fn csv(&self) -> Result<String> {
        let ok = self.reports.iter().map(|r| AuditRow {
            lemma: &r.lemma,
            name: &r.name,
            verdict: verdict_name(r.verdict),
            expected: verdict_name(r.expected),
            enumerated_assignments: r.enumerated_assignments,
            error: "",
        });
        let failed = self.errors.iter().map(|e| AuditRow {
            lemma: &e.lemma,
            name: &e.name,
            verdict: "",
            expected: "",
            enumerated_assignments: 0,
            error: &e.error,
        });
        write_csv(ok.chain(failed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{cost_table, run_protocol, RunConfig};
    use crate::model::Variant;

    #[test]
    fn all_formats_render() {
        let mut cfg = RunConfig::new(Variant::Pma1, 2, 2);
        cfg.t = 1;
        let rep = run_protocol(&cfg).unwrap();
        for f in [Format::Table, Format::Json, Format::Csv] {
            assert!(!render(&rep, f).unwrap().is_empty());
        }
        let csv = render(&rep, Format::Csv).unwrap();
        assert!(csv.starts_with("theta,element,count"));
        assert_eq!(csv.lines().count(), 3);

        let tab = cost_table(&cfg, 2..=3, 2).unwrap();
        let csv = render(&tab, Format::Csv).unwrap();
        assert_eq!(csv.lines().nth(1).unwrap().split(',').count(), 10);
        assert!(render(&tab, Format::Table).unwrap().contains("(exact)"));
    }
}
