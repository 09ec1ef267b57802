use serde::{Deserialize, Serialize};

use super::SCHEMA_VERSION;
use crate::audit::{default_suite, run_case, AuditCase, AuditReport};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditError {
    pub lemma: String,
    pub name: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub reports: Vec<AuditReport>,
    pub errors: Vec<AuditError>,
    pub unexpected: usize,
}

impl SuiteReport {
    /// 3 on any unexpected verdict, 2 if an audit could not run, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.unexpected > 0 {
            3
        } else if !self.errors.is_empty() {
            2
        } else {
            0
        }
    }
}

/// Cases of the default battery picked by `selectors` (`all` or `lemmaK`).
pub fn select_cases(selectors: &[String]) -> Result<Vec<AuditCase>> {
    let all = default_suite();
    for s in selectors {
        if s != "all" && !all.iter().any(|c| &c.lemma == s) {
            return Err(Error::Param(format!("unknown audit suite {s:?}; use all or lemma1..lemma7")));
        }
    }
    Ok(all
        .into_iter()
        .filter(|c| selectors.iter().any(|s| s == "all" || *s == c.lemma))
        .collect())
}

/// Runs every case; an audit that cannot run is recorded and the rest go on.
pub fn run_audit_suite(cases: &[AuditCase], cap: u64) -> SuiteReport {
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for case in cases {
        match run_case(case, cap) {
            Ok(r) => reports.push(r),
            Err(e) => {
                log::warn!("{} {}: {e}", case.lemma, case.name);
                errors.push(AuditError {
                    lemma: case.lemma.clone(),
                    name: case.name.clone(),
                    error: e.to_string(),
                })
            }
        }
    }
    let unexpected = reports.iter().filter(|r| !r.as_expected()).count();
    SuiteReport {
        schema_version: SCHEMA_VERSION,
        reports,
        errors,
        unexpected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::DEFAULT_CAP;

    #[test]
    fn selection() {
        assert!(select_cases(&[]).unwrap().is_empty());
        let l5 = select_cases(&["lemma5".into()]).unwrap();
        assert!(!l5.is_empty() && l5.iter().all(|c| c.lemma == "lemma5"));
        assert_eq!(select_cases(&["all".into()]).unwrap().len(), default_suite().len());
        assert!(select_cases(&["lemma9".into()]).is_err());
    }

    #[test]
    fn empty_suite_exits_cleanly() {
        let r = run_audit_suite(&[], DEFAULT_CAP);
        assert!(r.reports.is_empty());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn infeasible_audits_are_reported() {
        let cases = select_cases(&["lemma5".into()]).unwrap();
        let r = run_audit_suite(&cases, 10);
        // the tampered case has no storage noise left to enumerate
        assert_eq!(r.errors.len(), cases.len() - 1);
        assert_eq!(r.exit_code(), 2);
        let r = run_audit_suite(&cases, DEFAULT_CAP);
        assert_eq!((r.unexpected, r.exit_code()), (0, 0));
    }
}
