use crate::config::RunConfig;
use mgk_core::cayley::AgreementRadius;
use mgk_core::pipeline::ConstructionReport;
use mgk_core::spectral::ExpanderRow;
use mgk_core::suites::{CheckRecord, CheckStatus};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub skipped: usize,
    pub exhausted: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AgreementRow {
    pub a: String,
    pub b: String,
    pub rmax: u32,
    pub radius: Option<AgreementRadius>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub version: &'static str,
    pub config: RunConfig,
    pub summary: Summary,
    pub records: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<Vec<AgreementRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral: Option<Vec<ExpanderRow>>,
}

impl VerificationReport {
    pub fn new(config: RunConfig, records: Vec<CheckRecord>) -> Self {
        let mut summary = Summary::default();
        for r in &records {
            match r.status {
                CheckStatus::Pass => summary.pass += 1,
                CheckStatus::Fail => summary.fail += 1,
                CheckStatus::Inconclusive => summary.inconclusive += 1,
                CheckStatus::Skipped => summary.skipped += 1,
            }
            summary.exhausted += usize::from(r.exhausted);
        }
        VerificationReport {
            version: env!("CARGO_PKG_VERSION"),
            config,
            summary,
            records,
            construction: None,
            agreement: None,
            spectral: None,
        }
    }

    /// 0 all pass, 1 any failure, 3 a resource cap stopped a check.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else if self.summary.exhausted > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# Verification report\n");
        let _ = writeln!(
            s,
            "version {}, command `{:?}`\n",
            self.version, self.config.command
        );
        let m = &self.summary;
        let _ = writeln!(
            s,
            "pass {}, fail {}, inconclusive {}, skipped {}\n",
            m.pass, m.fail, m.inconclusive, m.skipped
        );
        let _ = writeln!(s, "| check | status | anchor |");
        let _ = writeln!(s, "|-------|--------|--------|");
        for r in &self.records {
            let status = serde_json::to_value(r.status)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            let _ = writeln!(s, "| {} | {} | {} |", r.name, status, r.anchor);
        }
        if let Some(c) = &self.construction {
            let _ = writeln!(s);
            s.push_str(&c.to_markdown());
        }
        if let Some(rows) = &self.agreement {
            let _ = writeln!(s, "\n## Agreement radii\n");
            let _ = writeln!(s, "| a | b | radius |");
            let _ = writeln!(s, "|---|---|--------|");
            for r in rows {
                let radius = r
                    .radius
                    .map_or_else(|| r.error.clone().unwrap_or_default(), |x| x.to_string());
                let _ = writeln!(s, "| {} | {} | {} |", r.a, r.b, radius);
            }
        }
        if let Some(rows) = &self.spectral {
            let _ = writeln!(s, "\n## Spectral gaps\n");
            let _ = writeln!(
                s,
                "| group | vertices | lambda2 | gap | epsilon | residual |"
            );
            let _ = writeln!(
                s,
                "|-------|----------|---------|-----|---------|----------|"
            );
            let f = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.6}"));
            for r in rows {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} |",
                    r.label,
                    r.n_vertices.map_or("-".into(), |n| n.to_string()),
                    f(r.lambda2),
                    f(r.gap),
                    f(r.epsilon_lower),
                    r.residual.map_or("-".into(), |v| format!("{v:.1e}"))
                );
            }
        }
        s
    }
}
