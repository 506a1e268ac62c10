use std::io::Write;

use pgal_core::{CaseAudit, ChainIdentityReport, EigenFit, FrameData, NullKClass, Tolerances};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Deltas {
    #[serde(rename = "dK")]
    pub dk: Option<f64>,
    #[serde(rename = "dH")]
    pub dh: Option<f64>,
    #[serde(rename = "dW")]
    pub dw: Option<f64>,
}

/// One grid point. Missing values are `null` in JSON and empty in CSV.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub i: usize,
    pub j: usize,
    pub v1: f64,
    pub v2: f64,
    pub valid: bool,
    pub flag: Option<String>,
    #[serde(rename = "W")]
    pub w: Option<f64>,
    pub eps: Option<f64>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    #[serde(rename = "N")]
    pub n: Option<f64>,
    #[serde(rename = "detII")]
    pub det: Option<f64>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    #[serde(rename = "H")]
    pub h: Option<f64>,
    pub lap1: Option<f64>,
    pub lap2: Option<f64>,
    pub lap3: Option<f64>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Deltas>,
}

const ROW_COLUMNS: [&str; 17] = [
    "i", "j", "v1", "v2", "valid", "flag", "W", "eps", "L", "M", "N", "detII", "K", "H", "lap1",
    "lap2", "lap3",
];
const DELTA_COLUMNS: [&str; 3] = ["dK", "dH", "dW"];

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl Row {
    pub fn blank(i: usize, j: usize, v1: f64, v2: f64) -> Self {
        Row {
            i,
            j,
            v1,
            v2,
            valid: false,
            flag: None,
            w: None,
            eps: None,
            l: None,
            m: None,
            n: None,
            det: None,
            k: None,
            h: None,
            lap1: None,
            lap2: None,
            lap3: None,
            deltas: None,
        }
    }

    pub fn set_frame(&mut self, f: &FrameData) {
        self.w = finite(f.w);
        self.eps = finite(f.eps);
        self.l = finite(f.l);
        self.m = finite(f.m);
        self.n = finite(f.n);
        self.det = finite(f.det);
        self.k = finite(f.k);
        self.h = finite(f.h);
    }

    pub fn set_lap(&mut self, lap: [f64; 3]) {
        self.lap1 = finite(lap[0]);
        self.lap2 = finite(lap[1]);
        self.lap3 = finite(lap[2]);
    }

    fn cells(&self, with_deltas: bool) -> Vec<String> {
        let mut out = vec![
            self.i.to_string(),
            self.j.to_string(),
            num(self.v1),
            num(self.v2),
            self.valid.to_string(),
            self.flag.clone().unwrap_or_default(),
        ];
        let opts = [
            self.w, self.eps, self.l, self.m, self.n, self.det, self.k, self.h, self.lap1,
            self.lap2, self.lap3,
        ];
        out.extend(opts.iter().map(|x| opt(*x)));
        if with_deltas {
            let d = self.deltas.unwrap_or_default();
            out.extend([d.dk, d.dh, d.dw].iter().map(|x| opt(*x)));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceSummary {
    pub motion: [f64; 6],
    pub points_compared: usize,
    pub max_abs: [f64; 3],
    pub max_rel: [f64; 3],
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub valid_points: usize,
    pub flagged_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub null_k_class: Option<NullKClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigen_fit: Option<EigenFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain_identity: Option<ChainIdentityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audits: Option<Vec<CaseAudit>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confirmed: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariance: Option<InvarianceSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub meta: Meta,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

/// Shortest round-trip text, identical to what the JSON writer emits.
fn num(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_default()
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl Report {
    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)
    }

    /// Point rows, or the verdict table for audit reports.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        if let Some(audits) = &self.summary.audits {
            w.write_record(AUDIT_COLUMNS)?;
            for a in audits {
                w.write_record(audit_cells(a))?;
            }
        } else {
            let with_deltas = self.rows.iter().any(|r| r.deltas.is_some());
            let mut header: Vec<&str> = ROW_COLUMNS.to_vec();
            if with_deltas {
                header.extend(DELTA_COLUMNS);
            }
            w.write_record(&header)?;
            for r in &self.rows {
                w.write_record(r.cells(with_deltas))?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

const AUDIT_COLUMNS: [&str; 14] = [
    "case_id",
    "alias_of",
    "type",
    "expected",
    "confirmed",
    "method",
    "max_abs_d",
    "min_w",
    "min_rel_radicand",
    "residual",
    "points",
    "sweep_admissible",
    "sweep_min_residual",
    "candidate",
];

fn audit_cells(a: &CaseAudit) -> Vec<String> {
    let e = &a.evidence;
    let expected = serde_json::to_value(a.expected)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    vec![
        a.case_id.clone(),
        a.alias_of.clone().unwrap_or_default(),
        a.stype.name().to_owned(),
        expected,
        a.confirmed.to_string(),
        e.method.clone(),
        opt(e.max_abs_d),
        opt(e.min_w),
        opt(e.min_rel_radicand),
        opt(e.residual),
        e.points.to_string(),
        e.sweep
            .as_ref()
            .map(|s| s.admissible.to_string())
            .unwrap_or_default(),
        opt(e.sweep.as_ref().map(|s| s.min_residual).and_then(finite)),
        a.candidate
            .as_ref()
            .map(|c| c.to_string())
            .unwrap_or_default(),
    ]
}
