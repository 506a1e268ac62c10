use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use pgal_core::homothetical::audit::AuditOptions;
use pgal_core::laplace2::sample_grid;
use pgal_core::{
    audit_all, audit_case, chain_identity_residual, classify_null_k, eigen_fit, parse_factor,
    GeomError, Grid, HomotheticalSurface, Motion, ParamSet, SurfaceType, Tolerances,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cli::{
    AuditArgs, Command, Common, InvarianceArgs, LaplacianArgs, OutFormat, SurfaceArgs,
};
use crate::report::{Deltas, InvarianceSummary, Meta, Report, Row, Summary};

/// |K| at or below this is flagged `null-K` in curvature rows.
pub const NULL_K_FLAG: f64 = 1e-10;

/// Hyperbolic angles beyond this get a conditioning note.
const LARGE_THETA: f64 = 3.0;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Exit status of a completed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    NotConfirmed,
}

fn factor(flag: &str, text: &str) -> Result<pgal_core::FactorFn, CliError> {
    parse_factor(text).map_err(|e| match &e {
        GeomError::Parse(p) => CliError::Usage(format!(
            "--{flag}: {e}\n  {text}\n  {}^",
            " ".repeat(p.offset.saturating_sub(1))
        )),
        _ => CliError::Usage(format!("--{flag}: {e}")),
    })
}

fn surface(args: &SurfaceArgs, tol: Tolerances) -> Result<HomotheticalSurface, CliError> {
    let stype = SurfaceType::parse(&args.stype).ok_or_else(|| {
        usage(format!(
            "--type: expected I, II or III, got `{}`",
            args.stype
        ))
    })?;
    let a = factor("phi1", &args.phi1)?;
    let b = factor("phi2", &args.phi2)?;
    Ok(HomotheticalSurface::new(stype, a, b).with_tolerances(tol))
}

fn meta(command: &str, common: &Common) -> Meta {
    Meta {
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_owned(),
        seed: common.seed,
        tolerances: common.tol.resolve(),
    }
}

fn finish(report: &Report, common: &Common) -> Result<(), CliError> {
    let out: Box<dyn Write> = match &common.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(out);
    match common.out {
        OutFormat::Json => report.write_json(&mut out)?,
        OutFormat::Csv => report.write_csv(&mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn count(rows: &[Row], summary: &mut Summary) {
    summary.valid_points = rows.iter().filter(|r| r.valid).count();
    summary.flagged_points = rows.iter().filter(|r| r.flag.is_some()).count();
}

pub fn run(command: &Command, argv: &str) -> Result<Outcome, CliError> {
    match command {
        Command::Curvature(a) => curvature(a, argv),
        Command::Laplacian(a) => laplacian(a, argv),
        Command::Audit(a) => audit(a, argv),
        Command::Invariance(a) => invariance(a, argv),
    }
}

pub fn curvature_report(args: &SurfaceArgs, argv: &str) -> Result<Report, CliError> {
    let tol = args.common.tol.resolve();
    let h = surface(args, tol)?;
    let patch = h.patch();
    let grid = args.grid.0;
    let rows: Vec<Row> = grid
        .points()
        .map(|(i, j, v1, v2)| {
            let mut row = Row::blank(i, j, v1, v2);
            match patch.frame(v1, v2) {
                Ok(f) => {
                    row.valid = true;
                    row.set_frame(&f);
                    if f.k.abs() <= NULL_K_FLAG {
                        row.flag = Some("null-K".into());
                    }
                }
                Err(e) => row.flag = Some(e.kind().into()),
            }
            row
        })
        .collect();
    let mut summary = Summary::default();
    count(&rows, &mut summary);
    match classify_null_k(&h, &grid) {
        Ok(c) => summary.null_k_class = Some(c),
        Err(e) => summary
            .notes
            .push(format!("null-K classification unavailable: {e}")),
    }
    Ok(Report {
        meta: meta(argv, &args.common),
        rows,
        summary,
    })
}

fn curvature(args: &SurfaceArgs, argv: &str) -> Result<Outcome, CliError> {
    let report = curvature_report(args, argv)?;
    finish(&report, &args.common)?;
    Ok(Outcome::Ok)
}

pub fn laplacian_report(args: &LaplacianArgs, argv: &str) -> Result<Report, CliError> {
    let sa = &args.surface;
    let tol = sa.common.tol.resolve();
    let h = surface(sa, tol)?;
    let patch = h.patch();
    let grid: Grid = sa.grid.0;
    let rows: Vec<Row> = grid
        .point_vec()
        .into_iter()
        .zip(sample_grid(&patch, &grid))
        .map(|((i, j, v1, v2), sample)| {
            let mut row = Row::blank(i, j, v1, v2);
            match sample {
                Ok(s) => {
                    row.valid = true;
                    row.set_frame(&s.frame);
                    row.set_lap(s.lap);
                }
                Err(e) => {
                    row.flag = Some(e.kind().into());
                    if let Ok(f) = patch.frame(v1, v2) {
                        row.set_frame(&f);
                    }
                }
            }
            row
        })
        .collect();
    let mut summary = Summary::default();
    count(&rows, &mut summary);
    if summary.valid_points == 0 {
        let all_degenerate = rows
            .iter()
            .all(|r| r.flag.as_deref() == Some("DegenerateSecondForm"));
        summary.notes.push(if all_degenerate {
            "Δ^II undefined: the second fundamental form is degenerate at every grid point".into()
        } else {
            "Δ^II undefined at every grid point".into()
        });
    } else {
        match chain_identity_residual(&h, &grid) {
            Ok(c) => summary.chain_identity = Some(c),
            Err(e) => summary
                .notes
                .push(format!("chain identity unavailable: {e}")),
        }
        if args.fit_lambda {
            match eigen_fit(&patch, &grid) {
                Ok(f) => summary.eigen_fit = Some(f),
                Err(e) => summary.notes.push(format!("eigen fit unavailable: {e}")),
            }
        }
    }
    Ok(Report {
        meta: meta(argv, &sa.common),
        rows,
        summary,
    })
}

fn laplacian(args: &LaplacianArgs, argv: &str) -> Result<Outcome, CliError> {
    let report = laplacian_report(args, argv)?;
    finish(&report, &args.surface.common)?;
    Ok(Outcome::Ok)
}

pub fn audit_report(args: &AuditArgs, argv: &str) -> Result<Report, CliError> {
    let params = match &args.params {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("--params {}: {e}", path.display())))?;
            ParamSet::parse(&text)
                .map_err(|e| usage(format!("--params {}: {e}", path.display())))?
        }
        None => ParamSet::new(),
    };
    let opts = AuditOptions {
        grid: args.grid.map(|g| g.0),
        seed: args.common.seed,
        tol: args.common.tol.resolve(),
    };
    let audits = if args.case().eq_ignore_ascii_case("all") {
        audit_all(&params, &opts)
    } else {
        audit_case(args.case(), &params, &opts).map(|a| vec![a])
    }
    .map_err(usage)?;
    let confirmed = audits.iter().filter(|a| a.confirmed).count();
    let summary = Summary {
        confirmed: Some(format!("{confirmed}/{}", audits.len())),
        audits: Some(audits),
        ..Summary::default()
    };
    Ok(Report {
        meta: meta(argv, &args.common),
        rows: Vec::new(),
        summary,
    })
}

fn audit(args: &AuditArgs, argv: &str) -> Result<Outcome, CliError> {
    let report = audit_report(args, argv)?;
    finish(&report, &args.common)?;
    let all = report
        .summary
        .audits
        .as_ref()
        .is_some_and(|a| a.iter().all(|c| c.confirmed));
    Ok(if all {
        Outcome::Ok
    } else {
        Outcome::NotConfirmed
    })
}

fn parse_motion(text: &str) -> Result<Motion, CliError> {
    let vals: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| usage(format!("--motion: {e}")))?;
    let [a, b, c, d, e, theta] = vals[..] else {
        return Err(usage(format!(
            "--motion: expected 6 values a,b,c,d,e,theta, got {}",
            vals.len()
        )));
    };
    let m = Motion::new(a, b, c, d, e, theta);
    if !m.is_finite() {
        return Err(usage("--motion: values must be finite"));
    }
    Ok(m)
}

/// Motion drawn from `seed`: shifts and shears in [-2, 2], angle in [-1, 1].
pub fn random_motion(seed: u64) -> Motion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = || rng.gen_range(-2.0..=2.0);
    let (a, b, c, d, e) = (s(), s(), s(), s(), s());
    Motion::new(a, b, c, d, e, rng.gen_range(-1.0..=1.0))
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn invariance_report(args: &InvarianceArgs, argv: &str) -> Result<Report, CliError> {
    let sa = &args.surface;
    let tol = sa.common.tol.resolve();
    let h = surface(sa, tol)?;
    let motion = match &args.motion {
        Some(text) => parse_motion(text)?,
        None => random_motion(sa.common.seed),
    };
    let patch = h.patch();
    let moved = patch.transformed(&motion);
    let mut max_abs = [0.0f64; 3];
    let mut max_rel = [0.0f64; 3];
    let mut compared = 0;
    let rows: Vec<Row> = sa
        .grid
        .0
        .points()
        .map(|(i, j, v1, v2)| {
            let mut row = Row::blank(i, j, v1, v2);
            match (patch.frame(v1, v2), moved.frame(v1, v2)) {
                (Ok(f), Ok(g)) => {
                    row.valid = true;
                    row.set_frame(&f);
                    let pairs = [(f.k, g.k), (f.h, g.h), (f.w, g.w)];
                    for (k, (x, y)) in pairs.iter().enumerate() {
                        max_abs[k] = max_abs[k].max((x - y).abs());
                        max_rel[k] = max_rel[k].max(rel(*x, *y));
                    }
                    compared += 1;
                    row.deltas = Some(Deltas {
                        dk: Some((f.k - g.k).abs()),
                        dh: Some((f.h - g.h).abs()),
                        dw: Some((f.w - g.w).abs()),
                    });
                }
                (Err(e), _) | (_, Err(e)) => {
                    row.flag = Some(e.kind().into());
                    row.deltas = Some(Deltas::default());
                }
            }
            row
        })
        .collect();
    let mut summary = Summary::default();
    count(&rows, &mut summary);
    if motion.theta.abs() > LARGE_THETA {
        summary.notes.push(format!(
            "large hyperbolic angle: cosh θ = {:.3e} amplifies rounding in the moved patch; relative deltas up to 1e-8 are expected",
            motion.theta.cosh()
        ));
    }
    summary.invariance = Some(InvarianceSummary {
        motion: [
            motion.a,
            motion.b,
            motion.c,
            motion.d,
            motion.e,
            motion.theta,
        ],
        points_compared: compared,
        max_abs,
        max_rel,
    });
    Ok(Report {
        meta: meta(argv, &sa.common),
        rows,
        summary,
    })
}

fn invariance(args: &InvarianceArgs, argv: &str) -> Result<Outcome, CliError> {
    let report = invariance_report(args, argv)?;
    finish(&report, &args.surface.common)?;
    Ok(Outcome::Ok)
}
