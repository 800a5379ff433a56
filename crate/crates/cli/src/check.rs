//! Verification sweeps over gauge-fixed quadrilaterals.

use anyhow::{bail, Context};
use recoupling::algebra::{closure_residuals, duality_map, fit_structure_constants, realize, StructureConstants};
use recoupling::families::{check_triangular, families_report};
use recoupling::limits::{
    default_bases, limit_scan_iia, limit_scan_iiib, threej_limit_of_6j, ConvergenceReport, GeneralizedSymbol,
    ScaledEntry,
};
use recoupling::quad::canonical_quadrilaterals;
use recoupling::sweep::{par_map, with_jobs};
use recoupling::{HalfInt, Quadrilateral, Representation};
use serde::Serialize;
use serde_json::json;

use crate::output::{line, shortest, Cell, Rendered, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Families,
    Algebra,
    Triangular,
    Limits,
}

pub struct SweepOptions {
    pub max_twice: i64,
    pub rep: Representation,
    pub tol: f64,
    pub jobs: Option<usize>,
}

/// A sweep result; `pass` decides the exit status.
pub struct Outcome {
    pub rendered: Rendered,
    pub pass: bool,
}

fn sweep<R: Send>(opts: &SweepOptions, f: impl Fn(&Quadrilateral) -> R + Sync + Send) -> (Vec<Quadrilateral>, Vec<R>) {
    let quads = canonical_quadrilaterals(opts.max_twice);
    let results = with_jobs(opts.jobs, || par_map(&quads, &f));
    (quads, results)
}

fn finish(suite: &str, opts: &SweepOptions, cases: Vec<serde_json::Value>, table: Table, passes: &[bool]) -> Outcome {
    let failures = passes.iter().filter(|p| !**p).count();
    let pass = failures == 0;
    let mut pretty = String::new();
    line(
        &mut pretty,
        format_args!(
            "check {suite}: {} cases with 2j <= {}, {failures} failing, {}",
            passes.len(),
            opts.max_twice,
            if pass { "PASS" } else { "FAIL" }
        ),
    );
    for (row, ok) in table.rows.iter().zip(passes) {
        if !ok {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Float(x) => shortest(*x),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            line(&mut pretty, format_args!("  failed: {}", cells.join(" ")));
        }
    }
    Outcome {
        rendered: Rendered {
            json: json!({
                "suite": suite,
                "max_2j": opts.max_twice,
                "representation": opts.rep,
                "tol": opts.tol,
                "cases": cases,
                "failures": failures,
                "pass": pass,
            }),
            table,
            pretty,
        },
        pass,
    }
}

fn sides(q: &Quadrilateral) -> String {
    q.sides().map(|s| s.to_string()).join(" ")
}

pub fn families(opts: &SweepOptions) -> anyhow::Result<Outcome> {
    let (quads, results) = sweep(opts, |q| families_report(q, opts.rep, opts.tol));
    let mut table = Table::new([
        "quadrilateral",
        "dim",
        "exact_orthogonality",
        "duality_ii",
        "duality_iii",
        "triangular",
        "recursion_residual",
        "pass",
    ]);
    let mut cases = Vec::new();
    let mut passes = Vec::new();
    for (q, r) in quads.iter().zip(results) {
        let r = r.with_context(|| format!("families of {q}"))?;
        table.push(vec![
            sides(q).into(),
            q.dim().into(),
            i64::from(r.exact_orthogonality).into(),
            r.duality_ii.orthogonality_deviation.max(r.duality_ii.completeness_deviation).into(),
            r.duality_iii.orthogonality_deviation.max(r.duality_iii.completeness_deviation).into(),
            r.triangular.deviation.into(),
            r.recursion_residual.into(),
            i64::from(r.pass).into(),
        ]);
        passes.push(r.pass);
        cases.push(serde_json::to_value(&r)?);
    }
    Ok(finish("families", opts, cases, table, &passes))
}

pub fn triangular(opts: &SweepOptions) -> anyhow::Result<Outcome> {
    let (quads, results) = sweep(opts, |q| check_triangular(q, opts.rep, opts.tol));
    let mut table = Table::new(["quadrilateral", "dim", "sign", "deviation", "pass"]);
    let mut cases = Vec::new();
    let mut passes = Vec::new();
    for (q, r) in quads.iter().zip(results) {
        let r = r.with_context(|| format!("triangular relation of {q}"))?;
        table.push(vec![sides(q).into(), q.dim().into(), i64::from(r.sign).into(), r.deviation.into(), i64::from(r.pass).into()]);
        passes.push(r.pass);
        cases.push(serde_json::to_value(&r)?);
    }
    Ok(finish("triangular", opts, cases, table, &passes))
}

/// Threshold on residuals relative to `‖K1‖·‖K2‖`.
pub const ALGEBRA_TOL: f64 = 1e-8;

#[derive(Serialize)]
pub struct AlgebraCase {
    pub quadrilateral: [i64; 4],
    pub dim: usize,
    pub constants: StructureConstants,
    pub relative_residual: f64,
    /// Constants of the dual triple against the swapped constants; `None`
    /// when either fit is rank deficient.
    pub duality_constant_deviation: Option<f64>,
    /// The dual relations evaluated at the swapped constants, relative.
    pub duality_relative_residual: f64,
    pub pass: bool,
}

pub fn algebra_case(q: &Quadrilateral) -> recoupling::Result<AlgebraCase> {
    let g = realize(q);
    let c = fit_structure_constants(&g)?;
    let dual = duality_map(&g);
    let cd = fit_structure_constants(&dual)?;
    let swapped = c.swapped();
    let deviation = (!c.rank_deficient && !cd.rank_deficient).then(|| {
        cd.as_array()
            .iter()
            .zip(&swapped)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs() / y.abs().max(1.0)))
    });
    let scale = if c.scale > 0.0 { c.scale } else { 1.0 };
    let dual_res = closure_residuals(&dual, &swapped);
    let duality_relative_residual = dual_res[0].max(dual_res[1]) / scale;
    let relative_residual = c.relative_residual();
    let pass = relative_residual < ALGEBRA_TOL
        && duality_relative_residual < ALGEBRA_TOL
        && deviation.is_none_or(|d| d < ALGEBRA_TOL);
    Ok(AlgebraCase {
        quadrilateral: q.twice(),
        dim: q.dim(),
        constants: c,
        relative_residual,
        duality_constant_deviation: deviation,
        duality_relative_residual,
        pass,
    })
}

pub fn algebra(opts: &SweepOptions) -> anyhow::Result<Outcome> {
    let (quads, results) = sweep(opts, algebra_case);
    let mut table = Table::new([
        "quadrilateral",
        "dim",
        "a1",
        "a2",
        "c1",
        "c2",
        "d",
        "g1",
        "g2",
        "relative_residual",
        "rank",
        "pass",
    ]);
    let mut cases = Vec::new();
    let mut passes = Vec::new();
    for (q, r) in quads.iter().zip(results) {
        let r = r.with_context(|| format!("structure constants of {q}"))?;
        let k = &r.constants;
        let mut row: Vec<Cell> = vec![sides(q).into(), q.dim().into()];
        row.extend(k.as_array().map(Cell::from));
        row.extend([r.relative_residual.into(), k.rank.into(), i64::from(r.pass).into()]);
        table.push(row);
        passes.push(r.pass);
        cases.push(serde_json::to_value(&r)?);
    }
    Ok(finish("algebra", opts, cases, table, &passes))
}

/// `2s+1/2`, `3s`, `-s+2`, `3/2`.
pub fn parse_scaled(token: &str) -> anyhow::Result<ScaledEntry> {
    let t = token.trim();
    let Some(pos) = t.find('s') else {
        return Ok(ScaledEntry::fixed(t.parse()?));
    };
    let slope = match &t[..pos] {
        "" | "+" => 1,
        "-" => -1,
        k => k.parse::<i64>().with_context(|| format!("bad slope in {token:?}"))?,
    };
    let rest = t[pos + 1..].trim();
    let offset = match rest.strip_prefix('+') {
        Some(r) => r.parse::<HalfInt>()?,
        None if rest.is_empty() => HalfInt::ZERO,
        None if rest.starts_with('-') => rest.parse::<HalfInt>()?,
        None => bail!("bad offset in {token:?}"),
    };
    Ok(ScaledEntry { slope, offset })
}

/// Limit scan selector with its base symbol.
#[derive(Clone, Copy, Debug)]
pub enum LimitBase {
    TwoA(GeneralizedSymbol),
    ThreeB(GeneralizedSymbol),
    SixJ(GeneralizedSymbol),
}

impl LimitBase {
    pub fn run(&self, scales: &[u32]) -> ConvergenceReport {
        match self {
            LimitBase::TwoA(b) => limit_scan_iia(b, scales),
            LimitBase::ThreeB(b) => limit_scan_iiib(b, scales),
            LimitBase::SixJ(b) => threej_limit_of_6j(b, scales),
        }
    }

    pub fn defaults() -> Vec<LimitBase> {
        let [a, b, c] = default_bases();
        vec![LimitBase::TwoA(a), LimitBase::ThreeB(b), LimitBase::SixJ(c)]
    }
}

/// `iia:j1,j2,J3,J4`, `iiib:j1,j2,J3,J4` or `sixj:a,b,c,d,e,f`; lower-row
/// entries may scale, as in `2s+1/2`.
pub fn parse_base(spec: &str) -> anyhow::Result<LimitBase> {
    let (kind, list) = spec.split_once(':').context("expected KIND:entries")?;
    let parts: Vec<&str> = list.split(',').collect();
    let fixed = |s: &str| -> anyhow::Result<HalfInt> { Ok(s.trim().parse()?) };
    match (kind.to_ascii_lowercase().as_str(), parts.len()) {
        ("iia", 4) | ("iiib", 4) => {
            let g = GeneralizedSymbol::curly(fixed(parts[0])?, fixed(parts[1])?, parse_scaled(parts[2])?, parse_scaled(parts[3])?);
            Ok(if kind.eq_ignore_ascii_case("iia") { LimitBase::TwoA(g) } else { LimitBase::ThreeB(g) })
        }
        ("sixj", 6) => {
            let upper = [fixed(parts[0])?, fixed(parts[1])?, fixed(parts[2])?];
            let lower = [parse_scaled(parts[3])?, parse_scaled(parts[4])?, parse_scaled(parts[5])?];
            Ok(LimitBase::SixJ(GeneralizedSymbol::sixj(upper, lower)))
        }
        _ => bail!("unknown limit base {spec:?}; expected iia:4 entries, iiib:4 entries or sixj:6 entries"),
    }
}

/// A scan with fewer than two evaluated scales carries no convergence
/// statement; it is reported as skipped and does not fail the check.
pub fn scan_status(r: &ConvergenceReport) -> &'static str {
    let evaluated = r.points.iter().filter(|p| p.error.is_some()).count();
    if evaluated < 2 {
        "skipped"
    } else if r.pass {
        "pass"
    } else {
        "fail"
    }
}

pub fn limits(bases: &[LimitBase], scales: &[u32], jobs: Option<usize>) -> anyhow::Result<Outcome> {
    let reports: Vec<ConvergenceReport> = with_jobs(jobs, || par_map(bases, |b| b.run(scales)));
    let mut table = Table::new(["kind", "base", "scale", "error", "target_residual", "note"]);
    let mut pretty = String::new();
    let mut cases = Vec::new();
    let mut pass = true;
    for r in &reports {
        let status = scan_status(r);
        pass &= status != "fail";
        line(
            &mut pretty,
            format_args!(
                "{} {}: {status}, final ratio {}, decay exponent {}, target residual {}",
                r.kind,
                r.base,
                r.final_ratio.map_or("-".into(), shortest),
                r.decay_exponent.map_or("-".into(), shortest),
                shortest(r.max_target_residual)
            ),
        );
        for p in &r.points {
            table.push(vec![
                r.kind.clone().into(),
                r.base.clone().into(),
                i64::from(p.scale).into(),
                p.error.map_or(Cell::Text(String::new()), Cell::Float),
                p.target_residual.map_or(Cell::Text(String::new()), Cell::Float),
                p.note.clone().unwrap_or_default().into(),
            ]);
            let err = p.error.map_or("skipped".into(), shortest);
            match &p.note {
                Some(n) => line(&mut pretty, format_args!("  s = {:>3}  error {err}  ({n})", p.scale)),
                None => line(&mut pretty, format_args!("  s = {:>3}  error {err}", p.scale)),
            }
        }
        let mut v = serde_json::to_value(r)?;
        v["status"] = json!(status);
        cases.push(v);
    }
    line(&mut pretty, format_args!("check limits: {}", if pass { "PASS" } else { "FAIL" }));
    Ok(Outcome {
        rendered: Rendered {
            json: json!({"suite": "limits", "scales": scales, "cases": cases, "pass": pass}),
            table,
            pretty,
        },
        pass,
    })
}
