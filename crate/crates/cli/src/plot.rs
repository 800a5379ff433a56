//! Plot-ready tables.

use recoupling::volume::TOOL_VERSION;
use recoupling::{alpha, HalfInt, Quadrilateral, VolumeSpectrum};
use serde_json::json;

use crate::check::LimitBase;
use crate::output::{fixed17, line, shortest, Cell, Rendered, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotKind {
    Eigenfunctions,
    AlphaProfile,
    Convergence,
}

/// Columns `(ℓ, Ψ_ℓ^(0), Ψ_ℓ^(1), …)`.
pub fn eigenfunctions(s: &VolumeSpectrum) -> Rendered {
    let n = s.dim();
    let mut header = vec!["ell".to_string()];
    header.extend((0..n).map(|k| format!("psi_k{k}")));
    let mut table = Table::new(header);
    let lams: Vec<String> = s.eigenvalues.iter().map(|x| fixed17(*x)).collect();
    table.comment = Some(format!(
        "recoupling {TOOL_VERSION} eigenfunctions quadrilateral=({}) rep={} lambda=[{}]",
        s.quad.sides().map(|x| x.to_string()).join(" "),
        s.rep,
        lams.join(" ")
    ));
    let mut pretty = String::new();
    line(&mut pretty, format_args!("eigenfunctions of {} ({})", s.quad, s.rep));
    let lattice = s.quad.ell_lattice();
    for (p, l) in lattice.iter().enumerate() {
        let mut row: Vec<Cell> = vec![l.to_string().into()];
        row.extend(s.psi[p].iter().map(|x| Cell::Float(*x)));
        table.push(row);
        let cols: Vec<String> = s.psi[p].iter().map(|x| shortest(*x)).collect();
        line(&mut pretty, format_args!("  l = {l:>5}  {}", cols.join("  ")));
    }
    Rendered {
        json: json!({
            "quadrilateral_twice": s.quad.twice(),
            "representation": s.rep,
            "ell": lattice.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "eigenvalues": s.eigenvalues,
            "psi": s.psi,
        }),
        table,
        pretty,
    }
}

/// Columns `(ℓ, α_ℓ)` on the interior lattice, where every `α_ℓ > 0`.
pub fn alpha_profile(q: &Quadrilateral) -> anyhow::Result<Rendered> {
    let (lo, hi) = q.ell_range();
    let mut table = Table::new(["ell", "alpha"]);
    table.comment = Some(format!(
        "recoupling {TOOL_VERSION} alpha-profile quadrilateral=({})",
        q.sides().map(|x| x.to_string()).join(" ")
    ));
    let mut pretty = String::new();
    line(&mut pretty, format_args!("alpha profile of {q}"));
    let mut points = Vec::new();
    for l in (lo + HalfInt::ONE).range_to(hi) {
        let a = alpha(l, q)?.to_f64();
        table.push(vec![l.to_string().into(), a.into()]);
        line(&mut pretty, format_args!("  l = {l:>5}  {}", shortest(a)));
        points.push(json!({"ell": l.to_string(), "alpha": a}));
    }
    Ok(Rendered {
        json: json!({"quadrilateral_twice": q.twice(), "points": points}),
        table,
        pretty,
    })
}

/// Columns `(kind, base, scale, error)`, one row per evaluated scale.
pub fn convergence(bases: &[LimitBase], scales: &[u32]) -> Rendered {
    let mut table = Table::new(["kind", "base", "scale", "error"]);
    table.comment = Some(format!("recoupling {TOOL_VERSION} convergence scales={scales:?}"));
    let mut pretty = String::new();
    let mut reports = Vec::new();
    for b in bases {
        let r = b.run(scales);
        line(&mut pretty, format_args!("{} {}", r.kind, r.base));
        for p in &r.points {
            if let Some(e) = p.error {
                table.push(vec![r.kind.clone().into(), r.base.clone().into(), i64::from(p.scale).into(), e.into()]);
                line(&mut pretty, format_args!("  s = {:>3}  {}", p.scale, shortest(e)));
            }
        }
        reports.push(json!({
            "kind": r.kind,
            "base": r.base,
            "points": r.points.iter().filter_map(|p| p.error.map(|e| json!({"scale": p.scale, "error": e}))).collect::<Vec<_>>(),
        }));
    }
    Rendered {
        json: json!({"scales": scales, "scans": reports}),
        table,
        pretty,
    }
}
