//! Single-shot commands: symbols, couplings, spectra, overlaps, Regge images.

use num_traits::{One, Signed};
use recoupling::families::{family_table, Family, Lattice, TableValues};
use recoupling::quad::TransformRecord;
use recoupling::{
    alpha, canonicalize, overlap_coefficient, regge_conjugate, regge_map, wigner_3j, wigner_6j, Error, ExactRadical,
    HalfInt, Quadrilateral, Representation, SixJArgs, VolumeSpectrum,
};
use serde::Serialize;
use serde_json::json;

use crate::cache::SpectrumCache;
use crate::output::{fixed17, line, shortest, shortest_complex, Cell, Rendered, Table};

fn halves(v: &[HalfInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn twice(v: &[HalfInt]) -> Vec<i64> {
    v.iter().map(|x| x.twice()).collect()
}

/// `sign·√(p/q)` pieces plus the reduced surd `c·√f`.
#[derive(Serialize)]
struct ExactJson {
    exact: String,
    surd: String,
    sign: i8,
    radicand: String,
    value: f64,
}

fn surd_string(r: &ExactRadical) -> String {
    let t = r.to_surd();
    if t.is_zero() {
        return "0".into();
    }
    let f = t.squarefree.to_string();
    let c = if t.coef.is_integer() {
        t.coef.numer().to_string()
    } else {
        format!("{}/{}", t.coef.numer(), t.coef.denom())
    };
    match (f.as_str(), t.coef.abs().is_one()) {
        ("1", _) => c,
        (_, true) => format!("{}sqrt({f})", if t.coef.is_negative() { "-" } else { "" }),
        _ => format!("{c}*sqrt({f})"),
    }
}

fn rational_string(r: &num_rational::BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn exact_json(r: &ExactRadical) -> ExactJson {
    ExactJson {
        exact: r.to_string(),
        surd: surd_string(r),
        sign: r.sign(),
        radicand: rational_string(r.radicand()),
        value: r.to_f64(),
    }
}

fn symbol(kind: &str, args: &[HalfInt], value: &ExactRadical, note: Option<&str>, display: String) -> Rendered {
    let e = exact_json(value);
    let mut table = Table::new(["symbol", "j1", "j2", "j3", "j4", "j5", "j6", "exact", "surd", "value", "note"]);
    let mut row: Vec<Cell> = vec![kind.into()];
    row.extend(halves(args).into_iter().map(Cell::from));
    row.extend([e.exact.clone().into(), e.surd.clone().into(), e.value.into(), note.unwrap_or("").into()]);
    table.push(row);
    let mut pretty = String::new();
    line(&mut pretty, format_args!("{display} = {} = {} ≈ {}", e.exact, e.surd, shortest(e.value)));
    if let Some(n) = note {
        line(&mut pretty, format_args!("  ({n})"));
    }
    Rendered {
        json: json!({
            "symbol": kind,
            "args": halves(args),
            "args_twice": twice(args),
            "value": e,
            "note": note,
        }),
        table,
        pretty,
    }
}

pub fn sixj(v: &[HalfInt]) -> anyhow::Result<Rendered> {
    if let Some(x) = v.iter().find(|x| x.twice() < 0) {
        return Err(Error::Domain(format!("negative spin {x}")).into());
    }
    let args = SixJArgs::new([v[0], v[1], v[2]], [v[3], v[4], v[5]]);
    let value = wigner_6j(&args);
    let note = (!args.is_admissible()).then_some("triad violated");
    let display = format!("{{{} {} {} / {} {} {}}}", v[0], v[1], v[2], v[3], v[4], v[5]);
    Ok(symbol("6j", v, &value, note, display))
}

pub fn threej(v: &[HalfInt]) -> anyhow::Result<Rendered> {
    let value = wigner_3j(v[0], v[1], v[2], v[3], v[4], v[5])?;
    let note = if (v[3] + v[4] + v[5]).twice() != 0 {
        Some("projections do not sum to zero")
    } else if !recoupling::triangle_ok(v[0], v[1], v[2]) {
        Some("triad violated")
    } else if v[3].abs() > v[0] || v[4].abs() > v[1] || v[5].abs() > v[2] {
        Some("projection exceeds spin")
    } else {
        None
    };
    let display = format!("({} {} {}; {} {} {})", v[0], v[1], v[2], v[3], v[4], v[5]);
    Ok(symbol("3j", v, &value, note, display))
}

pub fn quad(v: &[HalfInt]) -> recoupling::Result<Quadrilateral> {
    Quadrilateral::new(v[0], v[1], v[2], v[3])
}

fn quad_json(q: &Quadrilateral) -> serde_json::Value {
    let (lo, hi) = q.ell_range();
    let (tlo, thi) = q.ell_tilde_range();
    json!({
        "sides": halves(&q.sides()),
        "sides_twice": q.twice(),
        "ell_range_twice": [lo.twice(), hi.twice()],
        "ell_tilde_range_twice": [tlo.twice(), thi.twice()],
        "canonical": q.is_canonical(),
    })
}

/// Couplings on the interior lattice `ℓmin < ℓ ≤ ℓmax`, or one `ℓ`.
pub fn alpha_cmd(q: &Quadrilateral, ell: Option<HalfInt>) -> anyhow::Result<Rendered> {
    let (lo, hi) = q.ell_range();
    let points: Vec<HalfInt> = match ell {
        Some(l) => vec![l],
        None => (lo + HalfInt::ONE).range_to(hi).collect(),
    };
    let mut table = Table::new(["ell", "ell_twice", "alpha_squared", "alpha"]);
    let mut entries = Vec::new();
    let mut pretty = String::new();
    line(&mut pretty, format_args!("alpha for {q}, l in [{lo}, {hi}]"));
    for l in points {
        let a = alpha(l, q)?;
        let sq = rational_string(&a.square());
        table.push(vec![l.to_string().into(), l.twice().into(), sq.clone().into(), a.to_f64().into()]);
        line(&mut pretty, format_args!("  l = {l:>5}  alpha^2 = {sq}  alpha ≈ {}", shortest(a.to_f64())));
        entries.push(json!({"ell": l.to_string(), "ell_twice": l.twice(), "alpha_squared": sq, "alpha": a.to_f64()}));
    }
    Ok(Rendered {
        json: json!({"quadrilateral": quad_json(q), "entries": entries}),
        table,
        pretty,
    })
}

/// Spectrum through the cache, if one is configured. Returns whether it was
/// served from the cache.
pub fn cached_spectrum(
    q: &Quadrilateral,
    rep: Representation,
    tol: f64,
    cache: Option<&SpectrumCache>,
) -> anyhow::Result<(VolumeSpectrum, bool)> {
    let m = recoupling::build_matrix(q, rep);
    if let Some(c) = cache {
        if let Some(s) = c.load(q, rep, tol, &m.alpha) {
            return Ok((s, true));
        }
    }
    let s = recoupling::spectrum(&m, tol)?;
    if let Some(c) = cache {
        if let Err(e) = c.store(&s) {
            eprintln!("warning: cache write failed: {e:#}");
        }
    }
    Ok((s, false))
}

pub fn spectrum_cmd(s: &VolumeSpectrum, vectors: bool) -> anyhow::Result<Rendered> {
    let lattice = s.quad.ell_lattice();
    let mut header = vec!["k".to_string(), "lambda".to_string()];
    if vectors {
        header.extend(lattice.iter().map(|l| format!("psi_l={l}")));
    }
    let mut table = Table::new(header);
    table.comment = Some(format!("spectrum {} rep={} residual={}", s.quad, s.rep, fixed17(s.residual)));
    let mut pretty = String::new();
    let (lo, hi) = s.quad.ell_range();
    line(&mut pretty, format_args!("spectrum of {}, rep {}, l in [{lo}, {hi}]", s.quad, s.rep));
    for (k, &lam) in s.eigenvalues.iter().enumerate() {
        let mut row: Vec<Cell> = vec![k.into(), lam.into()];
        if vectors {
            row.extend(s.column(k).into_iter().map(Cell::from));
        }
        table.push(row);
        line(&mut pretty, format_args!("  k = {k:>3}  lambda = {}", shortest(lam)));
    }
    if vectors {
        line(&mut pretty, format_args!("eigenfunctions Psi_l^(k), rows l, columns k"));
        for (p, l) in lattice.iter().enumerate() {
            let cols: Vec<String> = s.psi[p].iter().map(|x| shortest(*x)).collect();
            line(&mut pretty, format_args!("  l = {l:>5}  {}", cols.join("  ")));
        }
    }
    line(&mut pretty, format_args!("recursion residual {}", shortest(s.residual)));
    Ok(Rendered {
        json: serde_json::to_value(s.to_record())?,
        table,
        pretty,
    })
}

/// Exact recoupling overlaps `⟨ℓ̃|ℓ⟩`, all of them or one.
pub fn overlap_cmd(q: &Quadrilateral, ell: Option<HalfInt>, ell_tilde: Option<HalfInt>) -> anyhow::Result<Rendered> {
    let ls: Vec<HalfInt> = match ell {
        Some(l) => vec![l],
        None => q.ell_lattice(),
    };
    let lts: Vec<HalfInt> = match ell_tilde {
        Some(l) => vec![l],
        None => q.ell_tilde_lattice(),
    };
    let mut table = Table::new(["ell", "ell_tilde", "exact", "surd", "value"]);
    let mut entries = Vec::new();
    let mut pretty = String::new();
    line(&mut pretty, format_args!("<l~|l> for {q}"));
    for &lt in &lts {
        for &l in &ls {
            let v = overlap_coefficient(l, lt, q);
            let e = exact_json(&v);
            table.push(vec![l.to_string().into(), lt.to_string().into(), e.exact.clone().into(), e.surd.clone().into(), e.value.into()]);
            line(&mut pretty, format_args!("  <{lt}|{l}> = {} ≈ {}", e.surd, shortest(e.value)));
            entries.push(json!({"ell": l.to_string(), "ell_tilde": lt.to_string(), "value": e}));
        }
    }
    Ok(Rendered {
        json: json!({"quadrilateral": quad_json(q), "entries": entries}),
        table,
        pretty,
    })
}

fn lattice_labels(l: &Lattice, float: fn(f64) -> String) -> Vec<String> {
    match l {
        Lattice::Ell(v) | Lattice::EllTilde(v) => halves(v),
        Lattice::Eigen(v) => v.iter().map(|x| float(*x)).collect(),
    }
}

/// One of the six overlap families as a row/column/value list.
pub fn family_cmd(q: &Quadrilateral, family: Family, rep: Representation, tol: f64) -> anyhow::Result<Rendered> {
    let t = family_table(family, q, rep, tol)?;
    let (var, deg) = family.labels();
    let rows = lattice_labels(&t.rows, fixed17);
    let cols = lattice_labels(&t.cols, fixed17);
    let (prows, pcols) = (lattice_labels(&t.rows, shortest), lattice_labels(&t.cols, shortest));
    let m = t.to_complex();
    let mut table = Table::new(["row", "col", "re", "im"]);
    table.comment = Some(format!("family {family} for {q}, rows: {var}; columns: {deg}"));
    let mut pretty = String::new();
    line(&mut pretty, format_args!("family {family} for {q}; rows {var}, columns {deg}"));
    let mut entries = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in cols.iter().enumerate() {
            let z = m[(i, j)];
            table.push(vec![r.clone().into(), c.clone().into(), z.re.into(), z.im.into()]);
            let exact = match &t.values {
                TableValues::Exact(v) => Some(surd_string(&v[i][j])),
                TableValues::Complex(_) => None,
            };
            match &exact {
                Some(s) => line(&mut pretty, format_args!("  [{}, {}] = {s}", prows[i], pcols[j])),
                None => line(&mut pretty, format_args!("  [{}, {}] = {}", prows[i], pcols[j], shortest_complex(z.re, z.im))),
            }
            entries.push(json!({"row": r, "col": c, "re": z.re, "im": z.im, "exact": exact}));
        }
    }
    Ok(Rendered {
        json: json!({
            "family": family.name(),
            "quadrilateral": quad_json(q),
            "representation": t.rep,
            "rows": t.rows,
            "cols": t.cols,
            "orthogonality_deviation": t.orthogonality_deviation(),
            "entries": entries,
        }),
        table,
        pretty,
    })
}

pub fn regge_sixj(v: &[HalfInt]) -> anyhow::Result<Rendered> {
    let args = SixJArgs::new([v[0], v[1], v[2]], [v[3], v[4], v[5]]);
    let image = regge_map(&args).ok_or_else(|| Error::Domain("a+b+c+d is not an integer or an image entry is negative".into()))?;
    let same = wigner_6j(&args) == wigner_6j(&image);
    let [a, b, c, d, e, f] = image.0;
    let mut table = Table::new(["j1", "j2", "j3", "j4", "j5", "j6", "equal_value"]);
    let mut row: Vec<Cell> = halves(&image.0).into_iter().map(Cell::from).collect();
    row.push(i64::from(same).into());
    table.push(row);
    let mut pretty = String::new();
    line(&mut pretty, format_args!("Regge image {{{a} {b} {c} / {d} {e} {f}}}; equal values: {same}"));
    Ok(Rendered {
        json: json!({
            "input_twice": twice(v),
            "image": halves(&image.0),
            "image_twice": image.twice(),
            "equal_value": same,
        }),
        table,
        pretty,
    })
}

fn transform_json(t: &TransformRecord) -> serde_json::Value {
    json!({"permutation": t.permutation, "regge": t.regge, "swaps_diagonals": t.swaps_diagonals})
}

pub fn regge_quad(q: &Quadrilateral) -> anyhow::Result<Rendered> {
    let r = regge_conjugate(q)?;
    let (c, t) = canonicalize(q)?;
    let mut table = Table::new(["role", "a", "b", "c", "d"]);
    for (role, x) in [("input", q), ("regge", &r), ("canonical", &c)] {
        let mut row: Vec<Cell> = vec![role.into()];
        row.extend(halves(&x.sides()).into_iter().map(Cell::from));
        table.push(row);
    }
    let mut pretty = String::new();
    line(&mut pretty, format_args!("Regge conjugate of {q}: {r}"));
    line(
        &mut pretty,
        format_args!(
            "gauge-fixed representative: {c} (permutation {:?}, regge {}, diagonals swapped {})",
            t.permutation, t.regge, t.swaps_diagonals
        ),
    );
    Ok(Rendered {
        json: json!({
            "input": quad_json(q),
            "regge": quad_json(&r),
            "canonical": quad_json(&c),
            "transform": transform_json(&t),
        }),
        table,
        pretty,
    })
}
