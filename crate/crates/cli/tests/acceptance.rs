//! Acceptance criteria AC1–AC10, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so the report is printed in
//! order; exits non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recoupling::algebra::{closure_residuals, commutator_spectrum, duality_map, fit_structure_constants, realize, ORACLE_SCALE};
use recoupling::angmom::admissible_sixj;
use recoupling::askey::{eval_poly, orthogonality, racah_from_6j, HypergeomParams};
use recoupling::families::{check_duality_one, families_report};
use recoupling::limits::{default_bases, limit_scan_iia, limit_scan_iiib, threej_limit_of_6j, DEFAULT_SCALES};
use recoupling::quad::canonical_quadrilaterals;
use recoupling::sweep::par_map;
use recoupling::volume::{volume_spectrum, SpectrumRecord, DEFAULT_TOL};
use recoupling::*;
use recoupling_oracles::{bargmann, cg::ThreeJTable, tensor};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

const REPS: [Representation; 2] = [Representation::Antisym, Representation::Sym];

fn ac1() -> Verdict {
    let args = admissible_sixj(8);
    let table = ThreeJTable::new(8);
    let bad: Vec<SixJArgs> = par_map(&args, |a| (table.sixj(a) != Some(wigner_6j(a))).then_some(*a))
        .into_iter()
        .flatten()
        .collect();
    verdict(
        bad.is_empty(),
        format!("{} admissible sets with 2j <= 8 against the contraction oracle, {} mismatches", args.len(), bad.len()),
    )
}

fn ac2() -> Verdict {
    let pool = admissible_sixj(12);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a);
    let picks: Vec<SixJArgs> = (0..1000).map(|_| pool[rng.random_range(0..pool.len())]).collect();
    let results = par_map(&picks, |a| {
        let orbit = symmetry_orbit(a);
        let v = wigner_6j(a);
        let same = orbit.iter().all(|m| wigner_6j(m) == v);
        (same, 144 % orbit.len() == 0, orbit == bargmann::orbit(a), orbit.len())
    });
    let sizes: BTreeSet<usize> = results.iter().map(|r| r.3).collect();
    let ok = results.iter().all(|r| r.0 && r.1 && r.2);
    verdict(
        ok,
        format!(
            "1000 random sets (2j <= 12): values constant on orbits, sizes {sizes:?} divide 144, orbits equal the Bargmann-array orbit: {ok}"
        ),
    )
}

fn ac3() -> Verdict {
    let quads = canonical_quadrilaterals(8);
    let failing = par_map(&quads, |q| !check_duality_one(q).pass).into_iter().filter(|f| *f).count();
    verdict(
        failing == 0,
        format!("{} gauge-fixed quadrilaterals with 2j <= 8, exact Gram matrices, {failing} failing", quads.len()),
    )
}

fn ac4() -> Verdict {
    let quads = canonical_quadrilaterals(10);
    let cases: Vec<(Quadrilateral, Representation)> = quads.iter().flat_map(|q| REPS.map(|r| (*q, r))).collect();
    let worst = par_map(&cases, |(q, rep)| -> Result<[f64; 4]> {
        let s = volume_spectrum(q, *rep, DEFAULT_TOL)?;
        let lam = &s.eigenvalues;
        let n = lam.len();
        let pairing = (0..n).map(|k| (lam[k] + lam[n - 1 - k]).abs()).fold(0.0, f64::max);
        let zeros = lam.iter().filter(|l| l.abs() < 1e-10).count();
        let zero_ok = if n % 2 == 1 { zeros == 1 } else { zeros == 0 };
        let r = volume_spectrum(&regge_conjugate(q)?, *rep, DEFAULT_TOL)?;
        let regge = lam.iter().zip(&r.eigenvalues).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok([pairing, if zero_ok { 0.0 } else { 1.0 }, s.residual, regge])
    });
    let mut acc = [0.0f64; 4];
    for w in worst {
        match w {
            Ok(v) => (0..4).for_each(|i| acc[i] = acc[i].max(v[i])),
            Err(e) => return verdict(false, format!("spectrum failed: {e}")),
        }
    }
    let ok = acc[0] < 1e-10 && acc[1] == 0.0 && acc[2] < 1e-10 && acc[3] < 1e-10;
    verdict(
        ok,
        format!(
            "{} quadrilaterals x 2 reps, 2j <= 10: pairing {:.1e}, zero mode iff odd: {}, residual {:.1e}, Regge {:.1e}",
            quads.len(),
            acc[0],
            acc[1] == 0.0,
            acc[2],
            acc[3]
        ),
    )
}

fn ac5() -> Verdict {
    let quads = canonical_quadrilaterals(6);
    let devs = par_map(&quads, |q| -> Result<(f64, f64)> {
        let s = volume_spectrum(q, Representation::Antisym, DEFAULT_TOL)?;
        let mut scaled: Vec<f64> = s.eigenvalues.iter().map(|l| ORACLE_SCALE * l).collect();
        scaled.sort_by(f64::total_cmp);
        let mut sixj = commutator_spectrum(&realize(q));
        sixj.sort_by(f64::total_cmp);
        let tens = tensor::commutator_eigenvalues(q);
        let d = |o: &[f64]| {
            if o.len() != scaled.len() {
                return f64::INFINITY;
            }
            scaled.iter().zip(o).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        Ok((d(&sixj), d(&tens)))
    });
    let mut worst = (0.0f64, 0.0f64);
    for d in devs {
        match d {
            Ok((a, b)) => worst = (worst.0.max(a), worst.1.max(b)),
            Err(e) => return verdict(false, format!("spectrum failed: {e}")),
        }
    }
    let half = Quadrilateral::from_twice([1, 1, 1, 1]).unwrap();
    let lam = volume_spectrum(&half, Representation::Antisym, DEFAULT_TOL).unwrap().eigenvalues;
    let target = 3f64.sqrt() / 16.0;
    let spin_half = lam.len() == 2 && (lam[0] - target).abs() < 1e-15 && (lam[1] + target).abs() < 1e-15;
    let ok = worst.0 < 1e-10 && worst.1 < 1e-10 && spin_half;
    verdict(
        ok,
        format!(
            "{} quadrilaterals with 2j <= 6: 4*lambda vs eig([J12^2,J23^2]/(-4i)) from 6j matrices {:.1e}, from the four-spin tensor product {:.1e}; (1/2,1/2,1/2,1/2) gives ±sqrt(3)/16: {spin_half}",
            quads.len(),
            worst.0,
            worst.1
        ),
    )
}

fn ac6() -> Verdict {
    let quads = canonical_quadrilaterals(8);
    let results = par_map(&quads, |q| -> Result<(f64, f64, f64)> {
        let g = realize(q);
        let c = fit_structure_constants(&g)?;
        let dual = duality_map(&g);
        let cd = fit_structure_constants(&dual)?;
        let swapped = c.swapped();
        let scale = if c.scale > 0.0 { c.scale } else { 1.0 };
        let res = closure_residuals(&dual, &swapped);
        let constants = if c.rank_deficient || cd.rank_deficient {
            0.0
        } else {
            cd.as_array().iter().zip(&swapped).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
        };
        Ok((c.relative_residual(), res[0].max(res[1]) / scale, constants))
    });
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for r in results {
        match r {
            Ok((a, b, c)) => worst = (worst.0.max(a), worst.1.max(b), worst.2.max(c)),
            Err(e) => return verdict(false, format!("fit failed: {e}")),
        }
    }
    let ok = worst.0 < 1e-8 && worst.1 < 1e-8 && worst.2 < 1e-8;
    verdict(
        ok,
        format!(
            "{} quadrilaterals with 2j <= 8: closure residual / (|K1| |K2|) {:.1e}; dual triple at swapped constants {:.1e}; refitted dual constants vs swapped {:.1e}",
            quads.len(),
            worst.0,
            worst.1,
            worst.2
        ),
    )
}

fn ac7() -> Verdict {
    let quads = canonical_quadrilaterals(8);
    let cases: Vec<(Quadrilateral, Representation)> = quads.iter().flat_map(|q| REPS.map(|r| (*q, r))).collect();
    let results = par_map(&cases, |(q, rep)| families_report(q, *rep, DEFAULT_TOL));
    let mut failing = 0;
    let (mut dual_dev, mut tri_dev) = (0.0f64, 0.0f64);
    for r in results {
        match r {
            Ok(r) => {
                let dim = r.duality_ii.dim.max(1) as f64;
                for d in [&r.duality_ii, &r.duality_iii] {
                    dual_dev = dual_dev.max(d.orthogonality_deviation.max(d.completeness_deviation) / dim);
                }
                tri_dev = tri_dev.max(r.triangular.deviation);
                if !(r.duality_ii.pass && r.duality_iii.pass && r.triangular.pass) {
                    failing += 1;
                }
            }
            Err(e) => return verdict(false, format!("families failed: {e}")),
        }
    }
    verdict(
        failing == 0 && dual_dev < 1e-12 && tri_dev < 1e-11,
        format!(
            "{} cases (2j <= 8, both reps): duality/completeness deviation per dim {:.1e}, triangular {:.1e}, {failing} failing",
            cases.len(),
            dual_dev,
            tri_dev
        ),
    )
}

fn ac8() -> Verdict {
    let pool = admissible_sixj(10);
    let mut rng = ChaCha8Rng::seed_from_u64(0x8ac);
    let picks: Vec<SixJArgs> = (0..500).map(|_| pool[rng.random_range(0..pool.len())]).collect();
    let ids = par_map(&picks, racah_from_6j);
    let mut worst = 0.0f64;
    let mut racah = Vec::new();
    for id in ids {
        match id {
            Ok(id) => {
                worst = worst.max(id.error);
                racah.extend(id.params);
            }
            Err(e) => return verdict(false, format!("racah_from_6j failed: {e}")),
        }
    }
    let mut params: Vec<HypergeomParams> = racah;
    for n_max in 1..=12u32 {
        for a in [-0.5, 0.0, 0.5, 2.0, 5.5] {
            for b in [-0.25, 0.0, 1.0, 3.0] {
                params.push(HypergeomParams::Hahn { alpha: a, beta: b, n_max });
                params.push(HypergeomParams::DualHahn { gamma: a, delta: b, n_max });
            }
        }
    }
    let checks = par_map(&params, |p| -> Result<(f64, bool)> {
        let o = orthogonality(p)?;
        let unit = (0..=p.n_max()).map(|x| eval_poly(p, 0, x)).collect::<Result<Vec<f64>>>()?;
        Ok((o.off_diagonal.max(o.norm_mismatch), unit.iter().all(|v| *v == 1.0)))
    });
    let mut orth = 0.0f64;
    let mut unit = true;
    for c in checks {
        match c {
            Ok((d, u)) => {
                orth = orth.max(d);
                unit &= u;
            }
            Err(e) => return verdict(false, format!("orthogonality failed: {e}")),
        }
    }
    let count = |name: &str| params.iter().filter(|p| format!("{p:?}").starts_with(name)).count();
    verdict(
        worst < 1e-12 && orth < 1e-10 && unit,
        format!(
            "500 random symbols (2j <= 10): max |6j - Racah form| {:.1e}; orthogonality over {} Racah, {} Hahn, {} dual Hahn sets {:.1e}; p_0 = 1 exactly: {unit}",
            worst,
            count("Racah"),
            count("Hahn"),
            count("DualHahn"),
            orth
        ),
    )
}

fn ac9() -> Verdict {
    let [a, b, c] = default_bases();
    let reports = [
        limit_scan_iia(&a, &DEFAULT_SCALES),
        limit_scan_iiib(&b, &DEFAULT_SCALES),
        threej_limit_of_6j(&c, &DEFAULT_SCALES),
    ];
    let parts: Vec<String> = reports
        .iter()
        .map(|r| {
            format!(
                "{} ratio {:.2} monotone {} target {:.1e}",
                r.kind,
                r.final_ratio.unwrap_or(f64::NAN),
                r.monotone,
                r.max_target_residual
            )
        })
        .collect();
    let ok = reports.iter().all(|r| {
        r.pass && r.monotone && r.final_ratio.is_some_and(|x| x < 0.75) && r.max_target_residual < 1e-12
    });
    verdict(ok, format!("scales {DEFAULT_SCALES:?}: {}", parts.join("; ")))
}

fn run_cli(args: &[&str], cache: Option<&Path>) -> (i32, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_recoupling"));
    cmd.args(args).env_remove("RECOUPLING_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    let out = cmd.output().expect("running the CLI");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn ac10() -> Verdict {
    let invocations: &[&[&str]] = &[
        &["sixj", "1", "1", "1", "1", "1", "1"],
        &["sixj", "1", "1", "3", "1", "1", "1"],
        &["threej", "3/2", "1", "1/2", "1/2", "-1", "1/2"],
        &["alpha", "1", "3/2", "2", "5/2"],
        &["spectrum", "3/2", "2", "5/2", "3", "--vectors"],
        &["overlap", "1", "3/2", "2", "5/2"],
        &["overlap", "1", "1", "1", "1", "--family", "III.A"],
        &["regge", "1", "2", "3", "3", "3", "3"],
        &["regge", "1", "3/2", "2", "5/2"],
        &["check", "families", "--max-2j", "4"],
        &["check", "algebra", "--max-2j", "4"],
        &["check", "triangular", "--max-2j", "4"],
        &["check", "limits"],
        &["check", "limits", "--base", "iia:0,2,2s+1/2,2s"],
        &["plotdata", "eigenfunctions", "1/2", "1/2", "1/2", "1/2"],
        &["plotdata", "alpha-profile", "2", "5/2", "3", "7/2"],
        &["plotdata", "convergence", "--scales", "1,2"],
    ];
    let mut mismatched = Vec::new();
    let mut runs = 0;
    for inv in invocations {
        for format in ["json", "csv"] {
            let mut args: Vec<&str> = inv.to_vec();
            args.extend(["--format", format, "--no-cache"]);
            let first = run_cli(&args, None);
            let second = run_cli(&args, None);
            runs += 2;
            if first.0 != 0 || first != second {
                mismatched.push(format!("{} ({format})", inv.join(" ")));
            }
        }
    }
    let dir = tempfile::tempdir().expect("temporary cache directory");
    let args = ["spectrum", "7/2", "4", "9/2", "5", "--format", "json"];
    let cold = run_cli(&args, Some(dir.path()));
    let warm = run_cli(&args, Some(dir.path()));
    let uncached = run_cli(&[&args[..], &["--no-cache"]].concat(), None);
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().flatten().map(|e| e.path()).collect();
    let exact = files.len() == 1 && {
        let stored: SpectrumRecord = serde_json::from_slice(&std::fs::read(&files[0]).unwrap()).unwrap();
        let q = Quadrilateral::from_twice([7, 8, 9, 10]).unwrap();
        let fresh = volume_spectrum(&q, Representation::Antisym, DEFAULT_TOL).unwrap().to_record();
        stored == fresh && stored.clone().into_spectrum().map(|s| s.to_record()) == Ok(fresh)
    };
    let cache_ok = cold.0 == 0 && cold == warm && warm == uncached && exact;
    let differing = if mismatched.is_empty() { "none".to_string() } else { mismatched.join(", ") };
    verdict(
        mismatched.is_empty() && cache_ok,
        format!(
            "{runs} runs of {} invocations x {{json, csv}}, failing or differing: {differing}; cache round-trip bit-exact and byte-identical output: {cache_ok}",
            invocations.len(),
        ),
    )
}

type Criterion = (&'static str, &'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1", "6j exactness", ac1),
        ("AC2", "Regge/classical symmetry", ac2),
        ("AC3", "family-I exact orthogonality", ac3),
        ("AC4", "volume spectrum properties", ac4),
        ("AC5", "oracle spectrum equivalence", ac5),
        ("AC6", "quadratic-algebra closure", ac6),
        ("AC7", "duality, completeness, triangular relation", ac7),
        ("AC8", "Racah identity and polynomial orthogonality", ac8),
        ("AC9", "limits", ac9),
        ("AC10", "CLI determinism and cache", ac10),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let t = Instant::now();
        let v = f();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id} {name}: {} ({:.1} s)", v.detail, t.elapsed().as_secs_f64());
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
