use num_rational::BigRational;
use proptest::prelude::*;
use recoupling::angmom::admissible_sixj;
use recoupling::quad::all_quadrilaterals;
use recoupling::volume::{volume_spectrum, DEFAULT_TOL};
use recoupling::*;
use std::sync::OnceLock;

fn sixj_pool() -> &'static [SixJArgs] {
    static POOL: OnceLock<Vec<SixJArgs>> = OnceLock::new();
    POOL.get_or_init(|| admissible_sixj(8))
}

fn quad_pool() -> &'static [Quadrilateral] {
    static POOL: OnceLock<Vec<Quadrilateral>> = OnceLock::new();
    POOL.get_or_init(|| all_quadrilaterals(8))
}

fn eigenvalues(q: &Quadrilateral, rep: Representation) -> Vec<f64> {
    volume_spectrum(q, rep, DEFAULT_TOL).unwrap().eigenvalues
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn orbit_is_value_preserving(i in any::<prop::sample::Index>()) {
        let args = sixj_pool()[i.index(sixj_pool().len())];
        let v = wigner_6j(&args);
        let orbit = symmetry_orbit(&args);
        prop_assert_eq!(144 % orbit.len(), 0);
        for member in &orbit {
            prop_assert_eq!(&wigner_6j(member), &v);
        }
        let r = regge_map(&args).unwrap();
        prop_assert!(orbit.contains(&r));
        prop_assert_eq!(symmetry_orbit(&r), orbit);
    }

    #[test]
    fn halfint_display_parse(t in -4000i64..4000) {
        let x = HalfInt::from_twice(t);
        prop_assert_eq!(x.to_string().parse::<HalfInt>().unwrap(), x);
        prop_assert_eq!(format!("{}", x.to_f64()).parse::<HalfInt>().unwrap(), x);
    }

    #[test]
    fn canonicalize_is_idempotent(i in any::<prop::sample::Index>()) {
        let q = quad_pool()[i.index(quad_pool().len())];
        let (c, _) = canonicalize(&q).unwrap();
        prop_assert!(c.is_canonical());
        prop_assert_eq!(canonicalize(&c).unwrap().0, c);
        prop_assert_eq!(canonicalize(&regge_conjugate(&q).unwrap()).unwrap().0, c);
    }

    #[test]
    fn spectrum_invariants(i in any::<prop::sample::Index>(), sym in any::<bool>()) {
        let q = quad_pool()[i.index(quad_pool().len())];
        let rep = if sym { Representation::Sym } else { Representation::Antisym };
        let lam = eigenvalues(&q, rep);
        let n = lam.len();
        prop_assert_eq!(n, q.dim());
        for k in 0..n {
            prop_assert!((lam[k] + lam[n - 1 - k]).abs() < 1e-10);
        }
        prop_assert!(lam.windows(2).all(|w| w[0] >= w[1]));
        let scale = lam.first().copied().unwrap_or(0.0).abs().max(1.0);
        prop_assert!(max_gap(&lam, &eigenvalues(&regge_conjugate(&q).unwrap(), rep)) < 1e-10 * scale);
        let (c, _) = canonicalize(&q).unwrap();
        prop_assert!(max_gap(&lam, &eigenvalues(&c, rep)) < 1e-10 * scale);
    }

    #[test]
    fn alpha_is_regge_invariant(i in any::<prop::sample::Index>()) {
        let q = quad_pool()[i.index(quad_pool().len())];
        let r = regge_conjugate(&q).unwrap();
        let (lo, hi) = q.ell_range();
        for ell in lo.range_to(hi + HalfInt::ONE) {
            prop_assert_eq!(alpha(ell, &q).unwrap(), alpha(ell, &r).unwrap());
        }
    }

    #[test]
    fn radical_sums_cancel(n in 1i64..500, d in 1i64..500, m in 1i64..500, e in 1i64..500) {
        let x = ExactRadical::sqrt(BigRational::new(n.into(), d.into()));
        let y = ExactRadical::sqrt(BigRational::new(m.into(), e.into()));
        let mut s = RadicalSum::new();
        s.add(&x);
        s.add(&y);
        s.add(&-&x);
        prop_assert_eq!(s.as_single(), Some(y.clone()));
        s.add(&-y.clone());
        prop_assert!(s.is_zero() && s.is_empty());
        let xy = &x * &y;
        prop_assert_eq!(xy.square(), x.square() * y.square());
        prop_assert!((xy.to_f64() - x.to_f64() * y.to_f64()).abs() < 1e-12 * xy.to_f64().abs().max(1.0));
    }
}
