//! Strategies and properties shared by the property tests and the
//! acceptance suite.
#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use realpv::arith::{buchberger, GaussRat, Poly, RewriteSystem, Ring};
use realpv::tower::{complexify, DiffTower, FieldElement, GeneratorKind};
use realpv::wronskian::wronskian_det;

pub fn xyz() -> Arc<Ring> {
    static RING: OnceLock<Arc<Ring>> = OnceLock::new();
    RING.get_or_init(|| Ring::new(&["x", "y", "z"])).clone()
}

/// `Q(i)(t)(e)(c, s)` with `e' = e`, `c' = -s`, `s' = c`, `s² + c² = 1`.
pub fn tower() -> Arc<DiffTower> {
    static TOWER: OnceLock<Arc<DiffTower>> = OnceLock::new();
    TOWER
        .get_or_init(|| {
            let k = DiffTower::rational_functions("t");
            let one = k.one();
            let l = k
                .adjoin_exponential("e", &one)
                .unwrap()
                .adjoin_text(&[
                    ("c", GeneratorKind::Algebraic, "-s", None),
                    ("s", GeneratorKind::Algebraic, "c", Some("s^2 + c^2 - 1")),
                ])
                .unwrap();
            complexify(&l).unwrap()
        })
        .clone()
}

/// Gaussian integers, for constant combinations.
pub fn gauss_int() -> impl Strategy<Value = GaussRat> {
    (-4i64..=4, -3i64..=3).prop_map(|(a, b)| &GaussRat::from_int(a) + &(&GaussRat::from_int(b) * &GaussRat::i()))
}

pub fn gauss() -> impl Strategy<Value = GaussRat> {
    (-6i64..=6, 1i64..=4, -3i64..=3, 1i64..=3).prop_map(|(a, b, c, d)| &GaussRat::frac(a, b) + &(&GaussRat::frac(c, d) * &GaussRat::i()))
}

fn poly_in(ring: Arc<Ring>, names: &'static [&'static str], max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((gauss(), prop::collection::vec(0..=max_exp, names.len())), 0..=max_terms).prop_map(move |terms| {
        let mut acc = Poly::zero(&ring);
        for (c, exps) in terms {
            let mut t = Poly::constant(&ring, c);
            for (name, e) in names.iter().zip(exps) {
                t = &t * &Poly::named(&ring, name).unwrap().pow(e);
            }
            acc = &acc + &t;
        }
        acc
    })
}

pub fn poly() -> impl Strategy<Value = Poly> {
    poly_in(xyz(), &["x", "y", "z"], 2, 4)
}

/// Small polynomial elements of the tower.
pub fn element_poly() -> impl Strategy<Value = FieldElement> {
    let t = tower();
    poly_in(t.ring().clone(), &["t", "e", "c", "s"], 2, 3).prop_map(move |p| t.from_poly(p).unwrap())
}

/// Multilinear elements for the wronskian families.
pub fn element_small() -> impl Strategy<Value = FieldElement> {
    let t = tower();
    poly_in(t.ring().clone(), &["t", "e", "c", "s"], 1, 3).prop_map(move |p| t.from_poly(p).unwrap())
}

/// Elements with a denominator `a + t^k`.
pub fn element() -> impl Strategy<Value = FieldElement> {
    (element_poly(), 1i64..=3, 0u32..=2).prop_map(|(x, a, k)| {
        let t = x.tower().clone();
        let den = t.parse(&format!("{a} + t^{k}")).unwrap();
        x.try_div(&den).unwrap()
    })
}

/// A Groebner basis of two random quadrics, or `None` past the budget.
pub fn system() -> impl Strategy<Value = Option<RewriteSystem>> {
    let gen = || poly_in(xyz(), &["x", "y", "z"], 2, 3).prop_filter("nonconstant generator", |p| !p.is_constant());
    (gen(), gen()).prop_map(|(a, b)| buchberger(&[a, b], 20_000).ok())
}

pub fn ring_axioms(a: Poly, b: Poly, c: Poly) -> Result<(), TestCaseError> {
    prop_assert_eq!(&a + &b, &b + &a);
    prop_assert_eq!(&a * &b, &b * &a);
    prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    prop_assert!((&a + &(-&a)).is_zero());
    prop_assert_eq!(&(&a - &b) + &b, a.clone());
    prop_assert_eq!(&a * &Poly::one(a.ring()), a.clone());
    Ok(())
}

pub fn nf_idempotent(p: Poly, rs: Option<RewriteSystem>) -> Result<(), TestCaseError> {
    let Some(rs) = rs else { return Ok(()) };
    let nf = rs.normal_form(&p);
    prop_assert_eq!(rs.normal_form(&nf), nf.clone());
    for m in nf.terms().keys() {
        prop_assert!(rs.rules().iter().all(|r| !r.lead.divides(m)));
    }
    Ok(())
}

pub fn confluence(p: Poly, rs: Option<RewriteSystem>, picks: Vec<usize>) -> Result<(), TestCaseError> {
    let Some(rs) = rs else { return Ok(()) };
    let mut k = 0usize;
    let shuffled = rs.normal_form_by(&p, |n| {
        k += 1;
        picks[k % picks.len()] % n
    });
    prop_assert_eq!(shuffled, rs.normal_form(&p));
    Ok(())
}

pub fn conj_involution(x: FieldElement, y: FieldElement) -> Result<(), TestCaseError> {
    prop_assert_eq!(x.conj().conj(), x.clone());
    prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
    prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
    prop_assert!((&x + &x.conj()).is_real());
    Ok(())
}

pub fn leibniz(x: FieldElement, y: FieldElement) -> Result<(), TestCaseError> {
    prop_assert_eq!((&x * &y).derive(), &(&x.derive() * &y) + &(&x * &y.derive()));
    prop_assert_eq!((&x + &y).derive(), &x.derive() + &y.derive());
    Ok(())
}

pub fn derive_conj(x: FieldElement) -> Result<(), TestCaseError> {
    prop_assert_eq!(x.conj().derive(), x.derive().conj());
    Ok(())
}

pub fn wronskian_alternates(fam: Vec<FieldElement>, i: usize, j: usize) -> Result<(), TestCaseError> {
    let n = fam.len();
    let (i, j) = (i % n, j % n);
    prop_assume!(i != j);
    let mut swapped = fam.clone();
    swapped.swap(i, j);
    prop_assert_eq!(wronskian_det(&swapped).unwrap(), -&wronskian_det(&fam).unwrap());
    Ok(())
}

pub fn wronskian_dependent(x: FieldElement, y: FieldElement, a: GaussRat, b: GaussRat) -> Result<(), TestCaseError> {
    let z = &x.scale(&a) + &y.scale(&b);
    prop_assert!(wronskian_det(&[x.clone(), y.clone(), z]).unwrap().is_zero());
    prop_assert!(wronskian_det(&[x.clone(), x.scale(&a)]).unwrap().is_zero());
    Ok(())
}

/// Runs `f` on `cases` generated inputs; the error names the failing input.
pub fn run<S: Strategy>(cases: u32, strategy: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, f).map_err(|e| e.to_string())
}

pub const CASES: u32 = 500;
pub const SWAPS: u32 = 200;

pub fn family() -> impl Strategy<Value = Vec<FieldElement>> {
    prop::collection::vec(element_small(), 2..=3)
}

/// Every 500-case property; the first failure is returned.
pub fn algebra_suite() -> Result<(), String> {
    run(CASES, (poly(), poly(), poly()), |(a, b, c)| ring_axioms(a, b, c))?;
    run(CASES, (poly(), system()), |(p, rs)| nf_idempotent(p, rs))?;
    run(CASES, (poly(), system(), prop::collection::vec(0usize..64, 1..8)), |(p, rs, picks)| confluence(p, rs, picks))?;
    run(CASES, (element(), element()), |(x, y)| conj_involution(x, y))?;
    run(CASES, (element(), element()), |(x, y)| leibniz(x, y))?;
    run(CASES, element(), derive_conj)?;
    Ok(())
}

pub fn wronskian_suite() -> Result<(), String> {
    run(SWAPS, (family(), 0usize..3, 0usize..3), |(f, i, j)| wronskian_alternates(f, i, j))?;
    run(SWAPS, (element_small(), element_small(), gauss_int(), gauss_int()), |(x, y, a, b)| wronskian_dependent(x, y, a, b))?;
    Ok(())
}
