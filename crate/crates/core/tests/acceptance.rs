//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use realpv::arith::{budget, buchberger, GaussRat, Matrix, Poly};
use realpv::cli;
use realpv::correspondence::{check_correspondence, fixed_field, Descriptor, Subgroup, Window};
use realpv::group::{DefiningSet, GaloisGroup, GroupElement};
use realpv::pv::{build_pv, realify, BuildOptions, EquationClass, LinearODE, PVExtension};
use realpv::real_forms::{non_reality_witness, radical_pair, twist, Cocycle};
use realpv::scenario::{builtin, run_group, Settings};
use realpv::seidenberg::{build_seidenberg, solution_tower};
use realpv::tower::{constant_scan, express_in_span, DiffTower};
use realpv::wronskian::wronskian_det;

type Outcome = Result<String, String>;

/// Name, time limit in seconds (0 for none), check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn pv(coeffs: &[&str], class: EquationClass) -> Result<PVExtension, String> {
    let k = DiffTower::rational_functions("t");
    let ode = LinearODE::parse(&k, coeffs).map_err(|e| e.to_string())?;
    build_pv(&k, &ode, class, &BuildOptions::default()).map_err(|e| e.to_string())
}

fn group(coeffs: &[&str], class: EquationClass) -> Result<(PVExtension, GaloisGroup), String> {
    let p = pv(coeffs, class)?;
    let g = GaloisGroup::new(&p).map_err(|e| e.to_string())?;
    Ok((p, g))
}

/// Every polynomial of `a` reduces to zero modulo a Groebner basis of `b`.
fn reduces_into(a: &[Poly], b: &[Poly]) -> Result<bool, String> {
    let gb = buchberger(b, budget()).map_err(|e| e.to_string())?;
    Ok(a.iter().all(|p| gb.reduces_to_zero(p)))
}

fn mutual_reduction(s: &DefiningSet, reference: &[&str]) -> Result<(), String> {
    let r = DefiningSet::parse(s.size(), reference).map_err(|e| e.to_string())?;
    ensure(reduces_into(r.polys(), s.polys())?, "a reference polynomial does not reduce modulo S")?;
    ensure(reduces_into(s.polys(), r.polys())?, "a polynomial of S does not reduce modulo the reference")
}

fn scalar(c: GaussRat) -> GroupElement {
    GroupElement::scalar(1, c)
}

fn so2_recovery() -> Outcome {
    let (_, g) = group(&["1", "0"], EquationClass::Circle)?;
    mutual_reduction(g.defining(), &["X11 - X22", "X12 + X21", "X11^2 + X21^2 - 1"])?;
    let plan = builtin("circle").unwrap().plan().map_err(|e| e.to_string())?;
    let rep = run_group(&plan, &Settings::default());
    ensure(rep.all_passed(), "group report has failures")?;
    Ok(format!("S = {{{}}}", g.defining().canonical().join(", ")))
}

fn mu2_recovery() -> Outcome {
    let (p, g) = group(&["-1/(2*t)"], EquationClass::Radical)?;
    mutual_reduction(g.defining(), &["X11^2 - 1"])?;
    let x = p.ext().var("g").map_err(|e| e.to_string())?;
    let gx = x.embed(g.g_tower()).map_err(|e| e.to_string())?;
    let minus = scalar(GaussRat::from_int(-1));
    let id = GroupElement::identity(1);
    let apply = |s: &GroupElement, y| g.apply(s, y).map_err(|e| e.to_string());
    ensure(apply(&minus, &x)? == -&gx, "-1 does not negate g")?;
    ensure(apply(&id, &x)? == gx, "identity moves g")?;
    let mm = g.compose(&minus, &minus).map_err(|e| e.to_string())?;
    ensure(mm == id, "(-1)∘(-1) is not the identity")?;
    ensure(apply(&mm, &x)? == apply(&minus, &apply(&minus, &x)?)?, "composition does not act as the composite")?;
    let mi = g.compose(&minus, &id).map_err(|e| e.to_string())?;
    ensure(mi == minus, "(-1)∘id is not -1")?;
    ensure(!g.is_member(&Matrix::scalar(1, GaussRat::from_int(2))), "2 accepted as a member")?;
    Ok(format!("S = {{{}}}; ±1 verified", g.defining().canonical().join(", ")))
}

fn gl1_group() -> Outcome {
    let (p, g) = group(&["-1"], EquationClass::Exp)?;
    ensure(g.defining().is_empty(), format!("S not empty: {:?}", g.defining().canonical()))?;
    let e = p.ext().var("e").map_err(|e| e.to_string())?;
    let ge = e.embed(g.g_tower()).map_err(|e| e.to_string())?;
    for l in [GaussRat::from_int(2), GaussRat::from_int(-1), GaussRat::frac(1, 3), GaussRat::i()] {
        let m = Matrix::scalar(1, l.clone());
        ensure(g.annihilates_relations(&m).map_err(|e| e.to_string())?, format!("{l} does not annihilate the relations"))?;
        let img = g.apply(&scalar(l.clone()), &e).map_err(|e| e.to_string())?;
        ensure(img == ge.scale(&l), format!("{l} does not scale e"))?;
    }
    Ok("S = {}; λ ∈ {2, -1, 1/3, i} induce morphisms".into())
}

fn lattice_round_trips() -> Outcome {
    let (_, g) = group(&["-1"], EquationClass::Exp)?;
    let w = Window::default();
    let lattice: Vec<Subgroup> = [Descriptor::Full, Descriptor::MuN(6), Descriptor::MuN(3), Descriptor::MuN(2), Descriptor::Trivial]
        .into_iter()
        .map(|d| Subgroup::from_descriptor(&g, d))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let rep = check_correspondence(&g, &lattice, w).map_err(|e| e.to_string())?;
    if let Some(c) = rep.failures().first() {
        return Err(format!("{}: {}", c.name, c.detail));
    }
    let inclusions = rep.checks.iter().filter(|c| c.name.contains(" iff ")).count();
    ensure(inclusions == 9, format!("{inclusions} inclusion pairs checked"))?;
    let fields: Vec<String> = lattice.iter().map(|h| fixed_field(&g, h, w).map(|f| f.describe())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    Ok(format!("{} round trips, {inclusions} inclusion pairs; fixed fields {}", lattice.len(), fields.join(", ")))
}

fn cli_json(args: &[&str]) -> Result<serde_json::Value, String> {
    let out = cli::run(args.iter().copied());
    ensure(out.code == 0, format!("exit {}: {}", out.code, out.stderr))?;
    serde_json::from_str(&out.stdout).map_err(|e| e.to_string())
}

fn weak_normality() -> Outcome {
    let v = cli_json(&["realpv", "demo", "weak-normality", "--json"])?;
    let data = &v["reports"][0]["data"];
    let real = data["F = K(e^3): real automorphisms"].as_str().unwrap_or("?").to_string();
    let complex = data["F = K(e^3): complexified elements"].as_str().unwrap_or("?").to_string();
    ensure(real == "1" && complex == "3", format!("real {real}, complexified {complex}"))?;
    Ok(format!("{real} real automorphism, {complex} complexified elements over K(e^3)"))
}

fn so2_real_forms() -> Outcome {
    let circle = pv(&["1", "0"], EquationClass::Circle)?;
    ensure(non_reality_witness(circle.ext()).is_none(), "untwisted form has a witness")?;
    let tw = twist(&circle, &Cocycle::minus_identity(2)).map_err(|e| e.to_string())?;
    let w = non_reality_witness(tw.ext()).ok_or("twisted form has no witness")?;
    let mut sum = tw.ext().one();
    for q in &w.elements {
        sum = &sum + &(q * q);
    }
    ensure(sum.num().is_zero(), format!("Σq² + 1 = {sum}"))?;
    ensure(w.verify(), "witness does not verify")?;
    Ok(format!("twisted witness {w}, Σq² + 1 = 0; untwisted: none within bounds"))
}

fn radical_forms() -> Outcome {
    let p = pv(&["-1/(2*t)"], EquationClass::Radical)?;
    let rep = radical_pair(&p).map_err(|e| e.to_string())?;
    let get = |k: &str| rep.data.get(k).and_then(|v| v.as_str()).unwrap_or("").to_string();
    let (r1, r2) = (get("L1 relation"), get("L2 relation"));
    ensure(r1 == "1/1*g^2 + -1/1*t" && r2 == "1/1*h^2 + 1/1*t", format!("relations {r1}; {r2}"))?;
    let (s1, s2) = (get("L1 sign constraint"), get("L2 sign constraint"));
    ensure(s1 != s2, "sign constraints agree")?;
    for name in ["sign constraints differ", "no K-isomorphism g ↦ a + b·h"] {
        ensure(rep.check(name).is_some_and(|c| c.passed()), format!("{name} failed"))?;
    }
    Ok(format!("{s1} vs {s2}; no base-fixing isomorphism"))
}

fn seidenberg() -> Outcome {
    let f = build_seidenberg().map_err(|e| e.to_string())?;
    let two_a = f.a().scale(&GaussRat::from_int(2));
    let sum = &(&(&two_a * &two_a) + &(&f.b() * &f.b())) + &f.tower().one();
    ensure(sum.num().is_zero(), format!("(2a)² + b² + 1 = {sum}"))?;
    ensure(f.b() == f.a().derive(), "b is not a'")?;
    let l = solution_tower(&f).map_err(|e| e.to_string())?;
    let found = constant_scan(&l, 2, 0);
    ensure(found.iter().all(|c| c.derive().num().is_zero()), "a scan constant has nonzero derivative")?;
    for text in ["y1^2 + z1^2", "y2^2 + z2^2", "y1*z2 - y2*z1"] {
        let c = l.parse(text).map_err(|e| e.to_string())?;
        ensure(c.derive().num().is_zero(), format!("{text} is not constant"))?;
        ensure(express_in_span(&c, &found).is_some(), format!("{text} not found by the scan"))?;
    }
    Ok(format!("(2a)² + a'² + 1 = 0; scan found {} constants incl. y_i² + z_i², y1z2 - y2z1", found.len()))
}

fn wronskian_suite() -> Outcome {
    let p = pv(&["1", "0"], EquationClass::Circle)?;
    let s = p.ext().var("s").map_err(|e| e.to_string())?;
    let c = p.ext().var("c").map_err(|e| e.to_string())?;
    let w = wronskian_det(&[s, c]).map_err(|e| e.to_string())?;
    ensure(w.constant_value() == Some(GaussRat::from_int(-1)), format!("Wr(s, c) = {w}"))?;
    common::wronskian_suite()?;
    Ok(format!("Wr(s, c) = -1; {} swaps and {} dependent families", common::SWAPS, common::SWAPS))
}

fn algebra_suite() -> Outcome {
    common::algebra_suite()?;
    Ok(format!("6 properties × {} cases", common::CASES))
}

fn realification() -> Outcome {
    let circle = pv(&["1", "0"], EquationClass::Circle)?;
    let cx = circle.complexify().map_err(|e| e.to_string())?;
    // basis c + i·s, c - i·s
    let m = Matrix::from_rows(vec![vec![GaussRat::i(), -&GaussRat::i()], vec![GaussRat::from_int(1), GaussRat::from_int(1)]]);
    let swapped = cx.change_basis(&m).map_err(|e| e.to_string())?;
    let real = realify(&swapped).map_err(|e| e.to_string())?;
    ensure(real.ext().rewrite() == circle.ext().rewrite(), "realified tower differs from the (s, c) tower")?;
    let sc: Vec<_> = ["s", "c"].iter().map(|n| real.ext().var(n)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    for y in real.solutions() {
        ensure(express_in_span(y, &sc).is_some(), format!("{y} not in span(s, c)"))?;
    }
    for y in &sc {
        ensure(express_in_span(y, real.solutions()).is_some(), format!("{y} not in the realified space"))?;
    }
    let back = realify(&cx).map_err(|e| e.to_string())?;
    ensure(back.ext().rewrite() == circle.ext().rewrite(), "round trip changes the relations")?;
    let a: Vec<String> = back.solutions().iter().map(|y| y.canonical()).collect();
    let b: Vec<String> = circle.solutions().iter().map(|y| y.canonical()).collect();
    ensure(a == b, format!("round trip {a:?} vs {b:?}"))?;
    Ok(format!("V^c = span(s, c); realify∘complexify gives {}", a.join(", ")))
}

fn determinism() -> Outcome {
    let first = cli::run(["realpv", "all", "--json"]);
    let second = cli::run(["realpv", "all", "--json"]);
    ensure(first.code == 0, format!("exit {}: {}", first.code, first.stderr))?;
    ensure(first.stdout == second.stdout, "outputs differ")?;
    Ok(format!("{} identical bytes", first.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("SO(2) group recovery", 5, so2_recovery),
        ("mu2 group recovery", 1, mu2_recovery),
        ("GL(1) group", 1, gl1_group),
        ("Galois correspondence round trips", 5, lattice_round_trips),
        ("weak-normality failure", 1, weak_normality),
        ("real forms of SO(2)", 2, so2_real_forms),
        ("radical pair", 1, radical_forms),
        ("Seidenberg field", 2, seidenberg),
        ("Wronskian suite", 5, wronskian_suite),
        ("algebra property suite", 30, algebra_suite),
        ("realification", 1, realification),
        ("determinism of all --json", 0, determinism),
    ];
    let mut failed = 0;
    for (k, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let over = *limit > 0 && took > Duration::from_secs(*limit);
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over the {limit}s limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("[{status}] criterion {:>2}: {name} ({:.2}s): {detail}", k + 1, took.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
