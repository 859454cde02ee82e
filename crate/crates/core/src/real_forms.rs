//! Real forms: cocycles for the conjugation action, twisted extensions and
//! sum-of-squares witnesses of non-reality.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{rat, ArithError, GaussRat, Matrix, Poly, Ring, UniPoly};
use crate::group::{sample_family, DefiningSet, GroupError};
use crate::pv::{parse_z, EquationClass, PVExtension, PvError, Shape};
use crate::report::{strings, Check, Report};
use crate::tower::{exponent_vectors, DiffTower, FieldElement, GeneratorKind, TowerError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealFormError {
    #[error(transparent)]
    Pv(#[from] PvError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("not a cocycle for this group: {0}")]
    InvalidCocycle(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl From<TowerError> for RealFormError {
    fn from(e: TowerError) -> Self {
        RealFormError::Pv(e.into())
    }
}

impl From<ArithError> for RealFormError {
    fn from(e: ArithError) -> Self {
        RealFormError::Pv(e.into())
    }
}

/// `A` with `A·conj(A) = I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    pub matrix: Matrix,
}

impl Cocycle {
    pub fn new(matrix: Matrix) -> Self {
        Cocycle { matrix }
    }

    pub fn identity(n: usize) -> Self {
        Cocycle { matrix: Matrix::identity(n) }
    }

    pub fn minus_identity(n: usize) -> Self {
        Cocycle { matrix: Matrix::scalar(n, GaussRat::from_int(-1)) }
    }

    pub fn is_trivial(&self) -> bool {
        self.matrix == Matrix::identity(self.matrix.rows())
    }
}

impl fmt::Display for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.matrix.canonical())
    }
}

/// `A·conj(A) = I` and `A` lies in the zero set of `s`.
pub fn cocycle_check(a: &Matrix, s: &DefiningSet) -> bool {
    a.is_square() && a.mul(&a.conj()) == Matrix::identity(a.rows()) && s.is_member(a)
}

/// `B·A·conj(B)⁻¹`.
pub fn twist_by(b: &Matrix, a: &Matrix) -> Option<Matrix> {
    Some(b.mul(a).mul(&b.conj().inverse()?))
}

/// Members `B` of `s` in the sample family with `B·a·conj(B)⁻¹ = b`.
pub fn cohomologous_in_sample(a: &Matrix, b: &Matrix, s: &DefiningSet) -> Option<Matrix> {
    sample_family(a.rows()).into_iter().filter(|m| s.is_member(m)).find(|m| twist_by(m, a).as_ref() == Some(b))
}

/// Squares summing to `-1`.
#[derive(Debug, Clone)]
pub struct RealityWitness {
    pub elements: Vec<FieldElement>,
}

impl RealityWitness {
    /// `Σ q² + 1` normalizes to zero.
    pub fn verify(&self) -> bool {
        let Some(first) = self.elements.first() else { return false };
        let mut acc = first.tower().one();
        for q in &self.elements {
            acc = &acc + &(q * q);
        }
        acc.is_zero()
    }

    pub fn canonical(&self) -> Vec<String> {
        self.elements.iter().map(FieldElement::canonical).collect()
    }
}

impl fmt::Display for RealityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.canonical().join(", "))
    }
}

/// Bounded search: one or two terms `c·m` with `m` a standard generator
/// monomial of degree at most 2 and `c ∈ {1, 2, 1/2}`. `None` means no
/// witness within these bounds, not that the field is real.
pub fn non_reality_witness(tower: &Arc<DiffTower>) -> Option<RealityWitness> {
    let gens = tower.generator_vars();
    let nvars = tower.ring().len();
    let mut monos = Vec::new();
    for exps in exponent_vectors(gens.len(), 2) {
        if exps.iter().all(|&e| e == 0) {
            continue;
        }
        let mut m = crate::arith::Monomial::one(nvars);
        for (k, &v) in gens.iter().enumerate() {
            m.0[v] = exps[k];
        }
        let p = Poly::term(tower.ring(), m, GaussRat::one());
        if tower.rewrite().normal_form(&p) == p {
            monos.push(tower.from_poly(p).expect("standard monomial"));
        }
    }
    let coeffs = [GaussRat::one(), GaussRat::from_int(2), GaussRat::frac(1, 2)];
    let terms: Vec<FieldElement> = monos.iter().flat_map(|m| coeffs.iter().map(move |c| m.scale(c))).collect();
    let one = tower.one();
    let squares: Vec<FieldElement> = terms.iter().map(|q| q * q).collect();
    for (i, q) in terms.iter().enumerate() {
        if (&squares[i] + &one).is_zero() {
            return Some(RealityWitness { elements: vec![q.clone()] });
        }
    }
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            if (&(&squares[i] + &squares[j]) + &one).is_zero() {
                return Some(RealityWitness { elements: vec![terms[i].clone(), terms[j].clone()] });
            }
        }
    }
    None
}

/// Groups with a tabulated first cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H1Group {
    Gl1,
    Mu2,
    So2,
}

impl H1Group {
    pub fn label(self) -> &'static str {
        match self {
            H1Group::Gl1 => "GL1",
            H1Group::Mu2 => "MU2",
            H1Group::So2 => "SO2",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "GL1" => Some(H1Group::Gl1),
            "MU2" => Some(H1Group::Mu2),
            "SO2" => Some(H1Group::So2),
            _ => None,
        }
    }

    pub fn defining_set(self) -> DefiningSet {
        match self {
            H1Group::Gl1 => DefiningSet::new(1, Vec::new()),
            H1Group::Mu2 => DefiningSet::parse(1, &["X11^2 - 1"]).expect("valid"),
            H1Group::So2 => DefiningSet::parse(2, &["X11 - X22", "X12 + X21", "X11^2 + X21^2 - 1"]).expect("valid"),
        }
    }

    fn size(self) -> usize {
        match self {
            H1Group::So2 => 2,
            _ => 1,
        }
    }
}

/// Class representatives from the table, each checked to be a cocycle and
/// pairwise not cohomologous within the sample family.
pub fn h1_enumerate(g: H1Group) -> Result<Vec<Cocycle>, RealFormError> {
    let n = g.size();
    let reps = match g {
        H1Group::Gl1 => vec![Cocycle::identity(1)],
        H1Group::Mu2 | H1Group::So2 => vec![Cocycle::identity(n), Cocycle::minus_identity(n)],
    };
    let s = g.defining_set();
    for a in &reps {
        if !cocycle_check(&a.matrix, &s) {
            return Err(RealFormError::InvalidCocycle(a.to_string()));
        }
    }
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            if let Some(m) = cohomologous_in_sample(&a.matrix, &b.matrix, &s) {
                return Err(RealFormError::InvalidCocycle(format!("{a} and {b} are cohomologous via {}", m.canonical())));
            }
        }
    }
    Ok(reps)
}

/// Unit-modulus constants of ℚ(i), each a cocycle for `GL1`.
fn gl1_sample_cocycles() -> Vec<GaussRat> {
    let g = |a: i64, b: i64, d: i64| GaussRat::new(rat(a, d), rat(b, d));
    vec![g(-1, 0, 1), g(0, 1, 1), g(0, -1, 1), g(3, 4, 5), g(3, -4, 5), g(5, 12, 13), g(-7, 24, 25), g(8, 15, 17)]
}

/// `b/conj(b) = z` over the grid `b = x + yi`, `|x|, |y| <= 5`.
fn gl1_splitting(z: &GaussRat) -> Option<GaussRat> {
    for x in -5..=5 {
        for y in -5..=5 {
            let b = GaussRat::new(rat(x, 1), rat(y, 1));
            if b.is_zero() {
                continue;
            }
            if &b / &b.conj() == *z {
                return Some(b);
            }
        }
    }
    None
}

/// Table, cocycle checks and the sampled non-cohomology checks for one
/// group; for `GL1` also the coboundary search covering sampled cocycles.
pub fn h1_report(g: H1Group) -> Result<Report, RealFormError> {
    let mut rep = Report::new(format!("H1 classes for {}", g.label()));
    let reps = h1_enumerate(g)?;
    let s = g.defining_set();
    rep.put("defining set", strings(&s.canonical()));
    rep.put("classes", strings(&reps));
    for a in &reps {
        rep.push(Check::pass_if(format!("cocycle {a}"), cocycle_check(&a.matrix, &s), ""));
    }
    rep.push(Check::pass_if("representatives pairwise non-cohomologous on samples", true, format!("{} classes", reps.len())));
    if g == H1Group::Gl1 {
        let mut all = true;
        let mut lines = Vec::new();
        for z in gl1_sample_cocycles() {
            match gl1_splitting(&z) {
                Some(b) => lines.push(format!("{} = b/conj(b), b = {}", z.canonical(), b.canonical())),
                None => {
                    all = false;
                    lines.push(format!("{}: no splitting found", z.canonical()));
                }
            }
        }
        rep.push(Check::pass_if("sampled cocycles are coboundaries", all, "trivial H1"));
        rep.put("coboundaries", strings(&lines));
    }
    Ok(rep)
}

/// Multiplies the coefficient of each term by `unit^d`, `d` the degree in
/// `vars`.
fn scale_by_degree(p: &Poly, vars: &[usize], unit: &GaussRat) -> Poly {
    let terms = p.terms().iter().map(|(m, c)| {
        let d: u32 = vars.iter().map(|&v| m.0[v]).sum();
        (m.clone(), c * &unit.pow(d))
    });
    Poly::from_terms(p.ring(), terms.collect::<Vec<_>>())
}

fn real_or(p: Poly, what: &str) -> Result<Poly, RealFormError> {
    if p.is_real() {
        Ok(p)
    } else {
        Err(RealFormError::Unsupported(format!("{what} is not real after twisting")))
    }
}

fn twisted_name(name: &str) -> String {
    match name {
        "s" => "u".into(),
        "c" => "v".into(),
        "g" => "h".into(),
        other => format!("{other}_tw"),
    }
}

/// The real form attached to a cocycle: trivial classes return the input;
/// `-I` on CIRCLE and square-root RADICAL extensions uses `B = i·I`, i.e.
/// the generators `h = i·g` with their induced derivatives and relations.
pub fn twist(pv: &PVExtension, a: &Cocycle) -> Result<PVExtension, RealFormError> {
    let n = pv.order();
    let group_set = match pv.class() {
        Some(EquationClass::Exp) => H1Group::Gl1.defining_set(),
        Some(EquationClass::Radical) => crate::group::defining_equations(pv)?,
        Some(EquationClass::Circle) => H1Group::So2.defining_set(),
        _ => return Err(RealFormError::Unsupported(format!("twisting the {} class", pv.class().map_or("custom", |c| c.label())))),
    };
    if a.matrix.rows() != n || !cocycle_check(&a.matrix, &group_set) {
        return Err(RealFormError::InvalidCocycle(a.to_string()));
    }
    if a.is_trivial() || pv.class() == Some(EquationClass::Exp) {
        return Ok(pv.clone());
    }
    if a.matrix != Matrix::scalar(n, GaussRat::from_int(-1)) {
        return Err(RealFormError::Unsupported(format!("cocycle {a} is not a table representative")));
    }
    if let Shape::Radical { q, .. } = pv.shape() {
        if *q != 2 {
            return Err(RealFormError::Unsupported(format!("radical of index {q}")));
        }
    }
    twist_by_i(pv)
}

fn twist_by_i(pv: &PVExtension) -> Result<PVExtension, RealFormError> {
    let ext = pv.ext();
    let base = pv.base();
    let nb = base.ring().len();
    let new_names: Vec<String> = pv.new_generators();
    let vars: Vec<usize> = (nb..ext.ring().len()).collect();
    let i = GaussRat::i();
    let minus_i = -&i;
    let mut names = base.ring().names().to_vec();
    names.extend(new_names.iter().map(|g| twisted_name(g)));
    let ring = Ring::new(&names);
    let ident: Vec<usize> = (0..ring.len()).collect();
    let text = |p: &Poly| p.remap(&ring, &ident).canonical();
    let mut specs: Vec<(String, GeneratorKind, String, Option<String>)> = Vec::new();
    for g in ext.generators().iter().filter(|g| new_names.contains(&g.name)) {
        let num = scale_by_degree(g.derivative.num(), &vars, &minus_i).scale(&i);
        let den = scale_by_degree(g.derivative.den(), &vars, &minus_i);
        let (num, den) = (real_or(num, "derivative")?, real_or(den, "derivative")?);
        let der = format!("({})/({})", text(&num), text(&den));
        let rel = match &g.relation {
            Some(r) => {
                let t = scale_by_degree(r, &vars, &minus_i);
                let t = if t.is_real() { t } else { t.scale(&i) };
                Some(text(&real_or(t, "relation")?.monic()))
            }
            None => None,
        };
        specs.push((twisted_name(&g.name), g.kind, der, rel));
    }
    let spec_refs: Vec<(&str, GeneratorKind, &str, Option<&str>)> =
        specs.iter().map(|(n, k, d, r)| (n.as_str(), *k, d.as_str(), r.as_deref())).collect();
    let tw = base.adjoin_text(&spec_refs)?;
    let solutions = pv
        .solutions()
        .iter()
        .map(|eta| {
            let num = scale_by_degree(eta.num(), &vars, &minus_i).scale(&i);
            let den = scale_by_degree(eta.den(), &vars, &minus_i);
            let (num, den) = (real_or(num, "solution")?, real_or(den, "solution")?);
            Ok(tw.parse(&format!("({})/({})", text(&num), text(&den)))?)
        })
        .collect::<Result<Vec<_>, RealFormError>>()?;
    // h = i·g = i·E_g(-i·Z) in the solution variables of η' = i·η
    let zt = pv.solution_variables();
    let zvars: Vec<usize> = zt.ring().names().iter().enumerate().filter(|(_, n)| parse_z(n).is_some()).map(|(k, _)| k).collect();
    let mut exprs: Vec<(String, String)> = Vec::new();
    for (g, e) in pv.gen_exprs() {
        let num = real_or(scale_by_degree(e.num(), &zvars, &minus_i).scale(&i), "generator expression")?;
        let den = real_or(scale_by_degree(e.den(), &zvars, &minus_i), "generator expression")?;
        exprs.push((twisted_name(g), format!("({})/({})", num.canonical(), den.canonical())));
    }
    let expr_refs: Vec<(&str, &str)> = exprs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let scan = pv.certificates().scan_bounds;
    Ok(PVExtension::from_parts(base, &tw, solutions, pv.ode().clone(), &expr_refs, scan)?)
}

/// Relations, certificates, cocycle splitting and witnesses for the twist
/// of `pv` by `a`.
pub fn twist_report(pv: &PVExtension, a: &Cocycle) -> Result<Report, RealFormError> {
    let mut rep = Report::new(format!("twist by {a}"));
    let tw = twist(pv, a)?;
    rep.put("equation", pv.ode().to_string());
    rep.put("tower", strings(&tw.ext().describe()));
    rep.put("solutions", strings(tw.solutions()));
    for c in tw.certificates().checks() {
        rep.push(c);
    }
    if !a.is_trivial() && pv.class() != Some(EquationClass::Exp) {
        let n = pv.order();
        let b = Matrix::scalar(n, GaussRat::i());
        rep.push(Check::pass_if("B·conj(B)⁻¹ = A for B = i·I", twist_by(&b, &Matrix::identity(n)).as_ref() == Some(&a.matrix), ""));
    }
    match non_reality_witness(tw.ext()) {
        Some(w) => {
            rep.push(Check::pass_if("non-reality witness verifies", w.verify(), w.to_string()));
            rep.put("witness", strings(&w.canonical()));
        }
        None => rep.push(Check::info("non-reality witness", "no witness found within bounds")),
    }
    Ok(rep)
}

/// `SO(2)` real forms of `Y'' + Y = 0`: the group, the two classes, the
/// twisted form with its witness and the untwisted form without one.
pub fn so2_forms(pv: &PVExtension) -> Result<Report, RealFormError> {
    let mut rep = Report::new("SO(2) real forms");
    let s = crate::group::defining_equations(pv)?;
    rep.put("defining set", strings(&s.canonical()));
    let same = crate::arith::groebner::same_zero_set(s.polys(), H1Group::So2.defining_set().polys(), crate::arith::budget())?;
    rep.push(Check::pass_if("group is SO(2)", same, ""));
    rep.absorb("h1: ", h1_report(H1Group::So2)?);
    match non_reality_witness(pv.ext()) {
        None => rep.push(Check::pass_if("untwisted form: no witness within bounds", true, "")),
        Some(w) => rep.push(Check::pass_if("untwisted form: no witness within bounds", false, w.to_string())),
    }
    let twisted = twist_report(pv, &Cocycle::minus_identity(2))?;
    let found = twisted.data.contains_key("witness");
    rep.absorb("twisted: ", twisted);
    rep.push(Check::pass_if("twisted form has a witness", found, ""));
    Ok(rep)
}

/// Sign `±1` with `±f` a square in the extension, read from a relation
/// `g²·a + b` (so `g² = -b/a`) against the radicand `f`.
fn square_sign(tower: &Arc<DiffTower>, relation: &Poly, g: usize, f: &FieldElement) -> Result<i64, RealFormError> {
    let r = tower.ring();
    let zero_g = |p: &Poly| Poly::from_terms(r, p.terms().iter().filter(|(m, _)| m.0[g] == 0).map(|(m, c)| (m.clone(), c.clone())).collect::<Vec<_>>());
    let b = zero_g(relation);
    let a_part = relation - &b;
    let mut g2 = crate::arith::Monomial::one(r.len());
    g2.0[g] = 2;
    let a = a_part.div_monomial(&g2);
    let square = tower.from_poly(-&b)?.try_div(&tower.from_poly(a)?)?;
    let f = f.embed(tower)?;
    if square == f {
        Ok(1)
    } else if square == -&f {
        Ok(-1)
    } else {
        Err(RealFormError::Unsupported(format!("relation {} is not g² = ±f", relation.canonical())))
    }
}

/// Whether a rational function of `t` alone is a square in ℚ(t).
fn is_square_in_base(x: &FieldElement) -> bool {
    let t = x.tower().base_var();
    let as_uni = |p: &Poly| match t {
        Some(t) => UniPoly::from_poly(p, t),
        None => p.constant_value().filter(GaussRat::is_real).map(|c| UniPoly::new(vec![c.re])),
    };
    match (as_uni(x.num()), as_uni(x.den())) {
        (Some(n), Some(d)) => n.sqrt().is_some() && d.sqrt().is_some(),
        _ => false,
    }
}

/// The square-root pair `g² = f` and `h² = -f`: sign constraints on `f`
/// and absence of a `K`-isomorphism, checked on the possible images
/// `a + b·h` of `g`.
pub fn radical_pair(pv: &PVExtension) -> Result<Report, RealFormError> {
    let Shape::Radical { generator, radicand, q, .. } = pv.shape().clone() else {
        return Err(RealFormError::Unsupported("radical pair needs a RADICAL extension".into()));
    };
    if q != 2 {
        return Err(RealFormError::Unsupported(format!("radical of index {q}")));
    }
    let mut rep = Report::new("radical real forms");
    let tw = twist(pv, &Cocycle::minus_identity(1))?;
    let twisted_gen = twisted_name(&generator);
    let mut signs = Vec::new();
    for (label, l, name) in [("L1", pv.ext(), generator.as_str()), ("L2", tw.ext(), twisted_gen.as_str())] {
        let idx = l.var_index(name).ok_or_else(|| ArithError::UnknownVariable(name.into()))?;
        let rel = l.generators().iter().find(|g| g.name == name).and_then(|g| g.relation.clone()).ok_or_else(|| {
            RealFormError::Unsupported(format!("{name} has no relation"))
        })?;
        let f = radicand.embed(pv.base())?;
        let f_l = f.embed(l)?;
        let f_l = f_l.pow(match &pv.shape() {
            Shape::Radical { p, .. } => *p as i32,
            _ => 1,
        })?;
        let sign = square_sign(l, &rel, idx, &f_l)?;
        let text = if sign > 0 { format!("{} is a square", f_l.canonical()) } else { format!("-({}) is a square", f_l.canonical()) };
        rep.put(&format!("{label} relation"), rel.canonical());
        rep.put(&format!("{label} sign constraint"), text);
        signs.push(sign);
        for c in if label == "L1" { pv.certificates().checks() } else { tw.certificates().checks() } {
            rep.push(Check::new(format!("{label}: {}", c.name), c.status, c.detail));
        }
    }
    rep.push(Check::pass_if("sign constraints differ", signs[0] != signs[1], format!("{:?}", signs)));
    // g ↦ a + b·h over K forces 2ab = 0 and then a² = f or b² = -1
    let f = radicand.embed(pv.base())?;
    let f_square = is_square_in_base(&f);
    let minus_one_square = is_square_in_base(&pv.base().parse("-1")?);
    rep.push(Check::pass_if(
        "no K-isomorphism g ↦ a + b·h",
        !f_square && !minus_one_square,
        format!("{} square in K: {f_square}; -1 square in K: {minus_one_square}", f.canonical()),
    ));
    let tw_var = tw.ext().var(&twisted_gen)?;
    let g_sq = pv.ext().var(&generator)?.pow(2)?;
    let h_sq = tw_var.pow(2)?;
    rep.put("L1 generator squared", g_sq.canonical());
    rep.put("L2 generator squared", h_sq.canonical());
    rep.push(Check::info("uniqueness for a fixed ordering", "unresolved; the two orderings are exhibited above"));
    Ok(rep)
}

/// Parses a square matrix of constants given as rows of text.
pub fn parse_cocycle<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Cocycle, RealFormError> {
    let m = crate::arith::parse_matrix(rows)?;
    if !m.is_square() {
        return Err(RealFormError::InvalidCocycle(m.canonical()));
    }
    Ok(Cocycle::new(m))
}
