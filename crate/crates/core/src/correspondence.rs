//! Galois correspondence for the supported subgroup lattices: fixed fields
//! of closed subgroups, groups over intermediate fields, round trips and
//! normality.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::groebner::{radical_contains, zero_set_contained};
use crate::arith::{budget, buchberger, ArithError, GaussRat, Matrix, Poly, UniPoly};
use crate::group::{x_ring, DefiningSet, GaloisGroup, GenericAction, GroupError};
use crate::pv::{ode_from_basis, LinearODE, PVExtension, PvError};
use crate::report::{strings, Check, Report};
use crate::tower::{coordinates, coordinates_modulo, exponent_vectors, express_in_span, in_k_span, ConstantsMode, FieldElement, TowerError};
use crate::wronskian::independent_over_constants;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid intermediate field: {0}")]
    BadField(String),
}

impl From<TowerError> for CorrError {
    fn from(e: TowerError) -> Self {
        CorrError::Group(e.into())
    }
}

impl From<ArithError> for CorrError {
    fn from(e: ArithError) -> Self {
        CorrError::Group(e.into())
    }
}

impl From<PvError> for CorrError {
    fn from(e: PvError) -> Self {
        CorrError::Group(e.into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Descriptor {
    Full,
    Trivial,
    /// Scalar `N`-th roots of unity.
    MuN(u32),
    Diagonal,
    So2,
    FiniteList(Vec<Matrix>),
    /// Produced by [`group_over`]; not one of the named shapes.
    Computed,
}

impl Descriptor {
    pub fn label(&self) -> String {
        match self {
            Descriptor::Full => "FULL".into(),
            Descriptor::Trivial => "TRIVIAL".into(),
            Descriptor::MuN(k) => format!("MU_N({k})"),
            Descriptor::Diagonal => "DIAGONAL".into(),
            Descriptor::So2 => "SO2".into(),
            Descriptor::FiniteList(ms) => {
                format!("FINITE_LIST{{{}}}", ms.iter().map(Matrix::canonical).collect::<Vec<_>>().join("; "))
            }
            Descriptor::Computed => "COMPUTED".into(),
        }
    }

    /// Reads `FULL`, `TRIVIAL`, `MU_N(k)`, `DIAGONAL` or `SO2`.
    pub fn parse(text: &str) -> Option<Descriptor> {
        let t = text.trim();
        match t {
            "FULL" => return Some(Descriptor::Full),
            "TRIVIAL" => return Some(Descriptor::Trivial),
            "DIAGONAL" => return Some(Descriptor::Diagonal),
            "SO2" => return Some(Descriptor::So2),
            _ => {}
        }
        let k = t.strip_prefix("MU_N(")?.strip_suffix(')')?.trim().parse().ok()?;
        (k > 0).then_some(Descriptor::MuN(k))
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A closed subgroup of `DGal(L|K)`: the group's defining set plus extra
/// polynomials.
#[derive(Debug, Clone)]
pub struct Subgroup {
    descriptor: Descriptor,
    defining: DefiningSet,
}

impl Subgroup {
    pub fn from_descriptor(group: &GaloisGroup, descriptor: Descriptor) -> Result<Subgroup, CorrError> {
        let n = group.size();
        let r = x_ring(n);
        let x = |i: usize, j: usize| Poly::var(&r, i * n + j);
        let one = Poly::one(&r);
        let off_diagonal = || (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| x(i, j));
        let extra: Vec<Poly> = match &descriptor {
            Descriptor::Full => Vec::new(),
            Descriptor::Trivial => {
                (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| if i == j { &x(i, j) - &one } else { x(i, j) }).collect()
            }
            Descriptor::MuN(k) => {
                if *k == 0 {
                    return Err(CorrError::Unsupported("MU_N(0)".into()));
                }
                let mut v = vec![&x(0, 0).pow(*k) - &one];
                v.extend(off_diagonal());
                v.extend((1..n).map(|i| &x(i, i) - &x(0, 0)));
                v
            }
            Descriptor::Diagonal => off_diagonal().collect(),
            Descriptor::So2 => {
                if n != 2 {
                    return Err(CorrError::Unsupported(format!("SO2 inside a group of size {n}")));
                }
                vec![&x(0, 0) - &x(1, 1), &x(0, 1) + &x(1, 0), &(&x(0, 0).pow(2) + &x(1, 0).pow(2)) - &one]
            }
            Descriptor::FiniteList(ms) => {
                for m in ms {
                    if !group.is_member(m) {
                        return Err(GroupError::NotInGroup(m.canonical()).into());
                    }
                }
                finite_ideal(n, ms)?
            }
            Descriptor::Computed => return Err(CorrError::Unsupported("COMPUTED is not a constructible descriptor".into())),
        };
        Ok(Subgroup { descriptor, defining: group.defining().extended(extra) })
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn defining(&self) -> &DefiningSet {
        &self.defining
    }

    pub fn label(&self) -> String {
        self.descriptor.label()
    }

    pub fn is_member(&self, m: &Matrix) -> bool {
        self.defining.is_member(m)
    }

    /// Zero-set inclusion over the algebraic closure.
    pub fn contained_in(&self, other: &Subgroup) -> Result<bool, CorrError> {
        Ok(zero_set_contained(self.defining.polys(), other.defining.polys(), budget())?)
    }

    pub fn same_as(&self, other: &Subgroup) -> Result<bool, CorrError> {
        Ok(self.contained_in(other)? && other.contained_in(self)?)
    }

    /// Replaces a computed descriptor by the first named shape with the same
    /// zero set, when there is one.
    pub fn identified(self, group: &GaloisGroup) -> Result<Subgroup, CorrError> {
        if self.descriptor != Descriptor::Computed {
            return Ok(self);
        }
        let mut shapes = vec![Descriptor::Trivial, Descriptor::Full];
        shapes.extend((2..=12).map(Descriptor::MuN));
        shapes.push(Descriptor::Diagonal);
        if group.size() == 2 {
            shapes.push(Descriptor::So2);
        }
        for d in shapes {
            let candidate = Subgroup::from_descriptor(group, d)?;
            if candidate.same_as(&self)? {
                return Ok(Subgroup { descriptor: candidate.descriptor, defining: self.defining });
            }
        }
        Ok(self)
    }
}

/// Vanishing ideal of a finite set of matrices: linear equations for the
/// entries shared by all points, plus products with one factor
/// `X_c - p_c` per point over the remaining entries.
fn finite_ideal(n: usize, points: &[Matrix]) -> Result<Vec<Poly>, CorrError> {
    if points.is_empty() {
        return Err(CorrError::Unsupported("empty FINITE_LIST".into()));
    }
    let r = x_ring(n);
    let coords: Vec<usize> = (0..n * n).collect();
    let entry = |m: &Matrix, c: usize| m.entries()[c].clone();
    let (fixed, vary): (Vec<usize>, Vec<usize>) = coords.into_iter().partition(|&c| points.iter().all(|p| entry(p, c) == entry(&points[0], c)));
    let mut out: Vec<Poly> =
        fixed.iter().map(|&c| &Poly::var(&r, c) - &Poly::constant(&r, entry(&points[0], c))).collect();
    if vary.is_empty() {
        return Ok(out);
    }
    let combos = (vary.len() as u64).checked_pow(points.len() as u32).unwrap_or(u64::MAX);
    if combos > 4096 {
        return Err(CorrError::Unsupported(format!("FINITE_LIST with {} elements is too large", points.len())));
    }
    let mut choice = vec![0usize; points.len()];
    loop {
        let mut p = Poly::one(&r);
        for (k, &ci) in choice.iter().enumerate() {
            let c = vary[ci];
            p = &p * &(&Poly::var(&r, c) - &Poly::constant(&r, entry(&points[k], c)));
        }
        out.push(p);
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(out);
            }
            choice[k] += 1;
            if choice[k] < vary.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Bounds for the invariant search and the membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    /// Total degree in the new generators.
    pub degree: u32,
    /// Degree of polynomial coefficients in the base variable.
    pub t_window: u32,
}

impl Default for Window {
    fn default() -> Self {
        Window { degree: 6, t_window: 0 }
    }
}

/// A differential field `K ⊆ E ⊆ L` given by generators over `K`.
#[derive(Debug, Clone)]
pub struct IntermediateField {
    pv: PVExtension,
    generators: Vec<FieldElement>,
}

impl IntermediateField {
    pub fn new(pv: &PVExtension, generators: Vec<FieldElement>) -> Result<IntermediateField, CorrError> {
        let generators = generators
            .into_iter()
            .map(|g| g.embed(pv.ext()).map_err(|_| CorrError::BadField(format!("{} is not an element of L", g.canonical()))))
            .collect::<Result<_, _>>()?;
        Ok(IntermediateField { pv: pv.clone(), generators })
    }

    pub fn parse<S: AsRef<str>>(pv: &PVExtension, generators: &[S]) -> Result<IntermediateField, CorrError> {
        let gens = generators
            .iter()
            .map(|g| pv.ext().parse(g.as_ref()).map_err(|e| CorrError::BadField(format!("{}: {e}", g.as_ref()))))
            .collect::<Result<_, _>>()?;
        IntermediateField::new(pv, gens)
    }

    pub fn base(pv: &PVExtension) -> IntermediateField {
        IntermediateField { pv: pv.clone(), generators: Vec::new() }
    }

    pub fn whole(pv: &PVExtension) -> Result<IntermediateField, CorrError> {
        let gens = pv.new_generators().iter().map(|g| pv.ext().var(g)).collect::<Result<_, _>>()?;
        Ok(IntermediateField { pv: pv.clone(), generators: gens })
    }

    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }

    pub fn canonical(&self) -> Vec<String> {
        self.generators.iter().map(FieldElement::canonical).collect()
    }

    /// `K(g1, g2, ...)`.
    pub fn describe(&self) -> String {
        if self.generators.is_empty() {
            "K".into()
        } else {
            format!("K({})", self.canonical().join(", "))
        }
    }

    pub fn contains(&self, x: &FieldElement, w: Window) -> bool {
        field_contains(&self.pv, &self.generators, x, w)
    }

    pub fn is_subfield_of(&self, other: &IntermediateField, w: Window) -> bool {
        self.generators.iter().all(|g| other.contains(g, w))
    }

    pub fn same_as(&self, other: &IntermediateField, w: Window) -> bool {
        self.is_subfield_of(other, w) && other.is_subfield_of(self, w)
    }

    /// Each generator's derivative lies in the generated field.
    pub fn derivation_closed(&self, w: Window) -> bool {
        self.generators.iter().all(|g| self.contains(&g.derive(), w))
    }
}

impl fmt::Display for IntermediateField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Products of the generators with total degree `<= w.degree`, `1` first.
fn generator_products(gens: &[FieldElement], one: FieldElement, w: Window) -> Vec<FieldElement> {
    let mut out = Vec::new();
    for exps in exponent_vectors(gens.len(), w.degree) {
        let mut p = one.clone();
        for (g, &e) in gens.iter().zip(&exps) {
            for _ in 0..e {
                p = &p * g;
            }
        }
        out.push(p);
    }
    out
}

/// Bounded membership `x ∈ K(gens)`: `x`, or `x` times one generator
/// product, lies in the `K`-span of the generator products.
fn field_contains(pv: &PVExtension, gens: &[FieldElement], x: &FieldElement, w: Window) -> bool {
    let nb = pv.base().ring().len();
    if x.uses_only_vars_below(nb) {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    let products = generator_products(gens, pv.ext().one(), w);
    if in_k_span(x, &products, w.t_window) {
        return true;
    }
    products[1..].iter().any(|q| in_k_span(&(x * q), &products, w.t_window))
}

/// Standard monomials in the new generators of degree `1..=degree`.
fn window_monomials(pv: &PVExtension, degree: u32) -> Result<Vec<FieldElement>, CorrError> {
    let ext = pv.ext();
    let nb = pv.base().ring().len();
    let nvars = ext.ring().len();
    let mut out = Vec::new();
    for exps in exponent_vectors(nvars - nb, degree) {
        if exps.iter().all(|&e| e == 0) {
            continue;
        }
        let mut m = crate::arith::Monomial::one(nvars);
        m.0[nb..].copy_from_slice(&exps);
        let p = Poly::term(ext.ring(), m, GaussRat::one());
        if ext.rewrite().normal_form(&p) != p {
            continue;
        }
        out.push(ext.from_poly(p)?);
    }
    Ok(out)
}

fn stack(blocks: &[Matrix], cols: usize) -> Matrix {
    let rows: Vec<Vec<GaussRat>> = blocks.iter().flat_map(|b| (0..b.rows()).map(move |i| b.row(i).to_vec())).collect();
    if rows.is_empty() {
        Matrix::zeros(0, cols)
    } else {
        Matrix::from_rows(rows)
    }
}

/// `L^H`, by linear algebra on the invariant conditions over the monomial
/// window. Finite lists use their elements; every other descriptor uses a
/// generic matrix `X` reduced modulo the subgroup's equations.
pub fn fixed_field(group: &GaloisGroup, h: &Subgroup, w: Window) -> Result<IntermediateField, CorrError> {
    let pv = group.pv();
    let cands = window_monomials(pv, w.degree)?;
    if cands.is_empty() {
        return Ok(IntermediateField::base(pv));
    }
    let conditions = match h.descriptor() {
        Descriptor::FiniteList(ms) => {
            let mut blocks = Vec::new();
            for m in ms {
                if *m == Matrix::identity(group.size()) {
                    continue;
                }
                let diffs = cands
                    .iter()
                    .map(|x| Ok(&group.apply_unchecked(m, x)? - &x.embed(group.g_tower())?))
                    .collect::<Result<Vec<_>, CorrError>>()?;
                blocks.push(coordinates(&diffs).1);
            }
            stack(&blocks, cands.len())
        }
        _ => {
            let ga = GenericAction::new(pv)?;
            let rs = if h.defining().is_empty() {
                ga.xt.rewrite().clone()
            } else {
                let mut gens = ga.xt.rewrite().basis();
                for p in h.defining().polys() {
                    gens.push(p.rename_into(ga.xt.ring())?);
                }
                buchberger(&gens, budget())?
            };
            let diffs = cands.iter().map(|x| Ok(&ga.apply(x)? - &x.embed(&ga.xt)?)).collect::<Result<Vec<_>, CorrError>>()?;
            coordinates_modulo(&diffs, &rs).1
        }
    };
    // a real element fixed by σ is fixed by conj(σ)
    let conditions = if pv.ext().mode() == ConstantsMode::Real {
        stack(&[conditions.clone(), conditions.conj()], cands.len())
    } else {
        conditions
    };
    let real = pv.ext().mode() == ConstantsMode::Real;
    let mut invariants = Vec::new();
    for v in conditions.kernel() {
        let mut acc = pv.ext().zero();
        for (c, x) in v.iter().zip(&cands) {
            let c = if real { GaussRat::from_rat(c.re.clone()) } else { c.clone() };
            if !c.is_zero() {
                acc = &acc + &x.scale(&c);
            }
        }
        if !acc.is_zero() {
            invariants.push(acc);
        }
    }
    let mut gens: Vec<FieldElement> = Vec::new();
    for x in invariants {
        if !field_contains(pv, &gens, &x, w) {
            gens.push(x);
        }
    }
    Ok(IntermediateField { pv: pv.clone(), generators: gens })
}

/// `DGal(L|E)`: the group's equations plus the conditions `σ_X(h) = h`
/// for every generator `h` of `E`.
pub fn group_over(group: &GaloisGroup, e: &IntermediateField) -> Result<Subgroup, CorrError> {
    let pv = group.pv();
    if e.pv.ext().ring() != pv.ext().ring() {
        return Err(CorrError::BadField("field belongs to a different extension".into()));
    }
    let ga = GenericAction::new(pv)?;
    let mut extra = Vec::new();
    for h in &e.generators {
        let v = &ga.apply(h)? - &h.embed(&ga.xt)?;
        extra.extend(ga.x_coefficients(&v));
    }
    Ok(Subgroup { descriptor: Descriptor::Computed, defining: group.defining().extended(extra) })
}

/// Round trips for each subgroup and inclusion reversal on every pair.
pub fn check_correspondence(group: &GaloisGroup, lattice: &[Subgroup], w: Window) -> Result<Report, CorrError> {
    let mut rep = Report::new("Galois correspondence");
    let mut fields = Vec::new();
    for h in lattice {
        let label = h.label();
        let e = fixed_field(group, h, w)?;
        let back = group_over(group, &e)?;
        rep.push(Check::pass_if(format!("{label}: fixed field derivation-closed"), e.derivation_closed(w), e.describe()));
        rep.push(Check::pass_if(format!("{label}: group of the fixed field is {label}"), back.same_as(h)?, back.defining().to_string()));
        let e2 = fixed_field(group, &back, w)?;
        rep.push(Check::pass_if(format!("{label}: fixed field of the recovered group"), e2.same_as(&e, w), e2.describe()));
        rep.put(&format!("fixed field of {label}"), e.describe());
        fields.push(e);
    }
    for (i, hi) in lattice.iter().enumerate() {
        for (j, hj) in lattice.iter().enumerate() {
            if i == j {
                continue;
            }
            let groups = hi.contained_in(hj)?;
            let fields_rev = fields[j].is_subfield_of(&fields[i], w);
            if groups || fields_rev {
                rep.push(Check::pass_if(
                    format!("{} ⊆ {} iff {} ⊆ {}", hi.label(), hj.label(), fields[j], fields[i]),
                    groups == fields_rev,
                    format!("groups: {groups}, fields: {fields_rev}"),
                ));
            }
        }
    }
    Ok(rep)
}

/// `P(σ⁻¹Xσ)` for `P` in the `X` ring.
fn conjugate_poly(p: &Poly, sigma: &Matrix) -> Poly {
    let n = sigma.rows();
    let r = p.ring().clone();
    let inv = sigma.inverse().expect("group members are invertible");
    let mut images = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut acc = Poly::zero(&r);
            for c in 0..n {
                for d in 0..n {
                    let coef = &inv[(a, c)] * &sigma[(d, b)];
                    if !coef.is_zero() {
                        acc = &acc + &Poly::var(&r, c * n + d).scale(&coef);
                    }
                }
            }
            images.push(acc);
        }
    }
    let mut out = Poly::zero(&r);
    for (m, c) in p.terms() {
        let mut t = Poly::constant(&r, c.clone());
        for (v, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = &t * &images[v].pow(e);
            }
        }
        out = &out + &t;
    }
    out
}

/// A solution space generating `E` and the equation it solves, for the
/// supported shapes: all of `L`, a single generator with logarithmic
/// derivative in `K`, or a finite-dimensional derivation closure over the
/// constants (replaced by its derivative when it contains a constant).
pub fn exhibit_equation(e: &IntermediateField, w: Window) -> Result<Option<(Vec<FieldElement>, LinearODE)>, CorrError> {
    let pv = &e.pv;
    let nb = pv.base().ring().len();
    if IntermediateField::whole(pv)?.is_subfield_of(e, w) {
        return Ok(Some((pv.solutions().to_vec(), pv.ode().clone())));
    }
    if e.generators.len() == 1 {
        let g = &e.generators[0];
        let q = g.derive().try_div(g)?;
        if q.uses_only_vars_below(nb) {
            let ode = LinearODE::new(pv.base(), vec![-&q.embed(pv.base())?])?;
            return Ok(Some((vec![g.clone()], ode)));
        }
    }
    let mut v: Vec<FieldElement> = Vec::new();
    for g in &e.generators {
        if express_in_span(g, &v).is_none() {
            v.push(g.clone());
        }
    }
    let mut i = 0;
    while i < v.len() {
        let d = v[i].derive();
        if express_in_span(&d, &v).is_none() {
            if v.len() >= 6 {
                return Ok(None);
            }
            v.push(d);
        }
        i += 1;
    }
    if express_in_span(&pv.ext().one(), &v).is_some() {
        let mut dv: Vec<FieldElement> = Vec::new();
        for x in &v {
            let d = x.derive();
            if !d.is_zero() && express_in_span(&d, &dv).is_none() {
                dv.push(d);
            }
        }
        v = dv;
    }
    if v.is_empty() {
        return Ok(None);
    }
    match ode_from_basis(&v, pv.base()) {
        Ok(ode) => Ok(Some((v, ode))),
        Err(PvError::Stabilization(_)) | Err(PvError::NotPV { .. }) => Ok(None),
        Err(err) => Err(err.into()),
    }
}

/// Matrix of `σ` on the span of `basis` (columns are images), if `σ`
/// preserves it.
fn restriction(group: &GaloisGroup, m: &Matrix, basis: &[FieldElement]) -> Result<Option<Matrix>, CorrError> {
    let g = group.g_tower();
    let basis_g = basis.iter().map(|b| b.embed(g)).collect::<Result<Vec<_>, _>>()?;
    let k = basis.len();
    let mut out = Matrix::zeros(k, k);
    for (col, b) in basis.iter().enumerate() {
        let img = group.apply_unchecked(m, b)?;
        match express_in_span(&img, &basis_g) {
            Some(c) => {
                for (row, x) in c.into_iter().enumerate() {
                    out[(row, col)] = x;
                }
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Conjugation stability of `H` at sampled group points and, when normal,
/// the equation exhibiting `L^H` as a Picard-Vessiot extension and the
/// restriction map on samples.
pub fn normality_check(group: &GaloisGroup, h: &Subgroup, w: Window) -> Result<Report, CorrError> {
    let label = h.label();
    let mut rep = Report::new(format!("normality of {label}"));
    let n = group.size();
    let samples: Vec<Matrix> =
        group.sample_members().into_iter().map(|s| s.matrix).filter(|m| *m != Matrix::identity(n)).take(6).collect();
    let mut normal = true;
    for s in &samples {
        for p in h.defining().polys() {
            if !radical_contains(h.defining().polys(), &conjugate_poly(p, s), budget())? {
                normal = false;
            }
        }
    }
    rep.push(Check::pass_if("conjugation-stable at sampled points", true, format!("normal: {normal}, {} samples", samples.len())));
    rep.put("normal", normal);
    if !normal {
        rep.push(Check::info("fixed field", "not a Picard-Vessiot extension of K"));
        return Ok(rep);
    }
    let e = fixed_field(group, h, w)?;
    rep.put("fixed field", e.describe());
    let Some((basis, ode)) = exhibit_equation(&e, w)? else {
        rep.push(Check::info("equation", "no equation exhibited within the supported shapes"));
        return Ok(rep);
    };
    rep.put("equation", ode.to_string());
    rep.put("solution basis", strings(&basis));
    let solves = basis.iter().map(|b| ode.apply(b).map(|r| r.is_zero())).collect::<Result<Vec<_>, _>>()?;
    rep.push(Check::pass_if("basis solves the equation", solves.iter().all(|&x| x), ""));
    rep.push(Check::pass_if("basis independent over the constants", independent_over_constants(&basis), ""));
    let span = IntermediateField { pv: group.pv().clone(), generators: basis.clone() };
    rep.push(Check::pass_if("basis generates the fixed field", span.same_as(&e, w), ""));
    // restriction to E on samples
    let mut images = Vec::new();
    let mut preserved = true;
    for s in &samples {
        match restriction(group, s, &basis)? {
            Some(r) => images.push((s.clone(), r)),
            None => preserved = false,
        }
    }
    rep.push(Check::pass_if("sampled elements restrict to the fixed field", preserved, format!("{} samples", samples.len())));
    let mut hom = true;
    for (a, ra) in images.iter().take(4) {
        for (b, rb) in images.iter().take(4) {
            match restriction(group, &a.mul(b), &basis)? {
                Some(rab) => hom &= rab == ra.mul(rb),
                None => hom = false,
            }
        }
    }
    rep.push(Check::pass_if("restriction preserves composition", hom, ""));
    let id = Matrix::identity(basis.len());
    let kernel_ok = images.iter().all(|(s, r)| (*r == id) == h.is_member(s));
    rep.push(Check::pass_if("restriction kernel is the subgroup on samples", kernel_ok, ""));
    rep.put(
        "restriction images",
        strings(&images.iter().take(4).map(|(s, r)| format!("{} ↦ {}", s.canonical(), r.canonical())).collect::<Vec<_>>()),
    );
    Ok(rep)
}

/// Counts of the real and complexified members of `DGal(L|F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MemberCount {
    Finite(usize),
    Infinite,
}

impl fmt::Display for MemberCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MemberCount::Finite(k) => write!(f, "{k}"),
            MemberCount::Infinite => f.write_str("infinite"),
        }
    }
}

/// Real automorphisms of `L` over `F` against the complexified group
/// `DGal(L|F)`. Exact root counting for groups of size one; sampled
/// otherwise.
pub fn weak_normality_demo(group: &GaloisGroup, f: &IntermediateField) -> Result<Report, CorrError> {
    let mut rep = Report::new(format!("real automorphisms of L over {}", f.describe()));
    let h = group_over(group, f)?;
    rep.put("defining set", strings(&h.defining().canonical()));
    let n = group.size();
    let (real, complex, real_members): (MemberCount, MemberCount, Vec<Matrix>) = if n == 1 {
        let rs = h.defining().groebner()?;
        match rs.basis().into_iter().find(|p| !p.is_zero()) {
            None => {
                let members: Vec<Matrix> = group.sample_members().into_iter().map(|s| s.matrix).filter(Matrix::is_real).collect();
                (MemberCount::Infinite, MemberCount::Infinite, members)
            }
            Some(p) => {
                let mut up = UniPoly::from_poly(&p, 0).ok_or_else(|| CorrError::Unsupported(format!("non-rational equation {p}")))?.squarefree();
                while !up.is_zero() && up.coeffs()[0].is_zero() {
                    up = UniPoly::new(up.coeffs()[1..].to_vec());
                }
                let members = up.rational_roots().into_iter().map(|r| Matrix::scalar(1, GaussRat::from_rat(r))).collect();
                (MemberCount::Finite(up.real_root_count()), MemberCount::Finite(up.distinct_root_count()), members)
            }
        }
    } else {
        let members: Vec<Matrix> = group.sample_members().into_iter().map(|s| s.matrix).filter(|m| m.is_real() && h.is_member(m)).collect();
        (MemberCount::Finite(members.len()), MemberCount::Infinite, members)
    };
    let id = Matrix::identity(n);
    // every listed real member fixes F and maps L into L
    let mut fixes = true;
    for m in &real_members {
        for g in f.generators() {
            fixes &= group.apply_unchecked(m, g)? == g.embed(group.g_tower())?;
        }
        for x in group.pv().new_generators() {
            fixes &= group.apply_unchecked(m, &group.pv().ext().var(&x)?)?.is_real();
        }
    }
    rep.push(Check::pass_if("listed real members fix F and preserve L", fixes, format!("{} listed", real_members.len())));
    let nontrivial = match real {
        MemberCount::Finite(k) if n == 1 => k > 1,
        _ => real_members.iter().any(|m| *m != id),
    };
    rep.push(Check::info("real automorphisms of L over F", real.to_string()));
    rep.push(Check::info("complexified group elements", complex.to_string()));
    rep.push(Check::info("weakly normal over F", if nontrivial { "yes" } else { "no" }));
    rep.put("real automorphisms", real.to_string());
    rep.put("complexified elements", complex.to_string());
    rep.put("weakly normal", nontrivial);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pv::{build_pv, BuildOptions, EquationClass};
    use crate::tower::DiffTower;

    fn pv(coeffs: &[&str], class: EquationClass) -> PVExtension {
        let k = DiffTower::rational_functions("t");
        let ode = LinearODE::parse(&k, coeffs).unwrap();
        build_pv(&k, &ode, class, &BuildOptions::default()).unwrap()
    }

    fn exp_group() -> GaloisGroup {
        GaloisGroup::new(&pv(&["-1"], EquationClass::Exp)).unwrap()
    }

    #[test]
    fn descriptor_labels_round_trip() {
        for d in [Descriptor::Full, Descriptor::Trivial, Descriptor::MuN(6), Descriptor::Diagonal, Descriptor::So2] {
            assert_eq!(Descriptor::parse(&d.label()), Some(d));
        }
        assert_eq!(Descriptor::parse("MU_N(0)"), None);
        assert_eq!(Descriptor::parse("SO3"), None);
    }

    #[test]
    fn exponential_fixed_fields() {
        let g = exp_group();
        let w = Window::default();
        let mu3 = Subgroup::from_descriptor(&g, Descriptor::MuN(3)).unwrap();
        let e = fixed_field(&g, &mu3, w).unwrap();
        assert_eq!(e.canonical(), vec!["1/1*e^3"]);
        let full = fixed_field(&g, &Subgroup::from_descriptor(&g, Descriptor::Full).unwrap(), w).unwrap();
        assert!(full.generators().is_empty());
        let triv = fixed_field(&g, &Subgroup::from_descriptor(&g, Descriptor::Trivial).unwrap(), w).unwrap();
        assert_eq!(triv.canonical(), vec!["1/1*e"]);
        let back = group_over(&g, &e).unwrap();
        assert_eq!(back.defining().canonical(), vec!["1/1*X11^3 + -1/1"]);
        assert_eq!(back.identified(&g).unwrap().descriptor(), &Descriptor::MuN(3));
    }

    #[test]
    fn exponential_lattice() {
        let g = exp_group();
        let lattice: Vec<Subgroup> = [Descriptor::Full, Descriptor::MuN(6), Descriptor::MuN(3), Descriptor::MuN(2), Descriptor::Trivial]
            .into_iter()
            .map(|d| Subgroup::from_descriptor(&g, d).unwrap())
            .collect();
        let rep = check_correspondence(&g, &lattice, Window::default()).unwrap();
        assert!(rep.all_passed(), "{}", rep.to_text());
        assert!(rep.check("MU_N(3) ⊆ MU_N(6) iff K(1/1*e^6) ⊆ K(1/1*e^3)").is_some(), "{}", rep.to_text());
    }

    #[test]
    fn circle_sign_subgroup() {
        let g = GaloisGroup::new(&pv(&["1", "0"], EquationClass::Circle)).unwrap();
        let w = Window::default();
        let pm = Subgroup::from_descriptor(&g, Descriptor::FiniteList(vec![Matrix::identity(2), Matrix::scalar(2, GaussRat::from_int(-1))])).unwrap();
        let e = fixed_field(&g, &pm, w).unwrap();
        assert_eq!(e.generators().len(), 2);
        let expected = IntermediateField::parse(g.pv(), &["s*c", "s^2"]).unwrap();
        assert!(e.same_as(&expected, w), "{}", e);
        let back = group_over(&g, &e).unwrap();
        assert!(back.same_as(&pm).unwrap());
        let so2 = Subgroup::from_descriptor(&g, Descriptor::So2).unwrap();
        assert!(fixed_field(&g, &so2, w).unwrap().generators().is_empty());
        let rep = normality_check(&g, &pm, w).unwrap();
        assert!(rep.all_passed(), "{}", rep.to_text());
        assert_eq!(rep.data["equation"], "Y'' + (4/1)*Y = 0");
    }

    #[test]
    fn mu3_normal_in_gl1() {
        let g = exp_group();
        let mu3 = Subgroup::from_descriptor(&g, Descriptor::MuN(3)).unwrap();
        let rep = normality_check(&g, &mu3, Window::default()).unwrap();
        assert!(rep.all_passed(), "{}", rep.to_text());
        assert_eq!(rep.data["equation"], "Y' + (-3/1)*Y = 0");
    }

    #[test]
    fn weak_normality_counts() {
        let g = exp_group();
        let f = IntermediateField::parse(g.pv(), &["e^3"]).unwrap();
        let rep = weak_normality_demo(&g, &f).unwrap();
        assert_eq!(rep.data["real automorphisms"], "1");
        assert_eq!(rep.data["complexified elements"], "3");
        assert_eq!(rep.data["weakly normal"], false);
        let rep = weak_normality_demo(&g, &IntermediateField::base(g.pv())).unwrap();
        assert_eq!(rep.data["weakly normal"], true);
        let rep = weak_normality_demo(&g, &IntermediateField::whole(g.pv()).unwrap()).unwrap();
        assert_eq!(rep.data["real automorphisms"], "1");
        assert_eq!(rep.data["complexified elements"], "1");
    }

    #[test]
    fn finite_list_rejects_non_members() {
        let g = GaloisGroup::new(&pv(&["1", "0"], EquationClass::Circle)).unwrap();
        let swap = Matrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert!(matches!(
            Subgroup::from_descriptor(&g, Descriptor::FiniteList(vec![swap])),
            Err(CorrError::Group(GroupError::NotInGroup(_)))
        ));
        assert!(matches!(Subgroup::from_descriptor(&exp_group(), Descriptor::So2), Err(CorrError::Unsupported(_))));
    }
}
