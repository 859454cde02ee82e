//! Differential field towers: explicit generator / derivation / relation
//! presentations over ℚ(t) (or over the constants alone), their elements,
//! conjugation and bounded constant detection.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::parse::{parse_fraction, Fraction};
use crate::arith::{buchberger, ArithError, GaussRat, Matrix, Monomial, Poly, RatFunc, RewriteSystem, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("derivation incompatible with relation of `{generator}`: derivative reduces to {residue}")]
    IncompatibleDerivation { generator: String, residue: String },
    #[error("mode error: {0}")]
    Mode(String),
    #[error("relations generate the unit ideal")]
    InconsistentRelations,
    #[error("variable `{0}` already present")]
    DuplicateVariable(String),
    #[error("elements belong to different towers")]
    TowerMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Exponential,
    Algebraic,
    Abstract,
}

impl GeneratorKind {
    pub fn label(self) -> &'static str {
        match self {
            GeneratorKind::Exponential => "EXPONENTIAL",
            GeneratorKind::Algebraic => "ALGEBRAIC",
            GeneratorKind::Abstract => "ABSTRACT",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "EXPONENTIAL" => Some(GeneratorKind::Exponential),
            "ALGEBRAIC" => Some(GeneratorKind::Algebraic),
            "ABSTRACT" => Some(GeneratorKind::Abstract),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstantsMode {
    Real,
    Complexified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub name: String,
    pub kind: GeneratorKind,
    pub derivative: RatFunc,
    pub relation: Option<Poly>,
}

/// Input for [`DiffTower::adjoin`]: expressions live in the extended ring
/// returned by [`DiffTower::extended_ring`].
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    pub name: String,
    pub kind: GeneratorKind,
    pub derivative: Fraction,
    pub relation: Option<Poly>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffTower {
    ring: Arc<Ring>,
    base_var: Option<usize>,
    constant_vars: Vec<usize>,
    generators: Vec<Generator>,
    derivations: Vec<RatFunc>,
    rewrite: RewriteSystem,
    mode: ConstantsMode,
}

impl DiffTower {
    /// `ℚ(t)` with `t' = 1`.
    pub fn rational_functions(var: &str) -> Arc<DiffTower> {
        let ring = Ring::new(&[var]);
        let rewrite = RewriteSystem::empty(&ring);
        Arc::new(DiffTower {
            derivations: vec![RatFunc::constant(&ring, GaussRat::one())],
            ring,
            base_var: Some(0),
            constant_vars: Vec::new(),
            generators: Vec::new(),
            rewrite,
            mode: ConstantsMode::Real,
        })
    }

    /// The constants alone, trivial derivation.
    pub fn constants() -> Arc<DiffTower> {
        let ring = Ring::new::<&str>(&[]);
        let rewrite = RewriteSystem::empty(&ring);
        Arc::new(DiffTower {
            ring,
            base_var: None,
            constant_vars: Vec::new(),
            generators: Vec::new(),
            derivations: Vec::new(),
            rewrite,
            mode: ConstantsMode::Real,
        })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rewrite(&self) -> &RewriteSystem {
        &self.rewrite
    }

    pub fn mode(&self) -> ConstantsMode {
        self.mode
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn base_var(&self) -> Option<usize> {
        self.base_var
    }

    pub fn base_var_name(&self) -> Option<&str> {
        self.base_var.map(|i| self.ring.names()[i].as_str())
    }

    pub fn constant_vars(&self) -> &[usize] {
        &self.constant_vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.ring.index_of(name)
    }

    /// Ring indices of the tower generators, in adjunction order.
    pub fn generator_vars(&self) -> Vec<usize> {
        self.generators.iter().map(|g| self.ring.index_of(&g.name).expect("generator in ring")).collect()
    }

    /// Derivative of ring variable `idx`.
    pub fn derivation_of(&self, idx: usize) -> &RatFunc {
        &self.derivations[idx]
    }

    pub fn relations(&self) -> Vec<Poly> {
        self.generators.iter().filter_map(|g| g.relation.clone()).collect()
    }

    /// The current ring with `names` appended as new, larger variables.
    pub fn extended_ring<S: AsRef<str>>(&self, names: &[S]) -> Result<Arc<Ring>, TowerError> {
        for n in names {
            if self.ring.index_of(n.as_ref()).is_some() || n.as_ref() == "i" {
                return Err(TowerError::DuplicateVariable(n.as_ref().to_string()));
            }
        }
        Ok(self.ring.extended(names))
    }

    /// Adjoins a group of generators at once (their derivatives may refer to
    /// each other). The rewrite system is recomputed and every relation's
    /// derivative must reduce to zero.
    pub fn adjoin(self: &Arc<Self>, specs: Vec<GeneratorSpec>) -> Result<Arc<DiffTower>, TowerError> {
        let names: Vec<&str> = specs.iter().map(|s| s.name.as_str()).collect();
        let ring = self.extended_ring(&names)?;
        for s in &specs {
            if s.derivative.num.ring() != &ring || s.relation.as_ref().is_some_and(|r| r.ring() != &ring) {
                return Err(ArithError::ContextMismatch.into());
            }
        }
        let old_map: Vec<usize> = (0..self.ring.len()).collect();
        let mut relations: Vec<Poly> = self.relations().iter().map(|r| r.remap(&ring, &old_map)).collect();
        relations.extend(specs.iter().filter_map(|s| s.relation.clone()));
        let rewrite = if relations.is_empty() {
            RewriteSystem::empty(&ring)
        } else {
            buchberger(&relations, crate::arith::budget())?
        };
        if rewrite.is_unit_ideal() {
            return Err(TowerError::InconsistentRelations);
        }
        let mut derivations: Vec<RatFunc> = self
            .derivations
            .iter()
            .map(|d| RatFunc::new(d.num().remap(&ring, &old_map), d.den().remap(&ring, &old_map), &rewrite))
            .collect::<Result<_, _>>()?;
        let mut generators: Vec<Generator> = self
            .generators
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                kind: g.kind,
                derivative: derivations[self.ring.index_of(&g.name).unwrap()].clone(),
                relation: g.relation.as_ref().map(|r| r.remap(&ring, &old_map)),
            })
            .collect();
        for s in specs {
            let d = RatFunc::new(s.derivative.num, s.derivative.den, &rewrite)?;
            derivations.push(d.clone());
            generators.push(Generator { name: s.name, kind: s.kind, derivative: d, relation: s.relation });
        }
        let tower = Arc::new(DiffTower {
            ring,
            base_var: self.base_var,
            constant_vars: self.constant_vars.clone(),
            generators,
            derivations,
            rewrite,
            mode: self.mode,
        });
        if tower.mode == ConstantsMode::Real {
            let complex = tower.derivations.iter().any(|d| !d.is_real())
                || tower.relations().iter().any(|r| !r.is_real());
            if complex {
                return Err(TowerError::Mode("real tower with non-real derivation or relation data".into()));
            }
        }
        for g in &tower.generators {
            if let Some(r) = &g.relation {
                let dr = tower.derive_poly(r);
                if !dr.is_zero() {
                    return Err(TowerError::IncompatibleDerivation {
                        generator: g.name.clone(),
                        residue: dr.canonical(),
                    });
                }
            }
        }
        Ok(tower)
    }

    /// Adjoins generators given as text in the extended ring:
    /// `(name, kind, derivative, relation)`.
    pub fn adjoin_text(
        self: &Arc<Self>,
        gens: &[(&str, GeneratorKind, &str, Option<&str>)],
    ) -> Result<Arc<DiffTower>, TowerError> {
        let names: Vec<&str> = gens.iter().map(|g| g.0).collect();
        let ring = self.extended_ring(&names)?;
        let mut specs = Vec::with_capacity(gens.len());
        for (name, kind, der, rel) in gens {
            let derivative = parse_fraction(&ring, der)?;
            let relation = match rel {
                Some(r) => Some(crate::arith::parse_poly(&ring, r)?),
                None => None,
            };
            specs.push(GeneratorSpec { name: name.to_string(), kind: *kind, derivative, relation });
        }
        self.adjoin(specs)
    }

    /// New generator `name` with `name' = f·name` and no relation.
    pub fn adjoin_exponential(self: &Arc<Self>, name: &str, f: &FieldElement) -> Result<Arc<DiffTower>, TowerError> {
        self.check_owner(f)?;
        let ring = self.extended_ring(&[name])?;
        let v = Poly::var(&ring, ring.len() - 1);
        let map: Vec<usize> = (0..self.ring.len()).collect();
        let derivative = Fraction { num: &f.value.num().remap(&ring, &map) * &v, den: f.value.den().remap(&ring, &map) };
        self.adjoin(vec![GeneratorSpec { name: name.into(), kind: GeneratorKind::Exponential, derivative, relation: None }])
    }

    /// New algebraic generator with minimal relation `minpoly` and declared
    /// derivative, both as text in the extended ring.
    pub fn adjoin_algebraic(
        self: &Arc<Self>,
        name: &str,
        minpoly: &str,
        derivative: &str,
    ) -> Result<Arc<DiffTower>, TowerError> {
        self.adjoin_text(&[(name, GeneratorKind::Algebraic, derivative, Some(minpoly))])
    }

    /// Inserts derivative-zero variables below every existing variable
    /// (used for matrix indeterminates).
    pub fn with_constant_vars<S: AsRef<str>>(self: &Arc<Self>, names: &[S]) -> Result<Arc<DiffTower>, TowerError> {
        for n in names {
            if self.ring.index_of(n.as_ref()).is_some() {
                return Err(TowerError::DuplicateVariable(n.as_ref().to_string()));
            }
        }
        let k = names.len();
        let ring = self.ring.prepended(names);
        let map: Vec<usize> = (0..self.ring.len()).map(|i| i + k).collect();
        let mut derivations: Vec<RatFunc> = (0..k).map(|_| RatFunc::zero(&ring)).collect();
        derivations.extend(self.derivations.iter().map(|d| d.remap(&ring, &map)));
        let generators = self
            .generators
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                kind: g.kind,
                derivative: g.derivative.remap(&ring, &map),
                relation: g.relation.as_ref().map(|r| r.remap(&ring, &map)),
            })
            .collect();
        let mut constant_vars: Vec<usize> = (0..k).collect();
        constant_vars.extend(self.constant_vars.iter().map(|i| i + k));
        Ok(Arc::new(DiffTower {
            rewrite: self.rewrite.remap(&ring, &map),
            ring,
            base_var: self.base_var.map(|i| i + k),
            constant_vars,
            generators,
            derivations,
            mode: self.mode,
        }))
    }

    fn check_owner(&self, x: &FieldElement) -> Result<(), TowerError> {
        if x.tower.ring == self.ring {
            Ok(())
        } else {
            Err(TowerError::TowerMismatch)
        }
    }

    /// Derivation of a ring polynomial, as a normalized fraction.
    pub fn derive_poly(&self, p: &Poly) -> RatFunc {
        let mut acc = RatFunc::zero(&self.ring);
        for v in p.support_vars() {
            let d = &self.derivations[v];
            if d.is_zero() {
                continue;
            }
            let part = RatFunc::new(&p.partial(v) * d.num(), d.den().clone(), &self.rewrite)
                .expect("derivation denominators are nonzero");
            acc = acc.add(&part, &self.rewrite);
        }
        acc
    }

    pub fn element(self: &Arc<Self>, value: RatFunc) -> Result<FieldElement, TowerError> {
        if value.ring() != &self.ring {
            return Err(ArithError::ContextMismatch.into());
        }
        if self.mode == ConstantsMode::Real && !value.is_real() {
            return Err(TowerError::Mode(format!("non-real element {} in a real tower", value.canonical())));
        }
        let value = RatFunc::new(value.num().clone(), value.den().clone(), &self.rewrite)?;
        Ok(FieldElement { tower: self.clone(), value })
    }

    pub fn from_poly(self: &Arc<Self>, p: Poly) -> Result<FieldElement, TowerError> {
        let den = Poly::one(&self.ring);
        self.element(RatFunc::raw(p, den))
    }

    /// Reads an element from text.
    pub fn parse(self: &Arc<Self>, text: &str) -> Result<FieldElement, TowerError> {
        let f = parse_fraction(&self.ring, text)?;
        self.element(RatFunc::new(f.num, f.den, &self.rewrite)?)
    }

    pub fn var(self: &Arc<Self>, name: &str) -> Result<FieldElement, TowerError> {
        let idx = self.ring.index_of(name).ok_or_else(|| ArithError::UnknownVariable(name.to_string()))?;
        self.from_poly(Poly::var(&self.ring, idx))
    }

    pub fn constant(self: &Arc<Self>, c: GaussRat) -> Result<FieldElement, TowerError> {
        self.element(RatFunc::constant(&self.ring, c))
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement { tower: self.clone(), value: RatFunc::zero(&self.ring) }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        FieldElement { tower: self.clone(), value: RatFunc::constant(&self.ring, GaussRat::one()) }
    }

    /// The imaginary unit; only available once complexified.
    pub fn imaginary_unit(self: &Arc<Self>) -> Result<FieldElement, TowerError> {
        if self.mode != ConstantsMode::Complexified {
            return Err(TowerError::Mode("i is not an element of a real tower".into()));
        }
        self.constant(GaussRat::i())
    }

    /// Human-readable presentation, one line per fact.
    pub fn describe(&self) -> Vec<String> {
        let mut out = Vec::new();
        out.push(format!(
            "mode: {}",
            match self.mode {
                ConstantsMode::Real => "REAL",
                ConstantsMode::Complexified => "COMPLEXIFIED",
            }
        ));
        if let Some(t) = self.base_var {
            out.push(format!("{}' = {}", self.ring.names()[t], self.derivations[t].canonical()));
        }
        for g in &self.generators {
            out.push(format!("{}' = {}  [{}]", g.name, g.derivative.canonical(), g.kind.label()));
        }
        for rule in self.rewrite.rules() {
            out.push(format!("relation: {} = 0", rule.as_poly().canonical()));
        }
        out
    }
}

/// `F = K(i)`: the same presentation with conjugation available.
pub fn complexify(tower: &Arc<DiffTower>) -> Result<Arc<DiffTower>, TowerError> {
    if tower.mode != ConstantsMode::Real {
        return Err(TowerError::Mode("complexify expects a REAL tower".into()));
    }
    let mut t = (**tower).clone();
    t.mode = ConstantsMode::Complexified;
    Ok(Arc::new(t))
}

/// The conjugation-fixed part: back to the REAL tower.
pub fn real_part(tower: &Arc<DiffTower>) -> Result<Arc<DiffTower>, TowerError> {
    if tower.mode != ConstantsMode::Complexified {
        return Err(TowerError::Mode("real_part expects a COMPLEXIFIED tower".into()));
    }
    let mut t = (**tower).clone();
    t.mode = ConstantsMode::Real;
    Ok(Arc::new(t))
}

/// Element of a tower's fraction field.
#[derive(Clone, Debug)]
pub struct FieldElement {
    tower: Arc<DiffTower>,
    value: RatFunc,
}

impl FieldElement {
    pub fn tower(&self) -> &Arc<DiffTower> {
        &self.tower
    }

    pub fn value(&self) -> &RatFunc {
        &self.value
    }

    pub fn num(&self) -> &Poly {
        self.value.num()
    }

    pub fn den(&self) -> &Poly {
        self.value.den()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn same(&self, o: &FieldElement) {
        assert!(
            Arc::ptr_eq(&self.tower, &o.tower) || self.tower.ring == o.tower.ring,
            "field elements from different towers"
        );
    }

    fn wrap(&self, value: RatFunc) -> FieldElement {
        FieldElement { tower: self.tower.clone(), value }
    }

    pub fn try_div(&self, o: &FieldElement) -> Result<FieldElement, TowerError> {
        self.same(o);
        Ok(self.wrap(self.value.div(&o.value, &self.tower.rewrite)?))
    }

    pub fn inv(&self) -> Result<FieldElement, TowerError> {
        Ok(self.wrap(self.value.inv(&self.tower.rewrite)?))
    }

    pub fn pow(&self, e: i32) -> Result<FieldElement, TowerError> {
        Ok(self.wrap(self.value.pow(e, &self.tower.rewrite)?))
    }

    pub fn scale(&self, c: &GaussRat) -> FieldElement {
        if self.tower.mode == ConstantsMode::Real {
            assert!(c.is_real(), "non-real scalar on a real tower element");
        }
        self.wrap(self.value.scale(c))
    }

    /// The derivation.
    pub fn derive(&self) -> FieldElement {
        let t = &self.tower;
        let rs = &t.rewrite;
        let n = RatFunc::from_poly(self.value.num().clone(), rs);
        let d = RatFunc::from_poly(self.value.den().clone(), rs);
        let dn = t.derive_poly(self.value.num());
        if self.value.is_polynomial() {
            return self.wrap(dn);
        }
        let dd = t.derive_poly(self.value.den());
        let top = dn.mul(&d, rs).sub(&n.mul(&dd, rs), rs);
        let bottom = d.mul(&d, rs);
        self.wrap(top.div(&bottom, rs).expect("nonzero denominator"))
    }

    /// `k`-th derivative.
    pub fn derive_n(&self, k: usize) -> FieldElement {
        (0..k).fold(self.clone(), |x, _| x.derive())
    }

    pub fn is_constant(&self) -> bool {
        self.derive().is_zero()
    }

    /// Rational constant value, if the element is one.
    pub fn constant_value(&self) -> Option<GaussRat> {
        let n = self.value.num().constant_value()?;
        let d = self.value.den().constant_value()?;
        Some(&n / &d)
    }

    /// Coefficient conjugation (identity on generators and `t`).
    pub fn conj(&self) -> FieldElement {
        self.wrap(self.value.conj())
    }

    /// `(x + conj x) / 2`.
    pub fn re(&self) -> FieldElement {
        (self + &self.conj()).scale(&GaussRat::frac(1, 2))
    }

    /// `(x - conj x) / (2i)`.
    pub fn im(&self) -> FieldElement {
        let half_i_inv = GaussRat::new(num_rational::BigRational::zero(), crate::arith::rat(-1, 2));
        let d = self - &self.conj();
        FieldElement { tower: self.tower.clone(), value: d.value.scale(&half_i_inv) }
    }

    pub fn is_real(&self) -> bool {
        self.value.is_real()
    }

    /// Re-expresses the element in another tower by matching variable names.
    pub fn embed(&self, target: &Arc<DiffTower>) -> Result<FieldElement, TowerError> {
        let num = self.value.num().rename_into(&target.ring)?;
        let den = self.value.den().rename_into(&target.ring)?;
        target.element(RatFunc::new(num, den, &target.rewrite)?)
    }

    /// Whether the normal form only involves ring variables with index
    /// below `n` (e.g. only base variables).
    pub fn uses_only_vars_below(&self, n: usize) -> bool {
        self.value.num().support_vars().iter().chain(self.value.den().support_vars().iter()).all(|&v| v < n)
    }

    /// Substitutes ring variable `k` by `images[k]` (all in one target tower).
    pub fn substitute(&self, images: &[FieldElement]) -> Result<FieldElement, TowerError> {
        let target = images.first().map(|x| x.tower.clone()).ok_or(ArithError::EmptyInput)?;
        let mut cache = PowerCache::default();
        let n = substitute_poly(self.value.num(), images, &target, &mut cache);
        let d = substitute_poly(self.value.den(), images, &target, &mut cache);
        n.try_div(&d)
    }

    pub fn canonical(&self) -> String {
        self.value.canonical()
    }
}

/// Memoized powers of substitution images.
#[derive(Default)]
pub struct PowerCache {
    powers: HashMap<(usize, u32), FieldElement>,
}

impl PowerCache {
    fn power(&mut self, var: usize, e: u32, base: &FieldElement) -> FieldElement {
        if let Some(v) = self.powers.get(&(var, e)) {
            return v.clone();
        }
        let v = if e == 1 { base.clone() } else { &self.power(var, e - 1, base) * base };
        self.powers.insert((var, e), v.clone());
        v
    }
}

/// Evaluates a polynomial at field elements: variable `k` ↦ `images[k]`.
pub fn substitute_poly(p: &Poly, images: &[FieldElement], target: &Arc<DiffTower>, cache: &mut PowerCache) -> FieldElement {
    let mut acc = target.zero();
    for (m, c) in p.terms() {
        let mut term = target.one();
        for (k, &e) in m.0.iter().enumerate() {
            if e > 0 {
                term = &term * &cache.power(k, e, &images[k]);
            }
        }
        acc = &acc + &FieldElement { tower: target.clone(), value: term.value.scale(c) };
    }
    acc
}

impl PartialEq for FieldElement {
    /// Equality in the field: cross-multiplied difference reduces to zero.
    fn eq(&self, o: &Self) -> bool {
        self.tower.ring == o.tower.ring && self.value.equals(&o.value, &self.tower.rewrite)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        self.same(o);
        self.wrap(self.value.add(&o.value, &self.tower.rewrite))
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        self.same(o);
        self.wrap(self.value.sub(&o.value, &self.tower.rewrite))
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        self.same(o);
        self.wrap(self.value.mul(&o.value, &self.tower.rewrite))
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.wrap(self.value.neg())
    }
}

/// Coordinates of elements over the constants.
///
/// Brings every element to one common denominator (the product of the
/// distinct denominators) and reads off numerator coefficients in the
/// standard monomial basis. Column `k` of the matrix belongs to
/// `elements[k]`; rows follow the returned monomials. A constant linear
/// combination of the elements vanishes iff the same combination of the
/// columns does.
pub fn coordinates(elements: &[FieldElement]) -> (Vec<Monomial>, Matrix) {
    let Some(first) = elements.first() else { return (Vec::new(), Matrix::zeros(0, 0)) };
    coordinates_modulo(elements, &first.tower.rewrite.clone())
}

/// As [`coordinates`], reducing the common-denominator numerators by `rs`
/// instead of the tower's own rewrite system (`rs` must live in the same
/// ring and contain the tower relations).
pub fn coordinates_modulo(elements: &[FieldElement], rs: &RewriteSystem) -> (Vec<Monomial>, Matrix) {
    let mut dens: Vec<Poly> = Vec::new();
    for e in elements {
        if !dens.contains(e.den()) {
            dens.push(e.den().clone());
        }
    }
    let numerators: Vec<Poly> = elements
        .iter()
        .map(|e| {
            let mut n = e.num().clone();
            for d in &dens {
                if d != e.den() {
                    n = &n * d;
                }
            }
            rs.normal_form(&n)
        })
        .collect();
    let mut monos: Vec<Monomial> = numerators.iter().flat_map(|n| n.terms().keys().cloned()).collect();
    monos.sort();
    monos.dedup();
    monos.reverse();
    let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = Matrix::zeros(monos.len(), elements.len());
    for (k, n) in numerators.iter().enumerate() {
        for (m, c) in n.terms() {
            mat[(index[m], k)] = c.clone();
        }
    }
    (monos, mat)
}

/// Constant coefficients `a` with `target = Σ a_k basis_k`, if they exist.
pub fn express_in_span(target: &FieldElement, basis: &[FieldElement]) -> Option<Vec<GaussRat>> {
    if basis.is_empty() {
        return target.is_zero().then(Vec::new);
    }
    let mut all = basis.to_vec();
    all.push(target.clone());
    let (_, mat) = coordinates(&all);
    let n = basis.len();
    let mut a = Matrix::zeros(mat.rows(), n);
    let mut b = Vec::with_capacity(mat.rows());
    for i in 0..mat.rows() {
        for j in 0..n {
            a[(i, j)] = mat[(i, j)].clone();
        }
        b.push(mat[(i, n)].clone());
    }
    a.solve(&b)
}

/// Whether `target` is a `K`-linear combination of `basis`, allowing
/// polynomial coefficients in the base variable of degree at most
/// `t_window` (a common denominator of that degree is allowed too).
pub fn in_k_span(target: &FieldElement, basis: &[FieldElement], t_window: u32) -> bool {
    let tower = target.tower.clone();
    let t_pows: Vec<FieldElement> = match tower.base_var {
        Some(t) => (0..=t_window).map(|j| tower.from_poly(Poly::var(&tower.ring, t).pow(j)).unwrap()).collect(),
        None => vec![tower.one()],
    };
    // unknowns: b_j (multipliers of target) then a_{k,j}
    let mut cols: Vec<FieldElement> = t_pows.iter().map(|p| p * target).collect();
    let nb = cols.len();
    for x in basis {
        for p in &t_pows {
            cols.push(p * x);
        }
    }
    let (_, mat) = coordinates(&cols);
    mat.kernel().iter().any(|v| v[..nb].iter().any(|c| !c.is_zero()))
}

/// Bounded search for new constants.
///
/// Scans the span of `1` and the standard monomials in the tower generators
/// of total degree `<= degree_bound`, multiplied by `t^j` with
/// `|j| <= coeff_degree_bound`, and returns a basis of the constants in that
/// span modulo ℚ(i). An empty result certifies that the scanned subspace
/// holds no constants beyond the rational ones.
pub fn constant_scan(tower: &Arc<DiffTower>, degree_bound: u32, coeff_degree_bound: u32) -> Vec<FieldElement> {
    let mut candidates = vec![tower.one()];
    candidates.extend(scan_candidates(tower, degree_bound, coeff_degree_bound));
    // drop candidates that are constant combinations of earlier ones
    let (_, coords) = coordinates(&candidates);
    let basis: Vec<FieldElement> = coords.clone().rref().into_iter().map(|c| candidates[c].clone()).collect();
    let derivs: Vec<FieldElement> = basis.iter().map(FieldElement::derive).collect();
    let (_, mat) = coordinates(&derivs);
    let mut out = Vec::new();
    for v in mat.kernel() {
        if v[1..].iter().all(Zero::is_zero) {
            continue;
        }
        let mut acc = tower.zero();
        for (c, x) in v.iter().zip(&basis).skip(1) {
            if !c.is_zero() {
                acc = &acc + &x.scale(c);
            }
        }
        out.push(acc);
    }
    out
}

/// The spanning set used by [`constant_scan`]: standard generator monomials
/// times `t^j` for `|j| <= coeff_degree_bound`.
pub fn scan_candidates(tower: &Arc<DiffTower>, degree_bound: u32, coeff_degree_bound: u32) -> Vec<FieldElement> {
    let gens = tower.generator_vars();
    let nvars = tower.ring.len();
    let t_max = if tower.base_var.is_some() { coeff_degree_bound as i32 } else { 0 };
    let mut out = Vec::new();
    for exps in exponent_vectors(gens.len(), degree_bound) {
        let mut m = Monomial::one(nvars);
        for (k, &v) in gens.iter().enumerate() {
            m.0[v] = exps[k];
        }
        let p = Poly::term(&tower.ring, m.clone(), GaussRat::one());
        if tower.rewrite.normal_form(&p) != p {
            continue;
        }
        let x = tower.from_poly(p).expect("standard monomial");
        for j in -t_max..=t_max {
            if m.is_one() && j == 0 {
                continue;
            }
            match tower.base_var {
                Some(t) if j != 0 => {
                    let tj = tower.from_poly(Poly::var(&tower.ring, t)).unwrap().pow(j).unwrap();
                    out.push(&x * &tj);
                }
                _ => out.push(x.clone()),
            }
        }
    }
    out
}

/// All exponent vectors of length `n` with total degree `<= d`.
pub fn exponent_vectors(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sincos() -> Arc<DiffTower> {
        DiffTower::rational_functions("t")
            .adjoin_text(&[
                ("c", GeneratorKind::Algebraic, "-s", None),
                ("s", GeneratorKind::Algebraic, "c", Some("s^2 + c^2 - 1")),
            ])
            .unwrap()
    }

    #[test]
    fn base_derivation() {
        let k = DiffTower::rational_functions("t");
        let t = k.var("t").unwrap();
        assert_eq!(t.derive(), k.one());
        assert!(!t.is_constant());
    }

    #[test]
    fn sin_cos_derivatives() {
        let l = sincos();
        let s = l.var("s").unwrap();
        let c = l.var("c").unwrap();
        assert_eq!(s.derive(), c);
        assert_eq!(c.derive(), -&s);
        let q = &(&s * &s) + &(&c * &c);
        assert!(q.derive().is_zero());
        assert!(q.is_constant());
        assert_eq!(q, l.one());
    }

    #[test]
    fn seidenberg_quadric_is_constant() {
        let k = DiffTower::constants()
            .adjoin_text(&[
                ("a", GeneratorKind::Abstract, "b", None),
                ("b", GeneratorKind::Abstract, "-4*a", Some("4*a^2 + b^2 + 1")),
            ])
            .unwrap();
        let q = k.parse("4*a^2 + b^2").unwrap();
        assert!(q.is_constant());
        assert!(!k.var("a").unwrap().is_constant());
    }

    #[test]
    fn exponential_adjunction() {
        let k = DiffTower::rational_functions("t");
        let l = k.adjoin_exponential("e", &k.one()).unwrap();
        let e = l.var("e").unwrap();
        assert_eq!(e.derive(), e);
        let f = k.constant(GaussRat::from_int(3)).unwrap();
        let l3 = k.adjoin_exponential("E", &f).unwrap();
        let big_e = l3.var("E").unwrap();
        assert_eq!(big_e.derive(), big_e.scale(&GaussRat::from_int(3)));
        assert!(l.rewrite().rules().is_empty());

        let c = DiffTower::constants();
        let lc = c.adjoin_exponential("e", &c.zero()).unwrap();
        assert!(lc.var("e").unwrap().is_constant());
    }

    #[test]
    fn algebraic_adjunction_checks_compatibility() {
        let k = DiffTower::rational_functions("t");
        let l = k.adjoin_algebraic("g", "g^2 - t", "g/(2*t)").unwrap();
        let g = l.var("g").unwrap();
        assert_eq!(&g * &g, l.var("t").unwrap());
        let bad = k.adjoin_algebraic("g", "g^2 - t", "1");
        assert!(matches!(bad, Err(TowerError::IncompatibleDerivation { .. })));
        assert!(sincos().generators().len() == 2);
    }

    #[test]
    fn scan_examples() {
        assert!(constant_scan(&sincos(), 2, 0).is_empty());
        let free = DiffTower::rational_functions("t")
            .adjoin_text(&[("y1", GeneratorKind::Abstract, "y2", None), ("y2", GeneratorKind::Abstract, "-y1", None)])
            .unwrap();
        let found = constant_scan(&free, 2, 0);
        assert_eq!(found.len(), 1);
        let target = free.parse("y1^2 + y2^2").unwrap();
        assert!(express_in_span(&target, &found).is_some());
        assert!(constant_scan(&DiffTower::rational_functions("t"), 3, 3).is_empty());
    }

    #[test]
    fn complexify_round_trip() {
        let k = DiffTower::rational_functions("t");
        let f = complexify(&k).unwrap();
        let it = f.parse("i*t").unwrap();
        assert_eq!(it.conj(), f.parse("-i*t").unwrap());
        assert_eq!(real_part(&f).unwrap(), k);
        assert!(matches!(complexify(&f), Err(TowerError::Mode(_))));
        assert!(matches!(real_part(&k), Err(TowerError::Mode(_))));
        assert!(matches!(k.parse("i*t"), Err(TowerError::Mode(_))));
    }

    #[test]
    fn real_and_imaginary_parts() {
        let f = complexify(&sincos()).unwrap();
        let z = f.parse("c + i*s").unwrap();
        assert_eq!(z.re(), f.var("c").unwrap());
        assert_eq!(z.im(), f.var("s").unwrap());
    }

    #[test]
    fn k_span_with_t_coefficients() {
        let l = DiffTower::rational_functions("t").adjoin_algebraic("g", "g^2 - t", "g/(2*t)").unwrap();
        let g = l.var("g").unwrap();
        assert!(in_k_span(&g.derive(), std::slice::from_ref(&g), 2));
        assert!(!in_k_span(&g, &[l.one()], 2));
    }
}
