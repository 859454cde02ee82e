//! Differential Galois groups as matrix groups cut out by a polynomial set
//! `S` in the entries `X_ij`, with substitution-based action on the
//! extension.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::arith::{buchberger, ArithError, GaussRat, Matrix, Monomial, Poly, RewriteSystem, Ring};
use crate::pv::{parse_z, z_name, PVExtension, PvError};
use crate::tower::{complexify, substitute_poly, ConstantsMode, DiffTower, FieldElement, PowerCache, TowerError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Pv(#[from] PvError),
    #[error("relation {generator} does not vanish at the solutions (leaves {residue})")]
    BadIdeal { generator: String, residue: String },
    #[error("matrix {0} is not in the group")]
    NotInGroup(String),
    #[error("no moving group element found in the sample family")]
    WitnessNotFound,
}

impl From<ArithError> for GroupError {
    fn from(e: ArithError) -> Self {
        GroupError::Tower(e.into())
    }
}

/// Generators of the relation ideal `Γ`, polynomials in the solution
/// variables over the base.
#[derive(Debug, Clone)]
pub struct RelationIdeal {
    pub tower: Arc<DiffTower>,
    pub generators: Vec<Poly>,
}

impl RelationIdeal {
    pub fn canonical(&self) -> Vec<String> {
        self.generators.iter().map(Poly::canonical).collect()
    }
}

/// Names `X11, X12, ...` (row-major) of the matrix indeterminates.
pub fn x_names(n: usize) -> Vec<String> {
    (1..=n).flat_map(|i| (1..=n).map(move |j| format!("X{i}{j}"))).collect()
}

pub fn x_ring(n: usize) -> Arc<Ring> {
    Ring::new(&x_names(n))
}

/// Point of the `X` ring for a matrix, row-major.
fn point(m: &Matrix) -> Vec<GaussRat> {
    m.entries().to_vec()
}

/// The polynomial set `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct DefiningSet {
    n: usize,
    ring: Arc<Ring>,
    polys: Vec<Poly>,
}

impl DefiningSet {
    /// Deduplicated up to scalar multiples and sorted by canonical text.
    pub fn new(n: usize, polys: Vec<Poly>) -> DefiningSet {
        let ring = x_ring(n);
        let mut seen = BTreeSet::new();
        let mut out: Vec<(String, Poly)> = Vec::new();
        for p in polys {
            if p.is_zero() {
                continue;
            }
            let p = p.rename_into(&ring).expect("polynomial in X variables").monic();
            let key = p.canonical();
            if seen.insert(key.clone()) {
                out.push((key, p));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        DefiningSet { n, ring, polys: out.into_iter().map(|(_, p)| p).collect() }
    }

    pub fn parse<S: AsRef<str>>(n: usize, polys: &[S]) -> Result<DefiningSet, ArithError> {
        let ring = x_ring(n);
        let ps = polys.iter().map(|p| crate::arith::parse_poly(&ring, p.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Ok(DefiningSet::new(n, ps))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn canonical(&self) -> Vec<String> {
        self.polys.iter().map(Poly::canonical).collect()
    }

    pub fn is_real(&self) -> bool {
        self.polys.iter().all(Poly::is_real)
    }

    pub fn extended(&self, extra: Vec<Poly>) -> DefiningSet {
        let mut all = self.polys.clone();
        all.extend(extra);
        DefiningSet::new(self.n, all)
    }

    pub fn groebner(&self) -> Result<RewriteSystem, ArithError> {
        if self.polys.is_empty() {
            return Ok(RewriteSystem::empty(&self.ring));
        }
        buchberger(&self.polys, crate::arith::budget())
    }

    /// Invertible and every polynomial vanishes.
    pub fn is_member(&self, m: &Matrix) -> bool {
        if m.rows() != self.n || m.cols() != self.n || m.det().is_zero() {
            return false;
        }
        let pt = point(m);
        self.polys.iter().all(|p| p.eval(&pt).is_zero())
    }
}

impl fmt::Display for DefiningSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.canonical().join(", "))
    }
}

pub fn is_member(m: &Matrix, s: &DefiningSet) -> bool {
    s.is_member(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub matrix: Matrix,
}

impl GroupElement {
    pub fn new(matrix: Matrix) -> Self {
        GroupElement { matrix }
    }

    pub fn identity(n: usize) -> Self {
        GroupElement { matrix: Matrix::identity(n) }
    }

    pub fn scalar(n: usize, c: GaussRat) -> Self {
        GroupElement { matrix: Matrix::scalar(n, c) }
    }

    pub fn is_real(&self) -> bool {
        self.matrix.is_real()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.matrix.canonical())
    }
}

fn numerator_monic(x: &FieldElement) -> Poly {
    x.num().monic()
}

/// The class relations: the equation for each `Z_j`, plus derivative,
/// algebraic and consistency relations of the tower generators written in
/// the solution variables. Each is checked to vanish at `η`.
pub fn relations_ideal(pv: &PVExtension) -> Result<RelationIdeal, GroupError> {
    let zt = pv.solution_variables().clone();
    let ext = pv.ext().clone();
    let n = pv.order();
    let mut gens: Vec<Poly> = Vec::new();
    let mut push = |p: Poly| {
        if !p.is_zero() && !gens.contains(&p) {
            gens.push(p);
        }
    };
    for j in 1..=n {
        let mut rel = zt.var(&z_name(j, n))?;
        for (k, a) in pv.ode().coeffs().iter().enumerate() {
            rel = &rel + &(&a.embed(&zt)? * &zt.var(&z_name(j, k))?);
        }
        push(numerator_monic(&rel));
    }
    // ext variable images in the solution-variable tower
    let images: Vec<FieldElement> = ext
        .ring()
        .names()
        .iter()
        .map(|name| match pv.gen_exprs().iter().find(|(g, _)| g == name) {
            Some((_, e)) => Ok(e.clone()),
            None => zt.var(name),
        })
        .collect::<Result<_, TowerError>>()?;
    for (name, e) in pv.gen_exprs() {
        let idx = ext.var_index(name).ok_or_else(|| ArithError::UnknownVariable(name.clone()))?;
        let d = ext.element(ext.derivation_of(idx).clone())?;
        let rel = &e.derive() - &d.substitute(&images)?;
        push(numerator_monic(&rel));
    }
    let mut cache = PowerCache::default();
    for r in ext.relations() {
        let rel = substitute_poly(&r, &images, &zt, &mut cache);
        push(numerator_monic(&rel));
    }
    for (j, eta) in pv.solutions().iter().enumerate() {
        let rel = &zt.var(&z_name(j + 1, 0))? - &eta.substitute(&images)?;
        push(numerator_monic(&rel));
    }
    let ideal = RelationIdeal { tower: zt.clone(), generators: gens };
    // vanishing at η
    let eta_images = solution_images(pv, &ext)?;
    for g in &ideal.generators {
        let v = substitute_poly(g, &eta_images, &ext, &mut PowerCache::default());
        if !v.is_zero() {
            return Err(GroupError::BadIdeal { generator: g.canonical(), residue: v.canonical() });
        }
    }
    Ok(ideal)
}

/// Images of the solution-variable tower's variables under `Z_j^(k) ↦ η_j^(k)`.
fn solution_images(pv: &PVExtension, target: &Arc<DiffTower>) -> Result<Vec<FieldElement>, TowerError> {
    let derivs = derivative_table(pv, target)?;
    pv.solution_variables()
        .ring()
        .names()
        .iter()
        .map(|name| match parse_z(name) {
            Some((j, k)) => Ok(derivs[j - 1][k].clone()),
            None => target.var(name),
        })
        .collect()
}

/// `η_i^(k)` for `k <= n`, embedded in `target`.
fn derivative_table(pv: &PVExtension, target: &Arc<DiffTower>) -> Result<Vec<Vec<FieldElement>>, TowerError> {
    let n = pv.order();
    pv.solutions()
        .iter()
        .map(|eta| {
            let mut row = vec![eta.clone()];
            for k in 0..n {
                let d = row[k].derive();
                row.push(d);
            }
            row.iter().map(|x| x.embed(target)).collect()
        })
        .collect()
}

/// Images `Z_j^(k) ↦ Σ_i c_ij η_i^(k)` for a fixed matrix, in `target`.
fn matrix_images(pv: &PVExtension, derivs: &[Vec<FieldElement>], c: &Matrix, target: &Arc<DiffTower>) -> Result<Vec<FieldElement>, TowerError> {
    pv.solution_variables()
        .ring()
        .names()
        .iter()
        .map(|name| match parse_z(name) {
            Some((j, k)) => {
                let mut acc = target.zero();
                for (i, row) in derivs.iter().enumerate() {
                    let cij = &c[(i, j - 1)];
                    if !cij.is_zero() {
                        acc = &acc + &row[k].scale(cij);
                    }
                }
                Ok(acc)
            }
            None => target.var(name),
        })
        .collect()
}

/// `S`: substitute `Z_j ↦ Σ_i X_ij η_i` into `Γ`, normalize, and collect
/// the `X`-coefficient of every standard monomial of the extension.
pub fn defining_equations(pv: &PVExtension) -> Result<DefiningSet, GroupError> {
    let gamma = relations_ideal(pv)?;
    defining_equations_from(pv, &gamma.generators)
}

/// As [`defining_equations`] for an arbitrary list of relations in the
/// solution variables.
pub fn defining_equations_from(pv: &PVExtension, relations: &[Poly]) -> Result<DefiningSet, GroupError> {
    let generic = GenericAction::new(pv)?;
    let mut polys = Vec::new();
    let mut cache = PowerCache::default();
    for rel in relations {
        let v = substitute_poly(rel, &generic.z_images, &generic.xt, &mut cache);
        polys.extend(generic.x_coefficients(&v));
    }
    Ok(DefiningSet::new(pv.order(), polys))
}

/// The action of a generic matrix `X`: the extension with the `X_ij`
/// adjoined as constants, and the images of the solution variables and of
/// the extension's variables under `Z_j ↦ Σ_i X_ij η_i`.
#[derive(Debug, Clone)]
pub struct GenericAction {
    pub xt: Arc<DiffTower>,
    pub z_images: Vec<FieldElement>,
    pub ext_images: Vec<FieldElement>,
    n: usize,
    split: bool,
}

impl GenericAction {
    pub fn new(pv: &PVExtension) -> Result<GenericAction, GroupError> {
        let n = pv.order();
        let xt = pv.ext().with_constant_vars(&x_names(n))?;
        let derivs = derivative_table(pv, &xt)?;
        let z_images: Vec<FieldElement> = pv
            .solution_variables()
            .ring()
            .names()
            .iter()
            .map(|name| match parse_z(name) {
                Some((j, k)) => {
                    let mut acc = xt.zero();
                    for (i, row) in derivs.iter().enumerate() {
                        let x = xt.var(&format!("X{}{}", i + 1, j))?;
                        acc = &acc + &(&x * &row[k]);
                    }
                    Ok(acc)
                }
                None => xt.var(name),
            })
            .collect::<Result<_, TowerError>>()?;
        let ext_images = pv
            .ext()
            .ring()
            .names()
            .iter()
            .map(|name| match pv.gen_exprs().iter().find(|(g, _)| g == name) {
                Some((_, e)) => e.substitute(&z_images),
                None => xt.var(name),
            })
            .collect::<Result<_, TowerError>>()?;
        let split = pv.solutions().iter().all(FieldElement::is_real);
        Ok(GenericAction { xt, z_images, ext_images, n, split })
    }

    /// `σ_X(x)` for `x` in the extension.
    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement, TowerError> {
        x.substitute(&self.ext_images)
    }

    /// The `X`-polynomial coefficients of the numerator of `v`, one per
    /// standard monomial of the extension (split into real and imaginary
    /// parts when the solutions are real).
    pub fn x_coefficients(&self, v: &FieldElement) -> Vec<Poly> {
        let nx = self.n * self.n;
        let xr = x_ring(self.n);
        let mut groups: std::collections::BTreeMap<Vec<u32>, Poly> = std::collections::BTreeMap::new();
        for (m, c) in v.num().terms() {
            let outer = m.0[nx..].to_vec();
            let inner = Monomial(m.0[..nx].to_vec());
            let entry = groups.entry(outer).or_insert_with(|| Poly::zero(&xr));
            *entry = &*entry + &Poly::term(&xr, inner, c.clone());
        }
        let mut polys = Vec::new();
        for (_, p) in groups {
            if self.split && !p.is_real() {
                let re: Vec<_> = p.terms().iter().map(|(m, c)| (m.clone(), GaussRat::from_rat(c.re.clone()))).collect();
                let im: Vec<_> = p.terms().iter().map(|(m, c)| (m.clone(), GaussRat::from_rat(c.im.clone()))).collect();
                polys.push(Poly::from_terms(&xr, re));
                polys.push(Poly::from_terms(&xr, im));
            } else {
                polys.push(p);
            }
        }
        polys
    }
}

/// `DGal(L|K)` with its action on `G = L(i)`.
#[derive(Debug, Clone)]
pub struct GaloisGroup {
    pv: PVExtension,
    gamma: RelationIdeal,
    defining: DefiningSet,
    g_tower: Arc<DiffTower>,
    derivs: Vec<Vec<FieldElement>>,
}

impl GaloisGroup {
    pub fn new(pv: &PVExtension) -> Result<GaloisGroup, GroupError> {
        let gamma = relations_ideal(pv)?;
        let defining = defining_equations_from(pv, &gamma.generators)?;
        GaloisGroup::with_defining(pv, gamma, defining)
    }

    /// A subgroup presentation sharing the extension.
    pub fn with_defining(pv: &PVExtension, gamma: RelationIdeal, defining: DefiningSet) -> Result<GaloisGroup, GroupError> {
        let g_tower = match pv.ext().mode() {
            ConstantsMode::Real => complexify(pv.ext())?,
            ConstantsMode::Complexified => pv.ext().clone(),
        };
        let derivs = derivative_table(pv, &g_tower)?;
        Ok(GaloisGroup { pv: pv.clone(), gamma, defining, g_tower, derivs })
    }

    pub fn pv(&self) -> &PVExtension {
        &self.pv
    }

    pub fn relations(&self) -> &RelationIdeal {
        &self.gamma
    }

    pub fn defining(&self) -> &DefiningSet {
        &self.defining
    }

    /// The complexified extension the group acts on.
    pub fn g_tower(&self) -> &Arc<DiffTower> {
        &self.g_tower
    }

    pub fn size(&self) -> usize {
        self.pv.order()
    }

    pub fn is_member(&self, m: &Matrix) -> bool {
        self.defining.is_member(m)
    }

    pub fn element(&self, m: Matrix) -> Result<GroupElement, GroupError> {
        if self.is_member(&m) {
            Ok(GroupElement::new(m))
        } else {
            Err(GroupError::NotInGroup(m.canonical()))
        }
    }

    /// Images of the extension's variables under `σ`.
    fn generator_images(&self, m: &Matrix) -> Result<Vec<FieldElement>, GroupError> {
        let g = &self.g_tower;
        let zimg = matrix_images(&self.pv, &self.derivs, m, g)?;
        let ext = self.pv.ext();
        ext.ring()
            .names()
            .iter()
            .map(|name| match self.pv.gen_exprs().iter().find(|(n, _)| n == name) {
                Some((_, e)) => Ok(e.substitute(&zimg)?),
                None => Ok(g.var(name)?),
            })
            .collect()
    }

    /// `σ(x)` for `x` in `L` or `G`.
    pub fn apply(&self, sigma: &GroupElement, x: &FieldElement) -> Result<FieldElement, GroupError> {
        if !self.is_member(&sigma.matrix) {
            return Err(GroupError::NotInGroup(sigma.matrix.canonical()));
        }
        self.apply_unchecked(&sigma.matrix, x)
    }

    /// Substitution without the membership test.
    pub fn apply_unchecked(&self, m: &Matrix, x: &FieldElement) -> Result<FieldElement, GroupError> {
        let images = self.generator_images(m)?;
        let x = x.embed(&self.g_tower)?;
        Ok(x.substitute(&images)?)
    }

    /// Matrix product `στ`; acts as `σ̂ ∘ τ`.
    pub fn compose(&self, sigma: &GroupElement, tau: &GroupElement) -> Result<GroupElement, GroupError> {
        for s in [sigma, tau] {
            if !self.is_member(&s.matrix) {
                return Err(GroupError::NotInGroup(s.matrix.canonical()));
            }
        }
        Ok(GroupElement::new(sigma.matrix.mul(&tau.matrix)))
    }

    pub fn inverse(&self, sigma: &GroupElement) -> Result<GroupElement, GroupError> {
        if !self.is_member(&sigma.matrix) {
            return Err(GroupError::NotInGroup(sigma.matrix.canonical()));
        }
        Ok(GroupElement::new(sigma.matrix.inverse().expect("members are invertible")))
    }

    /// Whether `Z ↦ Mη` kills every relation of `Γ`, i.e. induces a
    /// differential morphism.
    pub fn annihilates_relations(&self, m: &Matrix) -> Result<bool, GroupError> {
        let zimg = matrix_images(&self.pv, &self.derivs, m, &self.g_tower)?;
        let mut cache = PowerCache::default();
        Ok(self.gamma.generators.iter().all(|g| substitute_poly(g, &zimg, &self.g_tower, &mut cache).is_zero()))
    }

    /// Members among the sample family, in family order.
    pub fn sample_members(&self) -> Vec<GroupElement> {
        sample_family(self.size()).into_iter().filter(|m| self.is_member(m)).map(GroupElement::new).collect()
    }

    /// A member that moves `a`, searched over the sample family.
    pub fn moved_element_witness(&self, a: &FieldElement) -> Result<GroupElement, GroupError> {
        let a_g = a.embed(&self.g_tower)?;
        for m in sample_family(self.size()) {
            if !self.is_member(&m) || m == Matrix::identity(self.size()) {
                continue;
            }
            if self.apply_unchecked(&m, a)? != a_g {
                return Ok(GroupElement::new(m));
            }
        }
        Err(GroupError::WitnessNotFound)
    }
}

/// Candidate matrices: designated generators first (scalars, roots of
/// unity in ℚ(i), rational rotations, torus points), then a small grid.
pub fn sample_family(n: usize) -> Vec<Matrix> {
    let g = |a: i64, b: i64| GaussRat::frac(a, b);
    let scalars = vec![
        g(2, 1),
        g(-1, 1),
        g(1, 3),
        GaussRat::i(),
        g(3, 1),
        g(1, 2),
        GaussRat::new(crate::arith::rat(3, 5), crate::arith::rat(4, 5)),
        GaussRat::new(crate::arith::rat(1, 1), crate::arith::rat(1, 1)),
        -&GaussRat::i(),
    ];
    let mut out: Vec<Matrix> = vec![Matrix::identity(n)];
    let mut seen: std::collections::HashSet<Matrix> = out.iter().cloned().collect();
    let mut push = |m: Matrix, out: &mut Vec<Matrix>| {
        if seen.insert(m.clone()) {
            out.push(m);
        }
    };
    if n == 1 {
        for c in &scalars {
            push(Matrix::scalar(1, c.clone()), &mut out);
        }
        return out;
    }
    let rot = |c: GaussRat, s: GaussRat| {
        let mut m = Matrix::identity(n);
        m[(0, 0)] = c.clone();
        m[(0, 1)] = -&s;
        m[(1, 0)] = s;
        m[(1, 1)] = c;
        m
    };
    push(rot(g(3, 5), g(4, 5)), &mut out);
    push(rot(g(5, 13), g(12, 13)), &mut out);
    push(rot(g(0, 1), g(1, 1)), &mut out);
    push(Matrix::scalar(n, g(-1, 1)), &mut out);
    for c in &scalars {
        push(Matrix::scalar(n, c.clone()), &mut out);
    }
    // diagonal torus points
    let diag_vals = [g(2, 1), g(-1, 1), g(1, 2), g(3, 1), g(4, 1), g(1, 4), g(8, 1), g(1, 1)];
    for a in &diag_vals {
        for b in &diag_vals {
            let mut m = Matrix::identity(n);
            m[(0, 0)] = a.clone();
            m[(1, 1)] = b.clone();
            push(m, &mut out);
        }
    }
    // rotation-dilations
    push(rot(g(1, 1), g(1, 1)), &mut out);
    push(rot(g(2, 1), g(1, 1)), &mut out);
    if n == 2 {
        let vals = [g(0, 1), g(1, 1), g(-1, 1), g(2, 1), g(1, 2), g(3, 5), g(4, 5), g(-3, 5), g(-4, 5)];
        for a in &vals {
            for b in &vals {
                for c in &vals {
                    for d in &vals {
                        push(Matrix::from_rows(vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]), &mut out);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::groebner::same_zero_set;
    use crate::pv::{build_pv, BuildOptions, EquationClass, LinearODE};

    fn pv(coeffs: &[&str], class: EquationClass) -> PVExtension {
        let k = DiffTower::rational_functions("t");
        let ode = LinearODE::parse(&k, coeffs).unwrap();
        build_pv(&k, &ode, class, &BuildOptions::default()).unwrap()
    }

    #[test]
    fn circle_relations_and_group() {
        let p = pv(&["1", "0"], EquationClass::Circle);
        let gamma = relations_ideal(&p).unwrap();
        let text = gamma.canonical();
        assert!(text.contains(&"1/1*Z2 + -1/1*Z1'".to_string()), "{text:?}");
        assert!(text.contains(&"1/1*Z2' + 1/1*Z1".to_string()), "{text:?}");
        assert!(text.contains(&"1/1*Z2^2 + 1/1*Z1^2 + -1/1".to_string()), "{text:?}");
        let s = defining_equations(&p).unwrap();
        assert!(s.is_real());
        let reference = DefiningSet::parse(2, &["X11 - X22", "X12 + X21", "X11^2 + X21^2 - 1"]).unwrap();
        assert!(same_zero_set(s.polys(), reference.polys(), crate::arith::DEFAULT_BUDGET).unwrap());
        let rot = Matrix::from_rows(vec![
            vec![GaussRat::frac(3, 5), GaussRat::frac(-4, 5)],
            vec![GaussRat::frac(4, 5), GaussRat::frac(3, 5)],
        ]);
        assert!(s.is_member(&rot));
        assert!(!s.is_member(&Matrix::from_ints(&[&[2, 0], &[0, 2]])));
        assert!(s.is_member(&Matrix::identity(2)));
    }

    #[test]
    fn exp_group_is_gl1() {
        let p = pv(&["-1"], EquationClass::Exp);
        assert_eq!(relations_ideal(&p).unwrap().canonical(), vec!["1/1*Z1' + -1/1*Z1"]);
        let s = defining_equations(&p).unwrap();
        assert!(s.is_empty());
        let g = GaloisGroup::new(&p).unwrap();
        let e = p.ext().var("e").unwrap();
        let two = GroupElement::scalar(1, GaussRat::from_int(2));
        assert_eq!(g.apply(&two, &e).unwrap(), e.embed(g.g_tower()).unwrap().scale(&GaussRat::from_int(2)));
        assert!(g.annihilates_relations(&two.matrix).unwrap());
    }

    #[test]
    fn radical_group_is_mu2() {
        let p = pv(&["-1/(2*t)"], EquationClass::Radical);
        let gamma = relations_ideal(&p).unwrap();
        assert_eq!(gamma.canonical(), vec!["1/1*Z1'*t + -1/2*Z1", "1/1*Z1^2 + -1/1*t"]);
        let s = defining_equations(&p).unwrap();
        assert_eq!(s.canonical(), vec!["1/1*X11^2 + -1/1"]);
        let g = GaloisGroup::new(&p).unwrap();
        let minus = GroupElement::scalar(1, GaussRat::from_int(-1));
        let x = p.ext().var("g").unwrap();
        assert_eq!(g.apply(&minus, &x).unwrap(), (-&x).embed(g.g_tower()).unwrap());
        let sq = &x * &x;
        assert_eq!(g.apply(&minus, &sq).unwrap(), sq.embed(g.g_tower()).unwrap());
        assert_eq!(g.compose(&minus, &minus).unwrap(), GroupElement::identity(1));
        assert!(matches!(g.apply(&GroupElement::scalar(1, GaussRat::from_int(2)), &x), Err(GroupError::NotInGroup(_))));
    }

    #[test]
    fn rotations_compose_and_act() {
        let p = pv(&["1", "0"], EquationClass::Circle);
        let g = GaloisGroup::new(&p).unwrap();
        let r1 = g.element(Matrix::from_rows(vec![
            vec![GaussRat::frac(3, 5), GaussRat::frac(-4, 5)],
            vec![GaussRat::frac(4, 5), GaussRat::frac(3, 5)],
        ]))
        .unwrap();
        let r2 = g.element(Matrix::from_rows(vec![
            vec![GaussRat::frac(5, 13), GaussRat::frac(-12, 13)],
            vec![GaussRat::frac(12, 13), GaussRat::frac(5, 13)],
        ]))
        .unwrap();
        let r12 = g.compose(&r1, &r2).unwrap();
        let s = p.ext().var("s").unwrap();
        let c = p.ext().var("c").unwrap();
        let x = &(&s * &c) + &(&s * &s).scale(&GaussRat::from_int(3));
        let lhs = g.apply(&r12, &x).unwrap();
        let inner = g.apply(&r2, &x).unwrap();
        let rhs = g.apply(&r1, &inner).unwrap();
        assert_eq!(lhs, rhs);
        let moved = g.apply(&r1, &s).unwrap();
        assert_eq!(moved, g.g_tower().parse("3/5*s + 4/5*c").unwrap());
        let inv = g.inverse(&r1).unwrap();
        assert_eq!(g.compose(&r1, &inv).unwrap(), GroupElement::identity(2));
        assert_eq!(g.moved_element_witness(&s).unwrap(), r1);
    }

    #[test]
    fn witness_for_radical_and_exp() {
        let p = pv(&["-1/(2*t)"], EquationClass::Radical);
        let g = GaloisGroup::new(&p).unwrap();
        let w = g.moved_element_witness(&p.ext().var("g").unwrap()).unwrap();
        assert_eq!(w, GroupElement::scalar(1, GaussRat::from_int(-1)));
        let p = pv(&["-1"], EquationClass::Exp);
        let g = GaloisGroup::new(&p).unwrap();
        let w = g.moved_element_witness(&p.ext().var("e").unwrap()).unwrap();
        assert_eq!(w, GroupElement::scalar(1, GaussRat::from_int(2)));
        assert!(matches!(g.moved_element_witness(&p.ext().var("t").unwrap()), Err(GroupError::WitnessNotFound)));
    }

    #[test]
    fn constant_coefficient_groups() {
        // roots 1, 2: {diag(a, a^2)}
        let p = pv(&["2", "-3"], EquationClass::ConstCoeff2);
        let s = defining_equations(&p).unwrap();
        let reference = DefiningSet::parse(2, &["X12", "X21", "X22 - X11^2"]).unwrap();
        assert!(same_zero_set(s.polys(), reference.polys(), crate::arith::DEFAULT_BUDGET).unwrap());
        // double root: scalars
        let p = pv(&["1", "-2"], EquationClass::ConstCoeff2);
        let s = defining_equations(&p).unwrap();
        let reference = DefiningSet::parse(2, &["X12", "X21", "X22 - X11"]).unwrap();
        assert!(same_zero_set(s.polys(), reference.polys(), crate::arith::DEFAULT_BUDGET).unwrap());
        // 1 ± 2i: rotation-dilations
        let p = pv(&["5", "-2"], EquationClass::ConstCoeff2);
        let s = defining_equations(&p).unwrap();
        let reference = DefiningSet::parse(2, &["X11 - X22", "X12 + X21"]).unwrap();
        assert!(same_zero_set(s.polys(), reference.polys(), crate::arith::DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn soundness_on_samples() {
        for (coeffs, class) in [
            (&["1", "0"][..], EquationClass::Circle),
            (&["-1/(2*t)"][..], EquationClass::Radical),
            (&["2", "-3"][..], EquationClass::ConstCoeff2),
        ] {
            let p = pv(coeffs, class);
            let g = GaloisGroup::new(&p).unwrap();
            let members = g.sample_members();
            assert!(members.len() >= 2);
            for m in members.iter().take(6) {
                assert!(g.annihilates_relations(&m.matrix).unwrap());
            }
        }
    }
}
