//! Picard-Vessiot extensions for a closed list of equation classes:
//! construction, certificates, complexification and realification.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::parse::Fraction;
use crate::arith::{rat_sqrt, GaussRat, Matrix, Poly, Rat};
use crate::report::{Check, Report};
use crate::tower::{
    complexify as complexify_tower, constant_scan, coordinates, express_in_span, real_part, ConstantsMode, DiffTower,
    FieldElement, GeneratorKind, GeneratorSpec, TowerError,
};
use crate::wronskian::{field_det, wronskian_det, wronskian_matrix};

/// Default bounds of the constant scan: generator degree, `|t|`-exponent.
pub const DEFAULT_SCAN: (u32, u32) = (4, 2);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PvError {
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error("unsupported equation: {0}")]
    UnsupportedEquation(String),
    #[error("not a Picard-Vessiot extension: {certificate} failed ({detail})")]
    NotPV { certificate: String, detail: String },
    #[error("solution space is not stable under conjugation: {0}")]
    Stabilization(String),
}

impl From<crate::arith::ArithError> for PvError {
    fn from(e: crate::arith::ArithError) -> Self {
        PvError::Tower(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquationClass {
    Exp,
    Radical,
    Circle,
    ConstCoeff2,
}

impl EquationClass {
    pub fn label(self) -> &'static str {
        match self {
            EquationClass::Exp => "EXP",
            EquationClass::Radical => "RADICAL",
            EquationClass::Circle => "CIRCLE",
            EquationClass::ConstCoeff2 => "CONSTCOEFF2",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "EXP" => Some(EquationClass::Exp),
            "RADICAL" => Some(EquationClass::Radical),
            "CIRCLE" => Some(EquationClass::Circle),
            "CONSTCOEFF2" => Some(EquationClass::ConstCoeff2),
            _ => None,
        }
    }
}

/// How the extension was assembled; drives the real-form tables.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `e' = f e`.
    Exponential { generator: String },
    /// `g^q = f^p`.
    Radical { generator: String, p: i64, q: i64, radicand: FieldElement },
    /// `s' = ωc`, `c' = -ωs`, `s² + c² = 1`.
    Circle { sine: String, cosine: String, omega: Rat },
    /// `η = (E^{k1}, E^{k2})`, `E' = ρE`.
    TwoExponentials { generator: String, rho: Rat, k: (i64, i64) },
    /// `η = (E, tE)` (or `(1, t)` when the root is zero).
    DoubleRoot { root: Rat },
    /// `x' = λx + μy`, `y' = λy - μx`.
    Damped { x: String, y: String, lambda: Rat, mu: Rat },
    /// Assembled by hand or by a basis change.
    Custom,
}

/// `Y^(n) + a_{n-1} Y^(n-1) + ... + a_0 Y = 0` over a base tower.
#[derive(Debug, Clone)]
pub struct LinearODE {
    base: Arc<DiffTower>,
    coeffs: Vec<FieldElement>,
}

impl LinearODE {
    /// Coefficients `a_0, ..., a_{n-1}`.
    pub fn new(base: &Arc<DiffTower>, coeffs: Vec<FieldElement>) -> Result<LinearODE, PvError> {
        if coeffs.is_empty() {
            return Err(crate::arith::ArithError::EmptyInput.into());
        }
        let coeffs = coeffs.iter().map(|c| c.embed(base)).collect::<Result<_, _>>()?;
        Ok(LinearODE { base: base.clone(), coeffs })
    }

    pub fn parse<S: AsRef<str>>(base: &Arc<DiffTower>, coeffs: &[S]) -> Result<LinearODE, PvError> {
        let cs = coeffs.iter().map(|c| base.parse(c.as_ref())).collect::<Result<Vec<_>, _>>()?;
        LinearODE::new(base, cs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn base(&self) -> &Arc<DiffTower> {
        &self.base
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_real)
    }

    /// The operator applied to `y` (in any tower containing the base).
    pub fn apply(&self, y: &FieldElement) -> Result<FieldElement, TowerError> {
        let mut derivs = vec![y.clone()];
        for k in 0..self.order() {
            derivs.push(derivs[k].derive());
        }
        let mut acc = derivs[self.order()].clone();
        for (k, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc = &acc + &(&a.embed(y.tower())? * &derivs[k]);
            }
        }
        Ok(acc)
    }

    /// The same equation over another base (by variable names).
    pub fn embed(&self, base: &Arc<DiffTower>) -> Result<LinearODE, PvError> {
        LinearODE::new(base, self.coeffs.clone())
    }

    /// Coefficients as canonical strings, `a_0` first.
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(FieldElement::canonical).collect()
    }
}

impl fmt::Display for LinearODE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order();
        let y = |k: usize| format!("Y{}", "'".repeat(k));
        let mut parts = vec![y(n)];
        for k in (0..n).rev() {
            let a = &self.coeffs[k];
            if !a.is_zero() {
                parts.push(format!("({})*{}", a.canonical(), y(k)));
            }
        }
        write!(f, "{} = 0", parts.join(" + "))
    }
}

/// Which coefficient field a solution space is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarField {
    Real,
    Complex,
}

/// The constant span `V` of a fundamental system.
#[derive(Debug, Clone)]
pub struct SolutionSpace {
    pub basis: Vec<FieldElement>,
    pub scalars: ScalarField,
}

#[derive(Debug, Clone)]
pub struct Certificates {
    pub residuals: Vec<FieldElement>,
    pub wronskian: FieldElement,
    pub scan_bounds: (u32, u32),
    pub scan_found: Vec<FieldElement>,
}

impl Certificates {
    fn compute(ext: &Arc<DiffTower>, ode: &LinearODE, solutions: &[FieldElement], scan: (u32, u32)) -> Result<Certificates, PvError> {
        let residuals = solutions.iter().map(|y| ode.apply(y)).collect::<Result<Vec<_>, _>>()?;
        let wronskian = wronskian_det(solutions)?;
        let scan_found = constant_scan(ext, scan.0, scan.1);
        Ok(Certificates { residuals, wronskian, scan_bounds: scan, scan_found })
    }

    pub fn checks(&self) -> Vec<Check> {
        let bad: Vec<String> = self
            .residuals
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(|(j, r)| format!("eta{} leaves {}", j + 1, r.canonical()))
            .collect();
        let sol = Check::pass_if(
            "solutions satisfy the equation",
            bad.is_empty(),
            if bad.is_empty() { "all residuals reduce to 0".to_string() } else { bad.join("; ") },
        );
        let wr = Check::pass_if("wronskian nonzero", !self.wronskian.is_zero(), self.wronskian.canonical());
        let (d, e) = self.scan_bounds;
        let scan = if self.scan_found.is_empty() {
            Check::pass_if("no new constants", true, format!("scan empty (degree <= {d}, |t-exponent| <= {e})"))
        } else {
            let found: Vec<String> = self.scan_found.iter().map(FieldElement::canonical).collect();
            Check::pass_if("no new constants", false, format!("new constants {}", found.join(", ")))
        };
        vec![sol, wr, scan]
    }

    pub fn first_failure(&self) -> Option<Check> {
        self.checks().into_iter().find(|c| !c.passed())
    }
}

/// `L = K⟨η⟩` together with its presentation data.
///
/// `gen_exprs` writes every tower generator of `L` that is not in `K` as a
/// rational function in the solution variables `Z_j^(k)` over `K`; these
/// expressions are the raw material of the relation ideal.
#[derive(Debug, Clone)]
pub struct PVExtension {
    base: Arc<DiffTower>,
    ext: Arc<DiffTower>,
    solutions: Vec<FieldElement>,
    ode: LinearODE,
    class: Option<EquationClass>,
    shape: Shape,
    ztower: Arc<DiffTower>,
    gen_exprs: Vec<(String, FieldElement)>,
    certificates: Certificates,
}

/// Name of the variable standing for `Z_j^(k)` (`j` counts from 1).
pub fn z_name(j: usize, k: usize) -> String {
    format!("Z{}{}", j, "'".repeat(k))
}

/// `K[Z_j^(k) : j <= n, k <= n]` as a differential tower; the derivative
/// of the top variable follows from the equation.
pub fn solution_variable_tower(base: &Arc<DiffTower>, ode: &LinearODE) -> Result<Arc<DiffTower>, PvError> {
    let n = ode.order();
    let names: Vec<String> = (1..=n).flat_map(|j| (0..=n).map(move |k| z_name(j, k))).collect();
    let ring = base.extended_ring(&names)?;
    let spec = |j: usize, k: usize, der: Fraction| GeneratorSpec {
        name: z_name(j, k),
        kind: GeneratorKind::Abstract,
        derivative: der,
        relation: None,
    };
    let var = |j: usize, k: usize| Poly::named(&ring, &z_name(j, k)).expect("declared");
    let one = Poly::one(&ring);
    let mut draft = Vec::new();
    for j in 1..=n {
        for k in 0..=n {
            let num = if k < n { var(j, k + 1) } else { Poly::zero(&ring) };
            draft.push(spec(j, k, Fraction { num, den: one.clone() }));
        }
    }
    let tmp = base.adjoin(draft.clone())?;
    let mut specs = draft;
    for j in 1..=n {
        let mut top = tmp.zero();
        for (k, a) in ode.coeffs().iter().enumerate() {
            let a_here = a.embed(&tmp)?;
            let da = a.derive().embed(&tmp)?;
            top = &top - &(&da * &tmp.var(&z_name(j, k))?);
            top = &top - &(&a_here * &tmp.var(&z_name(j, k + 1))?);
        }
        let idx = (j - 1) * (n + 1) + n;
        specs[idx].derivative = Fraction { num: top.num().clone(), den: top.den().clone() };
    }
    Ok(base.adjoin(specs)?)
}

fn fresh_name(base: &DiffTower, stem: &str, taken: &[String]) -> String {
    let ok = |n: &str| base.var_index(n).is_none() && !taken.iter().any(|t| t == n);
    if ok(stem) {
        return stem.to_string();
    }
    (1..).map(|k| format!("{stem}{k}")).find(|n| ok(n)).expect("unbounded")
}

fn rational_constant(x: &FieldElement, what: &str) -> Result<Rat, PvError> {
    match x.constant_value() {
        Some(c) if c.is_real() => Ok(c.re),
        _ => Err(PvError::UnsupportedEquation(format!("{what} must be a rational constant, got {}", x.canonical()))),
    }
}

fn rat_text(r: &Rat) -> String {
    format!("({}/{})", r.numer(), r.denom())
}

fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Rat::new(num, a.denom() * b.denom())
}

/// `(x, y)` with `a x + b y = gcd(a, b)`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return (a.signum(), 0, a.abs());
    }
    let (x, y, g) = ext_gcd(b, a.rem_euclid(b));
    (y, x - a.div_euclid(b) * y, g)
}

fn to_i64(r: &Rat) -> Result<i64, PvError> {
    if !r.is_integer() {
        return Err(PvError::UnsupportedEquation(format!("non-integral exponent {r}")));
    }
    i64::try_from(r.to_integer()).map_err(|_| PvError::UnsupportedEquation("exponent too large".into()))
}

/// Optional inputs of [`build_pv`].
#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Radicand `f` for RADICAL equations; otherwise the monic denominator
    /// of `-a_0` is tried.
    pub radicand: Option<FieldElement>,
    /// Constant scan bounds; [`DEFAULT_SCAN`] when absent.
    pub scan: Option<(u32, u32)>,
}

/// Builds the Picard-Vessiot extension of `ode` over `base` for the
/// declared class and checks its certificates.
pub fn build_pv(base: &Arc<DiffTower>, ode: &LinearODE, class: EquationClass, opts: &BuildOptions) -> Result<PVExtension, PvError> {
    if base.mode() != ConstantsMode::Real {
        return Err(PvError::UnsupportedEquation("construction expects a real base field".into()));
    }
    if !ode.is_real() {
        return Err(PvError::UnsupportedEquation("equation has non-real coefficients".into()));
    }
    let ode = ode.embed(base)?;
    let n = ode.order();
    let need_order = |k: usize| {
        if n == k {
            Ok(())
        } else {
            Err(PvError::UnsupportedEquation(format!("{} expects order {k}, got {n}", class.label())))
        }
    };
    let a = ode.coeffs().to_vec();
    let built = match class {
        EquationClass::Exp => {
            need_order(1)?;
            build_exp(base, &(-&a[0]))?
        }
        EquationClass::Radical => {
            need_order(1)?;
            build_radical(base, &a[0], opts.radicand.as_ref())?
        }
        EquationClass::Circle => {
            need_order(2)?;
            if !a[1].is_zero() {
                return Err(PvError::UnsupportedEquation("CIRCLE expects no Y' term".into()));
            }
            let w2 = rational_constant(&a[0], "CIRCLE coefficient")?;
            let omega = rat_sqrt(&w2)
                .filter(|w| !w.is_zero())
                .ok_or_else(|| PvError::UnsupportedEquation(format!("{w2} is not the square of a nonzero rational")))?;
            build_circle(base, &omega)?
        }
        EquationClass::ConstCoeff2 => {
            need_order(2)?;
            let a1 = rational_constant(&a[1], "CONSTCOEFF2 coefficient a1")?;
            let a0 = rational_constant(&a[0], "CONSTCOEFF2 coefficient a0")?;
            build_const_coeff(base, &a1, &a0)?
        }
    };
    let (ext, solutions, shape, exprs) = built;
    finish(base, ext, solutions, ode, Some(class), shape, exprs, opts.scan.unwrap_or(DEFAULT_SCAN), true)
}

type Built = (Arc<DiffTower>, Vec<FieldElement>, Shape, Vec<(String, ExprBuilder)>);

/// Writes a generator in the solution variables once the tower exists.
type ExprBuilder = Box<dyn Fn(&Arc<DiffTower>) -> Result<FieldElement, TowerError>>;

fn z(j: usize) -> ExprBuilder {
    Box::new(move |zt: &Arc<DiffTower>| zt.var(&z_name(j, 0)))
}

fn build_exp(base: &Arc<DiffTower>, f: &FieldElement) -> Result<Built, PvError> {
    let e = fresh_name(base, "e", &[]);
    let ext = base.adjoin_exponential(&e, f)?;
    let eta = vec![ext.var(&e)?];
    Ok((ext, eta, Shape::Exponential { generator: e.clone() }, vec![(e, z(1))]))
}

fn build_radical(base: &Arc<DiffTower>, a0: &FieldElement, radicand: Option<&FieldElement>) -> Result<Built, PvError> {
    let target = -a0;
    let f = match radicand {
        Some(f) => f.embed(base)?,
        None => {
            if target.den().is_constant() {
                return Err(PvError::UnsupportedEquation("no radicand given and -a0 has no denominator".into()));
            }
            base.from_poly(target.den().monic())?
        }
    };
    if f.derive().is_zero() {
        return Err(PvError::UnsupportedEquation("radicand is constant".into()));
    }
    let log_der = f.derive().try_div(&f)?;
    let ratio = rational_constant(&target.try_div(&log_der)?, "exponent -a0 / (f'/f)")?;
    if ratio.is_zero() {
        return Err(PvError::UnsupportedEquation("zero exponent".into()));
    }
    let p = to_i64(&Rat::from_integer(ratio.numer().clone()))?;
    let q = to_i64(&Rat::from_integer(ratio.denom().clone()))?;
    let name = fresh_name(base, "g", &[]);
    let ring = base.extended_ring(&[&name])?;
    let g = Poly::named(&ring, &name).expect("declared");
    let fnum = f.num().extend_to(&ring);
    let fden = f.den().extend_to(&ring);
    let (mult, rhs) = if p > 0 { (fden, fnum) } else { (fnum, fden) };
    let pe = p.unsigned_abs() as u32;
    let relation = &(&g.pow(q as u32) * &mult.pow(pe)) - &rhs.pow(pe);
    let derivative = Fraction { num: &target.num().extend_to(&ring) * &g, den: target.den().extend_to(&ring) };
    let ext = base.adjoin(vec![GeneratorSpec { name: name.clone(), kind: GeneratorKind::Algebraic, derivative, relation: Some(relation) }])?;
    let eta = vec![ext.var(&name)?];
    Ok((ext, eta, Shape::Radical { generator: name.clone(), p, q, radicand: f }, vec![(name, z(1))]))
}

fn build_circle(base: &Arc<DiffTower>, omega: &Rat) -> Result<Built, PvError> {
    let s = fresh_name(base, "s", &[]);
    let c = fresh_name(base, "c", std::slice::from_ref(&s));
    let w = rat_text(omega);
    let ext = base.adjoin_text(&[
        (&c, GeneratorKind::Algebraic, &format!("-{w}*{s}"), None),
        (&s, GeneratorKind::Algebraic, &format!("{w}*{c}"), Some(&format!("{s}^2 + {c}^2 - 1"))),
    ])?;
    let eta = vec![ext.var(&s)?, ext.var(&c)?];
    let shape = Shape::Circle { sine: s.clone(), cosine: c.clone(), omega: omega.clone() };
    Ok((ext, eta, shape, vec![(c, z(2)), (s, z(1))]))
}

fn build_const_coeff(base: &Arc<DiffTower>, a1: &Rat, a0: &Rat) -> Result<Built, PvError> {
    let two = Rat::from_integer(BigInt::from(2));
    let disc = a1 * a1 - a0 * Rat::from_integer(BigInt::from(4));
    let half = -a1 / &two;
    if disc.is_positive() {
        let root = rat_sqrt(&disc).ok_or_else(|| PvError::UnsupportedEquation(format!("irrational characteristic roots (discriminant {disc})")))?;
        let r1 = &half - &root / &two;
        let r2 = &half + &root / &two;
        let rho = rat_gcd(&r1, &r2);
        let k1 = to_i64(&(&r1 / &rho))?;
        let k2 = to_i64(&(&r2 / &rho))?;
        let name = fresh_name(base, "E", &[]);
        let rho_el = base.constant(GaussRat::from_rat(rho.clone()))?;
        let ext = base.adjoin_exponential(&name, &rho_el)?;
        let e = ext.var(&name)?;
        let eta = vec![e.pow(k1 as i32)?, e.pow(k2 as i32)?];
        let (a, b, _) = ext_gcd(k1, k2);
        let expr: ExprBuilder = Box::new(move |zt: &Arc<DiffTower>| {
            let z1 = zt.var(&z_name(1, 0))?.pow(a as i32)?;
            let z2 = zt.var(&z_name(2, 0))?.pow(b as i32)?;
            Ok(&z1 * &z2)
        });
        let shape = Shape::TwoExponentials { generator: name.clone(), rho, k: (k1, k2) };
        return Ok((ext, eta, shape, vec![(name, expr)]));
    }
    if disc.is_zero() {
        let r = half;
        let (tower, t_name, mut exprs): (Arc<DiffTower>, String, Vec<(String, ExprBuilder)>) = match base.base_var_name() {
            Some(t) => (base.clone(), t.to_string(), Vec::new()),
            None => {
                let t = fresh_name(base, "t", &[]);
                let tower = base.adjoin_text(&[(&t, GeneratorKind::Abstract, "1", None)])?;
                (tower, t, Vec::new())
            }
        };
        let t_added = base.base_var_name().is_none();
        if r.is_zero() {
            let eta = vec![tower.one(), tower.var(&t_name)?];
            if t_added {
                exprs.push((t_name, z(2)));
            }
            return Ok((tower, eta, Shape::DoubleRoot { root: r }, exprs));
        }
        let name = fresh_name(&tower, "E", &[]);
        let r_el = tower.constant(GaussRat::from_rat(r.clone()))?;
        let ext = tower.adjoin_exponential(&name, &r_el)?;
        let e = ext.var(&name)?;
        let eta = vec![e.clone(), &ext.var(&t_name)? * &e];
        if t_added {
            let expr: ExprBuilder = Box::new(|zt: &Arc<DiffTower>| zt.var(&z_name(2, 0))?.try_div(&zt.var(&z_name(1, 0))?));
            exprs.push((t_name, expr));
        }
        exprs.push((name, z(1)));
        return Ok((ext, eta, Shape::DoubleRoot { root: r }, exprs));
    }
    let mu = rat_sqrt(&-&disc)
        .map(|m| m / &two)
        .ok_or_else(|| PvError::UnsupportedEquation(format!("irrational characteristic roots (discriminant {disc})")))?;
    if half.is_zero() {
        return build_circle(base, &mu);
    }
    let x = fresh_name(base, "x", &[]);
    let y = fresh_name(base, "y", std::slice::from_ref(&x));
    let (l, m) = (rat_text(&half), rat_text(&mu));
    let ext = base.adjoin_text(&[
        (&x, GeneratorKind::Abstract, &format!("{l}*{x} + {m}*{y}"), None),
        (&y, GeneratorKind::Abstract, &format!("{l}*{y} - {m}*{x}"), None),
    ])?;
    let eta = vec![ext.var(&x)?, ext.var(&y)?];
    let shape = Shape::Damped { x: x.clone(), y: y.clone(), lambda: half, mu };
    Ok((ext, eta, shape, vec![(x, z(1)), (y, z(2))]))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    base: &Arc<DiffTower>,
    ext: Arc<DiffTower>,
    solutions: Vec<FieldElement>,
    ode: LinearODE,
    class: Option<EquationClass>,
    shape: Shape,
    exprs: Vec<(String, ExprBuilder)>,
    scan: (u32, u32),
    strict: bool,
) -> Result<PVExtension, PvError> {
    let ztower = solution_variable_tower(base, &ode)?;
    let gen_exprs = exprs.into_iter().map(|(n, b)| Ok((n, b(&ztower)?))).collect::<Result<Vec<_>, TowerError>>()?;
    let certificates = Certificates::compute(&ext, &ode, &solutions, scan)?;
    if strict {
        if let Some(c) = certificates.first_failure() {
            return Err(PvError::NotPV { certificate: c.name, detail: c.detail });
        }
    }
    Ok(PVExtension { base: base.clone(), ext, solutions, ode, class, shape, ztower, gen_exprs, certificates })
}

/// Outcome of [`verify_pv`]: one record per certificate.
pub fn verify_pv(pv: &PVExtension) -> Result<Report, PvError> {
    let cert = Certificates::compute(&pv.ext, &pv.ode, &pv.solutions, pv.certificates.scan_bounds)?;
    let mut r = Report::new("verify");
    for c in cert.checks() {
        r.push(c);
    }
    Ok(r)
}

impl PVExtension {
    /// Assembles an extension from explicit data; `gen_exprs` gives each
    /// tower generator outside the base as text in `Z1, Z1', ...`.
    /// Certificates are recorded, not enforced.
    pub fn from_parts(
        base: &Arc<DiffTower>,
        ext: &Arc<DiffTower>,
        solutions: Vec<FieldElement>,
        ode: LinearODE,
        gen_exprs: &[(&str, &str)],
        scan: (u32, u32),
    ) -> Result<PVExtension, PvError> {
        let solutions = solutions.iter().map(|s| s.embed(ext)).collect::<Result<Vec<_>, _>>()?;
        let exprs: Vec<(String, ExprBuilder)> = gen_exprs
            .iter()
            .map(|(n, text)| {
                let text = text.to_string();
                let b: ExprBuilder = Box::new(move |zt: &Arc<DiffTower>| zt.parse(&text));
                (n.to_string(), b)
            })
            .collect();
        let ode = ode.embed(base)?;
        finish(base, ext.clone(), solutions, ode, None, Shape::Custom, exprs, scan, false)
    }

    pub fn base(&self) -> &Arc<DiffTower> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<DiffTower> {
        &self.ext
    }

    pub fn solutions(&self) -> &[FieldElement] {
        &self.solutions
    }

    pub fn ode(&self) -> &LinearODE {
        &self.ode
    }

    pub fn class(&self) -> Option<EquationClass> {
        self.class
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.solutions.len()
    }

    /// Tower of the solution variables `Z_j^(k)` over the base.
    pub fn solution_variables(&self) -> &Arc<DiffTower> {
        &self.ztower
    }

    pub fn gen_exprs(&self) -> &[(String, FieldElement)] {
        &self.gen_exprs
    }

    pub fn certificates(&self) -> &Certificates {
        &self.certificates
    }

    pub fn is_complexified(&self) -> bool {
        self.ext.mode() == ConstantsMode::Complexified
    }

    pub fn solution_space(&self) -> SolutionSpace {
        SolutionSpace {
            basis: self.solutions.clone(),
            scalars: if self.is_complexified() { ScalarField::Complex } else { ScalarField::Real },
        }
    }

    /// Generators of the extension lying outside the base.
    pub fn new_generators(&self) -> Vec<String> {
        let nb = self.base.ring().len();
        self.ext.ring().names()[nb..].to_vec()
    }

    /// `G = L(i)` over `F = K(i)` with the same solutions.
    pub fn complexify(&self) -> Result<PVExtension, PvError> {
        if self.is_complexified() {
            return Err(TowerError::Mode("extension is already complexified".into()).into());
        }
        let base = complexify_tower(&self.base)?;
        let ext = complexify_tower(&self.ext)?;
        let ztower = complexify_tower(&self.ztower)?;
        let solutions = self.solutions.iter().map(|s| s.embed(&ext)).collect::<Result<Vec<_>, _>>()?;
        let gen_exprs =
            self.gen_exprs.iter().map(|(n, e)| Ok((n.clone(), e.embed(&ztower)?))).collect::<Result<Vec<_>, TowerError>>()?;
        let certificates = Certificates {
            residuals: self.certificates.residuals.iter().map(|r| r.embed(&ext)).collect::<Result<_, _>>()?,
            wronskian: self.certificates.wronskian.embed(&ext)?,
            scan_bounds: self.certificates.scan_bounds,
            scan_found: self.certificates.scan_found.iter().map(|r| r.embed(&ext)).collect::<Result<_, _>>()?,
        };
        Ok(PVExtension {
            ode: self.ode.embed(&base)?,
            base,
            ext,
            solutions,
            class: self.class,
            shape: self.shape.clone(),
            ztower,
            gen_exprs,
            certificates,
        })
    }

    /// New fundamental system `η'_k = Σ_j m[j][k] η_j` (columns of `m`).
    pub fn change_basis(&self, m: &Matrix) -> Result<PVExtension, PvError> {
        let n = self.order();
        if m.rows() != n || m.cols() != n {
            return Err(PvError::UnsupportedEquation("basis change has the wrong size".into()));
        }
        let minv = m.inverse().ok_or_else(|| PvError::UnsupportedEquation("basis change is singular".into()))?;
        let solutions = combine(&self.solutions, m, &self.ext)?;
        let gen_exprs = transform_exprs(&self.gen_exprs, &self.ztower, &self.ztower, &minv, n)?;
        let certificates = Certificates::compute(&self.ext, &self.ode, &solutions, self.certificates.scan_bounds)?;
        Ok(PVExtension {
            base: self.base.clone(),
            ext: self.ext.clone(),
            solutions,
            ode: self.ode.clone(),
            class: self.class,
            shape: if m == &Matrix::identity(n) { self.shape.clone() } else { Shape::Custom },
            ztower: self.ztower.clone(),
            gen_exprs,
            certificates,
        })
    }
}

/// `v_k = Σ_j m[j][k] b_j`.
fn combine(b: &[FieldElement], m: &Matrix, tower: &Arc<DiffTower>) -> Result<Vec<FieldElement>, TowerError> {
    let mut out = Vec::with_capacity(m.cols());
    for k in 0..m.cols() {
        let mut acc = tower.zero();
        for (j, x) in b.iter().enumerate() {
            let c = &m[(j, k)];
            if !c.is_zero() {
                if !c.is_real() && tower.mode() == ConstantsMode::Real {
                    return Err(TowerError::Mode("non-real basis change on a real extension".into()));
                }
                acc = &acc + &FieldElement::embed(x, tower)?.scale(c);
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Rewrites generator expressions after `b_j = Σ_k minv[k][j] v_k` (row `j`
/// of the old system in terms of the new one); applies to every derivative
/// order. Old variables `Z_j` with `j > minv.cols()` are not allowed.
fn transform_exprs(
    exprs: &[(String, FieldElement)],
    old: &Arc<DiffTower>,
    new: &Arc<DiffTower>,
    minv: &Matrix,
    new_order: usize,
) -> Result<Vec<(String, FieldElement)>, TowerError> {
    let names = old.ring().names().to_vec();
    let mut images = Vec::with_capacity(names.len());
    for name in &names {
        match parse_z(name) {
            Some((j, k)) => {
                let mut acc = new.zero();
                for kk in 0..new_order {
                    let c = &minv[(kk, j - 1)];
                    if !c.is_zero() && k <= new_order {
                        acc = &acc + &new.var(&z_name(kk + 1, k))?.scale(c);
                    }
                }
                images.push(acc);
            }
            None => images.push(new.var(name)?),
        }
    }
    exprs.iter().map(|(n, e)| Ok((n.clone(), e.substitute(&images)?))).collect()
}

/// `(j, k)` for a variable named `Z_j` with `k` primes.
pub fn parse_z(name: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix('Z')?;
    let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
    let primes = &rest[digits.len()..];
    if digits.is_empty() || !primes.chars().all(|c| c == '\'') {
        return None;
    }
    Some((digits.parse().ok()?, primes.len()))
}

/// Monic equation with fundamental system `ys`, coefficients by Cramer's
/// rule on the wronskian, required to lie in `base`.
pub fn ode_from_basis(ys: &[FieldElement], base: &Arc<DiffTower>) -> Result<LinearODE, PvError> {
    let m = ys.len();
    let w = wronskian_matrix(ys)?;
    let det = w.det();
    if det.is_zero() {
        return Err(PvError::NotPV { certificate: "wronskian nonzero".into(), detail: "dependent basis".into() });
    }
    let top: Vec<FieldElement> = w.rows()[m - 1].iter().map(FieldElement::derive).collect();
    let mut coeffs = Vec::with_capacity(m);
    for k in 0..m {
        let mut rows = w.rows().to_vec();
        rows[k] = top.iter().map(|x| -x).collect();
        let a = field_det(rows).try_div(&det)?;
        let a = a.re();
        coeffs.push(a.embed(base).map_err(|_| {
            PvError::Stabilization(format!("coefficient {} does not lie in the base field", a.canonical()))
        })?);
    }
    LinearODE::new(base, coeffs)
}

/// Real extension generated by the conjugation-fixed part of the solution
/// space of a complexified extension.
pub fn realify(pv: &PVExtension) -> Result<PVExtension, PvError> {
    if !pv.is_complexified() {
        return Err(TowerError::Mode("realify expects a complexified extension".into()).into());
    }
    let ext = pv.ext.clone();
    let mut basis = pv.solutions.clone();
    let n = basis.len();
    for j in 0..n {
        let c = pv.solutions[j].conj();
        if express_in_span(&c, &basis).is_none() {
            basis.push(c);
        }
    }
    let m = basis.len();
    let mut conj_mat = Matrix::zeros(m, m);
    for (j, b) in basis.iter().enumerate() {
        let coords = express_in_span(&b.conj(), &basis)
            .ok_or_else(|| PvError::Stabilization(format!("conj({}) leaves V + conj(V)", b.canonical())))?;
        for (k, c) in coords.into_iter().enumerate() {
            conj_mat[(k, j)] = c;
        }
    }
    let p = fixed_vectors(&conj_mat);
    if p.cols() != m {
        return Err(PvError::Stabilization(format!("fixed space has dimension {} instead of {m}", p.cols())));
    }
    let real_base = real_part(&pv.base)?;
    let real_ext = real_part(&ext)?;
    let fixed = combine(&basis, &p, &ext)?;
    let solutions = fixed.iter().map(|v| v.re().embed(&real_ext)).collect::<Result<Vec<_>, _>>()?;
    let ode = if m == n && pv.ode.is_real() {
        LinearODE::new(&real_base, pv.ode.coeffs().iter().map(FieldElement::re).collect())?
    } else {
        ode_from_basis(&solutions, &real_base)?
    };
    let real_z = solution_variable_tower(&real_base, &ode)?;
    let complex_z = complexify_tower(&real_z)?;
    let pinv = p.inverse().expect("fixed basis is invertible");
    let moved = transform_exprs(&pv.gen_exprs, &pv.ztower, &complex_z, &pinv, m)?;
    let gen_exprs =
        moved.into_iter().map(|(name, e)| Ok((name, e.re().embed(&real_z)?))).collect::<Result<Vec<_>, TowerError>>()?;
    let certificates = Certificates::compute(&real_ext, &ode, &solutions, pv.certificates.scan_bounds)?;
    if let Some(c) = certificates.first_failure() {
        return Err(PvError::NotPV { certificate: c.name, detail: c.detail });
    }
    let shape = if p == Matrix::identity(m) { pv.shape.clone() } else { Shape::Custom };
    let class = if m == n { pv.class } else { None };
    Ok(PVExtension { base: real_base, ext: real_ext, solutions, ode, class, shape, ztower: real_z, gen_exprs, certificates })
}

/// Columns `p + iq` spanning `{x : C·conj(x) = x}` over ℚ.
fn fixed_vectors(c: &Matrix) -> Matrix {
    let m = c.rows();
    // x = p + iq; C = A + iB: (A - I)p + Bq = 0 and Bp - (A + I)q = 0
    let mut sys = Matrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            let a = GaussRat::from_rat(c[(i, j)].re.clone());
            let b = GaussRat::from_rat(c[(i, j)].im.clone());
            let delta = if i == j { GaussRat::one() } else { GaussRat::zero() };
            sys[(i, j)] = &a - &delta;
            sys[(i, m + j)] = b.clone();
            sys[(m + i, j)] = b;
            sys[(m + i, m + j)] = -&(&a + &delta);
        }
    }
    let kernel = sys.kernel();
    let mut out = Matrix::zeros(m, kernel.len());
    for (k, v) in kernel.iter().enumerate() {
        for j in 0..m {
            out[(j, k)] = GaussRat::new(v[j].re.clone(), v[m + j].re.clone());
        }
    }
    out
}

/// Rank of the solutions over the constants (via coordinates).
pub fn constant_rank(ys: &[FieldElement]) -> usize {
    coordinates(ys).1.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qt() -> Arc<DiffTower> {
        DiffTower::rational_functions("t")
    }

    fn build(coeffs: &[&str], class: EquationClass) -> Result<PVExtension, PvError> {
        let k = qt();
        let ode = LinearODE::parse(&k, coeffs)?;
        build_pv(&k, &ode, class, &BuildOptions::default())
    }

    #[test]
    fn circle_extension() {
        let pv = build(&["1", "0"], EquationClass::Circle).unwrap();
        assert_eq!(pv.new_generators(), vec!["c", "s"]);
        assert_eq!(pv.ext().rewrite().rules().len(), 1);
        assert_eq!(pv.ext().rewrite().rules()[0].as_poly().canonical(), "1/1*s^2 + 1/1*c^2 + -1/1");
        assert_eq!(pv.certificates().wronskian, pv.ext().parse("-1").unwrap());
        assert!(verify_pv(&pv).unwrap().all_passed());
    }

    #[test]
    fn radical_extension() {
        let pv = build(&["-1/(2*t)"], EquationClass::Radical).unwrap();
        let g = pv.ext().var("g").unwrap();
        assert_eq!(&g * &g, pv.ext().var("t").unwrap());
        assert!(matches!(pv.shape(), Shape::Radical { p: 1, q: 2, .. }));
        let pv3 = build(&["-3/(2*t)"], EquationClass::Radical).unwrap();
        assert!(matches!(pv3.shape(), Shape::Radical { p: 3, q: 2, .. }));
        let neg = build(&["1/(3*t)"], EquationClass::Radical).unwrap();
        assert!(matches!(neg.shape(), Shape::Radical { p: -1, q: 3, .. }));
        assert!(verify_pv(&neg).unwrap().all_passed());
    }

    #[test]
    fn exp_extension_and_degenerate_cases() {
        let pv = build(&["-1"], EquationClass::Exp).unwrap();
        let e = &pv.solutions()[0];
        assert_eq!(e.derive(), *e);
        // e' = e/t makes e/t constant
        let err = build(&["-1/t"], EquationClass::Exp).unwrap_err();
        assert!(matches!(err, PvError::NotPV { .. }));
        let k = DiffTower::constants();
        let ode = LinearODE::parse(&k, &["0"]).unwrap();
        let err = build_pv(&k, &ode, EquationClass::Exp, &BuildOptions::default()).unwrap_err();
        assert!(matches!(err, PvError::NotPV { .. }), "{err}");
    }

    #[test]
    fn class_mismatch() {
        assert!(matches!(build(&["1", "1"], EquationClass::Circle), Err(PvError::UnsupportedEquation(_))));
        assert!(matches!(build(&["2", "0"], EquationClass::Circle), Err(PvError::UnsupportedEquation(_))));
        assert!(matches!(build(&["1"], EquationClass::Circle), Err(PvError::UnsupportedEquation(_))));
        assert!(matches!(build(&["t", "0"], EquationClass::ConstCoeff2), Err(PvError::UnsupportedEquation(_))));
        assert!(matches!(build(&["-2", "0"], EquationClass::ConstCoeff2), Err(PvError::UnsupportedEquation(_))));
    }

    #[test]
    fn constant_coefficient_dispatch() {
        // roots 1, 2
        let pv = build(&["2", "-3"], EquationClass::ConstCoeff2).unwrap();
        assert!(matches!(pv.shape(), Shape::TwoExponentials { k: (1, 2), .. }));
        // roots -1/2, 1/3
        let pv = build(&["-1/6", "1/6"], EquationClass::ConstCoeff2).unwrap();
        assert!(matches!(pv.shape(), Shape::TwoExponentials { k: (-3, 2), .. }));
        // roots 0, 3
        let pv = build(&["0", "-3"], EquationClass::ConstCoeff2).unwrap();
        assert_eq!(pv.solutions()[0], pv.ext().one());
        // double root 1
        let pv = build(&["1", "-2"], EquationClass::ConstCoeff2).unwrap();
        assert!(matches!(pv.shape(), Shape::DoubleRoot { .. }));
        assert_eq!(pv.new_generators(), vec!["E"]);
        // double root 0: nothing to adjoin
        let pv = build(&["0", "0"], EquationClass::ConstCoeff2).unwrap();
        assert!(pv.new_generators().is_empty());
        // 1 ± 2i
        let pv = build(&["5", "-2"], EquationClass::ConstCoeff2).unwrap();
        assert!(matches!(pv.shape(), Shape::Damped { .. }));
        // ± 3i goes through the circle
        let pv = build(&["9", "0"], EquationClass::ConstCoeff2).unwrap();
        assert!(matches!(pv.shape(), Shape::Circle { .. }));
    }

    #[test]
    fn constant_base_double_root_adjoins_t() {
        let k = DiffTower::constants();
        let ode = LinearODE::parse(&k, &["0", "0"]).unwrap();
        let pv = build_pv(&k, &ode, EquationClass::ConstCoeff2, &BuildOptions::default()).unwrap();
        assert_eq!(pv.new_generators(), vec!["t"]);
        let ode = LinearODE::parse(&k, &["4", "-4"]).unwrap();
        let pv = build_pv(&k, &ode, EquationClass::ConstCoeff2, &BuildOptions::default()).unwrap();
        assert_eq!(pv.new_generators(), vec!["t", "E"]);
    }

    #[test]
    fn free_solutions_have_a_constant() {
        let k = qt();
        let ext = k
            .adjoin_text(&[("y1", GeneratorKind::Abstract, "y2", None), ("y2", GeneratorKind::Abstract, "-y1", None)])
            .unwrap();
        let ode = LinearODE::parse(&k, &["1", "0"]).unwrap();
        let sols = vec![ext.var("y1").unwrap(), ext.var("y2").unwrap()];
        let pv = PVExtension::from_parts(&k, &ext, sols, ode, &[("y1", "Z1"), ("y2", "Z2")], (2, 0)).unwrap();
        let rep = verify_pv(&pv).unwrap();
        let scan = rep.check("no new constants").unwrap();
        assert!(!scan.passed());
        assert!(scan.detail.contains("y2^2"), "{}", scan.detail);
    }

    #[test]
    fn realify_swapped_exponentials() {
        let pv = build(&["1", "0"], EquationClass::Circle).unwrap().complexify().unwrap();
        // (c + i s, c - i s)
        let m = Matrix::from_rows(vec![vec![GaussRat::i(), -&GaussRat::i()], vec![GaussRat::one(), GaussRat::one()]]);
        let cx = pv.change_basis(&m).unwrap();
        let real = realify(&cx).unwrap();
        let ext = real.ext();
        assert_eq!(real.solutions()[0], ext.parse("2*c").unwrap());
        assert_eq!(real.solutions()[1], ext.parse("2*s").unwrap());
        assert_eq!(ext.mode(), ConstantsMode::Real);
    }

    #[test]
    fn realify_round_trip_is_identity() {
        for (coeffs, class) in [(&["1", "0"][..], EquationClass::Circle), (&["-1/(2*t)"][..], EquationClass::Radical)] {
            let pv = build(coeffs, class).unwrap();
            let back = realify(&pv.complexify().unwrap()).unwrap();
            assert_eq!(back.ext().rewrite(), pv.ext().rewrite());
            for (a, b) in back.solutions().iter().zip(pv.solutions()) {
                assert_eq!(a.canonical(), b.canonical());
            }
        }
    }

    #[test]
    fn realify_closes_under_conjugation() {
        let circle = build(&["1", "0"], EquationClass::Circle).unwrap().complexify().unwrap();
        let f = circle.base().clone();
        let g = circle.ext().clone();
        let ode = LinearODE::parse(&f, &["-i"]).unwrap();
        let eta = vec![g.parse("c + i*s").unwrap()];
        let pv = PVExtension::from_parts(&f, &g, eta, ode, &[("c", "(Z1 + 1/Z1)/2"), ("s", "(Z1 - 1/Z1)/(2*i)")], (2, 0)).unwrap();
        let real = realify(&pv).unwrap();
        assert_eq!(real.order(), 2);
        assert_eq!(real.ode().to_string(), "Y'' + (1/1)*Y = 0");
    }

    #[test]
    fn twisted_circle_space_realifies_to_the_same_form() {
        let pv = build(&["1", "0"], EquationClass::Circle).unwrap().complexify().unwrap();
        let twisted = pv.change_basis(&Matrix::scalar(2, GaussRat::i())).unwrap();
        let real = realify(&twisted).unwrap();
        assert_eq!(constant_rank(real.solutions()), 2);
        assert_eq!(real.ext().rewrite(), pv.ext().rewrite());
    }

    #[test]
    fn damped_routes_agree() {
        let pv = build(&["5", "-2"], EquationClass::ConstCoeff2).unwrap();
        // complex exponentials x + iy, x - iy, then back
        let m = Matrix::from_rows(vec![vec![GaussRat::one(), GaussRat::one()], vec![GaussRat::i(), -&GaussRat::i()]]);
        let cx = pv.complexify().unwrap().change_basis(&m).unwrap();
        let real = realify(&cx).unwrap();
        assert_eq!(real.ext().rewrite(), pv.ext().rewrite());
        assert_eq!(real.ode().to_string(), pv.ode().to_string());
    }

    #[test]
    fn ode_recovered_from_basis() {
        let pv = build(&["2", "-3"], EquationClass::ConstCoeff2).unwrap();
        let ode = ode_from_basis(pv.solutions(), pv.base()).unwrap();
        assert_eq!(ode.coefficient_strings(), vec!["2/1", "-3/1"]);
    }

    #[test]
    fn z_names() {
        assert_eq!(z_name(2, 3), "Z2'''");
        assert_eq!(parse_z("Z12''"), Some((12, 2)));
        assert_eq!(parse_z("Z"), None);
        assert_eq!(parse_z("t"), None);
        assert_eq!(ext_gcd(-3, 2).2, 1);
        let (a, b, _) = ext_gcd(-3, 2);
        assert_eq!(-3 * a + 2 * b, 1);
    }
}
