//! Scenario files and the pipelines run on them.
//!
//! A scenario is a JSON object naming a base field, a linear equation with
//! its class, and the material for the group, correspondence and real-form
//! checks. Expressions use the canonical text form of [`crate::arith`].
//!
//! ```json
//! {
//!   "name": "exp",
//!   "base": { "variable": "t" },
//!   "ode": { "order": 1, "coefficients": ["-1"] },
//!   "class": "EXP",
//!   "lattice": ["FULL", "MU_N(3)", "TRIVIAL"],
//!   "fields": [["e^3"]]
//! }
//! ```
//!
//! `coefficients` lists `a_0, ..., a_{n-1}` of the monic equation. Matrices
//! are rows of constant texts. Unknown keys are rejected.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{parse_fraction, parse_matrix, Matrix};
use crate::correspondence::{
    check_correspondence, fixed_field, group_over, normality_check, weak_normality_demo, Descriptor, IntermediateField, Subgroup, Window,
};
use crate::group::{x_ring, DefiningSet, GaloisGroup, GroupElement};
use crate::pv::{build_pv, verify_pv, BuildOptions, EquationClass, LinearODE, PVExtension};
use crate::real_forms::{h1_report, radical_pair, so2_forms, twist_report, Cocycle, H1Group};
use crate::report::{strings, Check, Report};
use crate::seidenberg::new_constant_demo;
use crate::tower::{DiffTower, FieldElement, GeneratorKind};

pub type MatrixText = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub base: BaseSpec,
    pub ode: OdeSpec,
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radicand: Option<String>,
    /// Reference polynomials for the defining set, compared by mutual
    /// reduction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_group: Option<Vec<String>>,
    /// Designated group elements checked by apply and compose.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub group_samples: Vec<MatrixText>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lattice: Vec<SubgroupSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub normality: Vec<SubgroupSpec>,
    /// Intermediate fields (generator lists) for the weak-normality check.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cocycles: Vec<MatrixText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    /// `None` for the constant field ℚ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorText>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorText {
    pub name: String,
    pub kind: String,
    pub derivative: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeSpec {
    pub order: usize,
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubgroupSpec {
    Named(String),
    List(FiniteListSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteListSpec {
    pub finite_list: Vec<MatrixText>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub degree: u32,
    pub coeff_degree: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub degree: u32,
    pub t_window: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    /// Malformed JSON or schema violation, with its location.
    Syntax { line: usize, column: usize, message: String },
    /// Well-formed but invalid content at `field`.
    Invalid { field: String, message: String },
    Io(String),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Syntax { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            ScenarioError::Invalid { field, message } => write!(f, "{field}: {message}"),
            ScenarioError::Io(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for ScenarioError {}

fn invalid(field: impl Into<String>, message: impl fmt::Display) -> ScenarioError {
    ScenarioError::Invalid { field: field.into(), message: message.to_string() }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    serde_json::from_str(text).map_err(|e| ScenarioError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

/// Scenarios shipped with the crate, by name.
pub const BUILTIN: &[(&str, &str)] = &[
    ("circle", include_str!("../scenarios/circle.json")),
    ("damped", include_str!("../scenarios/damped.json")),
    ("double-root", include_str!("../scenarios/double-root.json")),
    ("exp", include_str!("../scenarios/exp.json")),
    ("radical", include_str!("../scenarios/radical.json")),
    ("two-exponentials", include_str!("../scenarios/two-exponentials.json")),
];

pub fn builtin(name: &str) -> Option<Scenario> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, text)| parse_scenario(text).expect("built-in scenarios parse"))
}

/// A validated scenario: every expression parsed, every descriptor known.
#[derive(Debug, Clone)]
pub struct Plan {
    pub scenario: Scenario,
    pub base: Arc<DiffTower>,
    pub ode: LinearODE,
    pub class: EquationClass,
    pub radicand: Option<FieldElement>,
    pub expected_group: Option<DefiningSet>,
    pub group_samples: Vec<Matrix>,
    pub lattice: Vec<Descriptor>,
    pub normality: Vec<Descriptor>,
    pub cocycles: Vec<Cocycle>,
    pub scan: Option<(u32, u32)>,
    pub window: Window,
}

fn matrix(field: &str, rows: &MatrixText, n: usize) -> Result<Matrix, ScenarioError> {
    let m = parse_matrix(rows).map_err(|e| invalid(field, e))?;
    if m.rows() != n || m.cols() != n {
        return Err(invalid(field, format!("expected a {n}x{n} matrix")));
    }
    Ok(m)
}

fn descriptor(field: &str, spec: &SubgroupSpec, n: usize) -> Result<Descriptor, ScenarioError> {
    match spec {
        SubgroupSpec::Named(s) => Descriptor::parse(s).ok_or_else(|| invalid(field, format!("unknown subgroup descriptor `{s}`"))),
        SubgroupSpec::List(l) => {
            if l.finite_list.is_empty() {
                return Err(invalid(field, "empty finite_list"));
            }
            let ms = l
                .finite_list
                .iter()
                .enumerate()
                .map(|(k, m)| matrix(&format!("{field}.finite_list[{k}]"), m, n))
                .collect::<Result<_, _>>()?;
            Ok(Descriptor::FiniteList(ms))
        }
    }
}

impl Scenario {
    pub fn plan(&self) -> Result<Plan, ScenarioError> {
        let mut base = match &self.base.variable {
            Some(v) => DiffTower::rational_functions(v),
            None => DiffTower::constants(),
        };
        if !self.base.generators.is_empty() {
            let mut specs = Vec::new();
            for (k, g) in self.base.generators.iter().enumerate() {
                let kind = GeneratorKind::from_label(&g.kind)
                    .ok_or_else(|| invalid(format!("base.generators[{k}].kind"), format!("unknown kind `{}`", g.kind)))?;
                specs.push((g.name.as_str(), kind, g.derivative.as_str(), g.relation.as_deref()));
            }
            base = base.adjoin_text(&specs).map_err(|e| invalid("base.generators", e))?;
        }
        if self.ode.order == 0 {
            return Err(invalid("ode.order", "must be at least 1"));
        }
        if self.ode.coefficients.len() != self.ode.order {
            return Err(invalid(
                "ode.coefficients",
                format!("{} coefficients given for order {}", self.ode.coefficients.len(), self.ode.order),
            ));
        }
        for (k, c) in self.ode.coefficients.iter().enumerate() {
            parse_fraction(base.ring(), c).map_err(|e| invalid(format!("ode.coefficients[{k}]"), e))?;
        }
        let ode = LinearODE::parse(&base, &self.ode.coefficients).map_err(|e| invalid("ode", e))?;
        let class = EquationClass::from_label(&self.class).ok_or_else(|| invalid("class", format!("unknown class `{}`", self.class)))?;
        let radicand = match &self.radicand {
            Some(r) => Some(base.parse(r).map_err(|e| invalid("radicand", e))?),
            None => None,
        };
        let n = self.ode.order;
        let expected_group = match &self.expected_group {
            Some(ps) => {
                let ring = x_ring(n);
                for (k, p) in ps.iter().enumerate() {
                    crate::arith::parse_poly(&ring, p).map_err(|e| invalid(format!("expected_group[{k}]"), e))?;
                }
                Some(DefiningSet::parse(n, ps).map_err(|e| invalid("expected_group", e))?)
            }
            None => None,
        };
        let group_samples =
            self.group_samples.iter().enumerate().map(|(k, m)| matrix(&format!("group_samples[{k}]"), m, n)).collect::<Result<_, _>>()?;
        let lattice =
            self.lattice.iter().enumerate().map(|(k, s)| descriptor(&format!("lattice[{k}]"), s, n)).collect::<Result<_, _>>()?;
        let normality =
            self.normality.iter().enumerate().map(|(k, s)| descriptor(&format!("normality[{k}]"), s, n)).collect::<Result<_, _>>()?;
        let cocycles = self
            .cocycles
            .iter()
            .enumerate()
            .map(|(k, m)| matrix(&format!("cocycles[{k}]"), m, n).map(Cocycle::new))
            .collect::<Result<_, _>>()?;
        for (k, f) in self.fields.iter().enumerate() {
            for (j, g) in f.iter().enumerate() {
                if g.trim().is_empty() {
                    return Err(invalid(format!("fields[{k}][{j}]"), "empty generator"));
                }
            }
        }
        let window = match self.window {
            Some(w) => Window { degree: w.degree, t_window: w.t_window },
            None => Window::default(),
        };
        Ok(Plan {
            scenario: self.clone(),
            base,
            ode,
            class,
            radicand,
            expected_group,
            group_samples,
            lattice,
            normality,
            cocycles,
            scan: self.scan.map(|s| (s.degree, s.coeff_degree)),
            window,
        })
    }
}

/// Overrides from the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Settings {
    pub scan_degree: Option<u32>,
    pub scan_coeff_degree: Option<u32>,
}

impl Plan {
    fn scan(&self, settings: &Settings) -> (u32, u32) {
        let (d, e) = self.scan.unwrap_or(crate::pv::DEFAULT_SCAN);
        (settings.scan_degree.unwrap_or(d), settings.scan_coeff_degree.unwrap_or(e))
    }

    pub fn build(&self, settings: &Settings) -> Result<PVExtension, String> {
        let opts = BuildOptions { radicand: self.radicand.clone(), scan: Some(self.scan(settings)) };
        build_pv(&self.base, &self.ode, self.class, &opts).map_err(|e| e.to_string())
    }
}

fn error_report(title: &str, err: impl fmt::Display) -> Report {
    let mut rep = Report::new(title);
    rep.push(Check::new("error", crate::report::Status::Fail, err.to_string()));
    rep
}

/// PV construction and its certificates.
pub fn run_build(plan: &Plan, settings: &Settings) -> Report {
    let title = format!("{}: build", plan.scenario.name);
    let pv = match plan.build(settings) {
        Ok(pv) => pv,
        Err(e) => return error_report(&title, e),
    };
    let mut rep = match verify_pv(&pv) {
        Ok(r) => r,
        Err(e) => return error_report(&title, e),
    };
    rep.title = title;
    rep.put("equation", pv.ode().to_string());
    rep.put("class", pv.class().map_or("CUSTOM", |c| c.label()));
    rep.put("tower", strings(&pv.ext().describe()));
    rep.put("solutions", strings(pv.solutions()));
    rep.put("generators in solutions", strings(&pv.gen_exprs().iter().map(|(g, e)| format!("{g} = {e}")).collect::<Vec<_>>()));
    rep
}

/// Relation ideal, defining set, reference comparison and the action of
/// designated elements.
pub fn run_group(plan: &Plan, settings: &Settings) -> Report {
    let title = format!("{}: group", plan.scenario.name);
    match group_inner(plan, settings) {
        Ok(mut r) => {
            r.title = title;
            r
        }
        Err(e) => error_report(&title, e),
    }
}

fn group_inner(plan: &Plan, settings: &Settings) -> Result<Report, String> {
    let pv = plan.build(settings)?;
    let g = GaloisGroup::new(&pv).map_err(|e| e.to_string())?;
    let mut rep = Report::new("");
    rep.put("relations", strings(&g.relations().canonical()));
    rep.put("defining set", strings(&g.defining().canonical()));
    if let Some(expected) = &plan.expected_group {
        let same = crate::arith::groebner::same_ideal(g.defining().polys(), expected.polys(), crate::arith::budget()).map_err(|e| e.to_string())?;
        rep.push(Check::pass_if("defining set matches the reference by mutual reduction", same, expected.to_string()));
    }
    let n = g.size();
    let samples: Vec<Matrix> = if plan.group_samples.is_empty() {
        g.sample_members().into_iter().map(|s| s.matrix).take(6).collect()
    } else {
        plan.group_samples.clone()
    };
    let gens: Vec<FieldElement> = pv.new_generators().iter().map(|x| pv.ext().var(x)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let mut actions = Vec::new();
    for m in &samples {
        let member = g.is_member(m);
        let morphism = g.annihilates_relations(m).map_err(|e| e.to_string())?;
        rep.push(Check::pass_if(format!("{} is a member inducing a morphism", m.canonical()), member && morphism, ""));
        if member {
            for x in &gens {
                let img = g.apply(&GroupElement::new(m.clone()), x).map_err(|e| e.to_string())?;
                actions.push(format!("{}: {} ↦ {}", m.canonical(), x, img));
            }
        }
    }
    rep.put("actions", strings(&actions));
    let members: Vec<GroupElement> = samples.iter().filter(|m| g.is_member(m)).cloned().map(GroupElement::new).collect();
    let mut composes = true;
    for a in &members {
        for b in &members {
            let ab = g.compose(a, b).map_err(|e| e.to_string())?;
            composes &= g.is_member(&ab.matrix);
            for x in &gens {
                let lhs = g.apply(&ab, x).map_err(|e| e.to_string())?;
                let rhs = g.apply(a, &g.apply(b, x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                composes &= lhs == rhs;
            }
        }
    }
    rep.push(Check::pass_if("composition of designated members acts as the composite", composes, format!("{} members", members.len())));
    let id = GroupElement::identity(n);
    let fixes = gens.iter().all(|x| g.apply(&id, x).map(|y| y == x.embed(g.g_tower()).unwrap()).unwrap_or(false));
    rep.push(Check::pass_if("identity acts trivially", fixes, ""));
    Ok(rep)
}

/// Lattice round trips, normality and weak normality.
pub fn run_correspond(plan: &Plan, settings: &Settings) -> Report {
    let title = format!("{}: correspondence", plan.scenario.name);
    match correspond_inner(plan, settings) {
        Ok(mut r) => {
            r.title = title;
            r
        }
        Err(e) => error_report(&title, e),
    }
}

fn correspond_inner(plan: &Plan, settings: &Settings) -> Result<Report, String> {
    let pv = plan.build(settings)?;
    let g = GaloisGroup::new(&pv).map_err(|e| e.to_string())?;
    let w = plan.window;
    let mut rep = Report::new("");
    let lattice: Vec<Subgroup> =
        plan.lattice.iter().map(|d| Subgroup::from_descriptor(&g, d.clone())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    if !lattice.is_empty() {
        rep.absorb("", check_correspondence(&g, &lattice, w).map_err(|e| e.to_string())?);
    }
    for d in &plan.normality {
        let h = Subgroup::from_descriptor(&g, d.clone()).map_err(|e| e.to_string())?;
        rep.absorb(&format!("normality {}: ", d.label()), normality_check(&g, &h, w).map_err(|e| e.to_string())?);
    }
    for f in &plan.scenario.fields {
        let e = IntermediateField::parse(&pv, f).map_err(|e| e.to_string())?;
        let h = group_over(&g, &e).and_then(|h| h.identified(&g)).map_err(|e| e.to_string())?;
        let label = e.describe();
        rep.put(&format!("group over {label}"), h.label());
        let back = fixed_field(&g, &h, w).map_err(|e| e.to_string())?;
        rep.push(Check::pass_if(format!("{label}: fixed field of its group"), back.same_as(&e, w), back.describe()));
        rep.absorb(&format!("{label}: "), weak_normality_demo(&g, &e).map_err(|e| e.to_string())?);
    }
    Ok(rep)
}

/// The tabulated group for a class, if any.
pub fn h1_group(class: EquationClass) -> Option<H1Group> {
    match class {
        EquationClass::Exp => Some(H1Group::Gl1),
        EquationClass::Radical => Some(H1Group::Mu2),
        EquationClass::Circle => Some(H1Group::So2),
        EquationClass::ConstCoeff2 => None,
    }
}

/// Cocycle twists, witnesses and, for radicals, the sign comparison.
pub fn run_twist(plan: &Plan, settings: &Settings) -> Report {
    let title = format!("{}: twist", plan.scenario.name);
    match twist_inner(plan, settings) {
        Ok(mut r) => {
            r.title = title;
            r
        }
        Err(e) => error_report(&title, e),
    }
}

fn twist_inner(plan: &Plan, settings: &Settings) -> Result<Report, String> {
    let pv = plan.build(settings)?;
    let mut rep = Report::new("");
    if let Some(h) = h1_group(plan.class) {
        rep.absorb("", h1_report(h).map_err(|e| e.to_string())?);
    }
    for a in &plan.cocycles {
        rep.absorb(&format!("{a}: "), twist_report(&pv, a).map_err(|e| e.to_string())?);
    }
    if plan.class == EquationClass::Radical && !plan.cocycles.is_empty() {
        rep.absorb("pair: ", radical_pair(&pv).map_err(|e| e.to_string())?);
    }
    Ok(rep)
}

pub const DEMOS: &[&str] = &["radical-forms", "seidenberg", "so2-forms", "weak-normality"];

/// Built-in demonstrations by name.
pub fn run_demo(name: &str, settings: &Settings) -> Option<Report> {
    let title = format!("demo {name}");
    let result: Result<Report, String> = match name {
        "weak-normality" => weak_normality(settings),
        "so2-forms" => builtin_plan("circle")
            .and_then(|p| p.build(settings))
            .and_then(|pv| so2_forms(&pv).map_err(|e| e.to_string())),
        "radical-forms" => builtin_plan("radical").and_then(|p| p.build(settings)).and_then(|pv| {
            let mut rep = h1_report(H1Group::Mu2).map_err(|e| e.to_string())?;
            rep.absorb("", radical_pair(&pv).map_err(|e| e.to_string())?);
            Ok(rep)
        }),
        "seidenberg" => new_constant_demo().map_err(|e| e.to_string()),
        _ => return None,
    };
    Some(match result {
        Ok(mut r) => {
            r.title = title;
            r
        }
        Err(e) => error_report(&title, e),
    })
}

fn builtin_plan(name: &str) -> Result<Plan, String> {
    builtin(name).ok_or_else(|| format!("no built-in scenario {name}"))?.plan().map_err(|e| e.to_string())
}

fn weak_normality(settings: &Settings) -> Result<Report, String> {
    let pv = builtin_plan("exp")?.build(settings)?;
    let g = GaloisGroup::new(&pv).map_err(|e| e.to_string())?;
    let mut rep = Report::new("");
    let f = IntermediateField::parse(&pv, &["e^3"]).map_err(|e| e.to_string())?;
    let inner = weak_normality_demo(&g, &f).map_err(|e| e.to_string())?;
    let real = inner.data.get("real automorphisms").cloned();
    let complex = inner.data.get("complexified elements").cloned();
    rep.absorb("F = K(e^3): ", inner);
    rep.push(Check::pass_if(
        "exactly one real automorphism fixes K(e^3)",
        real.as_ref().and_then(|v| v.as_str()) == Some("1"),
        "",
    ));
    rep.push(Check::pass_if(
        "complexified group over K(e^3) has three elements",
        complex.as_ref().and_then(|v| v.as_str()) == Some("3"),
        "",
    ));
    rep.absorb("F = K: ", weak_normality_demo(&g, &IntermediateField::base(&pv)).map_err(|e| e.to_string())?);
    let whole = IntermediateField::whole(&pv).map_err(|e| e.to_string())?;
    rep.absorb("F = L: ", weak_normality_demo(&g, &whole).map_err(|e| e.to_string())?);
    Ok(rep)
}

/// Every pipeline on every built-in scenario, then every demo. Scenarios
/// run on separate threads; results are ordered by name.
pub fn run_all(settings: &Settings) -> Vec<Report> {
    let plans: Vec<Plan> = BUILTIN.iter().map(|(n, _)| builtin_plan(n).expect("built-in scenarios validate")).collect();
    let mut per_scenario: Vec<Vec<Report>> = std::thread::scope(|s| {
        let handles: Vec<_> = plans
            .iter()
            .map(|p| {
                s.spawn(move || {
                    let mut out = vec![run_build(p, settings), run_group(p, settings)];
                    if !p.lattice.is_empty() || !p.normality.is_empty() || !p.scenario.fields.is_empty() {
                        out.push(run_correspond(p, settings));
                    }
                    if !p.cocycles.is_empty() {
                        out.push(run_twist(p, settings));
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread")).collect()
    });
    let mut out: Vec<Report> = per_scenario.drain(..).flatten().collect();
    for d in DEMOS {
        out.push(run_demo(d, settings).expect("known demo"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for (name, _) in BUILTIN {
            let s = builtin(name).unwrap();
            assert_eq!(&s.name, name);
            s.plan().unwrap();
        }
    }

    #[test]
    fn missing_order_names_the_field() {
        let text = r#"{"name": "x", "base": {"variable": "t"}, "ode": {"coefficients": ["1"]}, "class": "EXP"}"#;
        let err = parse_scenario(text).unwrap_err();
        assert!(err.to_string().contains("order"), "{err}");
        assert!(matches!(err, ScenarioError::Syntax { line: 1, .. }));
    }

    #[test]
    fn unknown_keys_and_bad_values_rejected() {
        let text = r#"{"name": "x", "base": {"variable": "t"}, "ode": {"order": 1, "coefficients": ["1"]}, "class": "EXP", "colour": 1}"#;
        assert!(parse_scenario(text).unwrap_err().to_string().contains("colour"));
        let text = r#"{"name": "x", "base": {"variable": "t"}, "ode": {"order": 2, "coefficients": ["1"]}, "class": "EXP"}"#;
        let err = parse_scenario(text).unwrap().plan().unwrap_err();
        assert_eq!(err, ScenarioError::Invalid { field: "ode.coefficients".into(), message: "1 coefficients given for order 2".into() });
        let text = r#"{"name": "x", "base": {"variable": "t"}, "ode": {"order": 1, "coefficients": ["1"]}, "class": "EXP", "lattice": ["MU_N(x)"]}"#;
        assert!(matches!(parse_scenario(text).unwrap().plan(), Err(ScenarioError::Invalid { field, .. }) if field == "lattice[0]"));
    }
}
