//! Seidenberg's field: constants ℚ with `a' = b`, `b' = -4a` and
//! `4a² + b² + 1 = 0`, so `-1 = (2a)² + b²` is a sum of squares.

use std::sync::Arc;

use crate::arith::Poly;
use crate::real_forms::{non_reality_witness, RealityWitness};
use crate::report::{strings, Check, Report};
use crate::tower::{constant_scan, express_in_span, DiffTower, FieldElement, GeneratorKind, TowerError};

pub const RELATION: &str = "4*a^2 + b^2 + 1";

#[derive(Debug, Clone)]
pub struct SeidenbergField {
    tower: Arc<DiffTower>,
}

pub fn build_seidenberg() -> Result<SeidenbergField, TowerError> {
    let tower = DiffTower::constants().adjoin_text(&[
        ("a", GeneratorKind::Abstract, "b", None),
        ("b", GeneratorKind::Algebraic, "-4*a", Some(RELATION)),
    ])?;
    Ok(SeidenbergField { tower })
}

impl SeidenbergField {
    pub fn tower(&self) -> &Arc<DiffTower> {
        &self.tower
    }

    pub fn a(&self) -> FieldElement {
        self.tower.var("a").expect("generator a")
    }

    pub fn b(&self) -> FieldElement {
        self.tower.var("b").expect("generator b")
    }

    /// Chain-rule derivative of the relation before any reduction:
    /// `8a·b + 2b·(-4a)`.
    pub fn relation_derivative(&self) -> Poly {
        let ring = self.tower.ring();
        let rel = crate::arith::parse_poly(ring, RELATION).expect("relation parses");
        let mut acc = Poly::zero(ring);
        for v in rel.support_vars() {
            let d = self.tower.derivation_of(v);
            let der = d.num().exact_div(d.den()).expect("polynomial derivation");
            acc = &acc + &(&rel.partial(v) * &der);
        }
        acc
    }

    pub fn witness(&self) -> Option<RealityWitness> {
        non_reality_witness(&self.tower)
    }
}

/// Abstract solutions `y_k' = z_k`, `z_k' = -y_k` of `Y'' + Y = 0` over the
/// field, scanned for constants.
pub fn solution_tower(field: &SeidenbergField) -> Result<Arc<DiffTower>, TowerError> {
    field.tower.adjoin_text(&[
        ("y1", GeneratorKind::Abstract, "z1", None),
        ("z1", GeneratorKind::Abstract, "-y1", None),
        ("y2", GeneratorKind::Abstract, "z2", None),
        ("z2", GeneratorKind::Abstract, "-y2", None),
    ])
}

/// The field checks, the witness and the constants produced by adjoining
/// two solutions of `Y'' + Y = 0`.
pub fn new_constant_demo() -> Result<Report, TowerError> {
    let mut rep = Report::new("Seidenberg field");
    let f = build_seidenberg()?;
    rep.put("tower", strings(&f.tower.describe()));
    let raw = f.relation_derivative();
    rep.push(Check::pass_if("relation derivative vanishes identically", raw.is_zero(), "8ab + 2b(-4a) = 0"));
    rep.push(Check::pass_if("a is not constant", !f.a().is_constant(), format!("a' = {}", f.a().derive())));
    match f.witness() {
        Some(w) => {
            rep.push(Check::pass_if("sum of squares equals -1", w.verify(), w.to_string()));
            rep.put("witness", strings(&w.canonical()));
        }
        None => rep.push(Check::pass_if("sum of squares equals -1", false, "no witness found within bounds")),
    }
    let l = solution_tower(&f)?;
    let found = constant_scan(&l, 2, 0);
    rep.put("scan bounds", "degree 2");
    rep.put("scan constants", strings(&found));
    rep.push(Check::pass_if("scan constants have zero derivative", found.iter().all(|c| c.derive().is_zero()), format!("{} found", found.len())));
    for (label, text) in [("y1^2 + z1^2", "y1^2 + z1^2"), ("y2^2 + z2^2", "y2^2 + z2^2"), ("wronskian y1*z2 - y2*z1", "y1*z2 - y2*z1")] {
        let c = l.parse(text)?;
        let ok = c.derive().is_zero() && express_in_span(&c, &found).is_some() && c.constant_value().is_none();
        rep.push(Check::pass_if(format!("new constant {label}"), ok, "zero derivative, not a base constant"));
    }
    rep.push(Check::info("scope", "evidence for the obstruction within this presentation, not a proof of nonexistence"));
    // contrast: y^2 + z^2 = 1 gives the circle tower over the same base
    let circle = f.tower.adjoin_text(&[
        ("z", GeneratorKind::Algebraic, "-y", None),
        ("y", GeneratorKind::Algebraic, "z", Some("y^2 + z^2 - 1")),
    ])?;
    rep.put("circle tower", strings(&circle.describe()));
    let circle_constants = constant_scan(&circle, 3, 0);
    rep.push(Check::pass_if(
        "circle tower constants have zero derivative",
        circle_constants.iter().all(|c| c.derive().is_zero()),
        format!("{} found up to degree 3", circle_constants.len()),
    ));
    rep.put("circle tower constants", strings(&circle_constants));
    Ok(rep)
}
