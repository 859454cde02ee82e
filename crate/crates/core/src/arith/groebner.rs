//! Buchberger completion and normal forms modulo a polynomial ideal.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use num_traits::One;

use super::gauss::GaussRat;
use super::poly::{same_ring, Monomial, Poly, Ring};
use super::ArithError;

/// Default cap on S-polynomial reductions per completion.
pub const DEFAULT_BUDGET: usize = 10_000;

static BUDGET: AtomicUsize = AtomicUsize::new(DEFAULT_BUDGET);

/// Process-wide step budget used by the higher-level routines.
pub fn budget() -> usize {
    BUDGET.load(Ordering::Relaxed)
}

pub fn set_budget(steps: usize) {
    BUDGET.store(steps, Ordering::Relaxed);
}

/// `lead → replacement`, where the originating basis element was
/// `lead - replacement` (monic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lead: Monomial,
    pub replacement: Poly,
}

impl Rule {
    pub fn as_poly(&self) -> Poly {
        let lead = Poly::term(self.replacement.ring(), self.lead.clone(), GaussRat::one());
        &lead - &self.replacement
    }
}

/// A reduced Gröbner basis presented as rewrite rules. Graded-lex order
/// with higher-indexed variables larger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    ring: Arc<Ring>,
    rules: Vec<Rule>,
}

impl RewriteSystem {
    /// The system with no rules (the zero ideal).
    pub fn empty(ring: &Arc<Ring>) -> Self {
        RewriteSystem { ring: ring.clone(), rules: Vec::new() }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Basis polynomials `lead - replacement`, in rule order.
    pub fn basis(&self) -> Vec<Poly> {
        self.rules.iter().map(Rule::as_poly).collect()
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit_ideal(&self) -> bool {
        self.rules.iter().any(|r| r.lead.is_one())
    }

    /// Same rules in a different order. Normal forms must not change.
    pub fn with_rule_order(&self, perm: &[usize]) -> RewriteSystem {
        RewriteSystem {
            ring: self.ring.clone(),
            rules: perm.iter().map(|&i| self.rules[i].clone()).collect(),
        }
    }

    /// Re-expresses the rules in a larger ring (see [`Poly::remap`]).
    pub fn remap(&self, target: &Arc<Ring>, map: &[usize]) -> RewriteSystem {
        let rules = self
            .rules
            .iter()
            .map(|r| {
                let lead_poly = Poly::term(self.ring(), r.lead.clone(), GaussRat::one()).remap(target, map);
                let lead = lead_poly.leading().expect("nonzero").0.clone();
                Rule { lead, replacement: r.replacement.remap(target, map) }
            })
            .collect();
        RewriteSystem { ring: target.clone(), rules }
    }

    /// Fully reduces `p`: no term of the result is divisible by a rule's lead.
    pub fn normal_form(&self, p: &Poly) -> Poly {
        debug_assert!(same_ring(&self.ring, p.ring()), "normal_form: ring mismatch");
        if self.rules.is_empty() {
            return p.clone();
        }
        let mut rest = p.clone();
        let mut out = Poly::zero(p.ring());
        while let Some((m, c)) = rest.pop_leading() {
            match self.rules.iter().find(|r| r.lead.divides(&m)) {
                Some(rule) => {
                    let q = rule.lead.quotient_of(&m);
                    rest.add_multiple(&rule.replacement, &q, &c);
                }
                None => out.add_term(m, &c),
            }
        }
        out
    }

    /// Reduction that rewrites an arbitrary reducible term with an arbitrary
    /// applicable rule at each step. `choose(n)` must return an index below
    /// `n`. The result equals [`normal_form`](Self::normal_form) for any
    /// choice sequence because the system is confluent.
    pub fn normal_form_by<F: FnMut(usize) -> usize>(&self, p: &Poly, mut choose: F) -> Poly {
        let mut cur = p.clone();
        loop {
            let reducible: Vec<(Monomial, GaussRat)> = cur
                .terms()
                .iter()
                .filter(|(m, _)| self.rules.iter().any(|r| r.lead.divides(m)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect();
            if reducible.is_empty() {
                return cur;
            }
            let (m, c) = &reducible[choose(reducible.len())];
            let applicable: Vec<&Rule> = self.rules.iter().filter(|r| r.lead.divides(m)).collect();
            let rule = applicable[choose(applicable.len())];
            let q = rule.lead.quotient_of(m);
            cur = &cur - &Poly::term(cur.ring(), m.clone(), c.clone());
            cur = &cur + &rule.replacement.mul_monomial(&q, c);
        }
    }

    pub fn reduces_to_zero(&self, p: &Poly) -> bool {
        self.normal_form(p).is_zero()
    }
}

fn reduce_by(p: &Poly, basis: &[Poly]) -> Poly {
    let rules: Vec<Rule> = basis.iter().map(to_rule).collect();
    RewriteSystem { ring: p.ring().clone(), rules }.normal_form(p)
}

fn to_rule(g: &Poly) -> Rule {
    let g = g.monic();
    let (m, _) = g.leading().expect("nonzero basis element");
    let lead = m.clone();
    let head = Poly::term(g.ring(), lead.clone(), GaussRat::one());
    Rule { replacement: &head - &g, lead }
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let (mf, cf) = f.leading().expect("nonzero");
    let (mg, cg) = g.leading().expect("nonzero");
    let l = mf.lcm(mg);
    let a = f.mul_monomial(&mf.quotient_of(&l), &cf.inv().expect("nonzero"));
    let b = g.mul_monomial(&mg.quotient_of(&l), &cg.inv().expect("nonzero"));
    &a - &b
}

/// Buchberger completion of `generators` to a reduced Gröbner basis.
///
/// Each S-polynomial reduction consumes one unit of `budget`.
pub fn buchberger(generators: &[Poly], budget: usize) -> Result<RewriteSystem, ArithError> {
    let ring = match generators.first() {
        Some(g) => g.ring().clone(),
        None => return Err(ArithError::EmptyInput),
    };
    for g in generators {
        if !same_ring(&ring, g.ring()) {
            return Err(ArithError::ContextMismatch);
        }
    }
    let mut basis: Vec<Poly> = generators.iter().filter(|g| !g.is_zero()).map(Poly::monic).collect();
    let mut pairs: VecDeque<(usize, usize)> = VecDeque::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push_back((i, j));
        }
    }
    let mut steps = 0usize;
    while let Some((i, j)) = pairs.pop_front() {
        let (mi, mj) = (basis[i].leading().unwrap().0, basis[j].leading().unwrap().0);
        // coprime leading monomials: S-polynomial reduces to zero
        if mi.gcd(mj).is_one() {
            continue;
        }
        steps += 1;
        if steps > budget {
            return Err(ArithError::BudgetExceeded { budget });
        }
        let r = reduce_by(&s_poly(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r.monic());
            for i in 0..k {
                pairs.push_back((i, k));
            }
        }
    }
    Ok(RewriteSystem { rules: interreduce(basis), ring })
}

fn interreduce(basis: Vec<Poly>) -> Vec<Rule> {
    // drop elements whose lead is divisible by another lead
    let mut kept: Vec<Poly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let m = g.leading().unwrap().0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let hm = h.leading().unwrap().0;
            j != i && hm.divides(m) && (hm != m || j < i)
        });
        if !redundant {
            kept.push(g.clone());
        }
    }
    let mut out: Vec<Poly> = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<Poly> = kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        let g = &kept[i];
        let (m, c) = g.leading().unwrap();
        let head = Poly::term(g.ring(), m.clone(), c.clone());
        let tail = reduce_by(&(g - &head), &others);
        out.push((&head + &tail).monic());
    }
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    out.iter().map(to_rule).collect()
}

/// Ideal membership: `p ∈ ⟨generators⟩`.
pub fn ideal_contains(generators: &[Poly], p: &Poly, budget: usize) -> Result<bool, ArithError> {
    if generators.iter().all(Poly::is_zero) {
        return Ok(p.is_zero());
    }
    Ok(buchberger(generators, budget)?.reduces_to_zero(p))
}

/// Radical membership `p ∈ √⟨generators⟩` by the Rabinowitsch trick:
/// `1 ∈ ⟨generators, 1 - y·p⟩` in a ring with one extra variable.
pub fn radical_contains(generators: &[Poly], p: &Poly, budget: usize) -> Result<bool, ArithError> {
    if p.is_zero() {
        return Ok(true);
    }
    let ring = p.ring();
    let ext = ring.extended(&["_rabinowitsch"]);
    let y = Poly::var(&ext, ring.len());
    let mut gens: Vec<Poly> = generators.iter().map(|g| g.extend_to(&ext)).collect();
    gens.push(&Poly::one(&ext) - &(&y * &p.extend_to(&ext)));
    Ok(buchberger(&gens, budget)?.is_unit_ideal())
}

/// Mutual ideal containment of the two generating sets.
pub fn same_ideal(a: &[Poly], b: &[Poly], budget: usize) -> Result<bool, ArithError> {
    for p in b {
        if !ideal_contains(a, p, budget)? {
            return Ok(false);
        }
    }
    for p in a {
        if !ideal_contains(b, p, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality of zero sets over the algebraic closure (mutual radical containment).
pub fn same_zero_set(a: &[Poly], b: &[Poly], budget: usize) -> Result<bool, ArithError> {
    Ok(zero_set_contained(a, b, budget)? && zero_set_contained(b, a, budget)?)
}

/// `V(a) ⊆ V(b)`, i.e. every element of `b` lies in `√⟨a⟩`.
pub fn zero_set_contained(a: &[Poly], b: &[Poly], budget: usize) -> Result<bool, ArithError> {
    for p in b {
        if !radical_contains(a, p, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_poly;

    fn ring() -> Arc<Ring> {
        Ring::new(&["t", "c", "s"])
    }

    #[test]
    fn circle_is_one_rule() {
        let r = ring();
        let g = parse_poly(&r, "s^2 + c^2 - 1").unwrap();
        let rs = buchberger(&[g], DEFAULT_BUDGET).unwrap();
        assert_eq!(rs.rules().len(), 1);
        assert_eq!(rs.rules()[0].lead, Monomial(vec![0, 0, 2]));
        assert_eq!(rs.rules()[0].replacement, parse_poly(&r, "1 - c^2").unwrap());
    }

    #[test]
    fn normal_form_examples() {
        let r = ring();
        let rs = buchberger(&[parse_poly(&r, "s^2 + c^2 - 1").unwrap()], DEFAULT_BUDGET).unwrap();
        let nf = |s: &str| rs.normal_form(&parse_poly(&r, s).unwrap());
        assert_eq!(nf("s^2"), parse_poly(&r, "1 - c^2").unwrap());
        assert_eq!(nf("s^3"), parse_poly(&r, "s - s*c^2").unwrap());
        assert_eq!(nf("c^2"), parse_poly(&r, "c^2").unwrap());
    }

    #[test]
    fn radical_tower_rule() {
        let r = Ring::new(&["t", "g"]);
        let rs = buchberger(&[parse_poly(&r, "g^2 - t").unwrap()], DEFAULT_BUDGET).unwrap();
        assert_eq!(rs.rules().len(), 1);
        assert_eq!(rs.rules()[0].replacement, parse_poly(&r, "t").unwrap());
    }

    #[test]
    fn linear_chain() {
        let r = Ring::new(&["z", "y", "x"]);
        let gens = [parse_poly(&r, "x - y").unwrap(), parse_poly(&r, "y - z").unwrap()];
        let rs = buchberger(&gens, DEFAULT_BUDGET).unwrap();
        let z = parse_poly(&r, "z").unwrap();
        assert_eq!(rs.rules().len(), 2);
        assert!(rs.rules().iter().all(|rule| rule.replacement == z));
        assert!(rs.reduces_to_zero(&parse_poly(&r, "x - z").unwrap()));
        for g in &gens {
            assert!(rs.reduces_to_zero(g));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let r = Ring::new(&["z", "y", "x"]);
        let gens = [
            parse_poly(&r, "x^2*y - z^3").unwrap(),
            parse_poly(&r, "x*y^2 - z^2 + x").unwrap(),
            parse_poly(&r, "y^3 - x*z").unwrap(),
        ];
        assert_eq!(buchberger(&gens, 1), Err(ArithError::BudgetExceeded { budget: 1 }));
        let rs = buchberger(&gens, DEFAULT_BUDGET).unwrap();
        for g in &gens {
            assert!(rs.reduces_to_zero(g));
        }
    }

    #[test]
    fn radical_membership() {
        let r = Ring::new(&["x"]);
        let x = parse_poly(&r, "x").unwrap();
        let x2 = parse_poly(&r, "x^2").unwrap();
        assert!(!ideal_contains(std::slice::from_ref(&x2), &x, DEFAULT_BUDGET).unwrap());
        assert!(radical_contains(std::slice::from_ref(&x2), &x, DEFAULT_BUDGET).unwrap());
        assert!(same_zero_set(&[x2], &[x], DEFAULT_BUDGET).unwrap());
    }
}
