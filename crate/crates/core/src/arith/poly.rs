//! Sparse multivariate polynomials over ℚ(i) in a named variable context.
//!
//! Variables are ranked by their index in the [`Ring`]: a higher index is a
//! larger variable. Monomials compare graded-lexicographically: total degree
//! first, then exponents from the largest variable downwards.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::gauss::GaussRat;
use super::ArithError;

/// Variable context. Index order is the variable order (ascending).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
}

impl Ring {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Arc<Ring> {
        Arc::new(Ring { names: names.iter().map(|s| s.as_ref().to_string()).collect() })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// New ring with `extra` appended above the existing variables.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Arc<Ring> {
        let mut names = self.names.clone();
        names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Arc::new(Ring { names })
    }

    /// New ring with `extra` inserted below the existing variables.
    pub fn prepended<S: AsRef<str>>(&self, extra: &[S]) -> Arc<Ring> {
        let mut names: Vec<String> = extra.iter().map(|s| s.as_ref().to_string()).collect();
        names.extend(self.names.iter().cloned());
        Arc::new(Ring { names })
    }
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Dense exponent vector, one slot per ring variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize, exp: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[idx] = exp;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| *a.min(b)).collect())
    }

    fn render(&self, ring: &Ring) -> String {
        let mut parts = Vec::new();
        for idx in (0..self.0.len()).rev() {
            match self.0[idx] {
                0 => {}
                1 => parts.push(ring.names[idx].clone()),
                e => parts.push(format!("{}^{}", ring.names[idx], e)),
            }
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| {
            for idx in (0..self.0.len()).rev() {
                match self.0[idx].cmp(&o.0[idx]) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, GaussRat>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Self) -> bool {
        same_ring(&self.ring, &o.ring) && self.terms == o.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: GaussRat) -> Self {
        Self::term(ring, Monomial::one(ring.len()), c)
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, GaussRat::one())
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: GaussRat) -> Self {
        debug_assert_eq!(m.0.len(), ring.len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { ring: ring.clone(), terms }
    }

    /// The variable at `idx`.
    pub fn var(ring: &Arc<Ring>, idx: usize) -> Self {
        Self::term(ring, Monomial::var(ring.len(), idx, 1), GaussRat::one())
    }

    /// The variable called `name`, if present.
    pub fn named(ring: &Arc<Ring>, name: &str) -> Option<Self> {
        ring.index_of(name).map(|i| Self::var(ring, i))
    }

    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, GaussRat)>) -> Self {
        let mut p = Poly::zero(ring);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, GaussRat> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant polynomials, including zero.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussRat::is_real)
    }

    /// Largest term under the monomial order.
    pub fn leading(&self) -> Option<(&Monomial, &GaussRat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Variables that occur in at least one term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    /// Removes and returns the leading term.
    pub(crate) fn pop_leading(&mut self) -> Option<(Monomial, GaussRat)> {
        self.terms.pop_last()
    }

    /// `self += c·q·p` in place.
    pub(crate) fn add_multiple(&mut self, p: &Poly, q: &Monomial, c: &GaussRat) {
        for (m, v) in &p.terms {
            self.add_term(m.mul(q), &(v * c));
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
        }
    }

    fn check(&self, o: &Poly) -> Result<(), ArithError> {
        if same_ring(&self.ring, &o.ring) {
            Ok(())
        } else {
            Err(ArithError::ContextMismatch)
        }
    }

    pub fn try_add(&self, o: &Poly) -> Result<Poly, ArithError> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &Poly) -> Result<Poly, ArithError> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &Poly) -> Result<Poly, ArithError> {
        self.check(o)?;
        let mut out = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn conj(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Formal partial derivative with respect to variable `idx`.
    pub fn partial(&self, idx: usize) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[idx] -= 1;
            out.add_term(m2, &(c * &GaussRat::from_int(e as i64)));
        }
        out
    }

    /// Greatest common monomial divisor of all terms (one for zero).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.ring.len()),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Divides every term by `m`, assuming it divides them all.
    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, v)| (m.quotient_of(k), v.clone())).collect(),
        }
    }

    /// Exact division in the plain polynomial ring: `Some(q)` iff `self = q·d`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let dinv = dc.inv()?;
        let mut rem = self.clone();
        let mut q = Poly::zero(&self.ring);
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&m) {
                return None;
            }
            let qm = dm.quotient_of(&m);
            let qc = &c * &dinv;
            rem = &rem - &d.mul_monomial(&qm, &qc);
            q.add_term(qm, &qc);
        }
        Some(q)
    }

    /// Re-expresses the polynomial in `target`, sending variable `k` of this
    /// ring to variable `map[k]` of the target.
    pub fn remap(&self, target: &Arc<Ring>, map: &[usize]) -> Poly {
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (k, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[map[k]] += x;
                }
            }
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Re-expresses in a ring whose leading variables are this ring's.
    pub fn extend_to(&self, target: &Arc<Ring>) -> Poly {
        let map: Vec<usize> = (0..self.ring.len()).collect();
        self.remap(target, &map)
    }

    /// Re-expresses in `target` by matching variable names. Errors when a
    /// variable used by this polynomial is absent from the target.
    pub fn rename_into(&self, target: &Arc<Ring>) -> Result<Poly, ArithError> {
        let mut map = Vec::with_capacity(self.ring.len());
        let used = self.support_vars();
        for (k, name) in self.ring.names.iter().enumerate() {
            match target.index_of(name) {
                Some(j) => map.push(j),
                None if used.contains(&k) => return Err(ArithError::UnknownVariable(name.clone())),
                None => map.push(usize::MAX),
            }
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (k, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[map[k]] += x;
                }
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }

    /// Evaluates at a point of ℚ(i)^n.
    pub fn eval(&self, point: &[GaussRat]) -> GaussRat {
        let mut acc = GaussRat::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    v = &v * &point[k].pow(e);
                }
            }
            acc += &v;
        }
        acc
    }

    /// Canonical text: terms in descending monomial order joined by ` + `,
    /// real coefficients as `a/b`, complex ones as `(a/b+c/d*i)`.
    pub fn canonical(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.iter().rev() {
            let coef = if c.is_real() { c.canonical() } else { format!("({})", c.canonical()) };
            if m.is_one() {
                parts.push(coef);
            } else {
                parts.push(format!("{}*{}", coef, m.render(&self.ring)));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    /// Panics on a ring mismatch; use [`Poly::try_add`] to get an error.
    fn add(self, o: &Poly) -> Poly {
        self.try_add(o).expect("polynomial ring mismatch")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.try_sub(o).expect("polynomial ring mismatch")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.try_mul(o).expect("polynomial ring mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc() -> (Arc<Ring>, Poly, Poly) {
        let r = Ring::new(&["c", "s"]);
        let c = Poly::var(&r, 0);
        let s = Poly::var(&r, 1);
        (r, s, c)
    }

    #[test]
    fn cancellation_and_difference_of_squares() {
        let (_r, s, c) = sc();
        let two_s = s.scale(&GaussRat::from_int(2));
        assert_eq!(&(&s + &c) + &(&s - &c), two_s);
        assert_eq!(&(&s + &c) * &(&s - &c), &(&s * &s) - &(&c * &c));
    }

    #[test]
    fn zero_absorbs() {
        let (r, s, c) = sc();
        let p = &(&s * &s) + &c.scale(&GaussRat::frac(3, 7));
        assert!((&Poly::zero(&r) * &p).is_zero());
    }

    #[test]
    fn context_mismatch() {
        let (_r, s, _c) = sc();
        let other = Ring::new(&["x"]);
        let x = Poly::var(&other, 0);
        assert_eq!(s.try_add(&x), Err(ArithError::ContextMismatch));
        assert_eq!(s.try_mul(&x), Err(ArithError::ContextMismatch));
    }

    #[test]
    fn graded_lex_order() {
        let (_r, s, c) = sc();
        let p = &(&(&s * &s) + &(&c * &c)) + &s;
        assert_eq!(p.canonical(), "1/1*s^2 + 1/1*c^2 + 1/1*s");
        let q = &s * &c;
        assert_eq!(q.canonical(), "1/1*s*c");
    }

    #[test]
    fn exact_division() {
        let (_r, s, c) = sc();
        let p = &(&s * &s) - &(&c * &c);
        assert_eq!(p.exact_div(&(&s + &c)), Some(&s - &c));
        assert_eq!(p.exact_div(&s), None);
    }
}
