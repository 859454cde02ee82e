//! Fractions of polynomials modulo a prime relation ideal.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::gauss::GaussRat;
use super::groebner::RewriteSystem;
use super::poly::{Poly, Ring};
use super::ArithError;

/// `num / den` with both parts in normal form and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Normalizes `num / den` against `rs`.
    pub fn new(num: Poly, den: Poly, rs: &RewriteSystem) -> Result<RatFunc, ArithError> {
        let den = rs.normal_form(&den);
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let num = rs.normal_form(&num);
        Ok(Self::simplify(num, den, rs))
    }

    pub fn from_poly(p: Poly, rs: &RewriteSystem) -> RatFunc {
        let den = Poly::one(p.ring());
        RatFunc { num: rs.normal_form(&p), den }
    }

    pub fn zero(ring: &Arc<Ring>) -> RatFunc {
        RatFunc { num: Poly::zero(ring), den: Poly::one(ring) }
    }

    pub fn constant(ring: &Arc<Ring>, c: GaussRat) -> RatFunc {
        RatFunc { num: Poly::constant(ring, c), den: Poly::one(ring) }
    }

    /// Builds without normalizing. Callers guarantee the invariants.
    pub(crate) fn raw(num: Poly, den: Poly) -> RatFunc {
        RatFunc { num, den }
    }

    fn simplify(num: Poly, den: Poly, rs: &RewriteSystem) -> RatFunc {
        let ring = num.ring().clone();
        if num.is_zero() {
            return RatFunc::zero(&ring);
        }
        if let Some(c) = den.constant_value() {
            let inv = c.inv().expect("nonzero denominator");
            return RatFunc { num: num.scale(&inv), den: Poly::one(&ring) };
        }
        if let Some(q) = num.exact_div(&den) {
            return RatFunc { num: rs.normal_form(&q), den: Poly::one(&ring) };
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_monomial(&g), den.div_monomial(&g)) };
        if let Some(q) = den.exact_div(&num) {
            // num divides den: (1 / q)
            if !q.is_zero() {
                let q = rs.normal_form(&q);
                let lc = q.leading().map(|(_, c)| c.clone()).unwrap_or_else(GaussRat::one);
                let inv = lc.inv().expect("nonzero");
                return RatFunc { num: Poly::constant(&ring, inv.clone()), den: q.scale(&inv) };
            }
        }
        let lc = den.leading().expect("nonzero").1.clone();
        let inv = lc.inv().expect("nonzero");
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn add(&self, o: &RatFunc, rs: &RewriteSystem) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone(), rs).expect("nonzero denominator");
        }
        if self.den == o.den {
            let num = &self.num + &o.num;
            if self.is_polynomial() {
                return if num.is_zero() { RatFunc::zero(self.ring()) } else { RatFunc { num, den: self.den.clone() } };
            }
            return Self::simplify(num, self.den.clone(), rs);
        }
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::new(num, &self.den * &o.den, rs).expect("product of nonzero denominators in a domain")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc, rs: &RewriteSystem) -> RatFunc {
        self.add(&o.neg(), rs)
    }

    pub fn mul(&self, o: &RatFunc, rs: &RewriteSystem) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.ring());
        }
        if self.is_polynomial() && o.is_polynomial() {
            return RatFunc::from_poly(&self.num * &o.num, rs);
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den, rs).expect("product of nonzero denominators in a domain")
    }

    pub fn scale(&self, c: &GaussRat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.ring());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self, rs: &RewriteSystem) -> Result<RatFunc, ArithError> {
        if self.num.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone(), rs)
    }

    pub fn div(&self, o: &RatFunc, rs: &RewriteSystem) -> Result<RatFunc, ArithError> {
        Ok(self.mul(&o.inv(rs)?, rs))
    }

    pub fn pow(&self, e: i32, rs: &RewriteSystem) -> Result<RatFunc, ArithError> {
        let base = if e < 0 { self.inv(rs)? } else { self.clone() };
        let mut acc = RatFunc::constant(self.ring(), GaussRat::one());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base, rs);
        }
        Ok(acc)
    }

    /// `a/b = c/d` iff `ad - bc` reduces to zero.
    pub fn equals(&self, o: &RatFunc, rs: &RewriteSystem) -> bool {
        let cross = &(&self.num * &o.den) - &(&o.num * &self.den);
        rs.reduces_to_zero(&cross)
    }

    pub fn conj(&self) -> RatFunc {
        RatFunc { num: self.num.conj(), den: self.den.conj() }
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }

    pub fn remap(&self, target: &Arc<Ring>, map: &[usize]) -> RatFunc {
        RatFunc { num: self.num.remap(target, map), den: self.den.remap(target, map) }
    }

    /// `num` when the denominator is one, else `(num)/(den)`.
    pub fn canonical(&self) -> String {
        if self.is_polynomial() {
            self.num.canonical()
        } else {
            format!("({})/({})", self.num.canonical(), self.den.canonical())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::groebner::{buchberger, DEFAULT_BUDGET};
    use crate::arith::parse::{parse_fraction, parse_poly};

    fn circle() -> (Arc<Ring>, RewriteSystem) {
        let r = Ring::new(&["t", "c", "s"]);
        let rs = buchberger(&[parse_poly(&r, "s^2 + c^2 - 1").unwrap()], DEFAULT_BUDGET).unwrap();
        (r, rs)
    }

    fn rf(r: &Arc<Ring>, rs: &RewriteSystem, text: &str) -> RatFunc {
        let f = parse_fraction(r, text).unwrap();
        RatFunc::new(f.num, f.den, rs).unwrap()
    }

    #[test]
    fn one_minus_c_squared_over_s_is_s() {
        let (r, rs) = circle();
        let a = rf(&r, &rs, "(1 - c^2)/s");
        let s = rf(&r, &rs, "s");
        assert!(a.equals(&s, &rs));
    }

    #[test]
    fn inverse_swaps() {
        let r = Ring::new(&["t", "g"]);
        let rs = buchberger(&[parse_poly(&r, "g^2 - t").unwrap()], DEFAULT_BUDGET).unwrap();
        let x = rf(&r, &rs, "g/t");
        let y = rf(&r, &rs, "t/g");
        assert!(x.inv(&rs).unwrap().equals(&y, &rs));
        assert!(x.mul(&y, &rs).equals(&RatFunc::constant(&r, GaussRat::one()), &rs));
    }

    #[test]
    fn zero_denominator_after_reduction() {
        let (r, rs) = circle();
        let num = parse_poly(&r, "1").unwrap();
        let den = parse_poly(&r, "s^2 + c^2 - 1").unwrap();
        assert_eq!(RatFunc::new(num, den, &rs), Err(ArithError::DivisionByZero));
        assert_eq!(RatFunc::zero(&r).inv(&rs), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn denominators_are_monic() {
        let (r, rs) = circle();
        let a = rf(&r, &rs, "1/(2*t)");
        assert_eq!(a.den().canonical(), "1/1*t");
        assert_eq!(a.num().canonical(), "1/2");
    }
}
