//! Univariate polynomials over ℚ: gcd, square-free part, Sturm root
//! counting, rational roots and perfect squares.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::gauss::Rat;
use super::poly::Poly;

/// Coefficients from the constant term upwards, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<Rat>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    /// Reads `p` as a polynomial in variable `var` with rational
    /// coefficients; `None` if another variable or an imaginary part occurs.
    pub fn from_poly(p: &Poly, var: usize) -> Option<Self> {
        let mut coeffs = vec![Rat::zero(); p.degree_in(var) as usize + 1];
        for (m, c) in p.terms() {
            if !c.is_real() || m.0.iter().enumerate().any(|(k, &e)| k != var && e > 0) {
                return None;
            }
            coeffs[m.0[var] as usize] += &c.re;
        }
        Some(Self::new(coeffs))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c * Rat::from_integer(BigInt::from(k))).collect())
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|k| self.0.get(k).cloned().unwrap_or_default() - o.0.get(k).cloned().unwrap_or_default()).collect())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(vec![]);
        }
        let mut out = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let mut q = vec![Rat::zero(); self.0.len().saturating_sub(d.0.len()) + 1];
        while !r.is_zero() && r.0.len() >= d.0.len() {
            let shift = r.0.len() - d.0.len();
            let f = r.lc() / d.lc();
            q[shift] = f.clone();
            let mut sub = vec![Rat::zero(); shift];
            sub.extend(d.0.iter().map(|c| c * &f));
            r = r.sub(&Self::new(sub));
        }
        (Self::new(q), r)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        Self::new(self.0.iter().map(|c| c / &lc).collect())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> Self {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Number of distinct roots over the algebraic closure.
    pub fn distinct_root_count(&self) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        self.squarefree().degree()
    }

    /// Number of distinct real roots (Sturm's theorem on the square-free part).
    pub fn real_root_count(&self) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let p = self.squarefree();
        if p.degree() == 0 {
            return 0;
        }
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(Self::new(r.0.iter().map(|c| -c).collect()));
        }
        let changes = |signs: Vec<i8>| {
            let nz: Vec<i8> = signs.into_iter().filter(|&s| s != 0).collect();
            nz.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let sign = |r: &Rat| if r.is_positive() { 1 } else if r.is_negative() { -1 } else { 0 };
        let at_pos_inf: Vec<i8> = seq.iter().map(|q| sign(&q.lc())).collect();
        let at_neg_inf: Vec<i8> = seq
            .iter()
            .map(|q| {
                let s = sign(&q.lc());
                if q.degree() % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        changes(at_neg_inf) - changes(at_pos_inf)
    }

    /// All rational roots, ascending, without multiplicity.
    pub fn rational_roots(&self) -> Vec<Rat> {
        if self.is_zero() {
            return Vec::new();
        }
        // clear denominators to integer coefficients
        let l = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
        let mut roots = Vec::new();
        let lowest = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if lowest > 0 {
            roots.push(Rat::zero());
        }
        let a0 = ints[lowest].abs();
        let an = ints.last().unwrap().abs();
        for p in divisors(&a0) {
            for q in divisors(&an) {
                for s in [1i32, -1] {
                    let r = Rat::new(&p * BigInt::from(s), q.clone());
                    if !roots.contains(&r) && self.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// `Some(q)` with `q² = self`.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.degree() % 2 == 1 {
            return None;
        }
        let lead = rat_sqrt(&self.lc())?;
        let k = self.degree() / 2;
        let mut q = vec![Rat::zero(); k + 1];
        q[k] = lead.clone();
        let two_lead = &lead + &lead;
        for j in (0..k).rev() {
            // coefficient of t^(k+j) in q² fixes q[j]
            let mut acc = self.0[k + j].clone();
            for a in j + 1..=k {
                let b = k + j - a;
                if b > j && b <= k {
                    acc -= &q[a] * &q[b];
                }
            }
            q[j] = acc / &two_lead;
        }
        let q = Self::new(q);
        (q.mul(&q) == *self).then_some(q)
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rat::new(n, d))
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gauss::rat;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn roots_of_unity_counts() {
        // x^3 - 1
        let p = up(&[-1, 0, 0, 1]);
        assert_eq!(p.distinct_root_count(), 3);
        assert_eq!(p.real_root_count(), 1);
        assert_eq!(p.rational_roots(), vec![rat(1, 1)]);
        // x^6 - 1
        let p = up(&[-1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(p.distinct_root_count(), 6);
        assert_eq!(p.real_root_count(), 2);
        assert_eq!(p.rational_roots(), vec![rat(-1, 1), rat(1, 1)]);
    }

    #[test]
    fn repeated_roots() {
        // (x - 1)^2 (x + 2)
        let p = up(&[2, -3, 0, 1]);
        assert_eq!(p.distinct_root_count(), 2);
        assert_eq!(p.real_root_count(), 2);
    }

    #[test]
    fn squares() {
        assert_eq!(up(&[1, 2, 1]).sqrt(), Some(up(&[1, 1])));
        assert_eq!(up(&[0, 1]).sqrt(), None);
        assert_eq!(up(&[0, -1]).sqrt(), None);
        assert_eq!(up(&[-1]).sqrt(), None);
        assert_eq!(UniPoly::new(vec![rat(1, 4)]).sqrt(), Some(UniPoly::new(vec![rat(1, 2)])));
    }
}
