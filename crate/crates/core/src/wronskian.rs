//! Wronskian matrices and linear independence over the constants.

use std::fmt;

use crate::arith::ArithError;
use crate::tower::{FieldElement, TowerError};

/// Row `k` holds the `k`-th derivatives of the inputs.
#[derive(Clone, Debug)]
pub struct WrMatrix {
    entries: Vec<Vec<FieldElement>>,
}

impl WrMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &FieldElement {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.entries
    }

    pub fn det(&self) -> FieldElement {
        field_det(self.entries.clone())
    }
}

/// Determinant of a square matrix of field elements. Up to size 4 by
/// cofactor expansion, which never divides; beyond that by Bareiss
/// elimination with row swaps.
pub fn field_det(mut m: Vec<Vec<FieldElement>>) -> FieldElement {
    let n = m.len();
    if n <= 4 {
        let cols: Vec<usize> = (0..n).collect();
        return cofactor(&m, 0, &cols);
    }
    let tower = m[0][0].tower().clone();
    let mut sign_flip = false;
    let mut prev = tower.one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign_flip = !sign_flip;
                }
                None => return tower.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.try_div(&prev).expect("Bareiss pivot is nonzero");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        -&d
    } else {
        d
    }
}

fn cofactor(m: &[Vec<FieldElement>], row: usize, cols: &[usize]) -> FieldElement {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = m[row][cols[0]].tower().zero();
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &m[row][c] * &cofactor(m, row + 1, &rest);
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

impl fmt::Display for WrMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.canonical()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

pub fn wronskian_matrix(ys: &[FieldElement]) -> Result<WrMatrix, TowerError> {
    let first = ys.first().ok_or(ArithError::EmptyInput)?;
    if ys.iter().any(|y| y.tower().ring() != first.tower().ring()) {
        return Err(TowerError::TowerMismatch);
    }
    let mut entries = vec![ys.to_vec()];
    for k in 1..ys.len() {
        let next = entries[k - 1].iter().map(FieldElement::derive).collect();
        entries.push(next);
    }
    Ok(WrMatrix { entries })
}

pub fn wronskian_det(ys: &[FieldElement]) -> Result<FieldElement, TowerError> {
    Ok(wronskian_matrix(ys)?.det())
}

/// Nonzero wronskian.
pub fn independent_over_constants(ys: &[FieldElement]) -> bool {
    wronskian_det(ys).map(|d| !d.is_zero()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{DiffTower, GeneratorKind};

    /// Leibniz expansion over all permutations.
    fn leibniz(m: &WrMatrix) -> FieldElement {
        let n = m.size();
        let tower = m.entry(0, 0).tower().clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut acc = tower.zero();
        permute(&mut perm, 0, &mut |p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let mut term = tower.one();
            for (row, &col) in p.iter().enumerate() {
                term = &term * m.entry(row, col);
            }
            acc = if inversions % 2 == 0 { &acc + &term } else { &acc - &term };
        });
        acc
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn sin_cos() {
        let l = DiffTower::rational_functions("t")
            .adjoin_text(&[
                ("c", GeneratorKind::Algebraic, "-s", None),
                ("s", GeneratorKind::Algebraic, "c", Some("s^2 + c^2 - 1")),
            ])
            .unwrap();
        let ys = [l.var("s").unwrap(), l.var("c").unwrap()];
        let m = wronskian_matrix(&ys).unwrap();
        assert_eq!(m.entry(1, 0), &l.var("c").unwrap());
        assert_eq!(m.entry(1, 1), &l.parse("-s").unwrap());
        assert_eq!(m.det(), l.parse("-1").unwrap());
        assert_eq!(leibniz(&m), m.det());
        assert!(independent_over_constants(&ys));
    }

    #[test]
    fn polynomials_and_proportional() {
        let k = DiffTower::rational_functions("t");
        let ys = [k.parse("t").unwrap(), k.parse("t^2").unwrap()];
        assert_eq!(wronskian_det(&ys).unwrap(), k.parse("t^2").unwrap());
        let mono = [k.one(), k.parse("t").unwrap(), k.parse("t^2").unwrap()];
        assert!(independent_over_constants(&mono));
        assert_eq!(wronskian_det(&mono).unwrap(), k.parse("2").unwrap());
        let l = k.adjoin_exponential("e", &k.one()).unwrap();
        let dep = [l.parse("e").unwrap(), l.parse("2*e").unwrap()];
        assert!(!independent_over_constants(&dep));
        let m = wronskian_matrix(&[l.var("e").unwrap()]).unwrap();
        assert_eq!(m.size(), 1);
        assert!(matches!(wronskian_matrix(&[]), Err(TowerError::Arith(ArithError::EmptyInput))));
    }

    #[test]
    fn cofactor_matches_leibniz() {
        let k = DiffTower::rational_functions("t");
        // first entry is zero, forcing a swap
        let ys = [k.parse("t - t").unwrap(), k.parse("t^3").unwrap(), k.parse("1/t").unwrap()];
        let m = wronskian_matrix(&ys).unwrap();
        assert_eq!(m.det(), leibniz(&m));
        let ys = [k.parse("t^3").unwrap(), k.parse("1/t").unwrap(), k.parse("t^2 + 1").unwrap()];
        let m = wronskian_matrix(&ys).unwrap();
        assert_eq!(m.det(), leibniz(&m));
        assert!(!m.det().is_zero());
    }

    #[test]
    fn bareiss_matches_leibniz_with_pivot_swap() {
        let k = DiffTower::rational_functions("t");
        // a zero leading entry forces a swap
        let rows = [["0", "1", "t", "2", "1/t"], ["t", "t^2", "1", "0", "3"], ["1", "0", "t", "1", "t"], ["2", "t", "0", "1/(t+1)", "1"], ["t^2", "1", "1", "t", "0"]];
        let m: Vec<Vec<FieldElement>> = rows.iter().map(|r| r.iter().map(|x| k.parse(x).unwrap()).collect()).collect();
        let direct = WrMatrix { entries: m.clone() };
        assert_eq!(field_det(m), leibniz(&direct));
        assert!(!leibniz(&direct).is_zero());
    }
}
