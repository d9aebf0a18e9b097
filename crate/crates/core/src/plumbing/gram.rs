use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::tree::{VertexId, WeightedTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GramError {
    NotSquare,
    NotSymmetric(usize, usize),
}

impl fmt::Display for GramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GramError::NotSquare => f.write_str("matrix is not square"),
            GramError::NotSymmetric(i, j) => write!(f, "entries ({},{}) and ({},{}) differ", i, j, j, i),
        }
    }
}

/// Symmetric integer matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GramMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl GramMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, GramError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(GramError::NotSquare);
        }
        let entries: Vec<i64> = rows.iter().flatten().copied().collect();
        let m = GramMatrix { dim, entries };
        for i in 0..dim {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(GramError::NotSymmetric(i, j));
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// The submatrix on the given indices, in the given order.
    pub fn principal_submatrix(&self, idx: &[usize]) -> GramMatrix {
        let rows: Vec<Vec<i64>> =
            idx.iter().map(|&i| idx.iter().map(|&j| self.get(i, j)).collect()).collect();
        GramMatrix { dim: idx.len(), entries: rows.into_iter().flatten().collect() }
    }

    fn big(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<_> = self.row(i).iter().map(|x| alloc::format!("{:>3}", x)).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Intersection form of a plumbing, rows in ascending vertex id order.
pub fn gram_matrix(t: &WeightedTree) -> GramMatrix {
    let ids: Vec<VertexId> = t.ids().collect();
    let dim = ids.len();
    let mut entries = vec![0i64; dim * dim];
    for (i, &v) in ids.iter().enumerate() {
        entries[i * dim + i] = t.weight(v).unwrap();
    }
    for (a, b) in t.edges() {
        let i = ids.binary_search(&a).unwrap();
        let j = ids.binary_search(&b).unwrap();
        entries[i * dim + j] = 1;
        entries[j * dim + i] = 1;
    }
    GramMatrix { dim, entries }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det_exact(m: &GramMatrix) -> BigInt {
    let n = m.dim;
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a = m.big();
    let mut prev = BigInt::from(1);
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Leading principal minors D_1..D_n. Stops early (shorter output) once a
/// minor vanishes.
pub fn leading_minors(m: &GramMatrix) -> Vec<BigInt> {
    let n = m.dim;
    let mut a = m.big();
    let mut prev = BigInt::from(1);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        out.push(a[k][k].clone());
        if a[k][k].is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    out
}

/// Sylvester's criterion: (-1)^k D_k > 0 for every k.
pub fn is_negative_definite(m: &GramMatrix) -> bool {
    let minors = leading_minors(m);
    minors.len() == m.dim
        && minors.iter().enumerate().all(|(i, d)| {
            if i % 2 == 0 {
                d.is_negative()
            } else {
                d.is_positive()
            }
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Signature counts by exact symmetric elimination over the rationals.
pub fn inertia(m: &GramMatrix) -> Inertia {
    let mut a: Vec<Vec<BigRational>> = (0..m.dim)
        .map(|i| m.row(i).iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut live: Vec<usize> = (0..m.dim).collect();
    let mut res = Inertia::default();
    while !live.is_empty() {
        let pivot = live.iter().position(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // zero diagonal: add a row/column with a nonzero off-diagonal
                // entry to make a nonzero pivot
                let mut found = None;
                'outer: for (x, &i) in live.iter().enumerate() {
                    for &j in &live {
                        if i != j && !a[i][j].is_zero() {
                            found = Some((x, i, j));
                            break 'outer;
                        }
                    }
                }
                let Some((x, i, j)) = found else {
                    res.zero += live.len();
                    break;
                };
                for &c in &live {
                    let t = a[j][c].clone();
                    a[i][c] += t;
                }
                for &r in &live {
                    let t = a[r][j].clone();
                    a[r][i] += t;
                }
                x
            }
        };
        let i = live.remove(p);
        let piv = a[i][i].clone();
        if piv.is_positive() {
            res.positive += 1;
        } else {
            res.negative += 1;
        }
        for &r in &live {
            if a[r][i].is_zero() {
                continue;
            }
            let f = &a[r][i] / &piv;
            for &c in &live {
                let t = &f * &a[i][c];
                a[r][c] -= t;
            }
        }
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::from(1);
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            if m[0][j] == 0 {
                continue;
            }
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let term = BigInt::from(m[0][j]) * cofactor_det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn chain_determinants_match_cofactors() {
        for k in 1..=10 {
            let g = gram_matrix(&WeightedTree::path(&vec![-2; k]));
            let d = det_exact(&g);
            assert_eq!(d, cofactor_det(&g.rows()));
            assert_eq!(d.abs(), BigInt::from(k as i64 + 1));
            assert!(is_negative_definite(&g));
        }
    }

    #[test]
    fn small_cases() {
        let g = gram_matrix(&WeightedTree::single(-2));
        assert_eq!(det_exact(&g), BigInt::from(-2));
        assert!(is_negative_definite(&g));
        assert!(!is_negative_definite(&gram_matrix(&WeightedTree::single(0))));
        let h = gram_matrix(&WeightedTree::path(&[-2, -1, -2]));
        assert_eq!(h.get(0, 1), 1);
        assert_eq!(h.get(0, 2), 0);
    }

    #[test]
    fn pivoting_needed() {
        let g = GramMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, -2]]).unwrap();
        assert_eq!(det_exact(&g), cofactor_det(&g.rows()));
        let i = inertia(&g);
        assert_eq!(i.positive + i.negative + i.zero, 3);
        assert_eq!(i.zero, 0);
    }

    #[test]
    fn inertia_examples() {
        let g = gram_matrix(&WeightedTree::path(&[1, -1]));
        assert_eq!(inertia(&g), Inertia { positive: 1, negative: 1, zero: 0 });
        let z = gram_matrix(&WeightedTree::path(&[0, 0]));
        assert_eq!(inertia(&z), Inertia { positive: 1, negative: 1, zero: 0 });
        let d = gram_matrix(&WeightedTree::path(&[-1, 0, -1]));
        assert_eq!(inertia(&d).zero, 0);
        let deg = GramMatrix::from_rows(&[vec![-1, 1], vec![1, -1]]).unwrap();
        assert_eq!(inertia(&deg), Inertia { positive: 0, negative: 1, zero: 1 });
    }

    #[test]
    fn rejects_asymmetric() {
        assert_eq!(
            GramMatrix::from_rows(&[vec![0, 1], vec![0, 0]]),
            Err(GramError::NotSymmetric(1, 0))
        );
    }
}
