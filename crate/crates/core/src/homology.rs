//! Exact integer linear algebra: Smith normal form, determinants, and
//! abelianizations of finite presentations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{FreeWord, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("matrix rows have unequal lengths")]
    Ragged,
    #[error("relator {index} has rank {found}, expected {expected}")]
    RelatorRank { index: usize, found: usize, expected: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A dense integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntegerMatrix {
        IntegerMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<IntegerMatrix, HomologyError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(HomologyError::Ragged);
        }
        Ok(IntegerMatrix {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().cloned().map(Into::into).collect(),
        })
    }

    /// Build with an explicit shape, so zero-row matrices keep their width.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> IntegerMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        IntegerMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[BigInt]>::to_vec).collect()
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        IntegerMatrix::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols).map(|k| &self[(r, k)] * &other[(k, c)]).sum()
        })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self[(r, c)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.entries.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.entries.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(src, c)] * k;
            self[(dst, c)] += v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, src)] * k;
            self[(r, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }
}

/// `d = u * m * v` with `d` diagonal, nonnegative, each entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries.
    pub fn nonzero_diagonal(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

/// Smith normal form by unimodular row and column operations, pivoting on
/// the entry of least nonzero magnitude.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut v = IntegerMatrix::identity(m.cols);
    let size = m.rows.min(m.cols);

    for t in 0..size {
        loop {
            // least nonzero magnitude in the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for r in t..d.rows {
                for c in t..d.cols {
                    let x = &d[(r, c)];
                    if !x.is_zero() && pivot.is_none_or(|(pr, pc)| x.abs() < d[(pr, pc)].abs()) {
                        pivot = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = pivot else {
                break;
            };
            d.swap_rows(t, pr);
            u.swap_rows(t, pr);
            d.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let mut clean = true;
            for r in t + 1..d.rows {
                if d[(r, t)].is_zero() {
                    continue;
                }
                let q = -d[(r, t)].div_floor(&d[(t, t)]);
                d.add_row(r, t, &q);
                u.add_row(r, t, &q);
                clean &= d[(r, t)].is_zero();
            }
            for c in t + 1..d.cols {
                if d[(t, c)].is_zero() {
                    continue;
                }
                let q = -d[(t, c)].div_floor(&d[(t, t)]);
                d.add_col(c, t, &q);
                v.add_col(c, t, &q);
                clean &= d[(t, c)].is_zero();
            }
            if !clean {
                continue;
            }
            // The pivot must divide the whole trailing block.
            let bad = (t + 1..d.rows)
                .flat_map(|r| (t + 1..d.cols).map(move |c| (r, c)))
                .find(|&(r, c)| !d[(r, c)].is_multiple_of(&d[(t, t)]));
            match bad {
                Some((r, _)) => {
                    let one = BigInt::one();
                    d.add_row(t, r, &one);
                    u.add_row(t, r, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { d, u, v }
}

/// A finitely generated abelian group `Z^r ⊕ Z/d1 ⊕ ... ⊕ Z/dk`, `d_i | d_{i+1}`, `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupStructure {
    pub free_rank: usize,
    #[serde(rename = "torsion", with = "crate::bigint_serde::vec")]
    pub invariant_factors: Vec<BigInt>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        AbelianGroupStructure { free_rank: 0, invariant_factors: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.invariant_factors.iter().product())
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

/// The abelian group generated by the columns with one relation per row.
pub fn cokernel(relations: &IntegerMatrix) -> AbelianGroupStructure {
    let snf = smith_normal_form(relations);
    let nonzero = snf.nonzero_diagonal();
    AbelianGroupStructure {
        free_rank: relations.cols - nonzero.len(),
        invariant_factors: nonzero.into_iter().filter(|x| !x.is_one()).collect(),
    }
}

/// `<x_1, ..., x_g | r_1, ..., r_k>`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    generator_count: usize,
    relators: Vec<FreeWord>,
}

impl GroupPresentation {
    pub fn new(generator_count: usize, relators: Vec<FreeWord>) -> Result<Self, HomologyError> {
        for (index, r) in relators.iter().enumerate() {
            if r.rank() != generator_count {
                return Err(HomologyError::RelatorRank { index, found: r.rank(), expected: generator_count });
            }
        }
        Ok(GroupPresentation { generator_count, relators })
    }

    /// Parse relators in word syntax.
    pub fn parse(generator_count: usize, relators: &[String]) -> Result<Self, HomologyError> {
        let words = relators
            .iter()
            .map(|s| FreeWord::parse(generator_count, s))
            .collect::<Result<Vec<_>, _>>()?;
        GroupPresentation::new(generator_count, words)
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }

    /// One row per relator, one column per generator.
    pub fn exponent_matrix(&self) -> IntegerMatrix {
        let sums: Vec<Vec<i64>> = self.relators.iter().map(FreeWord::exponent_sums).collect();
        IntegerMatrix::from_fn(self.relators.len(), self.generator_count, |r, c| BigInt::from(sums[r][c]))
    }
}

pub fn h1_from_presentation(p: &GroupPresentation) -> AbelianGroupStructure {
    cokernel(&p.exponent_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows).unwrap()
    }

    fn check(mat: &IntegerMatrix) -> SmithDecomposition {
        let s = smith_normal_form(mat);
        assert_eq!(s.u.mul(mat).mul(&s.v), s.d);
        assert!(s.d.is_diagonal());
        assert_eq!(s.u.determinant().abs(), BigInt::one());
        assert_eq!(s.v.determinant().abs(), BigInt::one());
        let diag = s.d.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]) || w[1].is_zero());
        }
        s
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check(&IntegerMatrix::identity(3)).d, IntegerMatrix::identity(3));
        assert_eq!(check(&m(&[vec![2, 0], vec![0, 3]])).d.diagonal(), big(&[1, 6]));
        assert_eq!(check(&m(&[vec![0, -2], vec![-2, 0]])).d.diagonal(), big(&[2, 2]));
        assert_eq!(
            check(&m(&[vec![-3, 2, 2], vec![1, -2, 0], vec![1, 0, -2]])).d.diagonal(),
            big(&[1, 2, 2])
        );
    }

    #[test]
    fn snf_shapes() {
        check(&IntegerMatrix::zeros(0, 3));
        check(&IntegerMatrix::zeros(2, 0));
        check(&m(&[vec![4, 6, 8]]));
        check(&m(&[vec![4], vec![6], vec![9]]));
        assert_eq!(check(&m(&[vec![0, 0], vec![0, 0]])).nonzero_diagonal(), Vec::<BigInt>::new());
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[vec![-3, 2, 2], vec![1, -2, 0], vec![1, 0, -2]]).determinant(), BigInt::from(-4));
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(m(&[vec![1, 2], vec![2, 4]]).determinant(), BigInt::zero());
        assert_eq!(IntegerMatrix::zeros(0, 0).determinant(), BigInt::one());
    }

    #[test]
    fn presentation_homology() {
        let free = GroupPresentation::new(3, vec![]).unwrap();
        assert_eq!(h1_from_presentation(&free), AbelianGroupStructure { free_rank: 3, invariant_factors: vec![] });
        let p = GroupPresentation::parse(2, &["x1 x1 X2 X1 X2 X1".into(), "x2 X1 X2 X1".into()]).unwrap();
        let h = h1_from_presentation(&p);
        assert_eq!(h.invariant_factors, big(&[2, 2]));
        assert_eq!(h.to_string(), "Z/2 ⊕ Z/2");
        let p = GroupPresentation::parse(1, &["x1".into()]).unwrap();
        assert!(h1_from_presentation(&p).is_trivial());
        assert_eq!(AbelianGroupStructure::trivial().to_string(), "0");
    }

    #[test]
    fn json_shape() {
        let h = AbelianGroupStructure { free_rank: 1, invariant_factors: big(&[2, 4]) };
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"free_rank":1,"torsion":[2,4]}"#);
        assert_eq!(h.to_string(), "Z ⊕ Z/2 ⊕ Z/4");
    }
}
