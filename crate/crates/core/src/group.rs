//! Finite groups given by a multiplication table or by permutation generators.
//!
//! Element `0` is always the identity. Groups built from permutations list
//! their elements in breadth-first discovery order from the identity, where
//! each step right-multiplies by the generators in the order given.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on the number of elements produced by a permutation closure.
pub const DEFAULT_SIZE_BOUND: usize = 1_000_000;

/// Groups up to this size keep a dense multiplication table. Larger
/// permutation groups multiply through their permutations instead.
const DENSE_TABLE_LIMIT: usize = 1024;

/// Tables up to this size are checked for associativity on every triple.
const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;
const ASSOCIATIVITY_SAMPLES: usize = 10_000;
const ASSOCIATIVITY_SEED: u64 = 0x5eed_a550c;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is empty")]
    EmptyTable,
    #[error("multiplication table is not square: row {row} has {len} entries, expected {size}")]
    NotSquare { row: usize, len: usize, size: usize },
    #[error("table entry {value} at ({row}, {col}) is not an element index below {size}")]
    EntryOutOfRange { row: usize, col: usize, value: u32, size: usize },
    #[error("row {0} of the multiplication table is not a permutation of the elements")]
    RowNotPermutation(usize),
    #[error("column {0} of the multiplication table is not a permutation of the elements")]
    ColumnNotPermutation(usize),
    #[error("element 0 is not the identity of the table")]
    IdentityNotZero,
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("generator {index} is not a permutation of {degree} points")]
    BadPermutation { index: usize, degree: usize },
    #[error("generator {index} acts on {found} points, expected {degree}")]
    DegreeMismatch { index: usize, found: usize, degree: usize },
    #[error("closure exceeds the size bound of {0} elements")]
    SizeBoundExceeded(usize),
    #[error("expected {expected} element labels, got {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("element index {index} is out of range for a group of order {size}")]
    ElementOutOfRange { index: u32, size: usize },
}

/// An element of a [`FiniteGroup`], identified by its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub u32);

impl Element {
    pub const IDENTITY: Element = Element(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How a group is read from a file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSource {
    /// Row `i`, column `j` holds the index of `i * j`.
    #[serde(rename = "table")]
    Table(Vec<Vec<u32>>),
    /// Image lists of permutations on `0..k`.
    #[serde(rename = "permutations")]
    Permutations(Vec<Vec<u32>>),
}

#[derive(Clone, Debug)]
enum Multiplication {
    Table(Vec<u32>),
    Permutations {
        elements: Vec<Vec<u32>>,
        lookup: HashMap<Vec<u32>, u32>,
    },
}

/// A finite group with explicit elements. Immutable once built.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    size: usize,
    mul: Multiplication,
    inv: Vec<u32>,
    generators: Vec<Element>,
    labels: Option<Vec<String>>,
}

/// Load a group description, closing permutation generators under
/// composition with at most `size_bound` elements.
pub fn load_group(source: &GroupSource, size_bound: usize) -> Result<FiniteGroup, GroupError> {
    match source {
        GroupSource::Table(rows) => FiniteGroup::from_table(rows),
        GroupSource::Permutations(gens) => FiniteGroup::from_permutations(gens, size_bound),
    }
}

impl FiniteGroup {
    pub fn trivial() -> FiniteGroup {
        FiniteGroup {
            size: 1,
            mul: Multiplication::Table(vec![0]),
            inv: vec![0],
            generators: Vec::new(),
            labels: None,
        }
    }

    /// Validate a multiplication table: square, Latin, identity at 0, associative.
    pub fn from_table(rows: &[Vec<u32>]) -> Result<FiniteGroup, GroupError> {
        let size = rows.len();
        if size == 0 {
            return Err(GroupError::EmptyTable);
        }
        let mut table = Vec::with_capacity(size * size);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(GroupError::NotSquare { row: r, len: row.len(), size });
            }
            for (c, &value) in row.iter().enumerate() {
                if value as usize >= size {
                    return Err(GroupError::EntryOutOfRange { row: r, col: c, value, size });
                }
            }
            table.extend_from_slice(row);
        }
        let mut seen = vec![usize::MAX; size];
        for r in 0..size {
            for c in 0..size {
                let v = table[r * size + c] as usize;
                if seen[v] == r {
                    return Err(GroupError::RowNotPermutation(r));
                }
                seen[v] = r;
            }
        }
        seen.fill(usize::MAX);
        for c in 0..size {
            for r in 0..size {
                let v = table[r * size + c] as usize;
                if seen[v] == c {
                    return Err(GroupError::ColumnNotPermutation(c));
                }
                seen[v] = c;
            }
        }
        for x in 0..size {
            if table[x] as usize != x || table[x * size] as usize != x {
                return Err(GroupError::IdentityNotZero);
            }
        }
        check_associative(&table, size)?;

        // Latin square with a two-sided identity: each row holds 0 exactly once.
        let mut inv = vec![0u32; size];
        for (x, slot) in inv.iter_mut().enumerate() {
            let y = (0..size).find(|&y| table[x * size + y] == 0).expect("Latin row contains 0");
            *slot = y as u32;
        }
        let mut group = FiniteGroup {
            size,
            mul: Multiplication::Table(table),
            inv,
            generators: Vec::new(),
            labels: None,
        };
        group.generators = group.greedy_generators();
        Ok(group)
    }

    /// Close permutation generators (image lists on `0..k`) under composition.
    ///
    /// Products compose as functions: `(a*b)(x) = a(b(x))`.
    pub fn from_permutations(gens: &[Vec<u32>], size_bound: usize) -> Result<FiniteGroup, GroupError> {
        let degree = gens.first().map_or(0, Vec::len);
        for (index, p) in gens.iter().enumerate() {
            if p.len() != degree {
                return Err(GroupError::DegreeMismatch { index, found: p.len(), degree });
            }
            let mut hit = vec![false; degree];
            for &x in p {
                let x = x as usize;
                if x >= degree || hit[x] {
                    return Err(GroupError::BadPermutation { index, degree });
                }
                hit[x] = true;
            }
        }
        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut elements = vec![identity.clone()];
        let mut lookup = HashMap::from([(identity, 0u32)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for g in gens {
                let prod = compose(&elements[e], g);
                if !lookup.contains_key(&prod) {
                    if elements.len() >= size_bound {
                        return Err(GroupError::SizeBoundExceeded(size_bound));
                    }
                    lookup.insert(prod.clone(), elements.len() as u32);
                    queue.push_back(elements.len());
                    elements.push(prod);
                }
            }
        }
        let size = elements.len();
        let inv: Vec<u32> = elements.iter().map(|p| lookup[&invert(p)]).collect();
        let labels = Some(elements.iter().map(|p| cycle_notation(p)).collect());
        let mut generators = Vec::new();
        for g in gens {
            let e = Element(lookup[g]);
            if e != Element::IDENTITY && !generators.contains(&e) {
                generators.push(e);
            }
        }
        let mul = if size <= DENSE_TABLE_LIMIT {
            let mut table = Vec::with_capacity(size * size);
            for a in &elements {
                for b in &elements {
                    table.push(lookup[&compose(a, b)]);
                }
            }
            Multiplication::Table(table)
        } else {
            Multiplication::Permutations { elements, lookup }
        };
        Ok(FiniteGroup { size, mul, inv, generators, labels })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<FiniteGroup, GroupError> {
        if labels.len() != self.size {
            return Err(GroupError::LabelCount { expected: self.size, found: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.size as u32).map(Element)
    }

    pub fn contains(&self, a: Element) -> bool {
        a.index() < self.size
    }

    pub fn check_element(&self, a: Element) -> Result<(), GroupError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(GroupError::ElementOutOfRange { index: a.0, size: self.size })
        }
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        match &self.mul {
            Multiplication::Table(t) => Element(t[a.index() * self.size + b.index()]),
            Multiplication::Permutations { elements, lookup } => {
                Element(lookup[&compose(&elements[a.index()], &elements[b.index()])])
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        Element(self.inv[a.index()])
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: Element, k: i64) -> Element {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut e = k.unsigned_abs();
        let mut acc = Element::IDENTITY;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    /// `c * a * c^-1`
    pub fn conjugate(&self, a: Element, c: Element) -> Element {
        self.mul(self.mul(c, a), self.inv(c))
    }

    /// Smallest `k >= 1` with `a^k = 1`.
    pub fn element_order(&self, a: Element) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != Element::IDENTITY {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> u64 {
        self.elements().fold(1u64, |acc, a| acc.lcm(&self.element_order(a)))
    }

    /// Elements of the subgroup generated by `gens`, in breadth-first order.
    pub fn generated_subgroup(&self, gens: &[Element]) -> Vec<Element> {
        let mut seen = vec![false; self.size];
        seen[0] = true;
        let mut out = vec![Element::IDENTITY];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    out.push(y);
                }
            }
        }
        out
    }

    pub fn is_generating_tuple(&self, tuple: &[Element]) -> bool {
        self.generated_subgroup(tuple).len() == self.size
    }

    /// Entrywise `c * t_i * c^-1`.
    pub fn conjugate_tuple(&self, tuple: &[Element], c: Element) -> Vec<Element> {
        tuple.iter().map(|&a| self.conjugate(a, c)).collect()
    }

    /// A small generating set: the permutation generators the group was
    /// built from, or a greedy choice for tables.
    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    fn greedy_generators(&self) -> Vec<Element> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.size];
        inside[0] = true;
        let mut covered = 1;
        for a in self.elements() {
            if covered == self.size {
                break;
            }
            if inside[a.index()] {
                continue;
            }
            gens.push(a);
            let sub = self.generated_subgroup(&gens);
            covered = sub.len();
            for x in sub {
                inside[x.index()] = true;
            }
        }
        gens
    }

    pub fn label(&self, a: Element) -> String {
        match &self.labels {
            Some(l) => l[a.index()].clone(),
            None => a.0.to_string(),
        }
    }

    /// Two groups have the same table when they multiply identically on indices.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        if self.size != other.size {
            return false;
        }
        match (&self.mul, &other.mul) {
            (Multiplication::Table(a), Multiplication::Table(b)) => a == b,
            (Multiplication::Permutations { elements: a, .. }, Multiplication::Permutations { elements: b, .. })
                if a == b =>
            {
                true
            }
            _ => self
                .elements()
                .all(|a| self.elements().all(|b| self.mul(a, b) == other.mul(a, b))),
        }
    }

    /// The full multiplication table as rows.
    pub fn table_rows(&self) -> Vec<Vec<u32>> {
        self.elements()
            .map(|a| self.elements().map(|b| self.mul(a, b).0).collect())
            .collect()
    }

    /// Every automorphism of the group as an image table indexed by element.
    ///
    /// Candidates send the generating set to elements of matching orders and
    /// are kept when they extend to a bijective homomorphism. Returns `None`
    /// when more than `candidate_bound` candidates would need checking.
    pub fn automorphisms(&self, candidate_bound: usize) -> Option<Vec<Vec<Element>>> {
        let gens = self.generators.clone();
        // Spanning tree: element = parent * gens[k].
        let mut via: Vec<Option<(Element, usize)>> = vec![None; self.size];
        let mut order = vec![Element::IDENTITY];
        let mut seen = vec![false; self.size];
        seen[0] = true;
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for (k, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    via[y.index()] = Some((x, k));
                    order.push(y);
                }
            }
        }
        let candidates: Vec<Vec<Element>> = gens
            .iter()
            .map(|&g| {
                let o = self.element_order(g);
                self.elements().filter(|&a| self.element_order(a) == o).collect()
            })
            .collect();
        let total = candidates.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()))?;
        if total > candidate_bound {
            return None;
        }
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            let images: Vec<Element> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
            if let Some(map) = self.extend_homomorphism(&gens, &images, &order, &via) {
                out.push(map);
            }
            // odometer
            let mut k = 0;
            loop {
                if k == gens.len() {
                    return Some(out);
                }
                choice[k] += 1;
                if choice[k] < candidates[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    fn extend_homomorphism(
        &self,
        gens: &[Element],
        images: &[Element],
        order: &[Element],
        via: &[Option<(Element, usize)>],
    ) -> Option<Vec<Element>> {
        let mut map = vec![Element::IDENTITY; self.size];
        for &x in &order[1..] {
            let (parent, k) = via[x.index()].expect("tree covers the group");
            map[x.index()] = self.mul(map[parent.index()], images[k]);
        }
        for x in self.elements() {
            for (k, &g) in gens.iter().enumerate() {
                if map[self.mul(x, g).index()] != self.mul(map[x.index()], images[k]) {
                    return None;
                }
            }
        }
        let mut hit = vec![false; self.size];
        for y in &map {
            if std::mem::replace(&mut hit[y.index()], true) {
                return None;
            }
        }
        Some(map)
    }
}

fn check_associative(table: &[u32], size: usize) -> Result<(), GroupError> {
    let m = |a: usize, b: usize| table[a * size + b] as usize;
    let check = |a: usize, b: usize, c: usize| {
        if m(m(a, b), c) != m(a, m(b, c)) {
            Err(GroupError::NotAssociative { a, b, c })
        } else {
            Ok(())
        }
    };
    if size <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    check(a, b, c)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(ASSOCIATIVITY_SEED);
        for _ in 0..ASSOCIATIVITY_SAMPLES {
            check(rng.gen_range(0..size), rng.gen_range(0..size), rng.gen_range(0..size))?;
        }
    }
    Ok(())
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn invert(p: &[u32]) -> Vec<u32> {
    let mut r = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        r[x as usize] = i as u32;
    }
    r
}

/// Cycle notation with 0-based points, `()` for the identity.
pub fn cycle_notation(p: &[u32]) -> String {
    let mut done = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if done[start] || p[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !done[x] {
            done[x] = true;
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&x.to_string());
            x = p[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], DEFAULT_SIZE_BOUND).unwrap()
    }

    fn z(n: u32) -> FiniteGroup {
        let rows = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect::<Vec<_>>();
        FiniteGroup::from_table(&rows).unwrap()
    }

    fn find(g: &FiniteGroup, label: &str) -> Element {
        g.elements().find(|&a| g.label(a) == label).unwrap()
    }

    #[test]
    fn smallest_tables() {
        let g = load_group(&GroupSource::Table(vec![vec![0, 1], vec![1, 0]]), DEFAULT_SIZE_BOUND).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1, 1]]).unwrap_err(),
            GroupError::RowNotPermutation(1)
        );
    }

    #[test]
    fn table_errors() {
        assert_eq!(FiniteGroup::from_table(&[]).unwrap_err(), GroupError::EmptyTable);
        assert_eq!(
            FiniteGroup::from_table(&[vec![1, 0], vec![0, 1]]).unwrap_err(),
            GroupError::IdentityNotZero
        );
        assert!(matches!(
            FiniteGroup::from_table(&[vec![0, 1], vec![1]]).unwrap_err(),
            GroupError::NotSquare { .. }
        ));
        // A Latin square with identity 0 that is not associative (order 5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_table(&loop5).unwrap_err(),
            GroupError::NotAssociative { .. }
        ));
    }

    #[test]
    fn s3_from_permutations() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.label(Element::IDENTITY), "()");
        // breadth-first from the identity over ((0 1), (0 1 2))
        let labels: Vec<_> = g.elements().map(|a| g.label(a)).collect();
        assert_eq!(labels, ["()", "(0 1)", "(0 1 2)", "(1 2)", "(0 2)", "(0 2 1)"]);
        assert_eq!(g.exponent(), 6);
    }

    #[test]
    fn closure_bound() {
        let err = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 5).unwrap_err();
        assert_eq!(err, GroupError::SizeBoundExceeded(5));
    }

    #[test]
    fn bad_permutations() {
        assert!(matches!(
            FiniteGroup::from_permutations(&[vec![0, 0]], 10).unwrap_err(),
            GroupError::BadPermutation { .. }
        ));
        assert!(matches!(
            FiniteGroup::from_permutations(&[vec![0, 1], vec![0, 1, 2]], 10).unwrap_err(),
            GroupError::DegreeMismatch { .. }
        ));
    }

    #[test]
    fn orders_and_exponents() {
        let g = s3();
        assert_eq!(g.element_order(Element::IDENTITY), 1);
        assert_eq!(g.element_order(find(&g, "(0 1 2)")), 3);
        assert_eq!(z(4).element_order(Element(1)), 4);
        assert_eq!(z(4).exponent(), 4);
        assert_eq!(FiniteGroup::trivial().exponent(), 1);
    }

    #[test]
    fn generating_tuples() {
        let z2 = z(2);
        assert!(!z2.is_generating_tuple(&[Element(0)]));
        assert!(z2.is_generating_tuple(&[Element(1)]));
        let g = s3();
        assert!(g.is_generating_tuple(&[find(&g, "(0 1)"), find(&g, "(0 1 2)")]));
        assert!(!g.is_generating_tuple(&[find(&g, "(0 1 2)"), find(&g, "(0 2 1)")]));
    }

    #[test]
    fn conjugation() {
        let g = s3();
        let t = [find(&g, "(0 1)")];
        assert_eq!(g.conjugate_tuple(&t, Element::IDENTITY), t);
        assert_eq!(g.conjugate_tuple(&t, find(&g, "(0 1 2)")), [find(&g, "(1 2)")]);
        let z5 = z(5);
        assert_eq!(z5.conjugate_tuple(&[Element(2), Element(3)], Element(4)), [Element(2), Element(3)]);
    }

    #[test]
    fn large_groups_use_permutation_products() {
        // S7 has 5040 elements, above the dense table limit.
        let g = FiniteGroup::from_permutations(
            &[vec![1, 0, 2, 3, 4, 5, 6], vec![1, 2, 3, 4, 5, 6, 0]],
            DEFAULT_SIZE_BOUND,
        )
        .unwrap();
        assert_eq!(g.order(), 5040);
        assert_eq!(g.exponent(), 420);
        let a = Element(1234);
        assert_eq!(g.mul(a, g.inv(a)), Element::IDENTITY);
        assert!(g.same_table(&g.clone()));
    }

    #[test]
    fn automorphisms_of_small_groups() {
        assert_eq!(s3().automorphisms(1 << 20).unwrap().len(), 6);
        assert_eq!(z(5).automorphisms(1 << 20).unwrap().len(), 4);
        let klein = FiniteGroup::from_permutations(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 100).unwrap();
        assert_eq!(klein.automorphisms(1 << 20).unwrap().len(), 6);
    }

    #[test]
    fn lagrange_and_inverse_laws_exhaustive() {
        for g in [s3(), z(7), z(12)] {
            for a in g.elements() {
                assert_eq!(g.order() as u64 % g.element_order(a), 0);
                assert_eq!(g.exponent() % g.element_order(a), 0);
                assert_eq!(g.mul(a, g.inv(a)), Element::IDENTITY);
                assert_eq!(g.mul(g.inv(a), a), Element::IDENTITY);
                assert_eq!(g.pow(a, g.element_order(a) as i64), Element::IDENTITY);
                assert_eq!(g.pow(a, -1), g.inv(a));
            }
        }
    }
}
