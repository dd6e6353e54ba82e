//! Freely reduced words in a free group of finite rank, and the elementary
//! Nielsen moves acting on generator-image tuples.
//!
//! Text form: whitespace-separated letters, `x3` for the third generator and
//! `X3` for its inverse. The empty word prints as the empty string.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::group::{Element, FiniteGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("generator x{index} exceeds rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("cannot parse letter {0:?}: expected x<k> or X<k> with k >= 1")]
    BadLetter(String),
    #[error("expected {expected} images, got {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("move {0} refers to an index outside a tuple of length {1}")]
    MoveOutOfRange(String, usize),
    #[error("move {0} needs two distinct indices")]
    RepeatedIndex(String),
    #[error("cannot parse Nielsen move {0:?}")]
    BadMove(String),
    #[error("attaching words need rank at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("twist power n must be positive")]
    NonPositivePower,
}

/// One generator or its inverse; `generator` is 0-based.
///
/// Letters order as `x1 < X1 < x2 < X2 < ...`, which fixes the shortlex
/// order used for transversals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = if self.inverse { 'X' } else { 'x' };
        write!(f, "{}{}", x, self.generator + 1)
    }
}

/// A freely reduced word of a fixed rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity(rank: usize) -> FreeWord {
        FreeWord { rank, letters: Vec::new() }
    }

    /// The generator with 0-based index `i`.
    pub fn generator(rank: usize, i: usize) -> Result<FreeWord, WordError> {
        FreeWord::from_letters(rank, [Letter::new(i, false)])
    }

    /// Build a word from letters, freely reducing as it goes.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(rank: usize, letters: I) -> Result<FreeWord, WordError> {
        let mut w = FreeWord::identity(rank);
        for l in letters {
            if l.generator >= rank {
                return Err(WordError::GeneratorOutOfRange { index: l.generator + 1, rank });
            }
            w.push(l);
        }
        Ok(w)
    }

    /// Parse `"x1 x1 X2"` as a word of the given rank.
    pub fn parse(rank: usize, text: &str) -> Result<FreeWord, WordError> {
        let letters = text
            .split_whitespace()
            .map(|tok| tok.parse::<Letter>())
            .collect::<Result<Vec<_>, _>>()?;
        FreeWord::from_letters(rank, letters)
    }

    fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inv()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inv())
            && self.letters.iter().all(|l| l.generator < self.rank)
    }

    pub fn multiply(&self, other: &FreeWord) -> Result<FreeWord, WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch(self.rank, other.rank));
        }
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        Ok(w)
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = FreeWord::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            for &l in &base.letters {
                w.push(l);
            }
        }
        w
    }

    /// `c * self * c^-1`
    pub fn conjugate_by(&self, c: &FreeWord) -> Result<FreeWord, WordError> {
        c.multiply(self)?.multiply(&c.inverse())
    }

    /// Exponent sum of each generator: the image in the abelianization.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        for l in &self.letters {
            v[l.generator] += l.exponent();
        }
        v
    }

    /// Evaluate under the homomorphism sending generator `i` to `images[i]`.
    pub fn evaluate(&self, group: &FiniteGroup, images: &[Element]) -> Result<Element, WordError> {
        if images.len() != self.rank {
            return Err(WordError::ImageCount { expected: self.rank, found: images.len() });
        }
        let inverses: Vec<Element> = images.iter().map(|&a| group.inv(a)).collect();
        Ok(self.letters.iter().fold(group.identity(), |acc, l| {
            let x = if l.inverse { inverses[l.generator] } else { images[l.generator] };
            group.mul(acc, x)
        }))
    }

    /// Substitute a word for every generator (a homomorphism between free groups).
    pub fn substitute(&self, images: &[FreeWord]) -> Result<FreeWord, WordError> {
        if images.len() != self.rank {
            return Err(WordError::ImageCount { expected: self.rank, found: images.len() });
        }
        let target = images.first().map_or(0, FreeWord::rank);
        let mut w = FreeWord::identity(target);
        for l in &self.letters {
            let img = &images[l.generator];
            if img.rank != target {
                return Err(WordError::RankMismatch(img.rank, target));
            }
            let piece = if l.inverse { img.inverse() } else { img.clone() };
            w = w.multiply(&piece)?;
        }
        Ok(w)
    }
}

pub fn evaluate_word(word: &FreeWord, group: &FiniteGroup, images: &[Element]) -> Result<Element, WordError> {
    word.evaluate(group, images)
}

pub fn word_multiply(u: &FreeWord, v: &FreeWord) -> Result<FreeWord, WordError> {
    u.multiply(v)
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Letter {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Letter, WordError> {
        let bad = || WordError::BadLetter(s.to_string());
        let inverse = match s.chars().next() {
            Some('x') => false,
            Some('X') => true,
            _ => return Err(bad()),
        };
        let digits = &s[1..];
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
            return Err(bad());
        }
        let k: usize = digits.parse().map_err(|_| bad())?;
        Ok(Letter::new(k - 1, inverse))
    }
}

/// `x_i^n (x_1 ... x_g)^-n` for `i = 1..g`: the twisted attaching curves.
pub fn attaching_words(rank: usize, n: u64) -> Result<Vec<FreeWord>, WordError> {
    if rank < 2 {
        return Err(WordError::RankTooSmall(rank));
    }
    if n == 0 {
        return Err(WordError::NonPositivePower);
    }
    let n = n as i64;
    let product = FreeWord::from_letters(rank, (0..rank).map(|i| Letter::new(i, false)))?;
    let tail = product.pow(-n);
    (0..rank)
        .map(|i| FreeWord::generator(rank, i)?.pow(n).multiply(&tail))
        .collect()
}

/// Elementary Nielsen moves on a tuple, with 0-based indices.
///
/// Applied to the image tuple of `phi`, a move yields the image tuple of
/// `phi` composed with the inverse of the corresponding free-group
/// automorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NielsenMove {
    Swap(usize, usize),
    Invert(usize),
    /// `t_i <- t_j^{+-1} * t_i`
    LeftMultiply { i: usize, j: usize, inverse: bool },
    /// `t_i <- t_i * t_j^{+-1}`
    RightMultiply { i: usize, j: usize, inverse: bool },
}

impl NielsenMove {
    pub fn inverse(self) -> NielsenMove {
        match self {
            NielsenMove::Swap(..) | NielsenMove::Invert(_) => self,
            NielsenMove::LeftMultiply { i, j, inverse } => NielsenMove::LeftMultiply { i, j, inverse: !inverse },
            NielsenMove::RightMultiply { i, j, inverse } => NielsenMove::RightMultiply { i, j, inverse: !inverse },
        }
    }

    fn check(self, len: usize) -> Result<(), WordError> {
        let (a, b) = match self {
            NielsenMove::Swap(i, j) => (i, Some(j)),
            NielsenMove::Invert(i) => (i, None),
            NielsenMove::LeftMultiply { i, j, .. } | NielsenMove::RightMultiply { i, j, .. } => (i, Some(j)),
        };
        if a >= len || b.is_some_and(|b| b >= len) {
            return Err(WordError::MoveOutOfRange(self.to_string(), len));
        }
        if matches!(self, NielsenMove::LeftMultiply { .. } | NielsenMove::RightMultiply { .. }) && Some(a) == b {
            return Err(WordError::RepeatedIndex(self.to_string()));
        }
        Ok(())
    }

    /// Apply in place without bounds checks beyond slice indexing.
    pub(crate) fn apply_in_place(self, group: &FiniteGroup, t: &mut [Element]) {
        match self {
            NielsenMove::Swap(i, j) => t.swap(i, j),
            NielsenMove::Invert(i) => t[i] = group.inv(t[i]),
            NielsenMove::LeftMultiply { i, j, inverse } => {
                let x = if inverse { group.inv(t[j]) } else { t[j] };
                t[i] = group.mul(x, t[i]);
            }
            NielsenMove::RightMultiply { i, j, inverse } => {
                let x = if inverse { group.inv(t[j]) } else { t[j] };
                t[i] = group.mul(t[i], x);
            }
        }
    }

    pub fn apply(self, tuple: &[Element], group: &FiniteGroup) -> Result<Vec<Element>, WordError> {
        self.check(tuple.len())?;
        let mut t = tuple.to_vec();
        self.apply_in_place(group, &mut t);
        Ok(t)
    }

    /// Every elementary move on tuples of length `len`, in a fixed order.
    pub fn all(len: usize) -> Vec<NielsenMove> {
        let mut moves = Vec::new();
        for i in 0..len {
            for j in i + 1..len {
                moves.push(NielsenMove::Swap(i, j));
            }
        }
        for i in 0..len {
            moves.push(NielsenMove::Invert(i));
        }
        for i in 0..len {
            for j in 0..len {
                if i == j {
                    continue;
                }
                for inverse in [false, true] {
                    moves.push(NielsenMove::RightMultiply { i, j, inverse });
                    moves.push(NielsenMove::LeftMultiply { i, j, inverse });
                }
            }
        }
        moves
    }
}

pub fn apply_nielsen_move(
    tuple: &[Element],
    mv: NielsenMove,
    group: &FiniteGroup,
) -> Result<Vec<Element>, WordError> {
    mv.apply(tuple, group)
}

impl fmt::Display for NielsenMove {
    /// 1-based: `swap(1,2)`, `invert(1)`, `right(1,2,+1)`, `left(2,1,-1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |inv: bool| if inv { "-1" } else { "+1" };
        match *self {
            NielsenMove::Swap(i, j) => write!(f, "swap({},{})", i + 1, j + 1),
            NielsenMove::Invert(i) => write!(f, "invert({})", i + 1),
            NielsenMove::LeftMultiply { i, j, inverse } => write!(f, "left({},{},{})", i + 1, j + 1, sign(inverse)),
            NielsenMove::RightMultiply { i, j, inverse } => {
                write!(f, "right({},{},{})", i + 1, j + 1, sign(inverse))
            }
        }
    }
}

impl FromStr for NielsenMove {
    type Err = WordError;

    fn from_str(s: &str) -> Result<NielsenMove, WordError> {
        let bad = || WordError::BadMove(s.to_string());
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let args = s[open..].strip_prefix('(').and_then(|a| a.strip_suffix(')')).ok_or_else(bad)?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let index = |p: &str| -> Result<usize, WordError> {
            match p.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(bad()),
            }
        };
        let sign = |p: &str| match p {
            "+1" | "1" => Ok(false),
            "-1" => Ok(true),
            _ => Err(bad()),
        };
        match (&s[..open], parts.as_slice()) {
            ("swap", [a, b]) => Ok(NielsenMove::Swap(index(a)?, index(b)?)),
            ("invert", [a]) => Ok(NielsenMove::Invert(index(a)?)),
            ("left", [a, b, c]) => Ok(NielsenMove::LeftMultiply { i: index(a)?, j: index(b)?, inverse: sign(c)? }),
            ("right", [a, b, c]) => Ok(NielsenMove::RightMultiply { i: index(a)?, j: index(b)?, inverse: sign(c)? }),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, s: &str) -> FreeWord {
        FreeWord::parse(rank, s).unwrap()
    }

    fn z(n: u32) -> FiniteGroup {
        let rows = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect::<Vec<_>>();
        FiniteGroup::from_table(&rows).unwrap()
    }

    #[test]
    fn multiplication_reduces() {
        assert!(w(3, "x1").multiply(&w(3, "X1")).unwrap().is_empty());
        assert_eq!(w(3, "x1 x2").multiply(&w(3, "X2 x3")).unwrap(), w(3, "x1 x3"));
        let u = w(2, "x1 x2");
        assert!(u.inverse().multiply(&u).unwrap().is_empty());
        assert_eq!(
            w(2, "x1").multiply(&w(3, "x1")).unwrap_err(),
            WordError::RankMismatch(2, 3)
        );
    }

    #[test]
    fn parse_and_print() {
        let s = "x1 x1 X2 X1";
        assert_eq!(w(2, s).to_string(), s);
        assert_eq!(w(2, "").to_string(), "");
        assert_eq!(w(2, "x1 X1 x2").to_string(), "x2");
        assert!(FreeWord::parse(2, "x3").is_err());
        assert!(FreeWord::parse(2, "y1").is_err());
        assert!(FreeWord::parse(2, "x0").is_err());
        assert!(FreeWord::parse(12, "x12 X10").is_ok());
    }

    #[test]
    fn evaluation() {
        let g = z(2);
        let one = Element(1);
        assert_eq!(w(2, "").evaluate(&g, &[one, one]).unwrap(), Element::IDENTITY);
        assert_eq!(w(2, "x1 x1 X2 X1 X2 X1").evaluate(&g, &[one, one]).unwrap(), Element::IDENTITY);
        let z5 = z(5);
        assert_eq!(w(2, "x1 x2").evaluate(&z5, &[Element(2), Element(4)]).unwrap(), Element(1));
        assert!(w(2, "x1").evaluate(&z5, &[Element(1)]).is_err());
    }

    #[test]
    fn attaching_word_instances() {
        let ws = attaching_words(2, 2).unwrap();
        assert_eq!(ws[0].to_string(), "x1 x1 X2 X1 X2 X1");
        assert_eq!(ws[0].len(), 6);
        assert_eq!(ws[1].to_string(), "x2 X1 X2 X1");
        assert_eq!(ws[1].len(), 4);
        let ws = attaching_words(2, 1).unwrap();
        assert_eq!(ws[0].to_string(), "x1 X2 X1");
        assert_eq!(attaching_words(1, 2).unwrap_err(), WordError::RankTooSmall(1));
        assert_eq!(attaching_words(2, 0).unwrap_err(), WordError::NonPositivePower);
    }

    #[test]
    fn attaching_word_abelianization() {
        for g in 2..6 {
            for n in 1..7u64 {
                for (i, word) in attaching_words(g, n).unwrap().iter().enumerate() {
                    assert!(word.is_reduced());
                    let expect: Vec<i64> =
                        (0..g).map(|k| if k == i { n as i64 } else { 0 } - n as i64).collect();
                    assert_eq!(word.exponent_sums(), expect);
                }
            }
        }
    }

    #[test]
    fn move_examples() {
        let z3 = z(3);
        let (a, b) = (Element(1), Element(2));
        assert_eq!(apply_nielsen_move(&[a, b], NielsenMove::Swap(0, 1), &z3).unwrap(), [b, a]);
        assert_eq!(apply_nielsen_move(&[a, b], NielsenMove::Invert(0), &z3).unwrap(), [Element(2), b]);
        let z2 = z(2);
        let mv = NielsenMove::RightMultiply { i: 0, j: 1, inverse: false };
        assert_eq!(mv.apply(&[Element(1), Element(0)], &z2).unwrap(), [Element(1), Element(0)]);
        let same = NielsenMove::LeftMultiply { i: 1, j: 1, inverse: false };
        assert!(matches!(same.apply(&[a, b], &z3), Err(WordError::RepeatedIndex(_))));
        assert!(matches!(NielsenMove::Invert(2).apply(&[a, b], &z3), Err(WordError::MoveOutOfRange(..))));
    }

    #[test]
    fn move_text_round_trip() {
        for mv in NielsenMove::all(3) {
            assert_eq!(mv.to_string().parse::<NielsenMove>().unwrap(), mv);
        }
        assert!("twist(1)".parse::<NielsenMove>().is_err());
    }
}
