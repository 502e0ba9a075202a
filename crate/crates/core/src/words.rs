//! Words in a free group on named generators, and automorphisms given by
//! generator images.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::WordError;

/// One letter `x` or `x^-1`, with `gen` an index into the generator list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(gen: usize) -> Self {
        Word(vec![Letter::new(gen)])
    }

    /// Builds a word from letters, freely reducing it.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Signed generator indices, `+i` for `x_i` and `-i` for `x_i^-1`, both
    /// counted from one.
    pub fn from_signed(letters: &[i64]) -> Self {
        Word::from_letters(letters.iter().filter(|&&x| x != 0).map(|&x| Letter {
            gen: (x.unsigned_abs() - 1) as usize,
            inverse: x < 0,
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..exponent.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Removes inverse pairs at the two ends; the result represents the same
    /// conjugacy class.
    pub fn cyclically_reduced(&self) -> Word {
        let mut lo = 0;
        let mut hi = self.0.len();
        while hi - lo >= 2 && self.0[lo] == self.0[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        Word(self.0[lo..hi].to_vec())
    }

    /// True iff the two words are conjugate in the free group.
    pub fn is_conjugate_to(&self, other: &Word) -> bool {
        let a = self.cyclically_reduced();
        let b = other.cyclically_reduced();
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        let n = a.len();
        (0..n).any(|shift| (0..n).all(|i| a.0[(i + shift) % n] == b.0[i]))
    }

    /// Exponent-sum vector of length `rank`.
    pub fn abelianize(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.0 {
            v[l.gen] += l.sign();
        }
        v
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Parses `a1 b1 a1^-1 b1^-1`. Tokens are separated by whitespace or `*`;
    /// `1` and the empty string denote the identity.
    pub fn parse(text: &str, names: &[String]) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == '*') {
            if token.is_empty() || token == "1" {
                continue;
            }
            let (name, exponent) = match token.split_once('^') {
                Some((name, exp)) => {
                    let e: i64 = exp.parse().map_err(|_| WordError::BadExponent {
                        token: token.to_string(),
                    })?;
                    (name, e)
                }
                None => (token, 1),
            };
            if exponent.unsigned_abs() > MAX_LETTER_EXPONENT {
                return Err(WordError::BadExponent {
                    token: token.to_string(),
                });
            }
            let gen = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| WordError::UnknownGenerator { name: name.to_string() })?;
            let letter = Letter {
                gen,
                inverse: exponent < 0,
            };
            letters.extend(std::iter::repeat_n(letter, exponent.unsigned_abs() as usize));
        }
        Ok(Word::from_letters(letters))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

/// Bound on `x^k` exponents accepted by the parser.
pub const MAX_LETTER_EXPONENT: u64 = 1024;

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        // runs of equal letters are printed as powers, split so each
        // power parses again
        let letters = self.word.letters();
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] && j - i < MAX_LETTER_EXPONENT as usize {
                j += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = &self.names[letters[i].gen];
            let e = (j - i) as i64 * letters[i].sign();
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// An endomorphism of the free group of the given rank, stored as the image
/// of each generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeMap {
    images: Vec<Word>,
}

impl FreeMap {
    pub fn identity(rank: usize) -> Self {
        FreeMap {
            images: (0..rank).map(Word::generator).collect(),
        }
    }

    pub fn from_images(images: Vec<Word>) -> Result<Self, WordError> {
        let rank = images.len();
        if let Some(bad) = images.iter().filter_map(|w| w.max_generator()).find(|&g| g >= rank) {
            return Err(WordError::GeneratorOutOfRange { gen: bad, rank });
        }
        Ok(FreeMap { images })
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, gen: usize) -> &Word {
        &self.images[gen]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, word: &Word) -> Word {
        Word::from_letters(word.letters().iter().flat_map(|l| {
            let img = &self.images[l.gen];
            let letters: Vec<Letter> = if l.inverse { img.inverse().0 } else { img.0.clone() };
            letters
        }))
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &FreeMap) -> FreeMap {
        FreeMap {
            images: inner.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| *w == Word::generator(i))
    }

    /// Integer matrix of the induced map on the abelianization; column `j` is
    /// the image of generator `j`.
    pub fn abelianization(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut m = vec![vec![0; n]; n];
        for (j, w) in self.images.iter().enumerate() {
            for (i, v) in w.abelianize(n).into_iter().enumerate() {
                m[i][j] = v;
            }
        }
        m
    }

    /// Generator-name keyed image table, the form used in surface files.
    pub fn to_table(&self, names: &[String]) -> BTreeMap<String, String> {
        self.images
            .iter()
            .enumerate()
            .map(|(i, w)| (names[i].clone(), w.display(names).to_string()))
            .collect()
    }

    pub fn from_table(table: &BTreeMap<String, String>, names: &[String]) -> Result<FreeMap, WordError> {
        let mut images = FreeMap::identity(names.len()).images;
        for (key, text) in table {
            let gen = names
                .iter()
                .position(|n| n == key)
                .ok_or_else(|| WordError::UnknownGenerator { name: key.clone() })?;
            images[gen] = Word::parse(text, names)?;
        }
        Ok(FreeMap { images })
    }
}

/// Artin half twist exchanging adjacent generators `i` and `i + 1` (counted
/// from zero). With `positive`, `x_i ↦ x_i x_{i+1} x_i^-1` and
/// `x_{i+1} ↦ x_i`; otherwise the inverse map. Both fix `x_0 x_1 ⋯ x_{n-1}`.
pub fn half_twist(rank: usize, i: usize, positive: bool) -> FreeMap {
    assert!(i + 1 < rank, "half twist index out of range");
    let mut images = FreeMap::identity(rank).images;
    let a = Letter::new(i);
    let b = Letter::new(i + 1);
    if positive {
        images[i] = Word::from_letters([a, b, a.inv()]);
        images[i + 1] = Word::generator(i);
    } else {
        images[i] = Word::generator(i + 1);
        images[i + 1] = Word::from_letters([b.inv(), a, b]);
    }
    FreeMap { images }
}

/// Conjugates each generator in `block` by `w` (or `w^-1`), where `w` is the
/// product of the block generators in order. This is the action of the twist
/// along a round curve enclosing a consecutive run of holes, for a base point
/// outside the curve.
pub fn block_conjugation(rank: usize, block: std::ops::Range<usize>, positive: bool) -> FreeMap {
    let w = Word::from_letters(block.clone().map(Letter::new));
    let w = if positive { w } else { w.inverse() };
    let mut images = FreeMap::identity(rank).images;
    for g in block {
        images[g] = w.concat(&Word::generator(g)).concat(&w.inverse());
    }
    FreeMap { images }
}

/// Action on the fundamental groupoid with one base point on the last
/// boundary component and one on each of the others. Hole `j` is the
/// generator `offset + j`, its boundary loop `c_j` is fixed and the arc `t_j`
/// from the base point to it satisfies `d_j = t_j c_j t_j^-1`. An arc image
/// `(v, i)` means `t_j ↦ v t_i`. Unlike the bare automorphism this sees
/// twists along the boundary components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedMap {
    map: FreeMap,
    arcs: Vec<(Word, usize)>,
    offset: usize,
}

impl FramedMap {
    pub fn identity(rank: usize, offset: usize) -> Self {
        FramedMap {
            map: FreeMap::identity(rank),
            arcs: (0..rank - offset).map(|j| (Word::identity(), j)).collect(),
            offset,
        }
    }

    /// Pairs a boundary-fixing automorphism with its arc words, checking
    /// `d_j ↦ v_j d_j v_j^-1`.
    pub fn new(map: FreeMap, arcs: Vec<Word>, offset: usize) -> Result<Self, WordError> {
        if offset + arcs.len() != map.rank() {
            return Err(WordError::ArcCount {
                expected: map.rank().saturating_sub(offset),
                found: arcs.len(),
            });
        }
        for (j, v) in arcs.iter().enumerate() {
            if let Some(g) = v.max_generator().filter(|&g| g >= map.rank()) {
                return Err(WordError::GeneratorOutOfRange {
                    gen: g,
                    rank: map.rank(),
                });
            }
            let d = Word::generator(offset + j);
            if v.concat(&d).concat(&v.inverse()) != *map.image(offset + j) {
                return Err(WordError::ArcMismatch { hole: j });
            }
        }
        Ok(FramedMap {
            map,
            arcs: arcs.into_iter().enumerate().map(|(j, v)| (v, j)).collect(),
            offset,
        })
    }

    pub fn map(&self) -> &FreeMap {
        &self.map
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Arc words when every hole goes back to itself.
    pub fn arcs(&self) -> Option<Vec<Word>> {
        self.arcs
            .iter()
            .enumerate()
            .map(|(j, (v, i))| (*i == j).then(|| v.clone()))
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FramedMap) -> FramedMap {
        assert_eq!(self.offset, inner.offset, "framed maps on different surfaces");
        FramedMap {
            map: self.map.compose(&inner.map),
            arcs: inner
                .arcs
                .iter()
                .map(|(v, i)| {
                    let (w, k) = &self.arcs[*i];
                    (self.map.apply(v).concat(w), *k)
                })
                .collect(),
            offset: self.offset,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == FramedMap::identity(self.map.rank(), self.offset)
    }

    /// Half twist exchanging holes `i` and `i + 1` (counted from zero):
    /// `t_i ↦ d_i t_{i+1}` and `t_{i+1} ↦ t_i`, or the inverse.
    pub fn half_twist(rank: usize, offset: usize, i: usize, positive: bool) -> Self {
        let mut f = FramedMap::identity(rank, offset);
        let (a, b) = (offset + i, offset + i + 1);
        let mut images = f.map.images.clone();
        if positive {
            images[a] = Word::from_letters([Letter::new(a), Letter::new(b), Letter::new(a).inv()]);
            images[b] = Word::generator(a);
            f.arcs[i] = (Word::generator(a), i + 1);
            f.arcs[i + 1] = (Word::identity(), i);
        } else {
            images[a] = Word::generator(b);
            images[b] = Word::from_letters([Letter::new(b).inv(), Letter::new(a), Letter::new(b)]);
            f.arcs[i] = (Word::identity(), i + 1);
            f.arcs[i + 1] = (Word::generator(b).inverse(), i);
        }
        f.map = FreeMap { images };
        f
    }

    /// Twist along the curve around the consecutive holes `block`: each
    /// hole generator is conjugated by their product `w` and its arc picks
    /// up `w` (or `w^-1`).
    pub fn block_twist(rank: usize, offset: usize, block: std::ops::Range<usize>, positive: bool) -> Self {
        let gens = block.start + offset..block.end + offset;
        let w = Word::from_letters(gens.clone().map(Letter::new));
        let w = if positive { w } else { w.inverse() };
        let mut f = FramedMap::identity(rank, offset);
        f.map = block_conjugation(rank, gens, positive);
        for j in block {
            f.arcs[j].0 = w.clone();
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn long_runs_print_as_parseable_powers() {
        let n = names(2);
        let w = Word::parse("x1^-1000 x1^-106 x2", &n).unwrap();
        let text = w.display(&n).to_string();
        assert_eq!(text, "x1^-1024 x1^-82 x2");
        assert_eq!(Word::parse(&text, &n).unwrap(), w);
    }

    #[test]
    fn free_reduction() {
        assert_eq!(Word::from_signed(&[1, 2, -2, 1]), Word::from_signed(&[1, 1]));
        assert!(Word::from_signed(&[1, 2, -2, -1]).is_empty());
        assert_eq!(Word::from_signed(&[1, 2]).inverse(), Word::from_signed(&[-2, -1]));
    }

    #[test]
    fn framed_inverses_and_boundary_twists() {
        for positive in [true, false] {
            let f = FramedMap::half_twist(4, 0, 1, positive);
            let g = FramedMap::half_twist(4, 0, 1, !positive);
            assert!(f.compose(&g).is_identity() && g.compose(&f).is_identity());
            let b = FramedMap::block_twist(4, 0, 0..3, positive);
            let c = FramedMap::block_twist(4, 0, 0..3, !positive);
            assert!(b.compose(&c).is_identity());
        }
        // a hole twist acts trivially on the free group but not on arcs
        let hole = FramedMap::block_twist(3, 0, 1..2, true);
        assert!(hole.map().is_identity());
        assert!(!hole.is_identity());
        let again = FramedMap::new(hole.map().clone(), hole.arcs().unwrap(), 0).unwrap();
        assert_eq!(again, hole);
        assert!(FramedMap::new(FreeMap::identity(3), vec![Word::generator(0); 3], 0).is_err());
    }

    #[test]
    fn parse_and_display() {
        let n = names(3);
        let w = Word::parse("x1 x2^2 x3^-1", &n).unwrap();
        assert_eq!(w, Word::from_signed(&[1, 2, 2, -3]));
        assert_eq!(w.display(&n).to_string(), "x1 x2^2 x3^-1");
        assert_eq!(Word::parse("1", &n).unwrap(), Word::identity());
        assert!(matches!(Word::parse("x4", &n), Err(WordError::UnknownGenerator { .. })));
        assert!(matches!(Word::parse("x1^a", &n), Err(WordError::BadExponent { .. })));
    }

    #[test]
    fn conjugacy() {
        let a = Word::from_signed(&[1, 2, 3]);
        let b = Word::from_signed(&[3, 1, 2]);
        let c = Word::from_signed(&[-2, 1, 2, 3, 2]);
        assert!(a.is_conjugate_to(&b));
        assert!(a.is_conjugate_to(&c));
        assert!(!a.is_conjugate_to(&Word::from_signed(&[1, 3, 2])));
    }

    #[test]
    fn half_twists_are_inverse() {
        let p = half_twist(4, 1, true);
        let m = half_twist(4, 1, false);
        assert!(p.compose(&m).is_identity());
        assert!(m.compose(&p).is_identity());
        let total = Word::from_signed(&[1, 2, 3, 4]);
        assert_eq!(p.apply(&total), total);
    }

    #[test]
    fn block_conjugation_fixes_total_product() {
        let f = block_conjugation(5, 1..4, true);
        let total = Word::from_signed(&[1, 2, 3, 4, 5]);
        assert_eq!(f.apply(&total), total);
        let g = block_conjugation(5, 1..4, false);
        assert!(f.compose(&g).is_identity());
        // single generator block acts trivially
        assert!(block_conjugation(5, 2..3, true).is_identity());
    }
}
