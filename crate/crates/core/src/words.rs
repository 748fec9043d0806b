//! Free words in the generators `u_ij`, `u_ij*` (or `g_i`, `g_i⁻¹`) and their
//! complex linear span, with counit, star, coproduct and antipode.
//!
//! Words are never reduced modulo the defining relations of a quantum group;
//! descent to a quotient is certified separately (see [`crate::targets`]).

use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::kernel::{ONE, ZERO};

/// Expansion-size guard for coproducts and convolution powers.
pub const DEFAULT_GUARD: usize = 1_000_000;

/// A generator. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `u_ij`, or `u_ij*` when `star`.
    U { i: u32, j: u32, star: bool },
    /// `g_i`, or `g_i⁻¹` when `inv`.
    G { i: u32, inv: bool },
}

impl Letter {
    pub const fn u(i: u32, j: u32) -> Self {
        Letter::U { i, j, star: false }
    }

    pub const fn u_star(i: u32, j: u32) -> Self {
        Letter::U { i, j, star: true }
    }

    pub const fn g(i: u32) -> Self {
        Letter::G { i, inv: false }
    }

    pub const fn g_inv(i: u32) -> Self {
        Letter::G { i, inv: true }
    }

    pub fn counit(self) -> C64 {
        match self {
            Letter::U { i, j, .. } => {
                if i == j {
                    ONE
                } else {
                    ZERO
                }
            }
            Letter::G { .. } => ONE,
        }
    }

    pub fn star(self) -> Self {
        match self {
            Letter::U { i, j, star } => Letter::U { i, j, star: !star },
            Letter::G { i, inv } => Letter::G { i, inv: !inv },
        }
    }

    pub fn antipode(self) -> Self {
        match self {
            Letter::U { i, j, star } => Letter::U { i: j, j: i, star: !star },
            Letter::G { i, inv } => Letter::G { i, inv: !inv },
        }
    }

    pub fn is_group(self) -> bool {
        matches!(self, Letter::G { .. })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Letter::U { i, j, star: false } => write!(f, "u({i},{j})"),
            Letter::U { i, j, star: true } => write!(f, "u*({i},{j})"),
            Letter::G { i, inv: false } => write!(f, "g({i})"),
            Letter::G { i, inv: true } => write!(f, "g-({i})"),
        }
    }
}

/// The generator set of a functional: either the `2n²` letters `u_ij`, `u_ij*`
/// of an `n × n` fundamental matrix, or the `2n` letters `g_i`, `g_i⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    Matrix(usize),
    Group(usize),
}

impl Alphabet {
    /// Size of the fundamental matrix, or number of free generators.
    pub fn size(self) -> usize {
        match self {
            Alphabet::Matrix(n) | Alphabet::Group(n) => n,
        }
    }

    pub fn len(self) -> usize {
        match self {
            Alphabet::Matrix(n) => 2 * n * n,
            Alphabet::Group(n) => 2 * n,
        }
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }

    /// Dense position of `l`, or `None` if the letter does not belong here.
    pub fn index(self, l: Letter) -> Option<usize> {
        match (self, l) {
            (Alphabet::Matrix(n), Letter::U { i, j, star }) => {
                let (i, j) = (i as usize, j as usize);
                (1..=n).contains(&i).then_some(())?;
                (1..=n).contains(&j).then_some(())?;
                Some((star as usize * n + i - 1) * n + j - 1)
            }
            (Alphabet::Group(n), Letter::G { i, inv }) => {
                let i = i as usize;
                (1..=n).contains(&i).then_some(())?;
                Some(inv as usize * n + i - 1)
            }
            _ => None,
        }
    }

    pub fn contains(self, l: Letter) -> bool {
        self.index(l).is_some()
    }

    /// All letters, ordered by [`Alphabet::index`].
    pub fn letters(self) -> Vec<Letter> {
        match self {
            Alphabet::Matrix(n) => {
                let n = n as u32;
                [false, true]
                    .into_iter()
                    .flat_map(|star| {
                        (1..=n).flat_map(move |i| (1..=n).map(move |j| Letter::U { i, j, star }))
                    })
                    .collect()
            }
            Alphabet::Group(n) => [false, true]
                .into_iter()
                .flat_map(|inv| (1..=n as u32).map(move |i| Letter::G { i, inv }))
                .collect(),
        }
    }

    /// All words of length `1..=max_len`.
    pub fn words_up_to(self, max_len: usize) -> Vec<Word> {
        let letters = self.letters();
        let mut out = Vec::new();
        let mut layer = vec![Word::unit()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * letters.len());
            for w in &layer {
                for &l in &letters {
                    next.push(w.concat(&Word::from(l)));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// A finite product of letters; the empty word is the unit.
///
/// Ordered graded-lexicographically: shorter words first, then letter by letter.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
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

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn counit(&self) -> C64 {
        self.0.iter().map(|l| l.counit()).product()
    }

    pub fn star(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.star()).collect())
    }

    pub fn antipode(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.antipode()).collect())
    }

    /// `Δ(w)` as `(left, right, coefficient)` triples, using
    /// `Δ(u_ij) = Σ_k u_ik ⊗ u_kj`, `Δ(u_ij*) = Σ_k u_ik* ⊗ u_kj*`, `Δ(g) = g ⊗ g`.
    ///
    /// `n` is the size of the fundamental matrix (the range of the summation
    /// index `k`).
    pub fn coproduct(&self, n: usize, guard: usize) -> Result<Vec<(Word, Word, C64)>> {
        let fundamental = self.0.iter().filter(|l| !l.is_group()).count();
        let terms = (n as u128).checked_pow(fundamental as u32).unwrap_or(u128::MAX);
        if terms > guard as u128 {
            return Err(Error::GuardExceeded { terms, limit: guard });
        }
        let mut out = vec![(Vec::with_capacity(self.len()), Vec::with_capacity(self.len()))];
        for &letter in &self.0 {
            match letter {
                Letter::G { .. } => {
                    for (l, r) in out.iter_mut() {
                        l.push(letter);
                        r.push(letter);
                    }
                }
                Letter::U { i, j, star } => {
                    let mut next = Vec::with_capacity(out.len() * n);
                    for (l, r) in &out {
                        for k in 1..=n as u32 {
                            let mut l2 = l.clone();
                            let mut r2 = r.clone();
                            l2.push(Letter::U { i, j: k, star });
                            r2.push(Letter::U { i: k, j, star });
                            next.push((l2, r2));
                        }
                    }
                    out = next;
                }
            }
        }
        Ok(out.into_iter().map(|(l, r)| (Word(l), Word(r), ONE)).collect())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Self {
        Word(vec![l])
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Finite linear combination of words. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Element {
    terms: BTreeMap<Word, C64>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn unit() -> Self {
        Element::from(Word::unit())
    }

    pub fn term(coeff: C64, word: Word) -> Self {
        let mut e = Element::zero();
        e.add_term(word, coeff);
        e
    }

    pub fn add_term(&mut self, word: Word, coeff: C64) {
        if coeff == ZERO {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + coeff;
                if s == ZERO {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lexicographic word order.
    pub fn iter(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> C64 {
        self.terms.get(w).copied().unwrap_or(ZERO)
    }

    pub fn scale(&self, c: C64) -> Element {
        let mut out = Element::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), c * x);
        }
        out
    }

    pub fn counit(&self) -> C64 {
        self.terms.iter().map(|(w, c)| c * w.counit()).sum()
    }

    /// Conjugate-linear involution: reverse, star each letter, conjugate coefficients.
    pub fn star(&self) -> Element {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out.add_term(w.star(), c.conj());
        }
        out
    }

    pub fn antipode(&self) -> Element {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out.add_term(w.antipode(), *c);
        }
        out
    }

    /// `Δ(x)` with equal `(left, right)` pairs merged, in word order.
    pub fn coproduct(&self, n: usize, guard: usize) -> Result<Vec<(Word, Word, C64)>> {
        let mut acc: BTreeMap<(Word, Word), C64> = BTreeMap::new();
        let mut total = 0usize;
        for (w, c) in &self.terms {
            let parts = w.coproduct(n, guard.saturating_sub(total))?;
            total += parts.len();
            for (l, r, k) in parts {
                *acc.entry((l, r)).or_insert(ZERO) += c * k;
            }
        }
        Ok(acc
            .into_iter()
            .filter(|(_, c)| *c != ZERO)
            .map(|((l, r), c)| (l, r, c))
            .collect())
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.terms.keys().flat_map(|w| w.letters().iter().copied())
    }

    pub fn max_abs_diff(&self, other: &Element) -> f64 {
        let mut m: f64 = 0.0;
        for (w, c) in &self.terms {
            m = m.max((c - other.coefficient(w)).norm());
        }
        for (w, c) in &other.terms {
            if !self.terms.contains_key(w) {
                m = m.max(c.norm());
            }
        }
        m
    }
}

impl From<Word> for Element {
    fn from(w: Word) -> Self {
        Element::term(ONE, w)
    }
}

impl From<Letter> for Element {
    fn from(l: Letter) -> Self {
        Element::from(Word::from(l))
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), *c);
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-ONE)
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        let mut out = Element::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.concat(b), x * y);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Element {
            type Output = Element;
            fn $m(self, rhs: Element) -> Element {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// The diagonal embedding `g_i ↦ u_ii`, `g_i⁻¹ ↦ u_ii*`; fundamental letters pass through.
pub fn lift_group_word(w: &Word) -> Word {
    w.letters()
        .iter()
        .map(|&l| match l {
            Letter::G { i, inv } => Letter::U { i, j: i, star: inv },
            other => other,
        })
        .collect()
}

pub fn lift_group_element(x: &Element) -> Element {
    let mut out = Element::zero();
    for (w, c) in x.iter() {
        out.add_term(lift_group_word(w), *c);
    }
    out
}
