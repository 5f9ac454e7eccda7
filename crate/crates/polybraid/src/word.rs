//! Free semigroup and free group words over an indexed generator alphabet.
//!
//! A [`Word`] is the carrier of every relation in the crate: braid words,
//! regularity conditions and matrix entries are all words over generators
//! `s1, s2, ...`. Group-mode words are kept freely reduced at all times;
//! semigroup-mode words only ever contain positive letters.

use std::fmt;

use crate::error::{Error, Result};

/// Whether words live in a free semigroup (positive letters only) or a free
/// group (letters carry signs, adjacent inverses cancel).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Semigroup,
    Group,
}

/// 1-based position of a generator in the alphabet.
///
/// The alphabet itself is implicit; the bound is supplied by whatever context
/// uses the word (a presentation, an abelianization, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorIndex(u32);

impl GeneratorIndex {
    pub fn new(index: u32) -> Result<Self> {
        if index == 0 {
            return Err(Error::IndexOutOfRange { index, bound: 0 });
        }
        Ok(GeneratorIndex(index))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// One factor of a word: a generator to the power +1 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: GeneratorIndex,
    pub inverse: bool,
}

impl Letter {
    pub fn positive(index: u32) -> Result<Self> {
        Ok(Letter { generator: GeneratorIndex::new(index)?, inverse: false })
    }

    pub fn negative(index: u32) -> Result<Self> {
        Ok(Letter { generator: GeneratorIndex::new(index)?, inverse: true })
    }

    pub fn exponent(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverted(&self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A word over the indexed alphabet.
///
/// Invariants (enforced by every constructor and operation):
/// - group mode: the letter sequence is freely reduced;
/// - semigroup mode: all letters are positive.
///
/// The empty sequence is the identity `e` in group mode. In semigroup mode the
/// free semigroup has no identity, so the ordinary constructors reject empty
/// input; [`Word::empty_semigroup`] exists for the few contexts that supply an
/// identity themselves (for example the 0th power), and such words answer
/// `true` to [`Word::is_empty`] so callers can see the flag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    mode: Mode,
    letters: Vec<Letter>,
}

impl Word {
    /// The group identity `e`.
    pub fn identity() -> Self {
        Word { mode: Mode::Group, letters: Vec::new() }
    }

    /// An explicitly flagged empty semigroup word; see the type docs.
    pub fn empty_semigroup() -> Self {
        Word { mode: Mode::Semigroup, letters: Vec::new() }
    }

    /// A group word from signed letters; the result is freely reduced.
    pub fn group(letters: Vec<Letter>) -> Self {
        Word { mode: Mode::Group, letters: free_reduce(letters) }
    }

    /// A semigroup word from positive letters.
    pub fn semigroup(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptySemigroupWord);
        }
        if letters.iter().any(|l| l.inverse) {
            return Err(Error::SemigroupInverse);
        }
        Ok(Word { mode: Mode::Semigroup, letters })
    }

    /// The single-letter word `s<index>` in the given mode.
    pub fn generator(mode: Mode, index: u32) -> Result<Self> {
        let letter = Letter::positive(index)?;
        Ok(Word { mode, letters: vec![letter] })
    }

    pub fn mode(&self) -> Mode {
        self.mode
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

    /// Largest generator index used, or 0 for the empty word.
    pub fn max_index(&self) -> u32 {
        self.letters.iter().map(|l| l.generator.get()).max().unwrap_or(0)
    }

    /// Juxtaposition; in group mode the result is freely reduced.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch("cannot concatenate words of different modes"));
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(match self.mode {
            Mode::Group => Word::group(letters),
            Mode::Semigroup => Word { mode: Mode::Semigroup, letters },
        })
    }

    /// Group inverse: letters reversed with exponents negated.
    pub fn invert(&self) -> Result<Word> {
        if self.mode != Mode::Group {
            return Err(Error::SemigroupInverse);
        }
        let letters = self.letters.iter().rev().map(Letter::inverted).collect();
        Ok(Word::group(letters))
    }

    /// `p`-fold concatenation; negative `p` uses the inverse word (group mode).
    pub fn power(&self, p: i64) -> Result<Word> {
        if self.mode == Mode::Semigroup && p < 0 {
            return Err(Error::NegativeSemigroupPower(p));
        }
        let base = if p < 0 { self.invert()? } else { self.clone() };
        let reps = p.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(base.len() * reps);
        for _ in 0..reps {
            letters.extend_from_slice(&base.letters);
        }
        Ok(match self.mode {
            Mode::Group => Word::group(letters),
            Mode::Semigroup => Word { mode: Mode::Semigroup, letters },
        })
    }

    /// Signed exponent sum per generator, as a vector of length `n`.
    pub fn abelianize(&self, n: u32) -> Result<Vec<i64>> {
        let mut sums = vec![0i64; n as usize];
        for letter in &self.letters {
            let index = letter.generator.get();
            if index > n {
                return Err(Error::IndexOutOfRange { index, bound: n });
            }
            sums[(index - 1) as usize] += letter.exponent();
        }
        Ok(sums)
    }

    /// Cyclic rotation by `offset` letters (group mode), freely reduced.
    pub fn rotate(&self, offset: usize) -> Word {
        if self.letters.is_empty() {
            return self.clone();
        }
        let off = offset % self.letters.len();
        let mut letters = Vec::with_capacity(self.letters.len());
        letters.extend_from_slice(&self.letters[off..]);
        letters.extend_from_slice(&self.letters[..off]);
        match self.mode {
            Mode::Group => Word::group(letters),
            Mode::Semigroup => Word { mode: Mode::Semigroup, letters },
        }
    }

    /// Parses the text syntax: whitespace-separated tokens `s<i>` or `s<i>^-1`
    /// (any alphabetic prefix is accepted; `e` alone denotes the identity).
    /// The empty string is the group identity.
    pub fn parse(text: &str, mode: Mode) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "e" {
                if mode == Mode::Semigroup {
                    return Err(Error::EmptySemigroupWord);
                }
                continue;
            }
            letters.push(parse_letter(token, mode)?);
        }
        match mode {
            Mode::Group => Ok(Word::group(letters)),
            Mode::Semigroup => Word::semigroup(letters),
        }
    }

    /// Renders the word with the given display alphabet (`s`, `r`, `sigma`, ...).
    pub fn display_with(&self, alphabet: &str) -> String {
        if self.letters.is_empty() {
            return "e".to_string();
        }
        let mut parts = Vec::with_capacity(self.letters.len());
        for letter in &self.letters {
            let mut token = format!("{}{}", alphabet, letter.generator.get());
            if letter.inverse {
                token.push_str("^-1");
            }
            parts.push(token);
        }
        parts.join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("s"))
    }
}

fn parse_letter(token: &str, mode: Mode) -> Result<Letter> {
    let bad = || Error::BadGeneratorToken(token.to_string());
    let (body, inverse) = match token.strip_suffix("^-1") {
        Some(body) => (body, true),
        None => (token, false),
    };
    if inverse && mode == Mode::Semigroup {
        return Err(Error::SemigroupInverse);
    }
    let digits_at = body.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
    let (prefix, digits) = body.split_at(digits_at);
    if prefix.is_empty() || !prefix.chars().all(|c| c.is_ascii_alphabetic()) {
        return Err(bad());
    }
    let index: u32 = digits.parse().map_err(|_| bad())?;
    if index == 0 {
        return Err(bad());
    }
    Ok(Letter { generator: GeneratorIndex::new(index)?, inverse })
}

/// Freely reduces a letter sequence with one stack pass.
fn free_reduce(letters: Vec<Letter>) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
    for letter in letters {
        if stack.last().is_some_and(|top| top.cancels(&letter)) {
            stack.pop();
        } else {
            stack.push(letter);
        }
    }
    stack
}
