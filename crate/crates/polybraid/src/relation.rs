//! Relation chains: ordered collections of two or more words asserted equal.
//!
//! One chain models one multi-equality: a braid chain of k-1 mutually equal
//! words, a far-commutativity chain of all orderings of a product, or a power
//! relation `w^p = e` written as the pair (w^p, e).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::Word;

/// What kind of relation a chain encodes. Used for display and to decide
/// which rewriting rules a chain contributes (order relations admit cyclic
/// rotations of their relator).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationTag {
    Braid,
    Far,
    Order,
    CoxeterPower,
}

impl fmt::Display for RelationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RelationTag::Braid => "braid",
            RelationTag::Far => "far",
            RelationTag::Order => "order",
            RelationTag::CoxeterPower => "coxeter-power",
        };
        f.write_str(name)
    }
}

/// An ordered chain of >= 2 words asserted mutually equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationChain {
    words: Vec<Word>,
    tag: Option<RelationTag>,
}

impl RelationChain {
    pub fn new(words: Vec<Word>, tag: Option<RelationTag>) -> Result<Self> {
        if words.len() < 2 {
            return Err(Error::ChainTooShort);
        }
        let mode = words[0].mode();
        if words.iter().any(|w| w.mode() != mode) {
            return Err(Error::ModeMismatch("all words of a chain must share one mode"));
        }
        Ok(RelationChain { words, tag })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn first(&self) -> &Word {
        &self.words[0]
    }

    pub fn tag(&self) -> Option<RelationTag> {
        self.tag
    }

    pub fn max_index(&self) -> u32 {
        self.words.iter().map(Word::max_index).max().unwrap_or(0)
    }

    /// The chain's words as a set, for order-insensitive comparison.
    pub fn word_set(&self) -> BTreeSet<&Word> {
        self.words.iter().collect()
    }

    /// Renders `w1 = w2 = ... = wm` with the given display alphabet.
    pub fn display_with(&self, alphabet: &str) -> String {
        self.words.iter().map(|w| w.display_with(alphabet)).collect::<Vec<_>>().join(" = ")
    }
}

impl fmt::Display for RelationChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("s"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Mode;

    #[test]
    fn chain_needs_two_words() {
        let w = Word::parse("s1", Mode::Group).unwrap();
        assert_eq!(RelationChain::new(vec![w], None).unwrap_err(), Error::ChainTooShort);
    }

    #[test]
    fn chain_display_joins_with_equals() {
        let a = Word::parse("s1 s2", Mode::Group).unwrap();
        let b = Word::parse("s2 s1", Mode::Group).unwrap();
        let chain = RelationChain::new(vec![a, b], Some(RelationTag::Far)).unwrap();
        assert_eq!(chain.to_string(), "s1 s2 = s2 s1");
        assert_eq!(chain.display_with("r"), "r1 r2 = r2 r1");
    }
}
