//! Enumeration, canonicalization, and group evaluation of bounded-multiplicity
//! words over the letters `*1..*d`.
//!
//! Two conventions are kept explicit rather than decided silently. A word set
//! may or may not include the empty word, and word equality may be taken
//! literally (`Raw`) or up to reordering of letters from different coordinate
//! blocks (`CoordinateCanonical`). Under the raw reading the evaluation map is
//! never injective for rank above 2, because generators of distinct
//! coordinates commute; the canonical reading identifies exactly the words the
//! coordinate factorization identifies.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupConfig, GroupElement};

/// Finite sequence of letters, each in `1..=d` for the rank in play.
/// Multiplicity conformance is checked against an explicit `(d, k)` pair at
/// the point of use.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u32>,
}

impl Word {
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l == 0) {
            return Err(Error::WordParse {
                input: format!("{letters:?}"),
                reason: format!("letter index {bad} must be positive"),
            });
        }
        Ok(Word { letters })
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Checks the alphabet bound and the per-letter multiplicity bound.
    pub fn validate(&self, d: u32, k: u32) -> Result<()> {
        let mut counts = vec![0u32; d as usize];
        for &l in &self.letters {
            if l < 1 || l > d {
                return Err(Error::NonconformingWord {
                    d,
                    k,
                    reason: format!("letter *{l} outside alphabet"),
                });
            }
            counts[(l - 1) as usize] += 1;
            if counts[(l - 1) as usize] > k {
                return Err(Error::NonconformingWord {
                    d,
                    k,
                    reason: format!("letter *{l} appears more than {k} times"),
                });
            }
        }
        Ok(())
    }

    /// Evaluates the word at an arbitrary element assignment: letter `i`
    /// becomes `assignment[i-1]`, multiplied left to right.
    pub fn evaluate_with(&self, assignment: &[GroupElement]) -> Result<GroupElement> {
        let arity = match assignment.first() {
            Some(g) => g.arity(),
            None => {
                return Err(Error::RankMismatch { rank: 0, got: 0 });
            }
        };
        let mut acc = GroupElement::identity(arity);
        for &l in &self.letters {
            let g = assignment
                .get((l - 1) as usize)
                .ok_or_else(|| Error::NonconformingWord {
                    d: assignment.len() as u32,
                    k: 0,
                    reason: format!("letter *{l} has no assigned element"),
                })?;
            acc = acc.compose(g)?;
        }
        Ok(acc)
    }

    /// Evaluates at the standard generators of `cfg`, after checking the word
    /// conforms to the configuration's alphabet and multiplicity bound.
    pub fn evaluate(&self, cfg: &GroupConfig) -> Result<GroupElement> {
        self.validate(cfg.d(), cfg.k())?;
        self.evaluate_with(&cfg.generators())
    }

    /// Splits into per-coordinate subwords, preserving relative letter order.
    pub fn coordinate_factorize(&self, cfg: &GroupConfig) -> Result<Vec<Word>> {
        self.validate(cfg.d(), cfg.k())?;
        let mut blocks = vec![Vec::new(); cfg.arity()];
        for &l in &self.letters {
            blocks[cfg.coordinate_of(l)?].push(l);
        }
        Ok(blocks.into_iter().map(|letters| Word { letters }).collect())
    }
}

impl fmt::Display for Word {
    /// Text form used on every CLI surface: `*1*2*1`, empty word `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            write!(f, "*{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "e" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let Some(tail) = rest.strip_prefix('*') else {
                return Err(Error::WordParse {
                    input: s.to_string(),
                    reason: format!("expected '*' at {rest:?}"),
                });
            };
            let digits: String = tail.chars().take_while(char::is_ascii_digit).collect();
            if digits.is_empty() {
                return Err(Error::WordParse {
                    input: s.to_string(),
                    reason: "expected a letter index after '*'".into(),
                });
            }
            let letter: u32 = digits.parse().map_err(|_| Error::WordParse {
                input: s.to_string(),
                reason: format!("letter index {digits} out of range"),
            })?;
            if letter == 0 {
                return Err(Error::WordParse {
                    input: s.to_string(),
                    reason: "letter index must be positive".into(),
                });
            }
            letters.push(letter);
            rest = &tail[digits.len()..];
        }
        Ok(Word { letters })
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which word set Sigma means, exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordConvention {
    pub include_empty: bool,
    pub equivalence: Equivalence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equivalence {
    /// Literal sequence equality.
    Raw,
    /// Equality of the coordinate factorization tuple; identifies words that
    /// differ only by commuting letters across coordinate blocks.
    CoordinateCanonical,
}

impl Default for WordConvention {
    fn default() -> Self {
        WordConvention {
            include_empty: true,
            equivalence: Equivalence::CoordinateCanonical,
        }
    }
}

impl WordConvention {
    pub fn raw(include_empty: bool) -> Self {
        WordConvention {
            include_empty,
            equivalence: Equivalence::Raw,
        }
    }

    pub fn canonical(include_empty: bool) -> Self {
        WordConvention {
            include_empty,
            equivalence: Equivalence::CoordinateCanonical,
        }
    }
}

/// Block key of a word under the standard letter-to-coordinate map for rank
/// `d`; blocks need only the rank, not a full group configuration.
fn canonical_key(word: &Word, d: u32) -> Vec<Vec<u32>> {
    let m = (d as usize).div_ceil(2);
    let mut blocks = vec![Vec::new(); m];
    for &l in word.letters() {
        blocks[((l - 1) / 2) as usize].push(l);
    }
    blocks
}

/// All words over `d` letters with per-letter multiplicity at most `k`,
/// ordered by length then lexicographically.
///
/// Under the canonical equivalence the list is reduced to one representative
/// per class, the earliest word in the same order, so that its length always
/// equals `count_words` under the matching convention.
pub fn enumerate_words(d: u32, k: u32, conv: WordConvention) -> Vec<Word> {
    assert!(d >= 1, "alphabet must have at least one letter");
    let mut out = Vec::new();
    let mut counts = vec![0u32; d as usize];
    let mut prefix = Vec::new();

    fn dfs(d: u32, k: u32, counts: &mut [u32], prefix: &mut Vec<u32>, out: &mut Vec<Word>) {
        for l in 1..=d {
            let idx = (l - 1) as usize;
            if counts[idx] < k {
                counts[idx] += 1;
                prefix.push(l);
                out.push(Word {
                    letters: prefix.clone(),
                });
                dfs(d, k, counts, prefix, out);
                prefix.pop();
                counts[idx] -= 1;
            }
        }
    }

    if conv.include_empty {
        out.push(Word::empty());
    }
    dfs(d, k, &mut counts, &mut prefix, &mut out);
    out.sort_by(|a, b| (a.len(), &a.letters).cmp(&(b.len(), &b.letters)));

    if conv.equivalence == Equivalence::CoordinateCanonical {
        let mut seen = HashSet::new();
        out.retain(|w| seen.insert(canonical_key(w, d)));
    }
    out
}

/// Closed-form count of `enumerate_words(d, k, conv)` without materializing
/// the list.
///
/// Raw words are counted by the multinomial sum over per-letter
/// multiplicities; canonical classes factor over coordinate blocks, each
/// two-letter block contributing the rank-2 raw count and a trailing
/// one-letter block (odd `d`) contributing `k + 1`.
pub fn count_words(d: u32, k: u32, conv: WordConvention) -> BigUint {
    assert!(d >= 1, "alphabet must have at least one letter");
    let total = match conv.equivalence {
        Equivalence::Raw => count_raw(d, k),
        Equivalence::CoordinateCanonical => {
            let pair_count = count_raw(2, k);
            let mut total = BigUint::one();
            for _ in 0..(d / 2) {
                total *= &pair_count;
            }
            if d % 2 == 1 {
                total *= BigUint::from(k + 1);
            }
            total
        }
    };
    if conv.include_empty {
        total
    } else {
        total - BigUint::one()
    }
}

/// Multinomial sum over multiplicity vectors in `{0..k}^d`, including the
/// empty word.
fn count_raw(d: u32, k: u32) -> BigUint {
    let max_len = (d as usize) * (k as usize);
    let mut factorial = Vec::with_capacity(max_len + 1);
    factorial.push(BigUint::one());
    for i in 1..=max_len {
        let prev = factorial[i - 1].clone();
        factorial.push(prev * BigUint::from(i));
    }

    let mut total = BigUint::zero();
    let mut multiplicities = vec![0u32; d as usize];
    loop {
        let len: usize = multiplicities.iter().map(|&m| m as usize).sum();
        let mut term = factorial[len].clone();
        for &m in &multiplicities {
            term /= &factorial[m as usize];
        }
        total += term;

        // odometer over {0..k}^d
        let mut pos = 0;
        loop {
            if pos == multiplicities.len() {
                return total;
            }
            if multiplicities[pos] < k {
                multiplicities[pos] += 1;
                break;
            }
            multiplicities[pos] = 0;
            pos += 1;
        }
    }
}

/// Word equality under the chosen convention: literal sequences for `Raw`,
/// equality of coordinate factorizations for `CoordinateCanonical`.
pub fn words_equivalent(
    w1: &Word,
    w2: &Word,
    cfg: &GroupConfig,
    conv: WordConvention,
) -> Result<bool> {
    w1.validate(cfg.d(), cfg.k())?;
    w2.validate(cfg.d(), cfg.k())?;
    Ok(match conv.equivalence {
        Equivalence::Raw => w1 == w2,
        Equivalence::CoordinateCanonical => {
            canonical_key(w1, cfg.d()) == canonical_key(w2, cfg.d())
        }
    })
}
