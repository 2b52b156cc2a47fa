//! Normal forms and group operations for the polynomial shift groups.
//!
//! A group element acts on a tuple of integer polynomials coordinatewise,
//! sending `p` to `p(x + shift) + offset`. The pair (shift, offset) per
//! coordinate is a complete normal form: equality of elements is decidable
//! componentwise, which is what every injectivity count below relies on.
//!
//! Generator convention, fixed throughout: letter `2i-1` is `R_i` (adds
//! `x^k` on coordinate `i`), letter `2i` is `S_i` (substitutes `x+1` on
//! coordinate `i`); for odd rank `d` the last letter `d` is an `R` acting on
//! the extra coordinate. Coordinates are `(letter-1)/2` in both parities.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{deserialize_bigint, serialize_bigint, Polynomial};

/// One-coordinate transformation `p -> p(x + shift) + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordAffine {
    pub shift: BigInt,
    pub offset: Polynomial,
}

impl CoordAffine {
    pub fn new(shift: impl Into<BigInt>, offset: Polynomial) -> Self {
        CoordAffine {
            shift: shift.into(),
            offset,
        }
    }

    pub fn identity() -> Self {
        CoordAffine {
            shift: BigInt::zero(),
            offset: Polynomial::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.shift.is_zero() && self.offset.is_zero()
    }

    /// Functional composition, `other` applied first.
    ///
    /// With `self = (a1, q1)` and `other = (a2, q2)` the composite is
    /// `(a1 + a2, q2(x + a1) + q1)`; the law is validated against the
    /// function-application oracle in the test suites.
    pub fn compose(&self, other: &CoordAffine) -> CoordAffine {
        CoordAffine {
            shift: &self.shift + &other.shift,
            offset: &other.offset.shift(&self.shift) + &self.offset,
        }
    }

    pub fn inverse(&self) -> CoordAffine {
        let neg_shift = -&self.shift;
        CoordAffine {
            offset: -self.offset.shift(&neg_shift),
            shift: neg_shift,
        }
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        &p.shift(&self.shift) + &self.offset
    }
}

impl fmt::Display for CoordAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(shift {}, offset {})", self.shift, self.offset)
    }
}

impl Serialize for CoordAffine {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Shift<'a>(&'a BigInt);
        impl Serialize for Shift<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                serialize_bigint(self.0, serializer)
            }
        }
        let mut st = serializer.serialize_struct("CoordAffine", 2)?;
        st.serialize_field("shift", &Shift(&self.shift))?;
        st.serialize_field("offset", &self.offset)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CoordAffine {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            #[serde(deserialize_with = "deserialize_bigint")]
            shift: BigInt,
            offset: Polynomial,
        }
        let raw = Raw::deserialize(deserializer)?;
        Ok(CoordAffine {
            shift: raw.shift,
            offset: raw.offset,
        })
    }
}

/// Coordinatewise transformation of a polynomial tuple; elements of the
/// ambient group and of every coordinate subgroup share this normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<CoordAffine>,
}

impl GroupElement {
    pub fn new(coords: Vec<CoordAffine>) -> Self {
        GroupElement { coords }
    }

    pub fn identity(arity: usize) -> Self {
        GroupElement {
            coords: vec![CoordAffine::identity(); arity],
        }
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[CoordAffine] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(CoordAffine::is_identity)
    }

    /// True when every coordinate substitution amount is zero. Such elements
    /// form an abelian subgroup (they are plain translations by polynomials).
    pub fn has_zero_shifts(&self) -> bool {
        self.coords.iter().all(|c| c.shift.is_zero())
    }

    /// Group product: `other` applied first, then `self`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch {
                left: self.arity(),
                right: other.arity(),
            });
        }
        Ok(GroupElement {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(g, h)| g.compose(h))
                .collect(),
        })
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            coords: self.coords.iter().map(CoordAffine::inverse).collect(),
        }
    }

    /// Applies the transformation to a polynomial tuple of matching length.
    pub fn apply(&self, tuple: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if tuple.len() != self.arity() {
            return Err(Error::TupleLengthMismatch {
                expected: self.arity(),
                got: tuple.len(),
            });
        }
        Ok(self
            .coords
            .iter()
            .zip(tuple)
            .map(|(c, p)| c.apply(p))
            .collect())
    }

    /// The commutator `self . other . self^-1 . other^-1`.
    pub fn commutator(&self, other: &GroupElement) -> Result<GroupElement> {
        self.compose(other)?
            .compose(&self.inverse())?
            .compose(&other.inverse())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("GroupElement", 1)?;
        st.serialize_field("coords", &self.coords)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            coords: Vec<CoordAffine>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.coords.is_empty() {
            return Err(D::Error::custom(
                "element must have at least one coordinate",
            ));
        }
        Ok(GroupElement { coords: raw.coords })
    }
}

/// Parameters of the ambient group: `k` is the degree of the added monomial
/// (and the nilpotency parameter), `d` the number of generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupConfig {
    k: u32,
    d: u32,
}

impl GroupConfig {
    pub fn new(k: u32, d: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidConfig("k must be >= 1".into()));
        }
        if d < 2 {
            return Err(Error::InvalidConfig("d must be >= 2".into()));
        }
        Ok(GroupConfig { k, d })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Coordinate count: `d/2` for even `d`, `(d+1)/2` for odd `d`.
    pub fn arity(&self) -> usize {
        (self.d as usize).div_ceil(2)
    }

    /// Zero-based coordinate a letter acts on, same formula in both parities.
    pub fn coordinate_of(&self, letter: u32) -> Result<usize> {
        if letter < 1 || letter > self.d {
            return Err(Error::LetterOutOfRange { letter, d: self.d });
        }
        Ok(((letter - 1) / 2) as usize)
    }

    /// Generator assigned to a letter: odd letters are `R`-type (add `x^k`),
    /// even letters are `S`-type (substitute `x+1`).
    pub fn generator(&self, letter: u32) -> Result<GroupElement> {
        let coord = self.coordinate_of(letter)?;
        let mut coords = vec![CoordAffine::identity(); self.arity()];
        coords[coord] = if letter % 2 == 1 {
            CoordAffine::new(BigInt::zero(), Polynomial::monomial(self.k as usize))
        } else {
            CoordAffine::new(BigInt::one(), Polynomial::zero())
        };
        Ok(GroupElement::new(coords))
    }

    /// All `d` generators in letter order.
    pub fn generators(&self) -> Vec<GroupElement> {
        (1..=self.d)
            .map(|l| self.generator(l).expect("letter in range"))
            .collect()
    }

    /// The distinguished tuple `(x^k, ..., x^k)` all injectivity checks
    /// evaluate at.
    pub fn evaluation_point(&self) -> Vec<Polynomial> {
        vec![Polynomial::monomial(self.k as usize); self.arity()]
    }
}

/// Outcome of a nilpotency-class bound check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCheck {
    pub holds: bool,
    /// First non-vanishing left-normed generator commutator, in lexicographic
    /// order over letter sequences, when the bound fails.
    pub witness: Option<CommutatorWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutatorWitness {
    pub letters: Vec<u32>,
    pub element: GroupElement,
}

impl CommutatorWitness {
    /// Recomputes the left-normed commutator from the letter sequence.
    pub fn recompute(&self, cfg: &GroupConfig) -> Result<GroupElement> {
        left_normed_commutator(cfg, &self.letters)
    }
}

/// Left-normed commutator `[[..[g1,g2],g3],..,gn]` of the generators named
/// by `letters`.
pub fn left_normed_commutator(cfg: &GroupConfig, letters: &[u32]) -> Result<GroupElement> {
    let mut iter = letters.iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::InvalidConfig("empty commutator".into()))?;
    let mut acc = cfg.generator(*first)?;
    for letter in iter {
        acc = acc.commutator(&cfg.generator(*letter)?)?;
    }
    Ok(acc)
}

/// Checks that every left-normed commutator of weight `c+1` in the
/// generators is the identity.
///
/// This finite check bounds the class for this group family because the
/// shift map is a homomorphism onto an abelian group (so all commutators
/// have zero shifts) and zero-shift elements commute; both structural facts
/// are covered by the property suites. Subtrees rooted at an identity are
/// pruned: every extension of an identity commutator stays the identity,
/// which also makes the check monotone in `c`.
pub fn verify_class_at_most(cfg: &GroupConfig, c: u32) -> ClassCheck {
    assert!(c >= 1, "class bound must be >= 1");
    let gens: Vec<GroupElement> = cfg.generators();

    fn dfs(
        gens: &[GroupElement],
        current: &GroupElement,
        letters: &mut Vec<u32>,
        depth_left: u32,
    ) -> Option<CommutatorWitness> {
        if depth_left == 0 {
            if current.is_identity() {
                return None;
            }
            return Some(CommutatorWitness {
                letters: letters.clone(),
                element: current.clone(),
            });
        }
        if current.is_identity() {
            return None;
        }
        for (i, g) in gens.iter().enumerate() {
            let next = current.commutator(g).expect("generators share arity");
            letters.push(i as u32 + 1);
            if let Some(w) = dfs(gens, &next, letters, depth_left - 1) {
                return Some(w);
            }
            letters.pop();
        }
        None
    }

    for (i, g) in gens.iter().enumerate() {
        let mut letters = vec![i as u32 + 1];
        if let Some(witness) = dfs(&gens, g, &mut letters, c) {
            return ClassCheck {
                holds: false,
                witness: Some(witness),
            };
        }
    }
    ClassCheck {
        holds: true,
        witness: None,
    }
}

/// Exact nilpotency class computed by raising the bound until it holds,
/// together with the witness refuting the previous bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotencyReport {
    pub k: u32,
    pub d: u32,
    /// Smallest `c` with all weight-`c+1` generator commutators trivial.
    pub class: u32,
    /// Non-trivial weight-`class` commutator refuting the bound `class - 1`;
    /// `None` when the group is abelian.
    pub witness: Option<CommutatorWitness>,
    /// True when the computed class differs from the construction's
    /// conventional "k-step" label.
    pub label_mismatch: bool,
    pub note: Option<String>,
}

/// Computes the exact class by scanning bounds `1..=max_bound`.
pub fn nilpotency_report(cfg: &GroupConfig, max_bound: u32) -> Result<NilpotencyReport> {
    let mut witness = None;
    for c in 1..=max_bound {
        let check = verify_class_at_most(cfg, c);
        if check.holds {
            let label_mismatch = c != cfg.k();
            let note = label_mismatch.then(|| {
                format!(
                    "computed lower-central class is {c} (standard convention), while the \
                     construction is conventionally labeled {}-step",
                    cfg.k()
                )
            });
            return Ok(NilpotencyReport {
                k: cfg.k(),
                d: cfg.d(),
                class: c,
                witness,
                label_mismatch,
                note,
            });
        }
        witness = check.witness;
    }
    Err(Error::InvalidConfig(format!(
        "class exceeds scan bound {max_bound}"
    )))
}
