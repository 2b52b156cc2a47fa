//! Nilprogressions: evaluated word sets `{w(x_1..x_d) . a : w in Sigma}`,
//! non-degeneracy checks, and bounded search for progressions inside a finite
//! ground set.
//!
//! Containment search is pool-relative by construction: the ambient group is
//! infinite, so the search quantifies over caller-supplied finite generator
//! and base pools, and every report says so. Results carry their generator
//! assignment and base, making each claim independently re-checkable.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupConfig, GroupElement};
use crate::words::{count_words, enumerate_words, WordConvention};

/// Progression shape: step of the ambient group, length (the multiplicity
/// bound on words), and rank (the number of generators).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProgressionSpec {
    pub step: u32,
    pub length: u32,
    pub rank: u32,
}

impl ProgressionSpec {
    pub fn new(step: u32, length: u32, rank: u32) -> Result<Self> {
        if step < 1 || length < 1 || rank < 1 {
            return Err(Error::InvalidConfig(
                "step, length, and rank must all be >= 1".into(),
            ));
        }
        Ok(ProgressionSpec { step, length, rank })
    }
}

/// A materialized nilprogression: the word set is evaluated at the generator
/// assignment, right-multiplied by the base, and de-duplicated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Nilprogression {
    pub spec: ProgressionSpec,
    pub generators: Vec<GroupElement>,
    pub base: GroupElement,
    /// Distinct evaluated elements, in normal-form order.
    pub elements: BTreeSet<GroupElement>,
    /// Size of the word set under the active convention.
    pub word_count: usize,
    pub convention: WordConvention,
}

impl Nilprogression {
    /// Full cardinality: the evaluation map hit one element per word.
    pub fn is_nondegenerate(&self) -> bool {
        self.elements.len() == self.word_count
    }

    /// Word-set sizes under both conventions, for side-by-side reporting.
    pub fn word_counts_both(&self) -> (BigUint, BigUint) {
        let raw = count_words(
            self.spec.rank,
            self.spec.length,
            WordConvention::raw(self.convention.include_empty),
        );
        let canonical = count_words(
            self.spec.rank,
            self.spec.length,
            WordConvention::canonical(self.convention.include_empty),
        );
        (raw, canonical)
    }
}

fn check_assignment(
    spec: &ProgressionSpec,
    gens: &[GroupElement],
    base: &GroupElement,
) -> Result<usize> {
    if gens.len() != spec.rank as usize {
        return Err(Error::RankMismatch {
            rank: spec.rank,
            got: gens.len(),
        });
    }
    let arity = base.arity();
    for g in gens {
        if g.arity() != arity {
            return Err(Error::ArityMismatch {
                left: arity,
                right: g.arity(),
            });
        }
    }
    Ok(arity)
}

/// Builds the progression `{w(gens) . base : w in Sigma_<length+1>}`.
pub fn build(
    spec: ProgressionSpec,
    gens: &[GroupElement],
    base: &GroupElement,
    conv: WordConvention,
) -> Result<Nilprogression> {
    check_assignment(&spec, gens, base)?;
    let words = enumerate_words(spec.rank, spec.length, conv);
    let mut elements = BTreeSet::new();
    for word in &words {
        let value = word.evaluate_with(gens)?.compose(base)?;
        elements.insert(value);
    }
    Ok(Nilprogression {
        spec,
        generators: gens.to_vec(),
        base: base.clone(),
        elements,
        word_count: words.len(),
        convention: conv,
    })
}

/// Searches for non-degenerate progressions fully contained in `v`.
///
/// Assignments run over `gen_pool^rank` (odometer order, first generator
/// slot most significant) crossed with `base_pool` in order; the result list
/// follows that enumeration order regardless of how the work is scheduled.
/// An assignment is abandoned as soon as one evaluated element falls outside
/// `v` or repeats (a repeat already forfeits non-degeneracy). Words are
/// evaluated in length order so cheap prefixes prune early.
pub fn find_in(
    v: &[GroupElement],
    spec: ProgressionSpec,
    gen_pool: &[GroupElement],
    base_pool: &[GroupElement],
    conv: WordConvention,
    limit: Option<usize>,
) -> Result<Vec<Nilprogression>> {
    if gen_pool.is_empty() || base_pool.is_empty() {
        return Ok(Vec::new());
    }
    let arity = base_pool[0].arity();
    for g in gen_pool.iter().chain(base_pool).chain(v) {
        if g.arity() != arity {
            return Err(Error::ArityMismatch {
                left: arity,
                right: g.arity(),
            });
        }
    }

    let words = enumerate_words(spec.rank, spec.length, conv);
    let member: HashSet<&GroupElement> = v.iter().collect();
    let rank = spec.rank as usize;
    let assignment_count = gen_pool.len().checked_pow(rank as u32).ok_or_else(|| {
        Error::InvalidConfig("generator pool too large for exhaustive assignment".into())
    })?;

    let pool_len = gen_pool.len();
    let evaluate_assignment = |assignment_index: usize| -> Vec<Nilprogression> {
        let mut gens = Vec::with_capacity(rank);
        let mut rest = assignment_index;
        for slot in 0..rank {
            let place = pool_len.pow((rank - 1 - slot) as u32);
            gens.push(gen_pool[(rest / place) % pool_len].clone());
            rest %= place;
        }
        let mut found = Vec::new();
        'bases: for base in base_pool {
            let mut elements = BTreeSet::new();
            for word in &words {
                let value = word
                    .evaluate_with(&gens)
                    .and_then(|g| g.compose(base))
                    .expect("arity checked for all pool elements");
                if !member.contains(&value) || !elements.insert(value) {
                    continue 'bases;
                }
            }
            found.push(Nilprogression {
                spec,
                generators: gens.clone(),
                base: base.clone(),
                elements,
                word_count: words.len(),
                convention: conv,
            });
        }
        found
    };

    let per_assignment: Vec<Vec<Nilprogression>> = (0..assignment_count)
        .into_par_iter()
        .map(evaluate_assignment)
        .collect();

    let mut out = Vec::new();
    for found in per_assignment {
        for progression in found {
            out.push(progression);
            if limit.is_some_and(|l| out.len() >= l) {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// Pool-relative absence check.
#[derive(Clone, Debug, Serialize)]
pub struct AbsenceCheck {
    /// True when no pool assignment yields a non-degenerate progression
    /// inside `v`.
    pub holds: bool,
    pub witness: Option<Nilprogression>,
}

/// True iff `find_in` over the same pools returns nothing; otherwise the
/// first witness in enumeration order.
pub fn verify_absence(
    v: &[GroupElement],
    spec: ProgressionSpec,
    gen_pool: &[GroupElement],
    base_pool: &[GroupElement],
    conv: WordConvention,
) -> Result<AbsenceCheck> {
    let mut found = find_in(v, spec, gen_pool, base_pool, conv, Some(1))?;
    Ok(AbsenceCheck {
        holds: found.is_empty(),
        witness: found.pop(),
    })
}

/// Default search pool: the standard generators, their inverses, and the
/// identity, in that order.
pub fn standard_gen_pool(cfg: &GroupConfig) -> Vec<GroupElement> {
    let gens = cfg.generators();
    let mut pool: Vec<GroupElement> = gens.clone();
    pool.extend(gens.iter().map(GroupElement::inverse));
    pool.push(GroupElement::identity(cfg.arity()));
    pool
}
