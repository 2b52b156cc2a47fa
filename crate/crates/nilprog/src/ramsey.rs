//! Partition-regularity certification by exhaustive coloring search, for
//! arithmetic-progression and nilprogression pattern families, plus the
//! restricted-witness search.
//!
//! The search enumerates colorings canonically: the first point gets color 0
//! and a new color may be opened only as the next unused index, so each
//! partition is visited once. A partial coloring is abandoned the moment an
//! edge becomes fully colored in one class. For scheduling, the tree is split
//! at a fixed depth into branch seeds processed independently; results and
//! node counts are combined in seed order, so certificates are identical at
//! any worker count and match the plain sequential traversal.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::progression::{build, find_in, verify_absence, Nilprogression, ProgressionSpec};
use crate::words::WordConvention;

/// Depth at which the coloring tree is split into independent branches.
const SEED_DEPTH: usize = 7;

/// Finite ordered ground set with O(1) membership lookup. Construction
/// sorts and de-duplicates, so the order is stable across runs.
#[derive(Clone, Debug)]
pub struct GroundSet<P> {
    items: Vec<P>,
    index: HashMap<P, usize>,
}

impl<P: Clone + Eq + Hash + Ord> GroundSet<P> {
    pub fn new(items: impl IntoIterator<Item = P>) -> Self {
        let mut items: Vec<P> = items.into_iter().collect();
        items.sort();
        items.dedup();
        let index = items
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        GroundSet { items, index }
    }

    pub fn items(&self) -> &[P] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: &P) -> bool {
        self.index.contains_key(item)
    }

    pub fn index_of(&self, item: &P) -> Option<usize> {
        self.index.get(item).copied()
    }
}

/// Where an edge came from, kept so every certificate is re-checkable.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeProvenance {
    ArithmeticProgression { start: i64, difference: i64 },
    Nilprogression(Box<Nilprogression>),
}

/// Pattern instances inside a ground set, as index sets plus provenance.
#[derive(Clone, Debug, Serialize)]
pub struct PatternFamily {
    edges: Vec<Vec<usize>>,
    provenance: Vec<EdgeProvenance>,
}

impl PatternFamily {
    /// Keeps edges with at least two points, sorted, distinct as sets
    /// (first provenance wins).
    pub fn new(instances: Vec<(Vec<usize>, EdgeProvenance)>) -> Self {
        let mut edges = Vec::new();
        let mut provenance = Vec::new();
        let mut seen = HashSet::new();
        for (mut edge, source) in instances {
            edge.sort_unstable();
            edge.dedup();
            if edge.len() < 2 {
                continue;
            }
            if seen.insert(edge.clone()) {
                edges.push(edge);
                provenance.push(source);
            }
        }
        PatternFamily { edges, provenance }
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn provenance(&self) -> &[EdgeProvenance] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// All `k`-term arithmetic progressions (positive difference) contained in
/// the ground set. A progression and its reversal are one set, so positive
/// differences enumerate each instance exactly once.
pub fn ap_patterns(v: &GroundSet<i64>, k: usize) -> PatternFamily {
    assert!(k >= 3, "arithmetic progressions need k >= 3");
    let mut instances = Vec::new();
    if let Some(&max) = v.items().last() {
        for &start in v.items() {
            let mut difference = 1i64;
            while start as i128 + (k as i128 - 1) * difference as i128 <= max as i128 {
                let points: Option<Vec<usize>> = (0..k)
                    .map(|i| v.index_of(&(start + i as i64 * difference)))
                    .collect();
                if let Some(edge) = points {
                    instances.push((
                        edge,
                        EdgeProvenance::ArithmeticProgression { start, difference },
                    ));
                }
                difference += 1;
            }
        }
    }
    PatternFamily::new(instances)
}

/// All non-degenerate nilprogressions of the given shape found inside the
/// ground set over the supplied pools; element sets become edges.
pub fn nilprogression_patterns(
    v: &GroundSet<GroupElement>,
    spec: ProgressionSpec,
    gen_pool: &[GroupElement],
    base_pool: &[GroupElement],
    conv: WordConvention,
) -> Result<PatternFamily> {
    let found = find_in(v.items(), spec, gen_pool, base_pool, conv, None)?;
    let instances = found
        .into_iter()
        .map(|p| {
            let edge: Vec<usize> = p
                .elements
                .iter()
                .map(|e| v.index_of(e).expect("find_in returns members of v"))
                .collect();
            (edge, EdgeProvenance::Nilprogression(Box::new(p)))
        })
        .collect();
    Ok(PatternFamily::new(instances))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    PartitionRegular,
    Counterexample,
}

/// Result of a certification run. `nodes_explored` counts color-assignment
/// attempts in canonical traversal order up to termination.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub outcome: Outcome,
    pub r: usize,
    pub edges: usize,
    pub nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Vec<usize>>,
}

/// True when no edge is monochromatic under the coloring; the independent
/// re-validation pass for counterexamples.
pub fn coloring_avoids(coloring: &[usize], fam: &PatternFamily) -> bool {
    fam.edges.iter().all(|edge| {
        let first = coloring[edge[0]];
        edge.iter().any(|&i| coloring[i] != first)
    })
}

struct SearchCtx<'a> {
    n: usize,
    r: usize,
    edges: &'a [Vec<usize>],
    /// Edge indices grouped by their largest point: the only edges that can
    /// first become fully colored when that point is assigned.
    closing_at: Vec<Vec<usize>>,
}

impl SearchCtx<'_> {
    /// Would assigning `colors[depth]` leave some edge closing at `depth`
    /// monochromatic?
    fn violates(&self, colors: &[usize], depth: usize) -> bool {
        self.closing_at[depth].iter().any(|&e| {
            let edge = &self.edges[e];
            let first = colors[edge[0]];
            edge.iter().all(|&i| colors[i] == first)
        })
    }
}

struct Seed {
    colors: Vec<usize>,
    used: usize,
    /// Prefix-level attempts made before this seed's subtree in canonical
    /// traversal order.
    pre_attempts: u64,
}

fn collect_seeds(ctx: &SearchCtx<'_>, depth_limit: usize) -> (Vec<Seed>, u64) {
    let mut seeds = Vec::new();
    let mut attempts = 0u64;
    let mut colors = vec![usize::MAX; ctx.n];

    fn rec(
        ctx: &SearchCtx<'_>,
        colors: &mut Vec<usize>,
        depth: usize,
        used: usize,
        depth_limit: usize,
        attempts: &mut u64,
        seeds: &mut Vec<Seed>,
    ) {
        if depth == depth_limit {
            seeds.push(Seed {
                colors: colors[..depth].to_vec(),
                used,
                pre_attempts: *attempts,
            });
            return;
        }
        let cap = used.min(ctx.r - 1);
        for c in 0..=cap {
            *attempts += 1;
            colors[depth] = c;
            if !ctx.violates(colors, depth) {
                let used_next = used.max(c + 1);
                rec(
                    ctx,
                    colors,
                    depth + 1,
                    used_next,
                    depth_limit,
                    attempts,
                    seeds,
                );
            }
        }
        colors[depth] = usize::MAX;
    }

    rec(
        ctx,
        &mut colors,
        0,
        0,
        depth_limit,
        &mut attempts,
        &mut seeds,
    );
    (seeds, attempts)
}

/// Continues one branch depth-first, returning its first avoiding coloring
/// and the attempts spent inside the branch.
fn run_branch(ctx: &SearchCtx<'_>, seed: &Seed) -> (Option<Vec<usize>>, u64) {
    let mut colors = vec![usize::MAX; ctx.n];
    colors[..seed.colors.len()].clone_from_slice(&seed.colors);
    let mut attempts = 0u64;

    fn rec(
        ctx: &SearchCtx<'_>,
        colors: &mut Vec<usize>,
        depth: usize,
        used: usize,
        attempts: &mut u64,
    ) -> Option<Vec<usize>> {
        if depth == ctx.n {
            return Some(colors.clone());
        }
        let cap = used.min(ctx.r - 1);
        for c in 0..=cap {
            *attempts += 1;
            colors[depth] = c;
            if !ctx.violates(colors, depth) {
                if let Some(w) = rec(ctx, colors, depth + 1, used.max(c + 1), attempts) {
                    return Some(w);
                }
            }
        }
        colors[depth] = usize::MAX;
        None
    }

    let witness = rec(
        ctx,
        &mut colors,
        seed.colors.len(),
        seed.used,
        &mut attempts,
    );
    (witness, attempts)
}

/// Decides whether every `r`-coloring of the ground set leaves some edge
/// monochromatic. Colorings may leave classes empty ("at most r classes").
pub fn certify<P>(v: &GroundSet<P>, fam: &PatternFamily, r: usize) -> Result<Certificate>
where
    P: Clone + Eq + Hash + Ord,
{
    assert!(r >= 1, "need at least one color class");
    let n = v.len();
    for (e, edge) in fam.edges.iter().enumerate() {
        if let Some(&bad) = edge.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidEdge {
                edge: e,
                index: bad,
                size: n,
            });
        }
    }
    if n == 0 {
        return Ok(Certificate {
            outcome: Outcome::Counterexample,
            r,
            edges: fam.len(),
            nodes_explored: 0,
            coloring: Some(Vec::new()),
        });
    }

    let mut closing_at = vec![Vec::new(); n];
    for (e, edge) in fam.edges.iter().enumerate() {
        closing_at[*edge.last().expect("edges are non-empty")].push(e);
    }
    let ctx = SearchCtx {
        n,
        r,
        edges: &fam.edges,
        closing_at,
    };

    let (seeds, prefix_attempts) = collect_seeds(&ctx, SEED_DEPTH.min(n));
    let branch_results: Vec<(Option<Vec<usize>>, u64)> =
        seeds.par_iter().map(|s| run_branch(&ctx, s)).collect();

    let mut earlier_branch_attempts = 0u64;
    for (seed, (witness, attempts)) in seeds.iter().zip(branch_results) {
        if let Some(coloring) = witness {
            debug_assert!(coloring_avoids(&coloring, fam));
            return Ok(Certificate {
                outcome: Outcome::Counterexample,
                r,
                edges: fam.len(),
                nodes_explored: seed.pre_attempts + earlier_branch_attempts + attempts,
                coloring: Some(coloring),
            });
        }
        earlier_branch_attempts += attempts;
    }
    Ok(Certificate {
        outcome: Outcome::PartitionRegular,
        r,
        edges: fam.len(),
        nodes_explored: prefix_attempts + earlier_branch_attempts,
        coloring: None,
    })
}

/// Scope statement attached to pool-relative results.
#[derive(Clone, Debug, Serialize)]
pub struct SearchScope {
    pub gen_pool_size: usize,
    pub base_pool_size: usize,
    pub note: String,
}

impl SearchScope {
    fn pools(gen_pool: &[GroupElement], base_pool: &[GroupElement]) -> Self {
        SearchScope {
            gen_pool_size: gen_pool.len(),
            base_pool_size: base_pool.len(),
            note: "progression existence and absence are relative to the supplied finite \
                   generator and base pools"
                .to_string(),
        }
    }
}

/// Verdict on both halves of the restricted property for one ground set:
/// no non-degenerate progression of length `k+1` (pool-relative), and
/// partition regularity of the length-`k` pattern family at `r` colors.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictedReport {
    pub absence_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub absence_witness: Option<Nilprogression>,
    pub patterns: usize,
    pub certificate: Certificate,
    pub holds: bool,
    pub scope: SearchScope,
}

/// Runs the absence check for length `k+1` and the regularity check for the
/// length-`k` family at `r` colors.
pub fn certify_restricted(
    v: &GroundSet<GroupElement>,
    k: u32,
    d: u32,
    r: usize,
    gen_pool: &[GroupElement],
    base_pool: &[GroupElement],
    conv: WordConvention,
) -> Result<RestrictedReport> {
    let spec_long = ProgressionSpec::new(k, k + 1, d)?;
    let spec_short = ProgressionSpec::new(k, k, d)?;
    let absence = verify_absence(v.items(), spec_long, gen_pool, base_pool, conv)?;
    let fam = nilprogression_patterns(v, spec_short, gen_pool, base_pool, conv)?;
    let certificate = certify(v, &fam, r)?;
    let holds = absence.holds && certificate.outcome == Outcome::PartitionRegular;
    Ok(RestrictedReport {
        absence_holds: absence.holds,
        absence_witness: absence.witness,
        patterns: fam.len(),
        certificate,
        holds,
        scope: SearchScope::pools(gen_pool, base_pool),
    })
}

/// What to search over when hunting for a restricted-witness ground set.
#[derive(Clone, Debug)]
pub enum WitnessBaseline {
    /// Subsets of the integer interval `1..=range`.
    ArithmeticProgression { k: usize, range: i64 },
    /// Unions of up to `union_limit` pool-generated progressions.
    Nilprogression {
        k: u32,
        d: u32,
        union_limit: usize,
        gen_pool: Vec<GroupElement>,
        base_pool: Vec<GroupElement>,
        conv: WordConvention,
    },
}

#[derive(Clone, Debug)]
pub struct WitnessSearchParams {
    pub baseline: WitnessBaseline,
    pub r: usize,
    /// Largest candidate ground-set size considered.
    pub size_limit: usize,
    /// When false the length-(k+1) absence half is not required ("sanity
    /// mode": only partition regularity must hold).
    pub check_absence: bool,
    /// Emit a diagnostic progress line every this many candidates; 0 is
    /// silent.
    pub progress_every: u64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FoundWitness {
    Integers {
        items: Vec<i64>,
        certificate: Certificate,
    },
    Elements {
        items: Vec<GroupElement>,
        report: RestrictedReport,
    },
}

/// Search outcome; `found: None` with `exhausted: true` is the honest
/// negative result within the stated bounds.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessSearchReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found: Option<FoundWitness>,
    pub candidates_checked: u64,
    pub exhausted: bool,
    pub r: usize,
    pub size_limit: usize,
    pub check_absence: bool,
}

/// Enumerates candidate ground sets in a deterministic order (size, then
/// lexicographic) and returns the first whose restricted report fully holds.
pub fn search_restricted_witness(params: &WitnessSearchParams) -> Result<WitnessSearchReport> {
    let mut candidates_checked = 0u64;
    let report = |found: Option<FoundWitness>, candidates_checked: u64| WitnessSearchReport {
        exhausted: found.is_none(),
        found,
        candidates_checked,
        r: params.r,
        size_limit: params.size_limit,
        check_absence: params.check_absence,
    };

    match &params.baseline {
        WitnessBaseline::ArithmeticProgression { k, range } => {
            let universe: Vec<i64> = (1..=*range).collect();
            for size in 0..=params.size_limit.min(universe.len()) {
                for combo in universe.iter().copied().combinations(size) {
                    candidates_checked += 1;
                    if params.progress_every > 0
                        && candidates_checked.is_multiple_of(params.progress_every)
                    {
                        eprintln!("searched {candidates_checked} candidate sets");
                    }
                    let v = GroundSet::new(combo);
                    if params.check_absence && !ap_patterns(&v, k + 1).is_empty() {
                        continue;
                    }
                    let fam = ap_patterns(&v, *k);
                    if fam.is_empty() {
                        continue;
                    }
                    let certificate = certify(&v, &fam, params.r)?;
                    if certificate.outcome == Outcome::PartitionRegular {
                        return Ok(report(
                            Some(FoundWitness::Integers {
                                items: v.items().to_vec(),
                                certificate,
                            }),
                            candidates_checked,
                        ));
                    }
                }
            }
            Ok(report(None, candidates_checked))
        }
        WitnessBaseline::Nilprogression {
            k,
            d,
            union_limit,
            gen_pool,
            base_pool,
            conv,
        } => {
            let spec_short = ProgressionSpec::new(*k, *k, *d)?;
            // materialize the distinct buildable progressions once
            let mut blocks: Vec<Nilprogression> = Vec::new();
            let mut seen = HashSet::new();
            for base in base_pool {
                for assignment in
                    std::iter::repeat_n(gen_pool.iter(), *d as usize).multi_cartesian_product()
                {
                    let gens: Vec<GroupElement> = assignment.into_iter().cloned().collect();
                    let p = build(spec_short, &gens, base, *conv)?;
                    if p.is_nondegenerate() && seen.insert(p.elements.clone()) {
                        blocks.push(p);
                    }
                }
            }
            for take in 1..=*union_limit {
                for combo in (0..blocks.len()).combinations(take) {
                    candidates_checked += 1;
                    if params.progress_every > 0
                        && candidates_checked.is_multiple_of(params.progress_every)
                    {
                        eprintln!("searched {candidates_checked} candidate unions");
                    }
                    let union: Vec<GroupElement> = combo
                        .iter()
                        .flat_map(|&i| blocks[i].elements.iter().cloned())
                        .collect();
                    let v = GroundSet::new(union);
                    if v.len() > params.size_limit {
                        continue;
                    }
                    let rep = certify_restricted(&v, *k, *d, params.r, gen_pool, base_pool, *conv)?;
                    let ok = if params.check_absence {
                        rep.holds
                    } else {
                        rep.certificate.outcome == Outcome::PartitionRegular
                    };
                    if ok {
                        return Ok(report(
                            Some(FoundWitness::Elements {
                                items: v.items().to_vec(),
                                report: rep,
                            }),
                            candidates_checked,
                        ));
                    }
                }
            }
            Ok(report(None, candidates_checked))
        }
    }
}
