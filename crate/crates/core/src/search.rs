//! Enumeration of every map `d` with `d(ab) = d(b) s(a) + s(b) d(a)`.
//!
//! Backtracking over image tables. Variables are elements in index order,
//! candidate values ascend, and after every assignment the identity is
//! propagated to a fixpoint: once `d(a)` and `d(b)` are known, `d(ab)` is
//! forced, and a clash with an existing value prunes the branch. With this
//! order the emitted maps come out sorted by image table.
//!
//! The first branching level is split across the current rayon pool in
//! chunks of one task per thread. Each task records the node count at which
//! it emitted each map, so the merged result, including where a node budget
//! or a limit cuts the search off, is exactly what a single-threaded walk
//! produces.

use rayon::prelude::*;
use thiserror::Error;

use crate::involution::AntiAutomorphism;
use crate::maps::{first_violation_seq, IdentityKind, RingMap};
use crate::ring::{Elem, FiniteRing};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Largest ring `naive_enumerate` accepts by default (8^8 candidate maps).
pub const NAIVE_SIZE_CAP: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("anti-automorphism has {found} entries, ring has {expected} elements")]
    SigmaMismatch { expected: usize, found: usize },
    #[error("ring of size {size} is above the brute-force cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig<'a> {
    pub sigma: &'a AntiAutomorphism,
    /// Stop after this many maps; 0 means no limit.
    pub limit: usize,
    pub node_budget: u64,
    /// Fixed variable and value order. The engine has no other mode, so
    /// every run is reproducible; the flag is kept for callers that state it.
    pub deterministic_order: bool,
}

impl<'a> SearchConfig<'a> {
    pub fn new(sigma: &'a AntiAutomorphism) -> Self {
        SearchConfig {
            sigma,
            limit: 0,
            node_budget: DEFAULT_NODE_BUDGET,
            deterministic_order: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub maps: Vec<RingMap>,
    /// True iff the whole search space was covered.
    pub exhausted: bool,
    pub nodes: u64,
}

const UNSET: u32 = u32::MAX;

/// Partial image table with an assignment trail for undo.
#[derive(Clone)]
struct Propagator<'a> {
    ring: &'a FiniteRing,
    sigma: &'a [Elem],
    value: Vec<u32>,
    trail: Vec<u32>,
    /// `trail[..head]` has been propagated against everything before it.
    head: usize,
}

impl<'a> Propagator<'a> {
    fn new(ring: &'a FiniteRing, sigma: &'a AntiAutomorphism) -> Self {
        Propagator {
            ring,
            sigma: sigma.map(),
            value: vec![UNSET; ring.size()],
            trail: Vec::with_capacity(ring.size()),
            head: 0,
        }
    }

    #[inline]
    fn assign(&mut self, x: usize, v: u32) {
        self.value[x] = v;
        self.trail.push(x as u32);
    }

    fn undo(&mut self, mark: usize) {
        for &x in &self.trail[mark..] {
            self.value[x as usize] = UNSET;
        }
        self.trail.truncate(mark);
        self.head = self.head.min(mark);
    }

    /// Enforces the identity on `(a, b)`, both assigned.
    #[inline]
    fn pair(&mut self, a: u32, b: u32) -> bool {
        let r = self.ring;
        let (ea, eb) = (Elem::new(a as usize), Elem::new(b as usize));
        let (da, db) = (
            Elem::new(self.value[a as usize] as usize),
            Elem::new(self.value[b as usize] as usize),
        );
        let p = r.mul(ea, eb).index();
        let forced = r
            .add(
                r.mul(db, self.sigma[a as usize]),
                r.mul(self.sigma[b as usize], da),
            )
            .index() as u32;
        match self.value[p] {
            UNSET => {
                self.assign(p, forced);
                true
            }
            v => v == forced,
        }
    }

    /// Runs to fixpoint; false on conflict.
    fn propagate(&mut self) -> bool {
        while self.head < self.trail.len() {
            let k = self.head;
            let x = self.trail[k];
            for i in 0..=k {
                let y = self.trail[i];
                if !self.pair(x, y) || (x != y && !self.pair(y, x)) {
                    return false;
                }
            }
            self.head += 1;
        }
        true
    }

    fn next_unassigned(&self) -> Option<usize> {
        self.value.iter().position(|&v| v == UNSET)
    }

    fn image(&self) -> Vec<Elem> {
        self.value.iter().map(|&v| Elem::new(v as usize)).collect()
    }
}

enum Flow {
    Continue,
    Stop,
}

/// One depth-first walk with its own node counter.
struct Walk<'k> {
    nodes: u64,
    budget: u64,
    limit: usize,
    truncated: bool,
    found: Vec<(u64, Vec<Elem>)>,
    keep: &'k (dyn Fn(&[Elem]) -> bool + Sync),
}

impl Walk<'_> {
    fn enter(&mut self) -> bool {
        if self.nodes >= self.budget {
            self.truncated = true;
            false
        } else {
            self.nodes += 1;
            true
        }
    }

    fn expand(&mut self, prop: &mut Propagator<'_>) -> Flow {
        let Some(var) = prop.next_unassigned() else {
            let image = prop.image();
            if (self.keep)(&image) {
                self.found.push((self.nodes, image));
                if self.limit > 0 && self.found.len() >= self.limit {
                    return Flow::Stop;
                }
            }
            return Flow::Continue;
        };
        for cand in 0..prop.ring.size() as u32 {
            if !self.enter() {
                return Flow::Stop;
            }
            let mark = prop.trail.len();
            prop.assign(var, cand);
            if prop.propagate() {
                if let Flow::Stop = self.expand(prop) {
                    prop.undo(mark);
                    return Flow::Stop;
                }
            }
            prop.undo(mark);
        }
        Flow::Continue
    }
}

struct Merged {
    found: Vec<Vec<Elem>>,
    exhausted: bool,
    nodes: u64,
}

fn run(
    ring: &FiniteRing,
    sigma: &AntiAutomorphism,
    budget: u64,
    limit: usize,
    keep: &(dyn Fn(&[Elem]) -> bool + Sync),
) -> Result<Merged, SearchError> {
    if sigma.size() != ring.size() {
        return Err(SearchError::SigmaMismatch {
            expected: ring.size(),
            found: sigma.size(),
        });
    }
    let cut = |found, nodes| Merged {
        found,
        exhausted: false,
        nodes,
    };
    if budget == 0 {
        return Ok(cut(Vec::new(), 0));
    }
    let mut nodes = 1u64;
    let mut root = Propagator::new(ring, sigma);
    // a = b = 0 forces d(0) = 0
    root.assign(ring.zero().index(), ring.zero().index() as u32);
    if !root.propagate() {
        return Ok(Merged {
            found: Vec::new(),
            exhausted: true,
            nodes,
        });
    }
    let Some(var) = root.next_unassigned() else {
        let image = root.image();
        let found = if keep(&image) {
            vec![image]
        } else {
            Vec::new()
        };
        let exhausted = !(limit > 0 && found.len() >= limit);
        return Ok(Merged {
            found,
            exhausted,
            nodes,
        });
    };

    let mut found = Vec::new();
    let candidates: Vec<u32> = (0..ring.size() as u32).collect();
    let width = rayon::current_num_threads().max(1);
    for chunk in candidates.chunks(width) {
        let chunk_budget = budget - nodes;
        let walks: Vec<Walk<'_>> = chunk
            .par_iter()
            .map(|&cand| {
                let mut prop = root.clone();
                let mut walk = Walk {
                    nodes: 0,
                    budget: chunk_budget,
                    limit,
                    truncated: false,
                    found: Vec::new(),
                    keep,
                };
                if walk.enter() {
                    prop.assign(var, cand);
                    if prop.propagate() {
                        walk.expand(&mut prop);
                    }
                }
                walk
            })
            .collect();
        // replay in sequential order against the global budget and limit
        for walk in walks {
            let remaining = budget - nodes;
            if remaining == 0 {
                return Ok(cut(found, nodes));
            }
            for (stamp, image) in walk.found {
                if stamp > remaining {
                    break;
                }
                found.push(image);
                if limit > 0 && found.len() >= limit {
                    return Ok(cut(found, nodes + stamp));
                }
            }
            if walk.truncated || walk.nodes > remaining {
                return Ok(cut(found, budget));
            }
            nodes += walk.nodes;
        }
    }
    Ok(Merged {
        found,
        exhausted: true,
        nodes,
    })
}

/// Enumerates every map satisfying the twisted reverse identity for
/// `config.sigma`, in ascending order of image tables.
pub fn enumerate_reverse_maps(
    ring: &FiniteRing,
    config: &SearchConfig<'_>,
) -> Result<SearchOutcome, SearchError> {
    let merged = run(
        ring,
        config.sigma,
        config.node_budget,
        config.limit,
        &|_| true,
    )?;
    Ok(SearchOutcome {
        maps: merged.found.into_iter().map(RingMap::from_elems).collect(),
        exhausted: merged.exhausted,
        nodes: merged.nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonAdditiveSearch {
    pub witness: Option<RingMap>,
    pub exhausted: bool,
    pub nodes: u64,
}

/// Looks for a map that satisfies the identity but is not additive. A
/// `None` witness proves absence only when `exhausted` is set.
pub fn find_nonadditive_witness(
    ring: &FiniteRing,
    sigma: &AntiAutomorphism,
    node_budget: u64,
) -> Result<NonAdditiveSearch, SearchError> {
    let keep = |image: &[Elem]| first_violation_seq(ring, image, &IdentityKind::Additive).is_some();
    let merged = run(ring, sigma, node_budget, 1, &keep)?;
    let witness = merged.found.into_iter().next().map(RingMap::from_elems);
    Ok(NonAdditiveSearch {
        exhausted: merged.exhausted,
        witness,
        nodes: merged.nodes,
    })
}

/// Brute force over all `size^size` maps, filtered by the identity check.
/// Test oracle for [`enumerate_reverse_maps`].
pub fn naive_enumerate(
    ring: &FiniteRing,
    sigma: &AntiAutomorphism,
    size_cap: usize,
) -> Result<Vec<RingMap>, SearchError> {
    let n = ring.size();
    if n > size_cap {
        return Err(SearchError::CapExceeded {
            size: n,
            cap: size_cap,
        });
    }
    if sigma.size() != n {
        return Err(SearchError::SigmaMismatch {
            expected: n,
            found: sigma.size(),
        });
    }
    let kind = IdentityKind::SigmaReverse(sigma);
    let mut image = vec![Elem::new(0); n];
    let mut out = Vec::new();
    loop {
        if first_violation_seq(ring, &image, &kind).is_none() {
            out.push(RingMap::from_elems(image.clone()));
        }
        // odometer, last position fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            let next = image[pos].index() + 1;
            if next < n {
                image[pos] = Elem::new(next);
                break;
            }
            image[pos] = Elem::new(0);
        }
    }
}
