//! Instance-level replay of the additivity argument.
//!
//! For a ring with involution and a nontrivial symmetric idempotent `e`,
//! every *-reverse derivable map is reduced to one that kills `e` and then
//! checked component by component: the image of zero, how components are
//! mapped, additivity across and within components, additivity on `Re`,
//! and finally additivity everywhere.
//!
//! Lemma checks always run; only the theorem verdict depends on M1-M3.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditions::{condition_report, ConditionReport};
use crate::involution::AntiAutomorphism;
use crate::maps::{check_identity, reduce_delta, IdentityKind, MapError, RingMap};
use crate::peirce::{Component, FrameError, PeirceFrame};
use crate::ring::{Elem, FiniteRing};
use crate::search::{enumerate_reverse_maps, SearchConfig, SearchError, DEFAULT_NODE_BUDGET};
use crate::verdict::Verdict;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("the anti-automorphism is not an involution")]
    NotInvolution,
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("supplied map {index}: {source}")]
    Map { index: usize, source: MapError },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LemmaWitness {
    /// The reduced map does not fix zero.
    NonzeroAtZero { image: Elem },
    /// `x` lies in `from` but its image is outside the swapped component.
    OutsideComponent {
        x: Elem,
        from: Component,
        image: Elem,
    },
    /// `d(x + y) != d(x) + d(y)` for a pair drawn from the named case.
    NonAdditive { case: String, x: Elem, y: Elem },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapWitness {
    pub s: Elem,
    pub component: Component,
}

fn additive_on(
    ring: &FiniteRing,
    delta: &RingMap,
    case: &str,
    xs: &[Elem],
    ys: &[Elem],
) -> Verdict<LemmaWitness> {
    for &x in xs {
        for &y in ys {
            if delta.apply(ring.add(x, y)) != ring.add(delta.apply(x), delta.apply(y)) {
                return Verdict::Fail(LemmaWitness::NonAdditive {
                    case: case.to_string(),
                    x,
                    y,
                });
            }
        }
    }
    Verdict::Pass
}

fn first_failure(
    verdicts: impl IntoIterator<Item = Verdict<LemmaWitness>>,
) -> Verdict<LemmaWitness> {
    verdicts
        .into_iter()
        .find(|v| !v.passed())
        .unwrap_or(Verdict::Pass)
}

/// The reduced map sends zero to zero.
pub fn verify_lemma1(ring: &FiniteRing, delta: &RingMap) -> Verdict<LemmaWitness> {
    let image = delta.apply(ring.zero());
    if ring.is_zero(image) {
        Verdict::Pass
    } else {
        Verdict::Fail(LemmaWitness::NonzeroAtZero { image })
    }
}

/// The reduced map sends `Rij` into `Rji`.
pub fn verify_lemma2(frame: &PeirceFrame<'_>, delta: &RingMap) -> Verdict<LemmaWitness> {
    for from in Component::ALL {
        for x in frame.component_elements(from) {
            let image = delta.apply(x);
            if !frame.component_of(image).contains(from.swapped()) {
                return Verdict::Fail(LemmaWitness::OutsideComponent { x, from, image });
            }
        }
    }
    Verdict::Pass
}

/// Component pairs `(Rii, Rjk)` covered by the cross-component additivity step.
pub const LEMMA3_CASES: [(Component, Component); 4] = [
    (Component::R11, Component::R21),
    (Component::R11, Component::R12),
    (Component::R22, Component::R21),
    (Component::R22, Component::R12),
];

fn case_name(a: Component, b: Component) -> String {
    let ((i, j), (k, l)) = (a.indices(), b.indices());
    format!("{i}{j}+{k}{l}")
}

/// Additivity on `x_ii + x_jk` for each pair in [`LEMMA3_CASES`].
pub fn verify_lemma3(frame: &PeirceFrame<'_>, delta: &RingMap) -> Verdict<LemmaWitness> {
    let ring = frame.ring();
    first_failure(LEMMA3_CASES.iter().map(|&(a, b)| {
        additive_on(
            ring,
            delta,
            &case_name(a, b),
            &frame.component_elements(a),
            &frame.component_elements(b),
        )
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffDiagonalLemmas {
    /// Additivity on `R12` and on `R21`.
    pub lemma4: Verdict<LemmaWitness>,
    /// Additivity on `R11`.
    pub lemma5: Verdict<LemmaWitness>,
    /// Additivity on `Re = R11 + R21`.
    pub lemma6: Verdict<LemmaWitness>,
}

pub fn verify_lemma4_5_6(frame: &PeirceFrame<'_>, delta: &RingMap) -> OffDiagonalLemmas {
    let ring = frame.ring();
    let within = |c: Component| {
        let xs = frame.component_elements(c);
        let (i, j) = c.indices();
        additive_on(ring, delta, &format!("{i}{j}"), &xs, &xs)
    };
    let re = frame.right_multiples();
    OffDiagonalLemmas {
        lemma4: first_failure([within(Component::R12), within(Component::R21)]),
        lemma5: within(Component::R11),
        lemma6: additive_on(ring, delta, "Re", &re, &re),
    }
}

/// Conjugation swaps the off-diagonal parts: `pi_ij(s)* = pi_ji(s*)` for
/// every `s` and every component.
pub fn verify_proposition1(frame: &PeirceFrame<'_>) -> Result<Verdict<SwapWitness>, VerifyError> {
    let star = frame.involution().ok_or(VerifyError::NotInvolution)?;
    if !star.is_involution() {
        return Err(VerifyError::NotInvolution);
    }
    for s in frame.ring().elements() {
        let split = frame.project(s);
        let conj = frame.project(star.apply(s));
        for c in Component::ALL {
            if star.apply(split.get(c)) != conj.get(c.swapped()) {
                return Ok(Verdict::Fail(SwapWitness { s, component: c }));
            }
        }
    }
    Ok(Verdict::Pass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremOptions {
    pub limit: usize,
    pub node_budget: u64,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        TheoremOptions {
            limit: 0,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameInfo {
    pub e: Elem,
    pub e_label: String,
    pub involution_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub count: usize,
    pub exhausted: bool,
    pub nodes: u64,
    pub supplied: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFailure {
    pub map: usize,
    pub witness: LemmaWitness,
}

/// Aggregate of one check over every map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: bool,
    pub failures: usize,
    pub first_failure: Option<MapFailure>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            pass: true,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, map: usize, verdict: &Verdict<LemmaWitness>) {
        if let Verdict::Fail(w) = verdict {
            self.pass = false;
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(MapFailure {
                    map,
                    witness: w.clone(),
                });
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaResults {
    pub lemma1: Tally,
    pub lemma2: Tally,
    pub lemma3: Tally,
    pub lemma4: Tally,
    pub lemma5: Tally,
    pub lemma6: Tally,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremResult {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ring_id: String,
    pub frame: FrameInfo,
    pub conditions: ConditionReport,
    pub proposition1: Verdict<SwapWitness>,
    pub search: SearchSummary,
    pub maps_checked: usize,
    pub lemma_results: LemmaResults,
    pub additivity: Tally,
    pub hypotheses_hold: bool,
    /// Pass iff every checked map is additive.
    pub theorem_result: TheoremResult,
    /// M1-M3 hold and some checked map is not additive.
    pub refutation: bool,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// 1 on refutation, 0 otherwise (a failed theorem with failing
    /// hypotheses is informational).
    pub fn exit_code(&self) -> i32 {
        if self.refutation {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

struct MapFindings {
    lemmas: [Verdict<LemmaWitness>; 6],
    additive: Verdict<LemmaWitness>,
    reduced_additive: bool,
}

fn examine(frame: &PeirceFrame<'_>, delta: &RingMap) -> Result<MapFindings, MapError> {
    let ring = frame.ring();
    let reduced = reduce_delta(frame, delta)?.reduced;
    let off = verify_lemma4_5_6(frame, &reduced);
    let additive = match check_identity(ring, delta, IdentityKind::Additive)? {
        Verdict::Pass => Verdict::Pass,
        Verdict::Fail((x, y)) => Verdict::Fail(LemmaWitness::NonAdditive {
            case: "all".to_string(),
            x,
            y,
        }),
    };
    Ok(MapFindings {
        lemmas: [
            verify_lemma1(ring, &reduced),
            verify_lemma2(frame, &reduced),
            verify_lemma3(frame, &reduced),
            off.lemma4,
            off.lemma5,
            off.lemma6,
        ],
        additive,
        reduced_additive: check_identity(ring, &reduced, IdentityKind::Additive)?.passed(),
    })
}

/// Runs the whole pipeline on one instance: conditions, the conjugation
/// swap, enumeration of all *-reverse derivable maps (plus any supplied
/// ones), reduction, every lemma, and full additivity.
pub fn verify_theorem(
    ring: &FiniteRing,
    involution: &AntiAutomorphism,
    e: Elem,
    options: &TheoremOptions,
    supplied: &[RingMap],
) -> Result<VerificationReport, VerifyError> {
    if !involution.is_involution() {
        return Err(VerifyError::NotInvolution);
    }
    let frame = PeirceFrame::new(ring, e, Some(involution))?;
    let conditions = condition_report(ring, e)?;
    let proposition1 = verify_proposition1(&frame)?;

    let mut config = SearchConfig::new(involution);
    config.limit = options.limit;
    config.node_budget = options.node_budget;
    let outcome = enumerate_reverse_maps(ring, &config)?;

    let mut maps = outcome.maps.clone();
    maps.extend(supplied.iter().cloned());
    let findings: Vec<MapFindings> = maps
        .par_iter()
        .enumerate()
        .map(|(index, m)| {
            examine(&frame, m).map_err(|source| VerifyError::Map {
                index: index.saturating_sub(outcome.maps.len()),
                source,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut tallies: [Tally; 6] = std::array::from_fn(|_| Tally::new());
    let mut additivity = Tally::new();
    let mut notes = Vec::new();
    for (index, f) in findings.iter().enumerate() {
        for (tally, verdict) in tallies.iter_mut().zip(&f.lemmas) {
            tally.record(index, verdict);
        }
        additivity.record(index, &f.additive);
        if f.reduced_additive != f.additive.passed() {
            notes.push(format!("map {index}: reduction changed additivity"));
        }
    }
    let [lemma1, lemma2, lemma3, lemma4, lemma5, lemma6] = tallies;

    let hypotheses_hold = conditions.hypotheses_hold();
    let all_additive = additivity.pass;
    let refutation = hypotheses_hold && !all_additive;

    if conditions.prime.pass {
        notes.push("ring is prime".to_string());
    }
    if !outcome.exhausted {
        notes.push(
            "search stopped before covering the space; only emitted maps were checked".to_string(),
        );
    }
    match (hypotheses_hold, all_additive) {
        (true, true) => notes.push("M1-M3 hold and every checked map is additive".to_string()),
        (false, true) => notes.push(
            "M1-M3 do not all hold, yet every checked map is additive: \
             the conditions are sufficient but not necessary here"
                .to_string(),
        ),
        (false, false) => notes.push(
            "M1-M3 do not all hold and a non-additive map exists; informational only".to_string(),
        ),
        (true, false) => notes.push(format!(
            "REFUTATION: M1-M3 hold but map {} is not additive",
            additivity.first_failure.as_ref().map_or(0, |f| f.map)
        )),
    }
    if !hypotheses_hold {
        notes.push("lemma results are informational because M1-M3 do not all hold".to_string());
    }

    Ok(VerificationReport {
        ring_id: ring.content_id(),
        frame: FrameInfo {
            e,
            e_label: ring.label(e),
            involution_id: involution.content_id(),
        },
        conditions,
        proposition1,
        search: SearchSummary {
            count: outcome.maps.len(),
            exhausted: outcome.exhausted,
            nodes: outcome.nodes,
            supplied: supplied.len(),
        },
        maps_checked: maps.len(),
        lemma_results: LemmaResults {
            lemma1,
            lemma2,
            lemma3,
            lemma4,
            lemma5,
            lemma6,
        },
        additivity,
        hypotheses_hold,
        theorem_result: if all_additive {
            TheoremResult::Pass
        } else {
            TheoremResult::Fail
        },
        refutation,
        notes,
    })
}
