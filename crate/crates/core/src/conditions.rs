//! Annihilator conditions M1-M3 and primality, decided by exhaustive scan.
//!
//! Each condition is universally quantified over the ring. Scans run in
//! parallel but always report the lowest-index witness.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::peirce::FrameError;
use crate::ring::{Elem, FiniteRing};
use crate::verdict::Verdict;

fn distinct(mut v: Vec<Elem>) -> Vec<Elem> {
    v.sort_unstable();
    v.dedup();
    v
}

fn require_idempotent(ring: &FiniteRing, e: Elem) -> Result<(), FrameError> {
    if ring.mul(e, e) == e {
        Ok(())
    } else {
        Err(FrameError::NotIdempotent(e))
    }
}

/// Every nonzero `x` with `xR = 0`.
pub fn m1_witnesses(ring: &FiniteRing) -> Vec<Elem> {
    let all: Vec<Elem> = ring.elements().collect();
    all.par_iter()
        .copied()
        .filter(|&x| !ring.is_zero(x) && ring.elements().all(|r| ring.is_zero(ring.mul(x, r))))
        .collect()
}

/// M1: `xR = 0` implies `x = 0`.
pub fn check_m1(ring: &FiniteRing) -> Verdict<Elem> {
    Verdict::from_witness(m1_witnesses(ring).first().copied())
}

/// Every nonzero `x` with `eRx = 0`.
pub fn m2_witnesses(ring: &FiniteRing, e: Elem) -> Result<Vec<Elem>, FrameError> {
    require_idempotent(ring, e)?;
    let e_r = distinct(ring.elements().map(|r| ring.mul(e, r)).collect());
    let all: Vec<Elem> = ring.elements().collect();
    Ok(all
        .par_iter()
        .copied()
        .filter(|&x| !ring.is_zero(x) && e_r.iter().all(|&y| ring.is_zero(ring.mul(y, x))))
        .collect())
}

/// M2: `eRx = 0` implies `x = 0`.
pub fn check_m2(ring: &FiniteRing, e: Elem) -> Result<Verdict<Elem>, FrameError> {
    Ok(Verdict::from_witness(
        m2_witnesses(ring, e)?.first().copied(),
    ))
}

/// Every nonzero `t = exe` with `t r - t r e = 0` for all `r`, i.e. with
/// `exeR(1 - e) = 0`.
pub fn m3_witnesses(ring: &FiniteRing, e: Elem) -> Result<Vec<Elem>, FrameError> {
    require_idempotent(ring, e)?;
    let corner = distinct(
        ring.elements()
            .map(|x| ring.mul(ring.mul(e, x), e))
            .filter(|&t| !ring.is_zero(t))
            .collect(),
    );
    Ok(corner
        .par_iter()
        .copied()
        .filter(|&t| {
            ring.elements().all(|r| {
                let tr = ring.mul(t, r);
                ring.is_zero(ring.sub(tr, ring.mul(tr, e)))
            })
        })
        .collect())
}

/// M3: `exeR(1 - e) = 0` implies `exe = 0`.
pub fn check_m3(ring: &FiniteRing, e: Elem) -> Result<Verdict<Elem>, FrameError> {
    Ok(Verdict::from_witness(
        m3_witnesses(ring, e)?.first().copied(),
    ))
}

/// Primality: `aRb = 0` implies `a = 0` or `b = 0`. The witness is the
/// lexicographically first pair of nonzero elements with `aRb = 0`.
pub fn is_prime(ring: &FiniteRing) -> Verdict<(Elem, Elem)> {
    let nonzero: Vec<Elem> = ring.elements().filter(|&x| !ring.is_zero(x)).collect();
    let witness = nonzero.par_iter().find_map_first(|&a| {
        let a_r = distinct(ring.elements().map(|r| ring.mul(a, r)).collect());
        nonzero
            .iter()
            .find(|&&b| a_r.iter().all(|&y| ring.is_zero(ring.mul(y, b))))
            .map(|&b| (a, b))
    });
    Verdict::from_witness(witness)
}

/// One annihilator condition, with its first witness and the full witness set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionEntry {
    pub pass: bool,
    pub witness: Option<Elem>,
    pub witness_label: Option<String>,
    pub witnesses: Vec<Elem>,
}

impl ConditionEntry {
    fn new(ring: &FiniteRing, witnesses: Vec<Elem>) -> Self {
        let witness = witnesses.first().copied();
        ConditionEntry {
            pass: witness.is_none(),
            witness,
            witness_label: witness.map(|w| ring.label(w)),
            witnesses,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeEntry {
    pub pass: bool,
    pub witness: Option<(Elem, Elem)>,
    pub witness_label: Option<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    #[serde(rename = "M1")]
    pub m1: ConditionEntry,
    #[serde(rename = "M2")]
    pub m2: ConditionEntry,
    #[serde(rename = "M3")]
    pub m3: ConditionEntry,
    pub prime: PrimeEntry,
}

impl ConditionReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.m1.pass && self.m2.pass && self.m3.pass
    }
}

pub fn condition_report(ring: &FiniteRing, e: Elem) -> Result<ConditionReport, FrameError> {
    let prime = is_prime(ring);
    Ok(ConditionReport {
        m1: ConditionEntry::new(ring, m1_witnesses(ring)),
        m2: ConditionEntry::new(ring, m2_witnesses(ring, e)?),
        m3: ConditionEntry::new(ring, m3_witnesses(ring, e)?),
        prime: PrimeEntry {
            pass: prime.passed(),
            witness: prime.witness().copied(),
            witness_label: prime
                .witness()
                .map(|&(a, b)| (ring.label(a), ring.label(b))),
        },
    })
}
