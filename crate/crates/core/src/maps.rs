//! Arbitrary self-maps of a ring and the functional identities they may satisfy.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructors::{self, m2_entries, m2_index, RingFamily};
use crate::involution::AntiAutomorphism;
use crate::peirce::{Component, PeirceFrame};
use crate::ring::{first_pair, Elem, FiniteRing};
use crate::verdict::Verdict;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("malformed map document: {0}")]
    Json(String),
    #[error("map has {found} entries, ring has {expected} elements")]
    SizeMismatch { expected: usize, found: usize },
    #[error("map entry {value} at position {position} is outside the carrier")]
    OutOfRange { position: usize, value: u64 },
    #[error("star_reverse needs an involution")]
    NotInvolution,
    #[error("frame has no involution")]
    MissingInvolution,
    #[error("map is not *-reverse derivable: identity fails at ({0}, {1})")]
    NotStarReverse(Elem, Elem),
    #[error("reduced map sends the idempotent to {0}, not zero")]
    ReductionInvariant(Elem),
    #[error("unknown builtin map {0:?}")]
    UnknownBuiltin(String),
    #[error("builtin map {0} does not apply to this ring")]
    BuiltinMismatch(&'static str),
}

/// JSON shape: `{"image": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub image: Vec<u64>,
}

/// A total map from the carrier to itself, stored as its image table.
/// No additivity or other structure is assumed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingMap {
    image: Vec<Elem>,
}

impl RingMap {
    pub fn new(ring: &FiniteRing, image: &[u64]) -> Result<Self, MapError> {
        if image.len() != ring.size() {
            return Err(MapError::SizeMismatch {
                expected: ring.size(),
                found: image.len(),
            });
        }
        let image = image
            .iter()
            .enumerate()
            .map(|(position, &value)| {
                if value < ring.size() as u64 {
                    Ok(Elem::new(value as usize))
                } else {
                    Err(MapError::OutOfRange { position, value })
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(RingMap { image })
    }

    pub(crate) fn from_elems(image: Vec<Elem>) -> Self {
        RingMap { image }
    }

    pub fn from_fn(ring: &FiniteRing, f: impl Fn(Elem) -> Elem) -> Self {
        RingMap {
            image: ring.elements().map(f).collect(),
        }
    }

    pub fn zero(ring: &FiniteRing) -> Self {
        Self::from_fn(ring, |_| ring.zero())
    }

    pub fn from_json(ring: &FiniteRing, text: &str) -> Result<Self, MapError> {
        let doc: MapDocument =
            serde_json::from_str(text).map_err(|e| MapError::Json(e.to_string()))?;
        Self::new(ring, &doc.image)
    }

    pub fn to_document(&self) -> MapDocument {
        MapDocument {
            image: self.image.iter().map(|x| x.index() as u64).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("map documents always serialize")
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.image[x.index()]
    }

    pub fn image(&self) -> &[Elem] {
        &self.image
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    /// `x -> self(x) + other(x)`.
    pub fn pointwise_add(&self, ring: &FiniteRing, other: &RingMap) -> RingMap {
        RingMap::from_fn(ring, |x| ring.add(self.apply(x), other.apply(x)))
    }

    /// `x -> self(x) - other(x)`.
    pub fn pointwise_sub(&self, ring: &FiniteRing, other: &RingMap) -> RingMap {
        RingMap::from_fn(ring, |x| ring.sub(self.apply(x), other.apply(x)))
    }
}

/// The identity a map is checked against, for all pairs `(a, b)`.
#[derive(Copy, Clone, Debug)]
pub enum IdentityKind<'a> {
    /// `d(a + b) = d(a) + d(b)`
    Additive,
    /// `d(ab) = d(a) b + a d(b)`
    Derivation,
    /// `d(ab) = d(b) a + b d(a)`
    ReverseDerivation,
    /// `d(ab) = d(b) a* + b* d(a)` for an involution `*`.
    StarReverse(&'a AntiAutomorphism),
    /// `d(ab) = d(b) s(a) + s(b) d(a)` for any anti-automorphism `s`.
    SigmaReverse(&'a AntiAutomorphism),
}

impl IdentityKind<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            IdentityKind::Additive => "additive",
            IdentityKind::Derivation => "derivation",
            IdentityKind::ReverseDerivation => "reverse_derivation",
            IdentityKind::StarReverse(_) => "star_reverse",
            IdentityKind::SigmaReverse(_) => "sigma_reverse",
        }
    }
}

/// Identity names without their parameter, as accepted on the command line.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum IdentityTag {
    Additive,
    Derivation,
    ReverseDerivation,
    StarReverse,
    SigmaReverse,
}

impl IdentityTag {
    pub fn needs_sigma(self) -> bool {
        matches!(self, IdentityTag::StarReverse | IdentityTag::SigmaReverse)
    }

    /// Attaches the anti-automorphism where the identity needs one.
    pub fn with_sigma(self, sigma: Option<&AntiAutomorphism>) -> Option<IdentityKind<'_>> {
        Some(match self {
            IdentityTag::Additive => IdentityKind::Additive,
            IdentityTag::Derivation => IdentityKind::Derivation,
            IdentityTag::ReverseDerivation => IdentityKind::ReverseDerivation,
            IdentityTag::StarReverse => IdentityKind::StarReverse(sigma?),
            IdentityTag::SigmaReverse => IdentityKind::SigmaReverse(sigma?),
        })
    }
}

impl FromStr for IdentityTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "additive" => IdentityTag::Additive,
            "derivation" => IdentityTag::Derivation,
            "reverse_derivation" => IdentityTag::ReverseDerivation,
            "star_reverse" => IdentityTag::StarReverse,
            "sigma_reverse" => IdentityTag::SigmaReverse,
            other => return Err(format!("unknown identity {other:?}")),
        })
    }
}

impl fmt::Display for IdentityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdentityTag::Additive => "additive",
            IdentityTag::Derivation => "derivation",
            IdentityTag::ReverseDerivation => "reverse_derivation",
            IdentityTag::StarReverse => "star_reverse",
            IdentityTag::SigmaReverse => "sigma_reverse",
        })
    }
}

/// Whether `(a, b)` violates the identity.
#[inline]
pub(crate) fn violates(
    ring: &FiniteRing,
    d: &[Elem],
    kind: &IdentityKind<'_>,
    a: Elem,
    b: Elem,
) -> bool {
    let d = |x: Elem| d[x.index()];
    match kind {
        IdentityKind::Additive => d(ring.add(a, b)) != ring.add(d(a), d(b)),
        IdentityKind::Derivation => {
            d(ring.mul(a, b)) != ring.add(ring.mul(d(a), b), ring.mul(a, d(b)))
        }
        IdentityKind::ReverseDerivation => {
            d(ring.mul(a, b)) != ring.add(ring.mul(d(b), a), ring.mul(b, d(a)))
        }
        IdentityKind::StarReverse(s) | IdentityKind::SigmaReverse(s) => {
            d(ring.mul(a, b)) != ring.add(ring.mul(d(b), s.apply(a)), ring.mul(s.apply(b), d(a)))
        }
    }
}

fn check_kind(ring: &FiniteRing, kind: &IdentityKind<'_>) -> Result<(), MapError> {
    match kind {
        IdentityKind::StarReverse(s) if !s.is_involution() => Err(MapError::NotInvolution),
        IdentityKind::StarReverse(s) | IdentityKind::SigmaReverse(s) if s.size() != ring.size() => {
            Err(MapError::SizeMismatch {
                expected: ring.size(),
                found: s.size(),
            })
        }
        _ => Ok(()),
    }
}

/// Tests the identity on every pair and returns the first violating pair
/// in lexicographic index order.
pub fn check_identity(
    ring: &FiniteRing,
    map: &RingMap,
    kind: IdentityKind<'_>,
) -> Result<Verdict<(Elem, Elem)>, MapError> {
    if map.size() != ring.size() {
        return Err(MapError::SizeMismatch {
            expected: ring.size(),
            found: map.size(),
        });
    }
    check_kind(ring, &kind)?;
    let witness = first_pair(ring.size(), |a, b| {
        violates(ring, &map.image, &kind, Elem::new(a), Elem::new(b))
    });
    Ok(Verdict::from_witness(
        witness.map(|(a, b)| (Elem::new(a), Elem::new(b))),
    ))
}

/// Single-threaded variant for hot loops over many small maps.
pub(crate) fn first_violation_seq(
    ring: &FiniteRing,
    image: &[Elem],
    kind: &IdentityKind<'_>,
) -> Option<(Elem, Elem)> {
    for a in ring.elements() {
        for b in ring.elements() {
            if violates(ring, image, kind, a, b) {
                return Some((a, b));
            }
        }
    }
    None
}

/// `(a b; c d) -> (-b 2b; a-2c-d b)` on M2(Z_n), evaluated entrywise mod n.
pub fn example1_map(n: usize) -> Result<RingMap, MapError> {
    if n < 2 {
        return Err(MapError::BuiltinMismatch("example1"));
    }
    let size = n.pow(4);
    let image = (0..size)
        .map(|x| {
            let [a, b, c, d] = m2_entries(n, x);
            // every entry lifted by a multiple of n to stay nonnegative
            let entries = [n - b, 2 * b, a + 2 * (n - c) + (n - d), b];
            Elem::new(m2_index(n, entries))
        })
        .collect();
    Ok(RingMap { image })
}

/// `(a, b) -> (0, b)` on dual(Z_n).
pub fn example2_map_on(n: usize) -> Result<RingMap, MapError> {
    if n < 2 {
        return Err(MapError::BuiltinMismatch("example2"));
    }
    let image = (0..n * n)
        .map(|x| Elem::new(constructors::dual_index(n, 0, x % n)))
        .collect();
    Ok(RingMap { image })
}

/// `(a, b) -> (0, b)` on dual(Z_6).
pub fn example2_map() -> RingMap {
    example2_map_on(6).expect("n = 6 is valid")
}

/// Resolves `example1`, `example2` or `zero` against a ring.
pub fn builtin_map(name: &str, ring: &FiniteRing) -> Result<RingMap, MapError> {
    match (name, constructors::recognize(ring)) {
        ("zero", _) => Ok(RingMap::zero(ring)),
        ("example1", Some(RingFamily::M2(n))) => example1_map(n),
        ("example1", _) => Err(MapError::BuiltinMismatch("example1")),
        ("example2", Some(RingFamily::Dual(n))) => example2_map_on(n),
        ("example2", _) => Err(MapError::BuiltinMismatch("example2")),
        (other, _) => Err(MapError::UnknownBuiltin(other.to_string())),
    }
}

/// The inner map `x -> c x* - x* c` with `c = a21 - a12`, where `a = d(e)`.
pub fn build_inner_wp(frame: &PeirceFrame<'_>, delta: &RingMap) -> Result<RingMap, MapError> {
    let ring = frame.ring();
    let star = frame.involution().ok_or(MapError::MissingInvolution)?;
    if delta.size() != ring.size() {
        return Err(MapError::SizeMismatch {
            expected: ring.size(),
            found: delta.size(),
        });
    }
    let a = frame.project(delta.apply(frame.e()));
    let c = ring.sub(a.get(Component::R21), a.get(Component::R12));
    Ok(RingMap::from_fn(ring, |x| {
        let xs = star.apply(x);
        ring.sub(ring.mul(c, xs), ring.mul(xs, c))
    }))
}

/// `d` split as `reduced + inner`, where `reduced` kills the idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub inner: RingMap,
    pub reduced: RingMap,
}

/// Subtracts the inner map from a *-reverse derivable `delta`.
pub fn reduce_delta(frame: &PeirceFrame<'_>, delta: &RingMap) -> Result<Reduction, MapError> {
    let ring = frame.ring();
    let star = frame.involution().ok_or(MapError::MissingInvolution)?;
    if let Verdict::Fail((a, b)) = check_identity(ring, delta, IdentityKind::StarReverse(star))? {
        return Err(MapError::NotStarReverse(a, b));
    }
    let inner = build_inner_wp(frame, delta)?;
    let reduced = delta.pointwise_sub(ring, &inner);
    let at_e = reduced.apply(frame.e());
    if !ring.is_zero(at_e) {
        return Err(MapError::ReductionInvariant(at_e));
    }
    Ok(Reduction { inner, reduced })
}
