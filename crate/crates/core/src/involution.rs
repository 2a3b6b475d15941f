//! Anti-automorphisms and involutions of a finite ring.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::constructors::{self, m2_entries, m2_index, RingFamily};
use crate::ring::{first_pair, Elem, FiniteRing};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvolutionError {
    #[error("malformed involution document: {0}")]
    Json(String),
    #[error("map has {found} entries, ring has {expected} elements")]
    Length { expected: usize, found: usize },
    #[error("map entry {value} at position {position} is outside the carrier")]
    OutOfRange { position: usize, value: u64 },
    #[error("map is not a bijection: {first} and {second} share an image")]
    NotBijective { first: Elem, second: Elem },
    #[error("map is not additive at ({0}, {1})")]
    NotAdditive(Elem, Elem),
    #[error("map is not anti-multiplicative at ({0}, {1})")]
    NotAntiMultiplicative(Elem, Elem),
    #[error("map is not an involution: applying it twice moves {0}")]
    NotInvolution(Elem),
    #[error("builtin {family} does not apply to this ring")]
    FamilyMismatch { family: InvolutionFamily },
}

/// JSON shape: `{"map": [...], "involution": bool}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvolutionDocument {
    pub map: Vec<u64>,
    pub involution: bool,
}

/// A validated additive bijection `s` with `s(xy) = s(y) s(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AntiAutomorphism {
    map: Vec<Elem>,
    is_involution: bool,
}

impl AntiAutomorphism {
    /// Verifies every axiom exhaustively and reports the first violation.
    pub fn validate(
        ring: &FiniteRing,
        map: &[u64],
        require_involution: bool,
    ) -> Result<Self, InvolutionError> {
        let n = ring.size();
        if map.len() != n {
            return Err(InvolutionError::Length {
                expected: n,
                found: map.len(),
            });
        }
        let mut image = Vec::with_capacity(n);
        let mut preimage: Vec<Option<Elem>> = vec![None; n];
        for (position, &value) in map.iter().enumerate() {
            if value >= n as u64 {
                return Err(InvolutionError::OutOfRange { position, value });
            }
            let y = Elem::new(value as usize);
            if let Some(first) = preimage[y.index()] {
                return Err(InvolutionError::NotBijective {
                    first,
                    second: Elem::new(position),
                });
            }
            preimage[y.index()] = Some(Elem::new(position));
            image.push(y);
        }

        let s = |x: usize| image[x];
        let e = Elem::new;
        if let Some((x, y)) = first_pair(n, |x, y| {
            s(ring.add(e(x), e(y)).index()) != ring.add(s(x), s(y))
        }) {
            return Err(InvolutionError::NotAdditive(e(x), e(y)));
        }
        if let Some((x, y)) = first_pair(n, |x, y| {
            s(ring.mul(e(x), e(y)).index()) != ring.mul(s(y), s(x))
        }) {
            return Err(InvolutionError::NotAntiMultiplicative(e(x), e(y)));
        }
        let moved = (0..n).find(|&x| s(s(x).index()) != e(x));
        if let (true, Some(x)) = (require_involution, moved) {
            return Err(InvolutionError::NotInvolution(e(x)));
        }
        Ok(AntiAutomorphism {
            map: image,
            is_involution: moved.is_none(),
        })
    }

    /// Parses and validates; a document claiming `"involution": true` must be one.
    pub fn from_json(ring: &FiniteRing, text: &str) -> Result<Self, InvolutionError> {
        let doc: InvolutionDocument =
            serde_json::from_str(text).map_err(|e| InvolutionError::Json(e.to_string()))?;
        Self::validate(ring, &doc.map, doc.involution)
    }

    pub fn builtin(ring: &FiniteRing, family: InvolutionFamily) -> Result<Self, InvolutionError> {
        let perm = builtin_permutation(ring, family)?;
        Self::validate(ring, &perm, false)
    }

    /// The identity map, which is an involution exactly when the ring is commutative.
    pub fn identity(ring: &FiniteRing) -> Result<Self, InvolutionError> {
        Self::builtin(ring, InvolutionFamily::Identity)
    }

    pub fn to_document(&self) -> InvolutionDocument {
        InvolutionDocument {
            map: self.map.iter().map(|x| x.index() as u64).collect(),
            involution: self.is_involution,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("involution documents always serialize")
    }

    pub fn content_id(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x.index()]
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn is_involution(&self) -> bool {
        self.is_involution
    }
}

/// Built-in maps for the constructor rings.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum InvolutionFamily {
    /// `(a b; c d) -> (d -b; -c a)` on M2(Z_n).
    AdjugateM2,
    /// `(a b; c d) -> (a c; b d)` on M2(Z_n).
    TransposeM2,
    /// `(a, b) -> (a, -b)` on dual(Z_n).
    NegBDual,
    Identity,
}

impl fmt::Display for InvolutionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvolutionFamily::AdjugateM2 => "adjugate_m2",
            InvolutionFamily::TransposeM2 => "transpose_m2",
            InvolutionFamily::NegBDual => "neg_b_dual",
            InvolutionFamily::Identity => "identity",
        })
    }
}

impl FromStr for InvolutionFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "adjugate_m2" | "adjugate" => InvolutionFamily::AdjugateM2,
            "transpose_m2" | "transpose" => InvolutionFamily::TransposeM2,
            "neg_b_dual" | "negb" => InvolutionFamily::NegBDual,
            "identity" => InvolutionFamily::Identity,
            other => return Err(format!("unknown involution family {other:?}")),
        })
    }
}

/// The raw permutation for a builtin family; the caller validates it.
pub fn builtin_permutation(
    ring: &FiniteRing,
    family: InvolutionFamily,
) -> Result<Vec<u64>, InvolutionError> {
    let mismatch = InvolutionError::FamilyMismatch { family };
    let perm: Vec<usize> = match (family, constructors::recognize(ring)) {
        (InvolutionFamily::Identity, _) => (0..ring.size()).collect(),
        (InvolutionFamily::AdjugateM2, Some(RingFamily::M2(n))) => (0..ring.size())
            .map(|x| {
                let [a, b, c, d] = m2_entries(n, x);
                m2_index(n, [d, n - b, n - c, a])
            })
            .collect(),
        (InvolutionFamily::TransposeM2, Some(RingFamily::M2(n))) => (0..ring.size())
            .map(|x| {
                let [a, b, c, d] = m2_entries(n, x);
                m2_index(n, [a, c, b, d])
            })
            .collect(),
        (InvolutionFamily::NegBDual, Some(RingFamily::Dual(n))) => (0..ring.size())
            .map(|x| constructors::dual_index(n, x / n, n - x % n))
            .collect(),
        _ => return Err(mismatch),
    };
    Ok(perm.into_iter().map(|x| x as u64).collect())
}
