//! Idempotents and the two-sided Peirce decomposition.
//!
//! Everything is computed without a unity: with `e` idempotent,
//!
//! ```text
//! x11 = exe
//! x12 = ex - exe
//! x21 = xe - exe
//! x22 = x - ex - xe + exe
//! ```
//!
//! so non-unital rings decompose the same way unital ones do.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::involution::AntiAutomorphism;
use crate::ring::{Elem, FiniteRing};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error("{0} is not idempotent")]
    NotIdempotent(Elem),
    #[error("{0} is a trivial idempotent")]
    Trivial(Elem),
    #[error("{0} is not fixed by the involution")]
    NotSymmetric(Elem),
    #[error("anti-automorphism has {found} entries, ring has {expected} elements")]
    SizeMismatch { expected: usize, found: usize },
}

/// One of the four Peirce components `R11`, `R12`, `R21`, `R22`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Component {
    #[serde(rename = "11")]
    R11,
    #[serde(rename = "12")]
    R12,
    #[serde(rename = "21")]
    R21,
    #[serde(rename = "22")]
    R22,
}

impl Component {
    pub const ALL: [Component; 4] = [
        Component::R11,
        Component::R12,
        Component::R21,
        Component::R22,
    ];

    /// `(i, j)` as 1-based indices.
    pub fn indices(self) -> (u8, u8) {
        match self {
            Component::R11 => (1, 1),
            Component::R12 => (1, 2),
            Component::R21 => (2, 1),
            Component::R22 => (2, 2),
        }
    }

    pub fn from_indices(i: u8, j: u8) -> Option<Self> {
        Component::ALL.into_iter().find(|c| c.indices() == (i, j))
    }

    /// `Rij -> Rji`.
    pub fn swapped(self) -> Self {
        let (i, j) = self.indices();
        Component::from_indices(j, i).unwrap()
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.indices();
        write!(f, "R{i}{j}")
    }
}

/// The four components of one element.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeirceSplit {
    pub x11: Elem,
    pub x12: Elem,
    pub x21: Elem,
    pub x22: Elem,
}

impl PeirceSplit {
    pub fn get(&self, c: Component) -> Elem {
        match c {
            Component::R11 => self.x11,
            Component::R12 => self.x12,
            Component::R21 => self.x21,
            Component::R22 => self.x22,
        }
    }

    pub fn sum(&self, ring: &FiniteRing) -> Elem {
        ring.add(ring.add(self.x11, self.x12), ring.add(self.x21, self.x22))
    }
}

/// Which components an element belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub r11: bool,
    pub r12: bool,
    pub r21: bool,
    pub r22: bool,
}

impl Membership {
    pub fn contains(&self, c: Component) -> bool {
        match c {
            Component::R11 => self.r11,
            Component::R12 => self.r12,
            Component::R21 => self.r21,
            Component::R22 => self.r22,
        }
    }
}

/// A nontrivial idempotent `e`, optionally paired with an anti-automorphism
/// that fixes it.
#[derive(Clone, Copy, Debug)]
pub struct PeirceFrame<'r> {
    ring: &'r FiniteRing,
    e: Elem,
    involution: Option<&'r AntiAutomorphism>,
}

impl<'r> PeirceFrame<'r> {
    pub fn new(
        ring: &'r FiniteRing,
        e: Elem,
        involution: Option<&'r AntiAutomorphism>,
    ) -> Result<Self, FrameError> {
        if ring.mul(e, e) != e {
            return Err(FrameError::NotIdempotent(e));
        }
        if ring.is_zero(e) || ring.unity() == Some(e) {
            return Err(FrameError::Trivial(e));
        }
        if let Some(s) = involution {
            if s.size() != ring.size() {
                return Err(FrameError::SizeMismatch {
                    expected: ring.size(),
                    found: s.size(),
                });
            }
            if s.apply(e) != e {
                return Err(FrameError::NotSymmetric(e));
            }
        }
        Ok(PeirceFrame {
            ring,
            e,
            involution,
        })
    }

    pub fn ring(&self) -> &'r FiniteRing {
        self.ring
    }

    pub fn e(&self) -> Elem {
        self.e
    }

    pub fn involution(&self) -> Option<&'r AntiAutomorphism> {
        self.involution
    }

    pub fn project(&self, x: Elem) -> PeirceSplit {
        let r = self.ring;
        let ex = r.mul(self.e, x);
        let xe = r.mul(x, self.e);
        let exe = r.mul(ex, self.e);
        let x12 = r.sub(ex, exe);
        let x21 = r.sub(xe, exe);
        let x22 = r.add(r.sub(r.sub(x, ex), xe), exe);
        PeirceSplit {
            x11: exe,
            x12,
            x21,
            x22,
        }
    }

    /// The projection onto a single component.
    pub fn pi(&self, c: Component, x: Elem) -> Elem {
        self.project(x).get(c)
    }

    /// `x` lies in `Rij` iff it is its own `ij` part and the other parts vanish.
    pub fn component_of(&self, x: Elem) -> Membership {
        let split = self.project(x);
        let zero = self.ring.zero();
        let is = |c: Component| {
            Component::ALL
                .into_iter()
                .all(|d| split.get(d) == if d == c { x } else { zero })
        };
        Membership {
            r11: is(Component::R11),
            r12: is(Component::R12),
            r21: is(Component::R21),
            r22: is(Component::R22),
        }
    }

    /// The distinct elements of one component, sorted.
    pub fn component_elements(&self, c: Component) -> Vec<Elem> {
        let mut out: Vec<Elem> = self.ring.elements().map(|x| self.pi(c, x)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Elements `x` with `xe = x`, i.e. the left ideal `Re = R11 + R21`.
    pub fn right_multiples(&self) -> Vec<Elem> {
        self.ring
            .elements()
            .filter(|&x| self.ring.mul(x, self.e) == x)
            .collect()
    }
}

/// All idempotents other than zero and unity, sorted by index; when an
/// anti-automorphism is given, only those it fixes.
pub fn find_idempotents(
    ring: &FiniteRing,
    symmetric_under: Option<&AntiAutomorphism>,
) -> Vec<Elem> {
    ring.elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|&x| {
            ring.mul(x, x) == x
                && !ring.is_zero(x)
                && ring.unity() != Some(x)
                && symmetric_under.is_none_or(|s| s.apply(x) == x)
        })
        .collect()
}
