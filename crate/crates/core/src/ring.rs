//! Finite rings given by explicit addition and multiplication tables.
//!
//! A [`FiniteRing`] is only ever produced by validation (or by the trusted
//! constructors in [`crate::constructors`]), so every method may assume the
//! ring axioms hold. Elements are dense indices `0..size`; labels exist for
//! display and for resolving user input, never for semantics.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Rings above this many elements are rejected unless the caller raises the limit.
pub const DEFAULT_MAX_SIZE: usize = 4096;

/// Index of an element in the carrier of a particular ring.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u32);

impl Elem {
    #[inline]
    pub const fn new(index: usize) -> Self {
        Elem(index as u32)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A ring axiom, in the order validation checks them.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Law {
    AdditiveIdentity,
    AdditiveCommutativity,
    AdditiveInverse,
    AdditiveAssociativity,
    LeftDistributivity,
    RightDistributivity,
    MultiplicativeAssociativity,
    Unity,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Law::AdditiveIdentity => "additive identity",
            Law::AdditiveCommutativity => "additive commutativity",
            Law::AdditiveInverse => "additive inverse",
            Law::AdditiveAssociativity => "additive associativity",
            Law::LeftDistributivity => "left distributivity",
            Law::RightDistributivity => "right distributivity",
            Law::MultiplicativeAssociativity => "multiplicative associativity",
            Law::Unity => "unity",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum RingError {
    #[error("malformed ring document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("ring size must be at least 1")]
    Empty,
    #[error("ring size {size} exceeds the limit of {max}")]
    TooLarge { size: usize, max: usize },
    #[error("{table} table is not {size}x{size}")]
    Shape { table: &'static str, size: usize },
    #[error("{what} entry {value} is outside 0..{size}")]
    OutOfRange {
        what: String,
        value: u64,
        size: usize,
    },
    #[error("expected {size} labels, found {found}")]
    LabelCount { size: usize, found: usize },
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("{law} violated at {witness:?}")]
    Axiom { law: Law, witness: Vec<Elem> },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElementError {
    #[error("element index {index} is outside 0..{size}")]
    OutOfRange { index: usize, size: usize },
    #[error("no element named {0:?}")]
    Unknown(String),
}

/// Limits applied while validating an untrusted ring.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ValidateOptions {
    pub max_size: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            max_size: DEFAULT_MAX_SIZE,
        }
    }
}

/// The JSON shape of a ring, before validation.
///
/// Field order is the canonical serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDocument {
    pub size: usize,
    pub add: Vec<Vec<u64>>,
    pub mul: Vec<Vec<u64>>,
    pub zero: u64,
    pub unity: Option<u64>,
    pub labels: Option<Vec<String>>,
}

/// A validated finite ring, possibly without unity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteRing {
    size: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    zero: Elem,
    unity: Option<Elem>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("size", &self.size)
            .field("zero", &self.zero)
            .field("unity", &self.unity)
            .finish_non_exhaustive()
    }
}

impl FiniteRing {
    /// Builds a ring from tables known to satisfy the axioms.
    ///
    /// Used by the constructors; anything coming from outside goes through
    /// [`FiniteRing::validate`].
    pub(crate) fn from_trusted_tables(
        size: usize,
        add: Vec<u32>,
        mul: Vec<u32>,
        zero: Elem,
        unity: Option<Elem>,
        labels: Option<Vec<String>>,
    ) -> Self {
        debug_assert_eq!(add.len(), size * size);
        debug_assert_eq!(mul.len(), size * size);
        let neg = (0..size)
            .map(|a| {
                (0..size)
                    .find(|&b| add[a * size + b] as usize == zero.index())
                    .expect("trusted tables have additive inverses") as u32
            })
            .collect();
        FiniteRing {
            size,
            add,
            mul,
            neg,
            zero,
            unity,
            labels,
        }
    }

    /// Checks shape, ranges and every ring axiom, reporting the first
    /// violation with the lexicographically smallest witness.
    pub fn validate(doc: RingDocument, opts: &ValidateOptions) -> Result<Self, RingError> {
        let size = doc.size;
        if size == 0 {
            return Err(RingError::Empty);
        }
        if size > opts.max_size {
            return Err(RingError::TooLarge {
                size,
                max: opts.max_size,
            });
        }
        let add = flatten_table("add", &doc.add, size)?;
        let mul = flatten_table("mul", &doc.mul, size)?;
        let zero = check_index("zero", doc.zero, size)?;
        let unity = doc
            .unity
            .map(|u| check_index("unity", u, size))
            .transpose()?;
        if let Some(labels) = &doc.labels {
            if labels.len() != size {
                return Err(RingError::LabelCount {
                    size,
                    found: labels.len(),
                });
            }
            let mut seen = std::collections::HashSet::new();
            for label in labels {
                if !seen.insert(label.as_str()) {
                    return Err(RingError::DuplicateLabel(label.clone()));
                }
            }
        }

        let n = size;
        let a_ = |x: usize, y: usize| add[x * n + y] as usize;
        let m_ = |x: usize, y: usize| mul[x * n + y] as usize;
        let z = zero.index();

        let fail = |law: Law, w: &[usize]| RingError::Axiom {
            law,
            witness: w.iter().map(|&i| Elem::new(i)).collect(),
        };

        if let Some(x) = (0..n).find(|&x| a_(z, x) != x || a_(x, z) != x) {
            return Err(fail(Law::AdditiveIdentity, &[x]));
        }
        if let Some((x, y)) = first_pair(n, |x, y| a_(x, y) != a_(y, x)) {
            return Err(fail(Law::AdditiveCommutativity, &[x, y]));
        }
        if let Some(x) = (0..n).find(|&x| (0..n).all(|y| a_(x, y) != z)) {
            return Err(fail(Law::AdditiveInverse, &[x]));
        }
        if let Some(w) = first_triple(n, |x, y, w| a_(a_(x, y), w) != a_(x, a_(y, w))) {
            return Err(fail(Law::AdditiveAssociativity, &w));
        }
        if let Some(w) = first_triple(n, |x, y, w| m_(x, a_(y, w)) != a_(m_(x, y), m_(x, w))) {
            return Err(fail(Law::LeftDistributivity, &w));
        }
        if let Some(w) = first_triple(n, |x, y, w| m_(a_(x, y), w) != a_(m_(x, w), m_(y, w))) {
            return Err(fail(Law::RightDistributivity, &w));
        }
        if let Some(w) = first_triple(n, |x, y, w| m_(m_(x, y), w) != m_(x, m_(y, w))) {
            return Err(fail(Law::MultiplicativeAssociativity, &w));
        }
        if let Some(u) = unity {
            let u = u.index();
            if let Some(x) = (0..n).find(|&x| m_(u, x) != x || m_(x, u) != x) {
                return Err(fail(Law::Unity, &[x]));
            }
        }

        Ok(Self::from_trusted_tables(
            size, add, mul, zero, unity, doc.labels,
        ))
    }

    pub fn from_json(text: &str, opts: &ValidateOptions) -> Result<Self, RingError> {
        let doc: RingDocument = serde_json::from_str(text)?;
        Self::validate(doc, opts)
    }

    pub fn to_document(&self) -> RingDocument {
        let rows = |t: &[u32]| {
            t.chunks(self.size)
                .map(|r| r.iter().map(|&v| v as u64).collect())
                .collect()
        };
        RingDocument {
            size: self.size,
            add: rows(&self.add),
            mul: rows(&self.mul),
            zero: self.zero.0 as u64,
            unity: self.unity.map(|u| u.0 as u64),
            labels: self.labels.clone(),
        }
    }

    /// Canonical (compact) JSON text.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("ring documents always serialize")
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn content_id(&self) -> String {
        let mut hasher = Sha256::new();
        serde_json::to_writer(&mut hasher, &self.to_document())
            .expect("hashing never fails to write");
        hex::encode(hasher.finalize())
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        self.zero
    }

    #[inline]
    pub fn unity(&self) -> Option<Elem> {
        self.unity
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.size).map(Elem::new)
    }

    /// Converts a raw index into an element of this ring.
    pub fn elem(&self, index: usize) -> Result<Elem, ElementError> {
        if index < self.size {
            Ok(Elem::new(index))
        } else {
            Err(ElementError::OutOfRange {
                index,
                size: self.size,
            })
        }
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        Elem(self.add[x.index() * self.size + y.index()])
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        Elem(self.mul[x.index() * self.size + y.index()])
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        Elem(self.neg[x.index()])
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn is_zero(&self, x: Elem) -> bool {
        x == self.zero
    }

    pub fn is_commutative(&self) -> bool {
        first_pair(self.size, |x, y| {
            self.mul[x * self.size + y] != self.mul[y * self.size + x]
        })
        .is_none()
    }

    /// Display name of an element: its label, or its index when unlabeled.
    pub fn label(&self, x: Elem) -> String {
        match &self.labels {
            Some(labels) => labels[x.index()].clone(),
            None => x.index().to_string(),
        }
    }

    /// Resolves a user-supplied element name.
    ///
    /// Tries, in order: an exact label (whitespace ignored), the matrix-unit
    /// aliases `E11`, `E12`, `E21`, `E22` and `I` on rings with 2x2 matrix
    /// labels, and finally a plain index.
    pub fn resolve(&self, name: &str) -> Result<Elem, ElementError> {
        let key = strip_whitespace(name);
        if let Some(labels) = &self.labels {
            let find = |wanted: &str| labels.iter().position(|l| strip_whitespace(l) == wanted);
            if let Some(i) = find(&key) {
                return Ok(Elem::new(i));
            }
            if let Some(alias) = matrix_unit_alias(&key) {
                if let Some(i) = find(alias) {
                    return Ok(Elem::new(i));
                }
            }
        }
        match key.parse::<usize>() {
            Ok(i) => self.elem(i),
            Err(_) => Err(ElementError::Unknown(name.to_string())),
        }
    }

    /// Table equality, ignoring labels.
    pub fn same_tables(&self, other: &FiniteRing) -> bool {
        self.size == other.size
            && self.zero == other.zero
            && self.add == other.add
            && self.mul == other.mul
    }
}

fn strip_whitespace(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn matrix_unit_alias(key: &str) -> Option<&'static str> {
    Some(match key {
        "E11" => "[[1,0],[0,0]]",
        "E12" => "[[0,1],[0,0]]",
        "E21" => "[[0,0],[1,0]]",
        "E22" => "[[0,0],[0,1]]",
        "I" => "[[1,0],[0,1]]",
        _ => return None,
    })
}

fn check_index(what: &str, value: u64, size: usize) -> Result<Elem, RingError> {
    if value < size as u64 {
        Ok(Elem::new(value as usize))
    } else {
        Err(RingError::OutOfRange {
            what: what.to_string(),
            value,
            size,
        })
    }
}

fn flatten_table(
    table: &'static str,
    rows: &[Vec<u64>],
    size: usize,
) -> Result<Vec<u32>, RingError> {
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(RingError::Shape { table, size });
    }
    let mut flat = Vec::with_capacity(size * size);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            flat.push(check_index(&format!("{table}[{i}][{j}]"), v, size)?.0);
        }
    }
    Ok(flat)
}

/// Lowest (x, y) in lexicographic order satisfying `bad`.
pub(crate) fn first_pair<F>(n: usize, bad: F) -> Option<(usize, usize)>
where
    F: Fn(usize, usize) -> bool + Sync,
{
    (0..n)
        .into_par_iter()
        .find_map_first(|x| (0..n).find(|&y| bad(x, y)).map(|y| (x, y)))
}

fn first_triple<F>(n: usize, bad: F) -> Option<[usize; 3]>
where
    F: Fn(usize, usize, usize) -> bool + Sync,
{
    (0..n).into_par_iter().find_map_first(|x| {
        for y in 0..n {
            for w in 0..n {
                if bad(x, y, w) {
                    return Some([x, y, w]);
                }
            }
        }
        None
    })
}
