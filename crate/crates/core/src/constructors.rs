//! Ring families used throughout the workbench.
//!
//! Constructors emit tables directly; they are checked against
//! [`FiniteRing::validate`] in the test suite rather than at build time.

use std::fmt;
use std::str::FromStr;

use crate::ring::{Elem, FiniteRing, RingError, ValidateOptions};

/// A constructor family with its parameters.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RingFamily {
    /// Integers mod n.
    ZMod(usize),
    /// Full 2x2 matrices over Z_n.
    M2(usize),
    /// Matrices `(a b; 0 a)` over Z_n, stored as pairs `(a, b)`.
    Dual(usize),
    /// Additive group Z_n with every product zero.
    Null(usize),
    /// Direct sum Z_n x Z_m.
    ZProd(usize, usize),
}

impl RingFamily {
    /// Number of elements the family produces, or `None` on overflow.
    pub fn size(&self) -> Option<usize> {
        match *self {
            RingFamily::ZMod(n) | RingFamily::Null(n) => Some(n),
            RingFamily::M2(n) => n.checked_pow(4),
            RingFamily::Dual(n) => n.checked_pow(2),
            RingFamily::ZProd(n, m) => n.checked_mul(m),
        }
    }

    pub fn build(&self, opts: &ValidateOptions) -> Result<FiniteRing, RingError> {
        let size = self
            .size()
            .ok_or_else(|| RingError::Parameter(format!("{self} is too large")))?;
        if size > opts.max_size {
            return Err(RingError::TooLarge {
                size,
                max: opts.max_size,
            });
        }
        match *self {
            RingFamily::ZMod(n) => zmod(n),
            RingFamily::M2(n) => m2(n),
            RingFamily::Dual(n) => dual(n),
            RingFamily::Null(n) => null(n),
            RingFamily::ZProd(n, m) => product(&zmod(n)?, &zmod(m)?),
        }
    }
}

impl fmt::Display for RingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingFamily::ZMod(n) => write!(f, "Z_{n}"),
            RingFamily::M2(n) => write!(f, "M2(Z_{n})"),
            RingFamily::Dual(n) => write!(f, "dual(Z_{n})"),
            RingFamily::Null(n) => write!(f, "null(Z_{n})"),
            RingFamily::ZProd(n, m) => write!(f, "Z_{n}xZ_{m}"),
        }
    }
}

/// Family names accepted on the command line.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FamilyName {
    ZMod,
    M2,
    Dual,
    Null,
    ZProd,
}

impl FromStr for FamilyName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "zmod" => FamilyName::ZMod,
            "m2" => FamilyName::M2,
            "dual" => FamilyName::Dual,
            "null" => FamilyName::Null,
            "zprod" => FamilyName::ZProd,
            other => return Err(format!("unknown ring family {other:?}")),
        })
    }
}

fn tables<A, M>(size: usize, add: A, mul: M) -> (Vec<u32>, Vec<u32>)
where
    A: Fn(usize, usize) -> usize,
    M: Fn(usize, usize) -> usize,
{
    let mut at = Vec::with_capacity(size * size);
    let mut mt = Vec::with_capacity(size * size);
    for x in 0..size {
        for y in 0..size {
            at.push(add(x, y) as u32);
            mt.push(mul(x, y) as u32);
        }
    }
    (at, mt)
}

/// Z_n. For n = 1 this is the zero ring, whose unity is its zero.
pub fn zmod(n: usize) -> Result<FiniteRing, RingError> {
    if n == 0 {
        return Err(RingError::Parameter("Z_n needs n >= 1".into()));
    }
    let (add, mul) = tables(n, |a, b| (a + b) % n, |a, b| (a * b) % n);
    let labels = (0..n).map(|a| a.to_string()).collect();
    Ok(FiniteRing::from_trusted_tables(
        n,
        add,
        mul,
        Elem::new(0),
        Some(Elem::new(1 % n)),
        Some(labels),
    ))
}

/// Entries `[a, b, c, d]` of the M2(Z_n) element with the given index.
pub fn m2_entries(n: usize, index: usize) -> [usize; 4] {
    [
        index / (n * n * n),
        (index / (n * n)) % n,
        (index / n) % n,
        index % n,
    ]
}

/// Index of the M2(Z_n) element `[[a, b], [c, d]]`; entries are reduced mod n.
pub fn m2_index(n: usize, [a, b, c, d]: [usize; 4]) -> usize {
    (((a % n) * n + b % n) * n + c % n) * n + d % n
}

/// The ring of 2x2 matrices over Z_n, `n^4` elements.
pub fn m2(n: usize) -> Result<FiniteRing, RingError> {
    if n < 2 {
        return Err(RingError::Parameter("M2(Z_n) needs n >= 2".into()));
    }
    let size = n.pow(4);
    let (add, mul) = tables(
        size,
        |x, y| {
            let [a, b, c, d] = m2_entries(n, x);
            let [e, f, g, h] = m2_entries(n, y);
            m2_index(n, [a + e, b + f, c + g, d + h])
        },
        |x, y| {
            let [a, b, c, d] = m2_entries(n, x);
            let [e, f, g, h] = m2_entries(n, y);
            m2_index(
                n,
                [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
            )
        },
    );
    let labels = (0..size)
        .map(|x| {
            let [a, b, c, d] = m2_entries(n, x);
            format!("[[{a},{b}],[{c},{d}]]")
        })
        .collect();
    Ok(FiniteRing::from_trusted_tables(
        size,
        add,
        mul,
        Elem::new(0),
        Some(Elem::new(m2_index(n, [1, 0, 0, 1]))),
        Some(labels),
    ))
}

/// Index of the pair `(a, b)` in dual(Z_n); entries are reduced mod n.
pub fn dual_index(n: usize, a: usize, b: usize) -> usize {
    (a % n) * n + b % n
}

/// The `n^2`-element ring of matrices `(a b; 0 a)` over Z_n, with
/// `(a, b)(c, d) = (ac, ad + bc)`.
pub fn dual(n: usize) -> Result<FiniteRing, RingError> {
    if n < 2 {
        return Err(RingError::Parameter("dual(Z_n) needs n >= 2".into()));
    }
    let size = n * n;
    let split = |x: usize| (x / n, x % n);
    let (add, mul) = tables(
        size,
        |x, y| {
            let ((a, b), (c, d)) = (split(x), split(y));
            dual_index(n, a + c, b + d)
        },
        |x, y| {
            let ((a, b), (c, d)) = (split(x), split(y));
            dual_index(n, a * c, a * d + b * c)
        },
    );
    let labels = (0..size)
        .map(|x| {
            let (a, b) = split(x);
            format!("({a},{b})")
        })
        .collect();
    Ok(FiniteRing::from_trusted_tables(
        size,
        add,
        mul,
        Elem::new(0),
        Some(Elem::new(dual_index(n, 1, 0))),
        Some(labels),
    ))
}

/// Z_n's additive group with zero multiplication; has no unity for n > 1.
pub fn null(n: usize) -> Result<FiniteRing, RingError> {
    if n == 0 {
        return Err(RingError::Parameter("null ring needs n >= 1".into()));
    }
    let (add, mul) = tables(n, |a, b| (a + b) % n, |_, _| 0);
    let labels = (0..n).map(|a| a.to_string()).collect();
    let unity = (n == 1).then(|| Elem::new(0));
    Ok(FiniteRing::from_trusted_tables(
        n,
        add,
        mul,
        Elem::new(0),
        unity,
        Some(labels),
    ))
}

/// Direct sum of two rings; element `(x, y)` has index `x * |right| + y`.
pub fn product(left: &FiniteRing, right: &FiniteRing) -> Result<FiniteRing, RingError> {
    let m = right.size();
    let size = left
        .size()
        .checked_mul(m)
        .ok_or_else(|| RingError::Parameter("product is too large".into()))?;
    let split = |x: usize| (Elem::new(x / m), Elem::new(x % m));
    let join = |x: Elem, y: Elem| x.index() * m + y.index();
    let (add, mul) = tables(
        size,
        |p, q| {
            let ((a, b), (c, d)) = (split(p), split(q));
            join(left.add(a, c), right.add(b, d))
        },
        |p, q| {
            let ((a, b), (c, d)) = (split(p), split(q));
            join(left.mul(a, c), right.mul(b, d))
        },
    );
    let labels = (0..size)
        .map(|p| {
            let (a, b) = split(p);
            format!("({},{})", left.label(a), right.label(b))
        })
        .collect();
    let unity = match (left.unity(), right.unity()) {
        (Some(u), Some(v)) => Some(Elem::new(join(u, v))),
        _ => None,
    };
    Ok(FiniteRing::from_trusted_tables(
        size,
        add,
        mul,
        Elem::new(join(left.zero(), right.zero())),
        unity,
        Some(labels),
    ))
}

/// Identifies a ring built by [`m2`] or [`dual`], comparing tables.
pub fn recognize(ring: &FiniteRing) -> Option<RingFamily> {
    let size = ring.size();
    let root = |k: u32| {
        let r = (size as f64).powf(1.0 / k as f64).round() as usize;
        (r.checked_pow(k) == Some(size)).then_some(r)
    };
    if let Some(n) = root(4).filter(|&n| n >= 2) {
        if m2(n).is_ok_and(|r| r.same_tables(ring)) {
            return Some(RingFamily::M2(n));
        }
    }
    if let Some(n) = root(2).filter(|&n| n >= 2) {
        if dual(n).is_ok_and(|r| r.same_tables(ring)) {
            return Some(RingFamily::Dual(n));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn revalidate(r: &FiniteRing) {
        FiniteRing::validate(r.to_document(), &ValidateOptions::default())
            .unwrap_or_else(|e| panic!("constructor emitted an invalid ring: {e}"));
    }

    #[test]
    fn constructors_emit_valid_rings() {
        for n in 1..=7 {
            revalidate(&zmod(n).unwrap());
            revalidate(&null(n).unwrap());
        }
        for n in 2..=8 {
            revalidate(&dual(n).unwrap());
        }
        revalidate(&m2(2).unwrap());
        revalidate(&m2(3).unwrap());
        revalidate(&product(&zmod(2).unwrap(), &zmod(2).unwrap()).unwrap());
        revalidate(&product(&zmod(2).unwrap(), &zmod(3).unwrap()).unwrap());
    }

    #[test]
    fn sizes() {
        assert_eq!(zmod(6).unwrap().size(), 6);
        assert_eq!(zmod(2).unwrap().size(), 2);
        let z1 = zmod(1).unwrap();
        assert_eq!((z1.size(), z1.unity()), (1, Some(z1.zero())));
        assert_eq!(m2(2).unwrap().size(), 16);
        assert_eq!(m2(3).unwrap().size(), 81);
        assert_eq!(dual(6).unwrap().size(), 36);
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(zmod(0).is_err());
        assert!(m2(1).is_err());
        assert!(dual(1).is_err());
        assert!(null(0).is_err());
        assert!(matches!(
            RingFamily::M2(9).build(&ValidateOptions::default()),
            Err(RingError::TooLarge { size: 6561, .. })
        ));
    }

    #[test]
    fn matrix_units_multiply() {
        let r = m2(2).unwrap();
        let e12 = r.resolve("[[0,1],[0,0]]").unwrap();
        let e21 = r.resolve("[[0,0],[1,0]]").unwrap();
        assert_eq!(r.label(r.mul(e12, e21)), "[[1,0],[0,0]]");
        assert_eq!(r.resolve("E11").unwrap(), r.mul(e12, e21));
        assert_ne!(r.mul(e12, e21), r.mul(e21, e12));
        assert!(!r.is_commutative());
    }

    #[test]
    fn dual_ring_arithmetic() {
        let r = dual(6).unwrap();
        let p = |s: &str| r.resolve(s).unwrap();
        assert_eq!(r.mul(p("(2,4)"), p("(1,0)")), p("(2,4)"));
        assert_eq!(r.mul(p("(3,0)"), p("(3,0)")), p("(3,0)"));
        assert_eq!(r.sub(p("(0,4)"), p("(0,1)")), p("(0,3)"));
        assert_eq!(r.unity(), Some(p("(1,0)")));
    }

    #[test]
    fn dual_rings_are_commutative() {
        for n in 2..=8 {
            assert!(dual(n).unwrap().is_commutative(), "dual(Z_{n})");
        }
    }

    #[test]
    fn additive_inverses_cancel() {
        for r in [
            zmod(6).unwrap(),
            m2(2).unwrap(),
            dual(4).unwrap(),
            null(3).unwrap(),
        ] {
            for x in r.elements() {
                assert_eq!(r.add(x, r.neg(x)), r.zero());
            }
        }
    }

    #[test]
    fn recognizes_its_own_rings() {
        assert_eq!(recognize(&m2(2).unwrap()), Some(RingFamily::M2(2)));
        assert_eq!(recognize(&dual(4).unwrap()), Some(RingFamily::Dual(4)));
        assert_eq!(recognize(&dual(6).unwrap()), Some(RingFamily::Dual(6)));
        assert_eq!(recognize(&zmod(6).unwrap()), None);
    }
}
