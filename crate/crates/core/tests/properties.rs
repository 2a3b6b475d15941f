use proptest::prelude::*;

use ringwork::constructors::{dual, m2, null, product, zmod};
use ringwork::ring::RingDocument;
use ringwork::{
    check_identity, find_idempotents, AntiAutomorphism, Component, Elem, FiniteRing, IdentityKind,
    InvolutionFamily, PeirceFrame, RingMap, ValidateOptions, Verdict,
};

fn small_rings() -> Vec<FiniteRing> {
    vec![
        zmod(1).unwrap(),
        zmod(4).unwrap(),
        zmod(6).unwrap(),
        dual(2).unwrap(),
        dual(3).unwrap(),
        null(3).unwrap(),
        product(&zmod(2).unwrap(), &zmod(3).unwrap()).unwrap(),
        m2(2).unwrap(),
    ]
}

fn ring_strategy() -> impl Strategy<Value = FiniteRing> {
    (0..small_rings().len()).prop_map(|i| small_rings().swap_remove(i))
}

/// Independent axiom check over raw tables.
fn is_ring(doc: &RingDocument) -> bool {
    let n = doc.size;
    let (a, m, z) = (&doc.add, &doc.mul, doc.zero as usize);
    let add = |x: usize, y: usize| a[x][y] as usize;
    let mul = |x: usize, y: usize| m[x][y] as usize;
    for x in 0..n {
        if add(z, x) != x || add(x, z) != x || !(0..n).any(|y| add(x, y) == z) {
            return false;
        }
        for y in 0..n {
            if add(x, y) != add(y, x) {
                return false;
            }
            for w in 0..n {
                if add(add(x, y), w) != add(x, add(y, w))
                    || mul(mul(x, y), w) != mul(x, mul(y, w))
                    || mul(x, add(y, w)) != add(mul(x, y), mul(x, w))
                    || mul(add(x, y), w) != add(mul(x, w), mul(y, w))
                {
                    return false;
                }
            }
        }
    }
    match doc.unity {
        None => true,
        Some(u) => (0..n).all(|x| mul(u as usize, x) == x && mul(x, u as usize) == x),
    }
}

fn identity_holds(
    ring: &FiniteRing,
    d: &RingMap,
    kind: &str,
    s: Option<&AntiAutomorphism>,
) -> bool {
    ring.elements().all(|a| {
        ring.elements().all(|b| match kind {
            "additive" => d.apply(ring.add(a, b)) == ring.add(d.apply(a), d.apply(b)),
            "derivation" => {
                d.apply(ring.mul(a, b))
                    == ring.add(ring.mul(d.apply(a), b), ring.mul(a, d.apply(b)))
            }
            "reverse" => {
                d.apply(ring.mul(a, b))
                    == ring.add(ring.mul(d.apply(b), a), ring.mul(b, d.apply(a)))
            }
            _ => {
                let s = s.unwrap();
                d.apply(ring.mul(a, b))
                    == ring.add(
                        ring.mul(d.apply(b), s.apply(a)),
                        ring.mul(s.apply(b), d.apply(a)),
                    )
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_byte_exact(ring in ring_strategy()) {
        let text = ring.to_json();
        let back = FiniteRing::from_json(&text, &ValidateOptions::default()).unwrap();
        prop_assert!(back.same_tables(&ring));
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back.content_id(), ring.content_id());
    }

    #[test]
    fn validation_agrees_with_oracle(ring in ring_strategy(), pos in any::<usize>(), val in any::<u64>(), in_add in any::<bool>()) {
        let mut doc = ring.to_document();
        let n = doc.size;
        let (x, y, v) = (pos % n, (pos / n) % n, val % n as u64);
        if in_add { doc.add[x][y] = v } else { doc.mul[x][y] = v }
        let expected = is_ring(&doc);
        let got = FiniteRing::validate(doc, &ValidateOptions::default());
        prop_assert_eq!(got.is_ok(), expected);
    }

    #[test]
    fn random_maps_match_identity_oracle(ring in ring_strategy(), seed in prop::collection::vec(any::<u32>(), 36)) {
        let n = ring.size();
        let image: Vec<u64> = (0..n).map(|i| u64::from(seed[i % seed.len()]) % n as u64).collect();
        let d = RingMap::new(&ring, &image).unwrap();
        let id = AntiAutomorphism::identity(&ring).ok();
        for (kind, name) in [
            (IdentityKind::Additive, "additive"),
            (IdentityKind::Derivation, "derivation"),
            (IdentityKind::ReverseDerivation, "reverse"),
        ] {
            let verdict = check_identity(&ring, &d, kind).unwrap();
            prop_assert_eq!(verdict.passed(), identity_holds(&ring, &d, name, None));
        }
        if let Some(s) = &id {
            let verdict = check_identity(&ring, &d, IdentityKind::SigmaReverse(s)).unwrap();
            prop_assert_eq!(verdict.passed(), identity_holds(&ring, &d, "sigma", Some(s)));
        }
    }

    #[test]
    fn peirce_projections(x in 0usize..36, which in 0usize..2) {
        let (ring, family, e) = if which == 0 {
            (m2(2).unwrap(), InvolutionFamily::TransposeM2, "E11")
        } else {
            (dual(6).unwrap(), InvolutionFamily::NegBDual, "(3,0)")
        };
        let inv = AntiAutomorphism::builtin(&ring, family).unwrap();
        let frame = PeirceFrame::new(&ring, ring.resolve(e).unwrap(), Some(&inv)).unwrap();
        let x = ring.elem(x % ring.size()).unwrap();
        let split = frame.project(x);
        prop_assert_eq!(split.sum(&ring), x);
        for c in Component::ALL {
            let p = split.get(c);
            prop_assert_eq!(frame.pi(c, p), p);
            prop_assert!(frame.component_of(p).contains(c));
            for other in Component::ALL.into_iter().filter(|&o| o != c) {
                prop_assert!(ring.is_zero(frame.pi(other, p)));
            }
            // the involution swaps R12 and R21 and fixes the diagonal
            prop_assert_eq!(frame.pi(c.swapped(), inv.apply(p)), inv.apply(p));
        }
    }
}

#[test]
fn example_maps_on_the_two_frames() {
    let d6 = dual(6).unwrap();
    let nb = AntiAutomorphism::builtin(&d6, InvolutionFamily::NegBDual).unwrap();
    let ex2 = ringwork::maps::builtin_map("example2", &d6).unwrap();
    assert!(identity_holds(&d6, &ex2, "star", Some(&nb)));
    assert!(identity_holds(&d6, &ex2, "additive", None));
    assert!(check_identity(&d6, &ex2, IdentityKind::StarReverse(&nb))
        .unwrap()
        .passed());

    let m = m2(3).unwrap();
    let adj = AntiAutomorphism::builtin(&m, InvolutionFamily::AdjugateM2).unwrap();
    let ex1 = ringwork::maps::builtin_map("example1", &m).unwrap();
    assert!(identity_holds(&m, &ex1, "star", Some(&adj)));
    assert!(!identity_holds(&m, &ex1, "reverse", None));
    match check_identity(&m, &ex1, IdentityKind::ReverseDerivation).unwrap() {
        Verdict::Fail((a, b)) => {
            let lhs = ex1.apply(m.mul(a, b));
            let rhs = m.add(m.mul(ex1.apply(b), a), m.mul(b, ex1.apply(a)));
            assert_ne!(lhs, rhs);
        }
        Verdict::Pass => panic!("reverse derivation identity should fail"),
    }
}

#[test]
fn nonadditive_map_on_dual6() {
    let ring = dual(6).unwrap();
    let nb = AntiAutomorphism::builtin(&ring, InvolutionFamily::NegBDual).unwrap();
    // d(a, b) = (0, a^2 b)
    let d = RingMap::from_fn(&ring, |x| {
        let (a, b) = (x.index() / 6, x.index() % 6);
        Elem::new(a * a * b % 6)
    });
    assert!(identity_holds(&ring, &d, "star", Some(&nb)));
    assert!(!identity_holds(&ring, &d, "additive", None));
    let found = ringwork::search::find_nonadditive_witness(&ring, &nb, 10_000_000).unwrap();
    assert_eq!(found.witness, Some(d));
}

#[test]
fn symmetric_idempotents_are_fixed_and_nontrivial() {
    for ring in small_rings() {
        let Ok(id) = AntiAutomorphism::identity(&ring) else {
            continue;
        };
        for e in find_idempotents(&ring, Some(&id)) {
            assert_eq!(ring.mul(e, e), e);
            assert!(!ring.is_zero(e));
            assert_ne!(Some(e), ring.unity());
        }
    }
}
