//! Engine results against naive arithmetic written out here.

use proptest::prelude::*;

use isogeny_lab::curve::Curve;
use isogeny_lab::field::PrimeField;
use isogeny_lab::isogeny::{build_pointed_graphs, GraphOptions};

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Affine points of `y² + a1xy + a3y = x³ + a2x² + a4x + a6` plus infinity,
/// by trying every pair.
fn naive_count(p: u64, a: &[u64; 5]) -> u64 {
    let [a1, a2, a3, a4, a6] = *a;
    let mut n = 1;
    for x in 0..p {
        let rhs = (x * x % p * x + a2 * x % p * x + a4 * x + a6) % p;
        for y in 0..p {
            if (y * y + a1 * x % p * y + a3 * y) % p == rhs {
                n += 1;
            }
        }
    }
    n
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Pt {
    O,
    A(u64, u64),
}

/// Chord and tangent on `y² = x³ + ax + b`.
fn add(p: u64, a: u64, u: Pt, v: Pt) -> Pt {
    match (u, v) {
        (Pt::O, w) | (w, Pt::O) => w,
        (Pt::A(x1, y1), Pt::A(x2, y2)) => {
            let lambda = if x1 == x2 {
                if (y1 + y2) % p == 0 {
                    return Pt::O;
                }
                (3 * x1 % p * x1 + a) % p * pow_mod(2 * y1, p - 2, p) % p
            } else {
                (y2 + p - y1) % p * pow_mod((x2 + p - x1) % p, p - 2, p) % p
            };
            let x3 = (lambda * lambda % p + 2 * p - x1 - x2) % p;
            let y3 = (lambda * ((x1 + p - x3) % p) % p + p - y1) % p;
            Pt::A(x3, y3)
        }
    }
}

/// Rational points killed by ℓ, infinity included.
fn naive_torsion(p: u64, a: u64, b: u64, ell: u64) -> usize {
    let mut pts = vec![Pt::O];
    for x in 0..p {
        for y in 0..p {
            if y * y % p == (x * x % p * x + a * x + b) % p {
                pts.push(Pt::A(x, y));
            }
        }
    }
    pts.into_iter()
        .filter(|&pt| {
            let mut acc = Pt::O;
            for _ in 0..ell {
                acc = add(p, a, acc, pt);
            }
            acc == Pt::O
        })
        .count()
}

const SMALL_PRIMES: [u64; 8] = [5, 7, 11, 13, 17, 19, 23, 29];

proptest! {
    #[test]
    fn point_count_matches_enumeration(pi in 0..SMALL_PRIMES.len(), a in 0u64..29, b in 0u64..29) {
        let p = SMALL_PRIMES[pi];
        let f = PrimeField::new(p).unwrap();
        if let Ok(e) = Curve::short(f, a % p, b % p) {
            prop_assert_eq!(e.order().unwrap(), naive_count(p, &[0, 0, 0, a % p, b % p]));
            prop_assert_eq!(e.points().unwrap().len() as u64, e.order().unwrap());
        }
    }
}

#[test]
fn order_two_targets_have_full_torsion_by_enumeration() {
    let mut order_two = 0;
    for (q, ell) in [(7, 3), (13, 3), (19, 3), (31, 3), (11, 5), (31, 5), (41, 5), (29, 7), (43, 7)] {
        let f = PrimeField::new(q).unwrap();
        let build = build_pointed_graphs(&f, ell, &GraphOptions::default()).unwrap();
        assert!(build.failures.is_empty(), "q = {q}, ℓ = {ell}: {:?}", build.failures.first());
        for g in &build.graphs {
            let c = g.target.coeffs();
            assert_eq!(&c[..3], &[0, 0, 0], "targets are short forms");
            let n = naive_count(q, c);
            // isogenous curves over F_q have equally many points
            for arm in &g.arms {
                assert_eq!(naive_count(q, arm.source.coeffs()), n);
            }
            let torsion = naive_torsion(q, c[3], c[4], ell);
            if g.order() >= 2 {
                order_two += 1;
                assert_eq!(torsion as u64, ell * ell, "q = {q}, ℓ = {ell}, target {c:?}");
                assert_eq!(q % ell, 1);
            } else {
                assert!(torsion as u64 >= ell);
            }
        }
    }
    assert!(order_two > 0);
}
