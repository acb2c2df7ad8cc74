use nmext_core::field::{find_irreducible, is_irreducible, BinaryField};
use nmext_core::{ExtFieldSpec, FieldSpec, FpVector};
use proptest::prelude::*;

const PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 251, 65521];

fn prime_and_elems() -> impl Strategy<Value = (u32, u32, u32, u32)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| (Just(p), 0..p, 0..p, 0..p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn prime_field_axioms((p, a, b, c) in prime_and_elems()) {
        let f = FieldSpec::new(p).unwrap();
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
        // reference arithmetic in u64
        prop_assert_eq!(f.mul(a, b) as u64, a as u64 * b as u64 % p as u64);
        if a != 0 {
            let inv = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, inv), 1);
            // Fermat
            prop_assert_eq!(f.pow(a, p as u64 - 1), 1);
        } else {
            prop_assert!(f.inv(a).is_err());
        }
    }
}

fn ext_case() -> impl Strategy<Value = (u32, usize, Vec<u32>, Vec<u32>, Vec<u32>)> {
    prop::sample::select(vec![(2u32, 1usize), (2, 3), (2, 8), (3, 2), (3, 4), (5, 2), (5, 3), (7, 2), (13, 2)])
        .prop_flat_map(|(p, k)| {
            let v = prop::collection::vec(0..p, k);
            (Just(p), Just(k), v.clone(), v.clone(), v)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn extension_field_axioms((p, k, a, b, c) in ext_case()) {
        let f = ExtFieldSpec::canonical(p, k).unwrap();
        let ab = f.mul(&a, &b).unwrap();
        prop_assert_eq!(&ab, &f.mul(&b, &a).unwrap());
        prop_assert_eq!(f.mul(&ab, &c).unwrap(), f.mul(&a, &f.mul(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(
            f.mul(&a, &f.add(&b, &c).unwrap()).unwrap(),
            f.add(&ab, &f.mul(&a, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(f.mul(&a, &f.one()).unwrap(), a.clone());
        if a.iter().any(|&v| v != 0) {
            let inv = f.inv(&a).unwrap();
            prop_assert_eq!(f.mul(&a, &inv).unwrap(), f.one());
            // a^(q-1) = 1
            prop_assert_eq!(f.pow(&a, f.order() - 1).unwrap(), f.one());
        }
    }

    #[test]
    fn binary_field_matches_generic(k in 1u32..=12, a in any::<u64>(), b in any::<u64>()) {
        let bf = BinaryField::canonical(k).unwrap();
        let (a, b) = (a % bf.size(), b % bf.size());
        let ext = ExtFieldSpec::canonical(2, k as usize).unwrap();
        let prod = ext.mul(&bf.to_coeffs(a), &bf.to_coeffs(b)).unwrap();
        prop_assert_eq!(bf.mul(a, b), bf.from_coeffs(&prod).unwrap());
    }

    #[test]
    fn vector_bytes_round_trip(p in prop::sample::select(PRIMES.to_vec()), len in 0usize..40, seed in any::<u64>()) {
        let f = FieldSpec::new(p).unwrap();
        let coeffs: Vec<u32> = (0..len as u64).map(|i| (seed.wrapping_mul(i + 7) >> 7) as u32 % p).collect();
        let v = FpVector::new(f, coeffs).unwrap();
        let mut bytes = v.to_bytes();
        bytes.extend_from_slice(&[9, 9]);
        let (back, used) = FpVector::from_bytes(f, &bytes).unwrap();
        prop_assert_eq!(back, v);
        prop_assert_eq!(used, bytes.len() - 2);
    }

    #[test]
    fn vector_index_round_trip(p in prop::sample::select(vec![2u32, 3, 5, 7]), n in 1usize..8, idx in any::<u64>()) {
        let f = FieldSpec::new(p).unwrap();
        let count = (p as u64).pow(n as u32);
        let v = FpVector::from_index(f, n, idx % count);
        prop_assert_eq!(v.index(), idx % count);
    }
}

/// Irreducible iff no root in F_p, valid for degrees 2 and 3.
fn has_root(p: u32, f: &[u32]) -> bool {
    (0..p).any(|x| f.iter().rev().fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64) == 0)
}

#[test]
fn canonical_irreducibles_are_smallest_rootless_at_low_degree() {
    for p in [2u32, 3, 5, 7, 11] {
        for k in [2usize, 3] {
            let f = find_irreducible(p, k).unwrap();
            assert!(!has_root(p, &f));
            // every smaller monic candidate, constant term compared first, has a root
            let total = (p as u64).pow(k as u32);
            let mut candidates: Vec<Vec<u32>> = (0..total)
                .map(|i| {
                    let mut c: Vec<u32> = (0..k).map(|j| ((i / (p as u64).pow(j as u32)) % p as u64) as u32).collect();
                    c.push(1);
                    c
                })
                .collect();
            candidates.sort();
            let first = candidates.into_iter().find(|c| !has_root(p, c)).unwrap();
            assert_eq!(f, first, "p={p} k={k}");
            let field = FieldSpec::new(p).unwrap();
            assert!(is_irreducible(field, &f).unwrap());
        }
    }
}
