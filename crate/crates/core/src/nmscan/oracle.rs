//! Direct-counting distance oracle with its own field arithmetic.
//!
//! Shares nothing with [`crate::field`] beyond the definition of the
//! canonical modulus: the irreducible is found by sieving out all products
//! of lower-degree monics, and the distance is accumulated term by term in
//! exact rationals.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::source::Source;

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    out
}

/// All monic polynomials of degree `deg`, coefficients listed constant first.
fn monics(p: u64, deg: usize) -> Vec<Vec<u64>> {
    let mut all = vec![vec![1u64]];
    for _ in 0..deg {
        all = all
            .into_iter()
            .flat_map(|tail| (0..p).map(move |c| std::iter::once(c).chain(tail.iter().copied()).collect()))
            .collect();
    }
    all
}

/// Lexicographically smallest (constant term first) monic irreducible.
pub fn sieve_irreducible(p: u64, k: usize) -> Vec<u64> {
    let mut reducible = HashSet::new();
    for i in 1..=k / 2 {
        for a in monics(p, i) {
            for b in monics(p, k - i) {
                reducible.insert(poly_mul(&a, &b, p));
            }
        }
    }
    monics(p, k).into_iter().filter(|f| !reducible.contains(f)).min().expect("irreducibles exist in every degree")
}

fn reduce(mut a: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    let k = f.len() - 1;
    while a.len() > k {
        let lead = a.pop().unwrap();
        let shift = a.len() - k;
        for (i, &fi) in f[..k].iter().enumerate() {
            a[shift + i] = (a[shift + i] + (p - lead) * fi) % p;
        }
    }
    a.resize(k, 0);
    a
}

fn base_p(mut v: u64, p: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

/// `nmExt` for every `(x, y)`, row-major in `x`.
pub fn ext_table(p: u64, n: usize) -> Vec<u64> {
    let k = n / 2;
    let f = sieve_irreducible(p, k);
    let d_y = p.pow(k as u32);
    let d_x = p.pow(n as u32);
    let seeds: Vec<Vec<u64>> = (0..d_y)
        .map(|y| {
            let yv = base_p(y, p, k);
            let sq = reduce(poly_mul(&yv, &yv, p), &f, p);
            yv.into_iter().chain(sq).collect()
        })
        .collect();
    let mut out = Vec::with_capacity((d_x * d_y) as usize);
    for x in 0..d_x {
        let xv = base_p(x, p, n);
        for s in &seeds {
            out.push(xv.iter().zip(s).map(|(a, b)| a * b).sum::<u64>() % p);
        }
    }
    out
}

/// `½‖σ_{ZZ'YY'E} − U_Z ⊗ σ_{Z'YY'E}‖₁` for the strategy `f[e][y] = y'`.
pub fn oracle_distance(p: u64, n: usize, table: &[u64], source: &Source, f: &[Vec<usize>]) -> BigRational {
    let d_y = p.pow(n as u32 / 2) as usize;
    let d_x = p.pow(n as u32) as usize;
    let norm = BigInt::from(source.total()) * BigInt::from(d_y);
    let mut acc = BigRational::zero();
    for (e, fe) in f.iter().enumerate() {
        for y in 0..d_y {
            let y2 = fe[y];
            assert_ne!(y2, y, "strategy has a fixed point");
            for z2 in 0..p {
                let mut joint = vec![0u64; p as usize];
                for x in 0..d_x {
                    if table[x * d_y + y2] == z2 {
                        joint[table[x * d_y + y] as usize] += source.weight(x as u64, e as u64);
                    }
                }
                let marg: u64 = joint.iter().sum();
                for j in joint {
                    let diff = BigRational::new(BigInt::from(j), norm.clone())
                        - BigRational::new(BigInt::from(marg), norm.clone() * BigInt::from(p));
                    acc += if diff < BigRational::zero() { -diff } else { diff };
                }
            }
        }
    }
    acc / BigRational::from_integer(BigInt::from(2))
}
