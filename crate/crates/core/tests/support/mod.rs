//! Test-only reference implementations. Nothing here calls into the field
//! module of the library.
#![allow(dead_code)]

use std::collections::HashMap;

/// Smallest monic of degree `k ≤ 3` without a root, constant term compared first.
pub fn rootless_modulus(p: u64, k: usize) -> Vec<u64> {
    let mut cands: Vec<Vec<u64>> = (0..p.pow(k as u32))
        .map(|i| {
            let mut c: Vec<u64> = (0..k).map(|j| i / p.pow(j as u32) % p).collect();
            c.push(1);
            c
        })
        .collect();
    cands.sort();
    if k == 1 {
        return cands.remove(0);
    }
    assert!(k <= 3, "root test only decides irreducibility up to degree 3");
    cands
        .into_iter()
        .find(|c| (0..p).all(|x| c.iter().rev().fold(0, |acc, &v| (acc * x + v) % p) != 0))
        .unwrap()
}

pub fn digits(mut v: u64, p: u64, len: usize) -> Vec<u64> {
    (0..len).map(|_| { let d = v % p; v /= p; d }).collect()
}

/// `y²` in `F_p[t]/(f)` by schoolbook multiplication and long division.
pub fn square_mod(y: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let k = f.len() - 1;
    let mut prod = vec![0u64; 2 * k];
    for i in 0..k {
        for j in 0..k {
            prod[i + j] = (prod[i + j] + y[i] * y[j]) % p;
        }
    }
    for d in (k..2 * k).rev() {
        let lead = prod[d];
        prod[d] = 0;
        for i in 0..k {
            prod[d - k + i] = (prod[d - k + i] + (p - lead) * f[i] % p) % p;
        }
    }
    prod.truncate(k);
    prod
}

/// `y ‖ y²` for every seed index.
pub fn encodings(p: u64, n: usize) -> Vec<Vec<u64>> {
    let k = n / 2;
    let f = rootless_modulus(p, k);
    (0..p.pow(k as u32))
        .map(|y| {
            let yv = digits(y, p, k);
            let sq = square_mod(&yv, &f, p);
            yv.into_iter().chain(sq).collect()
        })
        .collect()
}

pub fn nmext(p: u64, n: usize, x: u64, y: u64) -> u64 {
    let enc = &encodings(p, n)[y as usize];
    digits(x, p, n).iter().zip(enc).map(|(a, b)| a * b).sum::<u64>() % p
}

pub fn g_a_max_preimages(p: u64, n: usize, a: u64) -> usize {
    let enc = encodings(p, n);
    let mut counts: HashMap<Vec<u64>, usize> = HashMap::new();
    for (i, u) in enc.iter().enumerate() {
        for (j, v) in enc.iter().enumerate() {
            if i != j {
                let z: Vec<u64> = u.iter().zip(v).map(|(s, t)| (s + a * t) % p).collect();
                *counts.entry(z).or_default() += 1;
            }
        }
    }
    counts.into_values().max().unwrap()
}

/// `GF(2^t)` product with the rootless canonical modulus (`t ≤ 3`).
pub fn gf2_mul(a: u64, b: u64, t: usize) -> u64 {
    let f = rootless_modulus(2, t);
    let modulus = f.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | c << i);
    let mut prod = 0u64;
    for i in 0..t {
        if b >> i & 1 == 1 {
            prod ^= a << i;
        }
    }
    for d in (t..2 * t).rev() {
        if prod >> d & 1 == 1 {
            prod ^= modulus << (d - t);
        }
    }
    prod
}

/// `k2 + Σ_{i=1}^{L} m_i k1^i`, block `i` stored at bits `[(i-1)t, it)`.
pub fn poly_mac(t: usize, blocks: usize, k1: u64, k2: u64, m: u64) -> u64 {
    let mask = (1u64 << t) - 1;
    let mut pow = k1;
    let mut acc = k2;
    for i in 0..blocks {
        acc ^= gf2_mul((m >> (i * t)) & mask, pow, t);
        pow = gf2_mul(pow, k1, t);
    }
    acc
}

/// Best forgery probability over uniform keys: for the observed message,
/// the forger answers each tag with the `(m', σ')` most keys agree on.
pub fn mac_advantage(t: usize, blocks: usize) -> (u64, u64) {
    let q = 1u64 << t;
    let msgs = 1u64 << (t * blocks);
    let tags: Vec<Vec<u64>> = (0..q * q)
        .map(|k| (0..msgs).map(|m| poly_mac(t, blocks, k % q, k / q, m)).collect())
        .collect();
    let mut best = 0;
    for m in 0..msgs as usize {
        // counts[(s, m', s')]
        let mut counts = vec![0u64; (q * msgs * q) as usize];
        for row in &tags {
            let s = row[m] as usize;
            for (mp, &sp) in row.iter().enumerate() {
                if mp != m {
                    counts[(s * msgs as usize + mp) * q as usize + sp as usize] += 1;
                }
            }
        }
        let per_tag = counts.chunks((msgs * q) as usize).map(|c| *c.iter().max().unwrap());
        best = best.max(per_tag.sum());
    }
    (best, q * q)
}

/// Win probability of the guessing game for a uniform source, found by
/// trying every deterministic strategy `y → (y', b)` for each leak value.
pub fn game_win_uniform(p: u64, n: usize, a: u64, leak: &[usize], e_count: usize) -> (u64, u64) {
    let enc = encodings(p, n);
    let d_y = enc.len();
    let d_x = p.pow(n as u32) as usize;
    let xs: Vec<Vec<u64>> = (0..d_x as u64).map(|x| digits(x, p, n)).collect();
    let choices = (d_y - 1) * p as usize;
    let mut total = 0;
    for e in 0..e_count {
        let mut best = 0;
        for code in 0..choices.pow(d_y as u32) {
            let mut wins = 0;
            for y in 0..d_y {
                let c = code / choices.pow(y as u32) % choices;
                let mut y2 = c / p as usize;
                if y2 >= y {
                    y2 += 1;
                }
                let b = (c % p as usize) as u64;
                let g: Vec<u64> = enc[y].iter().zip(&enc[y2]).map(|(u, v)| (u + a * v) % p).collect();
                wins += (0..d_x)
                    .filter(|&x| leak[x] == e && xs[x].iter().zip(&g).map(|(s, t)| s * t).sum::<u64>() % p == b)
                    .count() as u64;
            }
            best = best.max(wins);
        }
        total += best;
    }
    (total, (d_y * d_x) as u64)
}
