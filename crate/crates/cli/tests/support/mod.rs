//! Hand-coded reference for Protocol DW at p = 3, n = 2, d2 = 2, t = 2,
//! m = 2, written against the construction directly: F_3 arithmetic for the
//! extractor, GF(4) = F_2[x]/(x² + x + 1) for the MAC and strong extractor.

#![allow(dead_code)]

pub const XS: u64 = 9;
pub const YAS: u64 = 3;
pub const YBS: u64 = 4;
pub const TAGS: u64 = 4;

pub fn gf4_mul(a: u64, b: u64) -> u64 {
    let mut r = 0;
    for i in 0..2 {
        if (b >> i) & 1 == 1 {
            r ^= a << i;
        }
    }
    if r & 0b100 != 0 {
        r ^= 0b111;
    }
    r
}

/// `⟨(x0, x1), (y, y²)⟩` over F_3 with `x = x0 + 3·x1`.
pub fn z(x: u64, ya: u64) -> u64 {
    (x % 3 * ya + x / 3 * (ya * ya % 3)) % 3
}

/// MAC key from `z ∈ F_3`: `k1 = z mod 4`, `k2 = z div 4 = 0`; tag `k2 + yb·k1`.
pub fn tag(z: u64, yb: u64) -> u64 {
    gf4_mul(yb, z & 3) ^ (z >> 2)
}

/// `yb·x_lo + x_hi` over GF(4), where `x_lo`, `x_hi` are the two low bit pairs
/// of the source index.
pub fn ext(x: u64, yb: u64) -> u64 {
    gf4_mul(yb, x & 3) ^ ((x >> 2) & 3)
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Counts {
    pub total: u64,
    pub correct: u64,
    pub robustness_failures: u64,
    pub forgeries: u64,
}

/// Uniform source, every `(x, ya, yb, coin)` enumerated. `tamper(ya, yb, w,
/// coin)` returns the delivered `(yb', w')`.
pub fn enumerate(seed_map: &[u64; 3], coins: u64, tamper: impl Fn(u64, u64, u64, u64) -> (u64, u64)) -> Counts {
    let mut c = Counts::default();
    for x in 0..XS {
        for ya in 0..YAS {
            let ya_p = seed_map[ya as usize];
            for yb in 0..YBS {
                let w = tag(z(x, ya_p), yb);
                let r_b = ext(x, yb);
                for coin in 0..coins {
                    c.total += 1;
                    let (yb_p, w_p) = tamper(ya, yb, w, coin);
                    let accept = tag(z(x, ya), yb_p) == w_p;
                    let r_a = accept.then(|| ext(x, yb_p));
                    c.correct += (r_a == Some(r_b)) as u64;
                    c.robustness_failures += matches!(r_a, Some(r) if r != r_b) as u64;
                    c.forgeries += (accept && (yb_p, w_p) != (yb, w)) as u64;
                }
            }
        }
    }
    c
}

/// Best possible robustness failure count for a second-step tamperer that
/// sees `(ya, yb, w)` and knows `seed_map`.
pub fn optimal_failures(seed_map: &[u64; 3]) -> u64 {
    let mut best_total = 0;
    for ya in 0..YAS {
        let ya_p = seed_map[ya as usize];
        for yb in 0..YBS {
            for w in 0..TAGS {
                let consistent: Vec<u64> = (0..XS).filter(|&x| tag(z(x, ya_p), yb) == w).collect();
                let mut best = 0;
                for yb_p in 0..YBS {
                    for w_p in 0..TAGS {
                        let wins = consistent
                            .iter()
                            .filter(|&&x| tag(z(x, ya), yb_p) == w_p && ext(x, yb_p) != ext(x, yb))
                            .count() as u64;
                        best = best.max(wins);
                    }
                }
                best_total += best;
            }
        }
    }
    best_total
}
