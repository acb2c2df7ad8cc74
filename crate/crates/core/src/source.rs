//! Classical sources: exact joint distributions of a secret `x` and the
//! adversary's side information `e`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_budget, domain, Result};
use crate::scalar::{ratio, Exact};

/// Largest joint support stored densely.
pub const SOURCE_LIMIT: u128 = 1 << 24;

/// Joint pmf `P(x, e) = weights[x·e_count + e] / total`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Source {
    x_count: u64,
    e_count: u64,
    weights: Vec<u64>,
    total: u64,
}

impl Source {
    pub fn from_weights(x_count: u64, e_count: u64, weights: Vec<u64>) -> Result<Source> {
        check_budget(x_count as u128 * e_count as u128, SOURCE_LIMIT)?;
        if weights.len() as u128 != x_count as u128 * e_count as u128 {
            return domain(format!("expected {} weights, got {}", x_count * e_count, weights.len()));
        }
        let total = weights.iter().try_fold(0u64, |acc, &w| acc.checked_add(w));
        match total {
            Some(0) => domain("source has empty support"),
            Some(total) => Ok(Source { x_count, e_count, weights, total }),
            None => domain("source weights overflow"),
        }
    }

    /// `x` uniform on `[0, x_count)`, no side information.
    pub fn uniform(x_count: u64) -> Result<Source> {
        Source::from_weights(x_count, 1, vec![1; x_count as usize])
    }

    /// Point mass at `x0`.
    pub fn constant(x_count: u64, x0: u64) -> Result<Source> {
        if x0 >= x_count {
            return domain(format!("constant value {x0} outside [0, {x_count})"));
        }
        let mut w = vec![0; x_count as usize];
        w[x0 as usize] = 1;
        Source::from_weights(x_count, 1, w)
    }

    /// Uniform over the first `size` values.
    pub fn prefix(x_count: u64, size: u64) -> Result<Source> {
        Source::subset(x_count, &(0..size).collect::<Vec<_>>())
    }

    /// Uniform over `support`.
    pub fn subset(x_count: u64, support: &[u64]) -> Result<Source> {
        let mut w = vec![0; x_count as usize];
        for &x in support {
            if x >= x_count {
                return domain(format!("support value {x} outside [0, {x_count})"));
            }
            w[x as usize] = 1;
        }
        Source::from_weights(x_count, 1, w)
    }

    /// Same `x` marginal, with `e = leak(x)` revealed to the adversary.
    pub fn with_leak(&self, e_count: u64, leak: impl Fn(u64) -> u64) -> Result<Source> {
        let mut w = vec![0; (self.x_count * e_count) as usize];
        for x in 0..self.x_count {
            let e = leak(x);
            if e >= e_count {
                return domain(format!("leak value {e} outside [0, {e_count})"));
            }
            w[(x * e_count + e) as usize] = self.x_weight(x);
        }
        Source::from_weights(self.x_count, e_count, w)
    }

    /// Parses lines `x,e,prob` (prob as `a/b`, integer, or decimal); blank
    /// lines and `#` comments are skipped. Probabilities must sum to 1.
    pub fn parse_pmf(text: &str, x_count: u64) -> Result<Source> {
        let mut entries = Vec::new();
        let mut e_count = 1u64;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return domain(format!("line {}: expected x,e,prob", lineno + 1));
            }
            let x: u64 = parts[0].parse().map_err(|_| bad_line(lineno, "x"))?;
            let e: u64 = parts[1].parse().map_err(|_| bad_line(lineno, "e"))?;
            let prob = parse_prob(parts[2]).ok_or_else(|| bad_line(lineno, "prob"))?;
            if x >= x_count {
                return domain(format!("line {}: x = {x} outside [0, {x_count})", lineno + 1));
            }
            e_count = e_count.max(e + 1);
            entries.push((x, e, prob));
        }
        let sum: Exact = entries.iter().map(|t| t.2.clone()).sum();
        if sum != ratio(1, 1) {
            return domain(format!("probabilities sum to {sum}, not 1"));
        }
        let lcm = entries.iter().fold(BigInt::from(1), |acc, t| acc.lcm(t.2.denom()));
        if lcm.to_u64().is_none() {
            return domain("pmf denominators too large");
        }
        check_budget(x_count as u128 * e_count as u128, SOURCE_LIMIT)?;
        let mut w = vec![0u64; (x_count * e_count) as usize];
        for (x, e, prob) in entries {
            let scaled = (prob * Exact::from_integer(lcm.clone())).to_integer();
            w[(x * e_count + e) as usize] += scaled.to_u64().unwrap_or(0);
        }
        Source::from_weights(x_count, e_count, w)
    }

    pub fn x_count(&self) -> u64 {
        self.x_count
    }

    pub fn e_count(&self) -> u64 {
        self.e_count
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn weight(&self, x: u64, e: u64) -> u64 {
        self.weights[(x * self.e_count + e) as usize]
    }

    pub fn x_weight(&self, x: u64) -> u64 {
        (0..self.e_count).map(|e| self.weight(x, e)).sum()
    }

    pub fn prob(&self, x: u64, e: u64) -> Exact {
        ratio(self.weight(x, e) as u128, self.total as u128)
    }

    /// Nonzero atoms `(x, e, weight)`.
    pub fn atoms(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        self.weights.iter().enumerate().filter(|(_, &w)| w > 0).map(move |(i, &w)| {
            let i = i as u64;
            (i / self.e_count, i % self.e_count, w)
        })
    }

    /// `Σ_e max_x P(x, e)`, the optimal probability of guessing `x` from `e`.
    pub fn guessing_probability(&self) -> Exact {
        let best: u64 = (0..self.e_count)
            .map(|e| (0..self.x_count).map(|x| self.weight(x, e)).max().unwrap_or(0))
            .sum();
        ratio(best as u128, self.total as u128)
    }

    /// `-log2` of [`Source::guessing_probability`].
    pub fn min_entropy(&self) -> f64 {
        -crate::scalar::to_f64(&self.guessing_probability()).log2()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (u64, u64) {
        let dist = WeightedIndex::new(&self.weights).expect("validated weights");
        let i = dist.sample(rng) as u64;
        (i / self.e_count, i % self.e_count)
    }

    pub fn is_zero_at(&self, x: u64) -> bool {
        self.x_weight(x).is_zero()
    }
}

fn bad_line(lineno: usize, field: &str) -> crate::Error {
    crate::Error::Domain(format!("line {}: cannot parse {field}", lineno + 1))
}

fn parse_prob(s: &str) -> Option<Exact> {
    if let Some((a, b)) = s.split_once('/') {
        let (a, b): (u128, u128) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (b != 0).then(|| ratio(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        let scale = 10u128.checked_pow(digits)?;
        let int: u128 = if int.is_empty() { 0 } else { int.parse().ok()? };
        let frac: u128 = frac.parse().ok()?;
        return Some(ratio(int * scale + frac, scale));
    }
    s.parse::<u128>().ok().map(|v| ratio(v, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guessing() {
        let u = Source::uniform(4).unwrap();
        assert_eq!(u.guessing_probability(), ratio(1, 4));
        assert_eq!(u.min_entropy(), 2.0);
        let parity = u.with_leak(2, |x| x % 2).unwrap();
        assert_eq!(parity.guessing_probability(), ratio(1, 2));
        let copy = u.with_leak(4, |x| x).unwrap();
        assert_eq!(copy.guessing_probability(), ratio(1, 1));
        assert_eq!(Source::constant(9, 4).unwrap().guessing_probability(), ratio(1, 1));
    }

    #[test]
    fn pmf_file() {
        let s = Source::parse_pmf("# x,e,p\n0,0,1/2\n1,1,0.25\n2, 1, 1/4\n", 3).unwrap();
        assert_eq!(s.e_count(), 2);
        assert_eq!(s.prob(0, 0), ratio(1, 2));
        assert_eq!(s.prob(2, 1), ratio(1, 4));
        assert_eq!(s.guessing_probability(), ratio(3, 4));
        assert!(Source::parse_pmf("0,0,1/2\n", 3).is_err());
        assert!(Source::parse_pmf("5,0,1\n", 3).is_err());
        assert!(Source::parse_pmf("0,0\n", 3).is_err());
    }

    #[test]
    fn sampling_respects_support() {
        use rand::SeedableRng;
        let s = Source::subset(9, &[1, 4, 7]).unwrap();
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(1);
        for _ in 0..200 {
            let (x, e) = s.sample(&mut rng);
            assert!([1, 4, 7].contains(&x) && e == 0);
        }
    }
}
