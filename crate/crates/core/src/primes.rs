//! Prime sieving.

use crate::{Error, Result};

/// Ascending table of all primes up to `limit`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    pub limit: u64,
    pub primes: Vec<u64>,
}

/// Sieve of Eratosthenes over the odd integers, bit-packed.
///
/// Memory is `limit/16` bytes, so a `limit` of `1e8` costs ~6 MB.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::EmptyRange(format!(
            "prime sieve needs limit >= 2, got {limit}"
        )));
    }
    let primes = collect_primes(limit);
    Ok(PrimeTable { limit, primes })
}

fn collect_primes(limit: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    for_each_prime(limit, |p| primes.push(p));
    primes
}

/// Call `f` on every prime `<= limit` in ascending order without
/// materializing the prime list.
pub fn for_each_prime<F: FnMut(u64)>(limit: u64, mut f: F) {
    if limit < 2 {
        return;
    }
    f(2);
    if limit < 3 {
        return;
    }
    // bit i represents the odd number 2i+1; index 0 (the number 1) stays unset
    let n_odd = ((limit - 1) / 2) as usize + 1;
    let mut composite = vec![0u64; n_odd / 64 + 1];
    let is_set = |v: &[u64], i: usize| v[i / 64] >> (i % 64) & 1 == 1;
    let mut p = 3u64;
    while p * p <= limit {
        let i = ((p - 1) / 2) as usize;
        if !is_set(&composite, i) {
            let mut m = p * p;
            while m <= limit {
                let j = ((m - 1) / 2) as usize;
                composite[j / 64] |= 1 << (j % 64);
                m += 2 * p;
            }
        }
        p += 2;
    }
    let mut q = 3u64;
    while q <= limit {
        let i = ((q - 1) / 2) as usize;
        if !is_set(&composite, i) {
            f(q);
        }
        q += 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_to_ten() {
        let t = sieve_primes(10).unwrap();
        assert_eq!(t.primes, vec![2, 3, 5, 7]);
    }

    #[test]
    fn smallest_case() {
        let t = sieve_primes(2).unwrap();
        assert_eq!(t.primes, vec![2]);
    }

    #[test]
    fn rejects_empty_range() {
        assert!(matches!(sieve_primes(1), Err(Error::EmptyRange(_))));
    }

    /// Independent oracle: a segmented sieve with a different memory layout.
    fn segmented_count(limit: u64) -> u64 {
        let root = (limit as f64).sqrt() as u64 + 1;
        let small = collect_primes(root);
        let seg_len = 1u64 << 16;
        let mut count = 0u64;
        let mut lo = 2u64;
        while lo <= limit {
            let hi = (lo + seg_len - 1).min(limit);
            let mut flags = vec![true; (hi - lo + 1) as usize];
            for &p in &small {
                if p * p > hi {
                    break;
                }
                let mut m = (lo.div_ceil(p) * p).max(p * p);
                while m <= hi {
                    flags[(m - lo) as usize] = false;
                    m += p;
                }
            }
            for (i, &ok) in flags.iter().enumerate() {
                let n = lo + i as u64;
                if ok && n >= 2 {
                    count += 1;
                }
            }
            lo = hi + 1;
        }
        count
    }

    #[test]
    fn pi_of_one_million() {
        let t = sieve_primes(1_000_000).unwrap();
        assert_eq!(t.primes.len() as u64, segmented_count(1_000_000));
        assert_eq!(t.primes.len(), 78_498);
    }
}
