//! Segmented sieve of Eratosthenes.

use cf_core::error::{Error, Result};

/// Largest sieve bound accepted by [`first_primes`].
pub const DEFAULT_CAPACITY: u64 = 1 << 34;

const SEGMENT: usize = 1 << 16;

/// p_n ≤ n(ln n + ln ln n) for n ≥ 6.
pub fn nth_prime_upper_bound(n: usize) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64
}

fn small_primes(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// The first `n` primes.
pub fn first_primes(n: usize) -> Result<Vec<u64>> {
    first_primes_with_capacity(n, DEFAULT_CAPACITY)
}

pub fn first_primes_with_capacity(n: usize, capacity: u64) -> Result<Vec<u64>> {
    let bound = nth_prime_upper_bound(n);
    if bound > capacity {
        return Err(Error::Resource { what: format!("sieve for the first {n} primes"), required: bound });
    }
    let base = small_primes((bound as f64).sqrt() as usize + 1);
    let mut out = Vec::with_capacity(n);
    let mut mark = vec![false; SEGMENT];
    let mut lo = 2u64;
    while out.len() < n && lo <= bound {
        let hi = (lo + SEGMENT as u64).min(bound + 1);
        let len = (hi - lo) as usize;
        mark[..len].iter_mut().for_each(|m| *m = false);
        for &p in &base {
            if p * p >= hi {
                break;
            }
            let mut start = (lo.div_ceil(p) * p).max(p * p);
            while start < hi {
                mark[(start - lo) as usize] = true;
                start += p;
            }
        }
        for (i, m) in mark[..len].iter().enumerate() {
            if !m {
                out.push(lo + i as u64);
                if out.len() == n {
                    break;
                }
            }
        }
        lo = hi;
    }
    Ok(out)
}
