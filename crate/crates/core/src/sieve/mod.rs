//! Möbius and ω by trial division and by block-segmented sieving.
//!
//! The trial-division routines ([`mobius_naive`], [`omega`]) are slow but
//! obviously correct; they are the oracle the segmented sieve is checked
//! against. [`BlockSieve`] evaluates μ over a contiguous range using the
//! primes up to the square root of its upper end.

mod persist;
mod table;

pub use persist::{load_table, read_table, save_table, write_table, TableFormatError, MAGIC};
pub use table::{mertens_scan, MertensTable};

use thiserror::Error;

/// Default upper bound on the length of one sieve segment.
pub const DEFAULT_BLOCK_SIZE: u64 = 1 << 22;

/// Default distance between stored checkpoints.
pub const DEFAULT_STRIDE: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SieveError {
    #[error("argument must be a positive integer (got 0)")]
    Zero,
    #[error("empty range: lo = {lo}, hi = {hi}")]
    EmptyRange { lo: u64, hi: u64 },
    #[error("block of length {len} exceeds the block size limit {max}")]
    BlockTooLarge { len: u64, max: u64 },
    #[error("stride {stride} exceeds limit {limit}")]
    StrideExceedsLimit { stride: u64, limit: u64 },
    #[error("Mertens checkpoint overflowed a signed 64-bit integer at n = {n}")]
    Overflow { n: u64 },
    #[error("argument {x} is outside the range resolvable from the table (max {max})")]
    OutOfRange { x: f64, max: f64 },
}

/// μ(n) by trial-division factorization.
pub fn mobius_naive(n: u64) -> Result<i8, SieveError> {
    if n == 0 {
        return Err(SieveError::Zero);
    }
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p <= m / p {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return Ok(0);
            }
            sign = -sign;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// Number of distinct prime divisors of `n`.
pub fn omega(n: u64) -> Result<u32, SieveError> {
    if n == 0 {
        return Err(SieveError::Zero);
    }
    let mut m = n;
    let mut count = 0;
    let mut p = 2u64;
    while p <= m / p {
        if m.is_multiple_of(p) {
            count += 1;
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        count += 1;
    }
    Ok(count)
}

/// All primes `<= bound`, from an odd-only sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    // index i stands for the odd number 2i + 1
    let half = ((bound - 1) / 2 + 1) as usize;
    let mut composite = vec![false; half];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= bound as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = vec![2];
    primes.extend((1..half).filter(|&i| !composite[i]).map(|i| 2 * i as u64 + 1));
    primes
}

/// Integer square root (floor).
pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Segmented Möbius sieve with a fixed set of sieving primes.
///
/// Holds the primes up to `isqrt(bound)`; any range with upper end at most
/// `bound` can be evaluated. Safe to share between threads.
#[derive(Debug, Clone)]
pub struct BlockSieve {
    bound: u64,
    max_block: u64,
    primes: Vec<u64>,
}

impl BlockSieve {
    pub fn new(bound: u64, max_block: u64) -> Self {
        Self { bound, max_block: max_block.max(1), primes: primes_up_to(isqrt(bound)) }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn max_block(&self) -> u64 {
        self.max_block
    }

    /// μ(lo), ..., μ(hi).
    pub fn block(&self, lo: u64, hi: u64) -> Result<Vec<i8>, SieveError> {
        let mut out = Vec::new();
        self.fill(lo, hi, &mut out)?;
        Ok(out)
    }

    /// Like [`BlockSieve::block`], reusing the allocation in `out`.
    pub fn fill(&self, lo: u64, hi: u64, out: &mut Vec<i8>) -> Result<(), SieveError> {
        if lo == 0 {
            return Err(SieveError::Zero);
        }
        if lo > hi {
            return Err(SieveError::EmptyRange { lo, hi });
        }
        let len = hi - lo + 1;
        if len > self.max_block {
            return Err(SieveError::BlockTooLarge { len, max: self.max_block });
        }
        if hi > self.bound {
            return Err(SieveError::OutOfRange { x: hi as f64, max: self.bound as f64 });
        }
        let len = len as usize;
        out.clear();
        out.resize(len, 1);
        // product of the distinct sieving primes found so far; a leftover
        // cofactor > 1 is a single prime above sqrt(hi)
        let mut product = vec![1u64; len];
        for &p in &self.primes {
            if p > hi / p {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            while m <= hi {
                let j = (m - lo) as usize;
                out[j] = -out[j];
                product[j] *= p;
                m += p;
            }
            let sq = p * p;
            let mut m = lo.div_ceil(sq) * sq;
            while m <= hi {
                out[(m - lo) as usize] = 0;
                m += sq;
            }
        }
        for (j, (mu, prod)) in out.iter_mut().zip(&product).enumerate() {
            if *mu != 0 && *prod != lo + j as u64 {
                *mu = -*mu;
            }
        }
        Ok(())
    }

    /// Σ μ(k) for lo ≤ k ≤ hi, chunked to respect the block limit.
    pub fn mobius_sum(&self, lo: u64, hi: u64) -> Result<i64, SieveError> {
        if lo > hi {
            return Ok(0);
        }
        let mut total = 0i64;
        let mut buf = Vec::new();
        let mut start = lo;
        loop {
            let end = hi.min(start.saturating_add(self.max_block - 1));
            self.fill(start, end, &mut buf)?;
            total += buf.iter().map(|&v| v as i64).sum::<i64>();
            if end == hi {
                break;
            }
            start = end + 1;
        }
        Ok(total)
    }
}

/// μ(lo), ..., μ(hi) by segmented sieving, with the default block limit.
pub fn mobius_block(lo: u64, hi: u64) -> Result<Vec<i8>, SieveError> {
    mobius_block_with_limit(lo, hi, DEFAULT_BLOCK_SIZE)
}

/// [`mobius_block`] with an explicit limit on `hi - lo + 1`.
pub fn mobius_block_with_limit(lo: u64, hi: u64, max_block: u64) -> Result<Vec<i8>, SieveError> {
    if lo == 0 {
        return Err(SieveError::Zero);
    }
    if lo > hi {
        return Err(SieveError::EmptyRange { lo, hi });
    }
    BlockSieve::new(hi, max_block).block(lo, hi)
}
