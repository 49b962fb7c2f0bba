use rayon::prelude::*;

use super::{BlockSieve, SieveError};

/// Exact Mertens values M(stride·(i+1)) for every full stride up to `limit`.
///
/// Values between checkpoints are recovered by re-sieving at most one
/// stride. `block_size` records the segment length used to build the table;
/// it is not persisted and takes no part in equality.
#[derive(Debug, Clone)]
pub struct MertensTable {
    limit: u64,
    stride: u64,
    block_size: u64,
    checkpoints: Vec<i64>,
}

impl PartialEq for MertensTable {
    fn eq(&self, other: &Self) -> bool {
        self.limit == other.limit && self.stride == other.stride && self.checkpoints == other.checkpoints
    }
}

impl Eq for MertensTable {}

impl MertensTable {
    /// Assemble a table from raw parts, checking the length invariant.
    pub fn from_parts(limit: u64, stride: u64, block_size: u64, checkpoints: Vec<i64>) -> Result<Self, SieveError> {
        if limit == 0 || stride == 0 || block_size == 0 {
            return Err(SieveError::Zero);
        }
        if stride > limit {
            return Err(SieveError::StrideExceedsLimit { stride, limit });
        }
        if checkpoints.len() as u64 != limit / stride {
            return Err(SieveError::OutOfRange { x: checkpoints.len() as f64, max: (limit / stride) as f64 });
        }
        Ok(Self { limit, stride, block_size, checkpoints })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn stride(&self) -> u64 {
        self.stride
    }

    pub fn block_size(&self) -> u64 {
        self.block_size
    }

    pub fn checkpoints(&self) -> &[i64] {
        &self.checkpoints
    }

    /// Largest integer n for which `mertens_int(n)` is available.
    pub fn max_resolvable(&self) -> u64 {
        self.limit + self.stride - 1
    }

    fn sieve(&self) -> BlockSieve {
        BlockSieve::new(self.max_resolvable(), self.block_size)
    }

    /// M(n) = Σ_{k ≤ n} μ(k), with M(0) = 0.
    pub fn mertens_int(&self, n: u64) -> Result<i64, SieveError> {
        self.check_int(n)?;
        let (base, from) = self.nearest_checkpoint(n);
        Ok(base + self.sieve().mobius_sum(from, n)?)
    }

    /// M(x) = Σ_{1 ≤ k < x} μ(k) for real x ≥ 1; integer x excludes μ(x).
    pub fn mertens_at(&self, x: f64) -> Result<i64, SieveError> {
        let max = (self.limit + self.stride) as f64;
        if !(x >= 1.0) || x > max {
            return Err(SieveError::OutOfRange { x, max });
        }
        // largest integer strictly below x
        let below = x.ceil() as u64 - 1;
        self.mertens_int(below)
    }

    /// M(lo), ..., M(hi) from one checkpoint lookup and a forward sieve.
    pub fn mertens_range(&self, lo: u64, hi: u64) -> Result<Vec<i64>, SieveError> {
        if lo > hi {
            return Ok(Vec::new());
        }
        self.check_int(hi)?;
        let sieve = self.sieve();
        let mut running = self.mertens_int(lo)?;
        let mut out = Vec::with_capacity((hi - lo + 1) as usize);
        out.push(running);
        let mut buf = Vec::new();
        let mut start = lo + 1;
        while start <= hi {
            let end = hi.min(start + sieve.max_block() - 1);
            sieve.fill(start, end, &mut buf)?;
            for &mu in &buf {
                running += mu as i64;
                out.push(running);
            }
            start = end + 1;
        }
        Ok(out)
    }

    /// μ(1), ..., μ(hi) with hi bounded by the table's resolvable range.
    pub fn mobius_prefix(&self, hi: u64) -> Result<Vec<i8>, SieveError> {
        self.check_int(hi)?;
        let sieve = self.sieve();
        let mut out = Vec::with_capacity(hi as usize);
        let mut buf = Vec::new();
        let mut start = 1;
        while start <= hi {
            let end = hi.min(start + sieve.max_block() - 1);
            sieve.fill(start, end, &mut buf)?;
            out.extend_from_slice(&buf);
            start = end + 1;
        }
        Ok(out)
    }

    fn check_int(&self, n: u64) -> Result<(), SieveError> {
        if n > self.max_resolvable() {
            return Err(SieveError::OutOfRange { x: n as f64, max: self.max_resolvable() as f64 });
        }
        Ok(())
    }

    /// (M at the last checkpoint ≤ n, first index after it).
    fn nearest_checkpoint(&self, n: u64) -> (i64, u64) {
        let i = ((n / self.stride) as usize).min(self.checkpoints.len());
        if i == 0 {
            (0, 1)
        } else {
            (self.checkpoints[i - 1], i as u64 * self.stride + 1)
        }
    }
}

/// Build a [`MertensTable`] by sieving `[1, limit]` in blocks.
///
/// Blocks are sieved concurrently on the rayon pool; the carry between
/// blocks is folded sequentially in index order, so the result does not
/// depend on thread count or `block_size`.
pub fn mertens_scan(limit: u64, stride: u64, block_size: u64) -> Result<MertensTable, SieveError> {
    if limit == 0 || stride == 0 || block_size == 0 {
        return Err(SieveError::Zero);
    }
    if stride > limit {
        return Err(SieveError::StrideExceedsLimit { stride, limit });
    }
    let sieve = BlockSieve::new(limit + stride - 1, block_size);
    let blocks = limit.div_ceil(block_size);

    // per block: (checkpoint index, partial sum up to it) marks and the block total
    type Partial = (Vec<(u64, i64)>, i64);
    let partials: Vec<Result<Partial, SieveError>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * block_size + 1;
            let hi = limit.min(lo + block_size - 1);
            let mu = sieve.block(lo, hi)?;
            let mut sum = 0i64;
            let mut marks = Vec::new();
            for (j, &v) in mu.iter().enumerate() {
                sum += v as i64;
                let n = lo + j as u64;
                if n.is_multiple_of(stride) {
                    marks.push((n, sum));
                }
            }
            Ok((marks, sum))
        })
        .collect();

    let mut checkpoints = Vec::with_capacity((limit / stride) as usize);
    let mut carry = 0i64;
    for part in partials {
        let (marks, sum) = part?;
        for (n, local) in marks {
            checkpoints.push(carry.checked_add(local).ok_or(SieveError::Overflow { n })?);
        }
        carry = carry.checked_add(sum).ok_or(SieveError::Overflow { n: limit })?;
    }
    MertensTable::from_parts(limit, stride, block_size, checkpoints)
}
