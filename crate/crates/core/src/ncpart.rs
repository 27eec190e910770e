//! Non-crossing partitions, the Kreweras complement and word restriction.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::words::Word;

/// Largest `n` accepted by [`enumerate_nc`]; `|NC(14)| = 2674440`.
pub const MAX_NC: usize = 14;

/// A non-crossing partition of `{1, ..., n}`; blocks sorted internally and
/// ordered by their minimum.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NCPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl NCPartition {
    /// Validates and normalizes a block list.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let p = Self::normalized(n, blocks);
        let mut seen = vec![false; n + 1];
        for &i in p.blocks.iter().flatten() {
            if i == 0 || i > n || seen[i] {
                return Err(Error::Invalid(format!("not a partition of [1..={n}]: {p}")));
            }
            seen[i] = true;
        }
        if seen.iter().skip(1).any(|&b| !b) {
            return Err(Error::Invalid(format!("blocks do not cover [1..={n}]: {p}")));
        }
        if !is_noncrossing(&p.blocks) {
            return Err(Error::Invalid(format!("crossing partition: {p}")));
        }
        Ok(p)
    }

    fn normalized(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        blocks.retain(|b| !b.is_empty());
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        NCPartition { n, blocks }
    }

    /// `{{1}, {2}, ..., {n}}`.
    pub fn discrete(n: usize) -> Self {
        NCPartition {
            n,
            blocks: (1..=n).map(|i| vec![i]).collect(),
        }
    }

    /// `{{1, ..., n}}`.
    pub fn full(n: usize) -> Self {
        NCPartition {
            n,
            blocks: vec![(1..=n).collect()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Restrictions `w|V` of a word of length `n` to every block.
    pub fn restrict_word(&self, w: &Word) -> Result<Vec<Word>> {
        if w.len() != self.n {
            return Err(Error::Mismatch(format!(
                "word of length {} restricted to a partition of [1..={}]",
                w.len(),
                self.n
            )));
        }
        Ok(self
            .blocks
            .iter()
            .map(|b| Word::new(b.iter().map(|&i| w.letters()[i - 1]).collect()))
            .collect())
    }
}

impl fmt::Display for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            f.write_str("{")?;
            for (k, i) in b.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{i}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
///
/// Scans positions left to right keeping a stack of open blocks; a block may
/// only be revisited while it is on top.
pub fn is_noncrossing(blocks: &[Vec<usize>]) -> bool {
    let n = blocks.iter().flatten().copied().max().unwrap_or(0);
    let mut owner = vec![usize::MAX; n + 1];
    let mut last = vec![0; blocks.len()];
    for (k, b) in blocks.iter().enumerate() {
        for &i in b {
            owner[i] = k;
            last[k] = last[k].max(i);
        }
    }
    let mut open = vec![false; blocks.len()];
    let mut stack: Vec<usize> = Vec::new();
    for (i, &k) in owner.iter().enumerate().skip(1) {
        if k == usize::MAX {
            continue;
        }
        if open[k] {
            if stack.last() != Some(&k) {
                return false;
            }
        } else {
            open[k] = true;
            stack.push(k);
        }
        if last[k] == i {
            stack.pop();
        }
    }
    true
}

/// Kreweras complement via the permutation identity `K(π) = π⁻¹ ∘ γ`, where
/// `π` is read as the permutation cycling each block upward and
/// `γ = (1 2 ... n)`.
pub fn kreweras(p: &NCPartition) -> NCPartition {
    let n = p.n;
    let mut pi_inv = vec![0usize; n + 1];
    for b in &p.blocks {
        for (k, &i) in b.iter().enumerate() {
            // π maps b[k] -> b[k+1]; its inverse maps b[k] -> b[k-1]
            let prev = if k == 0 { b[b.len() - 1] } else { b[k - 1] };
            pi_inv[i] = prev;
        }
    }
    let sigma = |i: usize| pi_inv[if i == n { 1 } else { i + 1 }];
    let mut seen = vec![false; n + 1];
    let mut blocks = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = sigma(i);
        }
        blocks.push(cycle);
    }
    NCPartition::normalized(n, blocks)
}

/// All non-crossing partitions of `[n]` in a fixed order, built by choosing
/// the block containing the smallest element and partitioning the gaps it
/// leaves independently.
pub fn enumerate_nc(n: usize) -> Result<Vec<NCPartition>> {
    if n == 0 || n > MAX_NC {
        return Err(Error::OutOfBounds {
            what: "n",
            value: n,
            range: format!("1..={MAX_NC}"),
        });
    }
    Ok(nc_interval(1, n)
        .into_iter()
        .map(|blocks| NCPartition::normalized(n, blocks))
        .collect())
}

/// Non-crossing partitions of the integer interval `[lo, hi]` (empty when `lo > hi`).
fn nc_interval(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    if lo > hi {
        return vec![Vec::new()];
    }
    let rest = hi - lo;
    let mut out = Vec::new();
    for mask in (0..1u64 << rest).rev() {
        let mut block = vec![lo];
        block.extend((0..rest).filter(|&k| mask >> (rest - 1 - k) & 1 == 1).map(|k| lo + 1 + k));
        // gaps between consecutive block elements and after the last one
        let mut gaps = Vec::new();
        for pair in block.windows(2) {
            gaps.push((pair[0] + 1, pair[1] - 1));
        }
        gaps.push((block[block.len() - 1] + 1, hi));
        let mut partial: Vec<Vec<Vec<usize>>> = vec![vec![block]];
        for (a, b) in gaps {
            let fills = nc_interval(a, b);
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    fills.iter().map(move |f| {
                        let mut q = p.clone();
                        q.extend(f.iter().cloned());
                        q
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    out
}

type NcTable = Arc<Vec<(NCPartition, NCPartition)>>;

static NC_CACHE: Lazy<RwLock<HashMap<usize, NcTable>>> = Lazy::new(Default::default);

/// `NC(n)` paired with Kreweras complements, memoized across calls.
pub fn nc_with_kreweras(n: usize) -> Result<NcTable> {
    if let Some(t) = NC_CACHE.read().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let table: NcTable = Arc::new(
        enumerate_nc(n)?
            .into_iter()
            .map(|p| {
                let k = kreweras(&p);
                (p, k)
            })
            .collect(),
    );
    NC_CACHE.write().unwrap().insert(n, table.clone());
    Ok(table)
}

/// Catalan numbers `C_0, ..., C_n` by the convolution recurrence.
pub fn catalan(n: usize) -> u64 {
    let mut c = vec![1u64; n + 1];
    for m in 1..=n {
        c[m] = (0..m).map(|k| c[k] * c[m - 1 - k]).sum();
    }
    c[n]
}
