//! Subset partitions, admissible sign sequences, multi-index boxes and the
//! multiple principal specialization.
//!
//! All enumerations are lazy and yield in lexicographic order.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::elliptic::BracketContext;
use crate::error::{Error, Result};
use crate::num::{Cx, Real};
use crate::operators::gap_two_sequences;

/// Caps on enumeration sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeLimit {
    /// Largest ground set for subset sums.
    pub subset: usize,
    /// Largest weight `|alpha|` for boxes and sign sequences.
    pub weight: usize,
}

impl Default for SizeLimit {
    fn default() -> Self {
        SizeLimit { subset: 12, weight: 10 }
    }
}

impl SizeLimit {
    /// Same cap for both kinds of enumeration.
    pub fn uniform(n: usize) -> Self {
        SizeLimit { subset: n, weight: n }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn new(parts: &[usize]) -> Self {
        MultiIndex(parts.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    /// Shift multiplier: -1, 0, +1.
    pub fn shift(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Zero => 0,
            Sign::Plus => 1,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Zero => '0',
            Sign::Plus => '+',
        }
    }
}

/// A decomposition of `{0..n}` into `I+`, `I0`, `I-` and the complement of
/// `I = I+ u I0 u I-`; `None` marks indices outside `I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignPartition {
    pub signs: Vec<Option<Sign>>,
}

impl SignPartition {
    fn members(&self, s: Sign) -> Vec<usize> {
        self.signs.iter().enumerate().filter(|(_, &t)| t == Some(s)).map(|(i, _)| i).collect()
    }

    pub fn plus(&self) -> Vec<usize> {
        self.members(Sign::Plus)
    }

    pub fn zero(&self) -> Vec<usize> {
        self.members(Sign::Zero)
    }

    pub fn minus(&self) -> Vec<usize> {
        self.members(Sign::Minus)
    }

    /// `|I|`.
    pub fn size(&self) -> usize {
        self.signs.iter().filter(|s| s.is_some()).count()
    }

    /// Shift multiplier of index `i` (0 outside `I`).
    pub fn shift(&self, i: usize) -> i64 {
        self.signs[i].map_or(0, Sign::shift)
    }
}

/// Lazy enumeration of sign partitions of an `n`-set.
pub struct Partitions3 {
    n: usize,
    level: Option<usize>,
    // positions of I (level mode) or 4-ary digits (all mode)
    subset: Vec<usize>,
    digits: Vec<u8>,
    done: bool,
}

const SIGNS: [Sign; 3] = [Sign::Plus, Sign::Zero, Sign::Minus];

/// All partitions with `|I| = r`, or all `4^n` when `r` is `None`.
pub fn enumerate_partitions3(n: usize, r: Option<usize>, limit: SizeLimit) -> Result<Partitions3> {
    if n > limit.subset {
        return Err(Error::SizeLimit { size: n, limit: limit.subset });
    }
    if let Some(r) = r {
        if r > n {
            return Err(Error::BadSize(alloc::format!("level {r} exceeds ground set {n}")));
        }
        Ok(Partitions3 { n, level: Some(r), subset: (0..r).collect(), digits: vec![0; r], done: false })
    } else {
        Ok(Partitions3 { n, level: None, subset: Vec::new(), digits: vec![0; n], done: false })
    }
}

impl Partitions3 {
    fn current(&self) -> SignPartition {
        let mut signs = vec![None; self.n];
        match self.level {
            Some(_) => {
                for (k, &i) in self.subset.iter().enumerate() {
                    signs[i] = Some(SIGNS[self.digits[k] as usize]);
                }
            }
            None => {
                for (i, &d) in self.digits.iter().enumerate() {
                    if d > 0 {
                        signs[i] = Some(SIGNS[d as usize - 1]);
                    }
                }
            }
        }
        SignPartition { signs }
    }

    fn advance(&mut self) {
        let base = if self.level.is_some() { 3 } else { 4 };
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < base {
                return;
            }
            *d = 0;
        }
        if self.level.is_none() {
            self.done = true;
            return;
        }
        // next r-subset in lexicographic order
        let r = self.subset.len();
        let n = self.n;
        let mut i = r;
        while i > 0 {
            i -= 1;
            if self.subset[i] < n - r + i {
                self.subset[i] += 1;
                for j in i + 1..r {
                    self.subset[j] = self.subset[j - 1] + 1;
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Partitions3 {
    type Item = SignPartition;

    fn next(&mut self) -> Option<SignPartition> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

/// Signs over the blocks of a multi-index, flattened block by block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignSequence {
    pub blocks: Vec<usize>,
    pub signs: Vec<Sign>,
}

impl SignSequence {
    pub fn block(&self, i: usize) -> &[Sign] {
        let start: usize = self.blocks[..i].iter().sum();
        &self.signs[start..start + self.blocks[i]]
    }

    /// No `+0`, `0-` or `+*-` inside any block.
    pub fn is_admissible(&self) -> bool {
        (0..self.blocks.len()).all(|i| block_admissible(self.block(i)))
    }

    /// Number of `+-` patterns inside blocks.
    pub fn pair_count(&self) -> usize {
        (0..self.blocks.len())
            .map(|i| self.block(i).windows(2).filter(|w| w[0] == Sign::Plus && w[1] == Sign::Minus).count())
            .sum()
    }
}

impl fmt::Display for SignSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.blocks.len() {
            f.write_str("|")?;
            for s in self.block(i) {
                write!(f, "{}", s.symbol())?;
            }
        }
        f.write_str("|")
    }
}

fn block_admissible(b: &[Sign]) -> bool {
    use Sign::*;
    let pair_bad = b.windows(2).any(|w| matches!((w[0], w[1]), (Plus, Zero) | (Zero, Minus)));
    let skip_bad = b.windows(3).any(|w| w[0] == Plus && w[2] == Minus);
    !(pair_bad || skip_bad)
}

fn check_weight(alpha: &MultiIndex, limit: SizeLimit) -> Result<()> {
    if alpha.weight() > limit.weight {
        Err(Error::SizeLimit { size: alpha.weight(), limit: limit.weight })
    } else {
        Ok(())
    }
}

/// Admissible sign sequences by direct filtering of all `3^|alpha|` strings.
pub fn enumerate_admissible_signs(alpha: &MultiIndex, limit: SizeLimit) -> Result<impl Iterator<Item = SignSequence>> {
    check_weight(alpha, limit)?;
    let n = alpha.weight();
    let blocks = alpha.0.clone();
    let total = 3usize.pow(n as u32);
    Ok((0..total).filter_map(move |mut code| {
        let mut signs = vec![Sign::Minus; n];
        for s in signs.iter_mut().rev() {
            *s = [Sign::Minus, Sign::Zero, Sign::Plus][code % 3];
            code /= 3;
        }
        let seq = SignSequence { blocks: blocks.clone(), signs };
        seq.is_admissible().then_some(seq)
    }))
}

/// Admissible sign sequences built from `nu <= mu <= alpha` and gap-2
/// positions of the `+-` pairs inside each `[nu_i, mu_i)` window.
pub fn enumerate_admissible_signs_param(alpha: &MultiIndex, limit: SizeLimit) -> Result<Vec<SignSequence>> {
    check_weight(alpha, limit)?;
    let mut out = Vec::new();
    for (nu, mu) in enumerate_nested_box(alpha, limit)? {
        let per_block: Vec<Vec<Vec<Sign>>> = (0..alpha.len())
            .map(|i| {
                let sigma = mu.0[i] - nu.0[i];
                gap_two_sequences(sigma)
                    .into_iter()
                    .map(|xs| {
                        let mut b = vec![Sign::Minus; nu.0[i]];
                        let mut mid = vec![Sign::Zero; sigma];
                        for &xi in &xs {
                            mid[xi - 1] = Sign::Plus;
                            mid[xi] = Sign::Minus;
                        }
                        b.extend(mid);
                        b.extend(core::iter::repeat_n(Sign::Plus, alpha.0[i] - mu.0[i]));
                        b
                    })
                    .collect()
            })
            .collect();
        let bound: Vec<usize> = per_block.iter().map(|b| b.len() - 1).collect();
        for idx in box_iter(&bound) {
            let signs = (0..alpha.len()).flat_map(|i| per_block[i][idx.0[i]].iter().copied()).collect();
            out.push(SignSequence { blocks: alpha.0.clone(), signs });
        }
    }
    Ok(out)
}

/// `(x_i, x_i + delta, ..., x_i + (alpha_i - 1) delta)` per block, flattened.
pub fn principal_specialize<T: Real>(ctx: &BracketContext<T>, x: &[Cx<T>], alpha: &MultiIndex) -> Result<Vec<Cx<T>>> {
    if x.len() != alpha.len() {
        return Err(Error::BadSize(alloc::format!("{} points for {} blocks", x.len(), alpha.len())));
    }
    Ok(x.iter()
        .zip(&alpha.0)
        .flat_map(|(&xi, &k)| (0..k).map(move |j| xi + ctx.kd(j as i64)))
        .collect())
}

/// Odometer over `0 <= mu <= bound`, last index fastest.
pub struct BoxIter {
    bound: Vec<usize>,
    cur: Vec<usize>,
    done: bool,
}

impl Iterator for BoxIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        if self.done {
            return None;
        }
        let out = MultiIndex(self.cur.clone());
        self.done = true;
        for k in (0..self.cur.len()).rev() {
            if self.cur[k] < self.bound[k] {
                self.cur[k] += 1;
                self.done = false;
                break;
            }
            self.cur[k] = 0;
        }
        Some(out)
    }
}

fn box_iter(bound: &[usize]) -> BoxIter {
    BoxIter { bound: bound.to_vec(), cur: vec![0; bound.len()], done: false }
}

/// All `mu` with `0 <= mu <= alpha`.
pub fn enumerate_box(alpha: &MultiIndex, limit: SizeLimit) -> Result<BoxIter> {
    check_weight(alpha, limit)?;
    Ok(box_iter(&alpha.0))
}

/// All pairs `(nu, mu)` with `0 <= nu <= mu <= alpha`.
pub fn enumerate_nested_box(
    alpha: &MultiIndex,
    limit: SizeLimit,
) -> Result<impl Iterator<Item = (MultiIndex, MultiIndex)>> {
    check_weight(alpha, limit)?;
    Ok(box_iter(&alpha.0).flat_map(|mu| box_iter(&mu.0).map(move |nu| (nu, mu.clone()))))
}
