//! Permutations of `{1..n}`, compositions, block embeddings and the
//! enumeration of Kostant double-coset representatives.
//!
//! Double cosets of parabolic subgroups of a symmetric group are classified
//! by contingency tables: for a pair of compositions `(left, right)` of `n`,
//! the table of a permutation counts, for each right interval `j` and left
//! interval `i`, how many elements of interval `j` land in interval `i`.
//! The Kostant representative is rebuilt from the table by a canonical
//! filling; it is the unique element of its coset that is strictly
//! increasing on the right intervals and whose inverse is strictly
//! increasing on the left intervals.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::RatTuple;

/// A permutation of `{1..n}` in one-line form: `images[j-1] = w(j)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (1..=n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v < 1 || v > n || seen[v - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{:?} is not a bijection of 1..{}",
                    images, n
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `{1..n}` from disjoint cycles, e.g. `(2 3 4)`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for k in 0..cycle.len() {
                let from = cycle[k];
                let to = cycle[(k + 1) % cycle.len()];
                if from < 1 || from > n || to < 1 || to > n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle entry out of range 1..{}",
                        n
                    )));
                }
                if seen[from - 1] {
                    return Err(Error::InvalidPermutation("cycles not disjoint".into()));
                }
                seen[from - 1] = true;
                images[from - 1] = to;
            }
        }
        Perm::from_images(images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `w(j)` for `j` in `1..=n`.
    pub fn apply(&self, j: usize) -> usize {
        self.images[j - 1]
    }

    pub fn one_line(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.n()];
        for (j, &img) in self.images.iter().enumerate() {
            inv[img - 1] = j + 1;
        }
        Perm { images: inv }
    }

    /// Composition `(self ∘ other)(j) = self(other(j))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n());
        Perm {
            images: (1..=self.n()).map(|j| self.apply(other.apply(j))).collect(),
        }
    }

    /// Number of inversions `#{(i,j) : i < j, w(i) > w(j)}`.
    pub fn length(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Acts on a tuple: entry at position `i` of the result is `v_{w^{-1}(i)}`,
    /// i.e. the entry at position `j` moves to position `w(j)`.
    pub fn act(&self, v: &RatTuple) -> Result<RatTuple> {
        if v.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: v.len(),
            });
        }
        let inv = self.inverse();
        Ok(RatTuple::new(
            (1..=self.n()).map(|i| v[inv.apply(i) - 1].clone()).collect(),
        ))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", img)?;
        }
        write!(f, "]")
    }
}

impl FromStr for Perm {
    type Err = Error;

    /// Parses one-line form `[2,1,3]`. Cycle notation needs the ambient `n`
    /// and is handled by [`parse_perm`].
    fn from_str(s: &str) -> Result<Perm> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected one-line form [..]: {:?}", s)))?;
        let images = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad permutation entry {:?}", p)))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(images)
    }
}

/// Parses either one-line form `[2,1,3]` or cycle notation `(2 3)(4 5)`
/// for a permutation of `{1..n}`.
pub fn parse_perm(s: &str, n: usize) -> Result<Perm> {
    let s = s.trim();
    if s.starts_with('[') {
        let p: Perm = s.parse()?;
        if p.n() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: p.n(),
            });
        }
        return Ok(p);
    }
    if !s.starts_with('(') {
        return Err(Error::Parse(format!("cannot parse permutation {:?}", s)));
    }
    let mut cycles = Vec::new();
    for part in s.split(')') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let part = part
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("unbalanced cycle notation {:?}", s)))?;
        let cycle = part
            .split(|c: char| c == ' ' || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad cycle entry {:?}", t)))
            })
            .collect::<Result<Vec<_>>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
    }
    Perm::from_cycles(n, &cycles)
}

/// An ordered sequence of positive integers with a prescribed sum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Composition> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidComposition("zero part".into()));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Consecutive 1-based intervals `[a, b]` covered by the parts.
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.parts.len());
        let mut start = 1;
        for &p in &self.parts {
            out.push((start, start + p - 1));
            start += p;
        }
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

/// All `2^(n-1)` ordered compositions of `n`, lexicographically.
pub fn compositions(n: usize) -> Vec<Composition> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(remaining: usize, current: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if remaining == 0 {
            out.push(Composition {
                parts: current.clone(),
            });
            return;
        }
        for first in 1..=remaining {
            current.push(first);
            rec(remaining - first, current, out);
            current.pop();
        }
    }
    rec(n, &mut current, &mut out);
    out
}

/// Embeds `x` in `S_l` into `S_d` by permuting consecutive blocks of the
/// given sizes and leaving entries within a block in place: acting with the
/// result on a `d`-tuple permutes its blocks exactly as `x` permutes an
/// `l`-tuple.
pub fn block_embed(x: &Perm, sizes: &Composition) -> Result<Perm> {
    if sizes.len() != x.n() {
        return Err(Error::LengthMismatch {
            expected: x.n(),
            got: sizes.len(),
        });
    }
    let l = x.n();
    let d: usize = sizes.total();
    let xinv = x.inverse();
    // target offset of result-block j is the total size of blocks x^{-1}(1..j-1)
    let mut target_offset = vec![0usize; l + 1];
    for j in 1..=l {
        target_offset[j] = target_offset[j - 1] + sizes.parts()[xinv.apply(j) - 1];
    }
    let mut images = vec![0usize; d];
    let mut source_offset = 0;
    for (k, &size) in sizes.parts().iter().enumerate() {
        let dest = target_offset[x.apply(k + 1) - 1];
        for i in 0..size {
            images[source_offset + i] = dest + i + 1;
        }
        source_offset += size;
    }
    Perm::from_images(images)
}

/// A double-coset invariant: `table[i][j]` counts elements of the `j`-th
/// right interval sent by `x` into the `i`-th left interval.
pub fn coset_table(x: &Perm, left: &Composition, right: &Composition) -> Vec<Vec<usize>> {
    assert_eq!(left.total(), x.n());
    assert_eq!(right.total(), x.n());
    let left_iv = left.intervals();
    let right_iv = right.intervals();
    let mut table = vec![vec![0usize; right_iv.len()]; left_iv.len()];
    let row_of = {
        let mut row = vec![0usize; x.n() + 1];
        for (i, &(a, b)) in left_iv.iter().enumerate() {
            for k in a..=b {
                row[k] = i;
            }
        }
        row
    };
    for (j, &(a, b)) in right_iv.iter().enumerate() {
        for k in a..=b {
            table[row_of[x.apply(k)]][j] += 1;
        }
    }
    table
}

/// The canonical filling of a contingency table: for each right interval,
/// its indices are handed out in increasing order to the left intervals in
/// increasing row order. The result is the Kostant representative of the
/// double coset classified by the table.
pub fn perm_from_table(
    table: &[Vec<usize>],
    left: &Composition,
    right: &Composition,
) -> Result<Perm> {
    let n = left.total();
    if right.total() != n {
        return Err(Error::InvalidComposition("compositions have unequal sums".into()));
    }
    let r = left.len();
    let t = right.len();
    if table.len() != r || table.iter().any(|row| row.len() != t) {
        return Err(Error::InvalidComposition("table shape mismatch".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.iter().sum::<usize>() != left.parts()[i] {
            return Err(Error::InvalidComposition(format!("row {} sum mismatch", i + 1)));
        }
    }
    for j in 0..t {
        if (0..r).map(|i| table[i][j]).sum::<usize>() != right.parts()[j] {
            return Err(Error::InvalidComposition(format!("column {} sum mismatch", j + 1)));
        }
    }
    let mut row_fill: Vec<usize> = left
        .intervals()
        .iter()
        .map(|&(a, _)| a)
        .collect();
    let mut images = vec![0usize; n];
    let mut cursor = 1;
    for j in 0..t {
        for i in 0..r {
            for _ in 0..table[i][j] {
                images[cursor - 1] = row_fill[i];
                row_fill[i] += 1;
                cursor += 1;
            }
        }
    }
    Perm::from_images(images)
}

/// True iff `x` is strictly increasing on the right intervals and `x^{-1}`
/// is strictly increasing on the left intervals.
pub fn is_kostant(x: &Perm, left: &Composition, right: &Composition) -> bool {
    assert_eq!(left.total(), x.n());
    assert_eq!(right.total(), x.n());
    let increasing_on = |p: &Perm, iv: &[(usize, usize)]| {
        iv.iter()
            .all(|&(a, b)| (a..b).all(|k| p.apply(k) < p.apply(k + 1)))
    };
    increasing_on(x, &right.intervals()) && increasing_on(&x.inverse(), &left.intervals())
}

/// Enumerates all non-negative integer tables with the given row and column
/// sums, row by row in lexicographic order.
pub fn contingency_tables(rows: &[usize], cols: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    enumerate_tables(rows, cols, &mut |table| {
        out.push(table.to_vec());
        true
    });
    out
}

/// Row-by-row enumeration with a callback invoked on every complete table.
/// The callback returns `false` to stop the enumeration early.
pub(crate) fn enumerate_tables(
    rows: &[usize],
    cols: &[usize],
    on_table: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) -> bool {
    enumerate_tables_pruned(rows, cols, &mut |_, _| true, on_table)
}

/// Like [`enumerate_tables`], with an additional prune callback invoked each
/// time a row is completed (arguments: partial table, index of the finished
/// row). Returning `false` skips every extension of that prefix.
pub(crate) fn enumerate_tables_pruned(
    rows: &[usize],
    cols: &[usize],
    row_done: &mut dyn FnMut(&[Vec<usize>], usize) -> bool,
    on_table: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) -> bool {
    if rows.iter().sum::<usize>() != cols.iter().sum::<usize>() {
        return true;
    }
    let mut table: Vec<Vec<usize>> = Vec::new();
    let mut remaining: Vec<usize> = cols.to_vec();
    rec_rows(rows, 0, &mut remaining, &mut table, row_done, on_table)
}

fn rec_rows(
    rows: &[usize],
    i: usize,
    remaining: &mut Vec<usize>,
    table: &mut Vec<Vec<usize>>,
    row_done: &mut dyn FnMut(&[Vec<usize>], usize) -> bool,
    on_table: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) -> bool {
    if i == rows.len() {
        debug_assert!(remaining.iter().all(|&c| c == 0));
        return on_table(table);
    }
    let t = remaining.len();
    let mut row = vec![0usize; t];
    rec_row_entries(rows, i, 0, rows[i], &mut row, remaining, table, row_done, on_table)
}

#[allow(clippy::too_many_arguments)]
fn rec_row_entries(
    rows: &[usize],
    i: usize,
    j: usize,
    left_to_place: usize,
    row: &mut Vec<usize>,
    remaining: &mut Vec<usize>,
    table: &mut Vec<Vec<usize>>,
    row_done: &mut dyn FnMut(&[Vec<usize>], usize) -> bool,
    on_table: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) -> bool {
    if j == remaining.len() {
        if left_to_place != 0 {
            return true;
        }
        table.push(row.clone());
        let mut keep_going = true;
        if row_done(table, i) {
            keep_going = rec_rows(rows, i + 1, remaining, table, row_done, on_table);
        }
        table.pop();
        return keep_going;
    }
    // feasibility: later columns must be able to absorb the rest of the row
    let later_capacity: usize = remaining[j + 1..].iter().sum();
    let lo = left_to_place.saturating_sub(later_capacity);
    let hi = left_to_place.min(remaining[j]);
    for v in lo..=hi {
        row[j] = v;
        remaining[j] -= v;
        let cont = rec_row_entries(
            rows,
            i,
            j + 1,
            left_to_place - v,
            row,
            remaining,
            table,
            row_done,
            on_table,
        );
        remaining[j] += v;
        row[j] = 0;
        if !cont {
            return false;
        }
    }
    true
}

/// One Kostant representative per double coset
/// `S_left \ S_n / S_right`, sorted lexicographically by one-line form.
pub fn kostant_reps(left: &Composition, right: &Composition) -> Result<Vec<Perm>> {
    if left.total() != right.total() {
        return Err(Error::InvalidComposition("compositions have unequal sums".into()));
    }
    let mut reps: Vec<Perm> = contingency_tables(left.parts(), right.parts())
        .iter()
        .map(|t| perm_from_table(t, left, right))
        .collect::<Result<_>>()?;
    debug_assert!(reps.iter().all(|p| is_kostant(p, left, right)));
    reps.sort();
    Ok(reps)
}

/// The unique Kostant representative of the double coset containing `x`.
pub fn double_coset_rep(x: &Perm, left: &Composition, right: &Composition) -> Result<Perm> {
    if left.total() != x.n() || right.total() != x.n() {
        return Err(Error::InvalidComposition(
            "compositions do not sum to the permutation degree".into(),
        ));
    }
    let table = coset_table(x, left, right);
    perm_from_table(&table, left, right)
}
