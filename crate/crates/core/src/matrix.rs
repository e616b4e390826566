//! Bit-packed 0/1 and 0/±1 matrices with the neighborhood and edge-count
//! vocabulary used throughout the crate.
//!
//! Indices are 0-based in the API. Anything meant for people (reports, text
//! dumps of index sets) converts to 1-based at the edge.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// Row/column sums equal to `d` everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityWitness {
    pub d: usize,
    pub holds: bool,
}

/// Common and exclusive neighborhoods of a pair of rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoEx {
    pub co: Vec<usize>,
    /// Columns adjacent to the first row only.
    pub ex12: Vec<usize>,
    /// Columns adjacent to the second row only.
    pub ex21: Vec<usize>,
}

/// A bit-packed 0/1 matrix with cached row and column sums.
///
/// Square in almost every use; minors may be rectangular.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix01 {
    nrows: usize,
    ncols: usize,
    stride: usize,
    bits: Vec<u64>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
}

impl Matrix01 {
    pub fn zeros(n: usize) -> Self {
        Self::zeros_rect(n, n)
    }

    pub fn zeros_rect(nrows: usize, ncols: usize) -> Self {
        let stride = words_for(ncols);
        Matrix01 {
            nrows,
            ncols,
            stride,
            bits: vec![0; nrows * stride],
            row_sums: vec![0; nrows],
            col_sums: vec![0; ncols],
        }
    }

    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| i == j)
    }

    /// Row `i` has ones at columns `i, i+1, ..., i+d-1` (mod n).
    pub fn circulant(n: usize, d: usize) -> Self {
        Self::from_fn(n, |i, j| (j + n - i) % n < d)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> bool) -> Self {
        Self::from_fn_rect(n, n, f)
    }

    pub fn from_fn_rect(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros_rect(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a square matrix from 0/1 rows.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: r.len() });
            }
            for (j, &v) in r.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(i, j, true),
                    _ => return Err(Error::InvalidParameter(format!("entry {v} is not 0/1"))),
                }
            }
        }
        Ok(m)
    }

    /// Square matrix whose row `i` has ones exactly at `rows[i]`.
    pub fn from_neighborhoods(n: usize, rows: &[Vec<usize>]) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: rows.len() });
        }
        let mut m = Self::zeros(n);
        for (i, nb) in rows.iter().enumerate() {
            for &j in nb {
                if j >= n {
                    return Err(Error::IndexOutOfRange { index: j, n });
                }
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    /// Permutation matrix with `M(i, perm[i]) = 1`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        Self::from_fn(n, |i, j| perm[i] == j)
    }

    /// Dimension of a square matrix (the row count in general).
    pub fn n(&self) -> usize {
        self.nrows
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.nrows && j < self.ncols);
        (self.bits[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    /// Sets an entry, keeping the row/column sum caches coherent.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if self.get(i, j) != value {
            self.flip(i, j);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        let w = &mut self.bits[i * self.stride + j / WORD];
        *w ^= 1 << (j % WORD);
        if (*w >> (j % WORD)) & 1 == 1 {
            self.row_sums[i] += 1;
            self.col_sums[j] += 1;
        } else {
            self.row_sums[i] -= 1;
            self.col_sums[j] -= 1;
        }
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.row_sums[i]
    }

    pub fn col_sum(&self, j: usize) -> usize {
        self.col_sums[j]
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn nnz(&self) -> usize {
        self.row_sums.iter().sum()
    }

    /// Recomputes sums from the bits and compares with the caches.
    pub fn caches_coherent(&self) -> bool {
        let rows_ok = (0..self.nrows).all(|i| {
            self.row_words(i).iter().map(|w| w.count_ones() as usize).sum::<usize>() == self.row_sums[i]
        });
        let cols_ok = (0..self.ncols)
            .all(|j| (0..self.nrows).filter(|&i| self.get(i, j)).count() == self.col_sums[j]);
        rows_ok && cols_ok
    }

    pub fn regularity_witness(&self, d: usize) -> RegularityWitness {
        let holds = self.row_sums.iter().chain(self.col_sums.iter()).all(|&s| s == d);
        RegularityWitness { d, holds }
    }

    /// The common row/column sum, if the matrix is square and regular.
    pub fn regular_degree(&self) -> Option<usize> {
        if !self.is_square() {
            return None;
        }
        let d = self.row_sums.first().copied().unwrap_or(0);
        self.regularity_witness(d).holds.then_some(d)
    }

    pub fn require_regular(&self) -> Result<usize> {
        self.regular_degree()
            .ok_or_else(|| Error::NotRegular(self.row_sums.first().copied().unwrap_or(0)))
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if i >= self.nrows {
            Err(Error::IndexOutOfRange { index: i, n: self.nrows })
        } else {
            Ok(())
        }
    }

    fn check_col(&self, j: usize) -> Result<()> {
        if j >= self.ncols {
            Err(Error::IndexOutOfRange { index: j, n: self.ncols })
        } else {
            Ok(())
        }
    }

    fn row_iter(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * WORD + b)
                }
            })
        })
    }

    /// `N_M(i)`: the set-bit columns of row `i`, increasing.
    pub fn neighborhood(&self, i: usize) -> Result<Vec<usize>> {
        self.check_row(i)?;
        Ok(self.row_iter(i).collect())
    }

    /// Same as [`Self::neighborhood`] without the range check.
    pub fn row_ones(&self, i: usize) -> Vec<usize> {
        self.row_iter(i).collect()
    }

    /// `N_M(S)`: union of the row neighborhoods over `rows`.
    pub fn set_neighborhood(&self, rows: &[usize]) -> Result<Vec<usize>> {
        let mut acc = vec![0u64; self.stride];
        for &i in rows {
            self.check_row(i)?;
            for (a, w) in acc.iter_mut().zip(self.row_words(i)) {
                *a |= w;
            }
        }
        Ok(mask_to_indices(&acc))
    }

    /// Size of `N_M(S)` without materializing the set.
    pub fn set_neighborhood_size(&self, rows: &[usize]) -> usize {
        let mut acc = vec![0u64; self.stride];
        for &i in rows {
            for (a, w) in acc.iter_mut().zip(self.row_words(i)) {
                *a |= w;
            }
        }
        acc.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `Co_M(i1,i2)`, `Ex_M(i1,i2)`, `Ex_M(i2,i1)`.
    pub fn co_ex_sets(&self, i1: usize, i2: usize) -> Result<CoEx> {
        self.check_row(i1)?;
        self.check_row(i2)?;
        if i1 == i2 {
            return Err(Error::EqualIndices(i1));
        }
        let (r1, r2) = (self.row_words(i1), self.row_words(i2));
        let co: Vec<u64> = r1.iter().zip(r2).map(|(a, b)| a & b).collect();
        let e12: Vec<u64> = r1.iter().zip(r2).map(|(a, b)| a & !b).collect();
        let e21: Vec<u64> = r1.iter().zip(r2).map(|(a, b)| !a & b).collect();
        Ok(CoEx {
            co: mask_to_indices(&co),
            ex12: mask_to_indices(&e12),
            ex21: mask_to_indices(&e21),
        })
    }

    /// `|Ex_M(i1,i2)|` computed by popcount.
    pub fn ex_count(&self, i1: usize, i2: usize) -> usize {
        self.row_words(i1)
            .iter()
            .zip(self.row_words(i2))
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    /// `e_M(A,B)`: number of ones in the `A × B` block.
    pub fn edge_count(&self, rows: &[usize], cols: &[usize]) -> Result<usize> {
        for &i in rows {
            self.check_row(i)?;
        }
        let mut mask = vec![0u64; self.stride];
        for &j in cols {
            self.check_col(j)?;
            mask[j / WORD] |= 1 << (j % WORD);
        }
        Ok(self.edge_count_mask(rows, &mask))
    }

    /// Edge count against a column bitmask of this matrix's stride.
    pub fn edge_count_mask(&self, rows: &[usize], col_mask: &[u64]) -> usize {
        rows.iter()
            .map(|&i| {
                self.row_words(i)
                    .iter()
                    .zip(col_mask)
                    .map(|(a, b)| (a & b).count_ones() as usize)
                    .sum::<usize>()
            })
            .sum()
    }

    /// Column bitmask with this matrix's stride.
    pub fn col_mask(&self, cols: &[usize]) -> Vec<u64> {
        let mut mask = vec![0u64; self.stride];
        for &j in cols {
            mask[j / WORD] |= 1 << (j % WORD);
        }
        mask
    }

    /// `M'(i,j) = 1 - M(i,j)`.
    pub fn complement(&self) -> Self {
        Self::from_fn_rect(self.nrows, self.ncols, |i, j| !self.get(i, j))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn_rect(self.ncols, self.nrows, |i, j| self.get(j, i))
    }

    /// `M_{(i_1..i_k) × (j_1..j_l)}` in the caller's index order.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        for &i in rows {
            self.check_row(i)?;
        }
        for &j in cols {
            self.check_col(j)?;
        }
        Ok(Self::from_fn_rect(rows.len(), cols.len(), |a, b| self.get(rows[a], cols[b])))
    }

    /// Rows as dense integer vectors.
    pub fn to_int_rows(&self) -> Vec<Vec<i64>> {
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self.get(i, j) as i64).collect())
            .collect()
    }

    /// Text dump: header `n d` followed by `n` rows of `0`/`1`.
    pub fn to_text(&self, header_d: usize) -> String {
        let mut s = format!("{} {}\n", self.nrows, header_d);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Parses the text format. A nonzero header degree is validated.
    pub fn parse_text(text: &str) -> Result<(Self, usize)> {
        let (n, d, body) = parse_header(text)?;
        let mut m = Self::zeros(n);
        for (i, (lineno, line)) in body.iter().enumerate() {
            let chars: Vec<char> = line.chars().collect();
            if chars.len() != n {
                return Err(Error::Parse {
                    line: *lineno,
                    msg: format!("expected {n} characters, found {}", chars.len()),
                });
            }
            for (j, c) in chars.into_iter().enumerate() {
                match c {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    other => {
                        return Err(Error::Parse { line: *lineno, msg: format!("unexpected {other:?}") })
                    }
                }
            }
        }
        if d != 0 && !m.regularity_witness(d).holds {
            return Err(Error::NotRegular(d));
        }
        Ok((m, d))
    }
}

impl fmt::Debug for Matrix01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix01 {}x{}", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            let row: String = (0..self.ncols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Matrix01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(self.regular_degree().unwrap_or(0)))
    }
}

pub(crate) fn mask_to_indices(mask: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in mask.iter().enumerate() {
        let mut word = word;
        while word != 0 {
            let b = word.trailing_zeros() as usize;
            out.push(w * WORD + b);
            word &= word - 1;
        }
    }
    out
}

type Body<'a> = Vec<(usize, &'a str)>;

fn parse_header(text: &str) -> Result<(usize, usize, Body<'_>)> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let mut parts = header.split_whitespace();
    let parse_num = |p: Option<&str>| -> Result<usize> {
        p.and_then(|s| s.parse().ok())
            .ok_or(Error::Parse { line: 1, msg: format!("bad header {header:?}") })
    };
    let n = parse_num(parts.next())?;
    let d = parse_num(parts.next())?;
    if parts.next().is_some() || n == 0 || d > n {
        return Err(Error::Parse { line: 1, msg: format!("bad header {header:?}") });
    }
    let body: Body<'_> = lines.collect();
    if body.len() != n {
        return Err(Error::Parse {
            line: body.len() + 2,
            msg: format!("expected {n} rows, found {}", body.len()),
        });
    }
    Ok((n, d, body))
}

/// An `n × n` matrix of ±1 signs, stored as a mask of the `-1` entries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignMatrix {
    negative: Matrix01,
}

impl SignMatrix {
    pub fn all_plus(n: usize) -> Self {
        SignMatrix { negative: Matrix01::zeros(n) }
    }

    pub fn all_minus(n: usize) -> Self {
        SignMatrix { negative: Matrix01::ones(n) }
    }

    pub fn from_negative_mask(negative: Matrix01) -> Self {
        SignMatrix { negative }
    }

    pub fn n(&self) -> usize {
        self.negative.n()
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        if self.negative.get(i, j) {
            -1
        } else {
            1
        }
    }

    pub fn set(&mut self, i: usize, j: usize, sign: i8) {
        self.negative.set(i, j, sign < 0);
    }

    pub fn negative_mask(&self) -> &Matrix01 {
        &self.negative
    }

    pub fn to_int_rows(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j) as i64).collect()).collect()
    }
}

/// A 0/±1 matrix `support ⊙ signs`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignedMatrix {
    support: Matrix01,
    signs: SignMatrix,
}

/// Entry-wise product of a 0/1 support and a sign matrix.
pub fn hadamard(support: &Matrix01, signs: &SignMatrix) -> Result<SignedMatrix> {
    if !support.is_square() {
        return Err(Error::DimensionMismatch { expected: support.nrows(), got: support.ncols() });
    }
    if support.n() != signs.n() {
        return Err(Error::DimensionMismatch { expected: support.n(), got: signs.n() });
    }
    Ok(SignedMatrix { support: support.clone(), signs: signs.clone() })
}

impl SignedMatrix {
    pub fn n(&self) -> usize {
        self.support.n()
    }

    pub fn support(&self) -> &Matrix01 {
        &self.support
    }

    pub fn signs(&self) -> &SignMatrix {
        &self.signs
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        if self.support.get(i, j) {
            self.signs.get(i, j)
        } else {
            0
        }
    }

    pub fn to_int_rows(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j) as i64).collect()).collect()
    }

    /// Text dump with `-`, `0`, `+` entries.
    pub fn to_text(&self, header_d: usize) -> String {
        let n = self.n();
        let mut s = format!("{n} {header_d}\n");
        for i in 0..n {
            for j in 0..n {
                s.push(match self.get(i, j) {
                    1 => '+',
                    -1 => '-',
                    _ => '0',
                });
            }
            s.push('\n');
        }
        s
    }

    /// Parses the signed text format; off-support signs are stored as `+`.
    pub fn parse_text(text: &str) -> Result<(Self, usize)> {
        let (n, d, body) = parse_header(text)?;
        let mut support = Matrix01::zeros(n);
        let mut signs = SignMatrix::all_plus(n);
        for (i, (lineno, line)) in body.iter().enumerate() {
            let chars: Vec<char> = line.chars().collect();
            if chars.len() != n {
                return Err(Error::Parse {
                    line: *lineno,
                    msg: format!("expected {n} characters, found {}", chars.len()),
                });
            }
            for (j, c) in chars.into_iter().enumerate() {
                match c {
                    '0' => {}
                    '+' => support.set(i, j, true),
                    '-' => {
                        support.set(i, j, true);
                        signs.set(i, j, -1);
                    }
                    other => {
                        return Err(Error::Parse { line: *lineno, msg: format!("unexpected {other:?}") })
                    }
                }
            }
        }
        if d != 0 && !support.regularity_witness(d).holds {
            return Err(Error::NotRegular(d));
        }
        Ok((SignedMatrix { support, signs }, d))
    }
}
