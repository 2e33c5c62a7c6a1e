//! Vectors and matrices over GF(2).
//!
//! A [`BitVec`] holds one bit per crossing. Its text form is a string of
//! `'0'`/`'1'` characters where the leftmost character is the first crossing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Fixed-length packed bit vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Unit vector with a single bit set at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = BitVec::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = BitVec::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Builds a vector from the low `len` bits of `mask`; bit `i` of the mask
    /// becomes position `i`.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        assert!(len <= WORD, "from_mask supports at most 64 bits");
        let mut v = BitVec::zeros(len);
        if len > 0 {
            let keep = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = mask & keep;
        }
        v
    }

    /// The vector as a `u64` mask, if it fits.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index / WORD] >> (index % WORD) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let bit = 1u64 << (index % WORD);
        if value {
            self.words[index / WORD] |= bit;
        } else {
            self.words[index / WORD] &= !bit;
        }
    }

    pub fn flip(&mut self, index: usize) {
        let cur = self.get(index);
        self.set(index, !cur);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the set bits, ascending.
    pub fn ones_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    fn check_len(&self, other: &BitVec) -> Result<()> {
        if self.len != other.len {
            return Err(Error::Dimension {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(())
    }

    /// Componentwise sum modulo 2.
    pub fn add(&self, other: &BitVec) -> Result<BitVec> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &BitVec) -> Result<()> {
        self.check_len(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// `e · v`: the zero vector when `e` is false, `v` itself otherwise.
    pub fn scale(&self, e: bool) -> BitVec {
        if e {
            self.clone()
        } else {
            BitVec::zeros(self.len)
        }
    }

    /// Position-wise permutation: bit `i` of `self` moves to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> BitVec {
        assert_eq!(perm.len(), self.len);
        let mut out = BitVec::zeros(self.len);
        for i in self.ones_indices() {
            out.set(perm[i], true);
        }
        out
    }

    /// Ordering key matching the lexicographic order of the text form.
    pub fn lex_key(&self) -> Vec<bool> {
        self.iter().collect()
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{self}]")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut v = BitVec::zeros(s.chars().count());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(Error::BitString(s.to_owned())),
            }
        }
        Ok(v)
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rectangular matrix over GF(2), stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    ncols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn new(ncols: usize, rows: Vec<BitVec>) -> Result<Self> {
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::Dimension {
                    expected: ncols,
                    found: r.len(),
                });
            }
        }
        Ok(BitMatrix { ncols, rows })
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        BitMatrix {
            ncols,
            rows: vec![BitVec::zeros(ncols); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            ncols: n,
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    /// Parses rows written as bit strings.
    pub fn from_strs(ncols: usize, rows: &[&str]) -> Result<Self> {
        let rows = rows.iter().map(|r| r.parse()).collect::<Result<Vec<BitVec>>>()?;
        BitMatrix::new(ncols, rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    /// `e · M`: the XOR of the rows `i` with `e_i = 1`.
    pub fn mul_vec(&self, e: &BitVec) -> Result<BitVec> {
        if e.len() != self.nrows() {
            return Err(Error::Dimension {
                expected: self.nrows(),
                found: e.len(),
            });
        }
        let mut acc = BitVec::zeros(self.ncols);
        for i in e.ones_indices() {
            acc.add_assign(&self.rows[i])?;
        }
        Ok(acc)
    }

    /// Reduced row echelon form with pivots taken left to right, top to
    /// bottom. Zero rows are dropped, so the result has exactly `rank` rows.
    pub fn rref(&self) -> BitMatrix {
        let mut rows = self.rows.clone();
        let mut pivot_row = 0;
        for col in 0..self.ncols {
            let Some(found) = (pivot_row..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(pivot_row, found);
            let pivot = rows[pivot_row].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != pivot_row && row.get(col) {
                    row.add_assign(&pivot).expect("rows share a length");
                }
            }
            pivot_row += 1;
            if pivot_row == rows.len() {
                break;
            }
        }
        rows.truncate(pivot_row);
        BitMatrix {
            ncols: self.ncols,
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().nrows()
    }

    /// Reduces `v` against an echelon basis; zero iff `v` is in the row space.
    fn reduce(basis: &BitMatrix, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for row in &basis.rows {
            let lead = row.ones_indices().next().expect("rref rows are non-zero");
            if v.get(lead) {
                v.add_assign(row).expect("rows share a length");
            }
        }
        v
    }

    pub fn in_row_space(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.ncols {
            return Err(Error::Dimension {
                expected: self.ncols,
                found: v.len(),
            });
        }
        Ok(BitMatrix::reduce(&self.rref(), v).is_zero())
    }

    /// Whether `target - base` lies in the row space.
    pub fn in_affine_span(&self, target: &BitVec, base: &BitVec) -> Result<bool> {
        let diff = target.add(base)?;
        self.in_row_space(&diff)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter().map(|r| r.to_string())).finish()
    }
}

/// Componentwise sum of two vectors.
pub fn add(a: &BitVec, b: &BitVec) -> Result<BitVec> {
    a.add(b)
}

pub fn scale(e: bool, v: &BitVec) -> BitVec {
    v.scale(e)
}

pub fn mul_vec_matrix(e: &BitVec, m: &BitMatrix) -> Result<BitVec> {
    m.mul_vec(e)
}

pub fn row_space_rank(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn in_affine_span(target: &BitVec, base: &BitVec, m: &BitMatrix) -> Result<bool> {
    m.in_affine_span(target, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    fn twist_matrix() -> BitMatrix {
        BitMatrix::from_strs(5, &["11011", "11000", "10110", "11101", "00110", "01001", "00111"])
            .unwrap()
    }

    /// Rank by brute force: size of the set of all subset sums is 2^rank.
    fn rank_by_span_size(m: &BitMatrix) -> usize {
        let mut span = std::collections::HashSet::new();
        for mask in 0u64..(1 << m.nrows()) {
            let e = BitVec::from_mask(mask, m.nrows());
            span.insert(m.mul_vec(&e).unwrap());
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn add_examples() {
        assert_eq!(add(&bv("11001"), &bv("11000")).unwrap(), bv("00001"));
        let v = bv("10110");
        assert_eq!(add(&v, &BitVec::zeros(5)).unwrap(), v);
        assert!(add(&v, &v).unwrap().is_zero());
    }

    #[test]
    fn add_rejects_length_mismatch() {
        let err = add(&bv("101"), &bv("10")).unwrap_err();
        assert!(matches!(err, Error::Dimension { expected: 3, found: 2 }));
    }

    #[test]
    fn scale_examples() {
        assert_eq!(scale(false, &bv("00110")), bv("00000"));
        assert_eq!(scale(true, &bv("11000")), bv("11000"));
        assert_eq!(scale(true, &BitVec::zeros(4)), BitVec::zeros(4));
    }

    #[test]
    fn mul_vec_examples() {
        let r = twist_matrix();
        let v0 = bv("11001");
        let out = v0.add(&mul_vec_matrix(&bv("1110001"), &r).unwrap()).unwrap();
        assert_eq!(out, bv("01011"));
        let out = v0.add(&mul_vec_matrix(&bv("0001010"), &r).unwrap()).unwrap();
        assert_eq!(out, bv("01101"));
        let out = v0.add(&mul_vec_matrix(&BitVec::zeros(7), &r).unwrap()).unwrap();
        assert_eq!(out, v0);
        assert!(mul_vec_matrix(&bv("101"), &r).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_by_span_size(&twist_matrix()), 5);
        assert_eq!(row_space_rank(&twist_matrix()), 5);
        assert_eq!(row_space_rank(&BitMatrix::zeros(3, 4)), 0);
        assert_eq!(row_space_rank(&BitMatrix::identity(6)), 6);
    }

    #[test]
    fn rref_is_canonical() {
        let m = twist_matrix();
        assert_eq!(m.rref(), BitMatrix::identity(5));
        let m = BitMatrix::from_strs(4, &["1100", "0110", "1010"]).unwrap();
        assert_eq!(m.rref(), BitMatrix::from_strs(4, &["1010", "0110"]).unwrap());
    }

    #[test]
    fn affine_span_examples() {
        let m = twist_matrix();
        let base = bv("11001");
        assert!(in_affine_span(&base, &base, &m).unwrap());
        for mask in 0..32 {
            assert!(in_affine_span(&BitVec::from_mask(mask, 5), &base, &m).unwrap());
        }
        let zero = BitMatrix::from_strs(2, &["00"]).unwrap();
        assert!(!in_affine_span(&bv("01"), &bv("10"), &zero).unwrap());
        assert!(in_affine_span(&bv("01"), &bv("101"), &zero).is_err());
    }

    #[test]
    fn text_form_round_trips_and_rejects_junk() {
        assert_eq!(bv("0100110011").to_string(), "0100110011");
        assert!("01a".parse::<BitVec>().is_err());
        let long = "1".repeat(130);
        assert_eq!(long.parse::<BitVec>().unwrap().count_ones(), 130);
    }

    fn arb_vec(len: usize) -> impl Strategy<Value = BitVec> {
        proptest::collection::vec(any::<bool>(), len).prop_map(BitVec::from_bools)
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
        proptest::collection::vec(arb_vec(cols), rows)
            .prop_map(move |rs| BitMatrix::new(cols, rs).unwrap())
    }

    proptest! {
        #[test]
        fn addition_is_an_abelian_group(a in arb_vec(70), b in arb_vec(70), c in arb_vec(70)) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert!(a.add(&a).unwrap().is_zero());
        }

        #[test]
        fn mul_vec_is_linear(m in arb_matrix(6, 9), e1 in arb_vec(6), e2 in arb_vec(6)) {
            let lhs = m.mul_vec(&e1.add(&e2).unwrap()).unwrap();
            let rhs = m.mul_vec(&e1).unwrap().add(&m.mul_vec(&e2).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rank_matches_span_size(m in arb_matrix(7, 5)) {
            let r = m.rank();
            prop_assert!(r <= 5);
            prop_assert_eq!(r, rank_by_span_size(&m));
        }

        #[test]
        fn rank_invariant_under_row_addition(m in arb_matrix(5, 8), i in 0usize..5, j in 0usize..5) {
            prop_assume!(i != j);
            let mut rows = m.rows().to_vec();
            let other = rows[j].clone();
            rows[i].add_assign(&other).unwrap();
            let m2 = BitMatrix::new(8, rows).unwrap();
            prop_assert_eq!(m.rank(), m2.rank());
        }

        #[test]
        fn text_round_trip(v in arb_vec(40)) {
            prop_assert_eq!(v.to_string().parse::<BitVec>().unwrap(), v);
        }
    }
}
