//! Exact sparse integer matrix kernels.
//!
//! Everything here is generic over the entry type through [`MatrixEntry`], a
//! num-traits integer bound satisfied by `i64`, `i128` and `BigInt`; the
//! crate root pins the arbitrary-precision aliases used by the rest of the
//! library. There is no floating point anywhere: ranks, normal forms and
//! quotient orders are exact.
//!
//! Elimination is fraction-free. Pivots are chosen by a Markowitz fill
//! estimate with ties broken by lowest (row, col), so results are
//! deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, Zero};
use thiserror::Error;

/// Integer scalar usable as a matrix entry.
pub trait MatrixEntry:
    Integer + Signed + FromPrimitive + Clone + fmt::Debug + fmt::Display + 'static
{
}

impl<T> MatrixEntry for T where
    T: Integer + Signed + FromPrimitive + Clone + fmt::Debug + fmt::Display + 'static
{
}

/// Sparse matrix over an exact integer type. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), T>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("vector length {got} does not match matrix column count {expected}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub got: usize,
}

/// Order of a vector's image in the quotient by a row lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientOrder<T> {
    Finite(T),
    Infinite,
}

impl<T: MatrixEntry> SparseMatrix<T> {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::new(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, T::from_i64(v).expect("entry fits"));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Set an entry; writing zero removes any stored value.
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn add_to(&mut self, row: usize, col: usize, value: T) {
        if value.is_zero() {
            return;
        }
        let cur = self.get(row, col);
        self.set(row, col, cur + value);
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Rows as sparse maps, empty rows omitted from content but present by index.
    fn row_maps(&self) -> Vec<BTreeMap<usize, T>> {
        let mut rows = vec![BTreeMap::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].insert(c, v.clone());
        }
        rows
    }

    pub fn multiply(&self, other: &SparseMatrix<T>) -> SparseMatrix<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let other_rows = other.row_maps();
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (&(r, k), a) in &self.entries {
            for (&c, b) in &other_rows[k] {
                out.add_to(r, c, a.clone() * b.clone());
            }
        }
        out
    }

    /// Rank over the rationals, by fraction-free elimination on integer rows
    /// with per-row content reduction.
    pub fn rank_rational(&self) -> usize {
        let mut rows: Vec<BTreeMap<usize, T>> = self
            .row_maps()
            .into_iter()
            .filter(|r| !r.is_empty())
            .map(|r| reduce_content(r))
            .collect();
        let mut rank = 0usize;
        loop {
            let Some((pi, pc)) = markowitz_pivot(&rows) else {
                return rank;
            };
            let pivot_row = rows.swap_remove(pi);
            let pivot = pivot_row[&pc].clone();
            rank += 1;
            let mut next: Vec<BTreeMap<usize, T>> = Vec::with_capacity(rows.len());
            for mut row in rows {
                if let Some(a) = row.get(&pc).cloned() {
                    let g = pivot.gcd(&a);
                    let row_scale = pivot.clone() / g.clone();
                    let piv_scale = a / g;
                    for (c, v) in row.iter_mut() {
                        *v = v.clone() * row_scale.clone()
                            - piv_scale.clone() * pivot_row.get(c).cloned().unwrap_or_else(T::zero);
                    }
                    for (&c, v) in &pivot_row {
                        row.entry(c)
                            .or_insert_with(|| T::zero() - piv_scale.clone() * v.clone());
                    }
                    row.retain(|_, v| !v.is_zero());
                    if !row.is_empty() {
                        next.push(reduce_content(row));
                    }
                } else {
                    next.push(row);
                }
            }
            rows = next;
        }
    }

    /// Rank of the matrix reduced mod 2.
    pub fn rank_gf2(&self) -> usize {
        let blocks = self.cols.div_ceil(64);
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut rank = 0usize;
        let rows = self.row_maps();
        for row in rows {
            let mut bits = vec![0u64; blocks];
            for (c, v) in row {
                if v.is_odd() {
                    bits[c / 64] ^= 1u64 << (c % 64);
                }
            }
            for b in &basis {
                let lead = first_bit(b).unwrap();
                if bit_set(&bits, lead) {
                    xor_into(&mut bits, b);
                }
            }
            if first_bit(&bits).is_some() {
                basis.push(bits);
                basis.sort_by_key(|b| first_bit(b).unwrap());
                rank += 1;
            }
        }
        rank
    }

    /// Row-style Hermite normal form of the lattice spanned by the rows.
    ///
    /// The returned `h` has one row per lattice basis vector (zero rows
    /// dropped), pivots positive, and entries above each pivot reduced to
    /// `0 <= a < pivot`. `transform` records the integer row operations:
    /// `transform * self` equals `h` padded with zero rows.
    pub fn hermite_normal_form(&self) -> Hnf<T> {
        let mut rows = self.row_maps();
        let n = rows.len();
        let mut transform: Vec<BTreeMap<usize, T>> = (0..n)
            .map(|i| BTreeMap::from([(i, T::one())]))
            .collect();
        let mut pivot_row = 0usize;
        for col in 0..self.cols {
            loop {
                let mut candidates: Vec<usize> = (pivot_row..n)
                    .filter(|&i| rows[i].contains_key(&col))
                    .collect();
                if candidates.is_empty() {
                    break;
                }
                // smallest magnitude first, ties by index
                candidates.sort_by(|&a, &b| {
                    rows[a][&col].abs().cmp(&rows[b][&col].abs()).then(a.cmp(&b))
                });
                let best = candidates[0];
                if candidates.len() == 1 {
                    rows.swap(pivot_row, best);
                    transform.swap(pivot_row, best);
                    let p = rows[pivot_row][&col].clone();
                    if p.is_negative() {
                        negate_row(&mut rows[pivot_row]);
                        negate_row(&mut transform[pivot_row]);
                    }
                    // canonical range above the pivot
                    let pivot = rows[pivot_row][&col].clone();
                    for r in 0..pivot_row {
                        if let Some(a) = rows[r].get(&col).cloned() {
                            let q = a.div_floor(&pivot);
                            if !q.is_zero() {
                                let (src, dst) = split_two(&mut rows, pivot_row, r);
                                row_sub_scaled(dst, src, &q);
                                let (src, dst) = split_two(&mut transform, pivot_row, r);
                                row_sub_scaled(dst, src, &q);
                            }
                        }
                    }
                    pivot_row += 1;
                    break;
                }
                let a = rows[best][&col].clone();
                for &r in &candidates[1..] {
                    let q = rows[r][&col].div_rem(&a).0;
                    if !q.is_zero() {
                        let (src, dst) = split_two(&mut rows, best, r);
                        row_sub_scaled(dst, src, &q);
                        let (src, dst) = split_two(&mut transform, best, r);
                        row_sub_scaled(dst, src, &q);
                    }
                }
            }
        }
        let rank = pivot_row;
        let mut h = SparseMatrix::new(rank, self.cols);
        for (i, row) in rows.iter().take(rank).enumerate() {
            for (&c, v) in row {
                h.set(i, c, v.clone());
            }
        }
        let mut u = SparseMatrix::new(n, n);
        for (i, row) in transform.iter().enumerate() {
            for (&c, v) in row {
                u.set(i, c, v.clone());
            }
        }
        Hnf { h, transform: u }
    }

    /// Diagonal of the Smith normal form: a divisibility chain d1 | d2 | ...
    /// padded with zeros to min(rows, cols).
    pub fn smith_normal_form(&self) -> Vec<T> {
        let mut m = self.entries.clone();
        let bound = self.rows.min(self.cols);
        let mut diag: Vec<T> = Vec::with_capacity(bound);
        let mut t = 0usize;
        while t < bound {
            let Some((pr, pc)) = m
                .iter()
                .filter(|(&(r, c), _)| r >= t && c >= t)
                .min_by(|(&(r1, c1), v1), (&(r2, c2), v2)| {
                    v1.abs().cmp(&v2.abs()).then((r1, c1).cmp(&(r2, c2)))
                })
                .map(|(&(r, c), _)| (r, c))
            else {
                break;
            };
            swap_rows(&mut m, pr, t);
            swap_cols(&mut m, pc, t);
            'reduce: loop {
                let pivot = m[&(t, t)].clone();
                // clear column t
                let col_hits: Vec<usize> = m
                    .keys()
                    .filter(|&&(r, c)| c == t && r != t)
                    .map(|&(r, _)| r)
                    .collect();
                for r in col_hits {
                    let a = m[&(r, t)].clone();
                    let (q, rem) = a.div_rem(&pivot);
                    sub_scaled_row(&mut m, r, t, &q, self.cols);
                    if !rem.is_zero() {
                        swap_rows(&mut m, r, t);
                        continue 'reduce;
                    }
                }
                // clear row t
                let row_hits: Vec<usize> = m
                    .keys()
                    .filter(|&&(r, c)| r == t && c != t)
                    .map(|&(_, c)| c)
                    .collect();
                for c in row_hits {
                    let a = m[&(t, c)].clone();
                    let (q, rem) = a.div_rem(&pivot);
                    sub_scaled_col(&mut m, c, t, &q, self.rows);
                    if !rem.is_zero() {
                        swap_cols(&mut m, c, t);
                        continue 'reduce;
                    }
                }
                // divisibility: pivot must divide the remaining submatrix;
                // pull an offending row into the pivot row and reduce again
                let offender = m
                    .iter()
                    .find(|(&(r, c), v)| r > t && c > t && !v.mod_floor(&pivot).is_zero())
                    .map(|(&(r, _), _)| r);
                if let Some(r) = offender {
                    add_row(&mut m, t, r, self.cols);
                    continue 'reduce;
                }
                break;
            }
            let pivot = m.remove(&(t, t)).expect("pivot present");
            diag.push(pivot.abs());
            t += 1;
        }
        while diag.len() < bound {
            diag.push(T::zero());
        }
        diag
    }

    /// Least k >= 1 with k·v in the row lattice, or `Infinite` when v is not
    /// even in the rational row space. Solved against the Hermite basis; the
    /// result is the lcm of the coefficient denominators.
    pub fn order_in_quotient(&self, v: &[T]) -> Result<QuotientOrder<T>, DimensionMismatch> {
        if v.len() != self.cols {
            return Err(DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let hnf = self.hermite_normal_form().h;
        let mut residual: Vec<Ratio<T>> = v.iter().cloned().map(Ratio::from_integer).collect();
        let mut k = T::one();
        for i in 0..hnf.rows() {
            let row: Vec<(usize, T)> = hnf
                .entries
                .range((i, 0)..(i + 1, 0))
                .map(|(&(_, c), v)| (c, v.clone()))
                .collect();
            let Some(&(pc, ref pv)) = row.first() else {
                continue;
            };
            if residual[pc].is_zero() {
                continue;
            }
            let coeff = residual[pc].clone() / Ratio::from_integer(pv.clone());
            for (c, v) in &row {
                let delta = coeff.clone() * Ratio::from_integer(v.clone());
                residual[*c] = residual[*c].clone() - delta;
            }
            k = k.lcm(coeff.denom());
        }
        if residual.iter().any(|r| !r.is_zero()) {
            return Ok(QuotientOrder::Infinite);
        }
        Ok(QuotientOrder::Finite(k))
    }
}

/// Hermite normal form with its row-transform record.
#[derive(Clone, Debug)]
pub struct Hnf<T> {
    pub h: SparseMatrix<T>,
    pub transform: SparseMatrix<T>,
}

fn reduce_content<T: MatrixEntry>(mut row: BTreeMap<usize, T>) -> BTreeMap<usize, T> {
    let mut g = T::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g.is_one() {
            return row;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for v in row.values_mut() {
            *v = v.clone() / g.clone();
        }
    }
    row
}

/// Pivot minimizing (row_nnz - 1) * (col_nnz - 1), ties by lowest (row, col)
/// of the stored position.
fn markowitz_pivot<T: MatrixEntry>(rows: &[BTreeMap<usize, T>]) -> Option<(usize, usize)> {
    let mut col_counts: BTreeMap<usize, usize> = BTreeMap::new();
    for row in rows {
        for &c in row.keys() {
            *col_counts.entry(c).or_insert(0) += 1;
        }
    }
    let mut best: Option<(usize, (usize, usize))> = None;
    for (i, row) in rows.iter().enumerate() {
        for &c in row.keys() {
            let score = (row.len() - 1) * (col_counts[&c] - 1);
            let key = (score, (i, c));
            if best.is_none_or(|(s, pos)| key < (s, pos)) {
                best = Some(key);
            }
        }
    }
    best.map(|(_, pos)| pos)
}

fn first_bit(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .position(|&b| b != 0)
        .map(|i| i * 64 + bits[i].trailing_zeros() as usize)
}

fn bit_set(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn negate_row<T: MatrixEntry>(row: &mut BTreeMap<usize, T>) {
    for v in row.values_mut() {
        *v = T::zero() - v.clone();
    }
}

/// dst -= q * src
fn row_sub_scaled<T: MatrixEntry>(dst: &mut BTreeMap<usize, T>, src: &BTreeMap<usize, T>, q: &T) {
    for (&c, v) in src {
        let cur = dst.get(&c).cloned().unwrap_or_else(T::zero);
        let new = cur - q.clone() * v.clone();
        if new.is_zero() {
            dst.remove(&c);
        } else {
            dst.insert(c, new);
        }
    }
}

fn split_two<T>(rows: &mut [BTreeMap<usize, T>], src: usize, dst: usize) -> (&BTreeMap<usize, T>, &mut BTreeMap<usize, T>) {
    assert_ne!(src, dst);
    if src < dst {
        let (a, b) = rows.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = rows.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

fn swap_rows<T: Clone>(m: &mut BTreeMap<(usize, usize), T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    let mut moved: Vec<((usize, usize), T)> = Vec::new();
    let keys: Vec<(usize, usize)> = m.keys().filter(|&&(r, _)| r == a || r == b).cloned().collect();
    for k in keys {
        let v = m.remove(&k).unwrap();
        let nr = if k.0 == a { b } else { a };
        moved.push(((nr, k.1), v));
    }
    m.extend(moved);
}

fn swap_cols<T: Clone>(m: &mut BTreeMap<(usize, usize), T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    let mut moved: Vec<((usize, usize), T)> = Vec::new();
    let keys: Vec<(usize, usize)> = m.keys().filter(|&&(_, c)| c == a || c == b).cloned().collect();
    for k in keys {
        let v = m.remove(&k).unwrap();
        let nc = if k.1 == a { b } else { a };
        moved.push(((k.0, nc), v));
    }
    m.extend(moved);
}

/// row r -= q * row t
fn sub_scaled_row<T: MatrixEntry>(m: &mut BTreeMap<(usize, usize), T>, r: usize, t: usize, q: &T, cols: usize) {
    if q.is_zero() {
        return;
    }
    for c in 0..cols {
        let Some(tv) = m.get(&(t, c)).cloned() else { continue };
        let cur = m.get(&(r, c)).cloned().unwrap_or_else(T::zero);
        let new = cur - q.clone() * tv;
        if new.is_zero() {
            m.remove(&(r, c));
        } else {
            m.insert((r, c), new);
        }
    }
}

/// col c -= q * col t
fn sub_scaled_col<T: MatrixEntry>(m: &mut BTreeMap<(usize, usize), T>, c: usize, t: usize, q: &T, rows: usize) {
    if q.is_zero() {
        return;
    }
    for r in 0..rows {
        let Some(tv) = m.get(&(r, t)).cloned() else { continue };
        let cur = m.get(&(r, c)).cloned().unwrap_or_else(T::zero);
        let new = cur - q.clone() * tv;
        if new.is_zero() {
            m.remove(&(r, c));
        } else {
            m.insert((r, c), new);
        }
    }
}

/// row dst += row src
fn add_row<T: MatrixEntry>(m: &mut BTreeMap<(usize, usize), T>, dst: usize, src: usize, cols: usize) {
    for c in 0..cols {
        let Some(sv) = m.get(&(src, c)).cloned() else { continue };
        let cur = m.get(&(dst, c)).cloned().unwrap_or_else(T::zero);
        let new = cur + sv;
        if new.is_zero() {
            m.remove(&(dst, c));
        } else {
            m.insert((dst, c), new);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;

    type M = SparseMatrix<Int>;

    #[test]
    fn rank_rational_basics() {
        assert_eq!(M::new(3, 4).rank_rational(), 0);
        let mut id = M::new(5, 5);
        for i in 0..5 {
            id.set(i, i, Int::from(1));
        }
        assert_eq!(id.rank_rational(), 5);
        // 2x2 minor 4 != 0
        let m = M::from_rows(&[&[2, 0], &[0, 2], &[3, 3]]);
        assert_eq!(m.rank_rational(), 2);
    }

    #[test]
    fn rank_gf2_basics() {
        let mut id = M::new(4, 4);
        for i in 0..4 {
            id.set(i, i, Int::from(1));
        }
        assert_eq!(id.rank_gf2(), 4);
        let m = M::from_rows(&[&[2, 2], &[2, 2]]);
        assert_eq!(m.rank_gf2(), 0); // even entries vanish mod 2
        // vertex-edge incidence of a 3-cycle
        let m = M::from_rows(&[&[1, 0, 1], &[1, 1, 0], &[0, 1, 1]]);
        assert_eq!(m.rank_gf2(), 2);
    }

    #[test]
    fn hnf_examples() {
        let id = M::from_rows(&[&[1, 0], &[0, 1]]);
        assert_eq!(id.hermite_normal_form().h, id);

        let m = M::from_rows(&[&[2, 0], &[0, 2], &[3, 3]]);
        let h = m.hermite_normal_form().h;
        assert_eq!(h, M::from_rows(&[&[1, 1], &[0, 2]]));

        let empty = M::new(0, 0);
        assert_eq!(empty.hermite_normal_form().h.rows(), 0);
    }

    #[test]
    fn hnf_transform_reproduces_h() {
        let m = M::from_rows(&[&[2, 0], &[0, 2], &[3, 3]]);
        let hnf = m.hermite_normal_form();
        let product = hnf.transform.multiply(&m);
        for i in 0..hnf.h.rows() {
            for j in 0..m.cols() {
                assert_eq!(product.get(i, j), hnf.h.get(i, j));
            }
        }
        for i in hnf.h.rows()..m.rows() {
            for j in 0..m.cols() {
                assert!(product.get(i, j).is_zero());
            }
        }
    }

    #[test]
    fn snf_examples() {
        assert_eq!(M::from_rows(&[&[6]]).smith_normal_form(), vec![Int::from(6)]);
        let m = M::from_rows(&[&[2, 0], &[0, 2], &[3, 3]]);
        assert_eq!(m.smith_normal_form(), vec![Int::from(1), Int::from(2)]);
        assert_eq!(M::new(2, 2).smith_normal_form(), vec![Int::from(0), Int::from(0)]);
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = M::from_rows(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]);
        let d = m.smith_normal_form();
        assert_eq!(d, vec![Int::from(2), Int::from(2), Int::from(60)]);
        for w in d.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].clone().mod_floor(&w[0]).is_zero());
            }
        }
    }

    #[test]
    fn order_in_quotient_examples() {
        let lattice = M::from_rows(&[&[2, 0], &[0, 2], &[3, 3]]);
        let zero = vec![Int::from(0), Int::from(0)];
        assert_eq!(lattice.order_in_quotient(&zero).unwrap(), QuotientOrder::Finite(Int::from(1)));
        let v = vec![Int::from(1), Int::from(0)];
        assert_eq!(lattice.order_in_quotient(&v).unwrap(), QuotientOrder::Finite(Int::from(2)));
        let v = vec![Int::from(1), Int::from(1)];
        assert_eq!(lattice.order_in_quotient(&v).unwrap(), QuotientOrder::Finite(Int::from(1)));
    }

    #[test]
    fn order_in_quotient_infinite_and_errors() {
        let lattice = M::from_rows(&[&[2, 0]]);
        let v = vec![Int::from(0), Int::from(1)];
        assert_eq!(lattice.order_in_quotient(&v).unwrap(), QuotientOrder::Infinite);
        let bad = vec![Int::from(1)];
        assert!(lattice.order_in_quotient(&bad).is_err());
    }

    #[test]
    fn rank_matches_snf_nonzero_count() {
        let m = M::from_rows(&[&[2, 4, 6], &[1, 2, 3], &[0, 0, 5]]);
        let snf = m.smith_normal_form();
        let nonzero = snf.iter().filter(|d| !d.is_zero()).count();
        assert_eq!(m.rank_rational(), nonzero);
    }

    #[test]
    fn generic_over_machine_integers() {
        let m: SparseMatrix<i64> = SparseMatrix::from_rows(&[&[2, 0], &[0, 2], &[3, 3]]);
        assert_eq!(m.rank_rational(), 2);
        assert_eq!(m.smith_normal_form(), vec![1, 2]);
        let m128: SparseMatrix<i128> = SparseMatrix::from_rows(&[&[5]]);
        assert_eq!(m128.rank_rational(), 1);
    }
}
