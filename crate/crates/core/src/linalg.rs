//! Exact linear algebra over any [`Field`]: Gauss-Jordan reduction,
//! kernels, subspaces in canonical RREF form, and enumeration of all
//! subspaces of a given dimension.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::field::{Elem, Extension, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Elem>]) -> Result<Mat> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            if let Some(&bad) = r.iter().find(|&&v| !field.contains(v)) {
                return Err(Error::InvalidParameters(format!("{bad} is not an element of {field}")));
            }
            data.extend_from_slice(r);
        }
        Ok(Mat { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn from_columns(field: &Field, rows: usize, cols: &[Vec<Elem>]) -> Result<Mat> {
        let mut m = Mat::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch("column length".into()));
            }
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Elem>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), f.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, x: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut out = vec![0; self.cols];
        for (r, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(r, c)));
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan reduction of a list of rows; the first `rank` rows of the
/// result are the reduced nonzero rows. Returns the pivot columns.
fn rref_rows(field: &Field, rows: &mut [Vec<Elem>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        if inv != 1 {
            for v in rows[r][c..].iter_mut() {
                *v = field.mul(*v, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = field.neg(row[c]);
            for (v, &pv) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if pv != 0 {
                    *v = field.add(*v, field.mul(f, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the given rows by forward elimination; the rows are consumed.
pub fn rank_in_place(field: &Field, rows: &mut Vec<Vec<Elem>>) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = field.inv(rows[rank][c]).expect("pivot is nonzero");
        for i in rank + 1..rows.len() {
            if rows[i][c] == 0 {
                continue;
            }
            let f = field.neg(field.mul(rows[i][c], inv));
            for j in c..cols {
                let pv = rows[rank][j];
                if pv != 0 {
                    rows[i][j] = field.add(rows[i][j], field.mul(f, pv));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Reduced row-echelon form with first-nonzero pivoting in column order.
pub fn rref(m: &Mat) -> Rref {
    let mut rows = m.row_vecs();
    let pivots = rref_rows(&m.field, &mut rows, m.cols);
    let mut matrix = m.clone();
    for (r, row) in rows.iter().enumerate() {
        matrix.data[r * m.cols..(r + 1) * m.cols].copy_from_slice(row);
    }
    Rref { matrix, rank: pivots.len(), pivots }
}

/// Right kernel `{ v : M v = 0 }` as a subspace of `F^cols`.
pub fn kernel(m: &Mat) -> Subspace {
    let Rref { matrix, rank, pivots } = rref(m);
    let f = &m.field;
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![0; m.cols];
        v[fc] = 1;
        for (r, &pc) in pivots.iter().enumerate().take(rank) {
            v[pc] = f.neg(matrix.get(r, fc));
        }
        basis.push(v);
    }
    Subspace::span(f, m.cols, &basis).expect("kernel vectors have the ambient length")
}

/// Some solution of `A v = b`, if one exists.
pub fn solve(a: &Mat, b: &[Elem]) -> Option<Vec<Elem>> {
    assert_eq!(b.len(), a.rows, "right-hand side length");
    let f = &a.field;
    let mut rows: Vec<Vec<Elem>> = (0..a.rows)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r]);
            row
        })
        .collect();
    let pivots = rref_rows(f, &mut rows, a.cols + 1);
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut v = vec![0; a.cols];
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = rows[r][a.cols];
    }
    Some(v)
}

/// Columns are the base coordinates of the entries of `v`, giving a
/// `[sup:base] x len(v)` matrix over the base field.
pub fn expand_over_subfield(v: &[Elem], ext: &Extension) -> Mat {
    let m = ext.degree();
    let mut out = Mat::zeros(ext.base(), m, v.len());
    for (j, &x) in v.iter().enumerate() {
        for (i, c) in ext.coords(x).into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    out
}

/// Rank of `v` over the base field of `ext`. Debug builds cross-check the
/// result against `len(v) - dim ker(a -> v . a)`, with every kernel vector
/// verified in the larger field.
pub fn rank_over_subfield(v: &[Elem], ext: &Extension) -> usize {
    let expanded = expand_over_subfield(v, ext);
    let rank = rref(&expanded).rank;
    #[cfg(debug_assertions)]
    {
        let ker = kernel(&expanded);
        let sup = ext.sup();
        for a in ker.basis_rows() {
            let dot = v
                .iter()
                .zip(a)
                .fold(0, |acc, (&c, &ai)| sup.add(acc, sup.mul(c, ext.embed(ai))));
            debug_assert_eq!(dot, 0, "kernel vector of the dot-product map");
        }
        debug_assert_eq!(v.len() - ker.dim(), rank);
    }
    rank
}

/// Flattens `v in sup^k` to its `k * [sup:base]` base coordinates.
pub fn expand_vector(v: &[Elem], ext: &Extension) -> Vec<Elem> {
    let mut out = Vec::with_capacity(v.len() * ext.degree());
    for &x in v {
        ext.push_coords(x, &mut out);
    }
    out
}

/// Inverse of [`expand_vector`].
pub fn collapse_vector(coords: &[Elem], ext: &Extension) -> Vec<Elem> {
    coords.chunks(ext.degree()).map(|c| ext.from_coords(c)).collect()
}

/// A subspace of `F^ambient`, stored as its unique RREF basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Elem>,
    pivots: Vec<usize>,
}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.characteristic().hash(state);
        self.field.modulus_int().hash(state);
        self.ambient.hash(state);
        self.basis.hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}^{}: ", self.dim(), self.field, self.ambient)?;
        f.debug_list().entries(self.basis_rows()).finish()?;
        write!(f, ")")
    }
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Subspace { field: field.clone(), ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        let m = Mat::identity(field, ambient);
        Subspace { field: field.clone(), ambient, basis: m.data, pivots: (0..ambient).collect() }
    }

    /// Span of arbitrary vectors (possibly dependent).
    pub fn span(field: &Field, ambient: usize, vectors: &[Vec<Elem>]) -> Result<Subspace> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient}",
                v.len()
            )));
        }
        let mut rows = vectors.to_vec();
        Ok(Self::from_rows_unchecked(field, ambient, &mut rows))
    }

    fn from_rows_unchecked(field: &Field, ambient: usize, rows: &mut [Vec<Elem>]) -> Subspace {
        let pivots = rref_rows(field, rows, ambient);
        let mut basis = Vec::with_capacity(pivots.len() * ambient);
        for r in rows.iter().take(pivots.len()) {
            basis.extend_from_slice(r);
        }
        Subspace { field: field.clone(), ambient, basis, pivots }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        self.basis.chunks(self.ambient.max(1)).take(self.dim())
    }

    pub fn basis_vecs(&self) -> Vec<Vec<Elem>> {
        self.basis_rows().map(<[Elem]>::to_vec).collect()
    }

    pub fn basis_matrix(&self) -> Mat {
        Mat { field: self.field.clone(), rows: self.dim(), cols: self.ambient, data: self.basis.clone() }
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// Reduces `v` against the RREF basis; zero iff `v` lies in the subspace.
    fn reduce(&self, v: &mut [Elem]) {
        let f = &self.field;
        for (row, &pc) in self.basis_rows().zip(&self.pivots) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let neg = f.neg(c);
            for (x, &b) in v.iter_mut().zip(row) {
                if b != 0 {
                    *x = f.add(*x, f.mul(neg, b));
                }
            }
        }
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis_rows().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut rows: Vec<Vec<Elem>> = self.basis_vecs();
        rows.extend(other.basis_vecs());
        Ok(Self::from_rows_unchecked(&self.field, self.ambient, &mut rows))
    }

    /// Intersection by the Zassenhaus construction.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let n = self.ambient;
        let mut rows: Vec<Vec<Elem>> = Vec::with_capacity(self.dim() + other.dim());
        for r in self.basis_rows() {
            let mut row = r.to_vec();
            row.extend_from_slice(r);
            rows.push(row);
        }
        for r in other.basis_rows() {
            let mut row = r.to_vec();
            row.extend(std::iter::repeat_n(0, n));
            rows.push(row);
        }
        let rank = rref_rows(&self.field, &mut rows, 2 * n).len();
        let inter: Vec<Vec<Elem>> = rows[..rank]
            .iter()
            .filter(|r| r[..n].iter().all(|&x| x == 0))
            .map(|r| r[n..].to_vec())
            .collect();
        Subspace::span(&self.field, n, &inter)
    }

    /// Dimension of `self + other` without materialising it.
    pub fn sum_dim(&self, other: &Subspace) -> Result<usize> {
        self.check_compatible(other)?;
        let mut rows: Vec<Vec<Elem>> = self.basis_vecs();
        rows.extend(other.basis_vecs());
        Ok(rank_in_place(&self.field, &mut rows))
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self == other
    }

    /// Image under `v -> v A` for a square matrix `A`.
    pub fn image(&self, a: &Mat) -> Result<Subspace> {
        if a.rows() != self.ambient || a.cols() != self.ambient {
            return Err(Error::DimensionMismatch("action matrix size".into()));
        }
        let rows: Vec<Vec<Elem>> = self.basis_rows().map(|r| a.left_mul_vec(r)).collect();
        Subspace::span(&self.field, self.ambient, &rows)
    }

    /// All `q^dim` vectors of the subspace, ordered by their coefficient
    /// tuple over the RREF basis.
    pub fn vectors(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let q = f.order();
        let total = q.pow(self.dim() as u32);
        let mut out = Vec::with_capacity(total as usize);
        let mut coeffs = vec![0u64; self.dim()];
        for idx in 0..total {
            let mut rest = idx;
            for c in coeffs.iter_mut().rev() {
                *c = rest % q;
                rest /= q;
            }
            let mut v = vec![0; self.ambient];
            for (row, &c) in self.basis_rows().zip(&coeffs) {
                if c == 0 {
                    continue;
                }
                for (x, &b) in v.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(c, b));
                }
            }
            out.push(v);
        }
        out
    }
}

/// Gaussian binomial coefficient `[n choose k]_q`, saturating at `u128::MAX`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        let a = q.checked_pow((n - i) as u32).and_then(|v| v.checked_sub(1));
        let b = q.checked_pow((i + 1) as u32).and_then(|v| v.checked_sub(1));
        match (a.and_then(|a| num.checked_mul(a)), b.and_then(|b| den.checked_mul(b))) {
            (Some(nn), Some(dd)) => {
                let g = gcd(nn, dd);
                num = nn / g;
                den = dd / g;
            }
            _ => return u128::MAX,
        }
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `|GL(n, q)|`, saturating.
pub fn general_linear_order(n: usize, q: u64) -> u128 {
    let q = q as u128;
    let Some(qn) = q.checked_pow(n as u32) else {
        return u128::MAX;
    };
    (0..n).try_fold(1u128, |acc, i| acc.checked_mul(qn - q.pow(i as u32))).unwrap_or(u128::MAX)
}

/// Lists every `k`-dimensional subspace of `F^n` exactly once: by pivot
/// pattern in lexicographic order, then by the free entries read row by row
/// as a base-`q` number.
#[derive(Clone, Debug)]
pub struct SubspaceEnumerator {
    field: Field,
    n: usize,
    k: usize,
    patterns: Vec<Vec<usize>>,
    /// Cumulative counts; `offsets[i]` is the index of the first subspace
    /// with pattern `i`.
    offsets: Vec<u128>,
    total: u128,
    next: u128,
}

pub fn enumerate_subspaces(field: &Field, n: usize, k: usize, budget: u64) -> Result<SubspaceEnumerator> {
    if k > n {
        return Err(Error::InvalidParameters(format!("cannot have a {k}-dim subspace of F^{n}")));
    }
    let total = gaussian_binomial(n, k, field.order());
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { needed: total, budget });
    }
    let mut patterns = Vec::new();
    let mut offsets = Vec::new();
    let mut acc: u128 = 0;
    let mut pattern: Vec<usize> = (0..k).collect();
    loop {
        offsets.push(acc);
        acc += (field.order() as u128).pow(free_count(&pattern, n) as u32);
        patterns.push(pattern.clone());
        // next k-combination in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| pattern[i] < n - k + i) else {
            break;
        };
        pattern[i] += 1;
        for j in i + 1..k {
            pattern[j] = pattern[j - 1] + 1;
        }
    }
    debug_assert_eq!(acc, total);
    Ok(SubspaceEnumerator { field: field.clone(), n, k, patterns, offsets, total, next: 0 })
}

fn free_count(pivots: &[usize], n: usize) -> usize {
    pivots
        .iter()
        .map(|&p| (p + 1..n).filter(|c| !pivots.contains(c)).count())
        .sum()
}

impl SubspaceEnumerator {
    pub fn total(&self) -> u128 {
        self.total
    }

    /// The subspace with the given enumeration index.
    pub fn get(&self, index: u128) -> Option<Subspace> {
        if index >= self.total {
            return None;
        }
        let pi = self.offsets.partition_point(|&o| o <= index) - 1;
        let pivots = &self.patterns[pi];
        let mut local = index - self.offsets[pi];
        let q = self.field.order() as u128;
        let slots: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| {
                (p + 1..self.n).filter(|c| !pivots.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut basis = vec![0; self.k * self.n];
        for (r, &p) in pivots.iter().enumerate() {
            basis[r * self.n + p] = 1;
        }
        for &(r, c) in slots.iter().rev() {
            basis[r * self.n + c] = (local % q) as Elem;
            local /= q;
        }
        Some(Subspace { field: self.field.clone(), ambient: self.n, basis, pivots: pivots.clone() })
    }
}

impl Iterator for SubspaceEnumerator {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let s = self.get(self.next)?;
        self.next += 1;
        Some(s)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = usize::try_from(self.total - self.next).unwrap_or(usize::MAX);
        (rest, Some(rest))
    }
}

/// Integer-indexed vectors of `F^n`: index order is lexicographic order of
/// the coordinate tuples.
pub fn vector_from_index(field: &Field, n: usize, mut index: u128) -> Vec<Elem> {
    let q = field.order() as u128;
    let mut v = vec![0; n];
    for x in v.iter_mut().rev() {
        *x = (index % q) as Elem;
        index /= q;
    }
    v
}

/// Number of points of the projective space over `F^k`, `(q^k - 1)/(q - 1)`.
pub fn projective_count(q: u64, k: usize) -> u128 {
    let q = q as u128;
    match q.checked_pow(k as u32) {
        Some(qk) => (qk - 1) / (q - 1),
        None => u128::MAX,
    }
}

/// The `index`-th projective point of `F^k`, normalised so that its first
/// nonzero coordinate is 1. Points are listed in lexicographic order of
/// their coordinate tuples, so `(0, .., 0, 1)` comes first.
pub fn projective_point(field: &Field, k: usize, mut index: u128) -> Vec<Elem> {
    let q = field.order() as u128;
    for lead in (0..k).rev() {
        let free = k - 1 - lead;
        let size = q.pow(free as u32);
        if index < size {
            let mut v = vec![0; k];
            v[lead] = 1;
            let tail = vector_from_index(field, free, index);
            v[lead + 1..].copy_from_slice(&tail);
            return v;
        }
        index -= size;
    }
    panic!("projective point index out of range")
}

/// Visits every invertible `n x n` matrix over `field`, built row by row
/// with rows in lexicographic order and each row outside the span of the
/// previous ones. The visitor receives the rows.
pub fn for_each_invertible<B>(
    field: &Field,
    n: usize,
    mut visit: impl FnMut(&[Vec<Elem>]) -> ControlFlow<B>,
) -> Option<B> {
    fn go<B>(
        field: &Field,
        n: usize,
        rows: &mut Vec<Vec<Elem>>,
        span: &Subspace,
        visit: &mut impl FnMut(&[Vec<Elem>]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if rows.len() == n {
            return visit(rows);
        }
        let total = (field.order() as u128).pow(n as u32);
        for idx in 1..total {
            let v = vector_from_index(field, n, idx);
            if span.contains(&v) {
                continue;
            }
            let next = span.sum(&Subspace::span(field, n, std::slice::from_ref(&v)).expect("length n")).expect("same ambient");
            rows.push(v);
            go(field, n, rows, &next, visit)?;
            rows.pop();
        }
        ControlFlow::Continue(())
    }
    let mut rows = Vec::with_capacity(n);
    match go(field, n, &mut rows, &Subspace::zero(field, n), &mut visit) {
        ControlFlow::Break(b) => Some(b),
        ControlFlow::Continue(()) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::canonical(2, 1).unwrap()
    }

    #[test]
    fn rref_basics() {
        let f = f2();
        let id = Mat::identity(&f, 3);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        let z = Mat::zeros(&f, 2, 3);
        assert_eq!(rref(&z).rank, 0);
        let m = Mat::from_rows(&f, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernels() {
        let f = f2();
        assert_eq!(kernel(&Mat::identity(&f, 3)).dim(), 0);
        assert_eq!(kernel(&Mat::zeros(&f, 2, 4)).dim(), 4);
        let m = Mat::from_rows(&f, &[vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        let k = kernel(&m);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis_vecs(), vec![vec![1, 1, 0]]);
    }

    #[test]
    fn subspace_arithmetic() {
        let f = f2();
        let a = Subspace::span(&f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let b = Subspace::span(&f, 4, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(&f, 4));
        let lines: Vec<Subspace> = enumerate_subspaces(&f, 2, 1, 100).unwrap().collect();
        assert_eq!(lines.len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(lines[i].sum(&lines[j]).unwrap().dim(), 2);
                    assert_eq!(lines[i].intersect(&lines[j]).unwrap().dim(), 0);
                }
            }
        }
        let c = Subspace::zero(&f, 3);
        assert!(matches!(a.sum(&c), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn enumeration_counts() {
        let f = f2();
        assert_eq!(enumerate_subspaces(&f, 3, 3, 10).unwrap().count(), 1);
        assert_eq!(enumerate_subspaces(&f, 4, 2, 100).unwrap().count(), 35);
        assert_eq!(gaussian_binomial(8, 3, 2), 97155);
        assert_eq!(gaussian_binomial(9, 3, 2), 788035);
        assert_eq!(
            enumerate_subspaces(&f, 9, 3, 1000).unwrap_err(),
            Error::BudgetExceeded { needed: 788035, budget: 1000 }
        );
    }

    #[test]
    fn enumeration_order_starts_with_leading_pivots() {
        let f = f2();
        let mut e = enumerate_subspaces(&f, 3, 1, 10).unwrap();
        let first = e.next().unwrap();
        assert_eq!(first.basis_vecs(), vec![vec![1, 0, 0]]);
        let second = e.next().unwrap();
        assert_eq!(second.basis_vecs(), vec![vec![1, 0, 1]]);
    }

    #[test]
    fn invertible_matrix_count() {
        let f = f2();
        let mut count = 0u32;
        let _: Option<()> = for_each_invertible(&f, 3, |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(count as u128, general_linear_order(3, 2));
        assert_eq!(general_linear_order(4, 2), 20160);
    }

    #[test]
    fn solving() {
        let f = Field::canonical(3, 1).unwrap();
        let a = Mat::from_rows(&f, &[vec![1, 2], vec![0, 1]]).unwrap();
        let v = solve(&a, &[0, 2]).unwrap();
        assert_eq!(a.left_mul_vec(&[1, 0]).len(), 2);
        assert_eq!((v[0] + 2 * v[1]) % 3, 0);
        assert_eq!(v[1], 2);
        let singular = Mat::from_rows(&f, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(solve(&singular, &[0, 1]).is_none());
    }

    #[test]
    fn expansion_rank() {
        let ext = Extension::canonical(2, 1, 4).unwrap();
        assert_eq!(rank_over_subfield(&[0, 0, 0], &ext), 0);
        let e = crate::field::Embedding::new(&Field::canonical(2, 2).unwrap(), ext.sup()).unwrap();
        let omega = e.image_of_generator();
        assert_eq!(rank_over_subfield(&[1, omega, 0], &ext), 2);
        assert_eq!(rank_over_subfield(&[7, 7, 7, 7], &ext), 1);
        assert!(expand_over_subfield(&[0, 0], &ext).is_zero());
    }
}
