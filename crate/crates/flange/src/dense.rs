//! Dense row-major matrix kernel over F_p.
//!
//! Crate-internal: the graded layer and the pointwise oracle share these
//! routines. Empty matrices (zero rows or columns) are first class
//! throughout; their rank is 0 and products with them have the obvious
//! shapes.

use crate::field::{FieldScalar, Fp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Dense {
    pub rows: usize,
    pub cols: usize,
    data: Vec<FieldScalar>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Dense::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldScalar {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldScalar) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[FieldScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldScalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Dense {
        let mut t = Dense::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `self * rhs`.
    ///
    /// # Panics
    ///
    /// Panics if the inner dimensions disagree.
    pub fn mul(&self, rhs: &Dense, fp: Fp) -> Dense {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = Dense::zeros(self.rows, rhs.cols);
        let p = u64::from(fp.characteristic());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let a = u64::from(a);
                let out_row = i * out.cols;
                let rhs_row = rhs.row(k);
                for j in 0..rhs.cols {
                    let b = rhs_row[j];
                    if b == 0 {
                        continue;
                    }
                    let cur = u64::from(out.data[out_row + j]);
                    out.data[out_row + j] = ((cur + a * u64::from(b)) % p) as u32;
                }
            }
        }
        out
    }

    /// `self - rhs`, elementwise.
    pub fn sub(&self, rhs: &Dense, fp: Fp) -> Dense {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (o, &r) in out.data.iter_mut().zip(&rhs.data) {
            *o = fp.sub(*o, r);
        }
        out
    }

    /// Rank by row elimination on a scratch copy.
    pub fn rank(&self, fp: Fp) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let pivot = (rank..m.rows).find(|&i| m.get(i, col) != 0);
            let Some(pivot) = pivot else { continue };
            m.swap_rows(rank, pivot);
            let inv = fp.inv(m.get(rank, col));
            for i in (rank + 1)..m.rows {
                let f = m.get(i, col);
                if f == 0 {
                    continue;
                }
                let f = fp.mul(f, inv);
                m.saxpy_row(i, rank, fp.neg(f), col, fp);
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let t = self.get(a, j);
            self.set(a, j, self.get(b, j));
            self.set(b, j, t);
        }
    }

    /// `row[i] += f * row[src]` from column `from` on.
    fn saxpy_row(&mut self, i: usize, src: usize, f: FieldScalar, from: usize, fp: Fp) {
        let p = u64::from(fp.characteristic());
        let f = u64::from(f);
        let (ri, rs) = (i * self.cols, src * self.cols);
        for j in from..self.cols {
            let v = u64::from(self.data[ri + j]) + f * u64::from(self.data[rs + j]);
            self.data[ri + j] = (v % p) as u32;
        }
    }

    /// Solve `A x = rhs` using only the columns listed in `cols`, trying
    /// pivots in the listed order and setting free variables to zero.
    /// Returns coefficients aligned with `cols`, or `None` if inconsistent.
    pub fn solve_restricted(
        &self,
        fp: Fp,
        cols: &[usize],
        rhs: &[FieldScalar],
    ) -> Option<Vec<FieldScalar>> {
        assert_eq!(rhs.len(), self.rows);
        let k = cols.len();
        // Augmented [A[:, cols] | rhs], reduced to RREF over the first k
        // columns with pivots chosen left to right.
        let mut aug = Dense::zeros(self.rows, k + 1);
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                aug.set(i, jj, self.get(i, j));
            }
            aug.set(i, k, rhs[i]);
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for j in 0..k {
            let Some(pr) = (r..aug.rows).find(|&i| aug.get(i, j) != 0) else {
                continue;
            };
            aug.swap_rows(r, pr);
            let inv = fp.inv(aug.get(r, j));
            for jj in j..=k {
                aug.set(r, jj, fp.mul(aug.get(r, jj), inv));
            }
            for i in 0..aug.rows {
                if i == r {
                    continue;
                }
                let f = aug.get(i, j);
                if f != 0 {
                    aug.saxpy_row(i, r, fp.neg(f), j, fp);
                }
            }
            pivots.push((r, j));
            r += 1;
            if r == aug.rows {
                break;
            }
        }
        for i in r..aug.rows {
            if aug.get(i, k) != 0 {
                return None;
            }
        }
        let mut x = vec![0; k];
        for (row, col) in pivots {
            x[col] = aug.get(row, k);
        }
        Some(x)
    }
}

/// Column echelon form with coefficient tracking.
///
/// Columns are processed left to right; the pivot of a column is its
/// largest nonzero row index, and pivots of retained columns are pairwise
/// distinct. Each retained column stores its expression over the original
/// columns, which only involves original indices `<=` its defining index.
pub(crate) struct ColEchelon {
    /// Retained (independent) columns after reduction.
    cols: Vec<Vec<FieldScalar>>,
    /// Expression of each retained column over the original columns.
    coeffs: Vec<Vec<FieldScalar>>,
    /// Original column index that produced each retained column.
    defining: Vec<usize>,
    /// Row index -> retained column owning that pivot.
    owner: Vec<Option<usize>>,
    n_orig: usize,
}

impl ColEchelon {
    pub fn new(a: &Dense, fp: Fp) -> Self {
        let mut e = ColEchelon {
            cols: Vec::new(),
            coeffs: Vec::new(),
            defining: Vec::new(),
            owner: vec![None; a.rows],
            n_orig: a.cols,
        };
        for j in 0..a.cols {
            let mut v = a.column(j);
            let mut c = vec![0; a.cols];
            c[j] = 1;
            loop {
                let Some(piv) = last_nonzero(&v) else { break };
                match e.owner[piv] {
                    Some(t) => {
                        let f = fp.mul(v[piv], fp.inv(e.cols[t][piv]));
                        sub_scaled(&mut v, &e.cols[t], f, fp);
                        sub_scaled(&mut c, &e.coeffs[t], f, fp);
                    }
                    None => {
                        e.owner[piv] = Some(e.cols.len());
                        e.cols.push(v);
                        e.coeffs.push(c);
                        e.defining.push(j);
                        break;
                    }
                }
            }
        }
        e
    }

    /// Reduce `v` to zero against retained columns whose defining original
    /// column satisfies `allowed`. On success returns `x` over the original
    /// columns with `A x = v`; returns `None` if a forced pivot owner is
    /// missing or disallowed (then `v` is not in the allowed span).
    pub fn express(
        &self,
        v: &[FieldScalar],
        fp: Fp,
        mut allowed: impl FnMut(usize) -> bool,
    ) -> Option<Vec<FieldScalar>> {
        let mut v = v.to_vec();
        let mut x = vec![0; self.n_orig];
        while let Some(piv) = last_nonzero(&v) {
            let t = self.owner[piv]?;
            if !allowed(self.defining[t]) {
                return None;
            }
            let f = fp.mul(v[piv], fp.inv(self.cols[t][piv]));
            sub_scaled(&mut v, &self.cols[t], f, fp);
            // v = ... + f * cols[t] and cols[t] = A * coeffs[t].
            add_scaled(&mut x, &self.coeffs[t], f, fp);
        }
        Some(x)
    }
}

fn last_nonzero(v: &[FieldScalar]) -> Option<usize> {
    v.iter().rposition(|&x| x != 0)
}

fn sub_scaled(v: &mut [FieldScalar], w: &[FieldScalar], f: FieldScalar, fp: Fp) {
    for (a, &b) in v.iter_mut().zip(w) {
        *a = fp.sub(*a, fp.mul(f, b));
    }
}

fn add_scaled(v: &mut [FieldScalar], w: &[FieldScalar], f: FieldScalar, fp: Fp) {
    for (a, &b) in v.iter_mut().zip(w) {
        *a = fp.add(*a, fp.mul(f, b));
    }
}

/// Fully reduced basis of a column space: pivot entries are 1, pivot rows
/// of distinct basis vectors are distinct and cleared in all other basis
/// vectors, so expressing a vector needs a single pass.
pub(crate) struct ColBasis {
    pub basis: Vec<Vec<FieldScalar>>,
    pub pivots: Vec<usize>,
    rows: usize,
}

impl ColBasis {
    pub fn new(columns: impl Iterator<Item = Vec<FieldScalar>>, rows: usize, fp: Fp) -> Self {
        let mut b = ColBasis {
            basis: Vec::new(),
            pivots: Vec::new(),
            rows,
        };
        for col in columns {
            debug_assert_eq!(col.len(), rows);
            b.insert(col, fp);
        }
        b
    }

    pub fn from_dense(a: &Dense, fp: Fp) -> Self {
        ColBasis::new((0..a.cols).map(|j| a.column(j)), a.rows, fp)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn insert(&mut self, mut v: Vec<FieldScalar>, fp: Fp) {
        self.reduce_in_place(&mut v, fp);
        let Some(piv) = last_nonzero(&v) else { return };
        let inv = fp.inv(v[piv]);
        for a in v.iter_mut() {
            *a = fp.mul(*a, inv);
        }
        // Clear the new pivot row from the existing basis to stay fully
        // reduced; their own pivot entries are untouched since v is reduced.
        for t in 0..self.basis.len() {
            let f = self.basis[t][piv];
            if f != 0 {
                let vv = v.clone();
                sub_scaled(&mut self.basis[t], &vv, f, fp);
            }
        }
        self.pivots.push(piv);
        self.basis.push(v);
    }

    /// Subtract the projection of `v` onto the span. Returns the
    /// coefficients used, aligned with `basis`; `v` becomes the residue.
    pub fn reduce_in_place(&self, v: &mut [FieldScalar], fp: Fp) -> Vec<FieldScalar> {
        debug_assert_eq!(v.len(), self.rows);
        let mut coeffs = vec![0; self.basis.len()];
        for t in 0..self.basis.len() {
            let f = v[self.pivots[t]];
            if f != 0 {
                sub_scaled(v, &self.basis[t], f, fp);
                coeffs[t] = f;
            }
        }
        coeffs
    }
}
