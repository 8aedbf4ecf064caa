//! Matrices over F_p with graded rows and columns.
//!
//! Rows index the codomain, columns the domain. With grades in
//! (Z u {-inf, +inf})^n, a matrix is *valid* when every nonzero entry
//! `(i, j)` satisfies `rg[i] <= cg[j]` componentwise (it then represents a
//! degree-preserving map between free modules with the given generator
//! grades), *anti-valid* when `rg[i] >= cg[j]` (a map from a flat module
//! into an injective one), and *minimal* when it is valid with
//! `rg[i] != cg[j]` at every nonzero entry.
//!
//! Everything is dense and row-major; empty matrices are first class and
//! have rank 0.

use crate::dense::Dense;
use crate::field::{FieldScalar, Fp};
use crate::grade::{
    grade_add, grade_leq, grade_neg, grade_shift, ExtGrade,
};

/// Side of a grade comparison in [`GradedMatrix::submatrix_by_grade`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    /// Keep indices whose grade is `<=` the bound.
    Le,
    /// Keep indices whose grade is `>=` the bound.
    Ge,
}

fn keeps(rel: Rel, grade: &ExtGrade, bound: &ExtGrade) -> bool {
    match rel {
        Rel::Le => grade_leq(grade, bound),
        Rel::Ge => grade_leq(bound, grade),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    field: Fp,
    n: usize,
    mat: Dense,
    row_grades: Vec<ExtGrade>,
    col_grades: Vec<ExtGrade>,
}

impl GradedMatrix {
    /// The zero matrix with the given grade lists.
    ///
    /// # Panics
    ///
    /// Panics if any grade does not have exactly `n` coordinates.
    pub fn zero(
        field: Fp,
        n: usize,
        row_grades: Vec<ExtGrade>,
        col_grades: Vec<ExtGrade>,
    ) -> Self {
        assert!(
            row_grades.iter().chain(&col_grades).all(|g| g.len() == n),
            "grade with wrong number of coordinates"
        );
        let mat = Dense::zeros(row_grades.len(), col_grades.len());
        GradedMatrix {
            field,
            n,
            mat,
            row_grades,
            col_grades,
        }
    }

    /// The identity on a list of generator grades.
    pub fn identity(field: Fp, n: usize, grades: Vec<ExtGrade>) -> Self {
        let mut m = GradedMatrix::zero(field, n, grades.clone(), grades);
        for i in 0..m.nrows() {
            m.mat.set(i, i, 1);
        }
        m
    }

    /// Build from signed integer entries, reduced mod p.
    ///
    /// # Panics
    ///
    /// Panics if the row count or any row length disagrees with the grades.
    pub fn from_rows_i64(
        field: Fp,
        n: usize,
        row_grades: Vec<ExtGrade>,
        col_grades: Vec<ExtGrade>,
        rows: &[&[i64]],
    ) -> Self {
        let mut m = GradedMatrix::zero(field, n, row_grades, col_grades);
        assert_eq!(rows.len(), m.nrows(), "row count mismatch");
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), m.ncols(), "row length mismatch");
            for (j, &v) in row.iter().enumerate() {
                m.mat.set(i, j, field.normalize(v));
            }
        }
        m
    }

    pub(crate) fn from_dense(
        field: Fp,
        n: usize,
        row_grades: Vec<ExtGrade>,
        col_grades: Vec<ExtGrade>,
        mat: Dense,
    ) -> Self {
        assert_eq!(mat.rows, row_grades.len());
        assert_eq!(mat.cols, col_grades.len());
        assert!(row_grades.iter().chain(&col_grades).all(|g| g.len() == n));
        GradedMatrix {
            field,
            n,
            mat,
            row_grades,
            col_grades,
        }
    }

    pub(crate) fn dense(&self) -> &Dense {
        &self.mat
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    /// Number of grade coordinates.
    pub fn params(&self) -> usize {
        self.n
    }

    pub fn nrows(&self) -> usize {
        self.row_grades.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_grades.len()
    }

    pub fn row_grades(&self) -> &[ExtGrade] {
        &self.row_grades
    }

    pub fn col_grades(&self) -> &[ExtGrade] {
        &self.col_grades
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldScalar {
        self.mat.get(i, j)
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: FieldScalar) {
        assert!(v < self.field.characteristic());
        self.mat.set(i, j, v);
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// The first nonzero entry whose grades break `rg <= cg`, if any.
    pub fn find_validity_violation(&self) -> Option<(usize, usize)> {
        self.find_violation(|rg, cg| grade_leq(rg, cg))
    }

    /// The first nonzero entry whose grades break `rg >= cg`, if any.
    pub fn find_anti_validity_violation(&self) -> Option<(usize, usize)> {
        self.find_violation(|rg, cg| grade_leq(cg, rg))
    }

    fn find_violation(&self, ok: impl Fn(&ExtGrade, &ExtGrade) -> bool) -> Option<(usize, usize)> {
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                if self.mat.get(i, j) != 0 && !ok(&self.row_grades[i], &self.col_grades[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Every nonzero entry satisfies `rg <= cg`.
    pub fn is_valid(&self) -> bool {
        self.find_validity_violation().is_none()
    }

    /// Every nonzero entry satisfies `rg >= cg`.
    pub fn is_anti_valid(&self) -> bool {
        self.find_anti_validity_violation().is_none()
    }

    /// Valid with strict grade drop at every nonzero entry.
    pub fn is_minimal(&self) -> bool {
        self.find_violation(|rg, cg| grade_leq(rg, cg) && rg != cg)
            .is_none()
    }

    /// Transpose entries and negate grades: row grades become the negated
    /// column grades and vice versa. An involution; maps valid matrices to
    /// valid matrices and anti-valid to anti-valid.
    pub fn graded_transpose(&self) -> Self {
        GradedMatrix {
            field: self.field,
            n: self.n,
            mat: self.mat.transpose(),
            row_grades: self.col_grades.iter().map(grade_neg).collect(),
            col_grades: self.row_grades.iter().map(grade_neg).collect(),
        }
    }

    /// Subtract a finite vector from every grade; entries are untouched.
    pub fn shift(&self, z: &[i64]) -> Self {
        GradedMatrix {
            field: self.field,
            n: self.n,
            mat: self.mat.clone(),
            row_grades: self.row_grades.iter().map(|g| grade_shift(g, z)).collect(),
            col_grades: self.col_grades.iter().map(|g| grade_shift(g, z)).collect(),
        }
    }

    /// Matrix product `self * rhs`.
    ///
    /// # Panics
    ///
    /// Panics unless the fields and parameter counts agree and the column
    /// grade list of `self` equals the row grade list of `rhs` exactly;
    /// graded maps only compose along identical intermediate grade lists.
    pub fn multiply(&self, rhs: &GradedMatrix) -> Self {
        assert_eq!(self.field, rhs.field, "field mismatch");
        assert_eq!(self.n, rhs.n, "parameter count mismatch");
        assert_eq!(
            self.col_grades, rhs.row_grades,
            "composition error: inner grade lists differ"
        );
        GradedMatrix {
            field: self.field,
            n: self.n,
            mat: self.mat.mul(&rhs.mat, self.field),
            row_grades: self.row_grades.clone(),
            col_grades: rhs.col_grades.clone(),
        }
    }

    /// Graded Kronecker product `self (x) rhs`.
    ///
    /// Blocks are laid out row-major with `self` outermost: entry
    /// `((i, k), (j, l))` of the result is `self[i][j] * rhs[k][l]` at row
    /// `i * rhs.nrows() + k`, column `j * rhs.ncols() + l`, and its grades
    /// are the coordinatewise sums (with `-inf` absorbing).
    ///
    /// # Panics
    ///
    /// Panics if fields or parameter counts disagree, or if a grade sum
    /// mixes `+inf` with `-inf`.
    pub fn kronecker(&self, rhs: &GradedMatrix) -> Self {
        assert_eq!(self.field, rhs.field, "field mismatch");
        assert_eq!(self.n, rhs.n, "parameter count mismatch");
        let row_grades = self
            .row_grades
            .iter()
            .flat_map(|a| rhs.row_grades.iter().map(|b| grade_add(a, b)))
            .collect();
        let col_grades = self
            .col_grades
            .iter()
            .flat_map(|a| rhs.col_grades.iter().map(|b| grade_add(a, b)))
            .collect();
        let mut mat = Dense::zeros(self.nrows() * rhs.nrows(), self.ncols() * rhs.ncols());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let a = self.mat.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..rhs.nrows() {
                    for l in 0..rhs.ncols() {
                        let b = rhs.mat.get(k, l);
                        if b != 0 {
                            mat.set(
                                i * rhs.nrows() + k,
                                j * rhs.ncols() + l,
                                self.field.mul(a, b),
                            );
                        }
                    }
                }
            }
        }
        GradedMatrix {
            field: self.field,
            n: self.n,
            mat,
            row_grades,
            col_grades,
        }
    }

    /// Block diagonal sum of `blocks` (possibly none, possibly empty ones).
    ///
    /// # Panics
    ///
    /// Panics if any block disagrees with `field` or `n`.
    pub fn block_diag(field: Fp, n: usize, blocks: &[GradedMatrix]) -> Self {
        let mut row_grades = Vec::new();
        let mut col_grades = Vec::new();
        for b in blocks {
            assert_eq!(b.field, field, "field mismatch");
            assert_eq!(b.n, n, "parameter count mismatch");
            row_grades.extend_from_slice(&b.row_grades);
            col_grades.extend_from_slice(&b.col_grades);
        }
        let mut m = GradedMatrix::zero(field, n, row_grades, col_grades);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    let v = b.mat.get(i, j);
                    if v != 0 {
                        m.mat.set(r0 + i, c0 + j, v);
                    }
                }
            }
            r0 += b.nrows();
            c0 += b.ncols();
        }
        m
    }

    /// Keep the rows and columns whose grades satisfy the given relations
    /// against the bounds. Returns the submatrix together with the kept
    /// row and column indices (each strictly increasing).
    pub fn submatrix_by_grade(
        &self,
        row_rel: Rel,
        row_bound: &ExtGrade,
        col_rel: Rel,
        col_bound: &ExtGrade,
    ) -> (GradedMatrix, Vec<usize>, Vec<usize>) {
        let rows: Vec<usize> = (0..self.nrows())
            .filter(|&i| keeps(row_rel, &self.row_grades[i], row_bound))
            .collect();
        let cols: Vec<usize> = (0..self.ncols())
            .filter(|&j| keeps(col_rel, &self.col_grades[j], col_bound))
            .collect();
        let mut mat = Dense::zeros(rows.len(), cols.len());
        for (ii, &i) in rows.iter().enumerate() {
            for (jj, &j) in cols.iter().enumerate() {
                mat.set(ii, jj, self.mat.get(i, j));
            }
        }
        let sub = GradedMatrix {
            field: self.field,
            n: self.n,
            mat,
            row_grades: rows.iter().map(|&i| self.row_grades[i].clone()).collect(),
            col_grades: cols.iter().map(|&j| self.col_grades[j].clone()).collect(),
        };
        (sub, rows, cols)
    }

    pub fn rank(&self) -> usize {
        self.mat.rank(self.field)
    }

    /// Drop the listed grade coordinates from every row and column grade.
    pub fn project_grades(&self, axes: &[usize]) -> Self {
        GradedMatrix {
            field: self.field,
            n: self.n - axes.len(),
            mat: self.mat.clone(),
            row_grades: self
                .row_grades
                .iter()
                .map(|g| crate::grade::project_grade(g, axes))
                .collect(),
            col_grades: self
                .col_grades
                .iter()
                .map(|g| crate::grade::project_grade(g, axes))
                .collect(),
        }
    }

    /// Rebuild `n`-coordinate grades by inserting `-inf` at `axes`.
    pub fn embed_grades(&self, axes: &[usize], n: usize) -> Self {
        GradedMatrix {
            field: self.field,
            n,
            mat: self.mat.clone(),
            row_grades: self
                .row_grades
                .iter()
                .map(|g| crate::grade::embed_grade(g, axes, n))
                .collect(),
            col_grades: self
                .col_grades
                .iter()
                .map(|g| crate::grade::embed_grade(g, axes, n))
                .collect(),
        }
    }

    /// Indices of all-zero rows.
    pub fn zero_row_indices(&self) -> Vec<usize> {
        (0..self.nrows())
            .filter(|&i| self.mat.row(i).iter().all(|&v| v == 0))
            .collect()
    }

    /// Indices of all-zero columns.
    pub fn zero_col_indices(&self) -> Vec<usize> {
        (0..self.ncols())
            .filter(|&j| (0..self.nrows()).all(|i| self.mat.get(i, j) == 0))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grade::ExtCoord;
    use proptest::prelude::*;

    fn fp(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    fn g(coords: &[i64]) -> ExtGrade {
        ExtGrade::finite(coords)
    }

    fn gm(p: u32, rg: &[&[i64]], cg: &[&[i64]], rows: &[&[i64]]) -> GradedMatrix {
        let f = fp(p);
        let n = rg.first().or(cg.first()).map_or(0, |x| x.len());
        GradedMatrix::from_rows_i64(
            f,
            n,
            rg.iter().map(|c| g(c)).collect(),
            cg.iter().map(|c| g(c)).collect(),
            rows,
        )
    }

    #[test]
    fn validity_classes() {
        let d1 = gm(
            32003,
            &[&[0, 1], &[1, 0]],
            &[&[0, 3], &[1, 2], &[2, 1], &[3, 0]],
            &[&[1, 1, 1, 0], &[0, -1, -1, 1]],
        );
        assert!(d1.is_valid());
        assert!(d1.is_minimal());
        assert!(!d1.is_anti_valid());

        let phi = gm(
            32003,
            &[&[1, 1], &[2, 2]],
            &[&[0, 1], &[1, 0]],
            &[&[-1, 0], &[-1, -1]],
        );
        assert!(phi.is_anti_valid());
        assert!(!phi.is_valid());

        // An identity with equal grades is valid but not minimal.
        let e = GradedMatrix::identity(fp(2), 2, vec![g(&[0, 0]), g(&[1, 1])]);
        assert!(e.is_valid() && e.is_anti_valid());
        assert!(!e.is_minimal());

        // The zero matrix is everything at once.
        let z = GradedMatrix::zero(fp(2), 2, vec![g(&[5, 5])], vec![g(&[0, 0])]);
        assert!(z.is_valid() && z.is_anti_valid() && z.is_minimal());
    }

    #[test]
    fn graded_transpose_negates_and_swaps() {
        let phi = gm(
            32003,
            &[&[1, 1], &[2, 2]],
            &[&[0, 1], &[1, 0]],
            &[&[-1, 0], &[-1, -1]],
        );
        let t = phi.graded_transpose();
        assert_eq!(t.row_grades(), &[g(&[0, -1]), g(&[-1, 0])]);
        assert_eq!(t.col_grades(), &[g(&[-1, -1]), g(&[-2, -2])]);
        let f = fp(32003);
        assert_eq!(t.entry(0, 0), f.normalize(-1));
        assert_eq!(t.entry(0, 1), f.normalize(-1));
        assert_eq!(t.entry(1, 0), 0);
        assert_eq!(t.entry(1, 1), f.normalize(-1));
        assert_eq!(t.graded_transpose(), phi);
        assert!(t.is_anti_valid());
    }

    #[test]
    fn kronecker_block_layout_and_grades() {
        let f = fp(32003);
        let k1 = GradedMatrix::from_rows_i64(
            f,
            2,
            vec![ExtGrade::new(vec![ExtCoord::NegInf, ExtCoord::NegInf])],
            vec![
                ExtGrade::new(vec![ExtCoord::Finite(0), ExtCoord::NegInf]),
                ExtGrade::new(vec![ExtCoord::NegInf, ExtCoord::Finite(0)]),
            ],
            &[&[-1, 1]],
        );
        let e = GradedMatrix::identity(f, 2, vec![g(&[0, 1]), g(&[1, 0])]);
        let k = k1.kronecker(&e);
        assert_eq!((k.nrows(), k.ncols()), (2, 4));
        let m1 = f.normalize(-1);
        assert_eq!(
            (0..2)
                .map(|i| (0..4).map(|j| k.entry(i, j)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            vec![vec![m1, 0, 1, 0], vec![0, m1, 0, 1]]
        );
        // Column grades: e_Q + generator grade, -inf absorbing.
        assert_eq!(
            k.col_grades(),
            &[
                ExtGrade::new(vec![ExtCoord::Finite(0), ExtCoord::NegInf]),
                ExtGrade::new(vec![ExtCoord::Finite(1), ExtCoord::NegInf]),
                ExtGrade::new(vec![ExtCoord::NegInf, ExtCoord::Finite(1)]),
                ExtGrade::new(vec![ExtCoord::NegInf, ExtCoord::Finite(0)]),
            ]
        );
        assert_eq!(
            k.row_grades(),
            &[
                ExtGrade::new(vec![ExtCoord::NegInf, ExtCoord::NegInf]),
                ExtGrade::new(vec![ExtCoord::NegInf, ExtCoord::NegInf]),
            ]
        );
    }

    #[test]
    #[should_panic(expected = "composition error")]
    fn multiply_requires_exact_inner_grades() {
        let a = gm(2, &[&[0, 0]], &[&[1, 0]], &[&[1]]);
        let b = gm(2, &[&[0, 1]], &[&[1, 1]], &[&[1]]);
        let _ = a.multiply(&b);
    }

    #[test]
    fn multiply_and_shift() {
        let a = gm(32003, &[&[0, 0]], &[&[1, 0], &[0, 1]], &[&[1, 2]]);
        let b = gm(
            32003,
            &[&[1, 0], &[0, 1]],
            &[&[1, 1]],
            &[&[3], &[4]],
        );
        let c = a.multiply(&b);
        assert_eq!(c.entry(0, 0), 11);
        assert_eq!(c.row_grades(), &[g(&[0, 0])]);
        assert_eq!(c.col_grades(), &[g(&[1, 1])]);

        let s = c.shift(&[1, 1]);
        assert_eq!(s.row_grades(), &[g(&[-1, -1])]);
        assert_eq!(s.col_grades(), &[g(&[0, 0])]);
        assert_eq!(s.entry(0, 0), 11);
    }

    #[test]
    fn block_diag_concatenates() {
        let f = fp(32003);
        let s1 = gm(
            32003,
            &[&[0], &[1], &[2], &[3]],
            &[&[0], &[1]],
            &[&[1, 1], &[0, -1], &[0, 0], &[0, 0]],
        );
        let s2 = gm(
            32003,
            &[&[3], &[2], &[1], &[0]],
            &[&[2], &[3]],
            &[&[0, 0], &[0, 0], &[1, 0], &[1, 1]],
        );
        let d = GradedMatrix::block_diag(f, 1, &[s1.clone(), s2.clone()]);
        assert_eq!((d.nrows(), d.ncols()), (8, 4));
        assert_eq!(d.entry(0, 1), 1);
        assert_eq!(d.entry(1, 1), f.normalize(-1));
        assert_eq!(d.entry(6, 2), 1);
        assert_eq!(d.entry(0, 2), 0);
        assert_eq!(d.row_grades()[4..], s2.row_grades()[..]);

        let none = GradedMatrix::block_diag(f, 1, &[]);
        assert_eq!((none.nrows(), none.ncols()), (0, 0));
        assert_eq!(none.rank(), 0);
    }

    #[test]
    fn submatrix_by_grade_returns_kept_indices() {
        let phi = gm(
            32003,
            &[&[1, 1], &[2, 2]],
            &[&[0, 1], &[1, 0]],
            &[&[-1, 0], &[-1, -1]],
        );
        let (sub, rows, cols) =
            phi.submatrix_by_grade(Rel::Ge, &g(&[2, 2]), Rel::Le, &g(&[1, 1]));
        assert_eq!(rows, vec![1]);
        assert_eq!(cols, vec![0, 1]);
        assert_eq!((sub.nrows(), sub.ncols()), (1, 2));
        assert_eq!(sub.rank(), 1);

        let (empty, rows, _) =
            phi.submatrix_by_grade(Rel::Ge, &g(&[5, 5]), Rel::Le, &g(&[5, 5]));
        assert!(rows.is_empty());
        assert_eq!(empty.rank(), 0);
    }

    #[test]
    fn zero_row_and_col_detection() {
        let m = gm(2, &[&[0], &[1]], &[&[0], &[1]], &[&[1, 0], &[0, 0]]);
        assert_eq!(m.zero_row_indices(), vec![1]);
        assert_eq!(m.zero_col_indices(), vec![1]);
    }

    fn finite_or_neg_inf() -> impl Strategy<Value = ExtCoord> {
        prop_oneof![
            1 => Just(ExtCoord::NegInf),
            6 => (-4i64..=4).prop_map(ExtCoord::Finite),
        ]
    }

    fn grades(n: usize, count: usize) -> impl Strategy<Value = Vec<ExtGrade>> {
        proptest::collection::vec(
            proptest::collection::vec(finite_or_neg_inf(), n).prop_map(ExtGrade::new),
            count,
        )
    }

    fn matrix(
        p: u32,
        n: usize,
        max_dim: usize,
    ) -> impl Strategy<Value = GradedMatrix> {
        (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
            (
                grades(n, r),
                grades(n, c),
                proptest::collection::vec(0i64..p as i64, r * c),
            )
                .prop_map(move |(rg, cg, entries)| {
                    let f = fp(p);
                    let mut m = GradedMatrix::zero(f, n, rg, cg);
                    for (k, v) in entries.into_iter().enumerate() {
                        m.mat.set(k / c.max(1), k % c.max(1), f.normalize(v));
                    }
                    m
                })
        })
    }

    fn matrix_pair_composable(
        p: u32,
        n: usize,
    ) -> impl Strategy<Value = (GradedMatrix, GradedMatrix)> {
        (matrix(p, n, 4), grades(n, 4), 0usize..=4).prop_map(move |(a, cg, c)| {
            let f = fp(p);
            let cg = cg.into_iter().take(c).collect::<Vec<_>>();
            let b = GradedMatrix::zero(f, n, a.col_grades().to_vec(), cg);
            (a, b)
        })
    }

    proptest! {
        #[test]
        fn transpose_is_an_involution(m in matrix(32003, 2, 5)) {
            prop_assert_eq!(m.graded_transpose().graded_transpose(), m);
        }

        #[test]
        fn transpose_preserves_validity_classes(m in matrix(32003, 2, 5)) {
            let t = m.graded_transpose();
            prop_assert_eq!(m.is_valid(), t.is_valid());
            prop_assert_eq!(m.is_anti_valid(), t.is_anti_valid());
            prop_assert_eq!(m.rank(), t.rank());
        }

        #[test]
        fn shift_round_trips_and_preserves_validity(
            m in matrix(32003, 2, 5),
            z in proptest::collection::vec(-3i64..=3, 2),
        ) {
            let s = m.shift(&z);
            prop_assert_eq!(m.is_valid(), s.is_valid());
            let back: Vec<i64> = z.iter().map(|v| -v).collect();
            prop_assert_eq!(s.shift(&back), m);
        }

        #[test]
        fn kronecker_mixed_product_law(
            (a, b0) in matrix_pair_composable(32003, 2),
            (c, d0) in matrix_pair_composable(32003, 2),
            seed in 0u64..1000,
        ) {
            // Fill the composable skeletons with pseudorandom entries.
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut fill = |m: &GradedMatrix| {
                let mut m = m.clone();
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        m.mat.set(i, j, rng.gen_range(0..32003));
                    }
                }
                m
            };
            let (a, b) = (fill(&a), fill(&b0));
            let (c, d) = (fill(&c), fill(&d0));
            let lhs = a.kronecker(&c).multiply(&b.kronecker(&d));
            let rhs = a.multiply(&b).kronecker(&c.multiply(&d));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn kronecker_rank_is_product_of_ranks(
            a in matrix(32003, 2, 4),
            b in matrix(32003, 2, 4),
        ) {
            prop_assert_eq!(a.kronecker(&b).rank(), a.rank() * b.rank());
        }

        #[test]
        fn block_diag_validity_and_rank(
            a in matrix(32003, 2, 4),
            b in matrix(32003, 2, 4),
        ) {
            let f = fp(32003);
            let d = GradedMatrix::block_diag(f, 2, &[a.clone(), b.clone()]);
            prop_assert_eq!(d.is_valid(), a.is_valid() && b.is_valid());
            prop_assert_eq!(d.rank(), a.rank() + b.rank());
        }
    }
}
