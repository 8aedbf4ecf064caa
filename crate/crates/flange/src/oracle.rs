//! Brute-force ground truth for rank invariants.
//!
//! A presentation determines a module only implicitly; this module makes it
//! explicit by materializing the components M_z and structure matrices on a
//! finite grid ([`PointwiseModule`]). Rank queries answered from the free,
//! flat-injective, and injective presentation matrices are validated against
//! the rank of a composite of structure matrices, and random box-sum modules
//! with closed-form invariants supply the test corpus.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{box_dim, box_rank, box_resolution_n2};
use crate::dense::{ColBasis, Dense};
use crate::field::{FieldScalar, Fp};
use crate::gmatrix::{GradedMatrix, Rel};
use crate::grade::{grade_leq, grade_neg, ExtGrade};
use crate::scc_io::FreeResolution;

/// Failure modes of rank queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    /// Rank invariants are only defined along the partial order.
    #[error("query error: source grade {z} is not componentwise at most target grade {zp}")]
    Unordered { z: ExtGrade, zp: ExtGrade },
    /// The pointwise oracle only knows the module inside its grid.
    #[error("query error: grade {z} lies outside the expanded box")]
    OutOfBox { z: ExtGrade },
}

/// A rank-invariant query: the pair z ≤ z′, both finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankQuery {
    z: ExtGrade,
    zp: ExtGrade,
}

impl RankQuery {
    /// # Panics
    ///
    /// Panics if the grades have different lengths or infinite coordinates.
    pub fn new(z: ExtGrade, zp: ExtGrade) -> Result<Self, QueryError> {
        assert_eq!(z.len(), zp.len(), "query grades of mixed lengths");
        assert!(z.is_finite() && zp.is_finite(), "query grades must be finite");
        if !grade_leq(&z, &zp) {
            return Err(QueryError::Unordered { z, zp });
        }
        Ok(RankQuery { z, zp })
    }

    pub fn from_coords(z: &[i64], zp: &[i64]) -> Result<Self, QueryError> {
        RankQuery::new(ExtGrade::finite(z), ExtGrade::finite(zp))
    }

    pub fn z(&self) -> &ExtGrade {
        &self.z
    }

    pub fn zp(&self) -> &ExtGrade {
        &self.zp
    }
}

/// An inclusive finite grid [lo, hi] of grades.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradeBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl GradeBox {
    /// # Panics
    ///
    /// Panics if the corners have different or zero lengths, or lo ≰ hi.
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len(), "box corners of mixed lengths");
        assert!(!lo.is_empty(), "box needs at least one parameter");
        assert!(
            lo.iter().zip(&hi).all(|(a, b)| a <= b),
            "box corners out of order"
        );
        GradeBox { lo, hi }
    }

    pub fn params(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn contains(&self, z: &[i64]) -> bool {
        assert_eq!(z.len(), self.lo.len(), "grade outside the parameter count");
        z.iter()
            .enumerate()
            .all(|(k, &c)| self.lo[k] <= c && c <= self.hi[k])
    }

    fn extents(&self) -> Vec<usize> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a + 1) as usize)
            .collect()
    }

    fn point_count(&self) -> usize {
        self.extents().iter().product()
    }

    /// Index of a contained point in lexicographic enumeration order.
    fn index(&self, z: &[i64]) -> usize {
        debug_assert!(self.contains(z));
        let extents = self.extents();
        let mut idx = 0;
        for k in 0..z.len() {
            idx = idx * extents[k] + (z[k] - self.lo[k]) as usize;
        }
        idx
    }

    /// All grid points in lexicographic order (first coordinate slowest).
    pub fn points(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(self.point_count());
        let mut z = self.lo.clone();
        loop {
            out.push(z.clone());
            let mut k = z.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if z[k] < self.hi[k] {
                    z[k] += 1;
                    break;
                }
                z[k] = self.lo[k];
            }
        }
    }

    /// All ordered pairs z ≤ z′ with both endpoints in the box.
    pub fn comparable_pairs(&self) -> Vec<(Vec<i64>, Vec<i64>)> {
        let points = self.points();
        let mut out = Vec::new();
        for z in &points {
            for zp in &points {
                if z.iter().zip(zp).all(|(a, b)| a <= b) {
                    out.push((z.clone(), zp.clone()));
                }
            }
        }
        out
    }
}

/// The default expansion grid: one step beyond the extreme finite
/// coordinates of the given grades in every direction. Infinite
/// coordinates are ignored; axes with no finite coordinate at all (and
/// grade-free inputs like the zero module) sit at the origin.
pub fn default_box<'a>(grades: impl IntoIterator<Item = &'a ExtGrade>, n: usize) -> GradeBox {
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    let mut seen = vec![false; n];
    for g in grades {
        assert_eq!(g.len(), n, "grade outside the parameter count");
        for k in 0..n {
            let Some(c) = g.coord(k).finite() else {
                continue;
            };
            if !seen[k] {
                (lo[k], hi[k], seen[k]) = (c, c, true);
            } else {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
    }
    for k in 0..n {
        lo[k] -= 1;
        hi[k] += 1;
    }
    GradeBox::new(lo, hi)
}

/// A module materialized on a grid: dimensions at every point and a
/// structure matrix along every unit edge, in coordinates fixed by the
/// expansion that built it.
#[derive(Debug, Clone)]
pub struct PointwiseModule {
    field: Fp,
    bounds: GradeBox,
    dims: Vec<usize>,
    /// steps[axis][point index] is the matrix M_z → M_{z + e_axis},
    /// present exactly when the target stays inside the box.
    steps: Vec<Vec<Option<Dense>>>,
}

impl PointwiseModule {
    pub fn bounds(&self) -> &GradeBox {
        &self.bounds
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    /// # Panics
    ///
    /// Panics if `z` lies outside the box.
    pub fn dim(&self, z: &[i64]) -> usize {
        assert!(self.bounds.contains(z), "dimension query off the grid");
        self.dims[self.bounds.index(z)]
    }

    /// Rank of the structure matrix along the unit edge z → z + e_axis.
    ///
    /// # Panics
    ///
    /// Panics if either endpoint lies outside the box.
    pub fn step_rank(&self, z: &[i64], axis: usize) -> usize {
        let step = self.steps[axis][self.bounds.index(z)]
            .as_ref()
            .expect("edge leaves the box");
        step.rank(self.field)
    }

    /// Rank of the composite of structure matrices from q.z to q.zp along
    /// the canonical axis-by-axis path.
    pub fn rank(&self, q: &RankQuery) -> Result<usize, QueryError> {
        let (z, zp) = self.query_coords(q)?;
        let path: Vec<usize> = (0..z.len())
            .flat_map(|k| std::iter::repeat(k).take((zp[k] - z[k]) as usize))
            .collect();
        Ok(self.composite_rank(&z, &path))
    }

    /// Like [`PointwiseModule::rank`], but along the monotone path taking
    /// its unit steps in the order listed in `path`.
    ///
    /// # Panics
    ///
    /// Panics if `path` does not step from q.z to exactly q.zp.
    pub fn rank_along(&self, q: &RankQuery, path: &[usize]) -> Result<usize, QueryError> {
        let (z, zp) = self.query_coords(q)?;
        let mut end = z.clone();
        for &k in path {
            end[k] += 1;
        }
        assert_eq!(end, zp, "path does not reach the query target");
        Ok(self.composite_rank(&z, path))
    }

    /// Exact commutativity of every unit square of structure matrices.
    pub fn commutes(&self) -> bool {
        let fp = self.field;
        let n = self.bounds.params();
        for z in self.bounds.points() {
            let i = self.bounds.index(&z);
            for a in 0..n {
                let Some(sa) = self.steps[a][i].as_ref() else {
                    continue;
                };
                let ia = {
                    let mut za = z.clone();
                    za[a] += 1;
                    self.bounds.index(&za)
                };
                for b in a + 1..n {
                    let Some(sb) = self.steps[b][i].as_ref() else {
                        continue;
                    };
                    let ib = {
                        let mut zb = z.clone();
                        zb[b] += 1;
                        self.bounds.index(&zb)
                    };
                    let ab = self.steps[b][ia].as_ref().expect("square stays inboard");
                    let ba = self.steps[a][ib].as_ref().expect("square stays inboard");
                    if ab.mul(sa, fp) != ba.mul(sb, fp) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn query_coords(&self, q: &RankQuery) -> Result<(Vec<i64>, Vec<i64>), QueryError> {
        let z = q.z().finite_coords().expect("query grades are finite");
        let zp = q.zp().finite_coords().expect("query grades are finite");
        for g in [&z, &zp] {
            if !self.bounds.contains(g) {
                return Err(QueryError::OutOfBox {
                    z: ExtGrade::finite(g),
                });
            }
        }
        Ok((z, zp))
    }

    fn composite_rank(&self, start: &[i64], path: &[usize]) -> usize {
        let fp = self.field;
        let mut cur = start.to_vec();
        let mut acc = Dense::identity(self.dims[self.bounds.index(&cur)]);
        for &k in path {
            let step = self.steps[k][self.bounds.index(&cur)]
                .as_ref()
                .expect("path leaves the box");
            acc = step.mul(&acc, fp);
            cur[k] += 1;
        }
        acc.rank(fp)
    }
}

/// Per-point expansion data: which ambient rows are alive and a reduced
/// basis of the subspace that cuts the component out of them.
struct Stalk {
    rows: Vec<usize>,
    basis: ColBasis,
    /// Positions within `rows` that carry the component's coordinates:
    /// non-pivot positions for cokernels, ignored (empty) for images.
    complement: Vec<usize>,
}

/// Materialize the cokernel module of a valid matrix D₁ on a grid: at
/// every z the component is the cokernel of D₁ restricted to rows of
/// grade ≤ z and columns of grade ≤ z, with coordinates on the non-pivot
/// rows of a reduced column basis; structure maps are induced by the
/// inclusion of generators.
pub fn expand_free(d1: &GradedMatrix, bounds: &GradeBox) -> PointwiseModule {
    let fp = d1.field();
    assert_eq!(d1.params(), bounds.params(), "box outside the parameter count");
    let stalks = expand_stalks(bounds, |z| {
        let (sub, rows, _) = d1.submatrix_by_grade(Rel::Le, z, Rel::Le, z);
        let basis = ColBasis::from_dense(sub.dense(), fp);
        let mut pivot = vec![false; rows.len()];
        for &p in &basis.pivots {
            pivot[p] = true;
        }
        let complement = (0..rows.len()).filter(|&i| !pivot[i]).collect();
        Stalk {
            rows,
            basis,
            complement,
        }
    });
    let dims: Vec<usize> = stalks.iter().map(|s| s.complement.len()).collect();
    let steps = expand_steps(bounds, &stalks, &dims, |src, dst| {
        let mut m = Dense::zeros(dst.complement.len(), src.complement.len());
        for (j, &pos) in src.complement.iter().enumerate() {
            let r = src.rows[pos];
            let mut v = vec![0; dst.rows.len()];
            let at = dst.rows.binary_search(&r).expect("alive rows only grow");
            v[at] = 1;
            dst.basis.reduce_in_place(&mut v, fp);
            for (i, &np) in dst.complement.iter().enumerate() {
                m.set(i, j, v[np]);
            }
        }
        m
    });
    PointwiseModule {
        field: fp,
        bounds: bounds.clone(),
        dims,
        steps,
    }
}

/// Materialize the image module of an anti-valid matrix Φ on a grid: at
/// every z the component is the image of Φ restricted to rows of grade
/// ≥ z and columns of grade ≤ z, in the coordinates of a reduced basis of
/// that image; structure maps are induced by projecting away the rows
/// that die.
pub fn expand_fip(phi: &GradedMatrix, bounds: &GradeBox) -> PointwiseModule {
    let fp = phi.field();
    assert_eq!(phi.params(), bounds.params(), "box outside the parameter count");
    let stalks = expand_stalks(bounds, |z| {
        let (sub, rows, _) = phi.submatrix_by_grade(Rel::Ge, z, Rel::Le, z);
        Stalk {
            rows,
            basis: ColBasis::from_dense(sub.dense(), fp),
            complement: Vec::new(),
        }
    });
    let dims: Vec<usize> = stalks.iter().map(|s| s.basis.rank()).collect();
    let steps = expand_steps(bounds, &stalks, &dims, |src, dst| {
        let mut m = Dense::zeros(dst.basis.rank(), src.basis.rank());
        for (j, w) in src.basis.basis.iter().enumerate() {
            let mut v: Vec<FieldScalar> = dst
                .rows
                .iter()
                .map(|r| w[src.rows.binary_search(r).expect("alive rows only shrink")])
                .collect();
            let coeffs = dst.basis.reduce_in_place(&mut v, fp);
            assert!(
                v.iter().all(|&x| x == 0),
                "projected image vector escaped the image"
            );
            for (i, &c) in coeffs.iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    });
    PointwiseModule {
        field: fp,
        bounds: bounds.clone(),
        dims,
        steps,
    }
}

fn expand_stalks(bounds: &GradeBox, mut stalk: impl FnMut(&ExtGrade) -> Stalk) -> Vec<Stalk> {
    bounds
        .points()
        .iter()
        .map(|z| stalk(&ExtGrade::finite(z)))
        .collect()
}

fn expand_steps(
    bounds: &GradeBox,
    stalks: &[Stalk],
    dims: &[usize],
    mut step: impl FnMut(&Stalk, &Stalk) -> Dense,
) -> Vec<Vec<Option<Dense>>> {
    let n = bounds.params();
    let points = bounds.points();
    let mut steps = vec![vec![None; points.len()]; n];
    for (i, z) in points.iter().enumerate() {
        for (k, lane) in steps.iter_mut().enumerate() {
            if z[k] == bounds.hi()[k] {
                continue;
            }
            let mut zk = z.clone();
            zk[k] += 1;
            let j = bounds.index(&zk);
            let m = step(&stalks[i], &stalks[j]);
            assert_eq!((m.rows, m.cols), (dims[j], dims[i]), "step shape drifted");
            lane[i] = Some(m);
        }
    }
    steps
}

/// dim im M_{z′z} from a free presentation: the rank of the inclusion
/// columns E (one per row of grade ≤ z) in the cokernel of
/// U′ = D₁[rg ≤ z′, cg ≤ z′], computed as rank [E | U′] − rank U′.
/// The naive count dim coker D₁[rg ≤ z, cg ≤ z′] overshoots whenever a
/// relation couples a generator born by z with one born later.
pub fn rank_free(d1: &GradedMatrix, q: &RankQuery) -> usize {
    let fp = d1.field();
    let (sub, rows, _) = d1.submatrix_by_grade(Rel::Le, q.zp(), Rel::Le, q.zp());
    let incl: Vec<usize> = (0..rows.len())
        .filter(|&i| grade_leq(&d1.row_grades()[rows[i]], q.z()))
        .collect();
    let u = sub.dense();
    let mut aug = Dense::zeros(rows.len(), incl.len() + u.cols);
    for (t, &pos) in incl.iter().enumerate() {
        aug.set(pos, t, 1);
    }
    for i in 0..rows.len() {
        for j in 0..u.cols {
            aug.set(i, incl.len() + j, u.get(i, j));
        }
    }
    aug.rank(fp) - u.rank(fp)
}

/// dim im M_{z′z} from a flat-injective presentation: a single submatrix
/// rank, rows of grade ≥ z′ against columns of grade ≤ z.
pub fn rank_fip(phi: &GradedMatrix, q: &RankQuery) -> usize {
    let (sub, _, _) = phi.submatrix_by_grade(Rel::Ge, q.zp(), Rel::Le, q.z());
    sub.rank()
}

/// dim im M_{z′z} from an injective copresentation W (rows index the
/// cogenerators of I¹, columns those of I⁰, module = kernel): Matlis
/// duality turns the kernel query into [`rank_free`] on the graded
/// transpose at the negated, swapped grades.
pub fn rank_injective(w: &GradedMatrix, q: &RankQuery) -> usize {
    let dual = RankQuery::new(grade_neg(q.zp()), grade_neg(q.z()))
        .expect("negation reverses the order");
    rank_free(&w.graded_transpose(), &dual)
}

/// dim im M_{z′z} from the pointwise expansion, the normative semantics
/// the matrix formulas are validated against.
pub fn rank_oracle(pm: &PointwiseModule, q: &RankQuery) -> Result<usize, QueryError> {
    pm.rank(q)
}

/// A direct sum of axis-aligned box modules k[a, b] together with its
/// Koszul resolution; dimensions and ranks have closed forms.
#[derive(Debug, Clone)]
pub struct BoxSum {
    pub resolution: FreeResolution,
    pub boxes: Vec<([i64; 2], [i64; 2])>,
}

impl BoxSum {
    /// #{i : aᵢ ≤ z ≤ bᵢ}.
    pub fn closed_dim(&self, z: &[i64]) -> usize {
        self.boxes.iter().map(|(a, b)| box_dim(a, b, z)).sum()
    }

    /// #{i : aᵢ ≤ z, z′ ≤ bᵢ}.
    pub fn closed_rank(&self, q: &RankQuery) -> usize {
        let z = q.z().finite_coords().expect("query grades are finite");
        let zp = q.zp().finite_coords().expect("query grades are finite");
        self.boxes
            .iter()
            .map(|(a, b)| box_rank(a, b, &z, &zp))
            .sum()
    }
}

/// A reproducible two-parameter test module: the direct sum of `count`
/// box modules with corners drawn uniformly from `coord_range`, as a
/// Koszul resolution plus the box list feeding the closed forms.
///
/// # Panics
///
/// Panics if `count` is zero or the range is empty.
pub fn random_box_sum(
    seed: u64,
    count: usize,
    coord_range: RangeInclusive<i64>,
    field: Fp,
) -> BoxSum {
    assert!(count >= 1, "a box sum needs at least one summand");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut resolution: Option<FreeResolution> = None;
    let mut boxes = Vec::with_capacity(count);
    for _ in 0..count {
        let mut a = [0i64; 2];
        let mut b = [0i64; 2];
        for k in 0..2 {
            a[k] = rng.gen_range(coord_range.clone());
            b[k] = rng.gen_range(a[k]..=*coord_range.end());
        }
        let summand = box_resolution_n2(a, b, field);
        resolution = Some(match resolution {
            None => summand,
            Some(acc) => acc.direct_sum(&summand),
        });
        boxes.push((a, b));
    }
    BoxSum {
        resolution: resolution.expect("count is positive"),
        boxes,
    }
}

/// The Hilbert function of an expanded module as CSV: coordinate columns,
/// then `value`, one line per grid point in lexicographic order.
pub fn hilbert_csv(pm: &PointwiseModule) -> String {
    let n = pm.bounds().params();
    let names: Vec<String> = match n {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=n).map(|k| format!("x{k}")).collect(),
    };
    let mut out = String::new();
    let _ = writeln!(out, "{},value", names.join(","));
    for z in pm.bounds().points() {
        let coords: Vec<String> = z.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{},{}", coords.join(","), pm.dim(&z));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{staircase_presentation, staircase_resolution};
    use proptest::prelude::*;

    fn fp() -> Fp {
        Fp::new(32003).unwrap()
    }

    fn q(z: &[i64], zp: &[i64]) -> RankQuery {
        RankQuery::from_coords(z, zp).unwrap()
    }

    #[test]
    fn queries_enforce_the_partial_order() {
        assert!(RankQuery::from_coords(&[0, 0], &[1, 1]).is_ok());
        let err = RankQuery::from_coords(&[0, 2], &[1, 1]).unwrap_err();
        assert!(err.to_string().starts_with("query error:"));
    }

    #[test]
    fn boxes_enumerate_and_index_consistently() {
        let b = GradeBox::new(vec![-1, 0], vec![1, 1]);
        let pts = b.points();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], [-1, 0]);
        assert_eq!(pts[5], [1, 1]);
        for (i, z) in pts.iter().enumerate() {
            assert_eq!(b.index(z), i);
        }
        assert!(b.contains(&[0, 1]));
        assert!(!b.contains(&[2, 0]));
        let pairs = b.comparable_pairs();
        assert!(pairs.iter().all(|(z, zp)| z.iter().zip(zp).all(|(a, b)| a <= b)));
        assert_eq!(pairs.len(), 18);
    }

    #[test]
    fn default_box_pads_the_grade_range_by_one() {
        let res = staircase_resolution(fp());
        let b = default_box(res.all_grades(), res.params());
        assert_eq!(b.lo(), [-1, -1]);
        assert_eq!(b.hi(), [4, 4]);
        let zero = FreeResolution::new(fp(), 2, vec![vec![]], vec![]).unwrap();
        let b0 = default_box(zero.all_grades(), 2);
        assert_eq!((b0.lo(), b0.hi()), (&[-1, -1][..], &[1, 1][..]));
    }

    #[test]
    fn free_expansion_reproduces_the_worked_dimensions() {
        let res = staircase_resolution(fp());
        let pm = expand_free(
            res.differential(1),
            &GradeBox::new(vec![-1, -1], vec![4, 4]),
        );
        assert_eq!(pm.dim(&[1, 1]), 2);
        assert_eq!(pm.dim(&[0, 0]), 0);
        assert_eq!(pm.dim(&[0, 1]), 1);
        assert_eq!(pm.dim(&[2, 2]), 1);
        assert_eq!(pm.dim(&[4, 4]), 0);
        assert!(pm.commutes());
    }

    #[test]
    fn fip_expansion_matches_the_free_one_pointwise() {
        let res = staircase_resolution(fp());
        let phi = staircase_presentation(fp());
        let bounds = GradeBox::new(vec![-1, -1], vec![4, 4]);
        let free = expand_free(res.differential(1), &bounds);
        let fip = expand_fip(&phi, &bounds);
        assert!(fip.commutes());
        for z in bounds.points() {
            assert_eq!(free.dim(&z), fip.dim(&z), "dims differ at {z:?}");
            for k in 0..2 {
                if z[k] < bounds.hi()[k] {
                    assert_eq!(
                        free.step_rank(&z, k),
                        fip.step_rank(&z, k),
                        "edge ranks differ at {z:?} along {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn rank_formulas_match_the_worked_example() {
        let res = staircase_resolution(fp());
        let phi = staircase_presentation(fp());
        let d1 = res.differential(1);
        assert_eq!(rank_free(d1, &q(&[1, 1], &[2, 2])), 1);
        assert_eq!(rank_free(d1, &q(&[1, 1], &[1, 1])), 2);
        assert_eq!(rank_fip(&phi, &q(&[1, 1], &[2, 2])), 1);
        assert_eq!(rank_fip(&phi, &q(&[1, 1], &[1, 1])), 2);
        assert_eq!(rank_fip(&phi, &q(&[0, 1], &[1, 1])), 1);
        assert_eq!(rank_fip(&phi, &q(&[2, 2], &[2, 2])), 1);
        // Far outside the support everything dies.
        assert_eq!(rank_free(d1, &q(&[-3, -3], &[5, 5])), 0);
        assert_eq!(rank_fip(&phi, &q(&[-3, -3], &[5, 5])), 0);
    }

    #[test]
    fn naive_cokernel_count_is_wrong_and_ours_is_not() {
        // Two generators, one relation gluing them at (1,0): the class of
        // the first generator survives from (0,0) to (1,0), where it lands
        // on the class of the second.
        let f = fp();
        let d1 = GradedMatrix::from_rows_i64(
            f,
            2,
            vec![ExtGrade::finite(&[0, 0]), ExtGrade::finite(&[1, 0])],
            vec![ExtGrade::finite(&[1, 0])],
            &[&[1], &[-1]],
        );
        let query = q(&[0, 0], &[1, 0]);
        // Naive: cokernel of the restriction to rows ≤ z, columns ≤ z′,
        // here the 1×1 identity, reporting rank 0.
        let (naive, _, _) = d1.submatrix_by_grade(Rel::Le, query.z(), Rel::Le, query.zp());
        assert_eq!(naive.nrows() - naive.rank(), 0);
        assert_eq!(rank_free(&d1, &query), 1);
        let pm = expand_free(&d1, &default_box(d1.row_grades().iter(), 2));
        assert_eq!(pm.rank(&query).unwrap(), 1);
    }

    #[test]
    fn injective_queries_reduce_through_the_transpose() {
        let f = fp();
        let w = GradedMatrix::from_rows_i64(
            f,
            2,
            vec![
                ExtGrade::finite(&[0, 3]),
                ExtGrade::finite(&[1, 2]),
                ExtGrade::finite(&[2, 1]),
                ExtGrade::finite(&[3, 0]),
            ],
            vec![ExtGrade::finite(&[2, 2]), ExtGrade::finite(&[3, 3])],
            &[&[0, -1], &[1, -1], &[-1, 0], &[0, 1]],
        );
        assert_eq!(rank_injective(&w, &q(&[2, 2], &[2, 2])), 2);
        assert_eq!(rank_injective(&w, &q(&[1, 2], &[2, 2])), 1);
        let empty = GradedMatrix::zero(f, 2, vec![ExtGrade::finite(&[0, 0])], vec![]);
        assert_eq!(rank_injective(&empty, &q(&[0, 0], &[1, 1])), 0);
    }

    #[test]
    fn oracle_ranks_are_path_independent() {
        let res = staircase_resolution(fp());
        let pm = expand_free(
            res.differential(1),
            &GradeBox::new(vec![-1, -1], vec![4, 4]),
        );
        let query = q(&[0, 0], &[2, 2]);
        let direct = pm.rank(&query).unwrap();
        for path in [
            vec![0, 0, 1, 1],
            vec![1, 1, 0, 0],
            vec![0, 1, 0, 1],
            vec![1, 0, 1, 0],
        ] {
            assert_eq!(pm.rank_along(&query, &path).unwrap(), direct);
        }
        assert_eq!(pm.rank(&q(&[1, 1], &[1, 1])).unwrap(), pm.dim(&[1, 1]));
        let out = pm.rank(&q(&[0, 0], &[9, 9])).unwrap_err();
        assert!(matches!(out, QueryError::OutOfBox { .. }));
    }

    #[test]
    fn box_sums_resolve_their_closed_forms() {
        let f = fp();
        let single = BoxSum {
            resolution: box_resolution_n2([0, 0], [2, 1], f),
            boxes: vec![([0, 0], [2, 1])],
        };
        assert_eq!(single.closed_dim(&[1, 1]), 1);
        assert_eq!(single.closed_dim(&[3, 0]), 0);
        assert_eq!(single.closed_rank(&q(&[0, 0], &[2, 1])), 1);
        let two = BoxSum {
            resolution: box_resolution_n2([0, 0], [0, 0], f)
                .direct_sum(&box_resolution_n2([0, 0], [1, 1], f)),
            boxes: vec![([0, 0], [0, 0]), ([0, 0], [1, 1])],
        };
        assert_eq!(two.closed_dim(&[0, 0]), 2);
        assert_eq!(two.closed_rank(&q(&[0, 0], &[1, 1])), 1);
    }

    #[test]
    fn random_box_sums_are_reproducible_and_in_range() {
        let f = fp();
        let a = random_box_sum(7, 5, 0..=8, f);
        let b = random_box_sum(7, 5, 0..=8, f);
        assert_eq!(a.boxes, b.boxes);
        assert_eq!(a.boxes.len(), 5);
        for (lo, hi) in &a.boxes {
            for k in 0..2 {
                assert!(0 <= lo[k] && lo[k] <= hi[k] && hi[k] <= 8);
            }
        }
        assert_ne!(a.boxes, random_box_sum(8, 5, 0..=8, f).boxes);
        let report = crate::scc_io::validate_resolution(&a.resolution);
        assert!(report.all_compositions_zero && report.all_valid);
    }

    #[test]
    fn hilbert_csv_lists_the_grid() {
        let res = staircase_resolution(fp());
        let pm = expand_free(res.differential(1), &GradeBox::new(vec![0, 0], vec![3, 3]));
        let csv = hilbert_csv(&pm);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,y,value"));
        assert_eq!(csv.lines().count(), 17);
        assert!(csv.lines().any(|l| l == "1,1,2"));
        assert!(csv.ends_with('\n'));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        /// The master property on small random box sums: the free and
        /// flat-injective formulas, the pointwise oracle, and the closed
        /// form agree on every comparable pair of the default grid.
        #[test]
        fn master_property_on_small_box_sums(seed in 0u64..500, count in 1usize..4) {
            let f = Fp::new(2).unwrap();
            let sum = random_box_sum(seed, count, 0..=3, f);
            let d1 = sum.resolution.differential(1);
            let phi = crate::cech::flange_presentation(
                &sum.resolution,
                crate::cech::Strategy::Contraction,
            ).unwrap();
            let bounds = default_box(sum.resolution.all_grades(), 2);
            let pm = expand_free(d1, &bounds);
            for (z, zp) in bounds.comparable_pairs() {
                let query = q(&z, &zp);
                let want = sum.closed_rank(&query);
                prop_assert_eq!(rank_free(d1, &query), want);
                prop_assert_eq!(rank_fip(phi.matrix(), &query), want);
                prop_assert_eq!(pm.rank(&query).unwrap(), want);
            }
        }
    }
}
