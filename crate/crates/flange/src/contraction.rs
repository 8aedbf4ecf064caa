//! Chain contractions of coordinate-masked resolutions.
//!
//! Masking one grade coordinate of a resolution of a finite-dimensional
//! module leaves an exact complex, which therefore admits a chain
//! contraction: a degree +1 family s with d∘s + s∘d = id. One contraction
//! per axis is computed here, and [`assemble_s`] lays them out blockwise
//! over the masked subsets of a cover layer for the presentation pipeline.

use thiserror::Error;

use crate::dense::{ColEchelon, Dense};
use crate::gmatrix::GradedMatrix;
use crate::grade::{grade_leq, mask_grade, project_grade, ExtGrade};
use crate::scc_io::FreeResolution;

/// A masked complex failed to contract: the input does not resolve a
/// finite-dimensional module (or is corrupt).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("acyclicity error: axis {axis}, degree {degree}: {reason}")]
pub struct AcyclicityError {
    /// The masked coordinate (0-based).
    pub axis: usize,
    /// Homological degree at which the contraction could not be extended.
    pub degree: usize,
    pub reason: String,
}

/// Which axis of a masked subset names the contraction used for its block.
///
/// Any element of the subset is mathematically admissible; `Min` is the
/// normative choice. `Max` is kept as an override hook so regression tests
/// can pin outputs that were originally produced with the largest index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Representative {
    #[default]
    Min,
    Max,
}

impl Representative {
    fn pick(self, subset: &[usize]) -> usize {
        assert!(!subset.is_empty(), "empty subset has no representative");
        match self {
            Representative::Min => subset[0],
            Representative::Max => subset[subset.len() - 1],
        }
    }
}

/// How per-axis contractions are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContractionMethod {
    /// Column reduction where its total-order precondition holds (always
    /// in two parameters), per-generator solves elsewhere.
    #[default]
    Auto,
    /// Per-generator grade-restricted solves everywhere; the reference
    /// algorithm with deterministic pivot order.
    RestrictedSolve,
}

/// The contractions of all `n` masked complexes of one resolution.
///
/// `axis(k)` holds S̄_0, …, S̄_{L−1} for the complex with coordinate `k`
/// masked; S̄_j maps the degree-j block to the degree-(j+1) block and its
/// grades are the projected (n−1)-coordinate generator grades.
#[derive(Debug, Clone)]
pub struct ContractionSet {
    per_axis: Vec<Vec<GradedMatrix>>,
}

impl ContractionSet {
    /// Compute contractions for every axis of `res`.
    pub fn compute(
        res: &FreeResolution,
        method: ContractionMethod,
    ) -> Result<ContractionSet, AcyclicityError> {
        let per_axis = (0..res.params())
            .map(|axis| match method {
                ContractionMethod::Auto => compute_contraction_fast(res, axis),
                ContractionMethod::RestrictedSolve => compute_contraction(res, axis),
            })
            .collect::<Result<_, _>>()?;
        Ok(ContractionSet { per_axis })
    }

    /// The contraction of the complex with coordinate `axis` masked.
    pub fn axis(&self, axis: usize) -> &[GradedMatrix] {
        &self.per_axis[axis]
    }
}

/// Compute the contraction S̄_0, …, S̄_{L−1} of the complex obtained from
/// `res` by masking coordinate `axis`, by per-generator grade-restricted
/// preimage solves: for the degree-j generator e_i with projected grade g,
/// solve D̄_{j+1} x = e_i − S̄_{j−1}(D̄_j e_i) using only columns of
/// projected grade ≤ g (pivots tried in lex-grade order, ties by index,
/// free variables zero). The top identity S̄_{L−1} D̄_L = E is verified
/// before returning.
///
/// # Panics
///
/// Panics if `axis` is out of range.
pub fn compute_contraction(
    res: &FreeResolution,
    axis: usize,
) -> Result<Vec<GradedMatrix>, AcyclicityError> {
    let fp = res.field();
    let pg = projected_grades(res, axis);
    let len = res.length();
    if len == 0 {
        return empty_complex_contraction(res, axis);
    }
    let mut out: Vec<Dense> = Vec::with_capacity(len);
    for j in 0..len {
        let s_next = res.block_size(j + 1);
        let d_next = res.differential(j + 1).dense();
        let targets = stage_targets(res, out.last(), j);
        let mut s = Dense::zeros(s_next, res.block_size(j));
        for i in 0..res.block_size(j) {
            let g = &pg[j][i];
            let mut cols: Vec<usize> = (0..s_next)
                .filter(|&c| grade_leq(&pg[j + 1][c], g))
                .collect();
            cols.sort_by(|&a, &b| pg[j + 1][a].cmp(&pg[j + 1][b]));
            let x = d_next
                .solve_restricted(fp, &cols, &targets.column(i))
                .ok_or_else(|| no_preimage(axis, j, i))?;
            for (t, &c) in cols.iter().enumerate() {
                if x[t] != 0 {
                    s.set(c, i, x[t]);
                }
            }
        }
        out.push(s);
    }
    finish(res, axis, &pg, out)
}

/// Same contract as [`compute_contraction`], computed by a single column
/// reduction of each D̄_{j+1} with grade-sorted columns; every generator's
/// restricted solve is then read off the echelon columns whose defining
/// column grade fits.
///
/// Precondition of the reduction: within each block, the projected grades
/// must be totally ordered once lex-sorted (automatic in two parameters,
/// where projected grades are single integers). Inputs that fail it fall
/// back to [`compute_contraction`]; that is documented behavior, not an
/// error.
///
/// # Panics
///
/// Panics if `axis` is out of range.
pub fn compute_contraction_fast(
    res: &FreeResolution,
    axis: usize,
) -> Result<Vec<GradedMatrix>, AcyclicityError> {
    let fp = res.field();
    let pg = projected_grades(res, axis);
    let len = res.length();
    if len == 0 {
        return empty_complex_contraction(res, axis);
    }
    // Grade-sorted column orders. Sorting is stable, so equal grades keep
    // their index order; solutions restricted to grades <= g then use a
    // prefix of each order, which is what makes echelon lookup sound.
    let mut orders: Vec<Vec<usize>> = Vec::with_capacity(len + 1);
    for (d, block) in pg.iter().enumerate() {
        let mut idx: Vec<usize> = (0..block.len()).collect();
        idx.sort_by(|&a, &b| block[a].cmp(&block[b]));
        let chained = idx
            .windows(2)
            .all(|w| grade_leq(&block[w[0]], &block[w[1]]));
        if d > 0 && !chained {
            return compute_contraction(res, axis);
        }
        orders.push(idx);
    }
    let mut out: Vec<Dense> = Vec::with_capacity(len);
    for j in 0..len {
        let order = &orders[j + 1];
        let sorted_next = permute_cols(res.differential(j + 1).dense(), order);
        let echelon = ColEchelon::new(&sorted_next, fp);
        let targets = stage_targets(res, out.last(), j);
        let mut s = Dense::zeros(res.block_size(j + 1), res.block_size(j));
        for i in 0..res.block_size(j) {
            let g = &pg[j][i];
            let x = echelon
                .express(&targets.column(i), fp, |c| {
                    grade_leq(&pg[j + 1][order[c]], g)
                })
                .ok_or_else(|| no_preimage(axis, j, i))?;
            for (t, &v) in x.iter().enumerate() {
                if v != 0 {
                    s.set(order[t], i, v);
                }
            }
        }
        out.push(s);
    }
    finish(res, axis, &pg, out)
}

/// Block-diagonal map S_ij of the cover layer i: one block per subset Q
/// of the axes with |Q| = n−i, in lex order, carrying the entries of the
/// contraction for `representative.pick(Q)` in degree j and the resolution
/// grades masked at Q. Degrees at or above the resolution length yield
/// empty blocks, padding short resolutions.
///
/// # Panics
///
/// Panics unless i < n and the contraction set matches `res`.
pub fn assemble_s(
    res: &FreeResolution,
    contractions: &ContractionSet,
    i: usize,
    j: usize,
    representative: Representative,
) -> GradedMatrix {
    let n = res.params();
    assert!(i < n, "cover layer {i} out of range");
    let blocks: Vec<GradedMatrix> = crate::cech::layer_subsets(n, i)
        .into_iter()
        .map(|q| {
            let masked = |d: usize| -> Vec<ExtGrade> {
                res.grades_padded(d)
                    .iter()
                    .map(|g| mask_grade(g, &q))
                    .collect()
            };
            let (rows, cols) = (masked(j + 1), masked(j));
            if j < res.length() {
                let source = &contractions.axis(representative.pick(&q))[j];
                assert_eq!(
                    (source.nrows(), source.ncols()),
                    (rows.len(), cols.len()),
                    "contraction set does not match the resolution"
                );
                GradedMatrix::from_dense(res.field(), n, rows, cols, source.dense().clone())
            } else {
                GradedMatrix::zero(res.field(), n, rows, cols)
            }
        })
        .collect();
    GradedMatrix::block_diag(res.field(), n, &blocks)
}

fn projected_grades(res: &FreeResolution, axis: usize) -> Vec<Vec<ExtGrade>> {
    assert!(axis < res.params(), "axis {axis} out of range");
    (0..=res.length())
        .map(|d| {
            res.grades(d)
                .iter()
                .map(|g| project_grade(g, &[axis]))
                .collect()
        })
        .collect()
}

/// Columns to contract in degree j: the identity minus the correction by
/// the previous stage, E − S̄_{j−1}·D̄_j (plain E in degree 0).
fn stage_targets(res: &FreeResolution, prev: Option<&Dense>, j: usize) -> Dense {
    let e = Dense::identity(res.block_size(j));
    match prev {
        None => e,
        Some(s) => e.sub(&s.mul(res.differential(j).dense(), res.field()), res.field()),
    }
}

fn empty_complex_contraction(
    res: &FreeResolution,
    axis: usize,
) -> Result<Vec<GradedMatrix>, AcyclicityError> {
    if res.block_size(0) == 0 {
        Ok(Vec::new())
    } else {
        Err(AcyclicityError {
            axis,
            degree: 0,
            reason: "a nonzero free module is not finite-dimensional".into(),
        })
    }
}

fn no_preimage(axis: usize, degree: usize, generator: usize) -> AcyclicityError {
    AcyclicityError {
        axis,
        degree,
        reason: format!("generator {generator} has no grade-restricted preimage"),
    }
}

fn finish(
    res: &FreeResolution,
    axis: usize,
    pg: &[Vec<ExtGrade>],
    mats: Vec<Dense>,
) -> Result<Vec<GradedMatrix>, AcyclicityError> {
    let fp = res.field();
    let len = res.length();
    // The solves enforce d s + s d = id below the top; exactness of the
    // masked complex is equivalent to the remaining identity up there.
    let top = mats[len - 1].mul(res.differential(len).dense(), fp);
    if !top.sub(&Dense::identity(res.block_size(len)), fp).is_zero() {
        return Err(AcyclicityError {
            axis,
            degree: len,
            reason: "top-degree identity fails; the complex is not exact".into(),
        });
    }
    Ok(mats
        .into_iter()
        .enumerate()
        .map(|(j, m)| {
            let s = GradedMatrix::from_dense(
                fp,
                res.params() - 1,
                pg[j + 1].clone(),
                pg[j].clone(),
                m,
            );
            debug_assert!(s.is_valid(), "contraction block violates validity");
            s
        })
        .collect())
}

fn permute_cols(a: &Dense, order: &[usize]) -> Dense {
    let mut out = Dense::zeros(a.rows, order.len());
    for (t, &c) in order.iter().enumerate() {
        for r in 0..a.rows {
            let v = a.get(r, c);
            if v != 0 {
                out.set(r, t, v);
            }
        }
    }
    out
}
