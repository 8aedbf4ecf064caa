//! The cover complex on the grade axes and the presentation pipeline.
//!
//! Layer i of the cover consists of one flat summand F(e_Q) per subset Q
//! of the axes with |Q| = n−i, where e_Q is 0 with the coordinates in Q
//! masked to −∞. Tensoring its boundary matrices with a resolution and
//! interleaving them with the contraction maps of [`crate::contraction`]
//! multiplies out to a flat-injective presentation matrix of the resolved
//! module.

use itertools::Itertools;
use thiserror::Error;

use crate::contraction::{
    assemble_s, AcyclicityError, ContractionMethod, ContractionSet, Representative,
};
use crate::dense::Dense;
use crate::field::Fp;
use crate::gmatrix::GradedMatrix;
use crate::grade::{grade_leq, grade_shift, mask_grade, ExtGrade};
use crate::scc_io::{FlatInjectivePresentation, FreeResolution};

/// The subsets indexing cover layer i: all Q with |Q| = n−i, 0-based, in
/// lexicographic order of their sorted element lists.
///
/// # Panics
///
/// Panics if `i > n`.
pub fn layer_subsets(n: usize, i: usize) -> Vec<Vec<usize>> {
    assert!(i <= n, "cover layer {i} out of range");
    (0..n).combinations(n - i).collect()
}

/// The grade e_Q: −∞ at the axes in `subset`, 0 elsewhere.
pub fn e_grade(n: usize, subset: &[usize]) -> ExtGrade {
    mask_grade(&ExtGrade::finite(&vec![0; n]), subset)
}

/// The boundary matrix K_i from cover layer i to layer i−1. Entry
/// (Q ∪ {q}, Q) is (−1) to the number of elements of Q larger than q;
/// all other entries vanish.
///
/// # Panics
///
/// Panics unless 1 ≤ i ≤ n.
pub fn cech_boundary(field: Fp, n: usize, i: usize) -> GradedMatrix {
    assert!((1..=n).contains(&i), "boundary index {i} out of range");
    let rows = layer_subsets(n, i - 1);
    let cols = layer_subsets(n, i);
    let row_grades = rows.iter().map(|q| e_grade(n, q)).collect();
    let col_grades = cols.iter().map(|q| e_grade(n, q)).collect();
    let mut m = GradedMatrix::zero(field, n, row_grades, col_grades);
    for (c, q) in cols.iter().enumerate() {
        for add in (0..n).filter(|a| !q.contains(a)) {
            let pos = q.partition_point(|&x| x < add);
            let mut bigger = q.clone();
            bigger.insert(pos, add);
            let r = rows.binary_search(&bigger).expect("layer is complete");
            let larger = q.len() - pos;
            let sign = if larger % 2 == 0 { 1 } else { field.neg(1) };
            m.set_entry(r, c, sign);
        }
    }
    m
}

/// The boundary K_i acting blockwise on a free module: the Kronecker
/// product of `boundary` with the graded identity on `basis`. Its grades
/// are e_Q + (generator grade), with −∞ absorbing.
pub fn cech_tensor(boundary: &GradedMatrix, basis: &[ExtGrade]) -> GradedMatrix {
    let identity = GradedMatrix::identity(boundary.field(), boundary.params(), basis.to_vec());
    boundary.kronecker(&identity)
}

/// How the presentation product is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Materialize the blockwise contraction maps and multiply through.
    #[default]
    Contraction,
    /// Never materialize contractions; lift the accumulated image of F_0
    /// stage by stage with grade-restricted solves.
    Preimage,
}

/// Tunable choices for [`flange_presentation_with`]. Defaults are the
/// normative ones; the alternatives exist for regressions and for
/// comparing strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineOptions {
    pub strategy: Strategy,
    pub representative: Representative,
    pub method: ContractionMethod,
}

/// Failure modes of the presentation pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    /// A free resolution over n parameters never needs length beyond n;
    /// longer inputs are rejected rather than truncated.
    #[error("pipeline error: resolution length {length} exceeds the {params} parameter(s)")]
    TooLong { length: usize, params: usize },
    #[error(transparent)]
    Acyclicity(#[from] AcyclicityError),
}

/// Compute a flat-injective presentation matrix of the module resolved by
/// `res`, with default options and the given strategy.
///
/// The column grades of the result are the generator grades of F_0; the
/// row grades are the top-degree generator grades shifted down by one in
/// every coordinate. Resolutions shorter than the parameter count are
/// padded with zero blocks on the fly.
pub fn flange_presentation(
    res: &FreeResolution,
    strategy: Strategy,
) -> Result<FlatInjectivePresentation, PipelineError> {
    flange_presentation_with(
        res,
        &PipelineOptions {
            strategy,
            ..PipelineOptions::default()
        },
    )
}

/// [`flange_presentation`] with the grade-restricted preimage strategy.
pub fn flange_presentation_preimage(
    res: &FreeResolution,
) -> Result<FlatInjectivePresentation, PipelineError> {
    flange_presentation(res, Strategy::Preimage)
}

/// Compute a flat-injective presentation matrix with explicit options.
pub fn flange_presentation_with(
    res: &FreeResolution,
    options: &PipelineOptions,
) -> Result<FlatInjectivePresentation, PipelineError> {
    let n = res.params();
    if res.length() > n {
        return Err(PipelineError::TooLong {
            length: res.length(),
            params: n,
        });
    }
    let acc = match options.strategy {
        Strategy::Contraction => contraction_product(res, options)?,
        Strategy::Preimage => preimage_product(res)?,
    };
    Ok(finalize(res, acc))
}

/// Left-to-right product S_{0,n−1} K_{1,n−1} S_{1,n−2} ⋯ S_{n−1,0} K_{n,0}.
/// Keeping the accumulator on the left bounds every intermediate height by
/// the top block size.
fn contraction_product(
    res: &FreeResolution,
    options: &PipelineOptions,
) -> Result<GradedMatrix, PipelineError> {
    let n = res.params();
    let set = ContractionSet::compute(res, options.method)?;
    let mut acc: Option<GradedMatrix> = None;
    for i in 0..n {
        let j = n - 1 - i;
        let s = assemble_s(res, &set, i, j, options.representative);
        let k = cech_tensor(&cech_boundary(res.field(), n, i + 1), res.grades_padded(j));
        for factor in [s, k] {
            acc = Some(match acc.take() {
                None => factor,
                Some(a) => a.multiply(&factor),
            });
        }
    }
    Ok(acc.expect("parameter count is positive"))
}

/// Same product, evaluated right-to-left on the accumulated image of F_0:
/// each contraction stage is replaced by lifting every accumulator column
/// through the differential with a grade-restricted solve.
fn preimage_product(res: &FreeResolution) -> Result<GradedMatrix, PipelineError> {
    let n = res.params();
    let fp = res.field();
    let mut acc = cech_tensor(&cech_boundary(fp, n, n), res.grades_padded(0));
    for i in (0..n).rev() {
        let j = n - 1 - i;
        acc = lift_stage(res, i, j, &acc)?;
        if i > 0 {
            let k = cech_tensor(&cech_boundary(fp, n, i), res.grades_padded(j + 1));
            acc = k.multiply(&acc);
        }
    }
    Ok(acc)
}

/// Lift the columns of `acc` (living blockwise in cover layer i, degree j)
/// through the degree-(j+1) differential, one cover block at a time. Every
/// accumulator column is a cycle of the block's masked complex, so a
/// grade-restricted preimage exists exactly when that complex is exact.
fn lift_stage(
    res: &FreeResolution,
    i: usize,
    j: usize,
    acc: &GradedMatrix,
) -> Result<GradedMatrix, PipelineError> {
    let n = res.params();
    let fp = res.field();
    let subsets = layer_subsets(n, i);
    let s_j = res.grades_padded(j).len();
    let s_next = res.grades_padded(j + 1).len();
    assert_eq!(acc.nrows(), subsets.len() * s_j, "pipeline block layout drifted");
    let d_next = (j < res.length()).then(|| res.differential(j + 1));
    let mut out = Dense::zeros(subsets.len() * s_next, acc.ncols());
    let mut row_grades = Vec::with_capacity(subsets.len() * s_next);
    for (b, q) in subsets.iter().enumerate() {
        let masked: Vec<ExtGrade> = res
            .grades_padded(j + 1)
            .iter()
            .map(|g| mask_grade(g, q))
            .collect();
        row_grades.extend(masked.iter().cloned());
        for c in 0..acc.ncols() {
            let v: Vec<_> = (0..s_j).map(|r| acc.entry(b * s_j + r, c)).collect();
            let Some(d) = d_next else {
                // Beyond the resolution length the lift is through a zero
                // block, which only the zero vector survives.
                if v.iter().any(|&x| x != 0) {
                    return Err(no_lift(q, j, c));
                }
                continue;
            };
            let g = &acc.col_grades()[c];
            let mut cols: Vec<usize> = (0..s_next)
                .filter(|&r| grade_leq(&masked[r], g))
                .collect();
            cols.sort_by(|&a, &b| masked[a].cmp(&masked[b]));
            let x = d
                .dense()
                .solve_restricted(fp, &cols, &v)
                .ok_or_else(|| no_lift(q, j, c))?;
            for (t, &r) in cols.iter().enumerate() {
                if x[t] != 0 {
                    out.set(b * s_next + r, c, x[t]);
                }
            }
        }
    }
    Ok(GradedMatrix::from_dense(
        fp,
        n,
        row_grades,
        acc.col_grades().to_vec(),
        out,
    ))
}

fn no_lift(subset: &[usize], degree: usize, column: usize) -> PipelineError {
    PipelineError::Acyclicity(AcyclicityError {
        axis: subset[0],
        degree,
        reason: format!("no grade-restricted lift in cover block {subset:?} for column {column}"),
    })
}

/// Replace the all-masked row grades by the shifted top-degree grades and
/// wrap up. The product is guaranteed anti-valid for valid inputs; this is
/// asserted, never assumed.
fn finalize(res: &FreeResolution, acc: GradedMatrix) -> FlatInjectivePresentation {
    let n = res.params();
    assert_eq!(
        acc.col_grades(),
        res.grades(0),
        "pipeline column grades drifted"
    );
    let ones = vec![1; n];
    let rows: Vec<ExtGrade> = res
        .grades_padded(n)
        .iter()
        .map(|g| grade_shift(g, &ones))
        .collect();
    assert_eq!(acc.nrows(), rows.len(), "pipeline row count drifted");
    let m = GradedMatrix::from_dense(
        res.field(),
        n,
        rows,
        acc.col_grades().to_vec(),
        acc.dense().clone(),
    );
    FlatInjectivePresentation::new(m).expect("pipeline output must be anti-valid")
}
