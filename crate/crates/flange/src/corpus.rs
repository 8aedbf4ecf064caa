//! Built-in example resolutions with known invariants: a two-parameter
//! staircase module and Koszul resolutions of axis-aligned box modules in
//! one to three parameters. Tests and the command-line self test draw
//! their fixtures and closed-form oracles from here.

use crate::field::Fp;
use crate::gmatrix::GradedMatrix;
use crate::grade::ExtGrade;
use crate::scc_io::FreeResolution;

/// Text of the staircase example in scc2020 format, byte-identical to
/// `fixtures/example.scc2020`.
pub fn staircase_text() -> &'static str {
    include_str!("../../../fixtures/example.scc2020")
}

/// The two-parameter staircase module used as the pinned regression
/// example: two generators, four relations, two second syzygies.
pub fn staircase_resolution(field: Fp) -> FreeResolution {
    let f0 = vec![ExtGrade::finite(&[0, 1]), ExtGrade::finite(&[1, 0])];
    let f1 = vec![
        ExtGrade::finite(&[0, 3]),
        ExtGrade::finite(&[1, 2]),
        ExtGrade::finite(&[2, 1]),
        ExtGrade::finite(&[3, 0]),
    ];
    let f2 = vec![ExtGrade::finite(&[2, 2]), ExtGrade::finite(&[3, 3])];
    let d1 = GradedMatrix::from_rows_i64(
        field,
        2,
        f0.clone(),
        f1.clone(),
        &[&[1, 1, 1, 0], &[0, -1, -1, 1]],
    );
    let d2 = GradedMatrix::from_rows_i64(
        field,
        2,
        f1.clone(),
        f2.clone(),
        &[&[0, 1], &[1, -1], &[-1, 0], &[0, -1]],
    );
    FreeResolution::new(field, 2, vec![f0, f1, f2], vec![d1, d2])
        .expect("built-in staircase resolution is valid")
}

/// The flat-injective presentation matrix of the staircase module that the
/// contraction pipeline produces (both representative choices agree here);
/// pinned as the entry-exact regression expectation.
pub fn staircase_presentation(field: Fp) -> GradedMatrix {
    GradedMatrix::from_rows_i64(
        field,
        2,
        vec![ExtGrade::finite(&[1, 1]), ExtGrade::finite(&[2, 2])],
        vec![ExtGrade::finite(&[0, 1]), ExtGrade::finite(&[1, 0])],
        &[&[-1, 0], &[-1, -1]],
    )
}

/// Koszul resolution of the one-parameter interval module on `[a, b]`.
///
/// # Panics
///
/// Panics if `a > b`.
pub fn box_resolution_n1(a: i64, b: i64, field: Fp) -> FreeResolution {
    assert!(a <= b, "box bounds out of order");
    let f0 = vec![ExtGrade::finite(&[a])];
    let f1 = vec![ExtGrade::finite(&[b + 1])];
    let d1 = GradedMatrix::from_rows_i64(field, 1, f0.clone(), f1.clone(), &[&[1]]);
    FreeResolution::new(field, 1, vec![f0, f1], vec![d1])
        .expect("box resolution is valid")
}

/// Koszul resolution of the two-parameter box module on `[a, b]`.
///
/// # Panics
///
/// Panics if `a > b` in some coordinate.
pub fn box_resolution_n2(a: [i64; 2], b: [i64; 2], field: Fp) -> FreeResolution {
    assert!(a[0] <= b[0] && a[1] <= b[1], "box bounds out of order");
    let f0 = vec![ExtGrade::finite(&a)];
    let f1 = vec![
        ExtGrade::finite(&[a[0], b[1] + 1]),
        ExtGrade::finite(&[b[0] + 1, a[1]]),
    ];
    let f2 = vec![ExtGrade::finite(&[b[0] + 1, b[1] + 1])];
    let d1 = GradedMatrix::from_rows_i64(field, 2, f0.clone(), f1.clone(), &[&[1, 1]]);
    let d2 = GradedMatrix::from_rows_i64(field, 2, f1.clone(), f2.clone(), &[&[1], &[-1]]);
    FreeResolution::new(field, 2, vec![f0, f1, f2], vec![d1, d2])
        .expect("box resolution is valid")
}

/// Koszul resolution of the three-parameter box module on `[a, b]`.
///
/// # Panics
///
/// Panics if `a > b` in some coordinate.
pub fn box_resolution_n3(a: [i64; 3], b: [i64; 3], field: Fp) -> FreeResolution {
    assert!(
        (0..3).all(|i| a[i] <= b[i]),
        "box bounds out of order"
    );
    let f0 = vec![ExtGrade::finite(&a)];
    // One relation per axis, entering at a + (b_i + 1 - a_i) e_i.
    let f1 = vec![
        ExtGrade::finite(&[b[0] + 1, a[1], a[2]]),
        ExtGrade::finite(&[a[0], b[1] + 1, a[2]]),
        ExtGrade::finite(&[a[0], a[1], b[2] + 1]),
    ];
    // Pairwise joins of the relations, in lexicographic pair order.
    let f2 = vec![
        ExtGrade::finite(&[b[0] + 1, b[1] + 1, a[2]]),
        ExtGrade::finite(&[b[0] + 1, a[1], b[2] + 1]),
        ExtGrade::finite(&[a[0], b[1] + 1, b[2] + 1]),
    ];
    let f3 = vec![ExtGrade::finite(&[b[0] + 1, b[1] + 1, b[2] + 1])];
    let d1 = GradedMatrix::from_rows_i64(field, 3, f0.clone(), f1.clone(), &[&[1, 1, 1]]);
    let d2 = GradedMatrix::from_rows_i64(
        field,
        3,
        f1.clone(),
        f2.clone(),
        &[&[-1, -1, 0], &[1, 0, -1], &[0, 1, 1]],
    );
    let d3 = GradedMatrix::from_rows_i64(
        field,
        3,
        f2.clone(),
        f3.clone(),
        &[&[1], &[-1], &[1]],
    );
    FreeResolution::new(field, 3, vec![f0, f1, f2, f3], vec![d1, d2, d3])
        .expect("box resolution is valid")
}

/// Dimension of the box module on `[a, b]` at `z`: 1 inside the box.
pub fn box_dim(a: &[i64], b: &[i64], z: &[i64]) -> usize {
    let inside = z
        .iter()
        .zip(a.iter().zip(b))
        .all(|(&zi, (&ai, &bi))| ai <= zi && zi <= bi);
    usize::from(inside)
}

/// Rank of the structure map of the box module on `[a, b]` from `z` to
/// `z2`, for `z <= z2` componentwise: 1 when both points lie in the box.
pub fn box_rank(a: &[i64], b: &[i64], z: &[i64], z2: &[i64]) -> usize {
    debug_assert!(z.iter().zip(z2).all(|(x, y)| x <= y));
    let through = z
        .iter()
        .zip(z2)
        .zip(a.iter().zip(b))
        .all(|((&zi, &z2i), (&ai, &bi))| ai <= zi && z2i <= bi);
    usize::from(through)
}
