//! Grades in (Z u {-inf, +inf})^n and their order structure.
//!
//! Two different orders matter here. [`grade_leq`] is the componentwise
//! partial order that drives every support restriction and validity check.
//! The derived `Ord` on [`ExtCoord`] and [`ExtGrade`] is the lexicographic
//! total order used to pick deterministic processing sequences; it refines
//! the partial order but must never be confused with it.

use std::fmt;

/// One coordinate of a grade: an integer or one of the two infinities.
///
/// The derived `Ord` puts `NegInf < Finite(_) < PosInf`, with the usual
/// integer order in between.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtCoord {
    NegInf,
    Finite(i64),
    PosInf,
}

impl ExtCoord {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtCoord::Finite(_))
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtCoord::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Negation; swaps the infinities.
    pub fn neg(self) -> ExtCoord {
        match self {
            ExtCoord::NegInf => ExtCoord::PosInf,
            ExtCoord::Finite(v) => ExtCoord::Finite(-v),
            ExtCoord::PosInf => ExtCoord::NegInf,
        }
    }

    /// Coordinate sum with `-inf` absorbing.
    ///
    /// # Panics
    ///
    /// Panics on `+inf + -inf`; that sum has no consistent value and only
    /// arises from mixing transposed with untransposed data.
    pub fn add(self, other: ExtCoord) -> ExtCoord {
        use ExtCoord::*;
        match (self, other) {
            (NegInf, PosInf) | (PosInf, NegInf) => {
                panic!("arithmetic error: grade sum mixes +inf and -inf")
            }
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }
}

impl fmt::Display for ExtCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCoord::NegInf => write!(f, "-inf"),
            ExtCoord::Finite(v) => write!(f, "{v}"),
            ExtCoord::PosInf => write!(f, "inf"),
        }
    }
}

/// A grade: a point of (Z u {-inf, +inf})^n.
///
/// The derived `Ord` is lexicographic (a total order used for sorting);
/// the module-theoretic partial order is [`grade_leq`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtGrade(Vec<ExtCoord>);

impl ExtGrade {
    pub fn new(coords: Vec<ExtCoord>) -> Self {
        ExtGrade(coords)
    }

    /// A fully finite grade.
    pub fn finite(coords: &[i64]) -> Self {
        ExtGrade(coords.iter().map(|&v| ExtCoord::Finite(v)).collect())
    }

    /// Number of coordinates.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coord(&self, i: usize) -> ExtCoord {
        self.0[i]
    }

    pub fn coords(&self) -> &[ExtCoord] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// The finite coordinate vector, if every coordinate is finite.
    pub fn finite_coords(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| c.finite()).collect()
    }
}

impl fmt::Display for ExtGrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Componentwise partial order `a <= b`.
///
/// # Panics
///
/// Panics if the grades have different lengths.
pub fn grade_leq(a: &ExtGrade, b: &ExtGrade) -> bool {
    assert_eq!(a.len(), b.len(), "grade length mismatch");
    a.coords().iter().zip(b.coords()).all(|(x, y)| x <= y)
}

/// Shift `a - z` by a finite vector; infinities are fixed points.
///
/// # Panics
///
/// Panics if `z.len() != a.len()`.
pub fn grade_shift(a: &ExtGrade, z: &[i64]) -> ExtGrade {
    assert_eq!(a.len(), z.len(), "grade length mismatch");
    ExtGrade(
        a.coords()
            .iter()
            .zip(z)
            .map(|(&c, &d)| match c {
                ExtCoord::Finite(v) => ExtCoord::Finite(v - d),
                inf => inf,
            })
            .collect(),
    )
}

/// Coordinatewise sum with `-inf` absorbing; see [`ExtCoord::add`].
pub fn grade_add(a: &ExtGrade, b: &ExtGrade) -> ExtGrade {
    assert_eq!(a.len(), b.len(), "grade length mismatch");
    ExtGrade(
        a.coords()
            .iter()
            .zip(b.coords())
            .map(|(&x, &y)| x.add(y))
            .collect(),
    )
}

/// Coordinatewise negation; swaps the infinities.
pub fn grade_neg(a: &ExtGrade) -> ExtGrade {
    ExtGrade(a.coords().iter().map(|c| c.neg()).collect())
}

/// Drop the coordinates listed in `axes` (sorted, distinct, 0-based).
///
/// # Panics
///
/// Panics if `axes` is not strictly increasing or indexes out of range.
pub fn project_grade(a: &ExtGrade, axes: &[usize]) -> ExtGrade {
    assert!(
        axes.windows(2).all(|w| w[0] < w[1]),
        "axis list must be strictly increasing"
    );
    if let Some(&last) = axes.last() {
        assert!(last < a.len(), "axis {last} out of range for {}-grade", a.len());
    }
    let mut next = axes.iter().peekable();
    let coords = a
        .coords()
        .iter()
        .enumerate()
        .filter_map(|(i, &c)| {
            if next.peek() == Some(&&i) {
                next.next();
                None
            } else {
                Some(c)
            }
        })
        .collect();
    ExtGrade(coords)
}

/// Inverse of [`project_grade`]: rebuild an `n`-grade from `a` by inserting
/// `-inf` at the coordinates listed in `axes`.
///
/// # Panics
///
/// Panics unless `a.len() + axes.len() == n` with `axes` strictly
/// increasing and in range.
pub fn embed_grade(a: &ExtGrade, axes: &[usize], n: usize) -> ExtGrade {
    assert!(
        axes.windows(2).all(|w| w[0] < w[1]),
        "axis list must be strictly increasing"
    );
    assert_eq!(a.len() + axes.len(), n, "length mismatch in embed_grade");
    let mut next = axes.iter().peekable();
    let mut rest = a.coords().iter();
    let coords = (0..n)
        .map(|i| {
            if next.peek() == Some(&&i) {
                next.next();
                ExtCoord::NegInf
            } else {
                *rest.next().expect("exhausted source coordinates")
            }
        })
        .collect();
    ExtGrade(coords)
}

/// Replace the coordinates listed in `axes` by `-inf`, keeping the rest.
/// Equals `embed_grade(project_grade(a, axes), axes, a.len())`.
pub fn mask_grade(a: &ExtGrade, axes: &[usize]) -> ExtGrade {
    let mut coords = a.coords().to_vec();
    for &q in axes {
        coords[q] = ExtCoord::NegInf;
    }
    ExtGrade(coords)
}
