//! Free resolutions, flat-injective presentations, and their file formats.
//!
//! Two line-based formats are supported. `scc2020` carries a free
//! resolution: a magic line, the parameter count, a block-size line
//! `s_L ... s_0` (an optional trailing `0` is accepted), then for each
//! degree from L down to 0 one line per generator of the form
//! `g_1 .. g_n ; b_1 b_2 ..`, where each boundary token is a 0-based index
//! into the next lower block, optionally `index:coefficient`. Comment
//! lines starting with `#` and blank lines are allowed before the data
//! lines only. `fip` carries a single graded matrix with its field:
//! `fip 1`, `field p`, `parameters n`, `rows r` + r grade lines,
//! `cols c` + c grade lines, `entries k` + k triplets `i j v`. Grade
//! tokens may be `-inf` and `inf`. Both formats are UTF-8, LF or CRLF on
//! input; writers emit LF.

use crate::field::{FieldError, Fp};
use crate::gmatrix::GradedMatrix;
use crate::grade::{ExtCoord, ExtGrade};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SccError {
    #[error("format error: line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("index error: line {line}: {msg}")]
    Index { line: usize, msg: String },
    #[error(
        "validity error: {what} has a nonzero entry at ({row}, {col}) \
         where row grade {row_grade} is not {rel} column grade {col_grade}"
    )]
    Validity {
        what: String,
        row: usize,
        col: usize,
        row_grade: ExtGrade,
        col_grade: ExtGrade,
        rel: &'static str,
    },
    #[error("chain-complex error: d{degree} * d{next} is nonzero at ({row}, {col})")]
    ChainComplex {
        degree: usize,
        next: usize,
        row: usize,
        col: usize,
    },
    #[error("structure error: {0}")]
    Structure(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A free resolution F_L -> ... -> F_1 -> F_0 presented by its
/// differentials D_1, .., D_L and the generator grades of each block.
///
/// Invariants, enforced on construction: all grades are finite with the
/// stated parameter count, D_d has row grades equal to the degree-(d-1)
/// list and column grades equal to the degree-d list, every D_d is valid,
/// consecutive differentials compose to zero, and a zero bottom block
/// forces every block to be zero.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeResolution {
    field: Fp,
    n: usize,
    grades: Vec<Vec<ExtGrade>>,
    matrices: Vec<GradedMatrix>,
}

impl FreeResolution {
    pub fn new(
        field: Fp,
        n: usize,
        grades: Vec<Vec<ExtGrade>>,
        matrices: Vec<GradedMatrix>,
    ) -> Result<Self, SccError> {
        if n == 0 {
            return Err(SccError::Structure(
                "parameter count must be positive".into(),
            ));
        }
        if grades.len() != matrices.len() + 1 {
            return Err(SccError::Structure(format!(
                "{} grade blocks do not fit {} differentials",
                grades.len(),
                matrices.len()
            )));
        }
        for (d, block) in grades.iter().enumerate() {
            for g in block {
                if g.len() != n || !g.is_finite() {
                    return Err(SccError::Structure(format!(
                        "degree-{d} generator grade {g} is not a finite {n}-grade"
                    )));
                }
            }
        }
        // A zero bottom block only presents the zero module, whose canonical
        // shape is the length-0 resolution; anything longer would not
        // survive a serialization round-trip (the block-size line would end
        // in the compatibility-reserved trailing 0).
        if grades[0].is_empty() && !matrices.is_empty() {
            return Err(SccError::Structure(
                "a zero bottom block is only representable as a length-0 resolution".into(),
            ));
        }
        for (i, m) in matrices.iter().enumerate() {
            let d = i + 1;
            if m.field() != field || m.params() != n {
                return Err(SccError::Structure(format!(
                    "d{d} disagrees with the resolution's field or parameter count"
                )));
            }
            if m.row_grades() != grades[d - 1] || m.col_grades() != grades[d] {
                return Err(SccError::Structure(format!(
                    "d{d} grade lists disagree with the generator blocks"
                )));
            }
            if let Some((row, col)) = m.find_validity_violation() {
                return Err(SccError::Validity {
                    what: format!("d{d}"),
                    row,
                    col,
                    row_grade: m.row_grades()[row].clone(),
                    col_grade: m.col_grades()[col].clone(),
                    rel: "<=",
                });
            }
        }
        for i in 0..matrices.len().saturating_sub(1) {
            let prod = matrices[i].multiply(&matrices[i + 1]);
            if !prod.is_zero() {
                let (row, col) = first_nonzero(&prod);
                return Err(SccError::ChainComplex {
                    degree: i + 1,
                    next: i + 2,
                    row,
                    col,
                });
            }
        }
        Ok(FreeResolution {
            field,
            n,
            grades,
            matrices,
        })
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    /// Number of grade coordinates.
    pub fn params(&self) -> usize {
        self.n
    }

    /// Homological length L (the number of differentials).
    pub fn length(&self) -> usize {
        self.matrices.len()
    }

    /// Generator grades of the degree-d block, d in 0..=L.
    pub fn grades(&self, d: usize) -> &[ExtGrade] {
        &self.grades[d]
    }

    /// Like [`FreeResolution::grades`], but empty beyond the length: the
    /// implicit zero padding of a resolution shorter than the parameter
    /// count.
    pub fn grades_padded(&self, d: usize) -> &[ExtGrade] {
        if d <= self.length() {
            &self.grades[d]
        } else {
            &[]
        }
    }

    pub fn block_size(&self, d: usize) -> usize {
        self.grades[d].len()
    }

    /// The differential D_d: F_d -> F_{d-1}, d in 1..=L.
    pub fn differential(&self, d: usize) -> &GradedMatrix {
        assert!((1..=self.length()).contains(&d), "no differential d{d}");
        &self.matrices[d - 1]
    }

    pub fn differentials(&self) -> &[GradedMatrix] {
        &self.matrices
    }

    /// All generator grades of all blocks.
    pub fn all_grades(&self) -> impl Iterator<Item = &ExtGrade> {
        self.grades.iter().flatten()
    }

    /// Degreewise direct sum; shorter resolutions are padded with zero
    /// blocks.
    ///
    /// # Panics
    ///
    /// Panics if fields or parameter counts differ.
    pub fn direct_sum(&self, other: &FreeResolution) -> FreeResolution {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.n, other.n, "parameter count mismatch");
        let len = self.length().max(other.length());
        let block = |r: &FreeResolution, d: usize| -> Vec<ExtGrade> {
            if d <= r.length() {
                r.grades[d].clone()
            } else {
                Vec::new()
            }
        };
        let diff = |r: &FreeResolution, d: usize| -> GradedMatrix {
            if d <= r.length() {
                r.matrices[d - 1].clone()
            } else {
                GradedMatrix::zero(r.field, r.n, block(r, d - 1), Vec::new())
            }
        };
        let grades: Vec<Vec<ExtGrade>> = (0..=len)
            .map(|d| {
                let mut b = block(self, d);
                b.extend(block(other, d));
                b
            })
            .collect();
        let matrices: Vec<GradedMatrix> = (1..=len)
            .map(|d| GradedMatrix::block_diag(self.field, self.n, &[diff(self, d), diff(other, d)]))
            .collect();
        FreeResolution::new(self.field, self.n, grades, matrices)
            .expect("direct sum preserves the resolution invariants")
    }
}

fn first_nonzero(m: &GradedMatrix) -> (usize, usize) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m.entry(i, j) != 0 {
                return (i, j);
            }
        }
    }
    unreachable!("matrix is zero")
}

/// A flat-injective presentation matrix. Rows carry injective cogenerator
/// grades, columns flat generator grades; the matrix is anti-valid.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatInjectivePresentation {
    matrix: GradedMatrix,
}

impl FlatInjectivePresentation {
    pub fn new(matrix: GradedMatrix) -> Result<Self, SccError> {
        if let Some((row, col)) = matrix.find_anti_validity_violation() {
            return Err(SccError::Validity {
                what: "presentation matrix".into(),
                row,
                col,
                row_grade: matrix.row_grades()[row].clone(),
                col_grade: matrix.col_grades()[col].clone(),
                rel: ">=",
            });
        }
        Ok(FlatInjectivePresentation { matrix })
    }

    pub fn matrix(&self) -> &GradedMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> GradedMatrix {
        self.matrix
    }

    pub fn field(&self) -> Fp {
        self.matrix.field()
    }

    pub fn params(&self) -> usize {
        self.matrix.params()
    }
}

struct LineReader<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> LineReader<'a> {
    fn new(text: &'a str) -> Self {
        LineReader {
            lines: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next line with its 1-based number, CR stripped.
    fn next_raw(&mut self) -> Option<(usize, &'a str)> {
        self.lines.next().map(|(i, l)| {
            self.last = i + 1;
            (i + 1, l.strip_suffix('\r').unwrap_or(l))
        })
    }

    /// Next line that is neither blank nor a comment.
    fn next_header(&mut self) -> Option<(usize, &'a str)> {
        loop {
            let (no, line) = self.next_raw()?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Some((no, line));
        }
    }

    /// Expect end of input, modulo trailing blank lines.
    fn expect_end(&mut self, what: &str) -> Result<(), SccError> {
        while let Some((no, line)) = self.next_raw() {
            if !line.trim().is_empty() {
                return Err(SccError::Format {
                    line: no,
                    msg: format!("unexpected content after {what}"),
                });
            }
        }
        Ok(())
    }
}

fn format_err(line: usize, msg: impl Into<String>) -> SccError {
    SccError::Format {
        line,
        msg: msg.into(),
    }
}

/// Parse a free resolution in the scc2020 dialect. Boundary indices are
/// 0-based unless `one_based` is set; coefficients are reduced mod p.
pub fn parse_scc2020(text: &str, field: Fp, one_based: bool) -> Result<FreeResolution, SccError> {
    let mut r = LineReader::new(text);
    let (no, magic) = r
        .next_header()
        .ok_or_else(|| format_err(0, "empty input, expected scc2020 header"))?;
    if magic.trim() != "scc2020" {
        return Err(format_err(no, "first token must be scc2020"));
    }
    let (no, nline) = r
        .next_header()
        .ok_or_else(|| format_err(no, "missing parameter count"))?;
    let n: usize = nline
        .trim()
        .parse()
        .map_err(|_| format_err(no, "parameter count must be a single integer"))?;
    if n == 0 {
        return Err(format_err(no, "parameter count must be positive"));
    }
    let (no, sline) = r
        .next_header()
        .ok_or_else(|| format_err(no, "missing block-size line"))?;
    let mut sizes: Vec<usize> = Vec::new();
    for tok in sline.split_whitespace() {
        sizes.push(
            tok.parse()
                .map_err(|_| format_err(no, format!("bad block size {tok:?}")))?,
        );
    }
    if sizes.is_empty() {
        return Err(format_err(no, "block-size line is empty"));
    }
    // Compatibility: some tools append a trailing 0 for the (-1)-block.
    if sizes.len() >= 2 && *sizes.last().unwrap() == 0 {
        sizes.pop();
    }
    let big_l = sizes.len() - 1;

    // grades_rev[k], entries_rev[k] describe the block of degree L - k,
    // in file order.
    let mut grades_rev: Vec<Vec<ExtGrade>> = Vec::new();
    let mut columns_rev: Vec<Vec<Vec<(usize, u32)>>> = Vec::new();
    for (k, &count) in sizes.iter().enumerate() {
        let d = big_l - k;
        let lower = if d > 0 { Some(sizes[k + 1]) } else { None };
        let mut block_grades = Vec::with_capacity(count);
        let mut block_cols = Vec::with_capacity(count);
        for _ in 0..count {
            let last = r.last;
            let (no, line) = r.next_raw().ok_or_else(|| {
                format_err(last, format!("missing generator lines in degree {d}"))
            })?;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                return Err(format_err(
                    no,
                    "comments and blank lines are only allowed before the data lines",
                ));
            }
            let (grade, boundary) = parse_generator_line(line, no, n, lower, field, one_based)?;
            block_grades.push(grade);
            block_cols.push(boundary);
        }
        grades_rev.push(block_grades);
        columns_rev.push(block_cols);
    }
    r.expect_end("the generator lines")?;

    // Reorder to degree 0..=L and assemble differentials.
    grades_rev.reverse();
    columns_rev.reverse();
    let grades = grades_rev;
    let mut matrices = Vec::with_capacity(big_l);
    for d in 1..=big_l {
        let mut m = GradedMatrix::zero(field, n, grades[d - 1].clone(), grades[d].clone());
        for (j, bnd) in columns_rev[d].iter().enumerate() {
            for &(i, v) in bnd {
                m.set_entry(i, j, v);
            }
        }
        matrices.push(m);
    }
    FreeResolution::new(field, n, grades, matrices)
}

fn parse_generator_line(
    line: &str,
    no: usize,
    n: usize,
    lower: Option<usize>,
    field: Fp,
    one_based: bool,
) -> Result<(ExtGrade, Vec<(usize, u32)>), SccError> {
    let mut parts = line.splitn(2, ';');
    let grade_part = parts.next().unwrap();
    let Some(boundary_part) = parts.next() else {
        return Err(format_err(no, "generator line is missing the ; separator"));
    };
    if boundary_part.contains(';') {
        return Err(format_err(no, "generator line has more than one ;"));
    }
    let coords: Result<Vec<i64>, _> = grade_part
        .split_whitespace()
        .map(|t| t.parse::<i64>())
        .collect();
    let coords = coords.map_err(|_| format_err(no, "grade coordinates must be integers"))?;
    if coords.len() != n {
        return Err(format_err(
            no,
            format!("grade has {} coordinates, expected {n}", coords.len()),
        ));
    }
    let mut boundary: Vec<(usize, u32)> = Vec::new();
    for tok in boundary_part.split_whitespace() {
        let Some(lower) = lower else {
            return Err(format_err(no, "degree-0 generators take no boundary"));
        };
        let (idx_str, coeff) = match tok.split_once(':') {
            Some((i, c)) => {
                let c: i64 = c
                    .parse()
                    .map_err(|_| format_err(no, format!("bad coefficient in {tok:?}")))?;
                (i, field.normalize(c))
            }
            None => (tok, 1u32),
        };
        let mut idx: usize = idx_str
            .parse()
            .map_err(|_| format_err(no, format!("bad boundary index {idx_str:?}")))?;
        if one_based {
            if idx == 0 {
                return Err(SccError::Index {
                    line: no,
                    msg: "boundary index 0 in a one-based file".into(),
                });
            }
            idx -= 1;
        }
        if idx >= lower {
            return Err(SccError::Index {
                line: no,
                msg: format!("boundary index {idx} exceeds the next block (size {lower})"),
            });
        }
        if boundary.iter().any(|&(i, _)| i == idx) {
            return Err(format_err(no, format!("duplicate boundary index {idx}")));
        }
        boundary.push((idx, coeff));
    }
    Ok((ExtGrade::finite(&coords), boundary))
}

/// Serialize a resolution; inverse of [`parse_scc2020`] with 0-based
/// indices. Coefficients are written as residues in `[0, p)`.
pub fn write_scc2020(res: &FreeResolution) -> String {
    let mut out = String::from("scc2020\n");
    out.push_str(&format!("{}\n", res.params()));
    let big_l = res.length();
    let sizes: Vec<String> = (0..=big_l)
        .rev()
        .map(|d| res.block_size(d).to_string())
        .collect();
    out.push_str(&sizes.join(" "));
    out.push('\n');
    for d in (0..=big_l).rev() {
        for j in 0..res.block_size(d) {
            let grade = &res.grades(d)[j];
            let coords: Vec<String> = grade
                .coords()
                .iter()
                .map(|c| c.to_string())
                .collect();
            out.push_str(&coords.join(" "));
            out.push_str(" ;");
            if d > 0 {
                let m = res.differential(d);
                for i in 0..m.nrows() {
                    let v = m.entry(i, j);
                    if v == 0 {
                        continue;
                    }
                    if v == 1 {
                        out.push_str(&format!(" {i}"));
                    } else {
                        out.push_str(&format!(" {i}:{v}"));
                    }
                }
            }
            out.push('\n');
        }
    }
    out
}

fn keyword_line<'a>(
    r: &mut LineReader<'a>,
    keyword: &str,
) -> Result<(usize, &'a str), SccError> {
    let last = r.last;
    let (no, line) = r
        .next_raw()
        .ok_or_else(|| format_err(last, format!("missing {keyword} line")))?;
    let mut it = line.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some(k), Some(v), None) if k == keyword => Ok((no, v)),
        _ => Err(format_err(no, format!("expected {keyword} <value>"))),
    }
}

fn parse_grade_line(line: &str, no: usize, n: usize) -> Result<ExtGrade, SccError> {
    let mut coords = Vec::with_capacity(n);
    for tok in line.split_whitespace() {
        let c = match tok {
            "-inf" => ExtCoord::NegInf,
            "inf" => ExtCoord::PosInf,
            _ => ExtCoord::Finite(
                tok.parse::<i64>()
                    .map_err(|_| format_err(no, format!("bad grade coordinate {tok:?}")))?,
            ),
        };
        coords.push(c);
    }
    if coords.len() != n {
        return Err(format_err(
            no,
            format!("grade has {} coordinates, expected {n}", coords.len()),
        ));
    }
    Ok(ExtGrade::new(coords))
}

/// Parse the fip container into a bare graded matrix, without imposing a
/// validity class. Use [`parse_fip`] to read a presentation.
pub fn parse_fip_matrix(text: &str) -> Result<GradedMatrix, SccError> {
    let mut r = LineReader::new(text);
    let (no, line) = r
        .next_raw()
        .ok_or_else(|| format_err(0, "empty input, expected fip header"))?;
    if line.split_whitespace().collect::<Vec<_>>() != ["fip", "1"] {
        return Err(format_err(no, "first line must be fip 1"));
    }
    let (no, p) = keyword_line(&mut r, "field")?;
    let p: u32 = p
        .parse()
        .map_err(|_| format_err(no, "field characteristic must be an integer"))?;
    let field = Fp::new(p)?;
    let (no, n) = keyword_line(&mut r, "parameters")?;
    let n: usize = n
        .parse()
        .map_err(|_| format_err(no, "parameter count must be an integer"))?;
    if n == 0 {
        return Err(format_err(no, "parameter count must be positive"));
    }
    let read_grades = |r: &mut LineReader, keyword: &str| -> Result<Vec<ExtGrade>, SccError> {
        let (no, count) = keyword_line(r, keyword)?;
        let count: usize = count
            .parse()
            .map_err(|_| format_err(no, format!("{keyword} count must be an integer")))?;
        let mut grades = Vec::with_capacity(count);
        for _ in 0..count {
            let last = r.last;
            let (no, line) = r
                .next_raw()
                .ok_or_else(|| format_err(last, format!("missing {keyword} grade lines")))?;
            grades.push(parse_grade_line(line, no, n)?);
        }
        Ok(grades)
    };
    let row_grades = read_grades(&mut r, "rows")?;
    let col_grades = read_grades(&mut r, "cols")?;
    let (no, k) = keyword_line(&mut r, "entries")?;
    let k: usize = k
        .parse()
        .map_err(|_| format_err(no, "entry count must be an integer"))?;
    let mut m = GradedMatrix::zero(field, n, row_grades, col_grades);
    for _ in 0..k {
        let last = r.last;
        let (no, line) = r
            .next_raw()
            .ok_or_else(|| format_err(last, "missing entry lines".to_string()))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [i, j, v] = toks[..] else {
            return Err(format_err(no, "expected entry triplet: row col value"));
        };
        let i: usize = i
            .parse()
            .map_err(|_| format_err(no, format!("bad row index {i:?}")))?;
        let j: usize = j
            .parse()
            .map_err(|_| format_err(no, format!("bad column index {j:?}")))?;
        let v: u32 = v
            .parse()
            .map_err(|_| format_err(no, format!("bad entry value {v:?}")))?;
        if i >= m.nrows() || j >= m.ncols() {
            return Err(SccError::Index {
                line: no,
                msg: format!("entry ({i}, {j}) outside a {}x{} matrix", m.nrows(), m.ncols()),
            });
        }
        if v == 0 || v >= field.characteristic() {
            return Err(format_err(
                no,
                format!("entry value {v} outside [1, {})", field.characteristic()),
            ));
        }
        if m.entry(i, j) != 0 {
            return Err(format_err(no, format!("duplicate entry ({i}, {j})")));
        }
        m.set_entry(i, j, v);
    }
    r.expect_end("the entry lines")?;
    Ok(m)
}

/// Parse a flat-injective presentation; the matrix must be anti-valid.
pub fn parse_fip(text: &str) -> Result<FlatInjectivePresentation, SccError> {
    FlatInjectivePresentation::new(parse_fip_matrix(text)?)
}

/// Serialize a presentation matrix; inverse of [`parse_fip`].
pub fn write_fip(pres: &FlatInjectivePresentation) -> String {
    write_fip_matrix(pres.matrix())
}

pub(crate) fn write_fip_matrix(m: &GradedMatrix) -> String {
    let mut out = String::from("fip 1\n");
    out.push_str(&format!("field {}\n", m.field().characteristic()));
    out.push_str(&format!("parameters {}\n", m.params()));
    let grade_line = |g: &ExtGrade| {
        g.coords()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&format!("rows {}\n", m.nrows()));
    for g in m.row_grades() {
        out.push_str(&grade_line(g));
        out.push('\n');
    }
    out.push_str(&format!("cols {}\n", m.ncols()));
    for g in m.col_grades() {
        out.push_str(&grade_line(g));
        out.push('\n');
    }
    let mut entries = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m.entry(i, j);
            if v != 0 {
                entries.push((i, j, v));
            }
        }
    }
    out.push_str(&format!("entries {}\n", entries.len()));
    for (i, j, v) in entries {
        out.push_str(&format!("{i} {j} {v}\n"));
    }
    out
}

/// Per-matrix findings of [`validate_resolution`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixReport {
    /// Homological degree d of the differential D_d.
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub valid: bool,
    pub minimal: bool,
    /// D_d * D_{d+1} = 0; `None` for the last differential.
    pub composes_to_zero: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionReport {
    pub parameters: usize,
    pub characteristic: u32,
    /// Block sizes s_0, .., s_L.
    pub block_sizes: Vec<usize>,
    pub matrices: Vec<MatrixReport>,
    pub all_valid: bool,
    pub all_minimal: bool,
    pub all_compositions_zero: bool,
}

/// Recompute the structural facts about a resolution from scratch.
pub fn validate_resolution(res: &FreeResolution) -> ResolutionReport {
    let mut matrices = Vec::new();
    for d in 1..=res.length() {
        let m = res.differential(d);
        let composes_to_zero = if d < res.length() {
            Some(m.multiply(res.differential(d + 1)).is_zero())
        } else {
            None
        };
        matrices.push(MatrixReport {
            degree: d,
            rows: m.nrows(),
            cols: m.ncols(),
            valid: m.is_valid(),
            minimal: m.is_minimal(),
            composes_to_zero,
        });
    }
    ResolutionReport {
        parameters: res.params(),
        characteristic: res.field().characteristic(),
        block_sizes: (0..=res.length()).map(|d| res.block_size(d)).collect(),
        all_valid: matrices.iter().all(|m| m.valid),
        all_minimal: matrices.iter().all(|m| m.minimal),
        all_compositions_zero: matrices
            .iter()
            .all(|m| m.composes_to_zero.unwrap_or(true)),
        matrices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    fn g(coords: &[i64]) -> ExtGrade {
        ExtGrade::finite(coords)
    }

    const EXAMPLE: &str = "\
scc2020
# two-generator staircase over two parameters
2
2 4 2
2 2 ; 1 2:-1
3 3 ; 0 1:-1 3:-1
0 3 ; 0
1 2 ; 0 1:-1
2 1 ; 0 1:-1
3 0 ; 1
0 1 ;
1 0 ;
";

    fn example(p: u32) -> FreeResolution {
        parse_scc2020(EXAMPLE, fp(p), false).unwrap()
    }

    #[test]
    fn parses_the_staircase_example() {
        let res = example(32003);
        assert_eq!(res.params(), 2);
        assert_eq!(res.length(), 2);
        assert_eq!(res.grades(0), &[g(&[0, 1]), g(&[1, 0])]);
        assert_eq!(
            res.grades(1),
            &[g(&[0, 3]), g(&[1, 2]), g(&[2, 1]), g(&[3, 0])]
        );
        assert_eq!(res.grades(2), &[g(&[2, 2]), g(&[3, 3])]);
        let f = fp(32003);
        let d1 = res.differential(1);
        let expect_d1 = [[1, 1, 1, 0], [0, -1, -1, 1]];
        for i in 0..2 {
            for j in 0..4 {
                assert_eq!(d1.entry(i, j), f.normalize(expect_d1[i][j]));
            }
        }
        let d2 = res.differential(2);
        let expect_d2 = [[0, 1], [1, -1], [-1, 0], [0, -1]];
        for i in 0..4 {
            for j in 0..2 {
                assert_eq!(d2.entry(i, j), f.normalize(expect_d2[i][j]));
            }
        }
        // Also parses over p = 2, where -1 reads as 1.
        let res2 = example(2);
        assert_eq!(res2.differential(2).entry(1, 1), 1);
    }

    #[test]
    fn accepts_trailing_zero_and_one_based_indices() {
        let with_zero = EXAMPLE.replace("2 4 2", "2 4 2 0");
        assert_eq!(
            parse_scc2020(&with_zero, fp(32003), false).unwrap(),
            example(32003)
        );

        let one_based = "\
scc2020
2
2 4 2
2 2 ; 2 3:-1
3 3 ; 1 2:-1 4:-1
0 3 ; 1
1 2 ; 1 2:-1
2 1 ; 1 2:-1
3 0 ; 2
0 1 ;
1 0 ;
";
        assert_eq!(
            parse_scc2020(one_based, fp(32003), true).unwrap(),
            example(32003)
        );
        assert!(matches!(
            parse_scc2020(one_based, fp(32003), false),
            Err(SccError::ChainComplex { .. }) | Err(SccError::Index { .. })
        ));
    }

    #[test]
    fn single_block_and_zero_module() {
        let free = "scc2020\n2\n3\n0 0 ;\n1 5 ;\n2 2 ;\n";
        let res = parse_scc2020(free, fp(2), false).unwrap();
        assert_eq!(res.length(), 0);
        assert_eq!(res.block_size(0), 3);
        assert_eq!(parse_scc2020(&write_scc2020(&res), fp(2), false).unwrap(), res);

        let zero = "scc2020\n2\n0\n";
        let res = parse_scc2020(zero, fp(2), false).unwrap();
        assert_eq!(res.block_size(0), 0);
        assert_eq!(write_scc2020(&res), "scc2020\n2\n0\n");
    }

    #[test]
    fn error_classes() {
        let bad_magic = "scc2021\n2\n1\n0 0 ;\n";
        assert!(matches!(
            parse_scc2020(bad_magic, fp(2), false),
            Err(SccError::Format { line: 1, .. })
        ));

        let bad_grade_count = "scc2020\n2\n1\n0 ;\n";
        assert!(matches!(
            parse_scc2020(bad_grade_count, fp(2), false),
            Err(SccError::Format { line: 4, .. })
        ));

        let index_oor = "scc2020\n2\n1 1\n0 0 ; 3\n0 0 ;\n";
        assert!(matches!(
            parse_scc2020(index_oor, fp(2), false),
            Err(SccError::Index { line: 4, .. })
        ));

        let duplicate = "scc2020\n2\n1 1\n0 0 ; 0 0:1\n0 0 ;\n";
        assert!(matches!(
            parse_scc2020(duplicate, fp(2), false),
            Err(SccError::Format { line: 4, .. })
        ));

        // Grade drop from (0,0) to (1,1) breaks validity.
        let invalid = "scc2020\n2\n1 1\n0 0 ; 0\n1 1 ;\n";
        assert!(matches!(
            parse_scc2020(invalid, fp(2), false),
            Err(SccError::Validity { rel: "<=", .. })
        ));

        // d1 * d2 has entry 1 + 1 = 2 != 0 over F_32003.
        let nonzero_dd = "\
scc2020
2
1 2 1
2 2 ; 0 1
1 1 ; 0
1 1 ; 0
0 0 ;
";
        let err = parse_scc2020(nonzero_dd, fp(32003), false).unwrap_err();
        assert!(matches!(err, SccError::ChainComplex { degree: 1, next: 2, .. }));
        assert!(err.to_string().starts_with("chain-complex error"));
        // The same file is a complex over F_2.
        assert!(parse_scc2020(nonzero_dd, fp(2), false).is_ok());

        let comment_in_data = "scc2020\n2\n2\n0 0 ;\n# late comment\n1 1 ;\n";
        assert!(matches!(
            parse_scc2020(comment_in_data, fp(2), false),
            Err(SccError::Format { line: 5, .. })
        ));

        let trailing_garbage = "scc2020\n2\n1\n0 0 ;\nleftover\n";
        assert!(matches!(
            parse_scc2020(trailing_garbage, fp(2), false),
            Err(SccError::Format { line: 5, .. })
        ));
    }

    #[test]
    fn crlf_and_trailing_blanks_are_tolerated() {
        let crlf = EXAMPLE.replace('\n', "\r\n") + "\r\n\r\n";
        assert_eq!(parse_scc2020(&crlf, fp(32003), false).unwrap(), example(32003));
    }

    #[test]
    fn empty_bottom_block_is_rejected() {
        let f = fp(2);
        // One degree-1 generator over an empty bottom block.
        let bad = FreeResolution::new(
            f,
            2,
            vec![vec![], vec![g(&[0, 0])]],
            vec![GradedMatrix::zero(f, 2, vec![], vec![g(&[0, 0])])],
        );
        assert!(matches!(bad, Err(SccError::Structure(_))));
        // The all-zero length-1 shape is rejected too; the zero module is
        // canonically the length-0 resolution.
        let zero_l1 = FreeResolution::new(
            f,
            2,
            vec![vec![], vec![]],
            vec![GradedMatrix::zero(f, 2, vec![], vec![])],
        );
        assert!(matches!(zero_l1, Err(SccError::Structure(_))));
        // A size line "1 0" reads as a free module with one generator: the
        // trailing 0 is the compatibility allowance, not an empty block.
        let res = parse_scc2020("scc2020\n2\n1 0\n0 0 ;\n", f, false).unwrap();
        assert_eq!(res.length(), 0);
        assert_eq!(res.block_size(0), 1);
    }

    #[test]
    fn round_trip_is_identity_on_the_example() {
        for p in [2u32, 32003] {
            let res = example(p);
            let text = write_scc2020(&res);
            assert_eq!(parse_scc2020(&text, fp(p), false).unwrap(), res);
            // Writer output is stable.
            assert_eq!(write_scc2020(&parse_scc2020(&text, fp(p), false).unwrap()), text);
        }
    }

    #[test]
    fn fip_round_trip_with_infinite_grades() {
        let f = fp(32003);
        let m = GradedMatrix::from_rows_i64(
            f,
            2,
            vec![
                ExtGrade::new(vec![ExtCoord::Finite(1), ExtCoord::PosInf]),
                ExtGrade::finite(&[2, 2]),
            ],
            vec![
                ExtGrade::new(vec![ExtCoord::NegInf, ExtCoord::Finite(0)]),
                ExtGrade::finite(&[0, 1]),
            ],
            &[&[-1, 0], &[-1, -1]],
        );
        let pres = FlatInjectivePresentation::new(m).unwrap();
        let text = write_fip(&pres);
        assert!(text.contains("-inf"));
        assert!(text.contains("inf"));
        let back = parse_fip(&text).unwrap();
        assert_eq!(back, pres);

        // 0 x 0 matrix round-trips.
        let empty =
            FlatInjectivePresentation::new(GradedMatrix::zero(f, 2, vec![], vec![])).unwrap();
        assert_eq!(parse_fip(&write_fip(&empty)).unwrap(), empty);
    }

    #[test]
    fn fip_rejects_bad_entries_and_classes() {
        let header = "fip 1\nfield 5\nparameters 2\nrows 1\n0 0\ncols 1\n1 1\n";
        assert!(matches!(
            parse_fip(&format!("{header}entries 1\n0 0 0\n")),
            Err(SccError::Format { .. })
        ));
        assert!(matches!(
            parse_fip(&format!("{header}entries 1\n0 0 5\n")),
            Err(SccError::Format { .. })
        ));
        assert!(matches!(
            parse_fip(&format!("{header}entries 1\n0 1 1\n")),
            Err(SccError::Index { .. })
        ));
        assert!(matches!(
            parse_fip(&format!("{header}entries 2\n0 0 1\n0 0 2\n")),
            Err(SccError::Format { .. })
        ));
        // Entry (0,0) with rg (0,0) < cg (1,1) violates anti-validity.
        assert!(matches!(
            parse_fip(&format!("{header}entries 1\n0 0 1\n")),
            Err(SccError::Validity { rel: ">=", .. })
        ));
        // ... but parse_fip_matrix accepts the raw container.
        assert!(parse_fip_matrix(&format!("{header}entries 1\n0 0 1\n")).is_ok());
        assert!(matches!(
            parse_fip("fip 2\nfield 5\n"),
            Err(SccError::Format { line: 1, .. })
        ));
        assert!(matches!(
            parse_fip("fip 1\nfield 6\nparameters 1\nrows 0\ncols 0\nentries 0\n"),
            Err(SccError::Field(FieldError::NotPrime(6)))
        ));
    }

    #[test]
    fn validation_report_flags() {
        let res = example(32003);
        let report = validate_resolution(&res);
        assert!(report.all_valid && report.all_minimal && report.all_compositions_zero);
        assert_eq!(report.block_sizes, vec![2, 4, 2]);
        assert_eq!(report.matrices[0].composes_to_zero, Some(true));
        assert_eq!(report.matrices[1].composes_to_zero, None);

        // An identity entry with rg = cg is valid but not minimal.
        let f = fp(2);
        let id = GradedMatrix::identity(f, 2, vec![g(&[1, 1])]);
        let res = FreeResolution::new(
            f,
            2,
            vec![vec![g(&[1, 1])], vec![g(&[1, 1])]],
            vec![id],
        )
        .unwrap();
        let report = validate_resolution(&res);
        assert!(report.all_valid);
        assert!(!report.all_minimal);
    }

    #[test]
    fn direct_sum_pads_lengths() {
        let f = fp(2);
        let a = example(2);
        let free = FreeResolution::new(f, 2, vec![vec![g(&[5, 5])]], vec![]).unwrap();
        let sum = a.direct_sum(&free);
        assert_eq!(sum.length(), 2);
        assert_eq!(sum.block_size(0), 3);
        assert_eq!(sum.block_size(1), 4);
        assert_eq!(sum.grades(0)[2], g(&[5, 5]));
        let text = write_scc2020(&sum);
        assert_eq!(parse_scc2020(&text, f, false).unwrap(), sum);
    }

    fn arb_valid_length1() -> impl Strategy<Value = FreeResolution> {
        // Random valid D1 with row grades in [0,3]^2 and column grades
        // shifted up by [0,3]^2, entries masked by the grade order.
        let coord = 0i64..=3;
        let grade = |r: std::ops::RangeInclusive<i64>| {
            proptest::collection::vec(r, 2).prop_map(|c| ExtGrade::finite(&c))
        };
        (
            proptest::collection::vec(grade(coord.clone()), 0..4),
            proptest::collection::vec(grade(3..=9), 0..5),
            proptest::collection::vec(0i64..32003, 20),
        )
            .prop_map(|(rg, cg, vals)| {
                let f = fp(32003);
                let mut m = GradedMatrix::zero(f, 2, rg.clone(), cg.clone());
                let mut k = 0;
                for i in 0..rg.len() {
                    for j in 0..cg.len() {
                        if crate::grade::grade_leq(&rg[i], &cg[j]) {
                            m.set_entry(i, j, f.normalize(vals[k % vals.len()]));
                            k += 1;
                        }
                    }
                }
                if rg.is_empty() {
                    // The zero bottom block forces the length-0 shape.
                    return FreeResolution::new(f, 2, vec![vec![]], vec![]).unwrap();
                }
                FreeResolution::new(f, 2, vec![rg, cg], vec![m]).unwrap()
            })
    }

    proptest! {
        #[test]
        fn round_trip_identity_on_random_resolutions(res in arb_valid_length1()) {
            let text = write_scc2020(&res);
            prop_assert_eq!(parse_scc2020(&text, fp(32003), false).unwrap(), res);
        }
    }
}
