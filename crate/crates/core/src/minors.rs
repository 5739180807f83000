//! The point space of ℓ×ℓ' matrices over GF(q), the ordered basis of
//! minors of degree ≤ h, minor evaluation, and the two "close" minor
//! families whose supports intersect in predictable sizes.
//!
//! Row and column indices are 0-based in code and 1-based in `Display`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::par::{self, Execution};

/// Enumeration budget for exhaustive loops over the point space.
pub const DEFAULT_POINT_BUDGET: u64 = 1 << 24;

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    checked_binomial(n, k).expect("binomial coefficient overflows u128")
}

pub(crate) fn checked_binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Parameters `(q, ℓ, ℓ', h)` of an affine Grassmann code and the
/// constants derived from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeParams {
    field: Field,
    rows: usize,
    cols: usize,
    level: usize,
    length: u128,
    dimension: usize,
}

impl CodeParams {
    pub fn new(q: u64, rows: usize, cols: usize, level: usize) -> Result<Self> {
        let field = Field::new(q)?;
        Self::with_field(field, rows, cols, level)
    }

    pub fn with_field(field: Field, rows: usize, cols: usize, level: usize) -> Result<Self> {
        if !(1 <= level && level <= rows && rows <= cols) {
            return Err(Error::BadShape(format!(
                "need 1 <= h <= l <= l', got h={level}, l={rows}, l'={cols}"
            )));
        }
        let delta = rows.checked_mul(cols).ok_or_else(|| Error::Overflow("l*l'".into()))?;
        let length = u32::try_from(delta)
            .ok()
            .and_then(|d| (field.order() as u128).checked_pow(d))
            .ok_or_else(|| Error::Overflow(format!("q^{delta} with q={}", field.order())))?;
        let dimension: u128 = (0..=level).map(|i| binomial(rows, i) * binomial(cols, i)).sum();
        let dimension = usize::try_from(dimension).map_err(|_| Error::Overflow("k_h".into()))?;
        Ok(CodeParams {
            field,
            rows,
            cols,
            level,
            length,
            dimension,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    /// ℓ, the number of rows of the generic matrix.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// ℓ', the number of columns of the generic matrix.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// h, the largest admitted minor degree.
    pub fn level(&self) -> usize {
        self.level
    }

    /// m = ℓ + ℓ'.
    pub fn m(&self) -> usize {
        self.rows + self.cols
    }

    /// δ = ℓ·ℓ', the number of matrix entries.
    pub fn delta(&self) -> usize {
        self.rows * self.cols
    }

    /// n = q^δ.
    pub fn length(&self) -> u128 {
        self.length
    }

    /// k_h = Σ_{i≤h} C(ℓ,i)·C(ℓ',i).
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// μ' = 1 + max{ℓ, ℓ'−ℓ}.
    pub fn mu_prime(&self) -> usize {
        1 + self.rows.max(self.cols - self.rows)
    }

    /// μ = ℓ' + 1.
    pub fn mu(&self) -> usize {
        self.cols + 1
    }

    /// Point count as a `u64`, failing when it exceeds `budget`.
    pub fn points_within(&self, budget: u64) -> Result<u64> {
        if self.length > budget as u128 {
            return Err(Error::BudgetExceeded {
                what: "points of the affine space".into(),
                required: self.length,
                budget: budget as u128,
            });
        }
        Ok(self.length as u64)
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "C^A({}, {}; {}) over GF({})",
            self.rows,
            self.m(),
            self.level,
            self.q()
        )
    }
}

/// A minor of the generic matrix, given by row and column subsets of equal
/// size. The empty minor is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinorIndex {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

fn strictly_increasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl MinorIndex {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} rows but {} columns",
                rows.len(),
                cols.len()
            )));
        }
        if !strictly_increasing(&rows) || !strictly_increasing(&cols) {
            return Err(Error::ShapeMismatch("indices must be strictly increasing".into()));
        }
        Ok(MinorIndex { rows, cols })
    }

    /// The constant minor 1.
    pub fn constant() -> Self {
        MinorIndex {
            rows: Vec::new(),
            cols: Vec::new(),
        }
    }

    /// The variable X_{ij} (0-based).
    pub fn entry(i: usize, j: usize) -> Self {
        MinorIndex {
            rows: vec![i],
            cols: vec![j],
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn degree(&self) -> usize {
        self.rows.len()
    }

    fn fits(&self, rows: usize, cols: usize) -> bool {
        self.rows.last().is_none_or(|&r| r < rows) && self.cols.last().is_none_or(|&c| c < cols)
    }
}

impl fmt::Display for MinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "1");
        }
        let join = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
        write!(f, "[{};{}]", join(&self.rows), join(&self.cols))
    }
}

/// The ordered basis N_1, …, N_{k_h}: minors of degree ≥ 2 (degree
/// descending, then lexicographic in rows and columns), followed by
/// X_{ℓℓ'}, …, X_{12}, X_{11} and finally the constant 1.
pub fn minor_basis(params: &CodeParams) -> Vec<MinorIndex> {
    let (l, lp) = (params.rows(), params.cols());
    let mut basis = Vec::with_capacity(params.dimension());
    for t in (2..=params.level()).rev() {
        let col_sets = combinations(lp, t);
        for rows in combinations(l, t) {
            for cols in &col_sets {
                basis.push(MinorIndex {
                    rows: rows.clone(),
                    cols: cols.clone(),
                });
            }
        }
    }
    for i in (0..l).rev() {
        for j in (0..lp).rev() {
            basis.push(MinorIndex::entry(i, j));
        }
    }
    basis.push(MinorIndex::constant());
    debug_assert_eq!(basis.len(), params.dimension());
    basis
}

/// A matrix point of the affine space together with its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPoint {
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
    index: u64,
}

impl MatrixPoint {
    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.cols + j]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

/// Writes the base-q digits of `idx` into `out`, most significant first.
pub(crate) fn decode_index(mut idx: u64, q: u64, out: &mut [Elem]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % q) as Elem;
        idx /= q;
    }
}

/// Advances big-endian base-q digits by one, wrapping at the end.
#[inline]
pub(crate) fn increment_digits(digits: &mut [Elem], q: u64) {
    for d in digits.iter_mut().rev() {
        if (*d as u64) + 1 < q {
            *d += 1;
            return;
        }
        *d = 0;
    }
}

/// The point with the given index: row-major entries, X_{11} most
/// significant base-q digit.
pub fn point_from_index(idx: u64, params: &CodeParams) -> Result<MatrixPoint> {
    if idx as u128 >= params.length() {
        return Err(Error::OutOfRange {
            value: idx,
            order: params.length().min(u64::MAX as u128) as u64,
        });
    }
    let mut entries = vec![0; params.delta()];
    decode_index(idx, params.q(), &mut entries);
    Ok(MatrixPoint {
        rows: params.rows(),
        cols: params.cols(),
        entries,
        index: idx,
    })
}

/// Inverse of [`point_from_index`] on raw entries.
pub fn index_of_point(entries: &[Elem], params: &CodeParams) -> Result<u64> {
    if entries.len() != params.delta() {
        return Err(Error::LengthMismatch {
            expected: params.delta(),
            actual: entries.len(),
        });
    }
    let q = params.q();
    let mut idx: u64 = 0;
    for &e in entries {
        params.field().check(e as u64)?;
        idx = idx
            .checked_mul(q)
            .and_then(|v| v.checked_add(e as u64))
            .ok_or_else(|| Error::Overflow("point index".into()))?;
    }
    Ok(idx)
}

/// Determinant of a t×t row-major matrix over `field`, by Gaussian
/// elimination with first-nonzero pivoting. `m` is clobbered.
pub fn determinant(field: &Field, m: &mut [Elem], t: usize) -> Elem {
    debug_assert_eq!(m.len(), t * t);
    match t {
        0 => return 1,
        1 => return m[0],
        2 => return field.sub(field.mul(m[0], m[3]), field.mul(m[1], m[2])),
        _ => {}
    }
    let mut det: Elem = 1;
    for c in 0..t {
        let Some(p) = (c..t).find(|&r| m[r * t + c] != 0) else {
            return 0;
        };
        if p != c {
            for k in 0..t {
                m.swap(p * t + k, c * t + k);
            }
            det = field.neg(det);
        }
        let pivot = m[c * t + c];
        det = field.mul(det, pivot);
        let inv = field.inv(pivot).expect("pivot is nonzero");
        for r in c + 1..t {
            let f = field.mul(m[r * t + c], inv);
            if f == 0 {
                continue;
            }
            for k in c..t {
                let v = field.mul(f, m[c * t + k]);
                m[r * t + k] = field.sub(m[r * t + k], v);
            }
        }
    }
    det
}

/// Evaluates `minor` on row-major `entries` with `cols` columns, using
/// `scratch` for the submatrix.
#[inline]
pub(crate) fn eval_minor_raw(
    field: &Field,
    minor: &MinorIndex,
    entries: &[Elem],
    cols: usize,
    scratch: &mut Vec<Elem>,
) -> Elem {
    let t = minor.degree();
    match t {
        0 => 1,
        1 => entries[minor.rows[0] * cols + minor.cols[0]],
        _ => {
            scratch.clear();
            for &r in &minor.rows {
                for &c in &minor.cols {
                    scratch.push(entries[r * cols + c]);
                }
            }
            determinant(field, scratch, t)
        }
    }
}

/// The value of `minor` at `point`.
pub fn evaluate_minor(minor: &MinorIndex, point: &MatrixPoint, field: &Field) -> Result<Elem> {
    if !minor.fits(point.rows, point.cols) {
        return Err(Error::ShapeMismatch(format!(
            "minor {minor} does not fit a {}x{} matrix",
            point.rows, point.cols
        )));
    }
    let mut scratch = Vec::new();
    Ok(eval_minor_raw(field, minor, &point.entries, point.cols, &mut scratch))
}

/// A choice of rows and columns of the generic matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Submatrix {
    pub fn top_left(rows: usize, cols: usize) -> Self {
        Submatrix {
            rows: (0..rows).collect(),
            cols: (0..cols).collect(),
        }
    }

    fn validate(&self, params: &CodeParams, rows: usize, cols: usize) -> Result<()> {
        if self.rows.len() != rows || self.cols.len() != cols {
            return Err(Error::ShapeMismatch(format!(
                "expected a {rows}x{cols} submatrix, got {}x{}",
                self.rows.len(),
                self.cols.len()
            )));
        }
        let ok = strictly_increasing(&self.rows)
            && strictly_increasing(&self.cols)
            && self.rows.last().is_none_or(|&r| r < params.rows())
            && self.cols.last().is_none_or(|&c| c < params.cols());
        if !ok {
            return Err(Error::ShapeMismatch("submatrix indices out of range".into()));
        }
        Ok(())
    }
}

/// Family A: within an h×(h+r−1) submatrix Y, the minors on the first h−1
/// columns of Y plus its (h+j−1)-th column, for j = 1..r.
pub fn lemma_family_a(params: &CodeParams, r: usize, y: Option<&Submatrix>) -> Result<Vec<MinorIndex>> {
    let h = params.level();
    let max_r = params.cols() - h + 1;
    if r == 0 || r > max_r {
        return Err(Error::domain(format!(
            "family A needs 1 <= r <= l'-h+1 = {max_r}, got r={r}"
        )));
    }
    let default = Submatrix::top_left(h, h + r - 1);
    let y = y.unwrap_or(&default);
    y.validate(params, h, h + r - 1)?;
    Ok((0..r)
        .map(|j| {
            let mut cols: Vec<usize> = y.cols[..h - 1].to_vec();
            cols.push(y.cols[h - 1 + j]);
            MinorIndex {
                rows: y.rows.clone(),
                cols,
            }
        })
        .collect())
}

/// Family B: within an h×(h+1) submatrix Y, the maximal minors omitting
/// the (h−r+j+1)-th column of Y, for j = 1..r.
pub fn lemma_family_b(params: &CodeParams, r: usize, y: Option<&Submatrix>) -> Result<Vec<MinorIndex>> {
    let h = params.level();
    if h >= params.cols() {
        return Err(Error::domain(format!("family B needs h < l', got h = l' = {h}")));
    }
    if r == 0 || r > h + 1 {
        return Err(Error::domain(format!(
            "family B needs 1 <= r <= h+1 = {}, got r={r}",
            h + 1
        )));
    }
    let default = Submatrix::top_left(h, h + 1);
    let y = y.unwrap_or(&default);
    y.validate(params, h, h + 1)?;
    Ok((1..=r)
        .map(|j| {
            let omit = h + j - r; // 0-based position of column h−r+j+1
            let cols = y
                .cols
                .iter()
                .enumerate()
                .filter(|&(c, _)| c != omit)
                .map(|(_, &v)| v)
                .collect();
            MinorIndex {
                rows: y.rows.clone(),
                cols,
            }
        })
        .collect())
}

/// Visits every point of the affine space in chunks, calling `visit` with
/// the entries of each point; sums the per-point contributions.
pub(crate) fn sum_over_points<F>(params: &CodeParams, exec: Execution, budget: u64, visit: F) -> Result<u64>
where
    F: Fn(&[Elem], &mut Vec<Elem>) -> u64 + Sync + Send,
{
    let n = params.points_within(budget)?;
    let q = params.q();
    let delta = params.delta();
    Ok(par::sum_chunks(exec, 0..n, 1 << 12, |range| {
        let mut entries = vec![0; delta];
        let mut scratch = Vec::with_capacity(params.level() * params.level());
        decode_index(range.start, q, &mut entries);
        let mut acc = 0;
        for _ in range {
            acc += visit(&entries, &mut scratch);
            increment_digits(&mut entries, q);
        }
        acc
    }))
}

/// Number of points at which every minor in `minors` is nonzero.
pub fn count_nonvanishing(minors: &[MinorIndex], params: &CodeParams, exec: Execution) -> Result<u64> {
    for m in minors {
        if !m.fits(params.rows(), params.cols()) {
            return Err(Error::ShapeMismatch(format!("minor {m} does not fit")));
        }
    }
    let field = params.field();
    let cols = params.cols();
    sum_over_points(params, exec, DEFAULT_POINT_BUDGET, |entries, scratch| {
        minors
            .iter()
            .all(|m| eval_minor_raw(field, m, entries, cols, scratch) != 0) as u64
    })
}

/// Number of points at which at least one minor in `minors` is nonzero.
pub fn count_union_support(minors: &[MinorIndex], params: &CodeParams, exec: Execution) -> Result<u64> {
    let field = params.field();
    let cols = params.cols();
    sum_over_points(params, exec, DEFAULT_POINT_BUDGET, |entries, scratch| {
        minors
            .iter()
            .any(|m| eval_minor_raw(field, m, entries, cols, scratch) != 0) as u64
    })
}
