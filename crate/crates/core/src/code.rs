//! Linear codes over GF(q): the evaluation-map construction, row reduction,
//! dual codes, subcodes and support weights, and a JSON code record.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::minors::{self, minor_basis, CodeParams, DEFAULT_POINT_BUDGET};
use crate::par::{self, Execution};

/// Dense row-major matrix of field elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows, which must all have length `cols`.
    pub fn from_rows(rows: &[Vec<Elem>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    actual: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// row[dst] -= factor · row[src]
    fn sub_row(&mut self, field: &Field, dst: usize, src: usize, factor: Elem) {
        if factor == 0 {
            return;
        }
        let c = self.cols;
        for j in 0..c {
            let v = field.mul(factor, self.data[src * c + j]);
            if v != 0 {
                self.data[dst * c + j] = field.sub(self.data[dst * c + j], v);
            }
        }
    }

    fn scale_row(&mut self, field: &Field, i: usize, factor: Elem) {
        for x in self.row_mut(i) {
            *x = field.mul(*x, factor);
        }
    }
}

/// Output of [`rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row-echelon form over `field`. Zero rows are kept at the bottom.
pub fn rref(matrix: &Matrix, field: &Field) -> Echelon {
    let mut m = matrix.clone();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m.cols {
        if rank == m.rows {
            break;
        }
        let Some(p) = (rank..m.rows).find(|&r| m.get(r, col) != 0) else {
            continue;
        };
        m.swap_rows(rank, p);
        let inv = field.inv(m.get(rank, col)).expect("pivot is nonzero");
        m.scale_row(field, rank, inv);
        for r in 0..m.rows {
            if r != rank {
                let f = m.get(r, col);
                m.sub_row(field, r, rank, f);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    Echelon {
        matrix: m,
        rank,
        pivots,
    }
}

/// Rank via incremental column insertion; stops once the rank reaches the
/// row count, which for a full-rank generator usually happens early.
pub fn rank_by_columns(matrix: &Matrix, field: &Field) -> usize {
    let k = matrix.rows;
    // basis[i] has its leading nonzero (=1) at position lead[i]
    let mut basis: Vec<Vec<Elem>> = Vec::new();
    let mut lead: Vec<usize> = Vec::new();
    for j in 0..matrix.cols {
        if basis.len() == k {
            break;
        }
        let mut v = matrix.column(j);
        for (b, &l) in basis.iter().zip(&lead) {
            let f = v[l];
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = field.sub(*x, field.mul(f, y));
                }
            }
        }
        if let Some(l) = v.iter().position(|&x| x != 0) {
            let inv = field.inv(v[l]).unwrap();
            for x in v.iter_mut() {
                *x = field.mul(*x, inv);
            }
            basis.push(v);
            lead.push(l);
        }
    }
    basis.len()
}

/// RREF-canonical basis of the right null space {x : M·x = 0}.
pub fn null_space(matrix: &Matrix, field: &Field) -> Matrix {
    let ech = rref(matrix, field);
    let n = matrix.cols;
    let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
    let mut basis = Matrix::zeros(free.len(), n);
    for (b, &f) in free.iter().enumerate() {
        basis.set(b, f, 1);
        for (i, &p) in ech.pivots.iter().enumerate() {
            basis.set(b, p, field.neg(ech.matrix.get(i, f)));
        }
    }
    rref(&basis, field).matrix
}

pub fn hamming_weight(word: &[Elem]) -> usize {
    word.iter().filter(|&&x| x != 0).count()
}

/// A linear code given by a full-rank generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Field,
    generator: Matrix,
    params: Option<CodeParams>,
}

impl LinearCode {
    /// Wraps a generator matrix, checking that it has full row rank.
    pub fn new(field: Field, generator: Matrix) -> Result<Self> {
        if let Some(&bad) = generator.data.iter().find(|&&x| !field.contains(x as u64)) {
            return Err(Error::OutOfRange {
                value: bad as u64,
                order: field.order() as u64,
            });
        }
        let rank = rank_by_columns(&generator, &field);
        if rank != generator.rows {
            return Err(Error::RankDeficient {
                rank,
                expected: generator.rows,
            });
        }
        Ok(LinearCode {
            field,
            generator,
            params: None,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn params(&self) -> Option<&CodeParams> {
        self.params.as_ref()
    }

    pub fn length(&self) -> usize {
        self.generator.cols
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows
    }

    /// `coeffs · G`.
    pub fn encode(&self, coeffs: &[Elem]) -> Result<Vec<Elem>> {
        if coeffs.len() != self.dimension() {
            return Err(Error::LengthMismatch {
                expected: self.dimension(),
                actual: coeffs.len(),
            });
        }
        for &c in coeffs {
            self.field.check(c as u64)?;
        }
        let mut word = vec![0; self.length()];
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (w, &g) in word.iter_mut().zip(self.generator.row(i)) {
                *w = self.field.add(*w, self.field.mul(c, g));
            }
        }
        Ok(word)
    }

    /// Size of the union of the supports of the subcode's basis codewords,
    /// which equals the support of the whole subcode.
    pub fn support_weight(&self, sub: &Subcode) -> Result<usize> {
        if sub.parent_dimension() != self.dimension() {
            return Err(Error::LengthMismatch {
                expected: self.dimension(),
                actual: sub.parent_dimension(),
            });
        }
        let mut covered = vec![false; self.length()];
        for i in 0..sub.rank() {
            let word = self.encode(sub.basis().row(i))?;
            for (c, &w) in covered.iter_mut().zip(&word) {
                *c |= w != 0;
            }
        }
        Ok(covered.iter().filter(|&&c| c).count())
    }

    /// The dual code, with the RREF-canonical null-space basis as generator.
    pub fn dual(&self) -> LinearCode {
        LinearCode {
            field: self.field.clone(),
            generator: null_space(&self.generator, &self.field),
            params: None,
        }
    }

    /// Whether two codes span the same row space.
    pub fn same_row_space(&self, other: &LinearCode) -> bool {
        if self.length() != other.length() || self.dimension() != other.dimension() || self.field != other.field {
            return false;
        }
        let a = rref(&self.generator, &self.field);
        let b = rref(&other.generator, &other.field);
        a.matrix == b.matrix
    }

    pub fn to_record(&self) -> CodeRecord {
        CodeRecord {
            q: self.field.order(),
            modulus: self.field.modulus_coefficients(),
            l: self.params.as_ref().map(|p| p.rows()),
            lp: self.params.as_ref().map(|p| p.cols()),
            h: self.params.as_ref().map(|p| p.level()),
            n: self.length(),
            k: self.dimension(),
            rows: self.generator.row_vecs(),
        }
    }

    pub fn from_record(rec: &CodeRecord) -> Result<Self> {
        let field = Field::new(rec.q as u64)?;
        if field.modulus_coefficients() != rec.modulus {
            return Err(Error::Format(format!(
                "modulus {:?} differs from the canonical modulus {:?} of GF({})",
                rec.modulus,
                field.modulus_coefficients(),
                rec.q
            )));
        }
        if rec.rows.len() != rec.k {
            return Err(Error::Format(format!(
                "k = {} but {} rows given",
                rec.k,
                rec.rows.len()
            )));
        }
        let generator = Matrix::from_rows(&rec.rows, rec.n)?;
        let mut code = LinearCode::new(field.clone(), generator)?;
        match (rec.l, rec.lp, rec.h) {
            (Some(l), Some(lp), Some(h)) => {
                let params = CodeParams::with_field(field, l, lp, h)?;
                if params.dimension() != rec.k || params.length() != rec.n as u128 {
                    return Err(Error::Format("code shape disagrees with (l, l', h)".into()));
                }
                code.params = Some(params);
            }
            (None, None, None) => {}
            _ => return Err(Error::Format("l, lp and h must be given together".into())),
        }
        Ok(code)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: CodeRecord = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_record(&rec)
    }
}

/// Self-describing serialized form of a code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub q: u32,
    /// Monic modulus coefficients, constant term first; absent for prime fields.
    pub modulus: Option<Vec<u32>>,
    pub l: Option<usize>,
    pub lp: Option<usize>,
    pub h: Option<usize>,
    pub n: usize,
    pub k: usize,
    pub rows: Vec<Vec<Elem>>,
}

/// A subspace of GF(q)^k held as its unique RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subcode {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subcode {
    /// The span of the given coefficient rows.
    pub fn span(field: &Field, rows: &Matrix) -> Self {
        let ech = rref(rows, field);
        let mut basis = Matrix::zeros(ech.rank, rows.cols);
        for i in 0..ech.rank {
            basis.row_mut(i).copy_from_slice(ech.matrix.row(i));
        }
        Subcode {
            basis,
            pivots: ech.pivots,
        }
    }

    /// The span of unit vectors e_i for the given coordinates.
    pub fn coordinate(parent_dim: usize, coords: &[usize]) -> Self {
        let mut sorted = coords.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut basis = Matrix::zeros(sorted.len(), parent_dim);
        for (i, &c) in sorted.iter().enumerate() {
            basis.set(i, c, 1);
        }
        Subcode { basis, pivots: sorted }
    }

    pub fn zero(parent_dim: usize) -> Self {
        Subcode {
            basis: Matrix::zeros(0, parent_dim),
            pivots: Vec::new(),
        }
    }

    /// Wraps a matrix already in RREF with full row rank.
    pub(crate) fn from_rref(basis: Matrix, pivots: Vec<usize>) -> Self {
        Subcode { basis, pivots }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn parent_dimension(&self) -> usize {
        self.basis.cols
    }
}

/// The affine Grassmann code: row i of the generator is the i-th basis
/// minor evaluated at every point, in point-index order.
pub fn build_code(params: &CodeParams, exec: Execution) -> Result<LinearCode> {
    let n = params.points_within(DEFAULT_POINT_BUDGET)? as usize;
    let basis = minor_basis(params);
    let k = basis.len();
    let field = params.field();
    let (q, cols, delta) = (params.q(), params.cols(), params.delta());
    let mut data = vec![0 as Elem; k * n];
    {
        let mut rows: Vec<&mut [Elem]> = data.chunks_mut(n.max(1)).collect();
        par::for_each_mut(exec, &mut rows, |i, row| {
            let minor = &basis[i];
            let mut entries = vec![0; delta];
            let mut scratch = Vec::new();
            for slot in row.iter_mut() {
                *slot = minors::eval_minor_raw(field, minor, &entries, cols, &mut scratch);
                minors::increment_digits(&mut entries, q);
            }
        });
    }
    let generator = Matrix { rows: k, cols: n, data };
    let mut code = LinearCode::new(field.clone(), generator)?;
    code.params = Some(params.clone());
    Ok(code)
}
