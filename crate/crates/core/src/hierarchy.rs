//! Exact generalized Hamming weights by exhaustive search, and the explicit
//! subcodes that realize the initial and terminal weights of affine
//! Grassmann codes.
//!
//! Two exact search routes are available for d_r:
//!
//! * **subspaces**: walk every r-dimensional subspace of GF(q)^k as its
//!   canonical RREF basis, ordered by pivot pattern then free entries, and
//!   take the smallest union of supports. Partial unions only grow as rows
//!   are added, so a branch is abandoned once its partial union reaches the
//!   best weight seen.
//! * **columns**: a subcode D of dimension r misses exactly the coordinates
//!   whose generator columns lie in the (k−r)-dimensional annihilator of D,
//!   so d_r = n − max |{columns in U}| over (k−r)-dimensional U. The
//!   maximum is attained by a U spanned by columns, so it suffices to walk
//!   independent (k−r)-subsets of the distinct projective columns.
//!
//! [`exact_dr`] estimates the work of each route (subspaces for one, span
//! points over all column subsets for the other) and takes the cheaper one
//! that fits the budget.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::code::{null_space, LinearCode, Matrix, Subcode};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::minors::{self, checked_binomial, combinations, minor_basis, CodeParams, MinorIndex, DEFAULT_POINT_BUDGET};
use crate::par::{self, Execution};

/// Default cap on the number of candidates examined by one search.
pub const DEFAULT_SUBSPACE_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u128,
    pub execution: Execution,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_SUBSPACE_BUDGET,
            execution: Execution::Parallel,
        }
    }
}

impl SearchOptions {
    pub fn with_budget(budget: u128) -> Self {
        SearchOptions {
            budget,
            ..Default::default()
        }
    }

    pub fn sequential(self) -> Self {
        SearchOptions {
            execution: Execution::Sequential,
            ..self
        }
    }
}

/// Number of r-dimensional subspaces of GF(q)^k, or `None` on overflow.
pub fn gaussian_binomial(k: usize, r: usize, q: u64) -> Option<u128> {
    if r > k {
        return Some(0);
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..r {
        num = num.checked_mul(q.checked_pow((k - i) as u32)?.checked_sub(1)?)?;
        den = den.checked_mul(q.checked_pow((r - i) as u32)?.checked_sub(1)?)?;
        // keep the running values small; the partial quotients are integral
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    debug_assert_eq!(den, 1);
    Some(num / den)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn budget_error(what: String, required: Option<u128>, budget: u128) -> Error {
    Error::BudgetExceeded {
        what,
        required: required.unwrap_or(u128::MAX),
        budget,
    }
}

/// Free (non-pivot) columns to the right of each pivot, per row.
fn free_columns(k: usize, pivots: &[usize]) -> Vec<Vec<usize>> {
    pivots
        .iter()
        .map(|&p| (p + 1..k).filter(|c| !pivots.contains(c)).collect())
        .collect()
}

/// Iterator over the canonical RREF bases of all r-dimensional subspaces
/// of GF(q)^k. Pivot patterns come in lexicographic order; within a
/// pattern the free entries count upward, row 0's first free entry most
/// significant.
pub struct SubspaceIter {
    k: usize,
    q: u64,
    patterns: Vec<Vec<usize>>,
    pattern: usize,
    free: Vec<Vec<usize>>,
    digits: Vec<Elem>,
    done: bool,
    total: u128,
}

impl SubspaceIter {
    pub fn total(&self) -> u128 {
        self.total
    }

    fn load_pattern(&mut self) {
        self.free = free_columns(self.k, &self.patterns[self.pattern]);
        self.digits = vec![0; self.free.iter().map(Vec::len).sum()];
    }

    fn current(&self) -> Subcode {
        let pivots = &self.patterns[self.pattern];
        let mut m = Matrix::zeros(pivots.len(), self.k);
        let mut d = self.digits.iter();
        for (i, (&p, cols)) in pivots.iter().zip(&self.free).enumerate() {
            m.set(i, p, 1);
            for &c in cols {
                m.set(i, c, *d.next().unwrap());
            }
        }
        Subcode::from_rref(m, pivots.clone())
    }
}

impl Iterator for SubspaceIter {
    type Item = Subcode;

    fn next(&mut self) -> Option<Subcode> {
        if self.done {
            return None;
        }
        let out = self.current();
        // advance
        let q = self.q;
        let mut carry = true;
        for d in self.digits.iter_mut().rev() {
            if (*d as u64) + 1 < q {
                *d += 1;
                carry = false;
                break;
            }
            *d = 0;
        }
        if carry {
            self.pattern += 1;
            if self.pattern == self.patterns.len() {
                self.done = true;
            } else {
                self.load_pattern();
            }
        }
        Some(out)
    }
}

/// Every r-dimensional subspace of GF(q)^k exactly once, as its RREF basis.
pub fn enumerate_subspaces(k: usize, r: usize, field: &Field, budget: u128) -> Result<SubspaceIter> {
    let q = field.order() as u64;
    let total = gaussian_binomial(k, r, q);
    match total {
        Some(t) if t <= budget => {}
        _ => {
            return Err(budget_error(
                format!("enumerating {r}-dimensional subspaces of GF({q})^{k}"),
                total,
                budget,
            ))
        }
    }
    let patterns = combinations(k, r);
    let mut it = SubspaceIter {
        k,
        q,
        patterns,
        pattern: 0,
        free: Vec::new(),
        digits: Vec::new(),
        done: false,
        total: total.unwrap(),
    };
    if it.patterns.is_empty() {
        it.done = true;
    } else {
        it.load_pattern();
    }
    Ok(it)
}

// ---------------------------------------------------------------------------
// Codeword arithmetic backends for the subspace route.

trait Rows: Sync {
    type Word: Clone + Send;
    fn zero(&self) -> Self::Word;
    /// acc += coeff · G[row]
    fn add_row(&self, acc: &mut Self::Word, row: usize, coeff: Elem);
    /// out |= supp(w)
    fn or_support(&self, w: &Self::Word, out: &mut [u64]);
}

/// Bit-packed rows for GF(2).
struct BinaryRows {
    rows: Vec<Vec<u64>>,
    words: usize,
}

impl BinaryRows {
    fn new(code: &LinearCode) -> Self {
        let words = code.length().div_ceil(64);
        let rows = (0..code.dimension())
            .map(|i| {
                let mut w = vec![0u64; words];
                for (j, &x) in code.generator().row(i).iter().enumerate() {
                    if x != 0 {
                        w[j / 64] |= 1 << (j % 64);
                    }
                }
                w
            })
            .collect();
        BinaryRows { rows, words }
    }
}

impl Rows for BinaryRows {
    type Word = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.words]
    }

    #[inline]
    fn add_row(&self, acc: &mut Vec<u64>, row: usize, coeff: Elem) {
        if coeff & 1 == 1 {
            for (a, &b) in acc.iter_mut().zip(&self.rows[row]) {
                *a ^= b;
            }
        }
    }

    #[inline]
    fn or_support(&self, w: &Vec<u64>, out: &mut [u64]) {
        for (o, &x) in out.iter_mut().zip(w) {
            *o |= x;
        }
    }
}

/// Dense rows over any GF(q).
struct DenseRows<'a> {
    field: &'a Field,
    generator: &'a Matrix,
}

impl Rows for DenseRows<'_> {
    type Word = Vec<Elem>;

    fn zero(&self) -> Vec<Elem> {
        vec![0; self.generator.cols()]
    }

    #[inline]
    fn add_row(&self, acc: &mut Vec<Elem>, row: usize, coeff: Elem) {
        if coeff == 0 {
            return;
        }
        let f = self.field;
        for (a, &g) in acc.iter_mut().zip(self.generator.row(row)) {
            if g != 0 {
                *a = f.add(*a, f.mul(coeff, g));
            }
        }
    }

    #[inline]
    fn or_support(&self, w: &Vec<Elem>, out: &mut [u64]) {
        for (i, &x) in w.iter().enumerate() {
            if x != 0 {
                out[i / 64] |= 1 << (i % 64);
            }
        }
    }
}

fn popcount(bits: &[u64]) -> u64 {
    bits.iter().map(|w| w.count_ones() as u64).sum()
}

/// One unit of the subspace route: a pivot pattern plus a fixed prefix of
/// row 0's free entries.
struct Unit {
    pattern: usize,
    prefix: Vec<Elem>,
}

struct UnitResult {
    weight: u64,
    /// Free-entry digits of the best subspace, row by row.
    digits: Option<Vec<Vec<Elem>>>,
}

struct PatternSearch<'a, R: Rows> {
    rows: &'a R,
    field: &'a Field,
    q: u64,
    pivots: &'a [usize],
    free: Vec<Vec<usize>>,
    words: usize,
    global: &'a AtomicU64,
}

impl<R: Rows> PatternSearch<'_, R> {
    fn run(&self, prefix: &[Elem]) -> UnitResult {
        let r = self.pivots.len();
        let mut state = DepthState {
            unions: vec![vec![0u64; self.words]; r + 1],
            digits: self.free.iter().map(|f| vec![0; f.len()]).collect(),
            best: u64::MAX,
            best_digits: None,
        };
        state.digits[0][..prefix.len()].copy_from_slice(prefix);
        self.descend(0, prefix.len(), &mut state);
        UnitResult {
            weight: state.best,
            digits: state.best_digits,
        }
    }

    fn descend(&self, depth: usize, fixed: usize, st: &mut DepthState) {
        let r = self.pivots.len();
        let free = &self.free[depth];
        let f = self.field;
        // codeword for the current digits of this row
        let mut word = self.rows.zero();
        self.rows.add_row(&mut word, self.pivots[depth], 1);
        for (pos, &c) in free.iter().enumerate() {
            self.rows.add_row(&mut word, c, st.digits[depth][pos]);
        }
        loop {
            let (lower, upper) = st.unions.split_at_mut(depth + 1);
            let u = &mut upper[0];
            u.copy_from_slice(&lower[depth]);
            self.rows.or_support(&word, u);
            let w = popcount(u);
            let global = self.global.load(Ordering::Relaxed);
            if w < st.best && w <= global {
                if depth + 1 == r {
                    st.best = w;
                    st.best_digits = Some(st.digits.clone());
                    self.global.fetch_min(w, Ordering::Relaxed);
                } else {
                    for d in st.digits[depth + 1].iter_mut() {
                        *d = 0;
                    }
                    self.descend(depth + 1, 0, st);
                }
            }
            // next free-entry value for this row
            let digits = &mut st.digits[depth];
            let mut pos = free.len();
            loop {
                if pos == fixed {
                    return;
                }
                pos -= 1;
                let old = digits[pos];
                if (old as u64) + 1 < self.q {
                    digits[pos] = old + 1;
                    self.rows.add_row(&mut word, free[pos], f.sub(old + 1, old));
                    break;
                }
                digits[pos] = 0;
                self.rows.add_row(&mut word, free[pos], f.neg(old));
            }
        }
    }
}

struct DepthState {
    unions: Vec<Vec<u64>>,
    digits: Vec<Vec<Elem>>,
    best: u64,
    best_digits: Option<Vec<Vec<Elem>>>,
}

fn subspace_route<R: Rows>(code: &LinearCode, rows: &R, r: usize, exec: Execution) -> (u64, Subcode) {
    let k = code.dimension();
    let field = code.field();
    let q = field.order() as u64;
    let words = code.length().div_ceil(64);
    let patterns = combinations(k, r);
    let global = AtomicU64::new(u64::MAX);

    // split each pattern on up to `split` leading free entries of row 0
    let mut units = Vec::new();
    for (pi, piv) in patterns.iter().enumerate() {
        let f0 = free_columns(k, piv)[0].len();
        let mut split = 0;
        while split < f0 && q.pow(split as u32 + 1) <= 64 {
            split += 1;
        }
        let count = q.pow(split as u32);
        for idx in 0..count {
            let mut prefix = vec![0; split];
            minors::decode_index(idx, q, &mut prefix);
            units.push(Unit { pattern: pi, prefix });
        }
    }

    let results = par::map_units(exec, units.len(), |u| {
        let unit = &units[u];
        let piv = &patterns[unit.pattern];
        let search = PatternSearch {
            rows,
            field,
            q,
            pivots: piv,
            free: free_columns(k, piv),
            words,
            global: &global,
        };
        search.run(&unit.prefix)
    });

    let (best_unit, best) = results
        .iter()
        .enumerate()
        .min_by_key(|(i, res)| (res.weight, *i))
        .expect("at least one subspace");
    let piv = &patterns[units[best_unit].pattern];
    let digits = best.digits.as_ref().expect("every unit holds a subspace");
    let free = free_columns(k, piv);
    let mut m = Matrix::zeros(r, k);
    for (i, (&p, cols)) in piv.iter().zip(&free).enumerate() {
        m.set(i, p, 1);
        for (&c, &d) in cols.iter().zip(&digits[i]) {
            m.set(i, c, d);
        }
    }
    (best.weight, Subcode::from_rref(m, piv.clone()))
}

// ---------------------------------------------------------------------------
// Column route.

/// Generator columns packed into integers, `bits` bits per coordinate.
/// Over characteristic 2 the packed sum of two vectors is their XOR.
struct ProjectiveColumns {
    field: Field,
    k: usize,
    bits: u32,
    /// Distinct normalized nonzero columns, ascending by packed value.
    points: Vec<u128>,
    /// Columns equal to each packed vector, including zero.
    dense: Option<Vec<u32>>,
    sparse: HashMap<u128, u32>,
}

const DENSE_TABLE_BITS: u32 = 22;

impl ProjectiveColumns {
    fn new(code: &LinearCode) -> Option<Self> {
        let field = code.field().clone();
        let q = field.order() as u64;
        let k = code.dimension();
        let bits = 64 - (q - 1).leading_zeros();
        if bits as usize * k > 128 {
            return None;
        }
        let mut cols = ProjectiveColumns {
            field,
            k,
            bits,
            points: Vec::new(),
            dense: None,
            sparse: HashMap::new(),
        };
        let total_bits = bits * k as u32;
        if total_bits <= DENSE_TABLE_BITS {
            cols.dense = Some(vec![0; 1 << total_bits]);
        }
        let mut points = std::collections::BTreeSet::new();
        for j in 0..code.length() {
            let mut col = code.generator().column(j);
            let key = cols.pack(&col);
            match cols.dense.as_mut() {
                Some(t) => t[key as usize] += 1,
                None => *cols.sparse.entry(key).or_insert(0) += 1,
            }
            if cols.field.normalize(&mut col).is_some() {
                points.insert(cols.pack(&col));
            }
        }
        cols.points = points.into_iter().collect();
        Some(cols)
    }

    fn pack(&self, v: &[Elem]) -> u128 {
        v.iter().fold(0u128, |acc, &x| (acc << self.bits) | x as u128)
    }

    fn unpack(&self, mut x: u128) -> Vec<Elem> {
        let mask = (1u128 << self.bits) - 1;
        let mut v = vec![0; self.k];
        for c in v.iter_mut().rev() {
            *c = (x & mask) as Elem;
            x >>= self.bits;
        }
        v
    }

    #[inline]
    fn add(&self, a: u128, b: u128) -> u128 {
        if self.field.characteristic() == 2 {
            return a ^ b;
        }
        let mask = (1u128 << self.bits) - 1;
        let mut out = 0u128;
        for i in 0..self.k {
            let s = i as u32 * self.bits;
            let x = self.field.add(((a >> s) & mask) as Elem, ((b >> s) & mask) as Elem);
            out |= (x as u128) << s;
        }
        out
    }

    fn scale(&self, c: Elem, a: u128) -> u128 {
        let v: Vec<Elem> = self.unpack(a).iter().map(|&x| self.field.mul(c, x)).collect();
        self.pack(&v)
    }

    #[inline]
    fn count(&self, x: u128) -> u64 {
        match &self.dense {
            Some(t) => t[x as usize] as u64,
            None => self.sparse.get(&x).copied().unwrap_or(0) as u64,
        }
    }

    fn zeros(&self) -> u64 {
        self.count(0)
    }
}

/// Row echelon form (not reduced), so popping a row undoes a push.
struct Echelon {
    rows: Vec<Vec<Elem>>,
    lead: Vec<usize>,
    scratch: Vec<Elem>,
}

impl Echelon {
    fn new(k: usize) -> Self {
        Echelon {
            rows: Vec::new(),
            lead: Vec::new(),
            scratch: vec![0; k],
        }
    }

    /// Reduces `v` into the scratch buffer; returns its leading position.
    fn reduce(&mut self, field: &Field, v: &[Elem]) -> Option<usize> {
        self.scratch.copy_from_slice(v);
        for (b, &l) in self.rows.iter().zip(&self.lead) {
            let c = self.scratch[l];
            if c != 0 {
                for (x, &y) in self.scratch.iter_mut().zip(b) {
                    *x = field.sub(*x, field.mul(c, y));
                }
            }
        }
        self.scratch.iter().position(|&x| x != 0)
    }

    fn try_push(&mut self, field: &Field, v: &[Elem]) -> bool {
        let Some(l) = self.reduce(field, v) else {
            return false;
        };
        let inv = field.inv(self.scratch[l]).unwrap();
        let row = self.scratch.iter().map(|&x| field.mul(x, inv)).collect();
        self.rows.push(row);
        self.lead.push(l);
        true
    }

    fn pop(&mut self) {
        self.rows.pop();
        self.lead.pop();
    }
}

struct ColumnSearch<'a> {
    cols: &'a ProjectiveColumns,
    /// Unpacked points, for independence tests.
    vectors: Vec<Vec<Elem>>,
    /// c·point for c = 1..q−1.
    multiples: Vec<Vec<u128>>,
    t: usize,
}

struct ColumnState {
    chosen: Vec<usize>,
    ech: Echelon,
    /// spans[i] lists every vector in the span of the first i chosen points.
    spans: Vec<Vec<u128>>,
    best: u64,
    best_set: Option<Vec<usize>>,
}

impl ColumnSearch<'_> {
    fn new(cols: &ProjectiveColumns, t: usize) -> ColumnSearch<'_> {
        let q = cols.field.order() as Elem;
        ColumnSearch {
            cols,
            vectors: cols.points.iter().map(|&p| cols.unpack(p)).collect(),
            multiples: cols
                .points
                .iter()
                .map(|&p| (1..q).map(|c| cols.scale(c, p)).collect())
                .collect(),
            t,
        }
    }

    fn extend_span(&self, span: &[u128], point: usize, out: &mut Vec<u128>) {
        out.clear();
        out.extend_from_slice(span);
        for &m in &self.multiples[point] {
            out.extend(span.iter().map(|&x| self.cols.add(x, m)));
        }
    }

    /// Best (count, chosen point indices) over independent t-subsets whose
    /// smallest element is `first`, in lexicographic order.
    fn run(&self, first: usize) -> (u64, Option<Vec<usize>>) {
        let mut st = ColumnState {
            chosen: Vec::with_capacity(self.t),
            ech: Echelon::new(self.cols.k),
            spans: vec![Vec::new(); self.t],
            best: 0,
            best_set: None,
        };
        st.spans[0].push(0);
        self.descend(first, &mut st);
        (st.best, st.best_set)
    }

    /// Pushes `point` and explores every completion.
    fn descend(&self, point: usize, st: &mut ColumnState) {
        let field = &self.cols.field;
        if !st.ech.try_push(field, &self.vectors[point]) {
            return;
        }
        st.chosen.push(point);
        let depth = st.chosen.len();
        let n = self.cols.points.len();
        if depth == self.t {
            // leaf: count columns in span(spans[t−1] ∪ point)
            let span = &st.spans[depth - 1];
            let mut total: u64 = span.iter().map(|&x| self.cols.count(x)).sum();
            for &m in &self.multiples[point] {
                total += span.iter().map(|&x| self.cols.count(self.cols.add(x, m))).sum::<u64>();
            }
            if st.best_set.is_none() || total > st.best {
                st.best = total;
                st.best_set = Some(st.chosen.clone());
            }
        } else {
            let mut next = std::mem::take(&mut st.spans[depth]);
            self.extend_span(&st.spans[depth - 1], point, &mut next);
            st.spans[depth] = next;
            let need = self.t - depth;
            for cand in point + 1..n {
                if n - cand < need {
                    break;
                }
                self.descend(cand, st);
            }
        }
        st.chosen.pop();
        st.ech.pop();
    }
}

fn column_route(code: &LinearCode, cols: &ProjectiveColumns, r: usize, exec: Execution) -> (u64, Subcode) {
    let field = code.field();
    let k = code.dimension();
    let n = code.length() as u64;
    let t = k - r;
    if t == 0 {
        let all = Subcode::coordinate(k, &(0..k).collect::<Vec<_>>());
        return (n - cols.zeros(), all);
    }
    let search = ColumnSearch::new(cols, t);
    let results = par::map_units(exec, cols.points.len(), |first| search.run(first));
    let mut best: Option<(u64, &Vec<usize>)> = None;
    for (c, chosen) in &results {
        if let Some(ch) = chosen {
            if best.is_none_or(|(b, _)| *c > b) {
                best = Some((*c, ch));
            }
        }
    }
    let (count, chosen) = best.expect("columns of a full-rank generator span GF(q)^k");
    let rows: Vec<Vec<Elem>> = chosen.iter().map(|&i| search.vectors[i].clone()).collect();
    let u = Matrix::from_rows(&rows, k).expect("uniform row length");
    let annihilator = null_space(&u, field);
    let witness = Subcode::span(field, &annihilator);
    (n - count, witness)
}

/// Which exhaustive route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Trivial,
    Subspaces,
    Columns,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactWeight {
    pub r: usize,
    pub value: u64,
    pub witness: Subcode,
    pub route: Route,
    pub candidates: u128,
}

/// Work estimates for both routes: (subspaces, span points over all
/// column subsets).
pub fn search_costs(code: &LinearCode, r: usize) -> (Option<u128>, Option<u128>) {
    let k = code.dimension();
    let q = code.field().order() as u64;
    let a = gaussian_binomial(k, r, q);
    let b = ProjectiveColumns::new(code).and_then(|c| column_cost(&c, k - r));
    (a, b)
}

/// Span points examined by the column route: one per projective point of
/// each candidate span. `None` when the spans would not fit in memory.
fn column_cost(cols: &ProjectiveColumns, t: usize) -> Option<u128> {
    let q = cols.field.order() as u128;
    let span = q.checked_pow(t.saturating_sub(1) as u32)?;
    if span > 1 << DENSE_TABLE_BITS {
        return None;
    }
    let projective = (q.checked_pow(t as u32)? - 1) / (q - 1);
    checked_binomial(cols.points.len(), t)?.checked_mul(projective.max(1))
}

/// d_r together with a witness subcode attaining it.
pub fn exact_dr_with_witness(code: &LinearCode, r: usize, opts: SearchOptions) -> Result<ExactWeight> {
    let k = code.dimension();
    if r > k {
        return Err(Error::domain(format!("r = {r} exceeds the dimension {k}")));
    }
    if r == 0 {
        return Ok(ExactWeight {
            r,
            value: 0,
            witness: Subcode::zero(k),
            route: Route::Trivial,
            candidates: 1,
        });
    }
    let q = code.field().order() as u64;
    let cost_a = gaussian_binomial(k, r, q);
    let cols = ProjectiveColumns::new(code);
    let cost_b = cols.as_ref().and_then(|c| column_cost(c, k - r));
    let fits = |c: Option<u128>| c.filter(|&c| c <= opts.budget);
    let use_columns = match (fits(cost_a), fits(cost_b)) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some(a), Some(b)) => b < a,
    };
    let cost = if use_columns { cost_b } else { cost_a };
    if fits(cost).is_none() {
        return Err(budget_error(
            format!(
                "d_{r} of a [{}, {k}] code over GF({q}): {r}-dimensional subspaces",
                code.length()
            ),
            cost_a,
            opts.budget,
        ));
    }
    let (value, witness) = if use_columns {
        column_route(code, cols.as_ref().unwrap(), r, opts.execution)
    } else if q == 2 {
        let rows = BinaryRows::new(code);
        subspace_route(code, &rows, r, opts.execution)
    } else {
        let rows = DenseRows {
            field: code.field(),
            generator: code.generator(),
        };
        subspace_route(code, &rows, r, opts.execution)
    };
    Ok(ExactWeight {
        r,
        value,
        witness,
        route: if use_columns { Route::Columns } else { Route::Subspaces },
        candidates: cost.unwrap(),
    })
}

/// The r-th generalized Hamming weight, by exhaustive search.
pub fn exact_dr(code: &LinearCode, r: usize, opts: SearchOptions) -> Result<u64> {
    exact_dr_with_witness(code, r, opts).map(|w| w.value)
}

/// Reference d_r by streaming every subspace from [`enumerate_subspaces`]
/// without pruning or route selection. Only for tests and cross-checks.
pub fn exact_dr_reference(code: &LinearCode, r: usize, budget: u128) -> Result<u64> {
    if r == 0 {
        return Ok(0);
    }
    let mut best = u64::MAX;
    for sub in enumerate_subspaces(code.dimension(), r, code.field(), budget)? {
        best = best.min(code.support_weight(&sub)? as u64);
    }
    Ok(best)
}

/// Provenance of one hierarchy entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryStatus {
    Exact,
    Formula,
    Unknown,
}

/// d_0, …, d_k with per-entry provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightHierarchy {
    n: u128,
    entries: Vec<(Option<u128>, EntryStatus)>,
}

impl WeightHierarchy {
    /// A hierarchy with only d_0 = 0 known.
    pub fn unknown(n: u128, k: usize) -> Self {
        let mut entries = vec![(None, EntryStatus::Unknown); k + 1];
        entries[0] = (Some(0), EntryStatus::Exact);
        WeightHierarchy { n, entries }
    }

    /// A fully known hierarchy from d_1, …, d_k.
    pub fn from_values(n: u128, d: &[u128], status: EntryStatus) -> Self {
        let mut h = Self::unknown(n, d.len());
        for (r, &v) in d.iter().enumerate() {
            h.set(r + 1, v, status);
        }
        h
    }

    pub fn set(&mut self, r: usize, value: u128, status: EntryStatus) {
        self.entries[r] = (Some(value), status);
    }

    pub fn length(&self) -> u128 {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn get(&self, r: usize) -> Option<u128> {
        self.entries.get(r).and_then(|e| e.0)
    }

    pub fn status(&self, r: usize) -> EntryStatus {
        self.entries[r].1
    }

    /// d_1, …, d_k when all are known.
    pub fn values(&self) -> Result<Vec<u128>> {
        (1..self.entries.len())
            .map(|r| self.get(r).ok_or(Error::IncompleteHierarchy(r)))
            .collect()
    }

    /// e_j = d_j − j.
    pub fn e(&self, j: usize) -> Option<i128> {
        self.get(j).map(|d| d as i128 - j as i128)
    }

    /// f_j = n − j − d_{k−j}.
    pub fn f(&self, j: usize) -> Option<i128> {
        let k = self.dimension();
        if j > k {
            return None;
        }
        self.get(k - j).map(|d| self.n as i128 - j as i128 - d as i128)
    }

    /// 0 = d_0 < d_1 < … over the known entries.
    pub fn is_strictly_increasing(&self) -> bool {
        let known: Vec<u128> = self.entries.iter().filter_map(|e| e.0).collect();
        known.windows(2).all(|w| w[0] < w[1])
    }
}

/// The full hierarchy by exhaustive search; fails at the first r whose
/// search exceeds the budget.
pub fn exact_hierarchy(code: &LinearCode, opts: SearchOptions) -> Result<WeightHierarchy> {
    let k = code.dimension();
    let mut h = WeightHierarchy::unknown(code.length() as u128, k);
    for r in 1..=k {
        h.set(r, exact_dr(code, r, opts)? as u128, EntryStatus::Exact);
    }
    Ok(h)
}

fn basis_positions(basis: &[MinorIndex], family: &[MinorIndex]) -> Vec<usize> {
    family
        .iter()
        .map(|m| {
            basis
                .iter()
                .position(|b| b == m)
                .expect("family minors lie in the basis")
        })
        .collect()
}

/// Largest r covered by the initial-weight construction, if any.
pub fn initial_domain_max(params: &CodeParams) -> Option<usize> {
    let (h, lp) = (params.level(), params.cols());
    if lp <= 2 * h && h >= lp {
        // only r = 1 (the minimum distance) is available
        return None;
    }
    Some((lp - h).max(h) + 1)
}

/// The span of r close minors, which attains the r-th weight, with its
/// support weight counted over all points.
pub fn witness_initial(params: &CodeParams, r: usize, exec: Execution) -> Result<(Subcode, u64)> {
    let Some(max_r) = initial_domain_max(params) else {
        return Err(Error::domain(format!(
            "the close-minor construction needs h < l' when l' <= 2h (h = l' = {})",
            params.cols()
        )));
    };
    if r == 0 || r > max_r {
        return Err(Error::domain(format!(
            "need 1 <= r <= max(l'-h, h)+1 = {max_r}, got r={r}"
        )));
    }
    let h = params.level();
    let family = if r <= params.cols() - h + 1 {
        minors::lemma_family_a(params, r, None)?
    } else {
        minors::lemma_family_b(params, r, None)?
    };
    let basis = minor_basis(params);
    let sub = Subcode::coordinate(params.dimension(), &basis_positions(&basis, &family));
    let weight = minors::count_union_support(&family, params, exec)?;
    Ok((sub, weight))
}

/// The span of N_1, …, N_{k_h−r} (every basis minor except 1 and
/// X_{11}, …, X_{1,r−1}), with its support weight counted over all points.
pub fn witness_terminal(params: &CodeParams, r: usize, exec: Execution) -> Result<(Subcode, u64)> {
    if r == 0 || r > params.cols() + 1 {
        return Err(Error::domain(format!(
            "need 1 <= r <= l'+1 = {}, got r={r}",
            params.cols() + 1
        )));
    }
    let k = params.dimension();
    let sub = Subcode::coordinate(k, &(0..k - r).collect::<Vec<_>>());
    let zeros = zero_set_count(&sub, params, exec)?;
    Ok((sub, params.points_within(DEFAULT_POINT_BUDGET)? - zeros))
}

/// Number of points at which every polynomial of W vanishes. W is given
/// in coordinates over the minor basis.
pub fn zero_set_count(w: &Subcode, params: &CodeParams, exec: Execution) -> Result<u64> {
    let k = params.dimension();
    if w.parent_dimension() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            actual: w.parent_dimension(),
        });
    }
    let basis = minor_basis(params);
    let used: Vec<usize> = (0..k)
        .filter(|&c| (0..w.rank()).any(|i| w.basis().get(i, c) != 0))
        .collect();
    let field = params.field();
    let cols = params.cols();
    minors::sum_over_points(params, exec, DEFAULT_POINT_BUDGET, |entries, scratch| {
        let values: Vec<Elem> = used
            .iter()
            .map(|&c| minors::eval_minor_raw(field, &basis[c], entries, cols, scratch))
            .collect();
        let vanishes = (0..w.rank()).all(|i| {
            let row = w.basis().row(i);
            used.iter()
                .zip(&values)
                .fold(0, |acc, (&c, &v)| field.add(acc, field.mul(row[c], v)))
                == 0
        });
        vanishes as u64
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_code;

    fn code(q: u64, l: usize, lp: usize, h: usize) -> LinearCode {
        build_code(&CodeParams::new(q, l, lp, h).unwrap(), Execution::Sequential).unwrap()
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 2, 2), Some(35));
        assert_eq!(gaussian_binomial(10, 3, 2), Some(6_347_715));
        assert_eq!(gaussian_binomial(6, 3, 2), Some(1395));
        assert_eq!(gaussian_binomial(5, 0, 3), Some(1));
        assert_eq!(gaussian_binomial(5, 5, 3), Some(1));
        assert_eq!(gaussian_binomial(2, 3, 3), Some(0));
        assert_eq!(gaussian_binomial(200, 100, 17), None);
    }

    #[test]
    fn enumeration_examples() {
        let f2 = Field::new(2).unwrap();
        let lines: Vec<Vec<Vec<Elem>>> = enumerate_subspaces(2, 1, &f2, 100)
            .unwrap()
            .map(|s| s.basis().row_vecs())
            .collect();
        assert_eq!(lines, vec![vec![vec![1, 0]], vec![vec![1, 1]], vec![vec![0, 1]]]);
        assert_eq!(enumerate_subspaces(4, 2, &f2, 100).unwrap().count(), 35);
        match enumerate_subspaces(10, 3, &f2, 1_000_000) {
            Err(Error::BudgetExceeded { required, .. }) => assert_eq!(required, 6_347_715),
            other => panic!("expected budget error, got {:?}", other.map(|i| i.total())),
        }
    }

    #[test]
    fn enumeration_counts_and_uniqueness() {
        for q in [2u64, 3] {
            let f = Field::new(q).unwrap();
            for k in 0..=(if q == 2 { 8 } else { 5 }) {
                for r in 0..=k {
                    let want = gaussian_binomial(k, r, q).unwrap();
                    let mut seen = std::collections::HashSet::new();
                    let mut n = 0u128;
                    for s in enumerate_subspaces(k, r, &f, u128::MAX).unwrap() {
                        assert_eq!(s.rank(), r);
                        assert!(seen.insert(s));
                        n += 1;
                    }
                    assert_eq!(n, want, "q={q} k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn enumerated_bases_are_canonical() {
        let f = Field::new(3).unwrap();
        for s in enumerate_subspaces(4, 2, &f, u128::MAX).unwrap() {
            let again = Subcode::span(&f, s.basis());
            assert_eq!(again, s);
        }
    }

    #[test]
    fn small_weights() {
        let c = code(2, 1, 2, 1);
        let o = SearchOptions::default();
        assert_eq!(exact_dr(&c, 1, o), Ok(2));
        assert_eq!(exact_dr(&c, 2, o), Ok(3));
        assert_eq!(exact_dr(&c, 0, o), Ok(0));
        let h = exact_hierarchy(&c, o).unwrap();
        assert_eq!(h.values().unwrap(), vec![2, 3, 4]);
    }

    #[test]
    fn reed_muller_hierarchy() {
        // C^A(1,4;1) over GF(2) is RM(1,3)
        let c = code(2, 1, 3, 1);
        let h = exact_hierarchy(&c, SearchOptions::default()).unwrap();
        assert_eq!(h.values().unwrap(), vec![4, 6, 7, 8]);
    }

    #[test]
    fn level_two_hierarchy() {
        let c = code(2, 2, 2, 2);
        let h = exact_hierarchy(&c, SearchOptions::default()).unwrap();
        let v = h.values().unwrap();
        assert_eq!(&v[2..], &[12, 14, 15, 16]);
        assert!(h.is_strictly_increasing());
    }

    #[test]
    fn routes_agree_with_reference() {
        for (q, l, lp, h) in [
            (2u64, 1, 3, 1),
            (2, 2, 2, 1),
            (2, 2, 2, 2),
            (3, 1, 2, 1),
            (3, 1, 3, 1),
            (4, 1, 2, 1),
            (2, 1, 5, 1),
        ] {
            let c = code(q, l, lp, h);
            let cols = ProjectiveColumns::new(&c).unwrap();
            for r in 1..=c.dimension() {
                let want = exact_dr_reference(&c, r, u128::MAX).unwrap();
                let (a, wa) = if q == 2 {
                    let rows = BinaryRows::new(&c);
                    subspace_route(&c, &rows, r, Execution::Parallel)
                } else {
                    let rows = DenseRows {
                        field: c.field(),
                        generator: c.generator(),
                    };
                    subspace_route(&c, &rows, r, Execution::Parallel)
                };
                let (b, wb) = column_route(&c, &cols, r, Execution::Parallel);
                assert_eq!((a, b), (want, want), "q={q} l={l} l'={lp} h={h} r={r}");
                assert_eq!(c.support_weight(&wa).unwrap() as u64, want);
                assert_eq!(c.support_weight(&wb).unwrap() as u64, want);
                assert_eq!((wa.rank(), wb.rank()), (r, r));
            }
        }
    }

    #[test]
    fn dense_route_matches_binary_route() {
        let c = code(2, 2, 2, 2);
        let dense = DenseRows {
            field: c.field(),
            generator: c.generator(),
        };
        let bin = BinaryRows::new(&c);
        for r in 1..=c.dimension() {
            let a = subspace_route(&c, &dense, r, Execution::Sequential);
            let b = subspace_route(&c, &bin, r, Execution::Parallel);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn witness_is_first_minimum_in_enumeration_order() {
        let c = code(3, 1, 2, 1);
        for r in 1..=c.dimension() {
            let best = exact_dr(&c, r, SearchOptions::default()).unwrap() as usize;
            let first = enumerate_subspaces(c.dimension(), r, c.field(), u128::MAX)
                .unwrap()
                .find(|s| c.support_weight(s).unwrap() == best)
                .unwrap();
            let rows = DenseRows {
                field: c.field(),
                generator: c.generator(),
            };
            let (_, w) = subspace_route(&c, &rows, r, Execution::Parallel);
            assert_eq!(w, first);
        }
    }

    #[test]
    fn budget_reports_subspace_count() {
        let c = code(2, 2, 3, 2);
        let err = exact_dr(&c, 3, SearchOptions::with_budget(1000)).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                what: "d_3 of a [64, 10] code over GF(2): 3-dimensional subspaces".into(),
                required: 6_347_715,
                budget: 1000
            }
        );
    }

    #[test]
    fn witnesses() {
        let ex = Execution::Sequential;
        let p = CodeParams::new(2, 2, 3, 2).unwrap();
        assert_eq!(witness_initial(&p, 2, ex).unwrap().1, 36);
        let p1 = CodeParams::new(2, 1, 2, 1).unwrap();
        assert_eq!(witness_initial(&p1, 2, ex).unwrap().1, 3);
        let p2 = CodeParams::new(2, 2, 2, 2).unwrap();
        assert!(matches!(witness_initial(&p2, 2, ex), Err(Error::DomainViolation(_))));

        assert_eq!(witness_terminal(&p1, 2, ex).unwrap().1, 2);
        assert_eq!(witness_terminal(&p, 1, ex).unwrap().1, 63);
        assert_eq!(witness_terminal(&p, 4, ex).unwrap().1, 56);
        assert!(matches!(witness_terminal(&p, 5, ex), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn zero_sets() {
        let ex = Execution::Sequential;
        let p1 = CodeParams::new(2, 1, 2, 1).unwrap();
        assert_eq!(zero_set_count(&Subcode::coordinate(3, &[2]), &p1, ex), Ok(0));
        assert_eq!(zero_set_count(&Subcode::coordinate(3, &[1]), &p1, ex), Ok(2));
        let p = CodeParams::new(2, 2, 3, 2).unwrap();
        assert_eq!(
            zero_set_count(&Subcode::coordinate(10, &(0..7).collect::<Vec<_>>()), &p, ex),
            Ok(4)
        );
    }

    #[test]
    fn witness_subcodes_match_code_support() {
        let p = CodeParams::new(3, 2, 2, 1).unwrap();
        let c = build_code(&p, Execution::Sequential).unwrap();
        for r in 1..=2 {
            let (sub, w) = witness_initial(&p, r, Execution::Parallel).unwrap();
            assert_eq!(c.support_weight(&sub).unwrap() as u64, w);
        }
        for r in 1..=3 {
            let (sub, w) = witness_terminal(&p, r, Execution::Parallel).unwrap();
            assert_eq!(c.support_weight(&sub).unwrap() as u64, w);
        }
    }
}
