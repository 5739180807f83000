//! Closed-form higher weights of affine Grassmann codes and their duals.
//!
//! All arithmetic is exact over `u128`; results that would overflow are
//! reported as [`Error::Overflow`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hierarchy::{EntryStatus, WeightHierarchy};
use crate::minors::CodeParams;

fn overflow(what: &str) -> Error {
    Error::Overflow(what.to_string())
}

fn pow(q: u128, e: usize) -> Result<u128> {
    q.checked_pow(e as u32).ok_or_else(|| overflow("power of q"))
}

/// |GL_h(F_q)| = ∏_{i<h} (q^h − q^i).
pub fn gl_order(q: u64, h: usize) -> Result<u128> {
    let q = q as u128;
    let qh = pow(q, h)?;
    (0..h).try_fold(1u128, |acc, i| {
        acc.checked_mul(qh - pow(q, i)?).ok_or_else(|| overflow("|GL_h|"))
    })
}

/// d(ℓ,m;h) = q^{δ−h²}·|GL_h(F_q)|.
pub fn min_distance_formula(params: &CodeParams) -> Result<u128> {
    let (q, h) = (params.q(), params.level());
    pow(q as u128, params.delta() - h * h)?
        .checked_mul(gl_order(q, h)?)
        .ok_or_else(|| overflow("minimum distance"))
}

/// Points where s minors of a close family are all nonzero:
/// d·(1 − 1/q)^{s−1}.
pub fn family_intersection_formula(params: &CodeParams, s: usize) -> Result<u128> {
    if s == 0 {
        return Err(Error::domain("need at least one minor"));
    }
    let d = min_distance_formula(params)?;
    let q = params.q() as u128;
    let num = d
        .checked_mul(pow(q - 1, s - 1)?)
        .ok_or_else(|| overflow("intersection count"))?;
    let den = pow(q, s - 1)?;
    if num % den != 0 {
        return Err(Error::domain(format!("q^{} does not divide the count", s - 1)));
    }
    Ok(num / den)
}

/// Largest r for which the initial weights are known in closed form, or
/// `None` when only the minimum distance is.
pub fn initial_domain(params: &CodeParams) -> Option<usize> {
    crate::hierarchy::initial_domain_max(params)
}

/// d_r = Σ_{i<r} d/q^i on the domain r ≤ max{ℓ'−h, h}+1 (with h < ℓ'
/// when ℓ' ≤ 2h). These weights meet the Griesmer–Wei bound.
pub fn initial_dr_formula(params: &CodeParams, r: usize) -> Result<u128> {
    let max_r = initial_domain(params).unwrap_or(1);
    if r == 0 || r > max_r {
        return Err(Error::domain(format!(
            "initial weight formula holds for 1 <= r <= {max_r} here, got r={r}"
        )));
    }
    let d = min_distance_formula(params)?;
    let q = params.q() as u128;
    // d is divisible by q^{δ−h²}·q^{h(h−1)/2} ≥ q^{r−1} on this domain
    let mut total = 0u128;
    let mut term = d;
    for _ in 0..r {
        total = total.checked_add(term).ok_or_else(|| overflow("d_r"))?;
        term /= q;
    }
    Ok(total)
}

/// d_{k_h−r} = q^δ − q^{r−1} for 1 ≤ r ≤ ℓ'+1, and d_{k_h} = q^δ.
pub fn terminal_dr_formula(params: &CodeParams, r: usize) -> Result<u128> {
    if r > params.cols() + 1 {
        return Err(Error::domain(format!(
            "terminal weight formula holds for r <= l'+1 = {}, got r={r}",
            params.cols() + 1
        )));
    }
    let n = params.length();
    if r == 0 {
        return Ok(n);
    }
    Ok(n - pow(params.q() as u128, r - 1)?)
}

/// Lower bound d_{k_h−r} ≥ q^δ − q^{r−1}, valid for 1 ≤ r ≤ δ+1.
pub fn terminal_lower_bound(params: &CodeParams, r: usize) -> Result<u128> {
    if r == 0 || r > params.delta() + 1 {
        return Err(Error::domain(format!(
            "terminal lower bound holds for 1 <= r <= delta+1 = {}, got r={r}",
            params.delta() + 1
        )));
    }
    Ok(params.length() - pow(params.q() as u128, r - 1)?)
}

/// Σ_{i<r} ⌈d1/q^i⌉.
pub fn griesmer_wei(d1: u128, r: usize, q: u64) -> u128 {
    let q = q as u128;
    let mut total = 0;
    let mut div = 1u128;
    for _ in 0..r {
        total += d1.div_ceil(div);
        match div.checked_mul(q) {
            Some(x) => div = x,
            // every further term is 1 (d1 ≥ 1)
            None => {
                div = u128::MAX;
            }
        }
    }
    total
}

/// Pairs (r, s), 1 ≤ r < s ≤ k, at which
/// d_s ≥ d_r + Σ_{i=1}^{s−r} ⌈(q−1)d_r / ((q^r−1)q^i)⌉ fails. Unknown
/// entries are skipped.
pub fn tsfasman_vladut_check(hierarchy: &WeightHierarchy, q: u64) -> Vec<(usize, usize)> {
    let k = hierarchy.dimension();
    let q = q as u128;
    let mut bad = Vec::new();
    for r in 1..=k {
        let Some(dr) = hierarchy.get(r) else { continue };
        let num = (q - 1) * dr;
        let base = q.checked_pow(r as u32).map(|qr| qr - 1);
        let mut bound = dr;
        let mut den = base;
        for s in r + 1..=k {
            den = den.and_then(|d| d.checked_mul(q));
            // a denominator past u128 leaves a term of 1 (num > 0)
            bound += den.map_or(u128::from(num > 0), |d| num.div_ceil(d));
            let Some(ds) = hierarchy.get(s) else { continue };
            if ds < bound {
                bad.push((r, s));
            }
        }
    }
    bad
}

/// The dual's hierarchy by Wei duality:
/// {d_s(C⊥)} = {1..n} ∖ {n+1−d_r(C)}.
pub fn dual_hierarchy_from_primal(primal: &WeightHierarchy) -> Result<WeightHierarchy> {
    let d = primal.values()?;
    let n = primal.length();
    let excluded: std::collections::BTreeSet<u128> = d.iter().map(|&x| n + 1 - x).collect();
    let dual: Vec<u128> = (1..=n).filter(|x| !excluded.contains(x)).collect();
    Ok(WeightHierarchy::from_values(n, &dual, EntryStatus::Exact))
}

fn require_nondegenerate(primal: &WeightHierarchy) -> Result<(u128, usize)> {
    let k = primal.dimension();
    let n = primal.length();
    if k == 0 {
        return Err(Error::domain("the e/f lookups need a code of positive dimension"));
    }
    match primal.get(k) {
        None => Err(Error::IncompleteHierarchy(k)),
        Some(dk) if dk != n => Err(Error::domain("the e/f lookups need a nondegenerate code")),
        Some(_) => Ok((n, k)),
    }
}

fn known(primal: &WeightHierarchy, r: usize) -> Result<u128> {
    primal.get(r).ok_or(Error::IncompleteHierarchy(r))
}

/// d_{n−k−s}(C⊥) = n − s − j for the j < k with e_j ≤ s < e_{j+1}.
/// Only d_1, …, d_{j+1} and d_k need to be known.
pub fn dual_terminal_lookup(primal: &WeightHierarchy, s: u128) -> Result<u128> {
    let (n, k) = require_nondegenerate(primal)?;
    if s >= n - k as u128 {
        return Err(Error::domain(format!("need 0 <= s < n-k = {}, got {s}", n - k as u128)));
    }
    let mut j = 0;
    // e is non-decreasing and e_k = n−k > s
    while known(primal, j + 1)? - (j as u128 + 1) <= s {
        j += 1;
    }
    Ok(n - s - j as u128)
}

/// d_s(C⊥) = s + j + 1 for the j < k with f_j < s ≤ f_{j+1}.
/// Only d_{k−j−1}, …, d_k need to be known.
pub fn dual_initial_lookup(primal: &WeightHierarchy, s: u128) -> Result<u128> {
    let (n, k) = require_nondegenerate(primal)?;
    if s == 0 || s > n - k as u128 {
        return Err(Error::domain(format!("need 0 < s <= n-k = {}, got {s}", n - k as u128)));
    }
    let f = |j: usize| -> Result<u128> { Ok(n - j as u128 - known(primal, k - j)?) };
    let mut j = 0;
    while f(j + 1)? < s {
        j += 1;
    }
    Ok(s + j as u128 + 1)
}

/// Q_j = q^j − j, saturating at `u128::MAX`.
pub fn q_seq(q: u64, j: usize) -> u128 {
    (q as u128).checked_pow(j as u32).map_or(u128::MAX, |p| p - j as u128)
}

/// d_s of the dual from q, s and ℓ' alone. `lp = None` stands for ℓ'
/// large enough that the bound s < q^{ℓ'} − ℓ' is never reached.
pub fn dual_initial_in_regime(q: u64, lp: Option<usize>, s: u128) -> Result<u128> {
    if lp == Some(1) {
        return Err(Error::domain("dual weight formulas need l' > 1"));
    }
    if s == 0 {
        return Err(Error::domain("s must be positive"));
    }
    if let Some(lp) = lp {
        let limit = q_seq(q, lp);
        if s >= limit {
            return Err(Error::domain(format!("need s < q^l' - l' = {limit}, got s={s}")));
        }
    }
    // unique j ≥ 1 with Q_{j−1} ≤ s < Q_j
    let mut j = 1;
    while !(q_seq(q, j - 1) <= s && s < q_seq(q, j)) {
        j += 1;
    }
    Ok(s + j as u128 + 1)
}

/// d_s(C⊥) for 1 ≤ s < q^{ℓ'} − ℓ'.
pub fn dual_initial_formula(params: &CodeParams, s: u128) -> Result<u128> {
    dual_initial_in_regime(params.q(), Some(params.cols()), s)
}

/// d⊥_1, …, d⊥_{s_max} by the recursion d⊥_s = d⊥_{s−1} + 2 when d⊥_{s−1}
/// is a power of q, else d⊥_{s−1} + 1.
pub fn dual_recursive_in_regime(q: u64, lp: Option<usize>, s_max: u128) -> Result<Vec<u128>> {
    if let Some(lp) = lp {
        if s_max > q_seq(q, lp) {
            return Err(Error::domain(format!(
                "recursion holds for s <= q^l' - l' = {}, got {s_max}",
                q_seq(q, lp)
            )));
        }
    }
    if s_max == 0 {
        return Ok(Vec::new());
    }
    let mut out = vec![dual_initial_in_regime(q, lp, 1)?];
    for _ in 1..s_max {
        let prev = *out.last().unwrap();
        out.push(prev + if is_power_of(prev, q) { 2 } else { 1 });
    }
    Ok(out)
}

pub fn dual_recursive(params: &CodeParams, s_max: u128) -> Result<Vec<u128>> {
    dual_recursive_in_regime(params.q(), Some(params.cols()), s_max)
}

/// Whether x = q^i for some i ≥ 0.
pub fn is_power_of(mut x: u128, q: u64) -> bool {
    let q = q as u128;
    if x == 0 {
        return false;
    }
    while x.is_multiple_of(q) {
        x /= q;
    }
    x == 1
}

/// How the index j is matched to s in the terminal dual formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalConvention {
    /// e_j ≤ s < e_{j+1}, consistent with Wei duality.
    ESequence,
    /// H_{j−1} ≤ s < H_j as printed alongside the dual weight theorem.
    Literal,
}

/// d·G_j = Σ_{i<j} d/q^i, exact when q^{j−1} divides d.
pub fn d_times_g(d: u128, q: u64, j: usize) -> Option<u128> {
    let q = q as u128;
    let mut total = 0u128;
    let mut term = d;
    for i in 0..j {
        if i > 0 {
            if !term.is_multiple_of(q) {
                return None;
            }
            term /= q;
        }
        total = total.checked_add(term)?;
    }
    Some(total)
}

/// H_j = d·G_j − j (H_0 = 0).
pub fn h_seq(params: &CodeParams, j: usize) -> Result<i128> {
    let d = min_distance_formula(params)?;
    let dg = d_times_g(d, params.q(), j).ok_or_else(|| Error::domain(format!("d·G_{j} is not an integer")))?;
    Ok(dg as i128 - j as i128)
}

/// d_{n−k_h−s} of the dual. For s ≤ d−2 this is q^δ − s. Beyond, it is
/// n − s − j with j matched by `convention`, as long as j is pinned down by
/// the known initial weights of the primal code.
pub fn dual_terminal_formula_with(params: &CodeParams, s: u128, convention: TerminalConvention) -> Result<u128> {
    let (lp, l, h) = (params.cols(), params.rows(), params.level());
    if lp <= 1 {
        return Err(Error::domain("dual weight formulas need l' > 1"));
    }
    let n = params.length();
    let k = params.dimension() as u128;
    if s >= n - k {
        return Err(Error::domain(format!("need s < n-k = {}, got {s}", n - k)));
    }
    let d = min_distance_formula(params)?;
    if s + 2 <= d {
        return Ok(n - s);
    }
    if !(h < lp || lp > 2 * h) {
        return Err(Error::domain("the H-indexed range needs h < l' or l' > 2h"));
    }
    let hmax = h_seq(params, l)
        .ok()
        .into_iter()
        .chain(h_seq(params, lp - l).ok())
        .max()
        .unwrap_or(0);
    if s as i128 > hmax {
        return Err(Error::domain(format!("need s <= max(H_l, H_(l'-l)) = {hmax}, got {s}")));
    }
    let s_i = s as i128;
    let q = params.q();
    // e_j = H_j exactly up to `known`; beyond it H_j is only a lower bound
    let known = initial_domain(params).unwrap_or(1);
    let hj = |j: usize| -> Option<i128> { d_times_g(d, q, j).map(|x| x as i128 - j as i128) };
    let gw = |j: usize| griesmer_wei(d, j, q) as i128 - j as i128;
    let j = match convention {
        TerminalConvention::ESequence => {
            let mut j = 0;
            while j < known && hj(j + 1).is_some_and(|x| x <= s_i) {
                j += 1;
            }
            let next_lower = if j < known { hj(j + 1).unwrap() } else { gw(j + 1) };
            if s_i >= next_lower {
                return Err(Error::domain(format!(
                    "s = {s} lies beyond the primal weights known in closed form"
                )));
            }
            j
        }
        TerminalConvention::Literal => {
            let mut j = 1;
            loop {
                let lo = if j == 1 {
                    0
                } else {
                    hj(j - 1).ok_or_else(|| Error::domain("H_j undefined"))?
                };
                let hi = hj(j).ok_or_else(|| Error::domain("H_j undefined"))?;
                if lo <= s_i && s_i < hi {
                    break j;
                }
                j += 1;
                if j > l.max(lp - l) + 1 {
                    return Err(Error::domain(format!("no j with H_(j-1) <= {s} < H_j")));
                }
            }
        }
    };
    Ok(n - s - j as u128)
}

/// d_{n−k_h−s} of the dual, using the e-sequence convention.
pub fn dual_terminal_formula(params: &CodeParams, s: u128) -> Result<u128> {
    dual_terminal_formula_with(params, s, TerminalConvention::ESequence)
}

/// d⊥_{n−k_h−s} for s = 0..=s_max, stepping down from d⊥_{n−k_h} = q^δ.
/// Each step lowers the weight by one and skips the values n + 1 − d·G_j
/// that Wei duality excludes from the dual hierarchy. Every step must lie
/// in the domain of [`dual_terminal_formula`].
pub fn dual_recursive_terminal(params: &CodeParams, s_max: u128) -> Result<Vec<u128>> {
    let n = params.length();
    let d = min_distance_formula(params)?;
    let q = params.q();
    let known = initial_domain(params).unwrap_or(1);
    let excluded: Vec<u128> = (1..=known)
        .filter_map(|j| d_times_g(d, q, j))
        .map(|x| n + 1 - x)
        .collect();
    let mut out = vec![n];
    for s in 1..=s_max {
        dual_terminal_formula(params, s)?;
        let mut next = out.last().unwrap() - 1;
        while excluded.contains(&next) {
            next -= 1;
        }
        out.push(next);
    }
    Ok(out)
}

/// The two-minor upper bound d(ℓ,2ℓ;ℓ)·(1 + q^{ℓ−1}/(q^ℓ−1)) on d_2 of
/// C^A(ℓ,2ℓ).
pub fn conjecture_d2_value(l: usize, q: u64) -> Result<u128> {
    let d = gl_order(q, l)?;
    let qq = q as u128;
    let extra = (d / (pow(qq, l)? - 1))
        .checked_mul(pow(qq, l - 1)?)
        .ok_or_else(|| overflow("d_2 bound"))?;
    d.checked_add(extra).ok_or_else(|| overflow("d_2 bound"))
}

/// Field orders appearing in the published table of dual weights.
pub const TABLE1_Q: [u64; 11] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17];
pub const TABLE1_ROWS: usize = 27;

/// Published dual weights d⊥_1..d⊥_27 (rows) for each q in [`TABLE1_Q`].
pub const TABLE1_PUBLISHED: [[u32; 11]; 27] = [
    [4, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3],
    [6, 5, 4, 4, 4, 4, 4, 4, 4, 4, 4],
    [7, 6, 6, 5, 5, 5, 5, 5, 5, 5, 5],
    [8, 7, 7, 7, 6, 6, 6, 6, 6, 6, 6],
    [10, 8, 8, 8, 7, 7, 7, 7, 7, 7, 7],
    [11, 9, 9, 9, 9, 8, 8, 8, 8, 8, 8],
    [12, 11, 10, 10, 10, 10, 9, 9, 9, 9, 9],
    [13, 12, 11, 11, 11, 11, 11, 10, 10, 10, 10],
    [14, 13, 12, 12, 12, 12, 12, 11, 11, 11, 11],
    [15, 14, 13, 13, 13, 13, 13, 13, 12, 12, 12],
    [16, 15, 14, 14, 14, 14, 14, 14, 13, 13, 13],
    [18, 16, 15, 15, 15, 15, 15, 15, 15, 14, 14],
    [19, 17, 16, 16, 16, 16, 16, 16, 16, 15, 15],
    [20, 18, 18, 17, 17, 17, 17, 17, 17, 16, 16],
    [21, 19, 19, 18, 18, 18, 18, 18, 18, 18, 17],
    [22, 20, 20, 19, 19, 19, 19, 19, 19, 19, 19],
    [23, 21, 21, 20, 20, 20, 20, 20, 20, 20, 20],
    [24, 22, 22, 21, 21, 21, 21, 21, 21, 21, 21],
    [25, 23, 23, 22, 22, 22, 22, 22, 22, 22, 22],
    [26, 24, 24, 23, 23, 23, 23, 23, 23, 23, 23],
    [27, 25, 25, 24, 24, 24, 24, 24, 24, 24, 24],
    [28, 26, 26, 25, 25, 25, 25, 25, 25, 25, 25],
    [29, 27, 27, 27, 26, 26, 26, 26, 26, 26, 26],
    [30, 29, 28, 28, 27, 27, 27, 27, 27, 27, 27],
    [31, 30, 29, 29, 28, 28, 28, 28, 28, 28, 28],
    [32, 31, 30, 30, 29, 29, 29, 29, 29, 29, 29],
    [34, 32, 31, 31, 30, 30, 30, 30, 30, 30, 30],
];

/// Dual weights d⊥_s, s = 1..s_max, for each q, with ℓ' unbounded.
/// `result[s−1][i]` belongs to `q_list[i]`.
pub fn table1(q_list: &[u64], s_max: usize) -> Result<Vec<Vec<u128>>> {
    (1..=s_max)
        .map(|s| {
            q_list
                .iter()
                .map(|&q| dual_initial_in_regime(q, None, s as u128))
                .collect()
        })
        .collect()
}

/// Table rows as CSV with a header `s,<q>,<q>,…`.
pub fn table_csv(q_list: &[u64], rows: &[Vec<u128>]) -> String {
    let mut out = String::from("s");
    for q in q_list {
        out.push_str(&format!(",{q}"));
    }
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        out.push_str(&(i + 1).to_string());
        for v in row {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

/// Parses CSV in the layout of [`table_csv`].
pub fn parse_table_csv(text: &str) -> Result<(Vec<u64>, Vec<Vec<u128>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Format("empty table".into()))?;
    let mut cells = header.split(',');
    if cells.next().map(str::trim) != Some("s") {
        return Err(Error::Format("header must start with 's'".into()));
    }
    let qs = cells
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|e| Error::Format(format!("bad q '{c}': {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let vals = line
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u128>()
                    .map_err(|e| Error::Format(format!("bad cell '{c}': {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != qs.len() + 1 || vals[0] != i as u128 + 1 {
            return Err(Error::Format(format!("malformed row {}", i + 1)));
        }
        rows.push(vals[1..].to_vec());
    }
    Ok((qs, rows))
}

/// The published table as rows of `u128`.
pub fn table1_published() -> Vec<Vec<u128>> {
    TABLE1_PUBLISHED
        .iter()
        .map(|row| row.iter().map(|&x| x as u128).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualMethod {
    DirectFormula,
    Recursive,
    DualityTransform,
}

/// Dual weights over a range of s with the auxiliary sequences used to
/// derive them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualWeightReport {
    pub q: u64,
    pub s_range: (u128, u128),
    pub values: Vec<(u128, u128, DualMethod)>,
    /// Q_j = q^j − j.
    pub q_seq: Vec<u128>,
    /// G_j as (q^{j−1}·G_j, q^{j−1}).
    pub g_seq: Vec<(u128, u128)>,
    /// H_j = d·G_j − j, where defined.
    pub h_seq: Vec<Option<i128>>,
}

/// G_j = Σ_{i<j} q^{−i} as (numerator, q^{j−1}); G_0 = (0, 1).
pub fn g_seq(q: u64, j: usize) -> Option<(u128, u128)> {
    if j == 0 {
        return Some((0, 1));
    }
    let q = q as u128;
    let den = q.checked_pow(j as u32 - 1)?;
    // Σ_{i<j} q^{j−1−i} = (q^j − 1)/(q − 1)
    let num = (q.checked_pow(j as u32)? - 1) / (q - 1);
    Some((num, den))
}

/// Auxiliary sequences for indices 0..=j_max.
pub fn dual_report(
    q: u64,
    d: Option<u128>,
    s_range: (u128, u128),
    values: Vec<(u128, u128, DualMethod)>,
    j_max: usize,
) -> DualWeightReport {
    DualWeightReport {
        q,
        s_range,
        values,
        q_seq: (0..=j_max).map(|j| q_seq(q, j)).collect(),
        g_seq: (0..=j_max).filter_map(|j| g_seq(q, j)).collect(),
        h_seq: (0..=j_max)
            .map(|j| d.and_then(|d| d_times_g(d, q, j)).map(|x| x as i128 - j as i128))
            .collect(),
    }
}
