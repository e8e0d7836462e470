//! Alternating sign matrices, the faces `P_λ(n)` of the ASM polytope cut out
//! by zeros below the subdiagonal and inside `λ`, and their link to order and
//! flow polytopes.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{affine_dimension_int, IntPoint};
use crate::kostant::{flow_ehrhart_value, flow_polytope_volume};
use crate::planar::poset_to_flow_graph;
use crate::poset::{count_linear_extensions, order_polynomial, skew_cells, skew_star, validate_partition};
use crate::triangulation::dkk_maximal_cliques;

/// An `n × n` matrix with entries in `{-1, 0, 1}`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ASMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl ASMatrix {
    /// Validates the alternating-sign conditions: all partial row and column
    /// sums in `{0, 1}`, full sums equal to 1.
    pub fn new(n: usize, entries: Vec<i8>) -> Result<Self> {
        let m = ASMatrix { n, entries };
        if m.entries.len() != n * n {
            return Err(Error::input("matrix has the wrong number of entries"));
        }
        if !m.is_asm() {
            return Err(Error::input("not an alternating sign matrix"));
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        ASMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry in row `i`, column `j`, both 1-based.
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn as_point(&self) -> IntPoint {
        self.entries.iter().map(|&x| i64::from(x)).collect()
    }

    fn is_asm(&self) -> bool {
        let n = self.n;
        let ok = |seq: &mut dyn Iterator<Item = i8>| {
            let mut s = 0i32;
            for x in seq {
                if !(-1..=1).contains(&x) {
                    return false;
                }
                s += i32::from(x);
                if !(0..=1).contains(&s) {
                    return false;
                }
            }
            s == 1
        };
        (0..n).all(|i| ok(&mut (0..n).map(|j| self.entries[i * n + j])))
            && (0..n).all(|j| ok(&mut (0..n).map(|i| self.entries[i * n + j])))
    }

    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| BigRational::from_integer(self.entries[i * self.n + j].into())).collect())
            .collect()
    }
}

/// Cells forced to zero in `P_λ(n)`: `i - j >= 2`, and row `i`'s last `λ_i` cells.
fn forced_zero(n: usize, lambda: &[usize]) -> Vec<bool> {
    let mut z = vec![false; n * n];
    for i in 1..=n {
        for j in 1..=n {
            let in_lambda = lambda.get(i - 1).is_some_and(|&l| j + l > n);
            z[(i - 1) * n + (j - 1)] = i >= j + 2 || in_lambda;
        }
    }
    z
}

/// Integer matrices with zeros at `zero`, partial row and column sums in
/// `[0, t]` and all full sums equal to `t`, built row by row.
struct Dilation<'a> {
    n: usize,
    t: i64,
    zero: &'a [bool],
}

impl Dilation<'_> {
    /// Every admissible row given the column partial sums so far, as
    /// `(row, new column sums)`.
    fn rows(&self, row: usize, cols: &[i64]) -> Vec<(Vec<i64>, Vec<i64>)> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.n);
        self.rows_rec(row, cols, 0, 0, &mut cur, &mut out);
        out
    }

    fn rows_rec(
        &self,
        row: usize,
        cols: &[i64],
        j: usize,
        partial: i64,
        cur: &mut Vec<i64>,
        out: &mut Vec<(Vec<i64>, Vec<i64>)>,
    ) {
        let n = self.n;
        if j == n {
            if partial == self.t {
                let new_cols = cols.iter().zip(cur.iter()).map(|(c, a)| c + a).collect();
                out.push((cur.clone(), new_cols));
            }
            return;
        }
        let (lo, hi) = if self.zero[row * n + j] { (0, 0) } else { (-self.t, self.t) };
        for a in lo..=hi {
            let p = partial + a;
            let c = cols[j] + a;
            if !(0..=self.t).contains(&p) || !(0..=self.t).contains(&c) {
                continue;
            }
            // the last row must complete every column
            if row == n - 1 && c != self.t {
                continue;
            }
            cur.push(a);
            self.rows_rec(row, cols, j + 1, p, cur, out);
            cur.pop();
        }
    }

    fn count(&self) -> BigUint {
        let mut memo: HashMap<(usize, Vec<i64>), BigUint> = HashMap::new();
        self.count_rec(0, vec![0; self.n], &mut memo)
    }

    fn count_rec(&self, row: usize, cols: Vec<i64>, memo: &mut HashMap<(usize, Vec<i64>), BigUint>) -> BigUint {
        if row == self.n {
            return if cols.iter().all(|&c| c == self.t) { BigUint::one() } else { BigUint::zero() };
        }
        if let Some(v) = memo.get(&(row, cols.clone())) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for (_, next) in self.rows(row, &cols) {
            total += self.count_rec(row + 1, next, memo);
        }
        memo.insert((row, cols), total.clone());
        total
    }

    fn enumerate(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut acc = Vec::new();
        self.enum_rec(0, vec![0; self.n], &mut acc, &mut out);
        out
    }

    fn enum_rec(&self, row: usize, cols: Vec<i64>, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if row == self.n {
            if cols.iter().all(|&c| c == self.t) {
                out.push(acc.clone());
            }
            return;
        }
        for (r, next) in self.rows(row, &cols) {
            let len = acc.len();
            acc.extend(r);
            self.enum_rec(row + 1, next, acc, out);
            acc.truncate(len);
        }
    }
}

fn matrices(n: usize, zero: &[bool]) -> Vec<ASMatrix> {
    if n == 0 {
        return vec![ASMatrix { n: 0, entries: Vec::new() }];
    }
    let mut v: Vec<ASMatrix> = Dilation { n, t: 1, zero }
        .enumerate()
        .into_iter()
        .map(|e| ASMatrix { n, entries: e.into_iter().map(|x| x as i8).collect() })
        .collect();
    v.sort();
    v
}

/// All `n × n` alternating sign matrices, lexicographic by row-major entries.
pub fn enumerate_asm(n: usize) -> Vec<ASMatrix> {
    matrices(n, &vec![false; n * n])
}

/// Vertices of `P_λ(n)`: the ASMs vanishing below the subdiagonal and on `λ`.
pub fn p_lambda_vertices(n: usize, lambda: &[usize]) -> Result<Vec<ASMatrix>> {
    let lam = validate_partition(n, lambda)?;
    Ok(matrices(n, &forced_zero(n, &lam)))
}

/// Integer points of `t · P_λ(n)`.
pub fn asm_dilation_count(n: usize, lambda: &[usize], t: u64) -> Result<BigUint> {
    let lam = validate_partition(n, lambda)?;
    if n == 0 || t == 0 {
        return Ok(BigUint::one());
    }
    let zero = forced_zero(n, &lam);
    Ok(Dilation { n, t: t as i64, zero: &zero }.count())
}

/// Checks that a rational matrix satisfies the inequalities of `P_λ(n)`.
pub fn check_p_lambda_point(n: usize, lambda: &[usize], m: &[Vec<BigRational>]) -> Result<()> {
    let lam = validate_partition(n, lambda)?;
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::input(format!("expected an {n} x {n} matrix")));
    }
    let zero = forced_zero(n, &lam);
    let one = BigRational::one();
    for i in 0..n {
        for j in 0..n {
            if zero[i * n + j] && !m[i][j].is_zero() {
                return Err(Error::input(format!("entry ({}, {}) must be zero", i + 1, j + 1)));
            }
        }
    }
    for (what, transpose) in [("row", false), ("column", true)] {
        for a in 0..n {
            let mut s = BigRational::zero();
            for b in 0..n {
                s += if transpose { &m[b][a] } else { &m[a][b] };
                if s.is_negative() || s > one {
                    return Err(Error::input(format!("partial {what} sum out of [0, 1] in {what} {}", a + 1)));
                }
            }
            if s != one {
                return Err(Error::input(format!("{what} {} does not sum to 1", a + 1)));
            }
        }
    }
    Ok(())
}

/// `g(i, j) = 1 - Σ_{i' <= i, j' >= j} m_{i'j'}` on the cells of the staircase
/// outside `λ`, in the element order of [`skew_star`]. The image is checked to
/// lie in the order polytope.
pub fn corner_sum_map(n: usize, lambda: &[usize], m: &[Vec<BigRational>]) -> Result<Vec<BigRational>> {
    check_p_lambda_point(n, lambda, m)?;
    let cells = skew_cells(n, lambda)?;
    let one = BigRational::one();
    let g: Vec<BigRational> = cells
        .iter()
        .map(|&(i, j)| {
            let corner: BigRational = (0..i).flat_map(|a| (j - 1..n).map(move |b| (a, b))).map(|(a, b)| &m[a][b]).sum();
            &one - corner
        })
        .collect();
    let p = skew_star(n, lambda)?;
    if g.iter().any(|x| x.is_negative() || *x > one) || !p.is_order_preserving(&g) {
        return Err(Error::internal("corner sums left the order polytope"));
    }
    Ok(g)
}

/// `∏_{1 <= i < j <= n} (2t + i + j - 1) / (i + j - 1)`.
pub fn proctor_ehrhart(n: usize, t: u64) -> BigUint {
    let mut r = BigRational::one();
    for i in 1..=n as u64 {
        for j in i + 1..=n as u64 {
            r *= BigRational::new(BigInt::from(2 * t + i + j - 1), BigInt::from(i + j - 1));
        }
    }
    assert!(r.is_integer(), "product is an integer");
    r.to_integer().to_biguint().expect("product is positive")
}

/// One row of the Ehrhart comparison: lattice points of `t · P_λ(n)` counted
/// three (or four) independent ways.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EhrhartRow {
    pub t: u64,
    pub matrices: String,
    pub order_polynomial: String,
    pub flows: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_formula: Option<String>,
}

impl EhrhartRow {
    pub fn consistent(&self) -> bool {
        self.matrices == self.order_polynomial
            && self.matrices == self.flows
            && self.product_formula.as_ref().is_none_or(|p| *p == self.matrices)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub n: usize,
    pub lambda: Vec<usize>,
    pub vertex_count: usize,
    pub dimension: usize,
    pub expected_dimension: usize,
    pub volume_by_extensions: String,
    pub volume_by_kostant: String,
    pub volume_by_dkk_count: String,
    pub ehrhart: Vec<EhrhartRow>,
    pub all_consistent: bool,
}

/// Computes vertex count, dimension, volume and Ehrhart values of `P_λ(n)` by
/// every available route and compares them.
pub fn family_report(n: usize, lambda: &[usize]) -> Result<FamilyReport> {
    if n == 0 {
        return Err(Error::input("n must be positive"));
    }
    let lam = validate_partition(n, lambda)?;
    let vertices = p_lambda_vertices(n, &lam)?;
    let points: Vec<IntPoint> = vertices.iter().map(ASMatrix::as_point).collect();
    let dimension = affine_dimension_int(&points)?;
    let cells = lam.iter().sum::<usize>();
    let expected_dimension = n * (n - 1) / 2 - cells;
    let p = skew_star(n, &lam)?;
    let pg = poset_to_flow_graph(&p)?;
    let by_ext = count_linear_extensions(&p);
    let by_kostant = flow_polytope_volume(&pg.graph)?;
    let by_dkk = BigUint::from(dkk_maximal_cliques(&pg.graph, &pg.framing)?.len());
    let mut ehrhart = Vec::new();
    for t in 0..=3u64 {
        ehrhart.push(EhrhartRow {
            t,
            matrices: asm_dilation_count(n, &lam, t)?.to_string(),
            order_polynomial: order_polynomial(&p, t + 1).to_string(),
            flows: flow_ehrhart_value(&pg.graph, t)?.to_string(),
            product_formula: lam.is_empty().then(|| proctor_ehrhart(n, t).to_string()),
        });
    }
    let all_consistent = dimension == expected_dimension
        && by_ext == by_kostant
        && by_ext == by_dkk
        && ehrhart.iter().all(EhrhartRow::consistent);
    Ok(FamilyReport {
        n,
        lambda: lam,
        vertex_count: vertices.len(),
        dimension,
        expected_dimension,
        volume_by_extensions: by_ext.to_string(),
        volume_by_kostant: by_kostant.to_string(),
        volume_by_dkk_count: by_dkk.to_string(),
        ehrhart,
        all_consistent,
    })
}

/// Dyck paths of semilength `n` never rising above height `h`.
pub fn dyck_paths_bounded(n: usize, h: usize) -> BigUint {
    let mut ways = vec![BigUint::zero(); h + 1];
    ways[0] = BigUint::one();
    for _ in 0..2 * n {
        let mut next = vec![BigUint::zero(); h + 1];
        for (level, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            if level < h {
                next[level + 1] += w;
            }
            if level > 0 {
                next[level - 1] += w;
            }
        }
        ways = next;
    }
    ways[0].clone()
}

/// Permutations of `[m]` with `a_1 < a_2 > a_3 < ...`, by exhaustive search.
pub fn alternating_permutations(m: usize) -> u64 {
    fn rec(m: usize, used: &mut Vec<bool>, last: usize, len: usize) -> u64 {
        if len == m {
            return 1;
        }
        let mut total = 0;
        for x in 0..m {
            if used[x] {
                continue;
            }
            let rising = len % 2 == 1;
            if len > 0 && (rising != (x > last)) {
                continue;
            }
            used[x] = true;
            total += rec(m, used, x, len + 1);
            used[x] = false;
        }
        total
    }
    rec(m, &mut vec![false; m], 0, 0)
}
