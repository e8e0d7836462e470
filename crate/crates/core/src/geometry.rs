//! Exact affine geometry for lattice polytopes: ranks, determinants, lattice
//! volumes of simplices, and consistency checks for triangulations.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub type RationalPoint = Vec<BigRational>;
pub type IntPoint = Vec<i64>;

pub const SAMPLE_SEED: u64 = 0xA5C;
pub const SAMPLE_COUNT: usize = 200;

pub fn to_rational(p: &[i64]) -> RationalPoint {
    p.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Scales each row by the lcm of its denominators.
fn integer_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let width = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..width {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            for j in col + 1..width {
                let v = (&a[i][j] * &a[rank][col] - &a[i][col] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    integer_rank(&integer_rows(rows))
}

/// Dimension of the affine hull of a nonempty point set.
pub fn affine_dimension(points: &[RationalPoint]) -> Result<usize> {
    let (first, rest) =
        points.split_first().ok_or_else(|| Error::contract("affine dimension of an empty point set"))?;
    let diffs: Vec<Vec<BigRational>> = rest.iter().map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
    Ok(rank(&diffs))
}

pub fn affine_dimension_int(points: &[IntPoint]) -> Result<usize> {
    let rational: Vec<RationalPoint> = points.iter().map(|p| to_rational(p)).collect();
    affine_dimension(&rational)
}

/// Basis of the rational null space of `rows` (vectors `x` with `rows · x = 0`),
/// scaled to integers.
fn null_space(rows: &[Vec<BigInt>], width: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..width {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Vec<BigRational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); width];
            v[f] = BigRational::one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[k][f].clone();
            }
            v
        })
        .collect();
    integer_rows(&basis)
}

/// Z-basis of `{x in Z^d : c · x = 0}` via unimodular column reduction.
fn integer_kernel(c: &[Vec<BigInt>], d: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = c.to_vec();
    // u[i][j]: column j of the unimodular transform
    let mut u: Vec<Vec<BigInt>> =
        (0..d).map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let swap_cols = |m: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
        for row in m.iter_mut() {
            row.swap(x, y);
        }
    };
    let sub_col = |m: &mut Vec<Vec<BigInt>>, target: usize, src: usize, q: &BigInt| {
        for row in m.iter_mut() {
            let v = &row[src] * q;
            row[target] -= v;
        }
    };
    let mut piv = 0;
    for i in 0..a.len() {
        if piv == d {
            break;
        }
        while let Some(j) = (piv..d).filter(|&j| !a[i][j].is_zero()).min_by_key(|&j| a[i][j].abs()) {
            swap_cols(&mut a, j, piv);
            swap_cols(&mut u, j, piv);
            let mut done = true;
            for k in piv + 1..d {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = a[i][k].div_floor(&a[i][piv]);
                sub_col(&mut a, k, piv, &q);
                sub_col(&mut u, k, piv, &q);
                if !a[i][k].is_zero() {
                    done = false;
                }
            }
            if done {
                piv += 1;
                break;
            }
        }
    }
    (piv..d).map(|j| (0..d).map(|i| u[i][j].clone()).collect()).collect()
}

/// The lattice of integer points in the affine hull of a set of integer points.
#[derive(Clone, Debug)]
pub struct AffineLattice {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
    /// Coordinates on which the hull projects isomorphically.
    pivots: Vec<usize>,
    pivot_det: BigInt,
}

impl AffineLattice {
    pub fn from_points(points: &[IntPoint]) -> Result<Self> {
        let (first, rest) = points.split_first().ok_or_else(|| Error::contract("lattice of an empty point set"))?;
        let d = first.len();
        if rest.iter().any(|p| p.len() != d) {
            return Err(Error::input("points have different dimensions"));
        }
        let diffs: Vec<Vec<BigInt>> =
            rest.iter().map(|p| p.iter().zip(first).map(|(a, b)| BigInt::from(a - b)).collect()).collect();
        let complement = null_space(&diffs, d);
        let basis = integer_kernel(&complement, d);
        let r = basis.len();
        // pick r coordinates on which the basis is independent
        let mut pivots = Vec::new();
        let mut chosen: Vec<Vec<BigInt>> = vec![Vec::new(); r];
        for col in 0..d {
            if pivots.len() == r {
                break;
            }
            let trial: Vec<Vec<BigInt>> =
                (0..r).map(|i| chosen[i].iter().cloned().chain([basis[i][col].clone()]).collect()).collect();
            let transposed: Vec<Vec<BigInt>> =
                (0..=pivots.len()).map(|k| (0..r).map(|i| trial[i][k].clone()).collect()).collect();
            if integer_rank(&transposed) == pivots.len() + 1 {
                pivots.push(col);
                chosen = trial;
            }
        }
        let pivot_det = determinant(&chosen);
        if pivot_det.is_zero() && r > 0 {
            return Err(Error::internal("lattice basis lost rank on its pivot coordinates"));
        }
        Ok(AffineLattice { ambient: d, basis, pivots, pivot_det })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dimension(&self) -> usize {
        self.ambient
    }

    fn edge_matrix(&self, simplex: &[IntPoint]) -> Vec<Vec<BigInt>> {
        let v0 = &simplex[0];
        simplex[1..].iter().map(|v| self.pivots.iter().map(|&c| BigInt::from(v[c] - v0[c])).collect()).collect()
    }

    /// Normalized volume of a simplex lying in the hull; zero if it has the
    /// wrong number of vertices or is degenerate.
    pub fn simplex_volume(&self, simplex: &[IntPoint]) -> Result<BigUint> {
        if simplex.len() != self.dimension() + 1 {
            return Ok(BigUint::zero());
        }
        if simplex.iter().any(|p| p.len() != self.ambient) {
            return Err(Error::input("simplex vertex has the wrong dimension"));
        }
        let det = determinant(&self.edge_matrix(simplex));
        let (q, r) = det.div_rem(&self.pivot_det);
        if !r.is_zero() {
            return Err(Error::contract("simplex does not lie in the lattice of the hull"));
        }
        Ok(q.magnitude().clone())
    }
}

/// A simplex prepared for exact barycentric membership tests.
struct MembershipTester {
    origin: Vec<BigInt>,
    /// adjugate of the transposed edge matrix, and its determinant
    adjugate: Vec<Vec<BigInt>>,
    det: BigInt,
}

impl MembershipTester {
    fn new(lattice: &AffineLattice, simplex: &[IntPoint]) -> Option<Self> {
        let w = lattice.edge_matrix(simplex);
        let r = w.len();
        let mt: Vec<Vec<BigRational>> =
            (0..r).map(|i| (0..r).map(|j| BigRational::from_integer(w[j][i].clone())).collect()).collect();
        let det = determinant(&(0..r).map(|i| (0..r).map(|j| w[j][i].clone()).collect()).collect::<Vec<_>>());
        if det.is_zero() {
            return None;
        }
        let inv = invert(mt)?;
        let detq = BigRational::from_integer(det.clone());
        let adjugate = inv.iter().map(|row| row.iter().map(|x| (x * &detq).to_integer()).collect()).collect();
        let origin = lattice.pivots.iter().map(|&c| BigInt::from(simplex[0][c])).collect();
        Some(MembershipTester { origin, adjugate, det })
    }

    /// Whether `numer / denom` (on pivot coordinates) lies in the closed simplex.
    fn contains(&self, numer: &[BigInt], denom: &BigInt) -> bool {
        let y: Vec<BigInt> = numer.iter().zip(&self.origin).map(|(x, o)| x - o * denom).collect();
        let positive = self.det.sign() == Sign::Plus;
        let mut total = BigInt::zero();
        for row in &self.adjugate {
            let mut mu: BigInt = row.iter().zip(&y).map(|(a, b)| a * b).sum();
            if !positive {
                mu = -mu;
            }
            if mu.is_negative() {
                return false;
            }
            total += mu;
        }
        total <= denom * self.det.abs()
    }
}

fn invert(mut a: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let f = a[col][col].recip();
        for j in 0..n {
            a[col][j] *= &f;
            inv[col][j] *= &f;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let g = a[i][col].clone();
                for j in 0..n {
                    let x = &g * &a[col][j];
                    a[i][j] -= x;
                    let y = &g * &inv[col][j];
                    inv[i][j] -= y;
                }
            }
        }
    }
    Some(inv)
}

/// A sample point contained in the wrong number of simplices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleFailure {
    pub sample: usize,
    pub drawn_from: usize,
    pub containing: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangulationReport {
    pub simplex_count: usize,
    pub dimension: usize,
    /// Simplices with a vertex outside the polytope's vertex set.
    pub foreign_vertices: Vec<usize>,
    /// `(simplex, volume)` for every simplex whose normalized volume is not 1.
    pub non_unimodular: Vec<(usize, String)>,
    pub volume_sum: String,
    pub expected_volume: String,
    pub samples: usize,
    pub sample_failures: Vec<SampleFailure>,
}

impl TriangulationReport {
    pub fn passed(&self) -> bool {
        self.foreign_vertices.is_empty()
            && self.non_unimodular.is_empty()
            && self.volume_sum == self.expected_volume
            && self.sample_failures.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} simplices, dim {}, volume {} (expected {}), {} foreign, {} non-unimodular, {}/{} samples misplaced",
            self.simplex_count,
            self.dimension,
            self.volume_sum,
            self.expected_volume,
            self.foreign_vertices.len(),
            self.non_unimodular.len(),
            self.sample_failures.len(),
            self.samples
        )
    }
}

/// Checks that `simplices` triangulate the polytope with the given vertices:
/// vertices are polytope vertices, every simplex is unimodular, volumes add up
/// to `expected_volume`, and seeded interior samples lie in exactly one simplex.
pub fn triangulation_checks(
    polytope_vertices: &[IntPoint],
    simplices: &[Vec<IntPoint>],
    expected_volume: &BigUint,
) -> Result<TriangulationReport> {
    let lattice = AffineLattice::from_points(polytope_vertices)?;
    let known: HashSet<&IntPoint> = polytope_vertices.iter().collect();
    let mut foreign_vertices = Vec::new();
    let mut non_unimodular = Vec::new();
    let mut volume_sum = BigUint::zero();
    for (k, s) in simplices.iter().enumerate() {
        if s.iter().any(|v| !known.contains(v)) {
            foreign_vertices.push(k);
        }
        let vol = lattice.simplex_volume(s).unwrap_or_else(|_| BigUint::zero());
        if !vol.is_one() {
            non_unimodular.push((k, vol.to_string()));
        }
        volume_sum += vol;
    }

    let testers: Vec<Option<MembershipTester>> = simplices.iter().map(|s| MembershipTester::new(&lattice, s)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut sample_failures = Vec::new();
    let samples = if simplices.is_empty() { 0 } else { SAMPLE_COUNT };
    for sample in 0..samples {
        let drawn_from = rng.gen_range(0..simplices.len());
        let s = &simplices[drawn_from];
        let weights: Vec<i64> = s.iter().map(|_| rng.gen_range(1..=16)).collect();
        let denom = BigInt::from(weights.iter().sum::<i64>());
        let numer: Vec<BigInt> =
            lattice.pivots.iter().map(|&c| s.iter().zip(&weights).map(|(v, w)| BigInt::from(v[c] * w)).sum()).collect();
        let containing: Vec<usize> = testers
            .iter()
            .enumerate()
            .filter(|(_, t)| t.as_ref().is_some_and(|t| t.contains(&numer, &denom)))
            .map(|(k, _)| k)
            .collect();
        if containing.len() != 1 {
            sample_failures.push(SampleFailure { sample, drawn_from, containing });
        }
    }
    Ok(TriangulationReport {
        simplex_count: simplices.len(),
        dimension: lattice.dimension(),
        foreign_vertices,
        non_unimodular,
        volume_sum: volume_sum.to_string(),
        expected_volume: expected_volume.to_string(),
        samples,
        sample_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn pts(rows: &[&[i64]]) -> Vec<IntPoint> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&ints(&[&[2, 0], &[0, 3]])), BigInt::from(6));
        assert_eq!(determinant(&ints(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), BigInt::from(-3));
        assert_eq!(determinant(&ints(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(determinant(&[]), BigInt::one());
    }

    #[test]
    fn dimensions() {
        assert_eq!(affine_dimension_int(&pts(&[&[1, 2, 3]])).unwrap(), 0);
        assert_eq!(affine_dimension_int(&pts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap(), 1);
        assert_eq!(affine_dimension_int(&pts(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])).unwrap(), 2);
        assert!(affine_dimension(&[]).is_err());
    }

    #[test]
    fn unit_simplex_volume() {
        let s = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let l = AffineLattice::from_points(&s).unwrap();
        assert_eq!(l.dimension(), 3);
        assert_eq!(l.simplex_volume(&s).unwrap(), BigUint::one());
        let degenerate = pts(&[&[0, 0, 0], &[1, 0, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(l.simplex_volume(&degenerate).unwrap(), BigUint::zero());
    }

    #[test]
    fn volume_is_measured_in_the_saturated_lattice() {
        // the standard 2-simplex sits in x+y+z=1; differences (−1,1,0),(−1,0,1)
        let s = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let l = AffineLattice::from_points(&s).unwrap();
        assert_eq!(l.simplex_volume(&s).unwrap(), BigUint::one());
        // a hull spanned by (2,2) still contains (1,1): the segment [0,(2,2)] has volume 2
        let seg = pts(&[&[0, 0], &[2, 2]]);
        let l = AffineLattice::from_points(&seg).unwrap();
        assert_eq!(l.simplex_volume(&seg).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn square_split_by_a_diagonal() {
        let square = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let tri = vec![pts(&[&[0, 0], &[1, 0], &[1, 1]]), pts(&[&[0, 0], &[0, 1], &[1, 1]])];
        let report = triangulation_checks(&square, &tri, &BigUint::from(2u32)).unwrap();
        assert!(report.passed(), "{}", report.summary());
        assert_eq!(report.samples, SAMPLE_COUNT);

        let overlapping = vec![tri[0].clone(), tri[0].clone()];
        let report = triangulation_checks(&square, &overlapping, &BigUint::from(2u32)).unwrap();
        assert!(!report.sample_failures.is_empty());

        let wrong = vec![pts(&[&[0, 0], &[1, 0], &[2, 2]])];
        let report = triangulation_checks(&square, &wrong, &BigUint::one()).unwrap();
        assert_eq!(report.foreign_vertices, vec![0]);
    }

    #[test]
    fn single_simplex_and_point() {
        let s = pts(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        let report = triangulation_checks(&s, std::slice::from_ref(&s), &BigUint::one()).unwrap();
        assert!(report.passed(), "{}", report.summary());
        let p = pts(&[&[3, 4]]);
        let report = triangulation_checks(&p, std::slice::from_ref(&p), &BigUint::one()).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }
}
