//! Integral homology of truncated simplicial sets via normalized chains
//! and Smith normal form with verified unimodular certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::simplicial::TruncSSet;

pub type Mat = Vec<Vec<BigInt>>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("truncation too shallow: need level {needed}, have {have}")]
    TruncationTooShallow { needed: usize, have: usize },
    #[error("boundary square is nonzero at degree {0}; not a simplicial set")]
    BoundarySquareNonzero(usize),
}

/// The normalized chain complex: degree-n basis is the nondegenerate
/// n-simplices, boundaries drop degenerate faces.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub ranks: Vec<usize>,
    /// boundaries[n] is `∂_n: C_n → C_{n-1}` for `1 ≤ n ≤ maxdim`
    /// (row-major, rows indexed by the degree n-1 basis).
    pub boundaries: Vec<Mat>,
    /// Cell indices of the nondegenerate simplices per degree.
    pub basis: Vec<Vec<usize>>,
}

pub fn zero_matrix(rows: usize, cols: usize) -> Mat {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = zero_matrix(rows, cols);
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                let prod = &a[i][k] * &b[k][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

pub fn normalized_chains(y: &TruncSSet) -> Result<ChainComplex, HomologyError> {
    let maxdim = y.maxdim();
    let mut basis: Vec<Vec<usize>> = Vec::new();
    let mut pos: Vec<Vec<Option<usize>>> = Vec::new();
    for n in 0..=maxdim {
        let nd: Vec<usize> =
            (0..y.cell_count(n)).filter(|&c| !y.is_degenerate(n, c)).collect();
        let mut p = vec![None; y.cell_count(n)];
        for (i, &c) in nd.iter().enumerate() {
            p[c] = Some(i);
        }
        basis.push(nd);
        pos.push(p);
    }
    let mut boundaries: Vec<Mat> = vec![Mat::new()];
    for n in 1..=maxdim {
        let rows = basis[n - 1].len();
        let cols = basis[n].len();
        let mut m = zero_matrix(rows, cols);
        for (j, &c) in basis[n].iter().enumerate() {
            for i in 0..=n {
                let f = y.face(n, i, c);
                if let Some(r) = pos[n - 1][f] {
                    let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    m[r][j] += sign;
                }
            }
        }
        boundaries.push(m);
    }
    // ∂∂ = 0.
    for n in 2..=maxdim {
        let sq = mat_mul(&boundaries[n - 1], &boundaries[n]);
        if sq.iter().any(|row| row.iter().any(|v| !v.is_zero())) {
            return Err(HomologyError::BoundarySquareNonzero(n));
        }
    }
    Ok(ChainComplex { ranks: basis.iter().map(|b| b.len()).collect(), boundaries, basis })
}

/// Smith normal form with transformation certificates: `u · m · v = d`
/// with unimodular `u`, `v` and diagonal invariants `d₁ | d₂ | …`.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub invariants: Vec<BigInt>,
    pub u: Mat,
    pub v: Mat,
    pub d: Mat,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Re-multiplies the certificates; exact equality with the diagonal.
    pub fn verify(&self, m: &Mat) -> bool {
        let umv = mat_mul(&self.u, &mat_mul(m, &self.v));
        if umv != self.d {
            return false;
        }
        // Unimodularity.
        bareiss_det(&self.u).magnitude() == BigInt::one().magnitude()
            && bareiss_det(&self.v).magnitude() == BigInt::one().magnitude()
        // Divisibility chain.
            && self
                .invariants
                .windows(2)
                .all(|w| (&w[1] % &w[0]).is_zero())
    }
}

fn identity_matrix(n: usize) -> Mat {
    let mut m = zero_matrix(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

/// Fraction-free determinant (Bareiss); exact over the integers.
pub fn bareiss_det(m: &Mat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(m.iter().all(|r| r.len() == n));
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

pub fn smith_normal_form(m: &Mat) -> SnfResult {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut a = m.clone();
    let mut u = identity_matrix(rows);
    let mut v = identity_matrix(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // Least-absolute-value pivot from the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if a[i][j].abs() < a[pi][pj].abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            a.swap(pi, t);
            u.swap(pi, t);
        }
        if pj != t {
            for row in &mut a {
                row.swap(pj, t);
            }
            for row in &mut v {
                row.swap(pj, t);
            }
        }
        // Clear row and column t.
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[i][t], &a[t][t]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let sub = &q * &a[t][j];
                        a[i][j] -= sub;
                    }
                    for j in 0..rows {
                        let sub = &q * &u[t][j];
                        u[i][j] -= sub;
                    }
                }
                if !a[i][t].is_zero() {
                    // Remainder strictly smaller in absolute value; promote.
                    a.swap(i, t);
                    u.swap(i, t);
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[t][j], &a[t][t]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let sub = &q * &a[i][t];
                        a[i][j] -= sub;
                    }
                    for i in 0..cols {
                        let sub = &q * &v[i][t];
                        v[i][j] -= sub;
                    }
                }
                if !a[t][j].is_zero() {
                    for row in &mut a {
                        row.swap(j, t);
                    }
                    for row in &mut v {
                        row.swap(j, t);
                    }
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        // Divisibility: fold in any entry the pivot does not divide.
        let mut redo = false;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    for jj in 0..cols {
                        let add = a[i][jj].clone();
                        a[t][jj] += add;
                    }
                    for jj in 0..rows {
                        let add = u[i][jj].clone();
                        u[t][jj] += add;
                    }
                    redo = true;
                    break 'scan;
                }
            }
        }
        if redo {
            continue;
        }
        if a[t][t].is_negative() {
            for j in 0..cols {
                a[t][j] = -a[t][j].clone();
            }
            for j in 0..rows {
                u[t][j] = -u[t][j].clone();
            }
        }
        t += 1;
    }
    let invariants: Vec<BigInt> =
        (0..rows.min(cols)).map(|i| a[i][i].clone()).filter(|d| !d.is_zero()).collect();
    SnfResult { invariants, u, v, d: a }
}

/// Quotient rounded toward the nearest integer, so remainders satisfy
/// `|r| ≤ |b|/2` and the Euclidean steps shrink fast.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    let two_r: BigInt = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// A finitely generated abelian group: free rank plus torsion coefficients
/// in a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// `H_n` of the normalized chains of a truncated simplicial set. Requires
/// boundaries through degree `n+1`, hence truncation at least `n+1`.
pub fn homology(y: &TruncSSet, n: usize) -> Result<HomologyGroup, HomologyError> {
    if n + 1 > y.maxdim() {
        return Err(HomologyError::TruncationTooShallow { needed: n + 1, have: y.maxdim() });
    }
    let complex = normalized_chains(y)?;
    homology_of_complex(&complex, n)
}

pub fn homology_of_complex(
    complex: &ChainComplex,
    n: usize,
) -> Result<HomologyGroup, HomologyError> {
    let maxdim = complex.boundaries.len().saturating_sub(1);
    if n + 1 > maxdim {
        return Err(HomologyError::TruncationTooShallow { needed: n + 1, have: maxdim });
    }
    let rank_n = complex.ranks[n];
    let rank_dn = if n == 0 { 0 } else { smith_normal_form(&complex.boundaries[n]).rank() };
    let next = smith_normal_form(&complex.boundaries[n + 1]);
    let free_rank = rank_n - rank_dn - next.rank();
    let torsion: Vec<BigInt> =
        next.invariants.iter().filter(|d| **d > BigInt::one()).cloned().collect();
    Ok(HomologyGroup { free_rank, torsion })
}

/// Number of connected components via union-find on the 1-skeleton; the
/// independent oracle for the free rank of `H₀`.
pub fn pi0_count(y: &TruncSSet) -> usize {
    let n0 = y.cell_count(0);
    let mut parent: Vec<usize> = (0..n0).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    if y.maxdim() >= 1 {
        for e in 0..y.cell_count(1) {
            let a = y.face(1, 1, e);
            let b = y.face(1, 0, e);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let mut roots: Vec<usize> = (0..n0).map(|x| find(&mut parent, x)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}
