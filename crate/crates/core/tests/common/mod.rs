//! Helpers and independent oracles shared by the integration tests.
#![allow(dead_code)]

use utgrade::groups::{AbelianGroup, Group, GroupElement};
use utgrade::scalars::Field;
use utgrade::triangular::{ProductKind, TriMatrix};
use utgrade::Grading;

pub fn el(c: &[i64]) -> GroupElement {
    GroupElement(c.to_vec())
}

pub fn cyclic(d: u64) -> Group {
    Group::Abelian(AbelianGroup::cyclic(d))
}

pub fn klein() -> Group {
    Group::Abelian(AbelianGroup::new(0, vec![2, 2]).unwrap())
}

pub fn elementary(n: usize, group: Group, eta: &[&[i64]], kind: ProductKind) -> Grading {
    let eta: Vec<GroupElement> = eta.iter().map(|c| el(c)).collect();
    Grading::elementary_from_eta(n, group, &eta, kind).unwrap()
}

/// Dense `n x n` matrices with entries reduced mod `p`.
pub type Dense = Vec<Vec<i64>>;

pub fn dense<F: Field>(a: &TriMatrix<F>, p: i64) -> Dense {
    let n = a.n();
    (0..n)
        .map(|i| (0..n).map(|j| if j < i { 0 } else { a.get(i, j).to_string().parse::<i64>().unwrap().rem_euclid(p) }).collect())
        .collect()
}

pub fn dense_mul(a: &Dense, b: &Dense, p: i64) -> Dense {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum::<i64>().rem_euclid(p)).collect()).collect()
}

fn inv_mod(x: i64, p: i64) -> i64 {
    (1..p).find(|y| (x * y).rem_euclid(p) == 1).expect("unit")
}

/// Gauss-Jordan inverse of a full square matrix mod `p`.
pub fn dense_inverse(a: &Dense, p: i64) -> Option<Dense> {
    let n = a.len();
    let mut m: Vec<Vec<i64>> = a.iter().enumerate().map(|(i, r)| {
        let mut row = r.clone();
        row.extend((0..n).map(|j| (i == j) as i64));
        row
    }).collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| m[r][c] % p != 0)?;
        m.swap(c, piv);
        let inv = inv_mod(m[c][c], p);
        for x in m[c].iter_mut() {
            *x = (*x * inv).rem_euclid(p);
        }
        for r in 0..n {
            if r != c && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..2 * n {
                    m[r][k] = (m[r][k] - f * m[c][k]).rem_euclid(p);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn dense_unit(n: usize, i: usize, j: usize) -> Dense {
    let mut m = vec![vec![0; n]; n];
    m[i][j] = 1;
    m
}

/// Number of invertible upper triangular `n x n` matrices over `GF(p)`.
pub fn invertible_count(n: u32, p: u64) -> u64 {
    (p - 1).pow(n) * p.pow(n * (n - 1) / 2)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect()).collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors by determinantal divisors: `d_k / d_{k-1}` where `d_k` is
/// the gcd of all `k x k` minors. Trailing zeros for rank deficiency.
pub fn snf_oracle(m: &[Vec<i64>]) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=rows.min(cols) {
        let mut d = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                d = gcd(d, det(&minor));
            }
        }
        if d == 0 {
            out.extend(std::iter::repeat_n(0, rows.min(cols) - k + 1));
            return out;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}
