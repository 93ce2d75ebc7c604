//! Grading groups.
//!
//! Finitely generated abelian groups are kept in invariant-factor normal form
//! `Z^r x Z_{d_1} x ... x Z_{d_k}` with `d_1 | d_2 | ... | d_k`, computed by an
//! integer Smith normal form. Finite non-abelian groups are given by a
//! validated Cayley table; they are only admitted in the associative setting.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("element {element} does not belong to {group}")]
    NotAMember { element: GroupElement, group: String },
    #[error("invariant factors {0:?} are not a divisibility chain of integers >= 2")]
    NotNormalForm(Vec<u64>),
    #[error("invalid Cayley table: {0}")]
    InvalidCayleyTable(String),
    #[error("element {element} has order {order}, expected 2")]
    NotOfOrderTwo { element: GroupElement, order: Order },
    #[error("operation requires an abelian group")]
    NotAbelian,
    #[error("subset must be nonempty")]
    EmptySubset,
}

/// Element of a grading group.
///
/// For abelian groups the coordinates are the free part followed by the
/// torsion residues, one per invariant factor. For Cayley-table groups the
/// single coordinate is the row index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<i64>);

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged integer matrix");
        IntMatrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Fraction-free (Bareiss) determinant of a square matrix.
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut m: Vec<Vec<i128>> = self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&i| m[i][k] != 0) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        sign * m[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: i64) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += c * v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: i64) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += c * v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `D = U * M * V` with `U`, `V` unimodular and `D` diagonal in
/// successive-divisibility order (zeros last, nonzero entries positive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)]).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    for k in 0..r.min(c) {
        loop {
            // smallest nonzero pivot in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in k..r {
                for j in k..c {
                    let x = d[(i, j)];
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { d, u, v };
            };
            if pi != k {
                d.swap_rows(pi, k);
                u.swap_rows(pi, k);
            }
            if pj != k {
                d.swap_cols(pj, k);
                v.swap_cols(pj, k);
            }

            let p = d[(k, k)];
            let mut dirty = false;
            for i in k + 1..r {
                let q = d[(i, k)] / p;
                if q != 0 {
                    d.add_row(i, k, -q);
                    u.add_row(i, k, -q);
                }
                dirty |= d[(i, k)] != 0;
            }
            for j in k + 1..c {
                let q = d[(k, j)] / p;
                if q != 0 {
                    d.add_col(j, k, -q);
                    v.add_col(j, k, -q);
                }
                dirty |= d[(k, j)] != 0;
            }
            if dirty {
                continue;
            }

            let offender = (k + 1..r).find(|&i| (k + 1..c).any(|j| d[(i, j)] % p != 0));
            if let Some(i) = offender {
                d.add_row(k, i, 1);
                u.add_row(k, i, 1);
                continue;
            }

            if p < 0 {
                for j in 0..c {
                    d[(k, j)] = -d[(k, j)];
                }
                for j in 0..r {
                    u[(k, j)] = -u[(k, j)];
                }
            }
            break;
        }
    }
    SmithForm { d, u, v }
}

/// Map from coordinates on a presentation's generators to normal-form
/// coordinates, read off the right transform of the Smith form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationMap {
    num_generators: usize,
    /// (column of V, modulus; 0 = free), free columns first.
    columns: Vec<(Vec<i64>, u64)>,
}

impl PresentationMap {
    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn apply(&self, x: &[i64]) -> GroupElement {
        assert_eq!(x.len(), self.num_generators, "coordinate vector has wrong length");
        GroupElement(
            self.columns
                .iter()
                .map(|(col, modulus)| {
                    let y: i64 = col.iter().zip(x).map(|(a, b)| a * b).sum();
                    if *modulus == 0 {
                        y
                    } else {
                        y.rem_euclid(*modulus as i64)
                    }
                })
                .collect(),
        )
    }

    /// Image of the `i`-th generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut x = vec![0; self.num_generators];
        x[i] = 1;
        self.apply(&x)
    }
}

/// `Z^free_rank x Z_{d_1} x ... x Z_{d_k}` in invariant-factor form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(rename = "torsion")]
    invariant_factors: Vec<u64>,
}

impl AbelianGroup {
    /// Requires the factors to already be a divisibility chain of integers >= 2.
    pub fn new(free_rank: usize, invariant_factors: Vec<u64>) -> Result<Self, GroupError> {
        let ok = invariant_factors.iter().all(|&d| d >= 2)
            && invariant_factors.windows(2).all(|w| w[1] % w[0] == 0);
        if !ok {
            return Err(GroupError::NotNormalForm(invariant_factors));
        }
        Ok(AbelianGroup { free_rank, invariant_factors })
    }

    pub fn trivial() -> Self {
        AbelianGroup { free_rank: 0, invariant_factors: vec![] }
    }

    pub fn cyclic(d: u64) -> Self {
        match d {
            0 => AbelianGroup { free_rank: 1, invariant_factors: vec![] },
            1 => Self::trivial(),
            d => AbelianGroup { free_rank: 0, invariant_factors: vec![d] },
        }
    }

    /// Normal form of `Z^free_rank x Z_{t_1} x ... x Z_{t_m}` for arbitrary
    /// moduli, together with the map from the given coordinates.
    pub fn normalize(free_rank: usize, torsion: &[u64]) -> (Self, PresentationMap) {
        let k = free_rank + torsion.len();
        let relations: Vec<Vec<i64>> = torsion
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let mut row = vec![0; k];
                row[free_rank + i] = t as i64;
                row
            })
            .collect();
        Self::from_relations(k, &relations)
    }

    /// The group `Z^num_generators / <relations>`.
    pub fn from_relations(num_generators: usize, relations: &[Vec<i64>]) -> (Self, PresentationMap) {
        let snf = if relations.is_empty() {
            SmithForm {
                d: IntMatrix::zeros(0, num_generators),
                u: IntMatrix::identity(0),
                v: IntMatrix::identity(num_generators),
            }
        } else {
            smith_normal_form(&IntMatrix::from_rows(relations))
        };
        let diag = snf.diagonal();
        let modulus = |l: usize| diag.get(l).copied().unwrap_or(0).unsigned_abs();
        let column = |l: usize| (0..num_generators).map(|g| snf.v[(g, l)]).collect::<Vec<_>>();

        let mut columns = Vec::new();
        let mut factors = Vec::new();
        for l in 0..num_generators {
            if modulus(l) == 0 {
                columns.push((column(l), 0));
            }
        }
        let free_rank = columns.len();
        for l in 0..num_generators {
            let d = modulus(l);
            if d >= 2 {
                columns.push((column(l), d));
                factors.push(d);
            }
        }
        (
            AbelianGroup { free_rank, invariant_factors: factors },
            PresentationMap { num_generators, columns },
        )
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn rank(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn cardinality(&self) -> Option<u64> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Builds an element, reducing torsion coordinates.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        if coords.len() != self.rank() {
            return Err(self.not_member(GroupElement(coords.to_vec())));
        }
        Ok(self.reduce(coords.to_vec()))
    }

    fn reduce(&self, mut c: Vec<i64>) -> GroupElement {
        for (x, d) in c[self.free_rank..].iter_mut().zip(&self.invariant_factors) {
            *x = x.rem_euclid(*d as i64);
        }
        GroupElement(c)
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.0.len() == self.rank()
            && x.0[self.free_rank..]
                .iter()
                .zip(&self.invariant_factors)
                .all(|(c, d)| *c >= 0 && (*c as u64) < *d)
    }

    fn check(&self, x: &GroupElement) -> Result<(), GroupError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(self.not_member(x.clone()))
        }
    }

    fn not_member(&self, element: GroupElement) -> GroupError {
        GroupError::NotAMember { element, group: self.to_string() }
    }

    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.reduce(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect()))
    }

    pub fn inv(&self, x: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        Ok(self.reduce(x.0.iter().map(|a| -a).collect()))
    }

    pub fn pow(&self, x: &GroupElement, e: i64) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        Ok(self.reduce(x.0.iter().map(|a| a * e).collect()))
    }

    pub fn order(&self, x: &GroupElement) -> Result<Order, GroupError> {
        self.check(x)?;
        if x.0[..self.free_rank].iter().any(|&c| c != 0) {
            return Ok(Order::Infinite);
        }
        let ord = x.0[self.free_rank..]
            .iter()
            .zip(&self.invariant_factors)
            .fold(1u64, |acc, (&c, &d)| acc.lcm(&(d / (c as u64).gcd(&d))));
        Ok(Order::Finite(ord))
    }

    /// All elements in coordinate order, if finite.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![Vec::new()];
        for &d in &self.invariant_factors {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (0..d as i64).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        Some(out.into_iter().map(GroupElement).collect())
    }

    /// `G / <h>` for an element `h` of order 2, with the projection.
    pub fn quotient_by(&self, h: &GroupElement) -> Result<(AbelianGroup, PresentationMap), GroupError> {
        let order = self.order(h)?;
        if order != Order::Finite(2) {
            return Err(GroupError::NotOfOrderTwo { element: h.clone(), order });
        }
        let k = self.rank();
        let mut relations: Vec<Vec<i64>> = self
            .invariant_factors
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut row = vec![0; k];
                row[self.free_rank + i] = d as i64;
                row
            })
            .collect();
        relations.push(h.0.clone());
        Ok(AbelianGroup::from_relations(k, &relations))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Finite group given by a validated multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CayleyGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl CayleyGroup {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let bad = |msg: String| Err(GroupError::InvalidCayleyTable(msg));
        let m = table.len();
        if m == 0 {
            return bad("empty table".into());
        }
        if table.iter().any(|r| r.len() != m) {
            return bad("table is not square".into());
        }
        if table.iter().flatten().any(|&x| x >= m) {
            return bad("entry out of range".into());
        }
        for i in 0..m {
            let row: BTreeSet<_> = table[i].iter().collect();
            let col: BTreeSet<_> = (0..m).map(|r| &table[r][i]).collect();
            if row.len() != m || col.len() != m {
                return bad(format!("not a Latin square at index {i}"));
            }
        }
        let Some(identity) = (0..m).find(|&e| (0..m).all(|x| table[e][x] == x && table[x][e] == x)) else {
            return bad("no identity element".into());
        };
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!("not associative: ({a}*{b})*{c} != {a}*({b}*{c})"));
                    }
                }
            }
        }
        let mut inverses = vec![0; m];
        for (a, inv) in inverses.iter_mut().enumerate() {
            match (0..m).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => *inv = b,
                None => return bad(format!("element {a} has no inverse")),
            }
        }
        Ok(CayleyGroup { table, identity, inverses })
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_commutative(&self) -> bool {
        let m = self.size();
        (0..m).all(|a| (0..m).all(|b| self.table[a][b] == self.table[b][a]))
    }

    fn index(&self, x: &GroupElement) -> Result<usize, GroupError> {
        match x.0.as_slice() {
            [i] if *i >= 0 && (*i as usize) < self.size() => Ok(*i as usize),
            _ => Err(GroupError::NotAMember { element: x.clone(), group: format!("Cayley group of order {}", self.size()) }),
        }
    }
}

/// A grading group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Group {
    Abelian(AbelianGroup),
    Cayley(CayleyGroup),
}

impl Group {
    pub fn identity(&self) -> GroupElement {
        match self {
            Group::Abelian(a) => a.identity(),
            Group::Cayley(c) => GroupElement(vec![c.identity as i64]),
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        match self {
            Group::Abelian(a) => a.contains(x),
            Group::Cayley(c) => c.index(x).is_ok(),
        }
    }

    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, GroupError> {
        match self {
            Group::Abelian(a) => a.mul(x, y),
            Group::Cayley(c) => Ok(GroupElement(vec![c.table[c.index(x)?][c.index(y)?] as i64])),
        }
    }

    pub fn inv(&self, x: &GroupElement) -> Result<GroupElement, GroupError> {
        match self {
            Group::Abelian(a) => a.inv(x),
            Group::Cayley(c) => Ok(GroupElement(vec![c.inverses[c.index(x)?] as i64])),
        }
    }

    pub fn order(&self, x: &GroupElement) -> Result<Order, GroupError> {
        match self {
            Group::Abelian(a) => a.order(x),
            Group::Cayley(c) => {
                let i = c.index(x)?;
                let mut cur = i;
                let mut k = 1;
                while cur != c.identity {
                    cur = c.table[cur][i];
                    k += 1;
                }
                Ok(Order::Finite(k))
            }
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            Group::Abelian(_) => true,
            Group::Cayley(c) => c.is_commutative(),
        }
    }

    pub fn as_abelian(&self) -> Option<&AbelianGroup> {
        match self {
            Group::Abelian(a) => Some(a),
            Group::Cayley(_) => None,
        }
    }

    /// True iff all pairwise commutators of the subset are trivial.
    pub fn is_commutative_subset(&self, elems: &[GroupElement]) -> Result<bool, GroupError> {
        if elems.is_empty() {
            return Err(GroupError::EmptySubset);
        }
        for x in elems {
            for y in elems {
                if self.mul(x, y)? != self.mul(y, x)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Product of a sequence, left to right; the identity for an empty one.
    pub fn product<'a>(&self, elems: impl IntoIterator<Item = &'a GroupElement>) -> Result<GroupElement, GroupError> {
        elems.into_iter().try_fold(self.identity(), |acc, x| self.mul(&acc, x))
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Abelian(a) => a.fmt(f),
            Group::Cayley(c) => write!(f, "Cayley group of order {}", c.size()),
        }
    }
}

/// The symmetric group S_3 as a Cayley table: 0 = id, 1 = (12), 2 = (13),
/// 3 = (23), 4 = (123), 5 = (132).
pub fn s3_table() -> Vec<Vec<usize>> {
    // composition (x*y)(k) = x(y(k)) on permutations of {0,1,2}
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    (0..6)
        .map(|a| (0..6).map(|b| idx([perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]])).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(c: &[i64]) -> GroupElement {
        GroupElement(c.to_vec())
    }

    #[test]
    fn abelian_arithmetic() {
        let g = AbelianGroup::new(0, vec![2, 2]).unwrap();
        assert_eq!(g.mul(&el(&[1, 0]), &el(&[0, 1])).unwrap(), el(&[1, 1]));
        assert_eq!(g.inv(&g.identity()).unwrap(), g.identity());
        let z4 = AbelianGroup::cyclic(4);
        assert_eq!(z4.order(&el(&[1])).unwrap(), Order::Finite(4));
        assert_eq!(z4.order(&el(&[2])).unwrap(), Order::Finite(2));
        assert_eq!(z4.order(&z4.identity()).unwrap(), Order::Finite(1));
        let z = AbelianGroup::cyclic(0);
        assert_eq!(z.order(&el(&[3])).unwrap(), Order::Infinite);
        assert_eq!(z.inv(&el(&[3])).unwrap(), el(&[-3]));
    }

    #[test]
    fn mismatched_parent_is_rejected() {
        let g = AbelianGroup::new(0, vec![2, 2]).unwrap();
        assert!(matches!(g.mul(&el(&[1]), &el(&[1, 0])), Err(GroupError::NotAMember { .. })));
        assert!(g.mul(&el(&[2, 0]), &el(&[1, 0])).is_err());
        let s3 = Group::Cayley(CayleyGroup::new(s3_table()).unwrap());
        assert!(s3.mul(&el(&[6]), &el(&[0])).is_err());
    }

    #[test]
    fn normal_form_validation() {
        assert!(AbelianGroup::new(0, vec![2, 3]).is_err());
        assert!(AbelianGroup::new(0, vec![1]).is_err());
        assert!(AbelianGroup::new(1, vec![2, 4]).is_ok());
        let (g, map) = AbelianGroup::normalize(0, &[2, 3]);
        assert_eq!(g.invariant_factors(), &[6]);
        assert_eq!(g.order(&map.generator(0)).unwrap(), Order::Finite(2));
        assert_eq!(g.order(&map.generator(1)).unwrap(), Order::Finite(3));
        let (g, map) = AbelianGroup::normalize(0, &[2, 2]);
        assert_eq!(g.invariant_factors(), &[2, 2]);
        assert_eq!(map.apply(&[1, 0]), el(&[1, 0]));
        let (g, _) = AbelianGroup::normalize(1, &[1, 4, 6]);
        assert_eq!((g.free_rank, g.invariant_factors()), (1, &[2, 12][..]));
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(s.d, IntMatrix::from_rows(&[vec![2]]));
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), vec![1, 6]);
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![0]]));
        assert_eq!(s.d, IntMatrix::from_rows(&[vec![0]]));
    }

    #[test]
    fn commutative_subsets() {
        let z22 = Group::Abelian(AbelianGroup::new(0, vec![2, 2]).unwrap());
        assert!(z22.is_commutative_subset(&[el(&[1, 0]), el(&[0, 1])]).unwrap());
        let s3 = Group::Cayley(CayleyGroup::new(s3_table()).unwrap());
        // (12)(13) vs (13)(12)
        assert_ne!(s3.mul(&el(&[1]), &el(&[2])).unwrap(), s3.mul(&el(&[2]), &el(&[1])).unwrap());
        assert!(!s3.is_commutative_subset(&[el(&[1]), el(&[2])]).unwrap());
        assert!(s3.is_commutative_subset(&[el(&[0]), el(&[4]), el(&[5])]).unwrap());
        assert_eq!(s3.is_commutative_subset(&[]), Err(GroupError::EmptySubset));
        assert!(!s3.is_abelian());
        assert_eq!(s3.order(&el(&[4])).unwrap(), Order::Finite(3));
        assert_eq!(s3.inv(&el(&[4])).unwrap(), el(&[5]));
    }

    #[test]
    fn cayley_rejects_non_associative_loop() {
        // smallest non-associative loop: Latin square with identity 0
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match CayleyGroup::new(loop5) {
            Err(GroupError::InvalidCayleyTable(msg)) => assert!(msg.contains("associative"), "{msg}"),
            other => panic!("expected rejection, got {other:?}"),
        }
        assert!(CayleyGroup::new(vec![vec![0, 1], vec![0, 1]]).is_err());
        // x*y = -x-y mod 3 is a Latin square without identity
        assert!(CayleyGroup::new(vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]).is_err());
    }

    #[test]
    fn quotients() {
        let z22 = AbelianGroup::new(0, vec![2, 2]).unwrap();
        let (q, proj) = z22.quotient_by(&el(&[1, 0])).unwrap();
        assert_eq!(q, AbelianGroup::cyclic(2));
        assert_eq!(proj.apply(&[1, 0]), q.identity());
        assert_ne!(proj.apply(&[0, 1]), q.identity());

        let z4 = AbelianGroup::cyclic(4);
        let (q, proj) = z4.quotient_by(&el(&[2])).unwrap();
        assert_eq!(q, AbelianGroup::cyclic(2));
        assert_eq!(proj.apply(&[2]), q.identity());
        assert!(matches!(z4.quotient_by(&el(&[1])), Err(GroupError::NotOfOrderTwo { .. })));

        let z2 = AbelianGroup::cyclic(2);
        let (q, _) = z2.quotient_by(&el(&[1])).unwrap();
        assert!(q.is_trivial());
    }

    #[test]
    fn display() {
        assert_eq!(AbelianGroup::new(1, vec![2, 2]).unwrap().to_string(), "Z x Z_2 x Z_2");
        assert_eq!(AbelianGroup::trivial().to_string(), "1");
        assert_eq!(el(&[1, 0]).to_string(), "(1,0)");
    }
}
