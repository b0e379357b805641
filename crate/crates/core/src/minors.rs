//! Generic matrices, minors, and the row/column symmetry group.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Exponent, Field, MonomialOrder, Polynomial, RingContext};
use crate::rational::Rat;

/// `K[X_{m x n}]` with variables `X_ij` in row-major order.
#[derive(Debug, Clone)]
pub struct MatrixRing {
    m: usize,
    n: usize,
    ring: Arc<RingContext>,
}

impl MatrixRing {
    pub fn new(m: usize, n: usize) -> Result<MatrixRing> {
        Self::with_field(m, n, Field::Rational)
    }

    pub fn with_field(m: usize, n: usize, field: Field) -> Result<MatrixRing> {
        if m == 0 || n == 0 {
            return Err(Error::OutOfRange(format!("matrix shape {m}x{n}")));
        }
        let wide = m > 9 || n > 9;
        let mut names = Vec::with_capacity(m * n);
        for i in 1..=m {
            for j in 1..=n {
                names.push(if wide { format!("X{i}_{j}") } else { format!("X{i}{j}") });
            }
        }
        Ok(MatrixRing { m, n, ring: RingContext::new(names, field)? })
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    /// Index of `X_{i+1, j+1}`.
    pub fn var(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    pub fn variable(&self, i: usize, j: usize) -> Polynomial {
        Polynomial::variable(&self.ring, self.var(i, j))
    }

    /// Drops every term that uses a variable outside `pattern`.
    pub fn restrict_to_pattern(&self, p: &Polynomial, pattern: &Pattern) -> Polynomial {
        let terms = p
            .terms()
            .iter()
            .filter(|(e, _)| e.support().all(|v| pattern.get(v / self.n, v % self.n)))
            .cloned()
            .collect();
        Polynomial::from_unsorted(&self.ring, terms)
    }
}

/// Boolean `m x n` support pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    pub m: usize,
    pub n: usize,
    pub cells: Vec<bool>,
}

impl Pattern {
    /// Rows of `*` (allowed) and `0` (forbidden).
    pub fn parse(rows: &[&str]) -> Result<Pattern> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.split_whitespace().count());
        let mut cells = Vec::with_capacity(m * n);
        for r in rows {
            let row: Vec<&str> = r.split_whitespace().collect();
            if row.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: row.len() });
            }
            for c in row {
                cells.push(match c {
                    "*" => true,
                    "0" => false,
                    other => return Err(Error::OutOfRange(format!("pattern cell `{other}`"))),
                });
            }
        }
        Ok(Pattern { m, n, cells })
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n + j]
    }

    pub fn full(m: usize, n: usize) -> Pattern {
        Pattern { m, n, cells: vec![true; m * n] }
    }
}

/// A `t`-minor; `rows` and `cols` are sorted, 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub poly: Polynomial,
}

impl Minor {
    /// `[a,b,c]` (1-based columns) for maximal minors, `[rows|cols]` otherwise.
    pub fn bracket(&self, m: usize) -> String {
        let list = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
        if self.rows.len() == m {
            format!("[{}]", list(&self.cols))
        } else {
            format!("[{}|{}]", list(&self.rows), list(&self.cols))
        }
    }
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

fn sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Leibniz expansion of the determinant of the submatrix on `rows` x `cols`,
/// taken in the given order (so unsorted columns give a signed bracket).
pub fn minor_polynomial(mr: &MatrixRing, rows: &[usize], cols: &[usize]) -> Result<Polynomial> {
    if rows.len() != cols.len() {
        return Err(Error::LengthMismatch { expected: rows.len(), got: cols.len() });
    }
    if rows.iter().any(|&i| i >= mr.m) || cols.iter().any(|&j| j >= mr.n) {
        return Err(Error::OutOfRange("minor index outside the matrix".into()));
    }
    let nv = mr.ring.nvars();
    let mut terms = Vec::new();
    for p in permutations(rows.len()) {
        let mut e = Exponent::zero(nv);
        for (k, &r) in rows.iter().enumerate() {
            let v = mr.var(r, cols[p[k]]);
            e.set(v, e.get(v) + 1);
        }
        terms.push((e, Rat::from_int(sign(&p))));
    }
    Ok(Polynomial::from_unsorted(&mr.ring, terms))
}

/// `[c_1,...,c_m]` with 1-based column labels in the given order.
pub fn bracket(mr: &MatrixRing, cols: &[usize]) -> Result<Polynomial> {
    if cols.iter().any(|&c| c == 0) {
        return Err(Error::OutOfRange("bracket columns are 1-based".into()));
    }
    let zero_based: Vec<usize> = cols.iter().map(|c| c - 1).collect();
    minor_polynomial(mr, &(0..mr.m).collect::<Vec<_>>(), &zero_based)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All `t`-minors in lexicographic `(rows, cols)` order.
pub fn minors(t: usize, mr: &MatrixRing) -> Result<Vec<Minor>> {
    if t == 0 || t > mr.m.min(mr.n) {
        return Err(Error::OutOfRange(format!("t = {t} for a {}x{} matrix", mr.m, mr.n)));
    }
    let mut out = Vec::new();
    for rows in combinations(mr.m, t) {
        for cols in combinations(mr.n, t) {
            let poly = minor_polynomial(mr, &rows, &cols)?;
            out.push(Minor { rows: rows.clone(), cols, poly });
        }
    }
    Ok(out)
}

pub fn minor_polynomials(t: usize, mr: &MatrixRing) -> Result<Vec<Polynomial>> {
    Ok(minors(t, mr)?.into_iter().map(|m| m.poly).collect())
}

/// Lex with `X_11 > X_12 > ... > X_mn`; every minor's leading term is its diagonal.
pub fn diagonal_order(mr: &MatrixRing) -> MonomialOrder {
    MonomialOrder::lex(mr.m * mr.n)
}

/// Lex with `X_11 > X_22 > ... > X_mm` followed by the other variables row-major.
pub fn submax_lex_order(mr: &MatrixRing) -> Result<MonomialOrder> {
    if mr.m != mr.n {
        return Err(Error::OutOfRange("submaximal order needs a square matrix".into()));
    }
    let mut perm: Vec<usize> = (0..mr.m).map(|i| mr.var(i, i)).collect();
    perm.extend((0..mr.m * mr.n).filter(|v| v / mr.n != v % mr.n));
    MonomialOrder::lex_with(perm)
}

/// `Delta * X_ij` for all cells of a square matrix.
pub fn delta_multiples(mr: &MatrixRing) -> Result<Vec<Polynomial>> {
    if mr.m != mr.n {
        return Err(Error::OutOfRange("delta multiples need a square matrix".into()));
    }
    let all: Vec<usize> = (0..mr.m).collect();
    let delta = minor_polynomial(mr, &all, &all)?;
    Ok((0..mr.m).flat_map(|i| (0..mr.n).map(move |j| (i, j))).map(|(i, j)| &mr.variable(i, j) * &delta).collect())
}

/// Products of one minor of each size in `shape`, with repeated sizes taken
/// as multisets of minors.
pub fn shape_products(mr: &MatrixRing, shape: &[usize]) -> Result<Vec<Polynomial>> {
    let mut sizes = shape.to_vec();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let mut acc: Vec<(Polynomial, Option<(usize, usize)>)> = vec![(Polynomial::one(&mr.ring), None)];
    for &t in &sizes {
        let ms = minor_polynomials(t, mr)?;
        let mut next = Vec::new();
        for (p, last) in &acc {
            let start = match last {
                Some((lt, li)) if *lt == t => *li,
                _ => 0,
            };
            for (i, q) in ms.iter().enumerate().skip(start) {
                next.push((p * q, Some((t, i))));
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().map(|(p, _)| p).collect())
}

/// `F = [1,2,3][4,5,6] - [1,2,4][3,5,6]` relabelled by `labels` (1-based).
pub fn of_element(mr: &MatrixRing, labels: [usize; 6]) -> Result<Polynomial> {
    let [a, b, c, d, e, f] = labels;
    let p = &bracket(mr, &[a, b, c])? * &bracket(mr, &[d, e, f])?;
    let q = &bracket(mr, &[a, b, d])? * &bracket(mr, &[c, e, f])?;
    Ok(&p - &q)
}

/// Orbit of `F` under column permutations of `X_{3 x n}`, up to sign.
pub fn of_orbit(n: usize) -> Result<Vec<Polynomial>> {
    if n < 6 {
        return Err(Error::OutOfRange(format!("the orbit needs n >= 6, got {n}")));
    }
    let mr = MatrixRing::new(3, n)?;
    let mut seen = std::collections::BTreeMap::new();
    for cols in combinations(n, 6) {
        for p in permutations(6) {
            let labels: [usize; 6] = std::array::from_fn(|k| cols[p[k]] + 1);
            let g = of_element(&mr, labels)?.normalize_sign();
            let key: Vec<(Exponent, Rat)> = g.terms().to_vec();
            seen.entry(key).or_insert(g);
        }
    }
    Ok(seen.into_values().collect())
}

/// `m x n` matrix of naturals, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentMatrix {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<u32>,
}

impl ExponentMatrix {
    pub fn new(m: usize, n: usize, entries: Vec<u32>) -> Result<ExponentMatrix> {
        if entries.len() != m * n {
            return Err(Error::LengthMismatch { expected: m * n, got: entries.len() });
        }
        Ok(ExponentMatrix { m, n, entries })
    }

    pub fn from_rows(rows: &[&[u32]]) -> ExponentMatrix {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == n), "ragged matrix");
        ExponentMatrix { m, n, entries: rows.concat() }
    }

    pub fn from_exponent(e: &Exponent, m: usize, n: usize) -> Result<ExponentMatrix> {
        Self::new(m, n, e.iter().map(u32::from).collect())
    }

    pub fn to_exponent(&self) -> Exponent {
        self.entries.iter().map(|&x| x as u16).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn row_sums(&self) -> Vec<u32> {
        (0..self.m).map(|i| (0..self.n).map(|j| self.get(i, j)).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u32> {
        (0..self.n).map(|j| (0..self.m).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn is_full_support(&self) -> bool {
        self.entries.iter().all(|&x| x > 0)
    }

    pub fn all_even(&self) -> bool {
        self.entries.iter().all(|&x| x % 2 == 0)
    }

    pub fn count(&self, value: u32) -> usize {
        self.entries.iter().filter(|&&x| x == value).count()
    }

    /// Column submatrix on the given 0-based columns.
    pub fn columns(&self, cols: &[usize]) -> ExponentMatrix {
        let mut entries = Vec::with_capacity(self.m * cols.len());
        for i in 0..self.m {
            for &j in cols {
                entries.push(self.get(i, j));
            }
        }
        ExponentMatrix { m: self.m, n: cols.len(), entries }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.m {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<ExponentMatrix> {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for (col, cell) in line.split(',').enumerate() {
                row.push(cell.trim().parse().map_err(|_| Error::Parse {
                    line: line_no + 1,
                    column: col + 1,
                    message: format!("not a natural number: `{}`", cell.trim()),
                })?);
            }
            rows.push(row);
        }
        let n = rows.first().map_or(0, |r| r.len());
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch { expected: n, got: r.len() });
        }
        Self::new(rows.len(), n, rows.concat())
    }

    /// One line, rows separated by `;`.
    pub fn compact(&self) -> String {
        (0..self.m)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m {
            let row: Vec<String> = (0..self.n).map(|j| format!("{:>3}", self.get(i, j))).collect();
            writeln!(f, "{}", row.join(""))?;
        }
        Ok(())
    }
}

/// `Q_m = ((m-1)^2 - 1) I_m + E_m`.
pub fn q_matrix(m: usize) -> Result<ExponentMatrix> {
    if m < 2 {
        return Err(Error::OutOfRange("Q_m needs m >= 2".into()));
    }
    let d = ((m - 1) * (m - 1) - 1) as u32;
    let entries = (0..m * m).map(|k| if k / m == k % m { d + 1 } else { 1 }).collect();
    ExponentMatrix::new(m, m, entries)
}

/// `B_{m,n}` (products `X_{1 j_1} ... X_{m j_m}` with `j_1 + ... + j_m <= n`)
/// and its algebraically independent subset `B^0_{m,n}`.
pub fn b_sets(m: usize, n: usize) -> Result<(Vec<Exponent>, Vec<Exponent>)> {
    if m == 0 || m > n {
        return Err(Error::OutOfRange(format!("B sets need 1 <= m <= n, got {m}, {n}")));
    }
    let mr = MatrixRing::new(m, n)?;
    let nv = m * n;
    let mut b = Vec::new();
    let mut js = vec![1usize; m];
    loop {
        if js.iter().sum::<usize>() <= n {
            let mut e = Exponent::zero(nv);
            for (i, &j) in js.iter().enumerate() {
                e.set(mr.var(i, j - 1), 1);
            }
            b.push(e);
        }
        let mut k = m;
        loop {
            if k == 0 {
                b.sort();
                let b0 = b0_set(&mr);
                return Ok((b, b0));
            }
            k -= 1;
            if js[k] < n {
                js[k] += 1;
                break;
            }
            js[k] = 1;
        }
    }
}

fn b0_set(mr: &MatrixRing) -> Vec<Exponent> {
    let (m, n) = (mr.m, mr.n);
    let mut first = Exponent::zero(m * n);
    for k in 0..m {
        first.set(mr.var(k, 0), 1);
    }
    let mut out = vec![first.clone()];
    for i in 0..m {
        for j in 1..=n - m {
            let mut e = first.clone();
            e.set(mr.var(i, 0), 0);
            e.set(mr.var(i, j), 1);
            out.push(e);
        }
    }
    out
}

/// Element of `G_{m x n}`: `E -> P(sigma E tau)` with optional transposition `P`.
/// Entry `(i, j)` moves to `(rows[i], cols[j])`, then is transposed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub transpose: bool,
}

impl GroupElement {
    pub fn identity(m: usize, n: usize) -> GroupElement {
        GroupElement { rows: (0..m).collect(), cols: (0..n).collect(), transpose: false }
    }

    /// Image position of cell `(i, j)`.
    pub fn position(&self, i: usize, j: usize) -> (usize, usize) {
        let (r, c) = (self.rows[i], self.cols[j]);
        if self.transpose {
            (c, r)
        } else {
            (r, c)
        }
    }

    pub fn act(&self, e: &ExponentMatrix) -> Result<ExponentMatrix> {
        if self.rows.len() != e.m || self.cols.len() != e.n {
            return Err(Error::LengthMismatch { expected: self.rows.len() * self.cols.len(), got: e.entries.len() });
        }
        if self.transpose && e.m != e.n {
            return Err(Error::OutOfRange("transposition of a non-square matrix".into()));
        }
        Ok(self.act_unchecked(e))
    }

    fn act_unchecked(&self, e: &ExponentMatrix) -> ExponentMatrix {
        let mut out = vec![0; e.entries.len()];
        for i in 0..e.m {
            for j in 0..e.n {
                let (r, c) = self.position(i, j);
                out[r * e.n + c] = e.entries[i * e.n + j];
            }
        }
        ExponentMatrix { m: e.m, n: e.n, entries: out }
    }

    /// `self * other`, acting as `other` first.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let (m, n) = (other.rows.len(), other.cols.len());
        let mut rows = vec![0; m];
        let mut cols = vec![0; n];
        for i in 0..m {
            rows[i] = if other.transpose { self.cols[other.rows[i]] } else { self.rows[other.rows[i]] };
        }
        for j in 0..n {
            cols[j] = if other.transpose { self.rows[other.cols[j]] } else { self.cols[other.cols[j]] };
        }
        GroupElement { rows, cols, transpose: self.transpose ^ other.transpose }
    }

    pub fn inverse(&self) -> GroupElement {
        let inv = |p: &[usize]| {
            let mut q = vec![0; p.len()];
            for (i, &x) in p.iter().enumerate() {
                q[x] = i;
            }
            q
        };
        if self.transpose {
            // (P sigma tau)^-1 = P sigma' tau' with rows and cols exchanged
            GroupElement { rows: inv(&self.cols), cols: inv(&self.rows), transpose: true }
        } else {
            GroupElement { rows: inv(&self.rows), cols: inv(&self.cols), transpose: false }
        }
    }

    /// Variable map of the induced ring automorphism `X_ij -> X_{position(i,j)}`.
    pub fn variable_map(&self, m: usize, n: usize) -> Vec<usize> {
        let mut map = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                let (r, c) = self.position(i, j);
                map.push(r * n + c);
            }
        }
        map
    }

    pub fn act_polynomial(&self, mr: &MatrixRing, p: &Polynomial) -> Polynomial {
        p.rename_variables(&self.variable_map(mr.m, mr.n), &mr.ring)
    }

    pub fn act_exponent(&self, m: usize, n: usize, e: &Exponent) -> Exponent {
        e.permuted(&self.variable_map(m, n), m * n)
    }
}

/// A finite subgroup of `G_{m x n}`, listed element by element.
#[derive(Debug, Clone)]
pub struct Group {
    pub m: usize,
    pub n: usize,
    elements: Vec<GroupElement>,
}

impl Group {
    /// `S_m x S_n`, with transposition when `m = n`.
    pub fn full(m: usize, n: usize) -> Group {
        let mut elements = Vec::new();
        let transposes: &[bool] = if m == n { &[false, true] } else { &[false] };
        for &t in transposes {
            for r in permutations(m) {
                for c in permutations(n) {
                    elements.push(GroupElement { rows: r.clone(), cols: c, transpose: t });
                }
            }
        }
        Group { m, n, elements }
    }

    /// Row and column permutations of `S_m x S_n` that fix `pattern`.
    pub fn pattern_stabilizer(pattern: &Pattern) -> Group {
        let all = Group::full(pattern.m, pattern.n);
        let elements = all
            .elements
            .into_iter()
            .filter(|g| {
                !g.transpose
                    && (0..pattern.m).all(|i| {
                        (0..pattern.n).all(|j| {
                            let (r, c) = g.position(i, j);
                            pattern.get(i, j) == pattern.get(r, c)
                        })
                    })
            })
            .collect();
        Group { m: pattern.m, n: pattern.n, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// Lexicographically smallest image and an element reaching it.
    pub fn canonical_form(&self, e: &ExponentMatrix) -> (ExponentMatrix, GroupElement) {
        let (img, idx) = self
            .elements
            .par_iter()
            .enumerate()
            .map(|(k, g)| (g.act_unchecked(e).entries, k))
            .min()
            .expect("groups are nonempty");
        (ExponentMatrix { m: e.m, n: e.n, entries: img }, self.elements[idx].clone())
    }

    pub fn stabilizer_order(&self, e: &ExponentMatrix) -> usize {
        self.elements.par_iter().filter(|g| g.act_unchecked(e) == *e).count()
    }

    pub fn orbit_size(&self, e: &ExponentMatrix) -> usize {
        self.order() / self.stabilizer_order(e)
    }
}
