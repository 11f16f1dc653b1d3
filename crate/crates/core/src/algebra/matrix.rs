//! Sparse matrices over Euclidean rings and Smith normal form with
//! optional tracking of the unimodular transforms.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// The operations Smith normal form needs from a coefficient ring.
pub trait Euclid: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn nil() -> Self;
    fn unit_el() -> Self;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Euclidean size used for pivot choice.
    fn size(&self) -> u64;
    /// `self = q·d + r` with `r` strictly smaller than `d`.
    fn div_rem_e(&self, d: &Self) -> (Self, Self);
    /// `(g, s, t)` with `g = s·a + t·b` a gcd.
    fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self);
    /// Exact quotient; `d` must divide `self`.
    fn exact_div(&self, d: &Self) -> Self;
    /// Total order on magnitudes.
    fn cmp_abs(&self, o: &Self) -> Ordering;
    /// Unit `u` with `u·self` in canonical (positive) form.
    fn canonical_unit(&self) -> Self;
    fn from_int(x: &BigInt) -> Self;
    fn to_int(&self) -> BigInt;

    fn divides(&self, b: &Self) -> bool {
        if self.is_nil() {
            b.is_nil()
        } else {
            b.div_rem_e(self).1.is_nil()
        }
    }
}

impl Euclid for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit_el() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn size(&self) -> u64 {
        self.magnitude().bits()
    }
    fn div_rem_e(&self, d: &Self) -> (Self, Self) {
        // round to nearest so remainders stay small
        let (q, r) = self.div_mod_floor(d);
        let twice: BigInt = &r * 2;
        if twice.abs() > d.abs() {
            // floor remainders share the sign of d
            (q + 1, r - d)
        } else {
            (q, r)
        }
    }
    fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let e = a.extended_gcd(b);
        (e.gcd, e.x, e.y)
    }
    fn exact_div(&self, d: &Self) -> Self {
        self / d
    }
    fn cmp_abs(&self, o: &Self) -> Ordering {
        self.magnitude().cmp(o.magnitude())
    }
    fn canonical_unit(&self) -> Self {
        if self.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
    fn from_int(x: &BigInt) -> Self {
        x.clone()
    }
    fn to_int(&self) -> BigInt {
        self.clone()
    }
}

/// The field with two elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct F2(pub bool);

impl Euclid for F2 {
    fn nil() -> Self {
        F2(false)
    }
    fn unit_el() -> Self {
        F2(true)
    }
    fn is_nil(&self) -> bool {
        !self.0
    }
    fn is_unit(&self) -> bool {
        self.0
    }
    fn plus(&self, o: &Self) -> Self {
        F2(self.0 ^ o.0)
    }
    fn minus(&self, o: &Self) -> Self {
        F2(self.0 ^ o.0)
    }
    fn times(&self, o: &Self) -> Self {
        F2(self.0 & o.0)
    }
    fn negate(&self) -> Self {
        *self
    }
    fn size(&self) -> u64 {
        self.0 as u64
    }
    fn div_rem_e(&self, d: &Self) -> (Self, Self) {
        assert!(d.0, "division by zero in F2");
        (*self, F2(false))
    }
    fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        if a.0 {
            (F2(true), F2(true), F2(false))
        } else {
            (*b, F2(false), F2(true))
        }
    }
    fn exact_div(&self, d: &Self) -> Self {
        assert!(d.0, "division by zero in F2");
        *self
    }
    fn cmp_abs(&self, o: &Self) -> Ordering {
        self.0.cmp(&o.0)
    }
    fn canonical_unit(&self) -> Self {
        F2(true)
    }
    fn from_int(x: &BigInt) -> Self {
        F2(x.is_odd())
    }
    fn to_int(&self) -> BigInt {
        BigInt::from(self.0 as u8)
    }
}

/// A sparse vector: strictly increasing indices with nonzero values.
pub type SparseVec<R> = Vec<(usize, R)>;

/// `y + c·x`.
pub fn axpy<R: Euclid>(y: &SparseVec<R>, c: &R, x: &SparseVec<R>) -> SparseVec<R> {
    if c.is_nil() || x.is_empty() {
        return y.clone();
    }
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        let take = match (y.get(i), x.get(j)) {
            (Some(a), Some(b)) => a.0.cmp(&b.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match take {
            Ordering::Less => {
                out.push(y[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let v = c.times(&x[j].1);
                if !v.is_nil() {
                    out.push((x[j].0, v));
                }
                j += 1;
            }
            Ordering::Equal => {
                let v = y[i].1.plus(&c.times(&x[j].1));
                if !v.is_nil() {
                    out.push((y[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub fn scale<R: Euclid>(x: &SparseVec<R>, c: &R) -> SparseVec<R> {
    x.iter().map(|(i, v)| (*i, v.times(c))).filter(|(_, v)| !v.is_nil()).collect()
}

/// `a·x + b·y`.
fn lin2<R: Euclid>(a: &R, x: &SparseVec<R>, b: &R, y: &SparseVec<R>) -> SparseVec<R> {
    axpy(&scale(x, a), b, y)
}

pub fn dot<R: Euclid>(x: &SparseVec<R>, dense: &[R]) -> R {
    let mut acc = R::nil();
    for (i, v) in x {
        if !dense[*i].is_nil() {
            acc = acc.plus(&v.times(&dense[*i]));
        }
    }
    acc
}

pub fn to_dense<R: Euclid>(x: &SparseVec<R>, len: usize) -> Vec<R> {
    let mut out = vec![R::nil(); len];
    for (i, v) in x {
        out[*i] = v.clone();
    }
    out
}

pub fn from_dense<R: Euclid>(x: &[R]) -> SparseVec<R> {
    x.iter().enumerate().filter(|(_, v)| !v.is_nil()).map(|(i, v)| (i, v.clone())).collect()
}

/// `Σ xᵢ·colsᵢ` as a sparse vector of length `len`.
pub fn combine<R: Euclid>(cols: &[SparseVec<R>], x: &SparseVec<R>, len: usize) -> SparseVec<R> {
    let mut acc = vec![R::nil(); len];
    for (i, c) in x {
        for (r, v) in &cols[*i] {
            acc[*r] = acc[*r].plus(&v.times(c));
        }
    }
    from_dense(&acc)
}

fn lookup<R>(row: &SparseVec<R>, col: usize) -> Option<&R> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

/// A row-major sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<R>>,
}

/// Integer matrices with arbitrary-precision entries.
pub type IntMatrix = SparseMatrix<BigInt>;

impl<R: Euclid> SparseMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, cols: n, data: (0..n).map(|i| vec![(i, R::unit_el())]).collect() }
    }

    /// Rows must be sorted, in range and free of explicit zeros.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<SparseVec<R>>) -> Self {
        assert_eq!(data.len(), rows);
        debug_assert!(data.iter().all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)
            && r.iter().all(|(c, v)| *c < cols && !v.is_nil())));
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(rows: &[Vec<R>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        SparseMatrix { rows: rows.len(), cols, data: rows.iter().map(|r| from_dense(r)).collect() }
    }

    /// Builds a matrix whose columns are the given sparse vectors.
    pub fn from_columns(rows: usize, columns: &[SparseVec<R>]) -> Self {
        let mut data: Vec<SparseVec<R>> = vec![Vec::new(); rows];
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col {
                data[*r].push((c, v.clone()));
            }
        }
        SparseMatrix { rows, cols: columns.len(), data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec<R> {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> R {
        lookup(&self.data[i], j).cloned().unwrap_or_else(R::nil)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<R>> {
        self.data.iter().map(|r| to_dense(r, self.cols)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec<R>> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Column `j` as a sparse vector.
    pub fn column(&self, j: usize) -> SparseVec<R> {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(i, r)| lookup(r, j).map(|v| (i, v.clone())))
            .collect()
    }

    pub fn mul_vec(&self, x: &[R]) -> Vec<R> {
        assert_eq!(x.len(), self.cols);
        self.data.iter().map(|r| dot(r, x)).collect()
    }

    /// Product with a sparse vector, returned sparse.
    pub fn mul_sparse(&self, x: &SparseVec<R>) -> SparseVec<R> {
        let dense = to_dense(x, self.cols);
        from_dense(&self.mul_vec(&dense))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc: SparseVec<R> = Vec::new();
                for (k, v) in r {
                    acc = axpy(&acc, v, &o.data[*k]);
                }
                acc
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: o.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    /// Drops to the given column range, renumbering from zero.
    pub fn column_slice(&self, start: usize, end: usize) -> Self {
        let data = self
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|(c, _)| *c >= start && *c < end)
                    .map(|(c, v)| (c - start, v.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: end - start, data }
    }
}

impl Serialize for SparseMatrix<BigInt> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dense: Vec<Vec<BigInt>> = self.to_dense();
        #[derive(Serialize)]
        struct M<'a> {
            rows: usize,
            cols: usize,
            #[serde(serialize_with = "super::num_serde::int_rows")]
            entries: &'a Vec<Vec<BigInt>>,
        }
        M { rows: self.rows, cols: self.cols, entries: &dense }.serialize(s)
    }
}

/// Which unimodular transforms to record during reduction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Track {
    pub left: bool,
    pub right: bool,
}

impl Track {
    pub const NONE: Track = Track { left: false, right: false };
    pub const LEFT: Track = Track { left: true, right: false };
    pub const RIGHT: Track = Track { left: false, right: true };
    pub const BOTH: Track = Track { left: true, right: true };
}

/// Smith normal form `U·A·V = S` with `S` diagonal in its leading `rank`
/// positions and the diagonal a divisibility chain.
#[derive(Clone, Debug)]
pub struct Snf<R> {
    pub rows: usize,
    pub cols: usize,
    pub diag: Vec<R>,
    /// Row-major `U`.
    pub u: Option<Vec<SparseVec<R>>>,
    /// Columns of `U⁻¹`.
    pub u_inv_cols: Option<Vec<SparseVec<R>>>,
    /// Columns of `V`.
    pub v_cols: Option<Vec<SparseVec<R>>>,
    /// Row-major `V⁻¹`.
    pub v_inv: Option<Vec<SparseVec<R>>>,
}

impl<R: Euclid> Snf<R> {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn u_matrix(&self) -> SparseMatrix<R> {
        SparseMatrix { rows: self.rows, cols: self.rows, data: self.u.clone().expect("U tracked") }
    }

    pub fn u_inv_matrix(&self) -> SparseMatrix<R> {
        SparseMatrix::from_columns(self.rows, self.u_inv_cols.as_ref().expect("U tracked"))
    }

    pub fn v_matrix(&self) -> SparseMatrix<R> {
        SparseMatrix::from_columns(self.cols, self.v_cols.as_ref().expect("V tracked"))
    }

    pub fn v_inv_matrix(&self) -> SparseMatrix<R> {
        SparseMatrix { rows: self.cols, cols: self.cols, data: self.v_inv.clone().expect("V tracked") }
    }

    pub fn s_matrix(&self) -> SparseMatrix<R> {
        let mut data: Vec<SparseVec<R>> = vec![Vec::new(); self.rows];
        for (i, d) in self.diag.iter().enumerate() {
            data[i].push((i, d.clone()));
        }
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// `U·x`.
    pub fn apply_u(&self, x: &[R]) -> Vec<R> {
        self.u.as_ref().expect("U tracked").iter().map(|r| dot(r, x)).collect()
    }

    /// `V⁻¹·x`.
    pub fn apply_v_inv(&self, x: &[R]) -> Vec<R> {
        self.v_inv.as_ref().expect("V tracked").iter().map(|r| dot(r, x)).collect()
    }
}

struct Reducer<R> {
    rows: Vec<SparseVec<R>>,
    col_rows: Vec<BTreeSet<usize>>,
    u: Option<Vec<SparseVec<R>>>,
    u_inv_t: Option<Vec<SparseVec<R>>>,
    v_t: Option<Vec<SparseVec<R>>>,
    v_inv: Option<Vec<SparseVec<R>>>,
}

fn unit_rows<R: Euclid>(n: usize) -> Vec<SparseVec<R>> {
    (0..n).map(|i| vec![(i, R::unit_el())]).collect()
}

impl<R: Euclid> Reducer<R> {
    /// `row_x += c·row_y`.
    fn row_add(&mut self, x: usize, y: usize, c: &R) {
        let old: Vec<usize> = self.rows[x].iter().map(|e| e.0).collect();
        let new = axpy(&self.rows[x], c, &self.rows[y]);
        for col in old {
            if lookup(&new, col).is_none() {
                self.col_rows[col].remove(&x);
            }
        }
        for (col, _) in &new {
            self.col_rows[*col].insert(x);
        }
        self.rows[x] = new;
        if let Some(u) = &mut self.u {
            u[x] = axpy(&u[x], c, &u[y]);
        }
        if let Some(ui) = &mut self.u_inv_t {
            ui[y] = axpy(&ui[y], &c.negate(), &ui[x]);
        }
    }

    /// Records `col_x += c·col_y` in the column transforms only.
    fn col_add_tracking(&mut self, x: usize, y: usize, c: &R) {
        if let Some(v) = &mut self.v_t {
            v[x] = axpy(&v[x], c, &v[y]);
        }
        if let Some(vi) = &mut self.v_inv {
            vi[y] = axpy(&vi[y], &c.negate(), &vi[x]);
        }
    }

    fn set_entry(&mut self, i: usize, j: usize, v: R) {
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => {
                if v.is_nil() {
                    row.remove(k);
                    self.col_rows[j].remove(&i);
                } else {
                    row[k].1 = v;
                }
            }
            Err(k) => {
                if !v.is_nil() {
                    row.insert(k, (j, v));
                    self.col_rows[j].insert(i);
                }
            }
        }
    }

    fn choose_pivot(&self, active_rows: &BTreeSet<usize>) -> Option<(usize, usize)> {
        let mut best: Option<((bool, u64, usize), usize, usize)> = None;
        for &i in active_rows {
            let row = &self.rows[i];
            let rn = row.len();
            for (j, v) in row {
                let key = (!v.is_unit(), v.size(), (rn - 1) * (self.col_rows[*j].len() - 1));
                if best.as_ref().is_none_or(|b| key < b.0) {
                    best = Some((key, i, *j));
                    if !key.0 && key.2 == 0 {
                        return Some((i, *j));
                    }
                }
            }
        }
        best.map(|b| (b.1, b.2))
    }

    /// Clears row `i` and column `j` apart from the pivot, returning the final
    /// pivot position.
    fn eliminate(&mut self, mut i: usize, mut j: usize) -> (usize, usize) {
        loop {
            let p = lookup(&self.rows[i], j).unwrap().clone();
            let others: Vec<usize> = self.col_rows[j].iter().copied().filter(|&r| r != i).collect();
            for r in others {
                let a = lookup(&self.rows[r], j).unwrap().clone();
                let (q, _) = a.div_rem_e(&p);
                self.row_add(r, i, &q.negate());
            }
            if self.col_rows[j].len() > 1 {
                // a remainder survived: restart from the smallest entry of the column
                i = *self.col_rows[j]
                    .iter()
                    .min_by(|&&a, &&b| {
                        lookup(&self.rows[a], j).unwrap().cmp_abs(lookup(&self.rows[b], j).unwrap())
                    })
                    .unwrap();
                continue;
            }
            let row_entries: Vec<(usize, R)> =
                self.rows[i].iter().filter(|e| e.0 != j).cloned().collect();
            for (c, a) in row_entries {
                let (q, r) = a.div_rem_e(&p);
                self.set_entry(i, c, r);
                self.col_add_tracking(c, j, &q.negate());
            }
            if self.rows[i].len() > 1 {
                j = self.rows[i]
                    .iter()
                    .min_by(|a, b| a.1.cmp_abs(&b.1))
                    .map(|e| e.0)
                    .unwrap();
                continue;
            }
            return (i, j);
        }
    }
}

/// Smith normal form of `a`.
pub fn smith_normal_form<R: Euclid>(a: &SparseMatrix<R>, track: Track) -> Snf<R> {
    let (m, n) = (a.rows, a.cols);
    let mut col_rows = vec![BTreeSet::new(); n];
    for (i, r) in a.data.iter().enumerate() {
        for (j, _) in r {
            col_rows[*j].insert(i);
        }
    }
    let mut red = Reducer {
        rows: a.data.clone(),
        col_rows,
        u: track.left.then(|| unit_rows(m)),
        u_inv_t: track.left.then(|| unit_rows(m)),
        v_t: track.right.then(|| unit_rows(n)),
        v_inv: track.right.then(|| unit_rows(n)),
    };
    let mut active: BTreeSet<usize> = (0..m).filter(|&i| !red.rows[i].is_empty()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    while let Some((i0, j0)) = red.choose_pivot(&active) {
        let (i, j) = red.eliminate(i0, j0);
        active.remove(&i);
        red.col_rows[j].clear();
        pivots.push((i, j));
        active.retain(|&r| !red.rows[r].is_empty());
    }
    let mut diag: Vec<R> = pivots.iter().map(|&(i, j)| lookup(&red.rows[i], j).unwrap().clone()).collect();

    // divisibility chain on the non-unit part
    let mut order: Vec<usize> = (0..pivots.len()).collect();
    order.sort_by(|&x, &y| diag[x].cmp_abs(&diag[y]).then(x.cmp(&y)));
    let nonunit: Vec<usize> = order.iter().copied().filter(|&k| !diag[k].is_unit()).collect();
    for (ai, &x) in nonunit.iter().enumerate() {
        for &y in &nonunit[ai + 1..] {
            if diag[x].divides(&diag[y]) {
                continue;
            }
            let (a, b) = (diag[x].clone(), diag[y].clone());
            let (g, s, t) = R::ext_gcd(&a, &b);
            let (ag, bg) = (a.exact_div(&g), b.exact_div(&g));
            let (rx, cx) = pivots[x];
            let (ry, cy) = pivots[y];
            if let Some(u) = &mut red.u {
                let (ux, uy) = (u[rx].clone(), u[ry].clone());
                u[rx] = lin2(&s, &ux, &t, &uy);
                u[ry] = lin2(&bg.negate(), &ux, &ag, &uy);
            }
            if let Some(ui) = &mut red.u_inv_t {
                let (ux, uy) = (ui[rx].clone(), ui[ry].clone());
                ui[rx] = lin2(&ag, &ux, &bg, &uy);
                ui[ry] = lin2(&t.negate(), &ux, &s, &uy);
            }
            red.col_add_tracking(cx, cy, &R::unit_el());
            red.col_add_tracking(cy, cx, &t.times(&bg).negate());
            diag[x] = g;
            diag[y] = a.times(&bg);
        }
    }
    // canonical signs
    for k in 0..diag.len() {
        let c = diag[k].canonical_unit();
        if c != R::unit_el() {
            diag[k] = diag[k].times(&c);
            let r = pivots[k].0;
            if let Some(u) = &mut red.u {
                u[r] = scale(&u[r], &c);
            }
            if let Some(ui) = &mut red.u_inv_t {
                ui[r] = scale(&ui[r], &c);
            }
        }
    }
    order.sort_by(|&x, &y| diag[x].cmp_abs(&diag[y]).then(x.cmp(&y)));

    let mut row_perm: Vec<usize> = order.iter().map(|&k| pivots[k].0).collect();
    let mut col_perm: Vec<usize> = order.iter().map(|&k| pivots[k].1).collect();
    let used_rows: BTreeSet<usize> = row_perm.iter().copied().collect();
    let used_cols: BTreeSet<usize> = col_perm.iter().copied().collect();
    row_perm.extend((0..m).filter(|r| !used_rows.contains(r)));
    col_perm.extend((0..n).filter(|c| !used_cols.contains(c)));
    let diag: Vec<R> = order.iter().map(|&k| diag[k].clone()).collect();

    let take = |v: Option<Vec<SparseVec<R>>>, perm: &[usize]| {
        v.map(|mut v| perm.iter().map(|&p| std::mem::take(&mut v[p])).collect::<Vec<_>>())
    };
    Snf {
        rows: m,
        cols: n,
        diag,
        u: take(red.u, &row_perm),
        u_inv_cols: take(red.u_inv_t, &row_perm),
        v_cols: take(red.v_t, &col_perm),
        v_inv: take(red.v_inv, &col_perm),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(rows: &[&[i64]]) -> IntMatrix {
        let v: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        IntMatrix::from_dense(&v)
    }

    fn check(a: &IntMatrix, snf: &Snf<BigInt>) {
        let u = snf.u_matrix();
        let v = snf.v_matrix();
        assert_eq!(u.mul(a).mul(&v), snf.s_matrix());
        assert_eq!(u.mul(&snf.u_inv_matrix()), IntMatrix::identity(a.rows()));
        assert_eq!(snf.v_inv_matrix().mul(&v), IntMatrix::identity(a.cols()));
        for w in snf.diag.windows(2) {
            assert!(Euclid::divides(&w[0], &w[1]), "chain broken: {:?}", snf.diag);
        }
        assert!(snf.diag.iter().all(|d| d.is_positive()));
    }

    #[test]
    fn gcd_lcm_normalization() {
        let a = int(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&a, Track::BOTH);
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(6)]);
        check(&a, &s);
    }

    #[test]
    fn zero_matrix() {
        let a = IntMatrix::zeros(3, 2);
        let s = smith_normal_form(&a, Track::BOTH);
        assert_eq!(s.rank(), 0);
        assert_eq!(s.u_matrix(), IntMatrix::identity(3));
        assert_eq!(s.v_matrix(), IntMatrix::identity(2));
    }

    #[test]
    fn mixed_example() {
        let a = int(&[&[4, 6, 0], &[6, 4, 2], &[0, 2, 8], &[2, 2, 2]]);
        let s = smith_normal_form(&a, Track::BOTH);
        check(&a, &s);
    }

    #[test]
    fn f2_rank() {
        let t = F2(true);
        let o = F2(false);
        let a = SparseMatrix::from_dense(&[vec![t, t, o], vec![o, t, t], vec![t, o, t]]);
        let s = smith_normal_form(&a, Track::BOTH);
        assert_eq!(s.rank(), 2);
        assert_eq!(s.u_matrix().mul(&a).mul(&s.v_matrix()), s.s_matrix());
    }

    fn det_small(m: &[Vec<BigInt>]) -> BigInt {
        // Laplace expansion, only for tiny test matrices
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::from(0);
        for c in 0..n {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][c] * det_small(&minor);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    proptest! {
        #[test]
        fn snf_is_exact(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(-9i64..10, 36)) {
            let dense: Vec<Vec<BigInt>> = (0..rows)
                .map(|i| (0..cols).map(|j| {
                    let x = seed[i * 6 + j];
                    // keep matrices sparse-ish
                    BigInt::from(if x.abs() > 5 { 0 } else { x })
                }).collect())
                .collect();
            let a = IntMatrix::from_dense(&dense);
            let s = smith_normal_form(&a, Track::BOTH);
            check(&a, &s);
            let du = det_small(&s.u_matrix().to_dense());
            let dv = det_small(&s.v_matrix().to_dense());
            prop_assert!(du.magnitude().is_one() && dv.magnitude().is_one());
            if rows == cols {
                let prod = s.diag.iter().fold(BigInt::from(1), |acc, d| acc * d);
                let expect = if s.rank() == rows { det_small(&dense).abs() } else { BigInt::from(0) };
                prop_assert_eq!(if s.rank() == rows { prod } else { BigInt::from(0) }, expect);
            }
        }
    }
}
