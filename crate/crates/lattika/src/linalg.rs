//! Exact integer and rational matrix algebra.
//!
//! Everything here works over unbounded integers (`num_bigint::BigInt`) or
//! exact rationals; there are no overflow or rounding semantics anywhere.
//! Matrices are small (at most a few dozen rows), so the algorithms favour
//! predictable exact behaviour over asymptotics: pivots are chosen by minimal
//! absolute value to keep intermediate entries tame.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Shorthand for small integer literals.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Dense row-major matrix over the integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (r, c): (usize, usize)) -> &Int {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Int {
        &mut self.data[r * self.cols + c]
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Int) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        IntMatrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Int> {
        self.row(r).to_vec()
    }

    pub fn col_vec(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|r| self.row_vec(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for r in 0..self.rows {
            for c in r + 1..self.cols {
                if self[(r, c)] != self[(c, r)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| -self[(r, c)].clone())
    }

    pub fn scale(&self, k: &Int) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() * k)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let t = a.clone() * &other[(k, c)];
                    out[(r, c)] += t;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() + &other[(r, c)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() - &other[(r, c)])
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn block_diag(parts: &[&IntMatrix]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zero(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for p in parts {
            for r in 0..p.rows {
                for c in 0..p.cols {
                    out[(ro + r, co + c)] = p[(r, c)].clone();
                }
            }
            ro += p.rows;
            co += p.cols;
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_rows(idx.iter().map(|&r| self.row_vec(r)).collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[a] -= q * row[b]
    fn row_sub_mul(&mut self, a: usize, b: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let t = q.clone() * &self[(b, c)];
            self[(a, c)] -= t;
        }
    }

    /// col[a] -= q * col[b]
    fn col_sub_mul(&mut self, a: usize, b: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let t = q.clone() * &self[(r, b)];
            self[(r, a)] -= t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let t = -self[(r, c)].clone();
            self[(r, c)] = t;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let t = -self[(r, c)].clone();
            self[(r, c)] = t;
        }
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Int {
        assert!(self.is_square(), "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[(r, k)].is_zero()) else {
                    return Int::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = m[(k, k)].clone() * &m[(i, j)] - m[(i, k)].clone() * &m[(k, j)];
                    let (q, r) = t.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[(i, j)] = q;
                }
            }
            for i in k + 1..n {
                m[(i, k)] = Int::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |r, c| Rat::from(self[(r, c)].clone()))
    }
}

/// Row-style Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular, `u * m == h`, pivot entries positive,
/// entries above each pivot reduced into `[0, pivot)`, zero rows last.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pr = 0usize;
    for col in 0..h.cols {
        if pr == h.rows {
            break;
        }
        // Euclid over the entries of this column at rows >= pr.
        loop {
            let mut best: Option<usize> = None;
            for r in pr..h.rows {
                if !h[(r, col)].is_zero()
                    && best.map_or(true, |b| h[(r, col)].abs() < h[(b, col)].abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(pr, b);
            u.swap_rows(pr, b);
            let mut done = true;
            for r in pr + 1..h.rows {
                if h[(r, col)].is_zero() {
                    continue;
                }
                let q = h[(r, col)].clone() / &h[(pr, col)];
                h.row_sub_mul(r, pr, &q);
                u.row_sub_mul(r, pr, &q);
                if !h[(r, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(pr, col)].is_zero() {
            continue;
        }
        if h[(pr, col)].is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        for r in 0..pr {
            // reduce entries above the pivot into [0, pivot)
            let q = h[(r, col)].div_floor(&h[(pr, col)]);
            h.row_sub_mul(r, pr, &q);
            u.row_sub_mul(r, pr, &q);
        }
        pr += 1;
    }
    (h, u)
}

/// Smith normal form: `(d, u, v)` with `u * m * v == d`, `u`, `v` unimodular,
/// diagonal entries nonnegative with d1 | d2 | ...
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut t = 0usize;
    while t < n {
        // minimal-absolute-value pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for r in t..d.rows {
            for c in t..d.cols {
                if !d[(r, c)].is_zero()
                    && best.map_or(true, |(br, bc)| d[(r, c)].abs() < d[(br, bc)].abs())
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        d.swap_rows(t, pr);
        u.swap_rows(t, pr);
        d.swap_cols(t, pc);
        v.swap_cols(t, pc);
        loop {
            let mut clean = true;
            for r in t + 1..d.rows {
                if d[(r, t)].is_zero() {
                    continue;
                }
                let q = d[(r, t)].clone() / &d[(t, t)];
                d.row_sub_mul(r, t, &q);
                u.row_sub_mul(r, t, &q);
                if !d[(r, t)].is_zero() {
                    d.swap_rows(t, r);
                    u.swap_rows(t, r);
                    clean = false;
                }
            }
            for c in t + 1..d.cols {
                if d[(t, c)].is_zero() {
                    continue;
                }
                let q = d[(t, c)].clone() / &d[(t, t)];
                d.col_sub_mul(c, t, &q);
                v.col_sub_mul(c, t, &q);
                if !d[(t, c)].is_zero() {
                    d.swap_cols(t, c);
                    v.swap_cols(t, c);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let mut fixed = true;
            'scan: for r in t + 1..d.rows {
                for c in t + 1..d.cols {
                    if !d[(r, c)].is_multiple_of(&d[(t, t)]) {
                        let one = Int::one();
                        // add row r to row t, restart elimination
                        d.row_sub_mul(t, r, &-one.clone());
                        u.row_sub_mul(t, r, &-one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    (d, u, v)
}

/// Basis of the saturated left kernel `{ x in Z^rows : x * m = 0 }`,
/// canonicalized by HNF so output is reproducible.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hermite_normal_form(m);
    let mut rows = Vec::new();
    for r in 0..h.rows {
        if h.row(r).iter().all(|x| x.is_zero()) {
            rows.push(u.row_vec(r));
        }
    }
    if rows.is_empty() {
        return IntMatrix::zero(0, m.rows);
    }
    let k = IntMatrix::from_rows(rows);
    let (kh, _) = hermite_normal_form(&k);
    // drop zero rows (there are none: kernel rows are independent)
    let nz: Vec<usize> = (0..kh.rows).filter(|&r| !kh.row(r).iter().all(|x| x.is_zero())).collect();
    kh.select_rows(&nz)
}

/// Some integer solution `x` of `x * m = b`, if one exists.
pub fn solve_integer(m: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(b.len(), m.cols, "rhs length mismatch");
    let (h, u) = hermite_normal_form(m);
    // pivot columns of h
    let mut y = vec![Int::zero(); h.rows];
    let mut resid: Vec<Int> = b.to_vec();
    for r in 0..h.rows {
        let Some(c) = (0..h.cols).find(|&c| !h[(r, c)].is_zero()) else { break };
        let (q, rem) = resid[c].div_rem(&h[(r, c)]);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for cc in 0..h.cols {
                let t = q.clone() * &h[(r, cc)];
                resid[cc] -= t;
            }
        }
        y[r] = q;
    }
    if resid.iter().any(|x| !x.is_zero()) {
        return None;
    }
    // x = y * u
    let mut x = vec![Int::zero(); m.rows];
    for r in 0..h.rows {
        if y[r].is_zero() {
            continue;
        }
        for c in 0..m.rows {
            let t = y[r].clone() * &u[(r, c)];
            x[c] += t;
        }
    }
    Some(x)
}

/// Dense rational matrix (used for dual bases and diagonalization).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self[(r, k)].is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let t = self[(r, k)].clone() * &other[(k, c)];
                    out[(r, c)] += t;
                }
            }
        }
        out
    }

    pub fn row_vec(&self, r: usize) -> Vec<Rat> {
        (0..self.cols).map(|c| self[(r, c)].clone()).collect()
    }

    /// Gauss-Jordan inverse; panics on singular input (callers check first).
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert!(self.rows == self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            for c in 0..n {
                a.data.swap(col * n + c, piv * n + c);
                inv.data.swap(col * n + c, piv * n + c);
            }
            let p = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] = a[(col, c)].clone() / &p;
                inv[(col, c)] = inv[(col, c)].clone() / &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for c in 0..n {
                    let t = f.clone() * &a[(col, c)];
                    a[(r, c)] -= t;
                    let t = f.clone() * &inv[(col, c)];
                    inv[(r, c)] -= t;
                }
            }
        }
        Some(inv)
    }

    /// Exact integer matrix if every entry is integral.
    pub fn to_int(&self) -> Option<IntMatrix> {
        let mut out = IntMatrix::zero(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !self[(r, c)].is_integer() {
                    return None;
                }
                out[(r, c)] = self[(r, c)].to_integer();
            }
        }
        Some(out)
    }
}

/// Signature of a symmetric integer matrix by symmetric Gaussian elimination
/// over exact rationals: `(n_plus, n_minus, n_zero)`.
pub fn rational_diagonalize_symmetric(g: &IntMatrix) -> (usize, usize, usize) {
    assert!(g.is_symmetric(), "signature of non-symmetric matrix");
    let n = g.rows;
    let mut a = g.to_rat();
    let (mut np, mut nm, mut nz) = (0usize, 0usize, 0usize);
    let mut i = 0usize;
    while i < n {
        if a[(i, i)].is_zero() {
            // try to bring a nonzero diagonal entry to position i
            if let Some(j) = (i + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                for c in 0..n {
                    a.data.swap(i * n + c, j * n + c);
                }
                for r in 0..n {
                    a.data.swap(r * n + i, r * n + j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !a[(i, j)].is_zero()) {
                // standard 2x2 handling: row/col i += row/col j
                for c in 0..n {
                    let t = a[(j, c)].clone();
                    a[(i, c)] += t;
                }
                for r in 0..n {
                    let t = a[(r, j)].clone();
                    a[(r, i)] += t;
                }
            } else {
                nz += 1;
                i += 1;
                continue;
            }
            if a[(i, i)].is_zero() {
                continue;
            }
        }
        let piv = a[(i, i)].clone();
        if piv.is_positive() {
            np += 1;
        } else {
            nm += 1;
        }
        for r in i + 1..n {
            if a[(r, i)].is_zero() {
                continue;
            }
            let f = a[(r, i)].clone() / &piv;
            for c in i..n {
                let t = f.clone() * &a[(i, c)];
                a[(r, c)] -= t;
            }
        }
        for c in i + 1..n {
            a[(i, c)] = Rat::zero();
            a[(c, i)] = Rat::zero();
        }
        i += 1;
    }
    (np, nm, nz)
}

/// gcd of a slice (0 for the empty/zero slice).
pub fn content(v: &[Int]) -> Int {
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(x);
    }
    g
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.clone() * y).sum()
}

/// v * m for a row vector v.
pub fn vec_mat(v: &[Int], m: &IntMatrix) -> Vec<Int> {
    assert_eq!(v.len(), m.rows);
    let mut out = vec![Int::zero(); m.cols];
    for r in 0..m.rows {
        if v[r].is_zero() {
            continue;
        }
        for c in 0..m.cols {
            let t = v[r].clone() * &m[(r, c)];
            out[c] += t;
        }
    }
    out
}

/// m * v for a column vector v.
pub fn mat_vec(m: &IntMatrix, v: &[Int]) -> Vec<Int> {
    assert_eq!(v.len(), m.cols);
    (0..m.rows).map(|r| dot(m.row(r), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    // Independent diagonal-only SNF used as an oracle: no transform tracking,
    // plain gcd sweeps.
    fn naive_snf_diag(m: &IntMatrix) -> Vec<Int> {
        let mut d = m.clone();
        let n = d.rows.min(d.cols);
        for t in 0..n {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for r in t..d.rows {
                    for c in t..d.cols {
                        if !d[(r, c)].is_zero()
                            && best.map_or(true, |(br, bc)| d[(r, c)].abs() < d[(br, bc)].abs())
                        {
                            best = Some((r, c));
                        }
                    }
                }
                let Some((pr, pc)) = best else { break };
                d.swap_rows(t, pr);
                d.swap_cols(t, pc);
                let mut dirty = false;
                for r in t + 1..d.rows {
                    let q = d[(r, t)].clone() / &d[(t, t)];
                    d.row_sub_mul(r, t, &q);
                    if !d[(r, t)].is_zero() {
                        dirty = true;
                    }
                }
                for c in t + 1..d.cols {
                    let q = d[(t, c)].clone() / &d[(t, t)];
                    d.col_sub_mul(c, t, &q);
                    if !d[(t, c)].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                let mut all_div = true;
                'out: for r in t + 1..d.rows {
                    for c in t + 1..d.cols {
                        if !d[(r, c)].is_multiple_of(&d[(t, t)]) {
                            let m1 = -Int::one();
                            d.row_sub_mul(t, r, &m1);
                            all_div = false;
                            break 'out;
                        }
                    }
                }
                if all_div {
                    break;
                }
            }
        }
        (0..n).map(|i| d[(i, i)].abs()).collect()
    }

    #[test]
    fn hnf_identity() {
        let m = IntMatrix::identity(3);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));
    }

    #[test]
    fn hnf_example_2x2() {
        let m = mat(&[&[2, 4], &[6, 8]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, mat(&[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&m), h);
        assert_eq!(u.det().abs(), Int::one());
    }

    #[test]
    fn hnf_zero_matrix() {
        let m = IntMatrix::zero(2, 3);
        let (h, u) = hermite_normal_form(&m);
        assert!(h.is_zero());
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn snf_identity_and_rank_one() {
        let (d, u, v) = smith_normal_form(&IntMatrix::identity(4));
        assert_eq!(d, IntMatrix::identity(4));
        assert_eq!(u.mul(&IntMatrix::identity(4)).mul(&v), d);

        let (d, _, _) = smith_normal_form(&mat(&[&[-2]]));
        assert_eq!(d, mat(&[&[2]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(integer_kernel(&IntMatrix::identity(3)).rows, 0);

        // kernel of x + y as a map Z^2 -> Z
        let k = integer_kernel(&mat(&[&[1], &[1]]));
        assert_eq!(k.rows, 1);
        let r = k.row_vec(0);
        assert!(r == vec![int(1), int(-1)] || r == vec![int(-1), int(1)]);

        // saturated kernel of (x, y) -> 2x + 4y
        let k = integer_kernel(&mat(&[&[2], &[4]]));
        assert_eq!(k.rows, 1);
        assert_eq!(content(k.row(0)), Int::one());
        assert!(dot(k.row(0), &[int(2), int(4)]).is_zero());
    }

    #[test]
    fn solve_examples() {
        let m = IntMatrix::identity(3);
        let b = [int(5), int(-7), int(0)];
        assert_eq!(solve_integer(&m, &b), Some(b.to_vec()));

        assert_eq!(solve_integer(&mat(&[&[2]]), &[int(3)]), None);

        let m = mat(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve_integer(&m, &[int(4), int(9)]), Some(vec![int(2), int(3)]));
    }

    #[test]
    fn diagonalize_hyperbolic() {
        let u = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(rational_diagonalize_symmetric(&u), (1, 1, 0));
        let z = IntMatrix::zero(2, 2);
        assert_eq!(rational_diagonalize_symmetric(&z), (0, 0, 2));
        let m = mat(&[&[-2]]);
        assert_eq!(rational_diagonalize_symmetric(&m), (0, 1, 0));
    }

    #[test]
    fn det_small() {
        assert_eq!(mat(&[&[2, 4], &[6, 8]]).det(), int(-8));
        assert_eq!(IntMatrix::identity(5).det(), int(1));
        assert_eq!(mat(&[&[0, 1], &[1, 0]]).det(), int(-1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn hnf_postconditions(rows in 1usize..5, cols in 1usize..5,
                              seed in proptest::collection::vec(-20i64..20, 25)) {
            let m = IntMatrix::from_fn(rows, cols, |r, c| int(seed[r * 5 + c]));
            let (h, u) = hermite_normal_form(&m);
            prop_assert_eq!(u.mul(&m), h.clone());
            prop_assert_eq!(u.det().abs(), Int::one());
            // pivots positive, entries above reduced
            let mut last_col = None;
            for r in 0..h.rows {
                if let Some(c) = (0..h.cols).find(|&c| !h[(r, c)].is_zero()) {
                    prop_assert!(h[(r, c)].is_positive());
                    if let Some(lc) = last_col {
                        prop_assert!(c > lc);
                    }
                    last_col = Some(c);
                    for rr in 0..r {
                        prop_assert!(!h[(rr, c)].is_negative() && h[(rr, c)] < h[(r, c)]);
                    }
                }
            }
        }

        #[test]
        fn snf_postconditions(rows in 1usize..5, cols in 1usize..5,
                              seed in proptest::collection::vec(-20i64..20, 25)) {
            let m = IntMatrix::from_fn(rows, cols, |r, c| int(seed[r * 5 + c]));
            let (d, u, v) = smith_normal_form(&m);
            prop_assert_eq!(u.mul(&m).mul(&v), d.clone());
            prop_assert_eq!(u.det().abs(), Int::one());
            prop_assert_eq!(v.det().abs(), Int::one());
            let diag: Vec<Int> = (0..rows.min(cols)).map(|i| d[(i, i)].clone()).collect();
            for i in 0..diag.len() {
                prop_assert!(!diag[i].is_negative());
                if i + 1 < diag.len() && !diag[i + 1].is_zero() {
                    prop_assert!(!diag[i].is_zero());
                    prop_assert!(diag[i + 1].is_multiple_of(&diag[i]));
                }
            }
            for r in 0..rows {
                for c in 0..cols {
                    if r != c {
                        prop_assert!(d[(r, c)].is_zero());
                    }
                }
            }
            prop_assert_eq!(diag, naive_snf_diag(&m));
            if rows == cols {
                let prod: Int = (0..rows).map(|i| d[(i, i)].clone()).product();
                prop_assert_eq!(prod, m.det().abs());
            }
        }

        #[test]
        fn kernel_saturated(rows in 1usize..5, cols in 1usize..4,
                            seed in proptest::collection::vec(-9i64..9, 20)) {
            let m = IntMatrix::from_fn(rows, cols, |r, c| int(seed[r * 4 + c]));
            let k = integer_kernel(&m);
            if k.rows > 0 {
                prop_assert!(k.mul(&m).is_zero());
                // saturation: invariant factors of the kernel basis are all 1
                let (d, _, _) = smith_normal_form(&k);
                for i in 0..k.rows {
                    prop_assert_eq!(d[(i, i)].clone(), Int::one());
                }
            }
        }

        #[test]
        fn signature_invariant_under_unimodular_change(seed in proptest::collection::vec(-6i64..6, 16),
                                                       shear in proptest::collection::vec(-3i64..3, 16)) {
            let n = 4;
            let a = IntMatrix::from_fn(n, n, |r, c| int(seed[r * n + c]));
            let g = a.add(&a.transpose()); // symmetric
            // random unimodular: unit upper triangular times unit lower triangular
            let up = IntMatrix::from_fn(n, n, |r, c| {
                if r == c { int(1) } else if r < c { int(shear[r * n + c]) } else { int(0) }
            });
            let lo = IntMatrix::from_fn(n, n, |r, c| {
                if r == c { int(1) } else if r > c { int(shear[r * n + c]) } else { int(0) }
            });
            let t = up.mul(&lo);
            let g2 = t.transpose().mul(&g).mul(&t);
            prop_assert_eq!(rational_diagonalize_symmetric(&g), rational_diagonalize_symmetric(&g2));
        }
    }
}
