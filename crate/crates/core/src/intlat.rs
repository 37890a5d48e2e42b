//! Exact integer lattice linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Row vectors are
//! lattice elements; a matrix is read as the list of its rows unless a
//! function says otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` fixes the width when `rows` is empty.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_big_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        IntMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Keeps the first `n` rows.
    pub fn take_rows(&self, n: usize) -> IntMatrix {
        IntMatrix {
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * factor;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * factor;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub fn rank(&self) -> usize {
        hermite_row_form(self).rank
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `left · A · right = diagonal`, with the diagonal a divisibility chain of
/// nonnegative integers.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub diagonal: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.diagonal.rows().min(self.diagonal.cols());
        (0..n)
            .map(|i| self.diagonal.get(i, i).clone())
            .filter(|d| !d.is_zero())
            .collect()
    }
}

/// Finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TorsionData {
    pub free_rank: usize,
    /// Each factor > 1 and divides the next.
    pub invariant_factors: Vec<BigInt>,
}

impl TorsionData {
    pub fn free(rank: usize) -> Self {
        TorsionData {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Canonical form of `Z^free_rank ⊕ ⊕ Z/c` for arbitrary cyclic orders `c`
    /// (zeros and ones are dropped).
    pub fn from_cyclic(free_rank: usize, orders: &[BigInt]) -> Self {
        let orders: Vec<BigInt> = orders
            .iter()
            .map(|c| c.abs())
            .filter(|c| !c.is_zero() && !c.is_one())
            .collect();
        let n = orders.len();
        let mut diag = IntMatrix::zeros(n, n);
        for (i, c) in orders.into_iter().enumerate() {
            diag.set(i, i, c);
        }
        let invariant_factors = smith_invariants(&diag)
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        TorsionData {
            free_rank,
            invariant_factors,
        }
    }

    pub fn direct_sum(&self, other: &TorsionData) -> TorsionData {
        let mut orders = self.invariant_factors.clone();
        orders.extend(other.invariant_factors.iter().cloned());
        TorsionData::from_cyclic(self.free_rank + other.free_rank, &orders)
    }

    /// `n` copies of `self`.
    pub fn power(&self, n: usize) -> TorsionData {
        let mut orders = Vec::with_capacity(self.invariant_factors.len() * n);
        for _ in 0..n {
            orders.extend(self.invariant_factors.iter().cloned());
        }
        TorsionData::from_cyclic(self.free_rank * n, &orders)
    }
}

impl fmt::Display for TorsionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn smallest_nonzero(a: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..a.rows() {
        for j in from..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.get(bi, bj).abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

struct SmithState {
    a: IntMatrix,
    left: Option<IntMatrix>,
    right: Option<IntMatrix>,
}

impl SmithState {
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        if let Some(l) = &mut self.left {
            l.swap_rows(x, y);
        }
    }
    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        if let Some(r) = &mut self.right {
            r.swap_cols(x, y);
        }
    }
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_row(dst, src, f);
        if let Some(l) = &mut self.left {
            l.add_row(dst, src, f);
        }
    }
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_col(dst, src, f);
        if let Some(r) = &mut self.right {
            r.add_col(dst, src, f);
        }
    }
    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(l) = &mut self.left {
            l.negate_row(i);
        }
    }

    fn run(&mut self) {
        let (m, n) = (self.a.rows(), self.a.cols());
        for t in 0..m.min(n) {
            loop {
                let Some((pi, pj)) = smallest_nonzero(&self.a, t) else {
                    return;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let pivot = self.a.get(t, t).clone();
                let mut dirty = false;
                for i in t + 1..m {
                    let q = self.a.get(i, t).div_floor(&pivot);
                    self.add_row(i, t, &-q);
                    dirty |= !self.a.get(i, t).is_zero();
                }
                for j in t + 1..n {
                    let q = self.a.get(t, j).div_floor(&pivot);
                    self.add_col(j, t, &-q);
                    dirty |= !self.a.get(t, j).is_zero();
                }
                if dirty {
                    continue;
                }
                let offender = (t + 1..m)
                    .find(|&i| (t + 1..n).any(|j| !self.a.get(i, j).is_multiple_of(&pivot)));
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form with transforms, pivoting on the smallest nonzero
/// entry of the remaining block.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut st = SmithState {
        a: a.clone(),
        left: Some(IntMatrix::identity(a.rows())),
        right: Some(IntMatrix::identity(a.cols())),
    };
    st.run();
    SmithDecomposition {
        diagonal: st.a,
        left: st.left.unwrap(),
        right: st.right.unwrap(),
    }
}

/// Nonzero Smith invariants without building the transforms.
pub fn smith_invariants(a: &IntMatrix) -> Vec<BigInt> {
    let mut st = SmithState {
        a: a.clone(),
        left: None,
        right: None,
    };
    st.run();
    let n = a.rows().min(a.cols());
    (0..n)
        .map(|i| st.a.get(i, i).clone())
        .filter(|d| !d.is_zero())
        .collect()
}

/// Row-style Hermite normal form `H = U·A`.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub form: IntMatrix,
    pub transform: IntMatrix,
    /// Number of nonzero rows; they come first.
    pub rank: usize,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

/// Hermite normal form: pivots positive, entries above each pivot reduced
/// into `[0, pivot)`, zero rows at the bottom.
pub fn hermite_row_form(a: &IntMatrix) -> HermiteForm {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        // Euclid down column c until a single nonzero remains at row r.
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if h.get(i, c).is_zero() {
                    continue;
                }
                match best {
                    Some(b) if h.get(b, c).abs() <= h.get(i, c).abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..m {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                h.add_row(i, r, &-&q);
                u.add_row(i, r, &-q);
                done &= h.get(i, c).is_zero();
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let p = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&p);
            h.add_row(i, r, &-&q);
            u.add_row(i, r, &-q);
        }
        pivots.push(c);
        r += 1;
    }
    HermiteForm {
        form: h,
        transform: u,
        rank: r,
        pivots,
    }
}

/// Integer kernel (row vectors `x` with `x·A = 0`) and saturation of the
/// row space, both as Hermite-reduced bases.
#[derive(Clone, Debug)]
pub struct KernelSaturation {
    pub kernel: IntMatrix,
    pub saturation: IntMatrix,
}

pub fn kernel_and_saturation(a: &IntMatrix) -> KernelSaturation {
    KernelSaturation {
        kernel: left_kernel(a),
        saturation: saturate(a),
    }
}

/// Saturated basis of the integer left kernel, in Hermite form.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let hf = hermite_row_form(a);
    let m = a.rows();
    let rows: Vec<Vec<BigInt>> = (hf.rank..m).map(|i| hf.transform.row(i).to_vec()).collect();
    let k = IntMatrix::from_big_rows(m, rows);
    let hk = hermite_row_form(&k);
    hk.form.take_rows(hk.rank)
}

/// Hermite basis of the saturation `(span_Q rows) ∩ Z^n`.
pub fn saturate(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.invariant_factors().len();
    if r == 0 {
        return IntMatrix::zeros(0, a.cols());
    }
    // Rows of right^{-1} form a lattice basis; U·A = D·right^{-1} so the
    // first r of them span the saturation.
    let inv = unimodular_inverse(&snf.right);
    let hf = hermite_row_form(&inv.take_rows(r));
    hf.form.take_rows(hf.rank)
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(u: &IntMatrix) -> IntMatrix {
    let hf = hermite_row_form(u);
    debug_assert_eq!(hf.form, IntMatrix::identity(u.rows()), "not unimodular");
    hf.transform
}

/// Invariants of `Z^ambient_rank / rowspan(sub)`.
pub fn quotient_invariants(ambient_rank: usize, sub: &IntMatrix) -> TorsionData {
    assert_eq!(sub.cols(), ambient_rank, "sublattice width mismatch");
    let factors = smith_invariants(sub);
    let rank = factors.len();
    TorsionData {
        free_rank: ambient_rank - rank,
        invariant_factors: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Content (gcd of entries) of an integer vector.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Integer coordinates of `v` in the basis given by the rows of `hermite`
/// (a full-rank Hermite form), or `None` if `v` is not in the row lattice.
pub fn solve_in_hermite(
    hermite: &IntMatrix,
    pivots: &[usize],
    v: &[BigInt],
) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(pivots.len());
    for (i, &c) in pivots.iter().enumerate() {
        let p = hermite.get(i, c);
        let (q, r) = rest[c].div_rem(p);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (j, x) in rest.iter_mut().enumerate() {
                *x -= &q * hermite.get(i, j);
            }
        }
        coords.push(q);
    }
    if rest.iter().all(Zero::is_zero) {
        Some(coords)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[&[i64]]) -> IntMatrix {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows(cols, &rows)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_small_examples() {
        let a = m(2, &[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal, m(2, &[&[2, 0], &[0, 4]]));
        assert_eq!(s.left.mul(&a).mul(&s.right), s.diagonal);

        let id = IntMatrix::identity(3);
        assert_eq!(smith_normal_form(&id).diagonal, id);

        let z = IntMatrix::zeros(2, 2);
        assert_eq!(smith_normal_form(&z).diagonal, z);
        assert_eq!(quotient_invariants(2, &z), TorsionData::free(2));
    }

    #[test]
    fn snf_fixes_divisibility() {
        let a = m(2, &[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.invariant_factors(), big(&[1, 6]));
        assert_eq!(s.left.mul(&a).mul(&s.right), s.diagonal);
    }

    #[test]
    fn hermite_examples() {
        let hf = hermite_row_form(&m(2, &[&[2, 0], &[1, 1]]));
        assert_eq!(hf.form, m(2, &[&[1, 1], &[0, 2]]));
        assert_eq!(hf.transform.mul(&m(2, &[&[2, 0], &[1, 1]])), hf.form);
        assert_eq!(hf.transform.det().abs(), BigInt::one());

        let hf = hermite_row_form(&IntMatrix::identity(3));
        assert_eq!(hf.form, IntMatrix::identity(3));
        assert_eq!(hf.transform, IntMatrix::identity(3));

        let hf = hermite_row_form(&m(2, &[&[0, 0]]));
        assert_eq!(hf.form, m(2, &[&[0, 0]]));
        assert_eq!(hf.rank, 0);
    }

    #[test]
    fn kernel_examples() {
        let ks = kernel_and_saturation(&m(1, &[&[2], &[3]]));
        assert_eq!(ks.kernel, m(2, &[&[3, -2]]));
        assert_eq!(ks.saturation, m(1, &[&[1]]));

        let ks = kernel_and_saturation(&IntMatrix::identity(3));
        assert_eq!(ks.kernel.rows(), 0);
        assert_eq!(ks.saturation, IntMatrix::identity(3));

        let ks = kernel_and_saturation(&m(2, &[&[2, 4]]));
        assert_eq!(ks.saturation, m(2, &[&[1, 2]]));
        assert_eq!(ks.kernel.rows(), 0);
    }

    #[test]
    fn quotient_examples() {
        let t = quotient_invariants(2, &m(2, &[&[2, 0], &[0, 3]]));
        assert_eq!(
            t,
            TorsionData {
                free_rank: 0,
                invariant_factors: big(&[6])
            }
        );
        assert_eq!(
            quotient_invariants(2, &m(2, &[&[1, 0]])),
            TorsionData::free(1)
        );
        let t = quotient_invariants(2, &m(2, &[&[1, 0], &[1, 2]]));
        assert_eq!(
            t,
            TorsionData {
                free_rank: 0,
                invariant_factors: big(&[2])
            }
        );
    }

    #[test]
    fn torsion_direct_sums_recombine() {
        let a = TorsionData::from_cyclic(0, &big(&[2]));
        let b = TorsionData::from_cyclic(1, &big(&[3]));
        assert_eq!(
            a.direct_sum(&b),
            TorsionData {
                free_rank: 1,
                invariant_factors: big(&[6])
            }
        );
        assert_eq!(a.power(2).invariant_factors, big(&[2, 2]));
        assert_eq!(TorsionData::free(0).to_string(), "0");
        assert_eq!(b.to_string(), "Z + Z/3");
    }

    #[test]
    fn solve_in_hermite_membership() {
        let h = m(2, &[&[1, 1], &[0, 2]]);
        assert_eq!(
            solve_in_hermite(&h, &[0, 1], &big(&[3, 5])),
            Some(big(&[3, 1]))
        );
        assert_eq!(solve_in_hermite(&h, &[0, 1], &big(&[0, 1])), None);
    }

    #[test]
    fn determinant() {
        assert_eq!(
            m(3, &[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).det(),
            BigInt::from(6)
        );
        assert_eq!(m(2, &[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(m(2, &[&[1, 2], &[2, 4]]).det(), BigInt::zero());
    }
}
