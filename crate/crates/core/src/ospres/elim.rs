//! Sparse exact elimination: rational echelon forms and integer cokernels.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::intlat::{smith_invariants, IntMatrix, TorsionData};

/// Sparse row sorted by column.
pub type SparseRow<T> = Vec<(usize, T)>;

/// `a - f·b` for sorted sparse rows.
fn axpy(
    a: &[(usize, BigRational)],
    f: &BigRational,
    b: &[(usize, BigRational)],
) -> SparseRow<BigRational> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form over `Q`, built incrementally. Each stored row has a
/// leading 1 at its pivot column and no entries left of it.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: HashMap<usize, SparseRow<BigRational>>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `row` until its leading column is not a pivot.
    fn reduce_leading(&self, mut row: SparseRow<BigRational>) -> SparseRow<BigRational> {
        while let Some((c, v)) = row.first().cloned() {
            match self.rows.get(&c) {
                Some(p) => row = axpy(&row, &v, p),
                None => break,
            }
        }
        row
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow<BigRational>) -> bool {
        let row = self.reduce_leading(row);
        let Some((c, lead)) = row.first().cloned() else {
            return false;
        };
        let inv = lead.recip();
        let row = row.into_iter().map(|(k, v)| (k, v * &inv)).collect();
        self.rows.insert(c, row);
        true
    }

    /// Eliminates every pivot column `< limit` from `row`. Fails with the first
    /// column `< limit` that cannot be eliminated.
    pub fn reduce_below(
        &self,
        row: SparseRow<BigRational>,
        limit: usize,
    ) -> Result<SparseRow<BigRational>, usize> {
        let mut row = row;
        loop {
            let Some(pos) = row.iter().position(|(c, _)| *c < limit) else {
                return Ok(row);
            };
            let (c, v) = row[pos].clone();
            match self.rows.get(&c) {
                Some(p) => row = axpy(&row, &v, p),
                None => return Err(c),
            }
        }
    }
}

/// Cokernel `Z^cols / rowspan` of an integer relation matrix given as sparse
/// rows. Unit pivots are eliminated first; the remainder goes through Smith
/// normal form.
pub fn integer_cokernel(cols: usize, rows: Vec<SparseRow<BigInt>>) -> TorsionData {
    let mut seen: HashSet<Vec<(usize, BigInt)>> = HashSet::new();
    let mut rows: Vec<BTreeMap<usize, BigInt>> = rows
        .into_iter()
        .filter(|r| !r.is_empty())
        .filter(|r| seen.insert(normalise_sign(r)))
        .map(|r| r.into_iter().collect())
        .collect();
    let mut alive_cols: Vec<bool> = vec![true; cols];
    let mut col_rows: HashMap<usize, HashSet<usize>> = HashMap::new();
    for (i, r) in rows.iter().enumerate() {
        for c in r.keys() {
            col_rows.entry(*c).or_default().insert(i);
        }
    }
    let mut alive_rows: Vec<bool> = vec![true; rows.len()];
    loop {
        // Pick a unit entry in the shortest row for less fill-in.
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, r) in rows.iter().enumerate() {
            if !alive_rows[i] {
                continue;
            }
            if let Some((&c, _)) = r.iter().find(|(_, v)| v.abs().is_one()) {
                if best.is_none_or(|(_, _, len)| r.len() < len) {
                    best = Some((i, c, r.len()));
                }
            }
        }
        let Some((pi, pc, _)) = best else { break };
        let pivot_row = rows[pi].clone();
        let unit = pivot_row[&pc].clone();
        let users: Vec<usize> = col_rows
            .get(&pc)
            .map(|s| {
                s.iter()
                    .copied()
                    .filter(|&i| i != pi && alive_rows[i])
                    .collect()
            })
            .unwrap_or_default();
        for i in users {
            let f = &rows[i][&pc] * &unit;
            for (c, v) in &pivot_row {
                let e = rows[i].entry(*c).or_insert_with(BigInt::zero);
                *e -= &f * v;
                if e.is_zero() {
                    rows[i].remove(c);
                    if let Some(s) = col_rows.get_mut(c) {
                        s.remove(&i);
                    }
                } else {
                    col_rows.entry(*c).or_default().insert(i);
                }
            }
            if rows[i].is_empty() {
                alive_rows[i] = false;
            }
        }
        alive_rows[pi] = false;
        for c in pivot_row.keys() {
            if let Some(s) = col_rows.get_mut(c) {
                s.remove(&pi);
            }
        }
        alive_cols[pc] = false;
    }
    let remaining: Vec<usize> = (0..cols).filter(|&c| alive_cols[c]).collect();
    let pos: HashMap<usize, usize> = remaining.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let live: Vec<&BTreeMap<usize, BigInt>> = rows
        .iter()
        .enumerate()
        .filter(|(i, r)| alive_rows[*i] && !r.is_empty())
        .map(|(_, r)| r)
        .collect();
    let mut m = IntMatrix::zeros(live.len(), remaining.len());
    for (i, r) in live.iter().enumerate() {
        for (c, v) in r.iter() {
            m.set(i, pos[c], v.clone());
        }
    }
    let factors = if live.is_empty() {
        Vec::new()
    } else {
        smith_invariants(&m)
    };
    TorsionData::from_cyclic(remaining.len() - factors.len(), &factors)
}

fn normalise_sign(r: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
    let neg = r.first().is_some_and(|(_, v)| v.is_negative());
    r.iter()
        .map(|(c, v)| (*c, if neg { -v.clone() } else { v.clone() }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn zrow(v: &[(usize, i64)]) -> SparseRow<BigInt> {
        v.iter().map(|&(c, x)| (c, BigInt::from(x))).collect()
    }

    #[test]
    fn echelon_rank() {
        let mut e = Echelon::new();
        assert!(e.insert(vec![(0, q(1)), (1, q(2))]));
        assert!(!e.insert(vec![(0, q(2)), (1, q(4))]));
        assert!(e.insert(vec![(1, q(3))]));
        assert_eq!(e.rank(), 2);
        let r = e.reduce_below(vec![(0, q(5)), (1, q(1))], 2).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn cokernels() {
        // Z^2 / <(2, 0), (0, 3)> = Z/6
        let t = integer_cokernel(2, vec![zrow(&[(0, 2)]), zrow(&[(1, 3)])]);
        assert_eq!(
            t,
            TorsionData {
                free_rank: 0,
                invariant_factors: vec![BigInt::from(6)]
            }
        );
        // Z^3 / <(1, 1, 0)> = Z^2
        let t = integer_cokernel(3, vec![zrow(&[(0, 1), (1, 1)])]);
        assert_eq!(t, TorsionData::free(2));
        // Z^2 / <(1, 2), (1, 0)> = Z/2
        let t = integer_cokernel(2, vec![zrow(&[(0, 1), (1, 2)]), zrow(&[(0, 1)])]);
        assert_eq!(
            t,
            TorsionData {
                free_rank: 0,
                invariant_factors: vec![BigInt::from(2)]
            }
        );
    }
}
