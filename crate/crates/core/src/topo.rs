//! Order complexes of poset intervals and their integral reduced homology.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use crate::arrangement::LayerPoset;
use crate::intlat::{smith_invariants, IntMatrix, TorsionData};
use crate::{Error, Result};

/// Finite simplicial complex given by its facets.
///
/// `facets == [[]]` is the empty complex (only the empty face); the void
/// complex has no faces at all and stands for a degenerate interval `[x, x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertex_count: usize,
    pub facets: Vec<Vec<usize>>,
    void: bool,
    /// Poset element behind each vertex, for order complexes.
    pub labels: Vec<usize>,
}

impl SimplicialComplex {
    pub fn void() -> Self {
        SimplicialComplex {
            vertex_count: 0,
            facets: Vec::new(),
            void: true,
            labels: Vec::new(),
        }
    }

    pub fn empty() -> Self {
        SimplicialComplex {
            vertex_count: 0,
            facets: vec![Vec::new()],
            void: false,
            labels: Vec::new(),
        }
    }

    /// Keeps only maximal faces; each face is sorted.
    pub fn from_facets(vertex_count: usize, faces: Vec<Vec<usize>>) -> Self {
        let mut faces: Vec<Vec<usize>> = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                assert!(f.iter().all(|&v| v < vertex_count), "vertex out of range");
                f
            })
            .collect();
        faces.sort();
        faces.dedup();
        let facets: Vec<Vec<usize>> = faces
            .iter()
            .filter(|f| !faces.iter().any(|g| g.len() > f.len() && is_subset(f, g)))
            .cloned()
            .collect();
        let facets = if facets.is_empty() {
            vec![Vec::new()]
        } else {
            facets
        };
        SimplicialComplex {
            vertex_count,
            facets,
            void: false,
            labels: (0..vertex_count).collect(),
        }
    }

    pub fn is_void(&self) -> bool {
        self.void
    }

    /// Dimension; `-1` for the empty complex and `-2` for the void one.
    pub fn dim(&self) -> i64 {
        if self.void {
            return -2;
        }
        self.facets
            .iter()
            .map(|f| f.len() as i64 - 1)
            .max()
            .unwrap_or(-1)
    }

    /// All faces grouped by dimension, index 0 holding the empty face.
    fn faces_by_size(&self) -> Vec<Vec<Vec<usize>>> {
        let top = (self.dim() + 2).max(0) as usize;
        let mut by_size: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); top];
        for f in &self.facets {
            let n = f.len();
            for mask in 0u64..(1u64 << n) {
                let face: Vec<usize> = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                by_size[face.len()].insert(face);
            }
        }
        by_size
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect()
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Reduced integral homology in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: i64,
    pub group: TorsionData,
}

/// Boundary from faces of size `k` to faces of size `k - 1` (rows are the
/// larger faces).
fn boundary(big: &[Vec<usize>], small: &[Vec<usize>]) -> IntMatrix {
    let mut m = IntMatrix::zeros(big.len(), small.len());
    for (i, f) in big.iter().enumerate() {
        for skip in 0..f.len() {
            let face: Vec<usize> = f
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &v)| v)
                .collect();
            let j = small
                .binary_search(&face)
                .expect("complex not closed under faces");
            let sign = if skip % 2 == 0 { 1 } else { -1 };
            m.set(i, j, BigInt::from(sign));
        }
    }
    m
}

/// Reduced homology `H̃_s` for `s` from `-1` (or `-2` for the void complex)
/// up to the dimension, zero groups included.
pub fn reduced_homology(cx: &SimplicialComplex) -> Vec<HomologyGroup> {
    if cx.is_void() {
        return vec![HomologyGroup {
            degree: -2,
            group: TorsionData::free(1),
        }];
    }
    let faces = cx.faces_by_size();
    // boundary_invariants[k]: Smith invariants of ∂ from size k+1 faces to size k.
    let invariants: Vec<Vec<BigInt>> = (0..faces.len())
        .map(|k| {
            if k + 1 < faces.len() {
                smith_invariants(&boundary(&faces[k + 1], &faces[k]))
            } else {
                Vec::new()
            }
        })
        .collect();
    (0..faces.len())
        .map(|k| {
            let out_rank = if k == 0 { 0 } else { invariants[k - 1].len() };
            let in_inv = &invariants[k];
            let free_rank = faces[k].len() - out_rank - in_inv.len();
            HomologyGroup {
                degree: k as i64 - 1,
                group: TorsionData {
                    free_rank,
                    invariant_factors: in_inv.iter().filter(|d| !d.is_one()).cloned().collect(),
                },
            }
        })
        .collect()
}

/// Reduced homology of `cx` in degree `s` (zero outside the computed range).
pub fn homology_in_degree(groups: &[HomologyGroup], s: i64) -> TorsionData {
    groups
        .iter()
        .find(|g| g.degree == s)
        .map(|g| g.group.clone())
        .unwrap_or_default()
}

/// Order complex of the open interval `(lower, upper)`.
pub fn order_complex(poset: &LayerPoset, lower: usize, upper: usize) -> Result<SimplicialComplex> {
    if lower == upper {
        return Ok(SimplicialComplex::void());
    }
    if !poset.leq(lower, upper) {
        return Err(Error::NotComparable(lower, upper));
    }
    let inner = poset.open_interval(lower, upper);
    if inner.is_empty() {
        return Ok(SimplicialComplex::empty());
    }
    let pos = |x: usize| inner.iter().position(|&y| y == x).unwrap();
    let minimal: Vec<usize> = inner
        .iter()
        .copied()
        .filter(|&x| !inner.iter().any(|&y| poset.lt(y, x)))
        .collect();
    let mut facets = Vec::new();
    let mut stack: Vec<Vec<usize>> = minimal.into_iter().map(|x| vec![x]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        let ups: Vec<usize> = poset
            .covers
            .iter()
            .filter(|&&(a, b)| a == last && inner.contains(&b))
            .map(|&(_, b)| b)
            .collect();
        if ups.is_empty() {
            facets.push(chain.iter().map(|&x| pos(x)).collect());
        } else {
            for b in ups {
                let mut next = chain.clone();
                next.push(b);
                stack.push(next);
            }
        }
    }
    let mut cx = SimplicialComplex::from_facets(inner.len(), facets);
    cx.labels = inner;
    Ok(cx)
}

/// Möbius function `μ(lower, upper)` of the poset of layers.
pub fn mobius(poset: &LayerPoset, lower: usize, upper: usize) -> Result<i64> {
    if !poset.leq(lower, upper) {
        return Err(Error::NotComparable(lower, upper));
    }
    // Layer indices are a linear extension of the order.
    let chain: Vec<usize> = (lower..=upper)
        .filter(|&z| poset.leq(lower, z) && poset.leq(z, upper))
        .collect();
    let mut mu: Vec<i64> = Vec::with_capacity(chain.len());
    for (i, &z) in chain.iter().enumerate() {
        if i == 0 {
            mu.push(1);
            continue;
        }
        let s: i64 = (0..i)
            .filter(|&k| poset.lt(chain[k], z))
            .map(|k| mu[k])
            .sum();
        mu.push(-s);
    }
    Ok(*mu.last().unwrap())
}

/// `Σ_s (-1)^s rank H̃_s`.
pub fn reduced_euler_characteristic(groups: &[HomologyGroup]) -> i64 {
    groups
        .iter()
        .map(|g| {
            let r = g.group.free_rank as i64;
            if g.degree.rem_euclid(2) == 0 {
                r
            } else {
                -r
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_layer_poset, AtomSpec};

    fn three_hypertori() -> LayerPoset {
        build_layer_poset(
            2,
            vec![
                AtomSpec::hypertorus(&[1, 0]),
                AtomSpec::hypertorus(&[0, 1]),
                AtomSpec::hypertorus(&[1, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn order_complex_examples() {
        let p = three_hypertori();
        let cx = order_complex(&p, 0, 4).unwrap();
        assert_eq!(cx.vertex_count, 3);
        assert_eq!(cx.facets, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(order_complex(&p, 0, 1).unwrap(), SimplicialComplex::empty());
        assert!(order_complex(&p, 0, 0).unwrap().is_void());
        assert_eq!(order_complex(&p, 1, 2), Err(Error::NotComparable(1, 2)));
    }

    #[test]
    fn homology_examples() {
        let pts = SimplicialComplex::from_facets(3, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(
            homology_in_degree(&reduced_homology(&pts), 0),
            TorsionData::free(2)
        );

        let h = reduced_homology(&SimplicialComplex::empty());
        assert_eq!(
            h,
            vec![HomologyGroup {
                degree: -1,
                group: TorsionData::free(1)
            }]
        );

        let h = reduced_homology(&SimplicialComplex::void());
        assert_eq!(
            h,
            vec![HomologyGroup {
                degree: -2,
                group: TorsionData::free(1)
            }]
        );
    }

    #[test]
    fn mobius_examples() {
        let p = three_hypertori();
        assert_eq!(mobius(&p, 0, 0).unwrap(), 1);
        assert_eq!(mobius(&p, 0, 1).unwrap(), -1);
        assert_eq!(mobius(&p, 0, 4).unwrap(), 2);
        assert!(mobius(&p, 1, 2).is_err());
    }

    #[test]
    fn euler_characteristic_matches_mobius() {
        let p = three_hypertori();
        for a in 0..p.len() {
            for b in 0..p.len() {
                if p.leq(a, b) {
                    let h = reduced_homology(&order_complex(&p, a, b).unwrap());
                    assert_eq!(reduced_euler_characteristic(&h), mobius(&p, a, b).unwrap());
                }
            }
        }
    }
}
