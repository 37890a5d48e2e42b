//! Integral cohomology of the complement, assembled layer by layer.
//!
//! Each layer `W` contributes `H^p(W) ⊗ H̃_s(Δ(T, W))` in bidegree
//! `(p, q)` with `q = 2·codim W − 2 − s`. `H^p(W)` is free of rank
//! `C(dim W, p)`, so the tensor product is `C(dim W, p)` copies of `H̃_s`.
//! The torus itself enters through the void interval (`s = −2`, `q = 0`).

use std::collections::BTreeMap;

use crate::arrangement::LayerPoset;
use crate::intlat::TorsionData;
use crate::topo::{order_complex, reduced_homology, HomologyGroup};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologySummand {
    pub layer: usize,
    pub p: usize,
    /// Homology degree of the interval `(T, W)`.
    pub s: i64,
    pub q: usize,
    /// Total degree `p + q`.
    pub degree: usize,
    pub group: TorsionData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub ambient_rank: usize,
    /// `H^k` for `k = 0..=2·ambient_rank`.
    pub degrees: Vec<TorsionData>,
    pub summands: Vec<CohomologySummand>,
}

impl BettiTable {
    pub fn free_ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|g| g.free_rank).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Entry {
    pub group: TorsionData,
    /// `p + 2q`: the graded piece of the Leray filtration it computes.
    pub filtration_degree: usize,
    pub layers: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Table {
    pub ambient_rank: usize,
    /// Nonzero entries keyed by `(p, q)`.
    pub entries: BTreeMap<(usize, usize), E2Entry>,
}

impl E2Table {
    pub fn get(&self, p: usize, q: usize) -> TorsionData {
        self.entries
            .get(&(p, q))
            .map(|e| e.group.clone())
            .unwrap_or_default()
    }

    /// `⊕_{p+q=k} E_2^{p,q}`.
    pub fn total(&self, k: usize) -> TorsionData {
        self.entries
            .iter()
            .filter(|((p, q), _)| p + q == k)
            .fold(TorsionData::default(), |acc, (_, e)| {
                acc.direct_sum(&e.group)
            })
    }
}

/// Reduced homology of `Δ(T, W)` for every layer `W`.
pub fn interval_homology(poset: &LayerPoset) -> Vec<Vec<HomologyGroup>> {
    (0..poset.len())
        .map(|w| {
            let cx = order_complex(poset, 0, w).expect("torus is the minimum");
            reduced_homology(&cx)
        })
        .collect()
}

fn summands_from(poset: &LayerPoset, homology: &[Vec<HomologyGroup>]) -> Vec<CohomologySummand> {
    let mut out = Vec::new();
    for (w, groups) in homology.iter().enumerate() {
        let layer = &poset.layers[w];
        let (codim, dim) = (layer.codim() as i64, layer.dim());
        for g in groups.iter().filter(|g| !g.group.is_zero()) {
            let q = 2 * codim - 2 - g.degree;
            assert!(q >= 0, "homology above the expected range");
            let q = q as usize;
            for p in 0..=dim {
                out.push(CohomologySummand {
                    layer: w,
                    p,
                    s: g.degree,
                    q,
                    degree: p + q,
                    group: g.group.power(binomial(dim, p)),
                });
            }
        }
    }
    out
}

pub fn cohomology_summands(poset: &LayerPoset) -> Vec<CohomologySummand> {
    summands_from(poset, &interval_homology(poset))
}

/// `H^k(M; Z)` for every `k`, with the per-layer breakdown.
pub fn cohomology_groups(poset: &LayerPoset) -> BettiTable {
    let d = poset.ambient_rank();
    let summands = cohomology_summands(poset);
    let mut degrees = vec![TorsionData::default(); 2 * d + 1];
    for s in &summands {
        degrees[s.degree] = degrees[s.degree].direct_sum(&s.group);
    }
    BettiTable {
        ambient_rank: d,
        degrees,
        summands,
    }
}

/// Betti numbers `b_0, b_1, …` with trailing zeros removed.
pub fn poincare_polynomial(poset: &LayerPoset) -> Vec<usize> {
    let mut ranks = cohomology_groups(poset).free_ranks();
    while ranks.len() > 1 && ranks.last() == Some(&0) {
        ranks.pop();
    }
    ranks
}

pub fn e2_page(poset: &LayerPoset) -> E2Table {
    let mut entries: BTreeMap<(usize, usize), E2Entry> = BTreeMap::new();
    for s in cohomology_summands(poset) {
        if s.group.is_zero() {
            continue;
        }
        let e = entries.entry((s.p, s.q)).or_insert_with(|| E2Entry {
            group: TorsionData::default(),
            filtration_degree: s.p + 2 * s.q,
            layers: Vec::new(),
        });
        e.group = e.group.direct_sum(&s.group);
        if !e.layers.contains(&s.layer) {
            e.layers.push(s.layer);
        }
    }
    E2Table {
        ambient_rank: poset.ambient_rank(),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_layer_poset, AtomSpec, Character, UnityRoot};

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn punctured_circle() {
        let p = build_layer_poset(1, vec![AtomSpec::hypertorus(&[1])]).unwrap();
        assert_eq!(poincare_polynomial(&p), vec![1, 2]);
        let t = cohomology_groups(&p);
        assert!(t.degrees.iter().all(|g| g.invariant_factors.is_empty()));
    }

    #[test]
    fn twice_punctured_circle() {
        let a = AtomSpec::new(vec![Character::from_i64(&[2])], vec![UnityRoot::one()]);
        let p = build_layer_poset(1, vec![a]).unwrap();
        assert_eq!(poincare_polynomial(&p), vec![1, 3]);
    }

    #[test]
    fn three_hypertori() {
        let p = build_layer_poset(
            2,
            vec![
                AtomSpec::hypertorus(&[1, 0]),
                AtomSpec::hypertorus(&[0, 1]),
                AtomSpec::hypertorus(&[1, 1]),
            ],
        )
        .unwrap();
        assert_eq!(poincare_polynomial(&p), vec![1, 5, 6]);
    }

    #[test]
    fn codim_two_point() {
        let a = AtomSpec::new(
            vec![Character::from_i64(&[1, 0]), Character::from_i64(&[0, 1])],
            vec![UnityRoot::one(), UnityRoot::one()],
        );
        let p = build_layer_poset(2, vec![a]).unwrap();
        assert_eq!(poincare_polynomial(&p), vec![1, 2, 1, 1]);
    }

    #[test]
    fn empty_arrangement_is_torus() {
        for d in 0..=4 {
            let p = build_layer_poset(d, vec![]).unwrap();
            let expected: Vec<usize> = (0..=d).map(|k| binomial(d, k)).collect();
            assert_eq!(poincare_polynomial(&p), expected);
            let e2 = e2_page(&p);
            assert!(e2.entries.keys().all(|&(_, q)| q == 0));
        }
    }

    #[test]
    fn e2_of_punctured_circle() {
        let p = build_layer_poset(1, vec![AtomSpec::hypertorus(&[1])]).unwrap();
        let e2 = e2_page(&p);
        assert_eq!(e2.get(0, 0), TorsionData::free(1));
        assert_eq!(e2.get(1, 0), TorsionData::free(1));
        assert_eq!(e2.get(0, 1), TorsionData::free(1));
        assert_eq!(e2.entries.len(), 3);
        assert_eq!(e2.entries[&(0, 1)].filtration_degree, 2);
    }
}
