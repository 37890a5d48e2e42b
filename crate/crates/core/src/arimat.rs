//! Oriented arithmetic matroid of a toric (codimension one) arrangement.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arrangement::{layer_components, Arrangement, Character, Layer, LayerPoset, UnityRoot};
use crate::intlat::{content, left_kernel, quotient_invariants, IntMatrix};
use crate::{Error, Result};

/// Ordered atoms `(χ_i, c_i)` of a toric arrangement. The order fixes NBC
/// sets and relation signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    pub ambient_rank: usize,
    pub characters: Vec<Vec<BigInt>>,
    pub constants: Vec<UnityRoot>,
}

/// Bitmask of atom indices.
pub type AtomMask = u64;

pub fn mask_of(set: &[usize]) -> AtomMask {
    set.iter().fold(0, |m, &i| m | 1 << i)
}

pub fn members(mask: AtomMask) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

impl GroundSet {
    /// Each character must be primitive.
    pub fn new(ambient_rank: usize, atoms: Vec<(Character, UnityRoot)>) -> Result<Self> {
        let mut characters = Vec::new();
        let mut constants = Vec::new();
        for (chi, c) in atoms {
            if chi.rank() != ambient_rank {
                return Err(Error::WrongLength {
                    expected: ambient_rank,
                    found: chi.rank(),
                });
            }
            if chi.is_zero() {
                return Err(Error::ZeroCharacter);
            }
            if !content(&chi.0).is_one() {
                return Err(Error::NotPrimitive);
            }
            characters.push(chi.0);
            constants.push(c);
        }
        assert!(characters.len() <= 64, "at most 64 atoms");
        Ok(GroundSet {
            ambient_rank,
            characters,
            constants,
        })
    }

    /// Ground set of a divisorial arrangement, in subtorus order.
    pub fn from_arrangement(arr: &Arrangement) -> Result<Self> {
        let mut atoms = Vec::new();
        for (i, s) in arr.subtori.iter().enumerate() {
            if s.codim() != 1 {
                return Err(Error::NotDivisorial(arr.sources[i], s.codim()));
            }
            atoms.push((Character(s.sub.row(0).to_vec()), s.point[0].clone()));
        }
        GroundSet::new(arr.ambient_rank, atoms)
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn full_mask(&self) -> AtomMask {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    fn matrix(&self, set: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = set.iter().map(|&i| self.characters[i].clone()).collect();
        IntMatrix::from_big_rows(self.ambient_rank, rows)
    }

    pub fn rank_of(&self, set: &[usize]) -> usize {
        if set.is_empty() {
            return 0;
        }
        self.matrix(set).rank()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.rank_of(set) == set.len()
    }

    pub fn equations(&self, set: &[usize]) -> Vec<(Character, UnityRoot)> {
        set.iter()
            .map(|&i| {
                (
                    Character(self.characters[i].clone()),
                    self.constants[i].clone(),
                )
            })
            .collect()
    }

    /// Connected components of `∩_{a∈A} S_a`.
    pub fn components(&self, set: &[usize]) -> Result<Vec<Layer>> {
        match layer_components(self.ambient_rank, &self.equations(set)) {
            Err(Error::InconsistentConstants) => Err(Error::EmptyIntersection),
            other => other,
        }
    }

    /// `m(A)`: number of connected components of `∩_{a∈A} S_a`.
    pub fn multiplicity(&self, set: &[usize]) -> Result<usize> {
        Ok(self.components(set)?.len())
    }

    /// Torsion order of `Λ / ⟨χ_a⟩`: the multiplicity with all constants 1.
    pub fn lattice_multiplicity(&self, set: &[usize]) -> BigInt {
        quotient_invariants(self.ambient_rank, &self.matrix(set)).torsion_order()
    }

    /// The unique circuit in a set of corank one.
    pub fn fundamental_circuit(&self, set: &[usize]) -> Result<OrientedCircuit> {
        let rank = self.rank_of(set);
        if set.len() != rank + 1 {
            return Err(Error::NotCorank1 {
                size: set.len(),
                rank,
            });
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        let kernel = left_kernel(&self.matrix(&sorted));
        debug_assert_eq!(kernel.rows(), 1);
        let mut support = Vec::new();
        let mut relation = Vec::new();
        for (k, &i) in sorted.iter().enumerate() {
            let r = kernel.get(0, k);
            if !r.is_zero() {
                support.push(i);
                relation.push(r.clone());
            }
        }
        Ok(OrientedCircuit::new(support, relation))
    }

    /// All circuits contained in `within`.
    pub fn circuits(&self, within: AtomMask) -> Vec<OrientedCircuit> {
        let mut out = Vec::new();
        for sub in subsets_by_size(within) {
            let set = members(sub);
            if set.len() < 2 || self.rank_of(&set) + 1 != set.len() {
                continue;
            }
            if set.iter().all(|&i| {
                let rest: Vec<usize> = set.iter().copied().filter(|&j| j != i).collect();
                self.is_independent(&rest)
            }) {
                out.push(self.fundamental_circuit(&set).expect("corank one"));
            }
        }
        out
    }

    /// Independent subsets of `within`, including the empty set.
    pub fn independent_sets(&self, within: AtomMask) -> Vec<AtomMask> {
        subsets_by_size(within)
            .into_iter()
            .filter(|&m| self.is_independent(&members(m)))
            .collect()
    }

    /// Every independent set spans a saturated sublattice.
    pub fn is_unimodular(&self) -> bool {
        self.independent_sets(self.full_mask())
            .into_iter()
            .all(|m| self.lattice_multiplicity(&members(m)).is_one())
    }

    /// Ground set with every character negated.
    pub fn negated(&self) -> GroundSet {
        GroundSet {
            ambient_rank: self.ambient_rank,
            characters: self
                .characters
                .iter()
                .map(|c| c.iter().map(|x| -x).collect())
                .collect(),
            constants: self
                .constants
                .iter()
                .map(|c| UnityRoot::from_rational(-c.value().clone()))
                .collect(),
        }
    }
}

/// Subsets of `mask` ordered by size, then lexicographically.
pub fn subsets_by_size(mask: AtomMask) -> Vec<AtomMask> {
    let elems = members(mask);
    let mut out: Vec<AtomMask> = (0u64..(1u64 << elems.len()))
        .map(|bits| {
            elems
                .iter()
                .enumerate()
                .filter(|(k, _)| bits >> k & 1 == 1)
                .fold(0, |m, (_, &i)| m | 1 << i)
        })
        .collect();
    out.sort_by_key(|&m| (m.count_ones(), members(m)));
    out
}

/// Circuit with its primitive relation `Σ r_i χ_i = 0`, normalised so the
/// entry on the smallest index is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedCircuit {
    pub support: Vec<usize>,
    pub relation: Vec<BigInt>,
    pub signs: Vec<i8>,
}

impl OrientedCircuit {
    pub fn new(support: Vec<usize>, mut relation: Vec<BigInt>) -> Self {
        if relation.first().is_some_and(|r| r.is_negative()) {
            relation.iter_mut().for_each(|r| *r = -r.clone());
        }
        let signs = relation
            .iter()
            .map(|r| if r.is_negative() { -1 } else { 1 })
            .collect();
        OrientedCircuit {
            support,
            relation,
            signs,
        }
    }

    pub fn mask(&self) -> AtomMask {
        mask_of(&self.support)
    }

    pub fn sign_of(&self, atom: usize) -> Option<i8> {
        self.support
            .iter()
            .position(|&i| i == atom)
            .map(|k| self.signs[k])
    }

    /// Same circuit with every sign reversed (not renormalised).
    pub fn flipped(&self) -> OrientedCircuit {
        OrientedCircuit {
            support: self.support.clone(),
            relation: self.relation.iter().map(|r| -r).collect(),
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    /// The relation with coefficients `sign_i · m(C∖{i})` (trivial constants).
    /// It equals `m(C)` times the primitive relation.
    pub fn multiplicity_scaled(&self, ground: &GroundSet) -> Vec<BigInt> {
        self.support
            .iter()
            .zip(&self.signs)
            .map(|(&i, &s)| {
                let rest: Vec<usize> = self.support.iter().copied().filter(|&j| j != i).collect();
                ground.lattice_multiplicity(&rest) * BigInt::from(s)
            })
            .collect()
    }
}

/// `C/A` is a positroid when the signs on `C∖A` all agree.
pub fn is_positroid(circuit: &OrientedCircuit, set: &[usize]) -> bool {
    let mut outside = circuit
        .support
        .iter()
        .zip(&circuit.signs)
        .filter(|(i, _)| !set.contains(i))
        .map(|(_, &s)| s);
    match outside.next() {
        None => true,
        Some(first) => outside.all(|s| s == first),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NbcCertificate {
    pub layer: usize,
    pub set: Vec<usize>,
    pub independent: bool,
    pub no_broken_circuit: bool,
}

/// NBC sets of the geometric lattice below `layer`, with respect to the
/// ground set order.
pub fn nbc_sets(ground: &GroundSet, poset: &LayerPoset, layer: usize) -> Vec<NbcCertificate> {
    let below = mask_of(&poset.atoms_below[layer].iter().copied().collect::<Vec<_>>());
    let codim = poset.layers[layer].codim();
    let broken: Vec<AtomMask> = ground
        .circuits(below)
        .iter()
        .map(|c| c.mask() & !(1u64 << c.support[0]))
        .collect();
    subsets_by_size(below)
        .into_iter()
        .filter(|m| m.count_ones() as usize == codim)
        .filter(|&m| ground.is_independent(&members(m)))
        .filter(|&m| broken.iter().all(|&b| b & m != b))
        .map(|m| NbcCertificate {
            layer,
            set: members(m),
            independent: true,
            no_broken_circuit: true,
        })
        .collect()
}

pub fn to_usize(x: &BigInt) -> usize {
    x.to_usize().expect("multiplicity out of range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_layer_poset, AtomSpec};

    fn ground(rows: &[&[i64]]) -> GroundSet {
        let d = rows[0].len();
        GroundSet::new(
            d,
            rows.iter()
                .map(|r| (Character::from_i64(r), UnityRoot::one()))
                .collect(),
        )
        .unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ranks() {
        let g = ground(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(g.rank_of(&[0, 1, 2]), 2);
        assert_eq!(g.rank_of(&[]), 0);
        let g = GroundSet {
            ambient_rank: 1,
            characters: vec![big(&[2]), big(&[3])],
            constants: vec![UnityRoot::one(), UnityRoot::one()],
        };
        assert_eq!(g.rank_of(&[0, 1]), 1);
        let c = g.fundamental_circuit(&[0, 1]).unwrap();
        assert_eq!(c.relation, big(&[3, -2]));
    }

    #[test]
    fn multiplicities() {
        let g = ground(&[&[1, 0], &[1, 2]]);
        assert_eq!(g.multiplicity(&[0, 1]).unwrap(), 2);
        assert_eq!(g.multiplicity(&[]).unwrap(), 1);
        let g = GroundSet::new(
            1,
            vec![
                (Character::from_i64(&[1]), UnityRoot::one()),
                (Character::from_i64(&[1]), UnityRoot::new(1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(g.multiplicity(&[0, 1]), Err(Error::EmptyIntersection));
    }

    #[test]
    fn circuits_and_positroids() {
        let g = ground(&[&[1, 0], &[0, 1], &[1, 1]]);
        let c = g.fundamental_circuit(&[0, 1, 2]).unwrap();
        assert_eq!(c.relation, big(&[1, 1, -1]));
        assert!(is_positroid(&c, &[2]));
        assert!(!is_positroid(&c, &[0]));
        assert!(is_positroid(&c, &[0, 1, 2]));

        let g = ground(&[&[1, 0], &[0, 1], &[1, 2]]);
        let c = g.fundamental_circuit(&[0, 1, 2]).unwrap();
        assert_eq!(c.relation, big(&[1, 2, -1]));
        assert_eq!(c.multiplicity_scaled(&g), big(&[1, 2, -1]));
        assert!(matches!(
            g.fundamental_circuit(&[0, 1]),
            Err(Error::NotCorank1 { .. })
        ));
    }

    #[test]
    fn nbc_three_hypertori() {
        let p = build_layer_poset(
            2,
            vec![
                AtomSpec::hypertorus(&[1, 0]),
                AtomSpec::hypertorus(&[0, 1]),
                AtomSpec::hypertorus(&[1, 1]),
            ],
        )
        .unwrap();
        let g = GroundSet::from_arrangement(&p.arrangement).unwrap();
        let sets: Vec<Vec<usize>> = nbc_sets(&g, &p, 4).into_iter().map(|c| c.set).collect();
        assert_eq!(sets, vec![vec![0, 1], vec![0, 2]]);
        let s = p.atom_layers[1];
        assert_eq!(nbc_sets(&g, &p, s)[0].set, vec![1]);
        assert_eq!(nbc_sets(&g, &p, 0)[0].set, Vec::<usize>::new());
    }

    #[test]
    fn rejects_non_primitive() {
        let r = GroundSet::new(1, vec![(Character::from_i64(&[2]), UnityRoot::one())]);
        assert_eq!(r, Err(Error::NotPrimitive));
    }
}
