//! Atoms, layers and the poset of layers.
//!
//! A layer is a connected component of an intersection of atoms. It is
//! stored as the saturated lattice of characters constant on it (Hermite
//! basis) together with the values of those characters, so two layers are
//! equal exactly when their fields are.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::intlat::{
    hermite_row_form, saturate, smith_normal_form, solve_in_hermite, unimodular_inverse, IntMatrix,
};
use crate::{Error, Result};

/// Element of the character lattice, as exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(pub Vec<BigInt>);

impl Character {
    pub fn from_i64(v: &[i64]) -> Self {
        Character(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

/// A root of unity `exp(2πi·v)` stored as `v ∈ [0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnityRoot(BigRational);

impl UnityRoot {
    pub fn one() -> Self {
        UnityRoot(BigRational::zero())
    }

    /// Reduces `p/q` modulo 1.
    pub fn new(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(p.into(), q.into()))
    }

    pub fn from_rational(v: BigRational) -> Self {
        UnityRoot(reduce_mod_one(v))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_zero()
    }
}

impl std::fmt::Display for UnityRoot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

fn reduce_mod_one(v: BigRational) -> BigRational {
    let fl = v.floor();
    v - fl
}

/// User-level description of an atom: a system `χ_k = c_k`.
///
/// The solution set may be disconnected (e.g. `z² = 1`); its connected
/// components become the subtori of the arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomSpec {
    pub characters: Vec<Character>,
    pub constants: Vec<UnityRoot>,
}

impl AtomSpec {
    pub fn new(characters: Vec<Character>, constants: Vec<UnityRoot>) -> Self {
        AtomSpec {
            characters,
            constants,
        }
    }

    /// Hypertorus `χ = 1`.
    pub fn hypertorus(character: &[i64]) -> Self {
        AtomSpec::new(vec![Character::from_i64(character)], vec![UnityRoot::one()])
    }

    pub fn equations(&self) -> Vec<(Character, UnityRoot)> {
        self.characters
            .iter()
            .cloned()
            .zip(self.constants.iter().cloned())
            .collect()
    }
}

/// Connected component of an intersection of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Layer {
    /// Hermite basis of the saturated lattice of characters constant on the
    /// layer. Its row count is the codimension.
    pub sub: IntMatrix,
    /// Value of each Hermite row on the layer.
    pub point: Vec<UnityRoot>,
}

impl Layer {
    pub fn torus(ambient_rank: usize) -> Self {
        Layer {
            sub: IntMatrix::zeros(0, ambient_rank),
            point: Vec::new(),
        }
    }

    pub fn codim(&self) -> usize {
        self.sub.rows()
    }

    pub fn ambient_rank(&self) -> usize {
        self.sub.cols()
    }

    pub fn dim(&self) -> usize {
        self.ambient_rank() - self.codim()
    }

    pub fn equations(&self) -> Vec<(Character, UnityRoot)> {
        (0..self.codim())
            .map(|i| (Character(self.sub.row(i).to_vec()), self.point[i].clone()))
            .collect()
    }

    fn pivots(&self) -> Vec<usize> {
        (0..self.codim())
            .map(|i| {
                self.sub
                    .row(i)
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("zero row in layer lattice")
            })
            .collect()
    }

    /// Value of a character on the layer, if it is constant there.
    pub fn evaluate(&self, chi: &[BigInt]) -> Option<UnityRoot> {
        let coords = solve_in_hermite(&self.sub, &self.pivots(), chi)?;
        let mut v = BigRational::zero();
        for (a, c) in coords.iter().zip(&self.point) {
            v += BigRational::from_integer(a.clone()) * c.value();
        }
        Some(UnityRoot::from_rational(v))
    }

    /// Whether `other` is a subset of `self`.
    pub fn contains(&self, other: &Layer) -> bool {
        if other.codim() < self.codim() {
            return false;
        }
        (0..self.codim()).all(|i| other.evaluate(self.sub.row(i)).as_ref() == Some(&self.point[i]))
    }
}

fn check_equations(ambient_rank: usize, equations: &[(Character, UnityRoot)]) -> Result<()> {
    for (chi, _) in equations {
        if chi.rank() != ambient_rank {
            return Err(Error::WrongLength {
                expected: ambient_rank,
                found: chi.rank(),
            });
        }
        if chi.is_zero() {
            return Err(Error::ZeroCharacter);
        }
    }
    Ok(())
}

/// Checks that the constants define a homomorphism on the span of the
/// characters and that the span is nonzero.
pub fn validate_atom(ambient_rank: usize, atom: &AtomSpec) -> Result<()> {
    if atom.characters.len() != atom.constants.len() {
        return Err(Error::ConstantCountMismatch {
            characters: atom.characters.len(),
            constants: atom.constants.len(),
        });
    }
    if atom.characters.is_empty() {
        return Err(Error::EmptyAtom);
    }
    layer_components(ambient_rank, &atom.equations()).map(|_| ())
}

/// Connected components of `{z : χ_k(z) = c_k for all k}`.
///
/// Each component shares the saturated lattice of the span; they differ in
/// how the constants extend from the span to its saturation.
pub fn layer_components(
    ambient_rank: usize,
    equations: &[(Character, UnityRoot)],
) -> Result<Vec<Layer>> {
    check_equations(ambient_rank, equations)?;
    if equations.is_empty() {
        return Ok(vec![Layer::torus(ambient_rank)]);
    }
    let rows: Vec<Vec<BigInt>> = equations.iter().map(|(c, _)| c.0.clone()).collect();
    let chars = IntMatrix::from_big_rows(ambient_rank, rows);
    let snf = smith_normal_form(&chars);
    let factors = snf.invariant_factors();
    let r = factors.len();

    // Transformed constants U·c.
    let transformed: Vec<BigRational> = (0..chars.rows())
        .map(|i| {
            let mut v = BigRational::zero();
            for (k, (_, c)) in equations.iter().enumerate() {
                let u = snf.left.get(i, k);
                if !u.is_zero() {
                    v += BigRational::from_integer(u.clone()) * c.value();
                }
            }
            v
        })
        .collect();
    if transformed[r..].iter().any(|v| !v.is_integer()) {
        return Err(Error::InconsistentConstants);
    }

    // Rows of right^{-1}: lattice basis whose first r rows span the saturation.
    let basis = unimodular_inverse(&snf.right).take_rows(r);
    let hf = hermite_row_form(&basis);
    let sub = hf.form.take_rows(r);

    let mut layers = Vec::new();
    let mut offsets = vec![BigInt::zero(); r];
    loop {
        let vals: Vec<BigRational> = (0..r)
            .map(|i| {
                (transformed[i].clone() + BigRational::from_integer(offsets[i].clone()))
                    / BigRational::from_integer(factors[i].clone())
            })
            .collect();
        let point = (0..r)
            .map(|i| {
                let mut v = BigRational::zero();
                for (j, x) in vals.iter().enumerate() {
                    let w = hf.transform.get(i, j);
                    if !w.is_zero() {
                        v += BigRational::from_integer(w.clone()) * x;
                    }
                }
                UnityRoot::from_rational(v)
            })
            .collect();
        layers.push(Layer {
            sub: sub.clone(),
            point,
        });
        // Odometer over offsets[i] ∈ [0, factors[i]).
        let mut i = 0;
        loop {
            if i == r {
                layers.sort();
                return Ok(layers);
            }
            offsets[i] += 1;
            if offsets[i] < factors[i] {
                break;
            }
            offsets[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Components of the intersection of two layers; empty when disjoint.
pub fn intersect(a: &Layer, b: &Layer) -> Vec<Layer> {
    let mut eqs = a.equations();
    eqs.extend(b.equations());
    layer_components(a.ambient_rank(), &eqs).unwrap_or_default()
}

/// An arrangement of subtori: the connected components of the input atoms.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub ambient_rank: usize,
    pub specs: Vec<AtomSpec>,
    /// Connected subtori, grouped by input atom in input order.
    pub subtori: Vec<Layer>,
    /// Index into `specs` of each subtorus.
    pub sources: Vec<usize>,
}

impl Arrangement {
    pub fn new(ambient_rank: usize, specs: Vec<AtomSpec>) -> Result<Self> {
        let mut subtori = Vec::new();
        let mut sources = Vec::new();
        for (i, spec) in specs.iter().enumerate() {
            let wrap = |e: Error| Error::Atom {
                atom: i,
                source: Box::new(e),
            };
            validate_atom(ambient_rank, spec).map_err(wrap)?;
            for comp in layer_components(ambient_rank, &spec.equations()).map_err(wrap)? {
                subtori.push(comp);
                sources.push(i);
            }
        }
        for (i, inner) in subtori.iter().enumerate() {
            for (j, outer) in subtori.iter().enumerate() {
                if i != j && sources[i] != sources[j] && outer.contains(inner) {
                    return Err(Error::NestedAtoms {
                        inner: sources[i],
                        outer: sources[j],
                    });
                }
            }
        }
        Ok(Arrangement {
            ambient_rank,
            specs,
            subtori,
            sources,
        })
    }

    pub fn is_divisorial(&self) -> bool {
        self.subtori.iter().all(|s| s.codim() == 1)
    }
}

/// Poset of layers ordered by reverse inclusion; index 0 is the torus.
#[derive(Clone, Debug)]
pub struct LayerPoset {
    pub arrangement: Arrangement,
    /// Sorted by codimension, then canonical form.
    pub layers: Vec<Layer>,
    leq: Vec<Vec<bool>>,
    pub covers: Vec<(usize, usize)>,
    /// For each layer, the subtori containing it.
    pub atoms_below: Vec<BTreeSet<usize>>,
    /// Layer index of each subtorus.
    pub atom_layers: Vec<usize>,
    index: HashMap<Layer, usize>,
}

impl LayerPoset {
    pub fn ambient_rank(&self) -> usize {
        self.arrangement.ambient_rank
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// `W ≤ L` iff `L ⊆ W`.
    pub fn leq(&self, lower: usize, upper: usize) -> bool {
        self.leq[lower][upper]
    }

    pub fn lt(&self, lower: usize, upper: usize) -> bool {
        lower != upper && self.leq[lower][upper]
    }

    pub fn index_of(&self, layer: &Layer) -> Option<usize> {
        self.index.get(layer).copied()
    }

    /// Elements strictly between `lower` and `upper`.
    pub fn open_interval(&self, lower: usize, upper: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&z| self.lt(lower, z) && self.lt(z, upper))
            .collect()
    }
}

/// Closes `{T}` under intersection with the subtori of the arrangement.
pub fn build_layer_poset(ambient_rank: usize, atoms: Vec<AtomSpec>) -> Result<LayerPoset> {
    let arrangement = Arrangement::new(ambient_rank, atoms)?;
    Ok(poset_of(arrangement))
}

pub fn poset_of(arrangement: Arrangement) -> LayerPoset {
    let torus = Layer::torus(arrangement.ambient_rank);
    let mut seen: BTreeSet<Layer> = BTreeSet::new();
    seen.insert(torus.clone());
    let mut queue = vec![torus];
    while let Some(w) = queue.pop() {
        for s in &arrangement.subtori {
            for comp in intersect(&w, s) {
                if seen.insert(comp.clone()) {
                    queue.push(comp);
                }
            }
        }
    }
    let layers: Vec<Layer> = seen.into_iter().collect();
    let n = layers.len();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
        for j in 0..n {
            if layers[i].codim() < layers[j].codim() && layers[i].contains(&layers[j]) {
                leq[i][j] = true;
            }
        }
    }
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i][j] && !(0..n).any(|k| k != i && k != j && leq[i][k] && leq[k][j]) {
                covers.push((i, j));
            }
        }
    }
    let index: HashMap<Layer, usize> = layers
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, l)| (l, i))
        .collect();
    let atom_layers: Vec<usize> = arrangement.subtori.iter().map(|s| index[s]).collect();
    let atoms_below = (0..n)
        .map(|w| {
            atom_layers
                .iter()
                .enumerate()
                .filter(|(_, &l)| leq[l][w])
                .map(|(a, _)| a)
                .collect()
        })
        .collect();
    LayerPoset {
        arrangement,
        layers,
        leq,
        covers,
        atoms_below,
        atom_layers,
        index,
    }
}

/// Change of basis making every chosen sublattice basis vector nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveSystem {
    /// Unimodular `U` with `columns = U·A`.
    pub change_of_basis: IntMatrix,
    /// One column per sublattice basis vector (after sign normalisation).
    pub columns: IntMatrix,
    /// Some coordinate is zero: the system is nonnegative but not positive.
    pub has_zero_coordinate: bool,
}

/// Positive system for an arrangement: the columns are Hermite bases of the
/// saturated character lattice of each atom.
pub fn positive_system(ambient_rank: usize, atoms: &[AtomSpec]) -> Result<PositiveSystem> {
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for (i, atom) in atoms.iter().enumerate() {
        validate_atom(ambient_rank, atom).map_err(|e| Error::Atom {
            atom: i,
            source: Box::new(e),
        })?;
        let rows: Vec<Vec<BigInt>> = atom.characters.iter().map(|c| c.0.clone()).collect();
        let sat = saturate(&IntMatrix::from_big_rows(ambient_rank, rows));
        cols.extend(sat.row_vecs());
    }
    let a = IntMatrix::from_big_rows(ambient_rank, cols).transpose();
    Ok(positive_system_for_columns(&a))
}

/// Sign-normalises each column so its last nonzero entry is positive, then
/// for each row `k` adds the least multiples of row `k` to earlier rows that
/// clear the negatives of columns whose last nonzero entry sits in row `k`.
pub fn positive_system_for_columns(a: &IntMatrix) -> PositiveSystem {
    let (d, n) = (a.rows(), a.cols());
    let mut cols = a.clone();
    let mut pivot_row = vec![None; n];
    for (c, slot) in pivot_row.iter_mut().enumerate() {
        if let Some(p) = (0..d).rev().find(|&i| !cols.get(i, c).is_zero()) {
            if cols.get(p, c).is_negative() {
                for i in 0..d {
                    let v = -cols.get(i, c);
                    cols.set(i, c, v);
                }
            }
            *slot = Some(p);
        }
    }
    let mut u = IntMatrix::identity(d);
    for k in 1..d {
        for i in 0..k {
            let mut mult = BigInt::zero();
            for (c, _) in pivot_row.iter().enumerate().filter(|(_, p)| **p == Some(k)) {
                let x = cols.get(i, c);
                if x.is_negative() {
                    let need = (-x).div_ceil(cols.get(k, c));
                    if need > mult {
                        mult = need;
                    }
                }
            }
            if mult.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = cols.get(i, c) + &mult * cols.get(k, c);
                cols.set(i, c, v);
            }
            for c in 0..d {
                let v = u.get(i, c) + &mult * u.get(k, c);
                u.set(i, c, v);
            }
        }
    }
    let has_zero_coordinate = (0..d).any(|i| (0..n).any(|c| cols.get(i, c).is_zero()));
    PositiveSystem {
        change_of_basis: u,
        columns: cols,
        has_zero_coordinate,
    }
}

impl Default for UnityRoot {
    fn default() -> Self {
        UnityRoot::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(chi: &[i64], p: i64, q: i64) -> (Character, UnityRoot) {
        (Character::from_i64(chi), UnityRoot::new(p, q))
    }

    fn three_hypertori() -> Vec<AtomSpec> {
        vec![
            AtomSpec::hypertorus(&[1, 0]),
            AtomSpec::hypertorus(&[0, 1]),
            AtomSpec::hypertorus(&[1, 1]),
        ]
    }

    #[test]
    fn validate_atom_examples() {
        let a = AtomSpec::new(vec![Character::from_i64(&[2])], vec![UnityRoot::new(1, 2)]);
        assert!(validate_atom(1, &a).is_ok());

        let a = AtomSpec::new(
            vec![Character::from_i64(&[1]), Character::from_i64(&[1])],
            vec![UnityRoot::one(), UnityRoot::new(1, 2)],
        );
        assert_eq!(validate_atom(1, &a), Err(Error::InconsistentConstants));

        let a = AtomSpec::new(
            vec![Character::from_i64(&[1]), Character::from_i64(&[2])],
            vec![UnityRoot::new(1, 3), UnityRoot::new(2, 3)],
        );
        assert!(validate_atom(1, &a).is_ok());

        let a = AtomSpec::hypertorus(&[0, 0]);
        assert_eq!(validate_atom(2, &a), Err(Error::ZeroCharacter));
        let a = AtomSpec::hypertorus(&[1, 0]);
        assert!(matches!(
            validate_atom(3, &a),
            Err(Error::WrongLength { .. })
        ));
    }

    #[test]
    fn components_of_square_root() {
        let comps = layer_components(1, &[eq(&[2], 0, 1)]).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps
            .iter()
            .all(|l| l.sub == IntMatrix::from_rows(1, &[vec![1]])));
        let pts: Vec<_> = comps.iter().map(|l| l.point[0].clone()).collect();
        assert_eq!(pts, vec![UnityRoot::new(0, 1), UnityRoot::new(1, 2)]);
    }

    #[test]
    fn components_primitive_and_inconsistent() {
        let comps = layer_components(2, &[eq(&[1, 0], 0, 1)]).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].codim(), 1);
        assert_eq!(
            layer_components(1, &[eq(&[1], 0, 1), eq(&[1], 1, 2)]),
            Err(Error::InconsistentConstants)
        );
    }

    #[test]
    fn components_count_matches_index() {
        // z1 = 1, z1 z2^2 = 1: z2 = ±1.
        let comps = layer_components(2, &[eq(&[1, 0], 0, 1), eq(&[1, 2], 0, 1)]).unwrap();
        assert_eq!(comps.len(), 2);
        for c in &comps {
            assert_eq!(
                c.evaluate(&[BigInt::from(1), BigInt::from(2)]),
                Some(UnityRoot::one())
            );
        }
    }

    #[test]
    fn poset_three_hypertori() {
        let p = build_layer_poset(2, three_hypertori()).unwrap();
        assert_eq!(p.len(), 5);
        assert_eq!(p.covers.len(), 6);
        assert_eq!(p.layers[0], Layer::torus(2));
        assert_eq!(p.layers[4].codim(), 2);
        assert_eq!(p.atoms_below[4].len(), 3);
        assert!(p.leq(0, 4));
        assert!(!p.leq(1, 2));
    }

    #[test]
    fn poset_square_root_and_empty() {
        let a = AtomSpec::new(vec![Character::from_i64(&[2])], vec![UnityRoot::one()]);
        let p = build_layer_poset(1, vec![a]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.arrangement.subtori.len(), 2);
        let p = build_layer_poset(3, vec![]).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn nested_atoms_rejected() {
        let a = AtomSpec::hypertorus(&[1, 0]);
        let b = AtomSpec::new(
            vec![Character::from_i64(&[1, 0]), Character::from_i64(&[0, 1])],
            vec![UnityRoot::one(), UnityRoot::one()],
        );
        assert_eq!(
            build_layer_poset(2, vec![a.clone(), b]).unwrap_err(),
            Error::NestedAtoms { inner: 1, outer: 0 }
        );
        assert!(matches!(
            build_layer_poset(2, vec![a.clone(), a]),
            Err(Error::NestedAtoms { .. })
        ));
    }

    #[test]
    fn parallel_translates_allowed() {
        let a = AtomSpec::hypertorus(&[1]);
        let b = AtomSpec::new(vec![Character::from_i64(&[1])], vec![UnityRoot::new(1, 2)]);
        let p = build_layer_poset(1, vec![a, b]).unwrap();
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn positive_system_examples() {
        let a = IntMatrix::from_rows(1, &[vec![1], vec![-3]]);
        let ps = positive_system_for_columns(&a);
        assert_eq!(
            ps.change_of_basis,
            IntMatrix::from_rows(2, &[vec![1, 1], vec![0, 1]])
        );
        assert_eq!(ps.columns, IntMatrix::from_rows(1, &[vec![2], vec![3]]));

        let a = IntMatrix::from_rows(2, &[vec![1, 2], vec![0, 3]]);
        let ps = positive_system_for_columns(&a);
        assert_eq!(ps.change_of_basis, IntMatrix::identity(2));

        let ps = positive_system(
            2,
            &[AtomSpec::hypertorus(&[1, 0]), AtomSpec::hypertorus(&[0, 1])],
        )
        .unwrap();
        assert_eq!(ps.change_of_basis, IntMatrix::identity(2));
        assert_eq!(ps.columns, IntMatrix::identity(2));
        assert!(ps.has_zero_coordinate);
    }
}
