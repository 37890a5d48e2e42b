//! Orlik–Solomon type presentation of the rational cohomology ring of a
//! toric arrangement complement.
//!
//! The ring is `H(T; Q)[e_{W,A}] / I`. Products of generators are collapsed
//! with the product relations up front, so every element is stored as a
//! combination of `e_{W,A} · x_S` (see [`Element`]); the generator `e_{T,∅}`
//! is the unit. The remaining relations (restriction and circuit) are
//! handled by graded linear algebra in each degree.

pub mod algebra;
pub mod elim;
mod integral;

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::addcoh::binomial;
use crate::arimat::{
    is_positroid, mask_of, members, nbc_sets, subsets_by_size, AtomMask, GroundSet, OrientedCircuit,
};
use crate::arrangement::{intersect, Layer, LayerPoset};
use crate::{Error, Result};

pub use algebra::{merge_sign, wedge_sign, Element, ExteriorElement, Mono};
use elim::{Echelon, SparseRow};
pub use integral::{integral_conjecture_check, ConjectureReport, DegreeComparison};

/// Which element of the circuit is singled out in each circuit relation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum JConvention {
    /// `j = min(C∖A)`.
    #[default]
    Min,
    /// `j = max(X∖A)`.
    Max,
}

/// Generator `e_{W,A}`: `A` independent, `W` a component of `∩_{a∈A} S_a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorIndex {
    pub layer: usize,
    /// Increasing atom indices.
    pub set: Vec<usize>,
}

impl GeneratorIndex {
    pub fn degree(&self) -> usize {
        self.set.len()
    }

    pub fn mask(&self) -> AtomMask {
        mask_of(&self.set)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationKind {
    Product,
    Restriction,
    Circuit,
}

/// Product of generators (in order) times a class of the torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTerm {
    pub generators: Vec<usize>,
    pub coefficient: ExteriorElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationOrigin {
    Pair(usize, usize),
    Restriction {
        generator: usize,
        character: Vec<BigInt>,
    },
    /// Corank-one set `X` and component `L` of its intersection.
    Circuit {
        set: Vec<usize>,
        layer: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub degree: usize,
    pub terms: Vec<RelationTerm>,
    pub origin: RelationOrigin,
}

/// One graded piece of the quotient, with columns ordered so that the NBC
/// basis monomials come last.
#[derive(Debug)]
pub struct GradedPiece {
    pub degree: usize,
    pub columns: Vec<(usize, Mono)>,
    col_index: HashMap<(usize, Mono), usize>,
    /// Columns from here on are NBC basis monomials.
    pub basis_start: usize,
    echelon: Echelon,
}

impl GradedPiece {
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Dimension of the quotient in this degree.
    pub fn dimension(&self) -> usize {
        self.columns.len() - self.rank()
    }

    pub fn basis_len(&self) -> usize {
        self.columns.len() - self.basis_start
    }

    /// `None` if the NBC monomials complement the relation space.
    pub fn defect(&self) -> Option<String> {
        let stray = self
            .echelon
            .pivots()
            .filter(|&c| c >= self.basis_start)
            .count();
        if stray == 0 && self.rank() == self.basis_start {
            None
        } else {
            Some(format!(
                "{} spanning monomials, {} NBC monomials, relation rank {}, {} pivots on NBC monomials",
                self.columns.len(),
                self.basis_len(),
                self.rank(),
                stray
            ))
        }
    }

    fn row_of(&self, e: &Element) -> SparseRow<BigRational> {
        let mut row: SparseRow<BigRational> = e
            .terms
            .iter()
            .map(|(k, v)| {
                (
                    *self
                        .col_index
                        .get(k)
                        .expect("monomial outside graded piece"),
                    v.clone(),
                )
            })
            .collect();
        row.sort_by_key(|(c, _)| *c);
        row
    }
}

/// Generator indices with a flag marking a negative sign.
type SignedTerms = Vec<(usize, bool)>;

/// Coordinates in the NBC basis.
pub type BasisCoordinates = Vec<((usize, Mono), BigRational)>;

#[derive(Debug)]
pub struct Presentation {
    pub poset: LayerPoset,
    pub ground: GroundSet,
    pub generators: Vec<GeneratorIndex>,
    pub j_convention: JConvention,
    index: HashMap<(usize, AtomMask), usize>,
    nbc: Vec<BTreeSet<AtomMask>>,
    ranks: Mutex<HashMap<AtomMask, usize>>,
    components: Mutex<HashMap<AtomMask, Vec<Layer>>>,
    products: Mutex<HashMap<(usize, usize), SignedTerms>>,
}

/// All `(W, A)` with `A` independent and `W` a component of `∩_{a∈A} S_a`,
/// ordered by degree, then `A`, then `W`.
pub fn enumerate_generators(ground: &GroundSet, poset: &LayerPoset) -> Vec<GeneratorIndex> {
    let mut out = Vec::new();
    for mask in ground.independent_sets(ground.full_mask()) {
        let set = members(mask);
        let comps = ground
            .components(&set)
            .expect("independent sets always meet");
        for l in comps {
            let layer = poset.index_of(&l).expect("component missing from poset");
            out.push(GeneratorIndex {
                layer,
                set: set.clone(),
            });
        }
    }
    out.sort_by(|a, b| (a.degree(), &a.set, a.layer).cmp(&(b.degree(), &b.set, b.layer)));
    out
}

fn free_coordinates(layer: &Layer) -> Mono {
    let d = layer.ambient_rank();
    let mut mask: Mono = if d == 0 { 0 } else { (1 << d) - 1 };
    for i in 0..layer.codim() {
        let p = layer.sub.row(i).iter().position(|x| !x.is_zero()).unwrap();
        mask &= !(1 << p);
    }
    mask
}

fn submasks(mask: Mono) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut s = mask;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out.sort_by_key(|m| (m.count_ones(), *m));
    out
}

fn monos_of_degree(d: usize, k: usize) -> Vec<Mono> {
    if k > d {
        return Vec::new();
    }
    submasks(if d == 0 { 0 } else { (1 << d) - 1 })
        .into_iter()
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}

impl Presentation {
    pub fn new(poset: &LayerPoset, j_convention: JConvention) -> Result<Self> {
        let ground = GroundSet::from_arrangement(&poset.arrangement)?;
        assert!(
            poset.ambient_rank() <= 31,
            "ambient rank too large for monomial masks"
        );
        let generators = enumerate_generators(&ground, poset);
        let index = generators
            .iter()
            .enumerate()
            .map(|(i, g)| ((g.layer, g.mask()), i))
            .collect();
        let nbc = (0..poset.len())
            .map(|w| {
                nbc_sets(&ground, poset, w)
                    .into_iter()
                    .map(|c| mask_of(&c.set))
                    .collect()
            })
            .collect();
        Ok(Presentation {
            poset: poset.clone(),
            ground,
            generators,
            j_convention,
            index,
            nbc,
            ranks: Mutex::new(HashMap::new()),
            components: Mutex::new(HashMap::new()),
            products: Mutex::new(HashMap::new()),
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.poset.ambient_rank()
    }

    pub fn generator_of(&self, layer: usize, set: &[usize]) -> Option<usize> {
        self.index.get(&(layer, mask_of(set))).copied()
    }

    fn rank(&self, mask: AtomMask) -> usize {
        if let Some(&r) = self.ranks.lock().unwrap().get(&mask) {
            return r;
        }
        let r = self.ground.rank_of(&members(mask));
        self.ranks.lock().unwrap().insert(mask, r);
        r
    }

    fn components(&self, mask: AtomMask) -> Vec<Layer> {
        if let Some(c) = self.components.lock().unwrap().get(&mask) {
            return c.clone();
        }
        let c = self.ground.components(&members(mask)).unwrap_or_default();
        self.components.lock().unwrap().insert(mask, c.clone());
        c
    }

    fn multiplicity(&self, mask: AtomMask) -> usize {
        self.components(mask).len()
    }

    /// `e_g · e_h` as `±e_L` terms; the flag marks a negative sign.
    pub fn generator_product(&self, g: usize, h: usize) -> Vec<(usize, bool)> {
        if let Some(p) = self.products.lock().unwrap().get(&(g, h)) {
            return p.clone();
        }
        let (a, b) = (&self.generators[g], &self.generators[h]);
        let union = a.mask() | b.mask();
        let out = if a.mask() & b.mask() != 0 || self.rank(union) != union.count_ones() as usize {
            Vec::new()
        } else {
            let neg = merge_sign(&a.set, &b.set);
            intersect(&self.poset.layers[a.layer], &self.poset.layers[b.layer])
                .iter()
                .map(|l| {
                    let li = self.poset.index_of(l).expect("intersection outside poset");
                    (self.index[&(li, union)], neg)
                })
                .collect()
        };
        self.products.lock().unwrap().insert((g, h), out.clone());
        out
    }

    /// Product in the collapsed algebra.
    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::zero();
        for ((g, s), a) in &x.terms {
            for ((h, t), b) in &y.terms {
                let Some(wneg) = wedge_sign(*s, *t) else {
                    continue;
                };
                // Moving x_S past e_h.
                let pass = (s.count_ones() as usize * self.generators[*h].degree()) % 2 == 1;
                for (l, gneg) in self.generator_product(*g, *h) {
                    let c = a * b;
                    out.add_term(l, s | t, if wneg ^ pass ^ gneg { -c } else { c });
                }
            }
        }
        out
    }

    /// Evaluates a relation in the collapsed algebra.
    pub fn expand(&self, rel: &Relation) -> Element {
        let mut out = Element::zero();
        for term in &rel.terms {
            let mut acc = Element::generator(0);
            for &g in &term.generators {
                acc = self.multiply(&acc, &Element::generator(g));
            }
            out.add_scaled(&acc.times_exterior(&term.coefficient), &BigRational::one());
        }
        out
    }

    /// `e_g e_h − (−1)^{l(A,A')} Σ_L e_{L,A∪A'}`, or `e_g e_h` when the
    /// product vanishes, for every pair of non-unit generators `g ≤ h`.
    pub fn product_relations(&self) -> Vec<Relation> {
        let mut out = Vec::new();
        for g in 1..self.generators.len() {
            for h in g..self.generators.len() {
                let mut terms = vec![RelationTerm {
                    generators: vec![g, h],
                    coefficient: ExteriorElement::one(),
                }];
                for (l, neg) in self.generator_product(g, h) {
                    let c = if neg {
                        BigRational::one()
                    } else {
                        -BigRational::one()
                    };
                    terms.push(RelationTerm {
                        generators: vec![l],
                        coefficient: ExteriorElement::monomial(0, c),
                    });
                }
                out.push(Relation {
                    kind: RelationKind::Product,
                    degree: self.generators[g].degree() + self.generators[h].degree(),
                    terms,
                    origin: RelationOrigin::Pair(g, h),
                });
            }
        }
        out
    }

    /// `e_{W,A} · χ*(ω)` for `χ` in a basis of the (saturated) lattice of `W`.
    pub fn restriction_relations(&self) -> Vec<Relation> {
        let mut out = Vec::new();
        for (g, gen) in self.generators.iter().enumerate() {
            let layer = &self.poset.layers[gen.layer];
            for i in 0..layer.codim() {
                let chi = layer.sub.row(i).to_vec();
                out.push(Relation {
                    kind: RelationKind::Restriction,
                    degree: gen.degree() + 1,
                    terms: vec![RelationTerm {
                        generators: vec![g],
                        coefficient: ExteriorElement::from_character(&chi),
                    }],
                    origin: RelationOrigin::Restriction {
                        generator: g,
                        character: chi,
                    },
                });
            }
        }
        out
    }

    pub fn circuit_relations(&self) -> Vec<Relation> {
        self.circuit_relations_oriented(false, false)
    }

    /// Circuit relations; `flip` reverses every circuit orientation and
    /// `integral` uses the oriented quotient-basis coefficients.
    pub fn circuit_relations_oriented(&self, flip: bool, integral: bool) -> Vec<Relation> {
        let mut out = Vec::new();
        for x in subsets_by_size(self.ground.full_mask()) {
            let size = x.count_ones() as usize;
            if size < 2 || self.rank(x) + 1 != size {
                continue;
            }
            let xs = members(x);
            let mut circuit = self.ground.fundamental_circuit(&xs).expect("corank one");
            if flip {
                circuit = circuit.flipped();
            }
            for l in self.components(x) {
                let li = self.poset.index_of(&l).expect("component outside poset");
                out.push(Relation {
                    kind: RelationKind::Circuit,
                    degree: size - 1,
                    terms: self.circuit_terms(x, &circuit, &l, integral),
                    origin: RelationOrigin::Circuit {
                        set: xs.clone(),
                        layer: li,
                    },
                });
            }
        }
        out
    }

    fn circuit_terms(
        &self,
        x: AtomMask,
        circuit: &OrientedCircuit,
        l: &Layer,
        integral: bool,
    ) -> Vec<RelationTerm> {
        let cmask = circuit.mask();
        let forced = x & !cmask;
        let mut terms = Vec::new();
        for a in subsets_by_size(x) {
            if a == x || a & forced != forced {
                continue;
            }
            let aset = members(a);
            if !is_positroid(circuit, &aset) {
                continue;
            }
            let rest = x & !a;
            let j = match self.j_convention {
                JConvention::Min => rest.trailing_zeros() as usize,
                JConvention::Max => 63 - rest.leading_zeros() as usize,
            };
            let b = cmask & !a & !(1u64 << j);
            let bset = members(b);
            let below = (x & ((1u64 << j) - 1)).count_ones() % 2 == 1;
            let neg = below ^ merge_sign(&aset, &bset);
            let w = self
                .components(a)
                .into_iter()
                .find(|w| w.contains(l))
                .expect("some component of the smaller intersection contains L");
            let wi = self.poset.index_of(&w).expect("layer outside poset");
            let g = self.index[&(wi, a)];
            let psi = if integral {
                let xj = x & !(1u64 << j);
                integral::oriented_quotient_product(&self.ground, &members(xj), &aset, &bset)
            } else {
                let coef = BigRational::new(
                    BigInt::from(self.multiplicity(a)),
                    BigInt::from(self.multiplicity(x & !(1u64 << j))),
                );
                bset.iter()
                    .fold(ExteriorElement::one(), |acc, &b| {
                        acc.wedge(&ExteriorElement::from_character(&self.ground.characters[b]))
                    })
                    .scale(&coef)
            };
            let psi = if neg {
                psi.scale(&-BigRational::one())
            } else {
                psi
            };
            terms.push(RelationTerm {
                generators: vec![g],
                coefficient: psi,
            });
        }
        terms
    }

    /// Product, restriction and circuit relations.
    pub fn relations(&self) -> Vec<Relation> {
        let mut out = self.product_relations();
        out.extend(self.restriction_relations());
        out.extend(self.circuit_relations());
        out
    }

    /// Spanning monomials `e_g · x_S` of total degree `k`.
    pub fn monomials(&self, k: usize) -> Vec<(usize, Mono)> {
        let d = self.ambient_rank();
        let mut out = Vec::new();
        for (g, gen) in self.generators.iter().enumerate() {
            if gen.degree() <= k {
                for s in monos_of_degree(d, k - gen.degree()) {
                    out.push((g, s));
                }
            }
        }
        out
    }

    pub fn is_nbc_generator(&self, g: usize) -> bool {
        let gen = &self.generators[g];
        self.nbc[gen.layer].contains(&gen.mask())
    }

    /// `e_{W,A} · x_S` with `A` NBC for `W` and `S` a set of free coordinates
    /// of `W` (a lift of a monomial basis of `H(W; Q)`).
    pub fn is_basis_monomial(&self, g: usize, s: Mono) -> bool {
        self.is_nbc_generator(g)
            && s & !free_coordinates(&self.poset.layers[self.generators[g].layer]) == 0
    }

    pub fn nbc_basis(&self) -> Vec<(usize, Mono)> {
        let mut out = Vec::new();
        for g in 0..self.generators.len() {
            if self.is_nbc_generator(g) {
                let free = free_coordinates(&self.poset.layers[self.generators[g].layer]);
                for s in submasks(free) {
                    out.push((g, s));
                }
            }
        }
        out.sort_by_key(|&(g, s)| (self.generators[g].degree() + s.count_ones() as usize, g, s));
        out
    }

    /// `Σ_W |NBC(W)| · C(dim W, k − codim W)` for `k = 0..=2d`.
    pub fn nbc_poincare(&self) -> Vec<usize> {
        let d = self.ambient_rank();
        let mut out = vec![0; 2 * d + 1];
        for (w, layer) in self.poset.layers.iter().enumerate() {
            let count = self.nbc[w].len();
            for p in 0..=layer.dim() {
                out[layer.codim() + p] += count * binomial(layer.dim(), p);
            }
        }
        out
    }

    /// Relation space in degree `k`, spanned by restriction rows and every
    /// circuit relation times every monomial of complementary degree.
    pub fn graded_piece(&self, k: usize) -> GradedPiece {
        self.graded_piece_with(k, &self.circuit_relations())
    }

    pub fn graded_piece_with(&self, k: usize, circuits: &[Relation]) -> GradedPiece {
        let d = self.ambient_rank();
        let mut columns = self.monomials(k);
        columns.sort_by_key(|&(g, s)| (self.is_basis_monomial(g, s), g, s));
        let basis_start = columns
            .iter()
            .position(|&(g, s)| self.is_basis_monomial(g, s))
            .unwrap_or(columns.len());
        let col_index = columns.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut piece = GradedPiece {
            degree: k,
            columns,
            col_index,
            basis_start,
            echelon: Echelon::new(),
        };
        let full = piece.columns.len();
        for (g, gen) in self.generators.iter().enumerate() {
            if gen.degree() + 1 > k || piece.rank() == full {
                continue;
            }
            let layer = &self.poset.layers[gen.layer];
            for i in 0..layer.codim() {
                let chi = ExteriorElement::from_character(layer.sub.row(i));
                for s in monos_of_degree(d, k - gen.degree() - 1) {
                    let e = Element::term(
                        g,
                        chi.wedge(&ExteriorElement::monomial(s, BigRational::one())),
                    );
                    let row = piece.row_of(&e);
                    piece.echelon.insert(row);
                }
            }
        }
        for rel in circuits {
            if rel.degree > k || piece.rank() == full {
                continue;
            }
            let r = self.expand(rel);
            for (h, t) in self.monomials(k - rel.degree) {
                let m = Element::term(h, ExteriorElement::monomial(t, BigRational::one()));
                let e = self.multiply(&r, &m);
                if !e.is_zero() {
                    let row = piece.row_of(&e);
                    piece.echelon.insert(row);
                }
            }
        }
        piece
    }

    /// Quotient dimension in degrees `0..=max_degree`, by rank of the
    /// relation rows.
    pub fn quotient_dimensions(&self, max_degree: usize) -> Vec<usize> {
        let circuits = self.circuit_relations();
        (0..=max_degree)
            .map(|k| self.graded_piece_with(k, &circuits).dimension())
            .collect()
    }

    /// NBC basis together with the NBC-count Poincaré polynomial; fails if in
    /// some degree up to `max_degree` the basis does not complement the
    /// relations.
    pub fn nbc_basis_and_dimensions(&self, max_degree: usize) -> Result<NbcBasis> {
        let circuits = self.circuit_relations();
        let mut dimensions = Vec::new();
        for k in 0..=max_degree {
            let piece = self.graded_piece_with(k, &circuits);
            if let Some(detail) = piece.defect() {
                return Err(Error::BasisDefect { degree: k, detail });
            }
            dimensions.push(piece.dimension());
        }
        Ok(NbcBasis {
            basis: self.nbc_basis(),
            poincare: self.nbc_poincare(),
            dimensions,
        })
    }

    /// Total degree of a nonzero homogeneous element.
    pub fn degree_of(&self, e: &Element) -> Result<Option<usize>> {
        let mut deg: Option<usize> = None;
        for (g, s) in e.terms.keys() {
            let gen = self.generators.get(*g).ok_or(Error::UnknownGenerator(*g))?;
            let k = gen.degree() + s.count_ones() as usize;
            match deg {
                Some(d) if d != k => return Err(Error::DegreeMixed(d, k)),
                _ => deg = Some(k),
            }
        }
        Ok(deg)
    }

    /// Normal form of a homogeneous element in the NBC basis.
    pub fn reduce_to_basis(&self, e: &Element) -> Result<BasisCoordinates> {
        let Some(k) = self.degree_of(e)? else {
            return Ok(Vec::new());
        };
        self.reduce_in(&self.graded_piece(k), e)
    }

    pub fn reduce_in(&self, piece: &GradedPiece, e: &Element) -> Result<BasisCoordinates> {
        if let Some(detail) = piece.defect() {
            return Err(Error::BasisDefect {
                degree: piece.degree,
                detail,
            });
        }
        let row = piece.row_of(e);
        let reduced = piece
            .echelon
            .reduce_below(row, piece.basis_start)
            .map_err(|c| Error::BasisDefect {
                degree: piece.degree,
                detail: format!("column {c} has no pivot"),
            })?;
        Ok(reduced
            .into_iter()
            .map(|(c, v)| (piece.columns[c], v))
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NbcBasis {
    pub basis: Vec<(usize, Mono)>,
    /// NBC-count formula, degrees `0..=2d`.
    pub poincare: Vec<usize>,
    /// Quotient dimensions computed by elimination.
    pub dimensions: Vec<usize>,
}
