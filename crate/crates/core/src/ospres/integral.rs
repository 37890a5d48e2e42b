//! Integral variant of the presentation and its comparison with the
//! additive integral cohomology.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::algebra::{Element, ExteriorElement};
use super::elim::{integer_cokernel, SparseRow};
use super::{JConvention, Presentation};
use crate::addcoh::BettiTable;
use crate::arimat::GroundSet;
use crate::intlat::{
    hermite_row_form, saturate, smith_normal_form, solve_in_hermite, unimodular_inverse, IntMatrix,
    TorsionData,
};

/// `∏ χ_i*(ω)` for a basis `(χ̄_i)` of `sat(X∖{j}) / sat(A)` oriented like
/// `(χ̄_b)_{b∈B}`.
pub(super) fn oriented_quotient_product(
    ground: &GroundSet,
    xj: &[usize],
    a: &[usize],
    b: &[usize],
) -> ExteriorElement {
    if b.is_empty() {
        return ExteriorElement::one();
    }
    let d = ground.ambient_rank;
    let chars = |set: &[usize]| {
        IntMatrix::from_big_rows(
            d,
            set.iter().map(|&i| ground.characters[i].clone()).collect(),
        )
    };
    let lx = saturate(&chars(xj));
    let pivots = hermite_row_form(&lx).pivots;
    let r = lx.rows();
    let la = saturate(&chars(a));
    let coords = |v: &[BigInt]| solve_in_hermite(&lx, &pivots, v).expect("vector outside sat(X∖j)");
    let m = IntMatrix::from_big_rows(r, (0..la.rows()).map(|i| coords(la.row(i))).collect());
    let snf = smith_normal_form(&m);
    let vinv = unimodular_inverse(&snf.right);
    let k = la.rows();
    let complement = IntMatrix::from_big_rows(r, (k..r).map(|i| vinv.row(i).to_vec()).collect());
    let mut basis = complement.mul(&lx).row_vecs();
    // Coordinates of χ_b in the quotient basis.
    let yb = IntMatrix::from_big_rows(
        r,
        b.iter().map(|&i| coords(&ground.characters[i])).collect(),
    );
    let z = yb.mul(&snf.right);
    let q = IntMatrix::from_big_rows(
        r - k,
        (0..b.len()).map(|i| z.row(i)[k..].to_vec()).collect(),
    );
    if q.det().is_negative() {
        basis[0].iter_mut().for_each(|x| *x = -x.clone());
    }
    basis.iter().fold(ExteriorElement::one(), |acc, chi| {
        acc.wedge(&ExteriorElement::from_character(chi))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeComparison {
    pub degree: usize,
    pub presentation: TorsionData,
    pub cohomology: TorsionData,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureReport {
    pub j_convention: JConvention,
    pub unimodular: bool,
    pub orientation: String,
    pub degrees: Vec<DegreeComparison>,
}

impl ConjectureReport {
    pub fn all_match(&self) -> bool {
        self.degrees.iter().all(|c| c.matches)
    }
}

fn integer_row(piece: &super::GradedPiece, e: &Element) -> SparseRow<BigInt> {
    piece
        .row_of(e)
        .into_iter()
        .map(|(c, v)| {
            assert!(
                v.is_integer(),
                "non-integral coefficient in integral relation"
            );
            (c, v.to_integer())
        })
        .collect()
}

/// Builds the integral relations and compares the per-degree cokernels with
/// `table` in degrees `0..=max_degree`.
pub fn integral_conjecture_check(
    pres: &Presentation,
    table: &BettiTable,
    max_degree: usize,
) -> ConjectureReport {
    let d = pres.ambient_rank();
    let (degrees_of, circuits): (Vec<usize>, Vec<Element>) = pres
        .circuit_relations_oriented(false, true)
        .iter()
        .map(|r| (r.degree, pres.expand(r)))
        .unzip();
    let mut degrees = Vec::new();
    for k in 0..=max_degree {
        // Reuse the column layout of the rational piece without its rows.
        let piece = pres.graded_piece_with(k, &[]);
        let mut rows: Vec<SparseRow<BigInt>> = Vec::new();
        for (g, gen) in pres.generators.iter().enumerate() {
            if gen.degree() + 1 > k {
                continue;
            }
            let layer = &pres.poset.layers[gen.layer];
            for i in 0..layer.codim() {
                let chi = ExteriorElement::from_character(layer.sub.row(i));
                for s in super::monos_of_degree(d, k - gen.degree() - 1) {
                    let e = Element::term(
                        g,
                        chi.wedge(&ExteriorElement::monomial(s, BigRational::one())),
                    );
                    if !e.is_zero() {
                        rows.push(integer_row(&piece, &e));
                    }
                }
            }
        }
        for (r, &deg) in circuits.iter().zip(&degrees_of) {
            if deg > k {
                continue;
            }
            for (h, t) in pres.monomials(k - deg) {
                let m = Element::term(h, ExteriorElement::monomial(t, BigRational::one()));
                let e = pres.multiply(r, &m);
                if !e.is_zero() {
                    rows.push(integer_row(&piece, &e));
                }
            }
        }
        let presentation = integer_cokernel(piece.columns.len(), rows);
        let cohomology = table.degrees.get(k).cloned().unwrap_or_default();
        degrees.push(DegreeComparison {
            degree: k,
            matches: presentation == cohomology,
            presentation,
            cohomology,
        });
    }
    ConjectureReport {
        j_convention: pres.j_convention,
        unimodular: pres.ground.is_unimodular(),
        orientation: "quotient basis flipped when det of the B-coordinates is negative".to_string(),
        degrees,
    }
}
