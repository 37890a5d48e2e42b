//! Exterior algebra `H(T; Q)` and the free `H(T)`-module on the generators.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Monomial `x_S` in the exterior algebra, as a bitmask of `S`.
pub type Mono = u32;

/// Sign of `x_S ∧ x_T` rearranged to `x_{S∪T}`, or `None` if they overlap.
pub fn wedge_sign(s: Mono, t: Mono) -> Option<bool> {
    if s & t != 0 {
        return None;
    }
    // Count pairs (a ∈ S, b ∈ T) with a > b.
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inversions += (s >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(inversions % 2 == 1)
}

/// Parity of the permutation sorting the concatenation of two increasing
/// index sequences.
pub fn merge_sign(a: &[usize], b: &[usize]) -> bool {
    let inv: usize = a
        .iter()
        .map(|&x| b.iter().filter(|&&y| y < x).count())
        .sum();
    inv % 2 == 1
}

/// Rational element of the exterior algebra on `x_0, …, x_{d-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExteriorElement {
    pub terms: BTreeMap<Mono, BigRational>,
}

impl ExteriorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigRational::one())
    }

    pub fn monomial(mono: Mono, coeff: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(mono, coeff);
        e
    }

    /// `χ*(ω) = Σ χ_i x_i`.
    pub fn from_character(chi: &[BigInt]) -> Self {
        let mut e = Self::zero();
        for (i, c) in chi.iter().enumerate() {
            e.add_term(1 << i, BigRational::from_integer(c.clone()));
        }
        e
    }

    pub fn add_term(&mut self, mono: Mono, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree if homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|m| m.count_ones() as usize);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn wedge(&self, other: &ExteriorElement) -> ExteriorElement {
        let mut out = ExteriorElement::zero();
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                if let Some(neg) = wedge_sign(*s, *t) {
                    let c = a * b;
                    out.add_term(s | t, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> ExteriorElement {
        let mut out = ExteriorElement::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, a * c);
        }
        out
    }
}

/// Element of the free `H(T)`-module on the generators: a combination of
/// `e_g · x_S`, keyed by `(g, S)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element {
    pub terms: BTreeMap<(usize, Mono), BigRational>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(g: usize) -> Self {
        Self::term(g, ExteriorElement::one())
    }

    /// `e_g · ψ`.
    pub fn term(g: usize, psi: ExteriorElement) -> Self {
        let mut e = Self::zero();
        for (m, c) in psi.terms {
            e.add_term(g, m, c);
        }
        e
    }

    pub fn add_term(&mut self, g: usize, mono: Mono, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry((g, mono))
            .or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&(g, mono));
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &BigRational) {
        for ((g, m), a) in &other.terms {
            self.add_term(*g, *m, a * c);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Right multiplication by an exterior element.
    pub fn times_exterior(&self, psi: &ExteriorElement) -> Element {
        let mut out = Element::zero();
        for ((g, s), a) in &self.terms {
            for (t, b) in &psi.terms {
                if let Some(neg) = wedge_sign(*s, *t) {
                    let c = a * b;
                    out.add_term(*g, s | t, if neg { -c } else { c });
                }
            }
        }
        out
    }
}
