use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("character has length {found}, expected ambient rank {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("character is not primitive")]
    NotPrimitive,
    #[error("zero character")]
    ZeroCharacter,
    #[error(
        "number of constants ({constants}) does not match number of characters ({characters})"
    )]
    ConstantCountMismatch { characters: usize, constants: usize },
    #[error("constants are inconsistent: an integer relation among the characters maps to a nonzero root of unity")]
    InconsistentConstants,
    #[error("atom has no defining character")]
    EmptyAtom,
    #[error("atom {inner} is contained in atom {outer}")]
    NestedAtoms { inner: usize, outer: usize },
    #[error("atom {atom}: {source}")]
    Atom {
        atom: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("layers {0} and {1} are not comparable")]
    NotComparable(usize, usize),
    #[error("intersection is empty")]
    EmptyIntersection,
    #[error("set of size {size} has rank {rank}; a single circuit needs size = rank + 1")]
    NotCorank1 { size: usize, rank: usize },
    #[error("arrangement is not divisorial: atom {0} has codimension {1}")]
    NotDivisorial(usize, usize),
    #[error("element mixes total degrees {0} and {1}")]
    DegreeMixed(usize, usize),
    #[error("NBC monomials do not complement the relation space in degree {degree}: {detail}")]
    BasisDefect { degree: usize, detail: String },
    #[error("unknown generator index {0}")]
    UnknownGenerator(usize),
}
