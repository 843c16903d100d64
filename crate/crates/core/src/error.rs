use thiserror::Error;

use crate::elem::Elem;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("boundary mismatch in {context}: {left} vs {right}")]
    BoundaryMismatch { context: String, left: String, right: String },

    #[error("{context} does not commute at {witness}")]
    NotCommuting { context: String, witness: Elem },

    #[error("element {elem} is not in {set}")]
    NotAMember { elem: Elem, set: String },

    #[error("duplicate element {0}")]
    Duplicate(Elem),

    #[error("map is not total: no image for {0}")]
    NotTotal(Elem),

    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),

    #[error("malformed element for {monad}: {elem}")]
    Malformed { monad: String, elem: Elem },

    #[error("carrier not finitely materializable under monad {0}")]
    NotFinite(String),

    #[error("{0}")]
    Invalid(String),

    #[error("not a descent datum: {law} fails at {witness}")]
    NotAlgebraic { law: String, witness: Elem },

    #[error(
        "induced map {} is not well defined: {} and {} are identified but have images {} and {}",
        .0.map, .0.first, .0.second, .0.first_image, .0.second_image
    )]
    IllDefined(Box<IllDefined>),

    #[error("not in image at object level: {0}")]
    NotInImage(String),

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("object is not coherent: {0}")]
    Incoherent(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IllDefined {
    pub map: String,
    pub first: Elem,
    pub second: Elem,
    pub first_image: Elem,
    pub second_image: Elem,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
