//! Extractive sentence compression with a hybrid model: a trigram-probability
//! integer linear program combined with parse-tree compression rules, solved
//! to global optimality by DCA-assisted parallel branch-and-bound.

pub mod error;
pub mod tokens;

pub mod eval;
pub mod ngram;
pub mod tagger;

pub mod grammar;
pub mod parser;
pub mod rules;

pub mod ilp;
pub mod simplex;

pub mod dc;
pub mod bnb;
pub mod instances;

pub mod pipeline;

pub use error::{Error, Result};
pub use tokens::TokenSeq;
