//! Primitive free elements with free inverses (PFF elements) in finite
//! field extensions `GF(q^n)/GF(q)`: search, verification, character-sum
//! oracles, and sieve-based certification of PFF pairs.

pub mod arith;
pub mod catalog;
pub mod charsum;
pub mod error;
pub mod fpoly;
pub mod gf;
pub mod pff;
pub mod sieve;

pub use arith::{CBound, Factorization, PrimeFilter};
pub use error::{Error, Result};
pub use fpoly::{FOrderProfile, FPoly, FreenessContext, PolyRing};
pub use gf::{BaseField, Element, FieldTower};
pub use pff::{PffContext, PffVerdict, SearchConfig, SearchMode, SearchOutcome};
pub use charsum::{CharacterTable, ComplexVal, MulChar};
pub use sieve::{
    certify, BoundForm, Certificate, CertifyConfig, KeyIneqEval, Method, Numeric, Partition,
    PartitionStrategy, QData, SieveAtom, SieveDecomposition, Status,
};
