//! Exact constructions and checks for maximal curves over binary fields:
//! the Hermitian curve y^q + y = x^(q+1) and the trace curve
//! ∑ y^(q/2^i) = x^(q+1), q = 2^t, over F_{q²}.

pub mod census;
pub mod cli;
pub mod covering;
pub mod curve;
pub mod field;
pub mod local;
pub mod orders;
pub mod semigroup;
pub mod series;
