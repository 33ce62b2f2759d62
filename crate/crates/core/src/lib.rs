//! Rectangle coverings of Boolean matrices and the rectifier networks they
//! describe: exact and fractional covering costs, dual certificates, greedy
//! constructions for Kneser–Sierpiński matrices, and two-letter regular
//! languages.

pub mod bits;
pub mod boolmat;
pub mod covers;
pub mod error;
pub mod exact;
pub mod greedy;
pub mod lp;
pub mod network;
pub mod regexlang;

pub use bits::BitSet;
pub use boolmat::BooleanMatrix;
pub use covers::{Covering, FractionalCovering, Rectangle};
pub use error::{Error, Result};
pub use network::RectifierNetwork;
