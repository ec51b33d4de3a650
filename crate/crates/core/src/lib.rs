//! Exact-arithmetic engine for chains on finite pointed simplicial sets, the
//! homology comonad `K`, cosimplicial cobar resolutions, cube connectivity
//! and Tot towers.

pub mod chain;
pub mod comonad;
pub mod corpus;
pub mod cosimplicial;
pub mod cube;
pub mod dold_kan;
pub mod enrich;
pub mod error;
pub mod holim;
pub mod homology;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod ordinal;
pub mod pairing;
pub mod ring;
pub mod simplicial;
pub mod space;
pub mod sset_json;
pub mod sset_ops;
pub mod ss;
pub mod tot;

pub use chain::{ChainComplex, ChainMap};
pub use error::{Error, Result};
pub use homology::{complex_connectivity, homology, map_connectivity, Conn, GradedGroup, GroupEntry, Verdict, VerdictKind};
pub use matrix::Mat;
pub use ring::Ring;
pub use ordinal::OrdinalMap;
pub use simplicial::{FinSimplicialSet, SimplexRef};
pub use module::{LinearMap, SimplicialModule};
pub use space::{EnumSpace, SpaceMap};
pub use comonad::KCoalgebra;
