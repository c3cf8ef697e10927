//! Exact arithmetic in the Chow ring and the extended Rees ring of the split
//! maximal orthogonal grassmannian `OGr(n, 2n+1)`, with shifted-tableau Pieri
//! combinatorics and integral Steenrod representatives.

pub mod chow;
pub mod error;
pub mod expr;
pub mod families;
pub mod kog;
pub mod params;
pub mod partition;
pub mod rees;
pub mod steenrod;

pub use chow::{ChowElement, ChowRing, RewriteOrder, SquareFreeMonomial};
pub use error::{Error, Result};
pub use expr::{apply_expression, chow_apply, chow_eval, eval_expression, psi_substitute, restrict_expression, GeneratorExpression};
pub use families::IndexFamilies;
pub use kog::{count_kog, count_kog_by_search, enumerate_kog, KogTableau, PieriTable};
pub use params::{CoeffMode, RingParams, Valuation};
pub use partition::{SkewShiftedShape, StrictPartition};
pub use rees::{ReesElement, ReesKey, ReesRing};
pub use steenrod::{deg_over_index, res, shat, shat_set, torsion_index};
