//! Exact computations around the exotic nilpotent cone of `Sp_{2n}` over
//! prime fields: finite-field linear algebra, bipartition combinatorics,
//! orbit classification, hyperoctahedral characters, the Springer
//! correspondence checks and brute-force censuses.

pub mod bicomb;
pub mod census;
pub mod classify;
pub mod error;
pub mod ffield;
pub mod hyperoct;
pub mod springer;
pub mod symplectic;

pub use bicomb::{Bipartition, Composition, Partition};
pub use census::{CensusOptions, CensusResult, KlyachkoReport};
pub use classify::{Classification, EnhancedPair, NodeCase};
pub use error::{Error, Result};
pub use ffield::{FpElem, FpMatrix, Subspace};
pub use hyperoct::{CharacterTable, ClassFunction, GradedWnModule, WnClass};
pub use springer::{CheckReport, CorrespondenceMap, Mismatch, SpringerTable};
pub use symplectic::{ExoticPair, Flavor, NormalFormData, SymplecticSpace};
