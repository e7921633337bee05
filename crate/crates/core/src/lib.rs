//! Asymptotic nonbasis families `{s} ∪ {h x + t : x ∈ X}` over Z and N0,
//! decided through their residue structure and checked against a
//! brute-force h-fold sumset oracle on integer windows.

pub mod error;
pub mod families;
pub mod gapset;
pub mod intset;
pub mod report;
pub mod sumset;
pub mod verify;

pub use error::{Error, Result};
pub use families::{build_full, build_gapped, gcd_case, Domain, Family, GcdCase, GcdKind, Params, XSet};
pub use gapset::GapGenerator;
pub use intset::{complement_in, enumerate, materialize, member, parse_spec, DenseSet, SetSpec, Window};
pub use report::{FamilyInfo, Report};
pub use verify::{Check, Status, Verdict};
