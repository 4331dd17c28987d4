//! Weyl graphs: Coxeter words, panel groupoids, homotopy of galleries, certification,
//! universal covers, quotients and fundamental group presentations.

pub mod axioms;
pub mod coset;
pub mod cover;
pub mod coxeter;
pub mod fixtures;
pub mod groupoid;
pub mod homotopy;
pub mod io;
pub mod presentation;
pub mod weyl;

pub use axioms::{certify, CertificationReport, Certified, Level, Limits, Status};
pub use coxeter::{CoxeterElement, CoxeterMatrix, Gen, Order, Word};
pub use cover::{universal_cover, ChamberFreeAction, UniversalCover, WeylMorphism};
pub use homotopy::{FundamentalGroupoid, HomotopyClass, SuiteIndex};
pub use presentation::{fundamental_group_presentation, Presentation, TreeChoice};
pub use weyl::{ChamberId, EdgeId, Gallery, WeylData};
