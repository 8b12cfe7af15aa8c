pub mod abelian;
pub mod algiso;
pub mod catalogue;
pub mod comiso;
pub mod construct;
pub mod error;
pub mod sring;
pub mod wl;

pub use abelian::{AbelianGroup, Elem, GroupHom, Section, Subgroup};
pub use algiso::AlgebraicIso;
pub use comiso::{IsoCertificate, PointMap};
pub use error::{Error, Result};
pub use sring::SRing;
