//! Group constructions: wreath products and their markings, Hall embeddings,
//! absorption markings, symmetric/alternating/special-linear encodings, Ore
//! commutator witnesses, dihedral groups and amalgams.

pub mod absorption;
pub mod amalgam;
pub mod dihedral;
pub mod encode;
pub mod hall;
pub mod ore;
pub mod wreath;

pub use absorption::{absorption_limit, absorption_marking};
pub use amalgam::{amalgam, Amalgam};
pub use dihedral::dihedral;
pub use encode::{alt_encode, elementary_certificate, sl_encode, sym_encode, CertificateEntry};
pub use hall::{check_sidon, check_sidon_mod, hall_wreath_marking, powers_of_two, HallMarking};
pub use ore::{ore_commutator, ore_table, OrderConstraint, OreOutcome};
pub use wreath::{delta, wreath, wreath_element};
