//! Exact-arithmetic toolkit for transverse links presented as braid closures:
//! Khovanov-homology transverse invariants with vanishing certificates,
//! HOMFLY-PT self-linking bounds, twist-stability thresholds, Dehornoy floor
//! and fractional Dehn twist coefficient bounds, and combined obstruction
//! reports for quasipositivity and right-veeringness.

pub mod braid;
pub mod exactalg;
pub mod fdtc;
pub mod homfly;
pub mod khovanov;
pub mod report;
pub mod skeinstab;
pub mod tangle;
