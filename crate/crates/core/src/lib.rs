//! Mod-2 cohomology of two-point Hilbert schemes.
//!
//! From a finite model of H*(X; F2) for a complex manifold X (basis,
//! degrees, Steenrod squares, optional cup products, torsion flags) this
//! crate computes the F2 Betti numbers of the exceptional divisor E_X, the
//! symmetric square S^2 X, the configuration space S^2 X - X and the
//! Hilbert scheme X^[2], the kernel of the pushforward
//! H*(E_X) -> H*(X^[2]), and the integral homology of S^2 X when X has no
//! torsion.

pub mod betti;
pub mod exdiv;
pub mod gf2;
pub mod kernel;
pub mod spaces;
pub mod steenrod;
pub mod verify;

pub use betti::{BettiError, GroupProfile, GroupRank, Hilb2TorsionFlags};
pub use exdiv::{ExClass, ExceptionalDivisor, ExdivError};
pub use gf2::{ClassId, F2Matrix, F2Vector};
pub use kernel::{Family, KernelError, KernelGenerator, Mode};
pub use spaces::{
    betti_of_x, catalog_get, load_descriptor, BettiTable, IntegralFlags, ManifoldDescriptor,
    SpaceError, SpaceLabel,
};
pub use steenrod::{UnstableModule, ValidationReport, Violation, ViolationKind};
pub use verify::{CheckEntry, Report, Status};
