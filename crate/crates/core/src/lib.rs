//! Upper bounds on the rate of perfect (b,k)-hash codes.
//!
//! The crate evaluates the classical closed-form bounds, the kernel `Ψ(p, q)`
//! on pairs of distributions, numerical suprema of `Ψ` over regions of the
//! simplex, and the clustered bound built from those suprema. A small
//! toolbox for explicit hash codes sits alongside.
//!
//! ```
//! use phash_bounds::classic::km_bound;
//! use phash_bounds::classic::km_default_range;
//!
//! let r = km_bound(5, 4, km_default_range(4)).unwrap();
//! assert!((r.value - 0.73697).abs() < 1e-5);
//! ```

pub mod classic;
pub mod cluster;
pub mod codes;
pub mod error;
pub mod expr;
pub mod kernel;
pub mod optimize;
pub mod reference;
pub mod render;
pub mod simplex;
pub mod tables;

pub use error::{Error, Result};
pub use kernel::{psi_eval, KernelContext};
pub use simplex::{Distribution, PartitionKind, Region, RegionSpec};
