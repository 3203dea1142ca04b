//! Lower bounds on the Fenchel-Young gap.
//!
//! For a convex function `f` the gap `f(x) + f*(x*) - ⟨x, x*⟩` is bounded
//! below by the Fitzpatrick bound of `∂f`, which in turn dominates the
//! Carlier bound `‖x - J_{γA}(x + γx*)‖² / γ`. The Carlier bound only needs a
//! resolvent, so it makes sense for any maximally monotone operator.
//!
//! ```
//! use convexgap::{bounds, catalog, Vector};
//!
//! let f = catalog::make_energy(2).unwrap();
//! let a = catalog::subdifferential_operator(f.clone());
//! let x = Vector::new(vec![1.0, 0.0]).unwrap();
//! let xs = Vector::new(vec![0.0, 1.0]).unwrap();
//! let gap = bounds::gap(&f, &x, &xs).unwrap();
//! let c = bounds::carlier_bound(&a, 1.0, &x, &xs).unwrap();
//! assert_eq!(gap.to_f64(), 1.0);
//! assert_eq!(c, 0.5);
//! ```

pub mod analysis;
pub mod bounds;
pub mod catalog;
pub mod cyclic;
pub mod error;
pub mod lambert;
pub mod numeric;
pub mod oracle;
pub mod suites;

pub use catalog::{parse_coords, parse_entry, CatalogEntry, ConvexFunction, Operator};
pub use error::{Error, Result};
pub use numeric::{approx_eq, ExtReal, Tolerances, Vector};
