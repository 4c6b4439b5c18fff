//! Exact Tate hypercohomology of finite groups.
//!
//! ```
//! use std::sync::Arc;
//! use hypertate::gcomplexes::concentrate;
//! use hypertate::gmodules::trivial_cyclic;
//! use hypertate::groups::make_cyclic;
//! use hypertate::resolutions::{build_complete_resolution, Engine, DEFAULT_BAR_CAP};
//! use hypertate::tate::Cohomology;
//!
//! # fn main() -> hypertate::Result<()> {
//! let g = Arc::new(make_cyclic(4));
//! let z = concentrate(&trivial_cyclic(&g, 0), 0);
//! let x = build_complete_resolution(&g, 4, Engine::Periodic, DEFAULT_BAR_CAP)?;
//! let t = Cohomology::new(&x, &z)?.groups((-2, 2))?;
//! assert_eq!(t.group(0).to_string(), "Z/4");
//! assert!(t.group(1).is_trivial());
//! # Ok(())
//! # }
//! ```

pub mod cli;
pub mod error;
pub mod formation;
pub mod gcomplexes;
pub mod gmodules;
pub mod groups;
pub mod linalg;
pub mod resolutions;
pub mod tate;

pub use error::{Error, Result};
