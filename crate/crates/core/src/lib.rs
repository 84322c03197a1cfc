//! Computational tools for the planar Blaschke–Santaló inequality.
//!
//! - [`geom`]: convex polygons, polarity, volume products, moments.
//! - [`santalo`]: the polar-area functional, its gradient, the Santaló point.
//! - [`ellipse`]: Löwner and John ellipses of o-symmetric polygons.
//! - [`symmetrize`]: Steiner symmetrization and polar-area monotonicity.
//! - [`sector`]: the extremal deltoid-sector bodies and the area-sum bound.
//! - [`optimize`]: local search for volume-product maximizers.
//! - [`experiments`]: stability scans, exponent fits, constant checks.
//! - [`io`]: JSON, CSV and SVG emitters.

pub mod ellipse;
pub mod error;
pub mod experiments;
pub mod geom;
pub mod io;
pub mod optimize;
pub mod random;
pub mod santalo;
pub mod sector;
pub mod symmetrize;

pub use ellipse::{ContactPattern, ContactReport, Ellipse, EllipseKind};
pub use error::{Error, Result};
pub use geom::{regular_product, LineStar, Mat2, Point2, Polygon};
pub use optimize::{OptConfig, OptMode, OptResult};
pub use santalo::{SantaloSolveReport, StabilityConstants};
pub use sector::{Deltoid, SectorCase, SectorSpec};
pub use symmetrize::SteinerReport;
