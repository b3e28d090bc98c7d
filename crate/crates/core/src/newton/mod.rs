//! Newton polygons at specializations, the LB/UB sandwich, halo decomposition and
//! arithmetic-progression detection on a finite window.

mod analysis;
mod ap;
mod polygon;

pub use analysis::{
    boundary_point, boundary_radius, dichotomy, halo_decompose, lambda_at_nk, lambda_unit, lb_polygon, newton_at, sandwich,
    ub_polygon, HaloComponent, HaloReport, Sandwich, SlopeInterval,
};
pub use ap::{ap_detect, ApReport, Progression};
pub use polygon::{Flag, Point, Polygon, Segment};
