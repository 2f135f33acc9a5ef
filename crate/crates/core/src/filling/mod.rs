//! Rank-3 hyperbolic triangle groups: cusps, congruence quotients avoiding
//! short cusp elements, and the warp profile of the cone metric.

pub mod congruence;
pub mod cusp;
pub mod hyperbolic;
pub mod model;
pub mod warp;

pub use congruence::{certify_prime, congruence_search, two_pi_certificate, AvoidanceCertificate, TwoPiMargin};
pub use cusp::{a_set, check_horoballs, compute_as, cusp_data, CuspData, CuspElement, CuspElementKind};
pub use hyperbolic::{Ideal, Isometry, ModIsometry};
pub use model::{TriangleModel, Vertex};
pub use warp::{midpoint_r_t, warp_profile, WarpProfile, WarpRegistry};
