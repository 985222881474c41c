//! Graded preprojective algebras of acyclic quivers, their multiplication-by-arrow
//! maps as morphisms of quiver representations, and exact and randomized checks of
//! maximal-rank properties of tensor-sum maps.
//!
//! Paths compose function-style: in a product `pq` the path `q` is traversed first.
//! A path starting at `t` therefore grows on the left under the module action of the
//! path algebra and on the right under the multiplication maps.

pub mod cli;
pub mod error;
pub mod exactlinalg;
pub mod maxrank;
pub mod polyhl;
pub mod preproj;
pub mod quiver;
