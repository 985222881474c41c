//! The graded (a,b)-preprojective algebra: components `V^t_d`, the maps `g^t_d` and
//! `f^t_d`, almost split sequences, and Hom/End computations.

pub mod component;
pub mod maps;
pub mod relations;
pub mod rep;

pub use component::{ComponentKey, GradedComponent, PreBlock, PreprojAlgebra};
pub use maps::{ArSequence, Exactness, MapKind, MultiplicationMap, Summand, SummandClass};
pub use relations::{relation_spanning_set, RelationSet};
pub use rep::{hom_space, is_indecomposable, RepMorphism, Representation};
