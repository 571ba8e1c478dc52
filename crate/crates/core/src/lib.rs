//! Hyperbolic polygonal billiards.
//!
//! Bounce words of billiard trajectories in compact hyperbolic polygons,
//! realizability of words by unfolding, a reflection-group based
//! rigidity/flexibility classifier, and Gauss-Bonnet accounting for cone
//! surfaces, orbifolds and branched covers.

pub mod hyperbolic;
pub mod polygon;
pub mod word;
pub mod billiards;
pub mod unfolding;
pub mod rigidity;
pub mod cone;
