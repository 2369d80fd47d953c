//! Exact tools for tropical plane curves with hyperelliptic skeletons.

pub mod catalog;
pub mod chains;
pub mod embedding;
pub mod error;
pub mod graph;
pub mod hyperelliptic;
pub mod io;
pub mod iso;
pub mod lattice;
pub mod lp;
pub mod moduli;
pub mod rational;
pub mod render;
pub mod triangulation;
pub mod tropical;

pub use error::{Error, Result};
pub use graph::MetricGraph;
pub use lattice::{AffineMap, LatticePoint, LatticePolygon};
pub use rational::Rational;
pub use triangulation::{HeightVector, UnimodularTriangulation};
pub use tropical::{Skeleton, TropicalCurve};
