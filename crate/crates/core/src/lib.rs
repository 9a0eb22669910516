//! Maximum colorful paths in vertex-colored temporal graphs.
//!
//! A temporal path visits distinct vertices over edges with strictly
//! increasing timestamps; it is colorful when its vertices carry distinct
//! colors. This crate finds long colorful paths:
//!
//! - [`ctpls`] is a greedy construction plus two local-search moves, fast
//!   on graphs with hundreds of vertices;
//! - [`exact`] returns a proven optimum for small graphs;
//! - [`reduction`] builds hard instances from independent set instances;
//! - [`gen`] produces seeded synthetic instances with a planted optimum;
//! - [`io`] and [`bench`] handle text formats and experiment runs.
//!
//! ```
//! use colorpath::{ctpls, GraphBuilder};
//!
//! let mut b = GraphBuilder::new(3);
//! b.add_edge(0, 1, 1).unwrap();
//! b.add_edge(1, 2, 2).unwrap();
//! let g = b.colors(vec![0, 1, 2]).unwrap().build().unwrap();
//! assert_eq!(ctpls(&g).color_count(), 3);
//! ```

pub mod bench;
pub mod ctpls;
pub mod exact;
pub mod gen;
pub mod graph;
pub mod io;
pub mod reduction;

pub use crate::ctpls::{ctpls, ctpls_with, CtplsOptions, CtplsResult};
pub use crate::exact::{exact_max_colorful_path, naive_enumerate, ExactError, ExactLimits, ExactSolution};
pub use crate::graph::{
    ColorId, ColoredTemporalGraph, GraphBuilder, GraphError, PathViolation, TemporalEdge,
    TemporalPath, TimeDomain, Timestamp, VertexId,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/temporal-graphs.md")]
    struct TemporalGraphs;
    #[doc = include_str!("../../../book/src/ctpls.md")]
    struct Ctpls;
    #[doc = include_str!("../../../book/src/exact.md")]
    struct Exact;
    #[doc = include_str!("../../../book/src/reduction.md")]
    struct Reduction;
    #[doc = include_str!("../../../book/src/generators.md")]
    struct Generators;
    #[doc = include_str!("../../../book/src/formats.md")]
    struct Formats;
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    struct Benchmarks;
}
