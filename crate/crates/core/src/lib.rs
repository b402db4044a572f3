//! Spectral partitioning of weighted graphs into expanders: graph
//! quantities, normalized Laplacian eigenpairs and sweep cuts, the local
//! search with its certificates, exact references for small inputs, and
//! edge-list I/O with a generator zoo.

pub mod acceptance;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracles;
pub mod partition;
pub mod spectral;
