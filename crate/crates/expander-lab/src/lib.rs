pub mod cli;
pub mod extend;
pub mod graphs;
pub mod hamilton;
pub mod linalg;
pub mod matching;
pub mod mixing;
pub mod report;
pub mod rng;
pub mod sampling;
