pub mod cli;
pub mod game;
pub mod geometry;
pub mod graph;
pub mod oracle;
pub mod rational;
pub mod regions;
pub mod report;
pub mod solver;
