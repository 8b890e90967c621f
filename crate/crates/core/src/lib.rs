pub mod bisim;
pub mod cli;
pub mod coin;
pub mod formula;
pub mod ids;
pub mod lab;
pub mod models;
pub mod semantics;
pub mod transforms;
