pub mod basis;
pub mod cli;
pub mod flow;
pub mod geometry;
pub mod oracle;
pub mod scalar;
