pub mod bench;
pub mod cli;
pub mod derive;
pub mod encoder;
pub mod format;
pub mod gf;
pub mod kernel;
pub mod poly;
pub mod rational;
