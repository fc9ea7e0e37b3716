pub mod compressor;
pub mod matrix;
pub mod ncd;
pub mod nwd;
pub mod multilist;
pub mod quartet;
pub mod cli;
