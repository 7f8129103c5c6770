pub mod check;
pub mod config;
pub mod dip;
pub mod scan;
pub mod setup;
pub mod svg;
