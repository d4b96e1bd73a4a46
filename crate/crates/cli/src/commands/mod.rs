pub mod index;
pub mod kepler_report;
pub mod sweep;
pub mod trace;
