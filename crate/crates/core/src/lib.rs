pub mod char_sums;
pub mod classical_series;
pub mod ff_core;
pub mod hg_datum;
pub mod modular_forms;
pub mod numeric;
pub mod padic_congruence;
pub mod period_integrator;
pub mod report;
pub mod tables;
