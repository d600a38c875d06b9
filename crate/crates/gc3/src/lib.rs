pub mod complex;
pub mod data;
pub mod exact;
pub mod forms;
pub mod graph;
pub mod integrate;
