pub mod bench;
pub mod coordinate;
pub mod geom;
pub mod order;
pub mod plan;
pub mod render;
pub mod revolve;
pub mod scenario;
pub mod spp;
pub mod validate;
