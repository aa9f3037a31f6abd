//! External file formats: Aldebaran `.aut` transition systems, the
//! textual coalgebra format, and partition files.

mod aut;
mod partition_file;
mod text;

pub use aut::parse_aut;
pub use partition_file::{parse_partition, write_partition, PartitionFile};
pub use text::{parse_coalg_text, write_coalg_text};
