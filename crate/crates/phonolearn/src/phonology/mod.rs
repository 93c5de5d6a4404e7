//! Phoneme inventories and the background theories built over them.

pub mod inventory;
pub mod systems;

pub use inventory::{Inventory, InventoryError, Phoneme, PhonemeClass};
pub use systems::{background, head_mode, Background, FeatureSystem};
