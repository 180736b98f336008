//! Color math and palette matching.

mod hungarian;
mod lab;
mod palette;
mod wed;

pub use hungarian::{assignment_cost, hungarian, Assignment};
pub use lab::{delta_e, lab_to_srgb, lab_to_srgb_f64, srgb_f64_to_lab, srgb_to_lab, srgb_to_lab_checked, Lab};
pub use palette::{
    extract_palette, Extraction, Palette5, PalettePool, PoolEntry, DEFAULT_EXTRACTION_SEED, PALETTE_SIZE,
};
pub use wed::{
    bin_lab_table, edge_costs, nearest_palettes, nearest_palettes_with, wed_distance, wed_distance_with, EdgeWeighting,
    RankedPalette, WedMode, WedOptions, WeightedColorHistogram,
};
