//! Renderers: SVG fan pictures, CSV series and JSON documents.

pub mod csv;
pub mod json;
pub mod svg;

pub use self::csv::series_csv;
pub use self::json::{from_json, to_json};
pub use self::svg::render_fan_svg;
