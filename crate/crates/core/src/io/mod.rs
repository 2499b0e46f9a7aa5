//! File formats: the canonical JSON document, CSV tables, OBJ meshes and SVG
//! drawings of the planar disk packing.

mod document;
mod json;
mod obj;
mod svg;

use std::fmt::Write as _;

use thiserror::Error;

pub use document::{BallRow, CrossingRow, Metadata, NecklaceDocument};
pub use json::{to_canonical_json, CanonicalFormatter};
pub use obj::{export_obj, ObjOptions};
pub use svg::{export_svg, packing_svg, SvgDisk};

use crate::necklace::{Necklace, NecklaceError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("malformed document: {0}")]
    Parse(String),
    #[error(transparent)]
    Necklace(#[from] NecklaceError),
}

/// Export formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Obj,
    Svg,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "obj" => Ok(Format::Obj),
            "svg" => Ok(Format::Svg),
            "csv" => Ok(Format::Csv),
            other => Err(IoError::UnsupportedFormat(format!("{other:?} (expected json, obj, svg or csv)"))),
        }
    }
}

/// Formats a float with 17 significant digits, which round-trips exactly.
pub(crate) fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a necklace in the given format.
pub fn export(necklace: &Necklace, format: Format) -> Result<Vec<u8>, IoError> {
    export_document(&NecklaceDocument::from_necklace(necklace), format, &ObjOptions::default())
}

/// Serializes a document in the given format. Documents without balls or
/// threads (nothing assembled yet) are rejected.
pub fn export_document(doc: &NecklaceDocument, format: Format, obj: &ObjOptions) -> Result<Vec<u8>, IoError> {
    if doc.balls.is_empty() || doc.threads.is_empty() {
        return Err(IoError::UnsupportedFormat(
            "nothing to export: the document has no balls or threads; assemble a necklace first".into(),
        ));
    }
    Ok(match format {
        Format::Json => doc.to_json().into_bytes(),
        Format::Csv => export_csv(doc).into_bytes(),
        Format::Obj => export_obj(doc, obj)?.into_bytes(),
        Format::Svg => export_svg(doc).into_bytes(),
    })
}

/// `id,x,y,z,r,role` header followed by one row per ball.
pub fn export_csv(doc: &NecklaceDocument) -> String {
    let mut out = String::from("id,x,y,z,r,role\n");
    for b in &doc.balls {
        let _ = writeln!(out, "{},{},{},{},{},{}", b.id, float(b.x), float(b.y), float(b.z), float(b.r), b.role);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use crate::necklace::{assemble, AssembleOptions};

    fn trefoil() -> Necklace {
        assemble(&parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap(), &AssembleOptions::default()).unwrap()
    }

    #[test]
    fn csv_has_one_row_per_ball() {
        let text = String::from_utf8(export(&trefoil(), Format::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "id,x,y,z,r,role");
        assert_eq!(lines.len(), 16);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
    }

    #[test]
    fn empty_document_is_rejected() {
        let err = export_document(&NecklaceDocument::default(), Format::Csv, &ObjOptions::default()).unwrap_err();
        assert!(matches!(err, IoError::UnsupportedFormat(ref m) if m.contains("assemble")));
    }

    #[test]
    fn format_names_parse() {
        assert_eq!("OBJ".parse::<Format>().unwrap(), Format::Obj);
        assert!(matches!("stl".parse::<Format>(), Err(IoError::UnsupportedFormat(_))));
    }
}
