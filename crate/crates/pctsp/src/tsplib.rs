//! Reader for two-dimensional Euclidean TSPLIB documents.

use pctsp_core::instances::CoordinateSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TsplibError {
    #[error("unsupported EDGE_WEIGHT_TYPE {0}; only EUC_2D and CEIL_2D are read")]
    UnsupportedEdgeWeightType(String),
    #[error("line {line}: {reason}")]
    MalformedSection { line: usize, reason: String },
}

fn malformed(line: usize, reason: impl Into<String>) -> TsplibError {
    TsplibError::MalformedSection { line, reason: reason.into() }
}

/// Parses the header and NODE_COORD_SECTION. Vertex labels are the node ids
/// of the document; the first node listed is the root.
pub fn parse_tsplib(text: &str) -> Result<CoordinateSet, TsplibError> {
    let mut name = String::new();
    let mut dimension: Option<usize> = None;
    let mut weight_type: Option<String> = None;
    let mut labels = Vec::new();
    let mut points = Vec::new();
    let mut in_coords = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if in_coords {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                if fields.first().is_some_and(|f| f.ends_with("_SECTION")) {
                    break;
                }
                return Err(malformed(line_no, "expected `id x y`"));
            }
            let id: u64 = fields[0].parse().map_err(|_| malformed(line_no, "node id is not an integer"))?;
            let x: f64 = fields[1].parse().map_err(|_| malformed(line_no, "x is not a number"))?;
            let y: f64 = fields[2].parse().map_err(|_| malformed(line_no, "y is not a number"))?;
            labels.push(id);
            points.push((x, y));
            continue;
        }
        if line.starts_with("NODE_COORD_SECTION") {
            match weight_type.as_deref() {
                Some("EUC_2D") | Some("CEIL_2D") => {}
                Some(other) => return Err(TsplibError::UnsupportedEdgeWeightType(other.into())),
                None => return Err(malformed(line_no, "EDGE_WEIGHT_TYPE must precede the coordinates")),
            }
            in_coords = true;
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(malformed(line_no, "expected `KEY : VALUE`"));
        };
        let value = value.trim();
        match key.trim() {
            "NAME" => name = value.into(),
            "DIMENSION" => {
                dimension = Some(value.parse().map_err(|_| malformed(line_no, "DIMENSION is not an integer"))?)
            }
            "EDGE_WEIGHT_TYPE" => {
                if !matches!(value, "EUC_2D" | "CEIL_2D") {
                    return Err(TsplibError::UnsupportedEdgeWeightType(value.into()));
                }
                weight_type = Some(value.into());
            }
            _ => {}
        }
    }
    let dimension = dimension.ok_or_else(|| malformed(0, "missing DIMENSION"))?;
    if !in_coords {
        return Err(malformed(0, "missing NODE_COORD_SECTION"));
    }
    if points.len() != dimension {
        return Err(malformed(0, format!("DIMENSION is {dimension} but {} nodes were listed", points.len())));
    }
    let mut sorted = labels.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != labels.len() {
        return Err(malformed(0, "duplicate node id"));
    }
    let mut set = CoordinateSet::new(name, points);
    set.labels = labels;
    Ok(set)
}
