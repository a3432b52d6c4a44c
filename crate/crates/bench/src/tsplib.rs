//! Reader for TSPLIB `.tsp` files with `NODE_COORD_SECTION` coordinates.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use mmga_core::{InstanceError, Metric, TspInstance};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TsplibError {
    #[error("{source_name}: {source}")]
    Io {
        source_name: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{source_name}:{line}: {message}")]
    Syntax {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("{source_name}: {message}")]
    Incomplete {
        source_name: String,
        message: String,
    },
    #[error("{source_name}: {source}")]
    Instance {
        source_name: String,
        #[source]
        source: InstanceError,
    },
}

/// Reads the file at `path`. The instance name falls back to the file stem
/// when the header has no `NAME`.
pub fn load_tsplib(path: &Path) -> Result<TspInstance, TsplibError> {
    let source_name = path.display().to_string();
    let file = File::open(path).map_err(|source| TsplibError::Io {
        source_name: source_name.clone(),
        source,
    })?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_tsplib(BufReader::new(file), &source_name, &stem)
}

pub fn parse_tsplib<R: BufRead>(
    reader: R,
    source_name: &str,
    default_name: &str,
) -> Result<TspInstance, TsplibError> {
    let syntax = |line: usize, message: String| TsplibError::Syntax {
        source_name: source_name.to_owned(),
        line,
        message,
    };
    let mut name = None;
    let mut dimension = None;
    let mut metric = None;
    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut in_coords = false;

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|source| TsplibError::Io {
            source_name: source_name.to_owned(),
            source,
        })?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if in_coords && line.starts_with(|c: char| c.is_ascii_digit()) {
            let n = coords.len();
            let mut parts = line.split_whitespace();
            let mut field = |what: &str| {
                parts
                    .next()
                    .ok_or_else(|| syntax(lineno, format!("missing {what}")))
            };
            let id: usize = field("node id")?
                .parse()
                .map_err(|_| syntax(lineno, "bad node id".into()))?;
            let x: f64 = field("x")?
                .parse()
                .map_err(|_| syntax(lineno, "bad x coordinate".into()))?;
            let y: f64 = field("y")?
                .parse()
                .map_err(|_| syntax(lineno, "bad y coordinate".into()))?;
            if id == 0 || id > n {
                return Err(syntax(lineno, format!("node id {id} outside 1..={n}")));
            }
            if coords[id - 1].replace((x, y)).is_some() {
                return Err(syntax(lineno, format!("node {id} listed twice")));
            }
            continue;
        }
        in_coords = false;

        if line == "NODE_COORD_SECTION" {
            let n = dimension
                .ok_or_else(|| syntax(lineno, "DIMENSION must precede coordinates".into()))?;
            coords = vec![None; n];
            in_coords = true;
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            if line.ends_with("_SECTION") {
                return Err(syntax(lineno, format!("unsupported section {line}")));
            }
            return Err(syntax(
                lineno,
                format!("expected `KEY : value`, got `{line}`"),
            ));
        };
        let value = value.trim();
        match key.trim() {
            "NAME" => name = Some(value.to_owned()),
            "TYPE" if value != "TSP" => {
                return Err(syntax(
                    lineno,
                    format!("only TYPE TSP is supported, got {value}"),
                ))
            }
            "DIMENSION" => {
                dimension = Some(
                    value
                        .parse()
                        .map_err(|_| syntax(lineno, format!("bad DIMENSION `{value}`")))?,
                )
            }
            "EDGE_WEIGHT_TYPE" => {
                metric = Some(Metric::from_tsplib_name(value).ok_or_else(|| {
                    syntax(lineno, format!("unsupported EDGE_WEIGHT_TYPE {value}"))
                })?)
            }
            _ => {}
        }
    }

    let incomplete = |message: &str| TsplibError::Incomplete {
        source_name: source_name.to_owned(),
        message: message.to_owned(),
    };
    let metric = metric.ok_or_else(|| incomplete("no EDGE_WEIGHT_TYPE"))?;
    if dimension.is_none() {
        return Err(incomplete("no DIMENSION"));
    }
    if coords.is_empty() {
        return Err(incomplete("no NODE_COORD_SECTION"));
    }
    let coords = coords
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| incomplete(&format!("node {} has no coordinates", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    TspInstance::new(
        name.unwrap_or_else(|| default_name.to_owned()),
        coords,
        metric,
    )
    .map_err(|source| TsplibError::Instance {
        source_name: source_name.to_owned(),
        source,
    })
}
