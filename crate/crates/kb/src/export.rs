//! Deterministic CSV and JSON exports of query results and partitions.
//! Zero cells are written explicitly so downstream plotting sees them.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use jdd_core::kb::KnowledgeBase;
use jdd_core::query::{HeatmapData, Histogram};
use jdd_core::scale::PunishCellCoord;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("cannot write {0}: {1}")]
    Io(String, std::io::Error),
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

fn writer(path: &Path) -> Result<BufWriter<File>, ExportError> {
    let file =
        File::create(path).map_err(|e| ExportError::Io(path.display().to_string(), e))?;
    Ok(BufWriter::new(file))
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> ExportError + '_ {
    move |e| ExportError::Io(path.display().to_string(), e)
}

/// Quotes a CSV field when needed.
fn csv_field(value: &str) -> String {
    if value.contains([',', '"', '\n']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

fn fmt_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.9}")
    }
}

/// Writes a 2-D histogram grid: header row of column labels, one row per
/// row label, zero cells explicit. An empty heatmap still gets its header.
pub fn write_heatmap_csv(data: &HeatmapData, path: &Path) -> Result<(), ExportError> {
    let mut w = writer(path)?;
    let err = io_err(path);
    let mut header = vec![csv_field(&format!("{}\\{}", data.row_axis, data.col_axis))];
    header.extend(data.cols.iter().map(|c| csv_field(c)));
    writeln!(w, "{}", header.join(",")).map_err(&err)?;
    for (row_label, row) in data.rows.iter().zip(&data.values) {
        let mut line = vec![csv_field(row_label)];
        line.extend(row.iter().map(|v| fmt_value(*v)));
        writeln!(w, "{}", line.join(",")).map_err(&err)?;
    }
    w.flush().map_err(&err)?;
    Ok(())
}

pub fn write_heatmap_json(data: &HeatmapData, path: &Path) -> Result<(), ExportError> {
    let mut w = writer(path)?;
    let err = io_err(path);
    serde_json::to_writer(&mut w, data)?;
    writeln!(w).map_err(&err)?;
    w.flush().map_err(&err)?;
    Ok(())
}

/// Writes a histogram as label,value rows. Labels come from the knowledge
/// base's coordinate labelling for the partition.
pub fn write_histogram_csv(
    h: &Histogram,
    kb: &KnowledgeBase,
    partition: &str,
    path: &Path,
) -> Result<(), ExportError> {
    let mut w = writer(path)?;
    let err = io_err(path);
    let axis_names: Vec<&str> = h.axes.iter().map(|a| a.name()).collect();
    writeln!(w, "{},value", axis_names.join(",")).map_err(&err)?;
    for (coord, value) in &h.entries {
        let labels: Vec<String> = coord
            .iter()
            .map(|c| csv_field(&coord_label(c, kb, partition)))
            .collect();
        writeln!(w, "{},{}", labels.join(","), fmt_value(*value)).map_err(&err)?;
    }
    w.flush().map_err(&err)?;
    Ok(())
}

fn coord_label(
    c: &jdd_core::query::CoordComponent,
    kb: &KnowledgeBase,
    partition: &str,
) -> String {
    use jdd_core::query::CoordComponent;
    match c {
        CoordComponent::Action(a) => a.clone(),
        CoordComponent::Damage(d) => d.label(partition, &kb.scale.damage_axis),
        CoordComponent::Punishment(p) => p.label(&kb.scale.scale),
    }
}

/// Exports one partition as coordinates + count rows, main cells first and
/// parallel fine cells after, for external tools.
pub fn write_partition_csv(
    kb: &KnowledgeBase,
    partition: &str,
    path: &Path,
) -> Result<(), ExportError> {
    let mut w = writer(path)?;
    let err = io_err(path);
    writeln!(w, "action,damage,punishment,count").map_err(&err)?;
    if let Some(matrix) = kb.partition(partition) {
        for ((action, damage, slot), cell) in matrix.cells() {
            writeln!(
                w,
                "{},{},{},{}",
                csv_field(action),
                csv_field(&damage.label(partition, &kb.scale.damage_axis)),
                csv_field(&slot.label(&kb.scale.scale)),
                cell.count
            )
            .map_err(&err)?;
        }
        for ((action, damage, fine), cell) in matrix.fine_cells() {
            let label = PunishCellCoord::Fine(*fine);
            let label = match label {
                PunishCellCoord::Fine(b) => kb.scale.fine_buckets.label(b),
                PunishCellCoord::Slot(_) => unreachable!(),
            };
            writeln!(
                w,
                "{},{},{},{}",
                csv_field(action),
                csv_field(&damage.label(partition, &kb.scale.damage_axis)),
                csv_field(&label),
                cell.count
            )
            .map_err(&err)?;
        }
    }
    w.flush().map_err(&err)?;
    Ok(())
}

/// Serializes any query output structure as a single JSON document.
pub fn write_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<(), ExportError> {
    let mut w = writer(path)?;
    let err = io_err(path);
    serde_json::to_writer(&mut w, value)?;
    writeln!(w).map_err(&err)?;
    w.flush().map_err(&err)?;
    Ok(())
}
