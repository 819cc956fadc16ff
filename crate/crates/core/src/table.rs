//! Grundy tables of the two-heap variants as CSV or JSON documents.
//!
//! Rows are indexed by `y` and columns by `x`, so the printed grid has the
//! origin in its upper left corner like the board itself.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::RuleSet;
use crate::grundy::{grundy_closed_form, GrundyTable, Region};
use crate::pass::pass_grundy_table;
use crate::Position;

/// Which layer of the pass game a table shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    /// Pass still available.
    Pass,
    NoPass,
}

impl Layer {
    pub fn as_str(&self) -> &'static str {
        match self {
            Layer::Pass => "pass",
            Layer::NoPass => "nopass",
        }
    }
}

impl FromStr for Layer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pass" => Ok(Layer::Pass),
            "nopass" => Ok(Layer::NoPass),
            other => Err(Error::InvalidArgument(format!(
                "layer must be pass or nopass, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub game: String,
    pub params: BTreeMap<String, u64>,
    pub max: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layer: Option<Layer>,
    pub rows: Vec<Vec<u64>>,
}

/// Grundy values of `rules` over `0..=max` on both axes. Closed forms are
/// used where available, the oracle otherwise. `layer` only matters for the
/// pass game, where it defaults to [`Layer::Pass`].
pub fn grundy_table_document(rules: &RuleSet, max: u64, layer: Option<Layer>) -> Result<TableDocument> {
    rules.validate()?;
    if rules.dimension() != 2 {
        return Err(Error::UnsupportedVariant(format!(
            "{rules} is not a two-heap game; tables are two-dimensional"
        )));
    }
    let region = Region::square(2, max);
    region.cell_count()?;
    let (rows, layer) = match *rules {
        RuleSet::PassRyuo { p } => {
            let layer = layer.unwrap_or(Layer::Pass);
            let table = pass_grundy_table(p, &region, layer == Layer::Pass)?;
            (table.rows(), Some(layer))
        }
        _ if rules.has_closed_form() => {
            let rows = (0..=max)
                .map(|y| {
                    (0..=max)
                        .map(|x| grundy_closed_form(rules, &Position::from([x, y])))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            (rows, None)
        }
        _ => (GrundyTable::for_rules(rules, region)?.rows(), None),
    };
    Ok(TableDocument {
        game: rules.name().to_string(),
        params: rules
            .params()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        max,
        layer,
        rows,
    })
}

impl TableDocument {
    pub fn to_csv(&self) -> String {
        let mut out = format!("# game={}", self.game);
        for (name, value) in &self.params {
            write!(out, " {name}={value}").unwrap();
        }
        if let Some(layer) = self.layer {
            write!(out, " layer={}", layer.as_str()).unwrap();
        }
        writeln!(out, " region={}", self.max).unwrap();
        out.push_str("y\\x");
        for x in 0..=self.max {
            write!(out, ",{x}").unwrap();
        }
        out.push('\n');
        for (y, row) in self.rows.iter().enumerate() {
            write!(out, "{y}").unwrap();
            for v in row {
                write!(out, ",{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<TableDocument> {
        let bad = |msg: &str| Error::InvalidArgument(format!("malformed table CSV: {msg}"));
        let mut lines = text.lines();
        let header = lines
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .ok_or_else(|| bad("missing header line"))?;
        let mut game = None;
        let mut max = None;
        let mut layer = None;
        let mut params = BTreeMap::new();
        for field in header.split(' ') {
            let (key, value) = field.split_once('=').ok_or_else(|| bad("header field"))?;
            match key {
                "game" => game = Some(value.to_string()),
                "region" => max = Some(value.parse().map_err(|_| bad("region"))?),
                "layer" => layer = Some(value.parse()?),
                _ => {
                    params.insert(key.to_string(), value.parse().map_err(|_| bad("parameter"))?);
                }
            }
        }
        let (game, max): (String, u64) = (
            game.ok_or_else(|| bad("no game"))?,
            max.ok_or_else(|| bad("no region"))?,
        );
        let columns = lines.next().ok_or_else(|| bad("missing column header"))?;
        if columns.split(',').count() as u64 != max + 2 {
            return Err(bad("column header width"));
        }
        let mut rows = Vec::new();
        for (y, line) in lines.enumerate() {
            let mut cells = line.split(',');
            let label: u64 = cells
                .next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| bad("row label"))?;
            if label != y as u64 {
                return Err(bad("row order"));
            }
            let row = cells
                .map(|c| c.parse().map_err(|_| bad("cell")))
                .collect::<Result<Vec<u64>>>()?;
            if row.len() as u64 != max + 1 {
                return Err(bad("row width"));
            }
            rows.push(row);
        }
        if rows.len() as u64 != max + 1 {
            return Err(bad("row count"));
        }
        Ok(TableDocument {
            game,
            params,
            max,
            layer,
            rows,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("table documents serialize");
        s.push('\n');
        s
    }
}
