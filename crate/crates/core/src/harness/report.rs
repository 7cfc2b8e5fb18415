use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::experiment::ResultRow;
use super::HarnessError;
use crate::graph::Graph;
use crate::partition::{default_ordering, regular_partition_cost, simple_partition_cost};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "markdown" | "markdown-table" | "md" => Ok(ReportFormat::Markdown),
            other => Err(HarnessError::UnknownFormat(other.to_string())),
        }
    }
}

/// Rows that can be printed as a markdown table.
pub trait TableRow: Serialize {
    fn headers() -> Vec<&'static str>;
    fn cells(&self) -> Vec<String>;
}

/// `round(100 m / C(n,2)) / 100` with halves rounded up, as `0.xx`.
pub fn format_density(n: usize, m: usize) -> String {
    let pairs = (n * n.saturating_sub(1) / 2) as u128;
    if pairs == 0 {
        return "0.00".into();
    }
    let hundredths = (200 * m as u128 + pairs) / (2 * pairs);
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// One line of the regular-versus-simple partition cost comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCostRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub d: String,
    pub cost_regular: usize,
    pub cost_simple: usize,
    pub difference: usize,
    /// Rounded percentage, e.g. `18%`.
    pub reduction: String,
}

/// Costs of the regular and simple partitions of `g` (default ordering).
pub fn partition_cost_row(instance: &str, g: &Graph) -> PartitionCostRow {
    let regular = regular_partition_cost(g);
    let simple = simple_partition_cost(g, &default_ordering(g)).expect("default ordering is a permutation");
    let difference = regular - simple;
    let percent = if regular == 0 {
        0
    } else {
        (200 * difference + regular) / (2 * regular)
    };
    PartitionCostRow {
        instance: instance.to_string(),
        n: g.n(),
        m: g.m(),
        d: format_density(g.n(), g.m()),
        cost_regular: regular,
        cost_simple: simple,
        difference,
        reduction: format!("{percent}%"),
    }
}

impl TableRow for PartitionCostRow {
    fn headers() -> Vec<&'static str> {
        vec!["instance", "n", "m", "d", "cost(P)", "cost(P_S)", "diff", "reduction"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.instance.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.d.clone(),
            self.cost_regular.to_string(),
            self.cost_simple.to_string(),
            self.difference.to_string(),
            self.reduction.clone(),
        ]
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_else(|| "-".into())
}

impl TableRow for ResultRow {
    fn headers() -> Vec<&'static str> {
        vec![
            "instance",
            "complement",
            "n",
            "m",
            "d",
            "alpha",
            "mode",
            "beta",
            "alpha_hat",
            "X1 (vertices, edges)",
            "alpha_hat_post",
            "recalculations",
            "largest component",
            "partitions",
            "error",
        ]
    }

    fn cells(&self) -> Vec<String> {
        let x1 = match (self.x1_vertices, self.x1_edges) {
            (Some(v), Some(e)) => format!("{v}, {e}"),
            _ => "-".into(),
        };
        let partitions = match self.partitions_solved {
            Some(k) => format!("{k}/{}", self.n),
            None => "-".into(),
        };
        vec![
            self.instance.clone(),
            self.complement.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.density.clone(),
            opt(&self.alpha_known),
            self.mode.to_string(),
            self.beta.to_string(),
            opt(&self.alpha_hat),
            x1,
            opt(&self.alpha_hat_post),
            opt(&self.recalculations),
            opt(&self.largest_component),
            partitions,
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Renders rows in a fixed column order. An empty row list yields only the
/// header (or `[]`).
pub fn emit_report<T: TableRow>(rows: &[T], format: ReportFormat) -> Result<String, HarnessError> {
    match format {
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(rows).expect("rows serialize");
            text.push('\n');
            Ok(text)
        }
        ReportFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            if rows.is_empty() {
                return Ok(String::new());
            }
            for row in rows {
                writer
                    .serialize(row)
                    .map_err(|e| HarnessError::InvalidSpec(e.to_string()))?;
            }
            let bytes = writer.into_inner().expect("in-memory writer");
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Markdown => {
            let headers = T::headers();
            let mut out = String::new();
            writeln!(out, "| {} |", headers.join(" | ")).unwrap();
            writeln!(out, "|{}", "---|".repeat(headers.len())).unwrap();
            for row in rows {
                writeln!(out, "| {} |", row.cells().join(" | ")).unwrap();
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_rounding() {
        assert_eq!(format_density(200, 5066), "0.25");
        assert_eq!(format_density(200, 10024), "0.50");
        assert_eq!(format_density(500, 120291), "0.96");
        assert_eq!(format_density(2, 1), "1.00");
        assert_eq!(format_density(1, 0), "0.00");
        // 1/8 of the pairs is exactly 0.125
        assert_eq!(format_density(16, 15), "0.13");
    }

    #[test]
    fn formats_parse() {
        assert_eq!("markdown-table".parse::<ReportFormat>().unwrap(), ReportFormat::Markdown);
        assert!("xml".parse::<ReportFormat>().is_err());
    }

    #[test]
    fn partition_cost_markdown_header() {
        let row = partition_cost_row("c5", &Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap());
        assert_eq!((row.cost_regular, row.difference), (3, row.cost_regular - row.cost_simple));
        let md = emit_report(std::slice::from_ref(&row), ReportFormat::Markdown).unwrap();
        assert!(md.starts_with("| instance | n | m | d | cost(P) | cost(P_S) | diff | reduction |"));
        let csv = emit_report(&[row], ReportFormat::Csv).unwrap();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.starts_with("instance,n,m,d,cost_regular,cost_simple,difference,reduction\n"));
    }
}
