use serde::{Deserialize, Serialize};

/// A table cell. Every cell holds a value or an explicit tag; there are no
/// empty cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    /// Not applicable, rendered `na`.
    Na,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Na, Cell::Num)
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_sig(*x, 9),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Na => "na".into(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

/// Fixed-point decimal with `sig` significant digits.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (sig as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may carry into a new leading digit
    let digits = s.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
    if decimals > 0 && digits.trim_start_matches('0').len() > sig {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn get(&self, row: usize, column: &str) -> Option<&Cell> {
        self.rows.get(row)?.get(self.column(column)?)
    }

    /// Fixed-width text rendering for the terminal.
    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(j, c)| cells.iter().map(|r| r[j].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let line = |items: &mut dyn Iterator<Item = String>| {
            items
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let mut out = line(&mut self.columns.iter().cloned());
        out.push('\n');
        for r in cells {
            out.push_str(&line(&mut r.into_iter()));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_sig(638.906_163_3, 9), "638.906163");
        assert_eq!(format_sig(0.000_123_456_789_12, 9), "0.000123456789");
        assert_eq!(format_sig(-2.5, 9), "-2.50000000");
        assert_eq!(format_sig(123_456_789_012.0, 9), "123456789012");
        assert_eq!(format_sig(9.999_999_999_9, 9), "10.0000000");
        assert_eq!(format_sig(0.0, 9), "0");
    }

    #[test]
    fn text_rendering_aligns() {
        let mut t = Table::new("t", &["a", "long_name"]);
        t.push(vec![Cell::Int(1), Cell::Na]);
        let s = t.to_text();
        assert_eq!(s.lines().count(), 2);
        assert!(s.lines().all(|l| l.len() == "a  long_name".len()));
    }
}
