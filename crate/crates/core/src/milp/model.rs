//! Solver-independent linear model: named columns with bounds, kind and
//! objective coefficient, and ranged rows. Always minimized.

use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
    Integer,
}

impl VarKind {
    pub fn is_integral(self) -> bool {
        !matches!(self, VarKind::Continuous)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
    pub objective: f64,
}

/// `lower <= sum(coef * var) <= upper`; either side may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearModel {
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
}

impl LinearModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_column(&mut self, name: impl Into<String>, kind: VarKind, lower: f64, upper: f64, objective: f64) -> VarId {
        let (lower, upper) = match kind {
            VarKind::Binary => (lower.max(0.0), upper.min(1.0)),
            _ => (lower, upper),
        };
        self.columns.push(Column {
            name: name.into(),
            kind,
            lower,
            upper,
            objective,
        });
        VarId(self.columns.len() - 1)
    }

    pub fn add_row(&mut self, name: impl Into<String>, terms: Vec<(VarId, f64)>, lower: f64, upper: f64) -> usize {
        self.rows.push(Row {
            name: name.into(),
            terms,
            lower,
            upper,
        });
        self.rows.len() - 1
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_integral(&self) -> usize {
        self.columns.iter().filter(|c| c.kind.is_integral()).count()
    }

    /// Pins a column to `value` and drops its integrality.
    pub fn fix(&mut self, var: VarId, value: f64) {
        let col = &mut self.columns[var.0];
        col.lower = value;
        col.upper = value;
        col.kind = VarKind::Continuous;
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.columns.iter().zip(values).map(|(c, v)| c.objective * v).sum()
    }

    /// Largest absolute row or bound violation of `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|r| {
            let lhs: f64 = r.terms.iter().map(|&(v, c)| c * values[v.0]).sum();
            (r.lower - lhs).max(lhs - r.upper).max(0.0)
        });
        let bounds = self
            .columns
            .iter()
            .zip(values)
            .map(|(c, &v)| (c.lower - v).max(v - c.upper).max(0.0));
        rows.chain(bounds).fold(0.0, f64::max)
    }

    /// Writes the model in free MPS format (integer columns between
    /// `MARKER` lines, ranged rows through `RANGES`).
    pub fn write_mps<W: Write>(&self, name: &str, out: &mut W) -> io::Result<()> {
        writeln!(out, "NAME {name}")?;
        writeln!(out, "ROWS")?;
        writeln!(out, " N obj")?;
        for row in &self.rows {
            writeln!(out, " {} {}", row_type(row), row.name)?;
        }

        let mut by_column: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.columns.len()];
        for (r, row) in self.rows.iter().enumerate() {
            for &(v, c) in &row.terms {
                by_column[v.0].push((r, c));
            }
        }

        writeln!(out, "COLUMNS")?;
        let mut in_int = false;
        let mut marker = 0;
        for (col, entries) in self.columns.iter().zip(&by_column) {
            if col.kind.is_integral() != in_int {
                let tag = if in_int { "'INTEND'" } else { "'INTORG'" };
                writeln!(out, " MARKER{marker} 'MARKER' {tag}")?;
                marker += 1;
                in_int = !in_int;
            }
            if col.objective != 0.0 {
                writeln!(out, " {} obj {}", col.name, col.objective)?;
            }
            for &(r, c) in entries {
                writeln!(out, " {} {} {}", col.name, self.rows[r].name, c)?;
            }
            if col.objective == 0.0 && entries.is_empty() {
                writeln!(out, " {} obj 0", col.name)?;
            }
        }
        if in_int {
            writeln!(out, " MARKER{marker} 'MARKER' 'INTEND'")?;
        }

        writeln!(out, "RHS")?;
        for row in &self.rows {
            let rhs = match row_type(row) {
                "L" => row.upper,
                _ => row.lower,
            };
            if rhs != 0.0 && rhs.is_finite() {
                writeln!(out, " rhs {} {}", row.name, rhs)?;
            }
        }

        let ranged: Vec<&Row> = self
            .rows
            .iter()
            .filter(|r| r.lower.is_finite() && r.upper.is_finite() && r.lower != r.upper)
            .collect();
        if !ranged.is_empty() {
            writeln!(out, "RANGES")?;
            for row in ranged {
                writeln!(out, " rng {} {}", row.name, row.upper - row.lower)?;
            }
        }

        writeln!(out, "BOUNDS")?;
        for col in &self.columns {
            let name = &col.name;
            if col.kind == VarKind::Binary && col.lower == 0.0 && col.upper == 1.0 {
                writeln!(out, " BV bnd {name}")?;
            } else if col.lower == col.upper {
                writeln!(out, " FX bnd {name} {}", col.lower)?;
            } else {
                match (col.lower.is_finite(), col.upper.is_finite()) {
                    (false, false) => writeln!(out, " FR bnd {name}")?,
                    (false, true) => {
                        writeln!(out, " MI bnd {name}")?;
                        writeln!(out, " UP bnd {name} {}", col.upper)?;
                    }
                    (true, upper_finite) => {
                        if col.lower != 0.0 || col.kind.is_integral() {
                            writeln!(out, " LO bnd {name} {}", col.lower)?;
                        }
                        if upper_finite {
                            writeln!(out, " UP bnd {name} {}", col.upper)?;
                        } else if col.kind.is_integral() {
                            writeln!(out, " PL bnd {name}")?;
                        }
                    }
                }
            }
        }
        writeln!(out, "ENDATA")
    }
}

fn row_type(row: &Row) -> &'static str {
    match (row.lower.is_finite(), row.upper.is_finite()) {
        (true, true) if row.lower == row.upper => "E",
        (true, _) => "G",
        (false, true) => "L",
        (false, false) => "N",
    }
}
