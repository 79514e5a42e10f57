//! Recomputes the published tables from the embedded fixtures and compares
//! cell by cell.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use crate::corpus::{load_fixture, Cell, Fixture, FixtureRow, PublishedSpectrum};
use crate::error::{Error, Result};
use crate::io::{matrix_to_json, vector_to_matrix};
use crate::linalg::{eigenvalues, CMatrix, CVector, NormKind};
use crate::perturbation::{perturb_joint, perturb_operator, perturb_rhs, Bound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableId {
    T2_1,
    T2_2,
    T2_3,
    T3_1,
    T3_2,
    T3_3,
}

impl TableId {
    pub const ALL: [TableId; 6] = [
        Self::T2_1,
        Self::T2_2,
        Self::T2_3,
        Self::T3_1,
        Self::T3_2,
        Self::T3_3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::T2_1 => "2.1",
            Self::T2_2 => "2.2",
            Self::T2_3 => "2.3",
            Self::T3_1 => "3.1",
            Self::T3_2 => "3.2",
            Self::T3_3 => "3.3",
        }
    }

    pub fn fixture_name(self) -> &'static str {
        match self {
            Self::T2_1 => "ex2_1",
            Self::T2_2 => "ex2_2",
            Self::T2_3 => "ex2_3",
            Self::T3_1 => "ex3_1_rhs",
            Self::T3_2 => "ex3_2_op",
            Self::T3_3 => "ex3_3_joint",
        }
    }

    /// Absolute threshold for a cell under the reference tolerances.
    pub fn policy_tolerance(self, cell: &Cell) -> f64 {
        let published = cell.value().abs();
        match self {
            Self::T2_1 if cell.column.starts_with("dx") => 1e-9,
            Self::T2_1 | Self::T3_1 | Self::T3_3 => 1e-6,
            Self::T2_2 | Self::T2_3 => 1e-5,
            Self::T3_2 if published >= 10.0 => 1e-4 * published,
            Self::T3_2 => 1e-6,
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownTable(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Reference tolerance widened to one unit in the last printed place;
    /// known misprints are reported but do not fail.
    #[default]
    Lenient,
    /// Reference tolerances only; misprints fail.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Pass,
    Fail,
    Erratum,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::Erratum => "ERRATUM",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellComparison {
    pub row: String,
    pub column: String,
    pub published: &'static str,
    pub computed: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub status: CellStatus,
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub table: TableId,
    pub mode: Mode,
    pub cells: Vec<CellComparison>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl TableReport {
    pub fn count(&self, status: CellStatus) -> usize {
        self.cells.iter().filter(|c| c.status == status).count()
    }

    pub fn passed(&self) -> bool {
        self.count(CellStatus::Fail) == 0 && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellComparison> {
        self.cells.iter().filter(|c| c.status == CellStatus::Fail)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mode = match self.mode {
            Mode::Lenient => "lenient",
            Mode::Strict => "strict",
        };
        let _ = writeln!(
            out,
            "table {} [{}, spectral norm, {mode}]",
            self.table,
            self.table.fixture_name()
        );
        let _ = writeln!(
            out,
            "{:<16} {:<20} {:>18} {:>22} {:>10} {:>10} {:>10}  status",
            "row", "column", "published", "computed", "abs_err", "rel_err", "tol"
        );
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{:<16} {:<20} {:>18} {:>22.12} {:>10.2e} {:>10.2e} {:>10.2e}  {}",
                c.row,
                c.column,
                c.published,
                c.computed,
                c.abs_err,
                c.rel_err,
                c.tolerance,
                c.status.as_str()
            );
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "check {:<48} {}",
                c.label,
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
        let mut seen = Vec::new();
        for note in self
            .cells
            .iter()
            .filter_map(|c| c.note)
            .chain(self.notes.iter().map(String::as_str))
        {
            if !seen.contains(&note) {
                seen.push(note);
                let _ = writeln!(out, "note: {note}");
            }
        }
        let _ = writeln!(
            out,
            "table {}: {} cells, {} pass, {} fail, {} erratum; {}/{} checks -> {}",
            self.table,
            self.cells.len(),
            self.count(CellStatus::Pass),
            self.count(CellStatus::Fail),
            self.count(CellStatus::Erratum),
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

fn compare(table: TableId, mode: Mode, row: &str, cell: &Cell, computed: f64) -> CellComparison {
    let published = cell.value();
    let abs_err = (computed - published).abs();
    let rel_err = if published != 0.0 {
        abs_err / published.abs()
    } else {
        abs_err
    };
    let policy = table.policy_tolerance(cell);
    let tolerance = match mode {
        Mode::Strict => policy,
        Mode::Lenient => policy.max(cell.print_unit()),
    };
    // NaN errors (absent bounds) fail.
    let within = abs_err <= tolerance;
    let status = match (within, cell.erratum, mode) {
        (true, _, _) => CellStatus::Pass,
        (false, Some(_), Mode::Lenient) => CellStatus::Erratum,
        (false, _, _) => CellStatus::Fail,
    };
    CellComparison {
        row: row.to_string(),
        column: cell.column.clone(),
        published: cell.published,
        computed,
        abs_err,
        rel_err,
        tolerance,
        status,
        note: cell.erratum,
    }
}

const NORM: NormKind = NormKind::Spectral;

fn vector_values(name: &str, v: &CVector, out: &mut Vec<(String, f64)>) {
    for (k, z) in v.iter().enumerate() {
        out.push((format!("{name}[{k}]"), z.re));
    }
}

fn bound_value(b: &Bound) -> f64 {
    b.value().unwrap_or(f64::NAN)
}

fn zeros_like(y: &CVector) -> CVector {
    CVector::zeros(y.dim())
}

fn zero_op(a: &CMatrix) -> CMatrix {
    CMatrix::zeros(a.rows(), a.cols())
}

type RowValues = (Vec<(String, f64)>, Vec<Check>);

fn row_values(table: TableId, f: &Fixture, r: &FixtureRow) -> Result<RowValues> {
    let mut values = Vec::new();
    let mut checks = Vec::new();
    let dy = r.delta_y.clone().unwrap_or_else(|| zeros_like(&f.y));
    let da = r.delta_a.clone().unwrap_or_else(|| zero_op(&f.a));
    let pair = || -> Result<[&CMatrix; 2]> {
        let b = f
            .b
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("{} has no second matrix", f.name)))?;
        Ok([&f.a, b])
    };
    match table {
        TableId::T2_1 => {
            for (k, m) in pair()?.into_iter().enumerate() {
                let rep = perturb_rhs(m, r.z, &f.y, &dy, NORM)?;
                vector_values(&format!("dx{}", k + 1), &rep.delta_x, &mut values);
                values.push((format!("ratio{}", k + 1), rep.rel_observed));
            }
        }
        TableId::T2_2 => {
            for (k, m) in pair()?.into_iter().enumerate() {
                let rep = perturb_operator(m, r.z, &f.y, &da, NORM)?;
                vector_values(&format!("dx{}", k + 1), &rep.delta_x, &mut values);
                values.push((format!("ratio{}", k + 1), rep.ratio_x));
            }
        }
        TableId::T2_3 => {
            for (k, m) in pair()?.into_iter().enumerate() {
                let rep = perturb_joint(m, r.z, &f.y, &da, &dy, NORM)?;
                vector_values(&format!("dx{}", k + 1), &rep.delta_x, &mut values);
            }
        }
        TableId::T3_1 => {
            let rep = perturb_rhs(&f.a, r.z, &f.y, &dy, NORM)?;
            values.push(("ratio".into(), rep.rel_observed));
            values.push(("kappa".into(), rep.kappa));
            values.push(("lower".into(), rep.lower));
            values.push(("upper".into(), rep.upper));
            checks.push(Check {
                label: format!("{}: lower <= ratio <= upper", r.label),
                passed: rep.holds,
            });
        }
        TableId::T3_2 => {
            let rep = perturb_operator(&f.a, r.z, &f.y, &da, NORM)?;
            values.push(("ratio_xpdx".into(), rep.ratio_xpdx));
            values.push((
                "bound_pseudo_xpdx".into(),
                bound_value(&rep.bound_pseudo_xpdx),
            ));
            values.push(("bound_cond_xpdx".into(), bound_value(&rep.bound_cond_xpdx)));
            values.push(("ratio_x".into(), rep.ratio_x));
            values.push(("bound_pseudo_x".into(), bound_value(&rep.bound_pseudo_x)));
            values.push(("bound_cond_x".into(), bound_value(&rep.bound_cond_x)));
            checks.push(Check {
                label: format!("{}: bounds dominate ratios", r.label),
                passed: rep.holds,
            });
        }
        TableId::T3_3 => {
            let rep = perturb_joint(&f.a, r.z, &f.y, &da, &dy, NORM)?;
            values.push(("ratio".into(), rep.rel_observed));
            values.push(("bound".into(), bound_value(&rep.bound)));
            checks.push(Check {
                label: format!("{}: bound dominates ratio", r.label),
                passed: rep.holds,
            });
        }
    }
    Ok((values, checks))
}

/// Assignment of computed to published values minimising the summed squared
/// distance. Brute force; spectra here are tiny.
pub fn optimal_pairing(computed: &[Complex64], published: &[Complex64]) -> Result<Vec<usize>> {
    if computed.len() != published.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} computed vs {} published eigenvalues",
            computed.len(),
            published.len()
        )));
    }
    if computed.len() > 9 {
        return Err(Error::InvalidArgument(
            "pairing limited to 9 eigenvalues".into(),
        ));
    }
    fn search(
        k: usize,
        perm: &mut Vec<usize>,
        cost: f64,
        c: &[Complex64],
        p: &[Complex64],
        best: &mut (f64, Vec<usize>),
    ) {
        if cost >= best.0 {
            return;
        }
        if k == perm.len() {
            *best = (cost, perm.clone());
            return;
        }
        for j in k..perm.len() {
            perm.swap(k, j);
            let step = (c[perm[k]] - p[k]).norm_sqr();
            search(k + 1, perm, cost + step, c, p, best);
            perm.swap(k, j);
        }
    }
    let mut perm: Vec<usize> = (0..computed.len()).collect();
    let mut best = (f64::INFINITY, perm.clone());
    search(0, &mut perm, 0.0, computed, published, &mut best);
    Ok(best.1)
}

fn spectrum_cells(
    table: TableId,
    mode: Mode,
    s: &PublishedSpectrum,
) -> Result<(Vec<CellComparison>, Vec<String>)> {
    let cells = s.cells();
    let published: Vec<Complex64> = cells
        .iter()
        .map(|(re, im)| Complex64::new(re.value(), im.value()))
        .collect();
    let computed = eigenvalues(&s.matrix)?.require_converged()?;
    let perm = optimal_pairing(&computed, &published)?;
    let row = format!("sigma({})", s.label);
    let mut out = Vec::new();
    let mut notes: Vec<String> = s.note.iter().map(|n| n.to_string()).collect();
    for (k, (re, im)) in cells.iter().enumerate() {
        let c = computed[perm[k]];
        out.push(compare(table, mode, &row, re, c.re));
        out.push(compare(table, mode, &row, im, c.im));
        let dist = (c - published[k]).norm();
        if dist > 1e-6 {
            notes.push(format!(
                "eigenvalue {} of {} differs from the printed value by {dist:.3e}",
                k, s.label
            ));
        }
    }
    Ok((out, notes))
}

pub fn reproduce_table(table: TableId, mode: Mode) -> Result<TableReport> {
    let f = load_fixture(table.fixture_name())?;
    let mut cells = Vec::new();
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for r in &f.rows {
        let (values, row_checks) = row_values(table, &f, r)?;
        for cell in &r.cells {
            let computed = values
                .iter()
                .find(|(name, _)| *name == cell.column)
                .map(|&(_, v)| v)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("no computed value for column {}", cell.column))
                })?;
            cells.push(compare(table, mode, &r.label, cell, computed));
        }
        checks.extend(row_checks);
    }
    for s in &f.spectra {
        let (c, n) = spectrum_cells(table, mode, s)?;
        cells.extend(c);
        notes.extend(n);
    }
    Ok(TableReport {
        table,
        mode,
        cells,
        checks,
        notes,
    })
}

pub fn reproduce_all(mode: Mode) -> Result<Vec<TableReport>> {
    TableId::ALL
        .into_iter()
        .map(|t| reproduce_table(t, mode))
        .collect()
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Writes every fixture's matrices and vectors as matrix JSON files under
/// `dir/<fixture>/`. Vectors are stored as single columns.
pub fn dump_fixtures(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for f in crate::corpus::all_fixtures() {
        let sub = dir.join(f.name);
        std::fs::create_dir_all(&sub)?;
        let mut put = |file: String, m: &CMatrix| -> Result<()> {
            let path = sub.join(file);
            write_json(&path, &matrix_to_json(m))?;
            written.push(path);
            Ok(())
        };
        put("A.json".into(), &f.a)?;
        if let Some(b) = &f.b {
            put("B.json".into(), b)?;
        }
        put("y.json".into(), &vector_to_matrix(&f.y))?;
        for (k, r) in f.rows.iter().enumerate() {
            if let Some(dy) = &r.delta_y {
                put(format!("row{k}_dy.json"), &vector_to_matrix(dy))?;
            }
            if let Some(da) = &r.delta_a {
                put(format!("row{k}_dA.json"), da)?;
            }
        }
    }
    Ok(written)
}
