//! Embedded worked examples with their published values.
//!
//! Published numbers are kept as the exact decimal strings that were
//! printed, so comparisons can respect each cell's print precision.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::io::parse_complex;
use crate::linalg::{CMatrix, CVector};

pub const FIXTURE_NAMES: [&str; 6] = [
    "ex2_1",
    "ex2_2",
    "ex2_3",
    "ex3_1_rhs",
    "ex3_2_op",
    "ex3_3_joint",
];

/// One published number.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub column: String,
    pub published: &'static str,
    /// Digits after the decimal point in the printed group the cell came from.
    pub decimals: usize,
    /// Set when the printed value is known to be wrong.
    pub erratum: Option<&'static str>,
}

impl Cell {
    fn scalar(column: &str, published: &'static str) -> Self {
        Self {
            column: column.to_string(),
            published,
            decimals: decimals(published),
            erratum: None,
        }
    }

    pub fn value(&self) -> f64 {
        self.published
            .trim()
            .parse()
            .expect("fixture literal is a valid number")
    }

    /// One unit in the last printed place.
    pub fn print_unit(&self) -> f64 {
        10f64.powi(-(self.decimals as i32))
    }
}

fn decimals(s: &str) -> usize {
    let s = s.trim();
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let frac = mantissa.split_once('.').map_or(0, |(_, f)| f.len()) as i64;
    (frac - exp).max(0) as usize
}

/// Splits a printed vector such as `[0.1,-0.02]` into cells `name[0]`, `name[1]`.
/// All entries share the precision of the most precise one.
fn vector_cells(name: &str, printed: &'static str) -> Vec<Cell> {
    let inner = printed.trim().trim_start_matches('[').trim_end_matches(']');
    let parts: Vec<&'static str> = inner.split(',').map(str::trim).collect();
    let prec = parts.iter().map(|p| decimals(p)).max().unwrap_or(0);
    parts
        .into_iter()
        .enumerate()
        .map(|(k, p)| Cell {
            column: format!("{name}[{k}]"),
            published: p,
            decimals: prec,
            erratum: None,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureRow {
    pub label: String,
    pub z: Complex64,
    pub delta_y: Option<CVector>,
    pub delta_a: Option<CMatrix>,
    pub cells: Vec<Cell>,
}

impl FixtureRow {
    pub fn cell(&self, column: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.column == column)
    }
}

/// Published eigenvalues of one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PublishedSpectrum {
    pub label: &'static str,
    pub matrix: CMatrix,
    /// `(re, im)` pairs as printed.
    pub values: Vec<(&'static str, &'static str)>,
    pub note: Option<&'static str>,
}

impl PublishedSpectrum {
    /// Cells `label[k].re` and `label[k].im`; both parts take the finer precision of the pair.
    pub fn cells(&self) -> Vec<(Cell, Cell)> {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &(re, im))| {
                let prec = decimals(re).max(decimals(im));
                let cell = |part: &str, v: &'static str| Cell {
                    column: format!("eig({})[{k}].{part}", self.label),
                    published: v,
                    decimals: prec,
                    erratum: None,
                };
                (cell("re", re), cell("im", im))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub a: CMatrix,
    pub b: Option<CMatrix>,
    pub y: CVector,
    pub rows: Vec<FixtureRow>,
    pub spectra: Vec<PublishedSpectrum>,
}

impl Fixture {
    pub fn z_values(&self) -> Vec<Complex64> {
        self.rows.iter().map(|r| r.z).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.rows.iter().map(|r| r.cells.len()).sum::<usize>()
            + self
                .spectra
                .iter()
                .map(|s| 2 * s.values.len())
                .sum::<usize>()
    }
}

pub fn load_fixture(name: &str) -> Result<Fixture> {
    match name {
        "ex2_1" => Ok(ex2_1()),
        "ex2_2" => Ok(ex2_2()),
        "ex2_3" => Ok(ex2_3()),
        "ex3_1_rhs" => Ok(ex3_1()),
        "ex3_2_op" => Ok(ex3_2()),
        "ex3_3_joint" => Ok(ex3_3()),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

pub fn all_fixtures() -> Vec<Fixture> {
    FIXTURE_NAMES
        .iter()
        .map(|n| load_fixture(n).expect("known fixture"))
        .collect()
}

fn z_of(label: &str) -> Complex64 {
    parse_complex(label).expect("fixture shift literal")
}

fn ex2_1() -> Fixture {
    #[rustfmt::skip]
    let table: [(&str, &str, &str, &str, &str); 8] = [
        ("[0.01,0.01]", "[0.1,0.01]", "0.01", "[-0.9,0.01]", "0.01"),
        ("[0.01,0.02]", "[0.1,0.02]", "0.0101474", "[-1.9,0.02]", "0.0211109"),
        ("[0.02,0.01]", "[0.2,0.01]", "0.0199256", "[-0.8,0.01]", "0.008889"),
        ("[0.02,0.02]", "[0.2,0.02]", "0.02", "[-1.8,0.02]", "0.02"),
        ("[0.03,-0.03]", "[0.3,-0.03]", "0.03", "[3.3,-0.03]", "0.0366659"),
        ("[0.04,-0.04]", "[0.4,-0.04]", "0.04", "[4.4,-0.04]", "0.0488879"),
        ("[0.05,-0.05]", "[0.5,-0.05]", "0.05", "[5.5,-0.05]", "0.0611098"),
        ("[0.06,-0.06]", "[0.6,-0.06]", "0.06", "[6.6,-0.06]", "0.0733318"),
    ];
    let rows = table
        .iter()
        .map(|&(dy, dx1, r1, dx2, r2)| {
            let dy_vals: Vec<f64> = vector_cells("dy", dy).iter().map(Cell::value).collect();
            let mut cells = vector_cells("dx1", dx1);
            cells.push(Cell::scalar("ratio1", r1));
            cells.extend(vector_cells("dx2", dx2));
            cells.push(Cell::scalar("ratio2", r2));
            FixtureRow {
                label: format!("dy={dy}"),
                z: Complex64::new(1.0, 0.0),
                delta_y: Some(CVector::from_real(&dy_vals)),
                delta_a: None,
                cells,
            }
        })
        .collect();
    Fixture {
        name: "ex2_1",
        a: CMatrix::from_real_rows(&[[1.1, 0.0], [0.0, 2.0]]),
        b: Some(CMatrix::from_real_rows(&[[1.1, 10.0], [0.0, 2.0]])),
        y: CVector::filled(2, 1.0),
        rows,
        spectra: Vec::new(),
    }
}

fn ex2_2() -> Fixture {
    #[rustfmt::skip]
    let table: [(f64, &str, &str, &str, &str); 7] = [
        (0.01, "[-0.02020202,0,0]", "0.0090346", "[73.64463,8.18182,0]", "0.0827413"),
        (0.02, "[-0.04081633,0,0]", "0.0182536", "[134.87755,15,0]", "0.1515397"),
        (0.03, "[-0.06185567,0,0]", "0.0276626", "[186.55908,20.76923,0]", "0.2096085"),
        (0.04, "[-0.08333333,0,0]", "0.0372677", "[230.73214,25.71428,0]", "0.2592425"),
        (0.05, "[-0.10526316,0,0]", "0.0470751", "[268.89473,30,0]", "0.302125"),
        (0.06, "[-0.12765957,0,0]", "0.0570910", "[302.170212,33.75,0]", "0.339517"),
        (0.07, "[-0.15053763,0,0]", "0.0673224", "[ 331.41745, 37.05882,0]", "0.3723843"),
    ];
    let rows = table
        .iter()
        .map(|&(e, dx1, r1, dx2, r2)| {
            let mut cells = vector_cells("dx1", dx1);
            cells.push(Cell::scalar("ratio1", r1));
            cells.extend(vector_cells("dx2", dx2));
            cells.push(Cell::scalar("ratio2", r2));
            FixtureRow {
                label: format!("e1=e2={e}"),
                z: Complex64::new(2.0, 0.0),
                delta_y: None,
                delta_a: Some(CMatrix::from_real_diag(&[e, e, 0.0])),
                cells,
            }
        })
        .collect();
    Fixture {
        name: "ex2_2",
        a: CMatrix::from_real_rows(&[[1.0, 0.0, -1.0], [0.0, 2.1, 1.0], [0.0, 0.0, 3.0]]),
        b: Some(CMatrix::from_real_rows(&[
            [1.0, 10.0, 10.0],
            [0.0, 2.1, 10.0],
            [0.0, 0.0, 3.0],
        ])),
        y: CVector::filled(3, 1.0),
        rows,
        spectra: Vec::new(),
    }
}

fn ex2_3() -> Fixture {
    #[rustfmt::skip]
    let table: [(f64, &str, &str); 7] = [
        (0.01, "[0.404,-0.745,-0.818]", "[-40.468,-7.274,-0.818]"),
        (0.02, "[0.74,-1.367,-1.5]", "[-74.040,-13.306,-1.5]"),
        (0.03, "[1.023,-1.893,-2.076]", "[-102.302,-18.380,-2.076]"),
        (0.04, "[1.265,-2.345,-2.571]", "[-126.389,-22.702,-2.571]"),
        (0.05, "[1.475,-2.736,-3]", "[-147.130,-26.421,-3]"),
        (0.06, "[1.657,-3.079,-3.375]", "[-165.149,-29.648,-3.375]"),
        (0.07, "[1.817,-3.382,-3.705]", "[-180.923,-32.471,-3.705]"),
    ];
    let rows = table
        .iter()
        .map(|&(e, dx1, dx2)| {
            let mut cells = vector_cells("dx1", dx1);
            cells.extend(vector_cells("dx2", dx2));
            FixtureRow {
                label: format!("e1=e2={e}"),
                z: Complex64::new(3.0, 0.0),
                delta_y: Some(CVector::filled(3, e)),
                delta_a: Some(CMatrix::from_real_diag(&[0.0, e, e])),
                cells,
            }
        })
        .collect();
    Fixture {
        name: "ex2_3",
        a: CMatrix::from_real_rows(&[[1.0, 0.0, -1.0], [0.0, 2.0, 1.0], [0.0, 0.0, 3.1]]),
        b: Some(CMatrix::from_real_rows(&[
            [1.0, 10.0, 10.0],
            [0.0, 2.0, 10.0],
            [0.0, 0.0, 3.1],
        ])),
        y: CVector::filled(3, 1.0),
        rows,
        spectra: Vec::new(),
    }
}

const DUPLICATED_ROW: &str = "printed value repeats the 1-i row";

fn ex3_1() -> Fixture {
    let n = 10;
    let a = CMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            Complex64::new(1.0, 0.0)
        } else if i == j + 1 {
            Complex64::new(0.25, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut dy = vec![0.0; n];
    dy[0] = 0.1;
    let dy = CVector::from_real(&dy);
    #[rustfmt::skip]
    let table: [(&str, &str, &str, &str, &str); 7] = [
        ("2", "0.01451478", "0.25562528", "0.00808358", "0.12370754"),
        ("2+i", "0.01916041", "0.34480349", "0.01090364", "0.09171245"),
        ("3-i", "0.02157139", "0.22394260", "0.00708168", "0.14120929"),
        ("1-i", "0.02192375", "0.22394260", "0.00708168", "0.14120929"),
        ("2-i", "0.01916041", "0.34480349", "0.01090364", "0.09171245"),
        ("3+3i", "0.02634769", "0.62518073", "0.01976995", "0.05058181"),
        ("4i", "0.03238426", "0.69642891", "0.02202301", "0.04540704"),
    ];
    let rows = table
        .iter()
        .map(|&(z, ratio, kappa, lower, upper)| {
            let mut cells = vec![
                Cell::scalar("ratio", ratio),
                Cell::scalar("kappa", kappa),
                Cell::scalar("lower", lower),
                Cell::scalar("upper", upper),
            ];
            if z == "3-i" {
                for c in &mut cells[1..] {
                    c.erratum = Some(DUPLICATED_ROW);
                }
            }
            FixtureRow {
                label: format!("z={z}"),
                z: z_of(z),
                delta_y: Some(dy.clone()),
                delta_a: None,
                cells,
            }
        })
        .collect();
    Fixture {
        name: "ex3_1_rhs",
        a,
        b: None,
        y: CVector::filled(n, 1.0),
        rows,
        spectra: Vec::new(),
    }
}

fn ex3_2() -> Fixture {
    let a = CMatrix::from_real_rows(&[
        [1.0, -6.0, 7.0, -9.0],
        [1.0, -5.0, 0.0, 0.0],
        [0.0, 1.0, -5.0, 0.0],
        [0.0, 0.0, 1.0, -5.0],
    ]);
    let da = CMatrix::from_real_diag(&[-0.01, -0.01, 0.0, 0.0]);
    #[rustfmt::skip]
    let table: [(&str, [&str; 6]); 7] = [
        ("0", ["1.00250311", "3.20374633", "6.28729589", "400.49840503", "1283.50359817", "2519.32007747"]),
        ("0.001+0.001i", ["1.11144480", "3.54979202", "6.96656727", "6.73531833", "21.57230484", "42.34410702"]),
        ("0.1", ["0.11116547", "0.33536750", "0.65971972", "0.10005389", "0.30265747", "0.59548750"]),
        ("-3.5", ["0.01890969", "0.10268623", "0.19736876", "0.01856115", "0.10081974", "0.19377512"]),
        ("-5+i", ["0.02005952", "0.06879138", "0.13682253", "0.01989405", "0.06762120", "0.13448096"]),
        ("1+i", ["0.00711180", "0.01821627", "0.03689838", "0.00707485", "0.01811715", "0.03670612"]),
        ("10+10i", ["0.00039271", "0.00096510", "0.00324741", "0.00039262", "0.00096463", "0.00324679"]),
    ];
    const COLUMNS: [&str; 6] = [
        "ratio_xpdx",
        "bound_pseudo_xpdx",
        "bound_cond_xpdx",
        "ratio_x",
        "bound_pseudo_x",
        "bound_cond_x",
    ];
    let rows = table
        .iter()
        .map(|&(z, values)| FixtureRow {
            label: format!("z={z}"),
            z: z_of(z),
            delta_y: None,
            delta_a: Some(da.clone()),
            cells: COLUMNS
                .iter()
                .zip(values)
                .map(|(c, v)| Cell::scalar(c, v))
                .collect(),
        })
        .collect();
    let a_pert = a.add(&da).expect("same shape");
    let spectra = vec![
        PublishedSpectrum {
            label: "A",
            matrix: a.clone(),
            values: vec![
                ("0.00964896", "0"),
                ("-3.72221248", "0"),
                ("-5.14371824", "1.17699479"),
                ("-5.14371824", "-1.17699479"),
            ],
            note: None,
        },
        PublishedSpectrum {
            label: "A+dA",
            matrix: a_pert,
            values: vec![
                ("-2.40617352e-5", "0"),
                ("-3.726616", "0"),
                ("-5.14667997", "1.17985088"),
                ("-5.14667997", "-1.17985088"),
            ],
            note: Some("first eigenvalue printed as -2.40617352 x e^{-5}; read as -2.40617352e-5"),
        },
    ];
    Fixture {
        name: "ex3_2_op",
        a,
        b: None,
        y: CVector::filled(4, 1.0),
        rows,
        spectra,
    }
}

fn ex3_3() -> Fixture {
    let n = 6;
    let a = CMatrix::from_fn(n, n, |i, j| {
        Complex64::new((i as f64 - j as f64).abs(), 0.0)
    });
    let da = CMatrix::from_real_diag(&[-0.01, -0.01, 0.0, 0.0, 0.0, 0.0]);
    let dy = CVector::from_real(&[0.01, 0.02, 0.03, 0.04, 0.0, 0.0]);
    #[rustfmt::skip]
    let table: [(&str, &str, &str); 7] = [
        ("0", "0.0268467778225", "0.150444148229"),
        ("0.2", "0.0222940217983", "0.107632701309"),
        ("0.4", "0.0193775211883", "0.0832300065481"),
        ("0.6", "0.0173217152417", "0.0674667943276"),
        ("-0.1", "0.0302644475105", "0.186762288147"),
        ("-0.3", "0.0422038073974", "0.353665883561"),
        ("-0.5", "0.0572957745312", "2.62816178085"),
    ];
    let rows = table
        .iter()
        .map(|&(z, ratio, bound)| FixtureRow {
            label: format!("z={z}"),
            z: z_of(z),
            delta_y: Some(dy.clone()),
            delta_a: Some(da.clone()),
            cells: vec![Cell::scalar("ratio", ratio), Cell::scalar("bound", bound)],
        })
        .collect();
    Fixture {
        name: "ex3_3_joint",
        a,
        b: None,
        y: CVector::from_real(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
        rows,
        spectra: Vec::new(),
    }
}
