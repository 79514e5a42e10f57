mod common;

use common::*;
use condspec::contour::extract_contours;
use condspec::distances::{distance_to_instability, distance_to_singularity, SearchOptions};
use condspec::io::{emit_field_csv, matrix_to_json, parse_field_csv, parse_matrix};
use condspec::perturbation::{perturb_joint, perturb_operator, perturb_rhs};
use condspec::report::JsonReport;
use condspec::spectra::{check_inclusions, grid_eval, sample, GridSpec, Quantity, ScalarField};
use condspec::{CMatrix, NormKind};
use proptest::prelude::*;
use rand::Rng;

fn round_trip<T: JsonReport + PartialEq + std::fmt::Debug>(r: &T) -> Result<(), TestCaseError> {
    let text = serde_json::to_string(&r.to_json()).unwrap();
    let back = T::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    prop_assert_eq!(&back, r);
    Ok(())
}

fn quantity(k: usize) -> Quantity {
    [
        Quantity::Kappa,
        Quantity::Kappa1,
        Quantity::Cond,
        Quantity::ResolventNorm,
    ][k % 4]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matrix_json_round_trips(seed in any::<u64>(), rows in 1usize..=5, cols in 1usize..=5) {
        let mut r = rng(seed);
        let m = CMatrix::from_fn(rows, cols, |_, _| random_complex(&mut r) * 1e3);
        let back = parse_matrix(&matrix_to_json(&m).to_string()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn field_csv_round_trips(seed in any::<u64>(), n in 1usize..=4, k in 0usize..4, nx in 2usize..9, ny in 2usize..9) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n);
        let lo = r.random_range(-3.0..0.0);
        let grid = GridSpec::new(lo, lo + r.random_range(0.1..4.0), -1.0, 1.5, nx, ny).unwrap();
        let field = grid_eval(&a, &grid, quantity(k), NormKind::Spectral).unwrap();
        let mut out = Vec::new();
        emit_field_csv(&field, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        prop_assert_eq!(text.lines().count(), nx * ny + 1);
        let back = parse_field_csv(&text, quantity(k)).unwrap();
        prop_assert_eq!(back.grid, field.grid);
        for (x, y) in back.values.iter().zip(&field.values) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn reports_round_trip(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n);
        let z = random_complex(&mut r) * 2.0;
        let y = random_vector(&mut r, n);
        let dy = random_vector(&mut r, n).scaled(c(0.01, 0.0));
        let da = random_matrix(&mut r, n).scaled(c(r.random_range(0.001..2.0), 0.0));
        for norm in NormKind::ALL {
            round_trip(&sample(&a, z, norm).unwrap())?;
            round_trip(&perturb_rhs(&a, z, &y, &dy, norm).unwrap())?;
            if let Ok(rep) = perturb_operator(&a, z, &y, &da, norm) {
                round_trip(&rep)?;
            }
            if let Ok(rep) = perturb_joint(&a, z, &y, &da, &dy, norm) {
                round_trip(&rep)?;
            }
            round_trip(&distance_to_singularity(&a, norm).unwrap())?;
        }
        let stable = a.shifted(c(max_real_eig(&a) + 0.5, 0.0));
        round_trip(&distance_to_instability(&stable, NormKind::Spectral, SearchOptions::default()).unwrap())?;
        let grid = GridSpec::centered(c(0.0, 0.0), 2.0, 9, 9).unwrap();
        for cert in check_inclusions(&a, &[0.1, 0.5], &grid, NormKind::Spectral).unwrap() {
            round_trip(&cert)?;
        }
    }

    #[test]
    fn contour_points_lie_on_cell_edges(seed in any::<u64>(), n in 1usize..=4, level in 0.05f64..0.6) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n);
        let grid = GridSpec::centered(c(0.0, 0.0), 2.5, 41, 37).unwrap();
        let field = grid_eval(&a, &grid, Quantity::Kappa1, NormKind::Spectral).unwrap();
        check_edges(&field, level)?;
    }
}

fn check_edges(field: &ScalarField, level: f64) -> Result<(), TestCaseError> {
    let g = &field.grid;
    let set = extract_contours(field, &[level]);
    let slack = 1e-9 * (g.re_max - g.re_min).max(g.im_max - g.im_min);
    let on_line = |v: f64, min: f64, step: f64| {
        let t = (v - min) / step;
        (t - t.round()).abs() * step <= slack
    };
    for line in &set.polylines[0] {
        if line.closed {
            prop_assert_eq!(line.points.first(), line.points.last());
        }
        for &(x, y) in &line.points {
            prop_assert!(x >= g.re_min - slack && x <= g.re_max + slack);
            prop_assert!(y >= g.im_min - slack && y <= g.im_max + slack);
            prop_assert!(
                on_line(x, g.re_min, g.d_re()) || on_line(y, g.im_min, g.d_im()),
                "({x}, {y}) is not on a cell edge"
            );
        }
    }
    Ok(())
}

#[test]
fn csv_encodes_infinity() {
    let a = CMatrix::from_real_diag(&[0.0, 1.0]);
    let grid = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 3, 3).unwrap();
    let field = grid_eval(&a, &grid, Quantity::ResolventNorm, NormKind::Spectral).unwrap();
    let mut out = Vec::new();
    emit_field_csv(&field, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("re,im,value\n"));
    assert!(text.lines().any(|l| l.ends_with(",inf")));
    let kappa1 = grid_eval(&a, &grid, Quantity::Kappa1, NormKind::Spectral).unwrap();
    assert_eq!(kappa1.get(1, 1), 0.0);
}
