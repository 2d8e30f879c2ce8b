//! Property tests for the discretization layer.

use kml::grid::{Field, Geometry, Grid};
use proptest::prelude::*;
use std::sync::Arc;

fn grid_strategy() -> impl Strategy<Value = Arc<Grid>> {
    (
        prop_oneof![Just((1usize, Geometry::Line)), Just((1, Geometry::Radial)), Just((2, Geometry::Radial)), Just((3, Geometry::Radial))],
        2.0f64..30.0,
        16usize..200,
    )
        .prop_map(|((dim, geom), extent, n)| Grid::new(dim, geom, extent, n).unwrap())
}

fn field_on(grid: &Arc<Grid>, values: &[f64]) -> Field {
    let v: Vec<f64> = (0..grid.len()).map(|i| values[i % values.len()]).collect();
    Field::new(Arc::clone(grid), v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integrate_is_linear(
        grid in grid_strategy(),
        vals_f in prop::collection::vec(-10.0f64..10.0, 8..32),
        vals_g in prop::collection::vec(-10.0f64..10.0, 8..32),
        alpha in -5.0f64..5.0,
        beta in -5.0f64..5.0,
    ) {
        let f = field_on(&grid, &vals_f);
        let g = field_on(&grid, &vals_g);
        let combo_vals: Vec<f64> = f
            .values()
            .iter()
            .zip(g.values())
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let combo = Field::new(Arc::clone(&grid), combo_vals).unwrap();
        let lhs = combo.integrate();
        let rhs = alpha * f.integrate() + beta * g.integrate();
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
    }

    #[test]
    fn integrate_is_monotone(
        grid in grid_strategy(),
        vals in prop::collection::vec(-10.0f64..10.0, 8..32),
        bump in prop::collection::vec(0.0f64..5.0, 8..32),
    ) {
        let f = field_on(&grid, &vals);
        let g_vals: Vec<f64> = f
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| v + bump[i % bump.len()])
            .collect();
        let g = Field::new(Arc::clone(&grid), g_vals).unwrap();
        prop_assert!(g.integrate() >= f.integrate() - 1e-12 * f.integrate().abs().max(1.0));
    }

    #[test]
    fn laplacian_is_exactly_adjoint(
        grid in grid_strategy(),
        vals_u in prop::collection::vec(-1.0f64..1.0, 8..32),
        vals_v in prop::collection::vec(-1.0f64..1.0, 8..32),
    ) {
        let u = field_on(&grid, &vals_u);
        let v = field_on(&grid, &vals_v);
        let pairing = u.laplacian().inner(&v).unwrap();
        let form = u.bilinear_grad(&v).unwrap();
        let scale = form.abs().max(1.0);
        prop_assert!((pairing + form).abs() <= 1e-10 * scale, "defect {}", (pairing + form).abs());
    }

    #[test]
    fn quadrature_weights_positive_and_sum_to_volume(grid in grid_strategy()) {
        prop_assert!(grid.node_weights().iter().all(|&w| w > 0.0));
        let vol = match (grid.dim(), grid.geometry()) {
            (_, Geometry::Line) => 2.0 * grid.extent(),
            (1, Geometry::Radial) => 2.0 * grid.extent(),
            (2, Geometry::Radial) => std::f64::consts::PI * grid.extent() * grid.extent(),
            (_, Geometry::Radial) => 4.0 / 3.0 * std::f64::consts::PI * grid.extent().powi(3),
        };
        prop_assert!(((grid.volume() - vol) / vol).abs() < 1e-10);
    }
}
