mod common;

use std::collections::HashMap;

use common::{eight_points, lattice_cloud, real_cloud};
use persistry_core::filtration::{cech_filtration, default_max_value, rips_filtration, Filtration};
use persistry_core::geometry::build_distance_matrix;
use proptest::prelude::*;

fn closure_holds(f: &Filtration) -> bool {
    let position: HashMap<&Vec<usize>, usize> = f
        .simplices()
        .iter()
        .enumerate()
        .map(|(i, s)| (&s.vertices, i))
        .collect();
    f.simplices().iter().enumerate().all(|(i, s)| {
        s.faces().iter().all(|face| {
            position
                .get(face)
                .is_some_and(|&p| p < i && f.simplices()[p].value <= s.value)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rips_is_closed_and_counted(cloud in lattice_cloud(1..=12, 1..=4)) {
        let dm = build_distance_matrix(&cloud);
        let f = rips_filtration(&dm, 2, default_max_value(&dm)).unwrap();
        prop_assert!(closure_holds(&f));
        let n = cloud.len();
        prop_assert_eq!(f.count_dim(0), n);
        prop_assert_eq!(f.count_dim(1), n * (n - 1) / 2);
        prop_assert_eq!(f.count_dim(2), n * n.saturating_sub(1) * n.saturating_sub(2) / 6);
    }

    #[test]
    fn truncated_filtrations_are_closed(cloud in real_cloud(2..=10, 1..=4), frac in 0.05f64..1.0) {
        let dm = build_distance_matrix(&cloud);
        let cut = frac * dm.max_entry().max(1e-9);
        let rips = rips_filtration(&dm, 2, cut).unwrap();
        let cech = cech_filtration(&cloud, 2, cut).unwrap();
        prop_assert!(closure_holds(&rips));
        prop_assert!(closure_holds(&cech));
        prop_assert!(rips.simplices().iter().all(|s| s.value <= cut));
        // A Čech triangle is never cheaper than its Rips value.
        prop_assert!(cech.count_dim(2) <= rips.count_dim(2));
    }

    #[test]
    fn rips_cech_interleaving(cloud in real_cloud(3..=8, 2..=2)) {
        let dm = build_distance_matrix(&cloud);
        // Past the interleaving bound, so no Čech triangle is truncated.
        let top = 2.0 * dm.max_entry();
        let rips = rips_filtration(&dm, 2, top).unwrap();
        let cech = cech_filtration(&cloud, 2, top).unwrap();
        let cech_values: HashMap<&Vec<usize>, f64> =
            cech.simplices().iter().map(|s| (&s.vertices, s.value)).collect();
        for s in rips.simplices().iter().filter(|s| s.dim() == 2) {
            let c = cech_values[&s.vertices];
            prop_assert!(s.value <= c * (1.0 + 1e-12));
            prop_assert!(c <= (2.0 / 3f64.sqrt()) * s.value * (1.0 + 1e-12));
        }
        for s in rips.simplices().iter().filter(|s| s.dim() == 1) {
            prop_assert_eq!(cech_values[&s.vertices], s.value);
        }
    }

    #[test]
    fn construction_is_deterministic(cloud in real_cloud(2..=9, 1..=5)) {
        let dm = build_distance_matrix(&cloud);
        let a = rips_filtration(&dm, 2, default_max_value(&dm)).unwrap();
        let b = rips_filtration(&build_distance_matrix(&cloud), 2, default_max_value(&dm)).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn eight_points_filtration_shape() {
    let dm = build_distance_matrix(&eight_points());
    let f = rips_filtration(&dm, 2, default_max_value(&dm)).unwrap();
    assert_eq!(
        (f.count_dim(0), f.count_dim(1), f.count_dim(2)),
        (8, 28, 56)
    );
    let one = rips_filtration(&dm, 1, default_max_value(&dm)).unwrap();
    assert_eq!(one.count_dim(2), 0);
}
