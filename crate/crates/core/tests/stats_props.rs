mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use perm_moments::exact::{to_rational, ExactCentered};
use perm_moments::{center, central_moments, pearson_r, Column, Dataset};
use proptest::prelude::*;

fn dataset_strategy(max_n: usize) -> impl Strategy<Value = Dataset> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-1e3..1e3f64, n),
                prop::collection::vec(-1e3..1e3f64, n),
            )
        })
        .prop_filter_map("needs spread in both columns", |(xs, ys)| {
            let d = Dataset::new(xs, ys).ok()?;
            pearson_r(&d).ok()?;
            Some(d)
        })
}

#[test]
fn fifth_moment_matches_exact_rational_sum() {
    let mut rng = common::rng(3);
    for n in [5, 17, 64, 200, 1001] {
        let d = common::normal_dataset(&mut rng, n);
        let c = center(&d, false).unwrap();
        let table = central_moments(&c, 5).unwrap();
        for (column, hat) in [(Column::X, &c.x_hat), (Column::Y, &c.y_hat)] {
            let exact = hat
                .iter()
                .map(|&v| {
                    let q = to_rational(v);
                    &q * &q * &q * &q * &q
                })
                .fold(BigRational::zero(), |a, b| a + b)
                / BigRational::from_integer(BigInt::from(n));
            let want = exact.to_f64().unwrap();
            let got = table.side(column)[5];
            assert!(
                (got - want).abs() <= 1e-13 * want.abs().max(1e-300),
                "n={n} {column}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn centering_identity_on_random_data() {
    let mut rng = common::rng(4);
    for n in [2, 3, 10, 1000] {
        let d = common::normal_dataset(&mut rng, n);
        for standardize in [false, true] {
            let c = center(&d, standardize).unwrap();
            let t = central_moments(&c, 2).unwrap();
            let max = c.x_hat.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(t.chi(1).abs() <= 1e-12 * max);
            assert!(t.nu(1).abs() <= 1e-12 * max);
            if standardize {
                assert!((t.chi(2) - 1.0).abs() < 1e-12);
                assert!((t.nu(2) - 1.0).abs() < 1e-12);
            } else {
                assert!((t.chi(2) - c.sigma_x * c.sigma_x).abs() < 1e-12 * t.chi(2));
            }
        }
    }
}

#[test]
fn exact_power_sums_ignore_row_order() {
    let d = Dataset::new(
        vec![0.1, 2.5, -3.0, 7.25, 1.0, 0.0],
        vec![1.0, -1.0, 0.5, 3.0, 2.0, -6.5],
    )
    .unwrap();
    let shuffled = d.reordered(&[4, 2, 0, 5, 1, 3]).unwrap();
    let a = ExactCentered::new(&d);
    let b = ExactCentered::new(&shuffled);
    for column in [Column::X, Column::Y] {
        assert_eq!(a.power_sums(column, 6), b.power_sums(column, 6));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn correlation_is_affine_equivariant(d in dataset_strategy(30), a in 0.01..100.0f64, b in -1e3..1e3f64) {
        let r = pearson_r(&d).unwrap();
        let up = pearson_r(&d.map_x(a, b).unwrap()).unwrap();
        let down = pearson_r(&d.map_x(-a, b).unwrap()).unwrap();
        prop_assert!((up - r).abs() <= 1e-12, "{up} vs {r}");
        prop_assert!((down + r).abs() <= 1e-12, "{down} vs {}", -r);
    }

    #[test]
    fn correlation_is_symmetric(d in dataset_strategy(30)) {
        prop_assert_eq!(pearson_r(&d).unwrap(), pearson_r(&d.swapped()).unwrap());
    }

    #[test]
    fn correlation_is_bounded(d in dataset_strategy(30)) {
        let r = pearson_r(&d).unwrap();
        prop_assert!((-1.0..=1.0).contains(&r));
    }

    #[test]
    fn central_moments_ignore_row_order(d in dataset_strategy(40), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut order: Vec<usize> = (0..d.len()).collect();
        order.shuffle(&mut common::rng(seed));
        let a = central_moments(&center(&d, true).unwrap(), 6).unwrap();
        let b = central_moments(&center(&d.reordered(&order).unwrap(), true).unwrap(), 6).unwrap();
        for j in 1..=6 {
            prop_assert!((a.chi(j) - b.chi(j)).abs() <= 1e-12 * a.chi(j).abs().max(1.0));
            prop_assert!((a.nu(j) - b.nu(j)).abs() <= 1e-12 * a.nu(j).abs().max(1.0));
        }
    }
}
