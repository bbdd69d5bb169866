//! Randomized invariant checks for the measure pipeline.

use proptest::prelude::*;

use permaudit::{
    attribute_risk, extract_permutation, pair_infoloss, power_mean, rank_attribute,
    relative_displacement, reverse_map, risk_dominance, sample_bounded_permutation, spearman,
    trace_ratio, AttributeColumn, Dataset, DisplacementVector, ExponentGrid, PairedDatasets,
    Permutation, RankDirection, Relation, RelativeDisplacement,
};

const EPS: f64 = 1e-8;

/// A uniform-ish random permutation built by sorting random keys.
fn permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<u64>(), n).prop_map(|keys| {
            let mut image: Vec<usize> = (0..keys.len()).collect();
            image.sort_by_key(|&i| (keys[i], i));
            Permutation::from_image(image).expect("index sort is a bijection")
        })
    })
}

/// `n` strictly distinct finite values in random order.
fn distinct_values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    (
        prop::collection::vec(0.001..50.0f64, n),
        prop::collection::vec(any::<u64>(), n),
        -1000.0..1000.0f64,
    )
        .prop_map(|(gaps, keys, start)| {
            let mut acc = start;
            let increasing: Vec<f64> = gaps
                .iter()
                .map(|g| {
                    acc += g;
                    acc
                })
                .collect();
            let mut order: Vec<usize> = (0..increasing.len()).collect();
            order.sort_by_key(|&i| (keys[i], i));
            order.into_iter().map(|i| increasing[i]).collect()
        })
}

fn positive_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-8..100.0f64, 1..20)
}

fn risk_exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(f64::NEG_INFINITY), -20.0..=1.0f64]
}

fn column(name: &str, values: Vec<f64>) -> AttributeColumn {
    AttributeColumn::numeric(name, values).expect("finite values")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    // Power-mean monotonicity in the exponent.
    #[test]
    fn power_mean_is_monotone_in_exponent(
        values in positive_values(),
        a in risk_exponent(),
        b in risk_exponent(),
    ) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let m_lo = power_mean(&values, lo).unwrap();
        let m_hi = power_mean(&values, hi).unwrap();
        let slack = 1e-12 * m_hi.abs() + 1e-300;
        prop_assert!(m_lo <= m_hi + slack, "mean({lo}) = {m_lo} > mean({hi}) = {m_hi}");
    }

    // Min/max bounds, with the limit exponents attained exactly.
    #[test]
    fn power_mean_respects_bounds(values in positive_values(), a in risk_exponent()) {
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let m = power_mean(&values, a).unwrap();
        prop_assert!(m >= min * (1.0 - 1e-12));
        prop_assert!(m <= max * (1.0 + 1e-12));
        prop_assert_eq!(power_mean(&values, f64::NEG_INFINITY).unwrap(), min);
        prop_assert_eq!(power_mean(&values, f64::INFINITY).unwrap(), max);
    }

    // Homogeneity of degree 1: scaling the inputs scales the mean.
    #[test]
    fn power_mean_is_homogeneous(
        values in positive_values(),
        a in risk_exponent(),
        c in 1e-3..1e3f64,
    ) {
        let direct = power_mean(&values.iter().map(|v| c * v).collect::<Vec<_>>(), a).unwrap();
        let scaled = c * power_mean(&values, a).unwrap();
        prop_assert!((direct - scaled).abs() <= 1e-12 * scaled.abs() + 1e-300);
    }

    // Information-loss homogeneity via integer scaling of the deltas.
    #[test]
    fn pair_infoloss_is_homogeneous(
        delta in prop::collection::vec(-10i64..=10, 2..16),
        theta in prop_oneof![Just(f64::INFINITY), 1.0..=16.0f64],
        c in 2i64..=5,
    ) {
        let base = RelativeDisplacement::new("a", "b", delta.clone()).unwrap();
        let scaled_delta: Vec<i64> = delta.iter().map(|d| c * d).collect();
        let scaled = RelativeDisplacement::new("a", "b", scaled_delta).unwrap();
        let lhs = pair_infoloss(&scaled, theta, false).unwrap();
        let rhs = c as f64 * pair_infoloss(&base, theta, false).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs() + 1e-300);
    }

    // Sub-block consistency: raising any single entry strictly raises the
    // mean at every finite exponent. The value domain keeps the change
    // representable at the strongest aversion tested.
    #[test]
    fn power_mean_is_strictly_increasing_per_entry(
        values in prop::collection::vec(0.5..12.0f64, 2..12),
        a in prop::sample::select(vec![-8.0, -4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0]),
        pick in any::<prop::sample::Index>(),
    ) {
        let before = power_mean(&values, a).unwrap();
        let mut bumped = values.clone();
        let k = pick.index(bumped.len());
        bumped[k] *= 2.0;
        let after = power_mean(&bumped, a).unwrap();
        prop_assert!(after > before, "exponent {a}: {before} !< {after}");
    }

    // Normalized risk stays in the unit interval.
    #[test]
    fn normalized_risk_is_in_unit_interval(
        perm in permutation(24),
        alpha in risk_exponent(),
    ) {
        let d = DisplacementVector::new("v", perm.rank_displacements());
        let v = attribute_risk(&d, alpha, EPS, true).unwrap();
        prop_assert!((0.0..=1.0).contains(&v), "got {v}");
    }

    // Normalized information loss stays in the unit interval.
    #[test]
    fn normalized_infoloss_is_in_unit_interval(
        pair in (2..=24usize).prop_flat_map(|n| (
            prop::collection::vec(any::<u64>(), n),
            prop::collection::vec(any::<u64>(), n),
        )),
        theta in prop_oneof![Just(f64::INFINITY), 1.0..=16.0f64],
    ) {
        let build = |keys: &[u64]| {
            let mut image: Vec<usize> = (0..keys.len()).collect();
            image.sort_by_key(|&i| (keys[i], i));
            Permutation::from_image(image).unwrap()
        };
        let a = DisplacementVector::new("a", build(&pair.0).rank_displacements());
        let b = DisplacementVector::new("b", build(&pair.1).rank_displacements());
        let rel = relative_displacement(&a, &b).unwrap();
        let v = pair_infoloss(&rel, theta, true).unwrap();
        prop_assert!((0.0..=1.0).contains(&v), "got {v}");
    }

    // Displacements of a bijection cancel.
    #[test]
    fn displacements_sum_to_zero(perm in permutation(40)) {
        prop_assert_eq!(perm.rank_displacements().iter().sum::<i64>(), 0);
    }

    // Extracted permutations are bijections, ties or not.
    #[test]
    fn extraction_is_bijective(
        x in prop::collection::vec(-20i64..=20, 2..30),
        y_keys in prop::collection::vec(-20i64..=20, 2..30),
    ) {
        let n = x.len().min(y_keys.len());
        let xs = column("v", x[..n].iter().map(|v| *v as f64).collect());
        let ys = column("v", y_keys[..n].iter().map(|v| *v as f64).collect());
        let rx = rank_attribute(&xs, RankDirection::Descending);
        let ry = rank_attribute(&ys, RankDirection::Descending);
        let perm = extract_permutation(&rx, &ry).unwrap();
        prop_assert!(Permutation::from_image(perm.image().to_vec()).is_ok());
    }

    // Ranking always produces a bijection onto 1..=n.
    #[test]
    fn ranking_is_bijective(values in prop::collection::vec(-50i64..=50, 1..40)) {
        let col = column("v", values.iter().map(|v| *v as f64).collect());
        for direction in [RankDirection::Descending, RankDirection::Ascending] {
            let r = rank_attribute(&col, direction);
            let mut sorted = r.ranks().to_vec();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (1..=values.len()).collect::<Vec<_>>());
        }
    }

    // Inverting twice is the identity transformation.
    #[test]
    fn inverse_is_an_involution(perm in permutation(40)) {
        prop_assert_eq!(perm.inverse().inverse(), perm);
    }

    // Zero displacements count the matrix trace.
    #[test]
    fn zero_displacements_match_the_trace(perm in permutation(40)) {
        let d = DisplacementVector::new("v", perm.rank_displacements());
        prop_assert_eq!(d.zero_count(), perm.to_matrix().trace());
    }

    // T is the fraction of nonzero raw displacements.
    #[test]
    fn trace_ratio_counts_nonzero_displacements(perm in permutation(40)) {
        let d = DisplacementVector::new("v", perm.rank_displacements());
        let moved = d.raw().iter().filter(|r| **r != 0).count();
        prop_assert_eq!(trace_ratio(&perm), moved as f64 / perm.len() as f64);
    }

    // Round trip: applying a known permutation plus rank-preserving noise
    // and reverse-mapping recovers the permutation exactly.
    #[test]
    fn reverse_map_recovers_the_applied_permutation(
        (values, perm, sigma) in (2..=8usize).prop_flat_map(|n| (
            distinct_values(n),
            prop::collection::vec(any::<u64>(), n).prop_map(|keys| {
                let mut image: Vec<usize> = (0..keys.len()).collect();
                image.sort_by_key(|&i| (keys[i], i));
                Permutation::from_image(image).unwrap()
            }),
            0.0..5.0f64,
        )),
        seed in any::<u64>(),
    ) {
        let x = Dataset::new("x", vec![column("v", values)]).unwrap();
        let spec = permaudit::NoiseSpec::gaussian(vec![sigma], seed).unwrap();
        let (y, _) = permaudit::apply_permutations(&x, std::slice::from_ref(&perm), Some(&spec)).unwrap();
        let pair = PairedDatasets::new(x, y).unwrap();
        let dec = reverse_map(&pair, RankDirection::Descending);
        prop_assert_eq!(&dec.permutations()[0], &perm);
    }

    // Z keeps the original marginal: equal multisets per attribute.
    #[test]
    fn reverse_map_preserves_marginals(
        x in prop::collection::vec(-20i64..=20, 2..20),
        y in prop::collection::vec(-20i64..=20, 2..20),
    ) {
        let n = x.len().min(y.len());
        let xs = Dataset::new("x", vec![column("v", x[..n].iter().map(|v| *v as f64).collect())]).unwrap();
        let ys = Dataset::new("y", vec![column("v", y[..n].iter().map(|v| *v as f64).collect())]).unwrap();
        let pair = PairedDatasets::new(xs, ys).unwrap();
        let dec = reverse_map(&pair, RankDirection::Descending);
        let mut original = pair.original().columns()[0].numeric_values().unwrap().to_vec();
        let mut mapped = dec.z().columns()[0].numeric_values().unwrap().to_vec();
        original.sort_by(|a, b| a.partial_cmp(b).unwrap());
        mapped.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assert_eq!(original, mapped);
    }

    // On tie-free data Z re-ranks exactly like the masked column.
    #[test]
    fn reverse_map_agrees_with_masked_ranks(
        (x, y) in (2..=12usize).prop_flat_map(|n| (distinct_values(n), distinct_values(n))),
    ) {
        let xs = Dataset::new("x", vec![column("v", x)]).unwrap();
        let ys = Dataset::new("y", vec![column("v", y)]).unwrap();
        let pair = PairedDatasets::new(xs, ys).unwrap();
        let dec = reverse_map(&pair, RankDirection::Descending);
        let rank_z = rank_attribute(&dec.z().columns()[0], RankDirection::Descending);
        prop_assert_eq!(rank_z.ranks(), dec.masked_rankings()[0].ranks());
    }

    // Direction flip mirrors ranks on tie-free columns.
    #[test]
    fn direction_flip_mirrors_ranks((values,) in (2..=20usize).prop_flat_map(|n| (distinct_values(n),))) {
        let col = column("v", values);
        let n = col.len();
        let desc = rank_attribute(&col, RankDirection::Descending);
        let asc = rank_attribute(&col, RankDirection::Ascending);
        for (d, a) in desc.ranks().iter().zip(asc.ranks()) {
            prop_assert_eq!(d + a, n + 1);
        }
    }

    // Metrics do not depend on the shared ranking direction (tie-free).
    #[test]
    fn metrics_are_direction_blind(
        (x1, x2, y1, y2) in (2..=10usize).prop_flat_map(|n| (
            distinct_values(n),
            distinct_values(n),
            distinct_values(n),
            distinct_values(n),
        )),
    ) {
        let xs = Dataset::new("x", vec![column("a", x1), column("b", x2)]).unwrap();
        let ys = Dataset::new("y", vec![column("a", y1), column("b", y2)]).unwrap();
        let pair = PairedDatasets::new(xs, ys).unwrap();
        let desc = reverse_map(&pair, RankDirection::Descending);
        let asc = reverse_map(&pair, RankDirection::Ascending);
        // Identical displacement vectors imply identical T, D, TD and I.
        for (d, a) in desc.displacements().iter().zip(asc.displacements()) {
            prop_assert_eq!(d.raw(), a.raw());
        }
        for j in 0..2 {
            let rho_desc = spearman(
                &desc.original_rankings()[j],
                &rank_attribute(&desc.z().columns()[j], RankDirection::Descending),
            ).unwrap();
            let rho_asc = spearman(
                &asc.original_rankings()[j],
                &rank_attribute(&asc.z().columns()[j], RankDirection::Ascending),
            ).unwrap();
            prop_assert_eq!(rho_desc, rho_asc);
        }
    }

    // Elementwise domination of the sorted substituted displacements is a
    // sound certificate for grid dominance.
    #[test]
    fn sorted_domination_implies_grid_dominance(
        base in prop::collection::vec(0i64..=10, 2..12),
        bumps in prop::collection::vec(0i64..=5, 2..12),
    ) {
        let n = base.len().min(bumps.len());
        let mut b_sorted = base[..n].to_vec();
        b_sorted.sort_unstable();
        let a_sorted: Vec<i64> = b_sorted.iter().zip(&bumps[..n]).map(|(v, inc)| v + inc).collect();
        let d_a = DisplacementVector::new("a", a_sorted);
        let d_b = DisplacementVector::new("b", b_sorted);
        let verdict = risk_dominance(&d_a, &d_b, &ExponentGrid::default_risk(), EPS, 1e-12).unwrap();
        prop_assert!(
            matches!(verdict.relation, Relation::ADominatesB | Relation::Equivalent),
            "unexpected relation {:?}",
            verdict.relation
        );
    }

    // Information loss is symmetric in the pair and depends only on the
    // multiset of absolute differences.
    #[test]
    fn infoloss_is_symmetric_and_multiset_valued(
        delta in prop::collection::vec(-10i64..=10, 2..16),
        keys in prop::collection::vec(any::<u64>(), 2..16),
        theta in prop_oneof![Just(f64::INFINITY), 1.0..=16.0f64],
    ) {
        let forward = RelativeDisplacement::new("a", "b", delta.clone()).unwrap();
        let negated = RelativeDisplacement::new("a", "b", delta.iter().map(|d| -d).collect()).unwrap();
        let i_fwd = pair_infoloss(&forward, theta, false).unwrap();
        let i_neg = pair_infoloss(&negated, theta, false).unwrap();
        prop_assert_eq!(i_fwd, i_neg);

        let n = delta.len().min(keys.len());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (keys[i], i));
        let shuffled: Vec<i64> = order.iter().map(|&i| delta[i]).collect();
        let permuted = RelativeDisplacement::new("a", "b", shuffled).unwrap();
        let i_all = pair_infoloss(
            &RelativeDisplacement::new("a", "b", delta[..n].to_vec()).unwrap(),
            theta,
            false,
        ).unwrap();
        let i_shuf = pair_infoloss(&permuted, theta, false).unwrap();
        prop_assert!((i_all - i_shuf).abs() <= 1e-12 * i_all.abs() + 1e-300);
    }

    // The bounded sampler honours its displacement bound, and the risk
    // measure can never exceed it.
    #[test]
    fn bounded_sampler_respects_the_bound(
        n in 2..=40usize,
        dmax_frac in 0.0..=1.0f64,
        seed in any::<u64>(),
    ) {
        let dmax = ((n - 1) as f64 * dmax_frac).floor() as usize;
        let perm = sample_bounded_permutation(n, dmax, seed).unwrap();
        let d = DisplacementVector::new("v", perm.rank_displacements());
        let worst = d.raw().iter().map(|r| r.abs()).max().unwrap();
        prop_assert!(worst <= dmax as i64);
        if dmax >= 1 {
            for alpha in [f64::NEG_INFINITY, -4.0, 0.0, 1.0] {
                let v = attribute_risk(&d, alpha, EPS, false).unwrap();
                prop_assert!(v <= dmax as f64 * (1.0 + 1e-12));
            }
        }
    }
}
