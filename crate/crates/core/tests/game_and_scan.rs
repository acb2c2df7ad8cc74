mod support;

use nmext_core::cq_lab::game::{game_best_classical, leak_scan, GameTable, LeakCoverage};
use nmext_core::extractors::NmExtParams;
use nmext_core::nmscan::{decode_strategy, nm_distance_scan, structured_distance, ScanMode};
use nmext_core::scalar::ratio;
use nmext_core::source::Source;
use nmext_core::Exact;
use num_traits::{Signed, Zero};

fn uniform(d: usize) -> Vec<Exact> {
    vec![ratio(1, d as u128); d]
}

#[test]
fn best_response_matches_strategy_enumeration() {
    let params = NmExtParams::new(3, 2).unwrap();
    for a in 1..3u32 {
        let table = GameTable::from_g_a(&params, a).unwrap();
        let leaks: Vec<Vec<usize>> = vec![
            vec![0; 9],
            (0..9).map(|x| x % 3).collect(),
            (0..9).map(|x| x / 3).collect(),
            (0..9).map(|x| (x * x + 1) % 3).collect(),
            (0..9).map(|x| usize::from(x == 4)).collect(),
        ];
        for leak in leaks {
            let out = game_best_classical(&table, &leak, 3, &uniform(9)).unwrap();
            let (num, den) = support::game_win_uniform(3, 2, a as u64, &leak, 3);
            assert_eq!(out.win, ratio(num as u128, den as u128), "a={a} leak={leak:?}");
            assert!(out.bound_holds);
        }
    }
}

#[test]
fn leak_scans_find_no_violations() {
    let p3 = NmExtParams::new(3, 2).unwrap();
    for a in 1..3 {
        let r = leak_scan(&GameTable::from_g_a(&p3, a).unwrap(), 100, a as u64).unwrap();
        assert_eq!(r.coverage, LeakCoverage::Exhaustive);
        assert_eq!((r.enumerated, r.violations), (19_683, 0));
    }
    let p5 = NmExtParams::new(5, 2).unwrap();
    for a in 1..5 {
        let r = leak_scan(&GameTable::from_g_a(&p5, a).unwrap(), 1000, a as u64).unwrap();
        assert_eq!(r.coverage, LeakCoverage::Certified);
        // (4/5)² ≤ 2·5·k/25 already for k = 2
        assert_eq!(r.min_certified_classes, 2);
        assert_eq!(r.violations, 0);
        assert!(r.worst_margin > 0.0);
    }
}

#[test]
fn nonuniform_source_bound() {
    let params = NmExtParams::new(5, 2).unwrap();
    let table = GameTable::from_g_a(&params, 2).unwrap();
    let pmf: Vec<Exact> = (1..=25).map(|i| ratio(i, 325)).collect();
    let leak: Vec<usize> = (0..25).map(|x| x % 5).collect();
    let out = game_best_classical(&table, &leak, 5, &pmf).unwrap();
    assert!(out.bound_holds && out.win > ratio(1, 5));
}

/// Direct sum over `(x, y, e)` using the reference extractor.
fn reference_distance(p: u64, src: &Source, strategy: &[Vec<usize>]) -> Exact {
    let d_y = 3usize;
    let mut acc = Exact::zero();
    for (e, fe) in strategy.iter().enumerate() {
        for (y, &y_forged) in fe.iter().enumerate().take(d_y) {
            for z in 0..p {
                for z2 in 0..p {
                    let (mut both, mut marg) = (0u64, 0u64);
                    for x in 0..9u64 {
                        let w = src.weight(x, e as u64);
                        if support::nmext(p, 2, x, y_forged as u64) == z2 {
                            marg += w;
                            if support::nmext(p, 2, x, y as u64) == z {
                                both += w;
                            }
                        }
                    }
                    let den = src.total() as u128 * d_y as u128;
                    acc += (ratio(both as u128, den) - ratio(marg as u128, den * p as u128)).abs();
                }
            }
        }
    }
    acc / ratio(2, 1)
}

#[test]
fn scan_agrees_with_reference_on_source_families() {
    let params = NmExtParams::new(3, 2).unwrap();
    let sources = [
        Source::uniform(9).unwrap(),
        Source::constant(9, 5).unwrap(),
        Source::prefix(9, 5).unwrap(),
        Source::subset(9, &[0, 4, 8]).unwrap(),
    ];
    for src in &sources {
        let r = nm_distance_scan(&params, src, ScanMode::Exhaustive).unwrap();
        assert_eq!(r.rows.len(), 8);
        assert!(r.all_agree);
        for row in &r.rows {
            assert_eq!(row.distance, reference_distance(3, src, &row.strategy));
        }
    }
    let constant = nm_distance_scan(&params, &sources[1], ScanMode::Exhaustive).unwrap();
    assert!(constant.rows.iter().all(|row| row.distance == ratio(2, 3)));
}

#[test]
fn scans_with_side_information_and_determinism() {
    let params = NmExtParams::new(3, 2).unwrap();
    let leaky = Source::uniform(9).unwrap().with_leak(3, |x| x % 3).unwrap();
    let a = nm_distance_scan(&params, &leaky, ScanMode::Exhaustive).unwrap();
    assert_eq!(a.rows.len(), 512);
    assert!(a.all_agree);
    let b = nm_distance_scan(&params, &leaky, ScanMode::Exhaustive).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let d = structured_distance(3, 3, &nmext_core::nmscan::ext_table(&params).unwrap(), &leaky, &decode_strategy(7, 3, 3));
    assert_eq!(d, reference_distance(3, &leaky, &decode_strategy(7, 3, 3)));
    let s1 = nm_distance_scan(&params, &leaky, ScanMode::Sampled { count: 16, seed: 9 }).unwrap();
    let s2 = nm_distance_scan(&params, &leaky, ScanMode::Sampled { count: 16, seed: 9 }).unwrap();
    assert_eq!(serde_json::to_string(&s1).unwrap(), serde_json::to_string(&s2).unwrap());
}

#[test]
fn support_size_and_distance() {
    let params = NmExtParams::new(3, 2).unwrap();
    let small = nm_distance_scan(&params, &Source::prefix(9, 3).unwrap(), ScanMode::Exhaustive).unwrap();
    let full = nm_distance_scan(&params, &Source::uniform(9).unwrap(), ScanMode::Exhaustive).unwrap();
    eprintln!("max distance: support 3 -> {}, support 9 -> {}", small.max, full.max);
    assert!(full.max <= small.max);
}
