use cubesum::Threaded;
use cubesum_core::elliptic::to_weierstrass;
use cubesum_core::search::{SearchBackend, SearchConfig, Serial};
use cubesum_core::Coefficient;

#[test]
fn threaded_matches_serial() {
    for a in [Coefficient::integer(9), Coefficient::integer(-4), Coefficient::ratio(16, 31), Coefficient::integer(400)] {
        let cfg = SearchConfig::new(a, 150);
        let serial = Serial.enumerate(&cfg).unwrap();
        for jobs in [1, 2, 3, 8] {
            assert_eq!(Threaded::new(jobs).enumerate(&cfg).unwrap(), serial, "jobs = {jobs}");
        }
    }
}

#[test]
fn threaded_points_match_serial() {
    let curve = to_weierstrass(&Coefficient::integer(6)).reduced();
    let serial = Serial.rational_points(&curve, 6, 3000).unwrap();
    assert!(!serial.is_empty());
    for jobs in [2, 5] {
        assert_eq!(Threaded::new(jobs).rational_points(&curve, 6, 3000).unwrap(), serial);
    }
}

// about 40 s single-threaded in release
#[test]
#[ignore]
fn second_minus_four_solution_at_height_24000() {
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let res = Threaded::new(jobs)
        .enumerate(&SearchConfig::new(Coefficient::integer(-4), 24_000))
        .unwrap();
    let found: Vec<String> = res.triples().map(|t| t.to_string()).collect();
    assert_eq!(found, ["{12, -11, -7}", "{23807, -22655, -11640}"]);
}
