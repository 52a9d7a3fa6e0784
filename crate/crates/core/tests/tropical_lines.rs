use equidissect::dyadic::{val2, Rational};
use equidissect::geometry::Point;
use equidissect::sampling::random_nonzero_rational;
use equidissect::tropical::{sample_line_image, tripod_report};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn random_line_images_lie_on_three_concurrent_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let a = random_nonzero_rational(&mut rng, 50);
        let b = random_nonzero_rational(&mut rng, 50);
        let c = random_nonzero_rational(&mut rng, 50);
        let rows = sample_line_image(&a, &b, &c, 100).unwrap();
        let images: Vec<_> = rows.into_iter().map(|r| r.1).collect();
        let report = tripod_report(&images);
        assert!(report.center.is_some(), "{a} {b} {c}: {report:?}");
        assert!(report.on_legs >= 99, "{a} {b} {c}: {report:?}");
        // the legs are where two of ν(ax), ν(by), ν(cz) tie below the third,
        // so they meet at weights proportional to 2^ν(a), 2^ν(b), 2^ν(c)
        let w = [&a, &b, &c].map(|q| Rational::pow2(val2(q).finite().unwrap()));
        let total: Rational = w.iter().sum();
        let predicted = Point::new(&w[0] / &total, &w[1] / &total);
        assert_eq!(report.center, Some(predicted), "{a} {b} {c}");
    }
}
