use cmapforge::colorspace::{delta_e76, srgb_to_lab, LabColor, RgbColor};
use cmapforge::equalize::{equalize, refine, EqualizeSpec};
use cmapforge::spline::{ContrastMetric, MapPath, SplineOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_path(rng: &mut ChaCha8Rng) -> MapPath {
    let k = rng.gen_range(2..7);
    let order = if k >= 3 && rng.gen_bool(0.5) {
        SplineOrder::Quadratic
    } else {
        SplineOrder::Linear
    };
    let cyclic = k >= 3 && rng.gen_bool(0.3);
    let pts: Vec<LabColor> = (0..k)
        .map(|_| srgb_to_lab(RgbColor::new(rng.gen(), rng.gen(), rng.gen())).unwrap())
        .collect();
    MapPath::new(pts, order, cyclic).unwrap()
}

/// Contrast along the path between successive parameters, integrated finely.
fn arc_steps(path: &MapPath, params: &[f64], metric: ContrastMetric) -> Vec<f64> {
    let mut ps = params.to_vec();
    if path.is_cyclic() {
        ps.push(1.0);
    }
    ps.windows(2)
        .map(|w| {
            let pts: Vec<LabColor> = (0..=200)
                .map(|j| path.evaluate(w[0] + (w[1] - w[0]) * j as f64 / 200.0).unwrap())
                .collect();
            pts.windows(2).map(|p| metric.between(&p[0], &p[1])).sum()
        })
        .collect()
}

fn cov(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt() / m
}

/// Inverts the cumulative contrast curve sampled uniformly at `dense` points.
fn brute_force_params(path: &MapPath, n: usize, metric: ContrastMetric, dense: usize) -> Vec<f64> {
    let ts: Vec<f64> = (0..=dense).map(|i| i as f64 / dense as f64).collect();
    let cs: Vec<LabColor> = ts.iter().map(|&t| path.evaluate(t).unwrap()).collect();
    let mut cum = vec![0.0];
    for w in cs.windows(2) {
        let last = *cum.last().unwrap();
        cum.push(last + metric.between(&w[0], &w[1]));
    }
    let total = *cum.last().unwrap();
    let levels = if path.is_cyclic() { n } else { n - 1 };
    let mut j = 0;
    (0..n)
        .map(|i| {
            let target = total * i as f64 / levels as f64;
            while j + 2 < cum.len() && cum[j + 1] <= target {
                j += 1;
            }
            let u = ((target - cum[j]) / (cum[j + 1] - cum[j])).clamp(0.0, 1.0);
            ts[j] + u * (ts[j + 1] - ts[j])
        })
        .collect()
}

#[test]
fn matches_dense_brute_force_inversion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..12 {
        let path = random_path(&mut rng);
        let n = rng.gen_range(8..200);
        let metric = ContrastMetric::Cie76;
        let eq = equalize(&path, &EqualizeSpec::for_path(&path, n, metric)).unwrap();
        let oracle = brute_force_params(&path, n, metric, 2048 * 100);
        let steps = eq.arc_lengths(metric);
        let mean = steps.iter().sum::<f64>() / steps.len() as f64;
        for (i, (&t, &o)) in eq.params.iter().zip(&oracle).enumerate() {
            let d = delta_e76(&path.evaluate(t).unwrap(), &path.evaluate(o).unwrap());
            assert!(d < 0.01 * mean, "case {case} entry {i}: dE {d}, mean step {mean}");
        }
        let arc = arc_steps(&path, &eq.params, metric);
        assert!(cov(&arc) < 1e-3, "case {case}: cov {}", cov(&arc));
    }
}

#[test]
fn lightness_metric_target() {
    // lightness-monotone two-segment paths
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let l: [f64; 3] = [
            rng.gen_range(5.0..30.0),
            rng.gen_range(35.0..60.0),
            rng.gen_range(65.0..95.0),
        ];
        let pts = l
            .iter()
            .map(|&v| LabColor::new(v, rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)))
            .collect();
        let path = MapPath::new(pts, SplineOrder::Linear, false).unwrap();
        let eq = equalize(&path, &EqualizeSpec::for_path(&path, 256, ContrastMetric::Lightness)).unwrap();
        let dl = eq.arc_lengths(ContrastMetric::Lightness);
        let mean = dl.iter().sum::<f64>() / dl.len() as f64;
        let worst = dl.iter().map(|d| (d - mean).abs()).fold(0.0, f64::max);
        assert!(worst < 0.01 * mean);
    }
}

#[test]
fn idempotent_and_endpoint_preserving() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for case in 0..40 {
        let path = random_path(&mut rng);
        let n = rng.gen_range(2..300);
        let metric = if rng.gen_bool(0.5) {
            ContrastMetric::Cie76
        } else {
            ContrastMetric::Lightness
        };
        let eq = equalize(&path, &EqualizeSpec::for_path(&path, n, metric)).unwrap();
        let again = refine(&path, &eq, metric).unwrap();
        for (a, b) in eq.params.iter().zip(&again.params) {
            assert!((a - b).abs() < 1e-6, "case {case}: drift {}", (a - b).abs());
        }
        assert_eq!(eq.params[0], 0.0);
        if !path.is_cyclic() {
            assert_eq!(eq.params[n - 1], 1.0);
            assert_eq!(eq.samples[0], path.control_points()[0]);
            assert_eq!(eq.samples[n - 1], *path.control_points().last().unwrap());
        }
    }
}

#[test]
fn never_reorders_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for case in 0..1000 {
        let path = random_path(&mut rng);
        let n = rng.gen_range(2..64);
        let metric = if rng.gen_bool(0.5) {
            ContrastMetric::Cie76
        } else {
            ContrastMetric::Lightness
        };
        let eq = equalize(&path, &EqualizeSpec::for_path(&path, n, metric)).unwrap();
        assert!(
            eq.params.windows(2).all(|w| w[1] > w[0]),
            "case {case}: parameters not strictly increasing"
        );
    }
}
