use cmapforge::catalog::{
    build_diverging, build_isoluminant, build_isoluminant_with_chroma, build_linear, check_quarter_anchors,
    cyclic_shift, preset, preset_names, preset_sigma, reverse, validate_attributes, DivergingSpec, DivergingStyle,
    DEFAULT_N,
};
use cmapforge::colorspace::{delta_e76, max_circle_chroma, LabColor};
use cmapforge::spline::{ContrastMetric, MapPath};
use cmapforge::{Attribute, ColorMap, Error, RgbColor};
use proptest::prelude::*;

fn lab(map: &ColorMap) -> Vec<LabColor> {
    map.lab_entries().unwrap()
}

/// Successive differences, closing the loop for cyclic maps.
fn steps<T>(map: &ColorMap, f: impl Fn(&LabColor, &LabColor) -> T) -> Vec<T> {
    let c = lab(map);
    let mut out: Vec<T> = c.windows(2).map(|w| f(&w[0], &w[1])).collect();
    if map.has(Attribute::Cyclic) {
        out.push(f(&c[c.len() - 1], &c[0]));
    }
    out
}

/// Step indices where the lightness gradient changes sign.
fn reversals(dl: &[f64], cyclic: bool) -> Vec<usize> {
    let signs: Vec<(usize, f64)> = dl
        .iter()
        .enumerate()
        .filter(|(_, d)| d.abs() > 1e-9)
        .map(|(i, d)| (i, d.signum()))
        .collect();
    let mut out: Vec<usize> = signs.windows(2).filter(|w| w[0].1 != w[1].1).map(|w| w[1].0).collect();
    if cyclic && signs.len() > 1 && signs[0].1 != signs[signs.len() - 1].1 {
        out.push(signs[0].0);
    }
    out
}

/// Steps farther than `3 sigma_eff + 1` from any reversal.
fn outside_windows(len: usize, revs: &[usize], sigma_eff: f64, cyclic: bool) -> Vec<usize> {
    let reach = 3.0 * sigma_eff + 1.0;
    (0..len)
        .filter(|&i| {
            revs.iter().all(|&r| {
                let d = (i as f64 - r as f64).abs();
                let d = if cyclic { d.min(len as f64 - d) } else { d };
                d > reach
            })
        })
        .collect()
}

fn cov(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt() / m
}

fn equalized_steps(map: &ColorMap) -> Vec<f64> {
    let metric = map.provenance.as_ref().unwrap().metric;
    let cyclic = map.has(Attribute::Cyclic);
    let dl: Vec<f64> = steps(map, |a, b| b.l - a.l);
    let contrast: Vec<f64> = match metric {
        ContrastMetric::Lightness => dl.iter().map(|d| d.abs()).collect(),
        ContrastMetric::Cie76 => steps(map, delta_e76),
    };
    let sigma = map.provenance.as_ref().unwrap().sigma * map.len() as f64 / 256.0;
    let revs = if metric == ContrastMetric::Lightness {
        reversals(&dl, cyclic)
    } else {
        Vec::new()
    };
    outside_windows(contrast.len(), &revs, sigma, cyclic)
        .into_iter()
        .map(|i| contrast[i])
        .collect()
}

#[test]
fn every_preset_satisfies_its_attributes() {
    for name in preset_names() {
        let m = preset(name, DEFAULT_N, None).unwrap();
        assert_eq!(m.len(), DEFAULT_N);
        validate_attributes(&m).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(m.entries.iter().all(|c| c.in_unit_cube(0.01)), "{name}");
    }
}

#[test]
fn presets_have_uniform_contrast_outside_reversals() {
    for name in preset_names() {
        let m = preset(name, DEFAULT_N, None).unwrap();
        let s = equalized_steps(&m);
        assert!(s.len() > DEFAULT_N / 4, "{name}: only {} steps left", s.len());
        assert!(cov(&s) < 0.01, "{name}: cov {}", cov(&s));
    }
}

#[test]
fn linear_grey_ramps() {
    let m = preset("linear_grey_10_95", 256, None).unwrap();
    let l = m.lightness().unwrap();
    assert!((l[0] - 10.0).abs() < 0.1 && (l[255] - 95.0).abs() < 0.1);
    for (i, v) in l.iter().enumerate() {
        let affine = 10.0 + 85.0 * i as f64 / 255.0;
        assert!((v - affine).abs() < 0.01 * 85.0, "entry {i}: {v}");
    }
    let full = preset("linear_grey_0_100", 256, None).unwrap();
    let grey = MapPath::linear(vec![LabColor::new(0.0, 0.0, 0.0), LabColor::new(100.0, 0.0, 0.0)]).unwrap();
    let built = build_linear(&grey, 256, (0.0, 100.0)).unwrap();
    assert_eq!(built.entries, full.entries);
    for (i, c) in full.entries.iter().enumerate() {
        assert!(
            (c.r - c.g).abs() < 1e-9 && (c.g - c.b).abs() < 1e-9,
            "entry {i} not grey"
        );
    }
}

#[test]
fn non_monotone_linear_path_is_rejected() {
    let path = MapPath::linear(vec![
        LabColor::new(20.0, 0.0, 0.0),
        LabColor::new(80.0, 0.0, 0.0),
        LabColor::new(40.0, 0.0, 0.0),
    ])
    .unwrap();
    assert!(build_linear(&path, 64, (20.0, 40.0)).is_err());
}

#[test]
fn diverging_bwr_structure() {
    let m = preset("diverging_bwr", 256, None).unwrap();
    let c = lab(&m);
    assert!(c[128].chroma() <= 2.0, "centre chroma {}", c[128].chroma());
    assert!((c[0].chroma() - c[255].chroma()).abs() <= 2.0);
    assert!((c[0].l - c[255].l).abs() <= 2.0);
    let dl: Vec<f64> = c.windows(2).map(|w| w[1].l - w[0].l).collect();
    let mean = dl.iter().map(|d| d.abs()).sum::<f64>() / dl.len() as f64;
    let flips = reversals(&dl, false);
    assert_eq!(flips.len(), 1);
    let f = flips[0];
    // the sign change happens through small steps, not at full step size
    assert!(dl[f].abs() < 0.5 * mean && dl[f - 1].abs() < 0.5 * mean);
    // smoothing leaves a short run of near-flat steps at the centre
    let run = (f.saturating_sub(10)..(f + 10).min(dl.len()))
        .filter(|&i| dl[i].abs() < 0.5 * mean)
        .count();
    assert!(run >= 3, "centre flat run {run}");
}

#[test]
fn naive_rgb_diverging_map_is_flagged() {
    let blue = RgbColor::new(0.0, 0.0, 1.0);
    let red = RgbColor::new(1.0, 0.0, 0.0);
    let n = 65;
    let entries = (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            if t <= 0.5 {
                blue.scale(1.0 - 2.0 * t).add(&RgbColor::WHITE.scale(2.0 * t))
            } else {
                RgbColor::WHITE.scale(2.0 - 2.0 * t).add(&red.scale(2.0 * t - 1.0))
            }
        })
        .collect();
    let mut attrs = std::collections::BTreeSet::new();
    attrs.insert(Attribute::Diverging);
    let m = ColorMap::new("rgb_bwr", entries, attrs);
    let err = validate_attributes(&m).unwrap_err();
    assert!(err.to_string().contains("end chromas"), "{err}");
}

#[test]
fn asymmetric_reversing_ends_are_rejected() {
    let spec = DivergingSpec {
        end_low: LabColor::new(40.0, 10.0, -50.0),
        centre: LabColor::new(90.0, 0.0, 0.0),
        end_high: LabColor::new(55.0, 40.0, 30.0),
        style: DivergingStyle::Reversing,
    };
    assert!(matches!(build_diverging(&spec, 128, 5.0), Err(Error::Constraint(_))));
}

#[test]
fn symmetric_unsmoothed_diverging_is_mirror_symmetric() {
    let spec = DivergingSpec {
        end_low: LabColor::from_lch(50.0, 30.0, 250.0),
        centre: LabColor::new(90.0, 0.0, 0.0),
        end_high: LabColor::from_lch(50.0, 30.0, 40.0),
        style: DivergingStyle::Reversing,
    };
    let m = build_diverging(&spec, 129, 0.0).unwrap();
    let l = m.lightness().unwrap();
    for i in 0..129 {
        assert!(
            (l[i] - l[128 - i]).abs() < 1e-6,
            "entry {i}: {} vs {}",
            l[i],
            l[128 - i]
        );
    }
    assert!(delta_e76(&lab(&m)[64], &spec.centre) < 2.0);
}

#[test]
fn divlinear_is_strictly_monotone() {
    let m = preset("divlinear_bgy", 256, None).unwrap();
    let l = m.lightness().unwrap();
    assert!(l.windows(2).all(|w| w[1] > w[0]));
    assert!(lab(&m)[128].chroma() <= 2.0);
}

#[test]
fn rainbow_profile() {
    let m = preset("rainbow_bgyr", 256, None).unwrap();
    let c = lab(&m);
    let dl: Vec<f64> = c.windows(2).map(|w| w[1].l - w[0].l).collect();
    let revs = reversals(&dl, false);
    assert_eq!(revs.len(), 2, "reversals at {revs:?}");
    let sigma = preset_sigma("rainbow_bgyr").unwrap();
    let kept: Vec<f64> = outside_windows(dl.len(), &revs, sigma, false)
        .into_iter()
        .map(|i| dl[i].abs())
        .collect();
    let mean = kept.iter().sum::<f64>() / kept.len() as f64;
    assert!(kept.iter().all(|d| (d - mean).abs() < 0.05 * mean));

    // blue, green, yellow, red in that order and no cyan
    assert!(c[0].b < -40.0, "starts blue");
    let green = (0..256).min_by(|&i, &j| c[i].a.total_cmp(&c[j].a)).unwrap();
    let yellow = (0..256).max_by(|&i, &j| c[i].b.total_cmp(&c[j].b)).unwrap();
    let red = (yellow..256).max_by(|&i, &j| c[i].a.total_cmp(&c[j].a)).unwrap();
    assert!(green < yellow && yellow < red, "{green} {yellow} {red}");
    assert!(c[green].a < -30.0 && c[yellow].b > 60.0 && c[red].a > 40.0);
    assert!(c.iter().all(|x| !(x.a < -20.0 && x.b < -10.0)), "passes through cyan");
}

#[test]
fn cyclic_presets() {
    for name in ["cyclic_mrybm", "cyclic_mygbm", "cyclic_wrwbw", "cyclic_grey"] {
        let m = preset(name, 256, None).unwrap();
        let c = lab(&m);
        let s = steps(&m, delta_e76);
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        assert!(delta_e76(&c[255], &c[0]) <= 2.0 * mean, "{name}");
        check_quarter_anchors(&m).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    let zigzag = preset("cyclic_mrybm", 256, None).unwrap();
    let dl = steps(&zigzag, |a, b| b.l - a.l);
    assert_eq!(reversals(&dl, true).len(), 4);
    let grey = preset("cyclic_grey", 256, None).unwrap();
    assert!(grey
        .entries
        .iter()
        .all(|c| (c.r - c.g).abs() < 1e-6 && (c.g - c.b).abs() < 1e-6));
    let dl = steps(&grey, |a, b| b.l - a.l);
    assert_eq!(reversals(&dl, true).len(), 2);
}

#[test]
fn isoluminant_maps() {
    let m = preset("iso_l70", 256, None).unwrap();
    let l = m.lightness().unwrap();
    let (lo, hi) = l.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi - lo <= 1.0);
    let s = steps(&m, delta_e76);
    let mean = s.iter().sum::<f64>() / s.len() as f64;
    assert!(s.iter().all(|d| (d - mean).abs() < 0.01 * mean));

    let max = max_circle_chroma(70.0, 1e-6);
    assert!((max - 40.0).abs() < 2.0, "max chroma at L=70 is {max}");
    match build_isoluminant_with_chroma(70.0, max + 1.0, 64) {
        Err(Error::OutOfGamut(msg)) => assert!(msg.contains("maximum feasible chroma"), "{msg}"),
        other => panic!("expected out-of-gamut error, got {other:?}"),
    }
    let auto = build_isoluminant(70.0, 64).unwrap();
    validate_attributes(&auto).unwrap();
}

#[test]
fn shift_and_reverse() {
    let m = preset("cyclic_mygbm", 256, None).unwrap();
    assert_eq!(cyclic_shift(&m, 0.0).unwrap().entries, m.entries);
    let twice = cyclic_shift(&cyclic_shift(&m, 0.25).unwrap(), 0.25).unwrap();
    assert_eq!(twice.entries, cyclic_shift(&m, 0.5).unwrap().entries);
    assert_eq!(cyclic_shift(&m, 0.25).unwrap().attributes, m.attributes);
    let grey = preset("linear_grey_0_100", 256, None).unwrap();
    assert!(matches!(cyclic_shift(&grey, 0.25), Err(Error::InvalidOperation(_))));

    let r = reverse(&grey);
    assert!(r.has(Attribute::Linear));
    assert!(r.lightness().unwrap().windows(2).all(|w| w[1] < w[0]));
    validate_attributes(&r).unwrap();
    let fwd: Vec<f64> = steps(&grey, |a, b| (b.l - a.l).abs());
    let mut back: Vec<f64> = steps(&r, |a, b| (b.l - a.l).abs());
    back.reverse();
    for (a, b) in fwd.iter().zip(&back) {
        assert!((a - b).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reverse_is_an_involution(seed in prop::collection::vec((0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64), 2..40)) {
        let entries: Vec<RgbColor> = seed.iter().map(|&(r, g, b)| RgbColor::new(r, g, b)).collect();
        let m = ColorMap::new("m", entries, []);
        prop_assert_eq!(reverse(&reverse(&m)).entries, m.entries);
    }

    #[test]
    fn shifts_compose(a in 0usize..256, b in 0usize..256) {
        let m = preset("cyclic_grey", 256, None).unwrap();
        let fa = a as f64 / 256.0;
        let fb = b as f64 / 256.0;
        let both = cyclic_shift(&cyclic_shift(&m, fa).unwrap(), fb).unwrap();
        let once = cyclic_shift(&m, fa + fb).unwrap();
        prop_assert_eq!(both.entries, once.entries);
    }
}
