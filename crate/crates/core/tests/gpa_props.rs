use std::f64::consts::PI;

use nanowire_core::gpa::*;
use proptest::prelude::*;

const PX: f64 = 0.035;
const PERIOD: f64 = 0.35;

/// Square image with a square window of strained lattice at `lo..hi`.
fn two_region(size: usize, lo: usize, hi: usize, strain: f64) -> LatticeImage {
    let base = LatticeRegion::uniform(PERIOD, 0.0);
    synthesize_lattice(&LatticeSpec {
        rows: size,
        cols: size,
        pixel_size_nm: PX,
        regions: vec![base, base.window(Rect::new(lo, lo, hi - lo, hi - lo), strain)],
        noise_sigma: 0.0,
        seed: 0,
    })
    .unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn values_in(map: &Raster, rect: Rect) -> Vec<f64> {
    (rect.row0..rect.row0 + rect.rows)
        .flat_map(|r| (rect.col0..rect.col0 + rect.cols).map(move |c| (r, c)))
        .map(|(r, c)| map.get(r, c))
        .collect()
}

fn window_strain(map: &StrainMap, lo: usize, hi: usize) -> Vec<f64> {
    let inner = Rect::new(lo, lo, hi - lo, hi - lo).inset(map.border_px).expect("window wider than border");
    values_in(&map.raster, inner)
}

/// Strain measured relative to the surrounding lattice for a window whose
/// period is stretched by `1 + strain`.
fn expected(strain: f64) -> f64 {
    strain / (1.0 + strain)
}

// 256 px image: border is 29 px at the default mask, window 72..184 leaves
// a 54 px trusted core, reference sits between the image edge and window.
const SMALL_REF: Rect = Rect { row0: 29, col0: 29, rows: 14, cols: 198 };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn recovered_strain_is_linear_in_applied(
        strain in prop_oneof![-0.05f64..-0.002, 0.002f64..0.05],
    ) {
        let img = two_region(256, 72, 184, strain);
        let map = strain_map(&img, &ReciprocalPeak::from_period(PERIOD, 0.0).unwrap(), SMALL_REF).unwrap();
        let window = window_strain(&map, 72, 184);
        for v in &window {
            let ratio = v / strain;
            prop_assert!((0.9..=1.1).contains(&ratio), "ratio {ratio}");
        }
        let m = median(window);
        prop_assert!((m - expected(strain)).abs() < 0.02 * strain.abs(), "median {m}");
    }

    #[test]
    fn circular_shift_commutes_with_the_pipeline(dr in 1usize..30, dc in 1usize..30) {
        let img = two_region(256, 72, 184, -0.025);
        let peak = ReciprocalPeak::from_period(PERIOD, 0.0).unwrap();
        let a = strain_map(&img, &peak, SMALL_REF).unwrap();
        let shifted = LatticeImage::new(img.raster().rolled(dr, dc)).unwrap();
        let reference = Rect::new(SMALL_REF.row0 + dr, SMALL_REF.col0 + dc, SMALL_REF.rows, SMALL_REF.cols);
        let b = strain_map(&shifted, &peak, reference).unwrap();
        let border = a.border_px;
        for r in border..256 - border - dr {
            for c in border..256 - border - dc {
                let d = (a.raster.get(r, c) - b.raster.get(r + dr, c + dc)).abs();
                prop_assert!(d < 1e-4, "({r}, {c}): {d:e}");
            }
        }
    }

    #[test]
    fn reference_mean_is_zero(
        strain in -0.05f64..0.05,
        row0 in 0usize..200,
        col0 in 0usize..200,
        rows in 4usize..56,
        cols in 4usize..56,
    ) {
        let img = two_region(256, 72, 184, strain);
        let reference = Rect::new(row0, col0, rows, cols);
        let map = strain_map(&img, &ReciprocalPeak::from_period(PERIOD, 0.0).unwrap(), reference).unwrap();
        prop_assert!(map.raster.mean_over(&reference).abs() < 1e-10);
    }
}

#[test]
fn mask_width_changes_the_step_by_less_than_a_fifth() {
    let (lo, hi) = (150, 300);
    let img = two_region(384, lo, hi, -0.025);
    let base = ReciprocalPeak::from_period(PERIOD, 0.0).unwrap();
    let g = base.magnitude();
    let reference = Rect::new(40, 40, 60, 304);
    let steps: Vec<f64> = [8.0, 6.0, 5.0, 4.0]
        .iter()
        .map(|d| {
            let peak = base.with_mask_sigma(g / d).unwrap();
            let map = strain_map(&img, &peak, reference).unwrap();
            assert!(map.border_px <= 40);
            median(window_strain(&map, lo, hi))
        })
        .collect();
    let (min, max) = steps.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
    assert!((max - min) / max.abs() < 0.2, "steps {steps:?}");
}

#[test]
fn phase_gradient_follows_the_lattice_mismatch() {
    let delta = 0.01;
    let img = synthesize_lattice(&LatticeSpec {
        rows: 256,
        cols: 256,
        pixel_size_nm: PX,
        regions: vec![LatticeRegion { strain: delta, ..LatticeRegion::uniform(PERIOD, 0.0) }],
        noise_sigma: 0.0,
        seed: 0,
    })
    .unwrap();
    let peak = ReciprocalPeak::from_period(PERIOD, 0.0).unwrap();
    let phase = unwrap_phase(&compute_phase_map(&img, &peak).unwrap());
    let b = (3.0 * peak.correlation_length_px(PX)).ceil() as usize;
    let grads: Vec<f64> = (b..256 - b)
        .flat_map(|r| (b..255 - b).map(move |c| (r, c)))
        .map(|(r, c)| (phase.raster.get(r, c + 1) - phase.raster.get(r, c)) / PX)
        .collect();
    let g = peak.magnitude();
    let exact = 2.0 * PI * (g / (1.0 + delta) - g);
    let measured = median(grads);
    assert!((measured / exact - 1.0).abs() < 1e-3, "{measured} vs {exact}");
    assert!((measured.abs() / (2.0 * PI * g * delta) - 1.0).abs() < 0.02);
}

#[test]
fn rotated_lattice_strain_is_recovered() {
    let base = LatticeRegion::uniform(PERIOD, 30.0);
    let img = synthesize_lattice(&LatticeSpec {
        rows: 256,
        cols: 256,
        pixel_size_nm: PX,
        regions: vec![base, base.window(Rect::new(72, 72, 112, 112), 0.03)],
        noise_sigma: 0.0,
        seed: 0,
    })
    .unwrap();
    let map = strain_map(&img, &ReciprocalPeak::from_period(PERIOD, 30.0).unwrap(), SMALL_REF).unwrap();
    let m = median(window_strain(&map, 72, 184));
    assert!((m - 0.03).abs() < 0.003, "window strain {m}");
}

#[test]
fn line_scan_crosses_the_step() {
    let img = two_region(256, 72, 184, -0.025);
    let map = strain_map(&img, &ReciprocalPeak::from_period(PERIOD, 0.0).unwrap(), SMALL_REF).unwrap();
    let profile = line_scan(&map.raster, PixelPoint::new(128.0, 30.0), PixelPoint::new(128.0, 226.0), 3).unwrap();
    let at = |col: f64| {
        let d = (col - 30.0) * PX;
        profile.iter().min_by(|a, b| (a.0 - d).abs().total_cmp(&(b.0 - d).abs())).unwrap().1
    };
    assert!(at(35.0).abs() < 1e-3);
    assert!((at(128.0) - expected(-0.025)).abs() < 0.002);
    assert!(at(221.0).abs() < 1e-3);
    let distances: Vec<f64> = profile.iter().map(|p| p.0).collect();
    assert!(distances.windows(2).all(|w| w[1] > w[0]));
    assert!((distances.last().unwrap() - 196.0 * PX).abs() < 1e-9);
}

#[test]
fn noise_does_not_move_the_step() {
    let base = LatticeRegion::uniform(PERIOD, 0.0);
    let spec = LatticeSpec {
        rows: 256,
        cols: 256,
        pixel_size_nm: PX,
        regions: vec![base, base.window(Rect::new(72, 72, 112, 112), -0.025)],
        noise_sigma: 0.3,
        seed: 17,
    };
    let map = strain_map(&synthesize_lattice(&spec).unwrap(), &ReciprocalPeak::from_period(PERIOD, 0.0).unwrap(), SMALL_REF).unwrap();
    let m = median(window_strain(&map, 72, 184));
    assert!((m - expected(-0.025)).abs() < 0.002, "window strain {m}");
}
