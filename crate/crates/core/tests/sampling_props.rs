use qfid::sampling::{gaussian_pair, sample_bloch_ball, sample_state, Measure, SamplerSpec, Stream};
use qfid::states::{purity, DensityMatrix};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

#[test]
fn gaussian_moments() {
    let mut s = Stream::new(42, 0);
    let draws: Vec<f64> = (0..500_000)
        .flat_map(|_| {
            let (a, b) = gaussian_pair(&mut s);
            [a, b]
        })
        .collect();
    let n = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    assert!(mean.abs() < 0.005, "mean {mean}");
    assert!((var - 1.0).abs() < 0.01, "variance {var}");
}

#[test]
fn streams_are_uncorrelated() {
    let draw = |idx: u64| {
        let mut s = Stream::new(42, idx);
        (0..50_000)
            .flat_map(|_| {
                let (a, b) = gaussian_pair(&mut s);
                [a, b]
            })
            .collect::<Vec<f64>>()
    };
    for (i, j) in [(0, 1), (1, 2), (0, 1000)] {
        let r = correlation(&draw(i), &draw(j));
        assert!(r.abs() < 0.01, "streams {i},{j}: {r}");
    }
    // first draw across consecutive indices
    let first: Vec<f64> = (0..100_001).map(|i| gaussian_pair(&mut Stream::new(7, i)).0).collect();
    let r = correlation(&first[..100_000], &first[1..]);
    assert!(r.abs() < 0.01, "lag-one {r}");
}

#[test]
fn uniforms_stay_open() {
    let mut s = Stream::new(0, 0);
    for _ in 0..100_000 {
        let u = s.next_uniform();
        assert!(u > 0.0 && u < 1.0);
    }
}

#[test]
fn sampling_is_order_independent() {
    let spec = SamplerSpec::new(Measure::HilbertSchmidtMixed, 3, 42).unwrap();
    let forward: Vec<DensityMatrix> = (0..20).map(|i| sample_state(&spec, i).unwrap()).collect();
    for i in (0..20).rev() {
        assert_eq!(sample_state(&spec, i).unwrap(), forward[i as usize]);
    }
    let other = SamplerSpec::new(Measure::HilbertSchmidtMixed, 3, 43).unwrap();
    assert_ne!(sample_state(&other, 0).unwrap(), forward[0]);
}

#[test]
fn hs_mean_state_is_maximally_mixed() {
    let spec = SamplerSpec::new(Measure::HilbertSchmidtMixed, 3, 42).unwrap();
    let n = 10_000;
    let mut sum = DensityMatrix::maximally_mixed(3).matrix().scale_real(0.0);
    for i in 0..n {
        sum = &sum + sample_state(&spec, i).unwrap().matrix();
    }
    let mean = sum.scale_real(1.0 / n as f64);
    let dev = mean.max_abs_diff(DensityMatrix::maximally_mixed(3).matrix());
    assert!(dev < 0.02, "{dev}");
}

#[test]
fn haar_draws_are_pure() {
    for dim in [2, 3, 4, 8] {
        let spec = SamplerSpec::new(Measure::HaarPure, dim, 42).unwrap();
        for i in 0..500 {
            assert!((purity(&sample_state(&spec, i).unwrap()) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn bloch_ball_radius_follows_cube_law() {
    let mut r: Vec<f64> = (0..100_000).map(|i| sample_bloch_ball(42, i).norm()).collect();
    r.sort_by(f64::total_cmp);
    let n = r.len() as f64;
    let ks = r
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let cdf = x.powi(3);
            (cdf - k as f64 / n).abs().max(((k + 1) as f64 / n - cdf).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.01, "KS statistic {ks}");
}

#[derive(Serialize, Deserialize)]
struct ReferenceSet {
    measure: Measure,
    dim: usize,
    seed: u64,
    draws: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Serialize, Deserialize)]
struct ReferenceFile {
    /// First words of `Stream::new(42, i)` for `i = 0, 1`, as hex.
    stream_words: Vec<Vec<String>>,
    sets: Vec<ReferenceSet>,
}

fn reference_now() -> ReferenceFile {
    let stream_words = (0..2)
        .map(|i| {
            let mut s = Stream::new(42, i);
            (0..4).map(|_| format!("{:016x}", s.next_u64())).collect()
        })
        .collect();
    let mut sets = Vec::new();
    for measure in Measure::ALL {
        let dims: &[usize] = if measure == Measure::BlochBallUniform { &[2] } else { &[2, 3, 4] };
        for &dim in dims {
            let spec = SamplerSpec::new(measure, dim, 42).unwrap();
            let draws = (0..5).map(|i| sample_state(&spec, i).unwrap().to_entries()).collect();
            sets.push(ReferenceSet { measure, dim, seed: 42, draws });
        }
    }
    ReferenceFile { stream_words, sets }
}

#[test]
fn matches_reference_draws() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/reference_draws.json");
    let now = reference_now();
    if std::env::var_os("UPDATE_REFERENCE").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, serde_json::to_string_pretty(&now).unwrap() + "\n").unwrap();
        return;
    }
    let text = std::fs::read_to_string(&path).expect("reference file present; set UPDATE_REFERENCE=1 to create it");
    let stored: ReferenceFile = serde_json::from_str(&text).unwrap();
    assert_eq!(stored.stream_words, now.stream_words);
    assert_eq!(stored.sets.len(), now.sets.len());
    for (a, b) in stored.sets.iter().zip(&now.sets) {
        assert_eq!((a.measure, a.dim, a.seed), (b.measure, b.dim, b.seed));
        let flat = |d: &Vec<Vec<Vec<[f64; 2]>>>| d.iter().flatten().flatten().flatten().copied().collect::<Vec<f64>>();
        for (x, y) in flat(&a.draws).iter().zip(flat(&b.draws)) {
            assert!((x - y).abs() <= 1e-15, "{} dim {}: {x} vs {y}", a.measure.name(), a.dim);
        }
    }
}
