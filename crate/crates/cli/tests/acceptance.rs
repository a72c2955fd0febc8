//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use pecl_cli::commands::{gradcheck, params};
use pecl_core::augment::{inject, segment_regions, AugmentPolicy, Region};
use pecl_core::dsp::{dft, iir_filter, ButterworthDesign, WindowKind, WindowSpec};
use pecl_core::maps::{
    doppler_time_map, doppler_time_map_traced, fixed_window_stft_map, range_doppler_map, range_time_map,
    AstftConfig, Axis, Domain,
};
use pecl_core::radar_io::{parse_dat, parse_datb, write_dat, write_datb};
use pecl_core::synth::{activity_template, generate, ActivityKind, Scatterer, Scene};
use pecl_core::{EchoMatrix, RadarParams, SpectroMap};
use pecl_nn::config::preset;
use pecl_nn::gradcheck::TOLERANCE;
use pecl_nn::{Init, Pecl, PeclInput, SequenceRule, Tensor4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SPEED_OF_LIGHT: f64 = 299_792_458.0;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- oracles

/// O(N²) DFT, `X[k] = Σ x[n] e^{-j2πkn/N}`.
fn direct_dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(m, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * (k * m % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

/// `w[k] = exp(-α ((k - c) / c)²)` with `c = (L - 1) / 2`.
fn gaussian(len: usize, alpha: f64) -> Vec<f64> {
    let c = (len as f64 - 1.0) / 2.0;
    (0..len)
        .map(|k| if c == 0.0 { 1.0 } else { (-alpha * ((k as f64 - c) / c).powi(2)).exp() })
        .collect()
}

/// `(Σ|X|)² / (Σ|X|² + ε)`.
fn concentration_oracle(mags: &[f64], eps: f64) -> f64 {
    let l1: f64 = mags.iter().sum();
    let l2: f64 = mags.iter().map(|m| m * m).sum();
    l1 * l1 / (l2 + eps)
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Butterworth high-pass by prewarped bilinear transform of each analog
/// pole, coefficients in descending powers of `z`.
fn bilinear_highpass(order: usize, cutoff: f64) -> (Vec<f64>, Vec<f64>) {
    let k = 2.0;
    let wc = k * (PI * cutoff / 2.0).tan();
    let one = Complex64::new(1.0, 0.0);
    let (mut num, mut den) = (vec![one], vec![one]);
    for j in 0..order {
        let theta = PI * (2 * j + 1 + order) as f64 / (2 * order) as f64;
        let q = wc / Complex64::from_polar(1.0, theta);
        num = poly_mul(&num, &[one * k, -one * k]);
        den = poly_mul(&den, &[one * k - q, -(one * k + q)]);
    }
    let a0 = den[0];
    (num.iter().map(|v| (v / a0).re).collect(), den.iter().map(|v| (v / a0).re).collect())
}

/// `H(z) = B(z⁻¹) / A(z⁻¹)` for coefficient vectors in powers of `z⁻¹`.
fn freq_response(b: &[f64], a: &[f64], omega: f64) -> Complex64 {
    let zinv = Complex64::from_polar(1.0, -omega);
    let eval = |c: &[f64]| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &v| acc * zinv + v);
    eval(b) / eval(a)
}

// butter(4, 0.0075, btype="high") from a widely used filter-design library.
const MTI_B: [f64; 5] = [
    0.9696830640821985,
    -3.878732256328794,
    5.818098384493191,
    -3.878732256328794,
    0.9696830640821985,
];
const MTI_A: [f64; 5] = [1.0, -3.938430361819403, 5.817179417349661, -3.8190340013782698, 0.9402852447678414];

fn range_bin(p: &RadarParams, r: f64) -> f64 {
    2.0 * p.bandwidth_hz * r / SPEED_OF_LIGHT
}

fn doppler_hz(p: &RadarParams, v: f64) -> f64 {
    2.0 * v * p.carrier_freq_hz / SPEED_OF_LIGHT
}

// ------------------------------------------------------------- criteria

fn bin_recovery() -> Verdict {
    let p = RadarParams::c_band_nominal();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let duration = 0.256;
    let t = p.chirp_duration_s;
    let mut dtm_cfg = AstftConfig::for_params(&p);
    dtm_cfg.range_bin_lo = 1;
    dtm_cfg.range_bin_hi = 40;
    let mut hits = 0;
    let mut misses = Vec::new();
    for i in 0..50 {
        let r0 = rng.random_range(1.0..10.0);
        let speed = rng.random_range(0.2..3.0);
        let v = if rng.random_bool(0.5) { speed } else { -speed };
        // Unit amplitude, noise std 0.1: 20 dB per-sample SNR.
        let scene = Scene {
            scatterers: vec![Scatterer::constant(r0, v, 1.0)],
            duration_s: duration,
            noise_std: 0.1,
            seed: 100 + i,
        };
        let echo = generate(&scene, &p).map_err(|e| e.to_string())?;
        let n = echo.n_chirps();

        let rtm = range_time_map(&echo, false).map_err(|e| e.to_string())?;
        let rt_ok = (0..rtm.rows).all(|row| (rtm.row_argmax(row) as f64 - range_bin(&p, r0 - v * row as f64 * t)).abs() <= 1.0);

        let fd = doppler_hz(&p, v);
        let dtm = doppler_time_map(&echo, &dtm_cfg).map_err(|e| e.to_string())?;
        let want = dtm.row_axis.nearest(fd);
        // The first and last frames are half zero-padded.
        let dt_ok = (1..dtm.cols - 1).all(|c| (dtm.col_argmax(c) as isize - want).abs() <= 1);

        let rdm = range_doppler_map(&echo).map_err(|e| e.to_string())?;
        let (rr, rc) = rdm.argmax();
        let end = r0 - v * n as f64 * t;
        let (lo, hi) = (range_bin(&p, r0.min(end)), range_bin(&p, r0.max(end)));
        let rd_ok = rr as f64 >= lo - 1.0 && rr as f64 <= hi + 1.0 && (rc as isize - rdm.col_axis.nearest(fd)).abs() <= 1;

        if rt_ok && dt_ok && rd_ok {
            hits += 1;
        } else {
            misses.push(format!("#{i} R={r0:.2} v={v:.2} rt={rt_ok} dt={dt_ok} rd={rd_ok}"));
        }
    }
    let detail = format!("{hits}/50 scenes within ±1 bin in RTM, DTM and RDM");
    if hits >= 48 {
        Ok(detail)
    } else {
        Err(format!("{detail}; misses: {}", misses.join("; ")))
    }
}

fn mti_audit() -> Verdict {
    let design = ButterworthDesign::highpass(4, 0.0075).map_err(|e| e.to_string())?;
    let c = design.coeffs();
    let (ob, oa) = bilinear_highpass(4, 0.0075);
    for i in 0..5 {
        ensure((c.b[i] - ob[i]).abs() < 1e-8 && (c.a[i] - oa[i]).abs() < 1e-8, || format!("coefficient {i} differs from the bilinear oracle"))?;
        ensure((c.b[i] - MTI_B[i]).abs() < 1e-8 && (c.a[i] - MTI_A[i]).abs() < 1e-8, || format!("coefficient {i} differs from the reference design"))?;
    }
    let dc = design.response(Complex64::new(1.0, 0.0)).norm();
    ensure(dc <= 1e-10, || format!("|H(DC)| = {dc:.3e}"))?;
    let hc = freq_response(&c.b, &c.a, PI * 0.0075).norm();
    ensure((hc * 2f64.sqrt() - 1.0).abs() < 0.01, || format!("|H(cutoff)| = {hc:.6}"))?;
    let max_pole = c.poles().iter().map(|z| z.norm()).fold(0.0, f64::max);
    ensure(max_pole < 1.0, || format!("pole modulus {max_pole}"))?;

    let p = RadarParams::c_band_nominal();
    let scene = Scene {
        scatterers: vec![Scatterer::stationary(3.0, 1.0)],
        duration_s: 1.024,
        noise_std: 0.0,
        seed: 0,
    };
    let echo = generate(&scene, &p).map_err(|e| e.to_string())?;
    let energy = |m: &SpectroMap| -> f64 {
        // Steady state: the causal filter's start-up transient is over by
        // the second half of the recording.
        (m.rows / 2..m.rows).flat_map(|r| m.row(r).iter()).map(|db| 10f64.powf(db / 10.0)).sum()
    };
    let off = energy(&range_time_map(&echo, false).map_err(|e| e.to_string())?);
    let on = energy(&range_time_map(&echo, true).map_err(|e| e.to_string())?);
    let drop = 10.0 * (off / on).log10();
    ensure(drop >= 40.0, || format!("stationary RTM energy drop {drop:.1} dB"))?;
    Ok(format!(
        "|H(DC)|={dc:.1e}, |H(fc)|·√2={:.5}, max |pole|={max_pole:.6}, stationary drop {drop:.1} dB",
        hc * 2f64.sqrt()
    ))
}

fn gradient_suite() -> Verdict {
    let start = Instant::now();
    let reports = gradcheck::check("all").map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let names: Vec<&str> = reports.iter().map(|r| r.case.as_str()).collect();
    for required in [
        "conv", "depthwise", "bn_eval", "bn_train", "act_swish", "act_relu", "act_sigmoid", "cbam_channel",
        "cbam_spatial", "mbconv", "lstm", "rd_head", "fusion", "cross_entropy",
    ] {
        ensure(names.contains(&required), || format!("case {required} missing"))?;
    }
    let worst = reports.iter().max_by(|a, b| a.max_rel_error.total_cmp(&b.max_rel_error)).unwrap();
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !(r.max_rel_error < TOLERANCE))
        .map(|r| format!("{} {:.2e}", r.case, r.max_rel_error))
        .collect();
    ensure(failed.is_empty(), || format!("failed: {}", failed.join(", ")))?;
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} cases, worst {} at {:.2e}, {:.1}s",
        reports.len(),
        worst.case,
        worst.max_rel_error,
        elapsed.as_secs_f64()
    ))
}

fn shape_contract() -> Verdict {
    let b = 2;
    let published: Vec<(&str, Vec<usize>)> = vec![
        ("stem", vec![b, 32, 112, 112]),
        ("stage1", vec![b, 16, 112, 112]),
        ("stage2", vec![b, 24, 56, 56]),
        ("stage3", vec![b, 40, 28, 28]),
        ("stage4", vec![b, 80, 14, 14]),
        ("stage5", vec![b, 112, 14, 14]),
        ("stage6", vec![b, 192, 7, 7]),
        ("stage7", vec![b, 320, 7, 7]),
        ("head_conv", vec![b, 1280, 7, 7]),
        ("lstm", vec![b, 128]),
        ("rd_head", vec![b, 128]),
        ("concat", vec![b, 384]),
        ("logits", vec![b, 6]),
    ];
    let cfg = preset("b0").map_err(|e| e.to_string())?;
    let mut model = Pecl::new(&cfg, 1).map_err(|e| e.to_string())?;
    let shape = [b, 1, 224, 224];
    let mut init = Init::new(5);
    let mut plane = || Tensor4::from_vec(shape, init.normal(b * 224 * 224)).unwrap();
    let x = PeclInput {
        rt: plane(),
        dt: plane(),
        rd: plane(),
    };
    let (logits, trace) = model.forward_traced(&x).map_err(|e| e.to_string())?;
    ensure(trace.len() == published.len(), || format!("{} traced shapes, {} published", trace.len(), published.len()))?;
    for ((name, got), (want_name, want)) in trace.iter().zip(&published) {
        ensure(name == want_name && got == want, || format!("{name} {got:?} vs {want_name} {want:?}"))?;
    }
    ensure(logits.data.iter().all(|v| v.is_finite()), || "non-finite logits".into())?;
    Ok(format!("{} shapes match, stem {:?} .. logits {:?}", trace.len(), published[0].1, logits.shape()))
}

fn parameter_audit() -> Verdict {
    let a = params::audit("b0", &[SequenceRule::HxC, SequenceRule::COnly]).map_err(|e| e.to_string())?;
    println!("{}", params::render(&a).trim_end().lines().map(|l| format!("      {l}")).collect::<Vec<_>>().join("\n"));
    let summary: Vec<String> = a
        .rules
        .iter()
        .map(|r| {
            format!(
                "{}: {:.2}M params ({:+.1}%), {:.2}M MACs ({:+.1}%)",
                r.report.rule,
                r.report.total.trainable as f64 / 1e6,
                100.0 * r.params_delta,
                r.report.total.macs as f64 / 1e6,
                100.0 * r.macs_delta
            )
        })
        .collect();
    let detail = format!(
        "baseline {} ({:+.2}%); {}",
        a.baseline_trainable,
        100.0 * a.baseline_delta,
        summary.join("; ")
    );
    if a.passed() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn augmentation_statistics() -> Verdict {
    let (rows, cols) = (400, 400);
    // Mostly quiet background at -30 dB below a 0 dB ridge, with a MID band.
    let values: Vec<f64> = (0..rows * cols)
        .map(|i| match (i / cols, i % cols) {
            (_, c) if c < 8 => 0.0,
            (_, c) if c < 16 => -3.0,
            _ => -30.0,
        })
        .collect();
    let map = SpectroMap::new(
        Domain::DopplerTime,
        rows,
        cols,
        values,
        Axis::new("doppler", "Hz", 0.0, 1.0),
        Axis::new("time", "s", 0.0, 1.0),
        RadarParams::c_band_nominal(),
    )
    .map_err(|e| e.to_string())?;
    let policy = AugmentPolicy {
        seed: 3,
        ..AugmentPolicy::default()
    };
    let regions = segment_regions(&map, &policy).map_err(|e| e.to_string())?;
    let out = inject(&map, &policy).map_err(|e| e.to_string())?;
    let mut low = Vec::new();
    for ((r, a), b) in regions.iter().zip(&map.values).zip(&out.values) {
        match r {
            Region::High => ensure(a.to_bits() == b.to_bits(), || "HIGH pixel changed".into())?,
            Region::Low => low.push(b - a),
            Region::Mid => {}
        }
    }
    ensure(low.len() >= 100_000, || format!("only {} LOW pixels", low.len()))?;
    let n = low.len() as f64;
    let mean = low.iter().sum::<f64>() / n;
    let var = low.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    ensure(mean.abs() <= 0.02, || format!("LOW mean {mean:.4}"))?;
    ensure((var - 1.0).abs() <= 0.05, || format!("LOW variance {var:.4}"))?;
    let again = inject(&map, &policy).map_err(|e| e.to_string())?;
    ensure(again.values.iter().zip(&out.values).all(|(a, b)| a.to_bits() == b.to_bits()), || "not deterministic".into())?;
    let other = inject(&map, &AugmentPolicy { seed: 4, ..policy }).map_err(|e| e.to_string())?;
    ensure(other.values != out.values, || "seed has no effect".into())?;
    Ok(format!("{} LOW pixels: mean {mean:+.4}, variance {var:.4}; HIGH bit-identical; deterministic", low.len()))
}

fn toy_overfit() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_pecl"))
        .args(["train-toy", "--out"])
        .arg(dir.path().join("run"))
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || format!("train-toy failed: {}", String::from_utf8_lossy(&out.stderr)))?;
    let text = std::fs::read_to_string(dir.path().join("run/manifest.json")).map_err(|e| e.to_string())?;
    let manifest: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let cfg = &manifest["config"];
    ensure(cfg["per_class"] == 10 && cfg["map_size"] == 64 && cfg["preset"] == "toy", || format!("unexpected config {cfg}"))?;
    let epochs = manifest["results"]["epochs"].as_array().ok_or("no epoch records")?;
    ensure(epochs.len() == 50, || format!("{} epochs", epochs.len()))?;
    let loss: Vec<f64> = epochs.iter().map(|e| e["loss"].as_f64().unwrap_or(f64::NAN)).collect();
    let acc: Vec<f64> = epochs.iter().map(|e| e["train_accuracy"].as_f64().unwrap_or(0.0)).collect();
    let reached = acc.iter().position(|&a| a >= 0.95).map(|i| i + 1);
    ensure(reached.is_some(), || format!("best train accuracy {:.3}", acc.iter().cloned().fold(0.0, f64::max)))?;
    ensure(loss[19] < loss[0], || format!("loss epoch 20 {:.4} vs epoch 1 {:.4}", loss[19], loss[0]))?;
    for e in 3..20 {
        ensure(loss[e] < loss[e - 3], || format!("loss rose over a 3-epoch window ending at epoch {}", e + 1))?;
    }
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "60 samples, train accuracy ≥ 95% at epoch {}, final {:.3}; loss {:.3} -> {:.4} by epoch 20; {:.0}s",
        reached.unwrap(),
        acc[49],
        loss[0],
        loss[19],
        elapsed.as_secs_f64()
    ))
}

fn round_trip_and_dft() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for (ns, nc) in [(1, 1), (16, 3), (128, 10), (7, 33)] {
        let p = RadarParams::new(5.8e9, 1e-3, ns, 4e8).map_err(|e| e.to_string())?;
        let data: Vec<Complex64> = (0..ns * nc)
            .map(|_| Complex64::new(rng.random_range(-1e3..1e3), rng.random_range(-1e-3..1e-3)))
            .collect();
        let echo = EchoMatrix::new(p, nc, data).map_err(|e| e.to_string())?;
        let bits = |e: &EchoMatrix| e.data().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>();
        let dat = parse_dat(&write_dat(&p, &echo).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let datb = parse_datb(&write_datb(&p, &echo).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        for (name, rec) in [("dat", dat), ("datb", datb)] {
            ensure(rec.params() == &p && bits(&rec.echo) == bits(&echo) && rec.discarded == 0, || {
                format!(".{name} round trip changed a {ns}x{nc} echo")
            })?;
        }
    }
    let mut worst_dft: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    for n in 1..=256 {
        let x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let fast = dft(&x, &WindowSpec::rectangular(n)).map_err(|e| e.to_string())?.bins;
        let slow = direct_dft(&x);
        let scale = slow.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let err = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale;
        worst_dft = worst_dft.max(err);
        let time: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        let freq: f64 = fast.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        worst_parseval = worst_parseval.max((time - freq).abs() / time);
    }
    ensure(worst_dft <= 1e-9, || format!("DFT relative error {worst_dft:.2e}"))?;
    ensure(worst_parseval <= 1e-9, || format!("Parseval relative error {worst_parseval:.2e}"))?;
    Ok(format!(
        ".dat/.datb bit-exact; DFT vs direct sum {worst_dft:.1e} (N ≤ 256); Parseval {worst_parseval:.1e}"
    ))
}

fn astft_selection() -> Verdict {
    let p = RadarParams::c_band_nominal();
    let echo = generate(&activity_template(ActivityKind::Walk, 9), &p).map_err(|e| e.to_string())?;

    for alpha in [0.5, 8.0] {
        let w = WindowSpec::gaussian(128, alpha);
        let single = AstftConfig::with_bank(vec![w], 16, 2, 13);
        let a = doppler_time_map(&echo, &single).map_err(|e| e.to_string())?;
        let b = fixed_window_stft_map(&echo, &w, &single).map_err(|e| e.to_string())?;
        ensure(
            a.values.len() == b.values.len() && a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()),
            || format!("single-window bank (alpha {alpha}) differs from the fixed-window STFT"),
        )?;
    }

    let cfg = AstftConfig::for_params(&p);
    let (_, trace) = doppler_time_map_traced(&echo, &cfg).map_err(|e| e.to_string())?;
    let mti = cfg.mti.coeffs().map_err(|e| e.to_string())?;
    let alphas: Vec<f64> = cfg
        .window_bank
        .iter()
        .map(|w| match w.kind {
            WindowKind::Gaussian { alpha } => alpha,
            WindowKind::Rectangular => f64::NAN,
        })
        .collect();
    let windows: Vec<Vec<f64>> = alphas.iter().map(|&a| gaussian(128, a)).collect();
    let profiles: Vec<Vec<Complex64>> = echo.chirps().map(direct_dft).collect();
    let n_frames = cfg.n_frames(echo.n_chirps());
    let mut checked = 0;
    let mut distinct = std::collections::BTreeSet::new();
    for r in cfg.range_bin_lo..=cfg.range_bin_hi {
        let slow: Vec<Complex64> = profiles.iter().map(|row| row[r]).collect();
        let slow = iir_filter(&mti, &slow);
        for f in 0..n_frames {
            let scores: Vec<f64> = windows
                .iter()
                .map(|w| {
                    let start = (f * cfg.hop) as isize - (w.len() / 2) as isize;
                    let seg: Vec<Complex64> = (0..w.len())
                        .map(|k| {
                            let n = start + k as isize;
                            if n >= 0 && (n as usize) < slow.len() {
                                slow[n as usize] * w[k]
                            } else {
                                Complex64::new(0.0, 0.0)
                            }
                        })
                        .collect();
                    let mags: Vec<f64> = direct_dft(&seg).iter().map(|z| z.norm()).collect();
                    concentration_oracle(&mags, cfg.concentration_eps)
                })
                .collect();
            let best = scores.iter().cloned().fold(f64::INFINITY, f64::min);
            let chosen = trace.selection[r - cfg.range_bin_lo][f];
            distinct.insert(chosen);
            ensure(scores[chosen] <= best * (1.0 + 1e-9), || {
                format!("bin {r} frame {f}: chose alpha {} at {:.6}, minimum {best:.6}", alphas[chosen], scores[chosen])
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "single-window bank bitwise equal to STFT; {checked} (bin, frame) selections minimal over {} windows ({} distinct chosen)",
        alphas.len(),
        distinct.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("oracle bin recovery", bin_recovery),
        ("MTI filter audit", mti_audit),
        ("gradient suite", gradient_suite),
        ("shape contract", shape_contract),
        ("parameter audit", parameter_audit),
        ("augmentation statistics", augmentation_statistics),
        ("toy overfit", toy_overfit),
        ("round-trip and DFT oracles", round_trip_and_dft),
        ("ASTFT selection", astft_selection),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(d) => println!("PASS  {}. {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failures += 1;
                println!("FAIL  {}. {name}: {d} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
