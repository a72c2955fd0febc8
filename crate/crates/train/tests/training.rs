use pecl_nn::Module;
use pecl_train::data::batch_input;
use pecl_train::metrics::Classifier;
use pecl_train::{load_model, train, Dataset, TrainConfig};

fn small() -> (TrainConfig, Dataset) {
    let cfg = TrainConfig {
        per_class: 5,
        map_size: 32,
        epochs: 6,
        batch_size: 6,
        seed: 11,
        ..TrainConfig::default()
    };
    let data = Dataset::synthetic(cfg.per_class, cfg.map_size, cfg.seed).unwrap();
    (cfg, data)
}

#[test]
fn short_run_reduces_loss_and_round_trips() {
    let (cfg, data) = small();
    let mut seen = 0;
    let out = train(&cfg, &data, |_| seen += 1).unwrap();
    assert_eq!(seen, 6);
    assert_eq!(out.split.train.len(), 18);
    let first = out.history.first().unwrap().loss;
    let last = out.history.last().unwrap().loss;
    assert!(last < first, "loss {first} -> {last}");
    assert!(out.history.iter().all(|r| r.lr == 1e-3));

    let dir = tempfile::tempdir().unwrap();
    out.write(dir.path()).unwrap();
    for f in ["train_config.json", "split.json", "history.csv", "metrics.csv", "confusion.csv", "checkpoint/manifest.json"] {
        assert!(dir.path().join(f).is_file(), "{f} missing");
    }
    assert_eq!(std::fs::read_to_string(dir.path().join("history.csv")).unwrap().lines().count(), 7);

    let mut restored = load_model(&dir.path().join("checkpoint")).unwrap();
    let mut model = out.model;
    let batch = data.subset(&out.split.test);
    let x = batch_input(&batch).unwrap();
    let a = model.forward(&x, false).unwrap();
    let b = restored.forward(&x, false).unwrap();
    let scale = a.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (u, v) in a.data.iter().zip(&b.data) {
        // Checkpoints store single precision.
        assert!((u - v).abs() <= 1e-4 * scale.max(1.0), "{u} vs {v}");
    }
    assert_eq!(model.param_names(), restored.param_names());
    assert_eq!(model.predict(&batch).unwrap().len(), batch.len());
}

#[test]
fn dataset_is_seeded_and_round_trips() {
    let a = Dataset::synthetic(2, 16, 4).unwrap();
    let b = Dataset::synthetic(2, 16, 4).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.samples.len(), 12);
    for s in &a.samples {
        for m in &s.maps {
            assert_eq!((m.rows, m.cols), (16, 16));
            let (lo, hi) = m.min_max();
            assert!(lo >= 0.0 && hi <= 1.0);
        }
    }
    let dir = tempfile::tempdir().unwrap();
    a.save(dir.path()).unwrap();
    let back = Dataset::load(dir.path()).unwrap();
    assert_eq!(back.class_names, a.class_names);
    assert_eq!(back.labels(), a.labels());
    for (x, y) in a.samples.iter().zip(&back.samples) {
        assert_eq!(x.id, y.id);
        for (m, n) in x.maps.iter().zip(&y.maps) {
            assert!(m.values.iter().zip(&n.values).all(|(u, v)| (u - v).abs() < 1e-6));
        }
    }
}
