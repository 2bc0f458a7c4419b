use movingpoints::data::{make_blobs, make_moons, RangeScaler};
use movingpoints::mpa::{fit, InitMode, MpaConfig};
use movingpoints::LabeledDataset;

fn separable_blobs(seed: u64) -> LabeledDataset {
    let raw = make_blobs(200, &[vec![-50.0, -50.0], vec![50.0, 50.0]], 5.0, seed).unwrap();
    RangeScaler::fit_default(raw.features()).unwrap().transform_dataset(&raw).unwrap()
}

#[test]
fn blobs_are_separated_by_the_generating_diagonal() {
    // The line x + y = 0 separates the two clusters, so zero error is attainable.
    for seed in 0..10 {
        let raw = make_blobs(200, &[vec![-50.0, -50.0], vec![50.0, 50.0]], 5.0, seed).unwrap();
        for i in 0..raw.n_samples() {
            let side = raw.row(i)[0] + raw.row(i)[1] > 0.0;
            assert_eq!(side, raw.labels()[i] == 1);
        }
    }
}

#[test]
fn members_converge_on_separable_blobs() {
    let mut converged = 0;
    for seed in 0..20 {
        let data = separable_blobs(seed);
        let model = fit(&data, &MpaConfig { epochs: 200, seed, ..MpaConfig::default() }).unwrap();
        if model.members().iter().all(|m| m.error_history().contains(&0)) {
            converged += 1;
        }
        let preds = model.predict(data.features()).unwrap();
        let acc = preds.iter().zip(data.labels()).filter(|(a, b)| a == b).count();
        assert!(acc >= 198, "seed {seed}: {acc}/200");
    }
    assert!(converged >= 19, "{converged}/20");
}

#[test]
fn error_history_covers_every_epoch() {
    let data = separable_blobs(3);
    let model = fit(&data, &MpaConfig { epochs: 40, n_members: 4, ..MpaConfig::default() }).unwrap();
    assert_eq!(model.members().len(), 5);
    assert!(model.error_histories().iter().all(|h| h.len() == 40));
}

#[test]
fn centroid_init_beats_chance_on_moons() {
    let raw = make_moons(300, 0.1, 2).unwrap();
    let data = RangeScaler::fit_default(raw.features()).unwrap().transform_dataset(&raw).unwrap();
    let config = MpaConfig { init: InitMode::Centroid, epochs: 100, ..MpaConfig::default() };
    let preds = fit(&data, &config).unwrap().predict(data.features()).unwrap();
    let acc = preds.iter().zip(data.labels()).filter(|(a, b)| a == b).count() as f64 / 300.0;
    assert!(acc > 0.8, "{acc}");
}
