//! Fit a CSV dataset and save, reload and query the model file.

use nufreg::cli::{fit_dataset, load_dataset, modelfile::ModelFile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/benchmark.csv");
    let data = load_dataset(&path)?;
    let fitted = fit_dataset(&data, 21, 0)?;

    let text = fitted.to_text();
    println!("{}", text.lines().take(16).collect::<Vec<_>>().join("\n"));
    let back = ModelFile::from_text(&text)?;
    assert_eq!(back, fitted);
    println!("...\nreloaded model: b1 = {}", back.model.b1_c);
    Ok(())
}
