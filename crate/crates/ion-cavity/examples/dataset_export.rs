//! Produce the reference datasets programmatically: one CSV per figure
//! recipe, written into `datasets/`.
//!
//! ```bash
//! cargo run -p ion-cavity --example dataset_export
//! ```

use std::fs;
use std::path::PathBuf;

use ion_cavity::sweep::{figure_recipes, run_sweep};

fn main() -> ion_cavity::Result<()> {
    let dir = PathBuf::from("datasets");
    fs::create_dir_all(&dir)?;
    for figure in 1..=7u8 {
        for recipe in figure_recipes(figure)? {
            let data = run_sweep(&recipe.request)?;
            let name = match recipe.label {
                Some(label) => format!("figure{figure}_{label}.csv"),
                None => format!("figure{figure}.csv"),
            };
            let path = dir.join(name);
            fs::write(&path, data.to_csv())?;
            println!("wrote {} ({} rows)", path.display(), data.rows.len());
        }
    }
    Ok(())
}
