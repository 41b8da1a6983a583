//! Zero files: export, checksum-verified import, local re-certification
//! and a directory cache.

use explicit_formula::zeros::{self, LFunctionId, ZeroStore};

fn main() -> explicit_formula::Result<()> {
    let dir = tempfile::tempdir()?;
    let store = ZeroStore::directory(dir.path().join("cache"))?;
    let id = LFunctionId::dirichlet(-3)?;

    let list = store.get_or_compute(&id, 30.0)?;
    println!("{} zeros of {id} below 30, cached at {}", list.ordinates.len(), store.path_for(&id).unwrap().display());

    let file = dir.path().join("chi3.txt");
    zeros::export_zeros(&list, &file)?;
    print!("{}", std::fs::read_to_string(&file)?);

    let imported = zeros::import_zeros(&file)?;
    println!("imported: certified = {}", imported.certified);
    println!("after local check: certified = {}", zeros::certify(&imported)?.certified);

    let text = std::fs::read_to_string(&file)?.replacen("8.0", "8.1", 1);
    std::fs::write(&file, text)?;
    match zeros::import_zeros(&file) {
        Ok(_) => println!("tampered file accepted?"),
        Err(e) => println!("tampered file: {e}"),
    }
    println!("checksums: {:?}", store.checksums());
    Ok(())
}
