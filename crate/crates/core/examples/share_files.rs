//! Shard a buffer into share files on disk, delete one, repair it and read
//! the data back.

use secure_regen::cli::{decode_shares, encode_bytes, make_rng, repair_shares, ShareFile};
use secure_regen::CodeParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("rgc-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let data = b"Any six of the seven nodes hold the whole file; one node alone learns nothing.".repeat(20);

    let params = CodeParams::with_default_field(7, 1, 3)?;
    let shares = encode_bytes(params, &data, &mut make_rng(Some([9; 32])))?;
    for s in &shares {
        s.write(&dir.join(ShareFile::file_name(s.header.node)))?;
    }
    println!("{} bytes -> {} shares of {} symbols in {}", data.len(), shares.len(), shares[0].header.symbol_count, dir.display());

    let lost = dir.join(ShareFile::file_name(2));
    std::fs::remove_file(&lost)?;
    let survivors: Vec<ShareFile> = (1..=7u16)
        .filter(|&v| v != 2)
        .map(|v| ShareFile::read(&dir.join(ShareFile::file_name(v))))
        .collect::<Result<_, _>>()?;

    let (rebuilt, report) = repair_shares(&survivors, 2)?;
    rebuilt.write(&lost)?;
    println!(
        "repaired node 2 with {} symbols per block, ratio {}; identical: {}",
        report.symbols_per_block,
        report.bandwidth_ratio,
        rebuilt == shares[1]
    );
    println!("decoded matches: {}", decode_shares(&survivors)? == data);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
