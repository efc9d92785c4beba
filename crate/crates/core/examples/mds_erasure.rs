//! Systematic Reed–Solomon code: encode, drop symbols, decode from any k.

use secure_regen::field::{FieldSpec, GaloisField};
use secure_regen::mds::MdsCode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let field = GaloisField::new(FieldSpec::prime(7)?)?;
    let code = MdsCode::new(&field, 6, 3)?;
    let message = [1, 5, 2];
    let word = code.encode(&message)?;
    println!("codeword over GF(7) at points {:?}: {word:?}", code.evaluation_points());

    // keep only positions 1, 3 and 5
    let known: Vec<(usize, u32)> = [1, 3, 5].iter().map(|&i| (i, word[i])).collect();
    let decoded = code.erasure_decode(&known)?;
    println!("decoded from {known:?}: {decoded:?}");
    assert_eq!(decoded, message);

    let mut bad = known.clone();
    bad.push((0, (word[0] + 1) % 7));
    println!("with an inconsistent extra symbol: {:?}", code.erasure_decode(&bad));
    Ok(())
}
