//! Table-driven GF(2^m) and GF(p) arithmetic, plus rank and solve.

use secure_regen::field::{FieldMatrix, FieldSpec, GaloisField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gf16 = GaloisField::new(FieldSpec::binary(4)?)?;
    // x * x^3 = x^4 = x + 1 under x^4 + x + 1
    println!("GF(2^4): 0b0010 * 0b1000 = {:#06b}", gf16.mul(0b0010, 0b1000));

    let big = GaloisField::new(FieldSpec::DEFAULT)?;
    let a = 0xBEEF;
    let inv = big.inv(a)?;
    println!("{}: {a:#x}^-1 = {inv:#x}, product {:#x}", big.spec(), big.mul(a, inv));

    let gf7 = GaloisField::new("GF(7)".parse()?)?;
    let m = FieldMatrix::from_rows(&gf7, 3, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 5]])?;
    println!("rank over GF(7) = {}", m.rank());
    let full = FieldMatrix::from_rows(&gf7, 2, &[vec![1, 2], vec![3, 4]])?;
    let x = full.solve(&[5, 6])?;
    println!("solve [[1,2],[3,4]] x = [5,6]: x = {x:?}, check {:?}", full.mul_vec(&x)?);
    Ok(())
}
