//! Encode a (7, ℓ=1, t=3) instance, lose a node, repair it, reconstruct.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use secure_regen::layered::{random_symbols, CodeParams, LayeredCode, NodeShare};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let code = LayeredCode::new(CodeParams::with_default_field(7, 1, 3)?)?;
    let d = *code.dimensions();
    println!(
        "B = {} message symbols, R = {} random, alpha = {}, beta = {}, {} groups",
        d.message_symbols, d.random_symbols, d.alpha, d.beta, d.groups
    );

    let mut rng = ChaCha20Rng::seed_from_u64(42);
    let message = random_symbols(code.params().field, &mut rng, d.message_symbols);
    let shares = code.encode_with_rng(&message, &mut rng)?;

    let failed = 5;
    let helpers: Vec<NodeShare> = shares.iter().filter(|s| s.node() != failed).cloned().collect();
    let transcript = code.build_transcript(failed, &helpers)?;
    for h in transcript.helpers.keys() {
        println!("helper {h} sends {} symbols", transcript.symbols_from(*h));
    }
    let rebuilt = code.repair(failed, &transcript)?;
    println!("node {failed} repaired exactly: {}", rebuilt == shares[failed - 1]);

    let recovered = code.reconstruct(&helpers)?;
    println!("message recovered from the other six: {}", recovered == message);
    let rates = code.normalized_rates();
    println!("normalized rates ({}, {})", rates.alpha_bar(), rates.beta_bar());
    Ok(())
}
