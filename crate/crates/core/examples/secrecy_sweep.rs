//! Rank leakage over every eavesdropper set, the exhaustive entropy check on
//! a tiny field, and what happens without randomness.

use secure_regen::field::FieldSpec;
use secure_regen::layered::{CodeParams, LayeredCode};
use secure_regen::secrecy::{entropy_oracle, verify_all_eavesdroppers, Scheme, DEFAULT_ORACLE_BUDGET};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, ell, t) in [(7, 1, 2), (7, 1, 3), (7, 2, 2)] {
        let code = LayeredCode::new(CodeParams::with_default_field(n, ell, t)?)?;
        let keyed = verify_all_eavesdroppers(&code, Scheme::Keyed)?;
        let zeroed = verify_all_eavesdroppers(&code, Scheme::RandomnessZeroed)?;
        println!(
            "({n},{ell},{t}): {} subsets, leakage {} keyed, {} with zero randomness (witness {:?})",
            keyed.subsets_checked, keyed.max_leakage, zeroed.max_leakage, zeroed.witness
        );
    }

    let tiny = LayeredCode::new(CodeParams::new(3, 1, 2, FieldSpec::prime(7)?)?)?;
    let r = entropy_oracle(&tiny, &[1], Scheme::Keyed, DEFAULT_ORACLE_BUDGET)?;
    println!(
        "(3,1,2) over GF(7), node 1 watched: {} inputs, H(E) = {}, I(M;E) = {}, H(K|M,E) = {}",
        r.inputs, r.h_e, r.mutual_information, r.h_k_given_m_e
    );
    Ok(())
}
