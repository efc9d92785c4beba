//! Rate points and outer bounds, all in exact rationals.

use secure_regen::region::{
    check_bounds, BoundStatus, corner_scan, ell_star, region_7661, srk_point, SystemParams,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let region = region_7661()?;
    println!("(7,6,6,1) region corners:");
    for c in &region.corners {
        println!("  ({}, {})", c.alpha_bar(), c.beta_bar());
    }

    let params = SystemParams::new(7, 6, 6, 1)?;
    let srk = srk_point(6, 6, 1)?;
    for check in check_bounds(&srk, &params)?.checks {
        let status = match check.status {
            BoundStatus::Satisfied { slack } => format!("satisfied, slack {slack}"),
            BoundStatus::Violated { slack } => format!("violated, slack {slack}"),
            BoundStatus::NotApplicable { reason } => format!("n/a, {reason}"),
        };
        println!("  srk vs {}: {status}", check.name);
    }

    for n in [7, 13] {
        let scan = corner_scan(n, 1)?;
        let shown: Vec<String> = scan
            .iter()
            .map(|(t, p)| format!("t={t} ({}, {})", p.alpha_bar(), p.beta_bar()))
            .collect();
        println!("non-dominated layered points, n={n}: {}", shown.join(", "));
    }

    for d in [6, 10, 20] {
        let row: Vec<usize> = (2..=d).map(|k| ell_star(k, d)).collect::<Result<_, _>>()?;
        println!("ell*(k, {d}) for k = 2..={d}: {row:?}");
    }
    Ok(())
}
