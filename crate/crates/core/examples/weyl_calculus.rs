//! Truncated Weyl operators against their leakage and tail bounds.

use num_complex::Complex64;

use ccrlab::fock::TruncatedFock;

fn main() -> ccrlab::Result<()> {
    let xi = [Complex64::new(0.4, -0.2), Complex64::new(0.1, 0.3)];
    let eta = [Complex64::new(-0.3, 0.1), Complex64::new(0.2, 0.0)];
    for n in [6, 10, 14] {
        let f = TruncatedFock::new(2, n);
        let r = f.verify_weyl(&xi, &eta)?;
        let (action, bound) = f.weyl_action_residual(&xi, &eta)?;
        println!(
            "n={n:2} dim={:4}  relation {:.2e} (bound {:.2e})  unitarity {:.2e} (bound {:.2e})  action {:.2e} (bound {:.2e})",
            f.dim(),
            r.relation,
            r.relation_bound,
            r.unitarity,
            r.unitarity_bound,
            action,
            bound
        );
    }
    Ok(())
}
