//! The largest desk-scale instance: K_6 for q = 3.

mod oracle;

use wall_relators::relators::{theorem1_verify, RelatorContext, RelatorParams, Theorem1Status};

#[test]
fn q3_n6_integral_certificate() {
    let ctx = RelatorContext::new(3);
    let report = theorem1_verify(&ctx, &RelatorParams::from_q(3, 6).unwrap()).unwrap();
    assert_eq!(report.status, Theorem1Status::Verified);
    let cert = report.primary.result.certificate().expect("certificate").to_json();
    assert!(oracle::integral_certificate(&cert));
    let replayed = oracle::replay(&cert, 3).unwrap();
    assert_eq!(replayed, oracle::k_letters(3, &[1, 2, 3, 4, 5, 6]));
}
