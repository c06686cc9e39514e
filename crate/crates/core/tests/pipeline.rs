use hf_core::*;

fn c(re: f64, im: f64) -> ComplexVal {
    ComplexVal::new(re, im)
}

#[test]
fn polynomial_ladder_stops_at_degree() {
    let report = entropy_ladder(&parse_map("z^4").unwrap(), &[2, 3, 4, 5]);
    let bounds: Vec<Option<f64>> = report.rungs.iter().map(|r| r.result.as_ref().ok().map(|c| c.bound)).collect();
    assert_eq!(bounds[..3], [Some(2f64.ln()), Some(3f64.ln()), Some(4f64.ln())]);
    assert!(matches!(report.rungs[3].result, Err(RescaleError::PolynomialCap { .. })));
    assert_eq!(report.certificates().count(), 3);
}

#[test]
fn certificate_survives_json_round_trip() {
    let req = CertificationRequest::new(parse_map("cos(z) + cos(i*z)").unwrap(), 3);
    let cert = certify(&req).unwrap();
    assert_eq!(cert.route, Route::Polylike);
    assert!((cert.bound - 3f64.ln()).abs() < 1e-15);
    let back: EntropyCertificate = serde_json::from_str(&cert.to_json()).unwrap();
    assert_eq!(back, cert);
    back.revalidate().unwrap();

    let mut forged = back.clone();
    forged.bound = 5f64.ln();
    assert!(forged.revalidate().is_err());
}

#[test]
fn translated_request_certifies_the_shifted_map() {
    // (z + 1)^2 - 1 shifted back by c = -1, d = -1 is z^2.
    let mut req = CertificationRequest::new(parse_map("(z + 1)^2 - 1").unwrap(), 2);
    req.translate = Some((c(-1.0, 0.0), c(-1.0, 0.0)));
    req.route = RoutePreference::Zeros;
    let cert = certify(&req).unwrap();
    assert!((cert.bound - 2f64.ln()).abs() < 1e-15);
}

#[test]
fn zero_free_map_has_no_zeros_certificate() {
    let mut req = CertificationRequest::new(parse_map("exp(z)").unwrap(), 2);
    req.route = RoutePreference::Zeros;
    let err = certify(&req).unwrap_err();
    assert_eq!(err.stage(), "zero_search");
}
