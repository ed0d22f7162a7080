use blocknorm_web::{check_block_json, elliptical_width_json, parse_matrix, range_geometry_json};
use serde_json::Value;

#[test]
fn parses_rows_and_complex_entries() {
    let x = parse_matrix("1, 2i\n-0.5+1.5i 3").unwrap();
    assert_eq!(x.rows(), 2);
    assert_eq!(x[(0, 1)].im, 2.0);
    assert_eq!(x[(1, 0)].re, -0.5);
    assert!(parse_matrix("1 2; 3").is_err());
    assert!(parse_matrix("").is_err());
    assert!(parse_matrix("1 x; 0 1").is_err());
}

#[test]
fn jordan_block_range_is_a_disc() {
    let v: Value = serde_json::from_str(&range_geometry_json("0 2; 0 0", 256).unwrap()).unwrap();
    assert!((v["width"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((v["inradius"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    for p in v["boundary"].as_array().unwrap() {
        let (re, im) = (p[0].as_f64().unwrap(), p[1].as_f64().unwrap());
        assert!((re.hypot(im) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn hermitian_width_estimate_is_zero() {
    let v: Value = serde_json::from_str(&elliptical_width_json("1 1i 0; -1i 2 0; 0 0 3", 4, 1).unwrap()).unwrap();
    assert!(v["estimate"].as_f64().unwrap() < 1e-6);
    assert!(elliptical_width_json("5", 4, 1).is_err());
}

#[test]
fn block_checks_have_no_violations() {
    for kind in ["general", "normal", "unitary", "essentially_hermitian"] {
        let v: Value = serde_json::from_str(&check_block_json(kind, 3, 7, "2").unwrap()).unwrap();
        let reports = v["reports"].as_array().unwrap();
        assert!(!reports.is_empty());
        assert!(reports.iter().all(|r| r["violation"] == false), "{kind}");
    }
    assert!(check_block_json("general", 3, 7, "0.5").is_err());
    assert!(check_block_json("nope", 3, 7, "2").is_err());
}
