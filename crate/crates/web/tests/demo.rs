use iconv_web::{default_samples, kernel_spectrum_json, pad_signal_json, roundtrip_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn padding_reports_period_and_zeros() {
    let v = parse(pad_signal_json("1, 2, 3, 4", "wa").unwrap());
    assert_eq!(v["period"], 10);
    assert_eq!(v["padded"].as_array().unwrap().len(), 10);
    assert_eq!(v["prior_zeros"], serde_json::json!([0, 5]));
    for k in [0, 5] {
        assert!(v["magnitude"][k].as_f64().unwrap() < 1e-12);
    }
    assert!(pad_signal_json("1 2 3", "zs").is_err());
    assert!(pad_signal_json("1, x", "ws").is_err());
    assert!(pad_signal_json("1", "qq").is_err());
}

#[test]
fn invertible_pair_recovers_its_input() {
    let v = parse(roundtrip_json("zs", "wa", 16, 2, 3).unwrap());
    assert_eq!(v["row"], 15);
    assert_eq!(v["invertible"], true);
    assert!(v["max_abs_error"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["x_recovered"].as_array().unwrap().len(), 16);
}

#[test]
fn non_invertible_pair_shows_a_forced_error() {
    let v = parse(roundtrip_json("hs", "wa", 16, 1, 3).unwrap());
    assert_eq!(v["row"], 13);
    assert_eq!(v["invertible"], false);
    assert!(v["max_abs_error"].as_f64().unwrap() > 1e-6);
    assert!(roundtrip_json("ws", "ws", 1, 1, 0).is_err());
}

#[test]
fn wa_kernel_spectrum_is_imaginary_with_zeros() {
    let v = parse(kernel_spectrum_json("0.1, 0.5, 0.2", "wa", "wa", 10).unwrap());
    let re = v["real"].as_array().unwrap();
    assert!(re.iter().all(|x| x.as_f64().unwrap() == 0.0));
    assert_eq!(v["structural_zeros"], serde_json::json!([0, 5]));
    assert_eq!(v["skip"], serde_json::json!([0, 5]));
    assert_eq!(v["invertible"], true);
    let gain: Vec<f64> = v["gain"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g.as_f64().unwrap())
        .collect();
    assert_eq!((gain[0], gain[5]), (0.0, 0.0));
    assert_eq!(gain.iter().cloned().fold(0.0, f64::max), 1.0);
    assert!(kernel_spectrum_json("1, 2", "ws", "ws", 8).is_err());
    assert!(kernel_spectrum_json("1", "ws", "ws", 7).is_err());
}

#[test]
fn default_samples_parse_back() {
    let s = default_samples(12);
    assert!(parse(pad_signal_json(&s, "hs").unwrap())["period"] == 24);
}
