use repdense_web::{density, local_zeta, volume};
use serde_json::Value;

const H: &str = r#"{"p":3,"diag":[{"unit":1},{"unit":-1}]}"#;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn density_of_hyperbolic_plane() {
    let v = parse(density(H, "1", None).unwrap());
    assert_eq!(v["result"]["display"], "1 - 1/3*X");
}

#[test]
fn volume_and_zeta() {
    let u3 = r#"{"p":3,"diag":[{"unit":1},{"unit":1},{"unit":1}]}"#;
    assert_eq!(parse(volume(u3).unwrap())["vol_so_prime"], "8/9");
    let z = parse(local_zeta(H).unwrap());
    assert_eq!(z["result"]["display"], "1/(1 - 2*X + X^2)");
}

#[test]
fn errors_are_strings() {
    assert!(density("not json", "1", None).is_err());
    assert!(density(H, "x", None).is_err());
}
