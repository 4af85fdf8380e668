//! Fixed inputs shared by the benchmarks.

use asai_core::descriptor::AsaiBundle;
use asai_core::{AddChar, AsaiInput, CharDesc, ExtKind, FieldDesc, FieldTag, MultChar};

const MU: &str = r#"{"field":"E","conductor":1,"unit_part":[[1,4]],"t":{"angle":[0,1]}}"#;
const NU: &str = r#"{"field":"E","conductor":2,"unit_part":[[59,60],[3,5],[4,5]],"t":{"angle":[1,6]}}"#;
const TAU: &str = r#"{"mu2":{"field":"F","conductor":1,"unit_part":[[1,4]],"t":{"angle":[5,12]}},
    "nu2":{"field":"F","conductor":2,"unit_part":[[11,20],[2,5]],"t":{"angle":[5,12]}},"v2":[0.02,-0.15]}"#;

fn field() -> FieldDesc {
    FieldDesc { p: 5, ext: Some(ExtKind::Unramified), precision: None }
}

/// `Ind(mu, nu)` over the unramified quadratic extension of `Q_5`, optionally with `tau`.
pub fn asai_input(with_tau: bool) -> AsaiInput {
    let json = format!(
        r#"{{"field":{},"pi":{{"type":"principal-series","mu":{MU},"nu":{NU}}}{}}}"#,
        serde_json::to_string(&field()).unwrap(),
        if with_tau { format!(r#","tau":{TAU}"#) } else { String::new() },
    );
    serde_json::from_str::<AsaiBundle>(&json).unwrap().build().unwrap()
}

/// The conductor-2 character `nu` of `E^x` with the standard additive character of `E`.
pub fn ramified_character() -> (MultChar, AddChar) {
    let d: CharDesc = serde_json::from_str(NU).unwrap();
    let chi = d.build(&field()).unwrap();
    let psi = AddChar::standard(&field().resolve(FieldTag::E).unwrap());
    (chi, psi)
}
