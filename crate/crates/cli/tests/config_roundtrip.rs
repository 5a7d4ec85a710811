use std::path::Path;

use nanoqed_cli::RunConfig;
use proptest::prelude::*;

fn emitter_block() -> impl Strategy<Value = String> {
    (
        prop::option::of(1300.0..1500.0f64),
        prop::option::of(0.0..60.0f64),
        prop::option::of(1.0..20.0f64),
        -8.0..8.0f64,
        -8.0..8.0f64,
    )
        .prop_map(|(w, kv, d, x, y)| {
            let mut s = String::from("[emitter]\n");
            if let Some(w) = w {
                s += &format!("omega_qe = {w}\n");
            }
            if let Some(kv) = kv {
                s += &format!("kappa_vib = {kv}\n");
            }
            if let Some(d) = d {
                s += &format!("dipole = {d}\n");
            }
            s + &format!("x = {x}\ny = {y}\n")
        })
}

fn config_text() -> impl Strategy<Value = String> {
    (
        prop::option::of(10.0..80.0f64),
        prop::option::of(0.0..80.0f64),
        prop::collection::vec(emitter_block(), 1..4),
        prop::option::of(2.0..10.0f64),
        prop_oneof![Just("ground"), Just("photon"), Just("emitter:1")],
        prop::option::of((-50.0..50.0f64, 1e-8..1e-4f64)),
        prop::option::of((1usize..4, any::<bool>())),
        prop::option::of((10.0..500.0f64, prop_oneof![Just("rk4"), Just("rk45"), Just("expm")], 1usize..20)),
    )
        .prop_filter("needs a drive or an excitation", |t| t.4 != "ground" || t.5.is_some())
        .prop_map(|(kappa, g0, emitters, width, state, drive, model, evo)| {
            let mut s = String::from("[cavity]\n");
            if let Some(k) = kappa {
                s += &format!("kappa_out = {k}\n");
            }
            if let Some(g) = g0 {
                s += &format!("g0 = {g}\n");
            }
            for e in &emitters {
                s += e;
            }
            if let Some(w) = width {
                s += &format!("[profile]\nwidth = {w}\n");
            }
            s += &format!("[initial]\nstate = {state}\n");
            if let Some((dp, n)) = drive {
                s += &format!("[drive]\nomega_p = {}\nphoton_number = {n}\n", 1401.6 + dp);
            }
            if let Some((n_max, half)) = model {
                let conv = if half { "half_rate" } else { "literal" };
                s += &format!("[model]\nn_max = {n_max}\ndephasing = {conv}\n");
            }
            if let Some((t, method, stride)) = evo {
                s += &format!("[evolution]\nt_max = {t}\nmethod = {method}\nrecord_stride = {stride}\n");
            }
            s
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parse_serialize_parse_is_identity(text in config_text()) {
        let a = RunConfig::parse(&text, Path::new(".")).unwrap();
        let b = RunConfig::parse(&a.to_ini(), Path::new(".")).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.to_ini(), b.to_ini());
    }

    #[test]
    fn misspelled_keys_are_rejected_with_a_suggestion(text in config_text(), pick in 0usize..1000) {
        let lines: Vec<&str> = text.lines().collect();
        let keyed: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].contains(" = ")).collect();
        let i = keyed[pick % keyed.len()];
        let (key, value) = lines[i].split_once(" = ").unwrap();
        let mut broken = lines.clone();
        let typo = format!("{key}{} = {value}", key.chars().last().unwrap());
        broken[i] = &typo;
        let err = RunConfig::parse(&broken.join("\n"), Path::new(".")).unwrap_err();
        prop_assert_eq!(err.line, i + 1);
        let expected = format!("did you mean `{key}`");
        prop_assert!(err.message.contains(&expected), "{}", err);
    }
}
