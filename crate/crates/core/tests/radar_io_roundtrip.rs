use num_complex::Complex64;
use pecl_core::radar_io::{
    parse_dat, parse_datb, read_file, write_dat, write_datb, write_file, CodecRegistry,
    RadarIoError,
};
use pecl_core::synth::{activity_template, generate, ActivityKind};
use pecl_core::{EchoMatrix, RadarParams};
use proptest::prelude::*;

fn bits(e: &EchoMatrix) -> Vec<(u64, u64)> {
    e.data().iter().map(|c| (c.re.to_bits(), c.im.to_bits())).collect()
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        -1e3f64..1e3,
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
    ]
}

fn echo_strategy() -> impl Strategy<Value = EchoMatrix> {
    (
        1e6f64..1e11,
        1e-6f64..1e-1,
        1usize..9,
        1e6f64..1e10,
        1usize..6,
    )
        .prop_flat_map(|(fc, t, ns, b, nc)| {
            let params = RadarParams::new(fc, t, ns, b).unwrap();
            prop::collection::vec((finite(), finite()), ns * nc).prop_map(move |v| {
                let data = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
                EchoMatrix::new(params, nc, data).unwrap()
            })
        })
}

proptest! {
    #[test]
    fn ascii_round_trip(echo in echo_strategy()) {
        let bytes = write_dat(echo.params(), &echo).unwrap();
        let rec = parse_dat(&bytes).unwrap();
        prop_assert_eq!(rec.discarded, 0);
        prop_assert_eq!(rec.params(), echo.params());
        prop_assert_eq!(bits(&rec.echo), bits(&echo));
        prop_assert_eq!(write_dat(rec.params(), &rec.echo).unwrap(), bytes);
    }

    #[test]
    fn binary_round_trip(echo in echo_strategy()) {
        let bytes = write_datb(echo.params(), &echo).unwrap();
        let rec = parse_datb(&bytes).unwrap();
        prop_assert_eq!(rec.params(), echo.params());
        prop_assert_eq!(bits(&rec.echo), bits(&echo));
        prop_assert_eq!(write_datb(rec.params(), &rec.echo).unwrap(), bytes);
    }

    #[test]
    fn parsers_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..512)) {
        let _ = parse_dat(&bytes);
        let _ = parse_datb(&bytes);
    }

    #[test]
    fn ascii_parser_survives_textual_noise(text in "[0-9eE+\\-.ij \n]{0,200}") {
        let _ = parse_dat(text.as_bytes());
    }

    #[test]
    fn binary_parser_survives_valid_prefix(tail in prop::collection::vec(any::<u8>(), 0..200)) {
        let mut bytes = b"FMCW".to_vec();
        bytes.extend_from_slice(&1u32.to_le_bytes());
        bytes.extend(tail);
        let _ = parse_datb(&bytes);
    }

    #[test]
    fn reshape_is_row_major(ns in 1usize..10, nc in 1usize..10) {
        let params = RadarParams::new(5.8e9, 1e-3, ns, 4e8).unwrap();
        let data: Vec<Complex64> = (0..ns * nc).map(|k| Complex64::new(k as f64, 0.5)).collect();
        let echo = EchoMatrix::new(params, nc, data).unwrap();
        let rec = parse_datb(&write_datb(&params, &echo).unwrap()).unwrap();
        for n in 0..nc {
            for m in 0..ns {
                prop_assert_eq!(rec.echo.get(n, m).re, (n * ns + m) as f64);
            }
        }
    }
}

#[test]
fn single_element_round_trip() {
    let params = RadarParams::new(5.8e9, 1e-3, 1, 4e8).unwrap();
    let echo = EchoMatrix::new(params, 1, vec![Complex64::new(-1.25, 3.5e-7)]).unwrap();
    for (write, parse) in [
        (write_dat as fn(&_, &_) -> _, parse_dat as fn(&[u8]) -> _),
        (write_datb, parse_datb),
    ] {
        let bytes: Vec<u8> = write(&params, &echo).unwrap();
        let rec: pecl_core::radar_io::Recording = parse(&bytes).unwrap();
        assert_eq!(rec.echo, echo);
        assert_eq!(write(&params, &rec.echo).unwrap(), bytes);
    }
}

#[test]
fn synthetic_fall_round_trips_through_files() {
    let params = RadarParams::c_band_nominal();
    let echo = generate(&activity_template(ActivityKind::Fall, 5), &params).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for name in ["fall.dat", "fall.datb", "FALL.DATB"] {
        let path = dir.path().join(name);
        write_file(&path, &echo).unwrap();
        let rec = read_file(&path).unwrap();
        assert_eq!(bits(&rec.echo), bits(&echo), "{name}");
        assert_eq!(rec.params(), &params);
    }
}

#[test]
fn unknown_extension_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let params = RadarParams::c_band_nominal();
    let echo = EchoMatrix::zeros(params, 1).unwrap();
    let err = write_file(dir.path().join("x.bin"), &echo).unwrap_err();
    assert!(matches!(err, RadarIoError::UnknownExtension(_)));
    assert_eq!(
        CodecRegistry::default().names().collect::<Vec<_>>(),
        vec!["ascii", "binary"]
    );
}

#[test]
fn header_errors() {
    assert!(matches!(
        parse_dat(b"5.8e9\n1e-3\n128\n"),
        Err(RadarIoError::TruncatedHeader { found: 3 })
    ));
    assert!(matches!(
        parse_dat(b"5.8e9\n-1e-3\n1\n4e8\n1+1i\n"),
        Err(RadarIoError::NonPositiveParam { .. })
    ));
    assert!(matches!(
        parse_dat(b"5.8e9\n1e-3\n4\n4e8\n1+1i\n2\n"),
        Err(RadarIoError::EmptyPayload { .. })
    ));
}

#[test]
fn mismatched_params_are_rejected() {
    let echo = EchoMatrix::zeros(RadarParams::c_band_nominal(), 1).unwrap();
    let other = RadarParams::new(24e9, 1e-3, 128, 4e8).unwrap();
    assert_eq!(write_dat(&other, &echo).unwrap_err(), RadarIoError::ParamsMismatch);
}
