use nanowire_core::fitting::MagnetoTrace;
use nanowire_core::gpa::Raster;
use nanowire_core::io::*;
use nanowire_core::tlm::{TlmDataset, TlmPoint};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

proptest! {
    #[test]
    fn trace_round_trip(
        rows in prop::collection::vec((finite(), finite()), 5..60),
        n_parallel in 1u32..1000,
        bias in finite(),
        temperature in 0.0f64..400.0,
        label in "[A-Za-z0-9 _.-]{0,20}",
    ) {
        let (field, g): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
        let mut trace = MagnetoTrace::new(field, g).unwrap();
        trace.n_parallel = n_parallel;
        trace.bias_mv = bias;
        trace.temperature_k = temperature;
        trace.label = label.trim().to_string();
        let text = write_trace_csv(&trace);
        let back = parse_trace_str(&text).unwrap();
        prop_assert_eq!(&back, &trace);
        prop_assert_eq!(write_trace_csv(&back), text);
    }

    #[test]
    fn tlm_round_trip(
        rows in prop::collection::vec((1e-9f64..1e-3, 1e-3f64..1e9), 2..30),
        n_parallel in 1u32..1000,
    ) {
        prop_assume!(rows.iter().any(|r| r.0 != rows[0].0));
        let points = rows.iter().map(|&(length, resistance)| TlmPoint { length, resistance }).collect();
        let data = TlmDataset::new(points, n_parallel).unwrap();
        let back = parse_tlm_str(&write_tlm_csv(&data)).unwrap();
        prop_assert_eq!(back, data);
    }

    #[test]
    fn raster_round_trip_is_bit_exact(
        rows in 1usize..40,
        cols in 1usize..40,
        px in 1e-4f64..10.0,
        seed in any::<u32>(),
    ) {
        let values: Vec<f64> = (0..rows * cols)
            .map(|i| f64::from(f32::from_bits((seed ^ (i as u32).wrapping_mul(2654435761)) & 0x7f7f_ffff)))
            .map(|v| if v.is_finite() { v } else { 0.0 })
            .collect();
        let raster = Raster::new(rows, cols, px, values).unwrap();
        let bytes = encode_raster(&raster);
        let back = decode_raster(&bytes).unwrap();
        prop_assert_eq!(&back, &raster);
        prop_assert_eq!(encode_raster(&back), bytes);
    }

    #[test]
    fn tables_reparse(rows in prop::collection::vec((finite(), finite()), 0..100)) {
        let text = write_table(["x", "y"], &rows);
        prop_assert_eq!(parse_table(&text).unwrap(), rows);
    }

    #[test]
    fn key_values_reparse(entries in prop::collection::btree_map("[a-z_]{1,12}", "[A-Za-z0-9.+-]{0,16}", 0..20)) {
        let list: Vec<(&str, String)> = entries.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
        prop_assert_eq!(parse_key_values(&write_key_values(&list)).unwrap(), entries);
    }
}

#[test]
fn truncated_raster_reports_counts() {
    let raster = Raster::new(4, 4, 0.1, vec![1.0; 16]).unwrap();
    let mut bytes = encode_raster(&raster);
    bytes.truncate(bytes.len() - 8);
    let msg = decode_raster(&bytes).unwrap_err().to_string();
    assert!(msg.contains("expected 16 floats, found 14"), "{msg}");
}

#[test]
fn non_finite_raster_value_is_rejected() {
    let raster = Raster::new(2, 2, 0.1, vec![1.0; 4]).unwrap();
    let mut bytes = encode_raster(&raster);
    let n = bytes.len();
    bytes[n - 4..].copy_from_slice(&f32::NAN.to_le_bytes());
    assert!(decode_raster(&bytes).is_err());
}

#[test]
fn non_numeric_cell_names_its_line() {
    let text = "# bias_mV=0\n# temperature_K=1.5\n# n_parallel=34\n# label=x\nB_T,G_S\n-8,1e-5\nabc,1e-5\n0,1e-5\n4,1e-5\n8,1e-5\n";
    let msg = parse_trace_str(text).unwrap_err().to_string();
    assert!(msg.starts_with("line 7:"), "{msg}");
}
