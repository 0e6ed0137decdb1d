//! Metadata CSV: `frame,class,track,azimuth,elevation,distance`.
//!
//! Angles are written with two decimals and distances with three; records
//! are written sorted by `(frame, class, track)` so equal inputs always give
//! equal bytes.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::event::{canonicalize, EventRecord};
use crate::geometry::wrap_degrees;

pub const HEADER: &str = "frame,class,track,azimuth,elevation,distance";

pub fn read_metadata(path: impl AsRef<Path>) -> Result<Vec<EventRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_metadata(&text).map_err(|err| match err {
        Error::Parse { line, message, .. } => Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        },
        other => other,
    })
}

pub fn parse_metadata(text: &str) -> Result<Vec<EventRecord>> {
    let mut events = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || (idx == 0 && line == HEADER) {
            continue;
        }
        let record = parse_line(line).map_err(|message| Error::Parse {
            path: Default::default(),
            line: idx + 1,
            message,
        })?;
        record.validate()?;
        events.push(record);
    }
    canonicalize(&mut events)?;
    Ok(events)
}

fn parse_line(line: &str) -> std::result::Result<EventRecord, String> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() != 6 {
        return Err(format!("expected 6 fields, found {}", fields.len()));
    }
    let int = |i: usize, name: &str| {
        fields[i]
            .parse::<usize>()
            .map_err(|e| format!("{name}: {e} ({:?})", fields[i]))
    };
    let real = |i: usize, name: &str| {
        fields[i]
            .parse::<f64>()
            .map_err(|e| format!("{name}: {e} ({:?})", fields[i]))
    };
    Ok(EventRecord {
        frame: int(0, "frame")?,
        class_id: int(1, "class")?,
        track_id: int(2, "track")?,
        azimuth: real(3, "azimuth")?,
        elevation: real(4, "elevation")?,
        distance: real(5, "distance")?,
    })
}

/// Renders events in canonical form.
pub fn format_metadata(events: &[EventRecord]) -> Result<String> {
    let mut sorted = events.to_vec();
    for e in &sorted {
        e.validate()?;
    }
    canonicalize(&mut sorted)?;
    let mut out = String::with_capacity(32 * (sorted.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for e in &sorted {
        let az = wrap_degrees(round_to(e.azimuth, 2));
        let el = round_to(e.elevation, 2);
        let dist = round_to(e.distance, 3);
        out.push_str(&format!(
            "{},{},{},{:.2},{:.2},{:.3}\n",
            e.frame,
            e.class_id,
            e.track_id,
            clean_zero(az),
            clean_zero(el),
            dist
        ));
    }
    Ok(out)
}

pub fn write_metadata(events: &[EventRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = format_metadata(events)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn round_to(v: f64, decimals: i32) -> f64 {
    let k = 10f64.powi(decimals);
    (v * k).round() / k
}

fn clean_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_file_is_empty_list() {
        assert!(parse_metadata("").unwrap().is_empty());
        assert!(parse_metadata(&format!("{HEADER}\n")).unwrap().is_empty());
    }

    #[test]
    fn single_line() {
        let ev = parse_metadata("10,2,0,30,-10,2.5\n").unwrap();
        assert_eq!(ev, vec![EventRecord::new(10, 2, 0, 30.0, -10.0, 2.5)]);
    }

    #[test]
    fn header_only_output_for_empty_list() {
        assert_eq!(format_metadata(&[]).unwrap(), format!("{HEADER}\n"));
    }

    #[test]
    fn output_is_sorted() {
        let ev = vec![
            EventRecord::new(3, 1, 0, 0.0, 0.0, 1.0),
            EventRecord::new(1, 4, 1, 10.0, 5.0, 2.0),
            EventRecord::new(1, 4, 0, -10.0, 5.0, 2.0),
        ];
        let text = format_metadata(&ev).unwrap();
        let lines: Vec<_> = text.lines().skip(1).collect();
        assert_eq!(
            lines,
            [
                "1,4,0,-10.00,5.00,2.000",
                "1,4,1,10.00,5.00,2.000",
                "3,1,0,0.00,0.00,1.000"
            ]
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = format!("{HEADER}\n1,2,0,0,0,1\n1,x,0,0,0,1\n");
        match parse_metadata(&text) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("class"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_metadata("1,2,0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn range_errors_name_the_field() {
        match parse_metadata("0,0,0,0,95,1\n") {
            Err(Error::Range { field, .. }) => assert_eq!(field, "elevation"),
            other => panic!("{other:?}"),
        }
        match parse_metadata("0,0,0,0,0,-1\n") {
            Err(Error::Range { field, .. }) => assert_eq!(field, "distance"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        let ev = vec![EventRecord::new(10, 2, 0, 30.0, -10.0, 2.5)];
        write_metadata(&ev, &p).unwrap();
        assert_eq!(read_metadata(&p).unwrap(), ev);
        assert!(matches!(
            read_metadata(dir.path().join("missing.csv")),
            Err(Error::Io { .. })
        ));
    }

    fn record() -> impl Strategy<Value = EventRecord> {
        (
            0usize..50,
            0usize..13,
            0usize..3,
            -18000i32..18000,
            -9000i32..=9000,
            1u32..20000,
        )
            .prop_map(|(f, c, t, az, el, d)| {
                EventRecord::new(f, c, t, az as f64 / 100.0, el as f64 / 100.0, d as f64 / 1000.0)
            })
    }

    proptest! {
        #[test]
        fn canonical_round_trip_is_byte_identical(mut ev in prop::collection::vec(record(), 0..40)) {
            ev.sort_by_key(EventRecord::key);
            ev.dedup_by_key(|e| e.key());
            let text = format_metadata(&ev).unwrap();
            let back = parse_metadata(&text).unwrap();
            prop_assert_eq!(format_metadata(&back).unwrap(), text);
            prop_assert_eq!(back.len(), ev.len());
            for (a, b) in back.iter().zip(&ev) {
                prop_assert_eq!(a.key(), b.key());
                prop_assert!((a.azimuth - b.azimuth).abs() < 1e-9);
                prop_assert!((a.elevation - b.elevation).abs() < 1e-9);
                prop_assert!((a.distance - b.distance).abs() < 1e-9);
            }
        }
    }
}
