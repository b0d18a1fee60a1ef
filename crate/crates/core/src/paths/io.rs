//! Two-column `time,value` CSV with a header line.

use std::io::{Read, Write};

use crate::error::{Error, Result};

use super::{Partition, Path};

pub fn write_path_csv<W: Write>(path: &Path, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["time", "value"])?;
    for (t, x) in path.times().iter().zip(path.values()) {
        // 17 significant digits round-trip any f64
        w.write_record([format!("{t:.16e}"), format!("{x:.16e}")])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_path_csv<R: Read>(input: R, label: impl Into<String>) -> Result<Path> {
    let mut r = csv::Reader::from_reader(input);
    let mut times = Vec::new();
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(Error::invalid(format!("expected 2 columns, got {}", rec.len())));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::invalid(format!("bad number `{s}`: {e}")))
        };
        times.push(parse(&rec[0])?);
        values.push(parse(&rec[1])?);
    }
    Path::new(Partition::new(times)?, values, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{brownian_path, PartitionSequence};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn csv_round_trip_is_bit_exact(seed in any::<u64>(), level in 1u32..8, scale in 1e-3f64..1e3) {
            let seq = PartitionSequence::dyadic(1.3, level).unwrap();
            let p = brownian_path(&seq, seed, scale).unwrap();
            let mut buf = Vec::new();
            write_path_csv(&p, &mut buf).unwrap();
            let q = read_path_csv(buf.as_slice(), p.label()).unwrap();
            prop_assert_eq!(p.times().iter().map(|t| t.to_bits()).collect::<Vec<_>>(),
                            q.times().iter().map(|t| t.to_bits()).collect::<Vec<_>>());
            prop_assert_eq!(p.values().iter().map(|t| t.to_bits()).collect::<Vec<_>>(),
                            q.values().iter().map(|t| t.to_bits()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn header_is_time_value() {
        let seq = PartitionSequence::dyadic(1.0, 1).unwrap();
        let p = brownian_path(&seq, 0, 1.0).unwrap();
        let mut buf = Vec::new();
        write_path_csv(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("time,value\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
