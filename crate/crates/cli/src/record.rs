//! Result records and their JSONL/CSV serialization.

use std::io::Write;

use serde::{Deserialize, Serialize};

/// One estimation result. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub model: String,
    pub d: usize,
    pub p: f64,
    pub r: f64,
    pub n_samples: u64,
    pub p_l_mean: f64,
    pub std_error: f64,
    pub r_tot_log10: f64,
    pub seed: u64,
    pub wall_time_s: f64,
    pub version: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Jsonl,
    Csv,
}

/// Streams records one at a time, flushing after each so long sweeps leave
/// usable partial output behind.
pub struct RecordWriter<W: Write> {
    format: OutputFormat,
    jsonl: Option<W>,
    csv: Option<csv::Writer<W>>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(writer: W, format: OutputFormat) -> Self {
        match format {
            OutputFormat::Jsonl => Self { format, jsonl: Some(writer), csv: None },
            OutputFormat::Csv => {
                Self { format, jsonl: None, csv: Some(csv::Writer::from_writer(writer)) }
            }
        }
    }

    pub fn write(&mut self, record: &ResultRecord) -> anyhow::Result<()> {
        match self.format {
            OutputFormat::Jsonl => {
                let out = self.jsonl.as_mut().expect("jsonl writer");
                serde_json::to_writer(&mut *out, record)?;
                out.write_all(b"\n")?;
                out.flush()?;
            }
            OutputFormat::Csv => {
                let out = self.csv.as_mut().expect("csv writer");
                out.serialize(record)?;
                out.flush()?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_record() -> ResultRecord {
        ResultRecord {
            model: "pheno".into(),
            d: 5,
            p: 0.017,
            r: 0.3333333333333333,
            n_samples: 123_456,
            p_l_mean: 0.012345678901234567,
            std_error: 3.4e-4,
            r_tot_log10: 1.7320508075688772,
            seed: 42,
            wall_time_s: 1.25,
            version: "0.1.0".into(),
        }
    }

    #[test]
    fn jsonl_roundtrip_is_lossless() {
        let record = sample_record();
        let mut buf = Vec::new();
        RecordWriter::new(&mut buf, OutputFormat::Jsonl).write(&record).unwrap();
        let parsed: ResultRecord = serde_json::from_slice(buf.trim_ascii_end()).unwrap();
        assert_eq!(parsed, record);
        assert_eq!(parsed.p_l_mean.to_bits(), record.p_l_mean.to_bits());
        assert_eq!(parsed.r.to_bits(), record.r.to_bits());
    }

    #[test]
    fn csv_roundtrip_is_lossless() {
        let record = sample_record();
        let mut buf = Vec::new();
        RecordWriter::new(&mut buf, OutputFormat::Csv).write(&record).unwrap();
        let mut reader = csv::Reader::from_reader(buf.as_slice());
        let parsed: ResultRecord = reader.deserialize().next().unwrap().unwrap();
        assert_eq!(parsed, record);
        assert_eq!(parsed.r_tot_log10.to_bits(), record.r_tot_log10.to_bits());
    }
}
