use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::ConfusionCounts;
use crate::uq::{ActiveSize, PreselectorSize, UqRecord};

pub const REPS_CSV_HEADER: &str = "rep,false_pos,false_neg,selected_size,preselector_size,active_size,hamming";

/// Integer summary of one replication; enough to recompute every rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepRecord {
    pub rep: u64,
    pub false_pos: usize,
    pub false_neg: usize,
    pub selected_size: usize,
    pub preselector_size: usize,
    pub active_size: usize,
    pub hamming: usize,
}

impl RepRecord {
    pub fn confusion(&self, n: usize) -> ConfusionCounts {
        ConfusionCounts {
            false_pos: self.false_pos,
            false_neg: self.false_neg,
            selected_size: self.selected_size,
            active_size: self.active_size,
            n,
        }
    }

    pub fn uq(&self) -> UqRecord {
        UqRecord {
            preselector_size: PreselectorSize(self.preselector_size),
            active_size: ActiveSize(self.active_size),
            hamming: self.hamming,
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Config {
            path: "reps_csv".into(),
            message: format!("{other:?}"),
        },
    }
}

pub fn write_reps_csv<W: Write>(records: &[RepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads records written by [`write_reps_csv`]. Rows must be internally
/// consistent (`hamming = false_pos + false_neg`).
pub fn read_reps_csv<R: Read>(input: R) -> Result<Vec<RepRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header: Vec<String> = rd.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if header.join(",") != REPS_CSV_HEADER {
        return Err(Error::Config {
            path: "reps_csv".into(),
            message: format!("unexpected header {:?}", header.join(",")),
        });
    }
    let mut out = Vec::new();
    for row in rd.deserialize() {
        let rec: RepRecord = row.map_err(csv_err)?;
        if rec.hamming != rec.false_pos + rec.false_neg {
            return Err(Error::Config {
                path: format!("reps_csv[rep={}]", rec.rep),
                message: "hamming != false_pos + false_neg".into(),
            });
        }
        out.push(rec);
    }
    Ok(out)
}
