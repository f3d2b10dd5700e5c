use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Cluster, DistanceMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const INFINITE: &str = "inf";

impl<T: Scalar> DistanceMatrix<T> {
    /// Writes `matrix.csv`: header row and first column carry the ids.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Format(e.to_string());
        let mut header = vec!["id".to_string()];
        header.extend(self.ids.iter().cloned());
        w.write_record(&header).map_err(csv_err)?;
        for (i, id) in self.ids.iter().enumerate() {
            let mut row = vec![id.clone()];
            row.extend((0..self.len()).map(|j| match self.get(i, j) {
                Some(v) => v.to_string(),
                None => INFINITE.to_string(),
            }));
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
    }
}

impl<T: Scalar + FromStr> DistanceMatrix<T> {
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let header = r.headers().map_err(|e| Error::Format(e.to_string()))?.clone();
        let ids: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut entries = Vec::with_capacity(ids.len() * ids.len());
        for (row, record) in r.records().enumerate() {
            let record = record.map_err(|e| Error::Format(e.to_string()))?;
            if record.get(0) != ids.get(row).map(String::as_str) {
                return Err(Error::Format(format!("row {row} id does not match header")));
            }
            for field in record.iter().skip(1) {
                entries.push(if field == INFINITE {
                    None
                } else {
                    Some(field.parse::<T>().map_err(|_| {
                        Error::Format(format!("bad matrix entry {field:?}"))
                    })?)
                });
            }
        }
        DistanceMatrix::new(ids, entries)
    }
}

/// One entry of `clusters.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterRecord<T> {
    pub members: Vec<String>,
    pub m: T,
    pub l: u32,
    pub diameter: T,
    pub logsize: u32,
}

impl<T: Scalar> ClusterRecord<T> {
    pub fn new(cluster: &Cluster<T>, matrix: &DistanceMatrix<T>, m: T, l: u32) -> Self {
        ClusterRecord {
            members: cluster.members.iter().map(|&i| matrix.ids[i].clone()).collect(),
            m,
            l,
            diameter: cluster.diameter,
            logsize: cluster.logsize,
        }
    }
}
