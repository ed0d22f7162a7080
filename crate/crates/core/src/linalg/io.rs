//! JSON matrix format `{"rows":n,"cols":m,"data":[[re,im],...]}` (row-major).
//!
//! Floats are written in shortest round-trip form and parsed exactly, so a
//! write/read cycle reproduces every bit.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows(),
            cols: self.cols(),
            data: self.data().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(de)?;
        let data = r.data.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::new(r.rows, r.cols, data).map_err(D::Error::custom)
    }
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization cannot fail")
}

pub fn matrix_from_json(s: &str) -> Result<ComplexMatrix> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}
