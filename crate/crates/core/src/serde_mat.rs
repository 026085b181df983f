//! JSON encoding of complex matrices and vectors: matrices are arrays of
//! rows, every entry an `[re, im]` pair.

use faer::Mat;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub(crate) mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &Mat<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| pair(&m[(i, j)])).collect())
            .collect();
        serde::Serialize::serialize(&rows, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mat<Complex64>, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        Ok(Mat::from_fn(rows.len(), ncols, |i, j| {
            Complex64::new(rows[i][j][0], rows[i][j][1])
        }))
    }
}

pub(crate) mod vector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<[f64; 2]> = v.iter().map(pair).collect();
        serde::Serialize::serialize(&entries, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let entries: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(entries
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect())
    }
}
