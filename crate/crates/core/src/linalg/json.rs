//! JSON encoding shared by every file format: a complex scalar is a
//! `[re, im]` pair, a matrix is a row-major array of rows.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{c64, CMatrix, C64};

pub fn complex_to_pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| complex_to_pair(m[(i, j)])).collect())
        .collect()
}

pub fn rows_to_matrix(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix, String> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if rows.iter().any(|row| row.len() != c) {
        return Err("ragged matrix rows".into());
    }
    let m = CMatrix::from_fn(r, c, |i, j| c64(rows[i][j][0], rows[i][j][1]));
    if !super::matrix::all_finite(&m) {
        return Err("non-finite matrix entry".into());
    }
    Ok(m)
}

/// `#[serde(with = "json::matrix")]`
pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        matrix_to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        rows_to_matrix(&rows).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "json::matrices")]`
pub mod matrices {
    use super::*;

    pub fn serialize<S: Serializer>(ms: &[CMatrix], s: S) -> Result<S::Ok, S::Error> {
        ms.iter().map(matrix_to_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CMatrix>, D::Error> {
        let all = Vec::<Vec<Vec<[f64; 2]>>>::deserialize(d)?;
        all.iter()
            .map(|rows| rows_to_matrix(rows).map_err(D::Error::custom))
            .collect()
    }
}

/// `#[serde(with = "json::complex")]`
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        complex_to_pair(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(D::Error::custom("non-finite complex scalar"));
        }
        Ok(c64(re, im))
    }
}

/// `#[serde(with = "json::complexes")]`
pub mod complexes {
    use super::*;

    pub fn serialize<S: Serializer>(zs: &[C64], s: S) -> Result<S::Ok, S::Error> {
        zs.iter().map(|&z| complex_to_pair(z)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        if pairs.iter().flatten().any(|x| !x.is_finite()) {
            return Err(D::Error::custom("non-finite complex scalar"));
        }
        Ok(pairs.iter().map(|p| c64(p[0], p[1])).collect())
    }
}

/// Reshapes a decoded matrix whose row or column count was lost to an empty
/// JSON array.
pub fn fit_shape(m: CMatrix, rows: usize, cols: usize) -> Result<CMatrix, String> {
    if m.nrows() == rows && m.ncols() == cols {
        Ok(m)
    } else if m.is_empty() && rows * cols == 0 {
        Ok(CMatrix::zeros(rows, cols))
    } else {
        Err(format!(
            "expected {}x{} matrix, found {}x{}",
            rows,
            cols,
            m.nrows(),
            m.ncols()
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    struct Holder {
        #[serde(with = "matrix")]
        m: CMatrix,
    }

    #[test]
    fn encodes_row_major_pairs() {
        let h = Holder {
            m: CMatrix::from_row_slice(1, 2, &[c64(1.0, 2.0), c64(3.0, -4.0)]),
        };
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"m":[[[1.0,2.0],[3.0,-4.0]]]}"#);
        let back: Holder = serde_json::from_str(&s).unwrap();
        assert_eq!(back.m, h.m);
    }

    #[test]
    fn ragged_rows_rejected() {
        let r: Result<Holder, _> = serde_json::from_str(r#"{"m":[[[1,0]],[]]}"#);
        assert!(r.is_err());
    }

    #[test]
    fn zero_column_matrix_keeps_rows() {
        let h = Holder { m: CMatrix::zeros(3, 0) };
        let back: Holder = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        assert_eq!(back.m.shape(), (3, 0));
    }
}
