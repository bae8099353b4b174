//! JSON interchange: complex numbers as `[re, im]`, matrices as row-major
//! nested arrays, channels as `{"dim_in", "dim_out", "kraus"}`.

use serde::{Deserialize, Serialize};

use super::{CostObservable, DensityMatrix, PureState, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Vect, C64};

pub type ComplexJson = [f64; 2];

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixJson(pub Vec<Vec<ComplexJson>>);

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VectorJson(pub Vec<ComplexJson>);

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelJson {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<MatrixJson>,
}

impl MatrixJson {
    pub fn to_mat(&self) -> Result<Mat> {
        let rows = self.0.len();
        let cols = self.0.first().map(Vec::len).unwrap_or(0);
        if rows == 0 || self.0.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse(
                "matrix rows must be nonempty and of equal length".into(),
            ));
        }
        Ok(Mat::from_fn(rows, cols, |i, j| {
            let [re, im] = self.0[i][j];
            C64::new(re, im)
        }))
    }

    pub fn from_mat(m: &Mat) -> Self {
        MatrixJson(
            (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| [m[(i, j)].re, m[(i, j)].im])
                        .collect()
                })
                .collect(),
        )
    }
}

impl TryFrom<MatrixJson> for DensityMatrix {
    type Error = Error;
    fn try_from(m: MatrixJson) -> Result<Self> {
        DensityMatrix::new(m.to_mat()?)
    }
}

impl From<DensityMatrix> for MatrixJson {
    fn from(d: DensityMatrix) -> Self {
        MatrixJson::from_mat(d.mat())
    }
}

impl TryFrom<MatrixJson> for CostObservable {
    type Error = Error;
    fn try_from(m: MatrixJson) -> Result<Self> {
        CostObservable::new(m.to_mat()?)
    }
}

impl From<CostObservable> for MatrixJson {
    fn from(g: CostObservable) -> Self {
        MatrixJson::from_mat(g.mat())
    }
}

impl TryFrom<VectorJson> for PureState {
    type Error = Error;
    fn try_from(v: VectorJson) -> Result<Self> {
        PureState::new(Vect::from_iterator(
            v.0.len(),
            v.0.iter().map(|&[re, im]| C64::new(re, im)),
        ))
    }
}

impl From<PureState> for VectorJson {
    fn from(p: PureState) -> Self {
        VectorJson(p.vec().iter().map(|z| [z.re, z.im]).collect())
    }
}

impl TryFrom<ChannelJson> for QuantumChannel {
    type Error = Error;
    fn try_from(c: ChannelJson) -> Result<Self> {
        let kraus = c
            .kraus
            .iter()
            .map(MatrixJson::to_mat)
            .collect::<Result<Vec<_>>>()?;
        QuantumChannel::new(c.dim_in, c.dim_out, kraus)
    }
}

impl From<QuantumChannel> for ChannelJson {
    fn from(c: QuantumChannel) -> Self {
        ChannelJson {
            dim_in: c.dim_in(),
            dim_out: c.dim_out(),
            kraus: c.kraus().iter().map(MatrixJson::from_mat).collect(),
        }
    }
}

/// Input file for the CLI. Each subcommand reads the fields it needs.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub channel: Option<QuantumChannel>,
    #[serde(default)]
    pub cost: Option<CostObservable>,
    #[serde(default)]
    pub zero_cost_state: Option<PureState>,
    #[serde(default)]
    pub pulse: Option<PureState>,
    #[serde(default)]
    pub input_state: Option<DensityMatrix>,
    #[serde(default)]
    pub rho: Option<DensityMatrix>,
    #[serde(default)]
    pub sigma: Option<DensityMatrix>,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            // Validation failures surface through serde as custom messages;
            // keep the original wording so the failing check stays visible.
            Error::Parse(e.to_string())
        })
    }
}
