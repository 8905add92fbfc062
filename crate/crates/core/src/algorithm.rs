use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cdf::{locate_pupil_cdf, CdfParams};
use crate::ea::{locate_pupil_ea, EaParams};
use crate::error::{Error, Result};
use crate::image::{GrayImage, PupilEstimate, Region};
use crate::pf::{locate_pupil_pf, PfParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Cdf,
    Pf,
    Ea,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Cdf, Algorithm::Pf, Algorithm::Ea];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Cdf => "cdf",
            Algorithm::Pf => "pf",
            Algorithm::Ea => "ea",
        }
    }

    pub fn locate(
        &self,
        img: &GrayImage,
        roi: &Region,
        params: &AlgoParams,
    ) -> Result<PupilEstimate> {
        match self {
            Algorithm::Cdf => locate_pupil_cdf(img, roi, &params.cdf),
            Algorithm::Pf => locate_pupil_pf(img, roi, &params.pf),
            Algorithm::Ea => locate_pupil_ea(img, roi, &params.ea),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cdf" => Ok(Algorithm::Cdf),
            "pf" | "gpf" => Ok(Algorithm::Pf),
            "ea" => Ok(Algorithm::Ea),
            other => Err(Error::InvalidParams(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Parameters for all three algorithms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AlgoParams {
    pub cdf: CdfParams,
    pub pf: PfParams,
    pub ea: EaParams,
}

impl AlgoParams {
    pub fn validate(&self) -> Result<()> {
        self.cdf.validate()?;
        self.pf.validate()?;
        self.ea.validate()
    }
}
