use crate::error::Result;
use crate::geometry::ProjPoint;
use crate::numerics::{ExtendedComplex, TruncatedSeries};

use super::form::ParamSeriesPoint;

/// A holomorphic lift `t -> a~(t)` of a marked point, available both
/// pointwise (for escape rates) and as a truncated series (for valuations).
pub trait Section: Send + Sync {
    fn name(&self) -> String;
    fn lift(&self, t: &ExtendedComplex, prec: u32) -> Result<ProjPoint>;
    fn series(&self, order: usize, prec: u32) -> Result<ParamSeriesPoint>;
}

/// Constant section `t -> (z, w)`.
#[derive(Clone, Debug)]
pub struct ConstantSection {
    pub z: ExtendedComplex,
    pub w: ExtendedComplex,
}

impl ConstantSection {
    pub fn new(z: ExtendedComplex, w: ExtendedComplex) -> Self {
        ConstantSection { z, w }
    }
}

impl Section for ConstantSection {
    fn name(&self) -> String {
        format!("constant {:?}:{:?}", self.z, self.w)
    }

    fn lift(&self, _t: &ExtendedComplex, prec: u32) -> Result<ProjPoint> {
        ProjPoint::new(self.z.round_to(prec), self.w.round_to(prec))
    }

    fn series(&self, order: usize, prec: u32) -> Result<ParamSeriesPoint> {
        Ok(ParamSeriesPoint { z: TruncatedSeries::constant(self.z.round_to(prec), order), w: TruncatedSeries::constant(self.w.round_to(prec), order) })
    }
}

/// Section given by explicit series; pointwise lifts are partial sums, so
/// this is exact only for polynomial sections.
#[derive(Clone, Debug)]
pub struct SeriesSection {
    pub point: ParamSeriesPoint,
}

impl Section for SeriesSection {
    fn name(&self) -> String {
        "custom series".into()
    }

    fn lift(&self, t: &ExtendedComplex, prec: u32) -> Result<ProjPoint> {
        let t = t.round_to(prec);
        ProjPoint::new(self.point.z.eval(&t).round_to(prec), self.point.w.eval(&t).round_to(prec))
    }

    fn series(&self, order: usize, _prec: u32) -> Result<ParamSeriesPoint> {
        let order = order.min(self.point.z.order()).min(self.point.w.order());
        Ok(ParamSeriesPoint { z: self.point.z.truncate(order), w: self.point.w.truncate(order) })
    }
}
