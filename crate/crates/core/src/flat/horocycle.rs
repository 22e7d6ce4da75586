use super::graph::kruskal_threshold;
use super::search::{connections_in_region, from_raw};
use super::{FlatError, FlowState, Mat2, Region, SaddleConnection, Vec2};

#[derive(Clone, Debug, PartialEq)]
pub struct HorocycleSample {
    pub t: f64,
    /// Length at which short connections first form a circuit, if that
    /// happens at or below the probe delta. None means above delta.
    pub threshold: Option<f64>,
}

impl HorocycleSample {
    /// Certified systole bound at least `delta` (valid for delta up to the probe).
    pub fn certified(&self, delta: f64) -> bool {
        self.threshold.is_none_or(|t| t > delta)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HorocycleRun {
    pub delta: f64,
    pub samples: Vec<HorocycleSample>,
    /// Connections that can become shorter than delta during the run.
    pub candidates: usize,
}

impl HorocycleRun {
    /// Fraction of samples certified at `delta`, which must not exceed the probe.
    pub fn fraction(&self, delta: f64) -> f64 {
        assert!(delta <= self.delta, "fraction asked above the probe delta");
        let good = self.samples.iter().filter(|s| s.certified(delta)).count();
        good as f64 / self.samples.len() as f64
    }
}

/// Sample t = dt, 2 dt, ..., up to `t_max` along h_t applied to `state`,
/// recording at each time the circuit threshold of the short connections.
pub fn horocycle_average(state: &FlowState<f64>, delta: f64, t_max: f64, dt: f64) -> Result<HorocycleRun, FlatError> {
    for (v, name) in [(delta, "delta"), (t_max, "T"), (dt, "time step")] {
        if v.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(FlatError::NonPositive(name));
        }
    }
    let n = (t_max / dt + 1e-9).floor() as usize;
    // (x, y) is shorter than delta at some time in [0, T] only if |x| <= delta
    // and |y| <= delta (1 + T), in the coordinates of `state`
    let region = Region::Box {
        m: state.applied,
        a: delta,
        b: delta * (1.0 + t_max),
    };
    let conns: Vec<SaddleConnection<f64>> = from_raw(state, connections_in_region(&state.base, &region));
    let points = state.base.cone_points().len();
    let mut samples = Vec::with_capacity(n);
    for i in 1..=n {
        let t = i as f64 * dt;
        let h = Mat2::horocycle(t);
        let short: Vec<SaddleConnection<f64>> = conns
            .iter()
            .filter_map(|c| {
                let v: Vec2<f64> = h.apply(&c.holonomy);
                (v.length() <= delta).then(|| SaddleConnection { holonomy: v, ..c.clone() })
            })
            .collect();
        let threshold = kruskal_threshold(points, &short).map(|(l, _)| l);
        samples.push(HorocycleSample { t, threshold });
    }
    Ok(HorocycleRun {
        delta,
        samples,
        candidates: conns.len(),
    })
}
