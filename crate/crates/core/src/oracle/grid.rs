use crate::symplectic::GaussianState;

/// Uniform midpoint grid on `[−L, L]` for every quadrature axis.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub half_width: f64,
    pub points_per_axis: usize,
    pub axes: Vec<String>,
}

/// Points per axis used when no resolution is requested.
pub const DEFAULT_POINTS: usize = 128;
/// Grid half-width in units of the largest marginal standard deviation.
pub const DEFAULT_SIGMAS: f64 = 6.0;

fn axis_labels(n_modes: usize) -> Vec<String> {
    (1..=n_modes)
        .flat_map(|k| [format!("x{k}"), format!("p{k}")])
        .collect()
}

impl PhaseGrid {
    pub fn new(n_modes: usize, half_width: f64, points_per_axis: usize) -> Self {
        PhaseGrid {
            half_width,
            points_per_axis,
            axes: axis_labels(n_modes),
        }
    }

    /// `L = 6 σ_max + max |d|` over all given states, with `points_per_axis` points.
    pub fn covering(states: &[&GaussianState], points_per_axis: usize) -> Self {
        let n_modes = states.first().map_or(1, |s| s.n_modes());
        let mut sigma: f64 = 0.0;
        let mut shift: f64 = 0.0;
        for s in states {
            let v = s.cm().matrix();
            for i in 0..v.nrows() {
                sigma = sigma.max(v[(i, i)].sqrt());
            }
            shift = shift.max(s.displacement().amax());
        }
        Self::new(n_modes, DEFAULT_SIGMAS * sigma + shift, points_per_axis)
    }

    /// Default grid for one state.
    pub fn for_state(state: &GaussianState) -> Self {
        Self::covering(&[state], DEFAULT_POINTS)
    }

    pub fn n_modes(&self) -> usize {
        self.axes.len() / 2
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    /// Coordinate of the `i`-th midpoint node.
    pub fn node(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points_per_axis).map(|i| self.node(i)).collect()
    }
}
