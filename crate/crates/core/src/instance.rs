use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::InstanceError;
use crate::CityId;

/// Instances up to this size keep a full distance matrix.
const MATRIX_CACHE_LIMIT: usize = 1000;

/// TSPLIB edge-weight functions for 2D node coordinates. All of them
/// produce integer distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Euclidean distance rounded to the nearest integer.
    Euc2d,
    /// Euclidean distance rounded up.
    Ceil2d,
    /// Pseudo-Euclidean distance of the `att` instances.
    Att,
}

impl Metric {
    /// Name as written in a TSPLIB `EDGE_WEIGHT_TYPE` field.
    pub fn tsplib_name(self) -> &'static str {
        match self {
            Metric::Euc2d => "EUC_2D",
            Metric::Ceil2d => "CEIL_2D",
            Metric::Att => "ATT",
        }
    }

    pub fn from_tsplib_name(name: &str) -> Option<Self> {
        match name {
            "EUC_2D" => Some(Metric::Euc2d),
            "CEIL_2D" => Some(Metric::Ceil2d),
            "ATT" => Some(Metric::Att),
            _ => None,
        }
    }

    fn eval(self, a: (f64, f64), b: (f64, f64)) -> u64 {
        let dx = a.0 - b.0;
        let dy = a.1 - b.1;
        match self {
            Metric::Euc2d => nint(libm::sqrt(dx * dx + dy * dy)),
            Metric::Ceil2d => libm::ceil(libm::sqrt(dx * dx + dy * dy)) as u64,
            Metric::Att => {
                let r = libm::sqrt((dx * dx + dy * dy) / 10.0);
                let t = nint(r);
                if (t as f64) < r {
                    t + 1
                } else {
                    t
                }
            }
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tsplib_name())
    }
}

// TSPLIB's `(int)(x + 0.5)` for non-negative x.
fn nint(x: f64) -> u64 {
    libm::floor(x + 0.5) as u64
}

/// An immutable symmetric TSP instance.
#[derive(Clone)]
pub struct TspInstance {
    name: String,
    coords: Vec<(f64, f64)>,
    metric: Metric,
    matrix: Option<Vec<u64>>,
}

impl fmt::Debug for TspInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TspInstance")
            .field("name", &self.name)
            .field("dimension", &self.coords.len())
            .field("metric", &self.metric)
            .finish_non_exhaustive()
    }
}

impl TspInstance {
    pub fn new(
        name: impl Into<String>,
        coords: Vec<(f64, f64)>,
        metric: Metric,
    ) -> Result<Self, InstanceError> {
        let n = coords.len();
        if n < 3 {
            return Err(InstanceError::TooFewCities(n));
        }
        if let Some(index) = coords
            .iter()
            .position(|&(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(InstanceError::NonFiniteCoordinate { index });
        }
        let matrix = (n <= MATRIX_CACHE_LIMIT).then(|| {
            let mut m = alloc::vec![0u64; n * n];
            for a in 0..n {
                for b in (a + 1)..n {
                    let d = metric.eval(coords[a], coords[b]);
                    m[a * n + b] = d;
                    m[b * n + a] = d;
                }
            }
            m
        });
        Ok(TspInstance {
            name: name.into(),
            coords,
            metric,
            matrix,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of cities.
    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    /// Whether distances are served from a precomputed matrix.
    pub fn has_matrix(&self) -> bool {
        self.matrix.is_some()
    }

    /// Integer distance between two cities.
    ///
    /// Panics if either id is out of range.
    #[inline]
    pub fn distance(&self, a: CityId, b: CityId) -> u64 {
        match &self.matrix {
            Some(m) => {
                let n = self.coords.len();
                assert!(a < n && b < n, "city id out of range");
                m[a * n + b]
            }
            None => {
                if a == b {
                    // still range-check
                    let _ = self.coords[a];
                    return 0;
                }
                self.metric.eval(self.coords[a], self.coords[b])
            }
        }
    }

    /// Length of the closed tour visiting `cities` in order.
    pub fn tour_length(&self, cities: &[CityId]) -> u64 {
        let Some((&first, _)) = cities.split_first() else {
            return 0;
        };
        let open: u64 = cities.windows(2).map(|w| self.distance(w[0], w[1])).sum();
        open + self.distance(cities[cities.len() - 1], first)
    }

    pub fn nearest_neighbor_table(&self) -> NearestNeighborTable {
        NearestNeighborTable::build(self)
    }
}

/// `nn[c]` is the closest city to `c`, ties going to the lowest id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearestNeighborTable {
    nn: Vec<CityId>,
}

impl NearestNeighborTable {
    /// O(n²) scan. Uses O(n) memory beyond the instance itself.
    pub fn build(inst: &TspInstance) -> Self {
        let n = inst.dimension();
        let nn = (0..n)
            .map(|c| {
                let mut best = usize::MAX;
                let mut best_d = u64::MAX;
                for d in 0..n {
                    if d == c {
                        continue;
                    }
                    let dist = inst.distance(c, d);
                    if dist < best_d {
                        best_d = dist;
                        best = d;
                    }
                }
                best
            })
            .collect();
        NearestNeighborTable { nn }
    }

    #[inline]
    pub fn nearest(&self, city: CityId) -> CityId {
        self.nn[city]
    }

    pub fn as_slice(&self) -> &[CityId] {
        &self.nn
    }

    pub fn len(&self) -> usize {
        self.nn.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nn.is_empty()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use alloc::vec;

    /// Five cities on the x axis at 0, 1, 2, 10, 3.
    pub fn line5() -> TspInstance {
        TspInstance::new(
            "line5",
            vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (10.0, 0.0), (3.0, 0.0)],
            Metric::Euc2d,
        )
        .unwrap()
    }

    pub fn triangle() -> TspInstance {
        TspInstance::new(
            "tri",
            vec![(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)],
            Metric::Euc2d,
        )
        .unwrap()
    }

    /// Regular polygon with radius 1000; all sides round to the same length.
    pub fn polygon(n: usize) -> TspInstance {
        let coords = (0..n)
            .map(|i| {
                let a = 2.0 * core::f64::consts::PI * i as f64 / n as f64;
                (1000.0 * libm::cos(a), 1000.0 * libm::sin(a))
            })
            .collect();
        TspInstance::new("polygon", coords, Metric::Euc2d).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use alloc::vec;

    #[test]
    fn euclidean_rounding() {
        let inst =
            TspInstance::new("t", vec![(0.0, 0.0), (3.0, 4.0), (1.0, 1.0)], Metric::Euc2d).unwrap();
        assert_eq!(inst.distance(0, 1), 5);
        assert_eq!(inst.distance(0, 0), 0);
        // sqrt(2) = 1.414 -> 1
        assert_eq!(inst.distance(0, 2), 1);
    }

    #[test]
    fn ceil_rounds_up() {
        let inst = TspInstance::new(
            "t",
            vec![(0.0, 0.0), (1.0, 1.0), (3.0, 4.0)],
            Metric::Ceil2d,
        )
        .unwrap();
        assert_eq!(inst.distance(0, 1), 2);
        assert_eq!(inst.distance(0, 2), 5);
    }

    #[test]
    fn att_distance_hand_value() {
        // r = sqrt(100 / 10) = 3.162, nint = 3 < r, so 4.
        let inst = TspInstance::new(
            "t",
            vec![(0.0, 0.0), (10.0, 0.0), (0.0, 100.0)],
            Metric::Att,
        )
        .unwrap();
        assert_eq!(inst.distance(0, 1), 4);
        // r = sqrt(1000) = 31.62 -> 32
        assert_eq!(inst.distance(0, 2), 32);
    }

    #[test]
    fn rejects_degenerate_instances() {
        assert_eq!(
            TspInstance::new("t", vec![(0.0, 0.0), (1.0, 0.0)], Metric::Euc2d).unwrap_err(),
            InstanceError::TooFewCities(2)
        );
        assert!(matches!(
            TspInstance::new(
                "t",
                vec![(0.0, 0.0), (1.0, f64::NAN), (2.0, 0.0)],
                Metric::Euc2d
            ),
            Err(InstanceError::NonFiniteCoordinate { index: 1 })
        ));
    }

    #[test]
    fn tour_lengths() {
        assert_eq!(triangle().tour_length(&[0, 1, 2]), 12);
        assert_eq!(line5().tour_length(&[0, 1, 2, 3, 4]), 20);
    }

    #[test]
    fn nearest_neighbours() {
        let tri = triangle().nearest_neighbor_table();
        assert_eq!(tri.nearest(0), 1);
        let line = line5().nearest_neighbor_table();
        assert_eq!(line.nearest(3), 4);
        // cities 1 and 4 are both at distance 1 from city 2
        assert_eq!(line.nearest(2), 1);
    }

    #[test]
    fn large_instances_skip_matrix() {
        let coords = (0..1001).map(|i| (i as f64, (i * 7 % 13) as f64)).collect();
        let inst = TspInstance::new("big", coords, Metric::Euc2d).unwrap();
        assert!(!inst.has_matrix());
        // (0, 0) to (1, 7)
        assert_eq!(inst.distance(0, 1), 7);
        assert_eq!(inst.distance(5, 5), 0);
        assert!(line5().has_matrix());
    }

    #[test]
    #[should_panic]
    fn out_of_range_city_panics() {
        line5().distance(0, 5);
    }
}
