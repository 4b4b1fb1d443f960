//! Node placement and deterministic path-loss channel gains.
//!
//! The source sits at the origin, the destination on the x axis at the
//! source-destination distance. Relays are drawn uniformly over the lens
//! where both the source and the destination are closer than that same
//! distance, which is the planar reading of "between the source and the
//! destination" under the relay-to-destination range constraint.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units::SPEED_OF_LIGHT_M_PER_S;

/// Rejection-sampling attempts allowed per relay before the configuration
/// is declared infeasible.
const MAX_PLACEMENT_ATTEMPTS: usize = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum TopologyError {
    #[error("path loss parameter `{0}` must be strictly positive, got {1}")]
    NonPositiveParam(&'static str, f64),
    #[error("path loss exponent must be >= 2, got {0}")]
    ExponentTooSmall(f64),
    #[error("path gain requires a strictly positive distance, got {0}")]
    NonPositiveDistance(f64),
    #[error("relay count must be >= 1")]
    NoRelays,
    #[error("relay placement did not land in the feasible region after {0} attempts")]
    PlacementExhausted(usize),
    #[error("malformed topology record at line {0}: {1}")]
    Parse(usize, String),
}

/// Deterministic large-scale propagation model: a free-space reference gain
/// at distance `d0` extended by a power-law decay of exponent `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossParams {
    /// Carrier wavelength, meters.
    pub carrier_wavelength_m: f64,
    /// Reference distance `d0`, meters.
    pub reference_distance_m: f64,
    /// Path loss exponent `mu` (>= 2).
    pub exponent: f64,
    /// Source-destination distance, meters. Doubles as the relay range
    /// constraint: every relay must be closer than this to the destination.
    pub source_dest_distance_m: f64,
}

impl PathLossParams {
    pub fn new(
        carrier_wavelength_m: f64,
        reference_distance_m: f64,
        exponent: f64,
        source_dest_distance_m: f64,
    ) -> Result<Self, TopologyError> {
        let check = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(TopologyError::NonPositiveParam(name, v))
            }
        };
        check("carrier_wavelength_m", carrier_wavelength_m)?;
        check("reference_distance_m", reference_distance_m)?;
        check("source_dest_distance_m", source_dest_distance_m)?;
        check("exponent", exponent)?;
        if exponent < 2.0 {
            return Err(TopologyError::ExponentTooSmall(exponent));
        }
        Ok(Self {
            carrier_wavelength_m,
            reference_distance_m,
            exponent,
            source_dest_distance_m,
        })
    }

    /// Build from a carrier frequency in Hz, wavelength = c / f.
    pub fn from_carrier_frequency(
        carrier_freq_hz: f64,
        reference_distance_m: f64,
        exponent: f64,
        source_dest_distance_m: f64,
    ) -> Result<Self, TopologyError> {
        if carrier_freq_hz <= 0.0 || !carrier_freq_hz.is_finite() {
            return Err(TopologyError::NonPositiveParam(
                "carrier_freq_hz",
                carrier_freq_hz,
            ));
        }
        Self::new(
            SPEED_OF_LIGHT_M_PER_S / carrier_freq_hz,
            reference_distance_m,
            exponent,
            source_dest_distance_m,
        )
    }
}

/// Linear power gain at distance `d`:
/// `(lambda / (4 pi d0))^2 * (d / d0)^(-mu)`.
pub fn path_gain(d: f64, params: &PathLossParams) -> Result<f64, TopologyError> {
    if d <= 0.0 || !d.is_finite() {
        return Err(TopologyError::NonPositiveDistance(d));
    }
    let reference =
        params.carrier_wavelength_m / (4.0 * std::f64::consts::PI * params.reference_distance_m);
    Ok(reference * reference * (d / params.reference_distance_m).powf(-params.exponent))
}

/// A point in the plane, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Identity of a network node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeId {
    Source,
    Destination,
    Relay(usize),
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NodeId::Source => write!(f, "source"),
            NodeId::Destination => write!(f, "dest"),
            NodeId::Relay(i) => write!(f, "relay{i}"),
        }
    }
}

/// Fixed node deployment: source, destination, and the relay positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub source_pos: Point,
    pub dest_pos: Point,
    pub relay_pos: Vec<Point>,
}

impl Topology {
    /// Place `k_r` relays uniformly over the lens of points closer than the
    /// source-destination distance to both endpoints, by rejection sampling
    /// from the lens bounding box. Deterministic given the RNG state.
    pub fn place_relays<R: Rng>(
        rng: &mut R,
        k_r: usize,
        params: &PathLossParams,
    ) -> Result<Self, TopologyError> {
        if k_r == 0 {
            return Err(TopologyError::NoRelays);
        }
        let d = params.source_dest_distance_m;
        let source = Point::new(0.0, 0.0);
        let dest = Point::new(d, 0.0);
        // The lens spans x in [0, d] and |y| <= d * sqrt(3)/2.
        let y_max = d * 3f64.sqrt() / 2.0;
        let mut relays = Vec::with_capacity(k_r);
        for _ in 0..k_r {
            let mut placed = false;
            for _ in 0..MAX_PLACEMENT_ATTEMPTS {
                let x = rng.gen_range(0.0..d);
                let y = rng.gen_range(-y_max..y_max);
                let p = Point::new(x, y);
                if p.dist(&dest) < d && p.dist(&source) < d {
                    relays.push(p);
                    placed = true;
                    break;
                }
            }
            if !placed {
                return Err(TopologyError::PlacementExhausted(MAX_PLACEMENT_ATTEMPTS));
            }
        }
        Ok(Self {
            source_pos: source,
            dest_pos: dest,
            relay_pos: relays,
        })
    }

    pub fn n_relays(&self) -> usize {
        self.relay_pos.len()
    }

    pub fn position(&self, node: NodeId) -> Point {
        match node {
            NodeId::Source => self.source_pos,
            NodeId::Destination => self.dest_pos,
            NodeId::Relay(i) => self.relay_pos[i],
        }
    }

    pub fn distance(&self, a: NodeId, b: NodeId) -> f64 {
        self.position(a).dist(&self.position(b))
    }

    /// Plain-text record: one `<node id> <x> <y>` line per node.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "source {:?} {:?}\n",
            self.source_pos.x, self.source_pos.y
        ));
        out.push_str(&format!(
            "dest {:?} {:?}\n",
            self.dest_pos.x, self.dest_pos.y
        ));
        for (i, p) in self.relay_pos.iter().enumerate() {
            out.push_str(&format!("relay{i} {:?} {:?}\n", p.x, p.y));
        }
        out
    }

    /// Parse the plain-text record produced by [`Topology::to_text`].
    /// Relay lines must appear in index order; blank lines and `#` comments
    /// are ignored.
    pub fn from_text(text: &str) -> Result<Self, TopologyError> {
        let mut source = None;
        let mut dest = None;
        let mut relays = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let err = |msg: &str| TopologyError::Parse(lineno + 1, msg.to_string());
            let id = parts.next().ok_or_else(|| err("missing node id"))?;
            let x: f64 = parts
                .next()
                .ok_or_else(|| err("missing x"))?
                .parse()
                .map_err(|_| err("bad x coordinate"))?;
            let y: f64 = parts
                .next()
                .ok_or_else(|| err("missing y"))?
                .parse()
                .map_err(|_| err("bad y coordinate"))?;
            if parts.next().is_some() {
                return Err(err("trailing fields"));
            }
            let p = Point::new(x, y);
            match id {
                "source" => source = Some(p),
                "dest" => dest = Some(p),
                _ => {
                    let idx: usize = id
                        .strip_prefix("relay")
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| err("unknown node id"))?;
                    if idx != relays.len() {
                        return Err(err("relay ids out of order"));
                    }
                    relays.push(p);
                }
            }
        }
        Ok(Self {
            source_pos: source.ok_or_else(|| TopologyError::Parse(0, "no source line".into()))?,
            dest_pos: dest.ok_or_else(|| TopologyError::Parse(0, "no dest line".into()))?,
            relay_pos: relays,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params() -> PathLossParams {
        PathLossParams::from_carrier_frequency(2.4e9, 1.0, 3.0, 100.0).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(PathLossParams::new(0.0, 1.0, 3.0, 100.0).is_err());
        assert!(PathLossParams::new(0.125, -1.0, 3.0, 100.0).is_err());
        assert_eq!(
            PathLossParams::new(0.125, 1.0, 1.5, 100.0),
            Err(TopologyError::ExponentTooSmall(1.5))
        );
    }

    #[test]
    fn gain_at_reference_distance() {
        // lambda = c / 2.4 GHz = 0.12491352 m; (lambda / 4 pi)^2 = 9.8810e-5,
        // i.e. -40.052 dB.
        let g = path_gain(1.0, &params()).unwrap();
        assert!((g - 9.880961210318492e-5).abs() / g < 1e-12);
        assert!((crate::units::linear_to_db(g) - (-40.052_01)).abs() < 1e-3);
    }

    #[test]
    fn gain_at_fifty_meters_matches_threshold_scale() {
        // 9.8810e-5 / 50^3 = 7.9048e-10 = -91.02 dB; the -91 dB eligibility
        // threshold is the mean gain at about 50 m.
        let g = path_gain(50.0, &params()).unwrap();
        assert!((g - 7.904768968254793e-10).abs() / g < 1e-12);
        assert!((crate::units::linear_to_db(g) - (-91.021_11)).abs() < 1e-3);
    }

    #[test]
    fn gain_at_reference_distance_ignores_other_params() {
        // At d = d0 the exponent and network geometry drop out.
        let a = PathLossParams::new(0.125, 1.0, 2.0, 100.0).unwrap();
        let b = PathLossParams::new(0.125, 1.0, 5.5, 42.0).unwrap();
        assert_eq!(path_gain(1.0, &a).unwrap(), path_gain(1.0, &b).unwrap());
    }

    #[test]
    fn doubling_distance_divides_gain_by_eight() {
        let p = params();
        for d in [1.0, 7.5, 40.0] {
            let ratio = path_gain(d, &p).unwrap() / path_gain(2.0 * d, &p).unwrap();
            assert!((ratio - 8.0).abs() < 1e-9);
        }
    }

    #[test]
    fn gain_strictly_decreasing() {
        let p = params();
        let mut prev = f64::INFINITY;
        for i in 1..=500 {
            let g = path_gain(i as f64 * 0.5, &p).unwrap();
            assert!(g < prev);
            prev = g;
        }
    }

    #[test]
    fn gain_rejects_nonpositive_distance() {
        assert!(matches!(
            path_gain(0.0, &params()),
            Err(TopologyError::NonPositiveDistance(_))
        ));
        assert!(path_gain(-3.0, &params()).is_err());
    }

    #[test]
    fn placement_deterministic_under_seed() {
        let p = params();
        let a = Topology::place_relays(&mut ChaCha8Rng::seed_from_u64(9), 20, &p).unwrap();
        let b = Topology::place_relays(&mut ChaCha8Rng::seed_from_u64(9), 20, &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn placement_respects_both_range_constraints() {
        let p = params();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let topo = Topology::place_relays(&mut rng, 20, &p).unwrap();
            for i in 0..topo.n_relays() {
                assert!(topo.distance(NodeId::Relay(i), NodeId::Destination) < 100.0);
                assert!(topo.distance(NodeId::Relay(i), NodeId::Source) < 100.0);
            }
        }
    }

    #[test]
    fn zero_relays_rejected() {
        assert_eq!(
            Topology::place_relays(&mut ChaCha8Rng::seed_from_u64(0), 0, &params()).unwrap_err(),
            TopologyError::NoRelays
        );
    }

    /// Mean relay-to-destination distance against a quadrature oracle over
    /// the lens region.
    #[test]
    fn placement_mean_distance_matches_quadrature() {
        let p = params();
        let d = p.source_dest_distance_m;
        let y_max = d * 3f64.sqrt() / 2.0;

        // Midpoint rule on the bounding box; the indicator restricts to the lens.
        let n_grid = 1500;
        let (mut mass, mut weighted) = (0.0, 0.0);
        for ix in 0..n_grid {
            let x = (ix as f64 + 0.5) / n_grid as f64 * d;
            for iy in 0..n_grid {
                let y = -y_max + (iy as f64 + 0.5) / n_grid as f64 * 2.0 * y_max;
                let to_dest = ((x - d).powi(2) + y * y).sqrt();
                let to_src = (x * x + y * y).sqrt();
                if to_dest < d && to_src < d {
                    mass += 1.0;
                    weighted += to_dest;
                }
            }
        }
        let oracle_mean = weighted / mass;

        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n_draws = 100_000;
        let mut acc = 0.0;
        let mut drawn = 0;
        while drawn < n_draws {
            let batch = 500.min(n_draws - drawn);
            let topo = Topology::place_relays(&mut rng, batch, &p).unwrap();
            for i in 0..batch {
                acc += topo.distance(NodeId::Relay(i), NodeId::Destination);
            }
            drawn += batch;
        }
        let empirical = acc / n_draws as f64;
        assert!(
            (empirical - oracle_mean).abs() / oracle_mean < 0.01,
            "empirical {empirical} vs quadrature {oracle_mean}"
        );
    }

    /// Spatial uniformity over the lens: chi-square on a grid whose expected
    /// cell masses come from fine quadrature.
    #[test]
    fn placement_uniform_over_lens() {
        let p = params();
        let d = p.source_dest_distance_m;
        let y_max = d * 3f64.sqrt() / 2.0;
        let cells = 6; // 6x6 grid over the bounding box

        // Expected mass per cell by quadrature.
        let sub = 400;
        let mut expected = vec![0.0f64; cells * cells];
        for ix in 0..cells * sub {
            let x = (ix as f64 + 0.5) / (cells * sub) as f64 * d;
            for iy in 0..cells * sub {
                let y = -y_max + (iy as f64 + 0.5) / (cells * sub) as f64 * 2.0 * y_max;
                let to_dest = ((x - d).powi(2) + y * y).sqrt();
                let to_src = (x * x + y * y).sqrt();
                if to_dest < d && to_src < d {
                    expected[(ix / sub) * cells + iy / sub] += 1.0;
                }
            }
        }
        let total: f64 = expected.iter().sum();

        let n_draws = 100_000usize;
        let mut counts = vec![0u64; cells * cells];
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut drawn = 0;
        while drawn < n_draws {
            let batch = 500.min(n_draws - drawn);
            let topo = Topology::place_relays(&mut rng, batch, &p).unwrap();
            for q in &topo.relay_pos {
                let ix = ((q.x / d) * cells as f64).floor() as usize;
                let iy = (((q.y + y_max) / (2.0 * y_max)) * cells as f64).floor() as usize;
                counts[ix.min(cells - 1) * cells + iy.min(cells - 1)] += 1;
            }
            drawn += batch;
        }

        // Pool cells with small expected counts into the chi-square.
        let mut chi2 = 0.0;
        let mut dof = 0usize;
        for (e, &c) in expected.iter().zip(&counts) {
            let e_count = e / total * n_draws as f64;
            if e_count >= 20.0 {
                chi2 += (c as f64 - e_count).powi(2) / e_count;
                dof += 1;
            } else {
                assert_eq!(c, 0, "draw landed in a cell quadrature calls empty");
            }
        }
        let dist = statrs::distribution::ChiSquared::new((dof - 1) as f64).unwrap();
        let crit = statrs::distribution::ContinuousCDF::inverse_cdf(&dist, 0.99);
        assert!(chi2 < crit, "chi2 {chi2} over {dof} cells exceeds {crit}");
    }

    #[test]
    fn text_round_trip() {
        let p = params();
        let topo = Topology::place_relays(&mut ChaCha8Rng::seed_from_u64(5), 7, &p).unwrap();
        let text = topo.to_text();
        assert_eq!(Topology::from_text(&text).unwrap(), topo);
    }

    #[test]
    fn text_parse_errors() {
        assert!(Topology::from_text("source 0 0\n").is_err()); // no dest
        assert!(Topology::from_text("source 0 0\ndest 100 0\nrelay1 1 1\n").is_err());
        assert!(Topology::from_text("source 0 zero\ndest 100 0\n").is_err());
    }
}
