//! The 19-cell hexagonal macrocell layout and user placement.
//!
//! `cell_radius` is the inradius `R` of each hexagon, so neighbouring sites
//! are `2R` apart. Cell 0 sits at the origin with its edge normals at
//! 30° + k·60°; azimuth 0 therefore points at a corner of cell 0.

use alloc::vec::Vec;

use crate::fading::FadingSpec;
use crate::math::{atan2, cos, floor, pow, sin, sqrt, PI};
use crate::{Error, Result};

pub const CELL_COUNT: usize = 19;
pub const INTERFERER_COUNT: usize = CELL_COUNT - 1;
pub const DEFAULT_ALPHA: f64 = 2.5;

/// User azimuth pointing at a corner of cell 0 (the default).
pub const CORNER_AZIMUTH: f64 = 0.0;
/// User azimuth pointing at the midpoint of an edge of cell 0, i.e. straight
/// at a first-ring site.
pub const EDGE_AZIMUTH: f64 = PI / 6.0;

pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UserPlacement {
    pub normalized_distance: f64,
    pub azimuth: f64,
    pub position: Point,
    /// Distance to the serving site.
    pub r: f64,
    /// Distances to the 18 interfering sites, in site order 1..=18.
    pub interferer_distances: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NetworkLayout {
    pub cell_radius: f64,
    pub alpha: f64,
    /// Site 0 is the serving cell; 1..=6 form the first ring and 7..=18
    /// the second, both counter-clockwise from 30°.
    pub bs_positions: Vec<Point>,
    pub user: Option<UserPlacement>,
}

/// Site positions in units of `R`: (polar angle in degrees, radius).
const SITES: [(f64, f64); CELL_COUNT] = [
    (0.0, 0.0),
    (30.0, 2.0),
    (90.0, 2.0),
    (150.0, 2.0),
    (210.0, 2.0),
    (270.0, 2.0),
    (330.0, 2.0),
    (30.0, 4.0),
    (60.0, 2.0 * 1.732_050_807_568_877_2),
    (90.0, 4.0),
    (120.0, 2.0 * 1.732_050_807_568_877_2),
    (150.0, 4.0),
    (180.0, 2.0 * 1.732_050_807_568_877_2),
    (210.0, 4.0),
    (240.0, 2.0 * 1.732_050_807_568_877_2),
    (270.0, 4.0),
    (300.0, 2.0 * 1.732_050_807_568_877_2),
    (330.0, 4.0),
    (0.0, 2.0 * 1.732_050_807_568_877_2),
];

/// The 19-site layout with path-loss exponent 2.5 and no user.
pub fn hex_layout(cell_radius: f64) -> Result<NetworkLayout> {
    if !(cell_radius > 0.0 && cell_radius.is_finite()) {
        return Err(Error::Domain("cell radius must be positive"));
    }
    let bs_positions = SITES
        .iter()
        .map(|&(deg, k)| {
            let t = deg * PI / 180.0;
            [k * cell_radius * cos(t), k * cell_radius * sin(t)]
        })
        .collect();
    Ok(NetworkLayout {
        cell_radius,
        alpha: DEFAULT_ALPHA,
        bs_positions,
        user: None,
    })
}

/// Distance from the centre of a hexagon with inradius `cell_radius` to its
/// boundary along `azimuth`.
pub fn boundary_distance(cell_radius: f64, azimuth: f64) -> f64 {
    let sector = PI / 3.0;
    let shifted = azimuth - PI / 6.0;
    let offset = shifted - sector * floor(shifted / sector + 0.5);
    cell_radius / cos(offset)
}

impl NetworkLayout {
    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha >= 2.0 && alpha.is_finite()) {
            return Err(Error::Domain("path-loss exponent must be at least 2"));
        }
        self.alpha = alpha;
        Ok(self)
    }

    /// Places the user at `normalized_distance` times the boundary distance
    /// of cell 0 along `azimuth`.
    pub fn place_user(&self, normalized_distance: f64, azimuth: f64) -> Result<NetworkLayout> {
        if !(normalized_distance > 0.0 && normalized_distance <= 1.0) || !azimuth.is_finite() {
            return Err(Error::OutsideCell {
                normalized_distance,
            });
        }
        let r = normalized_distance * boundary_distance(self.cell_radius, azimuth);
        let position = [r * cos(azimuth), r * sin(azimuth)];
        let interferer_distances = self.bs_positions[1..]
            .iter()
            .map(|p| distance(*p, position))
            .collect();
        let mut placed = self.clone();
        placed.user = Some(UserPlacement {
            normalized_distance,
            azimuth,
            position,
            r: distance(self.bs_positions[0], position),
            interferer_distances,
        });
        Ok(placed)
    }

    fn placement(&self) -> Result<&UserPlacement> {
        self.user
            .as_ref()
            .ok_or(Error::InvalidArgument("layout has no user placed"))
    }

    pub fn user_distance(&self) -> Result<f64> {
        self.placement().map(|u| u.r)
    }

    pub fn interferer_distances(&self) -> Result<&[f64]> {
        self.placement().map(|u| u.interferer_distances.as_slice())
    }

    /// `r^{−α}`.
    pub fn user_gain(&self) -> Result<f64> {
        Ok(pow(self.user_distance()?, -self.alpha))
    }

    /// `d_i^{−α}` for the 18 interferers.
    pub fn interferer_gains(&self) -> Result<Vec<f64>> {
        Ok(self
            .interferer_distances()?
            .iter()
            .map(|&d| pow(d, -self.alpha))
            .collect())
    }

    /// Index (0-based among the 18 interferers) of the nearest interferer;
    /// ties go to the lowest index.
    pub fn closest_interferer(&self) -> Result<usize> {
        let d = self.interferer_distances()?;
        let mut best = 0;
        for (i, &di) in d.iter().enumerate() {
            if di < d[best] {
                best = i;
            }
        }
        Ok(best)
    }
}

/// Per-interferer weights `λ`: `d_i^{−α}` times each unit-mean gamma
/// component scale of that interferer's fading. Gamma laws give
/// `d_i^{−α}/m_i` (one entry per interferer); η-µ laws give the interleaved
/// pair `d_i^{−α}/(µ(1+η⁻¹))`, `d_i^{−α}/(µ(1+η))`.
pub fn pathloss_weights(layout: &NetworkLayout, fading: &[FadingSpec]) -> Result<Vec<f64>> {
    let gains = layout.interferer_gains()?;
    if fading.len() != gains.len() {
        return Err(Error::LengthMismatch {
            left: fading.len(),
            right: gains.len(),
        });
    }
    let mut weights = Vec::with_capacity(2 * gains.len());
    for (g, f) in gains.iter().zip(fading) {
        for (_, scale) in f.components() {
            weights.push(g * scale);
        }
    }
    Ok(weights)
}

fn distance(a: Point, b: Point) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    sqrt(dx * dx + dy * dy)
}

/// Polar angle of `p` in `[0, 2π)`.
pub fn polar_angle(p: Point) -> f64 {
    let t = atan2(p[1], p[0]);
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

/// `true` if `p` lies in cell 0 (closed hexagon).
pub fn inside_serving_cell(cell_radius: f64, p: Point) -> bool {
    let r = sqrt(p[0] * p[0] + p[1] * p[1]);
    r <= boundary_distance(cell_radius, polar_angle(p)) * (1.0 + 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn nineteen_sites_six_neighbours() {
        let l = hex_layout(1.0).unwrap();
        assert_eq!(l.bs_positions.len(), 19);
        let near = l.bs_positions[1..]
            .iter()
            .filter(|p| (distance(**p, [0.0, 0.0]) - 2.0).abs() < 1e-12)
            .count();
        assert_eq!(near, 6);
        let min = l.bs_positions[1..]
            .iter()
            .map(|p| distance(*p, [0.0, 0.0]))
            .fold(f64::INFINITY, f64::min);
        assert!((min - 2.0).abs() < 1e-12);
    }

    #[test]
    fn adjacent_sites_are_two_r_apart() {
        // Every second-ring site has at least two sites exactly 2R away.
        let l = hex_layout(1.5).unwrap();
        for (i, p) in l.bs_positions.iter().enumerate() {
            let close = l
                .bs_positions
                .iter()
                .enumerate()
                .filter(|(j, q)| *j != i && distance(*p, **q) < 3.0 - 1e-9)
                .count();
            let exact = l
                .bs_positions
                .iter()
                .filter(|q| (distance(*p, **q) - 3.0).abs() < 1e-9)
                .count();
            assert_eq!(close, 0, "site {i} has a neighbour closer than 2R");
            assert!(exact >= 2);
        }
    }

    #[test]
    fn sixty_degree_symmetry() {
        let l = hex_layout(1.0).unwrap();
        let (c, s) = (cos(PI / 3.0), sin(PI / 3.0));
        for p in &l.bs_positions {
            let q = [c * p[0] - s * p[1], s * p[0] + c * p[1]];
            assert!(l.bs_positions.iter().any(|x| distance(*x, q) < 1e-9));
        }
    }

    #[test]
    fn centred_user_sees_equal_first_ring() {
        let l = hex_layout(1.0).unwrap();
        let placed = l.place_user(1e-12, 0.0).unwrap();
        for &d in &placed.interferer_distances().unwrap()[..6] {
            assert!((d - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn boundary_distances() {
        assert!((boundary_distance(1.0, EDGE_AZIMUTH) - 1.0).abs() < 1e-15);
        assert!((boundary_distance(1.0, CORNER_AZIMUTH) - 2.0 / sqrt(3.0)).abs() < 1e-15);
        assert!((boundary_distance(1.0, 7.0 * PI / 6.0) - 1.0).abs() < 1e-12);
        let l = hex_layout(1.0).unwrap().place_user(0.7, 0.0).unwrap();
        assert!((l.user_distance().unwrap() - 0.7 * 2.0 / sqrt(3.0)).abs() < 1e-15);
        let l = hex_layout(1.0)
            .unwrap()
            .place_user(0.7, EDGE_AZIMUTH)
            .unwrap();
        assert!((l.user_distance().unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn outside_cell_is_rejected() {
        let l = hex_layout(1.0).unwrap();
        assert!(matches!(
            l.place_user(1.2, 0.0),
            Err(Error::OutsideCell { .. })
        ));
        assert!(matches!(
            l.place_user(0.0, 0.0),
            Err(Error::OutsideCell { .. })
        ));
        let p = l.place_user(1.0, 0.3).unwrap().user.unwrap().position;
        assert!(inside_serving_cell(1.0, p));
    }

    #[test]
    fn weights() {
        let l = hex_layout(1.0).unwrap().place_user(0.5, 0.0).unwrap();
        let rayleigh = vec![FadingSpec::nakagami(1.0).unwrap(); 18];
        let w = pathloss_weights(&l, &rayleigh).unwrap();
        assert_eq!(w, l.interferer_gains().unwrap());

        let eta_one = vec![FadingSpec::eta_mu(1.0, 1.0).unwrap(); 18];
        let w = pathloss_weights(&l, &eta_one).unwrap();
        assert_eq!(w.len(), 36);
        for pair in w.chunks(2) {
            assert_eq!(pair[0], pair[1]);
        }

        // Doubling every distance scales weights by 2^{-2.5}.
        let mut far = l.clone();
        let u = far.user.as_mut().unwrap();
        for d in u.interferer_distances.iter_mut() {
            *d *= 2.0;
        }
        let w1 = pathloss_weights(&l, &rayleigh).unwrap();
        let w2 = pathloss_weights(&far, &rayleigh).unwrap();
        for (a, b) in w1.iter().zip(&w2) {
            assert!((b / a - pow(2.0, -2.5)).abs() < 1e-14);
        }
    }
}
