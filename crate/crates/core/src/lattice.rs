//! Square-lattice qubit layout with the target atom at the origin.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

pub type Site = (i32, i32);

/// Target at `(0, 0)` and `k` control sites, nearest first.
///
/// Controls are ordered by distance from the origin and then by polar angle
/// measured counterclockwise from `+x`. The order is also the excitation order
/// of the sequential gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeGeometry {
    /// Lattice period in meters.
    pub d: f64,
    pub k: u32,
    pub target_site: Site,
    pub control_sites: Vec<Site>,
}

/// Pair separations (meters) of a layout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSets {
    /// `control_target[i]` is the separation of control `i` from the target.
    pub control_target: Vec<f64>,
    /// `(i, j, r)` for every control pair with `i` excited before `j`.
    pub control_control_ordered: Vec<(usize, usize, f64)>,
    pub control_control_all: Vec<f64>,
}

fn polar_angle(site: Site) -> f64 {
    let a = f64::from(site.1).atan2(f64::from(site.0));
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

fn norm2(site: Site) -> i64 {
    i64::from(site.0).pow(2) + i64::from(site.1).pow(2)
}

fn site_order(a: &Site, b: &Site) -> Ordering {
    norm2(*a)
        .cmp(&norm2(*b))
        .then_with(|| polar_angle(*a).total_cmp(&polar_angle(*b)))
}

impl LatticeGeometry {
    pub fn build_layout(d: f64, k: u32) -> Result<Self, ModelError> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(ModelError::InvalidParameter("lattice period must be positive"));
        }
        if k < 1 {
            return Err(ModelError::InvalidParameter("at least one control atom is required"));
        }
        let k_us = k as usize;
        let mut half = 1i32;
        loop {
            let mut sites: Vec<Site> = (-half..=half)
                .flat_map(|x| (-half..=half).map(move |y| (x, y)))
                .filter(|&s| s != (0, 0))
                .collect();
            sites.sort_by(site_order);
            // every site with norm2 <= half^2 lies inside the square
            if sites.len() >= k_us && norm2(sites[k_us - 1]) <= i64::from(half).pow(2) {
                sites.truncate(k_us);
                return Ok(Self { d, k, target_site: (0, 0), control_sites: sites });
            }
            half += 1;
        }
    }

    /// Physical separation between two sites.
    pub fn separation(&self, a: Site, b: Site) -> f64 {
        let dx = f64::from(a.0 - b.0);
        let dy = f64::from(a.1 - b.1);
        self.d * dx.hypot(dy)
    }

    pub fn pair_sets(&self) -> PairSets {
        let control_target = self
            .control_sites
            .iter()
            .map(|&s| self.separation(s, self.target_site))
            .collect();
        let mut ordered = Vec::with_capacity(self.control_sites.len() * self.control_sites.len() / 2);
        for (i, &a) in self.control_sites.iter().enumerate() {
            for (j, &b) in self.control_sites.iter().enumerate().skip(i + 1) {
                ordered.push((i, j, self.separation(a, b)));
            }
        }
        let all = ordered.iter().map(|&(_, _, r)| r).collect();
        PairSets { control_target, control_control_ordered: ordered, control_control_all: all }
    }

    /// All `k(k+1)/2` pair separations including the target.
    pub fn all_separations(&self) -> Vec<f64> {
        let sets = self.pair_sets();
        let mut all = sets.control_target;
        all.extend(sets.control_control_all);
        all
    }
}
