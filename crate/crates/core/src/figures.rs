//! Preset measurement configurations, with `n` along the z axis.
//!
//! Presets 1 and 2 are Mermin settings (three directions), 3 to 5 are CGLMP
//! settings (four directions). Angles are `(theta, phi)` in radians.

use crate::error::{Error, Result};
use crate::inequalities::{InequalityKind, MeasurementSettings};
use crate::linalg::Direction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigurePreset {
    pub id: u8,
    pub kind: InequalityKind,
    pub angles: &'static [(f64, f64)],
}

pub const FIG1: FigurePreset = FigurePreset {
    id: 1,
    kind: InequalityKind::Mermin,
    angles: &[(1.593, 3.236), (1.564, 1.150), (1.514, 5.322)],
};

pub const FIG2: FigurePreset = FigurePreset {
    id: 2,
    kind: InequalityKind::Mermin,
    angles: &[(1.891, 3.820), (2.589, 0.653), (0.220, 0.716)],
};

pub const FIG3: FigurePreset = FigurePreset {
    id: 3,
    kind: InequalityKind::Cglmp,
    angles: &[(2.667, 4.109), (0.924, 0.974), (2.699, 1.005), (0.0, 0.0)],
};

#[allow(clippy::approx_constant)]
pub const FIG4: FigurePreset = FigurePreset {
    id: 4,
    kind: InequalityKind::Cglmp,
    angles: &[(3.141, 0.0), (0.0, 0.0), (0.836, 5.044), (2.754, 1.897)],
};

#[allow(clippy::approx_constant)]
pub const FIG5: FigurePreset = FigurePreset {
    id: 5,
    kind: InequalityKind::Cglmp,
    angles: &[(2.532, 3.141), (1.213, 0.0), (2.378, 1.363), (0.0, 0.0)],
};

pub const ALL: [FigurePreset; 5] = [FIG1, FIG2, FIG3, FIG4, FIG5];

impl FigurePreset {
    pub fn by_id(id: u8) -> Result<FigurePreset> {
        ALL.iter()
            .find(|f| f.id == id)
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown figure id {id} (expected 1 to 5)")))
    }

    pub fn n(&self) -> Direction {
        Direction::z()
    }

    pub fn directions(&self) -> Vec<Direction> {
        self.angles
            .iter()
            .map(|&(t, p)| Direction::new(t, p).expect("preset angles are in range"))
            .collect()
    }

    pub fn settings(&self) -> MeasurementSettings {
        MeasurementSettings::from_slice(&self.directions()).expect("preset has 3 or 4 directions")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_consistent() {
        for f in ALL {
            assert_eq!(f.angles.len(), f.kind.direction_count());
            assert_eq!(FigurePreset::by_id(f.id).unwrap(), f);
            let _ = f.settings();
        }
        assert!(FigurePreset::by_id(0).is_err());
        assert!(FigurePreset::by_id(6).is_err());
    }
}
