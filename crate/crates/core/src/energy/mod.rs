//! Energies of measures attached to rational maps and finite point sets.
//!
//! * [`mutual_energy_arch`] estimates `(μ_f − μ_g, μ_f − μ_g)` at the archimedean
//!   place from pullback samples of the two equilibrium measures.
//! * [`regularized_set_energy`] evaluates the adelic energy of a finite set of
//!   rational points whose Dirac masses are spread to radius `ε_v` at each place.
//! * [`split_bound`] assembles the upper bound for the pairing `⟨f, g⟩` from Hölder
//!   certificates and canonical heights.

mod exceptional;
mod family;
mod mutual;
mod sample;
mod set_energy;
mod split;

pub use exceptional::{exceptional_pair_lookup, ExceptionalClass};
pub use family::{parse_family_coefficient, FormFamily, MapFamily};
pub use mutual::{
    default_regularization, mutual_energy_arch, mutual_energy_complex, mutual_energy_samples,
    pairing_lower_arch, u_parameter_scan, EnergyEstimate, EnergyParams, UScan, UScanRow,
};
pub use sample::{base_point, equilibrium_sample, ComplexMap, MeasureSample, MAX_ATOMS};
pub use set_energy::{arch_kernel, regularized_set_energy, SetEnergy};
pub use split::{split_bound, GenericBound, PairingBoundReport, PlaceTerm};

use std::collections::BTreeMap;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::projmap::ProjPointQ;
use crate::qfield::{parse_rational, Place, Rational};

/// A nonempty set of distinct affine rational points, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisSetQ {
    points: Vec<ProjPointQ>,
}

impl GaloisSetQ {
    pub fn new(mut points: Vec<ProjPointQ>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("the point set is empty"));
        }
        if points.iter().any(ProjPointQ::is_infinity) {
            return Err(Error::invalid("the point set must be affine"));
        }
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("the point set has repeated points"));
        }
        Ok(GaloisSetQ { points })
    }

    pub fn from_rationals(xs: &[Rational]) -> Result<Self> {
        Self::new(xs.iter().map(ProjPointQ::from_rational).collect())
    }

    /// Parses point strings such as `"3/4"` or `"-2"`.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let pts = items
            .iter()
            .map(|s| s.as_ref().parse::<ProjPointQ>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts)
    }

    pub fn points(&self) -> &[ProjPointQ] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn rationals(&self) -> Vec<Rational> {
        self.points
            .iter()
            .map(|p| p.to_rational().expect("affine point"))
            .collect()
    }
}

/// Radii `ε_v ∈ (0, 1]`, equal to 1 outside finitely many places.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdelicEpsilon {
    values: BTreeMap<Place, Rational>,
}

impl AdelicEpsilon {
    /// All radii equal to 1.
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn new(entries: impl IntoIterator<Item = (Place, Rational)>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (v, e) in entries {
            if !e.is_positive() || e > Rational::one() {
                return Err(Error::invalid(format!("epsilon at {v} must lie in (0, 1]")));
            }
            if !e.is_one() {
                values.insert(v, e);
            }
        }
        Ok(AdelicEpsilon { values })
    }

    /// Parses `{"arch": "0.5", "2": "1/4"}` style entries.
    pub fn parse<K: AsRef<str>, V: AsRef<str>>(entries: &[(K, V)]) -> Result<Self> {
        let parsed = entries
            .iter()
            .map(|(k, v)| Ok((k.as_ref().parse::<Place>()?, parse_rational(v.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parsed)
    }

    pub fn get(&self, v: &Place) -> Rational {
        self.values.get(v).cloned().unwrap_or_else(Rational::one)
    }

    /// Places with `ε_v < 1`.
    pub fn places(&self) -> impl Iterator<Item = &Place> {
        self.values.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Place, &Rational)> {
        self.values.iter()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests;
