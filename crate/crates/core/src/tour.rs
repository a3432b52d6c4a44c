use alloc::vec;
use alloc::vec::Vec;

use crate::error::TourError;
use crate::instance::TspInstance;
use crate::CityId;

/// A chromosome: a permutation of the instance's cities starting at city 0,
/// together with its cached closed-tour length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tour {
    cities: Vec<CityId>,
    length: u64,
}

impl Tour {
    /// Validates `cities` against `inst` and evaluates its length.
    pub fn new(inst: &TspInstance, cities: Vec<CityId>) -> Result<Self, TourError> {
        check_permutation(&cities, inst.dimension())?;
        Ok(Tour::evaluate(inst, cities))
    }

    /// The tour 0, 1, ..., n-1.
    pub fn identity(inst: &TspInstance) -> Self {
        Tour::evaluate(inst, (0..inst.dimension()).collect())
    }

    /// Evaluates a permutation the caller has already guaranteed valid.
    pub(crate) fn evaluate(inst: &TspInstance, cities: Vec<CityId>) -> Self {
        debug_assert_eq!(check_permutation(&cities, inst.dimension()), Ok(()));
        let length = inst.tour_length(&cities);
        Tour { cities, length }
    }

    pub fn cities(&self) -> &[CityId] {
        &self.cities
    }

    pub fn into_cities(self) -> Vec<CityId> {
        self.cities
    }

    /// Cached closed-tour length (the fitness, lower is better).
    #[inline]
    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.cities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cities.is_empty()
    }

    /// Position of `city` in the tour. O(n).
    pub fn position_of(&self, city: CityId) -> usize {
        self.cities
            .iter()
            .position(|&c| c == city)
            .expect("city not in tour")
    }
}

/// Checks that `cities` is a permutation of `0..n` with city 0 first.
pub fn check_permutation(cities: &[CityId], n: usize) -> Result<(), TourError> {
    if cities.len() != n {
        return Err(TourError::WrongLength {
            expected: n,
            got: cities.len(),
        });
    }
    if let Some(&first) = cities.first() {
        if first != 0 {
            return Err(TourError::StartNotZero(first));
        }
    }
    let mut seen = vec![false; n];
    for &c in cities {
        if c >= n {
            return Err(TourError::CityOutOfRange(c));
        }
        if core::mem::replace(&mut seen[c], true) {
            return Err(TourError::DuplicateCity(c));
        }
    }
    Ok(())
}
