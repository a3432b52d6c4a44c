use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("instance needs at least 3 cities, got {0}")]
    TooFewCities(usize),
    #[error("city {index} has a non-finite coordinate")]
    NonFiniteCoordinate { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TourError {
    #[error("tour has {got} cities, instance has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("tour must start at city 0, starts at {0}")]
    StartNotZero(usize),
    #[error("city {0} is out of range")]
    CityOutOfRange(usize),
    #[error("city {0} appears more than once")]
    DuplicateCity(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("population size must be positive")]
    EmptyPopulation,
    #[error("mutation probability {0} is outside [0, 1]")]
    MutationProbability(f64),
    #[error("crossover is not supported, crossover probability must be 0 (got {0})")]
    Crossover(f64),
    #[error("operator pool is empty")]
    EmptyPool,
    #[error("operator pool may only hold concrete operators, found {0}")]
    MetaInPool(&'static str),
    #[error("window radius and candidate count must be at least 1")]
    ContextBounds,
}
