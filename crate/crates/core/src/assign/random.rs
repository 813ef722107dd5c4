use rand::Rng;

use super::Assignment;
use crate::error::{Error, Result};

/// Independent uniform pilot for every user.
pub fn random_assign<R: Rng + ?Sized>(users: usize, pilots: usize, rng: &mut R) -> Result<Assignment> {
    if pilots == 0 {
        return Err(Error::param("pilot count must be >= 1"));
    }
    let pilot_of = (0..users).map(|_| rng.random_range(0..pilots)).collect();
    Assignment::new(pilot_of, pilots)
}
