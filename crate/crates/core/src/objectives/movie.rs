//! Recommendation utility over a movie catalogue.
//!
//! Each user `u` brings a list of liked movies `L_u`. A candidate movie
//! `j` is worth `w_u(j) = Σ_{i ∈ L_u} cos(v_i, v_j)` to that user —
//! similarity to their taste, summed over the list — and a slate `S`
//! is worth the modular total `f_u(S) = Σ_{j ∈ S} w_u(j)`. The
//! constraint for `u` asks for a fraction of the best possible slate:
//! `f_u(S) ≥ frac · f_u(M)` with `M` the full catalogue.
//!
//! Negative similarities are clamped to zero when the weights are
//! built, keeping every `f_u` monotone (feature vectors from real tag
//! data are non-negative anyway, so the clamp is usually a no-op).
//! Users whose weights are all zero — nothing in the catalogue
//! resembles their list — get no constraint; they are reported back so
//! callers can account for them.

use std::sync::Arc;

use crate::error::Error;
use crate::oracle::{Constraint, ElementSet, GroundSet, SetFunction};

/// A movie catalogue plus per-user liked lists.
#[derive(Clone, Debug, Default)]
pub struct MovieData {
    /// One feature vector per movie; all rows share one dimension.
    pub vectors: Vec<Vec<f64>>,
    /// Liked-movie ids, one list per user.
    pub favorites: Vec<Vec<u32>>,
}

impl MovieData {
    pub fn movie_count(&self) -> usize {
        self.vectors.len()
    }

    pub fn user_count(&self) -> usize {
        self.favorites.len()
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.vectors.len())
    }

    fn validate(&self) -> Result<(), Error> {
        if self.vectors.is_empty() {
            return Err(Error::invalid("vectors", "empty catalogue"));
        }
        let dim = self.vectors[0].len();
        if dim == 0 {
            return Err(Error::invalid("vectors", "zero-dimensional features"));
        }
        for (j, v) in self.vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::invalid(
                    "vectors",
                    format!("movie {j} has dimension {} instead of {dim}", v.len()),
                ));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("vectors", format!("movie {j} has a non-finite entry")));
            }
        }
        for (u, liked) in self.favorites.iter().enumerate() {
            if liked.is_empty() {
                return Err(Error::invalid("favorites", format!("user {u} liked nothing")));
            }
            for &j in liked {
                if j as usize >= self.vectors.len() {
                    return Err(Error::ElementOutOfRange { id: j, n: self.vectors.len() });
                }
            }
        }
        Ok(())
    }
}

/// Cosine similarity, with the convention that a zero vector matches
/// nothing (similarity 0 rather than NaN).
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na <= 0.0 || nb <= 0.0 {
        0.0
    } else {
        dot / (na.sqrt() * nb.sqrt())
    }
}

/// Additive utility with fixed per-element weights.
struct ModularUtility {
    weights: Arc<Vec<f64>>,
}

impl SetFunction for ModularUtility {
    fn eval(&self, s: &ElementSet) -> f64 {
        s.iter().map(|e| self.weights[e.index()]).sum()
    }
}

/// Constraints produced from a catalogue, plus the users that did not
/// make it in.
pub struct MovieBuild {
    /// One constraint per retained user; slot `i` is the position here,
    /// and the name records the original user index.
    pub constraints: Vec<Constraint>,
    /// Users whose every movie weight came out zero.
    pub dropped_users: Vec<usize>,
}

/// Builds one slate constraint per user.
///
/// User `u` gets threshold `frac · f_u(M)` over the full catalogue
/// `M`. Users with `f_u(M) = 0` are dropped (their constraint would
/// divide by zero on normalisation or be vacuous) and listed in the
/// result.
pub fn build_movie_utility(data: &MovieData, frac: f64) -> Result<MovieBuild, Error> {
    data.validate()?;
    if !(frac.is_finite() && 0.0 < frac && frac <= 1.0) {
        return Err(Error::invalid("frac", format!("need 0 < frac <= 1, got {frac}")));
    }
    let ground = data.ground();
    let mut constraints = Vec::new();
    let mut dropped = Vec::new();
    for (u, liked) in data.favorites.iter().enumerate() {
        let mut weights = vec![0.0; data.movie_count()];
        for (j, w) in weights.iter_mut().enumerate() {
            let mut sum = 0.0;
            for &i in liked {
                sum += cosine_similarity(&data.vectors[i as usize], &data.vectors[j]);
            }
            *w = sum.max(0.0);
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            dropped.push(u);
            continue;
        }
        let slot = constraints.len();
        constraints.push(Constraint::new(
            Arc::new(ModularUtility { weights: Arc::new(weights) }),
            frac * total,
            slot,
            &ground,
            format!("user[{u}]"),
        ));
    }
    if constraints.is_empty() {
        return Err(Error::NoConstraints);
    }
    Ok(MovieBuild { constraints, dropped_users: dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::QueryLedger;
    use crate::oracle::{element_set, spot_check_constraint};
    use crate::rng::RngSpec;

    #[test]
    fn cosine_matches_hand_values() {
        assert!((cosine_similarity(&[1.0, 0.0], &[1.0, 0.0]) - 1.0).abs() < 1e-12);
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 2.0]), 0.0);
        assert_eq!(cosine_similarity(&[0.0, 0.0], &[1.0, 1.0]), 0.0);
        let expected = 1.0 / 2.0f64.sqrt();
        assert!((cosine_similarity(&[1.0, 1.0], &[1.0, 0.0]) - expected).abs() < 1e-12);
        assert!((cosine_similarity(&[3.0, 4.0], &[3.0, 4.0]) - 1.0).abs() < 1e-12);
    }

    fn toy_data() -> MovieData {
        MovieData {
            vectors: vec![
                vec![0.0, 0.0], // movie 0: featureless
                vec![1.0, 0.0], // movie 1
                vec![0.0, 1.0], // movie 2
                vec![1.0, 1.0], // movie 3
            ],
            favorites: vec![
                vec![0], // user 0: likes only the featureless movie
                vec![1], // user 1
            ],
        }
    }

    #[test]
    fn featureless_taste_drops_the_user() {
        let build = build_movie_utility(&toy_data(), 0.5).unwrap();
        assert_eq!(build.dropped_users, vec![0]);
        assert_eq!(build.constraints.len(), 1);
        assert_eq!(build.constraints[0].name(), "user[1]");
        assert_eq!(build.constraints[0].slot(), 0);
    }

    #[test]
    fn slate_values_are_additive_in_the_weights() {
        let build = build_movie_utility(&toy_data(), 0.5).unwrap();
        let c = &build.constraints[0];
        let ledger = QueryLedger::new(1);
        // Weights for user 1: movie 0 -> 0, movie 1 -> 1, movie 2 -> 0,
        // movie 3 -> 1/sqrt(2). Total = 1 + 1/sqrt(2).
        let total = 1.0 + 1.0 / 2.0f64.sqrt();
        assert!((c.threshold() - 0.5 * total).abs() < 1e-12);
        let full = c.value(&element_set([0, 1, 2, 3]), &ledger).unwrap();
        assert!((full - 1.0).abs() < 1e-12);
        // Movie 1 alone is worth 1.0 > threshold, so it clamps to 1.
        let one = c.value(&element_set([1]), &ledger).unwrap();
        assert!((one - 1.0).abs() < 1e-12);
        // Movie 3 alone: (1/sqrt(2)) / threshold.
        let partial = c.value(&element_set([3]), &ledger).unwrap();
        assert!((partial - (1.0 / 2.0f64.sqrt()) / (0.5 * total)).abs() < 1e-12);
        let nothing_relevant = c.value(&element_set([0, 2]), &ledger).unwrap();
        assert_eq!(nothing_relevant, 0.0);
    }

    #[test]
    fn modularity_holds_on_random_slates() {
        let mut vectors = Vec::new();
        let mut rng = RngSpec::new(77).rng();
        use rand::Rng;
        for _ in 0..12 {
            vectors.push((0..5).map(|_| rng.gen_range(0.0..1.0)).collect());
        }
        let data = MovieData { vectors, favorites: vec![vec![0, 3, 7]] };
        // frac = 1 keeps every normalised value below the clamp, so the
        // raw weight sum can be reconstructed exactly.
        let build = build_movie_utility(&data, 1.0).unwrap();
        let c = &build.constraints[0];
        let ledger = QueryLedger::new(1);
        for trial in 0..20u64 {
            let mut r = RngSpec::new(trial).rng();
            let a: ElementSet = (0..12u32).filter(|_| r.gen::<bool>()).map(Into::into).collect();
            let b: ElementSet = (0..12u32)
                .filter(|x| !a.contains(&(*x).into()) && r.gen::<bool>())
                .map(Into::into)
                .collect();
            let union: ElementSet = a.union(&b).copied().collect();
            let raw = |s: &ElementSet| c.value(s, &ledger).unwrap() * c.threshold();
            assert!((raw(&union) - raw(&a) - raw(&b)).abs() < 1e-9, "weights must be additive");
        }
    }

    #[test]
    fn movie_constraints_pass_oracle_spot_checks() {
        let mut vectors = Vec::new();
        let mut rng = RngSpec::new(13).rng();
        use rand::Rng;
        for _ in 0..10 {
            vectors.push((0..4).map(|_| rng.gen_range(0.0..2.0)).collect());
        }
        let data = MovieData { vectors, favorites: vec![vec![1, 2], vec![5]] };
        let build = build_movie_utility(&data, 0.6).unwrap();
        let ground = data.ground();
        for c in &build.constraints {
            spot_check_constraint(c, &ground, 30, &mut rng).unwrap();
        }
    }

    #[test]
    fn bad_catalogues_are_rejected() {
        let base = toy_data();

        let mut ragged = base.clone();
        ragged.vectors[2] = vec![1.0];
        assert!(build_movie_utility(&ragged, 0.5).is_err());

        let mut empty_list = base.clone();
        empty_list.favorites[0].clear();
        assert!(build_movie_utility(&empty_list, 0.5).is_err());

        let mut out_of_range = base.clone();
        out_of_range.favorites[1] = vec![40];
        assert!(build_movie_utility(&out_of_range, 0.5).is_err());

        assert!(build_movie_utility(&base, 0.0).is_err());
        assert!(build_movie_utility(&base, 2.0).is_err());

        // Every user featureless: no constraints at all.
        let all_dropped = MovieData {
            vectors: vec![vec![0.0], vec![1.0]],
            favorites: vec![vec![0]],
        };
        assert!(matches!(build_movie_utility(&all_dropped, 0.5), Err(Error::NoConstraints)));
    }
}
