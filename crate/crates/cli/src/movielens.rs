//! MovieLens ingestion: ratings plus tag-genome relevance vectors.
//!
//! Columns are addressed by header name (`userId,movieId,rating` and
//! `movieId,tagId,relevance`), so extra columns such as `timestamp`
//! are ignored and missing ones fail with a schema error. The movie
//! catalogue is every movie that appears in the ratings file, densely
//! numbered in ascending original id; movies without genome rows keep
//! zero vectors. Users are sampled seeded-uniformly, skipping (and
//! replacing) users whose liked list under `min_rating` is empty.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use minrf::objectives::movie::MovieData;
use minrf::RngSpec;

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MovieLensStats {
    /// Catalogue size (distinct movies in the ratings file).
    pub movies: usize,
    /// Distinct users available in the ratings file.
    pub users_available: usize,
    /// Users actually sampled into constraints.
    pub users_sampled: usize,
    /// Users passed over because nothing met `min_rating`.
    pub users_skipped: usize,
    /// Feature dimension: max tag id + 1 (tags index directly).
    pub dimension: usize,
    /// Catalogue movies that have at least one genome row.
    pub movies_with_genome: usize,
}

#[derive(Debug, Deserialize)]
struct RatingRow {
    #[serde(rename = "userId")]
    user_id: u64,
    #[serde(rename = "movieId")]
    movie_id: u64,
    rating: f64,
}

#[derive(Debug, Deserialize)]
struct GenomeRow {
    #[serde(rename = "movieId")]
    movie_id: u64,
    #[serde(rename = "tagId")]
    tag_id: u64,
    relevance: f64,
}

fn open_csv(path: &Path) -> Result<csv::Reader<std::fs::File>, CliError> {
    csv::Reader::from_path(path)
        .map_err(|e| CliError::input(format!("cannot open {}: {e}", path.display())))
}

pub fn load_movielens(
    ratings_path: &Path,
    genome_path: &Path,
    user_count: usize,
    min_rating: f64,
    seed: u64,
) -> Result<(MovieData, MovieLensStats), CliError> {
    if user_count == 0 {
        return Err(CliError::input("need at least one user"));
    }

    // Pass 1: ratings. Catalogue = every rated movie; liked lists keep
    // only ratings at or above the threshold.
    let mut movie_ids: BTreeSet<u64> = BTreeSet::new();
    let mut liked: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut reader = open_csv(ratings_path)?;
    for row in reader.deserialize::<RatingRow>() {
        let row = row.map_err(|e| {
            CliError::input(format!("bad ratings row in {}: {e}", ratings_path.display()))
        })?;
        movie_ids.insert(row.movie_id);
        let entry = liked.entry(row.user_id).or_default();
        if row.rating >= min_rating {
            entry.push(row.movie_id);
        }
    }
    if movie_ids.is_empty() {
        return Err(CliError::input(format!(
            "{}: no ratings found",
            ratings_path.display()
        )));
    }
    let catalogue: Vec<u64> = movie_ids.into_iter().collect();
    let dense = |id: u64| catalogue.binary_search(&id).ok().map(|i| i as u32);

    // Pass 2: genome vectors, indexed directly by tag id.
    let mut rows: Vec<(u32, u64, f64)> = Vec::new();
    let mut max_tag = 0u64;
    let mut reader = open_csv(genome_path)?;
    for row in reader.deserialize::<GenomeRow>() {
        let row = row.map_err(|e| {
            CliError::input(format!("bad genome row in {}: {e}", genome_path.display()))
        })?;
        if let Some(movie) = dense(row.movie_id) {
            max_tag = max_tag.max(row.tag_id);
            rows.push((movie, row.tag_id, row.relevance));
        }
    }
    if rows.is_empty() {
        return Err(CliError::input(format!(
            "{}: no genome rows match the rated movies",
            genome_path.display()
        )));
    }
    let dimension = (max_tag + 1) as usize;
    let mut vectors = vec![vec![0.0; dimension]; catalogue.len()];
    let mut with_genome: BTreeSet<u32> = BTreeSet::new();
    for (movie, tag, relevance) in rows {
        vectors[movie as usize][tag as usize] = relevance;
        with_genome.insert(movie);
    }

    // Seeded user sampling with replacement of empty liked lists.
    let mut users: Vec<u64> = liked.keys().copied().collect();
    let users_available = users.len();
    users.shuffle(&mut RngSpec::new(seed).rng());
    let mut favorites: Vec<Vec<u32>> = Vec::with_capacity(user_count);
    let mut skipped = 0usize;
    for user in users {
        if favorites.len() == user_count {
            break;
        }
        let list = &liked[&user];
        if list.is_empty() {
            skipped += 1;
            continue;
        }
        let ids: BTreeSet<u32> = list.iter().map(|&m| dense(m).expect("rated movie")).collect();
        favorites.push(ids.into_iter().collect());
    }
    if favorites.len() < user_count {
        return Err(CliError::input(format!(
            "only {} of {} requested users have a liked movie at rating >= {min_rating}",
            favorites.len(),
            user_count
        )));
    }

    let stats = MovieLensStats {
        movies: catalogue.len(),
        users_available,
        users_sampled: favorites.len(),
        users_skipped: skipped,
        dimension,
        movies_with_genome: with_genome.len(),
    };
    Ok((MovieData { vectors, favorites }, stats))
}
