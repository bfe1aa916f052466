use std::collections::HashMap;

use serde::Serialize;

use crate::error::{GenreError, Result};
use crate::genre::{GenreSpace, GenreVector};

/// A song annotated with soft genre proportions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SongRecord {
    pub id: String,
    pub title: String,
    pub artist: String,
    #[serde(rename = "proportions")]
    pub genres: GenreVector,
}

impl SongRecord {
    pub fn new(
        id: impl Into<String>,
        title: impl Into<String>,
        artist: impl Into<String>,
        genres: GenreVector,
    ) -> Self {
        Self {
            id: id.into(),
            title: title.into(),
            artist: artist.into(),
            genres,
        }
    }
}

/// Songs over one genre space, with pairwise-distinct ids.
///
/// Songs keep their insertion order; lookups by id go through a side table.
#[derive(Debug, Clone)]
pub struct Dataset {
    space: GenreSpace,
    songs: Vec<SongRecord>,
    by_id: HashMap<String, usize>,
}

impl Dataset {
    pub fn new(space: GenreSpace, songs: Vec<SongRecord>) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(songs.len());
        for (i, song) in songs.iter().enumerate() {
            if song.id.is_empty() {
                return Err(GenreError::EmptySongId);
            }
            if song.genres.dim() != space.len() {
                return Err(GenreError::DimensionMismatch {
                    expected: space.len(),
                    actual: song.genres.dim(),
                });
            }
            if by_id.insert(song.id.clone(), i).is_some() {
                return Err(GenreError::DuplicateSongId(song.id.clone()));
            }
        }
        Ok(Self {
            space,
            songs,
            by_id,
        })
    }

    pub fn empty(space: GenreSpace) -> Self {
        Self {
            space,
            songs: Vec::new(),
            by_id: HashMap::new(),
        }
    }

    pub fn space(&self) -> &GenreSpace {
        &self.space
    }

    pub fn songs(&self) -> &[SongRecord] {
        &self.songs
    }

    pub fn len(&self) -> usize {
        self.songs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.songs.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&SongRecord> {
        self.by_id.get(id).map(|&i| &self.songs[i])
    }

    pub fn into_parts(self) -> (GenreSpace, Vec<SongRecord>) {
        (self.space, self.songs)
    }
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.songs == other.songs
    }
}
