use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use super::{FarpEnsemble, LatentModel};
use crate::Scalar;

#[derive(Debug, Error)]
pub enum ModelIoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("model encoding error: {0}")]
    Encoding(#[from] serde_json::Error),
}

/// Write a trained model as JSON. Floats are printed in shortest
/// round-trip form, so `load_model` restores the exact values.
pub fn save_model<S: Scalar + Serialize>(
    model: &LatentModel<S>,
    path: impl AsRef<Path>,
) -> Result<(), ModelIoError> {
    write_json(model, path)
}

pub fn load_model<S: Scalar + DeserializeOwned>(
    path: impl AsRef<Path>,
) -> Result<LatentModel<S>, ModelIoError> {
    read_json(path)
}

pub fn save_ensemble<S: Scalar + Serialize>(
    ens: &FarpEnsemble<S>,
    path: impl AsRef<Path>,
) -> Result<(), ModelIoError> {
    write_json(ens, path)
}

pub fn load_ensemble<S: Scalar + DeserializeOwned>(
    path: impl AsRef<Path>,
) -> Result<FarpEnsemble<S>, ModelIoError> {
    read_json(path)
}

fn write_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<(), ModelIoError> {
    let file = BufWriter::new(File::create(path)?);
    serde_json::to_writer(file, value)?;
    Ok(())
}

fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T, ModelIoError> {
    let file = BufReader::new(File::open(path)?);
    Ok(serde_json::from_reader(file)?)
}
