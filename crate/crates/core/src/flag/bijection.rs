//! The map from symplectic and orthogonal index collections to symmetric
//! Dellac configurations, and its inverse.

use super::collection::{bit, initiating_mask, members};
use super::{Family, FlagError, IndexCollection};
use crate::config::{is_symmetric_rows, ConfigError, DellacConfiguration};

fn check_family(family: Family, operation: &'static str) -> Result<(), FlagError> {
    if family == Family::TypeA {
        Err(FlagError::WrongFamily { family, operation })
    } else {
        Ok(())
    }
}

/// Row assignment of `S(I)`, bottom to top.
pub(crate) fn to_dellac_rows(collection: &IndexCollection) -> Result<Vec<u8>, FlagError> {
    check_family(collection.family(), "to_dellac")?;
    let ambient = collection.ambient();
    let n = collection.len();
    let mut rows = vec![0u8; 2 * ambient];
    let clash = |row: usize| {
        FlagError::Inconsistency(format!("{collection}: row {row} receives two points"))
    };
    for k in 1..=n {
        for l in members(initiating_mask(
            collection.mask(k),
            collection.mask(k - 1),
            k,
        )) {
            let row = if l > k { l } else { ambient + l };
            if rows[row - 1] != 0 {
                return Err(clash(row));
            }
            rows[row - 1] = k as u8;
        }
    }
    for i in 1..=n {
        if rows[i - 1] == 0 {
            rows[i - 1] = i as u8;
        }
    }
    for row in 1..=2 * ambient {
        let c = rows[row - 1] as usize;
        if c == 0 || c > n {
            continue;
        }
        let mirror = 2 * ambient + 1 - row;
        let image = (ambient + 1 - c) as u8;
        match rows[mirror - 1] {
            0 => rows[mirror - 1] = image,
            x if x == image => {}
            _ => return Err(clash(mirror)),
        }
    }
    let empty: Vec<usize> = (1..=2 * ambient).filter(|&r| rows[r - 1] == 0).collect();
    if ambient % 2 == 1 {
        match empty[..] {
            [lo, hi] if lo + hi == 2 * ambient + 1 => {
                rows[lo - 1] = (n + 1) as u8;
                rows[hi - 1] = (n + 1) as u8;
            }
            _ => {
                return Err(FlagError::Inconsistency(format!(
                    "{collection}: middle column would fill rows {empty:?}"
                )))
            }
        }
    } else if !empty.is_empty() {
        return Err(FlagError::Inconsistency(format!(
            "{collection}: rows {empty:?} left empty"
        )));
    }
    Ok(rows)
}

/// The symmetric Dellac configuration `S(I)`.
///
/// Every initiating element `l` of `I_k` gives a point in column `k`, row
/// `l` or `N+l`; the diagonal fills the remaining low rows, the central
/// reflection the right half, and for odd `N` the middle column takes the
/// two rows still empty.
pub fn to_dellac(collection: &IndexCollection) -> Result<DellacConfiguration, FlagError> {
    let rows = to_dellac_rows(collection)?;
    let wide: Vec<usize> = rows.iter().map(|&c| c as usize).collect();
    let cfg = DellacConfiguration::new(collection.ambient(), &wide)
        .map_err(|e| FlagError::Inconsistency(format!("{collection}: {e}")))?;
    if !cfg.is_symmetric() {
        return Err(FlagError::Inconsistency(format!(
            "{collection}: image {cfg} is not symmetric"
        )));
    }
    Ok(cfg)
}

/// Reads `I_k` off the rows in the window `k+1..=N+k` whose point lies in
/// columns `1..=k`.
fn read_masks(ambient: usize, rows: &[u8]) -> Vec<u32> {
    (1..=ambient / 2)
        .map(|k| {
            (k + 1..=ambient + k)
                .filter(|&i| rows[i - 1] as usize <= k)
                .fold(0u32, |m, i| {
                    m | bit(if i <= ambient { i } else { i - ambient })
                })
        })
        .collect()
}

/// Inverse of [`to_dellac`] for the given family tag.
pub fn from_dellac(
    cfg: &DellacConfiguration,
    family: Family,
) -> Result<IndexCollection, FlagError> {
    check_family(family, "from_dellac")?;
    family.check_ambient(cfg.n_cols())?;
    if !is_symmetric_rows(cfg.n_cols(), cfg.raw_rows()) {
        return Err(ConfigError::NotSymmetric.into());
    }
    let masks = read_masks(cfg.n_cols(), cfg.raw_rows());
    let collection = IndexCollection::from_masks(family, cfg.n_cols(), masks)
        .map_err(|_| FlagError::NotInImage)?;
    match to_dellac_rows(&collection) {
        Ok(rows) if rows == cfg.raw_rows() => Ok(collection),
        _ => Err(FlagError::NotInImage),
    }
}

/// Cell dimension of an orthogonal collection: `inv'` of its configuration.
pub fn dim_orthogonal(collection: &IndexCollection) -> Result<u32, FlagError> {
    if !collection.family().is_orthogonal() {
        return Err(FlagError::WrongFamily {
            family: collection.family(),
            operation: "dim_orthogonal",
        });
    }
    Ok(to_dellac(collection)?.inv_prime()? as u32)
}
