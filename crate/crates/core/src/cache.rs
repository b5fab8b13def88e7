//! Optional on-disk cache for graded-slice monomial enumerations.
//!
//! Purely an optimization: files are versioned and validated on load, and
//! anything stale, corrupt, reordered or incomplete is ignored and
//! recomputed, so deleting the cache never changes results. Validation is
//! strict enough to pin the exact canonical enumeration: entries must be
//! sorted monomials of the right degree, strictly increasing in the canonical
//! order, with the count matching an independently computed coefficient of
//! the PBW generating function.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::vacuum::{Factor, PBW_ORDER_VERSION};

pub const CACHE_SCHEMA: u32 = 1;

/// Environment variable overriding the cache directory.
pub const CACHE_ENV_VAR: &str = "ANNREL_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct SliceFile {
    schema: u32,
    order: String,
    algebra: String,
    degree: usize,
    monomials: Vec<Vec<Factor>>,
}

pub fn slice_path(dir: &Path, algebra: &str, degree: usize) -> PathBuf {
    dir.join(format!("slice-{algebra}-d{degree}.json"))
}

/// Coefficient of `q^degree` in `prod_{n>=1} (1 - q^n)^(-colors)`.
fn pbw_count(colors: usize, degree: usize) -> u128 {
    let mut coeffs = vec![0u128; degree + 1];
    coeffs[0] = 1;
    for n in 1..=degree {
        for _ in 0..colors {
            for i in n..=degree {
                coeffs[i] += coeffs[i - n];
            }
        }
    }
    coeffs[degree]
}

fn factor_key(f: &Factor) -> (i32, u16) {
    (f.1, f.0)
}

fn valid(file: &SliceFile, algebra: &str, degree: usize, dim: usize) -> bool {
    if file.schema != CACHE_SCHEMA
        || file.order != PBW_ORDER_VERSION
        || file.algebra != algebra
        || file.degree != degree
    {
        return false;
    }
    if file.monomials.len() as u128 != pbw_count(dim, degree) {
        return false;
    }
    let mut prev: Option<&Vec<Factor>> = None;
    for mono in &file.monomials {
        let d: i64 = mono.iter().map(|f| -(f.1 as i64)).sum();
        if d != degree as i64 {
            return false;
        }
        if mono
            .iter()
            .any(|f| f.1 >= 0 || (f.0 as usize) >= dim)
        {
            return false;
        }
        if mono.windows(2).any(|w| factor_key(&w[0]) > factor_key(&w[1])) {
            return false;
        }
        if let Some(p) = prev {
            // Strictly increasing in the canonical enumeration order.
            let a: Vec<(i32, u16)> = p.iter().map(factor_key).collect();
            let b: Vec<(i32, u16)> = mono.iter().map(factor_key).collect();
            if a >= b {
                return false;
            }
        }
        prev = Some(mono);
    }
    true
}

/// Loads a validated slice enumeration, or `None` to recompute.
pub fn load_slice(dir: &Path, algebra: &str, degree: usize, dim: usize) -> Option<Vec<Vec<Factor>>> {
    let bytes = fs::read(slice_path(dir, algebra, degree)).ok()?;
    let file: SliceFile = serde_json::from_slice(&bytes).ok()?;
    if valid(&file, algebra, degree, dim) {
        Some(file.monomials)
    } else {
        None
    }
}

/// Best-effort store; failures are ignored (the cache is advisory).
pub fn store_slice(dir: &Path, algebra: &str, degree: usize, monomials: &[Vec<Factor>]) {
    let file = SliceFile {
        schema: CACHE_SCHEMA,
        order: PBW_ORDER_VERSION.to_string(),
        algebra: algebra.to_string(),
        degree,
        monomials: monomials.to_vec(),
    };
    if fs::create_dir_all(dir).is_err() {
        return;
    }
    if let Ok(json) = serde_json::to_vec(&file) {
        let _ = fs::write(slice_path(dir, algebra, degree), json);
    }
}
