#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Discrepancies by dense Gauss-Jordan elimination on the full intersection
/// matrix of the chain. Shares no code with the library's tridiagonal solver.
pub fn dense_discrepancies(entries: &[u64]) -> Vec<BigRational> {
    let k = entries.len();
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    // rows: [G_i·G_1 .. G_i·G_k | −K·G_i]
    let mut m: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row = vec![BigRational::zero(); k + 1];
            row[i] = int(-(entries[i] as i64));
            if i > 0 {
                row[i - 1] = BigRational::one();
            }
            if i + 1 < k {
                row[i + 1] = BigRational::one();
            }
            row[k] = int(2 - entries[i] as i64);
            row
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r][col].is_zero()).expect("negative definite, so nonsingular");
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *v = &*v - &(&factor * p);
                }
            }
        }
    }
    m.into_iter().map(|row| row[k].clone()).collect()
}

pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wahlcheck")).args(args).output().expect("binary runs")
}

pub fn run_cli_on(path: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["verify", path.to_str().expect("utf-8 path")];
    args.extend_from_slice(extra);
    run_cli(&args)
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// A copy of a shipped construction with chain entry `index` (0-based) changed by `delta`.
pub fn perturbed_chain_file(json: &str, index: usize, delta: i64) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(json).expect("shipped file parses");
    let entry = &mut v["chain"]["entries"][index];
    let old = entry.as_i64().expect("integer entry");
    *entry = serde_json::Value::from(old + delta);
    v
}
