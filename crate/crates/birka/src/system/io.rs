//! Directory format: `A.mtx`, `N1.mtx` .. `Nm.mtx`, `B.mtx`, `C.mtx` and `system.txt`
//! holding `key = value` lines for `n`, `m`, `p` and `label`.

use super::BilinearSystem;
use crate::linalg::io::{read_matrix_market, write_matrix_market};
use crate::{Error, Result};
use std::collections::HashMap;
use std::fs;
use std::path::Path;

pub const METADATA_FILE: &str = "system.txt";

pub fn write_system(dir: &Path, sys: &BilinearSystem) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_matrix_market(&dir.join("A.mtx"), sys.a())?;
    for (k, nk) in sys.ns().iter().enumerate() {
        write_matrix_market(&dir.join(format!("N{}.mtx", k + 1)), nk)?;
    }
    write_matrix_market(&dir.join("B.mtx"), sys.b())?;
    write_matrix_market(&dir.join("C.mtx"), sys.c())?;
    let meta = format!("n = {}\nm = {}\np = {}\nlabel = {}\n", sys.n(), sys.m(), sys.p(), sys.label);
    fs::write(dir.join(METADATA_FILE), meta)?;
    Ok(())
}

pub fn read_system(dir: &Path) -> Result<BilinearSystem> {
    let text = fs::read_to_string(dir.join(METADATA_FILE))?;
    let mut meta = HashMap::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{METADATA_FILE}: expected key = value, got {line:?}")))?;
        meta.insert(k.trim().to_string(), v.trim().to_string());
    }
    let count = |key: &str| -> Result<usize> {
        meta.get(key)
            .ok_or_else(|| Error::Parse(format!("{METADATA_FILE}: missing {key}")))?
            .parse()
            .map_err(|_| Error::Parse(format!("{METADATA_FILE}: {key} is not a count")))
    };
    let (n, m, p) = (count("n")?, count("m")?, count("p")?);
    let a = read_matrix_market(&dir.join("A.mtx"))?;
    let ns = (1..=m).map(|k| read_matrix_market(&dir.join(format!("N{k}.mtx")))).collect::<Result<Vec<_>>>()?;
    let b = read_matrix_market(&dir.join("B.mtx"))?;
    let c = read_matrix_market(&dir.join("C.mtx"))?;
    let sys = BilinearSystem::new(a, ns, b, c)?;
    if (sys.n(), sys.m(), sys.p()) != (n, m, p) {
        return Err(Error::Dimension(format!(
            "metadata says (n, m, p) = ({n}, {m}, {p}) but matrices give ({}, {}, {})",
            sys.n(),
            sys.m(),
            sys.p()
        )));
    }
    Ok(sys.with_label(meta.get("label").cloned().unwrap_or_default()))
}
