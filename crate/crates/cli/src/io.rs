//! Input loading, argument parsing helpers and atomic output.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use lindquant::classical::catalog;
use lindquant::{Complex64, DensityMatrix, GridSpec, Lindbladian, SystemFile};
use serde::de::DeserializeOwned;
use tempfile::NamedTempFile;

/// Writes `contents` to `out` via a temporary file in the same directory, or to stdout.
pub fn write_output(out: Option<&Path>, contents: &str) -> Result<()> {
    let Some(path) = out else {
        std::io::stdout().write_all(contents.as_bytes())?;
        return Ok(());
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}

/// `name=value` catalog parameter.
pub fn parse_param(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("parameter `{k}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn params_map(params: &[(String, f64)]) -> BTreeMap<String, f64> {
    params.iter().cloned().collect()
}

/// A system from a file or from the catalog.
pub fn load_system(file: Option<&Path>, name: Option<&str>, params: &[(String, f64)]) -> Result<SystemFile> {
    match (file, name) {
        (Some(path), None) => {
            if !params.is_empty() {
                bail!("--param only applies to --catalog systems");
            }
            read_json(path)
        }
        (None, Some(name)) => {
            let e = catalog(name, &params_map(params))?;
            Ok(SystemFile {
                system: e.system,
                name: Some(e.name),
                params: e.params,
            })
        }
        _ => bail!("give exactly one of --system or --catalog"),
    }
}

/// A generator from a file or the catalog's printed form; validated.
pub fn load_lindbladian(file: Option<&Path>, name: Option<&str>, params: &[(String, f64)]) -> Result<Lindbladian> {
    let l: Lindbladian = match (file, name) {
        (Some(path), None) => {
            if !params.is_empty() {
                bail!("--param only applies to --catalog generators");
            }
            read_json(path)?
        }
        (None, Some(name)) => catalog(name, &params_map(params))?
            .published
            .ok_or_else(|| anyhow!("catalog system `{name}` has no printed generator for these parameters"))?,
        _ => bail!("give exactly one of --lindblad or --catalog"),
    };
    l.validate()?;
    Ok(l)
}

/// `xmin:xmax:nx[,ymin:ymax:ny]`; a single axis is used for both.
pub fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    fn axis(a: &str) -> std::result::Result<(f64, f64, usize), String> {
        let parts: Vec<&str> = a.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("axis `{a}` is not lo:hi:n"));
        };
        let lo: f64 = lo.trim().parse().map_err(|e| format!("axis `{a}`: {e}"))?;
        let hi: f64 = hi.trim().parse().map_err(|e| format!("axis `{a}`: {e}"))?;
        let n: usize = n.trim().parse().map_err(|e| format!("axis `{a}`: {e}"))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) || n < 2 {
            return Err(format!("axis `{a}` needs finite lo < hi and at least 2 points"));
        }
        Ok((lo, hi, n))
    }
    let (x, y) = match s.split_once(',') {
        Some((x, y)) => (axis(x)?, axis(y)?),
        None => {
            let x = axis(s)?;
            (x, x)
        }
    };
    Ok(GridSpec {
        x_min: x.0,
        x_max: x.1,
        nx: x.2,
        y_min: y.0,
        y_max: y.1,
        ny: y.2,
    })
}

/// `vacuum`, `fock:K`, `coherent:RE[,IM]` or a density-matrix JSON file.
pub fn initial_state(spec: &str, dim: usize) -> Result<DensityMatrix> {
    if spec == "vacuum" {
        return Ok(DensityMatrix::vacuum(dim));
    }
    if let Some(k) = spec.strip_prefix("fock:") {
        let k: usize = k.parse().with_context(|| format!("initial state `{spec}`"))?;
        if k >= dim {
            bail!("Fock state {k} does not fit in dimension {dim}");
        }
        return Ok(DensityMatrix::fock(dim, k));
    }
    if let Some(a) = spec.strip_prefix("coherent:") {
        let (re, im) = a.split_once(',').unwrap_or((a, "0"));
        let re: f64 = re.trim().parse().with_context(|| format!("initial state `{spec}`"))?;
        let im: f64 = im.trim().parse().with_context(|| format!("initial state `{spec}`"))?;
        return Ok(DensityMatrix::coherent(dim, Complex64::new(re, im)));
    }
    let rho = load_state(Path::new(spec))?;
    if rho.dim() != dim {
        bail!("initial state has dimension {}, expected {dim}", rho.dim());
    }
    Ok(rho)
}

/// A density matrix from either a bare state file or a `steady` output.
pub fn load_state(path: &Path) -> Result<DensityMatrix> {
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum StateFile {
        Wrapped { state: DensityMatrix },
        Bare(DensityMatrix),
    }
    let rho = match read_json::<StateFile>(path)? {
        StateFile::Wrapped { state } | StateFile::Bare(state) => state,
    };
    rho.validate(1e-8, 1e-8).with_context(|| format!("state in {}", path.display()))?;
    Ok(rho)
}
