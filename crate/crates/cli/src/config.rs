//! Resolved run configuration: which method, on which data, with which
//! parameters.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use genecluster::{
    drop_missing_rows, generate_synthetic, load_delimited, zscore_normalize, AgmfiParams,
    CentroidSet, ExpressionMatrix, IsodataParams, KMeansParams, LoadOptions, SyntheticSpec,
};

use crate::args::{Algorithm, InitKind, InputArgs, ParamArgs};
use crate::error::CliError;

/// An algorithm together with its initialization, written `ALGORITHM[:INIT]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Method {
    pub algorithm: Algorithm,
    pub init: InitKind,
}

impl Method {
    pub fn new(algorithm: Algorithm, init: Option<InitKind>) -> Result<Self, CliError> {
        let init = init.unwrap_or(match algorithm {
            Algorithm::Eiagmfi => InitKind::Ccia,
            _ => InitKind::Random,
        });
        if algorithm == Algorithm::Eiagmfi && init != InitKind::Ccia {
            return Err(CliError::usage(
                "eiagmfi is the CCIA-seeded variant and only accepts --init ccia",
            ));
        }
        Ok(Self { algorithm, init })
    }

    fn default_init(&self) -> bool {
        Method::new(self.algorithm, None)
            .map(|m| m.init == self.init)
            .unwrap_or(false)
    }

    pub fn is_adaptive(&self) -> bool {
        self.algorithm != Algorithm::Kmeans
    }
}

fn algorithm_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Kmeans => "kmeans",
        Algorithm::Isodata => "isodata",
        Algorithm::Agmfi => "agmfi",
        Algorithm::Eiagmfi => "eiagmfi",
    }
}

fn init_name(i: InitKind) -> &'static str {
    match i {
        InitKind::Random => "random",
        InitKind::Ccia => "ccia",
        InitKind::File => "file",
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(algorithm_name(self.algorithm))?;
        if !self.default_init() {
            write!(f, ":{}", init_name(self.init))?;
        }
        Ok(())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use clap::ValueEnum;
        let (alg, init) = match s.split_once(':') {
            Some((a, i)) => (a, Some(i)),
            None => (s, None),
        };
        let algorithm = Algorithm::from_str(alg.trim(), true)?;
        let init = init
            .map(|i| InitKind::from_str(i.trim(), true))
            .transpose()?;
        Method::new(algorithm, init).map_err(|e| e.to_string())
    }
}

/// `--synthetic` value: comma-separated `key=value` overrides of the default
/// benchmark (k, points, dims, separation, spread, seed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticArg(pub SyntheticSpec);

impl FromStr for SyntheticArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut spec = SyntheticSpec::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got '{part}'"))?;
            let bad = |e: &dyn fmt::Display| format!("{key}: {e}");
            match key.trim() {
                "k" => spec.k_true = value.parse().map_err(|e| bad(&e))?,
                "points" => spec.points_per_cluster = value.parse().map_err(|e| bad(&e))?,
                "dims" => spec.dims = value.parse().map_err(|e| bad(&e))?,
                "separation" => spec.separation = value.parse().map_err(|e| bad(&e))?,
                "spread" => spec.spread = value.parse().map_err(|e| bad(&e))?,
                "seed" => spec.seed = value.parse().map_err(|e| bad(&e))?,
                other => return Err(format!("unknown synthetic key '{other}'")),
            }
        }
        Ok(SyntheticArg(spec))
    }
}

impl fmt::Display for SyntheticArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.0;
        write!(
            f,
            "synthetic:k={},points={},dims={},separation={},spread={},seed={}",
            s.k_true, s.points_per_cluster, s.dims, s.separation, s.spread, s.seed
        )
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub data: ExpressionMatrix,
}

pub fn parse_delimiter(text: &str) -> Result<char, CliError> {
    match text {
        "\\t" | "tab" => return Ok('\t'),
        _ => {}
    }
    let mut chars = text.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(CliError::usage(format!(
            "delimiter must be a single character, got '{text}'"
        ))),
    }
}

impl InputArgs {
    pub fn load_options(&self) -> Result<LoadOptions, CliError> {
        let mut opts = LoadOptions::default()
            .with_delimiter(parse_delimiter(&self.delimiter)?)
            .with_header(self.header);
        if !self.missing_tokens.is_empty() {
            opts = opts.with_missing_tokens(self.missing_tokens.iter().cloned());
        }
        Ok(opts)
    }

    /// Loads every requested dataset. Files go through missing-row removal
    /// and, with `--normalize`, per-gene z-scoring. Without any input the
    /// default synthetic benchmark is used.
    pub fn datasets(&self) -> Result<Vec<Dataset>, CliError> {
        let opts = self.load_options()?;
        let mut out = Vec::new();
        for path in &self.input {
            let data = drop_missing_rows(&load_delimited(path, &opts)?)?;
            out.push(Dataset {
                name: dataset_name(path),
                data,
            });
        }
        let mut synthetic = self.synthetic.clone();
        if self.input.is_empty() && synthetic.is_empty() {
            synthetic.push(SyntheticArg(SyntheticSpec::default()));
        }
        for arg in synthetic {
            let (data, _) = generate_synthetic(&arg.0)?;
            out.push(Dataset {
                name: arg.to_string(),
                data,
            });
        }
        if self.normalize {
            for d in &mut out {
                d.data = zscore_normalize(&d.data)?;
            }
        }
        Ok(out)
    }
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Everything needed to execute one method at one initial K.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub method: Method,
    pub k_init: usize,
    pub repeats: usize,
    pub seed: u64,
    pub lloyd: KMeansParams,
    pub isodata: IsodataParams,
    pub agmfi: AgmfiParams,
    pub init_centroids: Option<CentroidSet>,
}

impl RunConfig {
    pub fn new(
        method: Method,
        k_init: usize,
        repeats: usize,
        seed: u64,
        params: &ParamArgs,
        load: &LoadOptions,
    ) -> Result<Self, CliError> {
        if repeats == 0 {
            return Err(CliError::usage("--repeats must be at least 1"));
        }
        if k_init == 0 {
            return Err(CliError::usage("--k must be at least 1"));
        }
        let lloyd = KMeansParams {
            max_iter: params.lloyd_max_iter,
            tol: params.tol,
        };
        let init_centroids = match (method.init, &params.init_file) {
            (InitKind::File, Some(path)) => {
                let m = drop_missing_rows(&load_delimited(path, load)?)?;
                if m.n() != k_init {
                    return Err(CliError::usage(format!(
                        "--init-file holds {} centroids but --k is {k_init}",
                        m.n()
                    )));
                }
                Some(CentroidSet::new(m.data().to_vec(), m.m())?)
            }
            (InitKind::File, None) => {
                return Err(CliError::usage("--init file requires --init-file"));
            }
            _ => None,
        };
        let isodata = IsodataParams {
            k_init,
            theta_n: params.theta_n,
            theta_s: params.theta_s,
            theta_c: params.theta_c,
            max_iter: params.max_iter,
            lloyd,
        };
        let agmfi = AgmfiParams {
            k_init,
            min_cluster_size: params.min_cluster_size,
            max_iter: params.max_iter,
            split_factor: params.split_factor,
            merge_multiplier: params.merge_multiplier,
            lloyd,
        };
        isodata.validate()?;
        agmfi.validate()?;
        Ok(Self {
            method,
            k_init,
            repeats,
            seed,
            lloyd,
            isodata,
            agmfi,
            init_centroids,
        })
    }
}
