use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use genecluster::{
    agmfi, ccia_groups, drop_missing_rows, eiagmfi, generate_synthetic, isodata, kmeans,
    load_delimited, seeding::group_means, seeding::group_target, silhouette, write_delimited,
    zscore_normalize, ClusteringResult, Init, SyntheticSpec,
};

use crate::args::{
    Algorithm, CompareArgs, GenerateArgs, InitKind, NormalizeArgs, RunArgs, SeedInspectArgs,
};
use crate::config::{parse_delimiter, Dataset, Method, RunConfig};
use crate::error::CliError;
use crate::report::{
    emit, summarize, write_comparison_table, write_run_table, ComparisonRow, JsonRecord,
    MethodQuality, RunRecord, Summary,
};

/// Runs one configured method once. Run `r` uses seed `seed + r`.
pub fn execute(
    data: &Dataset,
    cfg: &RunConfig,
    run: usize,
) -> Result<(RunRecord, ClusteringResult), CliError> {
    let seed = cfg.seed.wrapping_add(run as u64);
    let init = match cfg.method.init {
        InitKind::Random => Init::Random { seed },
        InitKind::Ccia => Init::Ccia,
        InitKind::File => Init::Centroids(
            cfg.init_centroids
                .clone()
                .ok_or_else(|| CliError::usage("--init file requires --init-file"))?,
        ),
    };
    let mat = &data.data;
    let result = match cfg.method.algorithm {
        Algorithm::Kmeans => kmeans(mat, cfg.k_init, &init, &cfg.lloyd)?,
        Algorithm::Isodata => isodata(mat, &cfg.isodata, &init)?,
        Algorithm::Agmfi => agmfi(mat, &cfg.agmfi, &init)?,
        Algorithm::Eiagmfi => eiagmfi(mat, &cfg.agmfi)?,
    };
    let quality = if result.assignment.nonempty_count() >= 2 {
        Some(silhouette(mat, &result.assignment)?.scaled_score)
    } else {
        None
    };
    let record = RunRecord {
        dataset: data.name.clone(),
        method: cfg.method.to_string(),
        k_init: cfg.k_init,
        run,
        seed,
        final_k: result.final_k,
        iterations: result.iterations,
        objective: result.objective(),
        quality,
    };
    Ok((record, result))
}

fn run_all(
    data: &Dataset,
    cfg: &RunConfig,
    mut on_result: impl FnMut(&RunRecord, &ClusteringResult),
) -> Result<Vec<RunRecord>, CliError> {
    (0..cfg.repeats)
        .map(|run| {
            let (record, result) = execute(data, cfg, run)?;
            on_result(&record, &result);
            Ok(record)
        })
        .collect()
}

pub fn cmd_run<W: Write, E: Write>(
    args: &RunArgs,
    out: &mut W,
    err: &mut E,
) -> Result<(), CliError> {
    let method = Method::new(args.algorithm, args.init)?;
    let load = args.input.load_options()?;
    let cfg = RunConfig::new(
        method,
        args.k_init,
        args.repeats,
        args.seed,
        &args.params,
        &load,
    )?;
    let datasets = args.input.datasets()?;

    let mut all = Vec::new();
    let mut json = Vec::new();
    let mut blocks = Vec::new();
    for data in &datasets {
        let records = run_all(data, &cfg, |record, result| {
            if args.events {
                for e in &result.events {
                    let _ = writeln!(err, "run {}: {e:?}", record.run);
                }
            }
        })?;
        let summary = summarize(&records);
        json.extend(records.iter().cloned().map(JsonRecord::Run));
        json.push(JsonRecord::Summary(summary.clone()));
        blocks.push((records.clone(), summary, (data.data.n(), data.data.m())));
        all.extend(records);
    }

    emit(out, args.format, &all, json, |out| {
        for (i, (records, summary, shape)) in blocks.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            write_run_table(&mut *out, records, summary, *shape)?;
        }
        Ok(())
    })
}

fn reference_final_k(summaries: &[Summary], methods: &[Method], k_init: usize) -> f64 {
    for alg in [Algorithm::Eiagmfi, Algorithm::Agmfi, Algorithm::Isodata] {
        if let Some(pos) = methods.iter().position(|m| m.algorithm == alg) {
            return summaries[pos].median_final_k;
        }
    }
    k_init as f64
}

pub fn cmd_compare<W: Write>(args: &CompareArgs, out: &mut W) -> Result<(), CliError> {
    let mut methods: Vec<Method> = Vec::new();
    for m in &args.algorithms {
        if !methods.contains(m) {
            methods.push(*m);
        }
    }
    if methods.len() < 2 {
        return Err(CliError::usage(
            "compare needs at least two distinct algorithms",
        ));
    }
    let load = args.input.load_options()?;
    let datasets = args.input.datasets()?;

    let mut all = Vec::new();
    let mut runs_json = Vec::new();
    let mut summaries_json = Vec::new();
    let mut rows = Vec::new();
    for data in &datasets {
        for &k_init in &args.k_init {
            let mut summaries = Vec::with_capacity(methods.len());
            for &method in &methods {
                let cfg =
                    RunConfig::new(method, k_init, args.repeats, args.seed, &args.params, &load)?;
                let records = run_all(data, &cfg, |_, _| {})?;
                let summary = summarize(&records);
                runs_json.extend(records.iter().cloned().map(JsonRecord::Run));
                summaries_json.push(JsonRecord::Summary(summary.clone()));
                summaries.push(summary);
                all.extend(records);
            }
            rows.push(ComparisonRow {
                dataset: data.name.clone(),
                k_init,
                final_k: reference_final_k(&summaries, &methods, k_init),
                quality: summaries
                    .iter()
                    .map(|s| MethodQuality {
                        method: s.method.clone(),
                        quality: s.median_quality,
                    })
                    .collect(),
            });
        }
    }

    let mut json = runs_json;
    json.extend(summaries_json);
    json.extend(rows.iter().cloned().map(JsonRecord::Comparison));
    emit(out, args.format, &all, json, |out| {
        write_comparison_table(out, &rows)
    })
}

pub fn cmd_seed_inspect<W: Write>(args: &SeedInspectArgs, out: &mut W) -> Result<(), CliError> {
    if args.k == 0 {
        return Err(CliError::usage("--k must be at least 1"));
    }
    for (i, data) in args.input.datasets()?.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        let mat = &data.data;
        let groups = ccia_groups(mat, args.k)?;
        let centroids = group_means(mat, &groups)?;
        writeln!(out, "dataset: {} ({} x {})", data.name, mat.n(), mat.m())?;
        writeln!(
            out,
            "k: {}  group target: {}  rows consumed: {}",
            args.k,
            group_target(mat.n(), args.k),
            groups.consumed
        )?;
        for (g, members) in groups.groups.iter().enumerate() {
            let labels: Vec<&str> = members.iter().map(|&r| mat.labels()[r].as_str()).collect();
            writeln!(
                out,
                "group {g} ({} members): {}",
                members.len(),
                labels.join(" ")
            )?;
        }
        writeln!(out, "centroids:")?;
        for (g, center) in centroids.iter().enumerate() {
            let values: Vec<String> = center.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{g}\t{}", values.join("\t"))?;
        }
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::usage(format!("cannot create {}: {e}", path.display())))
}

pub fn cmd_generate<W: Write>(args: &GenerateArgs, out: &mut W) -> Result<(), CliError> {
    let delimiter = parse_delimiter(&args.delimiter)?;
    let spec = SyntheticSpec {
        k_true: args.k,
        points_per_cluster: args.points,
        dims: args.dims,
        separation: args.separation,
        spread: args.spread,
        seed: args.seed,
    };
    let (mat, truth) = generate_synthetic(&spec).map_err(|e| CliError::usage(e.to_string()))?;
    match &args.output {
        Some(path) => {
            let mut f = create(path)?;
            write_delimited(&mut f, &mat, delimiter)?;
            f.flush()?;
        }
        None => write_delimited(&mut *out, &mat, delimiter)?,
    }
    if let Some(path) = &args.truth {
        let mut f = create(path)?;
        writeln!(f, "label{delimiter}cluster")?;
        for (label, cluster) in mat.labels().iter().zip(truth.labels()) {
            writeln!(f, "{label}{delimiter}{cluster}")?;
        }
        f.flush()?;
    }
    Ok(())
}

pub fn cmd_normalize<W: Write, E: Write>(
    args: &NormalizeArgs,
    out: &mut W,
    err: &mut E,
) -> Result<(), CliError> {
    let [path] = args.input.input.as_slice() else {
        return Err(CliError::usage("normalize takes exactly one --input"));
    };
    let opts = args.input.load_options()?;
    let raw = load_delimited(path, &opts)?;
    let clean = drop_missing_rows(&raw)?;
    let normalized = zscore_normalize(&clean)?;
    writeln!(
        err,
        "kept {} of {} rows ({} dropped for missing values), {} conditions",
        clean.n(),
        raw.n(),
        raw.n() - clean.n(),
        clean.m()
    )?;
    let delimiter = opts.delimiter;
    match &args.output {
        Some(p) => {
            let mut f = create(p)?;
            write_delimited(&mut f, &normalized, delimiter)?;
            f.flush()?;
        }
        None => write_delimited(&mut *out, &normalized, delimiter)?,
    }
    Ok(())
}
