use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use hamdec_core::ilp::export_lp;
use hamdec_core::multigraph::decomposition_key;
use hamdec_core::oracle::{enumerate_decompositions, Decomposition};
use hamdec_core::orchestrator::run;
use hamdec_core::{
    generate_instance, Algorithm, HeuristicParams, Instance, InstanceKind, InstanceSpec, Verdict,
};
use serde::Serialize;

use crate::files::{
    append_rows, read_instance, witness_path, write_json, InstanceFile, ResultRow, WitnessFile,
};
use crate::CliError;

#[derive(Clone, Debug)]
pub struct GenerateArgs {
    pub kind: InstanceKind,
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub directed: bool,
    pub out_dir: PathBuf,
}

#[derive(Serialize)]
struct Manifest {
    generator: String,
    n: usize,
    directed: bool,
    base_seed: u64,
    instances: Vec<ManifestEntry>,
}

#[derive(Serialize)]
struct ManifestEntry {
    file: String,
    seed: u64,
}

pub fn instance_id(kind: InstanceKind, n: usize, directed: bool, index: usize) -> String {
    let d = if directed { "d" } else { "u" };
    format!("{kind}_{d}_n{n}_{index:04}")
}

/// Writes `count` instances with seeds `seed + index` and a `manifest.json`.
pub fn cmd_generate(args: &GenerateArgs) -> Result<Vec<PathBuf>, CliError> {
    InstanceSpec::new(args.kind, args.n, args.directed, args.seed).validate()?;
    fs::create_dir_all(&args.out_dir).map_err(|e| CliError::io(&args.out_dir, e))?;
    let mut paths = Vec::with_capacity(args.count);
    let mut entries = Vec::with_capacity(args.count);
    for index in 0..args.count {
        let seed = args.seed.wrapping_add(index as u64);
        let inst = generate_instance(InstanceSpec::new(args.kind, args.n, args.directed, seed))?;
        let file = format!(
            "{}.json",
            instance_id(args.kind, args.n, args.directed, index)
        );
        let path = args.out_dir.join(&file);
        write_json(
            &path,
            &InstanceFile::from_instance(&inst, Some(args.kind.to_string()), Some(seed)),
        )?;
        entries.push(ManifestEntry { file, seed });
        paths.push(path);
    }
    let manifest = Manifest {
        generator: args.kind.to_string(),
        n: args.n,
        directed: args.directed,
        base_seed: args.seed,
        instances: entries,
    };
    write_json(&args.out_dir.join("manifest.json"), &manifest)?;
    Ok(paths)
}

#[derive(Clone, Debug)]
pub struct SolveArgs {
    pub instance: PathBuf,
    pub algorithm: Algorithm,
    pub time_limit_ms: u64,
    pub seed: u64,
    pub attempt_limit: usize,
    pub depth_limit: usize,
    pub export_lp: Option<PathBuf>,
    pub out_csv: Option<PathBuf>,
    /// where the witness sidecar goes; defaults to the CSV's directory, then the instance's
    pub witness_dir: Option<PathBuf>,
    /// write `time_ms = 0` so rows compare byte for byte
    pub no_timing: bool,
}

impl SolveArgs {
    pub fn new(instance: impl Into<PathBuf>, algorithm: Algorithm) -> Self {
        let d = HeuristicParams::default();
        SolveArgs {
            instance: instance.into(),
            algorithm,
            time_limit_ms: 60_000,
            seed: 0,
            attempt_limit: d.attempt_limit,
            depth_limit: d.depth_limit,
            export_lp: None,
            out_csv: None,
            witness_dir: None,
            no_timing: false,
        }
    }

    pub fn params(&self) -> HeuristicParams {
        HeuristicParams {
            attempt_limit: self.attempt_limit,
            depth_limit: self.depth_limit,
            seed: self.seed,
            ..HeuristicParams::default()
        }
    }
}

pub(crate) struct Solved {
    pub row: ResultRow,
    pub witness: Option<WitnessFile>,
    pub lp: Option<String>,
}

pub(crate) struct Job<'a> {
    pub inst: &'a Instance,
    pub instance_id: String,
    pub generator: String,
    pub algorithm: Algorithm,
    pub params: HeuristicParams,
    pub budget: Duration,
    pub no_timing: bool,
    pub want_lp: bool,
}

pub(crate) fn solve_instance(job: Job<'_>) -> Result<Solved, CliError> {
    let Job {
        inst,
        instance_id,
        generator,
        algorithm,
        params,
        budget,
        no_timing,
        want_lp,
    } = job;
    let result = run(algorithm, &inst.graph, &inst.x, &inst.y, &params, budget)?;
    let witness = match &result.verdict {
        Verdict::Feasible { z, w } => Some(WitnessFile {
            z: z.order().to_vec(),
            w: w.order().to_vec(),
        }),
        _ => None,
    };
    let row = ResultRow {
        instance_id,
        generator,
        n: inst.graph.n(),
        directed: inst.graph.is_directed(),
        algorithm: algorithm.to_string(),
        seed: params.seed,
        verdict: result.verdict.as_str().to_string(),
        iterations: result.iterations,
        cuts_added: result.cuts_added,
        time_ms: if no_timing {
            0
        } else {
            result.elapsed.as_millis() as u64
        },
        multi_edges: inst.graph.multi_edge_count(),
    };
    let lp = want_lp.then(|| export_lp(&result.model));
    Ok(Solved { row, witness, lp })
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned())
}

/// Solves one instance file, appends its row to `out_csv` and writes the
/// witness sidecar and LP export when requested.
pub fn cmd_solve(args: &SolveArgs) -> Result<ResultRow, CliError> {
    let file = read_instance(&args.instance)?;
    let inst = file.to_instance()?;
    if !args.algorithm.supports(file.directed) {
        let kind = if file.directed {
            "directed"
        } else {
            "undirected"
        };
        return Err(CliError::Usage(format!(
            "{} does not run on {kind} instances",
            args.algorithm
        )));
    }
    let params = args.params();
    params.validate()?;
    let id = file_stem(&args.instance);
    let solved = solve_instance(Job {
        inst: &inst,
        instance_id: id.clone(),
        generator: file.generator.clone().unwrap_or_else(|| "file".into()),
        algorithm: args.algorithm,
        params,
        budget: Duration::from_millis(args.time_limit_ms),
        no_timing: args.no_timing,
        want_lp: args.export_lp.is_some(),
    })?;
    if let (Some(path), Some(lp)) = (&args.export_lp, &solved.lp) {
        fs::write(path, lp).map_err(|e| CliError::io(path, e))?;
    }
    if let Some(witness) = &solved.witness {
        let dir = args
            .witness_dir
            .clone()
            .or_else(|| {
                args.out_csv
                    .as_ref()
                    .and_then(|p| p.parent())
                    .map(Path::to_path_buf)
            })
            .or_else(|| args.instance.parent().map(Path::to_path_buf))
            .unwrap_or_default();
        write_json(&witness_path(&dir, &id, args.algorithm.as_str()), witness)?;
    }
    if let Some(path) = &args.out_csv {
        append_rows(path, std::slice::from_ref(&solved.row))?;
    }
    Ok(solved.row)
}

#[derive(Debug)]
pub struct OracleReport {
    pub count: usize,
    pub witness: Option<Decomposition>,
}

impl std::fmt::Display for OracleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let noun = if self.count == 1 {
            "decomposition"
        } else {
            "decompositions"
        };
        match &self.witness {
            Some(d) => write!(
                f,
                "{} {noun}; second exists\nz = {:?}\nw = {:?}",
                self.count,
                d.z.order(),
                d.w.order()
            ),
            None => write!(f, "{} {noun}; second does not exist", self.count),
        }
    }
}

pub fn cmd_oracle(path: &Path) -> Result<OracleReport, CliError> {
    let inst = read_instance(path)?.to_instance()?;
    let all = enumerate_decompositions(&inst.graph)?;
    let given = decomposition_key(inst.x.edge_multiset(), inst.y.edge_multiset());
    let witness = all
        .iter()
        .find(|d| decomposition_key(d.z.edge_multiset(), d.w.edge_multiset()) != given);
    Ok(OracleReport {
        count: all.len(),
        witness: witness.cloned(),
    })
}
