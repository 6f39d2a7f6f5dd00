//! Graph, pattern and kernel sources: a file path, a shorthand such as `C4` or
//! `K_{2,3}`, or an inline generator spec `{"family":"gnp",...}`.

use std::path::Path;

use homdens::exact::parse_ratio;
use homdens::generators::{generate, shorthand, GenSpec};
use homdens::homcount::{Kernel, KernelFile};
use homdens::io::{self, GraphFile};
use homdens::{Graph, PatternGraph};
use num_rational::BigRational;

use crate::Failure;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn located(src: &str) -> impl Fn(homdens::Error) -> Failure + '_ {
    move |e| Failure::Usage(format!("{src}: {e}"))
}

fn spec(src: &str, seed: u64) -> Result<GenSpec, Failure> {
    let mut v: serde_json::Value =
        serde_json::from_str(src).map_err(|e| Failure::Usage(format!("generator spec: {e}")))?;
    if let Some(obj) = v.as_object_mut() {
        obj.entry("seed").or_insert(seed.into());
    }
    serde_json::from_value(v).map_err(|e| Failure::Usage(format!("generator spec: {e}")))
}

pub fn graph_file(src: &str, seed: u64) -> Result<GraphFile, Failure> {
    let src_t = src.trim();
    if src_t.starts_with('{') {
        let g = generate(&spec(src_t, seed)?).map_err(located(src))?;
        return Ok(GraphFile::from_graph(&g));
    }
    let path = Path::new(src);
    if path.is_file() {
        return io::parse(&read(path)?).map_err(located(src));
    }
    match shorthand(src) {
        Ok(g) => Ok(GraphFile::from_graph(&g)),
        Err(_) => Err(Failure::Usage(format!(
            "{src}: neither a readable file, a shorthand nor a generator spec"
        ))),
    }
}

pub fn graph(src: &str, seed: u64) -> Result<Graph, Failure> {
    graph_file(src, seed)?.graph().map_err(located(src))
}

pub fn gen_spec(src: &str, seed: u64) -> Result<Option<GenSpec>, Failure> {
    if src.trim().starts_with('{') {
        spec(src.trim(), seed).map(Some)
    } else {
        Ok(None)
    }
}

pub fn pattern(src: &str, seed: u64) -> Result<PatternGraph, Failure> {
    graph_file(src, seed)?.pattern().map_err(located(src))
}

pub fn kernel(src: &str) -> Result<Kernel, Failure> {
    let path = Path::new(src);
    if path.is_file() {
        let file: KernelFile = serde_json::from_str(&read(path)?)
            .map_err(|e| Failure::Usage(format!("{src}: line {}: {e}", e.line())))?;
        return file.into_kernel().map_err(located(src));
    }
    let p = ratio(src, "kernel")?;
    Kernel::constant(p).map_err(located(src))
}

pub fn ratio(src: &str, what: &str) -> Result<BigRational, Failure> {
    parse_ratio(src)
        .ok_or_else(|| Failure::Usage(format!("{what}: cannot parse {src:?} as a rational")))
}

/// `0-1,1-2/2-3` into edge lists.
pub fn parts(src: &str) -> Result<Vec<Vec<(usize, usize)>>, Failure> {
    let bad = || {
        Failure::Usage(format!(
            "parts: cannot parse {src:?}; expected e.g. 0-1,1-2/2-3"
        ))
    };
    src.split('/')
        .map(|part| {
            part.split(',')
                .map(|e| {
                    let (u, v) = e.trim().split_once('-').ok_or_else(bad)?;
                    Ok((
                        u.trim().parse().map_err(|_| bad())?,
                        v.trim().parse().map_err(|_| bad())?,
                    ))
                })
                .collect()
        })
        .collect()
}
