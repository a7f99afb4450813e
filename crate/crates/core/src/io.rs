//! File formats: matrix and edge-list inputs, dendrogram outputs.
//!
//! Inputs: `matrix-csv` (square matrix, optional label header row),
//! `matrix-json` (`{"labels": [...], "matrix": [[...]]}`), and `edges-csv`
//! (`src,dst,weight` rows fed through the shortest-path closure). Outputs:
//! dendrogram JSON with explicit merge events, Newick with branch lengths
//! equal to height differences (so the height of two leaves' meeting point is
//! the ultrametric distance), and Graphviz dot with one cluster per level.
//! All emitters order blocks canonically, so output is byte-stable.

use std::collections::HashMap;

use serde_json::json;
use thiserror::Error;

use crate::dendrogram::Dendrogram;
use crate::metric::{default_labels, shortest_path_metric, FiniteMetricSpace, MetricError};
use crate::value::Dist;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, column, message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    MatrixCsv,
    MatrixJson,
    EdgesCsv,
}

impl std::str::FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "matrix-csv" => Ok(InputFormat::MatrixCsv),
            "matrix-json" => Ok(InputFormat::MatrixJson),
            "edges-csv" => Ok(InputFormat::EdgesCsv),
            other => Err(format!(
                "unknown input format {other:?} (expected matrix-csv, matrix-json or edges-csv)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DendrogramFormat {
    Json,
    Newick,
    Dot,
}

impl std::str::FromStr for DendrogramFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(DendrogramFormat::Json),
            "newick" => Ok(DendrogramFormat::Newick),
            "dot" => Ok(DendrogramFormat::Dot),
            other => Err(format!(
                "unknown dendrogram format {other:?} (expected json, newick or dot)"
            )),
        }
    }
}

/// Parse an input file into a validated metric space.
pub fn parse_space<V: Dist>(text: &str, format: InputFormat) -> Result<FiniteMetricSpace<V>, IoError> {
    match format {
        InputFormat::MatrixCsv => parse_matrix_csv(text),
        InputFormat::MatrixJson => parse_matrix_json(text),
        InputFormat::EdgesCsv => parse_edges_csv(text),
    }
}

fn split_rows(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(idx, line)| (idx + 1, line.split(',').map(str::trim).collect()))
        .collect()
}

fn parse_matrix_csv<V: Dist>(text: &str) -> Result<FiniteMetricSpace<V>, IoError> {
    let rows = split_rows(text);
    if rows.is_empty() {
        return Err(parse_err(1, 1, "empty matrix"));
    }
    let (labels, data_rows) = if V::parse_decimal(rows[0].1[0]).is_some() {
        (default_labels(rows[0].1.len()), &rows[..])
    } else {
        let labels: Vec<String> = rows[0].1.iter().map(|s| s.to_string()).collect();
        (labels, &rows[1..])
    };
    let mut matrix = Vec::with_capacity(data_rows.len());
    for (line, cells) in data_rows {
        let mut row = Vec::with_capacity(cells.len());
        for (col, cell) in cells.iter().enumerate() {
            let v = V::parse_decimal(cell)
                .ok_or_else(|| parse_err(*line, col + 1, format!("not a number: {cell:?}")))?;
            row.push(v);
        }
        if row.len() != labels.len() {
            return Err(parse_err(
                *line,
                1,
                format!("row has {} entries, expected {}", row.len(), labels.len()),
            ));
        }
        matrix.push(row);
    }
    Ok(FiniteMetricSpace::new(labels, matrix)?)
}

fn parse_matrix_json<V: Dist>(text: &str) -> Result<FiniteMetricSpace<V>, IoError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.column(), e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| parse_err(1, 1, "expected a JSON object"))?;
    let matrix_value = obj
        .get("matrix")
        .ok_or_else(|| parse_err(1, 1, "missing \"matrix\" field"))?;
    let rows = matrix_value
        .as_array()
        .ok_or_else(|| parse_err(1, 1, "\"matrix\" must be an array of rows"))?;
    let mut matrix = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| parse_err(1, 1, format!("matrix row {i} is not an array")))?;
        let mut out = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            let v = V::from_json(cell)
                .ok_or_else(|| parse_err(1, 1, format!("matrix entry ({i},{j}) is not a number")))?;
            out.push(v);
        }
        matrix.push(out);
    }
    let labels = match obj.get("labels") {
        Some(value) => {
            let arr = value
                .as_array()
                .ok_or_else(|| parse_err(1, 1, "\"labels\" must be an array"))?;
            arr.iter()
                .map(|v| {
                    v.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| parse_err(1, 1, "labels must be strings"))
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        None => default_labels(matrix.len()),
    };
    Ok(FiniteMetricSpace::new(labels, matrix)?)
}

fn parse_edges_csv<V: Dist>(text: &str) -> Result<FiniteMetricSpace<V>, IoError> {
    let rows = split_rows(text);
    if rows.is_empty() {
        return Err(parse_err(1, 1, "empty edge list"));
    }
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, u32> = HashMap::new();
    let mut edges: Vec<(u32, u32, V)> = Vec::new();
    let intern = |name: &str, labels: &mut Vec<String>, index: &mut HashMap<String, u32>| {
        if let Some(&i) = index.get(name) {
            return i;
        }
        let i = labels.len() as u32;
        labels.push(name.to_string());
        index.insert(name.to_string(), i);
        i
    };
    for (pos, (line, cells)) in rows.iter().enumerate() {
        if pos == 0 && cells.len() == 3 && V::parse_decimal(cells[2]).is_none() {
            continue; // header row such as src,dst,weight
        }
        if cells.len() != 3 {
            return Err(parse_err(*line, 1, "expected src,dst,weight"));
        }
        let w = V::parse_decimal(cells[2])
            .ok_or_else(|| parse_err(*line, 3, format!("not a number: {:?}", cells[2])))?;
        let a = intern(cells[0], &mut labels, &mut index);
        let b = intern(cells[1], &mut labels, &mut index);
        edges.push((a, b, w));
    }
    Ok(shortest_path_metric(labels, &edges)?)
}

/// Matrix CSV with a label header row; inverse of `parse_matrix_csv`.
pub fn matrix_csv<V: Dist>(space: &FiniteMetricSpace<V>) -> String {
    let mut out = String::new();
    out.push_str(&space.labels().join(","));
    out.push('\n');
    for i in 0..space.n() as u32 {
        let row: Vec<String> = (0..space.n() as u32)
            .map(|j| space.d(i, j).to_string())
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_json<V: Dist>(space: &FiniteMetricSpace<V>) -> String {
    let rows: Vec<serde_json::Value> = (0..space.n() as u32)
        .map(|i| {
            serde_json::Value::Array(
                (0..space.n() as u32)
                    .map(|j| space.d(i, j).json_value())
                    .collect(),
            )
        })
        .collect();
    let value = json!({ "labels": space.labels(), "matrix": rows });
    serde_json::to_string_pretty(&value).expect("matrix serializes")
}

/// A merge event: the blocks of the previous level that fused, the id of the
/// block they formed, and the height at which it happened. Leaves take ids
/// `0..n-1`; later blocks are numbered in order of appearance.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeEvent<V: Dist> {
    pub height: V,
    pub parents: Vec<usize>,
    pub child: usize,
}

pub fn merge_events<V: Dist>(dendrogram: &Dendrogram<V>) -> Vec<MergeEvent<V>> {
    let n = dendrogram.n();
    let mut point_id: Vec<usize> = (0..n).collect();
    let mut next_id = n;
    let mut events = Vec::new();
    for (height, level) in dendrogram
        .heights()
        .iter()
        .zip(dendrogram.levels())
        .skip(1)
    {
        for block in level.blocks() {
            let mut parents: Vec<usize> =
                block.iter().map(|&p| point_id[p as usize]).collect();
            parents.sort_unstable();
            parents.dedup();
            if parents.len() <= 1 {
                continue; // block carried over unchanged
            }
            let child = next_id;
            next_id += 1;
            for &p in block {
                point_id[p as usize] = child;
            }
            events.push(MergeEvent { height: height.clone(), parents, child });
        }
    }
    events
}

pub fn dendrogram_json<V: Dist>(dendrogram: &Dendrogram<V>, labels: &[String]) -> String {
    assert_eq!(labels.len(), dendrogram.n(), "label count mismatch");
    let heights: Vec<serde_json::Value> =
        dendrogram.heights().iter().map(|h| h.json_value()).collect();
    let levels: Vec<serde_json::Value> = dendrogram
        .levels()
        .iter()
        .map(|level| {
            serde_json::Value::Array(
                level
                    .blocks()
                    .iter()
                    .map(|block| json!(block))
                    .collect(),
            )
        })
        .collect();
    let merges: Vec<serde_json::Value> = merge_events(dendrogram)
        .into_iter()
        .map(|e| {
            json!({
                "height": e.height.json_value(),
                "parents": e.parents,
                "child": e.child,
            })
        })
        .collect();
    let value = json!({
        "labels": labels,
        "heights": heights,
        "levels": levels,
        "merges": merges,
    });
    serde_json::to_string_pretty(&value).expect("dendrogram serializes")
}

/// Rooted Newick tree. Each branch length is the height difference between a
/// node and its parent, so the cumulative height of the meeting point of two
/// leaves reproduces their ultrametric distance. Two points merging at 0.5
/// render as `(p:0.5,q:0.5);`.
pub fn dendrogram_newick<V: Dist>(dendrogram: &Dendrogram<V>, labels: &[String]) -> String {
    assert_eq!(labels.len(), dendrogram.n(), "label count mismatch");
    let n = dendrogram.n();
    if n == 1 {
        return format!("{};", labels[0]);
    }
    let events = merge_events(dendrogram);
    let mut heights: Vec<V> = (0..n).map(|_| V::zero()).collect();
    let mut children: Vec<Vec<usize>> = (0..n).map(|_| Vec::new()).collect();
    for e in &events {
        heights.push(e.height.clone());
        children.push(e.parents.clone());
    }
    let root = heights.len() - 1;
    fn write_node<V: Dist>(
        node: usize,
        n: usize,
        labels: &[String],
        heights: &[V],
        children: &[Vec<usize>],
        out: &mut String,
    ) {
        if node < n {
            out.push_str(&labels[node]);
            return;
        }
        out.push('(');
        for (i, &child) in children[node].iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_node(child, n, labels, heights, children, out);
            out.push(':');
            out.push_str(&heights[node].abs_diff(&heights[child]).decimal_display());
        }
        out.push(')');
    }
    let mut out = String::new();
    write_node(root, n, labels, &heights, &children, &mut out);
    out.push(';');
    out
}

/// Graphviz rendering: one cluster subgraph per level, blocks as nodes,
/// containment edges between consecutive levels.
pub fn dendrogram_dot<V: Dist>(dendrogram: &Dendrogram<V>, labels: &[String]) -> String {
    assert_eq!(labels.len(), dendrogram.n(), "label count mismatch");
    let mut out = String::from("graph dendrogram {\n  node [shape=box];\n");
    for (li, (height, level)) in dendrogram
        .heights()
        .iter()
        .zip(dendrogram.levels())
        .enumerate()
    {
        out.push_str(&format!("  subgraph cluster_level_{li} {{\n"));
        out.push_str(&format!("    label=\"t = {}\";\n", height.decimal_display()));
        for (bi, block) in level.blocks().iter().enumerate() {
            let text: Vec<&str> = block.iter().map(|&p| labels[p as usize].as_str()).collect();
            let text = text.join(", ").replace('"', "\\\"");
            out.push_str(&format!("    l{li}_b{bi} [label=\"{{{text}}}\"];\n"));
        }
        out.push_str("  }\n");
    }
    for li in 0..dendrogram.num_levels() - 1 {
        let level = &dendrogram.levels()[li];
        let next = &dendrogram.levels()[li + 1];
        for (bi, block) in level.blocks().iter().enumerate() {
            let target = next
                .blocks()
                .iter()
                .position(|b| block.iter().all(|p| b.contains(p)))
                .expect("levels are nested");
            out.push_str(&format!("  l{li}_b{bi} -- l{}_b{target};\n", li + 1));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrogram::ultrametric_to_dendrogram;
    use crate::instances::{barbell_k4, random_ultrametric};
    use crate::metric::Ultrametric;
    use crate::partition::Partition;

    #[test]
    fn csv_round_trip() {
        let text = "0,0.5\n0.5,0\n";
        let space: FiniteMetricSpace<f64> = parse_space(text, InputFormat::MatrixCsv).unwrap();
        assert_eq!(space.n(), 2);
        assert_eq!(*space.d(0, 1), 0.5);
        let emitted = matrix_csv(&space);
        let back: FiniteMetricSpace<f64> = parse_space(&emitted, InputFormat::MatrixCsv).unwrap();
        assert_eq!(back, space);
    }

    #[test]
    fn ragged_matrix_is_a_parse_error() {
        let text = "0,0.5\n0.5\n";
        let err = parse_space::<f64>(text, InputFormat::MatrixCsv).unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }));
    }

    #[test]
    fn metric_violations_surface() {
        let text = "0,1\n2,0\n";
        let err = parse_space::<f64>(text, InputFormat::MatrixCsv).unwrap_err();
        assert_eq!(err, IoError::Metric(MetricError::Asymmetry { i: 0, j: 1 }));
    }

    #[test]
    fn edges_csv_builds_shortest_paths() {
        let text = "src,dst,weight\na,b,1\nb,c,1\n";
        let space: FiniteMetricSpace<f64> = parse_space(text, InputFormat::EdgesCsv).unwrap();
        assert_eq!(space.labels(), &["a", "b", "c"]);
        assert_eq!(*space.d(0, 2), 2.0);
    }

    #[test]
    fn matrix_json_round_trip() {
        let pair = barbell_k4(&0.1f64);
        let text = matrix_json(&pair.perturbed);
        let back: FiniteMetricSpace<f64> = parse_space(&text, InputFormat::MatrixJson).unwrap();
        assert_eq!(back, pair.perturbed);
    }

    #[test]
    fn newick_two_points() {
        let d = crate::dendrogram::Dendrogram::new(
            vec![0.0, 0.5],
            vec![Partition::singletons(2), Partition::whole(2)],
        )
        .unwrap();
        let labels = vec!["p".to_string(), "q".to_string()];
        assert_eq!(dendrogram_newick(&d, &labels), "(p:0.5,q:0.5);");
    }

    /// Minimal Newick reader used only to validate the emitter.
    struct NwNode {
        name: Option<String>,
        length: f64,
        children: Vec<NwNode>,
    }

    fn parse_newick(text: &str) -> NwNode {
        fn node(chars: &mut std::iter::Peekable<std::str::Chars>) -> NwNode {
            let mut children = Vec::new();
            if chars.peek() == Some(&'(') {
                chars.next();
                loop {
                    children.push(node(chars));
                    match chars.next() {
                        Some(',') => continue,
                        Some(')') => break,
                        other => panic!("malformed newick near {other:?}"),
                    }
                }
            }
            let mut name = String::new();
            while let Some(&c) = chars.peek() {
                if c == ':' || c == ',' || c == ')' || c == ';' {
                    break;
                }
                name.push(c);
                chars.next();
            }
            let mut length = 0.0;
            if chars.peek() == Some(&':') {
                chars.next();
                let mut num = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() || c == '.' || c == '-' || c == 'e' {
                        num.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                length = num.parse().unwrap();
            }
            NwNode { name: (!name.is_empty()).then_some(name), length, children }
        }
        let mut chars = text.chars().peekable();
        let root = node(&mut chars);
        assert_eq!(chars.next(), Some(';'));
        root
    }

    /// Height above the leaves of every subtree (leaves at 0), plus the
    /// meeting height for each leaf pair, computed from branch lengths.
    fn meeting_heights(root: &NwNode) -> Vec<(String, String, f64)> {
        fn walk(node: &NwNode, out: &mut Vec<(String, String, f64)>) -> (f64, Vec<String>) {
            if node.children.is_empty() {
                return (0.0, vec![node.name.clone().expect("leaves are named")]);
            }
            let parts: Vec<(f64, Vec<String>)> = node
                .children
                .iter()
                .map(|c| {
                    let (h, leaves) = walk(c, out);
                    (h + c.length, leaves)
                })
                .collect();
            let height = parts[0].0;
            for (h, _) in &parts {
                assert!((h - height).abs() < 1e-9, "children at unequal heights");
            }
            for (i, (_, left)) in parts.iter().enumerate() {
                for (_, right) in &parts[i + 1..] {
                    for a in left {
                        for b in right {
                            out.push((a.clone(), b.clone(), height));
                        }
                    }
                }
            }
            (height, parts.into_iter().flat_map(|(_, l)| l).collect())
        }
        let mut out = Vec::new();
        walk(root, &mut out);
        out
    }

    #[test]
    fn newick_reconstructs_the_ultrametric() {
        for seed in [3u64, 11, 27] {
            let u = random_ultrametric(6, seed);
            let d = ultrametric_to_dendrogram(&u);
            let text = dendrogram_newick(&d, u.space().labels());
            let tree = parse_newick(&text);
            let pairs = meeting_heights(&tree);
            assert_eq!(pairs.len(), 6 * 5 / 2);
            for (a, b, h) in pairs {
                let i = u.space().index_of(&a).unwrap();
                let j = u.space().index_of(&b).unwrap();
                assert!(
                    (h - u.d(i, j)).abs() < 1e-9,
                    "pair ({a},{b}): tree height {h} vs ultrametric {}",
                    u.d(i, j)
                );
            }
        }
    }

    #[test]
    fn merge_events_are_consistent() {
        let m = vec![
            vec![0.0, 1.0, 2.0, 2.0],
            vec![1.0, 0.0, 2.0, 2.0],
            vec![2.0, 2.0, 0.0, 1.0],
            vec![2.0, 2.0, 1.0, 0.0],
        ];
        let u = Ultrametric::try_new(
            FiniteMetricSpace::new(default_labels(4), m).unwrap(),
        )
        .unwrap();
        let d = ultrametric_to_dendrogram(&u);
        let events = merge_events(&d);
        assert_eq!(events.len(), 3);
        assert_eq!(events[0].parents, vec![0, 1]);
        assert_eq!(events[0].child, 4);
        assert_eq!(events[1].parents, vec![2, 3]);
        assert_eq!(events[1].child, 5);
        assert_eq!(events[2].parents, vec![4, 5]);
        assert_eq!(events[2].child, 6);
    }

    #[test]
    fn dendrogram_json_contains_heights() {
        let pair = barbell_k4(&0.1f64);
        let d = crate::unchaining::sl_alpha_dendrogram(&pair.perturbed, &crate::alpha::Alpha::integer(1));
        let text = dendrogram_json(&d, pair.perturbed.labels());
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["heights"], json!([0.0, 1.0, 2.1]));
        assert_eq!(value["levels"][0].as_array().unwrap().len(), 8);
    }

    #[test]
    fn dot_output_is_nested() {
        let pair = barbell_k4(&0.1f64);
        let d = crate::linkage::standard_linkage_dendrogram(&pair.base, crate::linkage::LinkageKind::Single);
        let text = dendrogram_dot(&d, pair.base.labels());
        assert!(text.contains("subgraph cluster_level_0"));
        assert!(text.contains("--"));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn singleton_dendrogram_outputs() {
        let d = crate::dendrogram::Dendrogram::new(vec![0.0], vec![Partition::singletons(1)]).unwrap();
        let labels = vec!["only".to_string()];
        assert_eq!(dendrogram_newick(&d, &labels), "only;");
        let text = dendrogram_json(&d, &labels);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["heights"], json!([0.0]));
        assert_eq!(value["merges"], json!([]));
    }
}
