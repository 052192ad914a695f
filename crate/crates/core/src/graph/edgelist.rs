use super::{Edge, Graph, GraphError, Node};

/// `u v [w]` per line; `#` starts a comment. Node ids are non-negative
/// integers and the node set is `0..=max id`.
pub(super) fn parse(input: &str) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let mut max_id: Option<usize> = None;
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(syntax(line_no, format!("expected `u v [w]`, found {} fields", fields.len())));
        }
        let u = parse_id(fields[0], line_no)?;
        let v = parse_id(fields[1], line_no)?;
        let weight = match fields.get(2) {
            Some(w) => w
                .parse::<f64>()
                .map_err(|_| syntax(line_no, format!("invalid weight `{w}`")))?,
            None => 1.0,
        };
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push(Edge { u, v, weight });
    }
    let n = max_id.map_or(0, |m| m + 1);
    let nodes = (0..n).map(Node::new).collect();
    Graph::new(nodes, edges, Vec::new())
}

fn parse_id(field: &str, line: usize) -> Result<usize, GraphError> {
    field
        .parse::<usize>()
        .map_err(|_| syntax(line, format!("invalid node id `{field}`")))
}

fn syntax(line: usize, message: String) -> GraphError {
    GraphError::Syntax { line, message }
}
