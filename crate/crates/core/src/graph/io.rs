//! JSON and DOT forms.

use serde::{Deserialize, Serialize};

use super::{GraphError, MetricGraph, VertexLabel};

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: usize,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<VertexJson>,
    edges: Vec<(usize, usize, u8)>,
    base: usize,
}

impl MetricGraph {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.raw()).expect("graph JSON")
    }

    /// `{vertices:[{id,label}], edges:[[u,v,w]], base}`, pretty-printed.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.raw()).expect("graph JSON")
    }

    fn raw(&self) -> GraphJson {
        GraphJson {
            vertices: self
                .labels()
                .iter()
                .enumerate()
                .map(|(id, l)| VertexJson { id, label: l.to_string() })
                .collect(),
            edges: self.edges().collect(),
            base: self.base(),
        }
    }

    pub fn from_json(text: &str) -> Result<MetricGraph, GraphError> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        let mut labels = Vec::with_capacity(raw.vertices.len());
        for (i, v) in raw.vertices.into_iter().enumerate() {
            if v.id != i {
                return Err(GraphError::Parse(format!("vertex ids must be 0..n in order, found {} at {i}", v.id)));
            }
            labels.push(v.label.parse()?);
        }
        MetricGraph::new_unconnected(labels, raw.edges, raw.base)
    }

    /// DOT with `label`, `kind` and `weight` attributes and the base as a
    /// graph attribute.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        s.push_str(&format!("  base={};\n", self.base()));
        for (id, l) in self.labels().iter().enumerate() {
            s.push_str(&format!(
                "  {id} [label=\"{}\", kind={}];\n",
                escape(&l.to_string()),
                l.kind().as_str()
            ));
        }
        for (u, v, w) in self.edges() {
            s.push_str(&format!("  {u} -- {v} [weight={w}];\n"));
        }
        s.push_str("}\n");
        s
    }

    /// Reads back exactly the DOT written by [`MetricGraph::to_dot`].
    pub fn from_dot(text: &str) -> Result<MetricGraph, GraphError> {
        let bad = |line: &str| GraphError::Parse(format!("unexpected DOT line {line:?}"));
        let mut base = None;
        let mut labels: Vec<VertexLabel> = Vec::new();
        let mut edges = Vec::new();
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line == "}" || line.starts_with("graph ") {
                continue;
            }
            let line = line.strip_suffix(';').ok_or_else(|| bad(raw))?;
            if let Some(b) = line.strip_prefix("base=") {
                base = Some(b.parse::<usize>().map_err(|_| bad(raw))?);
                continue;
            }
            let (head, attrs) = line.split_once(" [").ok_or_else(|| bad(raw))?;
            let attrs = attrs.strip_suffix(']').ok_or_else(|| bad(raw))?;
            if let Some((u, v)) = head.split_once(" -- ") {
                let w = attrs
                    .strip_prefix("weight=")
                    .and_then(|w| w.parse::<u8>().ok())
                    .ok_or_else(|| bad(raw))?;
                let u = u.parse().map_err(|_| bad(raw))?;
                let v = v.parse().map_err(|_| bad(raw))?;
                edges.push((u, v, w));
            } else {
                let id: usize = head.parse().map_err(|_| bad(raw))?;
                if id != labels.len() {
                    return Err(bad(raw));
                }
                let quoted = attrs.strip_prefix("label=\"").ok_or_else(|| bad(raw))?;
                let (label, _) = quoted.rsplit_once("\", kind=").ok_or_else(|| bad(raw))?;
                labels.push(unescape(label).parse()?);
            }
        }
        let base = base.ok_or_else(|| GraphError::Parse("missing base".into()))?;
        MetricGraph::new_unconnected(labels, edges, base)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(n) = chars.next() {
                out.push(n);
            }
        } else {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::graph::{MetricGraph, VertexLabel};

    fn sample() -> MetricGraph {
        let labels = vec![
            VertexLabel::Element("1".into()),
            VertexLabel::Element("a".into()),
            VertexLabel::Horo {
                coset: Some(0),
                vertex: 1,
                level: 1,
            },
            VertexLabel::Cone(0),
            VertexLabel::Plain("say \"hi\"".into()),
        ];
        let edges = vec![(0, 1, 2), (1, 2, 2), (0, 3, 1), (3, 1, 1), (4, 2, 2)];
        MetricGraph::new(labels, edges, 0).unwrap()
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let g = sample();
        let text = g.to_json();
        let back = MetricGraph::from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"(c0:1@1)\""));
    }

    #[test]
    fn dot_round_trip() {
        let g = sample();
        let text = g.to_dot();
        let back = MetricGraph::from_dot(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_dot(), text);
        assert!(text.contains("kind=cone"));
    }

    #[test]
    fn malformed_input() {
        assert!(MetricGraph::from_json("{}").is_err());
        assert!(MetricGraph::from_json(r#"{"vertices":[{"id":1,"label":"1"}],"edges":[],"base":0}"#).is_err());
        assert!(MetricGraph::from_dot("graph G {\n  0 [oops];\n}\n").is_err());
    }
}
