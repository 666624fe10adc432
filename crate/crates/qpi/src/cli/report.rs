//! Output tree and its JSON, text and TeX renderings.

use crate::scalar::{render_qpi_tex, render_ratfunc, QPiScalar};
use serde_json::{Map, Value};

/// TeX preamble written before every TeX report.
pub const TEX_PREAMBLE: &str = include_str!("../../schemas/tex-preamble.tex");

/// A report: ordered maps, lists and typed leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Str(String),
    Int(i64),
    Bool(bool),
    Scalar(QPiScalar),
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    pub fn str(s: impl Into<String>) -> Node {
        Node::Str(s.into())
    }

    pub fn map() -> Node {
        Node::Map(Vec::new())
    }

    /// Appends an entry; panics on a non-map, which is a programming error.
    pub fn push(&mut self, key: impl Into<String>, v: Node) {
        match self {
            Node::Map(m) => m.push((key.into(), v)),
            _ => panic!("push on a non-map node"),
        }
    }

    pub fn with(mut self, key: impl Into<String>, v: Node) -> Node {
        self.push(key, v);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        match self {
            Node::Map(m) => m.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn ints(v: &[i64]) -> Node {
        Node::List(v.iter().map(|&x| Node::Int(x)).collect())
    }

    /// `{label: scalar}` for the nonzero entries.
    pub fn expansion<'a>(terms: impl IntoIterator<Item = (String, &'a QPiScalar)>) -> Node {
        Node::Map(
            terms
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, Node::Scalar(c.clone())))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Tex,
    Text,
}

/// Renders reports; `pi` specializes every scalar at `π = ±1`.
#[derive(Debug, Clone, Copy)]
pub struct Renderer {
    pub format: Format,
    pub pi: Option<i8>,
}

impl Renderer {
    pub fn render(&self, title: &str, node: &Node) -> String {
        match self.format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.json(node)).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                self.text(node, 0, &mut out);
                out
            }
            Format::Tex => self.tex(title, node),
        }
    }

    fn scalar(&self, x: &QPiScalar) -> String {
        match self.pi {
            Some(s) => render_ratfunc(x.specialize(s)),
            None => x.render(),
        }
    }

    fn scalar_tex(&self, x: &QPiScalar) -> String {
        match self.pi {
            Some(s) => render_qpi_tex(&QPiScalar::from_ratfunc(x.specialize(s).clone())),
            None => render_qpi_tex(x),
        }
    }

    pub fn json(&self, node: &Node) -> Value {
        match node {
            Node::Str(s) => Value::String(s.clone()),
            Node::Int(i) => Value::from(*i),
            Node::Bool(b) => Value::Bool(*b),
            Node::Scalar(x) => Value::String(self.scalar(x)),
            Node::List(v) => Value::Array(v.iter().map(|n| self.json(n)).collect()),
            Node::Map(m) => Value::Object(
                m.iter()
                    .map(|(k, v)| (k.clone(), self.json(v)))
                    .collect::<Map<_, _>>(),
            ),
        }
    }

    fn leaf(&self, node: &Node) -> Option<String> {
        match node {
            Node::Str(s) => Some(s.clone()),
            Node::Int(i) => Some(i.to_string()),
            Node::Bool(b) => Some(b.to_string()),
            Node::Scalar(x) => Some(self.scalar(x)),
            Node::List(v) if v.iter().all(|n| !matches!(n, Node::List(_) | Node::Map(_))) => {
                Some(format!(
                    "[{}]",
                    v.iter()
                        .filter_map(|n| self.leaf(n))
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            }
            Node::Map(m) if m.is_empty() => Some("{}".into()),
            _ => None,
        }
    }

    fn text(&self, node: &Node, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match node {
            Node::Map(m) => {
                for (k, v) in m {
                    match self.leaf(v) {
                        Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            self.text(v, indent + 1, out);
                        }
                    }
                }
            }
            Node::List(v) => {
                for n in v {
                    match self.leaf(n) {
                        Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}-\n"));
                            self.text(n, indent + 1, out);
                        }
                    }
                }
            }
            other => out.push_str(&format!("{pad}{}\n", self.leaf(other).unwrap_or_default())),
        }
    }

    fn tex_leaf(&self, node: &Node) -> String {
        match node {
            Node::Scalar(x) => format!("${}$", self.scalar_tex(x)),
            Node::List(v) if v.iter().all(|n| !matches!(n, Node::List(_) | Node::Map(_))) => v
                .iter()
                .map(|n| self.tex_leaf(n))
                .collect::<Vec<_>>()
                .join(", "),
            other => format!(
                "\\texttt{{{}}}",
                tex_escape(&self.leaf(other).unwrap_or_default())
            ),
        }
    }

    /// Flattens a subtree into `(path, value)` rows.
    fn rows(&self, node: &Node, path: &mut Vec<String>, out: &mut Vec<(String, String)>) {
        let is_leaf = !matches!(node, Node::Map(m) if !m.is_empty())
            && !matches!(node, Node::List(v) if v.iter().any(|n| matches!(n, Node::List(_) | Node::Map(_))));
        if is_leaf {
            let p = path
                .iter()
                .map(|s| tex_escape(s))
                .collect::<Vec<_>>()
                .join(" / ");
            out.push((format!("\\texttt{{{p}}}"), self.tex_leaf(node)));
            return;
        }
        match node {
            Node::Map(m) => {
                for (k, v) in m {
                    path.push(k.clone());
                    self.rows(v, path, out);
                    path.pop();
                }
            }
            Node::List(v) => {
                for (k, n) in v.iter().enumerate() {
                    path.push(k.to_string());
                    self.rows(n, path, out);
                    path.pop();
                }
            }
            _ => unreachable!(),
        }
    }

    fn tex(&self, title: &str, node: &Node) -> String {
        let mut out = String::from(TEX_PREAMBLE);
        out.push_str("\\begin{document}\n");
        out.push_str(&format!(
            "\\section*{{\\texttt{{{}}}}}\n",
            tex_escape(title)
        ));
        let sections: Vec<(String, Node)> = match node {
            Node::Map(m) => m.clone(),
            other => vec![(String::new(), other.clone())],
        };
        for (k, v) in &sections {
            out.push_str(&format!("\\subsection*{{\\texttt{{{}}}}}\n", tex_escape(k)));
            let mut rows = Vec::new();
            self.rows(v, &mut Vec::new(), &mut rows);
            out.push_str("\\begin{longtable}{ll}\n");
            for (p, val) in rows {
                out.push_str(&format!("{p} & {val} \\\\\n"));
            }
            out.push_str("\\end{longtable}\n");
        }
        out.push_str("\\end{document}\n");
        out
    }
}

/// Escapes TeX special characters for use inside `\texttt`.
pub fn tex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '{' | '}' | '#' | '$' | '%' | '&' | '_' => {
                out.push('\\');
                out.push(c);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            _ => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_scalar;

    fn sample() -> Node {
        Node::map()
            .with("a", Node::Scalar(parse_scalar("p*q + q^-1").unwrap()))
            .with(
                "b",
                Node::map()
                    .with("c", Node::ints(&[1, 2]))
                    .with("d_e", Node::Bool(true)),
            )
    }

    #[test]
    fn json_keeps_order_and_specializes() {
        let r = Renderer {
            format: Format::Json,
            pi: None,
        };
        assert_eq!(r.render("t", &sample()), "{\n  \"a\": \"p*q + q^-1\",\n  \"b\": {\n    \"c\": [\n      1,\n      2\n    ],\n    \"d_e\": true\n  }\n}\n");
        let r = Renderer {
            format: Format::Json,
            pi: Some(-1),
        };
        assert_eq!(r.json(&sample())["a"], "-q + q^-1");
    }

    #[test]
    fn text_nests() {
        let r = Renderer {
            format: Format::Text,
            pi: None,
        };
        assert_eq!(
            r.render("t", &sample()),
            "a: p*q + q^-1\nb:\n  c: [1, 2]\n  d_e: true\n"
        );
    }

    #[test]
    fn tex_wraps_in_preamble() {
        let r = Renderer {
            format: Format::Tex,
            pi: None,
        };
        let s = r.render("t", &sample());
        assert!(s.starts_with(TEX_PREAMBLE));
        assert!(s.contains("\\texttt{c} & \\texttt{1}, \\texttt{2}"));
        assert!(s.contains("\\texttt{d\\_e}"));
        assert!(s.ends_with("\\end{document}\n"));
    }
}
