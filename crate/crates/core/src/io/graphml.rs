//! GraphML export and import of multi-layer networks, plus a DOT writer.
//!
//! Nodes carry `entity`, `layer`, `score` and optionally `community`; edges
//! carry `weight` and `kind`. Reals are written with 17 significant digits so
//! an import reproduces the exported network exactly.

use std::collections::HashMap;
use std::fmt::Write as _;

use quick_xml::events::{BytesDecl, BytesEnd, BytesStart, BytesText, Event};
use quick_xml::{Reader, Writer};

use crate::error::{Error, Result};
use crate::model::{Edge, EdgeKind, EntityId, LayerId, MultiLayerNetwork, NodeRef, Partition};
use crate::scalar::Scalar;

const NS: &str = "http://graphml.graphdrawing.org/xmlns";

const KEYS: [(&str, &str, &str, &str); 7] = [
    ("layers", "graph", "layers", "string"),
    ("d0", "node", "entity", "string"),
    ("d1", "node", "layer", "string"),
    ("d2", "node", "score", "double"),
    ("d3", "node", "community", "int"),
    ("d4", "edge", "weight", "double"),
    ("d5", "edge", "kind", "string"),
];

fn xml_err(e: impl std::fmt::Display) -> Error {
    Error::Xml(e.to_string())
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Community of every network node, `None` where the partition does not
/// cover it.
pub fn node_communities<T: Scalar>(net: &MultiLayerNetwork<T>, partition: &Partition<T>) -> Vec<Option<usize>> {
    let by_node: HashMap<&NodeRef, usize> = partition.vertices().iter().zip(partition.membership().iter().copied()).collect();
    net.nodes().iter().map(|n| by_node.get(n).copied()).collect()
}

struct Out {
    w: Writer<Vec<u8>>,
}

impl Out {
    fn event(&mut self, e: Event<'_>) -> Result<()> {
        self.w.write_event(e).map_err(xml_err)
    }

    fn data(&mut self, key: &str, value: &str) -> Result<()> {
        self.event(Event::Start(BytesStart::new("data").with_attributes([("key", key)])))?;
        self.event(Event::Text(BytesText::new(value)))?;
        self.event(Event::End(BytesEnd::new("data")))
    }
}

/// Serializes the network; `communities` is indexed like `net.nodes()`.
pub fn write_graphml<T: Scalar>(net: &MultiLayerNetwork<T>, communities: Option<&[Option<usize>]>) -> Result<String> {
    if let Some(c) = communities {
        if c.len() != net.node_count() {
            return Err(Error::InvalidInput(format!(
                "{} community labels for {} nodes",
                c.len(),
                net.node_count()
            )));
        }
    }
    let mut out = Out { w: Writer::new_with_indent(Vec::new(), b' ', 2) };
    out.event(Event::Decl(BytesDecl::new("1.0", Some("UTF-8"), None)))?;
    out.event(Event::Start(BytesStart::new("graphml").with_attributes([("xmlns", NS)])))?;
    for (id, target, name, ty) in KEYS {
        out.event(Event::Empty(BytesStart::new("key").with_attributes([
            ("id", id),
            ("for", target),
            ("attr.name", name),
            ("attr.type", ty),
        ])))?;
    }
    out.event(Event::Start(
        BytesStart::new("graph").with_attributes([("id", "G"), ("edgedefault", "undirected")]),
    ))?;
    out.data("layers", &serde_json::to_string(net.layers())?)?;

    for (i, node) in net.nodes().iter().enumerate() {
        let id = format!("n{i}");
        out.event(Event::Start(BytesStart::new("node").with_attributes([("id", id.as_str())])))?;
        out.data("d0", node.entity.as_str())?;
        out.data("d1", node.layer.as_str())?;
        out.data("d2", &real(net.score(i).as_f64()))?;
        if let Some(c) = communities.and_then(|c| c[i]) {
            out.data("d3", &c.to_string())?;
        }
        out.event(Event::End(BytesEnd::new("node")))?;
    }
    let edges = net
        .intra_edges()
        .iter()
        .map(|e| (e, EdgeKind::Intra))
        .chain(net.inter_edges().iter().map(|e| (e, EdgeKind::Inter)));
    for (k, (e, kind)) in edges.enumerate() {
        let (id, s, t) = (format!("e{k}"), format!("n{}", e.source), format!("n{}", e.target));
        out.event(Event::Start(BytesStart::new("edge").with_attributes([
            ("id", id.as_str()),
            ("source", s.as_str()),
            ("target", t.as_str()),
        ])))?;
        out.data("d4", &real(e.weight.as_f64()))?;
        out.data("d5", kind.as_str())?;
        out.event(Event::End(BytesEnd::new("edge")))?;
    }
    out.event(Event::End(BytesEnd::new("graph")))?;
    out.event(Event::End(BytesEnd::new("graphml")))?;
    let mut s = String::from_utf8(out.w.into_inner()).map_err(xml_err)?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphmlNetwork<T> {
    pub network: MultiLayerNetwork<T>,
    pub communities: Vec<Option<usize>>,
}

#[derive(Default)]
struct Element {
    id: String,
    source: String,
    target: String,
    data: HashMap<String, String>,
}

fn attr(e: &BytesStart<'_>, name: &str) -> Result<Option<String>> {
    for a in e.attributes() {
        let a = a.map_err(xml_err)?;
        if a.key.as_ref() == name.as_bytes() {
            return Ok(Some(a.unescape_value().map_err(xml_err)?.into_owned()));
        }
    }
    Ok(None)
}

fn required(e: &Element, key: &str, what: &str) -> Result<String> {
    e.data
        .get(key)
        .cloned()
        .ok_or_else(|| Error::Xml(format!("{what} `{}` lacks `{key}` data", e.id)))
}

fn parse_real<T: Scalar>(s: &str, what: &str) -> Result<T> {
    s.trim().parse::<f64>().map(T::lit).map_err(|_| Error::Xml(format!("{what}: `{s}` is not a number")))
}

/// Parses a file written by [`write_graphml`]. Attribute keys are resolved
/// through their `attr.name`, so other writers' key ids also work.
pub fn read_graphml<T: Scalar>(xml: &str) -> Result<GraphmlNetwork<T>> {
    let mut reader = Reader::from_str(xml);
    let mut key_names: HashMap<String, String> = HashMap::new();
    let mut graph_data: HashMap<String, String> = HashMap::new();
    let mut nodes: Vec<Element> = Vec::new();
    let mut edges: Vec<Element> = Vec::new();
    let mut current: Option<(bool, Element)> = None;
    let mut data_key: Option<String> = None;
    let mut text = String::new();

    loop {
        match reader.read_event().map_err(xml_err)? {
            Event::Eof => break,
            Event::Start(e) | Event::Empty(e) if e.name().as_ref() == b"key" => {
                let id = attr(&e, "id")?.ok_or_else(|| Error::Xml("key without id".into()))?;
                let name = attr(&e, "attr.name")?.unwrap_or_else(|| id.clone());
                key_names.insert(id, name);
            }
            Event::Start(e) if e.name().as_ref() == b"node" || e.name().as_ref() == b"edge" => {
                let is_node = e.name().as_ref() == b"node";
                let el = Element {
                    id: attr(&e, "id")?.unwrap_or_default(),
                    source: attr(&e, "source")?.unwrap_or_default(),
                    target: attr(&e, "target")?.unwrap_or_default(),
                    data: HashMap::new(),
                };
                current = Some((is_node, el));
            }
            Event::Empty(e) if e.name().as_ref() == b"node" => {
                return Err(Error::Xml(format!("node `{}` has no data", attr(&e, "id")?.unwrap_or_default())));
            }
            Event::Empty(e) if e.name().as_ref() == b"edge" => {
                return Err(Error::Xml(format!("edge `{}` has no data", attr(&e, "id")?.unwrap_or_default())));
            }
            Event::End(e) if e.name().as_ref() == b"node" || e.name().as_ref() == b"edge" => {
                if let Some((is_node, el)) = current.take() {
                    if is_node { nodes.push(el) } else { edges.push(el) }
                }
            }
            Event::Start(e) if e.name().as_ref() == b"data" => {
                let key = attr(&e, "key")?.ok_or_else(|| Error::Xml("data without key".into()))?;
                data_key = Some(key_names.get(&key).cloned().unwrap_or(key));
                text.clear();
            }
            Event::Text(t) if data_key.is_some() => text.push_str(&t.unescape().map_err(xml_err)?),
            Event::CData(t) if data_key.is_some() => text.push_str(&String::from_utf8_lossy(&t)),
            Event::End(e) if e.name().as_ref() == b"data" => {
                if let Some(key) = data_key.take() {
                    let value = std::mem::take(&mut text);
                    match current.as_mut() {
                        Some((_, el)) => el.data.insert(key, value),
                        None => graph_data.insert(key, value),
                    };
                }
            }
            _ => {}
        }
    }

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut parts = Vec::with_capacity(nodes.len());
    let mut communities = Vec::with_capacity(nodes.len());
    let mut layer_order: Vec<LayerId> = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        if index.insert(n.id.clone(), i).is_some() {
            return Err(Error::Xml(format!("duplicate node id `{}`", n.id)));
        }
        let layer = LayerId(required(n, "layer", "node")?);
        if !layer_order.contains(&layer) {
            layer_order.push(layer.clone());
        }
        let node = NodeRef { entity: EntityId(required(n, "entity", "node")?), layer };
        parts.push((node, parse_real::<T>(&required(n, "score", "node")?, "score")?));
        communities.push(match n.data.get("community") {
            Some(c) => Some(c.trim().parse().map_err(|_| Error::Xml(format!("bad community `{c}`")))?),
            None => None,
        });
    }
    let layers: Vec<LayerId> = match graph_data.get("layers") {
        Some(json) => serde_json::from_str(json)?,
        None => layer_order,
    };
    let (mut intra, mut inter) = (Vec::new(), Vec::new());
    for e in &edges {
        let end = |id: &str| index.get(id).copied().ok_or_else(|| Error::Xml(format!("edge `{}` references unknown node `{id}`", e.id)));
        let edge = Edge::new(end(&e.source)?, end(&e.target)?, parse_real::<T>(&required(e, "weight", "edge")?, "weight")?);
        match required(e, "kind", "edge")?.as_str() {
            "intra" => intra.push(edge),
            "inter" => inter.push(edge),
            other => return Err(Error::Xml(format!("edge `{}` has unknown kind `{other}`", e.id))),
        }
    }
    let network = MultiLayerNetwork::from_parts(layers, parts, intra, inter)?;
    Ok(GraphmlNetwork { network, communities })
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering with one cluster per layer.
pub fn write_dot<T: Scalar>(net: &MultiLayerNetwork<T>, communities: Option<&[Option<usize>]>) -> String {
    let mut s = String::from("graph cobalt {\n");
    for (li, layer) in net.layers().iter().enumerate() {
        let _ = writeln!(s, "  subgraph cluster_{li} {{\n    label={};", dot_id(layer.as_str()));
        for i in net.layer_nodes(layer) {
            let node = &net.nodes()[i];
            let community = communities.and_then(|c| c[i]).map_or(String::new(), |c| format!(", community={c}"));
            let _ = writeln!(s, "    n{i} [label={}{community}];", dot_id(node.entity.as_str()));
        }
        s.push_str("  }\n");
    }
    for e in net.intra_edges() {
        let _ = writeln!(s, "  n{} -- n{} [weight={}];", e.source, e.target, real(e.weight.as_f64()));
    }
    for e in net.inter_edges() {
        let _ = writeln!(s, "  n{} -- n{} [weight={}, style=dashed];", e.source, e.target, real(e.weight.as_f64()));
    }
    s.push_str("}\n");
    s
}
