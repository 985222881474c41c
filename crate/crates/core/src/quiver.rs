//! Finite acyclic quivers, their doubles with the starred-arrow grading, weight
//! functions, and paths.
//!
//! Vertices are 1-based in files and reports and 0-based in memory. A path stores
//! its arrows in composition order: `arrows[0]` is traversed last and the final
//! entry is traversed first, so the path `β*β` on `1 -> 2` starts at 1.
//!
//! # File format
//!
//! ```text
//! # comment
//! vertices 2
//! arrow beta: 1 -> 2
//! weight a beta = 3
//! weight b beta = -1
//! ```
//!
//! `vertices` is optional; when absent the vertex count is the largest vertex
//! mentioned. Labels match `[A-Za-z_][A-Za-z0-9_']*`. Weights are nonzero
//! integers and default to 1.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactlinalg::Field;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, a) in arrows.iter().enumerate() {
            if a.source >= vertex_count || a.target >= vertex_count {
                return Err(Error::InvalidInput(format!(
                    "arrow {} has an endpoint outside 1..={vertex_count}",
                    a.label
                )));
            }
            if seen.insert(a.label.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate arrow label {}", a.label)));
            }
        }
        let q = Quiver { vertex_count, arrows };
        if let Some(cycle) = q.find_cycle() {
            return Err(Error::Cycle(cycle.iter().map(|v| (v + 1).to_string()).collect()));
        }
        Ok(q)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    /// Arrows `γ` with `s(γ) = v`, in declaration order.
    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&i| self.arrows[i].source == v)
    }

    /// Arrows `γ` with `e(γ) = v`, in declaration order.
    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&i| self.arrows[i].target == v)
    }

    /// Vertices ordered so every arrow goes from an earlier to a later vertex.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut indegree = vec![0usize; self.vertex_count];
        for a in &self.arrows {
            indegree[a.target] += 1;
        }
        let mut ready: Vec<usize> = (0..self.vertex_count).filter(|&v| indegree[v] == 0).rev().collect();
        let mut order = Vec::with_capacity(self.vertex_count);
        while let Some(v) = ready.pop() {
            order.push(v);
            for i in self.arrows_from(v) {
                let w = self.arrows[i].target;
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(w);
                }
            }
        }
        order
    }

    fn find_cycle(&self) -> Option<Vec<usize>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.vertex_count];
        let mut stack: Vec<usize> = Vec::new();
        fn visit(q: &Quiver, v: usize, state: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
            state[v] = 1;
            stack.push(v);
            for i in q.arrows_from(v) {
                let w = q.arrows[i].target;
                match state[w] {
                    1 => {
                        let pos = stack.iter().position(|&x| x == w).unwrap();
                        let mut cycle = stack[pos..].to_vec();
                        cycle.push(w);
                        return Some(cycle);
                    }
                    0 => {
                        if let Some(c) = visit(q, w, state, stack) {
                            return Some(c);
                        }
                    }
                    _ => {}
                }
            }
            stack.pop();
            state[v] = 2;
            None
        }
        (0..self.vertex_count).find_map(|v| if state[v] == 0 { visit(self, v, &mut state, &mut stack) } else { None })
    }
}

/// Nonzero weights `a, b: Γ_1 -> k` as integers, reduced into a field at use time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weights {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl Weights {
    pub fn unit(arrow_count: usize) -> Self {
        Weights { a: vec![1; arrow_count], b: vec![1; arrow_count] }
    }

    /// Reduces the weights into `field`, failing if one becomes zero there.
    pub fn in_field<F: Field>(&self, field: &F, quiver: &Quiver) -> Result<ScalarPair<F>> {
        let conv = |ws: &[i64]| -> Result<Vec<F::Elem>> {
            ws.iter()
                .enumerate()
                .map(|(i, &w)| {
                    let e = field.from_i64(w);
                    if field.is_zero(&e) {
                        Err(Error::ZeroWeight(quiver.arrows[i].label.clone()))
                    } else {
                        Ok(e)
                    }
                })
                .collect()
        };
        Ok((conv(&self.a)?, conv(&self.b)?))
    }
}

/// Parses the quiver file format described in the module docs.
pub fn parse_quiver(text: &str) -> Result<(Quiver, Weights)> {
    let mut declared: Option<usize> = None;
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut weights: Vec<(usize, char, String, i64)> = Vec::new();
    let perr = |line: usize, message: String| Error::Parse { line, message };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "vertices" => {
                if declared.is_some() {
                    return Err(perr(line_no, "duplicate 'vertices' line".into()));
                }
                if !arrows.is_empty() {
                    return Err(perr(line_no, "'vertices' must precede arrows".into()));
                }
                let n: usize = rest.parse().map_err(|_| perr(line_no, format!("bad vertex count {rest:?}")))?;
                declared = Some(n);
            }
            "arrow" => {
                let (label, ends) =
                    rest.split_once(':').ok_or_else(|| perr(line_no, "expected 'arrow LABEL: S -> T'".into()))?;
                let label = label.trim();
                if !is_label(label) {
                    return Err(perr(line_no, format!("bad arrow label {label:?}")));
                }
                let (s, t) = ends.split_once("->").ok_or_else(|| perr(line_no, "expected 'S -> T'".into()))?;
                let vertex = |v: &str| -> Result<usize> {
                    let v: usize = v.trim().parse().map_err(|_| perr(line_no, format!("bad vertex {:?}", v.trim())))?;
                    if v == 0 || declared.is_some_and(|n| v > n) {
                        return Err(perr(line_no, format!("vertex {v} out of range")));
                    }
                    Ok(v - 1)
                };
                let (source, target) = (vertex(s)?, vertex(t)?);
                if arrows.iter().any(|a| a.label == label) {
                    return Err(perr(line_no, format!("duplicate arrow label {label}")));
                }
                arrows.push(Arrow { label: label.to_string(), source, target });
            }
            "weight" => {
                let mut parts = rest.splitn(2, char::is_whitespace);
                let which = parts.next().unwrap_or("");
                let which = match which {
                    "a" => 'a',
                    "b" => 'b',
                    _ => return Err(perr(line_no, format!("weight kind must be 'a' or 'b', got {which:?}"))),
                };
                let (label, value) = parts
                    .next()
                    .and_then(|r| r.split_once('='))
                    .ok_or_else(|| perr(line_no, "expected 'weight a|b LABEL = c'".into()))?;
                let value: i64 =
                    value.trim().parse().map_err(|_| perr(line_no, format!("bad weight {:?}", value.trim())))?;
                weights.push((line_no, which, label.trim().to_string(), value));
            }
            other => return Err(perr(line_no, format!("unknown keyword {other:?}"))),
        }
    }

    let vertex_count = declared.unwrap_or_else(|| arrows.iter().map(|a| a.source.max(a.target) + 1).max().unwrap_or(0));
    let quiver = Quiver::new(vertex_count, arrows)?;
    let mut w = Weights::unit(quiver.arrows.len());
    for (line_no, which, label, value) in weights {
        let i = quiver.arrow_index(&label).ok_or_else(|| perr(line_no, format!("weight for unknown arrow {label}")))?;
        if value == 0 {
            return Err(Error::ZeroWeight(label));
        }
        match which {
            'a' => w.a[i] = value,
            _ => w.b[i] = value,
        }
    }
    Ok((quiver, w))
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// An arrow of the double quiver. Starred arrows reverse their base arrow and have degree 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubledArrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
    pub base: usize,
    pub starred: bool,
}

impl DoubledArrow {
    pub fn degree(&self) -> usize {
        usize::from(self.starred)
    }
}

/// The double quiver: ids `0..m` are the base arrows, `m..2m` their starred partners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubledQuiver {
    base: Quiver,
    arrows: Vec<DoubledArrow>,
}

impl DoubledQuiver {
    pub fn base(&self) -> &Quiver {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count
    }

    pub fn arrows(&self) -> &[DoubledArrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: usize) -> &DoubledArrow {
        &self.arrows[id]
    }

    /// Id of `γ*` for base arrow `γ`.
    pub fn star(&self, base_arrow: usize) -> usize {
        self.base.arrows.len() + base_arrow
    }

    /// Doubled arrows leaving `v`, in id order.
    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&i| self.arrows[i].source == v)
    }

    /// Human-readable name of a path, e.g. `e_1` or `β*β`.
    pub fn path_name(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("e_{}", p.start + 1);
        }
        let labels: Vec<&str> = p.arrows.iter().map(|&a| self.arrows[a].label.as_str()).collect();
        let short = self.base.arrows.iter().all(|a| a.label.chars().count() == 1);
        labels.join(if short { "" } else { "." })
    }
}

/// Forms the double quiver with the starred-arrow grading.
pub fn double(q: &Quiver) -> DoubledQuiver {
    let mut arrows: Vec<DoubledArrow> = q
        .arrows
        .iter()
        .enumerate()
        .map(|(i, a)| DoubledArrow {
            label: a.label.clone(),
            source: a.source,
            target: a.target,
            base: i,
            starred: false,
        })
        .collect();
    arrows.extend(q.arrows.iter().enumerate().map(|(i, a)| DoubledArrow {
        label: format!("{}*", a.label),
        source: a.target,
        target: a.source,
        base: i,
        starred: true,
    }));
    DoubledQuiver { base: q.clone(), arrows }
}

/// A path in the double quiver, arrows in composition order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: usize,
    pub end: usize,
    pub arrows: Vec<usize>,
    pub degree: usize,
}

/// The `a` and `b` weights reduced into a field.
pub type ScalarPair<F> = (Vec<<F as Field>::Elem>, Vec<<F as Field>::Elem>);

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { start: v, end: v, arrows: Vec::new(), degree: 0 }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `left · right`, with `right` traversed first. `None` if not composable.
    pub fn compose(left: &Path, right: &Path) -> Option<Path> {
        if right.end != left.start {
            return None;
        }
        let mut arrows = left.arrows.clone();
        arrows.extend_from_slice(&right.arrows);
        Some(Path { start: right.start, end: left.end, arrows, degree: left.degree + right.degree })
    }

    /// The single-arrow path.
    pub fn arrow(dq: &DoubledQuiver, id: usize) -> Path {
        let a = dq.arrow(id);
        Path { start: a.source, end: a.target, arrows: vec![id], degree: a.degree() }
    }

    /// Checks composability and the degree count against `dq`.
    pub fn is_valid(&self, dq: &DoubledQuiver) -> bool {
        let mut at = self.start;
        let mut degree = 0;
        for &a in self.arrows.iter().rev() {
            let arrow = dq.arrow(a);
            if arrow.source != at {
                return false;
            }
            at = arrow.target;
            degree += arrow.degree();
        }
        at == self.end && degree == self.degree
    }
}

impl Ord for Path {
    /// Length first, then arrow ids lexicographically, then start vertex.
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.start.cmp(&other.start))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All paths of degree exactly `d` starting at `start`, in canonical order.
pub fn paths_of_degree(dq: &DoubledQuiver, start: usize, d: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut traversal: Vec<usize> = Vec::new();
    fn extend(
        dq: &DoubledQuiver,
        at: usize,
        degree: usize,
        d: usize,
        start: usize,
        traversal: &mut Vec<usize>,
        out: &mut Vec<Path>,
    ) {
        if degree == d {
            let arrows: Vec<usize> = traversal.iter().rev().copied().collect();
            out.push(Path { start, end: at, arrows, degree });
        }
        for a in dq.arrows_from(at) {
            let arrow = dq.arrow(a);
            let nd = degree + arrow.degree();
            if nd > d {
                continue;
            }
            traversal.push(a);
            extend(dq, arrow.target, nd, d, start, traversal, out);
            traversal.pop();
        }
    }
    extend(dq, start, 0, d, start, &mut traversal, &mut out);
    out.sort();
    out
}
