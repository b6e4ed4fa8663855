//! Cobordism categories in dimensions 1 and 2 as layered words in
//! generators.
//!
//! A word is read bottom layer first. Inside a layer, generators sit side by
//! side and consume consecutive input strands. Two 2-dimensional words are
//! equivalent exactly when their normal forms agree. The normal form lists
//! each connected component with its genus and the positions of the in- and
//! out-circles it touches. By the classification of compact oriented
//! surfaces, that data determines the cobordism up to equivalence.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use thiserror::Error;

use crate::surfaces::Surface;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobordismError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("arity mismatch at layer {layer}: expected {expected} strands, found {found}")]
    ArityMismatch {
        layer: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u8, right: u8 },
    #[error("operation needs dimension {expected}, got {found}")]
    WrongDimension { expected: u8, found: u8 },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Id,
    Swap,
    Cap,
    Cup,
    Pants,
    Copants,
    PointId,
    ArcCap,
    ArcCup,
}

impl Generator {
    pub const ALL: [Generator; 9] = [
        Generator::Id,
        Generator::Swap,
        Generator::Cap,
        Generator::Cup,
        Generator::Pants,
        Generator::Copants,
        Generator::PointId,
        Generator::ArcCap,
        Generator::ArcCup,
    ];

    pub fn dim(self) -> u8 {
        match self {
            Generator::PointId | Generator::ArcCap | Generator::ArcCup => 1,
            _ => 2,
        }
    }

    pub fn in_arity(self) -> usize {
        match self {
            Generator::Cap | Generator::ArcCap => 0,
            Generator::Id | Generator::Cup | Generator::Copants | Generator::PointId => 1,
            Generator::Swap | Generator::Pants | Generator::ArcCup => 2,
        }
    }

    pub fn out_arity(self) -> usize {
        match self {
            Generator::Cup | Generator::ArcCup => 0,
            Generator::Id | Generator::Cap | Generator::Pants | Generator::PointId => 1,
            Generator::Swap | Generator::Copants | Generator::ArcCap => 2,
        }
    }

    /// Euler characteristic of the generator as a compact manifold.
    pub fn chi(self) -> i64 {
        match self {
            Generator::Id | Generator::Swap => 0,
            Generator::Cap | Generator::Cup => 1,
            Generator::Pants | Generator::Copants => -1,
            Generator::PointId | Generator::ArcCap | Generator::ArcCup => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::Id => "id",
            Generator::Swap => "swap",
            Generator::Cap => "cap",
            Generator::Cup => "cup",
            Generator::Pants => "pants",
            Generator::Copants => "copants",
            Generator::PointId => "pid",
            Generator::ArcCap => "acap",
            Generator::ArcCup => "acup",
        }
    }

    pub fn from_name(name: &str) -> Option<Generator> {
        Generator::ALL.into_iter().find(|g| g.name() == name)
    }

    fn identity(dim: u8) -> Generator {
        if dim == 1 {
            Generator::PointId
        } else {
            Generator::Id
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type Layer = Vec<Generator>;

fn layer_in(layer: &[Generator]) -> usize {
    layer.iter().map(|g| g.in_arity()).sum()
}

fn layer_out(layer: &[Generator]) -> usize {
    layer.iter().map(|g| g.out_arity()).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CobordismWord {
    dim: u8,
    layers: Vec<Layer>,
}

impl CobordismWord {
    /// Arity-checked word.
    pub fn new(dim: u8, layers: Vec<Layer>) -> Result<Self, CobordismError> {
        for layer in &layers {
            for g in layer {
                if g.dim() != dim {
                    return Err(CobordismError::DimensionMismatch {
                        left: dim,
                        right: g.dim(),
                    });
                }
            }
        }
        for (k, pair) in layers.windows(2).enumerate() {
            let (expected, found) = (layer_out(&pair[0]), layer_in(&pair[1]));
            if expected != found {
                return Err(CobordismError::ArityMismatch {
                    layer: k + 1,
                    expected,
                    found,
                });
            }
        }
        Ok(CobordismWord { dim, layers })
    }

    pub fn empty(dim: u8) -> Self {
        CobordismWord {
            dim,
            layers: Vec::new(),
        }
    }

    /// `n` parallel identity strands.
    pub fn identity(dim: u8, n: usize) -> Self {
        CobordismWord {
            dim,
            layers: vec![vec![Generator::identity(dim); n]],
        }
    }

    pub fn generator(g: Generator) -> Self {
        CobordismWord {
            dim: g.dim(),
            layers: vec![vec![g]],
        }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn in_arity(&self) -> usize {
        self.layers.first().map_or(0, |l| layer_in(l))
    }

    pub fn out_arity(&self) -> usize {
        self.layers.last().map_or(0, |l| layer_out(l))
    }

    pub fn is_closed(&self) -> bool {
        self.in_arity() == 0 && self.out_arity() == 0
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.layers.iter().flatten().copied()
    }

    pub fn count(&self, g: Generator) -> usize {
        self.generators().filter(|&h| h == g).count()
    }

    /// χ from generator counts. Internal points of a 1-dimensional word
    /// each subtract one; internal circles contribute nothing.
    pub fn chi(&self) -> i64 {
        let gens: i64 = self.generators().map(Generator::chi).sum();
        if self.dim == 1 {
            let internal: usize = self.layers.iter().skip(1).map(|l| layer_in(l)).sum();
            gens - internal as i64
        } else {
            gens
        }
    }

    fn identity_layer(&self, n: usize) -> Layer {
        vec![Generator::identity(self.dim); n]
    }
}

impl fmt::Display for CobordismWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.layers.is_empty() {
            return f.write_str("(empty)");
        }
        for (k, layer) in self.layers.iter().enumerate() {
            if k > 0 {
                f.write_str(" ; ")?;
            }
            for (i, g) in layer.iter().enumerate() {
                if i > 0 {
                    f.write_str(" | ")?;
                }
                write!(f, "{g}")?;
            }
        }
        Ok(())
    }
}

pub fn parse_word(text: &str) -> Result<CobordismWord, CobordismError> {
    let mut layers: Vec<Layer> = vec![Vec::new()];
    let mut dim: Option<u8> = None;
    let mut expect_gen = true;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b';' || c == b'|' {
            if expect_gen {
                return Err(CobordismError::Syntax {
                    pos: i,
                    message: format!("expected a generator before '{}'", c as char),
                });
            }
            if c == b';' {
                layers.push(Vec::new());
            }
            expect_gen = true;
            i += 1;
            continue;
        }
        if !c.is_ascii_alphabetic() {
            return Err(CobordismError::Syntax {
                pos: i,
                message: format!(
                    "unexpected character '{}'",
                    text[i..].chars().next().unwrap()
                ),
            });
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
            i += 1;
        }
        let name = &text[start..i];
        if !expect_gen {
            return Err(CobordismError::Syntax {
                pos: start,
                message: format!("expected ';' or '|' before '{name}'"),
            });
        }
        let g = Generator::from_name(name).ok_or_else(|| CobordismError::Syntax {
            pos: start,
            message: format!("unknown generator '{name}'"),
        })?;
        match dim {
            None => dim = Some(g.dim()),
            Some(d) if d != g.dim() => {
                return Err(CobordismError::Syntax {
                    pos: start,
                    message: format!(
                        "'{name}' is a dimension {} generator in a dimension {d} word",
                        g.dim()
                    ),
                })
            }
            Some(_) => {}
        }
        layers.last_mut().unwrap().push(g);
        expect_gen = false;
    }
    if expect_gen {
        return Err(CobordismError::Syntax {
            pos: text.len(),
            message: "expected a generator".into(),
        });
    }
    CobordismWord::new(dim.unwrap(), layers)
}

/// `M` followed by `N`.
pub fn compose(m: &CobordismWord, n: &CobordismWord) -> Result<CobordismWord, CobordismError> {
    same_dim(m, n)?;
    if m.out_arity() != n.in_arity() {
        return Err(CobordismError::ArityMismatch {
            layer: m.layers.len(),
            expected: m.out_arity(),
            found: n.in_arity(),
        });
    }
    let mut layers = m.layers.clone();
    layers.extend(n.layers.iter().cloned());
    Ok(CobordismWord { dim: m.dim, layers })
}

/// `M` beside `N`, the shorter word continued by identity layers.
pub fn tensor(m: &CobordismWord, n: &CobordismWord) -> Result<CobordismWord, CobordismError> {
    same_dim(m, n)?;
    let height = m.layers.len().max(n.layers.len());
    let layers = (0..height)
        .map(|k| {
            let mut layer = m
                .layers
                .get(k)
                .cloned()
                .unwrap_or_else(|| m.identity_layer(m.out_arity()));
            layer.extend(
                n.layers
                    .get(k)
                    .cloned()
                    .unwrap_or_else(|| n.identity_layer(n.out_arity())),
            );
            layer
        })
        .collect();
    Ok(CobordismWord { dim: m.dim, layers })
}

fn same_dim(m: &CobordismWord, n: &CobordismWord) -> Result<(), CobordismError> {
    if m.dim != n.dim {
        return Err(CobordismError::DimensionMismatch {
            left: m.dim,
            right: n.dim,
        });
    }
    Ok(())
}

/// One connected component. In dimension 1 the genus is always 0, and
/// a component without boundary is a circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentClass {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub genus: u32,
}

impl ComponentClass {
    pub fn chi(&self, dim: u8) -> i64 {
        if dim == 1 {
            if self.inputs.is_empty() && self.outputs.is_empty() {
                0
            } else {
                1
            }
        } else {
            2 - 2 * self.genus as i64 - (self.inputs.len() + self.outputs.len()) as i64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CobordismClass {
    pub dim: u8,
    pub in_arity: usize,
    pub out_arity: usize,
    /// Sorted by (inputs, outputs, genus).
    pub components: Vec<ComponentClass>,
}

impl CobordismClass {
    pub fn chi(&self) -> i64 {
        self.components.iter().map(|c| c.chi(self.dim)).sum()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Genera of the closed components.
    pub fn closed_genera(&self) -> Vec<u32> {
        self.components
            .iter()
            .filter(|c| c.inputs.is_empty() && c.outputs.is_empty())
            .map(|c| c.genus)
            .collect()
    }

    /// Side-by-side union, with the other class's boundary positions shifted.
    pub fn disjoint_union(&self, other: &CobordismClass) -> CobordismClass {
        let mut components = self.components.clone();
        components.extend(other.components.iter().map(|c| ComponentClass {
            inputs: c.inputs.iter().map(|p| p + self.in_arity).collect(),
            outputs: c.outputs.iter().map(|p| p + self.out_arity).collect(),
            genus: c.genus,
        }));
        components.sort();
        CobordismClass {
            dim: self.dim,
            in_arity: self.in_arity + other.in_arity,
            out_arity: self.out_arity + other.out_arity,
            components,
        }
    }
}

impl fmt::Display for CobordismClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}:", self.in_arity, self.out_arity)?;
        if self.components.is_empty() {
            return f.write_str(" empty");
        }
        for c in &self.components {
            if self.dim == 1 {
                let kind = if c.inputs.is_empty() && c.outputs.is_empty() {
                    "circle"
                } else {
                    "arc"
                };
                write!(f, " [{kind} in {:?} out {:?}]", c.inputs, c.outputs)?;
            } else {
                write!(f, " [g {} in {:?} out {:?}]", c.genus, c.inputs, c.outputs)?;
            }
        }
        Ok(())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn add(&mut self) -> usize {
        self.0.push(self.0.len());
        self.0.len() - 1
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Traces strands through the layers and classifies each component.
pub fn normal_form(m: &CobordismWord) -> Result<CobordismClass, CobordismError> {
    // Strands are the union-find elements. Every generator touches at
    // least one strand, so each piece is reachable from a strand.
    let in_arity = m.in_arity();
    let mut uf = UnionFind::new(in_arity);
    let mut current: Vec<usize> = (0..in_arity).collect();
    // (first strand, χ) per generator
    let mut pieces: Vec<(usize, i64)> = Vec::new();
    let mut internal: Vec<usize> = Vec::new();
    for (k, layer) in m.layers.iter().enumerate() {
        if k > 0 {
            internal.extend_from_slice(&current);
        }
        let mut next = Vec::with_capacity(layer_out(layer));
        let mut pos = 0;
        for &g in layer {
            let ins = &current[pos..pos + g.in_arity()];
            pos += g.in_arity();
            let outs: Vec<usize> = (0..g.out_arity()).map(|_| uf.add()).collect();
            match g {
                Generator::Swap => {
                    uf.union(ins[0], outs[1]);
                    uf.union(ins[1], outs[0]);
                    next.push(outs[0]);
                    next.push(outs[1]);
                    continue;
                }
                _ => {
                    let all: Vec<usize> = ins.iter().chain(&outs).copied().collect();
                    for w in all.windows(2) {
                        uf.union(w[0], w[1]);
                    }
                    pieces.push((all[0], g.chi()));
                }
            }
            next.extend(outs);
        }
        current = next;
    }
    let outputs = current;
    let mut roots: Vec<usize> = Vec::new();
    let mut chis: Vec<i64> = Vec::new();
    let root_index = |uf: &mut UnionFind, roots: &mut Vec<usize>, chis: &mut Vec<i64>, x| {
        let r = uf.find(x);
        match roots.iter().position(|&y| y == r) {
            Some(i) => i,
            None => {
                roots.push(r);
                chis.push(0);
                roots.len() - 1
            }
        }
    };
    let mut records: Vec<ComponentClass> = Vec::new();
    let ensure = |records: &mut Vec<ComponentClass>, i: usize| {
        while records.len() <= i {
            records.push(ComponentClass {
                inputs: Vec::new(),
                outputs: Vec::new(),
                genus: 0,
            });
        }
    };
    for p in 0..in_arity {
        let i = root_index(&mut uf, &mut roots, &mut chis, p);
        ensure(&mut records, i);
        records[i].inputs.push(p);
    }
    for (q, &s) in outputs.iter().enumerate() {
        let i = root_index(&mut uf, &mut roots, &mut chis, s);
        ensure(&mut records, i);
        records[i].outputs.push(q);
    }
    for &(s, chi) in &pieces {
        let i = root_index(&mut uf, &mut roots, &mut chis, s);
        ensure(&mut records, i);
        chis[i] += chi;
    }
    if m.dim == 1 {
        for &s in &internal {
            let i = root_index(&mut uf, &mut roots, &mut chis, s);
            chis[i] -= 1;
        }
    }
    for (rec, &chi) in records.iter_mut().zip(&chis) {
        let boundary = (rec.inputs.len() + rec.outputs.len()) as i64;
        if m.dim == 1 {
            let ok = (boundary == 0 && chi == 0) || (boundary == 2 && chi == 1);
            if !ok {
                return Err(CobordismError::InternalInvariantViolation(format!(
                    "1-dimensional component with {boundary} endpoints and χ = {chi}"
                )));
            }
        } else {
            let twice_genus = 2 - boundary - chi;
            if twice_genus < 0 || twice_genus % 2 != 0 {
                return Err(CobordismError::InternalInvariantViolation(format!(
                    "component with χ = {chi} and {boundary} boundary circles"
                )));
            }
            rec.genus = (twice_genus / 2) as u32;
        }
    }
    records.sort();
    Ok(CobordismClass {
        dim: m.dim,
        in_arity,
        out_arity: outputs.len(),
        components: records,
    })
}

pub fn equivalent(m: &CobordismWord, n: &CobordismWord) -> Result<bool, CobordismError> {
    same_dim(m, n)?;
    if m.in_arity() != n.in_arity() {
        return Err(CobordismError::ArityMismatch {
            layer: 0,
            expected: m.in_arity(),
            found: n.in_arity(),
        });
    }
    if m.out_arity() != n.out_arity() {
        return Err(CobordismError::ArityMismatch {
            layer: n.layers.len(),
            expected: m.out_arity(),
            found: n.out_arity(),
        });
    }
    Ok(normal_form(m)? == normal_form(n)?)
}

/// Connected genus `g` word from `k` inputs to `m` outputs: merge, add
/// handles, split.
pub fn connected_word(genus: u32, inputs: usize, outputs: usize) -> CobordismWord {
    use Generator::*;
    let mut layers: Vec<Layer> = Vec::new();
    if inputs == 0 {
        layers.push(vec![Cap]);
    } else {
        for w in (2..=inputs).rev() {
            let mut layer = vec![Pants];
            layer.extend(vec![Id; w - 2]);
            layers.push(layer);
        }
        if layers.is_empty() {
            layers.push(vec![Id]);
        }
    }
    for _ in 0..genus {
        layers.push(vec![Copants]);
        layers.push(vec![Pants]);
    }
    if outputs == 0 {
        layers.push(vec![Cup]);
    } else {
        for w in 1..outputs {
            let mut layer = vec![Copants];
            layer.extend(vec![Id; w - 1]);
            layers.push(layer);
        }
    }
    CobordismWord { dim: 2, layers }
}

// Adjacent-transposition layers turning strand order `from` into `to`.
fn permutation_layers(from: &[usize], to: &[usize]) -> Vec<Layer> {
    let n = from.len();
    let mut rank = vec![0; n.max(from.iter().chain(to).max().map_or(0, |m| m + 1))];
    for (i, &x) in to.iter().enumerate() {
        rank[x] = i;
    }
    let mut cur = from.to_vec();
    let mut layers = Vec::new();
    let mut swapped = true;
    while swapped {
        swapped = false;
        for i in 0..n.saturating_sub(1) {
            if rank[cur[i]] > rank[cur[i + 1]] {
                cur.swap(i, i + 1);
                let mut layer = vec![Generator::Id; i];
                layer.push(Generator::Swap);
                layer.extend(vec![Generator::Id; n - i - 2]);
                layers.push(layer);
                swapped = true;
            }
        }
    }
    layers
}

/// A 2-dimensional word whose normal form is `class`.
pub fn canonical_word(class: &CobordismClass) -> Result<CobordismWord, CobordismError> {
    if class.dim != 2 {
        return Err(CobordismError::WrongDimension {
            expected: 2,
            found: class.dim,
        });
    }
    let mut body = CobordismWord::empty(2);
    let mut in_order = Vec::new();
    let mut out_order = Vec::new();
    for c in &class.components {
        let piece = connected_word(c.genus, c.inputs.len(), c.outputs.len());
        body = tensor(&body, &piece)?;
        in_order.extend_from_slice(&c.inputs);
        out_order.extend_from_slice(&c.outputs);
    }
    let identity_in: Vec<usize> = (0..class.in_arity).collect();
    let identity_out: Vec<usize> = (0..class.out_arity).collect();
    let mut layers = permutation_layers(&identity_in, &in_order);
    layers.extend(body.layers);
    layers.extend(permutation_layers(&out_order, &identity_out));
    CobordismWord::new(2, layers)
}

/// A surface as a cobordism from the empty set, its boundary circles
/// becoming outputs in circle-id order.
pub fn surface_word(s: &Surface) -> CobordismWord {
    let mut word = CobordismWord::empty(2);
    for c in s.components() {
        let piece = connected_word(c.genus, 0, c.boundary as usize);
        word = tensor(&word, &piece).expect("same dimension");
    }
    word
}

/// A random arity-consistent 2-dimensional word with `inputs` input
/// strands and `height` layers; widths stay near `max_width`.
pub fn random_word(
    rng: &mut impl Rng,
    inputs: usize,
    height: usize,
    max_width: usize,
) -> CobordismWord {
    use Generator::*;
    let mut width = inputs;
    let mut layers = Vec::with_capacity(height);
    for _ in 0..height {
        let mut layer = Vec::new();
        let mut rest = width;
        let mut out = 0;
        loop {
            if rest == 0 {
                if out < max_width && rng.gen_bool(0.3) {
                    layer.push(Cap);
                    out += 1;
                    continue;
                }
                break;
            }
            let crowded = out + rest > max_width;
            let g = match rng.gen_range(0..10) {
                0..=2 => Id,
                3 => Cap,
                4 => Cup,
                5 | 6 if rest >= 2 => Pants,
                7 if !crowded => Copants,
                8 if rest >= 2 => Swap,
                _ => Id,
            };
            if g == Cap && crowded {
                layer.push(Id);
            } else {
                layer.push(g);
            }
            rest -= layer.last().unwrap().in_arity();
            out += layer.last().unwrap().out_arity();
        }
        width = out;
        layers.push(layer);
    }
    CobordismWord { dim: 2, layers }
}

/// A random closed word: a random word from the empty set, merged to one
/// strand and capped off.
pub fn random_closed_word(rng: &mut impl Rng, height: usize, max_width: usize) -> CobordismWord {
    let w = random_word(rng, 0, height, max_width);
    close_off(&w)
}

/// Appends pants layers down to one strand and a cup.
pub fn close_off(w: &CobordismWord) -> CobordismWord {
    let mut layers = w.layers.clone();
    let mut width = w.out_arity();
    while width >= 2 {
        let mut layer = vec![Generator::Pants];
        layer.extend(vec![Generator::Id; width - 2]);
        layers.push(layer);
        width -= 1;
    }
    if width == 1 {
        layers.push(vec![Generator::Cup]);
    }
    CobordismWord { dim: 2, layers }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rewrite {
    InsertIdentityLayer,
    SplitLayer,
    DoubleSwap,
    CylinderInsertion,
    SwapBeforePants,
}

fn width_after(w: &CobordismWord, k: usize) -> usize {
    if k == 0 {
        w.in_arity()
    } else {
        layer_out(&w.layers[k - 1])
    }
}

fn padded(dim: u8, before: usize, gens: &[Generator], after: usize) -> Layer {
    let id = Generator::identity(dim);
    let mut layer = vec![id; before];
    layer.extend_from_slice(gens);
    layer.extend(vec![id; after]);
    layer
}

/// Applies a random class-preserving rewrite. Returns the rewrite used,
/// or `None` when the chosen kind does not apply.
pub fn random_rewrite(rng: &mut impl Rng, w: &CobordismWord) -> (CobordismWord, Option<Rewrite>) {
    let mut layers = w.layers.clone();
    let kind = rng.gen_range(0..5);
    let k = rng.gen_range(0..=layers.len());
    let width = width_after(w, k);
    let id = Generator::identity(w.dim);
    let rewrite = match kind {
        0 => {
            layers.insert(k, vec![id; width]);
            Some(Rewrite::InsertIdentityLayer)
        }
        1 if k < layers.len() && layers[k].len() >= 2 => {
            let layer = layers.remove(k);
            let j = rng.gen_range(0..layer.len());
            let mut lower = Vec::new();
            let mut upper = Vec::new();
            for (i, &g) in layer.iter().enumerate() {
                if i == j {
                    lower.extend(vec![id; g.in_arity()]);
                    upper.push(g);
                } else {
                    lower.push(g);
                    upper.extend(vec![id; g.out_arity()]);
                }
            }
            layers.insert(k, upper);
            layers.insert(k, lower);
            Some(Rewrite::SplitLayer)
        }
        2 if w.dim == 2 && width >= 2 => {
            let s = rng.gen_range(0..width - 1);
            let layer = padded(2, s, &[Generator::Swap], width - s - 2);
            layers.insert(k, layer.clone());
            layers.insert(k, layer);
            Some(Rewrite::DoubleSwap)
        }
        3 if w.dim == 2 && width >= 1 => {
            let s = rng.gen_range(0..width);
            layers.insert(k, padded(2, s, &[Generator::Pants], width - s - 1));
            layers.insert(k, padded(2, s, &[Generator::Cap], width - s));
            Some(Rewrite::CylinderInsertion)
        }
        4 if k < layers.len() => {
            let mut pos = 0;
            let mut found = None;
            for &g in &layers[k] {
                if g == Generator::Pants {
                    found = Some(pos);
                    break;
                }
                pos += g.in_arity();
            }
            found.map(|s| {
                layers.insert(k, padded(2, s, &[Generator::Swap], width - s - 2));
                Rewrite::SwapBeforePants
            })
        }
        _ => None,
    };
    (CobordismWord { dim: w.dim, layers }, rewrite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::Component;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> CobordismWord {
        parse_word(s).unwrap()
    }

    fn single(genus: u32, inputs: &[usize], outputs: &[usize]) -> ComponentClass {
        ComponentClass {
            inputs: inputs.to_vec(),
            outputs: outputs.to_vec(),
            genus,
        }
    }

    #[test]
    fn parse_examples() {
        let sphere = w("cap ; cup");
        assert_eq!((sphere.in_arity(), sphere.out_arity()), (0, 0));
        let disk = w("cap | cap ; pants");
        assert_eq!((disk.in_arity(), disk.out_arity()), (0, 1));
        assert_eq!(
            parse_word("pants ; pants"),
            Err(CobordismError::ArityMismatch {
                layer: 1,
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_word(""),
            Err(CobordismError::Syntax { pos: 0, .. })
        ));
        assert!(matches!(
            parse_word("cap ; ; cup"),
            Err(CobordismError::Syntax { pos: 6, .. })
        ));
        assert!(matches!(
            parse_word("cap ; cop"),
            Err(CobordismError::Syntax { pos: 6, .. })
        ));
        assert!(matches!(
            parse_word("cap cup"),
            Err(CobordismError::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            parse_word("cap ; acup"),
            Err(CobordismError::Syntax { pos: 6, .. })
        ));
        assert!(matches!(
            parse_word("cap ;"),
            Err(CobordismError::Syntax { pos: 5, .. })
        ));
        assert!(matches!(
            parse_word("cap ; cup!"),
            Err(CobordismError::Syntax { pos: 9, .. })
        ));
    }

    #[test]
    fn parse_ignores_whitespace_and_round_trips() {
        let a = w("cap|cap;\n  pants");
        assert_eq!(a, w("cap | cap ; pants"));
        assert_eq!(a.to_string(), "cap | cap ; pants");
        assert_eq!(w(&a.to_string()), a);
    }

    #[test]
    fn compose_examples() {
        let sphere = compose(&w("cap"), &w("cup")).unwrap();
        assert_eq!(
            normal_form(&sphere).unwrap().components,
            vec![single(0, &[], &[])]
        );
        let handle = compose(&w("copants"), &w("pants")).unwrap();
        assert_eq!(handle.chi(), -2);
        assert_eq!(
            normal_form(&handle).unwrap().components,
            vec![single(1, &[0], &[0])]
        );
        let m = w("copants ; id | cup");
        let with_cylinder = compose(&m, &w("id")).unwrap();
        assert!(equivalent(&m, &with_cylinder).unwrap());
        assert!(matches!(
            compose(&w("cap"), &w("pants")),
            Err(CobordismError::ArityMismatch { .. })
        ));
        assert!(matches!(
            compose(&w("cap"), &w("acup")),
            Err(CobordismError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor(&w("cap"), &w("cap")).unwrap(), w("cap | cap"));
        let m = w("cap | cap ; pants");
        assert_eq!(tensor(&m, &CobordismWord::empty(2)).unwrap(), m);
        assert_eq!(tensor(&CobordismWord::empty(2), &m).unwrap(), m);
        let t = tensor(&w("cap ; copants"), &w("id")).unwrap();
        assert_eq!(t, w("cap | id ; copants | id"));
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(
            normal_form(&w("cap ; cup")).unwrap().components,
            vec![single(0, &[], &[])]
        );
        assert_eq!(
            normal_form(&w("copants ; pants")).unwrap().components,
            vec![single(1, &[0], &[0])]
        );
        assert_eq!(
            normal_form(&w("cap | cap ; pants")).unwrap().components,
            vec![single(0, &[], &[0])]
        );
        let torus = normal_form(&w("cap ; copants ; pants ; cup")).unwrap();
        assert_eq!(torus.components, vec![single(1, &[], &[])]);
    }

    #[test]
    fn swap_keeps_strands_apart() {
        let class = normal_form(&w("swap")).unwrap();
        assert_eq!(
            class.components,
            vec![single(0, &[0], &[1]), single(0, &[1], &[0])]
        );
        assert_eq!(class.chi(), 0);
    }

    #[test]
    fn equivalence_examples() {
        assert!(!equivalent(&w("id"), &w("copants ; pants")).unwrap());
        assert!(equivalent(&w("swap ; swap"), &w("id | id")).unwrap());
        let m = w("copants ; swap ; pants");
        assert!(equivalent(&m, &m).unwrap());
        assert!(!equivalent(&w("swap"), &w("id | id")).unwrap());
        assert!(matches!(
            equivalent(&w("id"), &w("cap")),
            Err(CobordismError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn one_dimensional_words() {
        let circle = normal_form(&w("acap ; acup")).unwrap();
        assert_eq!(circle.components, vec![single(0, &[], &[])]);
        assert_eq!(circle.chi(), 0);
        let arcs = normal_form(&w("acap | pid ; pid | acup")).unwrap();
        assert_eq!(arcs.components, vec![single(0, &[0], &[0])]);
        assert_eq!(w("acap | pid ; pid | acup").chi(), 1);
        assert!(matches!(
            canonical_word(&arcs),
            Err(CobordismError::WrongDimension { .. })
        ));
    }

    #[test]
    fn canonical_words_realize_their_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let inputs = rng.gen_range(0..4);
            let height = rng.gen_range(0..7);
            let word = random_word(&mut rng, inputs, height, 5);
            let class = normal_form(&word).unwrap();
            let canon = canonical_word(&class).unwrap();
            assert_eq!(normal_form(&canon).unwrap(), class, "{word}");
            assert_eq!(canon.chi(), class.chi());
        }
    }

    #[test]
    fn rewrites_preserve_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let inputs = rng.gen_range(0..4);
            let word = random_word(&mut rng, inputs, 5, 5);
            let class = normal_form(&word).unwrap();
            let mut cur = word.clone();
            for _ in 0..6 {
                cur = random_rewrite(&mut rng, &cur).0;
                let checked = CobordismWord::new(2, cur.layers.clone()).unwrap();
                assert_eq!(normal_form(&checked).unwrap(), class, "{word} vs {cur}");
            }
        }
    }

    #[test]
    fn chi_from_generators_matches_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let word = random_word(&mut rng, 2, 6, 6);
            assert_eq!(word.chi(), normal_form(&word).unwrap().chi());
        }
    }

    #[test]
    fn surface_words() {
        let s = Surface::new(vec![Component::new(2, 1), Component::TORUS]);
        let class = normal_form(&surface_word(&s)).unwrap();
        assert_eq!(class.out_arity, 1);
        assert_eq!(class.chi(), s.chi());
        assert_eq!(class.closed_genera(), vec![1]);
    }
}
