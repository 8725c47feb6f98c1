//! A circuit annotated with layout intent.
//!
//! Builders emit layers into *stages*. A stage belongs to a block, which the
//! layout engine maps to its own grid region; a `Fixed` stage pins its
//! qubits to block-relative positions for all of its layers, a `PerLayer`
//! stage leaves each layer to the engine's generic arrangement. Uncompute
//! passes reuse the block of the stage they mirror.

use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitBuilder, Gate, GateKind, Layer, Role};
use crate::grid::GridPos;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Section {
    Init,
    Check,
    Merge,
    Phase,
    Uncompute,
    Diffusion,
}

impl Section {
    pub const ALL: [Section; 6] =
        [Section::Init, Section::Check, Section::Merge, Section::Phase, Section::Uncompute, Section::Diffusion];

    pub fn name(self) -> &'static str {
        match self {
            Section::Init => "init",
            Section::Check => "check",
            Section::Merge => "merge",
            Section::Phase => "phase",
            Section::Uncompute => "uncompute",
            Section::Diffusion => "diffusion",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageLayout {
    /// Block-relative resting positions, plus completing atoms that fill
    /// partial rows of the block's grids.
    Fixed { places: Vec<(usize, GridPos)>, completing: Vec<GridPos> },
    PerLayer,
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub block: usize,
    pub section: Section,
    pub layers: Range<usize>,
    pub layout: Arc<StageLayout>,
}

#[derive(Clone, Debug)]
pub struct Program {
    pub circuit: Circuit,
    pub stages: Vec<Stage>,
}

#[derive(Debug)]
pub struct ProgramBuilder {
    cb: CircuitBuilder,
    stages: Vec<Stage>,
    next_block: usize,
    section: Section,
    open: Option<(usize, Arc<StageLayout>, usize)>,
}

impl Default for ProgramBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl ProgramBuilder {
    pub fn new() -> Self {
        ProgramBuilder { cb: CircuitBuilder::new(), stages: Vec::new(), next_block: 0, section: Section::Check, open: None }
    }

    pub fn alloc(&mut self, role: Role) -> usize {
        self.cb.alloc(role)
    }

    pub fn alloc_n(&mut self, role: Role, n: usize) -> Vec<usize> {
        self.cb.alloc_n(role, n)
    }

    pub fn num_qubits(&self) -> usize {
        self.cb.num_qubits()
    }

    pub fn num_layers(&self) -> usize {
        self.cb.num_layers()
    }

    pub fn section(&self) -> Section {
        self.section
    }

    pub fn set_section(&mut self, section: Section) {
        self.close();
        self.section = section;
    }

    pub fn new_block(&mut self) -> usize {
        self.next_block += 1;
        self.next_block - 1
    }

    /// Starts a stage; following layers belong to it.
    pub fn stage(&mut self, block: usize, layout: StageLayout) {
        self.close();
        self.open = Some((block, Arc::new(layout), self.cb.num_layers()));
    }

    /// Starts a `PerLayer` stage in a fresh block.
    pub fn generic(&mut self) {
        let b = self.new_block();
        self.stage(b, StageLayout::PerLayer);
    }

    pub fn layer(&mut self, kind: GateKind, gates: Vec<Gate>) {
        if gates.is_empty() {
            return;
        }
        if self.open.is_none() {
            self.generic();
        }
        self.cb.layer(kind, gates);
    }

    pub fn layers(&mut self, layers: Vec<(GateKind, Vec<Gate>)>) {
        for (k, g) in layers {
            self.layer(k, g);
        }
    }

    pub fn gate(&mut self, gate: Gate) {
        let kind = gate.kind;
        self.layer(kind, vec![gate]);
    }

    fn close(&mut self) {
        if let Some((block, layout, start)) = self.open.take() {
            let end = self.cb.num_layers();
            if end > start {
                self.stages.push(Stage { block, section: self.section, layers: start..end, layout });
            }
        }
    }

    /// Closes the open stage and returns the current layer index.
    pub fn mark(&mut self) -> usize {
        self.close();
        self.cb.num_layers()
    }

    /// Appends the inverse of every layer emitted since `start` (a value
    /// returned by [`Self::mark`]), mirroring its stages under `section`.
    pub fn append_inverse(&mut self, start: usize, section: Section) {
        let end = self.mark();
        self.append_inverse_range(start..end, section);
    }

    /// Appends the inverse of layers `range`, whose bounds must be stage
    /// boundaries (values returned by [`Self::mark`]).
    pub fn append_inverse_range(&mut self, range: Range<usize>, section: Section) {
        self.close();
        let base = self.cb.num_layers();
        let layers: Vec<Layer> = self.cb.layers_since(range.start)[..range.len()].to_vec();
        for l in layers.into_iter().rev() {
            self.cb.push(l);
        }
        let map = |i: usize| base + range.end - i;
        let mirrored: Vec<Stage> = self
            .stages
            .iter()
            .rev()
            .filter(|s| s.layers.start >= range.start && s.layers.end <= range.end)
            .map(|s| Stage {
                block: s.block,
                section,
                layers: map(s.layers.end)..map(s.layers.start),
                layout: s.layout.clone(),
            })
            .collect();
        self.stages.extend(mirrored);
    }

    /// Next block id; with [`Self::set_next_block`] a repeated body can
    /// reuse the regions of an earlier copy.
    pub fn next_block(&self) -> usize {
        self.next_block
    }

    pub fn set_next_block(&mut self, block: usize) {
        self.next_block = block;
    }

    pub fn finish(mut self) -> Program {
        self.close();
        Program { circuit: self.cb.finish(), stages: self.stages }
    }
}

impl Program {
    /// Wraps a bare circuit: every layer in its own generic stage.
    pub fn from_circuit(circuit: Circuit, section: Section) -> Self {
        let stages = (0..circuit.depth())
            .map(|i| Stage { block: i, section, layers: i..i + 1, layout: Arc::new(StageLayout::PerLayer) })
            .collect();
        Program { circuit, stages }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mirrors_stages() {
        let mut pb = ProgramBuilder::new();
        let q = pb.alloc_n(Role::Data, 2);
        let start = pb.mark();
        let b = pb.new_block();
        pb.stage(b, StageLayout::Fixed { places: vec![(q[0], GridPos::new(0, 0))], completing: vec![] });
        pb.gate(Gate::x(q[0]));
        pb.generic();
        pb.gate(Gate::cx((q[0], false), q[1]));
        pb.gate(Gate::h(q[1]));
        pb.append_inverse(start, Section::Uncompute);
        let p = pb.finish();
        assert_eq!(p.circuit.depth(), 6);
        let ranges: Vec<_> = p.stages.iter().map(|s| (s.block, s.layers.clone())).collect();
        assert_eq!(ranges, vec![(0, 0..1), (1, 1..3), (1, 3..5), (0, 5..6)]);
        let total: usize = p.stages.iter().map(|s| s.layers.len()).sum();
        assert_eq!(total, p.circuit.depth());
    }
}
