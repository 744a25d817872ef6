//! Circuit intermediate representation: a role-tagged qubit register and an
//! ordered gate list, with coefficient-group metadata mapping gate spans back
//! to the coefficients they encode.
//!
//! Qubit layout (little-endian within each section):
//!
//! ```text
//! 0 .. coeff            coefficient bits (bit i of the magnitude at index i;
//!                       the top index doubles as the sign slot, see below)
//! coeff                 auxiliary qubit
//! coeff+1 .. +pos_x     X position bits
//! ..  .. +pos_y         Y position bits
//! ```
//!
//! With negative coefficients present the sign gate needs a slot of its own:
//! bit 7 serves when every magnitude fits 7 bits, otherwise the register
//! grows to 9 coefficient qubits and index 8 is the dedicated sign slot. The
//! default register is 8 + 1 + 3 + 3 = 15 qubits.
//!
//! Circuits are plain data; nothing here enforces invariants on construction.
//! [`Circuit::validate`] reports every violation instead, and the decoder in
//! the metrics module re-derives groups from gate structure so the metadata
//! can never mask a malformed circuit.

pub(crate) mod parse;
mod quirk;

use serde::{Deserialize, Serialize};

pub use quirk::{export_visual, quirk_url};

use crate::error::{Error, Result};

/// Number of magnitude bits a coefficient occupies (values 1..=255).
pub const MAGNITUDE_BITS: usize = 8;

/// Role-tagged qubit register sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitRegister {
    /// Coefficient qubits (8, or 9 when a dedicated sign slot is needed).
    pub coeff: usize,
    /// Auxiliary qubits; always 1 in this scheme family.
    pub aux: usize,
    /// X position qubits.
    pub pos_x: usize,
    /// Y position qubits.
    pub pos_y: usize,
}

impl QubitRegister {
    /// The default 15-qubit register: 8 coefficient bits, one auxiliary and
    /// 3+3 position bits for 8x8 blocks.
    pub fn standard() -> Self {
        Self {
            coeff: MAGNITUDE_BITS,
            aux: 1,
            pos_x: 3,
            pos_y: 3,
        }
    }

    /// Standard register, optionally widened by a dedicated sign qubit.
    pub fn with_sign_slot(extra_sign_qubit: bool) -> Self {
        Self {
            coeff: MAGNITUDE_BITS + usize::from(extra_sign_qubit),
            ..Self::standard()
        }
    }

    /// Register for a pixel-map circuit over a `width x height` image:
    /// position sections sized to exactly address the raster.
    pub fn for_image_dims(width: u32, height: u32) -> Self {
        let bits = |n: u32| (32 - n.saturating_sub(1).leading_zeros()) as usize;
        Self {
            coeff: MAGNITUDE_BITS,
            aux: 1,
            pos_x: bits(width),
            pos_y: bits(height),
        }
    }

    pub fn total(&self) -> usize {
        self.coeff + self.aux + self.pos_x + self.pos_y
    }

    pub fn aux_qubit(&self) -> usize {
        self.coeff
    }

    /// The qubit flipped by a sign gate. Top coefficient index: bit 7 when
    /// magnitudes stay below 128, the dedicated ninth qubit otherwise.
    pub fn sign_qubit(&self) -> usize {
        self.coeff - 1
    }

    pub fn pos_x_qubit(&self, bit: usize) -> usize {
        debug_assert!(bit < self.pos_x);
        self.coeff + self.aux + bit
    }

    pub fn pos_y_qubit(&self, bit: usize) -> usize {
        debug_assert!(bit < self.pos_y);
        self.coeff + self.aux + self.pos_x + bit
    }

    pub fn is_coeff(&self, qubit: usize) -> bool {
        qubit < self.coeff
    }

    pub fn is_position(&self, qubit: usize) -> bool {
        qubit >= self.coeff + self.aux && qubit < self.total()
    }

    /// All position qubit indices, X section first.
    pub fn position_qubits(&self) -> Vec<usize> {
        (self.coeff + self.aux..self.total()).collect()
    }
}

/// Control polarity: fire on |1> (`One`, solid dot) or on |0> (`Zero`,
/// hollow dot / anti-control).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    One,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    #[serde(rename = "hadamard")]
    Hadamard,
    #[serde(rename = "identity")]
    Identity,
    #[serde(rename = "not")]
    Not,
    #[serde(rename = "cnot")]
    ControlledNot,
    #[serde(rename = "reset")]
    Reset,
}

/// One gate: a kind, a target qubit, and (for `ControlledNot` only) a
/// non-empty list of polarized controls.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<(usize, Polarity)>,
}

impl Gate {
    pub fn h(target: usize) -> Self {
        Self {
            kind: GateKind::Hadamard,
            target,
            controls: Vec::new(),
        }
    }

    pub fn x(target: usize) -> Self {
        Self {
            kind: GateKind::Not,
            target,
            controls: Vec::new(),
        }
    }

    /// Multi-controlled NOT; degrades to a plain NOT when `controls` is
    /// empty, which keeps the "controls only on ControlledNot" invariant.
    pub fn cx(controls: Vec<(usize, Polarity)>, target: usize) -> Self {
        if controls.is_empty() {
            Self::x(target)
        } else {
            Self {
                kind: GateKind::ControlledNot,
                target,
                controls,
            }
        }
    }

    pub fn reset(target: usize) -> Self {
        Self {
            kind: GateKind::Reset,
            target,
            controls: Vec::new(),
        }
    }

    pub fn identity(target: usize) -> Self {
        Self {
            kind: GateKind::Identity,
            target,
            controls: Vec::new(),
        }
    }

    /// Line touches this gate contributes: every control plus the target.
    pub fn connections(&self) -> u64 {
        self.controls.len() as u64 + 1
    }
}

/// Which coefficient a span of gates encodes. `block` is `(row, col)`
/// metadata only: block addressing is charged arithmetically, never drawn
/// as gates, so the decoder takes it from here after verifying everything
/// else against the gate structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientGroup {
    pub block: (u32, u32),
    pub x: u8,
    pub y: u8,
    #[serde(rename = "mag")]
    pub magnitude: u16,
    pub sign: i8,
    /// Inclusive `(first, last)` indices into `Circuit::gates`.
    pub span: (usize, usize),
}

impl CoefficientGroup {
    pub fn block_row(&self) -> u32 {
        self.block.0
    }

    pub fn block_col(&self) -> u32 {
        self.block.1
    }
}

/// An ordered gate list over a register, with group metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub register: QubitRegister,
    pub gates: Vec<Gate>,
    pub groups: Vec<CoefficientGroup>,
}

impl Circuit {
    pub fn new(register: QubitRegister) -> Self {
        Self {
            register,
            gates: Vec::new(),
            groups: Vec::new(),
        }
    }

    /// Canonical JSON form; field order and integer formats are stable, so
    /// equal circuits serialize to identical bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Total line touches across all gates.
    pub fn total_connections(&self) -> u64 {
        self.gates.iter().map(Gate::connections).sum()
    }

    /// Line touches within an inclusive gate span.
    pub fn connections_in_span(&self, span: (usize, usize)) -> u64 {
        self.gates[span.0..=span.1]
            .iter()
            .map(Gate::connections)
            .sum()
    }

    /// Checks every IR invariant and reports all violations. An empty report
    /// means the circuit is well-formed. Group-structure checks apply only
    /// when group metadata is present; a bare gate list (no groups) is a
    /// valid circuit that simply cannot be decoded or counted.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let total = self.register.total();

        for (i, gate) in self.gates.iter().enumerate() {
            if gate.target >= total {
                violations.push(Violation::at(
                    i,
                    ViolationKind::IndexOutOfRange,
                    format!("target {} >= register size {total}", gate.target),
                ));
            }
            let mut seen = Vec::new();
            for &(q, _) in &gate.controls {
                if q >= total {
                    violations.push(Violation::at(
                        i,
                        ViolationKind::IndexOutOfRange,
                        format!("control {q} >= register size {total}"),
                    ));
                }
                if q == gate.target {
                    violations.push(Violation::at(
                        i,
                        ViolationKind::SelfControl,
                        format!("gate controls its own target {q}"),
                    ));
                }
                if seen.contains(&q) {
                    violations.push(Violation::at(
                        i,
                        ViolationKind::DuplicateControl,
                        format!("control {q} listed twice"),
                    ));
                }
                seen.push(q);
            }
            match gate.kind {
                GateKind::ControlledNot => {
                    if gate.controls.is_empty() {
                        violations.push(Violation::at(
                            i,
                            ViolationKind::EmptyControlList,
                            "controlled-not without controls (use a not gate)".into(),
                        ));
                    }
                }
                _ => {
                    if !gate.controls.is_empty() {
                        violations.push(Violation::at(
                            i,
                            ViolationKind::ControlsOnSimpleGate,
                            format!("{:?} gate carries controls", gate.kind),
                        ));
                    }
                }
            }
        }

        if violations.is_empty() && !self.groups.is_empty() {
            match parse::parse_structure(self) {
                Err(err) => violations.push(Violation {
                    gate: err.gate,
                    kind: err.kind,
                    message: err.message,
                }),
                Ok(parsed) => {
                    if parsed.groups.len() != self.groups.len() {
                        violations.push(Violation {
                            gate: None,
                            kind: ViolationKind::MetadataMismatch,
                            message: format!(
                                "metadata lists {} groups, gate structure has {}",
                                self.groups.len(),
                                parsed.groups.len()
                            ),
                        });
                    } else {
                        for (i, (meta, derived)) in
                            self.groups.iter().zip(&parsed.groups).enumerate()
                        {
                            if !derived.matches(meta) {
                                violations.push(Violation {
                                    gate: Some(derived.span.0),
                                    kind: ViolationKind::MetadataMismatch,
                                    message: format!(
                                        "group {i}: metadata {}({},{}) sign {} span {:?} \
                                         disagrees with gate structure {}({},{}) sign {} span {:?}",
                                        meta.magnitude,
                                        meta.x,
                                        meta.y,
                                        meta.sign,
                                        meta.span,
                                        derived.magnitude,
                                        derived.x,
                                        derived.y,
                                        derived.sign,
                                        derived.span,
                                    ),
                                });
                            }
                        }
                    }
                }
            }
        }

        ValidationReport { violations }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    SelfControl,
    DuplicateControl,
    IndexOutOfRange,
    ControlsOnSimpleGate,
    EmptyControlList,
    UnterminatedGroup,
    MalformedGroup,
    MetadataMismatch,
}

impl std::fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::SelfControl => "self-control",
            Self::DuplicateControl => "duplicate control",
            Self::IndexOutOfRange => "index out of range",
            Self::ControlsOnSimpleGate => "controls on simple gate",
            Self::EmptyControlList => "empty control list",
            Self::UnterminatedGroup => "unterminated group",
            Self::MalformedGroup => "malformed group",
            Self::MetadataMismatch => "metadata mismatch",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub gate: Option<usize>,
    pub kind: ViolationKind,
    pub message: String,
}

impl Violation {
    fn at(gate: usize, kind: ViolationKind, message: String) -> Self {
        Self {
            gate: Some(gate),
            kind,
            message,
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.gate {
            Some(i) => write!(f, "gate {i}: {}: {}", self.kind, self.message),
            None => write!(f, "{}: {}", self.kind, self.message),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Turns a failed validation into an error, for callers that require a
/// well-formed circuit.
pub fn require_valid(circuit: &Circuit) -> Result<()> {
    let report = circuit.validate();
    if report.is_clean() {
        Ok(())
    } else {
        Err(Error::InvalidCircuit(report.summary()))
    }
}
