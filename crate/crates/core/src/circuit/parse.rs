//! Structural parser: re-derives coefficient groups from the gate list
//! alone. Validation uses it to cross-check group metadata and the decoder
//! uses it as the actual inverse mapping, so the metadata never gets to
//! vouch for itself.

use super::{Circuit, CoefficientGroup, Gate, GateKind, Polarity, ViolationKind, MAGNITUDE_BITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum GroupFamily {
    /// Trigger, fan-out, optional sign, closing reset (MTGSC / SCMNEQR).
    ResetClosed,
    /// Trigger, fan-out, optional sign, mirrored trigger (EFRQI family).
    ToffoliClosed,
    /// Fully position-controlled writes straight to the value register
    /// (NEQR-style pixel map; no auxiliary qubit involved).
    PixelMap,
}

#[derive(Debug, Clone)]
pub(crate) struct ParsedGroup {
    pub x: u8,
    pub y: u8,
    pub magnitude: u16,
    pub sign: i8,
    pub span: (usize, usize),
    pub family: GroupFamily,
}

impl ParsedGroup {
    pub fn matches(&self, meta: &CoefficientGroup) -> bool {
        self.x == meta.x
            && self.y == meta.y
            && self.magnitude == meta.magnitude
            && self.sign == meta.sign
            && self.span == meta.span
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ParsedStructure {
    pub groups: Vec<ParsedGroup>,
}

#[derive(Debug, Clone)]
pub(crate) struct StructureError {
    pub gate: Option<usize>,
    pub kind: ViolationKind,
    pub message: String,
}

impl StructureError {
    fn at(gate: usize, kind: ViolationKind, message: impl Into<String>) -> Self {
        Self {
            gate: Some(gate),
            kind,
            message: message.into(),
        }
    }
}

type ParseResult<T> = std::result::Result<T, StructureError>;

/// Splits the gate list into preparation Hadamards followed by coefficient
/// groups. Expects per-gate invariants (indices, control lists) to already
/// hold.
pub(crate) fn parse_structure(circuit: &Circuit) -> ParseResult<ParsedStructure> {
    let reg = &circuit.register;
    let gates = &circuit.gates;
    let aux = reg.aux_qubit();

    let mut i = 0;
    while i < gates.len() && gates[i].kind == GateKind::Hadamard {
        if !reg.is_position(gates[i].target) {
            return Err(StructureError::at(
                i,
                ViolationKind::MalformedGroup,
                format!(
                    "preparation hadamard on qubit {} outside the position register",
                    gates[i].target
                ),
            ));
        }
        i += 1;
    }
    let mut groups = Vec::new();
    while i < gates.len() {
        let gate = &gates[i];
        let group = if gate.target == aux
            && matches!(gate.kind, GateKind::Not | GateKind::ControlledNot)
        {
            parse_triggered_group(circuit, &mut i)?
        } else if reg.is_coeff(gate.target)
            && matches!(gate.kind, GateKind::Not | GateKind::ControlledNot)
            && gate.controls.iter().all(|&(q, _)| reg.is_position(q))
        {
            parse_pixel_group(circuit, &mut i)?
        } else {
            return Err(StructureError::at(
                i,
                ViolationKind::MalformedGroup,
                format!(
                    "expected a group opener, found {:?} on qubit {}",
                    gate.kind, gate.target
                ),
            ));
        };
        groups.push(group);
    }

    Ok(ParsedStructure { groups })
}

/// Reads position bits off a control list: on-one sets the bit, on-zero and
/// absent leave it clear.
fn position_from_controls(
    circuit: &Circuit,
    gate_index: usize,
    controls: &[(usize, Polarity)],
) -> ParseResult<(u8, u8)> {
    let reg = &circuit.register;
    let (mut x, mut y) = (0u8, 0u8);
    for &(q, polarity) in controls {
        if !reg.is_position(q) {
            return Err(StructureError::at(
                gate_index,
                ViolationKind::MalformedGroup,
                format!("control on qubit {q} outside the position register"),
            ));
        }
        if polarity == Polarity::One {
            let offset = q - reg.coeff - reg.aux;
            if offset < reg.pos_x {
                x |= 1 << offset;
            } else {
                y |= 1 << (offset - reg.pos_x);
            }
        }
    }
    Ok((x, y))
}

fn parse_triggered_group(circuit: &Circuit, i: &mut usize) -> ParseResult<ParsedGroup> {
    let gates = &circuit.gates;
    let reg = &circuit.register;
    let aux = reg.aux_qubit();
    let start = *i;

    let trigger = &gates[start];
    let (x, y) = position_from_controls(circuit, start, &trigger.controls)?;
    *i += 1;

    let mut magnitude: u16 = 0;
    while *i < gates.len() && is_fanout(&gates[*i], aux) {
        let bit = gates[*i].target;
        if magnitude & (1 << bit) != 0 {
            return Err(StructureError::at(
                *i,
                ViolationKind::MalformedGroup,
                format!("magnitude bit {bit} written twice"),
            ));
        }
        magnitude |= 1 << bit;
        *i += 1;
    }

    let mut sign: i8 = 1;
    if *i < gates.len()
        && gates[*i].kind == GateKind::Not
        && gates[*i].target == reg.sign_qubit()
    {
        sign = -1;
        *i += 1;
    }

    if *i >= gates.len() {
        return Err(StructureError::at(
            start,
            ViolationKind::UnterminatedGroup,
            "gate list ends before the group is closed",
        ));
    }
    let closer = &gates[*i];
    let family = if closer.kind == GateKind::Reset && closer.target == aux {
        GroupFamily::ResetClosed
    } else if closer == trigger {
        GroupFamily::ToffoliClosed
    } else {
        return Err(StructureError::at(
            *i,
            ViolationKind::UnterminatedGroup,
            "group closed neither by an auxiliary reset nor a mirrored trigger",
        ));
    };
    *i += 1;

    if magnitude == 0 {
        return Err(StructureError::at(
            start,
            ViolationKind::MalformedGroup,
            "group encodes magnitude 0 (no fan-out gates)",
        ));
    }

    Ok(ParsedGroup {
        x,
        y,
        magnitude,
        sign,
        span: (start, *i - 1),
        family,
    })
}

fn is_fanout(gate: &Gate, aux: usize) -> bool {
    gate.kind == GateKind::ControlledNot
        && gate.target < MAGNITUDE_BITS
        && gate.controls == [(aux, Polarity::One)]
}

/// A pixel-map group: consecutive value-register writes sharing one full
/// position-control pattern.
fn parse_pixel_group(circuit: &Circuit, i: &mut usize) -> ParseResult<ParsedGroup> {
    let gates = &circuit.gates;
    let reg = &circuit.register;
    let start = *i;

    let pattern = gates[start].controls.clone();
    let mut covered: Vec<usize> = pattern.iter().map(|&(q, _)| q).collect();
    covered.sort_unstable();
    if covered != reg.position_qubits() {
        return Err(StructureError::at(
            start,
            ViolationKind::MalformedGroup,
            "pixel-map gate must control on every position qubit",
        ));
    }
    let (x, y) = position_from_controls(circuit, start, &pattern)?;

    let mut magnitude: u16 = 0;
    while *i < gates.len()
        && matches!(gates[*i].kind, GateKind::Not | GateKind::ControlledNot)
        && reg.is_coeff(gates[*i].target)
        && gates[*i].target < MAGNITUDE_BITS
        && gates[*i].controls == pattern
    {
        let bit = gates[*i].target;
        if magnitude & (1 << bit) != 0 {
            return Err(StructureError::at(
                *i,
                ViolationKind::MalformedGroup,
                format!("value bit {bit} written twice"),
            ));
        }
        magnitude |= 1 << bit;
        *i += 1;
    }

    Ok(ParsedGroup {
        x,
        y,
        magnitude,
        sign: 1,
        span: (start, *i - 1),
        family: GroupFamily::PixelMap,
    })
}
