//! Column-major JSON export for the drag-and-drop circuit simulator used to
//! eyeball these circuits: one column per gate, one row per qubit, `1` as
//! the identity filler, hollow-circle anti-controls and the |0><0| symbol
//! for reset.

use serde_json::{json, Value};

use super::{Circuit, GateKind, Polarity};
use crate::error::{Error, Result};

/// The external tool renders at most 16 wires.
pub const MAX_VISUAL_QUBITS: usize = 16;

/// Emits `{"cols": [...]}` with one column per gate.
pub fn export_visual(circuit: &Circuit) -> Result<String> {
    let total = circuit.register.total();
    if total > MAX_VISUAL_QUBITS {
        return Err(Error::TooManyQubits {
            total,
            limit: MAX_VISUAL_QUBITS,
        });
    }
    super::require_valid(circuit)?;

    let mut cols: Vec<Value> = Vec::with_capacity(circuit.gates.len());
    for gate in &circuit.gates {
        let mut col: Vec<Value> = vec![json!(1); total];
        match gate.kind {
            GateKind::Hadamard => col[gate.target] = json!("H"),
            GateKind::Identity => {}
            GateKind::Not | GateKind::ControlledNot => {
                col[gate.target] = json!("X");
                for &(q, polarity) in &gate.controls {
                    col[q] = match polarity {
                        Polarity::One => json!("•"),
                        Polarity::Zero => json!("◦"),
                    };
                }
            }
            GateKind::Reset => col[gate.target] = json!("|0⟩⟨0|"),
        }
        cols.push(Value::Array(col));
    }
    Ok(serde_json::to_string(&json!({ "cols": cols }))?)
}

/// Shareable URL embedding the exported layout in the fragment.
pub fn quirk_url(circuit: &Circuit) -> Result<String> {
    let layout = export_visual(circuit)?;
    Ok(format!(
        "https://algassert.com/quirk#circuit={}",
        percent_encode(&layout)
    ))
}

fn percent_encode(text: &str) -> String {
    let mut out = String::with_capacity(text.len() * 3);
    for byte in text.bytes() {
        match byte {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'_' | b'.' | b'~' | b'{' | b'}'
            | b'[' | b']' | b':' | b',' => out.push(byte as char),
            _ => out.push_str(&format!("%{byte:02X}")),
        }
    }
    out
}
