//! Circuit builders for the four representation schemes and the gate-count
//! accounting that ranks them.
//!
//! All three DCT-based schemes share one group shape per non-zero
//! coefficient: a trigger onto the auxiliary qubit conditioned on the
//! in-block position, a fan-out from the auxiliary onto every set magnitude
//! bit, an optional sign gate, and a closing operation. They differ in two
//! knobs:
//!
//! * trigger controls: `mtgsc` keeps only the position digits that are 1
//!   (a zero digit contributes no control at all); `scmneqr` and `dctefrqi`
//!   control on every position qubit with mixed polarity;
//! * closing: `mtgsc`/`scmneqr` reset the auxiliary, `dctefrqi` repeats the
//!   full trigger.
//!
//! `neqr` has no auxiliary: every set bit of every pixel is written by its
//! own fully position-controlled NOT, which is why it is capped at one
//! block.
//!
//! Gate accounting counts connections, not decomposed elementary gates: one
//! control or target line touch is one unit, so a full trigger costs
//! `pos_x + pos_y` and the discarded zero-controls of `mtgsc` come back as
//! the `b_z` credit.

use serde::{Deserialize, Serialize};

use crate::circuit::{
    Circuit, CoefficientGroup, Gate, Polarity, QubitRegister, MAGNITUDE_BITS,
};
use crate::error::{Error, Result};
use crate::image_io::{GrayImage, BLOCK_SIZE};
use crate::transform::QuantizedBlock;

/// The four encoding schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Mtgsc,
    Scmneqr,
    Dctefrqi,
    Neqr,
}

impl Scheme {
    pub const DCT_SCHEMES: [Scheme; 3] = [Scheme::Mtgsc, Scheme::Scmneqr, Scheme::Dctefrqi];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Mtgsc => "mtgsc",
            Scheme::Scmneqr => "scmneqr",
            Scheme::Dctefrqi => "dctefrqi",
            Scheme::Neqr => "neqr",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mtgsc" => Ok(Scheme::Mtgsc),
            "scmneqr" => Ok(Scheme::Scmneqr),
            "dctefrqi" => Ok(Scheme::Dctefrqi),
            "neqr" => Ok(Scheme::Neqr),
            other => Err(format!(
                "unknown scheme {other:?} (expected mtgsc, scmneqr, dctefrqi or neqr)"
            )),
        }
    }
}

/// One non-zero quantized coefficient: block address, in-block position,
/// magnitude and sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseCoefficient {
    pub block_row: u32,
    pub block_col: u32,
    pub x: u8,
    pub y: u8,
    pub magnitude: u16,
    pub sign: i8,
}

/// A rectangular grid of quantized blocks, `cols` blocks per row.
#[derive(Debug, Clone)]
pub struct BlockGrid {
    pub rows: u32,
    pub cols: u32,
    pub q_factor: u32,
    pub blocks: Vec<QuantizedBlock>,
}

impl BlockGrid {
    pub fn block(&self, row: u32, col: u32) -> &QuantizedBlock {
        &self.blocks[(row * self.cols + col) as usize]
    }
}

/// Sparsification output: the coefficient list plus how many magnitudes had
/// to be clamped to the 8-bit register (possible only below q = 2, where the
/// DC term can reach 2040).
#[derive(Debug, Clone)]
pub struct SparseList {
    pub coefficients: Vec<SparseCoefficient>,
    pub clamped: usize,
}

/// Collects the non-zero entries of every block in raster order
/// (block_row, block_col, y, x), dropping zeros.
pub fn sparsify(grid: &BlockGrid) -> SparseList {
    let mut coefficients = Vec::new();
    let mut clamped = 0;
    for row in 0..grid.rows {
        for col in 0..grid.cols {
            let block = grid.block(row, col);
            for y in 0..BLOCK_SIZE as usize {
                for x in 0..BLOCK_SIZE as usize {
                    let i = y * BLOCK_SIZE as usize + x;
                    if block.magnitudes[i] == 0 {
                        continue;
                    }
                    let magnitude = if block.magnitudes[i] > 255 {
                        clamped += 1;
                        255
                    } else {
                        block.magnitudes[i]
                    };
                    coefficients.push(SparseCoefficient {
                        block_row: row,
                        block_col: col,
                        x: x as u8,
                        y: y as u8,
                        magnitude,
                        sign: block.signs[i],
                    });
                }
            }
        }
    }
    SparseList {
        coefficients,
        clamped,
    }
}

/// Picks the register for a coefficient list: the standard 15 qubits, plus
/// the dedicated sign qubit when a negative coefficient coexists with a
/// magnitude that already uses bit 7.
pub fn register_for(coefficients: &[SparseCoefficient]) -> QubitRegister {
    let any_negative = coefficients.iter().any(|c| c.sign < 0);
    let max_magnitude = coefficients.iter().map(|c| c.magnitude).max().unwrap_or(0);
    QubitRegister::with_sign_slot(any_negative && max_magnitude > 127)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum TriggerStyle {
    /// Controls only on position digits that are 1 (zero digits discarded).
    DiscardZeroDigits,
    /// One control per position qubit, polarity matching the digit.
    FullControls,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Closing {
    Reset,
    MirrorTrigger,
}

/// MTGSC: one-polarity triggers with zero digits discarded, reset-closed.
pub fn build_mtgsc(coefficients: &[SparseCoefficient], reg: &QubitRegister) -> Result<Circuit> {
    build_dct_scheme(coefficients, reg, TriggerStyle::DiscardZeroDigits, Closing::Reset)
}

/// SCMNEQR: full mixed-polarity triggers, reset-closed.
pub fn build_scmneqr(coefficients: &[SparseCoefficient], reg: &QubitRegister) -> Result<Circuit> {
    build_dct_scheme(coefficients, reg, TriggerStyle::FullControls, Closing::Reset)
}

/// DCTEFRQI: full mixed-polarity triggers, closed by repeating the trigger.
pub fn build_dctefrqi(coefficients: &[SparseCoefficient], reg: &QubitRegister) -> Result<Circuit> {
    build_dct_scheme(
        coefficients,
        reg,
        TriggerStyle::FullControls,
        Closing::MirrorTrigger,
    )
}

fn build_dct_scheme(
    coefficients: &[SparseCoefficient],
    reg: &QubitRegister,
    style: TriggerStyle,
    closing: Closing,
) -> Result<Circuit> {
    let any_negative = coefficients.iter().any(|c| c.sign < 0);
    for c in coefficients {
        if c.magnitude == 0 || c.magnitude > 255 {
            return Err(Error::RegisterTooSmall(format!(
                "magnitude {} outside the encodable range 1..=255",
                c.magnitude
            )));
        }
        if (c.x as u32) >= (1 << reg.pos_x) || (c.y as u32) >= (1 << reg.pos_y) {
            return Err(Error::RegisterTooSmall(format!(
                "position ({},{}) does not fit {}+{} position qubits",
                c.x, c.y, reg.pos_x, reg.pos_y
            )));
        }
        if any_negative && c.magnitude > 127 && reg.coeff < MAGNITUDE_BITS + 1 {
            return Err(Error::RegisterTooSmall(
                "sign qubit collides with magnitude bit 7; use a register with a sign slot"
                    .into(),
            ));
        }
    }

    let mut circuit = Circuit::new(*reg);
    for bit in 0..reg.pos_x {
        circuit.gates.push(Gate::h(reg.pos_x_qubit(bit)));
    }
    for bit in 0..reg.pos_y {
        circuit.gates.push(Gate::h(reg.pos_y_qubit(bit)));
    }

    let aux = reg.aux_qubit();
    for c in coefficients {
        let first = circuit.gates.len();
        let trigger = Gate::cx(trigger_controls(reg, c.x, c.y, style), aux);
        circuit.gates.push(trigger.clone());
        for bit in 0..MAGNITUDE_BITS {
            if c.magnitude & (1 << bit) != 0 {
                circuit
                    .gates
                    .push(Gate::cx(vec![(aux, Polarity::One)], bit));
            }
        }
        if c.sign < 0 {
            circuit.gates.push(Gate::x(reg.sign_qubit()));
        }
        circuit.gates.push(match closing {
            Closing::Reset => Gate::reset(aux),
            Closing::MirrorTrigger => trigger,
        });
        circuit.groups.push(CoefficientGroup {
            block: (c.block_row, c.block_col),
            x: c.x,
            y: c.y,
            magnitude: c.magnitude,
            sign: c.sign,
            span: (first, circuit.gates.len() - 1),
        });
    }
    Ok(circuit)
}

fn trigger_controls(
    reg: &QubitRegister,
    x: u8,
    y: u8,
    style: TriggerStyle,
) -> Vec<(usize, Polarity)> {
    let mut controls = Vec::new();
    let mut push = |qubit: usize, digit_is_one: bool| match (style, digit_is_one) {
        (_, true) => controls.push((qubit, Polarity::One)),
        (TriggerStyle::FullControls, false) => controls.push((qubit, Polarity::Zero)),
        (TriggerStyle::DiscardZeroDigits, false) => {}
    };
    for bit in 0..reg.pos_x {
        push(reg.pos_x_qubit(bit), x & (1 << bit) != 0);
    }
    for bit in 0..reg.pos_y {
        push(reg.pos_y_qubit(bit), y & (1 << bit) != 0);
    }
    controls
}

/// NEQR-style pixel map for images of at most one block: every set bit of
/// every pixel is written by a NOT controlled on all position qubits.
pub fn build_neqr(image: &GrayImage, reg: &QubitRegister) -> Result<Circuit> {
    if image.width() > BLOCK_SIZE || image.height() > BLOCK_SIZE {
        return Err(Error::ImageTooLarge {
            width: image.width(),
            height: image.height(),
            limit: BLOCK_SIZE,
        });
    }
    let needed = QubitRegister::for_image_dims(image.width(), image.height());
    if (reg.pos_x, reg.pos_y) != (needed.pos_x, needed.pos_y) {
        return Err(Error::RegisterTooSmall(format!(
            "pixel map of a {}x{} image needs exactly {}+{} position qubits, register has {}+{}",
            image.width(),
            image.height(),
            needed.pos_x,
            needed.pos_y,
            reg.pos_x,
            reg.pos_y
        )));
    }

    let mut circuit = Circuit::new(*reg);
    for bit in 0..reg.pos_x {
        circuit.gates.push(Gate::h(reg.pos_x_qubit(bit)));
    }
    for bit in 0..reg.pos_y {
        circuit.gates.push(Gate::h(reg.pos_y_qubit(bit)));
    }

    for y in 0..image.height() {
        for x in 0..image.width() {
            let value = image.get(x, y);
            if value == 0 {
                continue;
            }
            let first = circuit.gates.len();
            let mut controls = Vec::with_capacity(reg.pos_x + reg.pos_y);
            for bit in 0..reg.pos_x {
                let polarity = if x & (1 << bit) != 0 {
                    Polarity::One
                } else {
                    Polarity::Zero
                };
                controls.push((reg.pos_x_qubit(bit), polarity));
            }
            for bit in 0..reg.pos_y {
                let polarity = if y & (1 << bit) != 0 {
                    Polarity::One
                } else {
                    Polarity::Zero
                };
                controls.push((reg.pos_y_qubit(bit), polarity));
            }
            for bit in 0..MAGNITUDE_BITS {
                if value & (1 << bit) != 0 {
                    circuit.gates.push(Gate::cx(controls.clone(), bit));
                }
            }
            circuit.groups.push(CoefficientGroup {
                block: (0, 0),
                x: x as u8,
                y: y as u8,
                magnitude: value as u16,
                sign: 1,
                span: (first, circuit.gates.len() - 1),
            });
        }
    }
    Ok(circuit)
}

/// Per-image gate accounting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateStats {
    /// Non-zero coefficients encoded.
    pub n_tcn: u64,
    /// Total set bits across all magnitudes.
    pub q_o: u64,
    /// Sign gates (one per negative coefficient).
    pub s_bit: u64,
    /// Auxiliary touches (one per coefficient; zero for the pixel map).
    pub a_bit: u64,
    /// Toffoli connection charge at full control count.
    pub b_t: u64,
    /// Reset gates.
    pub b_rg: u64,
    /// Zero-controls discarded by the trigger modification.
    pub b_z: u64,
    /// Net gate count: `b_t + b_rg - b_z`.
    pub b_s0: u64,
    /// Block-positional addressing charge.
    pub bpe: u64,
    /// State-preparation gates: one identity per value/auxiliary qubit plus
    /// one Hadamard per position qubit.
    pub prep_gates: u64,
    /// `q_o + s_bit + b_s0 + a_bit + bpe` (preparation excluded).
    pub total_gates: u64,
    /// `(total_gates + prep_gates) / pixel count`.
    pub gates_per_pixel: f64,
}

/// Computes [`GateStats`] from a circuit's group metadata.
///
/// `image_dims` are the unpadded image dimensions; they set the pixel-count
/// divisor and the block grid for the positional charge.
pub fn count_gates(circuit: &Circuit, image_dims: (u32, u32), scheme: Scheme) -> Result<GateStats> {
    let has_value_gates = circuit
        .gates
        .iter()
        .any(|g| g.kind != crate::circuit::GateKind::Hadamard);
    if circuit.groups.is_empty() && has_value_gates {
        return Err(Error::MissingGroupMetadata);
    }

    let reg = &circuit.register;
    let n_pos = (reg.pos_x + reg.pos_y) as u64;
    let n_tcn = circuit.groups.len() as u64;
    let q_o: u64 = circuit
        .groups
        .iter()
        .map(|g| g.magnitude.count_ones() as u64)
        .sum();
    let s_bit = circuit.groups.iter().filter(|g| g.sign < 0).count() as u64;
    let position_ones: u64 = circuit
        .groups
        .iter()
        .map(|g| (g.x.count_ones() + g.y.count_ones()) as u64)
        .sum();

    let (b_t, b_rg, b_z, a_bit) = match scheme {
        // Reset-closed schemes: full trigger + one reset connection per
        // coefficient; mtgsc earns the discarded-zero credit back.
        Scheme::Mtgsc => ((n_pos + 1) * n_tcn, n_tcn, n_pos * n_tcn - position_ones, n_tcn),
        Scheme::Scmneqr => ((n_pos + 1) * n_tcn, n_tcn, 0, n_tcn),
        // The closing Toffoli repeats all controls and touches the aux again.
        Scheme::Dctefrqi => ((n_pos + n_pos + 1) * n_tcn, 0, 0, n_tcn),
        // Pixel map: every set bit carries the full position control wall.
        Scheme::Neqr => (n_pos * q_o, 0, 0, 0),
    };
    let b_s0 = b_t + b_rg - b_z;

    let (width, height) = image_dims;
    let n_cb = width.div_ceil(BLOCK_SIZE) as u64;
    let n_rb = height.div_ceil(BLOCK_SIZE) as u64;
    let address_bits = |n: u64| 64 - (n.max(2) - 1).leading_zeros() as u64;
    let bpe = n_rb * n_cb * (address_bits(n_cb) + address_bits(n_rb));

    let prep_gates = reg.coeff as u64 + 1 + n_pos;
    let total_gates = q_o + s_bit + b_s0 + a_bit + bpe;
    let gates_per_pixel = (total_gates + prep_gates) as f64 / (width as f64 * height as f64);

    Ok(GateStats {
        n_tcn,
        q_o,
        s_bit,
        a_bit,
        b_t,
        b_rg,
        b_z,
        b_s0,
        bpe,
        prep_gates,
        total_gates,
        gates_per_pixel,
    })
}

/// Connection budget for encoding `q` coefficients in one `s_x` by `s_y`
/// block: `3q + log2(s_x) + log2(s_y) + q * s_x * s_y`.
pub fn complexity_bound(q: u64, s_x: u64, s_y: u64) -> Result<u64> {
    for s in [s_x, s_y] {
        if s == 0 || !s.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(s));
        }
    }
    Ok(3 * q + s_x.trailing_zeros() as u64 + s_y.trailing_zeros() as u64 + q * s_x * s_y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;

    /// The worked five-coefficient reference list: 125(0,0), 1(1,0), 1(4,0),
    /// 4(0,1), 16(3,0), all positive, one block.
    pub(crate) fn reference_five() -> Vec<SparseCoefficient> {
        [(125u16, 0u8, 0u8), (1, 1, 0), (1, 4, 0), (4, 0, 1), (16, 3, 0)]
            .into_iter()
            .map(|(magnitude, x, y)| SparseCoefficient {
                block_row: 0,
                block_col: 0,
                x,
                y,
                magnitude,
                sign: 1,
            })
            .collect()
    }

    fn single(magnitude: u16, x: u8, y: u8) -> Vec<SparseCoefficient> {
        single_signed(magnitude, x, y, 1)
    }

    fn single_signed(magnitude: u16, x: u8, y: u8, sign: i8) -> Vec<SparseCoefficient> {
        vec![SparseCoefficient {
            block_row: 0,
            block_col: 0,
            x,
            y,
            magnitude,
            sign,
        }]
    }

    #[test]
    fn mtgsc_group_for_62_discards_zero_digits() {
        // 62 = 00111110b, X=3 contributes two on-one controls, Y=2 one.
        let reg = QubitRegister::standard();
        let circuit = build_mtgsc(&single(62, 3, 2), &reg).unwrap();
        assert!(circuit.validate().is_clean());
        assert_eq!(circuit.gates.len(), 6 + 7); // prep + group
        let trigger = &circuit.gates[6];
        assert_eq!(trigger.kind, GateKind::ControlledNot);
        assert_eq!(
            trigger.controls,
            vec![(9, Polarity::One), (10, Polarity::One), (13, Polarity::One)]
        );
        let fanout_targets: Vec<usize> = circuit.gates[7..12].iter().map(|g| g.target).collect();
        assert_eq!(fanout_targets, vec![1, 2, 3, 4, 5]);
        assert_eq!(circuit.gates[12].kind, GateKind::Reset);
        assert_eq!(circuit.groups[0].span, (6, 12));
    }

    #[test]
    fn scmneqr_group_for_62_controls_every_position_qubit() {
        let reg = QubitRegister::standard();
        let circuit = build_scmneqr(&single(62, 3, 2), &reg).unwrap();
        let trigger = &circuit.gates[6];
        assert_eq!(trigger.controls.len(), 6);
        assert_eq!(
            trigger.controls,
            vec![
                (9, Polarity::One),
                (10, Polarity::One),
                (11, Polarity::Zero),
                (12, Polarity::Zero),
                (13, Polarity::One),
                (14, Polarity::Zero),
            ]
        );
    }

    #[test]
    fn origin_coefficient_triggers_unconditionally_under_mtgsc() {
        let reg = QubitRegister::standard();
        let circuit = build_mtgsc(&single(125, 0, 0), &reg).unwrap();
        let trigger = &circuit.gates[6];
        assert_eq!(trigger.kind, GateKind::Not);
        assert!(trigger.controls.is_empty());
        assert!(circuit.validate().is_clean());
    }

    #[test]
    fn all_ones_position_makes_mtgsc_equal_scmneqr() {
        let reg = QubitRegister::standard();
        let a = build_mtgsc(&single(77, 7, 7), &reg).unwrap();
        let b = build_scmneqr(&single(77, 7, 7), &reg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dctefrqi_closes_with_mirrored_trigger() {
        let reg = QubitRegister::standard();
        let coeffs = single(62, 3, 2);
        let efrqi = build_dctefrqi(&coeffs, &reg).unwrap();
        let scm = build_scmneqr(&coeffs, &reg).unwrap();
        assert_eq!(efrqi.gates.len(), scm.gates.len());
        let span = efrqi.groups[0].span;
        assert_eq!(efrqi.gates[span.0], efrqi.gates[span.1]);
        assert!(efrqi.validate().is_clean());
    }

    #[test]
    fn dctefrqi_worked_pixels_use_two_triggers_each() {
        // 205 at (1,0), 49 at (0,1), 255 at (1,1): three groups, each opened
        // and closed by the same full-control Toffoli.
        let coeffs: Vec<SparseCoefficient> = [(205u16, 1u8, 0u8), (49, 0, 1), (255, 1, 1)]
            .into_iter()
            .map(|(magnitude, x, y)| SparseCoefficient {
                block_row: 0,
                block_col: 0,
                x,
                y,
                magnitude,
                sign: 1,
            })
            .collect();
        let reg = register_for(&coeffs);
        let circuit = build_dctefrqi(&coeffs, &reg).unwrap();
        assert_eq!(circuit.groups.len(), 3);
        for group in &circuit.groups {
            let opener = &circuit.gates[group.span.0];
            let closer = &circuit.gates[group.span.1];
            assert_eq!(opener, closer);
            assert_eq!(opener.target, reg.aux_qubit());
            assert_eq!(opener.controls.len(), 6);
        }
        assert!(circuit.validate().is_clean());
    }

    #[test]
    fn negative_sign_emits_a_sign_gate() {
        let reg = QubitRegister::standard();
        let circuit = build_mtgsc(&single_signed(62, 3, 2, -1), &reg).unwrap();
        let span = circuit.groups[0].span;
        let sign_gate = &circuit.gates[span.1 - 1];
        assert_eq!(sign_gate.kind, GateKind::Not);
        assert_eq!(sign_gate.target, reg.sign_qubit());
    }

    #[test]
    fn large_negative_magnitude_requires_sign_slot() {
        let coeffs = single_signed(200, 1, 1, -1);
        let err = build_mtgsc(&coeffs, &QubitRegister::standard()).unwrap_err();
        assert!(matches!(err, Error::RegisterTooSmall(_)));
        let reg = register_for(&coeffs);
        assert_eq!(reg.total(), 16);
        let circuit = build_mtgsc(&coeffs, &reg).unwrap();
        assert!(circuit.validate().is_clean());
        assert_eq!(circuit.gates[circuit.groups[0].span.1 - 1].target, 8);
    }

    #[test]
    fn zero_magnitude_is_rejected() {
        for build in [build_mtgsc, build_scmneqr, build_dctefrqi] {
            assert!(build(&single(0, 1, 1), &QubitRegister::standard()).is_err());
        }
    }

    #[test]
    fn oversized_position_is_rejected() {
        let mut coeffs = single(10, 7, 7);
        coeffs[0].x = 9;
        assert!(matches!(
            build_mtgsc(&coeffs, &QubitRegister::standard()),
            Err(Error::RegisterTooSmall(_))
        ));
    }

    #[test]
    fn empty_list_builds_preparation_only() {
        let circuit = build_mtgsc(&[], &QubitRegister::standard()).unwrap();
        assert_eq!(circuit.gates.len(), 6);
        assert!(circuit.groups.is_empty());
        let stats = count_gates(&circuit, (8, 8), Scheme::Mtgsc).unwrap();
        assert_eq!(stats.n_tcn, 0);
        assert_eq!(stats.total_gates, stats.bpe);
        assert_eq!(stats.prep_gates, 15);
    }

    #[test]
    fn reference_list_counts_match_hand_arithmetic() {
        let coeffs = reference_five();
        let reg = register_for(&coeffs);
        assert_eq!(reg.total(), 15);
        let dims = (64, 64); // 8x8 block grid: bpe = 8*8*(3+3)
        type Builder = fn(&[SparseCoefficient], &QubitRegister) -> Result<Circuit>;
        let cases: [(Scheme, Builder, u64, u64, u64, u64); 3] = [
            (Scheme::Scmneqr, build_scmneqr, 35, 5, 0, 40),
            (Scheme::Mtgsc, build_mtgsc, 35, 5, 25, 15),
            (Scheme::Dctefrqi, build_dctefrqi, 65, 0, 0, 65),
        ];
        for (scheme, build, b_t, b_rg, b_z, b_s0) in cases {
            let circuit: Circuit = build(&coeffs, &reg).unwrap();
            let stats = count_gates(&circuit, dims, scheme).unwrap();
            assert_eq!(stats.b_t, b_t, "{scheme} b_t");
            assert_eq!(stats.b_rg, b_rg, "{scheme} b_rg");
            assert_eq!(stats.b_z, b_z, "{scheme} b_z");
            assert_eq!(stats.b_s0, b_s0, "{scheme} b_s0");
            assert_eq!(stats.b_s0, stats.b_t + stats.b_rg - stats.b_z);
            assert_eq!(stats.n_tcn, 5);
            assert_eq!(stats.q_o, 10);
            assert_eq!(stats.s_bit, 0);
            assert_eq!(stats.a_bit, 5);
            assert_eq!(stats.bpe, 384);
            assert_eq!(stats.prep_gates, 15);
            let expected_gpp = (stats.total_gates + stats.prep_gates) as f64 / 4096.0;
            assert_eq!(stats.gates_per_pixel, expected_gpp);
        }
    }

    #[test]
    fn stats_ordering_on_reference_list() {
        let coeffs = reference_five();
        let reg = register_for(&coeffs);
        let gpp = |scheme: Scheme, circuit: &Circuit| {
            count_gates(circuit, (64, 64), scheme).unwrap().gates_per_pixel
        };
        let m = gpp(Scheme::Mtgsc, &build_mtgsc(&coeffs, &reg).unwrap());
        let s = gpp(Scheme::Scmneqr, &build_scmneqr(&coeffs, &reg).unwrap());
        let d = gpp(Scheme::Dctefrqi, &build_dctefrqi(&coeffs, &reg).unwrap());
        assert!(m < s && s < d, "{m} {s} {d}");
    }

    #[test]
    fn neqr_2x2_example() {
        let image = GrayImage::from_pixels(2, 2, vec![0, 100, 200, 255]).unwrap();
        let reg = QubitRegister::for_image_dims(2, 2);
        let circuit = build_neqr(&image, &reg).unwrap();
        assert!(circuit.validate().is_clean());
        assert_eq!(circuit.groups.len(), 3); // pixel 0 contributes nothing
        // 255 contributes 8 gates, each controlled by both position qubits.
        let full = circuit.groups.last().unwrap();
        assert_eq!(full.magnitude, 255);
        assert_eq!(full.span.1 - full.span.0 + 1, 8);
        for gate in &circuit.gates[full.span.0..=full.span.1] {
            assert_eq!(gate.controls.len(), 2);
        }
        let stats = count_gates(&circuit, (2, 2), Scheme::Neqr).unwrap();
        assert_eq!(stats.n_tcn, 3);
        assert_eq!(stats.q_o, 14);
        assert_eq!(stats.b_t, 28);
        assert_eq!(stats.a_bit, 0);
        assert_eq!(stats.prep_gates, 11);
    }

    #[test]
    fn neqr_1x1_single_bit_is_one_bare_not() {
        let image = GrayImage::from_pixels(1, 1, vec![1]).unwrap();
        let reg = QubitRegister::for_image_dims(1, 1);
        let circuit = build_neqr(&image, &reg).unwrap();
        assert_eq!(circuit.gates.len(), 1); // zero preparation hadamards
        assert_eq!(circuit.gates[0], Gate::x(0));
        assert!(circuit.validate().is_clean());
    }

    #[test]
    fn neqr_all_zero_image_is_preparation_only() {
        let image = GrayImage::from_pixels(2, 2, vec![0; 4]).unwrap();
        let reg = QubitRegister::for_image_dims(2, 2);
        let circuit = build_neqr(&image, &reg).unwrap();
        assert_eq!(circuit.gates.len(), 2);
        assert!(circuit.groups.is_empty());
    }

    #[test]
    fn neqr_rejects_oversized_images_and_wrong_registers() {
        let big = GrayImage::from_fn(9, 4, |_, _| 1);
        assert!(matches!(
            build_neqr(&big, &QubitRegister::standard()),
            Err(Error::ImageTooLarge { .. })
        ));
        let image = GrayImage::from_pixels(2, 2, vec![1; 4]).unwrap();
        assert!(matches!(
            build_neqr(&image, &QubitRegister::standard()),
            Err(Error::RegisterTooSmall(_))
        ));
    }

    #[test]
    fn complexity_bound_examples() {
        assert_eq!(complexity_bound(5, 8, 8).unwrap(), 341);
        assert_eq!(complexity_bound(1, 2, 2).unwrap(), 9);
        assert_eq!(complexity_bound(0, 8, 8).unwrap(), 6);
        assert!(matches!(
            complexity_bound(1, 3, 8),
            Err(Error::NotPowerOfTwo(3))
        ));
    }

    #[test]
    fn count_gates_requires_metadata() {
        let reg = QubitRegister::standard();
        let mut circuit = build_mtgsc(&single(5, 1, 1), &reg).unwrap();
        circuit.groups.clear();
        assert!(matches!(
            count_gates(&circuit, (8, 8), Scheme::Mtgsc),
            Err(Error::MissingGroupMetadata)
        ));
    }

    #[test]
    fn bpe_uses_minimum_one_address_bit_per_axis() {
        let reg = QubitRegister::standard();
        let circuit = build_mtgsc(&[], &reg).unwrap();
        let stats = count_gates(&circuit, (8, 8), Scheme::Mtgsc).unwrap();
        assert_eq!(stats.bpe, 2); // 1x1 grid still charges 1+1 address bits
        let stats = count_gates(&circuit, (512, 512), Scheme::Mtgsc).unwrap();
        assert_eq!(stats.bpe, 64 * 64 * 12);
    }

    #[test]
    fn sparsify_walks_blocks_in_raster_order() {
        let mut block_a = QuantizedBlock {
            magnitudes: [0; 64],
            signs: [0; 64],
            q_factor: 8,
        };
        block_a.magnitudes[1] = 3; // (x=1, y=0)
        block_a.signs[1] = -1;
        block_a.magnitudes[8] = 7; // (x=0, y=1)
        block_a.signs[8] = 1;
        let mut block_b = block_a.clone();
        block_b.magnitudes[1] = 300; // clamps
        let grid = BlockGrid {
            rows: 1,
            cols: 2,
            q_factor: 8,
            blocks: vec![block_a, block_b],
        };
        let list = sparsify(&grid);
        assert_eq!(list.clamped, 1);
        assert_eq!(list.coefficients.len(), 4);
        assert_eq!(
            list.coefficients[0],
            SparseCoefficient {
                block_row: 0,
                block_col: 0,
                x: 1,
                y: 0,
                magnitude: 3,
                sign: -1
            }
        );
        assert_eq!(list.coefficients[1].y, 1);
        assert_eq!(list.coefficients[2].block_col, 1);
        assert_eq!(list.coefficients[2].magnitude, 255);
    }

    #[test]
    fn all_zero_grid_sparsifies_to_empty() {
        let grid = BlockGrid {
            rows: 1,
            cols: 1,
            q_factor: 8,
            blocks: vec![QuantizedBlock {
                magnitudes: [0; 64],
                signs: [0; 64],
                q_factor: 8,
            }],
        };
        assert!(sparsify(&grid).coefficients.is_empty());
    }
}
