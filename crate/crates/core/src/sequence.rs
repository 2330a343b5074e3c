//! Gate sequences over the elementary set, and their Fourier-frame bookkeeping.
//!
//! A [`GateSequence`] is the physical program: Fourier rotations, `exp(i s X^j)` for
//! `j = 1, 2, 3`, and `CZ(s) = exp(2 i s X_a X_b)`. A [`LogicalSequence`] is the same
//! unitary written with rotated generators (`P^j`, `X_a P_b`, ...) and no explicit
//! Fourier gates except a per-mode tail. Lowering inserts the Fourier gates.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Quad, QuadPolynomial};
use crate::rational::GaussQ;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    Fourier,
    X1,
    X2,
    X3,
    Cz,
}

impl GateKind {
    pub const ALL: [GateKind; 5] = [GateKind::Fourier, GateKind::X1, GateKind::X2, GateKind::X3, GateKind::Cz];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Fourier => "FOURIER",
            GateKind::X1 => "X1",
            GateKind::X2 => "X2",
            GateKind::X3 => "X3",
            GateKind::Cz => "CZ",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Physical gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "GateRecord", try_from = "GateRecord")]
pub enum Gate {
    /// `exp(i π/2 (X² + P²))` on a mode.
    Fourier(usize),
    /// `exp(i s X^power)`, `power` in `1..=3`.
    X { mode: usize, power: u32, s: f64 },
    /// `exp(2 i s X_a X_b)`.
    Cz { a: usize, b: usize, s: f64 },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Fourier(_) => GateKind::Fourier,
            Gate::X { power: 1, .. } => GateKind::X1,
            Gate::X { power: 2, .. } => GateKind::X2,
            Gate::X { .. } => GateKind::X3,
            Gate::Cz { .. } => GateKind::Cz,
        }
    }

    pub fn modes(&self) -> Vec<usize> {
        match *self {
            Gate::Fourier(m) | Gate::X { mode: m, .. } => vec![m],
            Gate::Cz { a, b, .. } => vec![a, b],
        }
    }

    pub fn strength(&self) -> Option<f64> {
        match *self {
            Gate::Fourier(_) => None,
            Gate::X { s, .. } | Gate::Cz { s, .. } => Some(s),
        }
    }

    /// Hermitian generator `G` with `gate = exp(i G)`, Fourier excluded.
    pub fn generator(&self) -> Option<QuadPolynomial> {
        match *self {
            Gate::Fourier(_) => None,
            Gate::X { mode, power, s } => Some(QuadPolynomial::x_pow(mode, power).scale(&gq(s))),
            Gate::Cz { a, b, s } => Some(QuadPolynomial::x(a).mul(&QuadPolynomial::x(b)).scale(&gq(2.0 * s))),
        }
    }
}

fn gq(x: f64) -> GaussQ {
    GaussQ::real(crate::rational::q_from_f64(x).expect("finite strength"))
}

/// Serialized form of a gate: one JSON object per line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: GateKind,
    pub modes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strength: Option<f64>,
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        GateRecord { kind: g.kind(), modes: g.modes(), strength: g.strength() }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SequenceError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("bad gate record: {0}")]
    Record(String),
}

impl TryFrom<GateRecord> for Gate {
    type Error = SequenceError;

    fn try_from(r: GateRecord) -> Result<Self, Self::Error> {
        let need = |n: usize| {
            if r.modes.len() == n {
                Ok(())
            } else {
                Err(SequenceError::Record(format!("{} takes {n} mode(s), got {}", r.kind, r.modes.len())))
            }
        };
        let strength = || {
            r.strength
                .filter(|s| s.is_finite())
                .ok_or_else(|| SequenceError::Record(format!("{} needs a finite strength", r.kind)))
        };
        Ok(match r.kind {
            GateKind::Fourier => {
                need(1)?;
                Gate::Fourier(r.modes[0])
            }
            GateKind::X1 | GateKind::X2 | GateKind::X3 => {
                need(1)?;
                let power = match r.kind {
                    GateKind::X1 => 1,
                    GateKind::X2 => 2,
                    _ => 3,
                };
                Gate::X { mode: r.modes[0], power, s: strength()? }
            }
            GateKind::Cz => {
                need(2)?;
                if r.modes[0] == r.modes[1] {
                    return Err(SequenceError::Record("CZ needs two distinct modes".into()));
                }
                Gate::Cz { a: r.modes[0], b: r.modes[1], s: strength()? }
            }
        })
    }
}

/// `exp(i global_phase) * G_0 * G_1 * ... ` as an operator product.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct GateSequence {
    pub n_modes: usize,
    pub gates: Vec<Gate>,
    pub global_phase: f64,
}

impl GateSequence {
    pub fn new(n_modes: usize) -> Self {
        Self { n_modes, gates: Vec::new(), global_phase: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) {
        for m in g.modes() {
            self.n_modes = self.n_modes.max(m + 1);
        }
        self.gates.push(g);
    }

    /// Operator product `self * other`.
    pub fn append(&mut self, other: &GateSequence) {
        self.n_modes = self.n_modes.max(other.n_modes);
        self.gates.extend_from_slice(&other.gates);
        self.global_phase += other.global_phase;
    }

    pub fn counts(&self) -> BTreeMap<GateKind, usize> {
        let mut c: BTreeMap<GateKind, usize> = GateKind::ALL.iter().map(|k| (*k, 0)).collect();
        for g in &self.gates {
            *c.get_mut(&g.kind()).expect("all kinds present") += 1;
        }
        c
    }

    pub fn fourier_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Fourier(_))).count()
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            out.push_str(&serde_json::to_string(&GateRecord::from(*g)).expect("record serializes"));
            out.push('\n');
        }
        out.push_str(&serde_json::json!({ "global_phase": self.global_phase }).to_string());
        out.push('\n');
        out
    }

    pub fn from_json_lines(src: &str) -> Result<Self, SequenceError> {
        let mut seq = GateSequence::new(0);
        for (i, line) in src.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |e: serde_json::Error| SequenceError::Format { line: i + 1, message: e.to_string() };
            let v: serde_json::Value = serde_json::from_str(line).map_err(err)?;
            if let Some(p) = v.get("global_phase") {
                seq.global_phase = p
                    .as_f64()
                    .ok_or(SequenceError::Format { line: i + 1, message: "global_phase must be a number".into() })?;
            } else {
                let g: Gate = serde_json::from_value(v).map_err(err)?;
                seq.push(g);
            }
        }
        Ok(seq)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,modes,strength\n");
        for g in &self.gates {
            let modes: Vec<String> = g.modes().iter().map(|m| m.to_string()).collect();
            let s = g.strength().map(|s| format!("{s:e}")).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", g.kind(), modes.join(" "), s));
        }
        out.push_str(&format!("global_phase,,{:e}\n", self.global_phase));
        out
    }

    /// Rewrites the sequence with logical generators and a Fourier tail.
    pub fn lift(&self) -> LogicalSequence {
        let mut r = vec![0u32; self.n_modes];
        let mut out = LogicalSequence::new(self.n_modes);
        for g in &self.gates {
            match *g {
                Gate::Fourier(m) => r[m] += 1,
                Gate::X { mode, power, s } => {
                    let (q, sign) = Quad::X.frame_image(r[mode]);
                    out.push(Generator::Power { mode, quad: q, power }, s * (sign as f64).powi(power as i32));
                }
                Gate::Cz { a, b, s } => {
                    let (qa, sa) = Quad::X.frame_image(r[a]);
                    let (qb, sb) = Quad::X.frame_image(r[b]);
                    out.push(Generator::Pair { a: (a, qa), b: (b, qb) }, 2.0 * s * (sa * sb) as f64);
                }
            }
        }
        let mut phase = self.global_phase;
        for (m, e) in r.iter().enumerate() {
            out.tail[m] = e % 4;
            phase += PI * (e - e % 4) as f64 / 4.0;
        }
        out.phase = phase;
        out
    }
}

/// Exponent of a logical gate: a rotated elementary generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `Q^power` on one mode.
    Power { mode: usize, quad: Quad, power: u32 },
    /// `Q_a Q_b` on two distinct modes.
    Pair { a: (usize, Quad), b: (usize, Quad) },
}

impl Generator {
    pub fn polynomial(&self) -> QuadPolynomial {
        match *self {
            Generator::Power { mode, quad, power } => quad.pow(mode, power),
            Generator::Pair { a, b } => a.1.pow(a.0, 1).mul(&b.1.pow(b.0, 1)),
        }
    }

    pub fn max_mode(&self) -> usize {
        match *self {
            Generator::Power { mode, .. } => mode,
            Generator::Pair { a, b } => a.0.max(b.0),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Power { mode, quad, power } => write!(f, "{quad}{mode}^{power}"),
            Generator::Pair { a, b } => write!(f, "{}{} {}{}", a.1, a.0, b.1, b.0),
        }
    }
}

/// `exp(i theta G)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogicalGate {
    pub generator: Generator,
    pub theta: f64,
}

/// `exp(i phase) * prod_j exp(i theta_j G_j) * prod_k F_k^tail_k`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct LogicalSequence {
    pub gates: Vec<LogicalGate>,
    pub tail: Vec<u32>,
    pub phase: f64,
}

impl LogicalSequence {
    pub fn new(n_modes: usize) -> Self {
        Self { gates: Vec::new(), tail: vec![0; n_modes], phase: 0.0 }
    }

    pub fn n_modes(&self) -> usize {
        self.tail.len()
    }

    fn ensure_modes(&mut self, n: usize) {
        if self.tail.len() < n {
            self.tail.resize(n, 0);
        }
    }

    /// Appends `exp(i theta G)`; zero angles are skipped.
    pub fn push(&mut self, generator: Generator, theta: f64) {
        if theta == 0.0 {
            return;
        }
        self.ensure_modes(generator.max_mode() + 1);
        self.gates.push(LogicalGate { generator, theta });
    }

    /// Operator product `self * other`; both tails must be trivial on `self`.
    pub fn extend(&mut self, other: &LogicalSequence) {
        assert!(self.tail.iter().all(|t| *t == 0), "cannot extend past a Fourier tail");
        self.ensure_modes(other.n_modes());
        self.gates.extend_from_slice(&other.gates);
        for (m, t) in other.tail.iter().enumerate() {
            self.tail[m] = *t;
        }
        self.phase += other.phase;
    }

    /// Emits physical gates, inserting one Fourier gate per frame-parity change and
    /// closing every mode on its tail.
    pub fn lower(&self) -> GateSequence {
        let n = self.n_modes();
        let mut r = vec![0u32; n];
        let mut seq = GateSequence::new(n);
        let mut emitted = vec![0u32; n];
        let mut align = |seq: &mut GateSequence, r: &mut Vec<u32>, m: usize, q: Quad| {
            if r[m] % 2 != q.parity() {
                seq.push(Gate::Fourier(m));
                r[m] += 1;
                emitted[m] += 1;
            }
            let (img, sign) = Quad::X.frame_image(r[m]);
            debug_assert_eq!(img, q);
            sign as f64
        };
        for g in &self.gates {
            match g.generator {
                Generator::Power { mode, quad, power } => {
                    let sign = align(&mut seq, &mut r, mode, quad);
                    seq.push(Gate::X { mode, power, s: g.theta * sign.powi(power as i32) });
                }
                Generator::Pair { a, b } => {
                    let sa = align(&mut seq, &mut r, a.0, a.1);
                    let sb = align(&mut seq, &mut r, b.0, b.1);
                    seq.push(Gate::Cz { a: a.0, b: b.0, s: g.theta * sa * sb / 2.0 });
                }
            }
        }
        let mut phase = self.phase;
        for m in 0..n {
            while r[m] % 4 != self.tail[m] % 4 {
                seq.push(Gate::Fourier(m));
                r[m] += 1;
                emitted[m] += 1;
            }
            phase -= PI * (emitted[m] - self.tail[m] % 4) as f64 / 4.0;
        }
        seq.global_phase = wrap_phase(phase);
        seq
    }

    /// `sum_j theta_j G_j`, the first-order generator of the product.
    pub fn first_order_generator(&self) -> QuadPolynomial {
        let mut acc = QuadPolynomial::zero(self.n_modes());
        for g in &self.gates {
            acc = &acc + &g.generator.polynomial().scale(&gq(g.theta));
        }
        acc
    }
}

/// Merges adjacent gates with the same generator, dropping those that cancel.
pub fn merge_adjacent(l: &LogicalSequence) -> LogicalSequence {
    let mut out = LogicalSequence { gates: Vec::with_capacity(l.gates.len()), tail: l.tail.clone(), phase: l.phase };
    for g in &l.gates {
        match out.gates.last_mut() {
            Some(last) if last.generator == g.generator => {
                last.theta += g.theta;
                if last.theta == 0.0 {
                    out.gates.pop();
                }
            }
            _ => out.gates.push(*g),
        }
    }
    out
}

/// Phase reduced to `(-π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// Removes redundant Fourier gates by lifting to logical gates and lowering again.
pub fn cancel_fourier(seq: &GateSequence) -> GateSequence {
    let mut out = seq.lift().lower();
    out.n_modes = seq.n_modes;
    out
}
