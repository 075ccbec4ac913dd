use std::fmt;

use serde::Serialize;

use crate::algebra::{Element, FieldCtx, Var, VarClass};

/// Why a point is degenerate: a declared denominator factor vanishes there.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum DegReason {
    /// A coordinate is zero.
    ZeroCoord { class: VarClass, index: u32 },
    /// a_i = 1 (equivalently c_i = 0 on the variety).
    AIsOne { index: u32 },
    /// a_i^q + a_i - 1 = 0 (equivalently b_i = 0 on the variety).
    ArtinVanishes { index: u32 },
}

impl fmt::Display for DegReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegReason::ZeroCoord { class, index } => {
                write!(f, "{}{}=0", class.letter(), index)
            }
            DegReason::AIsOne { index } => write!(f, "a{index}=1"),
            DegReason::ArtinVanishes { index } => write!(f, "a{index}^q+a{index}-1=0"),
        }
    }
}

/// A solution of the coupled relation system at some level: coordinates
/// (a_1, b_1, c_1, ..., a_n, b_n, c_n) over F_{ell^k}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TowerPoint {
    coords: Box<[Element]>,
    reasons: Box<[DegReason]>,
}

impl TowerPoint {
    pub(crate) fn new(ctx: &FieldCtx, coords: Vec<Element>) -> TowerPoint {
        debug_assert!(coords.len().is_multiple_of(3) && !coords.is_empty());
        let reasons = degeneracy_reasons(ctx, &coords);
        TowerPoint {
            coords: coords.into_boxed_slice(),
            reasons: reasons.into_boxed_slice(),
        }
    }

    pub fn level(&self) -> u32 {
        (self.coords.len() / 3) as u32
    }

    /// a_i, 1-based.
    pub fn a(&self, i: u32) -> Element {
        self.coords[3 * (i as usize - 1)]
    }

    pub fn b(&self, i: u32) -> Element {
        self.coords[3 * (i as usize - 1) + 1]
    }

    pub fn c(&self, i: u32) -> Element {
        self.coords[3 * (i as usize - 1) + 2]
    }

    pub fn get(&self, v: Var) -> Option<Element> {
        if v.index == 0 || v.index > self.level() {
            return None;
        }
        Some(match v.class {
            VarClass::A => self.a(v.index),
            VarClass::B => self.b(v.index),
            VarClass::C => self.c(v.index),
        })
    }

    /// Coordinates in storage order a_1, b_1, c_1, a_2, ...
    pub fn coords(&self) -> &[Element] {
        &self.coords
    }

    pub fn is_degenerate(&self) -> bool {
        !self.reasons.is_empty()
    }

    pub fn reasons(&self) -> &[DegReason] {
        &self.reasons
    }

    /// Codes of the selected coordinates, for partition keys.
    pub fn key(&self, gens: &[Var]) -> Vec<u64> {
        gens.iter()
            .map(|&v| self.get(v).map(|e| e.code()).unwrap_or(u64::MAX))
            .collect()
    }
}

fn degeneracy_reasons(ctx: &FieldCtx, coords: &[Element]) -> Vec<DegReason> {
    let q = ctx.q();
    let mut reasons = Vec::new();
    for (pos, &e) in coords.iter().enumerate() {
        let index = (pos / 3 + 1) as u32;
        let class = match pos % 3 {
            0 => VarClass::A,
            1 => VarClass::B,
            _ => VarClass::C,
        };
        if e.is_zero() {
            reasons.push(DegReason::ZeroCoord { class, index });
        }
        if class == VarClass::A {
            if e == ctx.one() {
                reasons.push(DegReason::AIsOne { index });
            }
            if ctx.add(ctx.pow(e, q), e) == ctx.one() {
                reasons.push(DegReason::ArtinVanishes { index });
            }
        }
    }
    reasons
}
