//! Product-formula evaluation of a single type.

use super::psi::{eta_case, EtaCase, PsiTable, PsiValue};
use super::types::{Direction, TypeWord};
use crate::pattern::Pattern;
use crate::poly::{Fam, Monomial, Shift, SymVar};

/// One factor `μ_i` of a type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Atom {
    pub case: EtaCase,
    pub value: Option<SymVar>,
}

impl std::fmt::Display for Atom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.value {
            Some(v) => write!(f, "[{v}:{}]", self.case),
            None => write!(f, "[0:{}]", self.case),
        }
    }
}

/// Resolves a barred value against the families the run maps onto.
pub fn resolve(value: PsiValue, bar_targets: [Fam; 3]) -> SymVar {
    SymVar::new(bar_targets[value.bar as usize], value.shift)
}

/// Global monomial bits for each local variable `bar·2 + shift`.
pub fn local_to_global(bar_targets: [Fam; 3]) -> [u16; 6] {
    let mut out = [0u16; 6];
    for (b, slot) in out.iter_mut().enumerate() {
        let shift = if b % 2 == 0 { Shift::N } else { Shift::M };
        *slot = 1 << SymVar::new(bar_targets[b / 2], shift).bit();
    }
    out
}

/// The atoms `μ_0 … μ_{d-1}` of a type.
pub fn atoms(p: &Pattern, dir: Direction, t: &TypeWord, table: &PsiTable) -> Vec<Atom> {
    let targets = dir.bar_targets(p);
    (0..t.d())
        .map(|i| {
            let case = eta_case(t, i);
            Atom { case, value: table.lookup(case).map(|v| resolve(v, targets)) }
        })
        .collect()
}

/// `μ_0 ⋯ μ_{d-1}` reduced with `x² = x`, or `None` when some factor is zero.
pub fn eval_type_with(p: &Pattern, dir: Direction, t: &TypeWord, table: &PsiTable) -> Option<Monomial> {
    atoms(p, dir, t, table)
        .into_iter()
        .try_fold(Monomial::ONE, |m, a| a.value.map(|v| m.times(Monomial::var(v))))
}

pub fn eval_type(p: &Pattern, dir: Direction, t: &TypeWord) -> Option<Monomial> {
    eval_type_with(p, dir, t, &PsiTable::standard())
}
