//! Mode algebra and Fock modules for the five basic free fields.
//!
//! Fields, their statistics and mode expansions `F(z) = sum_n F(n) z^{-n-w}`:
//!
//! ```text
//! b(z)     = sum b(n) z^{-n}        fermionic, w = 0
//! c(z)     = sum c(n) z^{-n-1}      fermionic, w = 1
//! beta(z)  = sum beta(n) z^{-n}     bosonic,   w = 0
//! gamma(z) = sum gamma(n) z^{-n-1}  bosonic,   w = 1
//! j(z)     = sum j(n) z^{-n-1}      bosonic,   w = 1
//! ```
//!
//! Nonzero brackets: `{b(m), c(n)} = delta_{m,-n}`,
//! `[gamma(m), beta(n)] = delta_{m,-n}`, `[j(m), j(n)] = m delta_{m,-n}`.
//!
//! Vacuum annihilation boundaries (so creation modes are `b(-n), n >= 0`;
//! `c(-n), n >= 1`; `beta(-n), n >= 0`; `gamma(-n), n >= 1`; `j(-n), n >= 1`):
//! `b` and `beta` annihilate from mode 1 up, `c` and `gamma` from mode 0 up,
//! `j` from mode 1 up with `j(0)` acting as the sector momentum.
//!
//! The w = 0 labelling of `beta` (and w = 1 of `gamma`) is the one forced by
//! those vacuum conditions: it makes the contraction of `beta(z)gamma(w)` on
//! the ghost vacuum exactly `-1/(z-w)` with no residual regular part, and it
//! is the moding under which the bosonization of the ghost pair lands in the
//! kernel of `c(0)` (see [`crate::boson`]).
//!
//! A [`FockState`] is a finite Q(i)-combination of canonically ordered
//! creation monomials over a fixed [`Sector`]. Monomials order their modes by
//! `(field, index)` ascending with fermionic reordering signs normalized away.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;
use crate::Error;

/// The five basic field kinds, in canonical order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Field {
    B,
    C,
    Beta,
    Gamma,
    J,
}

impl Field {
    pub const ALL: [Field; 5] = [Field::B, Field::C, Field::Beta, Field::Gamma, Field::J];

    pub fn is_fermionic(self) -> bool {
        matches!(self, Field::B | Field::C)
    }

    /// Weight `w` in the mode expansion `F(z) = sum F(n) z^{-n-w}`.
    pub fn weight(self) -> i64 {
        match self {
            Field::B | Field::Beta => 0,
            Field::C | Field::Gamma | Field::J => 1,
        }
    }

    /// Smallest mode index that annihilates the vacuum (`j(0)` is diagonal
    /// and counted on the annihilator side).
    pub fn annihilator_from(self) -> i64 {
        match self {
            Field::B | Field::Beta => 1,
            Field::C | Field::Gamma | Field::J => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::B => "b",
            Field::C => "c",
            Field::Beta => "beta",
            Field::Gamma => "gamma",
            Field::J => "j",
        }
    }

    /// Charge bookkeeping per mode: `b` raises the bc-charge, `c` lowers it;
    /// `beta` raises the ghost charge, `gamma` lowers it.
    fn bc_charge(self) -> i64 {
        match self {
            Field::B => 1,
            Field::C => -1,
            _ => 0,
        }
    }

    fn bg_charge(self) -> i64 {
        match self {
            Field::Beta => 1,
            Field::Gamma => -1,
            _ => 0,
        }
    }
}

/// A single field mode `F(n)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mode {
    pub field: Field,
    pub index: i64,
}

impl Mode {
    pub fn new(field: Field, index: i64) -> Self {
        Mode { field, index }
    }

    pub fn is_creator(self) -> bool {
        self.index < self.field.annihilator_from()
    }

    /// Level contribution of a creation mode `F(-n)`.
    pub fn level(self) -> i64 {
        -self.index
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.field.name(), self.index)
    }
}

/// Cross-field commutator `[F(m), G(k)]` (anticommutator for two fermions):
/// the scalar delta term produced when `F(m)` moves past `G(k)`.
fn pair_delta(moving: Mode, fixed: Mode) -> Option<Scalar> {
    let hit = moving.index == -fixed.index;
    match (moving.field, fixed.field) {
        (Field::B, Field::C) | (Field::C, Field::B) if hit => Some(Scalar::one()),
        // [gamma(m), beta(n)] = delta_{m,-n}, so [beta(m), gamma(n)] = -delta.
        (Field::Beta, Field::Gamma) if hit => Some(Scalar::from_int(-1)),
        (Field::Gamma, Field::Beta) if hit => Some(Scalar::one()),
        (Field::J, Field::J) if hit => Some(Scalar::from_int(moving.index)),
        _ => None,
    }
}

/// Sorted creation monomial. The empty monomial is the vacuum.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<Mode>);

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial::default()
    }

    /// Builds a canonical monomial from creation modes in any order,
    /// returning the fermionic reordering sign, or `None` when a fermionic
    /// mode repeats.
    pub fn from_modes(modes: &[Mode]) -> Option<(Monomial, i64)> {
        let mut v: Vec<Mode> = modes.to_vec();
        // insertion sort, counting fermionic transpositions
        let mut sign = 1i64;
        for i in 1..v.len() {
            let mut k = i;
            while k > 0 && v[k] < v[k - 1] {
                if v[k].field.is_fermionic() && v[k - 1].field.is_fermionic() {
                    sign = -sign;
                }
                v.swap(k, k - 1);
                k -= 1;
            }
        }
        for w in v.windows(2) {
            if w[0] == w[1] && w[0].field.is_fermionic() {
                return None;
            }
        }
        Some((Monomial(v), sign))
    }

    pub fn modes(&self) -> &[Mode] {
        &self.0
    }

    pub fn level(&self) -> i64 {
        self.0.iter().map(|m| m.level()).sum()
    }

    pub fn bc_charge(&self) -> i64 {
        self.0.iter().map(|m| m.field.bc_charge()).sum()
    }

    pub fn bg_charge(&self) -> i64 {
        self.0.iter().map(|m| m.field.bg_charge()).sum()
    }

    pub fn contains(&self, mode: Mode) -> bool {
        self.0.contains(&mode)
    }

    /// Restricted to one field's modes.
    pub fn field_levels(&self, field: Field) -> Vec<i64> {
        self.0
            .iter()
            .filter(|m| m.field == field)
            .map(|m| m.level())
            .collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            write!(f, "{m} ")?;
        }
        Ok(())
    }
}

/// Charge/momentum labels of the Fock sector a state lives in.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Sector {
    pub bc_charge: i64,
    pub bg_charge: i64,
    /// `j(0)` eigenvalue of the sector's ground state.
    pub momentum: Scalar,
}

impl Sector {
    pub fn bc_vacuum() -> Self {
        Sector::default()
    }

    pub fn ghost_vacuum() -> Self {
        Sector::default()
    }

    pub fn heisenberg(momentum: Scalar) -> Self {
        Sector {
            bc_charge: 0,
            bg_charge: 0,
            momentum,
        }
    }

    fn shifted(&self, mono: &Monomial) -> Sector {
        Sector {
            bc_charge: self.bc_charge + mono.bc_charge(),
            bg_charge: self.bg_charge + mono.bg_charge(),
            momentum: self.momentum.clone(),
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.momentum.is_zero() {
            write!(f, "|0;bc; a={}>", self.momentum)
        } else if self.bg_charge != 0 || self.bc_charge == 0 && self.momentum.is_zero() {
            // ghost/bare vacua render by dominant content; tensor states carry momentum
            write!(f, "|0>")
        } else {
            write!(f, "|0;bc>")
        }
    }
}

/// Finite linear combination of creation monomials over a base sector.
///
/// The base sector labels the *vacuum* the monomials act on; the charges of
/// an individual monomial's modes shift it implicitly (queried via
/// [`FockState::term_sector`]).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FockState {
    pub sector: Sector,
    terms: BTreeMap<Monomial, Scalar>,
}

impl FockState {
    pub fn zero(sector: Sector) -> Self {
        FockState {
            sector,
            terms: BTreeMap::new(),
        }
    }

    pub fn vacuum(sector: Sector) -> Self {
        let mut s = FockState::zero(sector);
        s.add_term(Monomial::vacuum(), Scalar::one());
        s
    }

    /// Basis state for a single monomial.
    pub fn basis(sector: Sector, mono: Monomial) -> Self {
        let mut s = FockState::zero(sector);
        s.add_term(mono, Scalar::one());
        s
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_insert_with(Scalar::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add_state(&mut self, other: &FockState) {
        debug_assert_eq!(self.sector, other.sector);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scaled(&self, factor: &Scalar) -> FockState {
        let mut out = FockState::zero(self.sector.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * factor);
        }
        out
    }

    pub fn sub_state(&mut self, other: &FockState) {
        self.add_state(&other.scaled(&Scalar::from_int(-1)));
    }

    /// Largest level among the terms (0 for the zero state).
    pub fn level(&self) -> i64 {
        self.terms.keys().map(|m| m.level()).max().unwrap_or(0)
    }

    /// Effective sector of one term's monomial.
    pub fn term_sector(&self, mono: &Monomial) -> Sector {
        self.sector.shifted(mono)
    }

    /// Applies a single field mode, (anti)commuting it into canonical
    /// creation order and applying the vacuum annihilation rules. Exact.
    pub fn apply_mode(&self, mode: Mode) -> FockState {
        let mut out = FockState::zero(self.sector.clone());
        for (mono, coeff) in &self.terms {
            apply_to_monomial(mode, mono, coeff, &self.sector, &mut out);
        }
        out
    }

    /// Applies modes right-to-left: `modes[0] modes[1] ... |state>`.
    pub fn apply_modes(&self, modes: &[Mode]) -> FockState {
        let mut cur = self.clone();
        for mode in modes.iter().rev() {
            cur = cur.apply_mode(*mode);
        }
        cur
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (mono, coeff) in &self.terms {
            let vac = if self.sector.momentum.is_zero()
                && mono.modes().iter().all(|m| m.field != Field::J)
            {
                if mono.modes().iter().any(|m| matches!(m.field, Field::Beta | Field::Gamma)) {
                    "|s=0>".to_string()
                } else {
                    "|0;bc>".to_string()
                }
            } else {
                format!("|0;bc; a={}>", self.sector.momentum)
            };
            parts.push(format!("({coeff}) {mono}{vac}"));
        }
        parts.join(" + ")
    }
}

fn apply_to_monomial(
    mode: Mode,
    mono: &Monomial,
    coeff: &Scalar,
    sector: &Sector,
    out: &mut FockState,
) {
    if mode.is_creator() {
        let mut modes = Vec::with_capacity(mono.modes().len() + 1);
        modes.push(mode);
        modes.extend_from_slice(mono.modes());
        if let Some((sorted, sign)) = Monomial::from_modes(&modes) {
            out.add_term(sorted, coeff * &Scalar::from_int(sign));
        }
        return;
    }
    // Annihilator (or diagonal j(0)): commute rightward through the monomial.
    let mut sign = 1i64;
    let fermionic = mode.field.is_fermionic();
    for (i, entry) in mono.modes().iter().enumerate() {
        if let Some(delta) = pair_delta(mode, *entry) {
            let mut rest: Vec<Mode> = mono.modes().to_vec();
            rest.remove(i);
            // remaining modes are already canonical
            out.add_term(
                Monomial(rest),
                coeff * &(&delta * &Scalar::from_int(sign)),
            );
        }
        if fermionic && entry.field.is_fermionic() {
            sign = -sign;
        }
    }
    // Mode reaches the vacuum.
    if mode.field == Field::J && mode.index == 0 && !sector.momentum.is_zero() {
        out.add_term(
            mono.clone(),
            coeff * &(&sector.momentum * &Scalar::from_int(sign)),
        );
    }
}

/// Labelled graded spaces for dimension counting.
///
/// The charge label follows the conventions `charge(F) = #b - #c` and
/// `charge(M) = #beta - #gamma`, so `F^l` splits as
/// `Fbar^l (+) b(0) Fbar^{l-1}` and the ghost-to-bc dictionary aligns charge
/// `l` with charge `l`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GradedSpace {
    /// bc monomials without `b(0)`, at fixed charge.
    FBar(i64),
    /// All bc monomials at fixed charge.
    F(i64),
    /// beta-gamma monomials at fixed charge.
    M(i64),
    /// Heisenberg oscillator space (any one momentum).
    H,
    /// `Fbar^l (x) H`.
    FBarTensorH(i64),
    /// `F^l (x) H`.
    FTensorH(i64),
}

impl GradedSpace {
    pub fn parse(label: &str) -> Result<GradedSpace, Error> {
        let (name, l) = match label.find('^') {
            Some(k) => {
                let l: i64 = label[k + 1..]
                    .parse()
                    .map_err(|_| Error::UnknownSpace(label.to_string()))?;
                (&label[..k], l)
            }
            None => (label, 0),
        };
        match name {
            "Fbar" => Ok(GradedSpace::FBar(l)),
            "F" => Ok(GradedSpace::F(l)),
            "M" => Ok(GradedSpace::M(l)),
            "H" => Ok(GradedSpace::H),
            "FbarH" => Ok(GradedSpace::FBarTensorH(l)),
            "FH" => Ok(GradedSpace::FTensorH(l)),
            _ => Err(Error::UnknownSpace(label.to_string())),
        }
    }
}

/// Distinct partitions of `total` into parts `>= min_part` (strictly
/// decreasing lists), for fermionic mode choices.
fn distinct_partitions(total: i64, min_part: i64) -> Vec<Vec<i64>> {
    fn rec(remaining: i64, next_max: i64, min_part: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        let mut part = remaining.min(next_max);
        while part >= min_part {
            cur.push(part);
            rec(remaining - part, part - 1, min_part, cur, out);
            cur.pop();
            part -= 1;
        }
    }
    let mut out = Vec::new();
    if total >= 0 {
        rec(total, total, min_part, &mut Vec::new(), &mut out);
    }
    out
}

/// Multiset partitions of `total` into `count` parts `>= min_part`
/// (weakly decreasing lists), for bosonic mode choices.
fn multi_partitions(total: i64, count: usize, min_part: i64) -> Vec<Vec<i64>> {
    fn rec(
        remaining: i64,
        slots: usize,
        next_max: i64,
        min_part: i64,
        cur: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if slots == 0 {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut part = remaining.min(next_max);
        // each remaining slot needs at least min_part
        while part >= min_part && part * slots as i64 >= remaining {
            cur.push(part);
            rec(remaining - part, slots - 1, part, min_part, cur, out);
            cur.pop();
            part -= 1;
        }
    }
    let mut out = Vec::new();
    if total >= 0 {
        rec(total, count, total.max(min_part), min_part, &mut Vec::new(), &mut out);
    }
    out
}

/// Exact count of canonical basis monomials at the given level.
pub fn graded_dim(space: GradedSpace, level: i64) -> usize {
    basis_monomials(space, level).len()
}

/// Canonical basis monomials of a graded space at one level.
pub fn basis_monomials(space: GradedSpace, level: i64) -> Vec<Monomial> {
    if level < 0 {
        return Vec::new();
    }
    match space {
        GradedSpace::FBar(l) => bc_basis(level, l, false),
        GradedSpace::F(l) => bc_basis(level, l, true),
        GradedSpace::M(l) => ghost_basis(level, l),
        GradedSpace::H => oscillator_basis(level),
        GradedSpace::FBarTensorH(l) => tensor_basis(level, l, false),
        GradedSpace::FTensorH(l) => tensor_basis(level, l, true),
    }
}

fn bc_basis(level: i64, charge: i64, allow_b0: bool) -> Vec<Monomial> {
    let mut out = Vec::new();
    // k c-modes and k+charge b-modes
    for k in 0i64..=(level + charge.abs() + 1) {
        if k * (k + 1) / 2 > level {
            break;
        }
        let nb = k + charge;
        if nb < 0 {
            continue;
        }
        let min_c = k * (k + 1) / 2;
        for b_level in 0..=level - min_c {
            let c_level = level - b_level;
            for bs in b_mode_choices(b_level, nb as usize, allow_b0) {
                for cs in distinct_fixed(c_level, k as usize) {
                    let mut modes: Vec<Mode> = Vec::new();
                    modes.extend(bs.iter().map(|&n| Mode::new(Field::B, -n)));
                    modes.extend(cs.iter().map(|&n| Mode::new(Field::C, -n)));
                    let (mono, _) = Monomial::from_modes(&modes).expect("distinct by construction");
                    out.push(mono);
                }
            }
        }
    }
    out.sort();
    out
}

/// Distinct strictly-positive levels for `count` b-modes summing to `total`,
/// optionally reserving one slot for `b(0)` (level 0).
fn b_mode_choices(total: i64, count: usize, allow_b0: bool) -> Vec<Vec<i64>> {
    let mut out = distinct_fixed(total, count);
    if allow_b0 && count >= 1 {
        for mut p in distinct_fixed(total, count - 1) {
            p.push(0);
            out.push(p);
        }
    }
    out
}

/// Distinct partitions of `total` into exactly `count` parts `>= 1`.
fn distinct_fixed(total: i64, count: usize) -> Vec<Vec<i64>> {
    distinct_partitions(total, 1)
        .into_iter()
        .filter(|p| p.len() == count)
        .collect()
}

fn ghost_basis(level: i64, charge: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    for k in 0i64.. {
        let nb = k + charge; // beta count
        if nb < 0 {
            continue;
        }
        if k > level {
            break;
        }
        // gammas need at least level k (each >= 1); betas at least 0
        for g_level in k..=level {
            let b_level = level - g_level;
            for gs in multi_partitions(g_level, k as usize, 1) {
                for bs in multi_partitions(b_level, nb as usize, 0) {
                    let mut modes: Vec<Mode> = Vec::new();
                    modes.extend(bs.iter().map(|&n| Mode::new(Field::Beta, -n)));
                    modes.extend(gs.iter().map(|&n| Mode::new(Field::Gamma, -n)));
                    let (mono, _) = Monomial::from_modes(&modes).expect("bosonic");
                    out.push(mono);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn oscillator_basis(level: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    for k in 0..=level {
        for parts in multi_partitions(level, k as usize, 1) {
            let modes: Vec<Mode> = parts.iter().map(|&n| Mode::new(Field::J, -n)).collect();
            let (mono, _) = Monomial::from_modes(&modes).expect("bosonic");
            out.push(mono);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn tensor_basis(level: i64, charge: i64, allow_b0: bool) -> Vec<Monomial> {
    let mut out = Vec::new();
    for bc_level in 0..=level {
        let bc = bc_basis(bc_level, charge, allow_b0);
        if bc.is_empty() {
            continue;
        }
        let osc = oscillator_basis(level - bc_level);
        for m in &bc {
            for h in &osc {
                let mut modes = m.modes().to_vec();
                modes.extend_from_slice(h.modes());
                let (mono, _) = Monomial::from_modes(&modes).expect("disjoint fields");
                out.push(mono);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(f: Field, n: i64) -> Mode {
        Mode::new(f, n)
    }

    #[test]
    fn bc_annihilation_and_pairing() {
        let vac = FockState::vacuum(Sector::bc_vacuum());
        // b(1)|0> = 0
        assert!(vac.apply_mode(mode(Field::B, 1)).is_zero());
        // c(1) b(-1)|0> = |0>
        let s = vac.apply_mode(mode(Field::B, -1));
        let back = s.apply_mode(mode(Field::C, 1));
        assert_eq!(back, vac);
    }

    #[test]
    fn ghost_pairing() {
        let vac = FockState::vacuum(Sector::ghost_vacuum());
        // gamma(1) beta(-1)|0> = |0>
        let s = vac.apply_mode(mode(Field::Beta, -1));
        assert_eq!(s.apply_mode(mode(Field::Gamma, 1)), vac);
        // beta(0) creates at level 0
        let b0 = vac.apply_mode(mode(Field::Beta, 0));
        assert!(!b0.is_zero());
        assert_eq!(b0.level(), 0);
    }

    #[test]
    fn fermionic_signs_normalize() {
        // c(-2) b(-1) = -(b(-1) c(-2)) as canonical monomials
        let (m1, s1) =
            Monomial::from_modes(&[mode(Field::C, -2), mode(Field::B, -1)]).unwrap();
        let (m2, s2) =
            Monomial::from_modes(&[mode(Field::B, -1), mode(Field::C, -2)]).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(s1 * s2, -1);
        // repeated fermionic mode vanishes
        assert!(Monomial::from_modes(&[mode(Field::B, -1), mode(Field::B, -1)]).is_none());
    }

    #[test]
    fn canonical_commutators_on_basis() {
        // [gamma(m), beta(n)] = delta_{m,-n}, {b(m), c(n)} = delta_{m,-n},
        // [j(m), j(n)] = m delta_{m,-n} on all basis states to level 4.
        let window = 3i64;
        let max_level = 4i64;
        for charge in -2..=2 {
            for level in 0..=max_level {
                for mono in basis_monomials(GradedSpace::M(charge), level) {
                    let v = FockState::basis(Sector::ghost_vacuum(), mono);
                    for m in -window..=window {
                        for n in -window..=window {
                            let gm = mode(Field::Gamma, m);
                            let bn = mode(Field::Beta, n);
                            let mut comm = v.apply_mode(bn).apply_mode(gm);
                            comm.sub_state(&v.apply_mode(gm).apply_mode(bn));
                            let expected = if m == -n {
                                v.clone()
                            } else {
                                FockState::zero(v.sector.clone())
                            };
                            assert_eq!(comm, expected, "[gamma({m}),beta({n})]");
                        }
                    }
                }
                for mono in basis_monomials(GradedSpace::F(charge), level) {
                    let v = FockState::basis(Sector::bc_vacuum(), mono);
                    for m in -window..=window {
                        for n in -window..=window {
                            let bm = mode(Field::B, m);
                            let cn = mode(Field::C, n);
                            let mut anti = v.apply_mode(cn).apply_mode(bm);
                            anti.add_state(&v.apply_mode(bm).apply_mode(cn));
                            let expected = if m == -n {
                                v.clone()
                            } else {
                                FockState::zero(v.sector.clone())
                            };
                            assert_eq!(anti, expected, "{{b({m}),c({n})}}");
                        }
                    }
                }
            }
        }
        for level in 0..=max_level {
            for mono in basis_monomials(GradedSpace::H, level) {
                let v = FockState::basis(Sector::heisenberg(Scalar::zero()), mono);
                for m in -window..=window {
                    for n in -window..=window {
                        let jm = mode(Field::J, m);
                        let jn = mode(Field::J, n);
                        let mut comm = v.apply_mode(jn).apply_mode(jm);
                        comm.sub_state(&v.apply_mode(jm).apply_mode(jn));
                        let expected = if m == -n {
                            v.scaled(&Scalar::from_int(m))
                        } else {
                            FockState::zero(v.sector.clone())
                        };
                        assert_eq!(comm, expected, "[j({m}),j({n})]");
                    }
                }
            }
        }
    }

    #[test]
    fn momentum_eigenvalue() {
        let alpha = Scalar::i();
        let vac = FockState::vacuum(Sector::heisenberg(alpha.clone()));
        let acted = vac.apply_mode(mode(Field::J, 0));
        assert_eq!(acted, vac.scaled(&alpha));
    }

    #[test]
    fn graded_dims_small() {
        // F^0 at level 1: b(0)c(-1)|0>
        assert_eq!(graded_dim(GradedSpace::F(0), 1), 1);
        // Fbar^0 at level 1: empty
        assert_eq!(graded_dim(GradedSpace::FBar(0), 1), 0);
        // M^0 at level 1: beta(0)gamma(-1)|0>; equals dim (Fbar^0 (x) H)_1
        assert_eq!(graded_dim(GradedSpace::M(0), 1), 1);
        assert_eq!(graded_dim(GradedSpace::FBarTensorH(0), 1), 1);
        // and at level 2 and 3 (independent hand counts: 3 and 6)
        assert_eq!(graded_dim(GradedSpace::M(0), 2), 3);
        assert_eq!(graded_dim(GradedSpace::FBarTensorH(0), 2), 3);
        assert_eq!(graded_dim(GradedSpace::M(0), 3), 6);
        assert_eq!(graded_dim(GradedSpace::FBarTensorH(0), 3), 6);
    }

    #[test]
    fn f_splits_as_fbar_plus_b0_fbar() {
        for l in -2..=2i64 {
            for d in 0..=6i64 {
                assert_eq!(
                    graded_dim(GradedSpace::F(l), d),
                    graded_dim(GradedSpace::FBar(l), d) + graded_dim(GradedSpace::FBar(l - 1), d),
                    "F^{l} level {d}"
                );
            }
        }
    }
}
