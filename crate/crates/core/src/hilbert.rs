//! Fixed-excitation Fock basis for two sites, each holding one two-level atom
//! and one cavity mode.
//!
//! The total excitation number `N = e₁ + e₂ + n₁ + n₂` commutes with the
//! Hamiltonian, so every calculation happens inside one `N` block. States are
//! stored in canonical order: ascending in `(atom₁, atom₂, n₁)`, with `n₂`
//! implied by the excitation sum. For `N ≥ 1` the blocks are
//!
//! | atoms      | photons on the sites | size    |
//! |------------|----------------------|---------|
//! | `(g, g)`   | `N`                  | `N + 1` |
//! | `(g, e)`   | `N - 1`              | `N`     |
//! | `(e, g)`   | `N - 1`              | `N`     |
//! | `(e, e)`   | `N - 2`              | `N - 1` |
//!
//! giving a dimension of `4N`. The first state is therefore `|g g; 0, N⟩` and
//! `|e g; 0, N-1⟩` sits at index `2N + 1`.

use std::fmt;

use crate::error::{Error, Result};

/// One of the two lattice sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Site {
    One,
    Two,
}

impl Site {
    pub const BOTH: [Site; 2] = [Site::One, Site::Two];

    pub fn index(self) -> usize {
        match self {
            Site::One => 0,
            Site::Two => 1,
        }
    }
}

/// A Fock configuration `|atom₁ atom₂; n₁, n₂⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisState {
    /// `true` when the atom on that site is excited.
    pub atoms: [bool; 2],
    pub photons: [usize; 2],
}

impl BasisState {
    pub const fn new(atom1: bool, atom2: bool, n1: usize, n2: usize) -> Self {
        Self {
            atoms: [atom1, atom2],
            photons: [n1, n2],
        }
    }

    pub fn excitations(&self) -> usize {
        self.atomic_excitations() + self.photons[0] + self.photons[1]
    }

    pub fn atomic_excitations(&self) -> usize {
        self.atoms.iter().filter(|&&a| a).count()
    }

    /// Local excitation number `a†a + |e⟩⟨e|` on one site.
    pub fn site_excitations(&self, site: Site) -> usize {
        let i = site.index();
        self.photons[i] + usize::from(self.atoms[i])
    }

    pub fn atom_excited(&self, site: Site) -> bool {
        self.atoms[site.index()]
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = |x: bool| if x { 'e' } else { 'g' };
        write!(
            f,
            "|{}{}; {},{}⟩",
            a(self.atoms[0]),
            a(self.atoms[1]),
            self.photons[0],
            self.photons[1]
        )
    }
}

/// The ordered set of all configurations with `n_total` excitations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    n_total: usize,
    states: Vec<BasisState>,
}

const ATOM_BLOCKS: [[bool; 2]; 4] = [[false, false], [false, true], [true, false], [true, true]];

impl Basis {
    /// Enumerates the `N`-excitation block in canonical order.
    pub fn new(n_total: usize) -> Self {
        let mut states = Vec::with_capacity(dimension(n_total));
        for atoms in ATOM_BLOCKS {
            let excited = atoms.iter().filter(|&&a| a).count();
            let Some(photons) = n_total.checked_sub(excited) else {
                continue;
            };
            states.extend((0..=photons).map(|n1| BasisState {
                atoms,
                photons: [n1, photons - n1],
            }));
        }
        debug_assert_eq!(states.len(), dimension(n_total));
        Self { n_total, states }
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BasisState> {
        self.states.iter()
    }

    pub fn get(&self, index: usize) -> Option<&BasisState> {
        self.states.get(index)
    }

    /// Position of `state` in the canonical order, computed from the block
    /// offsets rather than a lookup table.
    pub fn index_of(&self, state: &BasisState) -> Result<usize> {
        if state.excitations() != self.n_total {
            return Err(Error::NotInBasis {
                state: *state,
                n_total: self.n_total,
            });
        }
        let offset: usize = ATOM_BLOCKS
            .iter()
            .take_while(|&&atoms| atoms != state.atoms)
            .map(|atoms| block_size(self.n_total, atoms))
            .sum();
        Ok(offset + state.photons[0])
    }
}

impl<'a> IntoIterator for &'a Basis {
    type Item = &'a BasisState;
    type IntoIter = std::slice::Iter<'a, BasisState>;

    fn into_iter(self) -> Self::IntoIter {
        self.states.iter()
    }
}

fn block_size(n_total: usize, atoms: &[bool; 2]) -> usize {
    let excited = atoms.iter().filter(|&&a| a).count();
    n_total.checked_sub(excited).map_or(0, |p| p + 1)
}

/// Same as [`Basis::new`].
pub fn enumerate_basis(n_total: usize) -> Basis {
    Basis::new(n_total)
}

/// Size of the `N` block: `4N`, or 1 for the vacuum.
pub fn dimension(n_total: usize) -> usize {
    if n_total == 0 {
        1
    } else {
        4 * n_total
    }
}
