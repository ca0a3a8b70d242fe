//! Three identical two-level atoms resonantly coupled to one cavity mode.
//!
//! The crate evolves coherent-field initial states with the closed-form
//! evolution of the symmetric Dicke sector and evaluates atomic inversions,
//! entanglement measures (I-concurrence, Wootters concurrence, negativity,
//! residual three-party negativity) and the Husimi Q-function of the field.
//!
//! ```
//! use tcm3_core::{coherent_amplitudes, evolve, initial_amplitudes, single_atom_inversion, AtomicInitState, C64};
//!
//! let field = coherent_amplitudes(C64::new(10.0, 0.0), 1e-12).unwrap();
//! let psi0 = initial_amplitudes(&AtomicInitState::excited(), &field).unwrap();
//! let psi = evolve(&psi0, 1.0);
//! assert!(single_atom_inversion(&psi).abs() <= 1.0);
//! ```

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod husimi;
pub mod numerics;
pub mod observables;
pub mod oracle;
pub mod reduced;

pub use dynamics::{
    coherent_amplitudes, evolution_block, evolve, initial_amplitudes, rabi_params, AtomicInitState, CoherentField,
    EvolutionBlock, RabiBlockParams, SymmetricWavefunction, DEFAULT_TAIL_TOL,
};
pub use entanglement::{
    concurrence, entanglement_sample, i_concurrence_from_purity, i_max, negativity, residual_negativity, spin_flip,
    tangle_decomposition, EntanglementSample, ResidualNegativity, Tangles,
};
pub use error::{Error, Result};
pub use husimi::{peak_census, q_grid, q_value, Peak, QGrid, Window};
pub use numerics::{coherent_coefficient_series, hermitian_eigenvalues, matrix_sqrt_psd, ComplexMatrix, C64};
pub use observables::{
    full_sz_expectation, initial_population, inversion_sample, predicted_revivals, return_probability,
    single_atom_inversion, total_inversion, InversionSample, Preset, Quantity, Revival,
};
pub use reduced::{
    atomic_density_sym, embed_symmetric, purity, trace_out_one, trace_out_two, AtomicDensityProd, AtomicDensitySym,
    OneQubitDensity, TwoQubitDensity,
};
