//! Dense operators on Mat_aux ⊗ Mat_n^{⊗r}, site embeddings and the T-basis.

mod heisenberg;
mod mat;
mod site;

pub use heisenberg::{
    dtau_omega, indices, kappa, neg, omega, permutation, permutation_via_t, t, Index2, TBasis,
};
pub use mat::CMat;
pub use site::{comm, embed_aux, embed_pair, embed_single, max_abs, swap, swap_conj, SiteOperator};

#[cfg(test)]
mod tests;
