use base_algebra::Functional;
use grassmann::{Embedding, GrassPoint};

use crate::error::DualityError;

const HOM_TOL: f64 = 1e-12;

/// A reference point `π` over the ambient algebra `E = M_d`, the embedding
/// `B → E` the resolvent is taken against, and a functional `φ` on `E`.
#[derive(Clone, Debug)]
pub struct DualitySetup {
    emb: Embedding,
    pi: GrassPoint,
    phi: Functional,
}

impl DualitySetup {
    pub fn new(emb: Embedding, pi: GrassPoint, phi: Functional) -> Result<Self, DualityError> {
        if pi.level() != 1 {
            return Err(DualityError::BadReferenceLevel(pi.level()));
        }
        let target = emb.target_algebra();
        if pi.algebra() != target || phi.algebra() != target {
            return Err(DualityError::AlgebraMismatch);
        }
        let residual = embedding_hom_residual(&emb)?;
        if residual > HOM_TOL {
            return Err(DualityError::BadEmbedding(residual));
        }
        Ok(DualitySetup { emb, pi, phi })
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    pub fn reference(&self) -> &GrassPoint {
        &self.pi
    }

    pub fn functional(&self) -> &Functional {
        &self.phi
    }

    pub fn with_functional(&self, phi: Functional) -> Result<Self, DualityError> {
        if phi.algebra() != self.emb.target_algebra() {
            return Err(DualityError::AlgebraMismatch);
        }
        Ok(DualitySetup {
            emb: self.emb,
            pi: self.pi.clone(),
            phi,
        })
    }

    /// The adjoint setup `(π*, φ*)` over the same embedding.
    pub fn star(&self) -> Self {
        DualitySetup {
            emb: self.emb,
            pi: self.pi.star(),
            phi: self.phi.star(),
        }
    }
}

/// How far the embedding is from being a unital *-homomorphism, measured on
/// the canonical basis of the source.
fn embedding_hom_residual(emb: &Embedding) -> Result<f64, DualityError> {
    let b = emb.source();
    let mut worst: f64 = emb
        .apply(&b.identity_element())?
        .max_abs_diff(&linalg_core::ComplexMatrix::identity(emb.target_dim()));
    let basis = b.canonical_basis();
    for x in &basis {
        let star_gap = emb.apply(&x.adjoint())?.max_abs_diff(&emb.apply(x)?.adjoint());
        worst = worst.max(star_gap);
        for y in &basis {
            let prod = x.multiply(y)?;
            let gap = emb
                .apply(&prod)?
                .max_abs_diff(&emb.apply(x)?.multiply(&emb.apply(y)?)?);
            worst = worst.max(gap);
        }
    }
    Ok(worst)
}
