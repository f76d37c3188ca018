//! Tensors arranged on a brickwork patch.

use crate::error::{Error, Result};
use crate::geometry::{PatchGeometry, PatchKind, ProductBoundary};
use crate::tensors::{ADoubleLine, WSingleLine};

/// One single-line tensor per vertex plus the input boundary state
/// (ignored on a torus, which has no boundary).
#[derive(Clone, Debug)]
pub struct SingleLineNet {
    pub geometry: PatchGeometry,
    pub tensors: Vec<WSingleLine>,
    pub boundary: ProductBoundary,
}

impl SingleLineNet {
    pub fn uniform(geometry: PatchGeometry, w: WSingleLine, boundary: Option<ProductBoundary>) -> Result<Self> {
        let tensors = vec![w; geometry.num_vertices()];
        Self::new(geometry, tensors, boundary)
    }

    pub fn new(geometry: PatchGeometry, tensors: Vec<WSingleLine>, boundary: Option<ProductBoundary>) -> Result<Self> {
        let n = tensors.first().map(WSingleLine::modulus).or(boundary.as_ref().map(ProductBoundary::modulus)).unwrap_or(2);
        check_common(&geometry, tensors.len(), tensors.iter().map(WSingleLine::modulus), n)?;
        let boundary = boundary.unwrap_or_else(|| ProductBoundary::plus(n, geometry.width));
        if geometry.kind != PatchKind::Torus {
            boundary.check(n, geometry.width)?;
        }
        Ok(Self { geometry, tensors, boundary })
    }

    pub fn modulus(&self) -> usize {
        self.tensors.first().map(WSingleLine::modulus).unwrap_or(self.boundary.modulus())
    }
}

/// One double-line tensor per vertex; the boundary state acts on the initial
/// domain walls.
#[derive(Clone, Debug)]
pub struct DoubleLineNet {
    pub geometry: PatchGeometry,
    pub tensors: Vec<ADoubleLine>,
    pub boundary: ProductBoundary,
}

impl DoubleLineNet {
    pub fn uniform(geometry: PatchGeometry, a: ADoubleLine, boundary: Option<ProductBoundary>) -> Result<Self> {
        let tensors = vec![a; geometry.num_vertices()];
        Self::new(geometry, tensors, boundary)
    }

    pub fn new(geometry: PatchGeometry, tensors: Vec<ADoubleLine>, boundary: Option<ProductBoundary>) -> Result<Self> {
        let n = tensors.first().map(ADoubleLine::modulus).or(boundary.as_ref().map(ProductBoundary::modulus)).unwrap_or(2);
        check_common(&geometry, tensors.len(), tensors.iter().map(ADoubleLine::modulus), n)?;
        let boundary = boundary.unwrap_or_else(|| ProductBoundary::plus(n, geometry.width));
        if geometry.kind != PatchKind::Torus {
            boundary.check(n, geometry.width)?;
        }
        Ok(Self { geometry, tensors, boundary })
    }

    pub fn modulus(&self) -> usize {
        self.tensors.first().map(ADoubleLine::modulus).unwrap_or(self.boundary.modulus())
    }
}

fn check_common(geometry: &PatchGeometry, count: usize, mut moduli: impl Iterator<Item = usize>, n: usize) -> Result<()> {
    if count != geometry.num_vertices() {
        return Err(Error::Dimension(format!("{} tensors for {} vertices", count, geometry.num_vertices())));
    }
    if moduli.any(|m| m != n) {
        return Err(Error::Dimension("tensors with different moduli".into()));
    }
    Ok(())
}
