use super::group::FgAb;
use super::lattice::Lattice;
use super::matrix::IntMatrix;
use crate::{Error, Result};

/// `Zⁿ / relations`, with its generators fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PresentedAb {
    relations: Lattice,
}

impl PresentedAb {
    /// Generators are the columns, relations the rows.
    pub fn new(relations: &IntMatrix) -> Self {
        Self {
            relations: Lattice::span(relations),
        }
    }

    pub fn from_lattice(relations: Lattice) -> Self {
        Self { relations }
    }

    /// The standard presentation of an abelian group in canonical form.
    pub fn standard(g: &FgAb) -> Self {
        Self::new(&g.presentation())
    }

    pub fn gens(&self) -> usize {
        self.relations.dim()
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn iso_type(&self) -> FgAb {
        FgAb::from_presentation(self.relations.basis())
    }

    /// `S / relations` for a lattice `S` containing the relations.
    pub fn subgroup_type(&self, s: &Lattice) -> Result<FgAb> {
        if s.dim() != self.gens() {
            return Err(Error::BasisMismatch);
        }
        let s = s.sum(&self.relations)?;
        let coords = self.relations.preimage(s.basis())?;
        Ok(FgAb::from_presentation(coords.basis()))
    }

    /// `Zⁿ / S` for a lattice `S`.
    pub fn quotient_type(&self, s: &Lattice) -> Result<FgAb> {
        let s = s.sum(&self.relations)?;
        Ok(FgAb::from_presentation(s.basis()))
    }

    /// The subgroup generated by the rows of `generators`, as a lattice
    /// containing the relations.
    pub fn subgroup_lattice(&self, generators: &IntMatrix) -> Result<Lattice> {
        if generators.cols() != self.gens() {
            return Err(Error::BasisMismatch);
        }
        Lattice::span(generators).sum(&self.relations)
    }

    /// The torsion subgroup, as a lattice.
    pub fn torsion_lattice(&self) -> Lattice {
        self.relations.saturation()
    }
}

/// The subgroup generated by the rows of `generators`.
pub fn subgroup(g: &PresentedAb, generators: &IntMatrix) -> Result<FgAb> {
    g.subgroup_type(&g.subgroup_lattice(generators)?)
}

/// The quotient by the subgroup generated by the rows of `generators`.
pub fn quotient(g: &PresentedAb, generators: &IntMatrix) -> Result<FgAb> {
    g.quotient_type(&g.subgroup_lattice(generators)?)
}

/// A homomorphism of presented groups, acting on row vectors: `x ↦ x · matrix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgAbMap {
    dom: PresentedAb,
    cod: PresentedAb,
    matrix: IntMatrix,
}

impl FgAbMap {
    pub fn new(dom: PresentedAb, cod: PresentedAb, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != dom.gens() || matrix.cols() != cod.gens() {
            return Err(Error::BasisMismatch);
        }
        if !dom.relations.image(&matrix)?.is_subset(&cod.relations) {
            return Err(Error::Malformed(
                "the matrix does not respect the relations".into(),
            ));
        }
        Ok(Self { dom, cod, matrix })
    }

    pub fn identity(g: &PresentedAb) -> Self {
        Self {
            dom: g.clone(),
            cod: g.clone(),
            matrix: IntMatrix::identity(g.gens()),
        }
    }

    /// The quotient map `Zⁿ/R → Zⁿ/(R + S)`.
    pub fn quotient_map(g: &PresentedAb, s: &Lattice) -> Result<Self> {
        let cod = PresentedAb::from_lattice(g.relations.sum(s)?);
        Self::new(g.clone(), cod, IntMatrix::identity(g.gens()))
    }

    pub fn dom(&self) -> &PresentedAb {
        &self.dom
    }

    pub fn cod(&self) -> &PresentedAb {
        &self.cod
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FgAbMap) -> Result<FgAbMap> {
        if self.cod != g.dom {
            return Err(Error::BasisMismatch);
        }
        Ok(Self {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            matrix: self.matrix.mul(&g.matrix)?,
        })
    }

    /// `{x : f(x) ∈ s}` for a lattice `s` of the codomain.
    pub fn preimage(&self, s: &Lattice) -> Result<Lattice> {
        s.sum(&self.cod.relations)?.preimage(&self.matrix)
    }

    pub fn kernel_lattice(&self) -> Lattice {
        self.cod
            .relations
            .preimage(&self.matrix)
            .expect("shapes checked on construction")
    }

    pub fn image_lattice(&self) -> Lattice {
        Lattice::full(self.dom.gens())
            .image(&self.matrix)
            .and_then(|l| l.sum(&self.cod.relations))
            .expect("shapes checked on construction")
    }

    pub fn is_surjective(&self) -> bool {
        self.image_lattice() == Lattice::full(self.cod.gens())
    }

    /// Isomorphism types of the kernel and the image.
    pub fn kernel_image(&self) -> (FgAb, FgAb) {
        let k = self
            .dom
            .subgroup_type(&self.kernel_lattice())
            .expect("same dimension");
        let i = self
            .cod
            .subgroup_type(&self.image_lattice())
            .expect("same dimension");
        (k, i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn z(n: i128) -> PresentedAb {
        PresentedAb::new(&IntMatrix::new(1, 1, vec![n]).unwrap())
    }

    #[test]
    fn doubling_on_z4() {
        let f = FgAbMap::new(z(4), z(4), IntMatrix::new(1, 1, vec![2]).unwrap()).unwrap();
        assert_eq!(f.kernel_image(), (FgAb::cyclic(2), FgAb::cyclic(2)));
    }

    #[test]
    fn zero_map() {
        let g = PresentedAb::standard(&"Z x Z/6".parse().unwrap());
        let h = z(5);
        let f = FgAbMap::new(g.clone(), h, IntMatrix::zeros(2, 1)).unwrap();
        assert_eq!(f.kernel_image(), (g.iso_type(), FgAb::zero()));
    }

    #[test]
    fn projection_of_z2() {
        let z2 = PresentedAb::new(&IntMatrix::zeros(0, 2));
        let z1 = PresentedAb::new(&IntMatrix::zeros(0, 1));
        let f = FgAbMap::new(z2, z1, IntMatrix::new(2, 1, vec![1, 0]).unwrap()).unwrap();
        assert_eq!(f.kernel_image(), (FgAb::free(1), FgAb::free(1)));
        assert!(f.is_surjective());
    }

    #[test]
    fn relations_must_be_respected() {
        let bad = FgAbMap::new(z(4), z(3), IntMatrix::new(1, 1, vec![1]).unwrap());
        assert!(bad.is_err());
        let shape = FgAbMap::new(z(4), z(4), IntMatrix::zeros(2, 1));
        assert_eq!(shape, Err(Error::BasisMismatch));
    }

    #[test]
    fn subgroups_and_quotients() {
        let g = PresentedAb::standard(&FgAb::finite(&[2, 4]));
        let gens = IntMatrix::new(1, 2, vec![0, 1]).unwrap();
        assert_eq!(subgroup(&g, &gens).unwrap(), FgAb::cyclic(4));
        assert_eq!(quotient(&g, &gens).unwrap(), FgAb::cyclic(2));
        assert_eq!(
            subgroup(&g, &IntMatrix::zeros(1, 3)),
            Err(Error::BasisMismatch)
        );
    }
}
