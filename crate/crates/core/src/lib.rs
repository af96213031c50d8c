//! Exact computation of J₊-filtered sutured Floer chain complexes over F2
//! and of the algebraic torsion of the contact class.

pub mod cli;
pub mod complex;
pub mod curvemap;
pub mod diagram;
pub mod disks;
pub mod domains;
pub mod f2;
pub mod gluing;
pub mod grid;
pub mod measure;
pub mod planar;
pub mod pob;
pub mod poly;
pub mod torsion;
pub mod zlinalg;
