//! Properties of the disk count on random nice admissible diagrams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sutured_torsion::diagram::{HeegaardDiagram, Quadrant};
use sutured_torsion::disks::{enumerate_disks, split_differential, CountedDisk, Shape};
use sutured_torsion::f2::BitMatrix;
use sutured_torsion::grid::{random_nice_diagram, GridParams};

pub const DIAGRAMS: u64 = 120;

/// Four times the Maslov index, from the region data alone.
fn oracle_maslov_quarters(d: &HeegaardDiagram, disk: &CountedDisk) -> i64 {
    let c = &disk.domain.coefficients;
    let euler: i64 = d.regions.iter().enumerate().map(|(r, reg)| c[r] * (4 * reg.chi - reg.corners.len() as i64)).sum();
    let at = |p: usize| -> i64 { Quadrant::ALL.iter().map(|&q| c[d.points[p].region(q)]).sum() };
    let n: i64 = disk.from.points.iter().chain(&disk.to.points).map(|&p| at(p)).sum();
    euler + n
}

fn oracle_cycles(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut k = 0;
    for s in 0..perm.len() {
        if !seen[s] {
            k += 1;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
            }
        }
    }
    k
}

fn check_diagram(d: &HeegaardDiagram) -> usize {
    let disks = enumerate_disks(d).unwrap();
    for k in &disks {
        assert_eq!(oracle_maslov_quarters(d, k), 4, "Maslov index of {}", k.name(d));
        assert!(k.domain.coefficients.iter().all(|&c| c == 0 || c == 1));
        let two_n = match k.shape {
            Shape::Bigon => 1,
            Shape::Rectangle => 2,
        };
        let j = two_n - 1 + oracle_cycles(&k.from.permutation) - oracle_cycles(&k.to.permutation);
        assert_eq!(j, k.j_plus as i64);
        assert!(j >= 0 && j % 2 == 0);
        match k.shape {
            Shape::Bigon => assert_eq!(k.j_plus, 0),
            Shape::Rectangle => assert!(k.j_plus == 0 || k.j_plus == 2),
        }
    }
    let split = split_differential(d).unwrap();
    let dense: Vec<BitMatrix> = split.levels.iter().map(|m| m.to_dense()).collect();
    for n in 0..2 * dense.len() {
        let mut sum = BitMatrix::zeros(split.names.len(), split.names.len());
        for i in 0..dense.len() {
            if n >= i && n - i < dense.len() {
                sum.add_assign(&dense[i].mul(&dense[n - i]).unwrap());
            }
        }
        assert!(sum.is_zero(), "convolution identity fails at n = {n}");
    }
    disks.len()
}

#[test]
fn random_nice_diagrams_satisfy_disk_properties() {
    let params = GridParams::default();
    let mut total = 0;
    let mut bigons = 0;
    for seed in 0..DIAGRAMS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_nice_diagram(&mut rng, &params);
        assert!(d.alpha.len() <= 4 && d.regions.len() <= 40);
        total += check_diagram(&d);
        bigons += enumerate_disks(&d).unwrap().iter().filter(|k| k.shape == Shape::Bigon).count();
    }
    // the suite is not vacuous
    assert!(total > DIAGRAMS as usize);
    assert!(bigons > 0);
}
