use pairfield::model::PairDensity;
use pairfield::potentials::{phi_pair, phi_single};
use pairfield::quadrature::potential_numeric;
use pairfield::{Envelope, PacketShape, PairConfig, QuadratureSpec, Symmetry, UnitSystem, Vec3};

fn sample_points() -> Vec<Vec3> {
    // Origin, packet centres, points between and around the packets, far field.
    let mut pts = vec![Vec3::zeros(), Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -0.5)];
    let dirs = [
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(0.6, 0.0, 0.8),
        Vec3::new(-0.48, 0.6, 0.64),
        Vec3::new(0.0, 0.0, 1.0),
    ];
    for (i, d) in dirs.iter().enumerate() {
        for (j, r) in [0.3, 1.7, 4.0].iter().enumerate() {
            if pts.len() < 20 {
                pts.push(d * (*r + 0.1 * (i + j) as f64));
            }
        }
    }
    pts.push(Vec3::new(3.0, -4.0, 12.0));
    pts.push(Vec3::new(0.2, 0.1, 0.45));
    pts.truncate(20);
    pts
}

fn check(pair: &PairConfig) {
    let u = UnitSystem::default();
    let density = PairDensity::new(pair, &u).unwrap();
    let env = Envelope::for_pair(pair);
    let spec = QuadratureSpec::default();
    let pts = sample_points();
    assert_eq!(pts.len(), 20);
    for r in pts {
        let exact = phi_pair(pair, &r, &u).unwrap();
        let num = potential_numeric(|x: &Vec3| density.charge(x), &env, &r, &spec).unwrap();
        let dev = (exact - num.value).abs() / num.value.abs();
        assert!(dev <= 1e-5, "{pair:?} at {r:?}: closed {exact}, quadrature {}, dev {dev}", num.value);
    }
}

#[test]
fn single_cloud_matches_quadrature() {
    let u = UnitSystem::default();
    let shape = PacketShape::natural();
    let rho = |x: &Vec3| pairfield::model::charge_density_single(&shape, x, &u);
    let env = Envelope::gaussian(Vec3::zeros(), 1.0);
    let spec = QuadratureSpec::default();
    let far = potential_numeric(rho, &env, &Vec3::new(0.0, 0.0, 10.0), &spec).unwrap();
    assert!((far.value - 0.1).abs() < 1e-6);
    let centre = potential_numeric(rho, &env, &Vec3::zeros(), &spec).unwrap();
    assert!((centre.value - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-4);
    let mid = potential_numeric(rho, &env, &Vec3::new(0.3, 1.1, -0.4), &spec).unwrap();
    let exact = phi_single(&shape, Vec3::new(0.3, 1.1, -0.4).norm(), &u);
    assert!((mid.value - exact).abs() < 1e-8 * exact);
}

#[test]
fn pair_potential_matches_quadrature() {
    let shape = PacketShape::natural();
    let r0 = Vec3::new(0.0, 0.0, 1.0);
    for symmetry in [Symmetry::Symmetric, Symmetry::Antisymmetric] {
        for p0 in [Vec3::new(0.0, 0.0, 0.8), Vec3::new(0.8, 0.0, 0.0), Vec3::new(0.0, 1.5, 0.0)] {
            check(&PairConfig::new(shape, r0, p0, symmetry));
        }
    }
}
