mod common;

use common::random_network;
use hypercrn::kinetics::{is_steady_flux, jacobian, ode_rhs, KineticState};
use hypercrn::network::stoichiometric_matrix;
use hypercrn::zmodule::SignedMultiset;
use hypercrn::{conservation_laws, hypercycle_basis};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(lo..=hi)), BigInt::from(rng.gen_range(1..=9)))
}

fn random_state<R: Rng>(rng: &mut R, net: &hypercrn::ReactionNetwork) -> KineticState<BigRational> {
    let x = (0..net.num_species()).map(|_| rat(rng, 0, 20)).collect();
    let k = (0..net.num_reactions()).map(|_| rat(rng, 1, 20)).collect();
    KineticState::new(net, x, k).unwrap()
}

#[test]
fn conservation_laws_annihilate_the_vector_field() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let r = rng.gen_range(1..=6);
        let net = random_network(&mut rng, 6, r, 2);
        let z = conservation_laws(&stoichiometric_matrix(&net));
        let state = random_state(&mut rng, &net);
        let xdot = ode_rhs(&net, &state);
        for v in &z.vectors {
            let dot: BigRational = v
                .values()
                .iter()
                .zip(&xdot)
                .map(|(c, x)| BigRational::from_integer(c.clone()) * x)
                .sum();
            assert!(dot.is_zero());
        }
    }
}

#[test]
fn jacobian_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let r = rng.gen_range(1..=6);
        let net = random_network(&mut rng, 6, r, 3);
        let exact = random_state(&mut rng, &net);
        let x: Vec<f64> = exact
            .concentrations()
            .iter()
            .map(|v| v.to_f64().unwrap() + 0.5)
            .collect();
        let k: Vec<f64> = exact.rates().iter().map(|v| v.to_f64().unwrap()).collect();
        let state = KineticState::new(&net, x.clone(), k.clone()).unwrap();
        let jac = jacobian(&net, &state);
        for t in 0..net.num_species() {
            let h = 1e-5 * x[t].max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[t] += h;
            xm[t] -= h;
            let fp = ode_rhs(&net, &KineticState::new(&net, xp, k.clone()).unwrap());
            let fm = ode_rhs(&net, &KineticState::new(&net, xm, k.clone()).unwrap());
            for s in 0..net.num_species() {
                let fd = (fp[s] - fm[s]) / (2.0 * h);
                let scale = jac[s][t].abs().max(1.0);
                assert!(
                    (fd - jac[s][t]).abs() / scale <= 1e-6,
                    "∂{s}/∂{t}: fd {fd} vs {}",
                    jac[s][t]
                );
            }
        }
    }
}

#[test]
fn vector_field_is_linear_in_rates() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let net = random_network(&mut rng, 5, 4, 2);
        let a = random_state(&mut rng, &net);
        let b_rates: Vec<BigRational> = (0..net.num_reactions()).map(|_| rat(&mut rng, 1, 9)).collect();
        let b = KineticState::new(&net, a.concentrations().to_vec(), b_rates.clone()).unwrap();
        let sum_rates: Vec<BigRational> = a.rates().iter().zip(&b_rates).map(|(x, y)| x + y).collect();
        let sum = KineticState::new(&net, a.concentrations().to_vec(), sum_rates).unwrap();
        let lhs = ode_rhs(&net, &sum);
        let rhs: Vec<BigRational> = ode_rhs(&net, &a)
            .iter()
            .zip(ode_rhs(&net, &b))
            .map(|(x, y)| x + y)
            .collect();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn steady_flux_iff_in_hypercycle_span() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let r = rng.gen_range(1..=6);
        let net = random_network(&mut rng, 6, r, 2);
        let n = stoichiometric_matrix(&net);
        let basis = hypercycle_basis(&n);
        // half the samples are built from the basis, half are random
        let j: Vec<BigRational> = if rng.gen_bool(0.5) && basis.rank() > 0 {
            let mut acc = vec![BigRational::zero(); net.num_reactions()];
            for y in &basis.vectors {
                let c = rat(&mut rng, -5, 5);
                for (a, v) in acc.iter_mut().zip(y.values()) {
                    *a += &c * BigRational::from_integer(v.clone());
                }
            }
            acc
        } else {
            (0..net.num_reactions()).map(|_| rat(&mut rng, -5, 5)).collect()
        };
        let l = j.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = j
            .iter()
            .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        let in_span = basis.spans(&SignedMultiset::new(n.col_labels().clone(), ints).unwrap());
        let steady = is_steady_flux(&n, &j, &BigRational::zero()).unwrap();
        assert_eq!(steady, in_span);
    }
}
