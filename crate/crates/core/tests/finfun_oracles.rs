mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use tracecat::category::SampleRng;
use tracecat::finfun::pfn::{sample_pfn, token_path};
use tracecat::finfun::{pinj_trace, pinj_validate, TokenExit};

use common::oracles::{pfn_case, rel_case, wire};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rel_trace_enumerates_paths(seed in any::<u64>(), nu in 0usize..=6) {
        let mut rng = SampleRng::seed_from_u64(seed);
        if let Err(e) = rel_case(nu, &mut rng) {
            return Err(TestCaseError::fail(e));
        }
    }

    #[test]
    fn pfn_trace_is_the_union_of_its_terms(seed in any::<u64>()) {
        let mut rng = SampleRng::seed_from_u64(seed);
        if let Err(e) = pfn_case(&mut rng) {
            return Err(TestCaseError::fail(e));
        }
    }

    #[test]
    fn token_paths_are_short(seed in any::<u64>(), na in 0usize..=3, nb in 0usize..=3, nu in 0usize..=6) {
        let mut rng = SampleRng::seed_from_u64(seed);
        let (a, b, u) = (wire("A", na), wire("B", nb), wire("U", nu));
        let f = sample_pfn(&a.tensor(&u), &b.tensor(&u), &mut rng);
        for x in 0..na {
            let p = token_path(&f, na, nb, x);
            prop_assert!(p.loop_elems.len() <= nu);
            let mut seen = p.loop_elems.clone();
            seen.sort_unstable();
            seen.dedup();
            prop_assert_eq!(seen.len(), p.loop_elems.len());
            if let TokenExit::Exit(y) = p.exit {
                prop_assert!(y < nb);
            }
        }
    }

    #[test]
    fn pinj_trace_stays_injective(seed in any::<u64>(), n in 0usize..=3, nu in 0usize..=4) {
        let mut rng = SampleRng::seed_from_u64(seed);
        let (a, u) = (wire("A", n), wire("U", nu));
        let d = a.tensor(&u);
        // a random injection: a shuffled prefix of the codomain
        let mut perm: Vec<usize> = (0..d.union_size()).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let table = perm.into_iter().map(|y| rand::Rng::gen_bool(&mut rng, 0.8).then_some(y)).collect();
        let f = pinj_validate(tracecat::finfun::PfnTable::new(d.clone(), d, table).unwrap()).unwrap();
        let t = pinj_trace(&f, &u).unwrap();
        let mut images: Vec<usize> = t.as_pfn().pairs().map(|(_, y)| y).collect();
        let len = images.len();
        images.sort_unstable();
        images.dedup();
        prop_assert_eq!(images.len(), len);
    }
}
