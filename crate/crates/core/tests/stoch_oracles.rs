mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use tracecat::category::{Morphism, SampleRng, TracedCategory};
use tracecat::finfun::pfn::sample_pfn;
use tracecat::finfun::pfn_trace;
use tracecat::stoch::{kern_trace_series, Stoch, SubstochMatrix};

use common::oracles::{feedback_object, sparse_kernel, stoch_case, wire};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn series_converges_to_exact(seed in any::<u64>()) {
        let mut rng = SampleRng::seed_from_u64(seed);
        if let Err(e) = stoch_case(&mut rng) {
            return Err(TestCaseError::fail(e));
        }
    }

    #[test]
    fn traced_rows_stay_substochastic(seed in any::<u64>(), nu in 1usize..=4) {
        let mut rng = SampleRng::seed_from_u64(seed);
        let (a, b, u) = (wire("A", 2), wire("B", 2), feedback_object(nu, &mut rng));
        let f = sparse_kernel(&a.tensor(&u), &b.tensor(&u), &mut rng);
        let t = Stoch::default().trace(&f, &u).unwrap();
        for i in 0..t.nrows() {
            prop_assert!(t.row(i).iter().all(|&v| v >= 0.0));
            prop_assert!(t.row_mass(i) <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn deterministic_kernels_trace_like_functions(seed in any::<u64>(), nu in 0usize..=4) {
        let mut rng = SampleRng::seed_from_u64(seed);
        let (a, b, u) = (wire("A", 3), wire("B", 2), wire("U", nu));
        let f = sample_pfn(&a.tensor(&u), &b.tensor(&u), &mut rng);
        let (n, m) = (f.dom().union_size(), f.cod().union_size());
        let mut data = vec![0.0; n * m];
        for (x, y) in f.pairs() {
            data[x * m + y] = 1.0;
        }
        let k = SubstochMatrix::new(f.dom().clone(), f.cod().clone(), data).unwrap();
        let t = kern_trace_series(&k, &u, 1e-12).unwrap();
        let g = pfn_trace(&f, &u).unwrap();
        for x in 0..3 {
            for y in 0..2 {
                let want = if g.apply(x) == Some(y) { 1.0 } else { 0.0 };
                prop_assert_eq!(t.get(x, y), want);
            }
        }
    }
}
