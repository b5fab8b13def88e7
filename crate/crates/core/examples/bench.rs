use annrel_core::claims::run_claim;
use annrel_core::lie::{build_algebra, SignConvention};
use annrel_core::relations::{Ambient, ClosureOptions, ModeSet, RelCtx};
use std::sync::Arc;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("phases");
    match which {
        "phases" => {
            let cutoff: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(5);
            let alg = build_algebra("A2".parse().unwrap(), SignConvention::Standard).unwrap();
            let ctx = RelCtx::new(Arc::new(alg), 1).unwrap();
            let t0 = Instant::now();
            let mut known = std::collections::BTreeMap::new();
            let mut rhs = Vec::new();
            for d in 3..=cutoff {
                let td = Instant::now();
                let dims = ctx.kernel_dims(d, Ambient::Full, None);
                println!("kernel_dims d={d}: total={} rank={} in {:.1}s", dims.total, dims.rank, td.elapsed().as_secs_f64());
                rhs.push(dims.total);
                for (w, n) in dims.by_weight {
                    known.insert((d, w), n);
                }
            }
            println!("kernel phase: {:.1}s", t0.elapsed().as_secs_f64());
            let t1 = Instant::now();
            let closure = ctx
                .submodule_closure(
                    &[ctx.q_obvious()],
                    &ClosureOptions {
                        modes: ModeSet::All,
                        with_translation: true,
                        ambient: Ambient::Full,
                        min_degree: 3,
                        cutoff,
                        known_dims: Some(known),
                        verify_kernel_membership: std::env::var("VERIFY_MEMBERSHIP").is_ok(),
                    },
                )
                .unwrap();
            println!("closure phase: {:.1}s dims={:?}", t1.elapsed().as_secs_f64(), closure.dims);
        }
        "a2" => {
            let t = Instant::now();
            let rep = run_claim("thm-6.2", "A2".parse().unwrap(), 1, 6, SignConvention::Standard).unwrap();
            println!("thm-6.2 A2 d6: {} in {:.1}s", rep.verdict, t.elapsed().as_secs_f64());
        }
        _ => panic!(),
    }
}
