//! Browser bindings for the loop detection demo page in `www/`.
//!
//! Build with `wasm-pack build --target web --out-dir www/pkg` and serve
//! `www/` as static files.

use loopdetect::analysis::{
    collision_probability_approx, collision_probability_exact, CollisionQuery,
};
use loopdetect::simulator::build_rho;
use loopdetect::{predict_detection_hop, simulate, CycleStructure, IdSource};
use wasm_bindgen::prelude::*;

/// Largest tail or cycle the page accepts; keeps detection inside the
/// 16-bit hop counter.
pub const MAX_SEGMENT: usize = 4096;

/// Trace CSV for a packet originated at the tail end of a rho topology.
#[wasm_bindgen(js_name = simulateRho)]
pub fn simulate_rho(mu: usize, lambda: usize, seed: u64) -> Result<String, JsError> {
    if lambda == 0 || lambda > MAX_SEGMENT || mu > MAX_SEGMENT {
        return Err(JsError::new(&format!(
            "need 1 <= lambda <= {MAX_SEGMENT} and mu <= {MAX_SEGMENT}"
        )));
    }
    Ok(rho_trace_csv(mu, lambda, seed))
}

fn rho_trace_csv(mu: usize, lambda: usize, seed: u64) -> String {
    let graph = build_rho(mu, lambda, IdSource::Seeded(seed)).expect("lambda checked");
    simulate(&graph, 0, graph.default_max_hops())
        .expect("start node exists")
        .to_csv()
}

#[wasm_bindgen(js_name = predictDetectionHop)]
pub fn predict_detection_hop_js(mu: usize, lambda: usize) -> usize {
    CycleStructure::new(mu, lambda.max(1))
        .map(predict_detection_hop)
        .unwrap_or(0)
}

/// Collision probability curve for one id width, sampled at
/// `2^0, 2^(1/steps), ...` up to `2^max_log2` routers. Returned flat as
/// `[n, p_exact, p_approx]` triples.
#[wasm_bindgen(js_name = collisionCurve)]
pub fn collision_curve(id_bits: u32, max_log2: u32, steps_per_octave: u32) -> Vec<f64> {
    let id_bits = id_bits.clamp(1, 128);
    let max_log2 = max_log2.min(20);
    let steps = steps_per_octave.max(1);
    let mut out = Vec::new();
    let mut last = 0;
    for i in 0..=max_log2 * steps {
        let n = 2f64.powf(i as f64 / steps as f64).round() as u64;
        if n == last {
            continue;
        }
        last = n;
        let q = CollisionQuery::new(n, id_bits).expect("inputs clamped");
        out.extend([
            n as f64,
            collision_probability_exact(q),
            collision_probability_approx(q),
        ]);
    }
    out
}

/// Detection hop of the tortoise header for every cycle length `1..=max_lambda`
/// behind a tail of `mu`, flat as `[lambda, brent_hop, ttl_hop]` triples.
#[wasm_bindgen(js_name = latencySweep)]
pub fn latency_sweep(mu: usize, max_lambda: usize, ttl: usize) -> Vec<f64> {
    let mu = mu.min(MAX_SEGMENT);
    (1..=max_lambda.clamp(1, MAX_SEGMENT))
        .flat_map(|lambda| {
            let structure = CycleStructure::new(mu, lambda).expect("lambda >= 1");
            let hop = predict_detection_hop(structure);
            [lambda as f64, hop as f64, ttl as f64]
        })
        .collect()
}
