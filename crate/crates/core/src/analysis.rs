//! Node-id collision probabilities and detection latency against a hop
//! limit.

use std::io::{self, Write};

use thiserror::Error;

use crate::reference::{predict_detection_hop, CycleStructure};
use crate::simulator::{build_rho_for, hop_limit_baseline, simulate, IdSource, SimOutcome};

/// Default id widths for the collision table.
pub const DEFAULT_ID_BITS: [u32; 4] = [24, 32, 48, 64];

/// Default path lengths for the collision table: 2^4 through 2^16.
pub fn default_path_lengths() -> Vec<u64> {
    (4..=16).map(|k| 1u64 << k).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("id width must be in 1..=128 bits, got {0}")]
    BadIdBits(u32),
    #[error("path length must be at least 1")]
    EmptyPath,
    #[error("grid must not be empty")]
    EmptyGrid,
    #[error("ttl must be at least 1")]
    ZeroTtl,
    #[error("predicted detection at hop {predicted} for mu={mu} lambda={lambda}, simulation gave {observed}")]
    PredictorMismatch {
        mu: usize,
        lambda: usize,
        predicted: usize,
        observed: SimOutcome,
    },
}

/// `path_length` routers each drawing a uniform `id_bits`-bit id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollisionQuery {
    path_length: u64,
    id_bits: u32,
}

impl CollisionQuery {
    pub fn new(path_length: u64, id_bits: u32) -> Result<Self, AnalysisError> {
        if !(1..=128).contains(&id_bits) {
            return Err(AnalysisError::BadIdBits(id_bits));
        }
        if path_length == 0 {
            return Err(AnalysisError::EmptyPath);
        }
        Ok(Self {
            path_length,
            id_bits,
        })
    }

    pub fn path_length(&self) -> u64 {
        self.path_length
    }

    pub fn id_bits(&self) -> u32 {
        self.id_bits
    }

    fn id_space(&self) -> f64 {
        2f64.powi(self.id_bits as i32)
    }

    /// More routers than ids guarantees a repeat.
    fn exceeds_id_space(&self) -> bool {
        self.id_bits < 128 && u128::from(self.path_length) > 1u128 << self.id_bits
    }
}

/// Probability that at least two of the routers share an id:
/// `1 - prod_{k=1}^{n-1} (1 - k / 2^b)`, accumulated as a sum of logs.
pub fn collision_probability_exact(q: CollisionQuery) -> f64 {
    if q.exceeds_id_space() {
        return 1.0;
    }
    let space = q.id_space();
    let log_none: f64 = (1..q.path_length)
        .map(|k| (-(k as f64) / space).ln_1p())
        .sum();
    let p = -log_none.exp_m1();
    debug_assert!((0.0..=1.0).contains(&p), "probability {p} out of range");
    p
}

/// Exponential approximation `1 - exp(-n(n-1) / 2^(b+1))`.
pub fn collision_probability_approx(q: CollisionQuery) -> f64 {
    let n = q.path_length as f64;
    let exponent = n * (n - 1.0) / (2.0 * q.id_space());
    -(-exponent).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionRow {
    pub id_bits: u32,
    pub path_length: u64,
    pub p_exact: f64,
    pub p_approx: f64,
}

pub const COLLISION_CSV_HEADER: &str = "id_bits,path_length,p_exact,p_approx";

/// Collision probabilities over the cross product of widths and lengths,
/// width-major.
pub fn figure1_table(
    bit_widths: &[u32],
    path_lengths: &[u64],
) -> Result<Vec<CollisionRow>, AnalysisError> {
    if bit_widths.is_empty() || path_lengths.is_empty() {
        return Err(AnalysisError::EmptyGrid);
    }
    let mut lengths = path_lengths.to_vec();
    lengths.sort_unstable();
    let mut rows = Vec::with_capacity(bit_widths.len() * lengths.len());
    for &b in bit_widths {
        for &n in &lengths {
            let q = CollisionQuery::new(n, b)?;
            rows.push(CollisionRow {
                id_bits: b,
                path_length: n,
                p_exact: collision_probability_exact(q),
                p_approx: collision_probability_approx(q),
            });
        }
    }
    Ok(rows)
}

/// Twelve significant digits.
fn fmt_probability(p: f64) -> String {
    format!("{p:.11e}")
}

pub fn write_collision_csv<W: Write>(rows: &[CollisionRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{COLLISION_CSV_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{}",
            row.id_bits,
            row.path_length,
            fmt_probability(row.p_exact),
            fmt_probability(row.p_approx)
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyRow {
    pub mu: usize,
    pub lambda: usize,
    pub brent_hop: usize,
    pub ttl_hop: usize,
    pub ratio: f64,
}

pub const LATENCY_CSV_HEADER: &str = "mu,lambda,brent_hop,ttl_hop,ratio";

/// Detection hop of the tortoise header next to the hop a TTL of `ttl`
/// would stop the packet at. Each predicted hop is checked against a live
/// simulation on a rho graph with distinct ids.
pub fn latency_table(
    cases: &[CycleStructure],
    ttl: usize,
) -> Result<Vec<LatencyRow>, AnalysisError> {
    if ttl == 0 {
        return Err(AnalysisError::ZeroTtl);
    }
    cases
        .iter()
        .map(|&structure| {
            let predicted = predict_detection_hop(structure);
            let graph = build_rho_for(structure, IdSource::Seeded(structure.len() as u64))
                .expect("cycle structure has a non-empty cycle");
            let trace = simulate(&graph, 0, graph.default_max_hops()).expect("start node exists");
            if trace.detected_at() != Some(predicted as u32) {
                return Err(AnalysisError::PredictorMismatch {
                    mu: structure.mu(),
                    lambda: structure.lambda(),
                    predicted,
                    observed: trace.outcome,
                });
            }
            let ttl_hop = hop_limit_baseline(structure, ttl);
            Ok(LatencyRow {
                mu: structure.mu(),
                lambda: structure.lambda(),
                brent_hop: predicted,
                ttl_hop,
                ratio: ttl_hop as f64 / predicted as f64,
            })
        })
        .collect()
}

pub fn write_latency_csv<W: Write>(rows: &[LatencyRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{LATENCY_CSV_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{:.6}",
            row.mu, row.lambda, row.brent_hop, row.ttl_hop, row.ratio
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64, b: u32) -> CollisionQuery {
        CollisionQuery::new(n, b).unwrap()
    }

    #[test]
    fn exact_examples() {
        assert_eq!(collision_probability_exact(q(1, 32)), 0.0);
        assert_eq!(collision_probability_exact(q(2, 1)), 0.5);
        assert_eq!(collision_probability_exact(q(3, 1)), 1.0);
        // Exactly 2^b routers can still all differ.
        assert!((collision_probability_exact(q(4, 2)) - (1.0 - 6.0 / 64.0)).abs() < 1e-15);
        let p = collision_probability_exact(q(8192, 32));
        assert!((0.005..=0.015).contains(&p));
    }

    #[test]
    fn approx_examples() {
        assert_eq!(collision_probability_approx(q(1, 32)), 0.0);
        let two_pow_neg_64 = 2f64.powi(-64);
        let p = collision_probability_approx(q(2, 64));
        assert!((p - two_pow_neg_64).abs() <= two_pow_neg_64 * 1e-12);
        let exact = collision_probability_exact(q(8192, 32));
        assert!((collision_probability_approx(q(8192, 32)) - exact).abs() <= 1e-6);
    }

    #[test]
    fn wide_ids() {
        let p = collision_probability_exact(q(1 << 20, 128));
        assert!(p > 0.0 && p < 1e-25);
        assert_eq!(collision_probability_exact(q((1 << 24) + 1, 24)), 1.0);
    }

    #[test]
    fn query_validation() {
        assert_eq!(CollisionQuery::new(5, 0), Err(AnalysisError::BadIdBits(0)));
        assert_eq!(
            CollisionQuery::new(5, 129),
            Err(AnalysisError::BadIdBits(129))
        );
        assert_eq!(CollisionQuery::new(0, 32), Err(AnalysisError::EmptyPath));
    }

    #[test]
    fn figure1_examples() {
        let rows = figure1_table(&[32], &[8192]).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((0.005..=0.015).contains(&rows[0].p_exact));

        let rows = figure1_table(&[1], &[3]).unwrap();
        assert_eq!(rows[0].p_exact, 1.0);

        let rows = figure1_table(&[64], &[512]).unwrap();
        assert!(rows[0].p_exact <= 1e-13);

        assert_eq!(figure1_table(&[], &[1]), Err(AnalysisError::EmptyGrid));
    }

    #[test]
    fn monotone_over_default_grid() {
        let lengths = default_path_lengths();
        let rows = figure1_table(&DEFAULT_ID_BITS, &lengths).unwrap();
        assert_eq!(rows.len(), 4 * 13);
        for pair in rows.chunks(lengths.len()) {
            for w in pair.windows(2) {
                assert!(w[0].p_exact <= w[1].p_exact);
            }
        }
        for i in 0..lengths.len() {
            for b in 1..DEFAULT_ID_BITS.len() {
                let narrow = rows[(b - 1) * lengths.len() + i].p_exact;
                let wide = rows[b * lengths.len() + i].p_exact;
                assert!(wide <= narrow);
            }
        }
        assert!(rows
            .iter()
            .all(|r| (0.0..=1.0).contains(&r.p_exact) && (0.0..=1.0).contains(&r.p_approx)));
    }

    #[test]
    fn exact_and_approx_agree_at_32_bits() {
        for n in 1..=(1u64 << 13) {
            let q = q(n, 32);
            let d = (collision_probability_exact(q) - collision_probability_approx(q)).abs();
            assert!(d <= 1e-6, "n={n} diff={d}");
        }
    }

    #[test]
    fn collision_csv() {
        let rows = figure1_table(&[1], &[3, 2]).unwrap();
        let mut buf = Vec::new();
        write_collision_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "id_bits,path_length,p_exact,p_approx\n\
             1,2,5.00000000000e-1,3.93469340287e-1\n\
             1,3,1.00000000000e0,7.76869839852e-1\n"
        );
    }

    #[test]
    fn latency_examples() {
        let s = |mu, lambda| CycleStructure::new(mu, lambda).unwrap();
        let rows = latency_table(&[s(2, 4), s(0, 1), s(0, 255)], 255).unwrap();
        assert_eq!((rows[0].brent_hop, rows[0].ttl_hop), (8, 255));
        assert!((rows[0].ratio - 31.875).abs() < 1e-12);
        assert_eq!((rows[1].brent_hop, rows[1].ttl_hop), (1, 255));
        assert_eq!((rows[2].brent_hop, rows[2].ttl_hop), (511, 255));
        assert!(rows[2].ratio < 1.0);
        assert_eq!(latency_table(&[s(0, 1)], 0), Err(AnalysisError::ZeroTtl));
    }

    #[test]
    fn latency_beyond_counter_width_is_a_mismatch() {
        let s = CycleStructure::new(0, 40_000).unwrap();
        assert!(matches!(
            latency_table(&[s], 255),
            Err(AnalysisError::PredictorMismatch {
                observed: SimOutcome::HopOverflow,
                ..
            })
        ));
    }
}
