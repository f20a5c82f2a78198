use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use loopdetect::vid::{packet_digest, virtual_id, RetransmissionNonce, TrueId};

#[test]
fn distinct_true_ids_give_distinct_virtual_ids() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let digest = packet_digest(b"shared payload", RetransmissionNonce(5));
    let mut seen = HashSet::new();
    for _ in 0..10_000 {
        let t = TrueId(rng.gen());
        assert!(seen.insert(virtual_id(&t, &digest)));
    }
}

#[test]
fn virtual_ids_change_with_nonce() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let t = TrueId(rng.gen());
        let payload: [u8; 24] = rng.gen();
        let n1: u32 = rng.gen();
        let n2 = n1.wrapping_add(rng.gen_range(1..u32::MAX));
        assert_ne!(
            virtual_id(&t, &packet_digest(&payload, RetransmissionNonce(n1))),
            virtual_id(&t, &packet_digest(&payload, RetransmissionNonce(n2)))
        );
    }
}

#[test]
fn top_byte_is_uniform_over_nonces() {
    let t = TrueId::from_key(b"router public key");
    let mut counts = [0u32; 256];
    const SAMPLES: u32 = 10_000;
    for nonce in 0..SAMPLES {
        let v = virtual_id(&t, &packet_digest(b"payload", RetransmissionNonce(nonce)));
        counts[(v.get() >> 56) as usize] += 1;
    }
    let expected = SAMPLES as f64 / 256.0;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let p = 1.0 - ChiSquared::new(255.0).unwrap().cdf(stat);
    assert!(p > 0.001, "chi2={stat} p={p}");
}
