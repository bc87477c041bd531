//! Quick built-in consistency checks, run by `nrpolar selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{llr, modulate, transmit, ChannelParams};
use crate::crc::{crc_encode, crc_oracle_remainder, CrcMatrix, CrcSpec};
use crate::interleaver::{Interleaver, K_IL_MAX};
use crate::list::{DecodeStatus, DecodeTrace, DecoderConfig, ListDecoder, Variant};
use crate::polar::{polar_transform, sc_decode, CodeConfig};

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&mut ChaCha8Rng) -> std::result::Result<String, String>;

const CHECKS: [(&str, Check); 7] = [
    ("crc_matches_long_division", crc_matches_long_division),
    ("interleaver_structure", interleaver_structure),
    ("transform_involution", transform_involution),
    ("noiseless_round_trip", noiseless_round_trip),
    ("single_path_equals_sc", single_path_equals_sc),
    ("remove_and_select_invariants", remove_and_select_invariants),
    ("pbch_layout", pbch_layout),
];

/// Names of the available checks.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs every check whose name contains `filter` (all when `None`).
pub fn run(seed: u64, filter: Option<&str>) -> Vec<CheckReport> {
    CHECKS
        .iter()
        .filter(|(name, _)| filter.is_none_or(|f| name.contains(f)))
        .map(|&(name, check)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (passed, detail) = match check(&mut rng) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckReport {
                name,
                passed,
                detail,
            }
        })
        .collect()
}

fn bits(rng: &mut impl Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn crc_matches_long_division(rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let g = CrcSpec::nr_crc24c();
    let mut count = 0;
    for a_len in [32, 128, 140] {
        let m = CrcMatrix::build(&g, a_len).map_err(|e| e.to_string())?;
        for _ in 0..500 {
            let a = bits(rng, a_len);
            let c = crc_encode(&a, &m).map_err(|e| e.to_string())?;
            ensure(c[a_len..] == crc_oracle_remainder(&a, &g)[..], || {
                format!("mismatch at A = {a_len}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} random messages"))
}

/// Every CRC bit must come after all the message bits it depends on.
pub fn precedence_holds(il: &Interleaver, matrix: &CrcMatrix) -> bool {
    let a = matrix.message_len();
    (0..matrix.degree()).all(|p| {
        let crc_pos = il.pi_inv()[a + p];
        (0..a).all(|k| matrix.entry(k, p) == 0 || il.pi_inv()[k] < crc_pos)
    })
}

fn interleaver_structure(_: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let g = CrcSpec::nr_crc24c();
    for k in 25..=K_IL_MAX {
        let il = Interleaver::build(k, 24).map_err(|e| e.to_string())?;
        let mut sorted = il.pi().to_vec();
        sorted.sort_unstable();
        ensure(sorted.iter().copied().eq(0..k), || {
            format!("K = {k}: not a permutation")
        })?;
        let m = CrcMatrix::build(&g, k - 24).map_err(|e| e.to_string())?;
        ensure(precedence_holds(&il, &m), || {
            format!("K = {k}: CRC bit precedes its inputs")
        })?;
    }
    for (k, want) in [(56, 3), (152, 7), (164, 7)] {
        let got = Interleaver::build(k, 24).unwrap().distributed_count(k - 24);
        ensure(got == want, || {
            format!("K = {k}: {got} distributed bits, want {want}")
        })?;
    }
    Ok("K = 25..=164".into())
}

fn transform_involution(rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    for n in [8, 64, 512] {
        for _ in 0..100 {
            let u = bits(rng, n);
            let x = polar_transform(&u).map_err(|e| e.to_string())?;
            ensure(polar_transform(&x).unwrap() == u, || format!("N = {n}"))?;
        }
    }
    Ok("N = 8, 64, 512".into())
}

fn noiseless_round_trip(rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let cfg = CodeConfig::nr(512, 32).map_err(|e| e.to_string())?;
    for variant in [Variant::Plain, Variant::Ck, Variant::Cr, Variant::Cs] {
        for l in [1, 2, 4, 8] {
            let mut dec = ListDecoder::new(&cfg, DecoderConfig::new(variant, l).unwrap())
                .map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let a = bits(rng, 32);
                let x = cfg.encode(&a).unwrap();
                let out = dec.decode(&modulate(&x)).unwrap();
                ensure(out.message.as_deref() == Some(&a[..]), || {
                    format!("{variant}:{l} lost a noiseless frame")
                })?;
            }
        }
    }
    Ok("all variants, L = 1..8".into())
}

fn noisy(cfg: &CodeConfig, snr_db: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let a = bits(rng, cfg.a());
    let x = cfg.encode(&a).unwrap();
    let p = ChannelParams::es_n0(snr_db).unwrap();
    llr(&transmit(&modulate(&x), &p, rng), &p)
}

fn single_path_equals_sc(rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let cfg = CodeConfig::nr(512, 32).map_err(|e| e.to_string())?;
    let mut dec = ListDecoder::new(&cfg, DecoderConfig::new(Variant::Plain, 1).unwrap()).unwrap();
    for snr in [-9.0, -7.0, -5.0] {
        for _ in 0..50 {
            let y = noisy(&cfg, snr, rng);
            let u = sc_decode(&cfg, &y).unwrap();
            let out = dec.decode(&y).unwrap();
            ensure(out.message == Some(cfg.message_from_u(&u).unwrap()), || {
                format!("mismatch at {snr} dB")
            })?;
        }
    }
    Ok("150 noisy frames".into())
}

fn remove_and_select_invariants(rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let cfg = CodeConfig::nr(512, 32).map_err(|e| e.to_string())?;
    let matrix = cfg.crc_matrix().unwrap();
    let mut trace = DecodeTrace::default();
    let mut cr = ListDecoder::new(&cfg, DecoderConfig::new(Variant::Cr, 4).unwrap()).unwrap();
    let mut cs = ListDecoder::new(&cfg, DecoderConfig::new(Variant::Cs, 4).unwrap()).unwrap();
    for _ in 0..100 {
        let y = noisy(&cfg, -9.0, rng);
        cr.decode_traced(&y, &mut trace).unwrap();
        ensure(trace.max_live <= 4, || "CR list grew beyond L".into())?;
        ensure(trace.checks.iter().all(|c| c.survivors_consistent), || {
            "CR kept a path failing its check".into()
        })?;
        let out = cs.decode_traced(&y, &mut trace).unwrap();
        ensure(out.status == DecodeStatus::Ok, || "CS stopped early".into())?;
        for path in &trace.final_paths {
            let c = cfg.interleaver().deinterleave(&path.stream_bits).unwrap();
            ensure(crc_encode(&c[..32], matrix).unwrap() == c, || {
                "CS path fails the CRC".into()
            })?;
        }
    }
    Ok("100 noisy frames".into())
}

fn pbch_layout(_: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let cfg = CodeConfig::nr(512, 32).map_err(|e| e.to_string())?;
    ensure(cfg.k() == 56 && cfg.distributed_count() == 3, || {
        format!("K = {}, {} distributed", cfg.k(), cfg.distributed_count())
    })?;
    ensure(cfg.info_set().iter().all(|&i| i >= 247), || {
        "information set reaches below channel 247".into()
    })?;
    Ok("(512, 56)".into())
}
