//! End-to-end acceptance checks. Runs every criterion in order, prints one
//! PASS/FAIL line per criterion and exits nonzero if any failed.
//!
//! The statistical criteria use PBCH at SNR points calibrated so that the
//! check-and-keep BLER sits near 1e-2 for each list size; each run also
//! checks that the measured BLER is in a band around that target.

use std::process::ExitCode;
use std::time::Instant;

use nrpolar_core::sim::{self, CodeSpec, DecoderSpec, RunConfig, SweepResult};
use nrpolar_core::{
    crc_encode, modulate, polar_transform, sc_decode, CodeConfig, CrcMatrix, CrcSpec, DecodeStatus,
    DecodeTrace, DecoderConfig, Interleaver, ListDecoder, ReliabilitySequence, Variant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn bits(rng: &mut impl Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Remainder of `a(x) x^P` mod `g(x)`; `g` given highest degree first.
fn long_division(a: &[u8], g: &[u8]) -> Vec<u8> {
    let p = g.len() - 1;
    let mut w = a.to_vec();
    w.resize(a.len() + p, 0);
    for i in 0..a.len() {
        if w[i] == 1 {
            for j in 0..=p {
                w[i + j] ^= g[j];
            }
        }
    }
    w.split_off(a.len())
}

fn g24() -> Vec<u8> {
    let mut g = vec![0u8; 25];
    for e in [24, 23, 21, 20, 17, 15, 13, 12, 8, 4, 2, 1, 0] {
        g[24 - e] = 1;
    }
    g
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let toy = CrcSpec::from_exponents(&[3, 1, 0]).unwrap();
    let mut mismatches = 0;
    let mut total = 0u64;
    for a_len in 1..=12 {
        let m = CrcMatrix::build(&toy, a_len).unwrap();
        for word in 0u32..(1 << a_len) {
            let a: Vec<u8> = (0..a_len).map(|i| ((word >> i) & 1) as u8).collect();
            let c = crc_encode(&a, &m).unwrap();
            mismatches += (c[a_len..] != long_division(&a, &[1, 0, 1, 1])[..]) as usize;
            total += 1;
        }
    }
    let g = g24();
    let spec = CrcSpec::nr_crc24c();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for a_len in [32, 128, 140] {
        let m = CrcMatrix::build(&spec, a_len).unwrap();
        for _ in 0..10_000 {
            let a = bits(&mut rng, a_len);
            let c = crc_encode(&a, &m).unwrap();
            mismatches += (c[a_len..] != long_division(&a, &g)[..]) as usize;
            total += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    ensure(secs < 10.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{total} messages, 0 mismatches, {secs:.2} s"))
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let g = g24();
    for k in 25..=164 {
        let a = k - 24;
        let il = Interleaver::build(k, 24).map_err(|e| e.to_string())?;
        let pi = il.pi();
        let mut seen = vec![false; k];
        for &s in pi {
            ensure(s < k && !std::mem::replace(&mut seen[s], true), || {
                format!("K = {k}: not a permutation")
            })?;
        }
        let mut pos = vec![0; k];
        for (j, &s) in pi.iter().enumerate() {
            pos[s] = j;
        }
        // CRC bit p depends on message bit i when e_i leaves a 1 there
        for i in 0..a {
            let mut e = vec![0u8; a];
            e[i] = 1;
            for (p, &bit) in long_division(&e, &g).iter().enumerate() {
                ensure(bit == 0 || pos[i] < pos[a + p], || {
                    format!("K = {k}: CRC bit {p} placed before message bit {i}")
                })?;
            }
        }
        let last_message = pi.iter().rposition(|&s| s < a).unwrap();
        let distributed = pi[..last_message].iter().filter(|&&s| s >= a).count();
        ensure(distributed == il.distributed_count(a), || {
            format!("K = {k}: distributed count disagrees")
        })?;
        let want = match k {
            56 => Some(3),
            152 | 164 => Some(7),
            _ => None,
        };
        if let Some(w) = want {
            ensure(distributed == w, || {
                format!("K = {k}: {distributed} distributed, want {w}")
            })?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "K = 25..=164, precedence holds, counts 3/7/7, {secs:.2} s"
    ))
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for n in [8, 64, 512] {
        for _ in 0..1000 {
            let u = bits(&mut rng, n);
            let x = polar_transform(&u).unwrap();
            ensure(polar_transform(&x).unwrap() == u, || {
                format!("N = {n} not involutive")
            })?;
        }
    }
    let cfg = CodeConfig::nr(512, 32).unwrap();
    let mut failures = 0;
    for variant in [Variant::Plain, Variant::Ck, Variant::Cr, Variant::Cs] {
        for l in [1, 2, 4, 8] {
            let mut dec = ListDecoder::new(&cfg, DecoderConfig::new(variant, l).unwrap()).unwrap();
            for _ in 0..1000 {
                let a = bits(&mut rng, 32);
                let x = cfg.encode(&a).unwrap();
                let out = dec.decode(&modulate(&x)).unwrap();
                if out.status != DecodeStatus::Ok || out.message.as_deref() != Some(&a[..]) {
                    failures += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(failures == 0, || format!("{failures} noiseless failures"))?;
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "3000 involutions, 16000 noiseless frames, {secs:.1} s"
    ))
}

fn criterion_4() -> Verdict {
    let cfg = CodeConfig::nr(512, 32).unwrap();
    let mut dec = ListDecoder::new(&cfg, DecoderConfig::new(Variant::Plain, 1).unwrap()).unwrap();
    let mut mismatches = 0;
    for (s, snr) in [-9.0, -7.5, -6.0].into_iter().enumerate() {
        let params = nrpolar_core::ChannelParams::es_n0(snr).unwrap();
        for f in 0..1000 {
            let (_, llr) = sim::generate_frame(&cfg, &params, &mut sim::frame_rng(104, s, f));
            let u = sc_decode(&cfg, &llr).unwrap();
            let out = dec.decode(&llr).unwrap();
            if out.message != Some(cfg.message_from_u(&u).unwrap()) {
                mismatches += 1;
            }
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok("3000 noisy frames at -9, -7.5, -6 dB, 0 mismatches".into())
}

/// Min-sum metric of a complete input vector, evaluated along the SC
/// schedule with a dense transform for the partial sums.
fn brute_metric(alpha: &[f64], u: &[u8]) -> f64 {
    if alpha.len() == 1 {
        return if (alpha[0] < 0.0) != (u[0] == 1) {
            alpha[0].abs()
        } else {
            0.0
        };
    }
    let h = alpha.len() / 2;
    let left: Vec<f64> = (0..h)
        .map(|j| {
            let (a, b) = (alpha[j], alpha[j + h]);
            a.signum() * b.signum() * a.abs().min(b.abs())
        })
        .collect();
    let beta = dense_transform(&u[..h]);
    let right: Vec<f64> = (0..h)
        .map(|j| alpha[j + h] + (1.0 - 2.0 * beta[j] as f64) * alpha[j])
        .collect();
    brute_metric(&left, &u[..h]) + brute_metric(&right, &u[h..])
}

/// `u G_n` with `G_n` built as an explicit Kronecker power.
fn dense_transform(u: &[u8]) -> Vec<u8> {
    let n = u.len();
    let mut g = vec![vec![1u8]];
    while g.len() < n {
        let m = g.len();
        let mut next = vec![vec![0u8; 2 * m]; 2 * m];
        for r in 0..m {
            for c in 0..m {
                next[r][c] = g[r][c];
                next[r + m][c] = g[r][c];
                next[r + m][c + m] = g[r][c];
            }
        }
        g = next;
    }
    (0..n)
        .map(|c| (0..n).fold(0, |acc, r| acc ^ (u[r] & g[r][c])))
        .collect()
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let cfg = CodeConfig::new(8, 4, None, ReliabilitySequence::nr_standard()).unwrap();
    let info = cfg.info_set().to_vec();
    let mut dec = ListDecoder::new(&cfg, DecoderConfig::new(Variant::Plain, 16).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut mismatches = 0;
    for f in 0..1000 {
        // mix of channel-like and erasure-heavy frames
        let scale = if f % 2 == 0 { 1.5 } else { 4.0 };
        let llr: Vec<f64> = (0..8)
            .map(|_| {
                let v: f64 = rng.random_range(-scale..scale);
                if f % 5 == 0 {
                    (v * 2.0).round() / 2.0
                } else {
                    v
                }
            })
            .collect();
        // enumerate in decision order: first information bit most significant
        let mut best: Option<(f64, Vec<u8>)> = None;
        for m in 0..16u8 {
            let mut u = vec![0u8; 8];
            for (b, &ch) in info.iter().enumerate() {
                u[ch] = (m >> (3 - b)) & 1;
            }
            let metric = brute_metric(&llr, &u);
            if best.as_ref().is_none_or(|(pm, _)| metric < *pm) {
                best = Some((metric, dense_transform(&u)));
            }
        }
        let (pm, codeword) = best.unwrap();
        let out = dec.decode(&llr).unwrap();
        let msg = out.message.unwrap();
        let mut u = vec![0u8; 8];
        for (&ch, &b) in info.iter().zip(&msg) {
            u[ch] = b;
        }
        if dense_transform(&u) != codeword || (out.final_pm - pm).abs() > 1e-9 {
            mismatches += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    ensure(secs < 10.0, || format!("took {secs:.1} s"))?;
    Ok(format!("1000 frames, 0 mismatches, {secs:.2} s"))
}

fn passes_full_crc(cfg: &CodeConfig, stream: &[u8], g: &[u8]) -> bool {
    let pi = cfg.interleaver().pi();
    let mut c = vec![0u8; stream.len()];
    for (j, &s) in pi.iter().enumerate() {
        c[s] = stream[j];
    }
    let a = cfg.a();
    long_division(&c[..a], g) == c[a..]
}

fn criterion_6() -> Verdict {
    let cfg = CodeConfig::nr(512, 32).unwrap();
    let g = g24();
    let params = nrpolar_core::ChannelParams::es_n0(-9.0).unwrap();
    let l = 4;
    let mut cs = ListDecoder::new(&cfg, DecoderConfig::new(Variant::Cs, l).unwrap()).unwrap();
    let mut cr = ListDecoder::new(&cfg, DecoderConfig::new(Variant::Cr, l).unwrap()).unwrap();
    let mut trace = DecodeTrace::default();
    let (mut violations, mut cs_stops, mut cr_stops) = (0, 0, 0);
    for f in 0..10_000 {
        let (_, llr) = sim::generate_frame(&cfg, &params, &mut sim::frame_rng(106, 0, f));
        let out = cs.decode_traced(&llr, &mut trace).unwrap();
        cs_stops += (out.status == DecodeStatus::EarlyTerminated) as usize;
        violations += (trace.final_paths.len() != l) as usize;
        violations += trace
            .final_paths
            .iter()
            .filter(|p| !passes_full_crc(&cfg, &p.stream_bits, &g))
            .count();

        let out = cr.decode_traced(&llr, &mut trace).unwrap();
        violations += trace.live_per_leaf.iter().filter(|&&n| n > l).count();
        for ev in &trace.checks {
            violations += (!ev.survivors_consistent || ev.live_before > l) as usize;
            violations += (ev.valid > 0 && ev.live_after != ev.valid) as usize;
        }
        if out.status == DecodeStatus::EarlyTerminated {
            cr_stops += 1;
        } else {
            violations += trace
                .final_paths
                .iter()
                .filter(|p| !passes_full_crc(&cfg, &p.stream_bits, &g))
                .count();
        }
    }
    // the harness view of the same property
    let mut run = RunConfig::new(
        CodeSpec::preset("pbch").unwrap(),
        vec![DecoderSpec::new(Variant::Cs, l)],
        vec![-9.0],
    );
    run.max_frames = 10_000;
    run.min_frame_errors = u64::MAX;
    run.seed = 106;
    let res = sim::run_sweep(&run).map_err(|e| e.to_string())?;
    let e_e = res.points[0].stats.e_e;
    ensure(violations == 0 && cs_stops == 0 && e_e == 0, || {
        format!("{violations} violations, {cs_stops} CS stops, harness E_e = {e_e}")
    })?;
    ensure(cr_stops > 0, || {
        "CR never stopped early; the run exercised nothing".into()
    })?;
    Ok(format!(
        "10^4 frames at -9 dB, L = {l}: 0 violations, CS E_e = 0 ({} CS errors), {cr_stops} CR stops",
        res.points[0].stats.e_tot
    ))
}

/// PBCH operating points (Es/N0 dB) with check-and-keep BLER near 1e-2.
const OPERATING_POINTS: [(usize, f64); 4] = [(2, -7.75), (4, -8.25), (8, -8.75), (32, -9.25)];
const BLER_BAND: (f64, f64) = (3e-3, 3e-2);

fn pbch_run(l: usize, snr: f64, variants: &[Variant], min_errors: u64, seed: u64) -> SweepResult {
    let mut run = RunConfig::new(
        CodeSpec::preset("pbch").unwrap(),
        variants.iter().map(|&v| DecoderSpec::new(v, l)).collect(),
        vec![snr],
    );
    run.min_frame_errors = min_errors;
    run.max_frames = 2_000_000;
    run.seed = seed;
    sim::run_sweep(&run).expect("valid run")
}

struct Statistical {
    runs: Vec<(usize, f64, SweepResult)>,
}

impl Statistical {
    fn collect() -> Self {
        let runs = OPERATING_POINTS
            .iter()
            .map(|&(l, snr)| {
                let res = if l == 8 {
                    pbch_run(
                        l,
                        snr,
                        &[Variant::Ck, Variant::Cr, Variant::Cs],
                        500,
                        200 + l as u64,
                    )
                } else {
                    pbch_run(l, snr, &[Variant::Ck, Variant::Cr], 300, 200 + l as u64)
                };
                (l, snr, res)
            })
            .collect();
        Self { runs }
    }

    fn stats(&self, variant: Variant, l: usize) -> &nrpolar_core::sim::SnrPointStats {
        let (_, snr, res) = self.runs.iter().find(|r| r.0 == l).unwrap();
        &res.point(DecoderSpec::new(variant, l), *snr).unwrap().stats
    }
}

fn criterion_7(st: &Statistical) -> Verdict {
    let mut lines = Vec::new();
    for &(l, snr) in &OPERATING_POINTS {
        let (ck, cr) = (st.stats(Variant::Ck, l), st.stats(Variant::Cr, l));
        ensure(ck.e_tot >= 300 && cr.e_tot >= 300, || {
            format!("L = {l}: too few errors")
        })?;
        ensure(ck.bler() >= BLER_BAND.0 && ck.bler() <= BLER_BAND.1, || {
            format!(
                "L = {l}: CK BLER {:.2e} at {snr} dB is off target",
                ck.bler()
            )
        })?;
        lines.push(format!(
            "L={l}@{snr}dB eps CK {:.2}% CR {:.2}%",
            100.0 * ck.epsilon(),
            100.0 * cr.epsilon()
        ));
        if l <= 8 {
            ensure(ck.epsilon() >= cr.epsilon(), || {
                format!("L = {l}: eps(CK) < eps(CR)")
            })?;
        }
    }
    let (ck2, cr2) = (st.stats(Variant::Ck, 2), st.stats(Variant::Cr, 2));
    ensure(ck2.epsilon() > 0.90, || {
        format!("eps(CK, 2) = {:.4}", ck2.epsilon())
    })?;
    ensure((0.50..=0.85).contains(&cr2.epsilon()), || {
        format!("eps(CR, 2) = {:.4}", cr2.epsilon())
    })?;
    for v in [Variant::Ck, Variant::Cr] {
        let e = st.stats(v, 32).epsilon();
        ensure(e < 0.02, || format!("eps({v}, 32) = {e:.4}"))?;
    }
    Ok(lines.join("; "))
}

fn criterion_8(st: &Statistical) -> Verdict {
    let (ck, cr, cs) = (
        st.stats(Variant::Ck, 8),
        st.stats(Variant::Cr, 8),
        st.stats(Variant::Cs, 8),
    );
    ensure(
        ck.e_tot >= 500 && cr.e_tot >= 500 && cs.e_tot >= 500,
        || "fewer than 500 errors".into(),
    )?;
    ensure(ck.bler() >= BLER_BAND.0 && ck.bler() <= BLER_BAND.1, || {
        format!("CK BLER {:.2e} is off target", ck.bler())
    })?;
    let within = |lo: &sim::SnrPointStats, hi: &sim::SnrPointStats| {
        let sd = (lo.bler_std().powi(2) + hi.bler_std().powi(2)).sqrt();
        lo.bler() <= hi.bler() + 2.0 * sd
    };
    ensure(within(cs, cr), || {
        format!("BLER(CS) {:.3e} > BLER(CR) {:.3e}", cs.bler(), cr.bler())
    })?;
    ensure(within(cr, ck), || {
        format!("BLER(CR) {:.3e} > BLER(CK) {:.3e}", cr.bler(), ck.bler())
    })?;
    Ok(format!(
        "L=8 frames {}: BLER CS {:.3e} <= CR {:.3e} <= CK {:.3e}",
        ck.frames,
        cs.bler(),
        cr.bler(),
        ck.bler()
    ))
}

fn criterion_9(st: &Statistical) -> Verdict {
    let (ck, cr) = (st.stats(Variant::Ck, 2), st.stats(Variant::Cr, 2));
    ensure(ck.et_by_crc_index[0] == cr.et_by_crc_index[0], || {
        format!(
            "E_e(1): CK {} vs CR {}",
            ck.et_by_crc_index[0], cr.et_by_crc_index[0]
        )
    })?;
    let tail: f64 = cr.epsilon_i()[4..].iter().sum();
    let share = tail / cr.epsilon();
    ensure(share < 0.10, || {
        format!("CR tail share {:.2}%", 100.0 * share)
    })?;
    Ok(format!(
        "E_e(1) = {} for both; CR indices >= 5 hold {:.2}% of eps (tail {:.2}%, eps {:.2}%)",
        ck.et_by_crc_index[0],
        100.0 * share,
        100.0 * tail,
        100.0 * cr.epsilon()
    ))
}

fn criterion_10() -> Verdict {
    let mut run = RunConfig::new(
        CodeSpec::preset("pbch").unwrap(),
        sim::parse_decoders("ck:4,cr:4,cs:4").unwrap(),
        vec![-9.0, -8.5],
    );
    run.max_frames = 3000;
    run.min_frame_errors = 40;
    run.seed = 110;
    let mut outputs = Vec::new();
    for threads in [1, 2, 4, 1] {
        run.threads = Some(threads);
        let res = sim::run_sweep(&run).map_err(|e| e.to_string())?;
        let dir = tempfile::tempdir().unwrap();
        let files = sim::write_outputs(&res, dir.path()).map_err(|e| e.to_string())?;
        outputs.push((
            std::fs::read(&files.summary).unwrap(),
            std::fs::read(&files.per_crc).unwrap(),
        ));
    }
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), || {
        "CSV bytes differ between runs".into()
    })?;
    Ok("4 runs (1, 2, 4, 1 workers): byte-identical CSVs".into())
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: usize, name: &str, v: Verdict| match v {
        Ok(d) => println!("criterion {n:>2} PASS  {name}: {d}"),
        Err(d) => {
            failed += 1;
            println!("criterion {n:>2} FAIL  {name}: {d}");
        }
    };
    report(1, "CRC oracle equivalence", criterion_1());
    report(2, "interleaver structure", criterion_2());
    report(
        3,
        "transform involution and noiseless round trip",
        criterion_3(),
    );
    report(4, "single-path list equals SC", criterion_4());
    report(
        5,
        "full list equals exhaustive metric search",
        criterion_5(),
    );
    report(6, "variant invariants", criterion_6());
    let start = Instant::now();
    let st = Statistical::collect();
    println!(
        "(statistical runs took {:.0} s)",
        start.elapsed().as_secs_f64()
    );
    report(7, "early-termination trend", criterion_7(&st));
    report(8, "BLER ordering", criterion_8(&st));
    report(9, "per-index early-termination shape", criterion_9(&st));
    report(10, "determinism", criterion_10());
    if failed == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
