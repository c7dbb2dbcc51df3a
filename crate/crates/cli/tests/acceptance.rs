//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if any fails.
//!
//! Run with `cargo test -p ramsey-cosets-cli --test acceptance`.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use ramsey_cosets::bounds::{bounds_for, formal_sum_feasible, lower_bound, ramsey_bound};
use ramsey_cosets::checker::{fast_check, naive_check};
use ramsey_cosets::fourier::{count_schur_fourier, count_schur_naive, transform, uniformity_profile};
use ramsey_cosets::modarith::is_prime;
use ramsey_cosets::search::{parse_bfile, search_range, verify_nonexistence, CapPolicy, SequenceTable};
use ramsey_cosets::{CosetDecomposition, ResidueSet};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ramsey")
}

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/b263308.txt")
}

fn published() -> Result<SequenceTable, String> {
    let text = std::fs::read_to_string(fixture()).map_err(|e| e.to_string())?;
    parse_bfile(&text).map_err(|e| e.to_string())
}

fn trial_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn valid_pairs(p_max: u64) -> Vec<(u64, u64)> {
    (3..p_max)
        .filter(|&p| is_prime(p))
        .flat_map(|p| {
            (1..p)
                .filter(move |&m| (p - 1) % m == 0 && ((p - 1) / m) % 2 == 0)
                .map(move |m| (p, m))
        })
        .collect()
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(())
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let pairs = valid_pairs(500);
    for &(p, m) in &pairs {
        let dec = CosetDecomposition::with_smallest_root(p, m).map_err(|e| e.to_string())?;
        let (fast, naive) = (fast_check(&dec).verdict(), naive_check(&dec).verdict());
        if fast != naive {
            return Err(format!("p = {p}, m = {m}: fast {fast}, naive {naive}"));
        }
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("{} decompositions agree", pairs.len()))
}

fn corollary_m13() -> Outcome {
    let start = Instant::now();
    let out = Command::new(bin())
        .args(["verify-none", "--m", "13"])
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.code() != Some(0) {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stdout)
        ));
    }
    let outcomes = verify_nonexistence(13).map_err(|e| e.to_string())?;
    let expected = (2..=28_566u64).filter(|&p| p % 26 == 1 && trial_prime(p)).count();
    if outcomes.len() != expected {
        return Err(format!("checked {} primes, sieve says {expected}", outcomes.len()));
    }
    if let Some((p, _)) = outcomes.iter().find(|(_, o)| o.verdict()) {
        return Err(format!("p = {p} passes"));
    }
    let table = published()?;
    if table.get(13) != Some(0) {
        return Err("b-file entry for 13 is not 0".into());
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("{expected} primes up to 28566, none passes"))
}

fn m8_window() -> Outcome {
    let start = Instant::now();
    let outcomes = verify_nonexistence(8).map_err(|e| e.to_string())?;
    if outcomes.iter().any(|(p, _)| *p > 4101 || p % 16 != 1) {
        return Err("candidate outside the window".into());
    }
    if let Some((p, _)) = outcomes.iter().find(|(_, o)| o.verdict()) {
        return Err(format!("p = {p} passes"));
    }
    let code = Command::new(bin())
        .args(["verify-none", "--m", "8"])
        .output()
        .map_err(|e| e.to_string())?
        .status
        .code();
    if code != Some(0) {
        return Err(format!("verify-none --m 8 exit {code:?}"));
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("{} primes up to 4101, none passes", outcomes.len()))
}

fn small_m_existence() -> Outcome {
    let start = Instant::now();
    let table = published()?;
    let records = search_range(2, 30, CapPolicy::UpperBound, 0).map_err(|e| e.to_string())?;
    let mut compared = 0;
    for r in records.iter().filter(|r| r.m != 8 && r.m != 13) {
        if r.smallest_p == 0 {
            return Err(format!("m = {} found nothing", r.m));
        }
        let want = table.get(r.m).ok_or(format!("b-file lacks m = {}", r.m))?;
        if want != r.smallest_p {
            return Err(format!("m = {}: computed {}, b-file {want}", r.m, r.smallest_p));
        }
        compared += 1;
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("{compared} colour counts match the b-file"))
}

fn sweep_to_120() -> Outcome {
    let start = Instant::now();
    let out = Command::new(bin())
        .args(["search", "--m", "2..120", "--stable-output"])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit {:?}", out.status.code()));
    }
    let took = start.elapsed();
    let table = published()?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut zeros = Vec::new();
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let cols: Vec<u64> = line
            .split(',')
            .map(|c| c.parse().map_err(|_| format!("bad row {line}")))
            .collect::<Result<_, _>>()?;
        let (m, p) = (cols[0], cols[1]);
        if p == 0 {
            zeros.push(m);
        }
        if table.get(m) != Some(p) {
            return Err(format!("m = {m}: computed {p}, b-file {:?}", table.get(m)));
        }
        rows += 1;
    }
    if rows != 119 || zeros != [8, 13] {
        return Err(format!("{rows} rows, zeros at {zeros:?}"));
    }
    within(Duration::from_secs(600), start)?;
    Ok(format!("119 rows match, zeros at {zeros:?}, {took:.2?}"))
}

fn lower_bound_soundness() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for m in 7..=20u64 {
        for p in (2 * m + 1..lower_bound(m)).step_by(2 * m as usize).filter(|&p| is_prime(p)) {
            let dec = CosetDecomposition::with_smallest_root(p, m).map_err(|e| e.to_string())?;
            if naive_check(&dec).verdict() {
                return Err(format!("m = {m}, p = {p} passes below the bound"));
            }
            checked += 1;
        }
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("{checked} candidates below 2m^2-2m+1 all fail"))
}

fn formal_sum_inequality() -> Outcome {
    let mut prime_cases = 0;
    for m in 7..=50u64 {
        let p = 2 * m * m - 4 * m + 1;
        if formal_sum_feasible(p, m) {
            return Err(format!("m = {m}, p = {p} satisfies the inequality"));
        }
        prime_cases += is_prime(p) as usize;
    }
    Ok(format!("fails for all 44 values ({prime_cases} of them prime)"))
}

fn fourier_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = rand::rngs::StdRng::seed_from_u64(20160401);
    let mut tested = 0;
    for p in [11u64, 101, 499, 1009] {
        for _ in 0..50 {
            let density: f64 = rng.gen_range(0.0..1.0);
            let a = ResidueSet::from_residues(p, (0..p).filter(|_| rng.gen_bool(density)));
            let naive = count_schur_naive(&a);
            match count_schur_fourier::<f64>(&a) {
                Ok(n) if n == naive => tested += 1,
                other => return Err(format!("p = {p}: fourier {other:?}, naive {naive}")),
            }
        }
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("{tested} random subsets, zero rounding failures"))
}

fn spectrum_invariants() -> Outcome {
    let start = Instant::now();
    let pairs = valid_pairs(1000);
    for &(p, m) in &pairs {
        let dec = CosetDecomposition::with_smallest_root(p, m).map_err(|e| e.to_string())?;
        for i in [0, dec.m() - 1] {
            let a = dec.coset(i).map_err(|e| e.to_string())?;
            let s = transform::<f64>(&a);
            let (pf, size) = (p as f64, a.len() as f64);
            let c0 = s.coeffs[0];
            if (c0.re - size).abs() > 1e-9 * pf || c0.im.abs() > 1e-9 * pf {
                return Err(format!("p = {p}, m = {m}: coeff 0 = {c0}"));
            }
            let rel = (s.energy() - pf * size).abs() / (pf * size);
            if rel > 1e-9 {
                return Err(format!("p = {p}, m = {m}: Parseval relative error {rel:e}"));
            }
            for t in 1..p as usize {
                let d = (s.coeffs[p as usize - t] - s.coeffs[t].conj()).norm();
                if d > 1e-9 * pf {
                    return Err(format!("p = {p}, m = {m}, t = {t}: conjugate mismatch {d:e}"));
                }
            }
        }
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("{} decompositions", pairs.len()))
}

fn certificate_soundness() -> Outcome {
    let mut profiles = 0;
    let mut certified = 0;
    let mut failures = Vec::new();
    for m in 7..=13u64 {
        let cap = bounds_for(m).upper.min(30_000);
        for p in (2 * m + 1..=cap).step_by(2 * m as usize).filter(|&p| is_prime(p)) {
            let dec = CosetDecomposition::with_smallest_root(p, m).map_err(|e| e.to_string())?;
            let prof = uniformity_profile::<f64>(&dec);
            let sumfree = dec.coset(0).map_err(|e| e.to_string())?.is_sumfree();
            if prof.certified_not_sumfree && sumfree {
                failures.push(format!("certified but sum-free: {prof:?}"));
            }
            if !prof.within_sqrt_bound() {
                failures.push(format!(
                    "alpha_max {} > p^-1/2 = {}: {prof:?}",
                    prof.alpha_max,
                    1.0 / (p as f64).sqrt()
                ));
            }
            profiles += 1;
            certified += prof.certified_not_sumfree as usize;
        }
    }
    if !failures.is_empty() {
        return Err(failures.join("; "));
    }
    Ok(format!("{profiles} profiles ({certified} certified), no exceptions"))
}

fn ramsey_values() -> Outcome {
    let r = |m| ramsey_bound(m).map_err(|e| e.to_string());
    let (r2, r3, r13) = (r(2)?, r(3)?, r(13)?);
    let shown = format!("{:.2e}", r13 as f64);
    if (r2, r3) != (6, 17) || shown != "1.69e10" {
        return Err(format!("R(2) = {r2}, R(3) = {r3}, R(13) = {r13} ({shown})"));
    }
    Ok(format!("6, 17, {r13} ≈ {shown}"))
}

fn figure2_consistency() -> Outcome {
    let out = Command::new(bin())
        .args(["plotdata", "fig2", "--m", "7..30"])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit {:?}", out.status.code()));
    }
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    if lines.next() != Some("m,smallest_p,lower,upper") {
        return Err("unexpected header".into());
    }
    let mut inside = 0;
    for line in lines {
        let c: Vec<u64> = line.split(',').map(|x| x.parse().unwrap_or(u64::MAX)).collect();
        let (m, p, lo, hi) = (c[0], c[1], c[2], c[3]);
        if p != 0 && !(lo <= p && p <= hi) {
            return Err(format!("m = {m}: {p} outside [{lo}, {hi}]"));
        }
        inside += (p != 0) as usize;
    }
    Ok(format!("{inside} colour counts inside the window"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("fast and naive checkers agree for p < 500", oracle_equivalence),
        ("no 13-colour coset algebra for p <= 28566", corollary_m13),
        ("no 8-colour coset algebra for p <= 4101", m8_window),
        ("existence and b-file agreement for m <= 30", small_m_existence),
        ("sweep m = 2..120 with zeros exactly at 8, 13", sweep_to_120),
        ("nothing passes below 2m^2-2m+1 for 7 <= m <= 20", lower_bound_soundness),
        ("formal-sum inequality fails at 2m^2-4m+1", formal_sum_inequality),
        ("Fourier Schur count equals enumeration", fourier_identity),
        ("Parseval and spectrum symmetry for p < 1000", spectrum_invariants),
        ("uniformity certificate sound, alpha_max <= p^-1/2", certificate_soundness),
        ("Ramsey bound values", ramsey_values),
        ("smallest moduli lie inside the window", figure2_consistency),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
