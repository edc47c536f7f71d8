//! The acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p bav --test acceptance -- --nocapture` to see the lines.

use std::collections::{HashMap, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use billiard::families::{poly_cba, q_cba_symbolic};
use billiard::grid::{binomial, grid_size};
use billiard::random::{self, rng};
use billiard::rep::{build_operators, check_relations, local_action_check, nu_flags, nu_nilpotent};
use billiard::{
    loc, BilliardArray, Color, DeltaGrid, EdgeLabelling, FieldContext, Flavor, Location, Scalar, ValueFunction, Vector,
};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fields() -> [(&'static str, FieldContext); 3] {
    [("Q", FieldContext::Rationals), ("GF(101)", FieldContext::prime(101).unwrap()), ("Q(q)", FieldContext::RationalFunctions)]
}

fn gf101() -> FieldContext {
    FieldContext::prime(101).unwrap()
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

/// Constant-value array with a seeded change of basis.
fn constant_array(n: usize, psi: &Scalar, seed: u64) -> Result<BilliardArray, String> {
    let ctx = psi.ctx();
    let el = if n >= 2 {
        EdgeLabelling::from_values_canonical(&ValueFunction::constant(n, psi).map_err(err)?).map_err(err)?
    } else {
        EdgeLabelling::all_ones(n, ctx)
    };
    let m = random::invertible_matrix(ctx, n + 1, &mut rng(seed)).map_err(err)?;
    el.reconstruct_standard().and_then(|c| c.map(&m)).and_then(|c| c.to_billiard()).map_err(err)
}

fn c1_classification() -> Check {
    for (name, ctx) in fields() {
        for n in 2..=6 {
            for seed in 0..25 {
                let psi = random::value_function(n, ctx, &mut rng(seed)).map_err(err)?;
                let el = EdgeLabelling::from_values_canonical(&psi).map_err(err)?;
                let cba = el.reconstruct_standard().map_err(err)?;
                ensure!(cba.verify().is_ok(), "{name} N={n} seed={seed}: axioms fail");
                ensure!(cba.value_function().map_err(err)? == psi, "{name} N={n} seed={seed}: value function differs");
            }
        }
    }
    Ok(())
}

fn c2_flags() -> Check {
    for n in 1..=5 {
        for seed in 0..25 {
            let ba = random::billiard_array(n, gf101(), &mut rng(seed)).map_err(err)?;
            let triple = ba.flags().map_err(err)?;
            let back = triple.to_billiard().map_err(err)?;
            ensure!(back == ba, "N={n} seed={seed}: array not recovered");
            ensure!(back.flags().map_err(err)? == triple, "N={n} seed={seed}: flags not recovered");
        }
    }
    Ok(())
}

fn c3_dimensions() -> Check {
    for n in 1..=4 {
        for (name, ctx) in fields() {
            for seed in 0..3 {
                let t = random::billiard_array(n, ctx, &mut rng(seed)).map_err(err)?.flags().map_err(err)?;
                for (f, g) in [(&t.f1, &t.f2), (&t.f2, &t.f3), (&t.f3, &t.f1)] {
                    for r in 0..=n {
                        for s in 0..=n {
                            let d = f.get(r).intersect(g.get(s)).map_err(err)?.dim();
                            let expected = if r + s >= n { r + s - n + 1 } else { 0 };
                            ensure!(d == expected, "{name} N={n}: opposite dimension at ({r},{s}) is {d}");
                        }
                    }
                }
                for mu in DeltaGrid::new(n).poset() {
                    let d = t.triple_intersection(mu.r, mu.s, mu.t).map_err(err)?.dim();
                    ensure!(d == n - mu.rank() + 1, "{name} N={n}: triple dimension at {mu} is {d}");
                }
            }
        }
    }
    Ok(())
}

fn c4_recursion() -> Check {
    for (name, ctx) in fields() {
        for n in 2..=6 {
            for seed in 0..10 {
                let mut r = rng(seed);
                let el = random::labelling(n, ctx, &mut r).map_err(err)?;
                let boundary = random::invertible_matrix(ctx, n + 1, &mut r).map_err(err)?.columns();
                let closed = el.reconstruct(&boundary).map_err(err)?;
                // B_(r+1,s,t) = −β_{λμ} B_(r,s+1,t) − β_{λν} B_(r,s,t+1), row by row from r = 0.
                let mut b: HashMap<Location, Vector> = (0..=n).map(|i| (loc(0, n - i, i), boundary[i].clone())).collect();
                for row in 1..=n {
                    for s in 0..=n - row {
                        let t = n - row - s;
                        let (l, m, k) = (loc(row, s, t), loc(row - 1, s + 1, t), loc(row - 1, s, t + 1));
                        let v = b[&m]
                            .scale(&el.label(&l, &m).map_err(err)?.neg())
                            .add(&b[&k].scale(&el.label(&l, &k).map_err(err)?.neg()))
                            .map_err(err)?;
                        b.insert(l, v);
                    }
                }
                for (l, v) in closed.iter() {
                    ensure!(*v == b[l], "{name} N={n} seed={seed}: mismatch at {l}");
                }
            }
        }
    }
    Ok(())
}

fn c5_fixtures() -> Check {
    let poly = poly_cba(3, FieldContext::Rationals).map_err(err)?;
    ensure!(poly.verify().is_ok(), "polynomial family fails the axioms");
    let one = FieldContext::Rationals.one();
    ensure!(poly.value_function().map_err(err)?.constant_value() == Some(&one), "polynomial value is not 1");
    ensure!(poly.transition_scalars().map_err(err)?.values().all(Scalar::is_one), "polynomial scalars are not 1");

    let fq = FieldContext::RationalFunctions;
    let q = fq.q().map_err(err)?;
    let n = 3usize;
    let qf = q_cba_symbolic(n).map_err(err)?;
    ensure!(qf.verify().is_ok(), "q family fails the axioms");
    ensure!(qf.value_function().map_err(err)?.constant_value() == Some(&q), "q family value is not q");
    // x̄ = ȳ = 1, z̄ = q^{N−1}
    let bars = [fq.one(), fq.one(), q.pow(n as i64 - 1).map_err(err)?];
    let table = qf.transition_scalars().map_err(err)?;
    ensure!(table.len() == 6 * grid_size(n - 1), "table has {} entries", table.len());
    for c in qf.grid().cliques(Color::Black) {
        let [l, m, k] = c.locations;
        let p = |e: usize| q.pow(e as i64).unwrap();
        let expected = [
            ((l, m), p(c.base.r).div(&bars[1]).map_err(err)?),
            ((m, k), p(c.base.s).div(&bars[2]).map_err(err)?),
            ((k, l), p(c.base.t).div(&bars[0]).map_err(err)?),
        ];
        for ((a, b), beta) in expected {
            ensure!(table[&(a, b)] == beta, "scalar on {a} -> {b}");
            ensure!(table[&(b, a)] == beta.inv().map_err(err)?, "scalar on {b} -> {a}");
        }
    }
    Ok(())
}

fn c6_relations() -> Check {
    let rat = FieldContext::Rationals;
    let fq = FieldContext::RationalFunctions;
    let q = fq.q().map_err(err)?;
    let mut cases = Vec::new();
    for n in 1..=5 {
        cases.push((n, rat.one(), Flavor::Sl2));
    }
    for n in 1..=4 {
        cases.push((n, q.pow(-2).map_err(err)?, Flavor::Uq(q.clone())));
    }
    for (n, psi, flavor) in cases {
        let ba = constant_array(n, &psi, n as u64)?;
        let ops = build_operators(&ba, flavor.clone()).map_err(err)?;
        let rel = check_relations(&ops).map_err(err)?;
        ensure!(rel.is_ok(), "{flavor:?} N={n}: relations {:?}", rel.residuals.iter().map(|r| &r.relation).collect::<Vec<_>>());
        let local = local_action_check(&ops, &ba).map_err(err)?;
        ensure!(local.is_ok(), "{flavor:?} N={n}: local identities {:?}", local.failures);
    }
    Ok(())
}

fn c7_nu_flags() -> Check {
    let rat = FieldContext::Rationals;
    let fq = FieldContext::RationalFunctions;
    let q = fq.q().map_err(err)?;
    for n in 0..=4 {
        for (psi, flavor) in [(rat.one(), Flavor::Sl2), (q.pow(-2).map_err(err)?, Flavor::Uq(q.clone()))] {
            let ba = constant_array(n, &psi, 10 + n as u64)?;
            let ops = build_operators(&ba, flavor.clone()).map_err(err)?;
            ensure!(nu_flags(&ops).map_err(err)? == ba.flags().map_err(err)?, "{flavor:?} N={n}: flags differ");
            ensure!(nu_nilpotent(&ops).map_err(err)?, "{flavor:?} N={n}: ν^(N+1) ≠ 0");
        }
    }
    Ok(())
}

fn c8_grid() -> Check {
    for n in 0..=8 {
        let g = DeltaGrid::new(n);
        for a in g.locations() {
            let mut layers: HashMap<Location, (usize, u128)> = HashMap::from([(*a, (0, 1))]);
            let mut queue = VecDeque::from([*a]);
            while let Some(x) = queue.pop_front() {
                let (dx, cx) = layers[&x];
                for y in g.neighbors(&x) {
                    match layers.get_mut(&y) {
                        None => {
                            layers.insert(y, (dx + 1, cx));
                            queue.push_back(y);
                        }
                        Some((dy, cy)) if *dy == dx + 1 => *cy += cx,
                        _ => {}
                    }
                }
            }
            for b in g.locations() {
                let (d, count) = layers[b];
                ensure!(g.distance(a, b).map_err(err)? == d, "N={n}: distance {a} {b}");
                let paths = g.geodesic_paths(a, b).map_err(err)?;
                ensure!(paths.len() as u128 == count, "N={n}: enumeration {a} {b}");
                ensure!(g.geodesic_count(a, b).map_err(err)? == count, "N={n}: count {a} {b}");
                let k = [a.r.abs_diff(b.r), a.s.abs_diff(b.s), a.t.abs_diff(b.t)].into_iter().filter(|&x| x < d).max().unwrap_or(0);
                ensure!(binomial(d, k) == count, "N={n}: binomial {a} {b}");
            }
        }
        let black = if n >= 1 { grid_size(n - 1) } else { 0 };
        let white = if n >= 2 { grid_size(n - 2) } else { 0 };
        ensure!(g.cliques(Color::Black).len() == black, "N={n}: black cliques");
        ensure!(g.cliques(Color::White).len() == white, "N={n}: white cliques");
    }
    Ok(())
}

fn c9_rank_one() -> Check {
    for (name, ctx) in fields() {
        for n in 1..=6 {
            for seed in 0..5 {
                let el = random::labelling(n, ctx, &mut rng(seed)).map_err(err)?;
                for c in el.grid().black_cliques() {
                    let rank = el.coefficient_matrix(&c).map_err(err)?.rank();
                    ensure!(rank == 1, "{name} N={n} seed={seed}: rank {rank} at {}", c.base);
                }
            }
        }
    }
    Ok(())
}

fn c10_goldens() -> Check {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for seed in ["1", "2"] {
        for field in ["gf7", "fq"] {
            let out = Command::new(env!("CARGO_BIN_EXE_bav"))
                .args(["gen", "--n", "3", "--field", field, "--seed", seed])
                .output()
                .map_err(err)?;
            ensure!(out.status.success(), "gen {field} seed {seed} failed");
            let golden = std::fs::read(dir.join(format!("gen_n3_{field}_seed{seed}.json"))).map_err(err)?;
            ensure!(out.stdout == golden, "gen {field} seed {seed} differs from its golden file");
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("classification bijection", 60, c1_classification),
        ("flag bijection", 30, c2_flags),
        ("dimension laws", 30, c3_dimensions),
        ("reconstruction formula", 10, c4_recursion),
        ("example families", 10, c5_fixtures),
        ("representation relations", 120, c6_relations),
        ("nu flags", 60, c7_nu_flags),
        ("grid oracles", 10, c8_grid),
        ("rank-one coefficient matrices", 5, c9_rank_one),
        ("CLI determinism", 5, c10_goldens),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            if elapsed > Duration::from_secs(limit) {
                Err(format!("exceeded the {limit} s limit"))
            } else {
                Ok(())
            }
        });
        let secs = elapsed.as_secs_f64();
        match &result {
            Ok(()) => println!("PASS  {:>2} {name} ({secs:.2} s, limit {limit} s)", i + 1),
            Err(e) => {
                println!("FAIL  {:>2} {name} ({secs:.2} s, limit {limit} s): {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
