//! Acceptance gate: each criterion prints one PASS/FAIL line and the test
//! fails if any of them fails.
//!
//! Expected values are computed here from closed forms or from small
//! independent routines, never by calling the code path under test twice.

use std::time::{Duration, Instant};

use convexgap::analysis::{
    boundary_limit_regressions, classify_limit_infinity, classify_limit_zero, gamma_sweep, pgm_certificates,
    LimitClass,
};
use convexgap::bounds::{bound_report, carlier_bound, dual_carlier_check, minty_decompose, operator_report};
use convexgap::catalog::{
    inverse_operator, make_burg, make_energy, make_rotator, make_shannon, make_subspace_indicator,
    subdifferential_operator,
};
use convexgap::cyclic::{generate_cyclic_sequence, ncyclic_identity_check, series_bound, GammaSchedule};
use convexgap::oracle::{numeric_conjugate, numeric_prox, GridSpec};
use convexgap::{ConvexFunction, ExtReal, Operator, Tolerances, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type GraphSampler = Box<dyn Fn(&mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>)>;
type Criterion = (&'static str, fn() -> Outcome);

const GAMMAS: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

fn v(c: &[f64]) -> Vector {
    Vector::new(c.to_vec()).unwrap()
}

fn uniform(rng: &mut ChaCha8Rng, dim: usize, lo: f64, hi: f64) -> Vector {
    v(&(0..dim).map(|_| rng.gen_range(lo..hi)).collect::<Vec<_>>())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(f64::MIN_POSITIVE)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

/// Orthogonal projector onto span of `basis` from the normal equations.
struct Projector {
    basis: Vec<Vec<f64>>,
    gram_inv: Vec<Vec<f64>>,
}

impl Projector {
    fn new(basis: &[Vec<f64>]) -> Self {
        let k = basis.len();
        let mut m: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                let mut row: Vec<f64> = (0..k).map(|j| dot(&basis[i], &basis[j])).collect();
                row.extend((0..k).map(|j| if i == j { 1.0 } else { 0.0 }));
                row
            })
            .collect();
        // Gauss-Jordan on [G | I].
        for c in 0..k {
            let p = (c..k).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
            m.swap(c, p);
            let d = m[c][c];
            m[c].iter_mut().for_each(|e| *e /= d);
            for r in 0..k {
                if r != c {
                    let f = m[r][c];
                    let pivot = m[c].clone();
                    m[r].iter_mut().zip(&pivot).for_each(|(e, q)| *e -= f * q);
                }
            }
        }
        Projector {
            basis: basis.to_vec(),
            gram_inv: m.into_iter().map(|row| row[k..].to_vec()).collect(),
        }
    }

    fn project(&self, z: &[f64]) -> Vec<f64> {
        let b: Vec<f64> = self.basis.iter().map(|u| dot(u, z)).collect();
        let coef: Vec<f64> = self.gram_inv.iter().map(|row| dot(row, &b)).collect();
        let mut out = vec![0.0; z.len()];
        for (c, u) in coef.iter().zip(&self.basis) {
            out.iter_mut().zip(u).for_each(|(o, ui)| *o += c * ui);
        }
        out
    }

    fn perp(&self, z: &[f64]) -> Vec<f64> {
        sub(z, &self.project(z))
    }
}

/// Solves `w + ln w = u` by bisection.
fn lambert_w_exp_bisect(u: f64) -> f64 {
    let (mut lo, mut hi) = (1e-300f64, u.abs() + 2.0);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid + mid.ln() < u {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-17 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn operators() -> Vec<Operator> {
    vec![
        subdifferential_operator(make_energy(2).unwrap()),
        subdifferential_operator(make_subspace_indicator(&[v(&[1.0, -2.0])]).unwrap()),
        subdifferential_operator(make_burg()),
        subdifferential_operator(make_shannon()),
        make_rotator(),
    ]
}

fn criterion_1_chain() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tol = Tolerances::default();
    let functions = [
        make_energy(2).unwrap(),
        make_subspace_indicator(&[v(&[2.0, 1.0])]).unwrap(),
        make_burg(),
        make_shannon(),
    ];
    let mut finite_gaps = 0;
    for f in &functions {
        for _ in 0..500 {
            let x = uniform(&mut rng, f.dim(), -1.0, 3.0);
            let xs = uniform(&mut rng, f.dim(), -3.0, 1.0);
            for &g in &GAMMAS {
                let r = bound_report(f, g, &x, &xs, &tol).map_err(|e| e.to_string())?;
                let gap = r.gap.ok_or("missing gap")?;
                let c = r.carlier;
                let mut ok = c >= -1e-9 && gap >= ExtReal::new(c - 1e-9);
                if let Some(fitz) = r.fitzpatrick {
                    ok &= gap >= fitz + (-1e-9) && fitz >= ExtReal::new(c - 1e-9);
                }
                finite_gaps += usize::from(gap.is_finite());
                ensure(ok, || format!("{} gamma={g} x={x} x*={xs}: {r:?}", f.name()))?;
            }
        }
    }
    ensure(finite_gaps > 2000, || format!("only {finite_gaps} finite gaps"))?;
    within(start, Duration::from_secs(5))
}

fn criterion_2_duality() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for a in operators() {
        let generic = inverse_operator(a.clone());
        for _ in 0..200 {
            let x = uniform(&mut rng, a.dim(), -3.0, 3.0);
            let xs = uniform(&mut rng, a.dim(), -3.0, 3.0);
            for &g in &GAMMAS {
                let (c, dual) = dual_carlier_check(&a, g, &x, &xs).map_err(|e| e.to_string())?;
                let via_generic = carlier_bound(&generic, 1.0 / g, &xs, &x).map_err(|e| e.to_string())?;
                let tol = 1e-10 * (1.0 + c.abs());
                ensure((c - dual).abs() <= tol && (c - via_generic).abs() <= tol, || {
                    format!("{} gamma={g} x={x} x*={xs}: {c} vs {dual} / {via_generic}", a.name())
                })?;
            }
        }
    }
    within(start, Duration::from_secs(2))
}

fn criterion_3_minty() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ops = operators();
    for i in 0..500 {
        let a = &ops[i % ops.len()];
        let x = uniform(&mut rng, a.dim(), -3.0, 3.0);
        let xs = uniform(&mut rng, a.dim(), -3.0, 3.0);
        let g = GAMMAS[rng.gen_range(0..GAMMAS.len())];
        let m = minty_decompose(a, g, &x, &xs).map_err(|e| e.to_string())?;
        let (xc, sc, ac, asc) = (x.coords(), xs.coords(), m.a.coords(), m.a_star.coords());
        let dx = sub(xc, ac);
        let ds = sub(sc, asc);
        let r = norm_sq(&dx);
        let m3: f64 = (0..xc.len())
            .map(|j| (xc[j] + g * sc[j] - ac[j] - g * asc[j]).abs())
            .fold(0.0, f64::max);
        let m6 = r + norm_sq(&ds);
        let m8 = norm_sq(&sub(&dx, &ds));
        let key = -dot(&dx, &ds);
        let carlier = carlier_bound(a, g, &x, &xs).map_err(|e| e.to_string())?;
        let ok = m3 <= 1e-12
            && rel_close(m6, (1.0 + g.powi(-2)) * r, 1e-10)
            && rel_close(m8, (1.0 + 1.0 / g).powi(2) * r, 1e-10)
            && rel_close(key, carlier, 1e-10);
        ensure(ok, || {
            format!("{} gamma={g} x={x} x*={xs}: m3={m3} m6={m6} m8={m8} key={key} C={carlier}", a.name())
        })?;
    }
    Ok(())
}

fn criterion_4_closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let energy = subdifferential_operator(make_energy(2).unwrap());
    let rot = make_rotator();
    let basis = vec![vec![1.0, 2.0, -1.0], vec![0.5, 0.0, 3.0]];
    let proj = Projector::new(&basis);
    let sub_op =
        subdifferential_operator(make_subspace_indicator(&[v(&basis[0]), v(&basis[1])]).unwrap());
    for _ in 0..20 {
        let x = uniform(&mut rng, 2, -3.0, 3.0);
        let xs = uniform(&mut rng, 2, -3.0, 3.0);
        let d2 = norm_sq(&sub(x.coords(), xs.coords()));
        let s = gamma_sweep(&energy, &x, &xs, 1e-6, 1e6, 49).map_err(|e| e.to_string())?;
        for (g, c) in s.gammas.iter().zip(&s.values) {
            let want = g / (1.0 + g).powi(2) * d2;
            ensure(rel_close(*c, want, 1e-12), || format!("energy gamma={g}: {c} vs {want}"))?;
        }
        ensure(s.argmax_gamma == 1.0, || format!("energy argmax {}", s.argmax_gamma))?;

        let ax = [-x[1], x[0]];
        let r2 = norm_sq(&sub(&ax, xs.coords()));
        let s = gamma_sweep(&rot, &x, &xs, 1e-6, 1e6, 49).map_err(|e| e.to_string())?;
        for (g, c) in s.gammas.iter().zip(&s.values) {
            let want = g / (1.0 + g * g) * r2;
            ensure(rel_close(*c, want, 1e-12), || format!("rotator gamma={g}: {c} vs {want}"))?;
        }
        ensure(s.argmax_gamma == 1.0 && rel_close(s.max_value, 0.5 * r2, 1e-12), || {
            format!("rotator peak {} at {}", s.max_value, s.argmax_gamma)
        })?;

        let x3 = uniform(&mut rng, 3, -3.0, 3.0);
        let xs3 = uniform(&mut rng, 3, -3.0, 3.0);
        let (p, q) = (norm_sq(&proj.perp(x3.coords())), norm_sq(&proj.project(xs3.coords())));
        let s = gamma_sweep(&sub_op, &x3, &xs3, 1e-6, 1e6, 49).map_err(|e| e.to_string())?;
        for (g, c) in s.gammas.iter().zip(&s.values) {
            let want = p / g + g * q;
            ensure(rel_close(*c, want, 1e-12), || format!("subspace gamma={g}: {c} vs {want}"))?;
        }
    }
    Ok(())
}

fn criterion_5_boundary() -> Outcome {
    let burg = subdifferential_operator(make_burg());
    let shannon = subdifferential_operator(make_shannon());
    let zero = v(&[0.0]);
    for &g in &[1e-2, 1e-4, 1e-6, 1e-8] {
        for &y in &[-1.0, 0.0, 1.0] {
            let ys = v(&[y]);
            let c = carlier_bound(&burg, g, &zero, &ys).map_err(|e| e.to_string())?;
            let want = ((g.sqrt() * y + (g * y * y + 4.0).sqrt()) / 2.0).powi(2);
            ensure((c - want).abs() <= 1e-10, || format!("burg gamma={g} y={y}: {c} vs {want}"))?;
            if g == 1e-8 {
                ensure((c - 1.0).abs() <= 1e-3, || format!("burg gamma=1e-8 y={y}: {c}"))?;
            }

            let c = carlier_bound(&shannon, g, &zero, &ys).map_err(|e| e.to_string())?;
            let w = lambert_w_exp_bisect(y - g.ln());
            let want = g * w * w;
            ensure(c.is_finite() && rel_close(c, want, 1e-10), || {
                format!("shannon gamma={g} y={y}: {c} vs {want}")
            })?;
            if g <= 1e-6 {
                ensure(c < 1e-3, || format!("shannon gamma={g} y={y}: {c}"))?;
            }
        }
    }
    let report = boundary_limit_regressions().map_err(|e| e.to_string())?;
    ensure(report.all_pass(), || format!("{report:?}"))
}

fn criterion_6_asymptotics() -> Outcome {
    let burg = subdifferential_operator(make_burg());
    let energy = subdifferential_operator(make_energy(2).unwrap());
    let subspace = subdifferential_operator(make_subspace_indicator(&[v(&[1.0, 1.0])]).unwrap());
    let rot = make_rotator();
    use LimitClass::{ConvergesTo, Diverges};
    let zero = ConvergesTo(0.0);
    // (operator, x, x*, expected at 0⁺, expected at +∞)
    let points = vec![
        (&burg, v(&[-1.0]), v(&[-1.0]), Diverges, zero),
        (&burg, v(&[-1.0]), v(&[1.0]), Diverges, Diverges),
        (&burg, v(&[1.0]), v(&[-1.0]), zero, zero),
        (&burg, v(&[1.0]), v(&[1.0]), zero, Diverges),
        (&energy, v(&[1.0, 2.0]), v(&[-3.0, 0.5]), zero, zero),
        (&energy, v(&[0.0, 0.0]), v(&[4.0, 4.0]), zero, zero),
        (&subspace, v(&[2.0, 2.0]), v(&[1.0, -1.0]), zero, zero),
        (&subspace, v(&[2.0, 2.0]), v(&[1.0, 0.0]), zero, Diverges),
        (&subspace, v(&[1.0, 0.0]), v(&[1.0, -1.0]), Diverges, zero),
        (&subspace, v(&[1.0, 0.0]), v(&[0.0, 3.0]), Diverges, Diverges),
        (&rot, v(&[1.0, 0.0]), v(&[2.0, 0.0]), zero, zero),
        (&rot, v(&[-1.0, 3.0]), v(&[0.5, 0.5]), zero, zero),
    ];
    for (a, x, xs, at_zero, at_inf) in points {
        let z = classify_limit_zero(a, &x, &xs).map_err(|e| e.to_string())?;
        let i = classify_limit_infinity(a, &x, &xs).map_err(|e| e.to_string())?;
        let ok = z.predicted == at_zero
            && i.predicted == at_inf
            && z.agree == Some(true)
            && i.agree == Some(true);
        ensure(ok, || format!("{} x={x} x*={xs}: {z:?} {i:?}", a.name()))?;
    }
    Ok(())
}

fn criterion_7_series() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let energy = subdifferential_operator(make_energy(2).unwrap());
    for _ in 0..20 {
        let x = uniform(&mut rng, 2, -3.0, 3.0);
        let xs = uniform(&mut rng, 2, -3.0, 3.0);
        let d2 = norm_sq(&sub(x.coords(), xs.coords()));
        let s = series_bound(&energy, &x, &xs, &GammaSchedule::Constant(1.0), 30).map_err(|e| e.to_string())?;
        ensure((s.partial_sum - d2 / 3.0).abs() <= 1e-9 && s.partial_sum <= 0.5 * d2, || {
            format!("energy x={x} x*={xs}: {} vs {}", s.partial_sum, d2 / 3.0)
        })?;
        for &g in &GAMMAS {
            let one = series_bound(&energy, &x, &xs, &GammaSchedule::Constant(g), 1).map_err(|e| e.to_string())?;
            let c = carlier_bound(&energy, g, &x, &xs).map_err(|e| e.to_string())?;
            ensure(one.partial_sum == c, || format!("n=1 gamma={g}: {} vs {c}", one.partial_sum))?;
        }
    }

    let basis = vec![vec![1.0, 1.0, 0.0], vec![0.0, 1.0, -2.0]];
    let proj = Projector::new(&basis);
    let sub_op =
        subdifferential_operator(make_subspace_indicator(&[v(&basis[0]), v(&basis[1])]).unwrap());
    for _ in 0..20 {
        let x = uniform(&mut rng, 3, -3.0, 3.0);
        let xs = uniform(&mut rng, 3, -3.0, 3.0);
        let gammas: Vec<f64> = (0..15).map(|_| 10f64.powf(rng.gen_range(-2.0..2.0))).collect();
        let seq = generate_cyclic_sequence(&sub_op, &x, &xs, &GammaSchedule::explicit(gammas.clone()).unwrap(), 15)
            .map_err(|e| e.to_string())?;
        let (p, q) = (norm_sq(&proj.perp(x.coords())), norm_sq(&proj.project(xs.coords())));
        let mut inv_sum = 0.0;
        for (k, got) in seq.partial_sums.iter().enumerate() {
            inv_sum += 1.0 / gammas[k];
            let want = gammas[0] * q + inv_sum * p;
            ensure(rel_close(*got, want, 1e-12), || format!("subspace n={}: {got} vs {want}", k + 1))?;
        }
    }

    for i in 0..200 {
        let (f, gap_of): (ConvexFunction, fn(f64, f64) -> f64) = if i % 2 == 0 {
            (make_burg(), |x, y| if y < 0.0 { -x.ln() - 1.0 - (-y).ln() - x * y } else { f64::INFINITY })
        } else {
            (make_shannon(), |x, y| x * x.ln() - x + y.exp() - x * y)
        };
        let x = rng.gen_range(0.05..4.0);
        let y = rng.gen_range(-3.0..3.0);
        let g = GAMMAS[rng.gen_range(0..GAMMAS.len())];
        let gap = gap_of(x, y);
        let op = subdifferential_operator(f);
        let seq = generate_cyclic_sequence(&op, &v(&[x]), &v(&[y]), &GammaSchedule::Constant(g), 20)
            .map_err(|e| e.to_string())?;
        ensure(seq.partial_sums.iter().all(|&s| s <= gap + 1e-9), || {
            format!("{} x={x} y={y} gamma={g}: {:?} vs gap {gap}", op.name(), seq.partial_sums)
        })?;
    }
    Ok(())
}

fn criterion_8_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let dim = rng.gen_range(1..=4);
        let len = rng.gen_range(1..=8);
        let x = uniform(&mut rng, dim, -3.0, 3.0);
        let xs = uniform(&mut rng, dim, -3.0, 3.0);
        let pts: Vec<(Vector, Vector)> = (0..len)
            .map(|_| (uniform(&mut rng, dim, -3.0, 3.0), uniform(&mut rng, dim, -3.0, 3.0)))
            .collect();
        let (lib_lhs, rhs) = ncyclic_identity_check(&x, &xs, &pts).map_err(|e| e.to_string())?;
        // Left side straight from its definition.
        let mut terms = vec![
            dot(&sub(x.coords(), pts[len - 1].0.coords()), pts[len - 1].1.coords()),
            dot(&sub(pts[0].0.coords(), x.coords()), xs.coords()),
        ];
        for k in 0..len - 1 {
            terms.push(dot(&sub(pts[k + 1].0.coords(), pts[k].0.coords()), pts[k].1.coords()));
        }
        let lhs: f64 = terms.iter().sum();
        let scale: f64 = 1.0 + terms.iter().map(|t| t.abs()).sum::<f64>();
        ensure((lhs - rhs).abs() <= 1e-12 * scale && (lib_lhs - lhs).abs() <= 1e-12 * scale, || {
            format!("dim={dim} len={len}: lhs={lhs} lib={lib_lhs} rhs={rhs}")
        })?;
    }
    Ok(())
}

fn criterion_9_oracles() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let functions = [
        make_energy(2).unwrap(),
        make_subspace_indicator(&[v(&[0.0, 1.0])]).unwrap(),
        make_burg(),
        make_shannon(),
    ];
    for f in &functions {
        let grid = GridSpec::default_for_dim(f.dim());
        for _ in 0..50 {
            // Burg's conjugate maximizer 1/|y| must stay on the grid.
            let signs: Vec<f64> = (0..f.dim()).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
            let mag = uniform(&mut rng, f.dim(), 0.1, 3.0);
            let xs = v(&mag.coords().iter().zip(&signs).map(|(m, s)| m * s).collect::<Vec<_>>());
            let est = numeric_conjugate(f, &xs, &grid).map_err(|e| e.to_string())?;
            let closed = f.conjugate_eval(&xs);
            ensure(est.agrees_with(closed, 1e-4), || {
                format!("{} conjugate at {xs}: closed {closed}, oracle {est:?}", f.name())
            })?;

            let z = uniform(&mut rng, f.dim(), -3.0, 3.0);
            let g = 10f64.powf(rng.gen_range(-1.0..1.0));
            let p = f.prox(g, &z).map_err(|e| e.to_string())?;
            let q = numeric_prox(f, g, &z, &grid).map_err(|e| e.to_string())?;
            ensure(p.dist(&q) <= 1e-5, || format!("{} prox gamma={g} z={z}: {p} vs {q}", f.name()))?;
        }
    }
    within(start, Duration::from_secs(30))
}

fn criterion_10_pgm() -> Outcome {
    let f = make_energy(2).unwrap();
    let g = make_subspace_indicator(&[v(&[1.0, 1.0])]).unwrap();
    let trace = pgm_certificates(&f, &g, 0.5, 1.0, &v(&[3.0, -1.0]), 200).map_err(|e| e.to_string())?;
    let n = trace.iterates.len();
    ensure(n == 200, || format!("{n} iterates"))?;
    for k in 0..n {
        // Energy: D_f(x_ref, y) = ½‖x_ref - y‖².
        let d = 0.5 * norm_sq(&sub(trace.x_ref.coords(), trace.iterates[k].coords()));
        ensure((trace.bregman[k] - d).abs() <= 1e-12 * (1.0 + d), || {
            format!("d_{k}: {} vs {d}", trace.bregman[k])
        })?;
        ensure(trace.certificates[k] <= trace.bregman[k], || {
            format!("c_{k} = {} > d_{k} = {}", trace.certificates[k], trace.bregman[k])
        })?;
    }
    let tail = n - n / 10;
    for series in [&trace.certificates, &trace.bregman] {
        let t = &series[tail..];
        ensure(t.windows(2).all(|w| w[1] <= w[0]) && t.iter().all(|&c| c < 1e-8), || {
            format!("tail not monotone below 1e-8: {t:?}")
        })?;
    }
    ensure(trace.x_ref.norm() < 1e-12, || format!("x_ref = {}", trace.x_ref))
}

fn criterion_11_equality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tol = Tolerances::default();
    let u = [1.0, -3.0];
    let un = norm_sq(&u);
    let entries: Vec<(Operator, GraphSampler)> = vec![
        (
            subdifferential_operator(make_energy(2).unwrap()),
            Box::new(|r| {
                let x = vec![r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0)];
                (x.clone(), x)
            }),
        ),
        (
            subdifferential_operator(make_subspace_indicator(&[v(&u)]).unwrap()),
            Box::new(move |r| {
                let (s, t) = (r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0) / un.sqrt());
                (vec![s * u[0], s * u[1]], vec![-t * u[1], t * u[0]])
            }),
        ),
        (
            subdifferential_operator(make_burg()),
            Box::new(|r| {
                let x: f64 = r.gen_range(0.1..5.0);
                (vec![x], vec![-1.0 / x])
            }),
        ),
        (
            subdifferential_operator(make_shannon()),
            Box::new(|r| {
                let x: f64 = r.gen_range(0.1..5.0);
                (vec![x], vec![x.ln()])
            }),
        ),
        (
            make_rotator(),
            Box::new(|r| {
                let x = vec![r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0)];
                (x.clone(), vec![-x[1], x[0]])
            }),
        ),
    ];
    for (a, sample) in &entries {
        for _ in 0..100 {
            let (x, xs) = sample(&mut rng);
            let (x, xs) = (v(&x), v(&xs));
            let g = GAMMAS[rng.gen_range(0..GAMMAS.len())];
            let r = operator_report(a, g, &x, &xs, &tol).map_err(|e| e.to_string())?;
            let gap_ok = r.gap.is_none_or(|gap| gap.finite().is_some_and(|v| v.abs() <= 1e-9));
            ensure(gap_ok && r.carlier.abs() <= 1e-9 && r.gap_zero && r.gap_equals_carlier, || {
                format!("{} gamma={g} x={x} x*={xs}: {r:?}", a.name())
            })?;
        }
    }

    let energy = make_energy(2).unwrap();
    for _ in 0..100 {
        let x = uniform(&mut rng, 2, -3.0, 3.0);
        let xs = uniform(&mut rng, 2, -3.0, 3.0);
        let g = loop {
            let g = 10f64.powf(rng.gen_range(-2.0..2.0));
            if (g - 1.0).abs() > 1e-3 {
                break g;
            }
        };
        let r = bound_report(&energy, g, &x, &xs, &tol).map_err(|e| e.to_string())?;
        let gap = r.gap.and_then(ExtReal::finite).ok_or("energy gap not finite")?;
        ensure(gap > r.carlier && !r.gap_equals_carlier, || {
            format!("energy gamma={g} x={x} x*={xs}: gap {gap} carlier {}", r.carlier)
        })?;
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("chain inequality", criterion_1_chain),
        ("duality", criterion_2_duality),
        ("Minty identities", criterion_3_minty),
        ("closed-form regressions", criterion_4_closed_forms),
        ("boundary limits", criterion_5_boundary),
        ("asymptotic classification", criterion_6_asymptotics),
        ("series bound", criterion_7_series),
        ("cyclic identity", criterion_8_identity),
        ("oracle agreement", criterion_9_oracles),
        ("PGM certificates", criterion_10_pgm),
        ("equality characterizations", criterion_11_equality),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(()) => println!("[PASS] criterion {}: {name} ({took:.2?})", i + 1),
            Err(why) => {
                println!("[FAIL] criterion {}: {name} ({took:.2?}): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
