//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::process::Command;
use std::time::Instant;

use geolab::constants::{
    czi, czi_curve, example_bounds, james, nonsquare_diagnostic, orthogonality_gap,
    smoothness_slope, t_grid, z_curve, z_profile, zbaganu, CurveConstant, CurvePoint, CziMethod,
    JamesMethod, ZbaganuMethod,
};
use geolab::orthogonality::{iso_scaling_check, sample_unit_pair_isos};
use geolab::verify::{run_claims, Verdict};
use geolab::{default_catalog, OptConfig, SpaceSpec};

type Check = Result<String, String>;

struct Gate {
    cfg: OptConfig,
    catalog: Vec<SpaceSpec>,
    czi: HashMap<String, Vec<CurvePoint>>,
}

impl Gate {
    fn new() -> Self {
        Self {
            cfg: OptConfig::default(),
            catalog: default_catalog(),
            czi: HashMap::new(),
        }
    }

    fn space(&self, s: &str) -> SpaceSpec {
        s.parse().expect("valid spec")
    }

    /// 51-point direct curve, computed once per space.
    fn curve(&mut self, space: &SpaceSpec) -> Vec<CurvePoint> {
        let key = space.to_string();
        if !self.czi.contains_key(&key) {
            let ts = t_grid(CurveConstant::Czi, 51);
            let c = czi_curve(space, &ts, CziMethod::Direct, &self.cfg).expect("czi curve");
            self.czi.insert(key.clone(), c);
        }
        self.czi[&key].clone()
    }
}

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn square_curve(g: &mut Gate, spec: &str) -> Check {
    let space = g.space(spec);
    let dev = g
        .curve(&space)
        .iter()
        .map(|p| (p.value - (1.0 - p.t).powi(2)).abs())
        .fold(0.0, f64::max);
    ensure(dev <= 1e-6, format!("{spec}: max |czi - (1-t)^2| = {dev:.3e} (tol 1e-6)"))
}

fn c1(g: &mut Gate) -> Check {
    square_curve(g, "lp:dim=2,p=1")
}

fn c2(g: &mut Gate) -> Check {
    square_curve(g, "gridsup:n=4")
}

fn c3(g: &mut Gate) -> Check {
    let mut worst: f64 = 0.0;
    for s in &g.catalog {
        for k in 0..=5 {
            let t = k as f64 / 10.0;
            let d = czi(s, t, CziMethod::Direct, &g.cfg).map_err(|e| e.to_string())?.value;
            let z = z_profile(s, 1.0 - 2.0 * t, &g.cfg).map_err(|e| e.to_string())?.value;
            worst = worst.max((d - z / 2.0).abs());
        }
    }
    ensure(worst <= 1e-5, format!("9 spaces x 6 t: max |direct - Z(1-2t)/2| = {worst:.3e} (tol 1e-5)"))
}

fn c4(g: &mut Gate) -> Check {
    let mut worst = f64::NEG_INFINITY;
    for s in g.catalog.clone() {
        for p in g.curve(&s) {
            worst = worst.max(p.lower_bound - p.value).max(p.value - p.upper_bound);
        }
    }
    ensure(worst <= 1e-6, format!("worst bound excess over 9 curves = {worst:.3e} (slack 1e-6)"))
}

fn c5(g: &mut Gate) -> Check {
    let mut worst: f64 = 0.0;
    for s in &g.catalog {
        for m in [CziMethod::Direct, CziMethod::Identity] {
            let v = czi(s, 0.5, m, &g.cfg).map_err(|e| e.to_string())?.value;
            worst = worst.max((v - 0.25).abs());
        }
    }
    ensure(worst <= 1e-9, format!("max |czi(1/2) - 1/4| = {worst:.3e} (tol 1e-9)"))
}

/// Best ratio over orthogonal pairs of norms `(cos phi, sin phi)`.
fn hilbert_oracle(t: f64, points: usize) -> f64 {
    (0..points)
        .map(|i| {
            let phi = FRAC_PI_2 * i as f64 / (points - 1) as f64;
            let (a, b) = (phi.cos(), phi.sin());
            let u = (t * t * a * a + (1.0 - t) * (1.0 - t) * b * b).sqrt();
            let v = ((1.0 - t) * (1.0 - t) * a * a + t * t * b * b).sqrt();
            u * v / (a * a + b * b)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn c6(g: &mut Gate) -> Check {
    let space = g.space("euclidean:dim=2");
    let mut dev: f64 = 0.0;
    for p in g.curve(&space) {
        let oracle = hilbert_oracle(p.t, 1_000_000);
        let closed = (p.t * p.t + (1.0 - p.t) * (1.0 - p.t)) / 2.0;
        dev = dev.max((p.value - oracle).abs()).max((oracle - closed).abs());
    }
    let reports = run_claims(&[space], Some(&["P1".to_string()]), &g.cfg, false)
        .map_err(|e| e.to_string())?;
    let verdict = reports[0].verdict;
    ensure(
        dev <= 1e-4 && verdict == Verdict::MismatchDocumented,
        format!("max dev from 1e6-point oracle = {dev:.3e} (tol 1e-4); P1 verdict {verdict:?}"),
    )
}

fn floor_check(g: &mut Gate, specs: &[&str], lplq: bool) -> Check {
    let mut worst = f64::NEG_INFINITY;
    for spec in specs {
        let space = g.space(spec);
        for p in g.curve(&space) {
            let b = example_bounds(&space, p.t).map_err(|e| e.to_string())?;
            let floor = if lplq { b.lplq_bound } else { b.lp_bound };
            let floor = floor.ok_or_else(|| format!("no floor for {spec}"))?;
            worst = worst.max(floor - p.value);
        }
    }
    ensure(worst <= 1e-6, format!("{}: max floor - czi = {worst:.3e} (slack 1e-6)", specs.join(" ")))
}

fn c7(g: &mut Gate) -> Check {
    floor_check(g, &["lp:dim=2,p=1.5", "lp:dim=2,p=3"], false)
}

fn c8(g: &mut Gate) -> Check {
    floor_check(g, &["lplq:p=2,q=1", "lplq:p=3,q=1.5"], true)
}

fn c9(g: &mut Gate) -> Check {
    let mut worst: f64 = 0.0;
    let mut direct = HashMap::new();
    for s in &g.catalog {
        let d = zbaganu(s, ZbaganuMethod::Direct, &g.cfg).map_err(|e| e.to_string())?.value;
        let c = zbaganu(s, ZbaganuMethod::ProfileCorrected, &g.cfg).map_err(|e| e.to_string())?.value;
        worst = worst.max((d - c).abs());
        direct.insert(s.to_string(), d);
    }
    let l1 = direct["lp:dim=2,p=1"];
    let e = direct["euclidean:dim=2"];
    let ids = ["T2".to_string(), "EX5".to_string()];
    let reports = run_claims(&[g.space("lp:dim=2,p=1")], Some(&ids), &g.cfg, false)
        .map_err(|e| e.to_string())?;
    let documented = reports.len() == 2 && reports.iter().all(|r| r.verdict == Verdict::MismatchDocumented);
    ensure(
        worst <= 1e-4 && (l1 - 2.0).abs() <= 1e-4 && (e - 1.0).abs() <= 1e-4 && documented,
        format!(
            "max |direct - corrected| = {worst:.3e}; C_Z(l1) = {l1:.9}; C_Z(E2) = {e:.9}; T2/EX5 documented: {documented}"
        ),
    )
}

fn c10(g: &mut Gate) -> Check {
    let mut worst: f64 = 0.0;
    let mut values = HashMap::new();
    for s in g.catalog.iter().filter(|s| s.dim() == 2) {
        let m = james(s, JamesMethod::MinForm, &g.cfg).map_err(|e| e.to_string())?.value;
        let i = james(s, JamesMethod::IsoForm, &g.cfg).map_err(|e| e.to_string())?.value;
        worst = worst.max((m - i).abs());
        values.insert(s.to_string(), m);
    }
    let e = values["euclidean:dim=2"];
    let l1 = values["lp:dim=2,p=1"];
    let linf = values["lp:dim=2,p=inf"];
    ensure(
        worst <= 1e-5 && (e - SQRT_2).abs() <= 1e-4 && (l1 - 2.0).abs() <= 1e-4 && (linf - 2.0).abs() <= 1e-4,
        format!("planar max |minform - isoform| = {worst:.3e}; J(E2) = {e:.9}; J(l1) = {l1:.9}; J(linf) = {linf:.9}"),
    )
}

fn c11(g: &mut Gate) -> Check {
    let mut line = Vec::new();
    let mut ok = true;
    for (spec, want) in [
        ("lp:dim=2,p=1", true),
        ("gridsup:n=4", true),
        ("euclidean:dim=2", false),
        ("lp:dim=2,p=3", false),
    ] {
        let r = nonsquare_diagnostic(&g.space(spec), &g.cfg, 1e-3).map_err(|e| e.to_string())?;
        ok &= r.flag == want && r.consistent && (!want || r.james_value >= 1.999);
        line.push(format!("{spec} flag={} J={:.6}", r.flag, r.james_value));
    }
    ensure(ok, line.join("; "))
}

fn c12(g: &mut Gate) -> Check {
    let ts = [0.1, 0.05, 0.02, 0.01];
    let mut slopes = HashMap::new();
    for s in &g.catalog {
        let pts = smoothness_slope(s, &ts, &g.cfg).map_err(|e| format!("{s}: {e}"))?;
        slopes.insert(s.to_string(), pts[3].slope);
    }
    let e = slopes["euclidean:dim=2"];
    let l1 = slopes["lp:dim=2,p=1"];
    ensure(
        e <= 0.01 && l1 >= 0.9,
        format!("slope at t=0.01: E2 = {e:.6} (<= 0.01), l1 = {l1:.6} (>= 0.9); forms agree on 9 spaces"),
    )
}

fn c13(g: &mut Gate) -> Check {
    let zs = t_grid(CurveConstant::Z, 51);
    let mut rise = f64::NEG_INFINITY;
    let mut drop = f64::NEG_INFINITY;
    for s in g.catalog.clone() {
        for w in g.curve(&s).windows(2) {
            rise = rise.max(w[1].value - w[0].value);
        }
        let z = z_curve(&s, &zs, &g.cfg).map_err(|e| e.to_string())?;
        for w in z.windows(2) {
            drop = drop.max(w[0].value - w[1].value);
        }
    }
    ensure(
        rise <= 1e-6 && drop <= 1e-6,
        format!("max czi rise = {rise:.3e}, max Z drop = {drop:.3e} (slack 1e-6)"),
    )
}

fn c14(g: &mut Gate) -> Check {
    let e = orthogonality_gap(&g.space("euclidean:dim=2"), 1000, g.cfg.seed)
        .map_err(|e| e.to_string())?
        .value;
    let l1 = orthogonality_gap(&g.space("lp:dim=2,p=1"), 1000, g.cfg.seed)
        .map_err(|e| e.to_string())?
        .value;
    ensure(
        e <= 1e-8 && l1 >= 0.5,
        format!("gap over 1000 pairs: E2 = {e:.3e} (<= 1e-8), l1 = {l1:.6} (>= 0.5)"),
    )
}

fn c15(g: &mut Gate) -> Check {
    let alphas = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
    let mut checked = 0usize;
    let mut failures = 0usize;
    for (i, s) in g.catalog.iter().enumerate() {
        let pairs = sample_unit_pair_isos(s, 10_000, 100 + i as u64).map_err(|e| e.to_string())?;
        for pair in &pairs {
            for a in alphas {
                checked += 1;
                failures += usize::from(!iso_scaling_check(s, pair, a));
            }
        }
    }
    ensure(failures == 0, format!("{failures} failures in {checked} checks (slack 1e-9)"))
}

fn c16(_: &mut Gate) -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_geolab"))
            .args([
                "verify",
                "--space",
                "lp:dim=2,p=1",
                "--space",
                "euclidean:dim=2",
                "--ids",
                "T1,P1,EX1,L1,L3,T3,P5",
                "--out",
            ])
            .arg(&out)
            .env_remove("GEOLAB_SEED")
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("verify exited with {}", status.status));
        }
        std::fs::read(&out).map_err(|e| e.to_string())
    };
    let a = run("a.json")?;
    let b = run("b.json")?;
    ensure(a == b && !a.is_empty(), format!("two runs, {} bytes each, identical: {}", a.len(), a == b))
}

type Criterion = (&'static str, fn(&mut Gate) -> Check);

fn main() {
    let criteria: [Criterion; 16] = [
        ("l1 plane curve equals (1-t)^2", c1),
        ("sup-norm curve equals (1-t)^2", c2),
        ("direct equals half the Z profile", c3),
        ("t-t^2 <= czi <= (1-t)^2", c4),
        ("czi(1/2) = 1/4", c5),
        ("Hilbert curve and P1 report", c6),
        ("l_p floor", c7),
        ("l_p-l_q floor", c8),
        ("Zbaganu cross-check", c9),
        ("James agreement and values", c10),
        ("non-squareness diagnostic", c11),
        ("smoothness slopes", c12),
        ("monotonicity", c13),
        ("orthogonality gap", c14),
        ("isosceles inequalities", c15),
        ("determinism", c16),
    ];
    let mut g = Gate::new();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match check(&mut g) {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "[{tag}] {:>2}. {name}: {detail} [{:.1}s]",
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
