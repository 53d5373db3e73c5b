//! One pass/fail line per acceptance criterion. Exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use latticefusion::duality::{nso_relations, snapshot_after};
use latticefusion::gauging::{dd_fusion_check, eta_d_fusion_suite, full_gauge, partial_gauge, quadrant_lattice};
use latticefusion::model::{
    build_eta_defect, build_fracton_membrane, build_subsystem_symmetry, build_xm, defect_fusion_product, flipped_bonds,
    noninvertibility_witness, p_plus, DefectClass, MembraneExtent,
};
use latticefusion::pauli::{rank, same_group};
use latticefusion::simulator::wigner_and_anomaly_suite;
use latticefusion::{
    duality_unitary, verify_automorphism, Direction, GaugeRegion, Lattice, LatticeSpec, LineKind, PauliString, Report,
    StageId,
};

const TORI: [(usize, usize); 6] = [(3, 3), (4, 3), (4, 4), (5, 4), (8, 5), (12, 12)];
const AUTOMORPHISM_BUDGET: Duration = Duration::from_secs(5);
const WIGNER_BUDGET: Duration = Duration::from_secs(10);

type Outcome = Result<(bool, String), String>;

fn failures(r: &Report) -> String {
    r.failures().join("; ")
}

fn c1() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut total = 0;
    for (lx, ly) in TORI {
        let l = Lattice::torus(lx, ly).map_err(|e| e.to_string())?;
        let r = verify_automorphism(&l, &duality_unitary(&l).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        total += r.generators.len();
        if !r.passed() || r.generators.len() != 2 * lx * ly {
            bad.push(format!("{lx}x{ly}: {}", failures(&r)));
        }
    }
    let dt = t.elapsed();
    let ok = bad.is_empty() && dt < AUTOMORPHISM_BUDGET;
    Ok((ok, format!("{total} generators, {:.2} s (budget {:.0} s) {}", dt.as_secs_f64(), AUTOMORPHISM_BUDGET.as_secs_f64(), bad.join(" | "))))
}

fn c2() -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for lx in [3, 4, 6] {
        let l = Lattice::cylinder(lx, 9, 2).map_err(|e| e.to_string())?;
        let r = verify_automorphism(&l, &duality_unitary(&l).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        total += r.generators.len();
        if !r.passed() || r.generators.is_empty() {
            bad.push(format!("Lx={lx}: {}", failures(&r)));
        }
    }
    Ok((bad.is_empty(), format!("{total} bulk generators {}", bad.join(" | "))))
}

fn c3() -> Outcome {
    let l = Lattice::torus(4, 3).map_err(|e| e.to_string())?;
    let a = snapshot_after(&l, &[StageId::Us]).map_err(|e| e.to_string())?;
    let b = snapshot_after(&l, &[StageId::Us, StageId::Movement(1)]).map_err(|e| e.to_string())?;
    let da = a.diff(&common::post_us_4x3(&l), &l);
    let db = b.diff(&common::post_move1_4x3(&l), &l);
    let n = |d: &latticefusion::model::TermDiff| d.missing.len() + d.extra.len() + d.sign_mismatch.len();
    Ok((da.is_empty() && db.is_empty(), format!("post-Us diff {}, post-Move1 diff {}", n(&da), n(&db))))
}

fn c4() -> Outcome {
    let mut bad = Vec::new();
    let mut lines = 0;
    for (lx, ly) in TORI {
        let l = Lattice::torus(lx, ly).map_err(|e| e.to_string())?;
        let rows = (0..ly as i64).map(|j| (LineKind::Row, j, lx));
        let cols = (0..lx as i64).map(|i| (LineKind::Col, i, ly));
        for (kind, k, w) in rows.chain(cols) {
            lines += 1;
            let wit = noninvertibility_witness(&l, kind, k).map_err(|e| e.to_string())?;
            let eta = build_subsystem_symmetry(&l, kind, k).map_err(|e| e.to_string())?;
            if !wit.lhs.is_identity() || wit.naive_image != eta || eta.weight() != w {
                bad.push(format!("{lx}x{ly} {kind:?} {k}"));
            }
        }
    }
    Ok((bad.is_empty(), format!("{lines} lines {}", bad.join(", "))))
}

fn c5_c6(rep: &Report, dt: Duration) -> (Outcome, Outcome) {
    let find = |prefix: &str| rep.checks.iter().find(|c| c.name.starts_with(prefix)).cloned();
    let c5 = match (find("Wigner"), find("<psi|D^dagger D|psi>")) {
        (Some(w), Some(i)) => Ok((
            w.pass && i.pass && dt < WIGNER_BUDGET,
            format!(
                "{}; isometry {}; {:.2} s (budget {:.0} s)",
                w.detail.unwrap_or_default(),
                i.detail.unwrap_or_default(),
                dt.as_secs_f64(),
                WIGNER_BUDGET.as_secs_f64()
            ),
        )),
        _ => Err("suite did not report Wigner/isometry checks".into()),
    };
    let c6 = (|| {
        let d2 = find("D^2").ok_or("suite did not report D^2")?;
        let l = Lattice::torus(5, 4).map_err(|e| e.to_string())?;
        let alg = nso_relations(&l).map_err(|e| e.to_string())?;
        Ok((
            d2.pass && alg.passed(),
            format!("dense: {}; 5x4 algebraic: {}/{} {}", d2.detail.unwrap_or_default(), alg.summary.pass, alg.checks.len(), failures(&alg)),
        ))
    })();
    (c5, c6)
}

fn c7() -> Outcome {
    let mut bad = Vec::new();
    for (lx, ly) in TORI {
        let l = Lattice::torus(lx, ly).map_err(|e| e.to_string())?;
        let u = duality_unitary(&l).map_err(|e| e.to_string())?;
        let u2 = u.clone().then(&u);
        let pp = p_plus(&l);
        let imgs: Vec<PauliString> = pp.generators().iter().map(|g| u2.conjugate(g, Direction::UPUdag)).collect();
        if !same_group(&imgs, pp.generators()) {
            bad.push(format!("{lx}x{ly}"));
        }
    }
    Ok((bad.is_empty(), format!("{} tori {}", TORI.len(), bad.join(", "))))
}

fn c8() -> Outcome {
    let cases = [((4, 4), (2, 2)), ((5, 4), (3, 2)), ((6, 6), (4, 3))];
    let mut parts = Vec::new();
    let mut ok = true;
    for ((lx, ly), (sx, sy)) in cases {
        let p = partial_gauge(LatticeSpec::torus(lx, ly), GaugeRegion { qx: 0, qy: 0, sx, sy }).map_err(|e| e.to_string())?;
        let formula = lx * ly + sx + sy - 1;
        let counted = p.gauged.lattice.n_qubits() - rank(&p.gauged.gauss_generators());
        ok &= p.dim_log2 == formula && counted == formula;
        parts.push(format!("{lx}x{ly}/{sx}x{sy}: {} (formula {formula}, n-rank {counted})", p.dim_log2));
    }
    Ok((ok, parts.join(", ")))
}

fn c9() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [4, 5] {
        let f = full_gauge(n, n).map_err(|e| e.to_string())?;
        let want = build_xm(&f.dual_lattice, false).swap_couplings();
        let d = f.dual_h.diff(&want, &f.dual_lattice);
        let size = d.missing.len() + d.extra.len() + d.sign_mismatch.len();
        ok &= size == 0;
        parts.push(format!("{n}x{n} diff {size}"));
    }
    Ok((ok, parts.join(", ")))
}

fn c10() -> Outcome {
    let e = |x: latticefusion::Error| x.to_string();
    let mut parts = Vec::new();
    let mut ok = true;

    let w = Lattice::plane(7, 7).map_err(e)?;
    let f1 = build_fracton_membrane(&w, 2, 1, MembraneExtent::Quadrant).map_err(e)?;
    let f2 = build_fracton_membrane(&w, 2, 2, MembraneExtent::Quadrant).map_err(e)?;
    let ff = defect_fusion_product(&w, &f1, &f2).map_err(e)?;
    let line = build_eta_defect(&w, LineKind::Row, 2, 2).map_err(e)?.line_op;
    let a = ff.classification == DefectClass::EtaRow && Some(&ff.product) == line.as_ref();
    let same = defect_fusion_product(&w, &f2, &f2).map_err(e)?.classification == DefectClass::Identity;
    parts.push(format!("fxf=eta {a}, fxf=I {same}"));
    ok &= a && same;

    let t = Lattice::torus(5, 5).map_err(e)?;
    let m = build_fracton_membrane(&t, 1, 1, MembraneExtent::Rect(3, 3)).map_err(e)?;
    let torus_bonds = flipped_bonds(&t, &m).len();
    let window_bonds = flipped_bonds(&w, &f2);
    let mem = torus_bonds == 4 && window_bonds == vec![(2, 2)];
    parts.push(format!("membrane bonds torus {torus_bonds}, window {}", window_bonds.len()));
    ok &= mem;

    let q = quadrant_lattice(LatticeSpec::plane(7, 7), 3, 3).map_err(e)?;
    let ed = eta_d_fusion_suite(&q, 3, 3).map_err(e)?;
    parts.push(format!("eta-D: {}", ed.checks.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join("; ")));
    ok &= ed.passed();

    let c = Lattice::cylinder(4, 9, 2).map_err(e)?;
    let dd = dd_fusion_check(&c, 0).map_err(e)?;
    let twists = dd.checks.iter().filter(|c| c.name.starts_with("twist rows")).count();
    parts.push(format!("D-D {}/{} ({twists} single twists)", dd.summary.pass, dd.checks.len()));
    ok &= dd.passed() && twists >= 3;

    if !ok {
        parts.push(failures(&ed));
        parts.push(failures(&dd));
    }
    Ok((ok, parts.join(", ")))
}

fn main() {
    let mut all = true;
    let mut emit = |k: usize, o: Outcome| {
        let (pass, detail) = o.unwrap_or_else(|e| (false, format!("error: {e}")));
        all &= pass;
        println!("criterion {k:>2}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    };
    emit(1, c1());
    emit(2, c2());
    emit(3, c3());
    emit(4, c4());
    let t = Instant::now();
    let suite = Lattice::torus(3, 3).map_err(|e| e.to_string()).and_then(|l| wigner_and_anomaly_suite(&l, 100, 0).map_err(|e| e.to_string()));
    let dt = t.elapsed();
    match suite {
        Ok(rep) => {
            let (a, b) = c5_c6(&rep, dt);
            emit(5, a);
            emit(6, b);
        }
        Err(err) => {
            emit(5, Err(err.clone()));
            emit(6, Err(err));
        }
    }
    emit(7, c7());
    emit(8, c8());
    emit(9, c9());
    emit(10, c10());
    if !all {
        std::process::exit(1);
    }
}
