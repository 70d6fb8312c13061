use std::fs;
use std::path::PathBuf;

use jetarc::contact::{constructible_dimension, contact_locus, ContactSpec};
use jetarc::groebner::{Groebner, IdealPresentation};
use jetarc::jetcalc::jet_ideal;
use jetarc::mldjets::{lc_check, mld_jet_estimate, Ambient, PairFile, PairSpec, SearchBounds, WeightedIdeal};
use jetarc::mldres::{cusp_resolution, mld_from_divisors, node_resolution, MldValue, ResolutionData};
use jetarc::polycore::rational::{frac, int};
use jetarc::polycore::VariableUniverse;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../data");
    p.push(name);
    fs::read_to_string(p).unwrap()
}

fn plane() -> VariableUniverse {
    VariableUniverse::new(&["x", "y"]).unwrap()
}

// The cusp has log canonical threshold 5/6, so
// codim J_m(C) = (m+1) − ⌊(m+1)/6⌋ in J_m(A²).
#[test]
fn cusp_jet_dimensions_follow_the_threshold() {
    let engine = Groebner::default();
    let cusp = IdealPresentation::parse(&plane(), &["x^2 - y^3"]).unwrap();
    for m in 0..=6 {
        let (_, j) = jet_ideal(&cusp, m).unwrap();
        assert_eq!(engine.krull_dimension(&j).unwrap(), Some(m + 1 + (m + 1) / 6), "m = {m}");
    }
}

// J_m of {xy = 0}: arcs with ord x = a, ord y ≥ m+1−a give m+1 free coordinates.
#[test]
fn node_jet_dimensions() {
    let engine = Groebner::default();
    let node = IdealPresentation::parse(&plane(), &["x*y"]).unwrap();
    for m in 0..=4 {
        let (_, j) = jet_ideal(&node, m).unwrap();
        assert_eq!(engine.krull_dimension(&j).unwrap(), Some(m + 1));
    }
}

// Arcs through the origin of A² with ord ≥ p have codimension 2p.
#[test]
fn contact_loci_of_a_point() {
    let engine = Groebner::default();
    let u = plane();
    let pt = IdealPresentation::parse(&u, &["x", "y"]).unwrap();
    for p in 1..=3 {
        for m in p - 1..=p + 1 {
            let l = contact_locus(&ContactSpec::at_least(pt.clone(), p, m), None).unwrap();
            assert_eq!(constructible_dimension(&l, &engine).unwrap(), Some(2 * (m + 1) - 2 * p));
        }
        let l = contact_locus(&ContactSpec::exactly(pt.clone(), p, p), None).unwrap();
        assert_eq!(constructible_dimension(&l, &engine).unwrap(), Some(2 * (p + 1) - 2 * p));
    }
}

#[test]
fn resolution_files_match_the_builders() {
    let cusp = ResolutionData::from_json_str(&data("cusp_res.json")).unwrap();
    assert_eq!(cusp, cusp_resolution(frac(5, 6)));
    let node = ResolutionData::from_json_str(&data("node_res.json")).unwrap();
    assert_eq!(node, node_resolution(frac(1, 2)));
    let again = ResolutionData::from_json(&cusp.to_json()).unwrap();
    assert_eq!(again, cusp);
    for f in ["smooth_point_res.json", "quadric_cone_res.json", "quadric_cone_ambient_res.json"] {
        let d = ResolutionData::from_json_str(&data(f)).unwrap();
        assert_eq!(ResolutionData::from_json(&d.to_json()).unwrap(), d);
    }
}

#[test]
fn faces_are_closed_under_subsets() {
    let mut v: serde_json::Value = serde_json::from_str(&data("cusp_res.json")).unwrap();
    v["faces"] = serde_json::json!([["E1", "E3"]]);
    let d = ResolutionData::from_json(&v).unwrap();
    assert!(d.is_face(&[0]));
    assert!(d.is_face(&[2]));
    assert!(!d.is_face(&[0, 1]));
    v["faces"] = serde_json::json!([["E1", "nope"]]);
    assert!(ResolutionData::from_json(&v).is_err());
}

#[test]
fn jets_agree_with_resolutions_on_the_node() {
    let engine = Groebner::default();
    let u = plane();
    let origin = IdealPresentation::parse(&u, &["x", "y"]).unwrap();
    for (q, bound) in [(frac(1, 2), 5), (frac(3, 4), 5), (int(1), 5)] {
        let y = WeightedIdeal { ideal: IdealPresentation::parse(&u, &["x*y"]).unwrap(), q: q.clone() };
        let pair = PairSpec::new(Ambient::Smooth(u.clone()), vec![y], origin.clone()).unwrap();
        let est = mld_jet_estimate(&pair, &SearchBounds::new(vec![bound], bound, 0, 0), &engine).unwrap();
        assert_eq!(est.value, mld_from_divisors(&node_resolution(q)).unwrap());
    }
}

#[test]
fn pair_file_reproduces_the_cusp() {
    let engine = Groebner::default();
    let pf = PairFile::from_json_str(&data("cusp_pair.json")).unwrap();
    let est = mld_jet_estimate(&pf.pair, &pf.bounds, &engine).unwrap();
    assert_eq!(est.value, MldValue::Finite(int(0)));
    assert!(lc_check(&pf.pair, &pf.bounds, &engine).unwrap().log_canonical);
    let mut over = pf.pair.clone();
    over.y[0].q = frac(7, 6);
    assert!(!lc_check(&over, &pf.bounds, &engine).unwrap().log_canonical);
}

// ν + ν′ is one candidate at (w + w′, ℓ + ℓ′) when its support is a face,
// so the minimum there is at most the sum.
#[test]
fn contact_codim_is_subadditive_under_concatenation() {
    use jetarc::mldres::contact_codim_combinatorial;
    let mut checked = 0;
    for data in [cusp_resolution(int(1)), node_resolution(int(1))] {
        for w1 in 1..=7u64 {
            for w2 in 1..=7u64 {
                let (Some(a), Some(b)) = (
                    contact_codim_combinatorial(&data, &[w1], 0).unwrap(),
                    contact_codim_combinatorial(&data, &[w2], 0).unwrap(),
                ) else {
                    continue;
                };
                let support: Vec<usize> = (0..a.nu.len()).filter(|&j| a.nu[j] + b.nu[j] > 0).collect();
                if !data.is_face(&support) {
                    continue;
                }
                let c = contact_codim_combinatorial(&data, &[w1 + w2], 0).unwrap().unwrap();
                assert!(c.codim <= &a.codim + &b.codim, "w = {w1} + {w2}");
                checked += 1;
            }
        }
    }
    assert!(checked > 20);
}
