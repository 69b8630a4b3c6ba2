use levelcorr_demo::{analytic, histogram, monte_carlo};

#[test]
fn histogram_tracks_semicircle() {
    let h = histogram("GOE", 100, 20, 3, 12).unwrap();
    assert_eq!(h.len(), 36);
    let area: f64 = h.chunks(3).map(|b| b[1] * 0.2).sum();
    assert!((area - 1.0).abs() < 1e-12, "{area}");
    for b in h.chunks(3).filter(|b| b[0].abs() < 0.6) {
        assert!((b[1] / b[2] - 1.0).abs() < 0.1, "{b:?}");
    }
    assert!(histogram("GSE", 10, 1, 0, 4).unwrap_err().contains("unknown symmetry class"));
}

#[test]
fn curves_have_the_documented_layout() {
    let a = analytic(1.0, 0.5, false, 2.0, 3, 1e-3).unwrap();
    assert_eq!(a.len(), 12);
    assert_eq!((a[0], a[8]), (0.0, 2.0));
    assert!(a[1] > 0.0 && a[1].is_finite());
    let m = monte_carlo(40, 8, 1, 1.0, 0.5, 2.0, 3).unwrap();
    assert_eq!(m.len(), 12);
    assert!(m.chunks(4).all(|p| p.iter().all(|x| x.is_finite()) && p[3] >= 0.0));
    assert!(analytic(0.0, 0.0, false, 1.0, 2, 1e-3).is_err());
}
