use super::*;

#[test]
fn trim_drops_trailing_false() {
    assert_eq!(trim(&[false, true, false, false]), &[false, true]);
    assert!(trim(&[false, false]).is_empty());
}

#[test]
fn filter_keeps_positions_past_mask() {
    assert_eq!(filter_by(&[true, false], &[1, 2, 3]), vec![2, 3]);
}

#[test]
fn masks_text_round_trip() {
    let mut cm = ConstMasks::default();
    cm.0.insert("A.foo".parse().unwrap(), vec![false, true, true]);
    cm.0.insert("A.bar".parse().unwrap(), vec![]);
    let mut im = IndMasks::default();
    im.0.insert(
        "A.sig".parse().unwrap(),
        MibMask {
            param_mask: vec![false, true],
            npars: 2,
            ctor_masks: vec![vec![false, true]],
        },
    );
    let text = write_masks(&im, &cm);
    assert_eq!(parse_masks(&text).unwrap(), (im, cm));
}
