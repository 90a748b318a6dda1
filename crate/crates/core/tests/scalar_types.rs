use xxz_gatesmith::gate_catalog::{condition_params, make_gate, NamedGate};
use xxz_gatesmith::lattice::{effective_couplings, LatticeConfig, Statistics};
use xxz_gatesmith::protocol::{circuit_unitary, gate_fidelity};
use xxz_gatesmith::{Gate, Lattice, Params, ParamsF32, UnitaryF32};

#[test]
fn families_hold_in_single_precision() {
    for gate in [NamedGate::<f32>::Swap, NamedGate::ISwap, NamedGate::SqrtSwap, NamedGate::Entangler { omega_sum: 0.3 }]
    {
        let target: UnitaryF32 = make_gate(&gate);
        let params: ParamsF32 = condition_params(&gate, 0, 0, 1.0).unwrap();
        assert!((gate_fidelity(&target, &params) - 1.0).abs() < 1e-6, "{gate}");
    }
}

#[test]
fn precisions_agree() {
    let wide: Params = condition_params(&Gate::SqrtSwap, 1, -1, 0.8).unwrap();
    let narrow: ParamsF32 = condition_params(&NamedGate::SqrtSwap, 1, -1, 0.8).unwrap();
    let (a, b) = (circuit_unitary(&wide), circuit_unitary(&narrow));
    for i in 0..4 {
        for j in 0..4 {
            let (x, y) = (a.entry(i, j), b.entry(i, j));
            assert!((x.re - y.re as f64).abs() < 1e-5 && (x.im - y.im as f64).abs() < 1e-5);
        }
    }
}

#[test]
fn lattice_in_both_precisions() {
    let wide = Lattice {
        v_up: 10.0,
        v_down: 14.0,
        k_a_updown: 0.03,
        k_a_upup: 0.05,
        k_a_downdown: 0.04,
        statistics: Statistics::Bose,
        recoil_energy: 2.0e4,
        coherence_time: None,
        rabi_frequency: None,
        perturbative_ratio: 0.1,
        depth_bounds: [1.0, 50.0],
    };
    let narrow = LatticeConfig::<f32> {
        v_up: 10.0,
        v_down: 14.0,
        k_a_updown: 0.03,
        k_a_upup: 0.05,
        k_a_downdown: 0.04,
        statistics: Statistics::Bose,
        recoil_energy: 2.0e4,
        coherence_time: None,
        rabi_frequency: None,
        perturbative_ratio: 0.1,
        depth_bounds: [1.0, 50.0],
    };
    let (a, b) = (effective_couplings(&wide).unwrap(), effective_couplings(&narrow).unwrap());
    assert!(((a.j - b.j as f64) / a.j).abs() < 1e-5);
    assert!((a.gamma - b.gamma as f64).abs() < 1e-4);
    assert!(a.j < 0.0);
}
