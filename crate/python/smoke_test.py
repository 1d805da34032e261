"""Smoke test for the Python extension.

Build and install it first, e.g. ``maturin develop -m crates/py/Cargo.toml``,
then run ``python python/smoke_test.py``.
"""

import pipeline_adc as adc


def main():
    ideal = adc.AdcConfig.ideal()
    assert ideal.ota_count() == 4
    assert list(adc.convert([0.0, 0.6, -0.6], ideal)) == [128, 255, 0]

    samples, fin = adc.gen_tone(8192, ideal.fs, 10.417e6, ideal.vref)
    m = adc.spectrum(adc.convert(samples, ideal))
    assert abs(m.enob_bits - 8.0) < 0.05, m.enob_bits
    print(f"ideal tone at {fin / 1e6:.4f} MHz: SNDR {m.sndr_db:.2f} dB, ENOB {m.enob_bits:.3f}")

    ref = adc.AdcConfig.paper_point()
    m = adc.spectrum(adc.convert(samples, ref))
    ramp = adc.gen_ramp(32768, -ref.vref, ref.vref)
    s = adc.inl_dnl(adc.convert(ramp, ref))
    print(
        f"reference point: SNDR {m.sndr_db:.2f} dB, SFDR {m.sfdr_db:.2f} dB, "
        f"INL {abs(s.max_inl):.3f} LSB, DNL {abs(s.max_dnl):.3f} LSB"
    )
    assert abs(m.sndr_db - 45.9) <= 1.0
    assert abs(abs(s.max_inl) - 0.35) <= 0.1

    rows = adc.setup_test(ref)
    assert rows[1][0] == "SHA" and abs(rows[1][2] - 599.7) < 1e-6

    cfg = adc.AdcConfig.ideal()
    cfg.set_stage(1, gain_error=0.005)
    assert cfg.stage(1)[0] == 0.005
    cfg.ota_sharing = False
    p = adc.power_model(cfg)
    assert p.ota_count == 7 and p.total_mw > 38.9
    print(f"power without sharing: {p.total_mw:.2f} mW, FOM {p.fom_pj_per_step:.3f} pJ/step")

    assert adc.sd_first_order(128) > adc.sd_first_order(64)
    mean, worst = adc.flash_montecarlo(ladder_sigma=0.01, n_trials=200)
    assert 0 < mean <= worst
    assert adc.compare_architectures().startswith("architecture,")

    try:
        adc.spectrum([128] * 2048)
    except ValueError:
        pass
    else:
        raise AssertionError("constant record must be rejected")
    print("ok")


if __name__ == "__main__":
    main()
