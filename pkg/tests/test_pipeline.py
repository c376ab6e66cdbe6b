import pytest

from entrolp import run_pipeline


def test_regenerating_12rv_end_to_end(rg12_text):
    # the node-content-eliminated formulation: 4096 subsets, same optimum
    result = run_pipeline(rg12_text)
    assert result.exit_code == 0
    out = result.output
    assert "Symmetries have been successfully checked." in out
    assert "Total number of elements before reduction: 4096" in out
    assert "Total number of elements after reduction: 136" in out
    assert "Optimal value for A + B = 0.625000." in out
    assert result.structured["optimal_value"] == pytest.approx(0.625, abs=1e-6)
    # PDC is in the file's options, so the serialization echo is present
    assert "classic version-0.1 format is not supported" in out


def test_regenerating_12rv_prove(rg12_text):
    # this formulation's row space yields a half-integral relaxation; the
    # values are frozen from an independent LP/MIP oracle
    result = run_pipeline(rg12_text, mode="prove")
    assert result.exit_code == 0
    proofs = result.structured["proofs"]
    assert len(proofs) == 1
    assert proofs[0]["target"] == "4A + 6B >= 3"
    assert proofs[0]["provable"]
    assert proofs[0]["lp_dual_value"] == pytest.approx(49.5, abs=1e-6)
    assert proofs[0]["mip_dual_value"] == pytest.approx(50.0)


def test_regenerating_12rv_sensitivity(rg12_text):
    result = run_pipeline(rg12_text, mode="sensitivity")
    assert result.exit_code == 0
    ranges = {name: (lo, hi) for name, lo, hi in result.structured["ranges"]}
    assert ranges["A"][0] == pytest.approx(0.375, abs=1e-5)
    assert ranges["A"][1] == pytest.approx(0.375, abs=1e-5)
    assert ranges["B"][0] == pytest.approx(0.25, abs=1e-5)


def test_regenerating_12rv_hull_matches_16rv(rg12_text, rg16_pd, rg16_instance):
    from entrolp import run_hull

    result = run_pipeline(rg12_text, mode="hull")
    pts12 = result.structured["points"]
    res16 = run_hull(rg16_pd, rg16_instance)
    pts16 = [[p.x, p.y] for p in res16.points]
    # both formulations describe the same tradeoff region
    for corner in ([1 / 3, 1 / 3], [0.375, 0.25], [0.5, 1 / 6]):
        assert any(abs(a - corner[0]) < 1e-5 and abs(b - corner[1]) < 1e-5
                   for a, b in pts12)
        assert any(abs(a - corner[0]) < 1e-5 and abs(b - corner[1]) < 1e-5
                   for a, b in pts16)
