import json

import pytest

from rectpas import fileio
from rectpas.cli import cli_dispatch
from rectpas.generators import (
    gen_figure_counterexample,
    gen_gknap_packed,
    gen_misr,
    gen_random,
)
from rectpas.geometry import (
    GknapInstance,
    Item,
    MisrInstance,
    normalize_instance,
    validate_packing,
)
from rectpas.misr import build_grid
from rectpas.oracles import mis_rectangles_exact
from rectpas.svg import render_svg
from tests.conftest import MISR_BUDGET


# ---------------------------------------------------------------------------
# File formats


def test_instance_roundtrip(tmp_path):
    f = gen_misr(n=6, seed=1)
    path = fileio.save(f, tmp_path / "i.json")
    loaded = fileio.load_instance(path)
    assert loaded == f
    assert loaded.hash == f.hash
    # canonical form is stable across a save/load cycle
    assert fileio.save(loaded, tmp_path / "i2.json").read_text() == path.read_text()


def test_solution_roundtrip(tmp_path):
    f = gen_misr(n=6, seed=1)
    sol = fileio.SolutionFile(
        "misr-solution", f.hash, (0, 2), None, {"algorithm": "misr-exact", "assertions": []}
    )
    path = fileio.save(sol, tmp_path / "s.json")
    loaded = fileio.load_solution(path)
    assert loaded == sol


def test_malformed_files_rejected(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(fileio.FileFormatError):
        fileio.load(p)
    p.write_text(json.dumps({"type": "misr", "rects": [[0, 0, 0, 1]]}))
    with pytest.raises(fileio.FileFormatError):
        fileio.load(p)
    p.write_text(json.dumps({"type": "mystery"}))
    with pytest.raises(fileio.FileFormatError):
        fileio.load(p)


def test_fractional_coordinates_not_serializable():
    from fractions import Fraction
    from rectpas.geometry import Packing, Placement

    sol = fileio.SolutionFile(
        "gknap-packing", "sha256:x", None, Packing(4, (Placement(0, Fraction(1, 2), 0),))
    )
    with pytest.raises(fileio.FileFormatError):
        sol.to_payload()


# ---------------------------------------------------------------------------
# Generators


def test_generator_determinism():
    a = gen_misr(n=10, seed=7)
    b = gen_misr(n=10, seed=7)
    assert fileio.canonical_json(a.to_payload()) == fileio.canonical_json(b.to_payload())
    c = gen_misr(n=10, seed=8)
    assert fileio.canonical_json(c.to_payload()) != fileio.canonical_json(a.to_payload())


def test_planted_optimum():
    for seed in range(5):
        f = gen_misr(n=12, seed=seed, planted=5)
        inst = normalize_instance(f.instance)
        opt = mis_rectangles_exact(inst, MISR_BUDGET)
        assert len(opt) >= 5


def test_packed_generator_reference_is_feasible():
    f, packing = gen_gknap_packed(k=9, seed=2, N=5000)
    assert validate_packing(packing, f.instance.items).ok
    assert packing.size == 9
    meta = f.metadata["reference_packing"]
    assert len(meta) == 9


def test_figure_counterexample_shape():
    f, packing = gen_figure_counterexample(6)
    inst = f.instance
    assert inst.n == 6
    flats = [it for it in inst.items if it.w == inst.N]
    talls = [it for it in inst.items if it.w < inst.N]
    assert len(flats) == 3 and len(talls) == 3
    assert all(it.h < inst.N // 10 for it in flats)
    assert all(it.h > inst.N // 2 for it in talls)
    assert validate_packing(packing, inst.items).ok
    assert packing.size == 6
    assert not inst.rotations


def test_gen_random_dispatch():
    assert gen_random("misr", n=4, seed=0).kind == "misr"
    assert gen_random("gknap", n=4, seed=0).kind == "gknap"
    assert gen_random("figure3", k=4).kind == "gknap"
    with pytest.raises(ValueError):
        gen_random("nope", n=1)


# ---------------------------------------------------------------------------
# SVG


def test_svg_empty_instance_frame_only():
    text = render_svg(MisrInstance(()))
    assert text.count("<rect") == 1
    assert 'class="frame"' in text
    assert text.startswith("<?xml")


def test_svg_single_rect_coordinates():
    inst = MisrInstance.from_coords([(0, 0, 1, 1)])
    text = render_svg(inst, selected=[0])
    assert text.count('class="placed"') == 1
    # world size 1 scales the unit rect to the full 600pt frame
    assert 'width="600.000"' in text


def test_svg_deterministic():
    f = gen_misr(n=5, seed=3)
    assert render_svg(f.instance) == render_svg(f.instance)


def test_svg_grid_lines():
    inst = normalize_instance(MisrInstance.from_coords([(0, 0, 1, 1), (2, 2, 3, 3)]))
    out = build_grid(inst, 3)
    text = render_svg(inst, grid=out.grid)
    assert text.count('class="grid"') == len(out.grid.interior_v) + len(out.grid.interior_h)


# ---------------------------------------------------------------------------
# CLI


def test_cli_gen_solve_verify_misr(tmp_path):
    i = tmp_path / "i.json"
    s = tmp_path / "s.json"
    assert cli_dispatch(["gen", "misr", "--n", "9", "--seed", "4", "--planted", "3", "--out", str(i)]) == 0
    assert cli_dispatch(["solve", "misr-exact", str(i), "--k", "3", "--out", str(s)]) == 0
    assert cli_dispatch(["verify", "solution", str(s), "--instance", str(i)]) == 0
    sol = fileio.load_solution(s)
    assert len(sol.selected) >= 3
    assert sol.provenance["algorithm"] == "misr-exact"


def test_cli_misr_pas_roundtrip(tmp_path):
    i = tmp_path / "i.json"
    s = tmp_path / "s.json"
    assert cli_dispatch(["gen", "misr", "--n", "8", "--seed", "11", "--planted", "4", "--out", str(i)]) == 0
    rc = cli_dispatch([
        "solve", "misr-pas", str(i), "--k", "2", "--eps", "0.5",
        "--cap-c", "4", "--cap-b", "4", "--out", str(s),
    ])
    assert rc == 0
    assert cli_dispatch(["verify", "solution", str(s), "--instance", str(i)]) == 0


def test_cli_2dkr_pas_exit_codes(tmp_path):
    g = tmp_path / "g.json"
    s = tmp_path / "s.json"
    inst = fileio.InstanceFile("gknap", GknapInstance(10, (Item(3, 2), Item(4, 4))))
    fileio.save(inst, g)
    assert cli_dispatch(["solve", "2dkr-pas", str(g), "--k", "4", "--out", str(s)]) == 2
    sol = fileio.load_solution(s)
    assert sol.provenance["assertions"] == ["OPT < 4"]
    assert cli_dispatch(["solve", "2dkr-pas", str(g), "--k", "2", "--out", str(s)]) == 0
    assert cli_dispatch(["verify", "packing", str(s), "--instance", str(g)]) == 0


def test_cli_verify_rejects_tampering(tmp_path):
    g = tmp_path / "g.json"
    s = tmp_path / "s.json"
    inst = fileio.InstanceFile("gknap", GknapInstance(10, (Item(3, 2), Item(4, 4))))
    fileio.save(inst, g)
    assert cli_dispatch(["solve", "2dkr-exact", str(g), "--k", "2", "--out", str(s)]) == 0
    payload = json.loads(s.read_text())
    payload["placements"][0][1] = 9
    s.write_text(json.dumps(payload))
    assert cli_dispatch(["verify", "packing", str(s), "--instance", str(g)]) == 3


def test_cli_verify_hash_mismatch(tmp_path):
    i1, i2, s = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "s.json"
    assert cli_dispatch(["gen", "misr", "--n", "5", "--seed", "0", "--out", str(i1)]) == 0
    assert cli_dispatch(["gen", "misr", "--n", "5", "--seed", "1", "--out", str(i2)]) == 0
    assert cli_dispatch(["solve", "misr-exact", str(i1), "--k", "1", "--out", str(s)]) == 0
    assert cli_dispatch(["verify", "solution", str(s), "--instance", str(i2)]) == 3


def test_cli_kernel_commands(tmp_path):
    i = tmp_path / "i.json"
    k = tmp_path / "k.json"
    assert cli_dispatch(["gen", "misr", "--n", "10", "--seed", "2", "--out", str(i)]) == 0
    assert cli_dispatch(["kernel", "misr", str(i), "--k", "3", "--eps", "0.5",
                         "--cap-c", "3", "--cap-b", "3", "--out", str(k)]) == 0
    payload = json.loads(k.read_text())
    assert payload["type"] == "kernel" and payload["indices"]
    g = tmp_path / "g.json"
    fileio.save(fileio.InstanceFile("gknap", GknapInstance(20, (Item(5, 3), Item(7, 2)))), g)
    assert cli_dispatch(["kernel", "2dkr", str(g), "--k", "2", "--eps", "0.5", "--out", str(k)]) == 0


def test_cli_reduce_verify_render(tmp_path):
    r = tmp_path / "r.json"
    rp = tmp_path / "rp.json"
    out = tmp_path / "r.svg"
    rc = cli_dispatch([
        "reduce", "mss-to-2dkr", "--xs", "1,2,3,4", "--t", "10", "--k", "4",
        "--ys", "1,2,3,4", "--out", str(r), "--packing-out", str(rp),
    ])
    assert rc == 0
    assert cli_dispatch(["verify", "reduction", str(r)]) == 0
    assert cli_dispatch(["verify", "packing", str(rp), "--instance", str(r)]) == 0
    assert cli_dispatch(["render", str(r), "--solution", str(rp), "--out", str(out)]) == 0
    assert out.read_text().count('class="placed"') == 41


def test_cli_usage_errors(tmp_path):
    assert cli_dispatch(["solve", "misr-pas", "nope.json"]) == 1  # missing --k
    assert cli_dispatch(["solve", "misr-exact", str(tmp_path / "missing.json"), "--k", "1"]) == 1
    assert cli_dispatch(["reduce", "mss-to-2dkr", "--xs", "1,1,2,3", "--t", "9", "--k", "4"]) == 1
    i = tmp_path / "i.json"
    cli_dispatch(["gen", "misr", "--n", "4", "--seed", "0", "--out", str(i)])
    assert cli_dispatch(["solve", "2dkr-pas", str(i), "--k", "2"]) == 1  # wrong kind


def test_cli_gen_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli_dispatch(["gen", "gknap", "--n", "6", "--seed", "3", "--out", str(a)])
    cli_dispatch(["gen", "gknap", "--n", "6", "--seed", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_cli_default_output_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("RECTPAS_OUT_DIR", str(tmp_path))
    monkeypatch.chdir(tmp_path)  # keep stray files out of the repo on failure
    assert cli_dispatch(["gen", "misr", "--n", "4", "--seed", "0", "--out", "inst.json"]) == 0
    assert (tmp_path / "inst.json").exists()
    nested = tmp_path / "sub"
    nested.mkdir()
    assert cli_dispatch(["gen", "misr", "--n", "4", "--seed", "0", "--out", str(nested / "i.json")]) == 0
    assert (nested / "i.json").exists()  # explicit paths are left alone


def test_cli_verify_accepts_every_solver_output(tmp_path):
    """Self-consistency across the command matrix: verify accepts whatever
    solve and reduce emit, for every algorithm and both exit-0 and exit-2
    outcomes."""
    mi = tmp_path / "m.json"
    gi = tmp_path / "g.json"
    assert cli_dispatch(["gen", "misr", "--n", "10", "--seed", "6", "--planted", "4", "--out", str(mi)]) == 0
    assert cli_dispatch(["gen", "gknap", "--n", "8", "--seed", "6", "--N", "30", "--out", str(gi)]) == 0
    runs = [
        (["solve", "misr-exact", str(mi), "--k", "2"], mi, "solution"),
        (["solve", "misr-exact", str(mi), "--k", "11"], mi, "solution"),
        (["solve", "misr-pas", str(mi), "--k", "2", "--cap-c", "4", "--cap-b", "4"], mi, "solution"),
        (["solve", "misr-pas", str(mi), "--k", "11", "--cap-c", "4", "--cap-b", "4"], mi, "solution"),
        (["solve", "2dkr-exact", str(gi), "--k", "2"], gi, "packing"),
        (["solve", "2dkr-pas", str(gi), "--k", "2"], gi, "packing"),
        (["solve", "2dkr-pas", str(gi), "--k", "9"], gi, "packing"),
    ]
    for idx, (argv, inst, what) in enumerate(runs):
        out = tmp_path / f"out{idx}.json"
        rc = cli_dispatch(argv + ["--out", str(out)])
        assert rc in (0, 2), argv
        assert cli_dispatch(["verify", what, str(out), "--instance", str(inst)]) == 0, argv
    r = tmp_path / "red.json"
    rp = tmp_path / "redp.json"
    assert cli_dispatch([
        "reduce", "mss-to-2dkr", "--xs", "2,3,5,7", "--t", "12", "--k", "4",
        "--ys", "2,2,3,5", "--out", str(r), "--packing-out", str(rp),
    ]) == 0
    assert cli_dispatch(["verify", "reduction", str(r)]) == 0
    assert cli_dispatch(["verify", "packing", str(rp), "--instance", str(r)]) == 0
