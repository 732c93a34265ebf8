import json
import math
from fractions import Fraction as Q

import pytest

from alcove_lab import formats
from alcove_lab.alcoves import fundamental_alcove
from alcove_lab.cli import main
from alcove_lab.exact_geometry import polytope_from_vertices, sub, vector
from alcove_lab.root_systems import standard_root_system
from alcove_lab.spectra import eigenfunction, trig_sum_from_sines
from alcove_lab.tessellation import is_strict_tessellation


# ---------------------------------------------------------------------------
# JSON round trips


def test_rational_roundtrip():
    for x in (Q(3, 4), Q(-7), Q(0), Q(22, 7)):
        assert formats.rational_from_json(formats.rational_to_json(x)) == x
    with pytest.raises(Exception):
        formats.rational_from_json(0.5)


def test_polytope_vertex_roundtrip():
    tri = polytope_from_vertices([[0, 0], [1, 0], [Q(1, 2), Q(1, 2)]])
    doc = formats.polytope_to_json(tri)
    back = formats.polytope_from_json(doc)
    assert back.vertices == tri.vertices
    assert back.halfspaces == tri.halfspaces


def test_polytope_halfspace_parsing():
    doc = {
        "dim": 2,
        "halfspaces": [
            {"normal": [1, 0], "offset": 1, "sense": "le"},
            {"normal": [1, 0], "offset": 0, "sense": "ge"},
            {"normal": [0, 1], "offset": "1/2", "sense": "le"},
            {"normal": [0, 1], "offset": 0, "sense": "ge"},
        ],
    }
    box = formats.polytope_from_json(doc)
    assert vector([1, Q(1, 2)]) in box.vertices


def test_root_system_roundtrip():
    b2 = standard_root_system("B2")
    back = formats.root_system_from_json(formats.root_system_to_json(b2))
    assert back.roots == b2.roots


def test_alcove_json_includes_walls():
    alc = fundamental_alcove(standard_root_system("B2"))
    doc = formats.alcove_to_json(alc)
    assert len(doc["walls"]) == 3
    assert [["0", 0], ["1", 1]] not in doc["walls"]  # walls carry vectors


def test_trig_sum_roundtrip():
    u = eigenfunction(standard_root_system("B2"), [Q(3, 2), Q(1, 2)])
    back = formats.trig_sum_from_json(formats.trig_sum_to_json(u))
    assert abs(back.freq_norm_sq - u.freq_norm_sq) < 1e-9
    for x in ([0.21, 0.13], [0.4, 0.1]):
        assert abs(back.evaluate(x) - u.evaluate(x)) < 1e-12


def test_verdict_json_carries_certificate():
    w1 = vector([Q(2, 3), Q(-1, 3), Q(-1, 3)])
    w2 = vector([Q(1, 3), Q(1, 3), Q(-2, 3)])
    hexv = [w1, w2, sub(w2, w1), tuple(-a for a in w1), tuple(-a for a in w2),
            sub(w1, w2)]
    verdict = is_strict_tessellation(
        polytope_from_vertices(hexv, allow_subspace=True)
    )
    doc = formats.verdict_to_json(verdict)
    assert doc["verdict"] == "not_strict"
    assert doc["certificate"]["kind"] == "plane_cut"


def test_spectrum_csv_header_and_exactness():
    from alcove_lab.spectra import spectrum

    entries = spectrum(standard_root_system("B2"), count=2)
    csv = formats.spectrum_to_csv(entries)
    lines = csv.strip().splitlines()
    assert lines[0] == "index,q_norm_sq,eigenvalue,multiplicity,weights"
    assert lines[1].startswith("1,5/2,")


# ---------------------------------------------------------------------------
# CLI


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cli_spectrum_csv_first_row_is_ten_pi_squared(capsys):
    code, out, _ = run_cli(
        capsys, "spectrum", "compute", "--family", "B2", "--count", "5",
        "--format", "csv",
    )
    assert code == 0
    first = out.strip().splitlines()[1].split(",")
    assert abs(float(first[2]) - 10 * math.pi**2) < 1e-9


def test_cli_goldbach_six(capsys):
    code, out, _ = run_cli(capsys, "crystal", "goldbach", "6")
    assert code == 0
    doc = json.loads(out)
    assert (doc["p"], doc["q"], doc["order"]) == (3, 5, 15)
    assert len(doc["matrix"]) == 6


def test_cli_psi_and_ord(capsys):
    code, out, _ = run_cli(capsys, "crystal", "psi", "12")
    assert code == 0 and json.loads(out)["psi"] == 4
    code, out, _ = run_cli(capsys, "crystal", "ord", "2")
    assert code == 0 and json.loads(out)["orders"] == [1, 2, 3, 4, 6]


def test_cli_hexagon_check_exits_two(tmp_path, capsys):
    w1 = vector([Q(2, 3), Q(-1, 3), Q(-1, 3)])
    w2 = vector([Q(1, 3), Q(1, 3), Q(-2, 3)])
    hexv = [w1, w2, sub(w2, w1), tuple(-a for a in w1), tuple(-a for a in w2),
            sub(w1, w2)]
    hexp = polytope_from_vertices(hexv, allow_subspace=True)
    path = tmp_path / "hexagon.json"
    path.write_text(formats.dumps(formats.polytope_to_json(hexp)))
    code, out, _ = run_cli(capsys, "tessellate", "check", str(path))
    assert code == 2
    doc = json.loads(out)
    assert doc["verdict"] == "not_strict"
    assert doc["certificate"]["kind"] == "plane_cut"


def test_cli_tessellate_strict_and_reconstruct_roundtrip(tmp_path, capsys):
    tri = polytope_from_vertices([[0, 0], [1, 0], [Q(1, 2), Q(1, 2)]])
    path = tmp_path / "tri.json"
    path.write_text(formats.dumps(formats.polytope_to_json(tri)))
    code, out, _ = run_cli(capsys, "tessellate", "check", str(path))
    assert code == 0 and json.loads(out)["verdict"] == "strict"
    code, out, _ = run_cli(capsys, "tessellate", "reconstruct", str(path))
    assert code == 0
    system = formats.root_system_from_json(json.loads(out))
    assert len(system.roots) == 8


def test_cli_alcove_build_roundtrip(capsys):
    code, out, _ = run_cli(capsys, "alcove", "build", "--family", "G2")
    assert code == 0
    poly = formats.polytope_from_json(json.loads(out))
    assert poly.dim == 2 and poly.ambient_dim == 3


def test_cli_alcove_locate_on_wall_is_error(capsys):
    code, _, err = run_cli(
        capsys, "alcove", "locate", "--family", "B2", "--point", "1/2,1/2"
    )
    assert code == 1 and "wall" in err


def test_cli_rootsys_validate_negative_verdict(tmp_path, capsys):
    bad = {"dim": 2, "roots": [[0, 0], [1, 0], [-1, 0]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out, _ = run_cli(capsys, "rootsys", "validate", str(path), "--subspace")
    assert code == 2
    doc = json.loads(out)
    assert doc["valid"] is False
    assert doc["axioms"][0]["passed"] is False


def test_cli_rootsys_standard_weyl_chambers(capsys):
    code, out, _ = run_cli(capsys, "rootsys", "standard", "--family", "A2")
    assert code == 0 and len(json.loads(out)["roots"]) == 6
    code, out, _ = run_cli(capsys, "rootsys", "weyl", "--family", "G2")
    assert code == 0 and json.loads(out)["order"] == 12
    code, out, _ = run_cli(capsys, "rootsys", "chambers", "--family", "B2")
    assert code == 0 and json.loads(out)["count"] == 8


def test_cli_fd_solve_and_seed_determinism(tmp_path, capsys):
    sq = {"dim": 2, "vertices": [[0, 0], [1, 0], [0, 1], [1, 1]]}
    path = tmp_path / "square.json"
    path.write_text(json.dumps(sq))
    args = ("fd", "solve", str(path), "--h", "1/32", "--count", "3",
            "--format", "csv", "--seed", "4")
    code, out1, _ = run_cli(capsys, *args)
    assert code == 0
    code, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    assert out1.splitlines()[0] == "index,eigenvalue,h,polygon"


def test_cli_fd_nodal_json_and_svg(capsys):
    code, out, _ = run_cli(
        capsys, "fd", "nodal", "--preset", "fig8", "--resolution", "64",
        "--region", "-4,-4,4,4",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["polylines"]
    code, svg, _ = run_cli(
        capsys, "fd", "nodal", "--preset", "fig8", "--resolution", "64",
        "--region", "-4,-4,4,4", "--format", "svg",
    )
    assert code == 0 and svg.startswith("<svg")


def test_cli_fd_residual_fig8(capsys):
    code, out, _ = run_cli(
        capsys, "fd", "residual", "--preset", "fig8", "--point", "1/3,5/4",
        "--h", "1/128",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["residual"] < 1e-3 and doc["lambda"] == 1.0


def test_cli_spectrum_verify_passes_and_is_deterministic(capsys):
    args = ("spectrum", "verify", "--family", "A2", "--samples", "200",
            "--seed", "11")
    code, out1, _ = run_cli(capsys, *args)
    assert code == 0
    doc = json.loads(out1)
    assert doc["boundary_max"] < 1e-9 and doc["sign_constant"] is True
    code, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


def test_cli_eigenfunction_json_reparses(capsys):
    code, out, _ = run_cli(
        capsys, "spectrum", "eigenfunction", "--family", "B2", "--q", "3/2,1/2"
    )
    assert code == 0
    u = formats.trig_sum_from_json(json.loads(out))
    assert len(u.terms) == 8


def test_cli_closure_svg_deterministic(tmp_path, capsys):
    tri = {"dim": 2, "vertices": [[0, 0], [1, 0], ["1/2", "1/2"]]}
    path = tmp_path / "tri.json"
    path.write_text(json.dumps(tri))
    args = ("tessellate", "closure", str(path), "--max-copies", "40",
            "--format", "svg")
    code, svg1, _ = run_cli(capsys, *args)
    code2, svg2, _ = run_cli(capsys, *args)
    assert code == code2 == 0 and svg1 == svg2 and "<polygon" in svg1


def test_cli_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["spectrum", "compute", "--no-such-flag"])
    assert info.value.code != 0


def test_cli_missing_file_is_error(capsys):
    code, _, err = run_cli(capsys, "tessellate", "check", "/nonexistent.json")
    assert code == 1 and err


def test_cli_out_writes_file(tmp_path, capsys):
    out_path = tmp_path / "ord.json"
    code, out, _ = run_cli(
        capsys, "crystal", "ord", "4", "--out", str(out_path)
    )
    assert code == 0 and out == ""
    assert json.loads(out_path.read_text())["n"] == 4


def test_cli_threads_env_validation(capsys, monkeypatch):
    monkeypatch.setenv("ALCOVE_LAB_THREADS", "2")
    code, out, _ = run_cli(capsys, "crystal", "psi", "9")
    assert code == 0
    monkeypatch.setenv("ALCOVE_LAB_THREADS", "zero")
    code, _, err = run_cli(capsys, "crystal", "psi", "9")
    assert code == 1 and "ALCOVE_LAB_THREADS" in err
