"""End-to-end command-line tests: exit codes, report content, determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from rlk.algebra_core import Algebra, RightPowerPMap, ZeroPMap
from rlk.algfile import format_algebra, parse_algebra
from rlk.cli import main
from rlk.dialgebra import dialgebra_from_operator, dleib as dleib_build
from rlk.free_structures import free_zinbiel, ud_p

from helpers import (abelian, diagonal_assoc, l2, l2_dialgebra,
                     truncated_poly, upper_triangular2)


def write(tmp_path, name, alg) -> str:
    path = tmp_path / name
    path.write_text(format_algebra(alg), encoding="utf-8")
    return str(path)


def broken_bracket(p=2):
    c = np.zeros((1, 1, 1), dtype=np.int64)
    c[0, 0, 0] = 1
    return Algebra(p, 1, {"bracket": c}, label="broken")


def endo_file(tmp_path, base, image_rows, name) -> str:
    endo = np.zeros((base.dim, base.dim, base.dim), dtype=np.int64)
    for i, row in enumerate(image_rows):
        for k, v in enumerate(row):
            endo[i, 0, k] = v
    alg = Algebra(base.p, base.dim,
                  {"assoc": base.structure("assoc"), "endo": endo},
                  label=base.label + "+endo")
    return write(tmp_path, name, alg)


# ---------------------------------------------------------------- check


def test_check_pass_exit0(tmp_path, capsys):
    path = write(tmp_path, "l2.alg", l2(2))
    assert main(["check", path, "leibniz", "restricted-leibniz"]) == 0
    out = capsys.readouterr().out
    assert "leibniz: pass" in out
    assert "restricted_leibniz: pass" in out
    assert out.rstrip().endswith("result: pass")


def test_check_fail_exit1_with_witness(tmp_path, capsys):
    path = write(tmp_path, "broken.alg", broken_bracket())
    assert main(["check", path, "leibniz"]) == 1
    out = capsys.readouterr().out
    assert "leibniz: fail" in out
    assert "witness inputs=[0, 0, 0]" in out
    assert "result: fail" in out


def test_unknown_identity_exit2(tmp_path, capsys):
    path = write(tmp_path, "l2.alg", l2(2))
    assert main(["check", path, "nosuch"]) == 2
    err = capsys.readouterr().err
    assert "unknown identities: nosuch" in err
    assert "available:" in err


def test_malformed_file_exit2(tmp_path, capsys):
    path = tmp_path / "bad.alg"
    path.write_text("p=2 dim=1\nop :\n", encoding="utf-8")
    assert main(["check", str(path), "leibniz"]) == 2
    assert "empty op name" in capsys.readouterr().err


def test_missing_file_exit2(tmp_path, capsys):
    assert main(["check", str(tmp_path / "none.alg"), "leibniz"]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_check_dialgebra_identities(tmp_path, capsys):
    path = write(tmp_path, "dias.alg", l2_dialgebra(2))
    assert main(["check", path, "dias", "lemdias"]) == 0
    out = capsys.readouterr().out
    assert "dias: pass" in out and "lemdias: pass" in out


def test_check_assoc_commutative_diagram(tmp_path):
    path = write(tmp_path, "poly.alg", truncated_poly(2, 3))
    assert main(["check", path, "commutative-diagram"]) == 0


def test_check_zinbiel_and_prelie(tmp_path):
    zin = write(tmp_path, "zin.alg", free_zinbiel(2, 2, 3).to_algebra())
    assert main(["check", zin, "zinbiel"]) == 0
    prod = write(tmp_path, "tp.alg", _tensor_product_algebra(2))
    assert main(["check", prod, "prelie", "restricted-prelie",
                 "--pmap", "zero"]) == 0


def _tensor_product_algebra(p):
    from rlk.prelie_tensor import tensor_prelie

    T = tensor_prelie(l2(p), free_zinbiel(1, 2, p).to_algebra())
    return Algebra(p, T.product.dim,
                   {"prelie": T.product.structure("prelie"),
                    "lie": T.product.structure("lie")},
                   {"zero": ZeroPMap()}, label=T.product.label)


def test_check_restricted_lie_zero_pmap(tmp_path):
    # abelian bracket: the literal zero map is restricted -> pass
    ab = write(tmp_path, "ab.alg", abelian(2, 2, with_pmap=True))
    assert main(["check", ab, "restricted-lie"]) == 0
    # non-abelian bracket in char 2: literal zero breaks Jacobson
    # additivity -> honest fail
    prod = write(tmp_path, "tp.alg", _tensor_product_algebra(2))
    assert main(["check", prod, "restricted-lie", "--samples", "20"]) == 1


def test_check_mode_flag_controls_coverage(tmp_path, capsys):
    path = write(tmp_path, "l2.alg", l2(2))
    main(["check", path, "restricted-leibniz", "--format", "json",
          "--mode", "exhaustive"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["checks"][0]["coverage"] == {"kind": "exhaustive", "count": 4}
    main(["check", path, "restricted-leibniz", "--format", "json",
          "--mode", "sample", "--samples", "17", "--seed", "5"])
    doc = json.loads(capsys.readouterr().out)
    cov = doc["checks"][0]["coverage"]
    assert cov["kind"] == "sampled" and cov["count"] == 17 and cov["seed"] == 5


def test_rlk_cap_env_and_cap_flag(tmp_path, capsys, monkeypatch):
    # rightpower pmap: the file parses under any cap (a table pmap would
    # itself need the enumeration budget)
    path = write(tmp_path, "d.alg", dleib_build(l2_dialgebra(2)))
    monkeypatch.setenv("RLK_CAP", "1")
    main(["check", path, "restricted-leibniz", "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["checks"][0]["coverage"]["kind"] == "sampled"
    main(["check", path, "restricted-leibniz", "--format", "json",
          "--cap", "100"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["checks"][0]["coverage"]["kind"] == "exhaustive"


def test_pmap_resolution(tmp_path, capsys):
    amb = l2(2).extended(pmaps={"alt": ZeroPMap()})  # frobenius + alt
    path = write(tmp_path, "amb.alg", amb)
    assert main(["check", path, "restricted-leibniz"]) == 0  # prefers frobenius
    two = Algebra(2, 1, {"bracket": np.zeros((1, 1, 1), dtype=np.int64)},
                  {"a": ZeroPMap(), "b": ZeroPMap()})
    path2 = write(tmp_path, "two.alg", two)
    assert main(["check", path2, "restricted-leibniz"]) == 2
    assert "cannot pick a p-map" in capsys.readouterr().err
    assert main(["check", path2, "restricted-leibniz", "--pmap", "b"]) == 0
    assert main(["check", path2, "restricted-leibniz", "--pmap", "zzz"]) == 2
    assert "not declared" in capsys.readouterr().err


# ---------------------------------------------------------------- derive


def test_derive_dleib_from_assoc(tmp_path, capsys):
    src = write(tmp_path, "poly.alg", truncated_poly(2, 3))
    out = tmp_path / "derived.alg"
    assert main(["derive", "dleib", src, "--out", str(out)]) == 0
    report = capsys.readouterr().out
    assert "leibniz: pass" in report and "restricted_leibniz: pass" in report
    derived = parse_algebra(out.read_text(encoding="utf-8"))
    assert derived.op_names == ("bracket", "left", "right")
    assert not derived.structure("bracket").any()  # commutative -> abelian
    assert derived.pmaps["frobenius"] == RightPowerPMap("right", None)


def test_derive_dleib_from_left_right(tmp_path):
    D = l2_dialgebra(3)
    src = write(tmp_path, "d.alg", D)
    out = tmp_path / "derived.alg"
    assert main(["derive", "dleib", src, "--out", str(out)]) == 0
    derived = parse_algebra(out.read_text(encoding="utf-8"))
    expect = dleib_build(D)
    assert np.array_equal(derived.structure("bracket"),
                          expect.structure("bracket"))


def test_derive_dleib_from_operator_file(tmp_path):
    # file with assoc + endo: dleib routes through a -| b = a(Db), |- = (Da)b
    base = upper_triangular2(3)
    endo = np.diag([1, 0, 1]).astype(np.int64)
    src = endo_file(tmp_path, base, endo.T, "endo.alg")
    out = tmp_path / "derived.alg"
    assert main(["derive", "dleib", src, "--out", str(out)]) == 0
    derived = parse_algebra(out.read_text(encoding="utf-8"))
    expect = dleib_build(dialgebra_from_operator(base, endo))
    assert np.array_equal(derived.structure("bracket"),
                          expect.structure("bracket"))
    assert derived.structure("bracket").any()  # genuinely non-abelian


def test_derive_dleib_rejects_non_dialgebra(tmp_path, capsys):
    bad = Algebra(2, 1, {"left": np.zeros((1, 1, 1), dtype=np.int64)})
    path = write(tmp_path, "bad.alg", bad)
    assert main(["derive", "dleib", path]) == 2
    assert "'left' and 'right'" in capsys.readouterr().err


def test_derive_gln(tmp_path, capsys):
    src = write(tmp_path, "poly.alg", truncated_poly(2, 2))
    out = tmp_path / "gl.alg"
    assert main(["derive", "gln", src, "--n", "2", "--out", str(out)]) == 0
    assert "dias: pass" in capsys.readouterr().out
    derived = parse_algebra(out.read_text(encoding="utf-8"))
    assert derived.dim == 2 * 2 * 2  # n^2 * dim


def test_derive_operator_dialgebra(tmp_path, capsys):
    base = diagonal_assoc(2, 2)
    src = endo_file(tmp_path, base, [(1, 0), (0, 0)], "proj.alg")
    out = tmp_path / "opd.alg"
    assert main(["derive", "operator-dialgebra", src, "--out", str(out)]) == 0
    derived = parse_algebra(out.read_text(encoding="utf-8"))
    # a -| b = a (Db): e0 -| e0 = e0, anything with e1 on the D side dies
    c = derived.structure("left")
    assert c[0, 0, 0] == 1 and c.sum() == 1


def test_derive_operator_precondition_exit2(tmp_path, capsys):
    base = truncated_poly(2, 2)
    src = endo_file(tmp_path, base, [(0, 0), (0, 1)], "deriv.alg")  # t d/dt
    assert main(["derive", "operator-dialgebra", src]) == 2
    assert "operator condition" in capsys.readouterr().err


def test_derive_operator_requires_endo_block(tmp_path, capsys):
    src = write(tmp_path, "poly.alg", truncated_poly(2, 2))
    assert main(["derive", "operator-dialgebra", src]) == 2
    assert "'assoc' and 'endo'" in capsys.readouterr().err


def test_derive_tensor_prelie(tmp_path, capsys):
    g = write(tmp_path, "g.alg", l2(2))
    zin = write(tmp_path, "z.alg", free_zinbiel(1, 3, 2).to_algebra())
    out = tmp_path / "tp.alg"
    assert main(["derive", "tensor-prelie", g, zin, "--out", str(out),
                 "--samples", "40"]) == 0
    report = capsys.readouterr().out
    for name in ("prelie: pass", "tensor_restricted: pass", "corollary: pass"):
        assert name in report
    derived = parse_algebra(out.read_text(encoding="utf-8"))
    assert derived.dim == 6
    assert derived.op_names == ("lie", "prelie")
    assert list(derived.pmaps) == ["lie_p"]
    pm = derived.pmaps["lie_p"]
    assert pm.variant == "basisjacobson"
    assert all(not any(row) for row in pm.values)
    # the emitted file is self-contained: its unique p-map is the Jacobson
    # extension of the zero basis values, so the derived bracket re-checks
    # as restricted Lie with no extra flags
    assert main(["check", str(out), "restricted-lie"]) == 0
    capsys.readouterr()


def test_derive_tensor_prelie_arity_checks(tmp_path, capsys):
    g = write(tmp_path, "g.alg", l2(2))
    assert main(["derive", "tensor-prelie", g]) == 2
    assert "needs two files" in capsys.readouterr().err
    assert main(["derive", "dleib", g, g]) == 2
    assert "exactly one file" in capsys.readouterr().err


def test_derive_antisymmetrize(tmp_path, capsys):
    prod = write(tmp_path, "tp.alg", _tensor_product_algebra(3))
    out = tmp_path / "lie.alg"
    assert main(["derive", "antisymmetrize", prod, "--out", str(out)]) == 0
    assert "lie_axioms: pass" in capsys.readouterr().out
    derived = parse_algebra(out.read_text(encoding="utf-8"))
    c = derived.structure("prelie")
    expect = (c - c.transpose(1, 0, 2)) % 3
    assert np.array_equal(derived.structure("lie"), expect)


def test_derive_antisymmetrize_rejects_non_prelie(tmp_path, capsys):
    zin = free_zinbiel(2, 3, 3).to_algebra()
    renamed = Algebra(zin.p, zin.dim, {"prelie": zin.structure("zinbiel")})
    path = write(tmp_path, "z.alg", renamed)
    assert main(["derive", "antisymmetrize", path]) == 2
    assert "not pre-Lie" in capsys.readouterr().err


def test_derive_stdout_algebra_report_on_stderr(tmp_path, capsys):
    src = write(tmp_path, "poly.alg", truncated_poly(2, 2))
    assert main(["derive", "dleib", src]) == 0
    captured = capsys.readouterr()
    derived = parse_algebra(captured.out)  # stdout is exactly the file
    assert derived.op_names == ("bracket", "left", "right")
    assert "result: pass" in captured.err


# ---------------------------------------------------------------- envelope


def test_envelope_requires_degree_at_least_p(tmp_path, capsys):
    path = write(tmp_path, "l2.alg", l2(3))
    assert main(["envelope", path, "ud", "--degree", "2"]) == 2
    assert "below the characteristic" in capsys.readouterr().err
    assert main(["envelope", path, "ul", "--degree", "1"]) == 2


def test_envelope_ud_matches_library(tmp_path, capsys):
    path = write(tmp_path, "l2.alg", l2(2))
    assert main(["envelope", path, "ud", "--degree", "2",
                 "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    table = doc["tables"]["envelope"]
    pres = ud_p(l2(2), d=2)
    assert table["dimension"] == pres.dimension
    assert table["ambient_dim"] == pres.ambient.dim
    assert table["ideal_rank"] == pres.ideal_rank


def test_envelope_ul_abelian_engine_dimension(tmp_path, capsys):
    path = write(tmp_path, "ab.alg", abelian(2, 1, with_pmap=True))
    assert main(["envelope", path, "ul", "--degree", "3",
                 "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    table = doc["tables"]["envelope"]
    assert table["ambient_dim"] == 15
    assert table["ideal_rank"] == 11
    assert table["dimension"] == 4
    assert table["normal_basis"] == ["()", "(0,)", "(1,)", "(1, 0)"]
    assert table["degree_table"] == {"0": 1, "1": 2, "2": 1}


def test_envelope_default_degree_is_p(tmp_path, capsys):
    path = write(tmp_path, "l2.alg", l2(2))
    assert main(["envelope", path, "ul"]) == 0
    assert "envelope ul d=2" in capsys.readouterr().out


def test_envelope_size_bound_exit2(tmp_path, capsys):
    path = write(tmp_path, "l2.alg", l2(2))
    assert main(["envelope", path, "ul", "--degree", "12"]) == 2
    assert "exceed" in capsys.readouterr().err


# ---------------------------------------------------------- determinism


def _json_bytes(argv, capsys) -> str:
    code = main(argv)
    assert code == 0
    return capsys.readouterr().out


def test_reports_are_byte_deterministic(tmp_path, capsys):
    l2p = write(tmp_path, "l2.alg", l2(3))
    abp = write(tmp_path, "ab.alg", abelian(3, 2, with_pmap=True))
    argvs = [
        ["check", l2p, "leibniz", "restricted-leibniz",
         "--format", "json", "--seed", "7"],
        ["check", abp, "restricted-lie", "--format", "json", "--seed", "3"],
        ["envelope", l2p, "ul", "--degree", "3", "--format", "json"],
        ["envelope", l2p, "ud", "--degree", "3", "--format", "json"],
    ]
    for argv in argvs:
        assert _json_bytes(argv, capsys) == _json_bytes(argv, capsys)


def test_derived_files_are_byte_deterministic(tmp_path, capsys):
    src = write(tmp_path, "poly.alg", truncated_poly(3, 2))
    out1, out2 = tmp_path / "a.alg", tmp_path / "b.alg"
    assert main(["derive", "dleib", src, "--out", str(out1)]) == 0
    assert main(["derive", "dleib", src, "--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()


def test_timing_flag_adds_wall_ms_only_when_asked(tmp_path, capsys):
    path = write(tmp_path, "l2.alg", l2(2))
    main(["check", path, "leibniz", "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert "wall_ms" not in doc
    main(["check", path, "leibniz", "--format", "json", "--timing"])
    doc = json.loads(capsys.readouterr().out)
    assert isinstance(doc["wall_ms"], float)
    main(["check", path, "leibniz", "--timing"])
    assert "wall_ms" in capsys.readouterr().out


def test_json_report_shape(tmp_path, capsys):
    path = write(tmp_path, "l2.alg", l2(2))
    main(["check", path, "leibniz", "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["tool"] == "rlk"
    assert doc["command"] == "check leibniz"
    assert doc["status"] == "pass"
    assert doc["inputs"][0]["path"] == path
    assert len(doc["inputs"][0]["sha256"]) == 64
    assert doc["checks"][0]["identity"] == "leibniz"


# ------------------------------------------------------------- process


def test_module_entry_point(tmp_path):
    path = write(tmp_path, "l2.alg", l2(2))
    run = subprocess.run(
        [sys.executable, "-m", "rlk", "check", path, "leibniz"],
        capture_output=True, text=True,
    )
    assert run.returncode == 0
    assert "result: pass" in run.stdout
    run = subprocess.run([sys.executable, "-m", "rlk", "--version"],
                         capture_output=True, text=True)
    assert run.returncode == 0
    assert run.stdout.strip() == "rlk 0.1.0"
