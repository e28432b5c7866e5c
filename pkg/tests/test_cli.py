import subprocess
import sys
from fractions import Fraction

import pytest

from turan3 import certificate, families, graphs
from turan3.cli import main
from turan3.sdp import assemble, lp_certificate


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def rows(out):
    table = {}
    for line in out.strip().splitlines():
        if "\t" in line:
            key, _, value = line.partition("\t")
            table[key] = value
    return table


# ---------------------------------------------------------------------------


def test_enumerate_output_round_trips(capsys):
    code, out, _ = run(capsys, "enumerate", "--m", "5", "--forbid", "C4_3,F5_BAR")
    assert code == 0
    blocks = out.strip().split("graph ")[1:]
    assert out.strip().endswith("count 22")
    keys = set()
    for block in blocks:
        lines = block.splitlines()
        body = "\n".join(lines[1:])
        body = body.rsplit("count", 1)[0]
        g = graphs.parse_graph_text(body)
        keys.add(g.canon_key)
    assert len(keys) == 22


def test_enumerate_guard_is_domain_error(capsys):
    code, _, err = run(capsys, "enumerate", "--m", "9")
    assert code == 1
    assert "soft limit" in err


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["enumerate"])  # missing required --m
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nope"])
    assert exc.value.code == 2


def test_construct_report_brec(capsys):
    code, out, _ = run(capsys, "construct", "--kind", "brec", "--n", "1000", "--report")
    assert code == 0
    table = rows(out)
    assert table["edges"] == "77216298"
    assert abs(float(table["density_decimal"][:12]) - 0.4641) < 0.01
    assert table["limit_density"].startswith("0.4641016151377545870548926830117447338856105076")
    assert table["splits"].startswith("634,")


def test_construct_check_free(capsys, tmp_path):
    out_path = tmp_path / "g.txt"
    code, out, _ = run(
        capsys,
        "construct", "--kind", "brec", "--n", "12",
        "--emit", str(out_path),
        "--check-free", "C4_3,F5_BAR",
    )
    assert code == 0
    table = rows(out)
    assert table["family_free"] == "yes"
    g = graphs.load_graph(str(out_path))
    assert g.n == 12


def test_construct_partite_report(capsys):
    code, out, _ = run(
        capsys, "construct", "--kind", "partite3", "--parts", "10,10,10", "--report"
    )
    table = rows(out)
    assert code == 0
    assert table["edges"] == "1000"
    assert table["limit_density"] == "2/9"


def test_density_subcommand(capsys, tmp_path):
    path = tmp_path / "h.txt"
    graphs.save_graph(graphs.named_graph("K4_3"), str(path))
    sub_path = tmp_path / "edge3.txt"
    graphs.save_graph(graphs.from_edges(3, [(0, 1, 2)]), str(sub_path))
    code, out, _ = run(
        capsys, "density", "--graph", str(path), "--edge-density", "--sub", str(sub_path)
    )
    assert code == 0
    table = rows(out)
    assert table["edge_density"] == "1"
    assert table[f"p {sub_path}"] == "1"
    code, _, err = run(capsys, "density", "--graph", str(path))
    assert code == 1 and "nothing to do" in err
    # oversized pattern is a domain error
    code, _, err = run(capsys, "density", "--graph", str(path), "--sub", "F5")
    assert code == 1 and "cannot fit" in err


def test_density_unknown_name_is_domain_error(capsys):
    code, _, err = run(capsys, "density", "--graph", "NOT_A_NAME", "--edge-density")
    assert code == 1


def test_emit_sdp_and_round_and_verify(capsys, tmp_path):
    model_path = tmp_path / "m.sdp"
    code, out, _ = run(
        capsys, "emit-sdp", "--m", "4", "--forbid", "C4_3",
        "--types", "none", "--out", str(model_path),
    )
    assert code == 0
    assert rows(out)["lp_bound"] == "3/4"

    # hand-written solver output matching the LP optimum
    model = assemble(4, families.parse_family("C4_3"))
    floats = [0.75] + [float(Fraction(3, 4) - o) for o in model.obj]
    sol_path = tmp_path / "sol.txt"
    sol_path.write_text(" ".join(str(x) for x in floats) + "\n")
    cert_path = tmp_path / "cert.txt"
    code, out, _ = run(
        capsys, "round", "--model", str(model_path), "--solution", str(sol_path),
        "--den-bound", "65536", "--out", str(cert_path),
    )
    assert code == 0
    assert rows(out)["bound"] == "3/4"

    code, out, _ = run(capsys, "verify", "--cert", str(cert_path))
    assert code == 0
    assert out.splitlines()[0] == "VERIFIED bound=3/4"


def test_verify_rejects_bad_certificate(capsys, tmp_path):
    cert = lp_certificate(4, families.parse_family("C4_3"))
    bad = certificate.Certificate(
        bound=Fraction(7, 10),
        family_key=cert.family_key,
        m=4,
        blocks=(),
        slacks=cert.slacks,
    )
    path = tmp_path / "bad.txt"
    certificate.save_certificate(bad, str(path))
    code, out, _ = run(capsys, "verify", "--cert", str(path))
    assert code == 1
    assert out.startswith("REJECTED")


def test_partition_subcommand_given_v1(capsys, tmp_path):
    path = tmp_path / "h.txt"
    graphs.save_graph(graphs.named_graph("K4_3"), str(path))
    code, out, _ = run(
        capsys, "partition", "--graph", str(path), "--v1", "0,1", "--xi", "0"
    )
    assert code == 0
    table = rows(out)
    assert table["bad"] == "2"
    assert table["missing"] == "0"
    assert table["cross_present"] == "2"
    assert table["edge_bound_holds"] == "no"


def test_partition_search_deterministic(capsys, tmp_path):
    path = tmp_path / "h.txt"
    from turan3.constructions import SemiBipartite, build

    graphs.save_graph(build(SemiBipartite(6, 3)), str(path))
    outs = []
    for _ in range(2):
        code, out, _ = run(
            capsys, "partition", "--graph", str(path), "--restarts", "8", "--seed", "3"
        )
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    table = rows(outs[0])
    assert table["locally_maximal"] == "yes"
    assert table["cross_present"] == "45"  # C(6,2)*3


def test_config_file_and_flag_override(capsys, tmp_path):
    cfg = tmp_path / "cfg"
    cfg.write_text("forbid = C4_3  # file default\n")
    code, out, _ = run(capsys, "enumerate", "--m", "4", "--config", str(cfg))
    assert code == 0 and out.strip().endswith("count 4")
    # an explicit flag overrides the file value (all 5 classes reappear)
    code, out, _ = run(
        capsys, "enumerate", "--m", "4", "--config", str(cfg), "--forbid", "F5"
    )
    assert code == 0 and out.strip().endswith("count 5")
    bad = tmp_path / "bad"
    bad.write_text("nonsense_key = 1\n")
    code, _, err = run(capsys, "enumerate", "--m", "4", "--config", str(bad))
    assert code == 1 and "unknown config key" in err


def test_human_mode(capsys):
    code, out, _ = run(
        capsys, "construct", "--kind", "partite3", "--parts", "2,2,2",
        "--report", "--human",
    )
    assert code == 0
    assert "edges: 8" in out


def test_jobs_flag_matches_sequential(capsys, tmp_path):
    path = tmp_path / "h.txt"
    from turan3.constructions import optimal_brec, build

    graphs.save_graph(build(optimal_brec(10)), str(path))
    results = []
    for jobs in ("1", "2"):
        code, out, _ = run(
            capsys, "partition", "--graph", str(path),
            "--restarts", "6", "--seed", "1", "--jobs", jobs,
        )
        assert code == 0
        results.append(out)
    assert results[0] == results[1]


def test_installed_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "turan3.cli", "density", "--graph", "F5", "--edge-density"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "edge_density\t3/10"
